"""Exact-arithmetic toolkit for Maschke-type feasibility questions.

Structure-constant presentations of weak Hopf algebras, Hopf algebroids over
a central commutative base and Hopf categories, together with exact linear
feasibility solvers for their normalized (co)integrals and (co)separability
structures, and validators certifying the equivalences between them.
"""

__version__ = "0.1.0"
