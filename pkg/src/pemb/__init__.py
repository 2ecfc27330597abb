"""Exact-arithmetic models of complements of embeddings.

Graded-commutative differential graded algebras and modules over Q or
F_p, with mapping-cone constructions and the model pipelines built on
top of them.  Everything is computed with exact field arithmetic.
"""

from .fields import FieldError, PrimeField, QQ, RationalField

__all__ = ["FieldError", "PrimeField", "QQ", "RationalField"]

__version__ = "0.1.0"
