"""Exact arithmetic kernel: polynomials, real roots, number fields, balls, valuations."""

from .ball import Ball, decimal_str
from .numberfield import NFElement, NumberField, field_join, join_fields, minpoly_of
from .padic import abs_at, padic_val, product_formula
from .poly import UniPoly
from .roots import isolate_real_roots, refine_root

__all__ = [
    "Ball", "decimal_str", "NFElement", "NumberField", "field_join", "join_fields",
    "minpoly_of", "abs_at", "padic_val", "product_formula", "UniPoly",
    "isolate_real_roots", "refine_root",
]
