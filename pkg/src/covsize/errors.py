"""Exceptions raised by covsize."""

from __future__ import annotations


class CovsizeError(Exception):
    """Base class for all covsize errors."""


class DomainError(CovsizeError, ValueError):
    """A parameter is outside its valid domain, or a reduction's hypotheses fail.

    Examples: theta outside the family's parameter space, an empty interval
    (a >= b), a relative margin outside (0, 1), or a mixed criterion whose
    crossover point eps_abs/eps_rel does not lie inside (a, b).
    """
