"""Coverage probabilities Pr{ estimate within margin of theta }.

The estimate of theta is theta_hat = Y_n / n (unbiased) or its clamp to the
interval [a, b] (range preserving).  A criterion fixes the margin: Absolute
uses |est - theta| < eps, Relative uses |est - theta| < eps * theta, Mixed
accepts when either margin is met, which at each theta is just the wider of
the two (they swap roles at theta = eps_abs / eps_rel).

Because Y_n is integer valued, each event {margin met} is a window of Y_n
values with closed-form endpoints.  The smallest integer strictly above x is
floor(x) + 1 and the largest strictly below is ceil(x) - 1, which gives the
window formulas below; everything is evaluated in exact rational arithmetic
before any probability is touched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ._exact import exact
from .errors import DomainError
from .families import DistributionFamily, _check_n, prob_range, resolve_family


# ---------------------------------------------------------------------------
# criteria

@dataclass(frozen=True)
class Absolute:
    """Margin |estimate - theta| < eps."""

    eps: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", exact(self.eps, name="eps"))
        if self.eps <= 0:
            raise DomainError(f"absolute margin must be positive, got {self.eps}")


@dataclass(frozen=True)
class Relative:
    """Margin |estimate - theta| < eps * theta; needs 0 < eps < 1 and theta > 0."""

    eps: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", exact(self.eps, name="eps"))
        if not (0 < self.eps < 1):
            raise DomainError(f"relative margin must lie in (0, 1), got {self.eps}")


@dataclass(frozen=True)
class Mixed:
    """Accept when the absolute or the relative margin is met.

    Pointwise this is a single margin of width max(eps_abs, eps_rel * theta):
    the absolute one up to the crossover theta = eps_abs / eps_rel, the
    relative one beyond it.
    """

    eps_abs: Fraction
    eps_rel: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps_abs", exact(self.eps_abs, name="eps_abs"))
        object.__setattr__(self, "eps_rel", exact(self.eps_rel, name="eps_rel"))
        if self.eps_abs <= 0:
            raise DomainError(f"absolute margin must be positive, got {self.eps_abs}")
        if not (0 < self.eps_rel < 1):
            raise DomainError(f"relative margin must lie in (0, 1), got {self.eps_rel}")

    @property
    def crossover(self) -> Fraction:
        return self.eps_abs / self.eps_rel


ErrorCriterion = Union[Absolute, Relative, Mixed]


# ---------------------------------------------------------------------------
# estimators

@dataclass(frozen=True)
class Unbiased:
    """Plain estimator Y_n / n."""


@dataclass(frozen=True)
class RangePreserving:
    """Estimator clamped to [lower, upper], the interval theta is known to lie in."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", exact(self.lower, name="lower"))
        object.__setattr__(self, "upper", exact(self.upper, name="upper"))
        if not self.lower < self.upper:
            raise DomainError(
                f"range-preserving bounds must satisfy lower < upper, "
                f"got [{self.lower}, {self.upper}]"
            )


EstimatorKind = Union[Unbiased, RangePreserving]

UNBIASED = Unbiased()


# ---------------------------------------------------------------------------
# integer window bounds

def bounds_abs(n: int, eps: Fraction, theta: Fraction) -> tuple[int, int]:
    """Window [g, h] of Y_n values with |Y_n/n - theta| < eps (exact)."""
    g = math.floor(n * (theta - eps)) + 1
    h = math.ceil(n * (theta + eps)) - 1
    return g, h


def bounds_rel(n: int, eps: Fraction, theta: Fraction) -> tuple[int, int]:
    """Window [g, h] of Y_n values with |Y_n/n - theta| < eps * theta (exact)."""
    if theta <= 0:
        raise DomainError(f"relative bounds need theta > 0, got {theta}")
    g = math.floor(n * theta * (1 - eps)) + 1
    h = math.ceil(n * theta * (1 + eps)) - 1
    return g, h


# ---------------------------------------------------------------------------
# coverage

def _two_sided(fam: DistributionFamily, n: int, g: int, h: int, theta: Fraction) -> float:
    return prob_range(fam, n, g, h, theta)


def _lower_tail(fam: DistributionFamily, n: int, h: int, theta: Fraction) -> float:
    kmin, _ = fam.support_bound(n)
    return prob_range(fam, n, kmin, h, theta)


def _upper_tail(fam: DistributionFamily, n: int, g: int, theta: Fraction) -> float:
    return prob_range(fam, n, g, None, theta)


def _unbiased_window(criterion: ErrorCriterion, n: int, theta: Fraction) -> tuple[int, int]:
    match criterion:
        case Absolute(eps=eps):
            return bounds_abs(n, eps, theta)
        case Relative(eps=eps):
            return bounds_rel(n, eps, theta)
        case Mixed():
            # union of nested windows = the wider one at this theta
            if theta <= criterion.crossover:
                return bounds_abs(n, criterion.eps_abs, theta)
            return bounds_rel(n, criterion.eps_rel, theta)
    raise DomainError(f"unknown criterion {criterion!r}")


def _rp_window(
    n: int,
    criterion: ErrorCriterion,
    est: RangePreserving,
    theta: Fraction,
) -> tuple[Optional[int], Optional[int]]:
    a, b = est.lower, est.upper
    if not a <= theta <= b:
        raise DomainError(
            f"theta={theta} outside the range-preserving interval [{a}, {b}]"
        )
    match criterion:
        case Absolute(eps=eps):
            lower_active = theta - eps >= a
            upper_active = theta + eps <= b
        case Relative(eps=eps):
            if theta <= 0:
                raise DomainError(f"relative coverage needs theta > 0, got {theta}")
            lower_active = theta * (1 - eps) >= a
            upper_active = theta * (1 + eps) <= b
        case Mixed():
            if theta <= criterion.crossover:
                return _rp_window(n, Absolute(criterion.eps_abs), est, theta)
            return _rp_window(n, Relative(criterion.eps_rel), est, theta)
        case _:
            raise DomainError(f"unknown criterion {criterion!r}")
    # the clamped estimate misses low only when theta - margin >= a (so the
    # clamp at a is itself a miss), and misses high only when theta + margin
    # <= b; an inactive side contributes certainty
    if not lower_active and not upper_active:
        return None, None
    g, h = _unbiased_window(criterion, n, theta)
    if lower_active and upper_active:
        return g, h
    if upper_active:
        return None, h
    return g, None


def acceptance_window(
    n: int,
    criterion: ErrorCriterion,
    estimator: EstimatorKind,
    theta: Fraction,
) -> tuple[Optional[int], Optional[int]]:
    """Integer window of Y_n values whose estimate meets the margin at theta.

    Returns (lo, hi).  None on a side means the window runs through that end
    of the support: a clamped side that cannot miss.  (None, None) means
    every outcome is accepted.  The window is purely arithmetic, so it needs
    no distribution family.
    """
    _check_n(n)
    theta = exact(theta, name="theta")
    match estimator:
        case Unbiased():
            return _unbiased_window(criterion, n, theta)
        case RangePreserving():
            return _rp_window(n, criterion, estimator, theta)
    raise DomainError(f"unknown estimator {estimator!r}")


def coverage(
    family: DistributionFamily | str,
    n: int,
    criterion: ErrorCriterion,
    estimator: EstimatorKind,
    theta: Fraction,
) -> float:
    """Pr{ the estimate lands within the criterion's margin of theta }.

    Uses the closed-form integer windows; the miss inequalities are strict on
    the coverage side, so lattice hits count as misses.
    """
    fam = resolve_family(family)
    theta = fam.require_theta(theta)
    lo, hi = acceptance_window(n, criterion, estimator, theta)
    if lo is None and hi is None:
        return 1.0
    if lo is None:
        return _lower_tail(fam, n, hi, theta)
    if hi is None:
        return _upper_tail(fam, n, lo, theta)
    return _two_sided(fam, n, lo, hi, theta)
