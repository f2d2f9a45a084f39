"""Worst-case coverage over a parameter interval, via the candidate set."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._exact import exact
from .candidates import CandidateSet, candidate_set_for
from .coverage import ErrorCriterion, EstimatorKind, coverage
from .errors import DomainError
from .families import DistributionFamily, resolve_family

THREADS_ENV = "COVSIZE_THREADS"


def resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be >= 1, got {threads}")
    return threads


@dataclass(frozen=True)
class CoverageReport:
    """Minimum coverage over [a, b] at a fixed n, with all candidate evaluations."""

    n: int
    min_coverage: float
    argmin_theta: Fraction
    evaluations: tuple[tuple[Fraction, float], ...]
    candidate_set: CandidateSet


def min_coverage(
    family: DistributionFamily | str,
    n: int,
    criterion: ErrorCriterion,
    estimator: EstimatorKind,
    a: Fraction,
    b: Fraction,
    *,
    threads: Optional[int] = None,
) -> CoverageReport:
    """Minimize coverage over theta in [a, b] by evaluating the candidate set.

    Ties are broken toward the smallest theta.  Evaluations are returned in
    ascending theta order regardless of the worker count.
    """
    fam = resolve_family(family)
    a = exact(a, name="a")
    b = exact(b, name="b")
    for endpoint, label in ((a, "a"), (b, "b")):
        if not fam.param_space.admits(endpoint):
            raise DomainError(
                f"interval endpoint {label}={endpoint} outside parameter space "
                f"{fam.param_space.describe()} of family '{fam.name}'"
            )
    cset = candidate_set_for(n, criterion, estimator, a, b)
    thetas = cset.thetas
    workers = resolve_threads(threads)

    def eval_one(theta: Fraction) -> float:
        return coverage(fam, n, criterion, estimator, theta)

    if workers > 1 and len(thetas) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(eval_one, thetas))
    else:
        values = [eval_one(t) for t in thetas]

    best = min(values)
    argmin = next(t for t, v in zip(thetas, values) if v == best)
    return CoverageReport(
        n=n,
        min_coverage=best,
        argmin_theta=argmin,
        evaluations=tuple(zip(thetas, values)),
        candidate_set=cset,
    )
