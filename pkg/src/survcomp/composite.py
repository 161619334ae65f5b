"""Composite Mann-Whitney test on the uncensored/censored partition.

The data are split by event indicator into two subsamples.  Each subsample
contributes a cross-group Mann-Whitney count (ties scored 1/2), and the two
counts are summed.  Under the null with non-informative censoring the parts
are independent, so the null mean and variance are the sums of the classical
Mann-Whitney moments of the two subsamples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TwoSampleDataset
from .errors import DegenerateVarianceError
from .ranktests import TestOutcome, two_sided_normal_p

__all__ = [
    "CensoringPartition",
    "CompositeMoments",
    "partition",
    "mann_whitney_u",
    "composite_null_moments",
    "proposed_test",
]

SMALL_SAMPLE_NOTE = "min(n1, n2) < 10: the normal reference is unreliable at this size"


@dataclass(frozen=True)
class CensoringPartition:
    """Observed times split by group and by event indicator."""

    group1_uncensored: np.ndarray
    group2_uncensored: np.ndarray
    group1_censored: np.ndarray
    group2_censored: np.ndarray

    def __post_init__(self):
        for name in (
            "group1_uncensored",
            "group2_uncensored",
            "group1_censored",
            "group2_censored",
        ):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n1u(self) -> int:
        return len(self.group1_uncensored)

    @property
    def n2u(self) -> int:
        return len(self.group2_uncensored)

    @property
    def n1c(self) -> int:
        return len(self.group1_censored)

    @property
    def n2c(self) -> int:
        return len(self.group2_censored)

    @property
    def n_uncensored(self) -> int:
        return self.n1u + self.n2u

    @property
    def n_censored(self) -> int:
        return self.n1c + self.n2c


@dataclass(frozen=True)
class CompositeMoments:
    expectation: float
    variance: float


def partition(ds: TwoSampleDataset) -> CensoringPartition:
    """Stable split of each group into uncensored and censored times."""
    t1, e1, t2, e2 = ds.arrays()
    return CensoringPartition(t1[e1], t2[e2], t1[~e1], t2[~e2])


def mann_whitney_u(xs, ys) -> float:
    """Count of (x, y) pairs with x > y, ties counted 1/2.

    Either side may be empty, in which case the count is 0.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size == 0 or ys.size == 0:
        return 0.0
    ys_sorted = np.sort(ys)
    lo = np.searchsorted(ys_sorted, xs, side="left")
    hi = np.searchsorted(ys_sorted, xs, side="right")
    return float(np.sum(lo + 0.5 * (hi - lo)))


def composite_null_moments(p: CensoringPartition) -> CompositeMoments:
    """Closed-form null moments; a subsample with an empty side contributes
    zero to both.  Products are formed in integer arithmetic."""
    uu = p.n1u * p.n2u
    cc = p.n1c * p.n2c
    expectation = (uu + cc) / 2.0
    variance = (uu * (p.n_uncensored + 1) + cc * (p.n_censored + 1)) / 12.0
    return CompositeMoments(expectation, variance)


def _composite_arrays(t1, e1, t2, e2):
    x1u = t1[e1]
    x2u = t2[e2]
    x1c = t1[~e1]
    x2c = t2[~e2]
    u_u = mann_whitney_u(x1u, x2u)
    u_c = mann_whitney_u(x1c, x2c)
    uu = len(x1u) * len(x2u)
    cc = len(x1c) * len(x2c)
    expectation = (uu + cc) / 2.0
    variance = (uu * (len(x1u) + len(x2u) + 1) + cc * (len(x1c) + len(x2c) + 1)) / 12.0
    return u_u + u_c, expectation, variance


def proposed_test(ds: TwoSampleDataset) -> TestOutcome:
    """Composite Mann-Whitney test over the censoring partition."""
    part = partition(ds)
    u_u = mann_whitney_u(part.group1_uncensored, part.group2_uncensored)
    u_c = mann_whitney_u(part.group1_censored, part.group2_censored)
    moments = composite_null_moments(part)
    if moments.variance <= 0.0:
        raise DegenerateVarianceError(
            "composite variance is zero: no cross-group pairs in either subsample "
            f"(uncensored {part.n1u} vs {part.n2u}, censored {part.n1c} vs {part.n2c})"
        )
    stat = u_u + u_c
    z = (stat - moments.expectation) / np.sqrt(moments.variance)
    notes = (SMALL_SAMPLE_NOTE,) if min(ds.n1, ds.n2) < 10 else ()
    return TestOutcome(
        "proposed",
        stat,
        moments.expectation,
        moments.variance,
        float(z),
        two_sided_normal_p(z),
        notes,
    )
