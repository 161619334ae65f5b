"""The four classical two-sample tests: Gehan, Cox-Mantel, log-rank, Peto-Peto.

Each test returns a :class:`TestOutcome` with the raw statistic, its null
moments, the standardized value (z, or the chi-square value for the log-rank
test), and a p-value.  All statistics are oriented so that swapping the two
groups negates z (and leaves the log-rank chi-square unchanged).

The `_*_arrays` functions carry the actual arithmetic on plain numpy arrays;
the public functions wrap them for :class:`TwoSampleDataset` inputs.  The
Monte Carlo engine reuses the array forms directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2, norm

from .core import TwoSampleDataset, _km_from_arrays
from .errors import (
    DegenerateExpectationError,
    DegenerateVarianceError,
    NoEventsError,
)

__all__ = [
    "TestOutcome",
    "RiskTable",
    "build_risk_table",
    "gehan_ranks",
    "peto_scores",
    "gehan_test",
    "cox_mantel_test",
    "logrank_test",
    "peto_peto_test",
]

METHODS = ("gehan", "cox_mantel", "logrank", "peto_peto", "proposed")


@dataclass(frozen=True)
class TestOutcome:
    """Result of one two-sample test.

    `standardized` is a z value for the normal-reference tests and the
    chi-square value for the log-rank test.  p-values are two-sided for
    z tests and the upper chi-square(1) tail for the log-rank test.
    """

    method: str
    statistic: float
    null_expectation: float
    null_variance: float
    standardized: float
    p_value: float
    notes: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "statistic": self.statistic,
            "null_expectation": self.null_expectation,
            "null_variance": self.null_variance,
            "standardized": self.standardized,
            "p_value": self.p_value,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class RiskTable:
    """Per distinct pooled event time: total events and group-wise at-risk counts."""

    times: np.ndarray
    d: np.ndarray
    n1: np.ndarray
    n2: np.ndarray

    def __post_init__(self):
        for name in ("times", "d", "n1", "n2"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.times)


def two_sided_normal_p(z: float) -> float:
    return float(2.0 * norm.sf(abs(z)))


def chi2_upper_p(x2: float) -> float:
    return float(chi2.sf(x2, 1))


def _risk_table_arrays(t1, e1, t2, e2):
    pooled_t = np.concatenate([t1, t2])
    pooled_e = np.concatenate([e1, e2])
    if not pooled_e.any():
        raise NoEventsError("pooled sample contains no events")
    times = np.unique(pooled_t[pooled_e])
    ev_sorted = np.sort(pooled_t[pooled_e])
    d = (
        np.searchsorted(ev_sorted, times, side="right")
        - np.searchsorted(ev_sorted, times, side="left")
    )
    s1 = np.sort(t1)
    s2 = np.sort(t2)
    n1t = len(t1) - np.searchsorted(s1, times, side="left")
    n2t = len(t2) - np.searchsorted(s2, times, side="left")
    return times, d.astype(np.int64), n1t.astype(np.int64), n2t.astype(np.int64)


def build_risk_table(ds: TwoSampleDataset) -> RiskTable:
    """One row per distinct pooled event time.  A subject censored at exactly
    t is counted at risk at t (events are processed before censorings)."""
    t1, e1, t2, e2 = ds.arrays()
    times, d, n1t, n2t = _risk_table_arrays(t1, e1, t2, e2)
    return RiskTable(times, d, n1t, n2t)


def gehan_ranks(times: np.ndarray, events: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per pooled observation: R1 = 1 + number of observations it is
    definitely greater than, R2 = 1 + number definitely greater than it."""
    n = len(times)
    sorted_all = np.sort(times)
    ev_sorted = np.sort(times[events])
    cen_sorted = np.sort(times[~events])

    ev_before = np.searchsorted(ev_sorted, times, side="left")
    ev_at = np.searchsorted(ev_sorted, times, side="right") - ev_before
    later = n - np.searchsorted(sorted_all, times, side="right")
    cen_at = (
        np.searchsorted(cen_sorted, times, side="right")
        - np.searchsorted(cen_sorted, times, side="left")
    )

    r1 = 1 + ev_before + np.where(events, 0, ev_at)
    r2 = np.where(events, 1 + later + cen_at, 1)
    return r1.astype(np.int64), r2.astype(np.int64)


def peto_scores(times: np.ndarray, events: np.ndarray) -> np.ndarray:
    """Kaplan-Meier scores on the pooled sample: S(t-) + S(t) - 1 for an
    event at t, S(t) - 1 for a censoring at t (right-continuous value)."""
    curve = _km_from_arrays(times, events)
    idx_right = np.searchsorted(curve.times, times, side="right")
    idx_left = np.searchsorted(curve.times, times, side="left")
    surv_with_one = np.concatenate([[1.0], curve.survival])
    s_right = surv_with_one[idx_right]
    s_left = surv_with_one[idx_left]
    return np.where(events, s_left + s_right - 1.0, s_right - 1.0)


def _gehan_statistic_pairwise(t1, e1, t2, e2) -> float:
    """Sum of pairwise scores over the n1 x n2 cross pairs (+1 when the
    group-1 observation is definitely greater)."""
    a = t1[:, None]
    b = t2[None, :]
    ea = e1[:, None]
    eb = e2[None, :]
    plus = ((a > b) & eb) | ((a == b) & ~ea & eb)
    minus = ((a < b) & ea) | ((a == b) & ea & ~eb)
    return float(plus.sum()) - float(minus.sum())


def _gehan_arrays(t1, e1, t2, e2):
    n1, n2 = len(t1), len(t2)
    n = n1 + n2
    stat = _gehan_statistic_pairwise(t1, e1, t2, e2)
    pooled_t = np.concatenate([t1, t2])
    pooled_e = np.concatenate([e1, e2])
    r1, r2 = gehan_ranks(pooled_t, pooled_e)
    diff = (r1 - r2).astype(np.float64)
    variance = n1 * n2 / (n * (n - 1.0)) * float(diff @ diff)
    return stat, variance


def gehan_test(ds: TwoSampleDataset) -> TestOutcome:
    """Gehan's generalized Wilcoxon test (normal reference)."""
    t1, e1, t2, e2 = ds.arrays()
    stat, variance = _gehan_arrays(t1, e1, t2, e2)
    if variance <= 0.0:
        raise DegenerateVarianceError(
            "Gehan variance is zero: every cross-group comparison is indeterminate"
        )
    z = stat / np.sqrt(variance)
    return TestOutcome("gehan", stat, 0.0, variance, float(z), two_sided_normal_p(z))


def _cox_mantel_arrays(t1, e1, t2, e2):
    times, d, n1t, n2t = _risk_table_arrays(t1, e1, t2, e2)
    r = n1t + n2t
    p = n2t / r
    f2 = int(e2.sum())
    stat = f2 - float(d @ p)
    # rows with a single subject at risk contribute nothing (r - d is 0 there)
    safe = np.where(r > 1, r - 1.0, 1.0)
    variance = float(np.sum(d * (r - d) / safe * p * (1.0 - p)))
    return stat, variance


def cox_mantel_test(ds: TwoSampleDataset) -> TestOutcome:
    """Cox-Mantel test: group-2 events versus their risk-set expectation."""
    t1, e1, t2, e2 = ds.arrays()
    stat, variance = _cox_mantel_arrays(t1, e1, t2, e2)
    if variance <= 0.0:
        raise DegenerateVarianceError("Cox-Mantel variance is zero")
    z = stat / np.sqrt(variance)
    return TestOutcome("cox_mantel", stat, 0.0, variance, float(z), two_sided_normal_p(z))


def _logrank_arrays(t1, e1, t2, e2):
    times, d, n1t, n2t = _risk_table_arrays(t1, e1, t2, e2)
    r = n1t + n2t
    e1_exp = float(np.sum(n1t * d / r))
    e2_exp = float(np.sum(n2t * d / r))
    o1 = int(e1.sum())
    o2 = int(e2.sum())
    safe = np.where(r > 1, r - 1.0, 1.0)
    hyper_var = float(np.sum(n1t * n2t * d * (r - d) / (r * r * safe)))
    return o1, o2, e1_exp, e2_exp, hyper_var


def logrank_test(ds: TwoSampleDataset) -> TestOutcome:
    """Log-rank test in its observed-versus-expected chi-square form.

    `statistic` is O1 - E1 (so a group swap flips its sign), `standardized`
    the chi-square value, and `null_variance` the hypergeometric variance of
    O1 - E1.
    """
    t1, e1, t2, e2 = ds.arrays()
    o1, o2, exp1, exp2, hyper_var = _logrank_arrays(t1, e1, t2, e2)
    if exp1 <= 0.0 or exp2 <= 0.0:
        raise DegenerateExpectationError(
            f"log-rank expected counts must be positive, got E1={exp1}, E2={exp2}"
        )
    x2 = (o1 - exp1) ** 2 / exp1 + (o2 - exp2) ** 2 / exp2
    return TestOutcome("logrank", o1 - exp1, 0.0, hyper_var, float(x2), chi2_upper_p(x2))


def _peto_arrays(t1, e1, t2, e2):
    n1, n2 = len(t1), len(t2)
    n = n1 + n2
    pooled_t = np.concatenate([t1, t2])
    pooled_e = np.concatenate([e1, e2])
    mu = peto_scores(pooled_t, pooled_e)
    stat = float(mu[:n1].sum())
    variance = n1 * n2 / (n * (n - 1.0)) * float(mu @ mu)
    return stat, variance


def peto_peto_test(ds: TwoSampleDataset) -> TestOutcome:
    """Peto-Peto generalized Wilcoxon test with pooled Kaplan-Meier scores."""
    t1, e1, t2, e2 = ds.arrays()
    stat, variance = _peto_arrays(t1, e1, t2, e2)
    if variance <= 0.0:
        raise DegenerateVarianceError(
            "Peto-Peto variance is zero: all pooled scores vanish (no events)"
        )
    z = stat / np.sqrt(variance)
    return TestOutcome("peto_peto", stat, 0.0, variance, float(z), two_sided_normal_p(z))
