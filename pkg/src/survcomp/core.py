"""Data model, pooled-ordering comparator, and the Kaplan-Meier estimator.

Everything here is immutable after construction and every function is pure,
so all of it can be used concurrently without synchronization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Observation",
    "TwoSampleDataset",
    "KMCurve",
    "km_fit",
    "km_eval",
    "definitely_greater",
]


@dataclass(frozen=True, slots=True)
class Observation:
    """One subject: observed time and whether the event was seen (True) or
    the subject was right-censored (False)."""

    time: float
    event: bool

    def __post_init__(self):
        t = float(self.time)
        if not math.isfinite(t) or t < 0.0:
            raise InvalidInputError(
                f"observation time must be finite and >= 0, got {self.time!r}"
            )
        object.__setattr__(self, "time", t)
        object.__setattr__(self, "event", bool(self.event))


def definitely_greater(a: Observation, b: Observation) -> int:
    """Tri-state comparison of two right-censored observations.

    Returns +1 when `a` is known to outlive `b`, -1 when `b` is known to
    outlive `a`, and 0 when censoring leaves the order unknown.  A censored
    observation tied with an event counts as greater: its true time is known
    to exceed the shared value.
    """
    if a.time > b.time:
        return 1 if b.event else 0
    if a.time < b.time:
        return -1 if a.event else 0
    if a.event == b.event:
        return 0
    return 1 if b.event else -1


@dataclass(frozen=True)
class TwoSampleDataset:
    """Two labeled groups of observations; the input to every test."""

    group1: tuple[Observation, ...]
    group2: tuple[Observation, ...]

    def __post_init__(self):
        g1 = tuple(self.group1)
        g2 = tuple(self.group2)
        if not g1 or not g2:
            raise InvalidInputError("both groups must contain at least one observation")
        object.__setattr__(self, "group1", g1)
        object.__setattr__(self, "group2", g2)

    @classmethod
    def from_arrays(cls, times1, events1, times2, events2) -> "TwoSampleDataset":
        g1 = tuple(Observation(float(t), bool(e)) for t, e in zip(times1, events1, strict=True))
        g2 = tuple(Observation(float(t), bool(e)) for t, e in zip(times2, events2, strict=True))
        return cls(g1, g2)

    @property
    def n1(self) -> int:
        return len(self.group1)

    @property
    def n2(self) -> int:
        return len(self.group2)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(times1, events1, times2, events2) as numpy arrays."""
        t1 = np.array([o.time for o in self.group1], dtype=np.float64)
        e1 = np.array([o.event for o in self.group1], dtype=np.bool_)
        t2 = np.array([o.time for o in self.group2], dtype=np.float64)
        e2 = np.array([o.event for o in self.group2], dtype=np.bool_)
        return t1, e1, t2, e2

    def swapped(self) -> "TwoSampleDataset":
        return TwoSampleDataset(self.group2, self.group1)


@dataclass(frozen=True)
class KMCurve:
    """Product-limit estimate: right-continuous step function starting at 1.

    Arrays are aligned per step (distinct event time): `times` strictly
    increasing, `at_risk` strictly decreasing, `events` >= 1, and `survival`
    holding the value just after each step.
    """

    times: np.ndarray
    at_risk: np.ndarray
    events: np.ndarray
    survival: np.ndarray

    def __post_init__(self):
        for name in ("times", "at_risk", "events", "survival"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.times)


def km_fit(observations: Iterable[Observation]) -> KMCurve:
    """Fit the pooled Kaplan-Meier curve.

    Censored observations shrink future risk sets but create no step.  At a
    tied time, events are processed before censorings, so a subject censored
    at t is still at risk for the step at t.
    """
    obs = list(observations)
    if not obs:
        raise InvalidInputError("km_fit requires at least one observation")
    times = np.array([o.time for o in obs], dtype=np.float64)
    events = np.array([o.event for o in obs], dtype=np.bool_)
    return _km_from_arrays(times, events)


def _km_from_arrays(times: np.ndarray, events: np.ndarray) -> KMCurve:
    n = times.shape[0]
    sorted_times = np.sort(times)
    step_times = np.unique(times[events])
    at_risk = n - np.searchsorted(sorted_times, step_times, side="left")
    ev_sorted = np.sort(times[events])
    d = (
        np.searchsorted(ev_sorted, step_times, side="right")
        - np.searchsorted(ev_sorted, step_times, side="left")
    )
    survival = np.cumprod(1.0 - d / at_risk)
    return KMCurve(step_times, at_risk.astype(np.int64), d.astype(np.int64), survival)


def km_eval(curve: KMCurve, t: float, side: str = "right") -> float:
    """Evaluate the curve at `t`: the right-continuous value S(t), or the
    left limit S(t-) (the value just before any step at exactly t)."""
    if side not in ("left", "right"):
        raise InvalidInputError(f"side must be 'left' or 'right', got {side!r}")
    idx = np.searchsorted(curve.times, t, side="right" if side == "right" else "left")
    if idx == 0:
        return 1.0
    return float(curve.survival[idx - 1])
