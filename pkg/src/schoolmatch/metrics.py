"""Manipulation-benefit metrics.

All three compare the matching under the altered profile against the
single truthful baseline of the same mechanism and report a percentage of
the sophisticated students, including those whose alteration rule did not
trigger. An empty sophisticated set yields 0 by convention.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import Matching, Profile, SchoolId, StudentId, rank_of
from .strategies import Strategy


@dataclass(frozen=True)
class MetricsRecord:
    """One trial's metrics for one (mechanism, strategy, k) cell."""

    mechanism: str
    strategy: Strategy
    k_sophisticated: int
    em_higher: float
    em_top3: float
    em_selected: float | None
    trial_seed: int


def em_higher(
    baseline: Matching,
    altered: Matching,
    sophisticated: frozenset[StudentId],
    true_prefs: Profile,
) -> float:
    """Percentage of sophisticated students whose true rank improved."""
    if not sophisticated:
        return 0.0
    winners = sum(
        1
        for s in sophisticated
        if rank_of(true_prefs[s], altered.assignment[s])
        < rank_of(true_prefs[s], baseline.assignment[s])
    )
    return 100.0 * winners / len(sophisticated)


def em_top3(
    baseline: Matching,
    altered: Matching,
    sophisticated: frozenset[StudentId],
    true_prefs: Profile,
) -> float:
    """Percentage of sophisticated students who entered their true top 3.

    Counts only students outside their top 3 at baseline.
    """
    if not sophisticated:
        return 0.0
    winners = sum(
        1
        for s in sophisticated
        if rank_of(true_prefs[s], altered.assignment[s]) <= 3
        and rank_of(true_prefs[s], baseline.assignment[s]) > 3
    )
    return 100.0 * winners / len(sophisticated)


def em_selected(
    altered: Matching, sophisticated: frozenset[StudentId], selected: SchoolId
) -> float:
    """Percentage of sophisticated students assigned to the selected school."""
    if not sophisticated:
        return 0.0
    winners = sum(1 for s in sophisticated if altered.assignment[s] == selected)
    return 100.0 * winners / len(sophisticated)
