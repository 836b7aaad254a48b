"""Sophisticated-student sampling and preference list alteration.

Three alteration rules. The first two target the most popular school (the
one most students truly rank first): either demote it one slot or dump it
to the bottom. The third targets the least popular school (the one most
students truly place in the bottom half) and promotes it to rank 1 for
students who truly like it. Popularity targets are computed once from the
full true profile, and all alterations apply simultaneously.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import Instance, PreferenceList, Profile, SchoolId, StudentId


class Strategy(enum.Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class AlterationPlan:
    """Which students misreport, how, and the resulting profile.

    ``reported[i]`` equals the true list for every sincere student i.
    ``selected_school`` is the globally unpopular school, present only for
    Strategy C where it feeds the EM-Selected metric.
    """

    sophisticated: frozenset[StudentId]
    strategy: Strategy
    reported: Profile
    selected_school: SchoolId | None = None


def sample_sophisticated(rng: np.random.Generator, n: int, k: int) -> frozenset[StudentId]:
    """Uniform k-subset of the n students."""
    if not 0 <= k <= n:
        raise ValueError(f"cannot sample {k} sophisticated students out of {n}")
    return frozenset(int(s) for s in rng.choice(n, size=k, replace=False))


def most_popular_rank1(profile: Profile) -> SchoolId:
    """School that most students rank first; ties go to the lowest index."""
    if not profile:
        raise ValueError("profile is empty")
    counts = [0] * len(profile[0])
    for prefs in profile:
        counts[prefs[0]] += 1
    return max(range(len(counts)), key=lambda j: (counts[j], -j))


def most_bottom_half(profile: Profile, m: int) -> SchoolId:
    """School most often in the bottom half (ranks m//2+1 .. m) of true lists.

    Ties go to the lowest index.
    """
    if m < 2:
        raise ValueError("need at least two schools to split preference lists in half")
    top_size = m // 2
    counts = [0] * m
    for prefs in profile:
        for school in prefs[top_size:]:
            counts[school] += 1
    return max(range(m), key=lambda j: (counts[j], -j))


def apply_strategy_a(prefs: PreferenceList, popular: SchoolId) -> PreferenceList:
    """Swap ranks 1 and 2 when the popular school sits at rank 1."""
    if prefs[0] != popular:
        return prefs
    return (prefs[1], prefs[0]) + prefs[2:]


def apply_strategy_b(prefs: PreferenceList, popular: SchoolId) -> PreferenceList:
    """Move the popular school from rank 1 to the last rank."""
    if prefs[0] != popular:
        return prefs
    return prefs[1:] + (prefs[0],)


def apply_strategy_c(prefs: PreferenceList, unpopular: SchoolId, m: int) -> PreferenceList:
    """Promote the unpopular school to rank 1 if it is in the top half.

    Top half means ranks 1 .. m//2. Already at rank 1 or in the bottom
    half: unchanged.
    """
    pos = prefs.index(unpopular)
    if pos == 0 or pos >= m // 2:
        return prefs
    return (unpopular,) + prefs[:pos] + prefs[pos + 1 :]


def build_plan(
    inst: Instance, strategy: Strategy, k: int, rng: np.random.Generator
) -> AlterationPlan:
    """Sample k sophisticated students and apply one strategy to each.

    Popularity targets come from the full true profile, so all alterations
    are simultaneous: no altered list sees another.
    """
    sophisticated = sample_sophisticated(rng, inst.n, k)
    selected: SchoolId | None = None
    if strategy is Strategy.C:
        selected = most_bottom_half(inst.true_prefs, inst.m)
    else:
        popular = most_popular_rank1(inst.true_prefs)

    reported = list(inst.true_prefs)
    for s in sophisticated:
        if strategy is Strategy.A:
            reported[s] = apply_strategy_a(inst.true_prefs[s], popular)
        elif strategy is Strategy.B:
            reported[s] = apply_strategy_b(inst.true_prefs[s], popular)
        else:
            reported[s] = apply_strategy_c(inst.true_prefs[s], selected, inst.m)
    return AlterationPlan(sophisticated, strategy, tuple(reported), selected)
