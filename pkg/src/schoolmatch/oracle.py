"""Brute-force verifiers, kept independent of the mechanisms module.

These reimplement rank and priority lookups from the raw model types on
purpose: they exist to catch mechanism bugs, so they share no logic with
the code under test.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

from .model import (
    Instance,
    Matching,
    PreferenceList,
    Profile,
    SchoolId,
    SchoolPriority,
    StudentId,
)

MechanismFn = Callable[[Instance, Profile], Matching]

MAX_ENUM_SCHOOLS = 6


def find_blocking_pairs(
    inst: Instance, reported: Profile, matching: Matching
) -> list[tuple[StudentId, SchoolId]]:
    """All blocking pairs of the matching, sorted by (student, school).

    (s, b) blocks when s strictly prefers b to their assigned school and b
    either has a free seat or ranks s above someone it holds. Every one of
    the n*m pairs is inspected; an empty result certifies stability.
    """
    pref_pos = [{school: pos for pos, school in enumerate(prefs)} for prefs in reported]
    prio_pos = [
        {student: pos for pos, student in enumerate(prio.strict_order)}
        for prio in inst.priorities
    ]
    blocking = []
    for s in range(inst.n):
        assigned_pos = pref_pos[s][matching.assignment[s]]
        for b in range(inst.m):
            if pref_pos[s][b] >= assigned_pos:
                continue
            roster = matching.roster[b]
            if len(roster) < inst.capacities[b] or any(
                prio_pos[b][s] < prio_pos[b][held] for held in roster
            ):
                blocking.append((s, b))
    return blocking


def exhaustive_best_response(
    inst: Instance, mechanism: MechanismFn, student: StudentId
) -> tuple[SchoolId, PreferenceList]:
    """Best school ``student`` can reach by unilateral misreporting.

    Runs the mechanism once per possible preference list of the student
    (everyone else truthful) and returns the outcome most preferred under
    the student's TRUE list, with one misreport achieving it. Refuses
    beyond m! = 720 lists.
    """
    if inst.m > MAX_ENUM_SCHOOLS:
        raise ValueError(
            f"refusing to enumerate {math.factorial(inst.m)} preference lists (m={inst.m})"
        )
    true_pos = {school: pos for pos, school in enumerate(inst.true_prefs[student])}
    profile = list(inst.true_prefs)
    best_school: SchoolId | None = None
    best_report: PreferenceList | None = None
    for candidate in itertools.permutations(range(inst.m)):
        profile[student] = candidate
        outcome = mechanism(inst, tuple(profile)).assignment[student]
        if best_school is None or true_pos[outcome] < true_pos[best_school]:
            best_school = outcome
            best_report = candidate
    assert best_school is not None and best_report is not None
    return best_school, best_report


@dataclass(frozen=True)
class ManipulationWitness:
    """A fixed instance where one student gains under immediate acceptance."""

    instance: Instance
    student: StudentId
    misreport: PreferenceList
    truthful_rank: int
    manipulated_rank: int


def witness_instance() -> ManipulationWitness:
    """Three students, three unit-capacity schools, student 1 can gain.

    Truthfully, student 1 loses school 0 to student 0 in round one and by
    round two school 1 is gone, leaving rank-3 school 2. Misreporting
    [1, 0, 2] wins school 1 (rank 2) in round one on priority over
    student 2.
    """
    uniform_class = (1, 1, 1)
    inst = Instance(
        n=3,
        m=3,
        capacities=(1, 1, 1),
        true_prefs=((0, 1, 2), (0, 1, 2), (1, 0, 2)),
        priorities=(
            SchoolPriority(uniform_class, (0, 1, 2)),
            SchoolPriority(uniform_class, (1, 2, 0)),
            SchoolPriority(uniform_class, (0, 1, 2)),
        ),
    )
    return ManipulationWitness(
        instance=inst,
        student=1,
        misreport=(1, 0, 2),
        truthful_rank=3,
        manipulated_rank=2,
    )
