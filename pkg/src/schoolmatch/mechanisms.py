"""The two matching mechanisms.

Both take an instance (for capacities and school priorities) plus a
reported preference profile, which may differ from the instance's true
profile. Both require capacities summing to n, which guarantees a total
matching.
"""
from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Sequence

from .model import Instance, Matching, Profile, StudentId, matching_from_assignment


def _priority_ranks(inst: Instance) -> list[list[int]]:
    """ranks[j][s] = position of student s in school j's strict order."""
    ranks = []
    for prio in inst.priorities:
        inverse = [0] * inst.n
        for pos, student in enumerate(prio.strict_order):
            inverse[student] = pos
        ranks.append(inverse)
    return ranks


def _check_inputs(inst: Instance, reported: Profile) -> None:
    if sum(inst.capacities) != inst.n:
        raise ValueError(
            f"capacities sum to {sum(inst.capacities)}, expected n={inst.n}"
        )
    if len(reported) != inst.n:
        raise ValueError(f"profile covers {len(reported)} students, expected {inst.n}")
    full = frozenset(range(inst.m))
    for student, prefs in enumerate(reported):
        if len(prefs) != inst.m or frozenset(prefs) != full:
            raise ValueError(f"reported list of student {student} is not a permutation")


def boston_with_rounds(inst: Instance, reported: Profile) -> tuple[Matching, tuple[int, ...]]:
    """Immediate acceptance; also reports the round each student was admitted.

    Round k takes every still-unassigned student's rank-k school. Each
    school admits its round-k applicants in strict priority order until its
    remaining capacity runs out; admissions are final and consume capacity
    permanently. Students pointed at an already-full school are rejected in
    that round and move on with everyone else. Capacities summing to n
    guarantee everybody is assigned within m rounds.
    """
    _check_inputs(inst, reported)
    ranks = _priority_ranks(inst)
    remaining = list(inst.capacities)
    assignment = [-1] * inst.n
    admitted_round = [0] * inst.n
    unassigned = list(range(inst.n))
    for k in range(inst.m):
        applicants: list[list[StudentId]] = [[] for _ in range(inst.m)]
        for s in unassigned:
            applicants[reported[s][k]].append(s)
        rejected: list[StudentId] = []
        for j in range(inst.m):
            apps = applicants[j]
            if not apps:
                continue
            if remaining[j] == 0:
                rejected.extend(apps)
                continue
            apps.sort(key=ranks[j].__getitem__)
            cut = remaining[j]
            for s in apps[:cut]:
                assignment[s] = j
                admitted_round[s] = k + 1
            remaining[j] -= min(cut, len(apps))
            rejected.extend(apps[cut:])
        unassigned = rejected
        if not unassigned:
            break
    if unassigned:
        raise AssertionError("student left unassigned despite capacities summing to n")
    return matching_from_assignment(assignment, inst.m), tuple(admitted_round)


def boston(inst: Instance, reported: Profile) -> Matching:
    """Immediate acceptance (Boston) mechanism."""
    return boston_with_rounds(inst, reported)[0]


def deferred_acceptance(
    inst: Instance, reported: Profile, order: Sequence[StudentId] | None = None
) -> Matching:
    """Student-proposing deferred acceptance with quotas.

    Unassigned students propose down their reported lists; a school holds
    its best q_j proposers so far in strict priority order and releases
    anyone displaced. Holds become final when nobody is left unassigned.
    The result is the student-optimal stable matching and does not depend
    on ``order``, the initial worklist permutation (exposed for tests).
    """
    _check_inputs(inst, reported)
    ranks = _priority_ranks(inst)
    queue: deque[StudentId] = deque(range(inst.n) if order is None else order)
    if order is not None and sorted(queue) != list(range(inst.n)):
        raise ValueError("order must be a permutation of all students")
    next_choice = [0] * inst.n
    assignment = [-1] * inst.n
    # One max-heap per school keyed by priority rank; heap[0] is the worst
    # held student, the one displaced first.
    held: list[list[tuple[int, StudentId]]] = [[] for _ in range(inst.m)]
    while queue:
        s = queue.popleft()
        j = reported[s][next_choice[s]]
        next_choice[s] += 1
        r = ranks[j][s]
        if len(held[j]) < inst.capacities[j]:
            heapq.heappush(held[j], (-r, s))
            assignment[s] = j
        else:
            worst_neg_rank, worst_student = held[j][0]
            if r < -worst_neg_rank:
                heapq.heapreplace(held[j], (-r, s))
                assignment[s] = j
                assignment[worst_student] = -1
                queue.append(worst_student)
            else:
                queue.append(s)
    return matching_from_assignment(assignment, inst.m)
