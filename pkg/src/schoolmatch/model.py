"""Core domain types for the school choice problem.

Students and schools are dense 0-based integer ids. Ranks are 1-based:
rank 1 is the most preferred school. All containers are tuples so that
instances can be shared read-only across parallel trial workers.
"""
from __future__ import annotations

from dataclasses import dataclass

StudentId = int
SchoolId = int

# A strict ranking of all m schools; position 0 holds the rank-1 school.
PreferenceList = tuple[SchoolId, ...]

# One preference list per student, indexed by student id.
Profile = tuple[PreferenceList, ...]

UNASSIGNED: SchoolId = -1


@dataclass(frozen=True)
class SchoolPriority:
    """One school's view of the students.

    ``classes[i]`` is student i's priority class, 1 (highest) .. 4 (lowest).
    ``strict_order`` lists all students best-first and must be consistent
    with the classes (ties within a class are broken elsewhere).
    """

    classes: tuple[int, ...]
    strict_order: tuple[StudentId, ...]


@dataclass(frozen=True)
class Provenance:
    """Raw generator features kept for debugging; not used by mechanisms."""

    student_pos: tuple[tuple[float, float], ...]
    school_pos: tuple[tuple[float, float], ...]
    sibling_school: tuple[SchoolId | None, ...]
    tiers: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    """A complete problem instance.

    Capacities sum to exactly n, so every student ends up assigned.
    """

    n: int
    m: int
    capacities: tuple[int, ...]
    true_prefs: Profile
    priorities: tuple[SchoolPriority, ...]
    provenance: Provenance | None = None


@dataclass(frozen=True)
class Matching:
    """Total assignment of students to schools, stored in both directions.

    ``assignment[i]`` is student i's school; ``roster[j]`` is the exact
    inverse. The redundancy buys O(1) queries in mechanisms and metrics.
    """

    assignment: tuple[SchoolId, ...]
    roster: tuple[frozenset[StudentId], ...]


@dataclass(frozen=True)
class MatchingViolation:
    """First violated matching invariant: kind, offending id, and detail."""

    kind: str  # "totality" | "capacity" | "roster"
    offender: int
    detail: str


def matching_from_assignment(assignment: list[SchoolId] | tuple[SchoolId, ...], m: int) -> Matching:
    """Build a Matching with the roster derived from the assignment."""
    rosters: list[set[StudentId]] = [set() for _ in range(m)]
    for student, school in enumerate(assignment):
        if 0 <= school < m:
            rosters[school].add(student)
    return Matching(tuple(assignment), tuple(frozenset(r) for r in rosters))


def rank_of(prefs: PreferenceList, school: SchoolId) -> int:
    """1-based rank of ``school`` in ``prefs`` (1 = most preferred)."""
    try:
        return prefs.index(school) + 1
    except ValueError:
        raise ValueError(f"school {school} does not appear in preference list") from None


def validate_matching(inst: Instance, matching: Matching) -> MatchingViolation | None:
    """Check totality, capacity, and roster consistency; None means ok.

    Violations are reported, not raised: the first failing invariant wins,
    checked in the order totality, capacity, roster.
    """
    assignment = matching.assignment
    for student in range(inst.n):
        if student >= len(assignment) or not 0 <= assignment[student] < inst.m:
            return MatchingViolation(
                "totality", student, f"student {student} is not assigned to a school"
            )
    if len(assignment) != inst.n:
        return MatchingViolation(
            "totality", inst.n, f"assignment covers {len(assignment)} students, expected {inst.n}"
        )
    if len(matching.roster) != inst.m:
        return MatchingViolation(
            "roster", 0, f"roster covers {len(matching.roster)} schools, expected {inst.m}"
        )
    for school in range(inst.m):
        if len(matching.roster[school]) > inst.capacities[school]:
            return MatchingViolation(
                "capacity",
                school,
                f"school {school} holds {len(matching.roster[school])} students, "
                f"capacity {inst.capacities[school]}",
            )
    for school in range(inst.m):
        actual = frozenset(s for s in range(inst.n) if assignment[s] == school)
        if matching.roster[school] != actual:
            return MatchingViolation(
                "roster", school, f"roster of school {school} does not match assignment"
            )
    return None


def check_instance(inst: Instance) -> None:
    """Raise ValueError unless all Instance invariants hold."""
    if inst.n < 1 or inst.m < 1:
        raise ValueError("instance needs at least one student and one school")
    if len(inst.capacities) != inst.m:
        raise ValueError("need one capacity per school")
    if any(q < 1 for q in inst.capacities):
        raise ValueError("every school needs capacity >= 1")
    if sum(inst.capacities) != inst.n:
        raise ValueError(f"capacities sum to {sum(inst.capacities)}, expected n={inst.n}")
    if len(inst.true_prefs) != inst.n:
        raise ValueError("need one preference list per student")
    full_schools = tuple(range(inst.m))
    for student, prefs in enumerate(inst.true_prefs):
        if tuple(sorted(prefs)) != full_schools:
            raise ValueError(f"preference list of student {student} is not a permutation")
    if len(inst.priorities) != inst.m:
        raise ValueError("need one priority structure per school")
    full_students = tuple(range(inst.n))
    for school, prio in enumerate(inst.priorities):
        if tuple(sorted(prio.strict_order)) != full_students:
            raise ValueError(f"strict order of school {school} is not a permutation")
        if len(prio.classes) != inst.n:
            raise ValueError(f"school {school} needs one priority class per student")
        if any(c not in (1, 2, 3, 4) for c in prio.classes):
            raise ValueError(f"school {school} has priority classes outside 1..4")
        for earlier, later in zip(prio.strict_order, prio.strict_order[1:]):
            if prio.classes[earlier] > prio.classes[later]:
                raise ValueError(
                    f"strict order of school {school} contradicts its priority classes"
                )
