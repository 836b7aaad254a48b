"""Random instance generation.

Students and schools live in the unit square. A student's preference value
for a school is a weighted sum of four features, each normalized to [0, 1]:
Euclidean distance (scaled by the global bound sqrt(2)), absence of a
sibling at the school, school tier, and a uniform random factor. Lower
value means more preferred. Schools rank students by distance alone,
discretized into four priority classes with random tie-breaking inside a
class.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Instance,
    PreferenceList,
    Profile,
    Provenance,
    SchoolId,
    SchoolPriority,
    check_instance,
)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class GenConfig:
    """Generator parameters. Defaults are the experiment defaults."""

    n: int = 2000
    m: int = 20
    w_dist: float = 0.5
    w_sibling: float = 0.2
    w_tier: float = 0.2
    w_random: float = 0.1
    sibling_prob: float = 0.5
    tier_probs: tuple[float, float, float, float] = (0.1, 0.2, 0.3, 0.4)
    priority_bins: tuple[float, ...] = (0.0, 0.3, 0.5, 0.7, 1.0)

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 students and m >= 1 schools")
        if self.n < self.m:
            raise ValueError(f"need n >= m so every school can get a seat (n={self.n}, m={self.m})")
        weight_sum = self.w_dist + self.w_sibling + self.w_tier + self.w_random
        if abs(weight_sum - 1.0) > 1e-9:
            raise ValueError(f"feature weights must sum to 1, got {weight_sum}")
        if min(self.w_dist, self.w_sibling, self.w_tier, self.w_random) < 0:
            raise ValueError("feature weights must be nonnegative")
        if abs(sum(self.tier_probs) - 1.0) > 1e-9:
            raise ValueError(f"tier probabilities must sum to 1, got {sum(self.tier_probs)}")
        if any(p < 0 for p in self.tier_probs):
            raise ValueError("tier probabilities must be nonnegative")
        if not 0.0 <= self.sibling_prob <= 1.0:
            raise ValueError(f"sibling_prob must lie in [0, 1], got {self.sibling_prob}")
        bins = self.priority_bins
        if len(bins) < 2 or bins[0] != 0.0 or bins[-1] != 1.0:
            raise ValueError("priority bins must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bins, bins[1:])):
            raise ValueError("priority bins must be strictly increasing")


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class StudentFeatures:
    """Per-(student, school) features, already normalized to [0, 1].

    ``dist_norm``, ``sibling`` and ``random`` are (n, m) arrays; ``tier``
    is the per-school tier in 1..4, shape (m,). ``sibling[i, j]`` is 1 when
    student i has a sibling at school j.
    """

    dist_norm: np.ndarray
    sibling: np.ndarray
    tier: np.ndarray
    random: np.ndarray


def sample_point(rng: np.random.Generator) -> Point:
    """Uniform point in the unit square; consumes two draws (x then y)."""
    return Point(float(rng.random()), float(rng.random()))


def distance(p: Point, q: Point) -> float:
    """Euclidean distance."""
    return math.hypot(p.x - q.x, p.y - q.y)


def student_pref_value(
    dist_norm: float, sibling_at_school: int, tier: int, rand: float, cfg: GenConfig
) -> float:
    """Scalar preference value; lower means more preferred.

    value = w_dist * dist_norm + w_sibling * (1 - sibling_at_school)
          + w_tier * (tier - 1) / 3 + w_random * rand
    """
    if not 0.0 <= dist_norm <= 1.0:
        raise ValueError(f"normalized distance out of [0, 1]: {dist_norm}")
    if sibling_at_school not in (0, 1):
        raise ValueError(f"sibling indicator must be 0 or 1: {sibling_at_school}")
    if tier not in (1, 2, 3, 4):
        raise ValueError(f"tier must lie in 1..4: {tier}")
    if not 0.0 <= rand <= 1.0:
        raise ValueError(f"random factor out of [0, 1]: {rand}")
    return (
        cfg.w_dist * dist_norm
        + cfg.w_sibling * (1 - sibling_at_school)
        + cfg.w_tier * (tier - 1) / 3
        + cfg.w_random * rand
    )


def preference_values(feats: StudentFeatures, cfg: GenConfig) -> np.ndarray:
    """Vectorized student_pref_value over all (student, school) pairs."""
    return (
        cfg.w_dist * feats.dist_norm
        + cfg.w_sibling * (1.0 - feats.sibling)
        + cfg.w_tier * (feats.tier[None, :] - 1) / 3.0
        + cfg.w_random * feats.random
    )


def build_student_prefs(feats: StudentFeatures, cfg: GenConfig) -> Profile:
    """Rank schools per student by ascending preference value.

    Ties break by ascending school index (stable sort over index order).
    """
    values = preference_values(feats, cfg)
    order = np.argsort(values, axis=1, kind="stable")
    return tuple(tuple(int(j) for j in row) for row in order)


def priority_classes(values: np.ndarray, bins: tuple[float, ...]) -> np.ndarray:
    """Discretize values in [0, 1] into classes 1..len(bins)-1.

    Bins are left-closed, right-open; the last bin is closed, so 1.0 lands
    in the lowest class.
    """
    inner = np.asarray(bins[1:-1])
    return np.searchsorted(inner, values, side="right").astype(np.int64) + 1


def build_school_priorities(
    student_pos: np.ndarray,
    school_pos: np.ndarray,
    bins: tuple[float, ...],
    rng: np.random.Generator,
) -> tuple[SchoolPriority, ...]:
    """Distance-based priority classes plus a tie-broken strict order.

    Ties within a class break by a fresh uniform key per (school, student),
    drawn school by school in school-id order.
    """
    n = student_pos.shape[0]
    priorities = []
    for j in range(school_pos.shape[0]):
        dist_norm = np.hypot(*(student_pos - school_pos[j]).T) / SQRT2
        classes = priority_classes(dist_norm, bins)
        tie_keys = rng.random(n)
        order = np.lexsort((tie_keys, classes))
        priorities.append(
            SchoolPriority(tuple(int(c) for c in classes), tuple(int(s) for s in order))
        )
    return tuple(priorities)


def generate_capacities(rng: np.random.Generator, n: int, m: int) -> tuple[int, ...]:
    """One guaranteed seat per school, then n - m seats spread uniformly."""
    if n < m:
        raise ValueError(f"cannot seat {n} students across {m} schools with one seat each")
    caps = np.ones(m, dtype=np.int64)
    np.add.at(caps, rng.integers(0, m, size=n - m), 1)
    return tuple(int(q) for q in caps)


def build_instance(cfg: GenConfig, rng: np.random.Generator) -> Instance:
    """Generate a full instance from one rng stream.

    Draw order is fixed (positions, siblings, tiers, random factors,
    priority tie keys, capacities) so a given stream always yields the
    same instance.
    """
    n, m = cfg.n, cfg.m
    students = [sample_point(rng) for _ in range(n)]
    schools = [sample_point(rng) for _ in range(m)]
    student_pos = np.array([(p.x, p.y) for p in students])
    school_pos = np.array([(p.x, p.y) for p in schools])

    has_sibling = rng.random(n) < cfg.sibling_prob
    sibling_school = np.full(n, -1, dtype=np.int64)
    sibling_school[has_sibling] = rng.integers(0, m, size=int(has_sibling.sum()))

    tiers = rng.choice(np.arange(1, 5), size=m, p=np.asarray(cfg.tier_probs))

    dist_norm = np.hypot(
        student_pos[:, None, 0] - school_pos[None, :, 0],
        student_pos[:, None, 1] - school_pos[None, :, 1],
    ) / SQRT2
    sibling_ind = (sibling_school[:, None] == np.arange(m)[None, :]).astype(np.float64)
    feats = StudentFeatures(dist_norm, sibling_ind, tiers, rng.random((n, m)))

    true_prefs = build_student_prefs(feats, cfg)
    priorities = build_school_priorities(student_pos, school_pos, cfg.priority_bins, rng)
    capacities = generate_capacities(rng, n, m)

    provenance = Provenance(
        student_pos=tuple((p.x, p.y) for p in students),
        school_pos=tuple((p.x, p.y) for p in schools),
        sibling_school=tuple(int(j) if j >= 0 else None for j in sibling_school),
        tiers=tuple(int(t) for t in tiers),
    )
    inst = Instance(n, m, capacities, true_prefs, priorities, provenance)
    check_instance(inst)
    return inst


def dump_instance(inst: Instance) -> str:
    """Plain-text dump: header, capacities, preferences, orders, classes."""
    lines = [f"{inst.n} {inst.m}", " ".join(str(q) for q in inst.capacities)]
    for prefs in inst.true_prefs:
        lines.append(" ".join(str(j) for j in prefs))
    for prio in inst.priorities:
        lines.append(" ".join(str(s) for s in prio.strict_order))
    for prio in inst.priorities:
        lines.append(" ".join(str(c) for c in prio.classes))
    return "\n".join(lines) + "\n"


def load_instance(text: str) -> Instance:
    """Parse the dump_instance format; provenance is not round-tripped."""
    rows = [line.split() for line in text.strip().splitlines()]
    if not rows or len(rows[0]) != 2:
        raise ValueError("expected header line 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    if len(rows) != 2 + n + 2 * m:
        raise ValueError(f"expected {2 + n + 2 * m} lines for n={n}, m={m}, got {len(rows)}")
    capacities = tuple(int(tok) for tok in rows[1])
    prefs: list[PreferenceList] = [tuple(int(t) for t in rows[2 + i]) for i in range(n)]
    orders = [tuple(int(t) for t in rows[2 + n + j]) for j in range(m)]
    classes = [tuple(int(t) for t in rows[2 + n + m + j]) for j in range(m)]
    priorities = tuple(SchoolPriority(c, o) for c, o in zip(classes, orders))
    inst = Instance(n, m, capacities, tuple(prefs), priorities)
    check_instance(inst)
    return inst
