"""Shared test helpers: instance samplers independent of the generator under test."""
from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from schoolmatch.model import Instance, SchoolPriority, check_instance


def random_instance(rng: np.random.Generator, n: int, m: int) -> Instance:
    """Arbitrary valid instance, built from raw draws rather than geninst."""
    caps = np.ones(m, dtype=np.int64)
    np.add.at(caps, rng.integers(0, m, size=n - m), 1)
    prefs = tuple(tuple(int(x) for x in rng.permutation(m)) for _ in range(n))
    priorities = []
    for _ in range(m):
        classes = rng.integers(1, 5, size=n)
        order = np.lexsort((rng.random(n), classes))
        priorities.append(
            SchoolPriority(tuple(int(c) for c in classes), tuple(int(s) for s in order))
        )
    inst = Instance(n, m, tuple(int(q) for q in caps), prefs, tuple(priorities))
    check_instance(inst)
    return inst


@st.composite
def small_instances(draw, max_students: int = 6, max_schools: int = 4) -> Instance:
    """Hypothesis strategy for small valid instances."""
    m = draw(st.integers(1, max_schools))
    n = draw(st.integers(m, max_students))
    caps = [1] * m
    for j in draw(st.lists(st.integers(0, m - 1), min_size=n - m, max_size=n - m)):
        caps[j] += 1
    prefs = tuple(tuple(draw(st.permutations(range(m)))) for _ in range(n))
    priorities = []
    for _ in range(m):
        classes = tuple(draw(st.integers(1, 4)) for _ in range(n))
        base = draw(st.permutations(range(n)))
        order = tuple(sorted(base, key=lambda s: classes[s]))
        priorities.append(SchoolPriority(classes, order))
    inst = Instance(n, m, tuple(caps), prefs, tuple(priorities))
    check_instance(inst)
    return inst
