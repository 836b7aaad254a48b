import math

import numpy as np
import pytest

from schoolmatch.geninst import (
    SQRT2,
    GenConfig,
    Point,
    StudentFeatures,
    build_instance,
    build_school_priorities,
    build_student_prefs,
    distance,
    dump_instance,
    generate_capacities,
    load_instance,
    preference_values,
    priority_classes,
    sample_point,
    student_pref_value,
)
from schoolmatch.model import check_instance
from schoolmatch.oracle import witness_instance


class TestGenConfig:
    def test_defaults_are_valid(self):
        GenConfig()

    def test_rejects_weights_not_summing_to_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            GenConfig(w_dist=0.6)

    def test_rejects_bad_tier_probs(self):
        with pytest.raises(ValueError, match="tier probabilities"):
            GenConfig(tier_probs=(0.5, 0.5, 0.5, 0.5))

    def test_rejects_sibling_prob_out_of_range(self):
        with pytest.raises(ValueError, match="sibling_prob"):
            GenConfig(sibling_prob=1.5)

    def test_rejects_nonmonotone_bins(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            GenConfig(priority_bins=(0.0, 0.5, 0.3, 1.0))

    def test_rejects_bins_not_spanning_unit_interval(self):
        with pytest.raises(ValueError, match="start at 0"):
            GenConfig(priority_bins=(0.1, 0.5, 1.0))

    def test_rejects_more_schools_than_students(self):
        with pytest.raises(ValueError, match="n >= m"):
            GenConfig(n=3, m=5)


class TestSamplePoint:
    def test_in_unit_square(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            p = sample_point(rng)
            assert 0.0 <= p.x <= 1.0 and 0.0 <= p.y <= 1.0

    def test_deterministic_given_stream(self):
        assert sample_point(np.random.default_rng(5)) == sample_point(np.random.default_rng(5))

    def test_mean_matches_uniform_law(self):
        # 1e4 draws: |mean - 0.5| stays well under 0.02 (3 sigma = 0.0087
        # from Var = 1/12).
        rng = np.random.default_rng(123)
        points = [sample_point(rng) for _ in range(10_000)]
        assert abs(np.mean([p.x for p in points]) - 0.5) <= 0.02
        assert abs(np.mean([p.y for p in points]) - 0.5) <= 0.02


class TestDistance:
    def test_identity(self):
        assert distance(Point(0, 0), Point(0, 0)) == 0.0

    def test_unit_square_diagonal(self):
        assert distance(Point(0, 0), Point(1, 1)) == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_three_four_five(self):
        assert distance(Point(0, 0), Point(0.3, 0.4)) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric(self):
        p, q = Point(0.2, 0.9), Point(0.7, 0.1)
        assert distance(p, q) == distance(q, p)


class TestStudentPrefValue:
    def test_all_best_features(self):
        assert student_pref_value(0.0, 1, 1, 0.0, GenConfig()) == 0.0

    def test_all_worst_features(self):
        assert student_pref_value(1.0, 0, 4, 1.0, GenConfig()) == pytest.approx(1.0, abs=1e-12)

    def test_hand_arithmetic(self):
        # 0.5*0.5 + 0.2*1 + 0.2*(1/3) + 0.1*0.5
        expected = 0.25 + 0.2 + 0.2 / 3 + 0.05
        assert student_pref_value(0.5, 0, 2, 0.5, GenConfig()) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize(
        "args",
        [(-0.1, 0, 1, 0.5), (0.5, 2, 1, 0.5), (0.5, 0, 5, 0.5), (0.5, 0, 1, 1.5)],
    )
    def test_rejects_out_of_range_features(self, args):
        with pytest.raises(ValueError):
            student_pref_value(*args, GenConfig())

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(77)
        n, m = 6, 5
        feats = StudentFeatures(
            dist_norm=rng.random((n, m)),
            sibling=(rng.random((n, m)) < 0.4).astype(np.float64),
            tier=rng.integers(1, 5, size=m),
            random=rng.random((n, m)),
        )
        cfg = GenConfig(n=n, m=m)
        values = preference_values(feats, cfg)
        for i in range(n):
            for j in range(m):
                expected = student_pref_value(
                    float(feats.dist_norm[i, j]),
                    int(feats.sibling[i, j]),
                    int(feats.tier[j]),
                    float(feats.random[i, j]),
                    cfg,
                )
                assert values[i, j] == pytest.approx(expected, abs=1e-12)


def features_for_one_student(dist, sibling, tier, rand):
    return StudentFeatures(
        dist_norm=np.array([dist]),
        sibling=np.array([sibling], dtype=np.float64),
        tier=np.array(tier),
        random=np.array([rand]),
    )


class TestBuildStudentPrefs:
    def test_tie_breaks_by_school_index(self):
        feats = features_for_one_student([0.4, 0.4], [0, 0], [2, 2], [0.7, 0.7])
        assert build_student_prefs(feats, GenConfig(n=1, m=2)) == ((0, 1),)

    def test_closer_school_ranked_first(self):
        feats = features_for_one_student([0.0, 1.0], [0, 0], [3, 3], [0.5, 0.5])
        assert build_student_prefs(feats, GenConfig(n=1, m=2)) == ((0, 1),)
        feats = features_for_one_student([1.0, 0.0], [0, 0], [3, 3], [0.5, 0.5])
        assert build_student_prefs(feats, GenConfig(n=1, m=2)) == ((1, 0),)

    def test_ordering_matches_hand_computed_sums(self):
        # values: school0 = 0.42, school1 = 0.79, school2 = 0.4969
        feats = features_for_one_student(
            [0.0, 1.0, 1.0 / SQRT2], [0, 0, 1], [4, 1, 3], [0.2, 0.9, 0.1]
        )
        cfg = GenConfig(n=1, m=3)
        values = preference_values(feats, cfg)[0]
        assert values[0] == pytest.approx(0.42, abs=1e-12)
        assert values[1] == pytest.approx(0.79, abs=1e-12)
        assert values[2] == pytest.approx(0.5 / SQRT2 + 0.2 / 1.5 + 0.01, abs=1e-12)
        assert build_student_prefs(feats, cfg) == ((0, 2, 1),)


class TestPriorityClasses:
    BINS = (0.0, 0.3, 0.5, 0.7, 1.0)

    @pytest.mark.parametrize(
        "value,expected",
        [(0.0, 1), (0.29, 1), (0.3, 2), (0.5, 3), (0.7, 4), (1.0, 4)],
    )
    def test_boundaries(self, value, expected):
        assert priority_classes(np.array([value]), self.BINS)[0] == expected

    def test_bin_lookup(self):
        values = np.array([0.1, 0.35, 0.55, 0.9])
        assert list(priority_classes(values, self.BINS)) == [1, 2, 3, 4]

    def test_monotone_in_value(self):
        values = np.sort(np.random.default_rng(3).random(200))
        classes = priority_classes(values, self.BINS)
        assert all(a <= b for a, b in zip(classes, classes[1:]))


class TestBuildSchoolPriorities:
    def test_order_respects_classes(self):
        rng = np.random.default_rng(11)
        student_pos = rng.random((30, 2))
        school_pos = rng.random((3, 2))
        for prio in build_school_priorities(student_pos, school_pos, GenConfig().priority_bins, rng):
            for a, b in zip(prio.strict_order, prio.strict_order[1:]):
                assert prio.classes[a] <= prio.classes[b]

    def test_classes_monotone_in_distance(self):
        rng = np.random.default_rng(12)
        student_pos = rng.random((50, 2))
        school_pos = rng.random((2, 2))
        priorities = build_school_priorities(student_pos, school_pos, GenConfig().priority_bins, rng)
        for j, prio in enumerate(priorities):
            dist = np.hypot(*(student_pos - school_pos[j]).T)
            for a in range(50):
                for b in range(50):
                    if dist[a] < dist[b]:
                        assert prio.classes[a] <= prio.classes[b]

    def test_intra_class_tie_break_is_uniform(self):
        # Four students at the same spot share a class; over many seeds each
        # pairwise order should be a coin flip (2000 draws, 0.5 +- 0.05 is
        # beyond 4 sigma).
        student_pos = np.tile(np.array([[0.5, 0.5]]), (4, 1))
        school_pos = np.array([[0.5, 0.5]])
        first = 0
        draws = 2000
        for seed in range(draws):
            rng = np.random.default_rng(seed)
            (prio,) = build_school_priorities(student_pos, school_pos, GenConfig().priority_bins, rng)
            order = prio.strict_order
            if order.index(0) < order.index(1):
                first += 1
        assert abs(first / draws - 0.5) <= 0.05


class TestGenerateCapacities:
    def test_no_remainder(self):
        assert generate_capacities(np.random.default_rng(0), 3, 3) == (1, 1, 1)

    def test_single_school(self):
        assert generate_capacities(np.random.default_rng(0), 5, 1) == (5,)

    def test_rejects_fewer_students_than_schools(self):
        with pytest.raises(ValueError):
            generate_capacities(np.random.default_rng(0), 2, 3)

    def test_sum_and_minimum_always_hold(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            n = int(rng.integers(1, 60))
            m = int(rng.integers(1, n + 1))
            caps = generate_capacities(rng, n, m)
            assert sum(caps) == n
            assert min(caps) >= 1

    def test_extra_seats_follow_binomial_law(self):
        # q_0 - 1 ~ Binomial(1980, 1/20): mean of q_0 over 1000 draws stays
        # within 3 * sigma / sqrt(1000) of 100.
        rng = np.random.default_rng(7)
        draws = 1000
        mean_q0 = np.mean([generate_capacities(rng, 2000, 20)[0] for _ in range(draws)])
        sigma = math.sqrt(1980 * (1 / 20) * (19 / 20))
        assert abs(mean_q0 - 100.0) <= 3 * sigma / math.sqrt(draws)


class TestBuildInstance:
    def test_deterministic_given_seed(self):
        cfg = GenConfig(n=3, m=2)
        a = build_instance(cfg, np.random.default_rng(99))
        b = build_instance(cfg, np.random.default_rng(99))
        assert a == b
        assert dump_instance(a) == dump_instance(b)

    def test_passes_model_invariants(self):
        for seed in range(5):
            inst = build_instance(GenConfig(n=20, m=4), np.random.default_rng(seed))
            check_instance(inst)

    def test_sibling_fraction_matches_bernoulli_mean(self):
        cfg = GenConfig()
        fractions = []
        for seed in range(100):
            inst = build_instance(cfg, np.random.default_rng(seed))
            with_sib = sum(1 for s in inst.provenance.sibling_school if s is not None)
            fractions.append(with_sib / cfg.n)
        assert abs(np.mean(fractions) - 0.5) <= 0.03
        assert all(abs(f - 0.5) <= 0.06 for f in fractions)

    def test_priority_classes_monotone_in_distance(self):
        inst = build_instance(GenConfig(n=40, m=3), np.random.default_rng(21))
        student_pos = np.array(inst.provenance.student_pos)
        school_pos = np.array(inst.provenance.school_pos)
        for j in range(inst.m):
            dist = np.hypot(*(student_pos - school_pos[j]).T)
            classes = inst.priorities[j].classes
            order = np.argsort(dist)
            for a, b in zip(order, order[1:]):
                assert classes[a] <= classes[b]


class TestDumpLoad:
    def test_golden_dump(self):
        text = dump_instance(witness_instance().instance)
        assert text == (
            "3 3\n"
            "1 1 1\n"
            "0 1 2\n"
            "0 1 2\n"
            "1 0 2\n"
            "0 1 2\n"
            "1 2 0\n"
            "0 1 2\n"
            "1 1 1\n"
            "1 1 1\n"
            "1 1 1\n"
        )

    def test_round_trip(self):
        inst = build_instance(GenConfig(n=12, m=3), np.random.default_rng(4))
        again = load_instance(dump_instance(inst))
        assert again.capacities == inst.capacities
        assert again.true_prefs == inst.true_prefs
        assert again.priorities == inst.priorities

    def test_load_rejects_truncated_text(self):
        inst = build_instance(GenConfig(n=5, m=2), np.random.default_rng(4))
        lines = dump_instance(inst).splitlines()
        with pytest.raises(ValueError, match="expected"):
            load_instance("\n".join(lines[:-1]))
