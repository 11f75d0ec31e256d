import random

import pytest

from changegpt.evalharness.judge import (
    AnswerSpec,
    NoNumberFound,
    boolean,
    categorical,
    checklist,
    judge_answer,
    judge_answer_safe,
    numeric,
)
from changegpt.evalharness.metrics import (
    DIFFICULT,
    EASY,
    EmptyRequirement,
    EmptySet,
    INCORRECT_TOOLS,
    INSUFFICIENT_TOOLS,
    MEDIUM,
    MISUNDERSTOOD,
    TOO_COMPLEX,
    bucket_difficulty,
    classify_error,
    estimate_latency,
    match_rate,
    precision,
    recall,
)
from changegpt.evalharness.stats import NoDiscordantPairs, exact_binomial_p, mcnemar

from oracles import multiset_intersection_size


class TestPrecisionRecall:
    def test_exact_selection(self):
        assert precision(["a", "b"], ["a", "b"]) == 1.0
        assert recall(["a", "b"], ["a", "b"]) == 1.0

    def test_extra_tool(self):
        assert precision(["a", "b", "c"], ["a", "b"]) == pytest.approx(2 / 3)
        assert recall(["a", "b", "c"], ["a", "b"]) == 1.0

    def test_empty_used_degenerates_to_zero_precision(self):
        assert precision([], ["a"]) == 0.0
        assert recall([], ["a"]) == 0.0

    def test_missing_tool(self):
        assert recall(["a"], ["a", "b"]) == 0.5
        assert precision(["a"], ["a", "b"]) == 1.0

    def test_disjoint(self):
        assert recall(["x", "y"], ["a", "b"]) == 0.0

    def test_empty_requirement_rejected(self):
        with pytest.raises(EmptyRequirement):
            recall(["a"], [])

    def test_multiset_semantics(self):
        # a needed twice but used once: only one selection counts
        assert recall(["a"], ["a", "a"]) == 0.5
        assert precision(["a", "a", "a"], ["a", "a"]) == pytest.approx(2 / 3)

    def test_against_multiset_oracle(self):
        rng = random.Random(99)
        names = ["a", "b", "c", "d"]
        for _ in range(300):
            used = [rng.choice(names) for _ in range(rng.randrange(0, 6))]
            required = [rng.choice(names) for _ in range(rng.randrange(1, 6))]
            inter = multiset_intersection_size(used, required)
            assert recall(used, required) == inter / len(required)
            if used:
                assert precision(used, required) == inter / len(used)

    def test_identities(self):
        rng = random.Random(7)
        names = ["a", "b", "c"]
        for _ in range(200):
            required = [rng.choice(names) for _ in range(rng.randrange(1, 5))]
            extra = [rng.choice(names) for _ in range(rng.randrange(0, 3))]
            superset = required + extra
            assert recall(superset, required) == 1.0
            subset = required[: rng.randrange(1, len(required) + 1)]
            assert precision(subset, required) == 1.0
            assert precision(required, required) == 1.0 and recall(required, required) == 1.0


class TestMatchRate:
    def test_published_totals(self):
        assert match_rate([True] * 127 + [False] * 13) == pytest.approx(0.9071, abs=5e-5)
        assert match_rate([True] * 75 + [False] * 65) == pytest.approx(0.5357, abs=5e-5)

    def test_all_correct(self):
        assert match_rate([True, True]) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(EmptySet):
            match_rate([])


class TestJudgeAnswer:
    def test_boolean_yes(self):
        assert judge_answer("Yes, there is a discernible change.", boolean(True))
        assert not judge_answer("No change at all.", boolean(True))
        assert judge_answer("No.", boolean(False))
        assert not judge_answer("perhaps", boolean(True))

    def test_numeric_tolerance(self):
        assert judge_answer("about 25.1%", numeric(25.0, 0.01))
        assert not judge_answer("about 25.1%", numeric(25.0, 0.001))
        assert judge_answer("0.5 exactly", numeric(0.5, 0.01))  # absolute near zero
        assert not judge_answer("0.52", numeric(0.5, 0.01))

    def test_numeric_no_number(self):
        with pytest.raises(NoNumberFound):
            judge_answer("quite a lot", numeric(10.0, 0.1))
        correct, flag = judge_answer_safe("quite a lot", numeric(10.0, 0.1))
        assert correct is False and flag is not None

    def test_categorical(self):
        assert judge_answer("the area is now mostly water.", categorical("water"))
        assert judge_answer("Farmland it was.", categorical("farmland", "cropland"))
        assert not judge_answer("unclear", categorical("water"))

    def test_checklist_composition(self):
        spec = checklist(categorical("farmland"), categorical("building"))
        assert judge_answer("the area was farmland and is now building", spec)
        assert not judge_answer("the area was farmland throughout", spec)

    def test_round_trip_serialization(self):
        spec = checklist(boolean(True), numeric(5.0, 0.01), categorical("water"))
        assert AnswerSpec.from_dict(spec.to_dict()) == spec

    def test_determinism(self):
        spec = checklist(categorical("water"), numeric(3.0, 0.5))
        answer = "water went up by 3"
        assert judge_answer(answer, spec) == judge_answer(answer, spec)


class TestDifficulty:
    def test_buckets(self):
        assert bucket_difficulty(["a"]) == EASY
        assert bucket_difficulty(["a", "b"]) == MEDIUM
        assert bucket_difficulty(["a"] * 5) == DIFFICULT
        assert bucket_difficulty({"a": 2, "b": 1}) == DIFFICULT

    def test_empty_rejected(self):
        with pytest.raises(EmptyRequirement):
            bucket_difficulty([])


class TestClassifyError:
    def test_published_rules(self):
        assert classify_error(1.0, 1.0, False) == MISUNDERSTOOD
        assert classify_error(1.0, 0.5, False) == INSUFFICIENT_TOOLS
        assert classify_error(0.5, 1.0, False) == INCORRECT_TOOLS
        assert classify_error(0.0, 0.0, False) == TOO_COMPLEX

    def test_correct_answer_has_no_error_class(self):
        assert classify_error(0.2, 0.9, True) is None

    def test_equal_midrange_counts_as_incorrect_tools(self):
        assert classify_error(0.5, 0.5, False) == INCORRECT_TOOLS

    def test_total_over_unit_square(self):
        rng = random.Random(3)
        for _ in range(500):
            p = rng.choice([0.0, 1.0, rng.random()])
            r = rng.choice([0.0, 1.0, rng.random()])
            assert classify_error(p, r, False) in (
                MISUNDERSTOOD,
                INSUFFICIENT_TOOLS,
                INCORRECT_TOOLS,
                TOO_COMPLEX,
            )


class TestMcNemar:
    def test_continuity_corrected_statistic(self):
        statistic, p = mcnemar(5, 15)
        assert statistic == pytest.approx(4.05, abs=1e-12)
        assert p == pytest.approx(0.0442, abs=5e-4)

    def test_against_scipy_chi2_oracle(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        for b, c in ((5, 15), (2, 60), (30, 40), (1, 10)):
            statistic, p = mcnemar(b, c)
            assert p == pytest.approx(scipy_stats.chi2.sf(statistic, df=1), abs=1e-12)

    def test_statistic_symmetry(self):
        assert mcnemar(3, 11)[0] == mcnemar(11, 3)[0]

    def test_equal_counts_with_correction(self):
        statistic, p = mcnemar(2, 2)
        assert statistic == pytest.approx(1.0 / 4.0)
        assert p > 0.3

    def test_exact_binomial_variant_against_scipy(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        for b, c in ((2, 2), (5, 15), (1, 9), (0, 4)):
            _, p = mcnemar(b, c, exact=True)
            expected = scipy_stats.binomtest(min(b, c), b + c, 0.5).pvalue
            assert p == pytest.approx(expected, abs=1e-12)
        assert mcnemar(2, 2, exact=True)[1] > 0.3

    def test_large_margin_significance_direction(self):
        _, p = mcnemar(2, 60)
        assert p < 0.001

    def test_no_discordant_pairs(self):
        with pytest.raises(NoDiscordantPairs):
            mcnemar(0, 0)

    def test_exact_p_never_exceeds_one(self):
        assert exact_binomial_p(3, 3) == 1.0


class TestLatencyModel:
    def test_rounds_column(self):
        assert estimate_latency(1, (0.15, 0.5), (2.5, 5.0))[0] == 3
        assert estimate_latency(2, (0.2, 0.6), (2.5, 5.0))[0] == 4
        assert estimate_latency(4, (0.4, 1.5), (2.5, 5.0))[0] == 6

    def test_total_range_formula(self):
        rounds, (low, high) = estimate_latency(4, (0.4, 1.5), (2.5, 5.0))
        assert rounds == 6
        assert low == pytest.approx(16.6)
        assert high == pytest.approx(36.0)

    def test_tool_count_must_be_positive(self):
        with pytest.raises(ValueError):
            estimate_latency(0, (0.1, 0.2), (1.0, 2.0))
