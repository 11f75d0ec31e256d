import json

import pytest

from changegpt.evalharness.dataset import DatasetError, Question, load_dataset, save_dataset
from changegpt.evalharness.fixture_suite import build_demo_suite, build_fault_suite
from changegpt.evalharness.judge import boolean, numeric
from changegpt.evalharness.runner import (
    EvalRecord,
    EvalReport,
    make_scripted_runner,
    run_eval,
    score_question,
)
from changegpt.navigator.records import Trace
from changegpt.toolkit.fixtures import FixtureStore
from changegpt.toolkit.tools import build_default_registry


@pytest.fixture(scope="module")
def demo_suite(tmp_path_factory):
    out = tmp_path_factory.mktemp("suite")
    build_demo_suite(out)
    return out


@pytest.fixture(scope="module")
def fault_suite(tmp_path_factory):
    out = tmp_path_factory.mktemp("faults")
    build_fault_suite(out)
    return out


def suite_registry(root):
    return build_default_registry(fixtures=FixtureStore(root / "fixtures"))


class TestDataset:
    def test_demo_dataset_loads_and_covers_every_cell(self, demo_suite):
        questions = load_dataset(demo_suite / "dataset.jsonl")
        assert len(questions) == 20
        cells = {(q.qtype, q.subtype) for q in questions}
        assert cells == {
            ("Whether", "/"),
            ("Size", "Basic"),
            ("Size", "Certain Class"),
            ("Size", "Local Area"),
            ("Size", "Analysis"),
            ("Number", "Basic"),
            ("Number", "Local Area"),
            ("Number", "Comparison"),
            ("Class", "Whole Image"),
            ("Class", "Local Area"),
        }

    def test_round_trip(self, tmp_path, demo_suite):
        questions = load_dataset(demo_suite / "dataset.jsonl")
        save_dataset(questions, tmp_path / "copy.jsonl")
        assert load_dataset(tmp_path / "copy.jsonl") == questions

    def test_error_carries_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(
            {
                "id": "x", "type": "Whether", "subtype": "/", "text": "t",
                "images": {"pre": "a.png", "cur": "b.png"},
                "required_tools": ["whether_change"],
                "reference": {"kind": "boolean", "expected": True},
            }
        )
        path.write_text(good + "\n{not json\n")
        with pytest.raises(DatasetError) as exc_info:
            load_dataset(path)
        assert exc_info.value.line == 2

    def test_illegal_subtype_rejected(self, tmp_path):
        bad = {
            "id": "x", "type": "Whether", "subtype": "Comparison", "text": "t",
            "images": {"pre": "a.png", "cur": "b.png"},
            "required_tools": ["whether_change"],
            "reference": {"kind": "boolean", "expected": True},
        }
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(bad) + "\n")
        with pytest.raises(DatasetError):
            load_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError):
            load_dataset(tmp_path / "absent.jsonl")


class TestPerfectRun:
    def test_twenty_questions_all_perfect(self, demo_suite):
        registry = suite_registry(demo_suite)
        runner = make_scripted_runner(demo_suite / "scripts", registry, demo_suite)
        report = run_eval(demo_suite / "dataset.jsonl", runner, registry)
        totals = report.totals
        assert totals.count == 20
        assert totals.precision == 1.0
        assert totals.recall == 1.0
        assert totals.match == 1.0
        assert all(v == 0 for v in report.error_histogram().values())

    def test_difficulty_partition(self, demo_suite):
        registry = suite_registry(demo_suite)
        runner = make_scripted_runner(demo_suite / "scripts", registry, demo_suite)
        report = run_eval(demo_suite / "dataset.jsonl", runner, registry)
        buckets = report.by_difficulty()
        assert sum(s.count for s in buckets.values()) == report.totals.count
        assert set(buckets) == {"Easy", "Medium", "Difficult"}

    def test_repeated_runs_byte_identical(self, demo_suite):
        registry = suite_registry(demo_suite)

        def traces():
            runner = make_scripted_runner(demo_suite / "scripts", registry, demo_suite)
            out = {}
            for question in load_dataset(demo_suite / "dataset.jsonl"):
                answer, trace = runner(question)
                out[question.id] = trace.to_json()
            return out

        assert traces() == traces()


class TestFaultInjection:
    def test_error_histogram_exact(self, fault_suite):
        registry = suite_registry(fault_suite)
        runner = make_scripted_runner(fault_suite / "scripts", registry, fault_suite)
        report = run_eval(fault_suite / "dataset.jsonl", runner, registry)
        assert report.totals.match == 0.0
        assert report.error_histogram() == {
            "Misunderstood": 2,
            "InsufficientTools": 2,
            "IncorrectTools": 2,
            "TooComplex": 2,
        }


class TestIsolationAndValidation:
    def test_crashing_question_recorded_not_fatal(self, demo_suite):
        registry = suite_registry(demo_suite)
        questions = load_dataset(demo_suite / "dataset.jsonl")[:3]
        good_runner = make_scripted_runner(demo_suite / "scripts", registry, demo_suite)

        def runner(question):
            if question.id == "q02":
                raise RuntimeError("simulated crash")
            return good_runner(question)

        report = run_eval(questions, runner, registry)
        assert report.totals.count == 3
        crashed = [r for r in report.records if r.question_id == "q02"][0]
        assert crashed.correct is False
        assert crashed.tools_used == ()
        assert crashed.error_class == "TooComplex"

    def test_unknown_required_tool_is_dataset_error(self, demo_suite):
        registry = suite_registry(demo_suite)
        question = Question(
            id="zz", qtype="Whether", subtype="/", text="t",
            pre_image="images/q01_pre.png", cur_image="images/q01_cur.png",
            required_tools=("time_travel",), reference=boolean(True),
        )
        with pytest.raises(DatasetError):
            run_eval([question], lambda q: ("", Trace()), registry)


class TestReportShape:
    def _synthetic_records(self):
        records = []
        for i, (difficulty, correct) in enumerate(
            [("Easy", True), ("Easy", True), ("Medium", True), ("Medium", False), ("Difficult", False)]
        ):
            records.append(
                EvalRecord(
                    question_id=f"s{i}", qtype="Size", subtype="Basic", difficulty=difficulty,
                    tools_used=("a",), precision=1.0, recall=0.5 if not correct else 1.0,
                    correct=correct, error_class=None if correct else "InsufficientTools",
                    latency_ms=1.0, answer="x",
                )
            )
        return records

    def test_totals_recomputable_from_records(self):
        report = EvalReport(records=self._synthetic_records())
        assert report.totals.match == pytest.approx(3 / 5)
        buckets = report.by_difficulty()
        weighted = sum(s.match * s.count for s in buckets.values()) / report.totals.count
        assert weighted == pytest.approx(report.totals.match)

    def test_json_and_markdown_rendering(self):
        report = EvalReport(records=self._synthetic_records())
        payload = json.loads(report.to_json())
        assert payload["totals"]["count"] == 5
        assert payload["error_histogram"]["InsufficientTools"] == 2
        markdown = report.to_markdown()
        assert "| Total | 5 |" in markdown
        assert "InsufficientTools" in markdown
        assert report.summary_line().startswith("P=")

    def test_score_question_flags_numberless_numeric_answer(self):
        question = Question(
            id="n", qtype="Size", subtype="Basic", text="t",
            pre_image="a.png", cur_image="b.png",
            required_tools=("pixel_counting",), reference=numeric(10.0, 0.01),
        )
        record = score_question(question, "lots of change", ("pixel_counting",), 1.0)
        assert record.correct is False
        assert record.flag is not None
        assert record.error_class == "Misunderstood"  # P = R = 1 but wrong
