import json

from modlab.report import CheckRecord, Report, Series, format_float, report_to_json, write_report


def sample_report():
    return Report(
        command="demo",
        checks=[CheckRecord(name="a", value=1.0 / 3.0, bound=0.5, margin=0.5 - 1.0 / 3.0, passed=True)],
        series=[Series(name="s", columns=["x", "y"], rows=[[1.0, 2.0], [0.5, 0.25]])],
        meta={"p": 2.0, "note": "x"},
    )


class TestFloatFormat:
    def test_17_significant_digits(self):
        assert format_float(1.0 / 3.0) == "0.33333333333333331"
        assert format_float(2.0) == "2"

    def test_round_trip_losslessness(self):
        for x in (1.0 / 3.0, 1e-300, 123456.789e10, 5e-324):
            assert float(format_float(x)) == x


class TestReportSerialization:
    def test_emits_valid_json(self):
        text = report_to_json(sample_report())
        parsed = json.loads(text)
        assert parsed["command"] == "demo"
        assert parsed["checks"][0]["pass"] is True
        assert parsed["passed"] is True

    def test_byte_stability_apart_from_wall_time(self):
        a, b = sample_report(), sample_report()
        a.wall_time_s, b.wall_time_s = 0.123, 9.876
        lines_a = [ln for ln in report_to_json(a).splitlines() if "wall_time" not in ln]
        lines_b = [ln for ln in report_to_json(b).splitlines() if "wall_time" not in ln]
        assert lines_a == lines_b

    def test_pass_flag_is_function_of_checks(self):
        r = sample_report()
        assert r.passed
        r.checks.append(CheckRecord(name="bad", value=2.0, bound=1.0, margin=-1.0, passed=False))
        assert not r.passed
        assert json.loads(report_to_json(r))["passed"] is False

    def test_write_report(self, tmp_path):
        path = tmp_path / "r.json"
        write_report(sample_report(), path)
        assert json.loads(path.read_text())["command"] == "demo"

    def test_nan_and_inf_render(self):
        r = Report(command="x", checks=[CheckRecord(name="n", value=float("nan"), passed=True)])
        assert "NaN" in report_to_json(r)
