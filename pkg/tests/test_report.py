import json
import xml.etree.ElementTree as ET

import jsonschema
import pytest

from poswise.figures import render_loss_figure
from poswise.optimizers import TrainRecord
from poswise.report import (
    REPORT_SCHEMA,
    build_report,
    emit_csv,
    emit_json,
    emit_svg,
    parse_csv,
    strip_timing,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def record(history, reached=None, wall=1.0, diverged=False):
    return TrainRecord(
        loss_history=list(history),
        epochs_to_threshold=reached,
        wall_seconds=wall,
        update_counts=[[1]] * len(history),
        diverged=diverged,
    )


def sample_report(gd_hist, pw_hist=None, threshold=0.1):
    records = {"gd": record(gd_hist)}
    if pw_hist is not None:
        records["poswise"] = record(pw_hist)
    return build_report("synthetic", 7, 0.1, threshold, {"dataset": "synthetic"}, records)


class TestJson:
    def test_schema_valid(self, tmp_path):
        report = sample_report([0.5, 0.4, 0.3], [0.5, 0.2])
        path = emit_json(report, tmp_path / "report.json")
        loaded = json.loads(path.read_text())
        jsonschema.validate(loaded, REPORT_SCHEMA)

    def test_single_optimizer_schema_valid(self):
        jsonschema.validate(sample_report([0.5]), REPORT_SCHEMA)

    def test_strip_timing_removes_wall_seconds(self):
        stripped = strip_timing(sample_report([0.5], [0.4]))
        for entry in stripped["optimizers"].values():
            assert "wall_seconds" not in entry

    def test_extra_fields_rejected_by_schema(self):
        report = sample_report([0.5])
        report["surprise"] = 1
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(report, REPORT_SCHEMA)


class TestCsv:
    def test_line_count(self, tmp_path):
        path = emit_csv(sample_report([0.5, 0.4, 0.3], [0.5, 0.4, 0.3]), tmp_path / "l.csv")
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 4
        assert lines[0] == "epoch,loss_gd,loss_pw"

    def test_ragged_termination(self, tmp_path):
        path = emit_csv(sample_report([0.5, 0.4, 0.3, 0.2, 0.1], [0.5, 0.4, 0.3]), tmp_path / "l.csv")
        lines = path.read_text().strip().splitlines()
        assert lines[4] == "4,0.2,"
        assert lines[5] == "5,0.1,"

    def test_round_trip_exact(self, tmp_path):
        gd = [1 / 3, 2 / 7, 0.1234567890123456789]
        pw = [0.9, 1e-17]
        path = emit_csv(sample_report(gd, pw), tmp_path / "l.csv")
        parsed = parse_csv(path)
        assert parsed["loss_gd"] == gd
        assert parsed["loss_pw"] == pw

    def test_single_optimizer_column(self, tmp_path):
        path = emit_csv(sample_report([0.5, 0.4]), tmp_path / "l.csv")
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "epoch,loss_gd"
        assert all(line.count(",") == 1 for line in lines)


class TestSvg:
    def polylines(self, path):
        root = ET.parse(path).getroot()
        return root.findall(f".//{SVG_NS}polyline")

    def test_two_series_two_polylines(self, tmp_path):
        path = emit_svg(sample_report([0.5, 0.4, 0.3], [0.5, 0.2, 0.1]), tmp_path / "l.svg")
        assert len(self.polylines(path)) == 2

    def test_axis_titles_and_threshold(self, tmp_path):
        path = emit_svg(sample_report([0.5, 0.4], [0.5, 0.3]), tmp_path / "l.svg")
        text = path.read_text()
        assert ">epoch</text>" in text and ">loss</text>" in text
        assert "stroke-dasharray" in text
        assert "http://" not in text.replace("http://www.w3.org/2000/svg", "")

    def test_constant_histories_horizontal_lines(self, tmp_path):
        path = emit_svg(sample_report([0.4, 0.4, 0.4], [0.2, 0.2, 0.2]), tmp_path / "l.svg")
        lines = self.polylines(path)
        ys = []
        for poly in lines:
            pts = [p.split(",") for p in poly.attrib["points"].split()]
            y_coords = {pt[1] for pt in pts}
            assert len(y_coords) == 1  # horizontal
            ys.append(y_coords.pop())
        assert ys[0] != ys[1]

    def test_single_epoch_renders_points(self, tmp_path):
        path = emit_svg(sample_report([0.5], [0.4]), tmp_path / "l.svg")
        root = ET.parse(path).getroot()
        assert len(root.findall(f".//{SVG_NS}circle")) == 2
        assert len(self.polylines(path)) == 0

    def test_well_formed_xml(self, tmp_path):
        path = emit_svg(sample_report([0.5, 0.1], [0.6, 0.05]), tmp_path / "l.svg")
        ET.parse(path)  # raises on malformed XML


class TestFigure:
    def test_png_written(self, tmp_path):
        path = render_loss_figure(sample_report([0.5, 0.4, 0.3], [0.5, 0.2, 0.1]), tmp_path / "l.png")
        raw = path.read_bytes()
        assert raw[:8] == b"\x89PNG\r\n\x1a\n"

    def test_single_optimizer_figure(self, tmp_path):
        path = render_loss_figure(sample_report([0.5, 0.4]), tmp_path / "l.png")
        assert path.stat().st_size > 0
