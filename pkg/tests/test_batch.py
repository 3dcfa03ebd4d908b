"""Unit tests for the batch driver."""

import json
import tempfile
from pathlib import Path

from planar_decomp import batch
from planar_decomp.batch import BatchSummary, ItemResult, cert_path, expand_inputs, process_item, run_batch
from planar_decomp.certify import verify_nice
from planar_decomp.config import RunConfig
from planar_decomp.formats import emit_graph, parse_cert, read_text, write_atomic
from plane_builders import cycle, k4, triangle


def write_graphs(directory):
    paths = []
    for name, g in (("a-triangle", triangle()), ("b-k4", k4()), ("c-pentagon", cycle(5))):
        paths.append(str(write_atomic(Path(directory) / f"{name}.json", emit_graph(g))))
    return paths


def test_expand_inputs_skips_outputs():
    """Test that directories expand to graphs only, in name order."""
    with tempfile.TemporaryDirectory() as tmpdir:
        paths = write_graphs(tmpdir)
        write_atomic(Path(tmpdir) / "a-triangle.cert.json", "{}")
        write_atomic(Path(tmpdir) / "summary.json", "{}")

        assert expand_inputs([tmpdir]) == paths
        assert expand_inputs(["x.json"]) == ["x.json"]


def test_cert_path():
    """Test certificate names next to the input or in an output directory."""
    assert cert_path("graphs/g1.json", None) == Path("graphs/g1.cert.json")
    assert cert_path("graphs/g1.json", "out") == Path("out/g1.cert.json")


def test_run_batch_reports_each_item():
    """Test a batch with one out-of-class graph."""
    with tempfile.TemporaryDirectory() as tmpdir:
        paths = write_graphs(Path(tmpdir) / "in")
        out = Path(tmpdir) / "out"
        config = RunConfig(command="batch", inputs=[str(Path(tmpdir) / "in")], out=str(out), workers=1)

        summary = run_batch(config)

        assert [item.status for item in summary.items] == ["ok", "class", "ok"]
        assert summary.exit_code == 1
        assert sorted(p.name for p in out.iterdir()) == [
            "a-triangle.cert.json",
            "c-pentagon.cert.json",
            "summary.json",
        ]
        cert = parse_cert(read_text(out / "c-pentagon.cert.json"))
        assert verify_nice(cycle(5), cert).ok
        doc = json.loads(read_text(out / "summary.json"))
        assert doc["passed"] == 2 and doc["failed"] == 1
        assert doc["items"][0]["input"] == paths[0]


def test_run_batch_fail_fast():
    """Test that fail-fast stops at the first failure when run serially."""
    with tempfile.TemporaryDirectory() as tmpdir:
        write_graphs(tmpdir)
        config = RunConfig(inputs=[tmpdir], out=str(Path(tmpdir) / "out"), workers=1, fail_fast=True)

        summary = run_batch(config)

        assert [item.status for item in summary.items] == ["ok", "class"]


def test_run_batch_without_inputs():
    """Test that an empty batch passes."""
    with tempfile.TemporaryDirectory() as tmpdir:
        summary = run_batch(RunConfig(inputs=[tmpdir], workers=1))

        assert summary.items == []
        assert summary.exit_code == 0


def test_process_item_reports_parse_errors():
    """Test that an unreadable file becomes an error item."""
    with tempfile.TemporaryDirectory() as tmpdir:
        bad = Path(tmpdir) / "bad.json"
        bad.write_text("{ not json")

        result = process_item(str(bad), RunConfig(workers=1))

        assert result.status == "error"
        assert "line 1" in result.message


def test_summary_exit_codes():
    """Test that a theorem violation outranks other failures."""
    summary = BatchSummary(items=[ItemResult("a", "ok"), ItemResult("b", "class")])
    assert summary.exit_code == 1

    summary.items.append(ItemResult("c", "theorem"))
    assert summary.exit_code == 3
    assert BatchSummary().exit_code == 0


def test_run_batch_survives_unexpected_errors(monkeypatch):
    """Test that an exception outside the error hierarchy fails one item only."""
    def flaky_read(path):
        if path.endswith("b-k4.json"):
            raise KeyError("rotations")
        return read_text(path)

    monkeypatch.setattr(batch, "read_text", flaky_read)
    with tempfile.TemporaryDirectory() as tmpdir:
        write_graphs(Path(tmpdir) / "in")
        out = Path(tmpdir) / "out"
        config = RunConfig(inputs=[str(Path(tmpdir) / "in")], out=str(out), workers=1)

        summary = run_batch(config)

        assert [item.status for item in summary.items] == ["ok", "error", "ok"]
        assert summary.items[1].message == "KeyError: 'rotations'"
        assert summary.exit_code == 1
        assert json.loads(read_text(out / "summary.json"))["failed"] == 1


def test_summary_is_reproducible():
    """Test that two runs of one batch write the same summary."""
    with tempfile.TemporaryDirectory() as tmpdir:
        write_graphs(Path(tmpdir) / "in")
        out = Path(tmpdir) / "out"
        config = RunConfig(inputs=[str(Path(tmpdir) / "in")], out=str(out), workers=1)

        run_batch(config)
        first = read_text(out / "summary.json")
        run_batch(config)
        second = read_text(out / "summary.json")

        assert first == second
        doc = json.loads(first)
        assert "seconds" not in doc and "peak_rss_mb" not in doc
        assert all("seconds" not in item and "rss_mb" not in item for item in doc["items"])
        assert doc["items"][0]["reductions"] == {"LowDegree": 1}
        assert doc["items"][2]["reductions"] == {"LowDegree": 3}
