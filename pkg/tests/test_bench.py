import csv

import pytest

from qhe_cloud import bench
from qhe_cloud.client import DirectCloud


def small(scheme, **kw):
    kw.setdefault("runs", 2)
    kw.setdefault("trace_memory", False)
    return kw


class TestSummands:
    @pytest.mark.parametrize("w", [1, 2, 7, 32])
    def test_exact_width(self, w):
        for run in range(5):
            for x in bench.summands(w, 0, run):
                assert x.bit_length() == w

    def test_deterministic(self):
        assert bench.summands(12, 3, 1) == bench.summands(12, 3, 1)
        assert bench.summands(12, 3, 1) != bench.summands(12, 4, 1)


class TestSweeps:
    def test_record_count(self):
        recs = bench.sweep_input_sizes("qotp", [1, 2, 3], runs=2, trace_memory=False)
        assert len(recs) == 3 * 2 * len(bench.PHASES)
        assert all(r.ok and r.wall_ns > 0 for r in recs)

    def test_total_covers_phases(self):
        recs = bench.sweep_input_sizes("chen", [8], runs=1, trace_memory=False)
        by = {r.phase: r.wall_ns for r in recs}
        assert by["total"] >= sum(by[p] for p in bench.PHASES[:-1])

    def test_chen_staircase(self):
        recs = bench.sweep_input_sizes("chen", range(1, 17), runs=1, trace_memory=False)
        sizes = {r.param: r.ct_bytes for r in recs if r.phase == "total"}
        assert sizes == {w: 7 * -(-w // 4) for w in range(1, 17)}

    def test_qotp_ct_is_width(self):
        recs = bench.sweep_input_sizes("qotp", [1, 5, 20], runs=1, trace_memory=False)
        assert {r.param: r.ct_bytes for r in recs} == {1: 1, 5: 5, 20: 20}

    def test_gsw_ct_grows_with_k(self):
        recs = bench.sweep_key_sizes("gsw", [3, 4, 5, 6], runs=1, trace_memory=False, cloud=DirectCloud())
        sizes = [r.ct_bytes for r in recs if r.phase == "total" and r.ok]
        assert len(sizes) == 4 and sizes == sorted(sizes) and len(set(sizes)) == 4

    def test_memory_trace(self):
        recs = bench.sweep_input_sizes("qotp", [4], runs=1, trace_memory=True)
        assert all(r.peak_alloc_bytes >= 0 for r in recs)

    def test_gsw_overflow_is_recorded(self):
        recs = bench.sweep_input_sizes("gsw", [8], runs=1, trace_memory=False, gsw_bound=16)
        assert len(recs) == 1 and not recs[0].ok and recs[0].wall_ns == -1

    @pytest.mark.parametrize("call", [
        lambda: bench.sweep_input_sizes("xyz", [1]),
        lambda: bench.sweep_input_sizes("qotp", []),
        lambda: bench.sweep_input_sizes("qotp", [1], runs=0),
        lambda: bench.sweep_input_sizes("qotp", [33]),
        lambda: bench.sweep_key_sizes("gsw", [13]),
    ])
    def test_bad_arguments(self, call):
        with pytest.raises(ValueError):
            call()


class TestCsv:
    def test_header_and_rows(self, tmp_path):
        recs = bench.sweep_input_sizes("qotp", [2, 1], runs=2, trace_memory=False)
        path = tmp_path / "out.csv"
        assert bench.write_csv(recs, path) == len(recs)
        lines = path.read_text().splitlines()
        assert lines[0] == bench.CSV_HEADER
        rows = list(csv.reader(lines[1:]))
        assert len(rows) == len(recs)
        assert [int(r[2]) for r in rows] == sorted(int(r[2]) for r in rows)

    def test_empty_is_error(self, tmp_path):
        with pytest.raises(ValueError):
            bench.write_csv([], tmp_path / "x.csv")

    def test_read_back(self, tmp_path):
        recs = bench.sweep_input_sizes("chen", [3], runs=1, trace_memory=False)
        bench.write_csv(recs, tmp_path / "a.csv")
        assert sorted(bench.read_csv(tmp_path / "a.csv"), key=str) == sorted(recs, key=str)


class TestStats:
    def test_medians_skip_failures(self):
        recs = [bench.BenchRecord("gsw", "key", 4, "total", 0, 10, 1),
                bench.BenchRecord("gsw", "key", 4, "total", 1, 30, 1),
                bench.BenchRecord("gsw", "key", 4, "total", 2, -1, -1, error="x")]
        assert bench.medians(recs) == {4: 20}

    def test_inversions(self):
        assert bench.inversions([1, 2, 3]) == 0
        assert bench.inversions([1, 3, 2, 4, 1]) == 2

    def test_phase_shares_sum_to_one(self):
        recs = bench.sweep_input_sizes("qotp", [4], runs=3, trace_memory=False)
        assert sum(bench.phase_shares(recs, 4).values()) == pytest.approx(1.0)


def test_render(tmp_path):
    from qhe_cloud.report import render
    recs = bench.sweep_input_sizes("qotp", [1, 2], runs=1, trace_memory=False)
    recs += bench.sweep_input_sizes("chen", [1, 2], runs=1, trace_memory=False)
    paths = render(recs, tmp_path / "sweep.csv")
    assert [p.name for p in paths] == ["sweep_runtime.png", "sweep_phases.png", "sweep_size.png"]
    assert all(p.read_bytes()[:4] == b"\x89PNG" for p in paths)
