import pytest

from qhe_cloud import bench
from qhe_cloud.cli import main

from conftest import free_port


@pytest.mark.parametrize("scheme, a, b", [("chen", 200, 100), ("qotp", 5, 3), ("gsw", 4, 5)])
def test_add_local(scheme, a, b, capsys):
    assert main(["add", "--scheme", scheme, "--a", str(a), "--b", str(b), "--endpoint", "local", "--seed", "1"]) == 0
    assert capsys.readouterr().out.strip() == str(a + b)


def test_add_over_http(server, capsys):
    assert main(["add", "--scheme", "qotp", "--a", "0x10", "--b", "1", "--endpoint", server.url]) == 0
    assert capsys.readouterr().out.strip() == "17"


def test_add_env_endpoint(server, monkeypatch, capsys):
    monkeypatch.setenv("QHE_CLOUD_ENDPOINT", server.url)
    assert main(["add", "--scheme", "chen", "--a", "9", "--b", "9"]) == 0
    assert capsys.readouterr().out.strip() == "18"


def test_gsw_out_of_range():
    assert main(["add", "--scheme", "gsw", "--a", "9", "--b", "9", "--endpoint", "local", "--gsw-bound", "16"]) == 4


def test_unreachable():
    assert main(["add", "--scheme", "qotp", "--a", "1", "--b", "1", "--endpoint", f"http://127.0.0.1:{free_port()}"]) == 3


@pytest.mark.parametrize("argv", [
    ["add", "--scheme", "xyz", "--a", "1", "--b", "1"],
    ["add", "--scheme", "chen", "--a", "-1", "--b", "1"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_serve_bad_port():
    assert main(["serve", "--port", "0"]) == 2


def test_serve_port_taken(server):
    assert main(["serve", "--port", str(server.server_address[1])]) == 1


def test_bench_writes_csv_and_figures(tmp_path, capsys):
    out = tmp_path / "input.csv"
    assert main(["bench", "--sweep", "input", "--scheme", "all", "--runs", "1",
                 "--values", "1,2", "--out", str(out), "--no-memory"]) == 0
    recs = bench.read_csv(out)
    assert {r.scheme for r in recs} == {"chen", "gsw", "qotp"}
    for suffix in ("runtime", "phases", "size"):
        assert (tmp_path / f"input_{suffix}.png").exists()


def test_bench_no_figures(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["bench", "--sweep", "key", "--scheme", "gsw", "--runs", "1", "--values", "3,4",
                 "--out", str(out), "--no-figures", "--endpoint", "direct"]) == 0
    assert out.exists() and not (tmp_path / "k_runtime.png").exists()


def test_bench_bad_values(tmp_path):
    assert main(["bench", "--sweep", "key", "--scheme", "gsw", "--values", "20",
                 "--out", str(tmp_path / "x.csv")]) == 2
