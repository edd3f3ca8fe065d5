import shutil
import subprocess
import sys

import numpy as np
import pytest

from commscale.cli import main
from commscale.datasets import lesmis_path


@pytest.fixture()
def lesmis_file(tmp_path):
    dest = tmp_path / "lesmis.tsv"
    shutil.copy(lesmis_path(), dest)
    return str(dest)


def test_select_svps_lesmis(lesmis_file, tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(
        [
            "select", "--method", "svps", "--input", lesmis_file, "--tau", "0.1",
            "--cluster", "score", "--epsilon", "0.05", "--seed", "1", "--out", str(out),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "K_hat=6\n"
    lines = out.read_text().splitlines()
    assert lines[0] == "method,m,value,status,selected"
    assert lines[-1].startswith("svps,6,") and lines[-1].endswith(",ok,1")


def test_select_requires_likelihood_for_cbic(lesmis_file, capsys):
    code = main(["select", "--method", "cbic", "--input", lesmis_file])
    assert code == 1
    assert "--likelihood" in capsys.readouterr().err


def test_select_missing_input_is_usage_error(capsys):
    assert main(["select", "--method", "svps"]) == 1
    assert "--input" in capsys.readouterr().err


def test_select_cbic_binarized(lesmis_file, capsys):
    code = main(
        [
            "select", "--method", "cbic", "--input", lesmis_file, "--binarize",
            "--likelihood", "bernoulli", "--seed", "0",
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "K_hat=3\n"


def test_data_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("0 1 -2\n")
    assert main(["select", "--input", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_scale_ones(tmp_path, capsys):
    path = tmp_path / "ones3.csv"
    path.write_text("1,1,1\n1,1,1\n1,1,1\n")
    assert main(["scale", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("psi=(0.57735, 0.57735, 0.57735)")


def test_scale_convergence_failure(tmp_path, capsys):
    path = tmp_path / "v.csv"
    path.write_text("1,2\n2,5\n")
    assert main(["scale", "--input", str(path), "--max-iter", "0"]) == 2
    assert "residual" in capsys.readouterr().err


def test_fit_emits_parameters(lesmis_file, tmp_path, capsys):
    out = tmp_path / "fit.csv"
    code = main(["fit", "--input", lesmis_file, "--m", "3", "--seed", "0", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out.startswith("m=3 sizes=(")
    lines = out.read_text().splitlines()
    assert lines[0] == "quantity,i,j,value"
    assert sum(1 for l in lines if l.startswith("theta,")) == 77
    assert sum(1 for l in lines if l.startswith("block_matrix,")) == 9
    assert sum(1 for l in lines if l.startswith("block_size,")) == 3


def test_simulate_round_trip(tmp_path, capsys):
    out = tmp_path / "sim.tsv"
    args = [
        "simulate", "--dist", "poisson", "--rho", "0.3", "--r", "3", "--k", "2",
        "--n-all", "15,20", "--seed", "7", "--out", str(out),
    ]
    assert main(args) == 0
    first = out.read_text()
    summary = capsys.readouterr().out
    assert summary.startswith("n=35 k=2")
    assert main(args) == 0
    assert out.read_text() == first

    from commscale.network import load_edge_list

    adj = load_edge_list(str(out), n=35)
    assert adj.n == 35


def test_bench_lesmis_packaged_default(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code = main(["bench", "lesmis", "--tau", "0.1,0.5", "--seed", "0", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "clusterer,selector,variant,k_hat"
    assert "score,svps,tau=0.1,6" in lines
    assert "score,svps,tau=0.5,6" in lines


def test_bench_run_config(tmp_path, capsys):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(
        "distribution = poisson\nrho = 0.3\nr = 3\nk_list = 2\nn_all = 20,30\n"
        "replicates = 3\nseed = 1\nmethod = svps score epsilon=0.05\n"
    )
    out = tmp_path / "table.csv"
    assert main(["bench", "run", "--config", str(cfg), "--out", str(out)]) == 0
    first = out.read_text()
    assert first.splitlines()[0] == "K,method,accuracy,replicates,mean_khat,failures"
    assert main(["bench", "run", "--config", str(cfg), "--out", str(out), "--jobs", "2"]) == 0
    assert out.read_text() == first


def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == 1
    assert "subcommand" in capsys.readouterr().err


def test_help_exits_zero_and_lists_flags(capsys):
    assert main(["select", "--help"]) == 0
    text = capsys.readouterr().out
    for flag in ("--method", "--epsilon", "--kmax", "--cluster", "--variance",
                 "--likelihood", "--tau", "--seed", "--binarize"):
        assert flag in text


def test_seed_env_fallback(lesmis_file, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("COMMSCALE_SEED", "1")
    code = main(["select", "--input", lesmis_file, "--tau", "0.1"])
    assert code == 0
    assert capsys.readouterr().out == "K_hat=6\n"


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "commscale.cli", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "select" in proc.stdout
