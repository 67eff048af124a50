import numpy as np
import pytest

from helmmg import presets
from helmmg.cli import (
    EXIT_DENSE_LIMIT,
    EXIT_DIVERGED,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


def test_solve_constant_k(capsys, tmp_path):
    out = tmp_path / "hist.csv"
    rc = main(["solve", "--k", "10", "--nu", "2", "--cycle", "v",
               "--out", str(out)])
    assert rc == EXIT_OK
    text = capsys.readouterr().out
    assert "status=converged" in text
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "cycle,relres"
    assert float(lines[-1].split(",")[1]) <= 1e-5


def test_solve_variable_k_field_dump(capsys, tmp_path):
    dump = tmp_path / "field.csv"
    rc = main(["solve", "--k-min", "4", "--k-max", "8", "--profile", "sharp",
               "--seed", "3", "--nu", "2", "--shift", "inv-k",
               "--field-dump", str(dump)])
    assert rc == EXIT_OK
    lines = dump.read_text().strip().splitlines()
    assert lines[0] == "x,y,re,im"
    vals = np.array([[float(c) for c in l.split(",")] for l in lines[1:]])
    n = int(round(np.sqrt(len(vals))))
    assert n * n == len(vals)
    assert np.abs(vals[:, 2] + 1j * vals[:, 3]).max() > 0.0


def test_solve_dump_config(capsys):
    rc = main(["solve", "--k", "10", "--dump-config"])
    assert rc == EXIT_OK
    text = capsys.readouterr().out
    assert "kind = constant-k" in text
    assert "nodes_per_dim = 17" in text
    assert "smoother = jacobi" in text


def test_usage_errors():
    assert main(["solve"]) == EXIT_USAGE  # no wavenumber at all
    assert main(["solve", "--k", "10", "--k-min", "1", "--k-max", "2"]) == EXIT_USAGE
    assert main(["solve", "--k", "10", "--shift", "junk"]) == EXIT_USAGE
    assert main(["solve", "--k", "50", "--n", "11"]) == EXIT_USAGE  # under-resolved
    assert main(["bench", "no-such-preset"]) == EXIT_USAGE
    assert main(["not-a-command"]) == EXIT_USAGE


def test_divergence_exit_code(capsys):
    # an unshifted coarse chain with too few smoothing steps at this k
    # does not reach the tolerance within the cycle budget
    rc = main(["solve", "--k", "20", "--shift", "zero", "--nu", "1",
               "--max-cycles", "5"])
    assert rc == EXIT_DIVERGED


def test_certify_single(capsys, tmp_path):
    out = tmp_path / "report.csv"
    rc = main(["certify", "--k", "5", "--n", "9", "--omega", "3.5",
               "--out", str(out)])
    assert rc == EXIT_OK
    text = capsys.readouterr().out
    assert "Gamma HPD                  : True" in text
    header, row = out.read_text().strip().splitlines()
    assert header.startswith("herm_residual")
    assert len(row.split(",")) == len(header.split(","))


def test_certify_dense_limit(capsys):
    rc = main(["certify", "--k", "40"])  # n = 65 -> 4225^2 dense entries
    assert rc == EXIT_DENSE_LIMIT
    assert "dense" in capsys.readouterr().err


def test_bench_preset_case_filter(capsys, tmp_path):
    out = tmp_path / "bench.csv"
    rc = main(["bench", "h-independence", "--case", "k15-h2e-5",
               "--out", str(out)])
    text = capsys.readouterr().out
    assert "k15-h2e-5-nu1" in text
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "case,expected,measured,status,within_band"
    assert len(lines) == 4  # nu = 1, 2, 4
    assert rc in (EXIT_OK, EXIT_DIVERGED)


def test_bench_unknown_case(capsys):
    assert main(["bench", "h-independence", "--case", "zzz"]) == EXIT_USAGE


def test_presets_all_have_provenance():
    for name, factory in presets.PRESETS.items():
        for case in factory():
            assert case["source"], f"{name}:{case['name']} lacks a source tag"
            assert case["expected"] > 0
            assert case["band"][0] > 0


def test_band_allows():
    assert presets.band_allows(20, 25, (0.25, 3))
    assert not presets.band_allows(20, 26, (0.25, 3))
    assert presets.band_allows(4, 7, (0.25, 3))  # absolute slack dominates
    assert not presets.band_allows(4, 8, (0.25, 3))
