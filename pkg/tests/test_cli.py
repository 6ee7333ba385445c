import json
import subprocess
import sys

import numpy as np
import pytest

from modlab.algebra import MatrixAlgebra
from modlab.io import (
    ConfigError,
    algebra_to_json,
    dump_json,
    matrix_from_json,
    matrix_to_json,
    write_json,
)
from modlab.rng import seed_stream


def run_cli(*argv, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "modlab.cli", *argv],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


@pytest.fixture()
def workdir(tmp_path):
    write_json(tmp_path / "tracial2.json", matrix_to_json(np.eye(2) / 2))
    write_json(
        tmp_path / "state2.json", matrix_to_json(np.diag([2 / 3, 1 / 3]))
    )
    write_json(
        tmp_path / "m2_scalars.json",
        {"M": "full", "N": algebra_to_json(2, MatrixAlgebra.scalars(2).basis)},
    )
    write_json(
        tmp_path / "m2_diag.json",
        {"M": "full", "N": algebra_to_json(2, MatrixAlgebra.diagonal(2).basis)},
    )
    return tmp_path


# -- io -----------------------------------------------------------------------------


def test_matrix_json_round_trip_bit_exact():
    rng = seed_stream(80, "io-rt")
    M = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    text = dump_json(matrix_to_json(M))
    back = matrix_from_json(json.loads(text))
    assert back.shape == (3, 5)
    assert np.array_equal(back, M)  # bit-exact through repr round-trip


def test_matrix_json_rejects_bad_schema():
    with pytest.raises(ConfigError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})
    with pytest.raises(ConfigError):
        matrix_from_json({"rows": -1, "cols": 2, "data": []})


def test_seed_stream_determinism_and_separation():
    a = seed_stream(7).standard_normal(1000)
    b = seed_stream(7).standard_normal(1000)
    assert np.array_equal(a, b)
    c = seed_stream(8).standard_normal(10)
    assert not np.allclose(a[:10], c)
    d = seed_stream(7, "other-label").standard_normal(10)
    assert not np.allclose(a[:10], d)


def test_random_matrix_bytes_reproducible():
    from modlab.linalg import random_hermitian

    h1 = random_hermitian(seed_stream(7, "bytes"), 4)
    h2 = random_hermitian(seed_stream(7, "bytes"), 4)
    assert h1.tobytes() == h2.tobytes()


# -- CLI subcommands ------------------------------------------------------------------


def test_cli_patha_defect_series(workdir):
    out = workdir / "patha.csv"
    r = run_cli(
        "patha",
        "--inclusion", str(workdir / "m2_scalars.json"),
        "--state", str(workdir / "tracial2.json"),
        "--grid", "0:1:0.25",
        "--out", str(out),
    )
    assert r.returncode == 0, r.stderr
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "s,defect,choi_min_eig,ks_min_residual"
    defects = [float(line.split(",")[1]) for line in lines[1:]]
    # ||id - E|| = 1 for this projection, so defect = s(1-s)
    want = [0.0, 0.1875, 0.25, 0.1875, 0.0]
    assert np.allclose(defects, want, atol=1e-12)
    assert (workdir / "patha.csv.meta.json").exists()


def test_cli_tomita_report(workdir):
    r = run_cli("tomita", "--state", str(workdir / "state2.json"), "--kappa", "1")
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    want = sorted([-np.log(2), 0.0, 0.0, np.log(2)])
    assert np.allclose(rep["k_spectrum"], want, atol=1e-12)
    assert max(rep["residuals"].values()) <= 1e-8


def test_cli_tomita_kappa_2pi(workdir):
    r = run_cli("tomita", "--state", str(workdir / "state2.json"), "--kappa", "2pi")
    rep = json.loads(r.stdout)
    assert np.allclose(
        rep["k_spectrum"], sorted([-np.log(2) / (2 * np.pi), 0, 0, np.log(2) / (2 * np.pi)]),
        atol=1e-12,
    )


def test_cli_jones_report(workdir):
    r = run_cli(
        "jones",
        "--inclusion", str(workdir / "m2_diag.json"),
        "--state", str(workdir / "tracial2.json"),
    )
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    assert rep["m1_dimension"] == 8
    assert abs(rep["index_estimate"] - 2.0) <= 1e-8
    assert rep["e_n_rank"] == 2


def test_cli_pathb_loglinear_exact(workdir):
    out = workdir / "pathb.csv"
    r = run_cli(
        "pathb",
        "--inclusion", str(workdir / "m2_diag.json"),
        "--state", str(workdir / "state2.json"),
        "--kind", "loglinear",
        "--grid", "0:1:0.5",
        "--out", str(out),
    )
    assert r.returncode == 0, r.stderr
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    for row in rows:
        assert float(row[1]) <= 1e-10  # kprime_vs_negP
        assert float(row[2]) <= 1e-10  # g_vs_2p


def test_cli_correlator_and_fidelity(workdir):
    out = workdir / "f.csv"
    fid = workdir / "fid.csv"
    r = run_cli(
        "correlator",
        "--preset", "xx-chain",
        "--sites", "3",
        "--beta", "1.0",
        "--region-m", "0:2",
        "--region-n", "1:2",
        "--op-l", "Z@1",
        "--op-r", "Z@1",
        "--grid", "0:1:0.1",
        "--seed", "7",
        "--out", str(out),
        "--fidelity-out", str(fid),
    )
    assert r.returncode == 0, r.stderr
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "s,re_F,im_F"
    assert len(lines) == 12
    meta = json.loads((workdir / "f.csv.meta.json").read_text())
    assert meta["residuals"]["fprime_disagreement"] <= 1e-6
    assert meta["config"]["seed"] == 7
    fid_lines = fid.read_text().strip().splitlines()
    assert fid_lines[0] == "s,fidelity"
    first = float(fid_lines[1].split(",")[1])
    assert abs(first - 1.0) <= 1e-10


def test_cli_stability_bound_holds(workdir):
    out = workdir / "stab.csv"
    r = run_cli(
        "stability",
        "--kind", "geodesic",
        "--z", "0+1i",
        "--samples", "25",
        "--grid", "0:1:0.2",
        "--seed", "3",
        "--out", str(out),
    )
    assert r.returncode == 0, r.stderr
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    for row in rows:
        assert float(row[1]) <= float(row[2]) + 1e-10


def test_cli_verify_deterministic(workdir):
    args = ["verify", "--suite", "appendix-b,patha,filtration", "--seed", "1",
            "--dims", "2,3"]
    r1 = run_cli(*args, "--out", str(workdir / "v1.json"))
    r2 = run_cli(*args, "--out", str(workdir / "v2.json"))
    assert r1.returncode == 0, r1.stderr
    assert r2.returncode == 0
    assert (workdir / "v1.json").read_bytes() == (workdir / "v2.json").read_bytes()
    rep = json.loads((workdir / "v1.json").read_text())
    assert rep["all_passed"] is True
    assert "[PASS]" in r1.stderr


def test_cli_verify_unknown_suite_is_config_error(workdir):
    r = run_cli("verify", "--suite", "nonsense")
    assert r.returncode == 2
    err = json.loads(r.stderr.strip().splitlines()[-1])
    assert err["error"] == "config"


def test_cli_missing_input_exit_2(workdir):
    r = run_cli(
        "patha",
        "--inclusion", str(workdir / "does-not-exist.json"),
        "--state", str(workdir / "tracial2.json"),
        "--out", str(workdir / "x.csv"),
    )
    assert r.returncode == 2
    err = json.loads(r.stderr.strip().splitlines()[-1])
    assert err["error"] == "config"
    assert not (workdir / "x.csv").exists()


def test_cli_singularity_exit_3(workdir):
    # deep-frozen chain: the reduced density on the outer region degenerates
    r = run_cli(
        "correlator",
        "--preset", "ising-tfield",
        "--sites", "3",
        "--beta", "4000",
        "--region-m", "0:2",
        "--region-n", "1:2",
        "--grid", "0:1:0.5",
        "--out", str(workdir / "y.csv"),
    )
    assert r.returncode == 3, (r.returncode, r.stderr)
    err = json.loads(r.stderr.strip().splitlines()[-1])
    assert err["error"] == "singular"


def test_cli_bad_grid_exit_2(workdir):
    r = run_cli(
        "patha",
        "--inclusion", str(workdir / "m2_scalars.json"),
        "--state", str(workdir / "tracial2.json"),
        "--grid", "0-1-0.25",
        "--out", str(workdir / "z.csv"),
    )
    assert r.returncode == 2


def test_cli_help_lists_contracts():
    r = run_cli("--help")
    assert r.returncode == 0
    for name in ("tomita", "jones", "patha", "pathb", "filtration",
                 "correlator", "stability", "verify"):
        assert name in r.stdout
    r2 = run_cli("patha", "--help")
    assert "s,defect,choi_min_eig,ks_min_residual" in r2.stdout
    r3 = run_cli("correlator", "--help")
    assert "s,re_F,im_F" in r3.stdout
