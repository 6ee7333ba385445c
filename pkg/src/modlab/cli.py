"""Command-line entry point.

Subcommands: tomita, jones, patha, pathb, filtration, correlator, stability,
verify.  Structured outputs are JSON (reports) and CSV (series); every file
write is atomic, and identical (config, seed, version) triples produce
byte-identical outputs.

Exit codes: 0 success, 1 assertion/check failure, 2 configuration error,
3 numerical singularity.  Failures emit one machine-readable JSON object on
standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .algebra import (
    MatrixAlgebra,
    StateDensity,
    trace_expectation,
    verify_tomiyama,
)
from .experiments import (
    PAULI,
    build_tfd_preset,
    correlator_scan,
    modular_momentum,
    resolvent_stability,
    translation_fidelity,
)
from .interpolation import (
    Filtration,
    cocycle_scaling_residual,
    filtration_check,
    kadison_schwarz_residual,
    modular_momentum_states,
    patha_absorption_violation,
    patha_defect,
    patha_map,
    path_generator,
    path_hamiltonian,
    state_path,
    traceless,
)
from .io import (
    ConfigError,
    algebra_from_json,
    dump_json,
    load_json,
    matrix_from_json,
    write_csv,
    write_json,
)
from .jones import Inclusion, basic_extension, canonical_shift, index_estimate, jones_projection
from .linalg import SingularityError, vec
from .modular import gns_build, kms_residual, tomita
from .rng import seed_stream
from .verify import run_suites

TWO_PI = 2 * np.pi


# -- parsing helpers -----------------------------------------------------------------


def parse_grid(text: str) -> np.ndarray:
    """start:stop:step, inclusive of both ends (within float tolerance)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"bad grid {text!r}: need step > 0 and stop >= start")
    n = int(round((stop - start) / step))
    grid = start + step * np.arange(n + 1)
    return grid[grid <= stop + 1e-12]


def parse_region(text: str) -> list[int]:
    """Either a:b (half-open site range) or a comma list of sites."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b)))
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad region {text!r}: {exc}") from exc


def parse_site_op(text: str, sites: int) -> tuple[np.ndarray, int]:
    """PAULI@site, e.g. Z@1."""
    try:
        name, site_s = text.split("@")
        site = int(site_s)
    except ValueError as exc:
        raise ConfigError(f"bad operator {text!r} (expected e.g. Z@1): {exc}") from exc
    if name.upper() not in PAULI:
        raise ConfigError(f"unknown operator {name!r}; use one of {sorted(PAULI)}")
    if not 0 <= site < sites:
        raise ConfigError(f"site {site} outside 0..{sites - 1}")
    return PAULI[name.upper()], site


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad complex number {text!r}: {exc}") from exc


def parse_kappa(text: str) -> float:
    if text in ("1", "1.0"):
        return 1.0
    if text in ("2pi", "2PI", "2Pi"):
        return TWO_PI
    raise ConfigError(f"kappa must be 1 or 2pi, got {text!r}")


def load_state(path: str) -> StateDensity:
    try:
        return StateDensity(matrix_from_json(load_json(path)))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid state in {path}: {exc}") from exc


def load_algebra(path: str) -> MatrixAlgebra:
    dim, basis = algebra_from_json(load_json(path))
    try:
        return MatrixAlgebra.from_span(basis, validate=True)
    except ValueError as exc:
        raise ConfigError(f"invalid algebra in {path}: {exc}") from exc


def load_inclusion(path: str, state: StateDensity, expectation: str) -> Inclusion:
    obj = load_json(path)
    if not isinstance(obj, dict) or "N" not in obj:
        raise ConfigError(f"inclusion file {path} needs at least an 'N' algebra")
    dim_n, basis_n = algebra_from_json(obj["N"])
    N = MatrixAlgebra.from_span(basis_n)
    if "M" in obj and obj["M"] != "full":
        dim_m, basis_m = algebra_from_json(obj["M"])
        M = MatrixAlgebra.from_span(basis_m)
    else:
        M = MatrixAlgebra.full(N.dim)
    try:
        return Inclusion(M, N, state, expectation)
    except ValueError as exc:
        raise ConfigError(f"invalid inclusion: {exc}") from exc


def write_sidecar(out_path: str, config: dict, residuals: dict) -> None:
    write_json(
        out_path + ".meta.json",
        {"config": config, "version": __version__, "residuals": residuals},
    )


# -- subcommands ----------------------------------------------------------------------


def cmd_tomita(args) -> int:
    state = load_state(args.state)
    M = load_algebra(args.algebra) if args.algebra else MatrixAlgebra.full(state.dim)
    kappa = parse_kappa(args.kappa)
    G = gns_build(MatrixAlgebra.full(state.dim), state)
    md = tomita(G, kappa)
    res = md.invariant_residuals()
    omega = G.omega_vector
    rng = seed_stream(args.seed, "cli-tomita")
    a = rng.standard_normal((state.dim, state.dim)) + 1j * rng.standard_normal(
        (state.dim, state.dim)
    )
    b = rng.standard_normal((state.dim, state.dim)) + 1j * rng.standard_normal(
        (state.dim, state.dim)
    )
    flow_res = max(M.distance(_sigma(state, x, t)) for x in M.basis for t in (0.6, -1.3))
    report = {
        "version": __version__,
        "kappa": "2pi" if kappa == TWO_PI else "1",
        "dim": state.dim,
        "k_spectrum": sorted(np.linalg.eigvalsh(md.hamiltonian).tolist()),
        "residuals": {
            **res,
            "vacuum_delta": float(np.linalg.norm(md.delta @ omega - omega)),
            "vacuum_j": float(np.linalg.norm(md.conjugation.apply(omega) - omega)),
            "kms_random_probe": kms_residual(G, a, b),
            "flow_invariance_of_algebra": float(flow_res),
        },
    }
    return _emit(report, args.out)


def _sigma(state, x, t):
    from .modular import modular_flow_matrix

    return modular_flow_matrix(state, x, t)


def cmd_jones(args) -> int:
    state = load_state(args.state)
    inc = load_inclusion(args.inclusion, state, args.expectation)
    G = gns_build(inc.M, state)
    e_n = jones_projection(inc, G)
    ext = basic_extension(inc, G)
    shift = canonical_shift(inc, G)
    idx, scal = index_estimate(inc, e_n)
    report = {
        "version": __version__,
        "dim": state.dim,
        "n_dim": inc.N.size,
        "e_n_rank": int(round(np.trace(e_n).real)),
        "m1_dimension": ext.dimension,
        "index_estimate": idx,
        "index_scalar_residual": scal,
        "shift_unitarity_residual": shift.unitarity_residual,
        "transport_distances": list(shift.transport_distances),
        "relative_commutant_dim": shift.relative_commutant_dim,
    }
    return _emit(report, args.out)


def cmd_patha(args) -> int:
    state = load_state(args.state)
    inc = load_inclusion(args.inclusion, state, args.expectation)
    E = inc.expectation_superop()
    rep = verify_tomiyama(E, state)
    if not rep.hypotheses_pass(1e-8):
        _fail(
            1,
            "assertion",
            "the inclusion/state pair does not define a conditional expectation "
            f"(idempotency {rep.idempotency:.2e}, choi min {rep.choi_min_eigenvalue:.2e}); "
            "use a modular-invariant state or --expectation trace",
        )
    grid = parse_grid(args.grid)
    rng = seed_stream(args.seed, "cli-patha")
    probes = [
        rng.standard_normal((state.dim, state.dim))
        + 1j * rng.standard_normal((state.dim, state.dim))
        for _ in range(args.probes)
    ]
    rows = []
    for s in grid:
        pt = patha_map(E, float(s))
        ks = min(kadison_schwarz_residual(pt, state, a) for a in probes)
        rows.append([float(s), patha_defect(E, float(s)), pt.choi_min_eigenvalue(), ks])
    write_csv(args.out, ["s", "defect", "choi_min_eig", "ks_min_residual"], rows)
    write_sidecar(
        args.out,
        _config_echo(args, ["inclusion", "state", "grid", "seed", "probes", "expectation"]),
        {"max_defect": max(r[1] for r in rows), "min_choi_eig": min(r[2] for r in rows)},
    )
    return 0


def cmd_pathb(args) -> int:
    state0 = load_state(args.state)
    inc = load_inclusion(args.inclusion, state0, "trace")
    rho1 = trace_expectation(inc.N, state0.rho)
    try:
        state1 = StateDensity(rho1)
    except ValueError as exc:
        raise SingularityError(f"coarse-grained endpoint not faithful: {exc}", 0.0)
    kappa = parse_kappa(args.kappa)
    path = state_path(state0, state1, args.kind)
    P = traceless(modular_momentum_states(path, kappa))
    grid = parse_grid(args.grid)
    rows = []
    for s in grid:
        ph = path_hamiltonian(path, float(s), kappa)
        kp = float(np.linalg.norm(traceless(ph.k_prime) + P))
        g = float(np.linalg.norm(path_generator(path, float(s), kappa) - 2 * P))
        kd = path.kind_distance(float(s))
        coc = cocycle_scaling_residual(path, float(s), args.cocycle_t)
        rows.append([float(s), kp, g, kd, coc])
    write_csv(
        args.out,
        ["s", "kprime_vs_negP", "g_vs_2p", "kind_distance", "cocycle_residual"],
        rows,
    )
    write_sidecar(
        args.out,
        _config_echo(args, ["inclusion", "state", "grid", "kind", "kappa", "cocycle_t"]),
        {
            "commutator_norm": path.commutator_norm(),
            "max_kprime_vs_negP": max(r[1] for r in rows),
        },
    )
    return 0


def _default_chain(state: StateDensity) -> Filtration:
    n = state.dim
    if n == 4:
        algebras = (
            MatrixAlgebra.full(4),
            MatrixAlgebra.tensor_factor(2, 4, "left"),
            MatrixAlgebra.scalars(4),
        )
    else:
        algebras = (MatrixAlgebra.full(n), MatrixAlgebra.diagonal(n), MatrixAlgebra.scalars(n))
    return Filtration(algebras, state)


def cmd_filtration(args) -> int:
    state = load_state(args.state) if args.state else StateDensity.tracial(4)
    if args.chain:
        items = load_json(args.chain)
        if not isinstance(items, list) or len(items) < 2:
            raise ConfigError("chain file must hold a JSON list of algebra objects")
        algebras = []
        for obj in items:
            _, basis = algebra_from_json(obj)
            algebras.append(MatrixAlgebra.from_span(basis))
        try:
            filt = Filtration(tuple(algebras), state, args.expectation)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        filt = _default_chain(state)
    rep = filtration_check(filt)
    violation = patha_absorption_violation(filt, 0.5)
    report = {
        "version": __version__,
        "levels": [A.size for A in filt.algebras],
        "nesting": rep.nesting,
        "absorption": rep.absorption,
        "projection_monotonicity": rep.projection_monotonicity,
        "boundary_identity": rep.boundary_identity,
        "all_pass": rep.all_pass(),
        "patha_absorption_violation_at_half": violation,
    }
    code = _emit(report, args.out)
    if not rep.all_pass():
        _fail(1, "assertion", "filtration checks failed; see report")
    return code


def cmd_correlator(args) -> int:
    model = build_tfd_preset(args.preset, args.sites, beta=args.beta, seed=args.seed)
    m_sites = parse_region(args.region_m)
    n_sites = parse_region(args.region_n)
    P = modular_momentum(model, m_sites, n_sites)
    p_full = model.embed_right(P, sorted(m_sites))
    op_l, site_l = parse_site_op(args.op_l, args.sites)
    op_r, site_r = parse_site_op(args.op_r, args.sites)
    o_l = model.embed_left(op_l, [site_l])
    o_r = model.embed_right(op_r, [site_r])
    grid = parse_grid(args.grid)
    if len(grid) > 1 and (grid[1] - grid[0]) > 0.1:
        print(
            json.dumps(
                {
                    "warning": "grid step too coarse for derivative accuracy",
                    "achieved_fd_step": 1e-5,
                }
            ),
            file=sys.stderr,
        )
    series = correlator_scan(model, o_l, o_r, p_full, grid)
    rows = [[float(s), v.real, v.imag] for s, v in zip(series.s_grid, series.values)]
    write_csv(args.out, ["s", "re_F", "im_F"], rows)
    residuals = {
        "fprime_disagreement": series.fprime_disagreement(),
        "fprime_commutator": [series.fprime_commutator.real, series.fprime_commutator.imag],
        "static_check": float(abs(series.values[0] - series.static_value)),
        "momentum_norm": float(np.linalg.norm(P, 2)),
    }
    if args.fidelity_out:
        fid = translation_fidelity(model, op_r, site_r, p_full, grid)
        write_csv(args.fidelity_out, ["s", "fidelity"], [[float(s), float(f)] for s, f in zip(grid, fid)])
    write_sidecar(
        args.out,
        _config_echo(
            args,
            ["preset", "sites", "beta", "region_m", "region_n", "op_l", "op_r", "grid", "seed"],
        ),
        residuals,
    )
    return 0


def cmd_stability(args) -> int:
    rng = seed_stream(args.seed, "cli-stability")
    if args.state0 and args.state1:
        s0, s1 = load_state(args.state0), load_state(args.state1)
    else:
        from .linalg import random_density

        s0 = StateDensity(random_density(rng, args.dim))
        s1 = StateDensity(random_density(rng, args.dim))
    path = state_path(s0, s1, args.kind)
    z = parse_complex(args.z)
    grid = parse_grid(args.grid)
    rep = resolvent_stability(path, z, grid, n_samples=args.samples, seed=args.seed)
    rows = [[r.s, r.lhs, r.kato_rhs, r.proj_dist, rep.c_z] for r in rep.rows]
    write_csv(args.out, ["s", "lhs", "kato_rhs", "proj_dist", "fit_Cz"], rows)
    write_sidecar(
        args.out,
        _config_echo(args, ["kind", "z", "samples", "grid", "seed", "dim"]),
        {
            "kato_violations": rep.kato_violations,
            "c_z": rep.c_z,
            "spectrum_distance": rep.spectrum_distance,
        },
    )
    if rep.kato_violations:
        _fail(1, "assertion", f"{rep.kato_violations} Kato-bound violations")
    return 0


def cmd_verify(args) -> int:
    names = args.suite.split(",") if args.suite else ["all"]
    dims = tuple(int(d) for d in args.dims.split(","))
    t0 = time.monotonic()
    try:
        report = run_suites(names, seed=args.seed, dims=dims)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc
    elapsed = time.monotonic() - t0
    if args.tol is not None:
        if args.tol < np.finfo(float).eps:
            raise ConfigError(f"--tol {args.tol} below machine epsilon")
        for c in report["checks"]:
            c["threshold"] = max(c["threshold"], args.tol)
            c["passed"] = c["residual"] <= c["threshold"]
        report["n_failed"] = sum(not c["passed"] for c in report["checks"])
        report["all_passed"] = report["n_failed"] == 0
    # human-readable lines on stderr; stdout stays pure JSON when --out is absent
    for c in report["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        print(
            f"[{flag}] {c['name']}: residual {c['residual']:.3e} vs {c['threshold']:.1e}",
            file=sys.stderr,
        )
    print(
        f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed",
        file=sys.stderr,
    )
    # timing goes to stderr, never into the report: reports must be byte-stable
    print(f"wall clock: {elapsed:.2f}s", file=sys.stderr)
    if args.out:
        write_json(args.out, report)
    else:
        sys.stdout.write(dump_json(report))
    return 0 if report["all_passed"] else 1


# -- plumbing -------------------------------------------------------------------------


def _config_echo(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys}


def _emit(report: dict, out: str | None) -> int:
    if out:
        write_json(out, report)
    else:
        sys.stdout.write(dump_json(report))
    return 0


def _fail(code: int, kind: str, message: str):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    raise SystemExit(code)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="modlab",
        description="Finite-dimensional modular-theory laboratory",
    )
    p.add_argument("--version", action="version", version=f"modlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, out_required=True):
        if seed:
            sp.add_argument("--seed", type=int, default=1, help="64-bit RNG seed")
        sp.add_argument(
            "--out", required=out_required, default=None, help="output file path"
        )

    sp = sub.add_parser("tomita", help="modular data report for a state (full algebra)")
    sp.add_argument("--algebra", default=None, help="algebra JSON (flow-invariance probe)")
    sp.add_argument("--state", required=True, help="density-matrix JSON")
    sp.add_argument("--kappa", default="1", help="Hamiltonian convention: 1 or 2pi")
    common(sp, out_required=False)
    sp.set_defaults(func=cmd_tomita)

    sp = sub.add_parser("jones", help="Jones projection / basic extension report")
    sp.add_argument("--inclusion", required=True, help="inclusion JSON ({'M':..., 'N':...})")
    sp.add_argument("--state", required=True)
    sp.add_argument("--expectation", choices=("omega", "trace"), default="omega")
    common(sp, out_required=False)
    sp.set_defaults(func=cmd_jones)

    sp = sub.add_parser(
        "patha",
        help="convex CP path scan",
        description="Scan the convex path (1-s) id + s E. "
        "CSV columns: s,defect,choi_min_eig,ks_min_residual",
    )
    sp.add_argument("--inclusion", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--expectation", choices=("omega", "trace"), default="omega")
    sp.add_argument("--grid", default="0:1:0.05", help="start:stop:step")
    sp.add_argument("--probes", type=int, default=32, help="Kadison-Schwarz probe count")
    common(sp)
    sp.set_defaults(func=cmd_patha)

    sp = sub.add_parser(
        "pathb",
        help="state-path scan",
        description="Scan the idempotent state-path surrogate between rho_0 "
        "and its coarse-graining onto N. "
        "CSV columns: s,kprime_vs_negP,g_vs_2p,kind_distance,cocycle_residual",
    )
    sp.add_argument("--inclusion", required=True)
    sp.add_argument("--state", required=True, help="reference density rho_0")
    sp.add_argument("--kind", choices=("loglinear", "geodesic"), default="loglinear")
    sp.add_argument("--kappa", default="1")
    sp.add_argument("--grid", default="0:1:0.05")
    sp.add_argument("--cocycle-t", type=float, default=0.7, dest="cocycle_t")
    common(sp)
    sp.set_defaults(func=cmd_pathb)

    sp = sub.add_parser("filtration", help="absorption/nesting report for a subalgebra chain")
    sp.add_argument("--chain", default=None, help="JSON list of algebra objects, coarsest last")
    sp.add_argument("--state", default=None)
    sp.add_argument("--expectation", choices=("trace", "omega"), default="trace")
    common(sp, out_required=False)
    sp.set_defaults(func=cmd_filtration)

    sp = sub.add_parser(
        "correlator",
        help="two-sided correlator scan",
        description="Thermofield-double correlator under the momentum flow. "
        "CSV columns: s,re_F,im_F (fidelity file: s,fidelity)",
    )
    sp.add_argument("--preset", required=True, choices=("xx-chain", "ising-tfield", "random-gue"))
    sp.add_argument("--sites", type=int, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--region-m", required=True, dest="region_m", help="outer right-copy region")
    sp.add_argument("--region-n", required=True, dest="region_n", help="inner right-copy region")
    sp.add_argument("--op-l", default="Z@0", dest="op_l", help="left probe, e.g. Z@1")
    sp.add_argument("--op-r", default="Z@0", dest="op_r", help="right probe, e.g. Z@1")
    sp.add_argument("--grid", default="0:1:0.02")
    sp.add_argument("--fidelity-out", default=None, dest="fidelity_out",
                    help="also emit translation fidelity CSV (s,fidelity)")
    common(sp)
    sp.set_defaults(func=cmd_correlator)

    sp = sub.add_parser(
        "stability",
        help="resolvent stability probe",
        description="Resolvent deviation of the generator family against the "
        "first-order bound. CSV columns: s,lhs,kato_rhs,proj_dist,fit_Cz",
    )
    sp.add_argument("--kind", choices=("loglinear", "geodesic"), default="geodesic")
    sp.add_argument("--z", default="0+1i", help="resolvent point, e.g. 0+1i")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--grid", default="0:1:0.1")
    sp.add_argument("--dim", type=int, default=4)
    sp.add_argument("--state0", default=None)
    sp.add_argument("--state1", default=None)
    common(sp)
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("verify", help="run the named verification suites")
    sp.add_argument("--suite", default="all", help="comma list or 'all'")
    sp.add_argument("--dims", default="2,3,4")
    sp.add_argument("--tol", type=float, default=None, help="raise pass thresholds to this value")
    common(sp, out_required=False)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed its message; map its error exit to config
        if exc.code not in (0, None):
            print(json.dumps({"error": "config", "message": "invalid arguments"}), file=sys.stderr)
            raise SystemExit(2)
        raise
    try:
        return args.func(args)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except SingularityError as exc:
        print(
            json.dumps(
                {
                    "error": "singular",
                    "message": str(exc),
                    "offending_eigenvalue": exc.offending_eigenvalue,
                }
            ),
            file=sys.stderr,
        )
        return 3
    except SystemExit:
        raise
    except ValueError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
