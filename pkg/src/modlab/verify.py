"""The full verification suite: every structural identity the package claims,
run on deterministic corpora and reported as named checks with measured
residuals against fixed thresholds.

The same functions back the ``modlab verify`` subcommand and the acceptance
test module, so the command line and the test suite can never drift apart.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .algebra import (
    MatrixAlgebra,
    StateDensity,
    commutant,
    omega_expectation,
    span_distance,
    takesaki_check,
    trace_expectation_superop,
    verify_tomiyama,
)
from .experiments import (
    PAULI,
    build_tfd_preset,
    correlator_scan,
    modular_momentum,
    resolvent_stability,
    stability_fit,
)
from .interpolation import (
    Filtration,
    filtration_check,
    kadison_schwarz_residual,
    modular_momentum_states,
    patha_absorption_violation,
    patha_defect,
    patha_gns_operator,
    patha_map,
    path_generator,
    path_hamiltonian,
    path_hamiltonian_fd,
    state_path,
    traceless,
)
from .jones import (
    Inclusion,
    basic_extension,
    basic_extension_from_conjugation,
    canonical_shift,
    jones_projection,
)
from .linalg import (
    left_mult,
    random_density,
    right_mult,
    spectral_decompose,
    unvec,
    vec,
)
from .modular import gns_build, kms_residual, tomita
from .rng import seed_stream


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    threshold: float
    passed: bool

    @classmethod
    def measure(cls, name: str, residual: float, threshold: float) -> "CheckResult":
        residual = float(residual)
        return cls(name, residual, float(threshold), bool(residual <= threshold))


def _unitary_of(H: np.ndarray, t: float = 1.0) -> np.ndarray:
    w, v = np.linalg.eigh(H)
    return (v * np.exp(-1j * t * w)[None, :]) @ v.conj().T


# -- suite: appendix-b golden values ------------------------------------------------


def suite_appendix_b(seed: int = 1) -> list[CheckResult]:
    rng = seed_stream(seed, "appendix-b")
    E = trace_expectation_superop(MatrixAlgebra.scalars(2))
    mid = patha_map(E, 0.5).superop
    eye = np.eye(2, dtype=complex)

    probes = [np.diag([1.0, 0.0]).astype(complex)]
    for _ in range(100):
        probes.append(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    r_mid = max(
        np.linalg.norm(unvec(mid @ vec(A), 2) - (0.5 * A + 0.25 * np.trace(A) * eye))
        for A in probes
    )
    r_sq = max(
        np.linalg.norm(
            unvec(mid @ (mid @ vec(A)), 2) - (0.25 * A + 0.375 * np.trace(A) * eye)
        )
        for A in probes
    )
    u1 = _unitary_of((np.pi / 2) * PAULI["X"])
    r_end = np.linalg.norm(u1 - (-1j) * PAULI["X"])
    return [
        CheckResult.measure("appendix_b.midpoint_map", r_mid, 1e-12),
        CheckResult.measure("appendix_b.midpoint_map_squared", r_sq, 1e-12),
        CheckResult.measure("appendix_b.endpoint_unitary", r_end, 1e-12),
    ]


# -- suite: tomita engine ------------------------------------------------------------


def suite_tomita(
    seed: int = 1, dims: tuple[int, ...] = (2, 3, 4), n_states: int = 200
) -> list[CheckResult]:
    rng = seed_stream(seed, "tomita-engine")
    worst_s = worst_span = worst_kms = worst_vac = 0.0
    for i in range(n_states):
        n = dims[i % len(dims)]
        state = StateDensity(random_density(rng, n))
        M = MatrixAlgebra.full(n)
        G = gns_build(M, state)
        md = tomita(G)

        w, v = spectral_decompose(md.delta)
        delta_half = (v * np.sqrt(w)[None, :]) @ v.conj().T
        S_re = md.conjugation.matrix @ np.conj(delta_half)
        worst_s = max(
            worst_s,
            max(
                np.linalg.norm(S_re @ np.conj(G.vector(b)) - G.vector(b.conj().T))
                for b in M.basis
            ),
        )

        jmj = MatrixAlgebra.from_span(
            [
                md.conjugation.matrix @ np.conj(left_mult(b)) @ np.conj(md.conjugation.matrix)
                for b in M.basis
            ],
            validate=False,
        )
        right_span = MatrixAlgebra.from_span(
            [right_mult(b) for b in M.basis], validate=False
        )
        worst_span = max(worst_span, span_distance(jmj, right_span))

        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        worst_kms = max(worst_kms, kms_residual(G, a, b))

        omega = G.omega_vector
        worst_vac = max(
            worst_vac,
            np.linalg.norm(md.delta @ omega - omega),
            np.linalg.norm(md.conjugation.apply(omega) - omega),
        )

    # the right-multiplication span equals the commutant solver's output
    oracle = max(
        span_distance(
            commutant(
                MatrixAlgebra.from_span(
                    [left_mult(b) for b in MatrixAlgebra.full(n).basis], validate=False
                )
            ),
            MatrixAlgebra.from_span(
                [right_mult(b) for b in MatrixAlgebra.full(n).basis], validate=False
            ),
        )
        for n in dims
    )
    return [
        CheckResult.measure("tomita.closure_polar_adjoint", worst_s, 1e-10),
        CheckResult.measure("tomita.jmj_equals_commutant", worst_span, 1e-10),
        CheckResult.measure("tomita.commutant_oracle", oracle, 1e-10),
        CheckResult.measure("tomita.kms_residual", worst_kms, 1e-8),
        CheckResult.measure("tomita.vacuum_invariance", worst_vac, 1e-12),
    ]


# -- suite: jones --------------------------------------------------------------------


def inclusion_corpus() -> list[tuple[str, Inclusion]]:
    return [
        (
            "scalars-in-m2",
            Inclusion(MatrixAlgebra.full(2), MatrixAlgebra.scalars(2), StateDensity.tracial(2)),
        ),
        (
            "diag-in-m2",
            Inclusion(MatrixAlgebra.full(2), MatrixAlgebra.diagonal(2), StateDensity.tracial(2)),
        ),
        (
            "m2x1-in-m4",
            Inclusion(
                MatrixAlgebra.full(4),
                MatrixAlgebra.tensor_factor(2, 4, "left"),
                StateDensity.tracial(4),
            ),
        ),
        (
            "diag-in-m3",
            Inclusion(MatrixAlgebra.full(3), MatrixAlgebra.diagonal(3), StateDensity.tracial(3)),
        ),
    ]


def suite_jones(seed: int = 1) -> list[CheckResult]:
    out = []
    worst_identity = worst_span = worst_unitarity = 0.0
    for name, inc in inclusion_corpus():
        G = gns_build(inc.M, inc.state)
        e = jones_projection(inc, G)
        E = inc.expectation_superop()
        r_id = max(
            np.linalg.norm(
                e @ left_mult(b) @ e - left_mult(unvec(E @ vec(b), inc.M.dim)) @ e
            )
            for b in inc.M.basis
        )
        worst_identity = max(worst_identity, r_id)

        ext = basic_extension(inc, G)
        md = tomita(G)
        other = basic_extension_from_conjugation(inc, md)
        worst_span = max(worst_span, span_distance(ext.m1, other))

        shift = canonical_shift(inc, G, md)
        worst_unitarity = max(worst_unitarity, shift.unitarity_residual)
    out.append(CheckResult.measure("jones.compression_identity", worst_identity, 1e-10))
    out.append(CheckResult.measure("jones.basic_extension_span", worst_span, 1e-10))
    out.append(CheckResult.measure("jones.shift_unitarity", worst_unitarity, 1e-10))
    return out


# -- suite: path A ---------------------------------------------------------------------


def suite_patha(seed: int = 1) -> list[CheckResult]:
    rng = seed_stream(seed, "patha")
    state = StateDensity.tracial(4)
    N = MatrixAlgebra.tensor_factor(2, 4, "left")
    E = trace_expectation_superop(N)
    inc = Inclusion(MatrixAlgebra.full(4), N, state)
    e_n = jones_projection(inc, gns_build(inc.M, state))

    grid = np.linspace(0, 1, 21)
    worst_choi = worst_unital = worst_pres = 0.0
    worst_defect = worst_spec = worst_norm = 0.0
    for s in grid:
        pt = patha_map(E, float(s))
        worst_choi = max(worst_choi, -pt.choi_min_eigenvalue())
        worst_unital = max(worst_unital, pt.unitality_residual())
        worst_pres = max(worst_pres, pt.state_preservation_residual(state))

        c = np.linalg.norm(np.eye(16) - E, 2)
        worst_defect = max(
            worst_defect, abs(patha_defect(E, float(s)) - s * (1 - s) * c)
        )
        es = patha_gns_operator(e_n, float(s))
        w = np.linalg.eigvalsh(es)
        spec_dist = max(min(abs(x - 1.0), abs(x - (1 - s))) for x in w)
        worst_spec = max(worst_spec, spec_dist)
        worst_norm = max(worst_norm, np.linalg.norm(es, 2) - 1.0)

    ks_min = min(
        kadison_schwarz_residual(
            patha_map(E, float(rng.uniform(0, 1))),
            state,
            rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)),
        )
        for _ in range(100)
    )
    return [
        CheckResult.measure("patha.choi_psd", worst_choi, 1e-10),
        CheckResult.measure("patha.unitality", worst_unital, 1e-10),
        CheckResult.measure("patha.state_preservation", worst_pres, 1e-10),
        CheckResult.measure("patha.defect_closed_form", worst_defect, 1e-12),
        CheckResult.measure("patha.gns_operator_spectrum", worst_spec, 1e-12),
        CheckResult.measure("patha.gns_operator_norm", worst_norm, 1e-12),
        CheckResult.measure("patha.kadison_schwarz", -min(ks_min, 0.0), 1e-10),
    ]


# -- suite: tomiyama -------------------------------------------------------------------


def suite_tomiyama(seed: int = 1) -> list[CheckResult]:
    rng = seed_stream(seed, "tomiyama")
    state4 = StateDensity.tracial(4)
    corpus = [
        (MatrixAlgebra.scalars(4), state4),
        (MatrixAlgebra.diagonal(4), state4),
        (MatrixAlgebra.tensor_factor(2, 4, "left"), state4),
        (MatrixAlgebra.tensor_factor(2, 4, "right"), state4),
        (MatrixAlgebra.full(4), state4),
    ]
    from .linalg import random_hermitian

    for _ in range(3):
        corpus.append((MatrixAlgebra.generated([random_hermitian(rng, 4)]), state4))
    # state-compatible expectations for a non-tracial state
    rho = np.kron(np.diag([0.7, 0.3]), np.eye(2) / 2)
    state_c = StateDensity(rho)
    N_c = MatrixAlgebra.tensor_factor(2, 4, "left")
    assert takesaki_check(N_c, state_c).invariant

    worst_hyp = worst_conc = 0.0
    for N, st in corpus:
        rep = verify_tomiyama(trace_expectation_superop(N), st)
        worst_hyp = max(
            worst_hyp,
            rep.unital,
            rep.idempotency,
            rep.state_preservation,
            rep.choi_hermiticity,
            -min(rep.choi_min_eigenvalue, 0.0),
        )
        worst_conc = max(worst_conc, rep.range_is_algebra, rep.range_bimodule)
    rep_c = verify_tomiyama(omega_expectation(N_c, state_c).superop, state_c)
    worst_hyp = max(worst_hyp, rep_c.unital, rep_c.idempotency, rep_c.state_preservation)
    worst_conc = max(worst_conc, rep_c.range_is_algebra, rep_c.range_bimodule)

    # every interior point of the convex path fails idempotency visibly
    E = trace_expectation_superop(MatrixAlgebra.scalars(2))
    min_defect = min(
        verify_tomiyama(patha_map(E, float(s)).superop, StateDensity.tracial(2)).idempotency
        for s in np.linspace(0.05, 0.95, 19)
    )
    return [
        CheckResult.measure("tomiyama.hypotheses", worst_hyp, 1e-10),
        CheckResult.measure("tomiyama.conclusions", worst_conc, 1e-10),
        CheckResult.measure(
            "tomiyama.patha_interior_defect", 1e-3 - min(min_defect, 1e-3), 0.0
        ),
    ]


# -- suite: K'(0) = -P ------------------------------------------------------------------


def suite_kprime(seed: int = 1, n_pairs: int = 100) -> list[CheckResult]:
    rng = seed_stream(seed, "kprime")
    worst_closed = worst_fd = 0.0
    for _ in range(n_pairs):
        n = int(rng.integers(2, 5))
        p = state_path(
            StateDensity(random_density(rng, n)),
            StateDensity(random_density(rng, n)),
            "loglinear",
        )
        P = traceless(modular_momentum_states(p))
        worst_closed = max(
            worst_closed,
            np.linalg.norm(traceless(path_hamiltonian(p, 0.0).k_prime) + P),
        )
        worst_fd = max(
            worst_fd,
            np.linalg.norm(traceless(path_hamiltonian_fd(p, 0.0).k_prime) + P),
        )
    # the diagonal example with value +/- ln2/2
    p0 = state_path(
        StateDensity(np.diag([0.5, 0.5])),
        StateDensity(np.diag([2 / 3, 1 / 3])),
        "loglinear",
    )
    hl = np.log(2) / 2
    r_diag = np.linalg.norm(
        traceless(path_hamiltonian(p0, 0.0).k_prime) - np.diag([-hl, hl])
    )
    # geodesic kind, commuting endpoints
    worst_geo = 0.0
    for _ in range(10):
        d0 = rng.uniform(0.1, 1.0, 3)
        d1 = rng.uniform(0.1, 1.0, 3)
        pg = state_path(
            StateDensity(np.diag(d0 / d0.sum())),
            StateDensity(np.diag(d1 / d1.sum())),
            "geodesic",
        )
        P = traceless(modular_momentum_states(pg))
        worst_geo = max(
            worst_geo,
            np.linalg.norm(traceless(path_hamiltonian(pg, 0.0).k_prime) + P),
        )
    return [
        CheckResult.measure("kprime.loglinear_closed_form", worst_closed, 1e-10),
        CheckResult.measure("kprime.loglinear_central_difference", worst_fd, 1e-6),
        CheckResult.measure("kprime.diagonal_ln2_example", r_diag, 1e-10),
        CheckResult.measure("kprime.geodesic_commuting", worst_geo, 1e-6),
    ]


# -- suite: generator law ----------------------------------------------------------------


def suite_generator(seed: int = 1) -> list[CheckResult]:
    rng = seed_stream(seed, "generator")
    worst_const = worst_exp = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 5))
        p = state_path(
            StateDensity(random_density(rng, n)),
            StateDensity(random_density(rng, n)),
            "loglinear",
        )
        P2 = 2 * traceless(modular_momentum_states(p))
        worst_const = max(
            worst_const,
            max(
                np.linalg.norm(path_generator(p, float(s)) - P2)
                for s in np.linspace(0, 1, 9)
            ),
        )
        worst_exp = max(
            worst_exp,
            np.linalg.norm(_unitary_of(path_generator(p, 0.0)) - _unitary_of(P2)),
        )
    return [
        CheckResult.measure("generator.constant_equals_2p", worst_const, 1e-10),
        CheckResult.measure("generator.endpoint_unitary", worst_exp, 1e-10),
    ]


# -- suite: filtration ---------------------------------------------------------------------


def suite_filtration(seed: int = 1) -> list[CheckResult]:
    F = Filtration(
        (
            MatrixAlgebra.full(4),
            MatrixAlgebra.tensor_factor(2, 4, "left"),
            MatrixAlgebra.scalars(4),
        ),
        StateDensity.tracial(4),
    )
    rep = filtration_check(F)
    violation = patha_absorption_violation(F, 0.5)
    return [
        CheckResult.measure("filtration.nesting", rep.nesting, 1e-10),
        CheckResult.measure("filtration.absorption", rep.absorption, 1e-10),
        CheckResult.measure(
            "filtration.projection_monotonicity", rep.projection_monotonicity, 1e-10
        ),
        CheckResult.measure("filtration.boundary_identity", rep.boundary_identity, 1e-10),
        CheckResult.measure(
            "filtration.patha_violates_absorption", 1e-2 - min(violation, 1e-2), 0.0
        ),
    ]


# -- suite: correlator -----------------------------------------------------------------------


def correlator_models(seed: int = 1):
    specs = [
        ("xx-chain", 3, 0.5),
        ("xx-chain", 3, 1.0),
        ("xx-chain", 4, 0.5),
        ("xx-chain", 4, 1.0),
        ("ising-tfield", 3, 0.5),
        ("ising-tfield", 3, 1.0),
        ("random-gue", 3, 0.5),
        ("random-gue", 3, 1.0),
    ]
    for preset, L, beta in specs:
        yield preset, L, beta, build_tfd_preset(preset, L, beta=beta, seed=seed)


def suite_correlator(seed: int = 1) -> list[CheckResult]:
    worst_fp = worst_static = worst_const = 0.0
    for preset, L, beta, model in correlator_models(seed):
        m_sites = list(range(L - 1))
        n_sites = m_sites[1:]
        P = modular_momentum(model, m_sites, n_sites)
        p_full = model.embed_right(P, m_sites)
        o_l = model.embed_left(PAULI["Z"], [1])
        o_r = model.embed_right(PAULI["Z"], [1])
        series = correlator_scan(model, o_l, o_r, p_full, np.linspace(0, 1, 11))
        worst_fp = max(worst_fp, series.fprime_disagreement())
        worst_static = max(worst_static, abs(series.values[0] - series.static_value))
        o_id = model.right_operator(np.eye(model.copy_dim, dtype=complex))
        flat = correlator_scan(model, o_l, o_id, p_full, np.linspace(0, 1, 11))
        worst_const = max(worst_const, float(np.max(np.abs(flat.values - flat.values[0]))))
    return [
        CheckResult.measure("correlator.fprime_two_routes", worst_fp, 1e-6),
        CheckResult.measure("correlator.static_value", worst_static, 1e-12),
        CheckResult.measure("correlator.identity_probe_constant", worst_const, 1e-12),
    ]


# -- suite: stability ------------------------------------------------------------------------


def suite_stability(seed: int = 1) -> list[CheckResult]:
    rng = seed_stream(seed, "stability-suite")
    p = state_path(
        StateDensity(random_density(rng, 4)),
        StateDensity(random_density(rng, 4)),
        "geodesic",
    )
    grid = np.linspace(0, 1, 11)
    z_list = [1j, 2j, 0.5 + 0.5j, -1 + 1j, 4j]
    reports = [
        resolvent_stability(p, z, grid, n_samples=100, seed=seed) for z in z_list
    ]
    violations = sum(r.kato_violations for r in reports)
    fit = stability_fit(reports)
    finite = 0.0 if np.isfinite(fit["slope"]) else 1.0
    return [
        CheckResult.measure("stability.kato_violations", float(violations), 0.0),
        CheckResult.measure("stability.fit_reported", finite, 0.0),
    ]


SUITES = {
    "appendix-b": suite_appendix_b,
    "tomita": suite_tomita,
    "jones": suite_jones,
    "patha": suite_patha,
    "tomiyama": suite_tomiyama,
    "kprime": suite_kprime,
    "generator": suite_generator,
    "filtration": suite_filtration,
    "correlator": suite_correlator,
    "stability": suite_stability,
}


def run_suites(
    names: list[str] | None = None,
    seed: int = 1,
    dims: tuple[int, ...] = (2, 3, 4),
) -> dict:
    """Run the named suites (all by default) and assemble a deterministic
    report dictionary.  Wall-clock timing deliberately stays out of the
    report so identical (config, seed, version) runs are byte-identical."""
    from . import __version__

    chosen = list(SUITES) if names in (None, ["all"]) else names
    results: list[CheckResult] = []
    for name in chosen:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
        if name == "tomita":
            results.extend(SUITES[name](seed=seed, dims=tuple(dims)))
        else:
            results.extend(SUITES[name](seed=seed))
    return {
        "version": __version__,
        "seed": int(seed),
        "dims": list(dims),
        "suites": chosen,
        "checks": [asdict(r) for r in results],
        "n_checks": len(results),
        "n_failed": sum(not r.passed for r in results),
        "all_passed": all(r.passed for r in results),
    }
