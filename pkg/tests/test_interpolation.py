import numpy as np
import pytest

from modlab.algebra import (
    MatrixAlgebra,
    StateDensity,
    trace_expectation,
    trace_expectation_superop,
)
from modlab.interpolation import (
    Filtration,
    StatePath,
    cocycle_scaling_residual,
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
    rn_data,
    state_path,
    traceless,
)
from modlab.jones import Inclusion, jones_projection
from modlab.linalg import herm_exp, herm_log, random_density, random_hermitian, unvec, vec
from modlab.modular import gns_build
from modlab.rng import seed_stream

LN2_HALF = np.log(2) / 2


def scalars_expectation_2() -> np.ndarray:
    return trace_expectation_superop(MatrixAlgebra.scalars(2))


# -- Path A -----------------------------------------------------------------------


def test_patha_endpoints():
    E = scalars_expectation_2()
    assert np.linalg.norm(patha_map(E, 0.0).superop - np.eye(4)) <= 1e-14
    assert np.linalg.norm(patha_map(E, 1.0).superop - E) <= 1e-14


def test_patha_midpoint_golden_values():
    # E_{1/2}(A) = 0.5 A + 0.25 tr(A) 1 on A = diag(1, 0)
    E = scalars_expectation_2()
    mid = patha_map(E, 0.5)
    A = np.diag([1.0, 0.0]).astype(complex)
    got = unvec(mid.superop @ vec(A), 2)
    assert np.linalg.norm(got - np.diag([0.75, 0.25])) <= 1e-14


def test_patha_defect_endpoints_and_closed_form():
    E = scalars_expectation_2()
    assert patha_defect(E, 0.0) <= 1e-14
    assert patha_defect(E, 1.0) <= 1e-14
    c = np.linalg.norm(np.eye(4) - E, 2)
    for s in (0.1, 0.25, 0.5, 0.8):
        direct = patha_defect(E, s)
        assert abs(direct - s * (1 - s) * c) <= 1e-12
        # compose-and-norm oracle
        Es = patha_map(E, s).superop
        assert abs(direct - np.linalg.norm(Es @ Es - Es, 2)) <= 1e-14


def test_patha_midpoint_squared_golden_values():
    # E_{1/2}^2(A) = 0.25 A + 0.375 tr(A) 1 on A = diag(1, 0)
    E = scalars_expectation_2()
    mid = patha_map(E, 0.5).superop
    A = np.diag([1.0, 0.0]).astype(complex)
    got = unvec(mid @ mid @ vec(A), 2)
    want = 0.25 * A + 0.375 * np.trace(A) * np.eye(2)
    assert np.linalg.norm(got - want) <= 1e-14
    assert np.linalg.norm(got - np.diag([0.625, 0.375])) <= 1e-14


def test_patha_point_properties_on_grid():
    state = StateDensity.tracial(4)
    N = MatrixAlgebra.tensor_factor(2, 4, "left")
    E = trace_expectation_superop(N)
    for s in np.linspace(0, 1, 11):
        pt = patha_map(E, float(s))
        assert pt.choi_min_eigenvalue() >= -1e-10
        assert pt.unitality_residual() <= 1e-10
        assert pt.state_preservation_residual(state) <= 1e-10


def test_patha_gns_operator_spectrum():
    inc = Inclusion(
        MatrixAlgebra.full(2), MatrixAlgebra.diagonal(2), StateDensity.tracial(2)
    )
    G = gns_build(inc.M, inc.state)
    e_n = jones_projection(inc, G)
    assert np.linalg.norm(patha_gns_operator(e_n, 0.0) - np.eye(4)) <= 1e-14
    assert np.linalg.norm(patha_gns_operator(e_n, 1.0) - e_n) <= 1e-14
    for s in (0.2, 0.5, 0.9):
        es = patha_gns_operator(e_n, s)
        assert np.linalg.norm(es - es.conj().T) <= 1e-12
        w = np.unique(np.round(np.linalg.eigvalsh(es), 12))
        assert np.allclose(np.sort(w), np.sort([1 - s, 1.0]), atol=1e-12)
        assert np.linalg.norm(es, 2) <= 1 + 1e-12


def test_kadison_schwarz_residual_nonnegative():
    rng = seed_stream(60, "interp-ks")
    state = StateDensity.tracial(2)
    E = scalars_expectation_2()
    assert abs(kadison_schwarz_residual(patha_map(E, 0.4), state, np.eye(2))) <= 1e-14
    for _ in range(100):
        s = float(rng.uniform(0, 1))
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        r = kadison_schwarz_residual(patha_map(E, s), state, a)
        assert r >= -1e-10


def test_kadison_schwarz_zero_on_fixed_points():
    state = StateDensity.tracial(2)
    E = scalars_expectation_2()
    a = 0.7 * np.eye(2, dtype=complex)  # a in N is fixed by E at s = 1
    assert abs(kadison_schwarz_residual(patha_map(E, 1.0), state, a)) <= 1e-12


# -- Radon-Nikodym data --------------------------------------------------------------


def test_rn_trivial_pair():
    s = StateDensity(np.diag([0.6, 0.4]))
    rn = rn_data(s, s)
    assert np.linalg.norm(rn.h - np.eye(2)) <= 1e-12
    assert np.linalg.norm(rn.cocycle(0.7) - np.eye(2)) <= 1e-12


def test_rn_commuting_cocycle_is_h_power():
    s0 = StateDensity(np.diag([0.5, 0.5]))
    s1 = StateDensity(np.diag([2 / 3, 1 / 3]))
    rn = rn_data(s0, s1)
    for t in (-1.3, 0.4, 2.0):
        w, v = np.linalg.eigh(rn.h)
        h_it = (v * np.exp(1j * t * np.log(w))[None, :]) @ v.conj().T
        assert np.linalg.norm(rn.cocycle(t) - h_it) <= 1e-12


def test_rn_cocycle_unitary_on_grid():
    rng = seed_stream(61, "interp-rn")
    s0 = StateDensity(random_density(rng, 3))
    s1 = StateDensity(random_density(rng, 3))
    rn = rn_data(s0, s1)
    for t in np.linspace(-2, 2, 9):
        u = rn.cocycle(float(t))
        assert np.linalg.norm(u.conj().T @ u - np.eye(3)) <= 1e-12


# -- state paths -----------------------------------------------------------------------


def test_state_path_endpoints_both_kinds():
    rng = seed_stream(62, "interp-ends")
    s0 = StateDensity(random_density(rng, 3))
    s1 = StateDensity(random_density(rng, 3))
    for kind in ("loglinear", "geodesic"):
        p = state_path(s0, s1, kind)
        assert np.linalg.norm(p.density(0.0).rho - s0.rho) <= 1e-12
        assert np.linalg.norm(p.density(1.0).rho - s1.rho) <= 1e-12
        for s in (0.3, 0.7):
            d = p.density(s)
            assert abs(np.trace(d.rho) - 1) <= 1e-12
            assert d.faithfulness_margin > 0


def test_state_path_kinds_coincide_when_commuting():
    s0 = StateDensity(np.diag([0.5, 0.3, 0.2]))
    s1 = StateDensity(np.diag([0.2, 0.5, 0.3]))
    p = state_path(s0, s1, "loglinear")
    assert p.commutator_norm() <= 1e-12
    for s in (0.25, 0.5, 0.75):
        assert p.kind_distance(s) <= 1e-10
        # commuting closed form rho_s ~ rho0^{1-s} rho1^s
        want = np.diag(
            np.diag(s0.rho).real ** (1 - s) * np.diag(s1.rho).real ** s
        ).astype(complex)
        want /= np.trace(want)
        assert np.linalg.norm(p.density(s).rho - want) <= 1e-12


def test_state_path_kind_distance_nonneg_noncommuting():
    rng = seed_stream(63, "interp-kinds")
    s0 = StateDensity(random_density(rng, 3))
    s1 = StateDensity(random_density(rng, 3))
    p = state_path(s0, s1, "geodesic")
    assert p.commutator_norm() > 1e-6
    d = p.kind_distance(0.5)
    assert d >= 0.0


def test_state_path_rejects_out_of_range():
    s0 = StateDensity.tracial(2)
    s1 = StateDensity(np.diag([0.7, 0.3]))
    p = state_path(s0, s1)
    with pytest.raises(ValueError, match="outside"):
        p.density(1.5)


# -- path Hamiltonian and generator -------------------------------------------------------


def test_kprime_zero_for_constant_path():
    s0 = StateDensity(np.diag([0.6, 0.4]))
    p = state_path(s0, s0, "loglinear")
    ph = path_hamiltonian(p, 0.0)
    assert np.linalg.norm(traceless(ph.k_prime)) <= 1e-12
    assert np.linalg.norm(modular_momentum_states(p)) <= 1e-12


def test_kprime_diagonal_example_ln2_over_2():
    # rho0 = 1/2, rho1 = diag(2/3, 1/3): traceless K'(0) = diag(-ln2/2, +ln2/2)
    s0 = StateDensity(np.diag([0.5, 0.5]))
    s1 = StateDensity(np.diag([2 / 3, 1 / 3]))
    p = state_path(s0, s1, "loglinear")
    ph = path_hamiltonian(p, 0.0)
    got = traceless(ph.k_prime)
    assert np.linalg.norm(got - np.diag([-LN2_HALF, LN2_HALF])) <= 1e-12
    # equals minus the traceless momentum
    P = modular_momentum_states(p)
    assert np.linalg.norm(got + traceless(P)) <= 1e-12


def test_kprime_equals_minus_momentum_loglinear_random():
    rng = seed_stream(64, "interp-kp")
    for _ in range(25):
        n = int(rng.integers(2, 5))
        p = state_path(
            StateDensity(random_density(rng, n)),
            StateDensity(random_density(rng, n)),
            "loglinear",
        )
        P = traceless(modular_momentum_states(p))
        closed = traceless(path_hamiltonian(p, 0.0).k_prime)
        assert np.linalg.norm(closed + P) <= 1e-10
        fd = traceless(path_hamiltonian_fd(p, 0.0).k_prime)
        assert np.linalg.norm(fd + P) <= 1e-6


def test_kprime_finite_difference_is_second_order():
    # Richardson check on the full K' (the scalar log-partition part carries
    # the curvature; the traceless part of a log-linear path is affine, so it
    # is exact under central differences at any step): halving the step
    # shrinks the error ~4x
    rng = seed_stream(65, "interp-rich")
    p = state_path(
        StateDensity(random_density(rng, 3)),
        StateDensity(random_density(rng, 3)),
        "loglinear",
    )
    closed = path_hamiltonian(p, 0.4).k_prime
    e1 = np.linalg.norm(path_hamiltonian_fd(p, 0.4, fd_step=0.08).k_prime - closed)
    e2 = np.linalg.norm(path_hamiltonian_fd(p, 0.4, fd_step=0.04).k_prime - closed)
    assert e1 > 0
    assert abs(e1 / e2 - 4.0) <= 1.0
    # and the affine traceless part is exact already at the default step
    fd = traceless(path_hamiltonian_fd(p, 0.4).k_prime)
    assert np.linalg.norm(fd - traceless(closed)) <= 1e-10


def test_kprime_geodesic_commuting_case():
    s0 = StateDensity(np.diag([0.5, 0.3, 0.2]))
    s1 = StateDensity(np.diag([0.4, 0.4, 0.2]))
    p = state_path(s0, s1, "geodesic")
    P = traceless(modular_momentum_states(p))
    got = traceless(path_hamiltonian(p, 0.0).k_prime)
    assert np.linalg.norm(got + P) <= 1e-6


def test_generator_constant_and_exponentiates_to_shift():
    rng = seed_stream(66, "interp-gen")
    p = state_path(
        StateDensity(random_density(rng, 4)),
        StateDensity(random_density(rng, 4)),
        "loglinear",
    )
    P = traceless(modular_momentum_states(p))
    gs = [path_generator(p, float(s)) for s in np.linspace(0, 1, 7)]
    for g in gs:
        assert np.linalg.norm(g - 2 * P) <= 1e-10
    # endpoint unitary equals exp(-2iP)
    w, v = np.linalg.eigh(gs[0])
    u_g = (v * np.exp(-1j * w)[None, :]) @ v.conj().T
    w2, v2 = np.linalg.eigh(2 * P)
    u_p = (v2 * np.exp(-1j * w2)[None, :]) @ v2.conj().T
    assert np.linalg.norm(u_g - u_p) <= 1e-10


def test_cocycle_scaling_commuting_exact():
    s0 = StateDensity(np.diag([0.5, 0.5]))
    s1 = StateDensity(np.diag([2 / 3, 1 / 3]))
    p = state_path(s0, s1, "loglinear")
    for s in (0.25, 0.6):
        for t in (0.7, -1.1):
            assert cocycle_scaling_residual(p, s, t) <= 1e-10


def test_cocycle_scaling_noncommuting_reported():
    rng = seed_stream(67, "interp-coc")
    p = state_path(
        StateDensity(random_density(rng, 3)),
        StateDensity(random_density(rng, 3)),
        "loglinear",
    )
    r = cocycle_scaling_residual(p, 0.5, 0.8)
    assert np.isfinite(r) and r >= 0.0


# -- filtrations ------------------------------------------------------------------------


def standard_chain() -> Filtration:
    return Filtration(
        (
            MatrixAlgebra.full(4),
            MatrixAlgebra.tensor_factor(2, 4, "left"),
            MatrixAlgebra.scalars(4),
        ),
        StateDensity.tracial(4),
    )


def test_filtration_absorption_and_nesting():
    rep = filtration_check(standard_chain())
    assert rep.nesting <= 1e-12
    assert rep.absorption <= 1e-12
    assert rep.projection_monotonicity <= 1e-10
    assert rep.boundary_identity <= 1e-12
    assert rep.all_pass()


def test_filtration_absorption_compose_oracle():
    F = standard_chain()
    exps = F.expectation_superops()
    # compose expectations by hand on probes
    rng = seed_stream(68, "interp-filt")
    for _ in range(10):
        x = random_hermitian(rng, 4)
        e1_then_e2 = unvec(exps[2] @ (exps[1] @ vec(x)), 4)
        direct = unvec(exps[2] @ vec(x), 4)
        assert np.linalg.norm(e1_then_e2 - direct) <= 1e-12


def test_filtration_rejects_non_nested_chain():
    with pytest.raises(ValueError, match="nested"):
        Filtration(
            (
                MatrixAlgebra.tensor_factor(2, 4, "left"),
                MatrixAlgebra.tensor_factor(2, 4, "right"),
            ),
            StateDensity.tracial(4),
        )


def test_patha_substitution_breaks_absorption():
    v = patha_absorption_violation(standard_chain(), s=0.5)
    assert v >= 1e-2
