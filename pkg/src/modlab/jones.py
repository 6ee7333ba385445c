"""Jones basic construction: the projection implementing a conditional
expectation on the GNS space, the extension algebra it generates together
with the represented algebra, relative commutants, and the canonical shift
unitary built from two modular conjugations.

Extension convention (deliberate, finite-dimensional): Omega is never cyclic
for a proper subalgebra N, so the subalgebra's modular conjugation exists
canonically only on [N Omega].  We polar-decompose the restricted closure map
n Omega -> n^dag Omega there and extend by the ambient conjugation J_M on the
orthocomplement:

    J_N_hat := J_N^sub  (+)  J_M restricted to [N Omega]-perp.

This reproduces U_Gamma = 1 at N = M and keeps U_Gamma = J_M J_N_hat unitary
whenever the modular flow of the state preserves N.  Everything downstream of
the convention lives in ``extended_conjugation``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    MatrixAlgebra,
    StateDensity,
    _orthonormal_rows,
    commutant,
    gns_subspace_projector,
    inclusion_residual,
    intersect,
    omega_expectation,
    span_distance,
    trace_expectation_superop,
)
from .linalg import AntilinearOperator, left_mult, polar_decompose_antilinear, unvec, vec
from .modular import GnsSpace, ModularData, tomita


@dataclass(frozen=True)
class Inclusion:
    """A unital inclusion N inside M (subalgebras of the same M_n) with a
    faithful reference state and a choice of expectation."""

    M: MatrixAlgebra
    N: MatrixAlgebra
    state: StateDensity
    expectation: str = "omega"  # "omega" (GNS-induced) or "trace"

    def __post_init__(self):
        if self.M.dim != self.N.dim or self.M.dim != self.state.dim:
            raise ValueError("ambient dimensions of M, N, state differ")
        r = inclusion_residual(self.N, self.M)
        if r > 1e-10:
            raise ValueError(f"N is not contained in M: residual {r:.3e}")
        for name, alg in (("M", self.M), ("N", self.N)):
            if not alg.contains_unit:
                raise ValueError(f"{name} is not unital")

    def expectation_superop(self) -> np.ndarray:
        if self.expectation == "trace":
            return trace_expectation_superop(self.N)
        return omega_expectation(self.N, self.state).superop


def jones_projection(inc: Inclusion, G: GnsSpace) -> np.ndarray:
    """Orthogonal projection onto [N Omega] in the GNS space of ``G``."""
    if G.state is not inc.state and not np.allclose(G.state.rho, inc.state.rho):
        raise ValueError("GNS space was not built from the inclusion's state")
    return gns_subspace_projector(inc.N, inc.state)


@dataclass(frozen=True)
class BasicExtension:
    """<M, e_N> acting on the GNS space, as an algebra of superoperators."""

    m1: MatrixAlgebra  # ambient dimension n^2
    e_n: np.ndarray

    @property
    def dimension(self) -> int:
        return self.m1.size


def represented_algebra(M: MatrixAlgebra) -> MatrixAlgebra:
    """M acting on its GNS space by left multiplication."""
    return MatrixAlgebra.from_span([left_mult(b) for b in M.basis], validate=False)


def basic_extension(inc: Inclusion, G: GnsSpace) -> BasicExtension:
    e_n = jones_projection(inc, G)
    gens = [left_mult(b) for b in inc.M.basis] + [e_n]
    n2 = inc.M.dim ** 2
    m1 = MatrixAlgebra.generated(gens, max_dim=n2 * n2)
    return BasicExtension(m1, e_n)


def basic_extension_from_conjugation(
    inc: Inclusion, md: ModularData
) -> MatrixAlgebra:
    """The independent route to M_1: conjugate the commutant of represented N
    by the ambient modular conjugation, J_M {N}' J_M."""
    n_rep = represented_algebra(inc.N)
    n_comm = commutant(n_rep)
    A = md.conjugation.matrix
    mats = [A @ np.conj(c) @ np.conj(A) for c in n_comm.basis]
    return MatrixAlgebra.from_span(mats, validate=False)


def relative_commutant(A: MatrixAlgebra, B: MatrixAlgebra) -> MatrixAlgebra:
    """A' intersected with B (both inside the same M_n)."""
    if inclusion_residual(A, B) > 1e-10:
        raise ValueError("A is not contained in B")
    return intersect(commutant(A), B)


def extended_conjugation(
    inc: Inclusion, md: ModularData
) -> tuple[AntilinearOperator, np.ndarray]:
    """J_N_hat per the module convention; also returns the [N Omega] projector."""
    state = inc.state
    n = inc.N.dim
    h, h_inv = state.sqrt(), state.inv_sqrt()
    stack = _orthonormal_rows(np.stack([vec(b @ h) for b in inc.N.basis]))
    Q = stack.T  # columns: orthonormal basis of [N Omega]
    m = Q.shape[1]
    # restricted closure map in coordinates: c -> coords of (n_c)^dag Omega
    A_sub = np.zeros((m, m), dtype=complex)
    for k in range(m):
        x = unvec(Q[:, k], n) @ h_inv
        A_sub[:, k] = Q.conj().T @ vec(x.conj().T @ h)
    J_sub, _ = polar_decompose_antilinear(AntilinearOperator(A_sub))
    P = Q @ Q.conj().T
    A_jm = md.conjugation.matrix
    A_hat = Q @ J_sub.matrix @ Q.T + A_jm @ (np.eye(n * n) - np.conj(P))
    return AntilinearOperator(A_hat), P


@dataclass(frozen=True)
class ShiftReport:
    u_gamma: np.ndarray
    unitarity_residual: float
    transport_distances: tuple[float, ...]
    relative_commutant_dim: int
    target_dim: int


def canonical_shift(
    inc: Inclusion, G: GnsSpace, md: ModularData | None = None
) -> ShiftReport:
    """U_Gamma = J_M J_N_hat and, per basis element of N' in M, the relative
    distance of its U_Gamma-conjugate from span(M' in M_1).

    The transport property is a measured report, not an assertion: the
    identity it probes is proved in standard form, which finite dimension
    cannot realize, so honesty demands data over fabrication.
    """
    if md is None:
        md = tomita(G)
    j_hat, _ = extended_conjugation(inc, md)
    U = md.conjugation.compose_antilinear(j_hat)
    n2 = U.shape[0]
    unit_res = float(np.linalg.norm(U.conj().T @ U - np.eye(n2), 2))

    rel = relative_commutant(inc.N, inc.M)
    m_rep = represented_algebra(inc.M)
    m_comm = commutant(m_rep)
    ext = basic_extension(inc, G)
    target = intersect(m_comm, ext.m1)
    dists = []
    for x in rel.basis:
        op = U @ left_mult(x) @ U.conj().T
        d = target.distance(op) / max(np.linalg.norm(op), 1e-30)
        dists.append(float(d))
    return ShiftReport(
        u_gamma=U,
        unitarity_residual=unit_res,
        transport_distances=tuple(dists),
        relative_commutant_dim=rel.size,
        target_dim=target.size,
    )


def index_estimate(inc: Inclusion, e_n: np.ndarray) -> tuple[float, float]:
    """Jones-style index from the expectation of e_N back onto M.

    Projects e_N onto the represented copy of M; when the result is a scalar
    lambda * 1, the index estimate is 1/lambda.  Returns (index, residual of
    the scalarity check).
    """
    n = inc.M.dim
    X = np.zeros((n, n), dtype=complex)
    for b in inc.M.basis:
        coeff = np.trace(left_mult(b).conj().T @ e_n) / n
        X += coeff * b
    lam = np.trace(X).real / n
    scalar_residual = float(np.linalg.norm(X - lam * np.eye(n)))
    if lam <= 1e-14:
        return float("inf"), scalar_residual
    return float(1.0 / lam), scalar_residual
