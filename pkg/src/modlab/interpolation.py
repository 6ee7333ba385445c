"""Interpolations between the identity channel and a conditional expectation.

Two routes are implemented side by side:

* the convex completely-positive path ``(1-s) id + s E`` together with a
  quantitative measurement of its idempotency defect (the reason it cannot
  be a path of expectations), and

* a state-space surrogate of the canonical idempotent path: one-parameter
  families of densities between rho_0 and rho_1 (log-linear, or geodesic via
  the symmetric Radon-Nikodym derivative), with the associated Hamiltonian
  family K(s), its derivative, and the translation generator G(s) = -2 K'(s).

At finite dimension the algebra cannot vary continuously, so the surrogate
interpolates states rather than subalgebras; the log-linear kind makes
K'(0) = -P and the constancy G(s) = 2P exact, while the geodesic kind
realizes the non-commutative geometric-mean heuristic for comparison.
Discrete filtrations of subalgebras carry the dynamic-idempotency
(absorption) property that a continuous algebra path would have.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    MatrixAlgebra,
    StateDensity,
    gns_subspace_projector,
    inclusion_residual,
    omega_expectation,
    trace_expectation_superop,
)
from .linalg import (
    choi_matrix,
    herm_exp,
    herm_log,
    herm_power,
    hermitize,
    unitary_phase,
    unvec,
    vec,
)

FD_STEP = 1e-4  # central-difference step: O(h^2) truncation ~ 1e-8


def traceless(X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    return X - (np.trace(X) / n) * np.eye(n)


# -- Path A: convex CP interpolation ---------------------------------------------


@dataclass(frozen=True)
class CpPathPoint:
    s: float
    superop: np.ndarray
    choi: np.ndarray

    def choi_min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(hermitize(self.choi)).min())

    def unitality_residual(self) -> float:
        n = round(np.sqrt(self.superop.shape[0]))
        eye = vec(np.eye(n, dtype=complex))
        return float(np.linalg.norm(self.superop @ eye - eye))

    def state_preservation_residual(self, state: StateDensity) -> float:
        r = vec(state.rho)
        return float(np.linalg.norm(self.superop.conj().T @ r - r))


def _check_s(s: float) -> float:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"interpolation parameter {s} outside [0, 1]")
    return float(s)


def patha_map(E: np.ndarray, s: float) -> CpPathPoint:
    """E_s = (1-s) id + s E as a superoperator, with its Choi matrix."""
    s = _check_s(s)
    n2 = E.shape[0]
    superop = (1 - s) * np.eye(n2) + s * E
    return CpPathPoint(s, superop, choi_matrix(superop))


def patha_defect(E: np.ndarray, s: float) -> float:
    """||E_s^2 - E_s|| in operator norm.

    For an idempotent E this equals s(1-s)||id - E|| because
    E_s^2 - E_s = -s(1-s)(id - E).
    """
    s = _check_s(s)
    Es = patha_map(E, s).superop
    return float(np.linalg.norm(Es @ Es - Es, 2))


def patha_gns_operator(e_n: np.ndarray, s: float) -> np.ndarray:
    """(1-s) 1 + s e_N on the GNS space: self-adjoint, norm <= 1,
    spectrum inside {1, 1-s}."""
    s = _check_s(s)
    return (1 - s) * np.eye(e_n.shape[0]) + s * e_n


def kadison_schwarz_residual(
    point: CpPathPoint, state: StateDensity, a: np.ndarray
) -> float:
    """omega(a^dag a) - omega(E_s(a)^dag E_s(a)); nonnegative is the inequality."""
    n = state.dim
    ea = unvec(point.superop @ vec(a), n)
    lhs = np.trace(state.rho @ a.conj().T @ a).real
    rhs = np.trace(state.rho @ ea.conj().T @ ea).real
    return float(lhs - rhs)


# -- Radon-Nikodym data and state paths -------------------------------------------


@dataclass(frozen=True)
class RnData:
    """Symmetric Radon-Nikodym derivative h and the unitary cocycle sampler."""

    h: np.ndarray
    rho0: np.ndarray
    rho1: np.ndarray

    def cocycle(self, t: float) -> np.ndarray:
        """u_t = rho1^{it} rho0^{-it}; unitary for every real t."""
        return unitary_phase(self.rho1, t) @ unitary_phase(self.rho0, -t)


def rn_data(state0: StateDensity, state1: StateDensity) -> RnData:
    h = hermitize(state0.inv_sqrt() @ state1.rho @ state0.inv_sqrt())
    return RnData(h, state0.rho, state1.rho)


@dataclass(frozen=True)
class StatePath:
    """One-parameter family of faithful densities between two endpoints."""

    state0: StateDensity
    state1: StateDensity
    kind: str  # "loglinear" or "geodesic"

    def __post_init__(self):
        if self.kind not in ("loglinear", "geodesic"):
            raise ValueError(f"unknown path kind {self.kind!r}")
        if self.state0.dim != self.state1.dim:
            raise ValueError("endpoint dimensions differ")

    @property
    def dim(self) -> int:
        return self.state0.dim

    def rn(self) -> RnData:
        return rn_data(self.state0, self.state1)

    def _density_raw(self, s: float) -> np.ndarray:
        """Unnormalized-then-normalized density; defined for all real s so
        boundary derivatives can use central differences."""
        if self.kind == "loglinear":
            a = herm_log(self.state0.rho)
            b = herm_log(self.state1.rho)
            rho = herm_exp((1 - s) * a + s * b)
        else:
            h = self.rn().h
            half = self.state0.sqrt()
            rho = half @ herm_power(h, s) @ half
        return hermitize(rho / np.trace(rho).real)

    def density(self, s: float) -> StateDensity:
        s = _check_s(s)
        return StateDensity(self._density_raw(s))

    def commutator_norm(self) -> float:
        r0, r1 = self.state0.rho, self.state1.rho
        return float(np.linalg.norm(r0 @ r1 - r1 @ r0, 2))

    def kind_distance(self, s: float) -> float:
        """HS distance between the two kinds at the same parameter."""
        other = "geodesic" if self.kind == "loglinear" else "loglinear"
        twin = StatePath(self.state0, self.state1, other)
        return float(np.linalg.norm(self._density_raw(s) - twin._density_raw(s)))


def state_path(
    state0: StateDensity, state1: StateDensity, kind: str = "loglinear"
) -> StatePath:
    return StatePath(state0, state1, kind)


def modular_momentum_states(path: StatePath, kappa: float = 1.0) -> np.ndarray:
    """P = K(0) - K(1) = (log rho1 - log rho0)/kappa for the path endpoints."""
    return (herm_log(path.state1.rho) - herm_log(path.state0.rho)) / kappa


@dataclass(frozen=True)
class PathHamiltonian:
    k: np.ndarray
    k_prime: np.ndarray
    method: str  # "closed-form" or "central-difference"


def path_hamiltonian(
    path: StatePath, s: float, kappa: float = 1.0, fd_step: float = FD_STEP
) -> PathHamiltonian:
    """K(s) = -log rho_s / kappa with its s-derivative.

    Log-linear paths have the exact closed form
    K'(s) = -(log rho1 - log rho0)/kappa + (Z'/Z)/kappa * 1 because the
    exponent is affine in s; the geodesic kind falls back to central
    differences (the path extends smoothly past the endpoints).
    """
    K = -herm_log(path._density_raw(s)) / kappa
    if path.kind == "loglinear":
        a = herm_log(path.state0.rho)
        b = herm_log(path.state1.rho)
        diff = b - a
        rho_un = herm_exp(a + s * diff)
        z = np.trace(rho_un).real
        zprime = np.trace(rho_un @ diff).real
        k_prime = (-diff + (zprime / z) * np.eye(path.dim)) / kappa
        return PathHamiltonian(K, k_prime, "closed-form")
    kp = -(herm_log(path._density_raw(s + fd_step)) - herm_log(path._density_raw(s - fd_step)))
    return PathHamiltonian(K, kp / (2 * fd_step * kappa), "central-difference")


def path_hamiltonian_fd(
    path: StatePath, s: float, kappa: float = 1.0, fd_step: float = FD_STEP
) -> PathHamiltonian:
    """Central-difference K'(s) regardless of kind (an independent route)."""
    K = -herm_log(path._density_raw(s)) / kappa
    kp = -(herm_log(path._density_raw(s + fd_step)) - herm_log(path._density_raw(s - fd_step)))
    return PathHamiltonian(K, kp / (2 * fd_step * kappa), "central-difference")


def path_generator(path: StatePath, s: float, kappa: float = 1.0) -> np.ndarray:
    """G(s) := -2 K'(s), traceless part.

    For the log-linear kind G is s-independent and equals twice the momentum
    of the endpoint pair, so exp(-i G) = exp(-2i P) holds by construction.
    """
    ph = path_hamiltonian(path, s, kappa)
    return traceless(-2 * ph.k_prime)


def cocycle_scaling_residual(path: StatePath, s: float, t: float) -> float:
    """Distance (up to a global phase) between the cocycle of rho_s and the
    s-rescaled endpoint cocycle u_{st}.

    The phase quotient removes the normalization Z(s)^{-it}: densities along
    the path are normalized while the underlying weights are defined only up
    to scale.  Exact in the commuting case; reported as a diagnostic
    otherwise.
    """
    rho_s = path._density_raw(s)
    u_path = unitary_phase(rho_s, t) @ unitary_phase(path.state0.rho, -t)
    u_scaled = path.rn().cocycle(s * t)
    overlap = np.trace(u_scaled.conj().T @ u_path)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-30 else 1.0
    return float(np.linalg.norm(u_path - phase * u_scaled, 2))


# -- discrete filtrations ------------------------------------------------------------


@dataclass(frozen=True)
class Filtration:
    """Descending chain A_0 >= A_1 >= ... of unital subalgebras with their
    expectations and GNS projections for one reference state."""

    algebras: tuple[MatrixAlgebra, ...]
    state: StateDensity
    expectation: str = "trace"  # "trace" or "omega"

    def __post_init__(self):
        if len(self.algebras) < 2:
            raise ValueError("a filtration needs at least two levels")
        for k in range(len(self.algebras) - 1):
            r = inclusion_residual(self.algebras[k + 1], self.algebras[k])
            if r > 1e-10:
                raise ValueError(f"chain not nested at level {k}: residual {r:.3e}")

    def expectation_superops(self) -> list[np.ndarray]:
        if self.expectation == "trace":
            return [trace_expectation_superop(A) for A in self.algebras]
        return [omega_expectation(A, self.state).superop for A in self.algebras]

    def gns_projections(self) -> list[np.ndarray]:
        return [gns_subspace_projector(A, self.state) for A in self.algebras]


@dataclass(frozen=True)
class FiltrationReport:
    nesting: float
    absorption: float
    projection_monotonicity: float
    boundary_identity: float

    def all_pass(self, tol: float = 1e-10) -> bool:
        return (
            self.nesting <= tol
            and self.absorption <= tol
            and self.projection_monotonicity <= tol
            and self.boundary_identity <= tol
        )


def filtration_check(F: Filtration) -> FiltrationReport:
    """Absorption E_k' o E_k = E_k' for k' >= k, range nesting, projection
    monotonicity e_k' <= e_k, and E_0 = id when A_0 is the full algebra."""
    exps = F.expectation_superops()
    projs = F.gns_projections()
    levels = len(F.algebras)

    nesting = max(
        inclusion_residual(F.algebras[k + 1], F.algebras[k])
        for k in range(levels - 1)
    )
    absorption = 0.0
    mono = 0.0
    for k in range(levels):
        for kp in range(k, levels):
            absorption = max(
                absorption,
                float(np.linalg.norm(exps[kp] @ exps[k] - exps[kp], 2)),
            )
            gap = np.linalg.eigvalsh(hermitize(projs[k] - projs[kp])).min()
            mono = max(mono, float(max(0.0, -gap)))
    n = F.algebras[0].dim
    if F.algebras[0].size == n * n:
        boundary = float(np.linalg.norm(exps[0] - np.eye(n * n), 2))
    else:
        boundary = 0.0
    return FiltrationReport(float(nesting), absorption, mono, boundary)


def patha_absorption_violation(F: Filtration, s: float = 0.5) -> float:
    """Substitute the convex-path maps for the expectations: the absorption
    property fails, and this returns the worst residual over k' > k."""
    exps = F.expectation_superops()
    tilde = [patha_map(E, s).superop for E in exps]
    worst = 0.0
    for k in range(len(tilde)):
        for kp in range(k + 1, len(tilde)):
            worst = max(
                worst, float(np.linalg.norm(tilde[kp] @ tilde[k] - tilde[kp], 2))
            )
    return worst
