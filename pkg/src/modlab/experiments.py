"""Two-sided thermal models on small lattices: thermofield doubles, modular
momentum of nested right-side regions, correlator scans under the flow
exp(-2isP), a translation-fidelity diagnostic, and the resolvent-stability
probe for generator families.

Hamiltonian presets (couplings fixed here so corpora are reproducible):

* ``xx-chain``:     sum_j (X_j X_{j+1} + Y_j Y_{j+1})/2, periodic ring.
* ``ising-tfield``: -sum_j Z_j Z_{j+1} - 1.0 * sum_j X_j, periodic ring.
* ``random-gue``:   (B + B^dag)/sqrt(8 D) with B standard complex Gaussian
                    from the seed; carries the site structure of the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .interpolation import (
    StatePath,
    modular_momentum_states,
    path_generator,
    traceless,
)
from .linalg import (
    SingularityError,
    embed_sites,
    herm_log,
    hermitize,
    partial_trace,
    spectral_decompose,
)
from .rng import seed_stream

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def hamiltonian_preset(
    name: str, sites: int, local_dim: int = 2, seed: int = 0
) -> tuple[np.ndarray, dict]:
    """Named Hamiltonian on ``sites`` sites; returns (H, metadata)."""
    L, d = int(sites), int(local_dim)
    if L < 2:
        raise ValueError("need at least two sites")
    dim = d**L
    all_sites = list(range(L))
    meta = {"preset": name, "sites": L, "local_dim": d, "seed": int(seed)}
    if name == "xx-chain":
        if d != 2:
            raise ValueError("xx-chain is a qubit preset")
        bonds = [(j, (j + 1) % L) for j in range(L)]
        if L == 2:
            bonds = [(0, 1)]  # the periodic ring has a single distinct bond
        H = np.zeros((dim, dim), dtype=complex)
        for a, b in bonds:
            lo, hi = min(a, b), max(a, b)
            for p in ("X", "Y"):
                H += 0.5 * embed_sites(
                    np.kron(PAULI[p], PAULI[p]), [lo, hi], all_sites, d
                )
        meta.update(coupling=1.0, boundary="periodic", translation_invariant=True)
        return hermitize(H), meta
    if name == "ising-tfield":
        if d != 2:
            raise ValueError("ising-tfield is a qubit preset")
        g = 1.0
        bonds = [(j, (j + 1) % L) for j in range(L)]
        if L == 2:
            bonds = [(0, 1)]
        H = np.zeros((dim, dim), dtype=complex)
        for a, b in bonds:
            lo, hi = min(a, b), max(a, b)
            H -= embed_sites(np.kron(PAULI["Z"], PAULI["Z"]), [lo, hi], all_sites, d)
        for j in range(L):
            H -= g * embed_sites(PAULI["X"], [j], all_sites, d)
        meta.update(zz_coupling=1.0, field=g, boundary="periodic",
                    translation_invariant=True)
        return hermitize(H), meta
    if name == "random-gue":
        rng = seed_stream(seed, "gue-preset")
        B = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        H = hermitize(B) / np.sqrt(2 * dim)
        meta.update(ensemble="gue", translation_invariant=False)
        return H, meta
    raise ValueError(f"unknown preset {name!r}")


@dataclass(frozen=True)
class TfdModel:
    """Thermofield double of (H, beta) on two copies of the lattice.

    The left copy carries the conjugate eigenbasis, so the reduced density is
    exp(-beta H)/Z on the right copy and its entrywise conjugate on the left
    (identical for the real lattice presets).
    """

    hamiltonian: np.ndarray
    beta: float
    sites: int
    local_dim: int
    psi: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def copy_dim(self) -> int:
        return self.hamiltonian.shape[0]

    def gibbs(self) -> np.ndarray:
        w = np.exp(-self.beta * (self.energies - self.energies[0]))
        w /= w.sum()
        return (self.vectors * w[None, :]) @ self.vectors.conj().T

    def left_operator(self, op: np.ndarray) -> np.ndarray:
        return np.kron(op, np.eye(self.copy_dim, dtype=complex))

    def right_operator(self, op: np.ndarray) -> np.ndarray:
        return np.kron(np.eye(self.copy_dim, dtype=complex), op)

    def embed_right(self, op: np.ndarray, region: Sequence[int]) -> np.ndarray:
        full = embed_sites(op, list(region), list(range(self.sites)), self.local_dim)
        return self.right_operator(full)

    def embed_left(self, op: np.ndarray, region: Sequence[int]) -> np.ndarray:
        full = embed_sites(op, list(region), list(range(self.sites)), self.local_dim)
        return self.left_operator(full)

    def expectation(self, op_full: np.ndarray) -> complex:
        return complex(self.psi.conj() @ (op_full @ self.psi))

    def reduced_density(self, region: Sequence[int], side: str = "right") -> np.ndarray:
        L, d = self.sites, self.local_dim
        dims = [d] * (2 * L)
        if side == "right":
            keep = [L + s for s in sorted(region)]
        elif side == "left":
            keep = sorted(region)
        else:
            raise ValueError("side must be 'left' or 'right'")
        rho_full = np.outer(self.psi, self.psi.conj())
        return partial_trace(rho_full, dims, keep)


def build_tfd(
    H: np.ndarray, beta: float, sites: int, local_dim: int = 2, meta: dict | None = None
) -> TfdModel:
    """|TFD> = Z^{-1/2} sum_i e^{-beta E_i/2} |conj(i)> x |i>.

    Weights are rescaled by the ground energy before exponentiation, so large
    beta cannot underflow the partition sum.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    w, v = spectral_decompose(H)
    amp = np.exp(-beta * (w - w[0]) / 2)
    amp /= np.linalg.norm(amp)
    M = v.conj() @ np.diag(amp) @ v.T  # psi[(a,b)] = sum_i amp_i conj(v_ai) v_bi
    return TfdModel(
        hamiltonian=np.asarray(H, dtype=complex),
        beta=float(beta),
        sites=int(sites),
        local_dim=int(local_dim),
        psi=M.reshape(-1),
        energies=w,
        vectors=v,
        meta=dict(meta or {}),
    )


def build_tfd_preset(
    name: str, sites: int, beta: float, local_dim: int = 2, seed: int = 0
) -> TfdModel:
    H, meta = hamiltonian_preset(name, sites, local_dim, seed)
    return build_tfd(H, beta, sites, local_dim, meta)


# -- modular momentum --------------------------------------------------------------


def region_modular_hamiltonian(model: TfdModel, region: Sequence[int]) -> np.ndarray:
    """K = -log of the right-copy reduced density on ``region`` (kappa = 1)."""
    rho = model.reduced_density(region, side="right")
    w = np.linalg.eigvalsh(hermitize(rho))
    if w.min() < 1e-12:
        raise SingularityError(
            f"reduced density on region {list(region)} not faithful "
            f"(eigenvalue {w.min():.3e})",
            float(w.min()),
        )
    return -herm_log(rho)


def modular_momentum(
    model: TfdModel, m_sites: Sequence[int], n_sites: Sequence[int]
) -> np.ndarray:
    """P = traceless(K_M - K_N x 1) on the outer region, kappa = 1."""
    m_sites, n_sites = sorted(m_sites), sorted(n_sites)
    if not set(n_sites) <= set(m_sites):
        raise ValueError(f"N sites {n_sites} not inside M sites {m_sites}")
    k_m = region_modular_hamiltonian(model, m_sites)
    k_n = region_modular_hamiltonian(model, n_sites)
    k_n_embedded = embed_sites(k_n, n_sites, m_sites, model.local_dim)
    return traceless(k_m - k_n_embedded)


# -- correlator scan ---------------------------------------------------------------


@dataclass(frozen=True)
class CorrelatorSeries:
    s_grid: np.ndarray
    values: np.ndarray  # complex F(s)
    fprime_fd: complex
    fprime_commutator: complex
    static_value: complex
    fd_step: float
    meta: dict = field(default_factory=dict)

    def fprime_disagreement(self) -> float:
        return float(abs(self.fprime_fd - self.fprime_commutator))


def _flow_unitary(p_eigs: np.ndarray, p_vecs: np.ndarray, s: float) -> np.ndarray:
    return (p_vecs * np.exp(-2j * s * p_eigs)[None, :]) @ p_vecs.conj().T


def correlator_scan(
    model: TfdModel,
    o_left: np.ndarray,
    o_right: np.ndarray,
    momentum_full: np.ndarray,
    s_grid: Sequence[float],
    fd_step: float = 1e-5,
) -> CorrelatorSeries:
    """F(s) = <TFD| O_L (U(s) O_R U(s)^dag) |TFD> with U(s) = exp(-2isP).

    All operators must already be embedded in the doubled Hilbert space
    (``TfdModel.embed_left`` / ``embed_right``).  F'(0) is computed twice:
    by a central difference at a dedicated step, and by the closed commutator
    form  -2i <TFD| O_L [P, O_R] |TFD>.
    """
    s_grid = np.asarray(list(s_grid), dtype=float)
    p_eigs, p_vecs = spectral_decompose(momentum_full)

    def F(s: float) -> complex:
        u = _flow_unitary(p_eigs, p_vecs, s)
        return model.expectation(o_left @ (u @ o_right @ u.conj().T))

    values = np.array([F(s) for s in s_grid])
    fprime_fd = (F(fd_step) - F(-fd_step)) / (2 * fd_step)
    comm = momentum_full @ o_right - o_right @ momentum_full
    fprime_commutator = -2j * model.expectation(o_left @ comm)
    return CorrelatorSeries(
        s_grid=s_grid,
        values=values,
        fprime_fd=complex(fprime_fd),
        fprime_commutator=complex(fprime_commutator),
        static_value=model.expectation(o_left @ o_right),
        fd_step=fd_step,
        meta=dict(model.meta),
    )


# -- translation fidelity ------------------------------------------------------------


def _translation_permutation(L: int, d: int) -> np.ndarray:
    """One-site forward shift on the product basis of a periodic chain."""
    dim = d**L
    T = np.zeros((dim, dim))
    for idx in range(dim):
        digits = np.base_repr(idx, base=d).zfill(L)
        shifted = digits[-1] + digits[:-1]
        T[int(shifted, base=d), idx] = 1.0
    return T


def fractional_translation(L: int, d: int, power: float) -> np.ndarray:
    """T^power via the principal branch on each permutation cycle.

    Eigenvalues of the shift are roots of unity; each is raised to ``power``
    with its phase in (-pi, pi], so integer powers coincide with the exact
    permutation and power 0 is the identity.
    """
    T = _translation_permutation(L, d)
    dim = T.shape[0]
    seen = np.zeros(dim, dtype=bool)
    U = np.zeros((dim, dim), dtype=complex)
    for start in range(dim):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        nxt = int(np.argmax(T[:, start]))
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = int(np.argmax(T[:, nxt]))
        ell = len(cycle)
        for m in range(ell):
            m_signed = m if m <= ell / 2 else m - ell
            phase = np.exp(2j * np.pi * m_signed * power / ell)
            # eigenvector sum_k w^{-mk} |cycle_k> / sqrt(ell), T-eigenvalue w^m
            vec_c = np.zeros(dim, dtype=complex)
            for k, state in enumerate(cycle):
                vec_c[state] = np.exp(-2j * np.pi * m_signed * k / ell)
            vec_c /= np.sqrt(ell)
            U += phase * np.outer(vec_c, vec_c.conj())
    return U


def translation_fidelity(
    model: TfdModel,
    op: np.ndarray,
    site: int,
    momentum_full: np.ndarray,
    s_values: Sequence[float],
) -> np.ndarray:
    """Normalized HS overlap between the flow-conjugated single-site operator
    and the same operator translated by 2s lattice sites (right copy).

    Purely diagnostic: no sharp lattice analogue of the continuum statement
    exists, so the series is emitted without a pass threshold.
    """
    if not model.meta.get("translation_invariant", False):
        raise ValueError(
            "translation fidelity needs a translation-invariant periodic preset"
        )
    if op.shape != (model.local_dim,) * 2:
        raise ValueError("op must act on a single site")
    L, d = model.sites, model.local_dim
    o_chain = embed_sites(op, [site], list(range(L)), d)
    o_full = model.right_operator(o_chain)
    p_eigs, p_vecs = spectral_decompose(momentum_full)
    norm_sq = np.linalg.norm(o_full) ** 2
    out = []
    for s in s_values:
        u = _flow_unitary(p_eigs, p_vecs, s)
        flowed = u @ o_full @ u.conj().T
        t_frac = model.right_operator(fractional_translation(L, d, 2 * s))
        translated = t_frac @ o_full @ t_frac.conj().T
        out.append(abs(np.vdot(translated, flowed)) / norm_sq)
    return np.array(out)


# -- resolvent stability --------------------------------------------------------------


@dataclass(frozen=True)
class StabilityRow:
    s: float
    lhs: float
    kato_rhs: float
    proj_dist: float


@dataclass(frozen=True)
class StabilityReport:
    z: complex
    rows: tuple[StabilityRow, ...]
    c_z: float
    spectrum_distance: float
    kato_violations: int


def resolvent_stability(
    path: StatePath,
    z: complex,
    s_grid: Sequence[float],
    n_samples: int = 100,
    seed: int = 0,
    kappa: float = 1.0,
    proj_gap: float = 1.0,
) -> StabilityReport:
    """Probe ||(R_{G(s)}(z) - R_{G(0)}(z)) xi|| against the first-order bound
    ||G(s) - G(0)|| ||xi|| / |Im z|^2 and extract the constant of the
    projection-controlled form lhs <= C_z ||xi|| ||e(s) - e(0)||.

    ``proj_gap`` is ||e_N - 1|| of the associated GNS family, so the
    projection distance at parameter s is s * proj_gap.
    """
    if abs(z.imag) == 0.0:
        raise ValueError("z must have nonzero imaginary part")
    g0 = path_generator(path, 0.0, kappa)
    spec = np.linalg.eigvalsh(2 * traceless(modular_momentum_states(path, kappa)))
    dist = float(np.min(np.abs(spec - z)))
    if dist < 1e-6:
        raise SingularityError(
            f"z = {z} is within {dist:.2e} of the generator spectrum", dist
        )
    n = path.dim
    rng = seed_stream(seed, f"stability-{z!r}")
    xis = rng.standard_normal((n_samples, n)) + 1j * rng.standard_normal((n_samples, n))
    xis /= np.linalg.norm(xis, axis=1)[:, None]
    eye = np.eye(n)
    r0 = np.linalg.inv(g0 - z * eye)
    rows = []
    violations = 0
    c_z = 0.0
    for s in s_grid:
        gs = path_generator(path, float(s), kappa)
        rs = np.linalg.inv(gs - z * eye)
        diff = rs - r0
        lhs = float(max(np.linalg.norm(diff @ xi) for xi in xis))
        rhs = float(np.linalg.norm(gs - g0, 2) / (z.imag**2))
        proj = float(s) * proj_gap
        if lhs > rhs + 1e-10:
            violations += 1
        if proj > 0:
            c_z = max(c_z, lhs / proj)
        rows.append(StabilityRow(float(s), lhs, rhs, proj))
    return StabilityReport(z, tuple(rows), c_z, dist, violations)


def stability_fit(reports: Sequence[StabilityReport]) -> dict:
    """Fit log C_z against log 1/dist(z, spectrum) across probes."""
    xs = np.array([np.log(1.0 / r.spectrum_distance) for r in reports])
    ys = np.array([np.log(max(r.c_z, 1e-300)) for r in reports])
    if len(reports) >= 2 and np.ptp(xs) > 1e-12:
        slope, intercept = np.polyfit(xs, ys, 1)
    else:
        slope, intercept = float("nan"), float("nan")
    return {
        "slope": float(slope),
        "intercept": float(intercept),
        "c_z": [float(r.c_z) for r in reports],
        "distances": [float(r.spectrum_distance) for r in reports],
    }
