"""Dense complex linear algebra primitives: Hermitian spectral calculus,
matrix functions, antilinear operators and their polar decomposition,
vectorization, and partial traces.

Conventions used throughout the package:

* ``vec`` is row-major (C order): ``vec(A X B) = (A kron B^T) vec(X)``.
* An antilinear operator is stored as the single matrix ``A`` of the map
  ``v -> A conj(v)``.  Composition and adjoint rules (derived once here,
  reused everywhere):

  - adjoint:            ``T^dag`` has matrix ``A^T``
  - antilinear o antilinear  -> linear with matrix ``A1 conj(A2)``
  - antilinear o linear L    -> antilinear with matrix ``A conj(L)``
  - linear L o antilinear    -> antilinear with matrix ``L A``

  ``T`` is antiunitary iff ``A`` is unitary, and ``T^2 = 1`` iff additionally
  ``A`` is symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

EIG_FLOOR = 1e-12  # eigenvalues below this are treated as singular


class SingularityError(ValueError):
    """A spectral operation hit an eigenvalue below the faithfulness floor."""

    def __init__(self, message: str, offending_eigenvalue: float):
        super().__init__(message)
        self.offending_eigenvalue = offending_eigenvalue


def hermitize(H: np.ndarray) -> np.ndarray:
    """Hermitian part (H + H^dag)/2."""
    return (H + H.conj().T) / 2


def max_asymmetry(H: np.ndarray) -> float:
    return float(np.max(np.abs(H - H.conj().T)))


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, columns


def spectral_decompose(H: np.ndarray, tol: float = 1e-12) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Inputs Hermitian only up to ``tol * max(1, ||H||_F)`` are symmetrized;
    anything worse is rejected with the measured asymmetry.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    asym = max_asymmetry(H)
    scale = max(1.0, float(np.linalg.norm(H)))
    if asym > tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: max |H - H^dag| = {asym:.3e} "
            f"exceeds {tol:.1e} * max(1, ||H||_F)"
        )
    w, v = np.linalg.eigh(hermitize(H))
    return SpectralDecomposition(w, v)


def matrix_function(
    H: np.ndarray, f: Callable[[np.ndarray], np.ndarray], floor: float | None = None
) -> np.ndarray:
    """Apply ``f`` on the spectrum of Hermitian ``H``.

    ``floor``, when given, rejects spectra reaching below it (used by log and
    negative/fractional powers, which blow up at 0).
    """
    w, v = spectral_decompose(H)
    if floor is not None and w.min() < floor:
        raise SingularityError(
            f"eigenvalue {w.min():.6e} below floor {floor:.1e}", float(w.min())
        )
    return hermitize((v * f(w)[None, :]) @ v.conj().T)


def herm_log(H: np.ndarray) -> np.ndarray:
    return matrix_function(H, np.log, floor=EIG_FLOOR)


def herm_exp(H: np.ndarray) -> np.ndarray:
    return matrix_function(H, np.exp)


def herm_power(H: np.ndarray, alpha: float) -> np.ndarray:
    """H^alpha for positive-definite H; fractional or negative powers need the
    spectrum above the faithfulness floor."""
    floor = EIG_FLOOR if (alpha < 1 and alpha != 0) else None
    return matrix_function(H, lambda w: w**alpha, floor=floor)


def herm_sqrt(H: np.ndarray) -> np.ndarray:
    return herm_power(H, 0.5)


def unitary_phase(rho: np.ndarray, t: float) -> np.ndarray:
    """rho^{it} for positive-definite rho (unitary for real t)."""
    w, v = spectral_decompose(rho)
    if w.min() < EIG_FLOOR:
        raise SingularityError(
            f"eigenvalue {w.min():.6e} below floor {EIG_FLOOR:.1e}", float(w.min())
        )
    return (v * np.exp(1j * t * np.log(w))[None, :]) @ v.conj().T


# -- vectorization (row-major) ------------------------------------------------


def vec(X: np.ndarray) -> np.ndarray:
    """Row-major vectorization: vec(A X B) = (A kron B^T) vec(X)."""
    return np.asarray(X, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, rows: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if rows is None:
        rows = round(np.sqrt(v.size))
    return v.reshape(rows, -1)


def left_mult(x: np.ndarray) -> np.ndarray:
    """Superoperator of X -> x X on vec'd matrices."""
    x = np.asarray(x, dtype=complex)
    return np.kron(x, np.eye(x.shape[1], dtype=complex))


def right_mult(y: np.ndarray) -> np.ndarray:
    """Superoperator of X -> X y on vec'd matrices."""
    y = np.asarray(y, dtype=complex)
    return np.kron(np.eye(y.shape[0], dtype=complex), y.T)


def transpose_permutation(n: int) -> np.ndarray:
    """Permutation matrix P with P vec(X) = vec(X^T)."""
    P = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            P[i * n + j, j * n + i] = 1.0
    return P


# -- antilinear operators ------------------------------------------------------


@dataclass(frozen=True)
class AntilinearOperator:
    """The map v -> matrix @ conj(v).  See module docstring for the calculus."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.conj(v)

    def apply_to_matrix(self, X: np.ndarray) -> np.ndarray:
        """Apply to a matrix viewed as a vec'd vector of the same total size."""
        n = X.shape[0]
        return unvec(self.apply(vec(X)), n)

    def adjoint(self) -> "AntilinearOperator":
        return AntilinearOperator(self.matrix.T.copy())

    def compose_antilinear(self, other: "AntilinearOperator") -> np.ndarray:
        """self o other: a linear operator, returned as a plain matrix."""
        return self.matrix @ np.conj(other.matrix)

    def after_linear(self, L: np.ndarray) -> "AntilinearOperator":
        """self o L (apply L first)."""
        return AntilinearOperator(self.matrix @ np.conj(L))

    def before_linear(self, L: np.ndarray) -> "AntilinearOperator":
        """L o self (apply self first)."""
        return AntilinearOperator(L @ self.matrix)

    def unitarity_residual(self) -> float:
        """0 iff antiunitary."""
        A = self.matrix
        return float(np.linalg.norm(A.conj().T @ A - np.eye(self.dim)))

    def involution_residual(self) -> float:
        """||T o T - id||; 0 iff T squares to the identity."""
        return float(np.linalg.norm(self.compose_antilinear(self) - np.eye(self.dim)))


def polar_decompose_antilinear(
    S: AntilinearOperator, floor: float = EIG_FLOOR
) -> tuple[AntilinearOperator, np.ndarray]:
    """Polar decomposition S = J o Delta_half with J antiunitary and
    Delta_half = (S^dag S)^{1/2} positive.

    S^dag S is the linear operator with matrix A^T conj(A); it is Hermitian
    positive by construction.  Singular S is rejected with a null direction.
    """
    A = S.matrix
    delta = A.T @ np.conj(A)
    w, v = spectral_decompose(delta)
    if w.min() < floor:
        null_dir = v[:, int(np.argmin(w))]
        raise SingularityError(
            f"antilinear operator is singular (eigenvalue {w.min():.3e} of S^dag S); "
            f"null direction {np.round(null_dir, 6)}",
            float(w.min()),
        )
    delta_half = hermitize((v * np.sqrt(w)[None, :]) @ v.conj().T)
    inv_half = (v * (1.0 / np.sqrt(w))[None, :]) @ v.conj().T
    J = S.after_linear(inv_half)  # J = S o Delta_half^{-1}
    return J, delta_half


def choi_matrix(superop: np.ndarray) -> np.ndarray:
    """Choi matrix of a superoperator given in the row-major vec convention.

    ``C[(i,k),(j,l)] = Phi(E_ij)[k,l]``; the map is completely positive iff
    C is positive semidefinite.
    """
    n2 = superop.shape[0]
    n = round(np.sqrt(n2))
    if superop.shape != (n2, n2) or n * n != n2:
        raise ValueError(f"superoperator shape {superop.shape} is not (n^2, n^2)")
    return superop.reshape(n, n, n, n).transpose(2, 0, 3, 1).reshape(n2, n2)


# -- tensor-product helpers ----------------------------------------------------


def partial_trace(
    rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]
) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` is the list of local dimensions; the result is ordered by the
    ascending positions in ``keep``.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(
            f"dimension mismatch: product of dims {dims} is {total}, "
            f"matrix has shape {rho.shape}"
        )
    keep = sorted(keep)
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")
    k = len(dims)
    t = rho.reshape(dims + dims)
    # trace out factors from highest index down so axis numbers stay valid
    for ax in reversed(range(k)):
        if ax not in keep:
            t = np.trace(t, axis1=ax, axis2=ax + (t.ndim // 2))
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def embed_sites(
    op: np.ndarray, active: Sequence[int], sites: Sequence[int], local_dim: int
) -> np.ndarray:
    """Embed an operator acting on ``active`` sites into the full tensor
    product over ``sites`` (identity elsewhere).  ``active`` must be a sublist
    of ``sites``; ordering of tensor slots follows ``sites``."""
    sites = list(sites)
    active = list(active)
    if any(a not in sites for a in active):
        raise ValueError(f"active sites {active} not contained in region {sites}")
    k = len(sites)
    d = local_dim
    if op.shape != (d ** len(active),) * 2:
        raise ValueError(
            f"operator shape {op.shape} does not match {len(active)} sites "
            f"of local dimension {d}"
        )
    rest = [s for s in sites if s not in active]
    full = np.kron(op, np.eye(d ** len(rest), dtype=complex))
    # full is ordered (active..., rest...); permute slots back to ``sites`` order
    order = active + rest
    perm = [order.index(s) for s in sites]
    t = full.reshape([d] * (2 * k))
    t = t.transpose(perm + [k + p for p in perm])
    return t.reshape(d**k, d**k)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    """GUE-style Hermitian matrix with O(1) entries."""
    B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitize(B) / np.sqrt(2)


def random_density(
    rng: np.random.Generator, n: int, min_eig: float = 1e-2
) -> np.ndarray:
    """Random faithful density matrix with spectrum bounded away from zero.

    The floor keeps log/inverse-power calculus well conditioned in tests.
    """
    B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = B @ B.conj().T
    rho = rho / np.trace(rho).real
    rho = (1 - n * min_eig) * rho + min_eig * np.eye(n)
    return hermitize(rho / np.trace(rho).real)
