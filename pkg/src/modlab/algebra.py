"""Finite-dimensional von Neumann algebras as explicit *-subalgebras of M_n.

An algebra is stored by an orthonormal (Hilbert-Schmidt) spanning set rather
than by generators, so membership tests are orthogonal projections.  The
module provides commutants and centers, the trace-preserving and the
state-compatible conditional expectations, the modular-invariance criterion
for a subalgebra, and a numerical check of the idempotent-CP-maps theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    EIG_FLOOR,
    choi_matrix,
    herm_log,
    herm_power,
    hermitize,
    left_mult,
    right_mult,
    spectral_decompose,
    unvec,
    vec,
)

SPAN_TOL = 1e-10  # span-membership tolerance at the dimensions we work at
_RANK_RTOL = 1e-9  # relative singular-value cutoff for span ranks


def _orthonormal_rows(stack: np.ndarray, rtol: float = _RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (rows) of the row span of ``stack``."""
    if stack.size == 0:
        return stack.reshape(0, stack.shape[-1])
    _, s, vh = np.linalg.svd(stack, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return vh[:0]
    return vh[s > rtol * s[0]]


def _null_rows(stack: np.ndarray, rtol: float = _RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (rows) of the null space of ``stack``."""
    rows, cols = stack.shape
    # the economy SVD already carries all of V when the stack is tall
    _, s, vh = np.linalg.svd(stack, full_matrices=rows < cols)
    cutoff = rtol * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:]


class MatrixAlgebra:
    """A unital *-subalgebra of M_n given by an HS-orthonormal basis."""

    def __init__(self, dim: int, basis: np.ndarray, *, validate: bool = True):
        self.dim = int(dim)
        self.basis = np.asarray(basis, dtype=complex)
        if self.basis.ndim != 3 or self.basis.shape[1:] != (self.dim, self.dim):
            raise ValueError(
                f"basis shape {self.basis.shape} incompatible with dim {self.dim}"
            )
        self._projector: np.ndarray | None = None
        if validate:
            self.validate()

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_span(cls, mats: Iterable[np.ndarray], *, validate: bool = True):
        """Orthonormalize a spanning set (basis need not be independent)."""
        mats = [np.asarray(m, dtype=complex) for m in mats]
        n = mats[0].shape[0]
        stack = np.stack([vec(m) for m in mats])
        basis = _orthonormal_rows(stack)
        return cls(n, basis.reshape(-1, n, n), validate=validate)

    @classmethod
    def generated(cls, mats: Iterable[np.ndarray], max_dim: int | None = None):
        """Smallest unital *-algebra containing ``mats``: close the span under
        adjoints and products by iterating to a fixed point."""
        mats = [np.asarray(m, dtype=complex) for m in mats]
        n = mats[0].shape[0]
        seed = [np.eye(n, dtype=complex)] + mats + [m.conj().T for m in mats]
        stack = _orthonormal_rows(np.stack([vec(m) for m in seed]))
        cap = max_dim if max_dim is not None else n * n
        while True:
            B = stack.reshape(-1, n, n)
            m = B.shape[0]
            new = stack
            # chunk the m^2 pair products to bound peak memory
            chunk = max(1, (1 << 21) // max(1, m * n * n))
            for lo in range(0, m, chunk):
                prods = np.einsum("aij,bjk->abik", B[lo : lo + chunk], B)
                new = _orthonormal_rows(
                    np.concatenate([new, prods.reshape(-1, n * n)])
                )
            if new.shape[0] == stack.shape[0]:
                return cls(n, new.reshape(-1, n, n), validate=False)
            if new.shape[0] > cap:
                raise RuntimeError(
                    f"algebra closure exceeded dimension bound {cap}: "
                    "numerical rank instability"
                )
            stack = new

    @classmethod
    def full(cls, n: int):
        basis = np.zeros((n * n, n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                basis[i * n + j, i, j] = 1.0
        return cls(n, basis, validate=False)

    @classmethod
    def scalars(cls, n: int):
        return cls(n, (np.eye(n, dtype=complex) / np.sqrt(n))[None], validate=False)

    @classmethod
    def diagonal(cls, n: int):
        basis = np.zeros((n, n, n), dtype=complex)
        for i in range(n):
            basis[i, i, i] = 1.0
        return cls(n, basis, validate=False)

    @classmethod
    def tensor_factor(cls, k: int, n: int, side: str = "left"):
        """M_k x 1 (side='left') or 1 x M_k (side='right') inside M_n, n = k*m."""
        if n % k:
            raise ValueError(f"{k} does not divide {n}")
        m = n // k
        full_k = cls.full(k)
        mats = []
        for b in full_k.basis:
            if side == "left":
                mats.append(np.kron(b, np.eye(m) / np.sqrt(m)))
            else:
                mats.append(np.kron(np.eye(m) / np.sqrt(m), b))
        return cls(n, np.stack(mats), validate=False)

    # -- span machinery --------------------------------------------------------

    @property
    def size(self) -> int:
        """Linear dimension of the algebra."""
        return self.basis.shape[0]

    def stack(self) -> np.ndarray:
        return self.basis.reshape(self.size, -1)

    def projector(self) -> np.ndarray:
        """HS-orthogonal projection onto the span, as an n^2 x n^2 matrix.

        With basis rows u_i this is sum_i u_i u_i^dag = B^T conj(B); the
        order matters because spans need not be closed under entrywise
        conjugation.
        """
        if self._projector is None:
            B = self.stack()
            self._projector = B.T @ B.conj()
        return self._projector

    def distance(self, x: np.ndarray) -> float:
        """HS distance of x from the span."""
        v = vec(x)
        return float(np.linalg.norm(v - self.projector() @ v))

    def contains(self, x: np.ndarray, tol: float = SPAN_TOL) -> bool:
        return self.distance(x) <= tol * max(1.0, float(np.linalg.norm(x)))

    def project(self, x: np.ndarray) -> np.ndarray:
        return unvec(self.projector() @ vec(x), self.dim)

    def gram_residual(self) -> float:
        B = self.stack()
        return float(np.linalg.norm(B @ B.conj().T - np.eye(self.size)))

    def closure_residual(self, max_pairs: int = 4096) -> float:
        """Max HS distance of basis products and adjoints from the span.

        Exhaustive when the pair count is small; otherwise a deterministic
        stratified sample of pairs.
        """
        m, n = self.size, self.dim
        P = self.projector()
        adj = np.stack([b.conj().T for b in self.basis]).reshape(m, -1)
        r_adj = np.linalg.norm(adj.T - P @ adj.T, axis=0).max()
        if m * m <= max_pairs:
            prods = np.einsum("aij,bjk->abik", self.basis, self.basis).reshape(-1, n * n)
        else:
            idx = np.linspace(0, m * m - 1, max_pairs).astype(int)
            ia, ib = idx // m, idx % m
            prods = np.einsum("aij,ajk->aik", self.basis[ia], self.basis[ib]).reshape(
                -1, n * n
            )
        r_prod = np.linalg.norm(prods.T - P @ prods.T, axis=0).max()
        return float(max(r_adj, r_prod))

    def unit_residual(self) -> float:
        return self.distance(np.eye(self.dim))

    @property
    def contains_unit(self) -> bool:
        return self.unit_residual() <= SPAN_TOL * np.sqrt(self.dim)

    def validate(self, tol: float = SPAN_TOL) -> None:
        g = self.gram_residual()
        if g > tol:
            raise ValueError(f"basis not orthonormal: Gram residual {g:.3e}")
        c = self.closure_residual()
        if c > tol:
            raise ValueError(f"span not closed under product/adjoint: {c:.3e}")
        u = self.unit_residual()
        if u > tol * np.sqrt(self.dim):
            raise ValueError(f"unit not in span: residual {u:.3e}")


# -- commutants, centers, intersections -----------------------------------------


def commutant(A: MatrixAlgebra) -> MatrixAlgebra:
    """All of M_n commuting with A, via the null space of the stacked
    commutator map x -> [x, b_i]."""
    n = A.dim
    eye = np.eye(n, dtype=complex)
    blocks = [np.kron(b, eye) - np.kron(eye, b.T) for b in A.basis]
    null = _null_rows(np.concatenate(blocks, axis=0))
    return MatrixAlgebra(n, null.conj().reshape(-1, n, n), validate=False)


def intersect(A: MatrixAlgebra, B: MatrixAlgebra) -> MatrixAlgebra:
    """Intersection of two spans (an algebra whenever both are algebras)."""
    if A.dim != B.dim:
        raise ValueError("ambient dimensions differ")
    n = A.dim
    eye = np.eye(n * n)
    stacked = np.concatenate([eye - A.projector(), eye - B.projector()], axis=0)
    null = _null_rows(stacked)
    return MatrixAlgebra(n, null.conj().reshape(-1, n, n), validate=False)


def center(A: MatrixAlgebra) -> MatrixAlgebra:
    return intersect(A, commutant(A))


def span_distance(A: MatrixAlgebra, B: MatrixAlgebra) -> float:
    """Operator-norm distance between the span projectors (0 iff equal spans)."""
    return float(np.linalg.norm(A.projector() - B.projector(), 2))


def inclusion_residual(A: MatrixAlgebra, B: MatrixAlgebra) -> float:
    """Max distance of A's basis from span(B); 0 iff span(A) is inside span(B)."""
    P = B.projector()
    S = A.stack().T
    return float(np.linalg.norm(S - P @ S, axis=0).max())


# -- states ----------------------------------------------------------------------


@dataclass(frozen=True)
class StateDensity:
    """A faithful density matrix; the source of all modular data."""

    rho: np.ndarray
    faithfulness_margin: float = field(init=False)

    def __post_init__(self):
        rho = hermitize(np.asarray(self.rho, dtype=complex))
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace {tr} != 1")
        w = np.linalg.eigvalsh(rho)
        if w.min() <= EIG_FLOOR:
            raise ValueError(
                f"state not faithful: min eigenvalue {w.min():.3e} <= {EIG_FLOOR:.0e}"
            )
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "faithfulness_margin", float(w.min()))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def tracial(cls, n: int) -> "StateDensity":
        return cls(np.eye(n) / n)

    def sqrt(self) -> np.ndarray:
        return herm_power(self.rho, 0.5)

    def inv_sqrt(self) -> np.ndarray:
        return herm_power(self.rho, -0.5)

    def log(self) -> np.ndarray:
        return herm_log(self.rho)

    def expect(self, x: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ x))


# -- conditional expectations -----------------------------------------------------


def _require_unital(N: MatrixAlgebra) -> None:
    if not N.contains_unit:
        raise ValueError("subalgebra does not contain the unit")


def trace_expectation(N: MatrixAlgebra, x: np.ndarray) -> np.ndarray:
    """Trace-preserving conditional expectation onto N: the HS-orthogonal
    projection of x onto span(N)."""
    _require_unital(N)
    return N.project(x)


def trace_expectation_superop(N: MatrixAlgebra) -> np.ndarray:
    _require_unital(N)
    return N.projector()


@dataclass(frozen=True)
class TakesakiReport:
    invariant: bool
    residual: float
    per_element: tuple[float, ...]


def takesaki_check(
    N: MatrixAlgebra, state: StateDensity, tol: float = SPAN_TOL
) -> TakesakiReport:
    """Modular-invariance criterion for N under the flow of ``state``.

    The flow rho^{it} N rho^{-it} stays inside N for all t exactly when
    [log rho, n] lies in span(N) for every basis element n; this is the exact
    finite test (no t-grid).
    """
    log_rho = herm_log(state.rho)
    residuals = tuple(
        N.distance(log_rho @ b - b @ log_rho) for b in N.basis
    )
    r = max(residuals) if residuals else 0.0
    return TakesakiReport(r <= tol, float(r), residuals)


def gns_subspace_projector(N: MatrixAlgebra, state: StateDensity) -> np.ndarray:
    """Orthogonal projection of the GNS space onto the closure of N|Omega>,
    with Omega = rho^{1/2} in the Hilbert-Schmidt representation."""
    h = state.sqrt()
    stack = np.stack([vec(b @ h) for b in N.basis])
    Q = _orthonormal_rows(stack)
    return Q.T @ Q.conj()


@dataclass(frozen=True)
class ExpectationDiagnostics:
    idempotency: float
    unitality: float
    choi_hermiticity: float
    choi_min_eigenvalue: float
    state_preservation: float
    bimodule: float

    def all_pass(self, tol: float = SPAN_TOL) -> bool:
        return (
            self.idempotency <= tol
            and self.unitality <= tol
            and self.choi_hermiticity <= tol
            and self.choi_min_eigenvalue >= -tol
            and self.state_preservation <= tol
            and self.bimodule <= tol
        )


@dataclass(frozen=True)
class OmegaExpectation:
    """The map induced by the GNS projection onto [N Omega].

    Always well-defined; it is a genuine conditional expectation (positive,
    bimodule) exactly when the modular-invariance criterion holds.  Failing
    diagnostics are data, not errors.
    """

    superop: np.ndarray
    diagnostics: ExpectationDiagnostics

    def __call__(self, x: np.ndarray) -> np.ndarray:
        n = round(np.sqrt(self.superop.shape[0]))
        return unvec(self.superop @ vec(x), n)


def _bimodule_residual(superop: np.ndarray, N_basis: np.ndarray) -> float:
    worst = 0.0
    for a in N_basis:
        for b in N_basis:
            mult = np.kron(a, b.T)
            worst = max(worst, float(np.linalg.norm(superop @ mult - mult @ superop)))
    return worst


def omega_expectation(N: MatrixAlgebra, state: StateDensity) -> OmegaExpectation:
    _require_unital(N)
    P = gns_subspace_projector(N, state)
    Rh = right_mult(state.sqrt())
    Rh_inv = right_mult(state.inv_sqrt())
    phi = Rh_inv @ P @ Rh

    n = N.dim
    eye = np.eye(n, dtype=complex)
    C = choi_matrix(phi)
    diag = ExpectationDiagnostics(
        idempotency=float(np.linalg.norm(phi @ phi - phi, 2)),
        unitality=float(np.linalg.norm(phi @ vec(eye) - vec(eye))),
        choi_hermiticity=float(np.linalg.norm(C - C.conj().T)),
        choi_min_eigenvalue=float(np.linalg.eigvalsh(hermitize(C)).min()),
        state_preservation=float(
            np.linalg.norm(phi.conj().T @ vec(state.rho) - vec(state.rho))
        ),
        bimodule=_bimodule_residual(phi, N.basis),
    )
    return OmegaExpectation(phi, diag)


# -- idempotent-CP-map verification ------------------------------------------------


@dataclass(frozen=True)
class TomiyamaReport:
    """Numerical form of: idempotent unital CP state-preserving maps are
    conditional expectations onto their range."""

    unital: float
    choi_hermiticity: float
    choi_min_eigenvalue: float
    idempotency: float
    state_preservation: float
    range_dim: int
    range_is_algebra: float
    range_bimodule: float

    def hypotheses_pass(self, tol: float = SPAN_TOL) -> bool:
        return (
            self.unital <= tol
            and self.choi_hermiticity <= tol
            and self.choi_min_eigenvalue >= -tol
            and self.idempotency <= tol
            and self.state_preservation <= tol
        )

    def conclusions_pass(self, tol: float = SPAN_TOL) -> bool:
        return self.range_is_algebra <= tol and self.range_bimodule <= tol


def verify_tomiyama(superop: np.ndarray, state: StateDensity) -> TomiyamaReport:
    n2 = superop.shape[0]
    n = round(np.sqrt(n2))
    eye = np.eye(n, dtype=complex)
    C = choi_matrix(superop)

    # range of the map = column space of the superoperator
    u, s, _ = np.linalg.svd(superop)
    rank = int(np.sum(s > _RANK_RTOL * (s[0] if s.size else 1.0)))
    range_basis = u[:, :rank].T.reshape(-1, n, n)
    try:
        range_alg = MatrixAlgebra(n, range_basis, validate=False)
        alg_residual = max(range_alg.closure_residual(), range_alg.unit_residual())
        bimodule = _bimodule_residual(superop, range_basis)
    except ValueError:
        alg_residual, bimodule = np.inf, np.inf

    return TomiyamaReport(
        unital=float(np.linalg.norm(superop @ vec(eye) - vec(eye))),
        choi_hermiticity=float(np.linalg.norm(C - C.conj().T)),
        choi_min_eigenvalue=float(np.linalg.eigvalsh(hermitize(C)).min()),
        idempotency=float(np.linalg.norm(superop @ superop - superop, 2)),
        state_preservation=float(
            np.linalg.norm(superop.conj().T @ vec(state.rho) - vec(state.rho))
        ),
        range_dim=rank,
        range_is_algebra=float(alg_residual),
        range_bimodule=float(bimodule),
    )
