#!/usr/bin/env python3
"""Two interpolations between the identity channel and an expectation.

Route one is the convex combination (1-s) id + s E: every point is a unital
CP map preserving the state, but idempotency fails in the interior, with the
exact defect s(1-s) ||id - E||.  Route two interpolates the states instead:
the log-linear family makes K'(0) = -P exact and the generator G(s) = -2K'(s)
constant, so the endpoint unitary is exp(-2iP) by construction.  A discrete
filtration carries the absorption property the convex path lacks.
"""

import numpy as np

from modlab import (
    Filtration,
    MatrixAlgebra,
    StateDensity,
    filtration_check,
    modular_momentum_states,
    patha_absorption_violation,
    patha_defect,
    patha_map,
    path_generator,
    path_hamiltonian,
    state_path,
    traceless,
    trace_expectation_superop,
)
from modlab.linalg import unvec, vec

print("=" * 70)
print("Route one: convex CP path onto the scalars of M_2 (tracial state)")
print("=" * 70)
E = trace_expectation_superop(MatrixAlgebra.scalars(2))
A = np.diag([1.0, 0.0]).astype(complex)
mid = patha_map(E, 0.5).superop
print(f"E_1/2(diag(1,0))   = {np.round(np.diag(unvec(mid @ vec(A), 2)).real, 4)}"
      "   (expect [0.75, 0.25])")
sq = unvec(mid @ mid @ vec(A), 2)
print(f"E_1/2^2(diag(1,0)) = {np.round(np.diag(sq).real, 4)}"
      "   (expect [0.625, 0.375] - idempotency fails)")
print("\n  s      defect   s(1-s)||id-E||")
c = np.linalg.norm(np.eye(4) - E, 2)
for s in np.linspace(0, 1, 9):
    print(f"  {s:.3f}  {patha_defect(E, float(s)):.6f}  {s * (1 - s) * c:.6f}")

print()
print("=" * 70)
print("Route two: log-linear state path, K'(0) = -P and G(s) = 2P")
print("=" * 70)
s0 = StateDensity(np.diag([0.5, 0.5]))
s1 = StateDensity(np.diag([2 / 3, 1 / 3]))
path = state_path(s0, s1, "loglinear")
P = traceless(modular_momentum_states(path))
kp0 = traceless(path_hamiltonian(path, 0.0).k_prime)
print(f"traceless K'(0)    = diag{tuple(np.round(np.diag(kp0).real, 5))}")
print(f"-traceless P       = diag{tuple(np.round(-np.diag(P).real, 5))}"
      f"   (ln2/2 = {np.log(2) / 2:.5f})")
gs = [np.linalg.norm(path_generator(path, float(s)) - 2 * P) for s in np.linspace(0, 1, 5)]
print(f"max_s ||G(s) - 2P|| = {max(gs):.3e}")

w, v = np.linalg.eigh(2 * P)
u_end = (v * np.exp(-1j * w)[None, :]) @ v.conj().T
w2, v2 = np.linalg.eigh(path_generator(path, 0.0))
u_gen = (v2 * np.exp(-1j * w2)[None, :]) @ v2.conj().T
print(f"||exp(-iG) - exp(-2iP)|| = {np.linalg.norm(u_gen - u_end):.3e}")

print()
print("=" * 70)
print("Dynamic idempotency on the chain M_4 > M_2x1 > C.1 (tracial)")
print("=" * 70)
filt = Filtration(
    (
        MatrixAlgebra.full(4),
        MatrixAlgebra.tensor_factor(2, 4, "left"),
        MatrixAlgebra.scalars(4),
    ),
    StateDensity.tracial(4),
)
rep = filtration_check(filt)
print(f"nesting residual            : {rep.nesting:.3e}")
print(f"absorption E_k' E_k = E_k'  : {rep.absorption:.3e}")
print(f"projection monotonicity     : {rep.projection_monotonicity:.3e}")
print(f"convex-path substitution violates absorption by "
      f"{patha_absorption_violation(filt, 0.5):.4f}  (>= 0.01)")
