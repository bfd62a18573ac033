"""A small dense two-phase simplex solver for minimization LPs over
non-negative variables, with Bland's rule for anti-cycling.

Only meant for the handful-of-variables programs built elsewhere in this
package; no sparsity, no presolve.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

TOL = 1e-9


class LPError(Exception):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LinearProgram:
    """minimize objective . x  subject to  coeffs . x (<=|>=|=) rhs, x >= 0."""

    names: list[str]
    objective: list[float]
    constraints: list[tuple[list[float], str, float]] = field(default_factory=list)

    def add(self, coeffs: Sequence[float], rel: str, rhs: float) -> None:
        if rel not in ("<=", ">=", "="):
            raise LPError(f"bad relation {rel!r}")
        if len(coeffs) != len(self.names):
            raise LPError("coefficient length mismatch")
        self.constraints.append((list(coeffs), rel, rhs))


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int) -> None:
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and abs(T[r, col]) > 0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _bland_iterate(T: np.ndarray, basis: list[int], ncols: int) -> None:
    """Run simplex iterations on a tableau whose last row is the objective
    (reduced costs) and last column the rhs."""
    while True:
        obj = T[-1, :ncols]
        enter = -1
        for j in range(ncols):
            if obj[j] < -TOL:
                enter = j
                break
        if enter < 0:
            return
        ratios = []
        for i in range(T.shape[0] - 1):
            a = T[i, enter]
            if a > TOL:
                ratios.append((T[i, -1] / a, basis[i], i))
        if not ratios:
            raise Unbounded(f"column {enter} unbounded")
        # Bland: minimal ratio, ties by smallest basis index
        _, _, row = min(ratios)
        _pivot(T, basis, row, enter)


def simplex_solve(lp: LinearProgram) -> tuple[float, dict[str, float]]:
    """Optimal value and an optimal basic assignment of the minimization LP.

    Raises Infeasible or Unbounded.  Two-phase: artificial variables are
    driven to zero first, then the true objective is optimized.
    """
    nvar = len(lp.names)
    m = len(lp.constraints)
    rows = []
    rels = []
    rhs = []
    for coeffs, rel, b in lp.constraints:
        coeffs = list(coeffs)
        if b < 0:
            coeffs = [-c for c in coeffs]
            b = -b
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append(coeffs)
        rels.append(rel)
        rhs.append(b)

    nslack = sum(1 for r in rels if r in ("<=", ">="))
    nart = sum(1 for r in rels if r in (">=", "="))
    ncols = nvar + nslack + nart
    T = np.zeros((m + 1, ncols + 1))
    basis = [-1] * m
    si = nvar
    ai = nvar + nslack
    art_cols = []
    for i in range(m):
        T[i, :nvar] = rows[i]
        T[i, -1] = rhs[i]
        if rels[i] == "<=":
            T[i, si] = 1.0
            basis[i] = si
            si += 1
        elif rels[i] == ">=":
            T[i, si] = -1.0
            si += 1
            T[i, ai] = 1.0
            basis[i] = ai
            art_cols.append(ai)
            ai += 1
        else:
            T[i, ai] = 1.0
            basis[i] = ai
            art_cols.append(ai)
            ai += 1

    # phase 1: minimize the sum of artificials
    if art_cols:
        for c in art_cols:
            T[-1, c] = 1.0
        for i in range(m):
            if basis[i] in art_cols:
                T[-1] -= T[i]
        _bland_iterate(T, basis, ncols)
        if T[-1, -1] < -TOL:
            raise Infeasible(f"phase-1 optimum {-T[-1, -1]:.3g} > 0")
        # drive leftover artificials out of the basis
        for i in range(m):
            if basis[i] in art_cols:
                for j in range(nvar + nslack):
                    if abs(T[i, j]) > TOL:
                        _pivot(T, basis, i, j)
                        break
        T[:, art_cols] = 0.0
        T[-1] = 0.0

    # phase 2
    T[-1, :nvar] = lp.objective
    for i in range(m):
        if T[-1, basis[i]] != 0:
            T[-1] -= T[-1, basis[i]] * T[i]
    _bland_iterate(T, basis, nvar + nslack)

    x = np.zeros(ncols)
    for i in range(m):
        if basis[i] >= 0:
            x[basis[i]] = T[i, -1]
    assignment = {lp.names[j]: float(x[j]) for j in range(nvar)}
    value = float(sum(c * assignment[nm] for c, nm in zip(lp.objective, lp.names)))
    return value, assignment
