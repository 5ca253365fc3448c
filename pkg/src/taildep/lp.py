"""Exact rational simplex for equality-form feasibility and optimization.

Solves  { x >= 0 : A x = b }  over exact rationals.  Phase one minimizes the
total artificial infeasibility; its optimal dual multipliers are exactly a
Farkas certificate when the optimum is positive:

    y with  y' A_j <= 0 for every column j  and  y' b > 0,

checkable by anyone without trusting this solver.  After a feasible phase
one, arbitrary linear objectives can be optimized warm-started from the
current basis, which is what the decomposition-uniqueness probing needs.

Pivoting uses Dantzig's entering rule with a lexicographic ratio test.
The tableau rows (which contain an identity block on the basic columns)
are totally ordered lexicographically after scaling by the pivot entry,
so the leaving choice is always unique, no basis ever repeats, and the
method terminates under any entering rule; this also keeps the heavily
degenerate cut systems from stalling the way Bland's rule does.  All
arithmetic is exact; there are no tolerances anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import TaildepError, UnboundedObjective
from .rationals import Rat, ZERO, rat


@dataclass
class FeasibilityResult:
    feasible: bool
    x: list | None  # length-n witness when feasible
    farkas: list | None  # length-m certificate when infeasible


class ExactSimplex:
    """Equality-form tableau simplex over exact rationals.

    Construction runs phase one immediately.  When feasible, the artificial
    columns are eliminated (redundant rows dropped) and ``minimize`` /
    ``maximize`` re-optimize from the current basis.
    """

    def __init__(self, rows: Sequence[Sequence], rhs: Sequence) -> None:
        self.n = len(rows[0]) if rows else 0
        m = len(rows)
        if len(rhs) != m:
            raise ValueError("rhs length does not match row count")
        # Original row order is preserved for certificate reporting; rows
        # with negative rhs are sign-flipped internally.
        signs = []
        T: list[list] = []
        b = [rat(v) for v in rhs]
        for i in range(m):
            row = [rat(v) for v in rows[i]]
            if len(row) != self.n:
                raise ValueError("ragged constraint matrix")
            if b[i] < 0:
                row = [-v for v in row]
                b[i] = -b[i]
                signs.append(-1)
            else:
                signs.append(1)
            T.append(row + [ZERO] * m + [b[i]])
            T[i][self.n + i] = rat(1)
        self._signs = signs
        self._T = T
        self._basis = [self.n + i for i in range(m)]
        self.farkas: list | None = None
        self.feasible = self._phase_one(m)
        if self.feasible:
            self._eliminate_artificials()

    # -- shared pivot machinery --------------------------------------------

    def _pivot(self, leave: int, col: int) -> None:
        T = self._T
        piv = T[leave][col]
        if piv != 1:
            inv = 1 / piv
            T[leave] = [v * inv if v else v for v in T[leave]]
        prow = T[leave]
        for i in range(len(T)):
            if i != leave:
                f = T[i][col]
                if f:
                    T[i] = [a - f * c if c else a for a, c in zip(T[i], prow)]
        self._basis[leave] = col

    def _ratio_test(self, col: int) -> int:
        """Lexicographic leaving row, or -1 if the column is unbounded.

        Among the rows minimizing rhs / pivot, pick the one whose whole
        scaled row is lexicographically smallest.  Distinct rows can never
        tie across every column (the basic columns embed an identity), so
        the choice is unique and the pivot sequence cannot cycle.
        """
        T = self._T
        candidates = []
        best = None
        for i in range(len(T)):
            a = T[i][col]
            if a > 0:
                r = T[i][-1] / a
                if best is None or r < best:
                    best = r
                    candidates = [i]
                elif r == best:
                    candidates.append(i)
        if not candidates:
            return -1
        for j in range(len(T[0]) - 1):
            if len(candidates) == 1:
                break
            vals = [T[i][j] / T[i][col] for i in candidates]
            lo = min(vals)
            candidates = [i for i, v in zip(candidates, vals) if v == lo]
        return candidates[0]

    # -- phase one -----------------------------------------------------------

    def _phase_one(self, m: int) -> bool:
        T = self._T
        n = self.n
        width = n + m + 1
        # zrow[j] = y' A_j for the running multipliers y = costs of the
        # artificial basis; starts as the column sums since every artificial
        # has cost 1.  zrow[-1] is the residual infeasibility.
        zrow = [ZERO] * width
        for row in T:
            zrow = [z + v if v else z for z, v in zip(zrow, row)]
        while True:
            col = -1
            best = ZERO
            for j in range(n):
                v = zrow[j]
                if v > best:
                    best = v
                    col = j
            if col < 0:
                break  # optimal
            leave = self._ratio_test(col)
            if leave < 0:
                # Cannot happen: the phase-one objective is bounded below by 0.
                raise TaildepError("phase-one ratio test failed")
            self._pivot(leave, col)
            f = zrow[col]
            if f:
                prow = T[leave]
                zrow = [z - f * v if v else z for z, v in zip(zrow, prow)]
        if zrow[-1] > 0:
            # Infeasible: multipliers live in the artificial columns.
            self.farkas = [s * zrow[n + i] for i, s in enumerate(self._signs)]
            return False
        return True

    def _eliminate_artificials(self) -> None:
        """Drive artificial variables out of the basis; drop redundant rows.

        All artificials sit at level 0 here, so any pivot on a nonzero
        structural entry of their row is feasibility-preserving.  A row with
        no structural entry left is a redundant original constraint.
        """
        T = self._T
        n = self.n
        keep = []
        for i in range(len(T)):
            if self._basis[i] >= n:
                col = next((j for j in range(n) if T[i][j] != 0), None)
                if col is None:
                    continue  # redundant row
                self._pivot(i, col)
            keep.append(i)
        self._T = [self._T[i][:n] + self._T[i][-1:] for i in keep]
        self._basis = [self._basis[i] for i in keep]

    # -- extraction ------------------------------------------------------------

    def witness(self) -> list:
        if not self.feasible:
            raise TaildepError("no witness: system is infeasible")
        x = [ZERO] * self.n
        for i, j in enumerate(self._basis):
            x[j] = self._T[i][-1]
        return x

    # -- phase two ---------------------------------------------------------------

    def minimize(self, costs: Sequence) -> tuple[Rat, list]:
        """Minimize c' x over the feasible region, warm-started; exact optimum."""
        if not self.feasible:
            raise TaildepError("cannot optimize an infeasible system")
        c = [rat(v) for v in costs]
        if len(c) != self.n:
            raise ValueError(f"expected {self.n} costs, got {len(c)}")
        T = self._T
        width = self.n + 1
        zrow = [ZERO] * width
        for i, j in enumerate(self._basis):
            f = c[j]
            if f:
                zrow = [z + f * v if v else z for z, v in zip(zrow, T[i])]
        rc = [cj - zj for cj, zj in zip(c, zrow)]
        while True:
            col = -1
            best = ZERO
            for j in range(self.n):
                v = rc[j]
                if v < best:
                    best = v
                    col = j
            if col < 0:
                break
            leave = self._ratio_test(col)
            if leave < 0:
                raise UnboundedObjective("objective unbounded over the feasible cone")
            self._pivot(leave, col)
            f = rc[col]
            if f:
                prow = T[leave]
                rc = [r - f * v if v else r for r, v in zip(rc, prow)]
        x = self.witness()
        value = sum((cj * xj for cj, xj in zip(c, x) if xj), ZERO)
        return value, x

    def maximize(self, costs: Sequence) -> tuple[Rat, list]:
        value, x = self.minimize([-rat(v) for v in costs])
        return -value, x


def solve_feasibility(rows: Sequence[Sequence], rhs: Sequence) -> FeasibilityResult:
    """One-shot feasibility of {x >= 0 : A x = b} with witness or certificate."""
    if not rows:
        return FeasibilityResult(True, [], None)
    lp = ExactSimplex(rows, rhs)
    if lp.feasible:
        return FeasibilityResult(True, lp.witness(), None)
    return FeasibilityResult(False, None, lp.farkas)
