"""Dense two-phase simplex solver for small minimization LPs.

The efficiency models only ever produce LPs with a few dozen variables, so a
plain tableau implementation is fast enough and keeps the package free of an
external solver dependency.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import FuzzyDeaError, MalformedLPError


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by :func:`solve`.

    ``stall_threshold`` is the number of consecutive degenerate pivots after
    which the entering rule switches from Dantzig to Bland.
    """

    feasibility: float = 1e-7
    pivot: float = 1e-9
    stall_threshold: int = 25
    max_iterations: int = 100_000


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: Relation
    rhs: float


@dataclass
class LinearProgram:
    """``min objective @ x`` subject to row constraints and ``x >= var_lower_bounds``."""

    num_vars: int
    objective: np.ndarray
    constraints: list = field(default_factory=list)
    var_lower_bounds: Optional[np.ndarray] = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        if self.var_lower_bounds is None:
            self.var_lower_bounds = np.zeros(self.num_vars)
        else:
            self.var_lower_bounds = np.asarray(self.var_lower_bounds, dtype=float)
        if self.objective.shape != (self.num_vars,):
            raise MalformedLPError(
                f"objective has length {self.objective.size}, expected {self.num_vars}"
            )
        if self.var_lower_bounds.shape != (self.num_vars,):
            raise MalformedLPError("var_lower_bounds must have one entry per variable")
        constraints, self.constraints = self.constraints, []
        for con in constraints:
            if isinstance(con, Constraint):
                self.add_constraint(con.coeffs, con.relation, con.rhs)
            else:
                self.add_constraint(*con)

    def add_constraint(self, coeffs: Sequence[float], relation, rhs: float) -> None:
        coeffs = tuple(float(a) for a in coeffs)
        if len(coeffs) != self.num_vars:
            raise MalformedLPError(
                f"constraint has {len(coeffs)} coefficients, expected {self.num_vars}"
            )
        try:
            relation = Relation(relation)
        except ValueError:
            raise MalformedLPError(f"unknown relation {relation!r}") from None
        self.constraints.append(Constraint(coeffs, relation, float(rhs)))

    def matrix(self):
        """Return ``(A, relations, b)`` as dense arrays."""
        if self.constraints:
            A = np.array([c.coeffs for c in self.constraints], dtype=float)
        else:
            A = np.zeros((0, self.num_vars))
        b = np.array([c.rhs for c in self.constraints], dtype=float)
        return A, [c.relation for c in self.constraints], b

    def validate(self) -> None:
        A, _, b = self.matrix()
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise MalformedLPError("constraint coefficients must be finite")
        if not np.all(np.isfinite(self.objective)):
            raise MalformedLPError("objective coefficients must be finite")
        lb = self.var_lower_bounds
        if not np.all(np.isfinite(lb)) or np.any(lb < 0):
            raise MalformedLPError("variable lower bounds must be finite and >= 0")


@dataclass(frozen=True)
class LpSolution:
    status: Status
    objective_value: float
    primal: np.ndarray

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Rows hold ``B^-1 [A | b]``; ``basis[i]`` is the column basic in row i."""

    def __init__(self, A, b, basis, tol: Tolerances):
        self.T = np.hstack([A, b[:, None]])
        self.basis = list(basis)
        self.tol = tol

    @property
    def rhs(self):
        return self.T[:, -1]

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row])
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col

    def reduced_costs(self, cost):
        cb = cost[self.basis]
        return cost - cb @ self.T[:, :-1]

    def run(self, cost, allowed):
        """Minimize ``cost`` over columns in ``allowed``; return a Status."""
        tol = self.tol
        bland = False
        stall = 0
        for _ in range(tol.max_iterations):
            d = self.reduced_costs(cost)
            candidates = [j for j in allowed if d[j] < -tol.pivot]
            if not candidates:
                return Status.OPTIMAL
            if bland:
                col = candidates[0]
            else:
                # ties resolve to the lowest index since min() keeps the first
                col = min(candidates, key=lambda j: d[j])

            column = self.T[:, col]
            rows = np.flatnonzero(column > tol.pivot)
            if rows.size == 0:
                return Status.UNBOUNDED
            ratios = self.rhs[rows] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol.pivot]
            row = min(ties, key=lambda i: self.basis[i])

            if best <= tol.feasibility:
                stall += 1
                if stall >= tol.stall_threshold:
                    bland = True
            else:
                stall = 0
            self.pivot(row, col)
        raise FuzzyDeaError("simplex iteration limit exceeded")


def solve(lp: LinearProgram, tol: Tolerances = DEFAULT_TOLERANCES) -> LpSolution:
    """Solve ``lp`` with the two-phase simplex method.

    Returns an :class:`LpSolution` whose status is OPTIMAL, INFEASIBLE or
    UNBOUNDED. Raises :class:`MalformedLPError` for non-finite input.
    """
    lp.validate()
    n = lp.num_vars
    A, relations, b = lp.matrix()
    lb = lp.var_lower_bounds

    # shift x = x' + lb so every variable is simply nonnegative
    b = b - A @ lb
    A = A.copy()
    rels = list(relations)
    for i in range(len(b)):
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            if rels[i] is Relation.LE:
                rels[i] = Relation.GE
            elif rels[i] is Relation.GE:
                rels[i] = Relation.LE

    m = len(b)
    n_slack = sum(r is not Relation.EQ for r in rels)
    n_art = sum(r is not Relation.LE for r in rels)
    width = n + n_slack + n_art
    full = np.zeros((m, width))
    full[:, :n] = A
    basis = []
    artificial = []
    s = n
    a = n + n_slack
    for i, rel in enumerate(rels):
        if rel is Relation.LE:
            full[i, s] = 1.0
            basis.append(s)
            s += 1
        elif rel is Relation.GE:
            full[i, s] = -1.0
            full[i, a] = 1.0
            s += 1
            basis.append(a)
            artificial.append(a)
            a += 1
        else:
            full[i, a] = 1.0
            basis.append(a)
            artificial.append(a)
            a += 1

    tab = _Tableau(full, b, basis, tol)
    structural = list(range(n + n_slack))

    if artificial:
        phase1 = np.zeros(width)
        phase1[artificial] = 1.0
        tab.run(phase1, structural + artificial)
        infeasibility = float(phase1[tab.basis] @ tab.rhs)
        if infeasibility > tol.feasibility * (1.0 + float(np.max(b, initial=0.0))):
            return LpSolution(Status.INFEASIBLE, math.nan, np.full(n, math.nan))
        _expel_artificials(tab, set(artificial), structural)

    cost = np.zeros(width)
    cost[:n] = lp.objective
    status = tab.run(cost, structural)
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, -math.inf, np.full(n, math.nan))

    shifted = np.zeros(width)
    shifted[tab.basis] = tab.rhs
    x = np.maximum(shifted[:n], 0.0) + lb
    return LpSolution(Status.OPTIMAL, float(lp.objective @ x), x)


def _expel_artificials(tab: _Tableau, artificial: set, structural: list) -> None:
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    row = 0
    while row < len(tab.basis):
        if tab.basis[row] in artificial:
            entries = np.abs(tab.T[row, structural])
            hits = np.flatnonzero(entries > tab.tol.pivot)
            if hits.size:
                tab.pivot(row, structural[hits[0]])
            else:
                tab.T = np.delete(tab.T, row, axis=0)
                del tab.basis[row]
                continue
        row += 1
