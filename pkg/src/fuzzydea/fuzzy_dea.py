"""Fuzzy SBM efficiency: credibility, possibility and alpha-cut approaches.

All three approaches reduce to crisp LPs built from cut bounds of the
triangular attributes. The credibility approach at level ``alpha`` uses the
cut level ``2(1 - alpha)``; the possibility approach at level ``alpha`` uses
cut level ``alpha`` directly, so possibility(alpha) equals
credibility(1 - alpha/2).
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .dea_core import (
    T_LOWER_BOUND,
    Dataset,
    DmuRecord,
    SbmSolution,
    build_crisp_sbm,
    peak_dataset,
    solve_model,
    variable_count,
)
from .errors import DomainError
from .fuzzy import as_fuzzy, credibility_cut_level, cut_bounds
from .lp import DEFAULT_TOLERANCES, LinearProgram, Relation, Tolerances

ONE_TOL = 1e-6

log = logging.getLogger("fuzzydea")


class Approach(str, enum.Enum):
    CRISP = "crisp"
    CREDIBILITY = "credibility"
    POSSIBILITY = "possibility"
    ALPHACUT = "alphacut"


class ConstraintForm(str, enum.Enum):
    """How each fuzzy balance equation is turned into two crisp inequalities.

    CONTAINMENT keeps the cut interval of the peer composite inside the cut
    interval of the evaluated DMU (both bounds taken on the same side). It is
    always feasible (``lambda_z = t`` with zero slacks) and is the default.

    CHANCE takes the upper bound of the whole expression for the ``<= 0`` half
    and the lower bound for the ``>= 0`` half. That requires a zero-width
    expression, so it is infeasible as soon as the evaluated DMU has a fuzzy
    attribute of positive width at the chosen cut level.
    """

    CONTAINMENT = "containment"
    CHANCE = "chance"


@dataclass(frozen=True)
class ApproachConfig:
    approach: Approach
    alphas: tuple
    tol: Tolerances = DEFAULT_TOLERANCES
    form: ConstraintForm = ConstraintForm.CONTAINMENT

    def __post_init__(self):
        object.__setattr__(self, "approach", Approach(self.approach))
        object.__setattr__(self, "form", ConstraintForm(self.form))
        alphas = tuple(float(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if not alphas:
            raise DomainError("alpha grid is empty")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise DomainError("alpha grid must be strictly increasing")
        low = 0.5 if self.approach is Approach.CREDIBILITY else 0.0
        bad = [a for a in alphas if not low <= a <= 1.0]
        if bad:
            raise DomainError(
                f"{self.approach.value} needs alpha in [{low:g}, 1], got {', '.join(map(str, bad))}"
            )


@dataclass(frozen=True)
class EfficiencyResult:
    """Scores of one DMU across an alpha grid.

    ``scores`` holds floats, or ``(lower, upper)`` pairs for the alpha-cut
    approach; ``details`` holds the matching :class:`SbmSolution` objects
    (pairs for alpha-cut, pessimistic first).
    """

    dmu: str
    group: str
    approach: Approach
    alphas: tuple
    scores: tuple
    details: tuple = field(default=(), repr=False, compare=False)
    rank: Optional[int] = None

    @property
    def is_interval(self) -> bool:
        return self.approach is Approach.ALPHACUT

    def point_scores(self) -> np.ndarray:
        """Scalar view of the scores (interval midpoints for alpha-cut)."""
        if self.is_interval:
            return np.array([(lo + hi) / 2.0 for lo, hi in self.scores])
        return np.array(self.scores, dtype=float)

    def efficient_count(self, tol: float = ONE_TOL) -> int:
        """Number of grid levels at which the DMU scores 1 (upper end for intervals)."""
        if self.is_interval:
            return sum(hi >= 1.0 - tol for _, hi in self.scores)
        return sum(s >= 1.0 - tol for s in self.scores)


def _cuts(value, beta):
    return cut_bounds(as_fuzzy(value), beta)


def build_cut_sbm(
    ds: Dataset, z: int, beta: float, form: ConstraintForm = ConstraintForm.CONTAINMENT
) -> LinearProgram:
    """Crisp LP of the fuzzy SBM model for DMU ``z`` at cut level ``beta``.

    With ``L``/``U`` the cut bounds at ``beta``, the objective is
    ``t - 1/m sum_i s-_i / x_iz^L`` and the normalization
    ``t + 1/n sum_j s+_j / y_jz^L = 1``. Each input balance becomes

        sum_o lambda_o x_io^U + s-_i - t x_iz^U <= 0
        sum_o lambda_o x_io^L + s-_i - t x_iz^L >= 0

    (outputs alike with ``-s+_j``). ``ConstraintForm.CHANCE`` swaps the bound
    on the ``t`` term in both rows. Every occurrence of a fuzzy coefficient is
    bounded independently.
    """
    form = ConstraintForm(form)
    if not 0 <= z < ds.r_dmus:
        raise DomainError(f"DMU index {z} out of range for {ds.r_dmus} DMUs")
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"cut level must lie in [0, 1], got {beta}")
    r, m, n = ds.r_dmus, ds.m, ds.n
    xin = [[_cuts(v, beta) for v in rec.inputs] for rec in ds.records]
    yout = [[_cuts(v, beta) for v in rec.outputs] for rec in ds.records]
    for cuts in (xin[z], yout[z]):
        if any(cb.lower <= 0 for cb in cuts):
            raise DomainError(
                f"DMU {ds.records[z].name!r}: cut lower bound touches zero at level {beta:g}"
            )

    nv = variable_count(ds)
    lam = slice(1, 1 + r)
    c = np.zeros(nv)
    c[0] = 1.0
    c[1 + r : 1 + r + m] = [-1.0 / (m * cb.lower) for cb in xin[z]]
    lb = np.zeros(nv)
    lb[0] = T_LOWER_BOUND
    lp = LinearProgram(nv, c, var_lower_bounds=lb)

    row = np.zeros(nv)
    row[0] = 1.0
    row[1 + r + m :] = [1.0 / (n * cb.lower) for cb in yout[z]]
    lp.add_constraint(row, Relation.EQ, 1.0)

    swap = form is ConstraintForm.CHANCE

    def balance(table, k, slack_col, slack_sign):
        own = table[z][k]
        for relation, peers_upper in ((Relation.LE, True), (Relation.GE, False)):
            row = np.zeros(nv)
            row[lam] = [t[k].upper if peers_upper else t[k].lower for t in table]
            row[slack_col] = slack_sign
            own_upper = peers_upper != swap
            row[0] = -(own.upper if own_upper else own.lower)
            lp.add_constraint(row, relation, 0.0)

    for i in range(m):
        balance(xin, i, 1 + r + i, 1.0)
    for j in range(n):
        balance(yout, j, 1 + r + m + j, -1.0)
    return lp


def _solve_cut(ds, z, beta, alpha, tol, form) -> SbmSolution:
    sol = solve_model(build_cut_sbm(ds, z, beta, form), ds, ds.records[z].name, tol, alpha)
    if sol.efficiency <= 0:
        # input slack is divided by the own lower bound yet may reach t times
        # the own upper bound; wide fuzzy inputs can therefore overshoot
        log.warning(
            "DMU %r at alpha=%g: score %.6g outside (0, 1]; fuzzy input spread too wide",
            ds.records[z].name,
            alpha,
            sol.efficiency,
        )
    return sol


def credibility_solution(ds, z, alpha, tol=DEFAULT_TOLERANCES, form=ConstraintForm.CONTAINMENT):
    beta = credibility_cut_level(alpha)
    return _solve_cut(ds, z, beta, alpha, tol, form)


def credibility_efficiency(ds, z, alpha, tol=DEFAULT_TOLERANCES, form=ConstraintForm.CONTAINMENT) -> float:
    """Efficiency of DMU ``z`` at credibility level ``alpha`` in [0.5, 1]."""
    return credibility_solution(ds, z, alpha, tol, form).efficiency


def possibility_solution(ds, z, alpha, tol=DEFAULT_TOLERANCES, form=ConstraintForm.CONTAINMENT):
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"possibility level must lie in [0, 1], got {alpha}")
    return _solve_cut(ds, z, alpha, alpha, tol, form)


def possibility_efficiency(ds, z, alpha, tol=DEFAULT_TOLERANCES, form=ConstraintForm.CONTAINMENT) -> float:
    """Efficiency of DMU ``z`` at possibility level ``alpha`` in [0, 1]."""
    return possibility_solution(ds, z, alpha, tol, form).efficiency


def bound_dataset(ds: Dataset, z: int, beta: float, optimistic: bool) -> Dataset:
    """Crisp dataset with DMU ``z`` at its favourable (or unfavourable) cut bounds.

    Optimistic: ``z`` takes lower inputs / upper outputs and every other DMU
    upper inputs / lower outputs. Pessimistic is the reverse.
    """
    records = []
    for o, rec in enumerate(ds.records):
        favourable = (o == z) == optimistic
        if favourable:
            xs = [_cuts(v, beta).lower for v in rec.inputs]
            ys = [_cuts(v, beta).upper for v in rec.outputs]
        else:
            xs = [_cuts(v, beta).upper for v in rec.inputs]
            ys = [_cuts(v, beta).lower for v in rec.outputs]
        records.append(DmuRecord(rec.name, rec.group, tuple(xs), tuple(ys)))
    return ds.replace_records(records)


def alphacut_solutions(ds, z, alpha, tol=DEFAULT_TOLERANCES):
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha-cut level must lie in [0, 1], got {alpha}")
    name = ds.records[z].name
    out = []
    for optimistic in (False, True):
        crisp = bound_dataset(ds, z, alpha, optimistic)
        out.append(solve_model(build_crisp_sbm(crisp, z), crisp, name, tol, alpha))
    return tuple(out)


def alphacut_interval(ds, z, alpha, tol=DEFAULT_TOLERANCES) -> tuple:
    """``(pessimistic, optimistic)`` efficiency of DMU ``z`` at cut level ``alpha``."""
    low, high = alphacut_solutions(ds, z, alpha, tol)
    return (low.efficiency, high.efficiency)


def crisp_peak_solution(ds, z, tol=DEFAULT_TOLERANCES) -> SbmSolution:
    peak = peak_dataset(ds)
    return solve_model(build_crisp_sbm(peak, z), peak, ds.records[z].name, tol)


def evaluate_dmu(ds: Dataset, z: int, config: ApproachConfig) -> EfficiencyResult:
    scores, details = [], []
    for alpha in config.alphas:
        if config.approach is Approach.CRISP:
            sol = crisp_peak_solution(ds, z, config.tol)
            scores.append(sol.efficiency)
        elif config.approach is Approach.CREDIBILITY:
            sol = credibility_solution(ds, z, alpha, config.tol, config.form)
            scores.append(sol.efficiency)
        elif config.approach is Approach.POSSIBILITY:
            sol = possibility_solution(ds, z, alpha, config.tol, config.form)
            scores.append(sol.efficiency)
        else:
            sol = alphacut_solutions(ds, z, alpha, config.tol)
            scores.append((sol[0].efficiency, sol[1].efficiency))
        details.append(sol)
    rec = ds.records[z]
    return EfficiencyResult(
        rec.name, rec.group, config.approach, config.alphas, tuple(scores), tuple(details)
    )


def evaluate(ds: Dataset, config: ApproachConfig) -> list:
    """Score every DMU of ``ds`` over the grid and attach ranks."""
    return rank([evaluate_dmu(ds, z, config) for z in range(ds.r_dmus)])


def rank(results: Sequence[EfficiencyResult], tol: float = ONE_TOL) -> list:
    """Attach dense ranks.

    DMUs are ordered by the number of levels at which they are efficient,
    then by mean score (midpoints for intervals), both descending. Equal keys
    share a rank and the next distinct key gets the following integer.
    """
    results = list(results)
    if not results:
        return []
    approaches = {res.approach for res in results}
    grids = {res.alphas for res in results}
    if len(approaches) > 1:
        raise DomainError("cannot rank results from different approaches together")
    if len(grids) > 1:
        raise DomainError("cannot rank results computed on different alpha grids")

    def key(res):
        return (res.efficient_count(tol), float(np.mean(res.point_scores())))

    keys = [key(res) for res in results]
    distinct = []
    for k in sorted(keys, reverse=True):
        if not distinct or not _same_key(distinct[-1], k, tol):
            distinct.append(k)
    ranked = []
    for res, k in zip(results, keys):
        position = next(p for p, d in enumerate(distinct) if _same_key(d, k, tol))
        ranked.append(replace(res, rank=position + 1))
    return ranked


def _same_key(a, b, tol):
    return a[0] == b[0] and abs(a[1] - b[1]) <= tol
