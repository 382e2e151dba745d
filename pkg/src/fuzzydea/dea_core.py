"""Crisp slacks-based measure (SBM) efficiency model.

For DMU ``z`` the fractional program

    min  (1 - 1/m * sum_i s-_i / x_iz) / (1 + 1/n * sum_j s+_j / y_jz)
    s.t. X lambda + s- = x_z,  Y lambda - s+ = y_z,  lambda, s-, s+ >= 0

is linearized with the Charnes-Cooper scalar ``t``. The LP variables are laid
out as ``[t, lambda_1..lambda_r, s-_1..s-_m, s+_1..s+_n]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import AnalysisError, DomainError
from .fuzzy import TriangularFuzzyNumber
from .lp import DEFAULT_TOLERANCES, LinearProgram, Relation, Status, Tolerances, solve

T_LOWER_BOUND = 1e-9

Value = Union[float, TriangularFuzzyNumber]


@dataclass(frozen=True)
class DmuRecord:
    name: str
    group: str
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(_coerce(v) for v in self.inputs))
        object.__setattr__(self, "outputs", tuple(_coerce(v) for v in self.outputs))
        for kind, values in (("input", self.inputs), ("output", self.outputs)):
            for k, v in enumerate(values):
                low = v.r if isinstance(v, TriangularFuzzyNumber) else v
                if not low > 0:
                    raise DomainError(
                        f"DMU {self.name!r}: {kind} {k} must be strictly positive, got {v}"
                    )

    @property
    def is_crisp(self) -> bool:
        return not any(isinstance(v, TriangularFuzzyNumber) for v in self.inputs + self.outputs)


def _coerce(v):
    if isinstance(v, TriangularFuzzyNumber):
        return v
    return float(v)


@dataclass(frozen=True)
class Dataset:
    """DMUs of one group sharing an ``m``-input / ``n``-output schema."""

    records: tuple
    input_names: tuple = ()
    output_names: tuple = ()

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        if len(records) < 2:
            raise DomainError("a dataset needs at least two DMUs")
        m, n = len(records[0].inputs), len(records[0].outputs)
        if m < 1 or n < 1:
            raise DomainError("a dataset needs at least one input and one output")
        groups = {rec.group for rec in records}
        if len(groups) != 1:
            raise DomainError(f"records span several groups: {sorted(groups)}")
        for rec in records:
            if len(rec.inputs) != m or len(rec.outputs) != n:
                raise DomainError(f"DMU {rec.name!r} does not match the {m}x{n} schema")
        if not self.input_names:
            object.__setattr__(self, "input_names", tuple(f"x{i + 1}" for i in range(m)))
        if not self.output_names:
            object.__setattr__(self, "output_names", tuple(f"y{j + 1}" for j in range(n)))
        if len(self.input_names) != m or len(self.output_names) != n:
            raise DomainError("column names do not match the attribute counts")

    @property
    def m(self) -> int:
        return len(self.records[0].inputs)

    @property
    def n(self) -> int:
        return len(self.records[0].outputs)

    @property
    def r_dmus(self) -> int:
        return len(self.records)

    @property
    def group(self) -> str:
        return self.records[0].group

    @property
    def names(self) -> list:
        return [rec.name for rec in self.records]

    @property
    def is_crisp(self) -> bool:
        return all(rec.is_crisp for rec in self.records)

    def index(self, name: str) -> int:
        for k, rec in enumerate(self.records):
            if rec.name == name:
                return k
        raise KeyError(name)

    def input_matrix(self) -> np.ndarray:
        """``(r, m)`` array of crisp inputs."""
        self._require_crisp()
        return np.array([rec.inputs for rec in self.records], dtype=float)

    def output_matrix(self) -> np.ndarray:
        self._require_crisp()
        return np.array([rec.outputs for rec in self.records], dtype=float)

    def _require_crisp(self):
        if not self.is_crisp:
            raise DomainError("dataset has fuzzy attributes; use a fuzzy model or peak_dataset()")

    def replace_records(self, records) -> "Dataset":
        return Dataset(tuple(records), self.input_names, self.output_names)


def crisp_dataset(group: str, rows: dict, input_names=(), output_names=()) -> Dataset:
    """Build a dataset from ``{name: (inputs, outputs)}``."""
    records = [DmuRecord(name, group, tuple(x), tuple(y)) for name, (x, y) in rows.items()]
    return Dataset(tuple(records), tuple(input_names), tuple(output_names))


def peak_dataset(ds: Dataset) -> Dataset:
    """Replace every fuzzy attribute by its peak value."""

    def peak(v):
        return v.s if isinstance(v, TriangularFuzzyNumber) else v

    return ds.replace_records(
        DmuRecord(rec.name, rec.group, tuple(map(peak, rec.inputs)), tuple(map(peak, rec.outputs)))
        for rec in ds.records
    )


@dataclass(frozen=True)
class SbmSolution:
    """Optimal SBM solution of one DMU.

    ``raw_*`` hold the Charnes-Cooper (t-scaled) LP values; the unprefixed
    properties divide by ``t`` and are in the original attribute units.
    """

    efficiency: float
    t: float
    raw_lambdas: np.ndarray
    raw_input_slacks: np.ndarray
    raw_output_slacks: np.ndarray
    status: Status = Status.OPTIMAL

    @property
    def lambdas(self) -> np.ndarray:
        return self.raw_lambdas / self.t

    @property
    def input_slacks(self) -> np.ndarray:
        return self.raw_input_slacks / self.t

    @property
    def output_slacks(self) -> np.ndarray:
        return self.raw_output_slacks / self.t

    @classmethod
    def from_primal(cls, x: np.ndarray, objective: float, r: int, m: int) -> "SbmSolution":
        return cls(
            efficiency=float(objective),
            t=float(x[0]),
            raw_lambdas=x[1 : 1 + r].copy(),
            raw_input_slacks=x[1 + r : 1 + r + m].copy(),
            raw_output_slacks=x[1 + r + m :].copy(),
        )


def variable_count(ds: Dataset) -> int:
    return 1 + ds.r_dmus + ds.m + ds.n


def build_crisp_sbm(ds: Dataset, z: int) -> LinearProgram:
    """Charnes-Cooper LP of the crisp SBM model for DMU index ``z``."""
    if not 0 <= z < ds.r_dmus:
        raise DomainError(f"DMU index {z} out of range for {ds.r_dmus} DMUs")
    X = ds.input_matrix()
    Y = ds.output_matrix()
    if np.any(X <= 0) or np.any(Y <= 0):
        raise DomainError("SBM needs strictly positive inputs and outputs")
    r, m, n = ds.r_dmus, ds.m, ds.n
    nv = variable_count(ds)
    lam = slice(1, 1 + r)

    c = np.zeros(nv)
    c[0] = 1.0
    c[1 + r : 1 + r + m] = -1.0 / (m * X[z])
    lb = np.zeros(nv)
    lb[0] = T_LOWER_BOUND
    lp = LinearProgram(nv, c, var_lower_bounds=lb)

    row = np.zeros(nv)
    row[0] = 1.0
    row[1 + r + m :] = 1.0 / (n * Y[z])
    lp.add_constraint(row, Relation.EQ, 1.0)
    for i in range(m):
        row = np.zeros(nv)
        row[lam] = X[:, i]
        row[1 + r + i] = 1.0
        row[0] = -X[z, i]
        lp.add_constraint(row, Relation.EQ, 0.0)
    for j in range(n):
        row = np.zeros(nv)
        row[lam] = Y[:, j]
        row[1 + r + m + j] = -1.0
        row[0] = -Y[z, j]
        lp.add_constraint(row, Relation.EQ, 0.0)
    return lp


def solve_model(lp: LinearProgram, ds: Dataset, dmu: str, tol: Tolerances, alpha=None) -> SbmSolution:
    sol = solve(lp, tol)
    if not sol.is_optimal:
        where = f"DMU {dmu!r}" + (f" at alpha={alpha:g}" if alpha is not None else "")
        raise AnalysisError(f"SBM LP for {where} is {sol.status.value}", dmu, alpha, sol.status)
    return SbmSolution.from_primal(sol.primal, sol.objective_value, ds.r_dmus, ds.m)


def solve_sbm(ds: Dataset, z: int, tol: Tolerances = DEFAULT_TOLERANCES) -> SbmSolution:
    """Solve the crisp SBM model for DMU index ``z``."""
    return solve_model(build_crisp_sbm(ds, z), ds, ds.records[z].name, tol)


def sbm_scores(ds: Dataset, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    return [solve_sbm(ds, z, tol).efficiency for z in range(ds.r_dmus)]
