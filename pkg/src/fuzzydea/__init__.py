"""Slacks-based measure DEA with triangular fuzzy data.

Crisp SBM efficiency plus the credibility, possibility and alpha-cut
treatments of fuzzy inputs and outputs, on top of a small dense simplex solver.
"""

from .dea_core import Dataset, DmuRecord, SbmSolution, build_crisp_sbm, crisp_dataset, solve_sbm
from .errors import AnalysisError, DomainError, FuzzyDeaError, MalformedLPError, ParseError
from .fuzzy import (
    CutBounds,
    TriangularFuzzyNumber,
    credibility_geq,
    credibility_leq,
    cut_bounds,
    membership,
    scale_cut,
)
from .fuzzy_dea import (
    Approach,
    ApproachConfig,
    ConstraintForm,
    EfficiencyResult,
    alphacut_interval,
    build_cut_sbm,
    credibility_efficiency,
    evaluate,
    possibility_efficiency,
    rank,
)
from .ingest import SchemaConfig, fuzzify_column, normalize, normalize_group, parse_dataset
from .lp import LinearProgram, LpSolution, Relation, Status, Tolerances, solve

__version__ = "0.1.0"
