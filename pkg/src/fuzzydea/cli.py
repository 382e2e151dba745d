"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 data error, 4 solver error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path

from .errors import AnalysisError, DomainError, FuzzyDeaError, ParseError
from .fuzzy_dea import Approach, ApproachConfig, ConstraintForm, evaluate
from .ingest import load_schema, normalize, parse_dataset, serialize_datasets
from .lp import DEFAULT_TOLERANCES, Tolerances

log = logging.getLogger("fuzzydea")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SOLVER = 0, 2, 3, 4
TOL_ENV = "FUZZYDEA_TOL"
DEFAULT_GRID = "0.5..1.0:0.1"
BUILTINS = {
    "table1": ("table1_raw.csv", "table1_schema.json"),
    "table2": ("table2_normalized.csv", "table2_schema.json"),
    "toy": ("toy_2dmu.csv", "toy_schema.json"),
}
REPORT_APPROACHES = (Approach.CREDIBILITY, Approach.ALPHACUT, Approach.POSSIBILITY)
TITLES = {
    Approach.CRISP: "Crisp SBM on peak values",
    Approach.CREDIBILITY: "Credibility measure approach",
    Approach.POSSIBILITY: "Possibility measure approach",
    Approach.ALPHACUT: "Alpha-cut approach",
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def parse_alpha_grid(text: str) -> tuple:
    """Parse ``"0.5,0.7"`` or ``"0.5..1.0:0.1"`` (items may be mixed, comma-separated)."""
    values = []
    for item in (p.strip() for p in text.split(",")):
        if not item:
            continue
        try:
            if ".." in item:
                span, _, step = item.partition(":")
                start, _, stop = span.partition("..")
                a, b = Decimal(start), Decimal(stop)
                d = Decimal(step) if step else Decimal("0.1")
                if d <= 0:
                    raise UsageError(f"alpha step must be positive in {item!r}")
                while a <= b:
                    values.append(a)
                    a += d
            else:
                values.append(Decimal(item))
        except InvalidOperation:
            raise UsageError(f"cannot parse alpha value {item!r}") from None
    if not values:
        raise UsageError("alpha grid is empty")
    return tuple(float(v) for v in values)


def parse_tolerances(text) -> Tolerances:
    """``"1e-6"`` sets the feasibility tolerance; ``"feasibility=..,pivot=.."`` sets either."""
    if not text:
        return DEFAULT_TOLERANCES
    fields = {}
    try:
        for part in text.split(","):
            if "=" in part:
                key, _, value = part.partition("=")
                key = key.strip()
                if key not in ("feasibility", "pivot"):
                    raise UsageError(f"unknown tolerance {key!r}")
                fields[key] = float(value)
            else:
                fields["feasibility"] = float(part)
    except ValueError:
        raise UsageError(f"cannot parse tolerance setting {text!r}") from None
    if any(not v > 0 for v in fields.values()):
        raise UsageError("tolerances must be positive")
    return Tolerances(**{**DEFAULT_TOLERANCES.__dict__, **fields})


def _builtin_path(name: str) -> Path:
    return Path(str(resources.files("fuzzydea") / "data" / name))


def load_inputs(args):
    """Return ``(schema, {group: Dataset})`` for the data named on the command line."""
    data, schema_path = args.data, args.schema
    if args.builtin:
        csv_name, schema_name = BUILTINS[args.builtin]
        data = data or _builtin_path(csv_name)
        schema_path = schema_path or _builtin_path(schema_name)
    if data is None or schema_path is None:
        raise UsageError("need --data and --schema (or --builtin)")
    try:
        schema = load_schema(schema_path)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    except DomainError as exc:
        raise UsageError(f"invalid schema: {exc}") from None
    try:
        text = Path(data).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read data: {exc}") from None
    try:
        datasets = parse_dataset(text, schema)
    except (ParseError, DomainError) as exc:
        raise DataError(str(exc)) from None
    if getattr(args, "group", None):
        if args.group not in datasets:
            raise UsageError(f"no group {args.group!r}; have {', '.join(datasets)}")
        datasets = {args.group: datasets[args.group]}
    must_normalize = any(c.kind == "fuzzify" for c in schema.attributes)
    if must_normalize or getattr(args, "normalize", False):
        try:
            datasets = {g: normalize(ds, schema) for g, ds in datasets.items()}
        except DomainError as exc:
            raise DataError(str(exc)) from None
        schema = schema.normalized()
    return schema, datasets


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _score(value) -> str:
    if isinstance(value, tuple):
        return f"[{value[0]:.4f},{value[1]:.4f}]"
    return f"{value:.4f}"


def _alpha_label(a: float) -> str:
    return f"{a:g}"


def _tolerances(args) -> Tolerances:
    return parse_tolerances(args.tol if args.tol is not None else os.environ.get(TOL_ENV))


def run_grid(datasets, approach, alphas, tol, form):
    try:
        config = ApproachConfig(approach, alphas, tol, form)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return {group: evaluate(ds, config) for group, ds in datasets.items()}


def _json_score(value):
    return list(value) if isinstance(value, tuple) else value


def format_efficiency(results: dict, approach: Approach, alphas, fmt: str) -> str:
    labels = [_alpha_label(a) for a in alphas]
    if fmt == "json":
        doc = {
            "approach": approach.value,
            "alphas": list(alphas),
            "results": [
                {
                    "group": res.group,
                    "dmu": res.dmu,
                    "rank": res.rank,
                    "scores": {lab: _json_score(s) for lab, s in zip(labels, res.scores)},
                }
                for group_results in results.values()
                for res in group_results
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        lines = [",".join(["group", "dmu"] + [f"alpha={lab}" for lab in labels] + ["rank"])]
        for group_results in results.values():
            for res in group_results:
                cells = [res.group, res.dmu] + [_quote(_score(s)) for s in res.scores]
                lines.append(",".join(cells + [str(res.rank)]))
        return "\n".join(lines) + "\n"
    blocks = []
    for group, group_results in results.items():
        blocks.append(_markdown_table(group, group_results, labels))
    return f"## {TITLES[approach]}\n\n" + "\n".join(blocks)


def _quote(cell: str) -> str:
    return f'"{cell}"' if "," in cell else cell


def _markdown_table(group, group_results, labels) -> str:
    head = ["DMU"] + [f"alpha={lab}" for lab in labels] + ["Rank"]
    rows = [
        "| " + " | ".join(head) + " |",
        "|" + "|".join(["---"] + ["---:"] * (len(head) - 1)) + "|",
    ]
    for res in group_results:
        cells = [res.dmu] + [_score(s) for s in res.scores] + [str(res.rank)]
        rows.append("| " + " | ".join(cells) + " |")
    return f"### Group: {group}\n\n" + "\n".join(rows) + "\n"


def format_report(all_results: dict, alphas, fmt: str) -> str:
    labels = [_alpha_label(a) for a in alphas]
    if fmt == "json":
        doc = {"alphas": list(alphas), "results": {}}
        for approach, results in all_results.items():
            for group_results in results.values():
                for res in group_results:
                    entry = doc["results"].setdefault(res.dmu, {"group": res.group})
                    entry[approach.value] = {
                        "rank": res.rank,
                        "scores": {lab: _json_score(s) for lab, s in zip(labels, res.scores)},
                    }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        lines = ["group,dmu,approach,alpha,score,lower,upper,rank"]
        for approach, results in all_results.items():
            for group_results in results.values():
                for res in group_results:
                    for lab, s in zip(labels, res.scores):
                        if isinstance(s, tuple):
                            cells = ["", f"{s[0]:.4f}", f"{s[1]:.4f}"]
                        else:
                            cells = [f"{s:.4f}", "", ""]
                        lines.append(
                            ",".join([res.group, res.dmu, approach.value, lab] + cells + [str(res.rank)])
                        )
        return "\n".join(lines) + "\n"
    parts = ["# Fuzzy SBM efficiency report\n"]
    for approach, results in all_results.items():
        parts.append(format_efficiency(results, approach, alphas, "markdown"))
    return "\n".join(parts)


def cmd_normalize(args) -> int:
    schema, datasets = load_inputs(args)
    _emit(serialize_datasets(datasets, schema, decimals=args.decimals), args.out)
    if args.schema_out:
        Path(args.schema_out).write_text(json.dumps(schema.to_mapping(), indent=2) + "\n")
    return EXIT_OK


def cmd_efficiency(args) -> int:
    approach = Approach(args.approach)
    grid = args.alpha
    if grid is None:
        grid = "1" if approach is Approach.CRISP else DEFAULT_GRID
    alphas = parse_alpha_grid(grid)
    tol = _tolerances(args)
    _, datasets = load_inputs(args)
    results = run_grid(datasets, approach, alphas, tol, args.form)
    _emit(format_efficiency(results, approach, alphas, args.format), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    alphas = parse_alpha_grid(DEFAULT_GRID if args.alpha is None else args.alpha)
    tol = _tolerances(args)
    _, datasets = load_inputs(args)
    all_results = {
        approach: run_grid(datasets, approach, alphas, tol, args.form)
        for approach in REPORT_APPROACHES
    }
    _emit(format_report(all_results, alphas, args.format), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzydea", description="SBM efficiency analysis with fuzzy data."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p):
        p.add_argument("--data", help="input CSV")
        p.add_argument("--schema", help="JSON schema describing the CSV columns")
        p.add_argument("--builtin", choices=sorted(BUILTINS), help="use a bundled dataset")
        p.add_argument("--group", help="restrict to one group")
        p.add_argument("--out", help="write to this path instead of stdout")

    def model_args(p):
        p.add_argument("--alpha", help="comma list and/or a..b:step ranges")
        p.add_argument("--format", choices=("csv", "markdown", "json"), default="markdown")
        p.add_argument("--normalize", action="store_true", help="normalize raw crisp columns first")
        p.add_argument(
            "--form",
            choices=[f.value for f in ConstraintForm],
            default=ConstraintForm.CONTAINMENT.value,
            help="how fuzzy balance constraints become crisp rows",
        )
        p.add_argument("--tol", help=f"tolerance overrides (also read from ${TOL_ENV})")

    p = sub.add_parser("normalize", help="rescale raw data to the 1-9 scale and fuzzify")
    data_args(p)
    p.add_argument("--decimals", type=int, default=2, help="digits to print (default 2)")
    p.add_argument("--schema-out", help="write the schema of the normalized CSV here")
    p.set_defaults(func=cmd_normalize, normalize=True)

    p = sub.add_parser("efficiency", help="score every DMU under one approach")
    data_args(p)
    model_args(p)
    p.add_argument("--approach", choices=[a.value for a in Approach], default="credibility")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("report", help="credibility, alpha-cut and possibility side by side")
    data_args(p)
    model_args(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fuzzydea: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"fuzzydea: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AnalysisError as exc:
        print(f"fuzzydea: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except FuzzyDeaError as exc:
        log.debug("unexpected failure", exc_info=True)
        print(f"fuzzydea: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
