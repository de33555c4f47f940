"""Command-line front end: catalog queries, verification, analysis, demos.

Subcommands:

    list                                   roster overview
    show ID [--n N] [--param k=v] [--kmax K]
    verify [--id ID] [--nmax N] [--kmax K]
    analyze --expr EXPR [--kmax K]
    strata-demo [--kmax K] [--seed S]
    metric2d [--kmax K] [--seed S]
    rederive --id ID --n N [--kmax K]

Output formats: markdown (default), csv, json; select with --format or the
POINCOUNT_FORMAT environment variable.  JSON payloads are exact: every
non-integer rational is {"num": "...", "den": "..."} with decimal-digit
strings, never floating point.  Output is byte-identical for identical
argv and seed.  Exit codes: 0 success / all consistent, 1 mismatch
findings present, 2 usage or validity errors.

EXPR grammar (integer coefficients over the single symbol z):

    expr   := term { ("+" | "-") term }
    term   := factor { ("*" | "/") factor }
    factor := "-" factor | atom [ "^" integer ]
    atom   := integer | "z" | "(" expr ")"
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import analysis, catalog, jetflow
from .algebra import RationalFunction
from .counting import SHIPPED_PLANS, assemble_hilbert, shipped_plan
from .exprs import ExpressionError, parse_rational_function
from .hilbert import gf_from_hilbert

SCHEMA = "poincount.output/1"
FORMATS = ("markdown", "csv", "json")


# ---------------------------------------------------------------------------
# Payload assembly and rendering
# ---------------------------------------------------------------------------


def _rat(value) -> dict | int:
    """Exact JSON encoding: integers stay integers, rationals become digit strings."""
    f = Fraction(value)
    if f.denominator == 1:
        return int(f)
    return {"num": str(f.numerator), "den": str(f.denominator)}


def _cell_text(value) -> str:
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        return f"{value['num']}/{value['den']}"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _payload(command: str, fields: dict, tables: list, notes: list[str]) -> dict:
    return {
        "schema": SCHEMA,
        "catalog_version": catalog.CATALOG_VERSION,
        "command": command,
        "fields": fields,
        "tables": tables,
        "notes": notes,
    }


def _render_markdown(payload: dict) -> str:
    out = [f"## poincount {payload['command']}", ""]
    if payload["fields"]:
        for key, value in payload["fields"].items():
            out.append(f"- {key}: {_cell_text(value)}")
        out.append("")
    for table in payload["tables"]:
        out.append(f"### {table['title']}")
        out.append("")
        cols = table["columns"]
        out.append("| " + " | ".join(cols) + " |")
        out.append("|" + "|".join("---" for _ in cols) + "|")
        for row in table["rows"]:
            out.append("| " + " | ".join(_cell_text(c) for c in row) + " |")
        out.append("")
    for note in payload["notes"]:
        out.append(f"> {note}")
    return "\n".join(out).rstrip() + "\n"


def _render_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["command", payload["command"]])
    for key, value in payload["fields"].items():
        writer.writerow(["field", key, _cell_text(value)])
    for table in payload["tables"]:
        writer.writerow(["table", table["title"]])
        writer.writerow(table["columns"])
        for row in table["rows"]:
            writer.writerow([_cell_text(c) for c in row])
    for note in payload["notes"]:
        writer.writerow(["note", note])
    return buf.getvalue()


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(payload)
    return _render_markdown(payload)


def _gf_fields(p: RationalFunction) -> dict:
    report = analysis.analyze(p)
    return {
        "P": p.format(),
        "numerator_coefficients": [_rat(c) for c in p.num.coeffs],
        "denominator_coefficients": [_rat(c) for c in p.den.coeffs],
        "functional_dimension_d": report.d,
        "functional_rank_sigma": _rat(report.sigma),
        "single_pole_form": report.conforms_to_pr,
        "other_unit_poles": [
            [poly.format(), mult] for poly, mult in report.other_unit_poles
        ],
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _parse_extra_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        if "=" not in pair:
            raise catalog.OutOfValidity(f"--param needs key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        params[key.strip()] = raw.strip() if not _is_int(raw) else int(raw)
    return params


def _is_int(text: str) -> bool:
    t = text.strip()
    return t.lstrip("+-").isdigit()


def cmd_list(args) -> tuple[int, dict]:
    rows = []
    for entry in catalog.list_entries():
        rows.append(
            [
                entry.id,
                entry.title,
                ",".join(entry.params) if entry.params else "-",
                entry.validity_note,
                "yes" if entry.hilbert else "no",
                ",".join(sorted(entry.flags)) if entry.flags else "-",
            ]
        )
    payload = _payload(
        "list",
        {"entries": len(rows), "aliases": sorted(catalog.ID_ALIASES)},
        [
            {
                "title": "catalog",
                "columns": ["id", "title", "params", "validity", "h-data", "flags"],
                "rows": rows,
            }
        ],
        [],
    )
    return 0, payload


def cmd_show(args) -> tuple[int, dict]:
    params = _parse_extra_params(args.param)
    if args.n is not None:
        params["n"] = args.n
    p = catalog.claimed_poincare(args.id, **params)
    entry, clean = catalog.resolve(args.id)
    fields = {
        "id": entry.id,
        "title": entry.title,
        "params": json.dumps({**clean, **params}, sort_keys=True),
        "base_dim": catalog.base_dimension(args.id, **params),
        "kmax": args.kmax,
    }
    fields.update(_gf_fields(p))
    series = p.series(args.kmax)
    s_values = analysis.s_sequence(p, args.kmax)
    rows = [
        [k, _rat(series[k]), _rat(s_values[k])] for k in range(args.kmax + 1)
    ]
    notes = []
    try:
        spec = catalog.hilbert_spec(args.id, **params)
        gf_ok = gf_from_hilbert(spec) == p
        fields["hilbert_matches_closed_form"] = gf_ok
        fields["tail_start"] = spec.tail_start
        fields["tail_polynomial_in_k"] = spec.tail.format("k")
    except catalog.NoHilbertData:
        notes.append("entry ships a closed form only; no independent h(k) data")
    if entry.note:
        notes.append(entry.note)
    payload = _payload(
        "show",
        fields,
        [{"title": "counting sequence", "columns": ["k", "h_k", "s_k"], "rows": rows}],
        notes,
    )
    return 0, payload


def cmd_verify(args) -> tuple[int, dict]:
    if args.id:
        entry, implied = catalog.resolve(args.id)
        samples = [
            s
            for s in entry.samples(args.nmax)
            if all(s.get(k) == v for k, v in implied.items())
        ]
        reports = [
            catalog.verify_entry(entry.id, sample, args.kmax) for sample in samples
        ]
    else:
        reports = catalog.verify_all(args.kmax, args.nmax)
    rows = []
    mismatches = 0
    for rep in reports:
        if rep.status == "mismatch":
            mismatches += 1
        rows.append(
            [
                rep.entry_id,
                json.dumps(rep.params, sort_keys=True),
                rep.status,
                json.dumps(rep.detail, sort_keys=True, default=str)
                if rep.detail
                else "-",
            ]
        )
    payload = _payload(
        "verify",
        {
            "kmax": args.kmax,
            "nmax": args.nmax,
            "reports": len(reports),
            "match": sum(r.status == "match" for r in reports),
            "skipped": sum(r.status == "skipped" for r in reports),
            "mismatch": mismatches,
        },
        [
            {
                "title": "verification reports",
                "columns": ["entry", "params", "status", "detail"],
                "rows": rows,
            }
        ],
        [],
    )
    return (1 if mismatches else 0), payload


def cmd_analyze(args) -> tuple[int, dict]:
    f = parse_rational_function(args.expr)
    fields = {"expr": args.expr}
    fields.update(_gf_fields(f))
    tables = []
    if f.den.coefficient(0) != 0:
        series = f.series(args.kmax)
        s_values = analysis.s_sequence(f, args.kmax)
        tables.append(
            {
                "title": "coefficients",
                "columns": ["k", "h_k", "s_k"],
                "rows": [
                    [k, _rat(series[k]), _rat(s_values[k])]
                    for k in range(args.kmax + 1)
                ],
            }
        )
    payload = _payload("analyze", fields, tables, [])
    return 0, payload


def cmd_strata_demo(args) -> tuple[int, dict]:
    rows = jetflow.lie_example_table(args.kmax, args.seed)
    table_rows = [
        [row.label, " ".join(str(v) for v in row.h), row.counting_function.format()]
        for row in rows
    ]
    dist_rows = []
    for rep in jetflow.distribution_example():
        checks = "; ".join(f"{name}: {'yes' if ok else 'no'}" for name, ok in rep.checks)
        dist_rows.append([rep.stratum, rep.rank, checks or "-"])
    notes = sorted({row.note for row in rows})
    payload = _payload(
        "strata-demo",
        {"scenario": "x-reparam", "kmax": args.kmax, "seed": args.seed},
        [
            {
                "title": "orbit codimension increments per stratum",
                "columns": ["stratum", "h_0..h_kmax", "P(z)"],
                "rows": table_rows,
            },
            {
                "title": "3D distribution sub-example",
                "columns": ["stratum", "rank", "invariant checks"],
                "rows": dist_rows,
            },
        ],
        notes,
    )
    return 0, payload


def cmd_metric2d(args) -> tuple[int, dict]:
    h = jetflow.metric2d_case(args.kmax, args.seed)
    payload = _payload(
        "metric2d",
        {"kmax": args.kmax, "seed": args.seed},
        [
            {
                "title": "plane metrics under diffeomorphisms",
                "columns": ["k", "h_k"],
                "rows": [[k, h[k]] for k in range(args.kmax + 1)],
            }
        ],
        [],
    )
    return 0, payload


def cmd_rederive(args) -> tuple[int, dict]:
    plan = shipped_plan(args.id, args.n)
    derived = assemble_hilbert(plan, args.kmax + 8)
    target = catalog.hilbert_spec(args.id, n=args.n)
    got = derived.values(args.kmax)
    want = target.values(args.kmax)
    first_mismatch = next((k for k in range(args.kmax + 1) if got[k] != want[k]), None)
    rows = [[k, got[k], want[k]] for k in range(args.kmax + 1)]
    payload = _payload(
        "rederive",
        {
            "id": args.id,
            "n": args.n,
            "kmax": args.kmax,
            "match": first_mismatch is None,
            "first_mismatch_k": "-" if first_mismatch is None else first_mismatch,
        },
        [
            {
                "title": "dimension-count rederivation vs catalog",
                "columns": ["k", "from_plan", "catalog"],
                "rows": rows,
            }
        ],
        [],
    )
    return (0 if first_mismatch is None else 1), payload


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poincount",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default=os.environ.get("POINCOUNT_FORMAT", "markdown"),
        help="output format (default: markdown, or POINCOUNT_FORMAT)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="roster overview").set_defaults(func=cmd_list)

    p_show = sub.add_parser("show", help="one entry: h/s tables, P(z), d, sigma")
    p_show.add_argument("id")
    p_show.add_argument("--n", type=int, default=None)
    p_show.add_argument(
        "--param", action="append", default=[], help="extra parameter key=value"
    )
    p_show.add_argument("--kmax", type=int, default=10)
    p_show.set_defaults(func=cmd_show)

    p_verify = sub.add_parser("verify", help="h(k) vs closed-form consistency")
    p_verify.add_argument("--id", default=None)
    p_verify.add_argument("--nmax", type=int, default=8)
    p_verify.add_argument("--kmax", type=int, default=50)
    p_verify.set_defaults(func=cmd_verify)

    p_analyze = sub.add_parser("analyze", help="pole analysis of an expression in z")
    p_analyze.add_argument("--expr", required=True)
    p_analyze.add_argument("--kmax", type=int, default=10)
    p_analyze.set_defaults(func=cmd_analyze)

    p_strata = sub.add_parser("strata-demo", help="orbit codimension strata table")
    p_strata.add_argument("--kmax", type=int, default=7)
    p_strata.add_argument("--seed", type=int, default=2024)
    p_strata.set_defaults(func=cmd_strata_demo)

    p_metric = sub.add_parser("metric2d", help="plane-metric moduli by rank counting")
    p_metric.add_argument("--kmax", type=int, default=4)
    p_metric.add_argument("--seed", type=int, default=2024)
    p_metric.set_defaults(func=cmd_metric2d)

    p_rederive = sub.add_parser(
        "rederive", help="dimension-count plan vs catalog sequence"
    )
    p_rederive.add_argument(
        "--id", required=True, choices=sorted(SHIPPED_PLANS)
    )
    p_rederive.add_argument("--n", type=int, required=True)
    p_rederive.add_argument("--kmax", type=int, default=40)
    p_rederive.set_defaults(func=cmd_rederive)

    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        code, payload = args.func(args)
    except (
        catalog.UnknownEntry,
        catalog.OutOfValidity,
        catalog.NoHilbertData,
        ExpressionError,
        jetflow.UnknownScenario,
        jetflow.GenericityFailure,
        jetflow.BadSample,
        ValueError,
    ) as exc:
        print(f"poincount: error: {exc}", file=stderr)
        return 2
    stdout.write(_render(payload, args.format))
    return code


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run())
