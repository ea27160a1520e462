"""Report rendering over a RunStore: pass-rate deltas with McNemar stars,
average Singleton Scores, predicate tallies and outcome breakdowns, in
aligned text, CSV and JSON. All three formats derive from one JSON-native
summary, and rendering is a pure function of it.
"""

from __future__ import annotations

import csv
import io
import json

from .exec_harness import (
    ABORTED,
    COMPILE_ERROR,
    MISSING_EXTERNAL_LIBRARY,
    NON_CODE_OUTPUT,
    OTHER_COMPILE_ERROR,
    PASS,
    TEST_FAIL,
    TIMEOUT,
)
from .guidance import BASELINE, STRATEGY_KINDS, RunRecord
from .pattern_checker import singleton_score
from .stats import (
    delta_pp,
    mcnemar,
    pair_outcomes,
    pass_at_1,
    predicate_counts,
    selected_report,
)
from .store import RunStore

FORMATS = ("text", "csv", "json")

MCNEMAR_LEGEND = "McNemar significance: * = p<0.05, ** = p<0.01, *** = p<0.001"


def build_summary(store: RunStore) -> dict:
    """Aggregate a store into a JSON-native summary model."""
    grouped = store.load_all()
    model_ids = sorted({model_id for model_id, _ in grouped})
    strategy_order = [
        kind for kind in STRATEGY_KINDS if any(key[1] == kind for key in grouped)
    ]

    models = []
    for model_id in model_ids:
        baseline_records = grouped.get((model_id, BASELINE), [])
        baseline_rate = pass_at_1(baseline_records) if baseline_records else None
        strategies = []
        for kind in strategy_order:
            records = grouped.get((model_id, kind))
            if not records:
                continue
            strategies.append(
                _strategy_cell(kind, records, baseline_records, baseline_rate)
            )
        models.append(
            {
                "model_id": model_id,
                "baseline_pass_rate": baseline_rate,
                "strategies": strategies,
            }
        )
    # Table 2 ordering: highest baseline pass rate first, then model id.
    models.sort(
        key=lambda m: (
            -(m["baseline_pass_rate"] if m["baseline_pass_rate"] is not None else -1.0),
            m["model_id"],
        )
    )
    return {"strategy_order": strategy_order, "models": models}


def _strategy_cell(
    kind: str,
    records: list[RunRecord],
    baseline_records: list[RunRecord],
    baseline_rate: float | None,
) -> dict:
    rate = pass_at_1(records)
    counts = predicate_counts(records)
    cell = {
        "kind": kind,
        "n_tasks": len(records),
        "pass_rate": rate,
        "avg_singleton_score": sum(
            singleton_score(selected_report(r)) for r in records
        )
        / len(records),
        "predicate_counts": {
            "private_constructor": counts.private_constructor,
            "instance_field": counts.instance_field,
            "global_access_point": counts.global_access_point,
        },
        "outcomes": _outcome_breakdown(records),
        "delta_pp": None,
        "mcnemar": None,
    }
    if kind != BASELINE and baseline_records and baseline_rate is not None:
        result = mcnemar(pair_outcomes(baseline_records, records))
        cell["delta_pp"] = delta_pp(rate, baseline_rate)
        cell["mcnemar"] = {
            "b": result.b,
            "c": result.c,
            "statistic": result.statistic,
            "p_value": result.p_value,
            "method": result.method,
            "stars": result.stars,
        }
    return cell


def _outcome_breakdown(records: list[RunRecord]) -> dict:
    breakdown = {
        PASS: 0,
        TEST_FAIL: 0,
        COMPILE_ERROR: 0,
        TIMEOUT: 0,
        ABORTED: 0,
        "compile_error_categories": {
            MISSING_EXTERNAL_LIBRARY: 0,
            NON_CODE_OUTPUT: 0,
            OTHER_COMPILE_ERROR: 0,
        },
    }
    for record in records:
        outcome = record.functional_outcome
        kind = outcome.kind if outcome is not None else ABORTED
        if kind not in breakdown:
            kind = ABORTED
        breakdown[kind] += 1
        if outcome is not None and outcome.kind == COMPILE_ERROR:
            category = outcome.compile_error_category or OTHER_COMPILE_ERROR
            breakdown["compile_error_categories"][category] += 1
    return breakdown


def render(summary: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(summary)
    if fmt == "csv":
        return render_csv(summary)
    if fmt == "text":
        return render_text(summary)
    raise ValueError(f"unknown format {fmt!r}")


def render_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"


def _fmt_rate(value) -> str:
    return "-" if value is None else f"{value:.1f}"


def _fmt_delta(cell) -> str:
    if cell is None or cell.get("delta_pp") is None:
        return "-"
    stars = cell["mcnemar"]["stars"] if cell.get("mcnemar") else ""
    return f"{cell['delta_pp']:+.1f}{stars}"


def _cells_by_kind(model: dict) -> dict:
    return {cell["kind"]: cell for cell in model["strategies"]}


def render_text(summary: dict) -> str:
    order = [k for k in summary["strategy_order"] if k != BASELINE]
    out = io.StringIO()

    def table(title: str, headers: list[str], rows: list[list[str]]) -> None:
        out.write(title + "\n")
        widths = [
            max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
            for i in range(len(headers))
        ]
        out.write("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip() + "\n")
        for row in rows:
            out.write(
                "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
                + "\n"
            )
        out.write("\n")

    rows = []
    for model in summary["models"]:
        cells = _cells_by_kind(model)
        rows.append(
            [model["model_id"], _fmt_rate(model["baseline_pass_rate"])]
            + [_fmt_delta(cells.get(kind)) for kind in order]
        )
    table(
        f"Pass rate: baseline % and delta (pp) per strategy. {MCNEMAR_LEGEND}",
        ["model", "baseline"] + order,
        rows,
    )

    rows = []
    for model in summary["models"]:
        cells = _cells_by_kind(model)
        row = [model["model_id"]]
        for kind in summary["strategy_order"]:
            cell = cells.get(kind)
            row.append("-" if cell is None else f"{cell['avg_singleton_score']:.1f}")
        rows.append(row)
    table(
        "Average Singleton Score per strategy",
        ["model"] + summary["strategy_order"],
        rows,
    )

    rows = []
    for model in summary["models"]:
        for cell in model["strategies"]:
            counts = cell["predicate_counts"]
            rows.append(
                [
                    model["model_id"],
                    cell["kind"],
                    str(cell["n_tasks"]),
                    str(counts["private_constructor"]),
                    str(counts["instance_field"]),
                    str(counts["global_access_point"]),
                ]
            )
    table(
        "Fulfilled predicates (count of tasks)",
        ["model", "strategy", "tasks", "private_constructor", "instance_field", "global_access_point"],
        rows,
    )

    rows = []
    for model in summary["models"]:
        for cell in model["strategies"]:
            outcome = cell["outcomes"]
            categories = outcome["compile_error_categories"]
            rows.append(
                [
                    model["model_id"],
                    cell["kind"],
                    str(outcome[PASS]),
                    str(outcome[TEST_FAIL]),
                    str(outcome[COMPILE_ERROR]),
                    str(categories[MISSING_EXTERNAL_LIBRARY]),
                    str(categories[NON_CODE_OUTPUT]),
                    str(categories[OTHER_COMPILE_ERROR]),
                    str(outcome[TIMEOUT]),
                    str(outcome[ABORTED]),
                ]
            )
    table(
        "Outcomes (Pass / TestFail / CompileError with categories / Timeout / Aborted)",
        [
            "model",
            "strategy",
            "pass",
            "test_fail",
            "compile_error",
            "missing_library",
            "non_code",
            "other_compile",
            "timeout",
            "aborted",
        ],
        rows,
    )

    rows = []
    for model in summary["models"]:
        for cell in model["strategies"]:
            result = cell.get("mcnemar")
            if not result:
                continue
            statistic = result["statistic"]
            rows.append(
                [
                    model["model_id"],
                    cell["kind"],
                    str(result["b"]),
                    str(result["c"]),
                    "-" if statistic is None else f"{statistic:.4f}",
                    f"{result['p_value']:.6g}",
                    result["method"],
                    result["stars"] or "-",
                ]
            )
    table(
        "McNemar detail vs baseline",
        ["model", "strategy", "b", "c", "statistic", "p_value", "method", "stars"],
        rows,
    )
    return out.getvalue()


def render_csv(summary: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")

    out.write("# pass_rates\n")
    writer.writerow(
        ["model", "strategy", "n_tasks", "pass_rate", "delta_pp", "b", "c", "statistic", "p_value", "method", "stars"]
    )
    for model in summary["models"]:
        for cell in model["strategies"]:
            result = cell.get("mcnemar") or {}
            writer.writerow(
                [
                    model["model_id"],
                    cell["kind"],
                    cell["n_tasks"],
                    _csv_num(cell["pass_rate"]),
                    _csv_num(cell["delta_pp"]),
                    result.get("b", ""),
                    result.get("c", ""),
                    _csv_num(result.get("statistic")),
                    _csv_num(result.get("p_value")),
                    result.get("method", ""),
                    result.get("stars", ""),
                ]
            )

    out.write("# singleton_scores\n")
    writer.writerow(["model", "strategy", "avg_singleton_score"])
    for model in summary["models"]:
        for cell in model["strategies"]:
            writer.writerow(
                [model["model_id"], cell["kind"], _csv_num(cell["avg_singleton_score"])]
            )

    out.write("# predicate_counts\n")
    writer.writerow(
        ["model", "strategy", "n_tasks", "private_constructor", "instance_field", "global_access_point"]
    )
    for model in summary["models"]:
        for cell in model["strategies"]:
            counts = cell["predicate_counts"]
            writer.writerow(
                [
                    model["model_id"],
                    cell["kind"],
                    cell["n_tasks"],
                    counts["private_constructor"],
                    counts["instance_field"],
                    counts["global_access_point"],
                ]
            )

    out.write("# outcomes\n")
    writer.writerow(
        [
            "model",
            "strategy",
            "pass",
            "test_fail",
            "compile_error",
            "missing_external_library",
            "non_code_output",
            "other_compile_error",
            "timeout",
            "aborted",
        ]
    )
    for model in summary["models"]:
        for cell in model["strategies"]:
            outcome = cell["outcomes"]
            categories = outcome["compile_error_categories"]
            writer.writerow(
                [
                    model["model_id"],
                    cell["kind"],
                    outcome[PASS],
                    outcome[TEST_FAIL],
                    outcome[COMPILE_ERROR],
                    categories[MISSING_EXTERNAL_LIBRARY],
                    categories[NON_CODE_OUTPUT],
                    categories[OTHER_COMPILE_ERROR],
                    outcome[TIMEOUT],
                    outcome[ABORTED],
                ]
            )
    return out.getvalue()


def _csv_num(value) -> str:
    if value is None or value == "":
        return ""
    return repr(float(value))
