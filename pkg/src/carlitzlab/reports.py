"""Serialization of result objects to JSON, CSV, and plain text.

Every JSON report opens with the versioned schema tag, the subcommand that
produced it, and the seed, so identical configurations reproduce identical
bytes.  Wall-clock timings are deliberately left out of the serialized
forms for the same reason.  CSV is offered only for the two genuinely
tabular reports.
"""

from __future__ import annotations

import json

from .counting import CountTable, GrowthReport, WeilVerification, ZetaData
from .curves import CurveSearchTrace, PlaneCurve
from .exceptional import ExceptionalityReport, PipelineReport, ScanResult

SCHEMA = "carlitz-lab/1"


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _payload_exceptionality(r: ExceptionalityReport, evidence: bool) -> dict:
    out = {
        "kind": "cohen-evidence" if evidence else "exceptionality",
        "field": r.field,
        "poly": r.poly,
        "degree": r.degree,
        "verdict": r.verdict,
        "gcd_d_qm1": r.gcd_d_qm1,
        "permutation_levels": [[n, ok] for n, ok in r.permutation_levels],
        "normalization_notes": list(r.normalization_notes),
    }
    if evidence:
        out["x_minus_y_multiplicity"] = r.x_minus_y_multiplicity
        out["factors"] = [{
            "factor": e.factor,
            "multiplicity": e.multiplicity,
            "absolutely_irreducible": e.absolutely_irreducible,
            "witness_degree": e.witness_degree,
            "witness_field": e.witness_field,
        } for e in r.factors]
    return out


def _payload_curve(curve: PlaneCurve, trace: CurveSearchTrace | None) -> dict:
    cert = {"status": curve.certificate.status}
    if curve.certificate.witness is not None:
        w = curve.certificate.witness
        cert["witness"] = {"field": w.field, "point": list(w.point)}
    out = {
        "kind": "curve",
        "form": str(curve.form),
        "field": curve.form.ctx.spec,
        "degree": curve.degree,
        "genus": curve.genus,
        "certificate": cert,
    }
    if trace is not None:
        out["trace"] = {
            "a": trace.a,
            "b": trace.b,
            "field": trace.field,
            "x0": trace.x0,
            "forbidden_values": list(trace.forbidden_values),
            "rejected": [list(r) for r in trace.rejected],
            "notes": list(trace.notes),
        }
    return out


def _row_dict(row) -> dict:
    return {"n": row.n, "q_n": row.q_n, "N": row.N, "A": row.A,
            "X0": row.X0, "X1": row.X1, "hw_bound": row.hw_bound}


def _payload_count(t: CountTable) -> dict:
    return {
        "kind": "count-table",
        "curve": t.curve,
        "field": t.field,
        "genus": t.genus,
        "rows": [_row_dict(r) for r in t.rows],
    }


def _payload_zeta(z: ZetaData, weil: WeilVerification | None) -> dict:
    out = {
        "kind": "zeta",
        "genus": z.genus,
        "q": z.q,
        "coeffs": list(z.coeffs),
        "counts_used": list(z.counts_used),
        "alphas": [_complex_pair(a) for a in z.alphas],
        "alpha_error_bound": z.alpha_error_bound,
        "functional_equation_residual": z.functional_equation_residual,
        "max_weil_deviation": z.max_weil_deviation,
    }
    if weil is not None:
        out["weil_checks"] = [{"name": c.name, "ok": c.ok, "detail": c.detail}
                              for c in weil.checks]
        out["weil_all_ok"] = weil.all_ok
    return out


def _payload_growth(g: GrowthReport) -> dict:
    return {
        "kind": "growth",
        "curve": g.curve,
        "field": g.field,
        "genus": g.genus,
        "m_threshold": g.m_threshold,
        "n_threshold": g.n_threshold,
        "pattern": g.pattern,
        "note": g.note,
        "rows": [{"n": r.n, "q_n": r.q_n, "A": r.A, "is_zero": r.is_zero,
                  "hw_ceiling": r.hw_ceiling} for r in g.rows],
        "trailing_min_nonzero": list(g.trailing_min_nonzero),
    }


def _payload_scan(s: ScanResult) -> dict:
    return {
        "kind": "scan",
        "q_list": list(s.q_list),
        "d_list": list(s.d_list),
        "total_tested": s.total_tested,
        "exceptional": [list(e) for e in s.exceptional],
        "violations": [list(v) for v in s.violations],
        "audit": {
            "filter_rejected_retested": s.audit.filter_rejected_retested,
            "filter_agreements": s.audit.filter_agreements,
            "nonmonic_samples": s.audit.nonmonic_samples,
            "nonmonic_agreements": s.audit.nonmonic_agreements,
        },
        "partial": s.partial,
    }


def _payload_pipeline(p: PipelineReport) -> dict:
    return {
        "kind": "pipeline",
        "exceptionality": _payload_exceptionality(p.exceptionality, True),
        "curve": p.curve,
        "curve_field": p.curve_field,
        "genus": p.genus,
        "search": {"a": p.search_a, "b": p.search_b},
        "counts": _payload_count(p.table),
        "levels": [{"n": lv.n, "q_n": lv.q_n, "N": lv.N, "A": lv.A,
                    "X0": lv.X0, "X1": lv.X1, "permuting": lv.permuting,
                    "identities_ok": lv.identities_ok} for lv in p.levels],
        "all_identities_ok": p.all_identities_ok,
    }


def json_payload(report, extra=None) -> dict:
    """Dispatch a result object to its JSON payload dict."""
    if isinstance(report, ExceptionalityReport):
        return _payload_exceptionality(report, evidence=bool(extra))
    if isinstance(report, CountTable):
        return _payload_count(report)
    if isinstance(report, ZetaData):
        return _payload_zeta(report, extra)
    if isinstance(report, GrowthReport):
        return _payload_growth(report)
    if isinstance(report, ScanResult):
        return _payload_scan(report)
    if isinstance(report, PipelineReport):
        return _payload_pipeline(report)
    if isinstance(report, PlaneCurve):
        return _payload_curve(report, extra)
    if isinstance(report, dict):
        return report
    raise ValueError(f"no JSON payload for {type(report).__name__}")


def to_json(report, *, command: str, seed: int, extra=None) -> str:
    body = {"schema": SCHEMA, "command": command, "seed": seed}
    body.update(json_payload(report, extra))
    return json.dumps(body, indent=2) + "\n"


def _csv_cell(v) -> str:
    return "" if v is None else str(v)


def to_csv(report) -> str:
    if isinstance(report, CountTable):
        lines = ["n,q_n,N,A,X0,X1,hw_bound"]
        for r in report.rows:
            lines.append(",".join(_csv_cell(v) for v in (
                r.n, r.q_n, r.N, r.A, r.X0, r.X1, r.hw_bound)))
        return "\n".join(lines) + "\n"
    if isinstance(report, GrowthReport):
        lines = ["n,q_n,A,is_zero,hw_ceiling"]
        for r in report.rows:
            lines.append(",".join(_csv_cell(v) for v in (
                r.n, r.q_n, r.A, r.is_zero, r.hw_ceiling)))
        return "\n".join(lines) + "\n"
    raise ValueError(f"{type(report).__name__} does not serialize to csv")


def _text_lines(payload: dict, indent: str = "") -> list[str]:
    out = []
    for key, val in payload.items():
        if isinstance(val, dict):
            out.append(f"{indent}{key}:")
            out.extend(_text_lines(val, indent + "  "))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            out.append(f"{indent}{key}:")
            for item in val:
                flat = "  ".join(f"{k}={_csv_cell(v)}"
                                 for k, v in item.items())
                out.append(f"{indent}  {flat}")
        else:
            out.append(f"{indent}{key}: {_csv_cell(val)}")
    return out


def to_text(report, *, command: str, seed: int, extra=None) -> str:
    payload = json_payload(report, extra)
    head = f"# {SCHEMA}  {command}  seed={seed}"
    return "\n".join([head] + _text_lines(payload)) + "\n"


def emit(report, fmt: str, *, command: str, seed: int, extra=None) -> str:
    """Render a report in the requested format; raises ValueError on a
    format the report does not support."""
    if fmt == "json":
        return to_json(report, command=command, seed=seed, extra=extra)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "text":
        return to_text(report, command=command, seed=seed, extra=extra)
    raise ValueError(f"unknown format {fmt!r}")
