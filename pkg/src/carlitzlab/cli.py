"""Command-line surface: one batch subcommand per pipeline stage.

Exit codes: 0 success, 1 mathematical negative (a not-exceptional verdict,
coprimality violations, failed Weil checks), 2 usage or parse errors,
3 budget or cap exhaustion.  Options resolve as flag > config file > \
environment > built-in default; every JSON and text report records the
schema version and the seed so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys

from .counting import DEFAULT_COUNT_CAP, defect_sequence, growth_report, \
    verify_weil, zeta_from_counts
from .curves import PlaneCurve, TernaryForm, construct_paper_curve
from .errors import CapError, InconsistentCountsError, ParseError
from .exceptional import DEFAULT_M_SCAN, carlitz_wan_scan, \
    is_exceptional_cohen, is_permutation, run_paper_pipeline
from .fields import extension_of
from .reports import emit
from .textforms import parse_field_spec, parse_ternary, parse_uni

ENV_COUNT_CAP = "CARLITZ_LAB_COUNT_CAP"
ENV_MAX_EXT = "CARLITZ_LAB_MAX_EXT"

_INT_KEYS = {"levels", "seed", "m_scan", "workers", "cap", "max_ext",
             "extra", "audit", "m_threshold", "n_threshold"}
_FLOAT_KEYS = {"time_budget"}


def _read_config(path: str) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError("expected key=value", line, 0)
            key, _, val = line.partition("=")
            cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def _resolve(args, cfg: dict, key: str, default):
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in cfg:
        raw = cfg[key]
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        return raw
    return default


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def _write_out(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        return
    tmp = f"{out_path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, out_path)


def _emit(args, cfg, report, *, extra=None, plottable=None) -> None:
    fmt = _resolve(args, cfg, "format", "json")
    seed = _resolve(args, cfg, "seed", 0)
    out = _resolve(args, cfg, "out", None)
    _write_out(emit(report, fmt, command=args.command, seed=seed,
                    extra=extra), out)
    plot = _resolve(args, cfg, "plot", None)
    if plot is not None:
        from .plotting import plot_for
        target = plottable if plottable is not None else report
        plot_for(target, plot)


def _field(args, cfg, cap: int):
    return parse_field_spec(_resolve(args, cfg, "field", None) or "",
                            max_order=cap)


def _curve_from_args(args, cfg, ctx) -> PlaneCurve:
    text = _resolve(args, cfg, "curve", None) or ""
    terms = parse_ternary(text, ctx)
    if not terms:
        raise ParseError("empty curve", text, 0)
    degree = max(sum(e) for e in terms)
    return PlaneCurve.from_form(TernaryForm(ctx, degree, terms))


# -- subcommand bodies --------------------------------------------------------


def _cmd_permcheck(args, cfg, caps) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    f = parse_uni(_resolve(args, cfg, "poly", None) or "", ctx)
    levels = _resolve(args, cfg, "levels", DEFAULT_M_SCAN)
    verdicts = []
    for n in range(1, levels + 1):
        K = ctx if n == 1 else extension_of(ctx, n,
                                            max_order=caps["count_cap"])
        verdicts.append([n, is_permutation(f, K)])
    _emit(args, cfg, {"kind": "permcheck", "field": ctx.spec,
                      "poly": str(f), "levels": verdicts})
    return 0


def _cmd_exceptional(args, cfg, caps, evidence: bool) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    f = parse_uni(_resolve(args, cfg, "poly", None) or "", ctx)
    rep = is_exceptional_cohen(
        f, m_scan=_resolve(args, cfg, "m_scan", DEFAULT_M_SCAN),
        seed=_resolve(args, cfg, "seed", 0),
        level_budget=caps["count_cap"])
    _emit(args, cfg, rep, extra=evidence)
    if evidence:
        return 0
    return 0 if rep.verdict == "exceptional" else 1


def _cmd_curve(args, cfg, caps) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    f = parse_uni(_resolve(args, cfg, "poly", None) or "", ctx)
    curve, trace = construct_paper_curve(
        f, max_ext_degree=_resolve(args, cfg, "max_ext", caps["max_ext"]))
    _emit(args, cfg, curve, extra=trace)
    return 0


def _cmd_count(args, cfg, caps) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    curve = _curve_from_args(args, cfg, ctx)
    table = defect_sequence(
        curve, _resolve(args, cfg, "levels", 4),
        cap=_resolve(args, cfg, "cap", caps["count_cap"]),
        workers=_resolve(args, cfg, "workers", 1))
    _emit(args, cfg, table)
    return 0


def _cmd_zeta(args, cfg, caps) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    curve = _curve_from_args(args, cfg, ctx)
    if curve.certificate.status != "smooth":
        sys.stderr.write("curve is not smooth; zeta extraction needs the "
                         "smooth point counts\n")
        return 1
    cap = _resolve(args, cfg, "cap", caps["count_cap"])
    workers = _resolve(args, cfg, "workers", 1)
    g = curve.genus
    table = defect_sequence(curve, max(g, 1), cap=cap, workers=workers)
    zeta = zeta_from_counts(curve, [r.N for r in table.rows[:max(g, 1)]])
    weil = verify_weil(curve, zeta,
                       extra=_resolve(args, cfg, "extra", g),
                       cap=cap, workers=workers)
    _emit(args, cfg, zeta, extra=weil)
    return 0 if weil.all_ok else 1


def _cmd_growth(args, cfg, caps) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    curve = _curve_from_args(args, cfg, ctx)
    rep = growth_report(
        curve, _resolve(args, cfg, "levels", 6),
        cap=_resolve(args, cfg, "cap", caps["count_cap"]),
        workers=_resolve(args, cfg, "workers", 1),
        m_threshold=_resolve(args, cfg, "m_threshold", None),
        n_threshold=_resolve(args, cfg, "n_threshold", None))
    _emit(args, cfg, rep)
    return 0


def _cmd_pipeline(args, cfg, caps) -> int:
    ctx = _field(args, cfg, caps["count_cap"])
    f = parse_uni(_resolve(args, cfg, "poly", None) or "", ctx)
    try:
        rep = run_paper_pipeline(
            f, n_max=_resolve(args, cfg, "levels", DEFAULT_M_SCAN),
            seed=_resolve(args, cfg, "seed", 0),
            cap=_resolve(args, cfg, "cap", caps["count_cap"]),
            max_ext_degree=_resolve(args, cfg, "max_ext", caps["max_ext"]),
            workers=_resolve(args, cfg, "workers", 1))
    except ValueError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    _emit(args, cfg, rep)
    return 0 if rep.all_identities_ok else 1


def _parse_int_list(text: str) -> list[int]:
    """Accepts "2,3,4" and "2..5" (inclusive range)."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _cmd_scan(args, cfg, caps) -> int:
    qs = _parse_int_list(_resolve(args, cfg, "q", None) or "")
    ds = _parse_int_list(_resolve(args, cfg, "d", None) or "")
    if not qs or not ds:
        sys.stderr.write("scan needs --q and --d ranges\n")
        return 2
    res = carlitz_wan_scan(
        qs, ds, seed=_resolve(args, cfg, "seed", 0),
        audit_per_range=_resolve(args, cfg, "audit", 2),
        time_budget=_resolve(args, cfg, "time_budget", None))
    _emit(args, cfg, res)
    if res.violations:
        return 1
    if res.partial:
        return 3
    return 0


# -- dispatcher ---------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--format", choices=("json", "csv", "text"))
    sp.add_argument("--out")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--config")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carlitz-lab",
        description="Exceptional polynomials over finite fields: "
                    "classification, curve counts, and scan harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("permcheck", help="permutation verdicts on the "
                        "first few extensions")
    sp.add_argument("--field", required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--levels", type=int)
    _add_common(sp)

    for name, help_text in (
            ("exceptional", "classify f; exit 1 when not exceptional"),
            ("cohen-evidence", "classification with full factor evidence")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--field", required=True)
        sp.add_argument("--poly", required=True)
        sp.add_argument("--m-scan", dest="m_scan", type=int)
        _add_common(sp)

    sp = sub.add_parser("curve", help="search (a, b) and certify the "
                        "smooth plane model")
    sp.add_argument("--field", required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--max-ext", dest="max_ext", type=int)
    _add_common(sp)

    for name, help_text in (
            ("count", "point counts and defect table along the tower"),
            ("growth", "defect growth report")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--field", required=True)
        sp.add_argument("--curve", required=True)
        sp.add_argument("--levels", type=int)
        sp.add_argument("--cap", type=int)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--plot", metavar="PNG")
        if name == "growth":
            sp.add_argument("--m-threshold", dest="m_threshold", type=int)
            sp.add_argument("--n-threshold", dest="n_threshold", type=int)
        _add_common(sp)

    sp = sub.add_parser("zeta", help="numerator of the zeta function plus "
                        "Weil checks")
    sp.add_argument("--field", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--extra", type=int,
                    help="brute-force prediction checks beyond genus")
    sp.add_argument("--cap", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--plot", metavar="PNG")
    _add_common(sp)

    sp = sub.add_parser("pipeline", help="classify f, build the curve, "
                        "verify the count identities")
    sp.add_argument("--field", required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--levels", type=int)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--max-ext", dest="max_ext", type=int)
    sp.add_argument("--workers", type=int)
    _add_common(sp)

    sp = sub.add_parser("scan", help="exhaustive coprimality scan; exit 1 "
                        "on violations")
    sp.add_argument("--q", help="field orders, e.g. 2,3,4")
    sp.add_argument("--d", help="degrees, e.g. 2..5 or 2,3,5")
    sp.add_argument("--audit", type=int)
    sp.add_argument("--time-budget", dest="time_budget", type=float)
    _add_common(sp)
    return parser


_HANDLERS = {
    "permcheck": _cmd_permcheck,
    "curve": _cmd_curve,
    "count": _cmd_count,
    "zeta": _cmd_zeta,
    "growth": _cmd_growth,
    "pipeline": _cmd_pipeline,
    "scan": _cmd_scan,
}


def cmd_dispatch(argv) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    caps = {
        "count_cap": _env_int(ENV_COUNT_CAP, DEFAULT_COUNT_CAP),
        "max_ext": _env_int(ENV_MAX_EXT, 4),
    }
    try:
        cfg = _read_config(args.config) if args.config else {}
        if args.command == "exceptional":
            return _cmd_exceptional(args, cfg, caps, evidence=False)
        if args.command == "cohen-evidence":
            return _cmd_exceptional(args, cfg, caps, evidence=True)
        return _HANDLERS[args.command](args, cfg, caps)
    except ParseError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    except InconsistentCountsError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except CapError as exc:
        sys.stderr.write(f"{exc}\n")
        return 3
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"{exc}\n")
        return 2


def main() -> None:
    sys.exit(cmd_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
