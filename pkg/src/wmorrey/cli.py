"""Command-line front end.

Exit codes: 0 success, 2 precondition error, 3 divergence where a finite value was
requested, 64 usage error (unknown flag, missing argument).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from typing import Any, Sequence

import numpy as np

from . import schemas
from .core import DEFAULT_CONFIG, INF, DivergenceError, PreconditionError, SpaceSpec, Weight
from .embeddings import decide_spaces
from .functions import function_from_json
from .lab import (
    corpus_generate,
    paper_example_check,
    power_identity_check,
    product_inequality_check,
    ratio_scan,
    weight_equivalence_check,
)
from .maximal import hl_maximal, lp_operator_ratio, morrey_operator_ratio, weighted_maximal
from .muckenhoupt import (
    a1_check,
    ap_constant_estimate,
    ap_membership_analytic,
    critical_index,
    doubling_constant_estimate,
    reverse_holder_search,
)
from .norms import lebesgue_norm, morrey_norm, morrey_norm_cubes, weak_lebesgue_norm
from .search import BallFamily

EXIT_OK, EXIT_PRECONDITION, EXIT_DIVERGENCE, EXIT_USAGE = 0, 2, 3, 64

GLOBAL_DEFAULTS = {"dim": 1, "tol": None, "family": None, "out": "json", "seed": 0}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# ------------------------------------------------------------------ output

def _round(x: Any) -> Any:
    """12 significant digits; non-finite floats as strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_round(v) for v in x.tolist()]
    try:
        return _round(float(x))
    except (TypeError, ValueError):
        return str(x)


def _emit(payload: dict, out: str, rows: list[dict] | None = None, stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    payload = _round(payload)
    if out == "csv":
        table = _round(rows) if rows is not None else [_flatten(payload)]
        if not table:
            return
        fields = list(dict.fromkeys(k for row in table for k in _flatten(row)))
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in table:
            writer.writerow({k: v if not isinstance(v, (dict, list)) else json.dumps(v) for k, v in _flatten(row).items()})
        stream.write(buf.getvalue())
    else:
        stream.write(json.dumps(payload, sort_keys=False) + "\n")


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and k not in ("function", "weight", "witness", "region"):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


# ------------------------------------------------------------------ argument helpers

def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        with open(text) as fh:
            return json.load(fh)


def _number(text: str) -> float:
    return INF if text.strip().lower() in ("inf", "infinity") else float(text)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--dim", type=int, default=None, help="ambient dimension (default 1)")
    g.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")
    g.add_argument("--family", default=None, help="ball family JSON file")
    g.add_argument("--out", choices=("json", "csv"), default=None)
    g.add_argument("--seed", type=int, default=None, help="corpus seed")
    g.add_argument("--config", default=None, help="JSON file with defaults for the global options")
    return p


def _settings(args) -> dict:
    conf = dict(GLOBAL_DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            conf.update(json.load(fh))
    for key in GLOBAL_DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            conf[key] = val
    cfg = DEFAULT_CONFIG if conf["tol"] is None else replace(DEFAULT_CONFIG, rel_tol=float(conf["tol"]))
    family = None
    if conf["family"]:
        with open(conf["family"]) as fh:
            family = BallFamily.from_json(json.load(fh), dim=int(conf["dim"]))
    return {"dim": int(conf["dim"]), "cfg": cfg, "family": family, "out": conf["out"], "seed": int(conf["seed"])}


def _weight(arg, dim: int) -> Weight:
    if arg is None:
        return Weight.constant(1, dim)
    return Weight.from_json(_json_arg(arg) if isinstance(arg, str) else arg, dim=dim)


def _space(arg, dim: int) -> SpaceSpec:
    data = _json_arg(arg)
    if "weight" not in data:
        data = dict(data, weight={"kind": "constant", "c": 1})
    return SpaceSpec.from_json(data, dim=dim)


def _points(text: str) -> np.ndarray:
    if ":" in text:
        lo, hi, n = text.split(":")
        return np.linspace(float(lo), float(hi), int(n))
    return np.array([float(v) for v in text.split(",") if v.strip()])


# ------------------------------------------------------------------ commands

def cmd_ap_check(args, s):
    w = _weight(args.weight, s["dim"])
    p = _number(args.p)
    out = {"member": ap_membership_analytic(w, p), "p": p, "weight": w.to_json()}
    if not args.no_estimate:
        res = a1_check(w, s["family"], s["cfg"]) if p == 1 else ap_constant_estimate(w, p, s["family"], s["cfg"])
        out.update(constant_estimate=res.estimate, trend=res.trend, witness=res.witness)
    return out, None


def cmd_critical_index(args, s):
    return critical_index(_weight(args.weight, s["dim"])).to_json(), None


def cmd_doubling(args, s):
    return doubling_constant_estimate(_weight(args.weight, s["dim"]), s["family"], s["cfg"]).to_json(), None


def cmd_reverse_holder(args, s):
    res = reverse_holder_search(_weight(args.weight, s["dim"]), s["family"], s["cfg"])
    return ({"r": None, "c": None} if res is None else res.to_json()), None


def cmd_norm(args, s):
    f = function_from_json(_json_arg(args.function), s["dim"])
    w = _weight(args.weight, f.dim)
    p = _number(args.p)
    if args.kind == "lebesgue":
        return {"kind": "lebesgue", "p": p, "value": lebesgue_norm(f, p, w, cfg=s["cfg"])}, None
    if args.kind == "weak":
        res = weak_lebesgue_norm(f, p, s["cfg"])
        if not math.isfinite(res.value):
            raise DivergenceError("weak norm is infinite")
        return {"kind": "weak", "p": p, **res.to_json()}, None
    if args.u is None:
        raise PreconditionError("Morrey norms need --u")
    space = SpaceSpec(_number(args.u), p, w)
    fn = morrey_norm if args.kind == "morrey" else morrey_norm_cubes
    rep = fn(f, space, s["family"], s["cfg"])
    if rep.divergent or not math.isfinite(rep.value):
        raise DivergenceError("Morrey expression diverges on some ball")
    out = {"kind": args.kind, "u": space.u, "p": p, **rep.to_json()}
    if not args.trace:
        out.pop("trace", None)
    return out, None


def cmd_maximal(args, s):
    f = function_from_json(_json_arg(args.function), s["dim"])
    w = _weight(args.weight, f.dim)
    if args.ratio:
        if args.p is None:
            raise PreconditionError("ratios need --p")
        if args.u is not None:
            r = morrey_operator_ratio(args.operator, f, SpaceSpec(_number(args.u), _number(args.p), w),
                                      s["family"], s["cfg"])
            return {"operator": args.operator, "space": "morrey", "u": _number(args.u), "p": _number(args.p),
                    "ratio": r}, None
        r = lp_operator_ratio(args.operator, f, _number(args.p), w, args.L, s["cfg"])
        return {"operator": args.operator, "space": "lebesgue", "p": _number(args.p), "L": args.L, "ratio": r}, None
    x = _points(args.points)
    vals = hl_maximal(f, x, cfg=s["cfg"]) if args.operator == "hl" else weighted_maximal(f, w, x, cfg=s["cfg"])
    rows = [{"x": float(a), "value": float(b)} for a, b in zip(x, vals)]
    return {"operator": args.operator, "points": rows}, rows


def cmd_embed(args, s):
    src, tgt = _space(args.source, s["dim"]), _space(args.target, s["dim"])
    return decide_spaces(src, tgt, s["family"], s["cfg"], evidence=args.evidence).to_json(), None


def cmd_lab(args, s):
    cfg, fam = s["cfg"], s["family"]
    if args.task == "paper-example":
        return paper_example_check(args.alpha, family=fam, cfg=cfg), None
    if args.task == "weight-equiv":
        return weight_equivalence_check(_weight(args.weight, s["dim"]), _weight(args.weight2, s["dim"])), None
    if args.task == "corpus-scan":
        src, tgt = _space(args.source, 1), _space(args.target, 1)
        corpus = corpus_generate(args.count, seed=s["seed"], weight=src.weight, p=max(float(src.p), float(tgt.p)))
        scan = ratio_scan(src, tgt, corpus, fam, cfg)
        rows = [{k: v for k, v in r.items()} for r in scan.table]
        return scan.to_json(), rows
    if args.task == "power-identity":
        space = _space(args.space, 1)
        corpus = corpus_generate(args.count, seed=s["seed"], weight=space.weight, p=float(space.p))
        rows = []
        for i, f in enumerate(corpus):
            res = power_identity_check(f, space, args.r, fam, cfg)
            rows.append({"index": i, "function": f.to_json(), **res})
        return {"r": args.r, "max_rel_err": max(r["rel_err"] for r in rows), "table": rows}, rows
    if args.task == "product-check":
        funcs = [None if d is None else function_from_json(d, 1) for d in _json_arg(args.functions)]
        u_list = [float(v) for v in args.u_list.split(",")]
        p_list = [float(v) for v in args.p_list.split(",")]
        return product_inequality_check(funcs, u_list, p_list, _weight(args.weight, 1), float(args.p), fam, cfg), None
    raise PreconditionError(f"unknown lab task {args.task!r}")


def cmd_schema(args, s):
    if args.name is None:
        return {"schemas": schemas.names()}, None
    return schemas.get(args.name), None


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="wmorrey", description="Weighted Morrey spaces, Muckenhoupt weights and embeddings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=fn, schema=name)
        return sp

    for name in ("ap-check", "ap-constant"):
        sp = add(name, cmd_ap_check, "A_p membership of a weight, with a sampled constant")
        sp.add_argument("--weight", required=True, help="weight descriptor JSON")
        sp.add_argument("--p", required=True)
        sp.add_argument("--no-estimate", action="store_true", help="skip the sampled constant")
        sp.set_defaults(schema="ap-check")

    for name, fn, text in (("critical-index", cmd_critical_index, "critical index r_w = inf{r : w in A_r}"),
                           ("doubling", cmd_doubling, "doubling constant and the derived D"),
                           ("reverse-holder", cmd_reverse_holder, "largest reverse Hoelder exponent on a grid")):
        add(name, fn, text).add_argument("--weight", required=True)

    sp = add("norm", cmd_norm, "Lebesgue, weak Lebesgue or Morrey norm of a test function")
    sp.add_argument("kind", choices=("lebesgue", "weak", "morrey", "morrey-cubes"))
    sp.add_argument("--function", required=True, help="test function JSON")
    sp.add_argument("--p", required=True)
    sp.add_argument("--u", default=None)
    sp.add_argument("--weight", default=None)
    sp.add_argument("--trace", action="store_true", help="include the refinement trace")

    sp = add("maximal", cmd_maximal, "sampled maximal functions and operator norm ratios")
    sp.add_argument("operator", choices=("hl", "weighted"))
    sp.add_argument("--function", required=True)
    sp.add_argument("--weight", default=None)
    sp.add_argument("--points", default="-3:3:13", help="comma list or lo:hi:n")
    sp.add_argument("--ratio", action="store_true", help="operator ratio instead of point values")
    sp.add_argument("--p", default=None)
    sp.add_argument("--u", default=None, help="Morrey ratio when given, else L_p(w)")
    sp.add_argument("--L", type=float, default=10.0, help="truncation of the L_p(w) integral")

    sp = add("embed-decide", cmd_embed, "decide M_source -> M_target")
    sp.add_argument("--source", required=True, help="SpaceSpec JSON")
    sp.add_argument("--target", required=True, help="SpaceSpec JSON")
    sp.add_argument("--evidence", action="store_true", help="attach sampled supremum reports")

    sp = add("lab", cmd_lab, "empirical checks")
    sp.add_argument("task", choices=("corpus-scan", "paper-example", "power-identity", "product-check",
                                     "weight-equiv"))
    sp.add_argument("--source")
    sp.add_argument("--target")
    sp.add_argument("--space")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--alpha", type=float, default=-0.25)
    sp.add_argument("--r", type=float, default=2.0)
    sp.add_argument("--functions", help="JSON list; null for the constant factor 1")
    sp.add_argument("--u-list")
    sp.add_argument("--p-list")
    sp.add_argument("--p")
    sp.add_argument("--weight")
    sp.add_argument("--weight2")

    sp = add("schema", cmd_schema, "print a published JSON schema")
    sp.add_argument("name", nargs="?", choices=schemas.names())
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = "json"
    try:
        settings = _settings(args)
        out = settings["out"]
        payload, rows = args.func(args, settings)
    except DivergenceError as exc:
        _emit({"error": "divergence", "message": str(exc)}, "json")
        return EXIT_DIVERGENCE
    except (PreconditionError, ValueError, KeyError, OSError) as exc:
        _emit({"error": "precondition", "message": str(exc)}, "json")
        return EXIT_PRECONDITION
    _emit(payload, out, rows)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
