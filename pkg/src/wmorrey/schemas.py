"""JSON schemas for inputs (weights, spaces, families) and every CLI output."""

from __future__ import annotations

_NUM = {"oneOf": [{"type": "number"}, {"type": "string", "enum": ["inf", "-inf", "nan"]}]}
_NUM_OR_NULL = {"oneOf": [_NUM, {"type": "null"}]}
_TREND = {"type": "string", "enum": ["bounded", "growing", "inconclusive"]}

WEIGHT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "WeightDescriptor",
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"type": "string", "enum": ["constant", "power", "two_regime"]},
        "c": {"type": "number", "exclusiveMinimum": 0},
        "alpha": {"type": "number"},
        "beta": {"type": "number"},
        "dim": {"type": "integer", "minimum": 1},
        "scale": {"type": "number", "exclusiveMinimum": 0},
        "knee": {"type": "number", "exclusiveMinimum": 0},
        "center": {"type": "array", "items": {"type": "number"}},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "power"}}}, "then": {"required": ["alpha"]}},
        {"if": {"properties": {"kind": {"const": "two_regime"}}}, "then": {"required": ["alpha", "beta"]}},
    ],
}

SPACE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "SpaceSpec",
    "type": "object",
    "required": ["u", "p"],
    "properties": {"u": _NUM, "p": _NUM, "weight": WEIGHT},
}

FAMILY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "BallFamily",
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "center_range": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "n_centers": {"type": "integer", "minimum": 1},
        "radius_range": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                         "minItems": 2, "maxItems": 2},
        "n_radii": {"type": "integer", "minimum": 1},
        "refinement_levels": {"type": "integer", "minimum": 0},
        "zoom": {"type": "number", "exclusiveMinimum": 1},
        "anchors": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    },
}

_CONDITION = {
    "type": "object",
    "required": ["id", "lhs", "relation", "rhs", "holds"],
    "properties": {"id": {"type": "string"}, "lhs": _NUM, "rhs": _NUM,
                   "relation": {"type": "string", "enum": ["<", "<=", ">=", ">", "=="]},
                   "holds": {"type": "boolean"}},
}

_REPORT = {
    "type": "object",
    "required": ["expression_id", "sup_estimate", "trend"],
    "properties": {"expression_id": {"type": "string"}, "sup_estimate": _NUM, "trend": _TREND},
}

VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "EmbeddingVerdict",
    "type": "object",
    "required": ["verdict"],
    "properties": {
        "verdict": {"type": "string", "enum": ["embeds", "not_embeds", "inconclusive"]},
        "certificate": {"type": "object", "required": ["theorem", "conditions"],
                        "properties": {"conditions": {"type": "array", "items": _CONDITION}}},
        "witness": {"type": "object"},
        "failed_conditions": {"type": "array", "items": _CONDITION},
        "boundary": {"type": "boolean"},
        "reports": {"type": "array", "items": _REPORT},
    },
    "allOf": [
        {"if": {"properties": {"verdict": {"const": "embeds"}}}, "then": {"required": ["certificate"]}},
        {"if": {"properties": {"verdict": {"const": "not_embeds"}}}, "then": {"required": ["witness"]}},
        {"if": {"properties": {"verdict": {"const": "inconclusive"}}}, "then": {"required": ["failed_conditions"]}},
    ],
}

ERROR = {
    "type": "object",
    "required": ["error", "message"],
    "properties": {"error": {"type": "string", "enum": ["precondition", "divergence"]},
                   "message": {"type": "string"}},
}


def _obj(required: list[str], **props) -> dict:
    return {"$schema": "https://json-schema.org/draft/2020-12/schema", "type": "object",
            "required": required, "properties": props}


OUTPUTS = {
    "ap-check": _obj(["member", "p", "weight"], member={"type": "boolean"}, p=_NUM,
                     constant_estimate=_NUM, trend=_TREND),
    "critical-index": _obj(["r", "attained"], r=_NUM, attained={"type": "boolean"}),
    "doubling": _obj(["C", "D_lower", "centered_C"], C=_NUM, D_lower=_NUM, centered_C=_NUM),
    "reverse-holder": _obj(["r", "c"], r=_NUM_OR_NULL, c=_NUM_OR_NULL),
    "norm": _obj(["kind", "value"], kind={"type": "string"}, value=_NUM),
    "maximal": _obj(["operator", "points"], operator={"type": "string"},
                    points={"type": "array", "items": {"type": "object", "required": ["x", "value"]}}),
    "maximal-ratio": _obj(["operator", "ratio"], operator={"type": "string"}, ratio=_NUM),
    "embed-decide": VERDICT,
    "corpus-scan": _obj(["sup_ratio", "median_ratio", "table"], sup_ratio=_NUM, median_ratio=_NUM,
                        table={"type": "array"}),
    "paper-example": _obj(["alpha", "u", "morrey", "lebesgue", "truncated"], alpha=_NUM, u=_NUM),
    "power-identity": _obj(["r", "max_rel_err", "table"], r=_NUM, max_rel_err=_NUM, table={"type": "array"}),
    "product-check": _obj(["ratio", "u"], u=_NUM),
    "weight-equiv": _obj(["equivalent"], equivalent={"type": "boolean"}),
    "error": ERROR,
}

INPUTS = {"weight": WEIGHT, "space": SPACE, "family": FAMILY, "verdict": VERDICT}


def get(name: str) -> dict:
    if name in INPUTS:
        return INPUTS[name]
    if name in OUTPUTS:
        return OUTPUTS[name]
    raise KeyError(name)


def names() -> list[str]:
    return sorted(INPUTS) + sorted(OUTPUTS)
