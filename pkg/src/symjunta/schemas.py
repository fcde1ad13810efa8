"""JSON Schemas for the machine-readable CLI outputs."""

_INT_OR_NULL = {"type": ["integer", "null"]}
_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

SPECTRUM = {
    "type": "object",
    "required": ["k", "scale"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "scale": {"type": "integer"},
        "levels": {"type": "array", "items": {"type": "integer"}},
        "coefficients": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["subset", "scaled_coeff"],
                "properties": {
                    "subset": {"type": "array", "items": {"type": "integer"}},
                    "scaled_coeff": {"type": "integer"},
                },
            },
        },
    },
}

VERIFICATION_REPORT = {
    "type": "object",
    "required": ["k", "max_min_order", "histogram", "argmax_functions", "counterexamples"],
    "properties": {
        "k": {"type": "integer"},
        "bound": {"type": ["number", "null"]},
        "max_min_order": {"type": "integer"},
        "histogram": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "argmax_functions": {"type": "array", "items": {"type": "string", "pattern": "^[01]+$"}},
        "counterexamples": {"type": "array", "items": {"type": "string", "pattern": "^[01]+$"}},
        "counterexample_count": {"type": "integer"},
        "functions_checked": {"type": "integer"},
    },
}

VERIFY_OUTPUT = {
    "type": "object",
    "required": ["bound", "ok", "per_k"],
    "properties": {
        "bound": {"type": "string"},
        "ok": {"type": "boolean"},
        "per_k": {"type": "array", "items": VERIFICATION_REPORT},
    },
}

MIN_ORDER_SINGLE = {
    "type": "object",
    "required": ["function", "k", "min_order", "exceptional", "levels"],
    "properties": {
        "function": {"type": "string", "pattern": "^[01]+$"},
        "k": {"type": "integer"},
        "min_order": _INT_OR_NULL,
        "exceptional": {"type": "boolean"},
        "levels": {"type": "array", "items": {"type": "integer"}},
    },
}

LEARN_RESULT = {
    "type": "object",
    "required": ["class", "relevant", "core", "examples_used"],
    "properties": {
        "class": {"enum": ["constant-0", "constant-1", "parity", "parity-complement", "general-symmetric"]},
        "relevant": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "core": {"type": "string", "pattern": "^[01]+$"},
        "examples_used": {"type": "integer", "minimum": 0},
    },
}

ORACLE_CONFIG = {
    "type": "object",
    "required": ["n", "k", "core", "seed"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "core": {"type": "string", "pattern": "^[01]+$"},
        "seed": {"type": "integer"},
        "delta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    },
}

CERTIFICATE = {
    "type": "object",
    "required": ["N", "k", "q", "r", "M", "t", "s"],
    "properties": {key: {"type": "integer"} for key in ("N", "k", "q", "r", "M", "t", "s", "h", "ell")},
}

_MISMATCH = {
    "type": ["object", "null"],
    "required": ["s", "nu", "mu"],
    "properties": {"s": {"type": "integer"}, "nu": _RATIONAL, "mu": _RATIONAL},
}

MOMENT_REPORT = {
    "type": "object",
    "required": ["r", "matched_up_to", "first_mismatch"],
    "properties": {
        "r": {"type": "integer"},
        "matched_up_to": {"type": "integer"},
        "first_mismatch": _MISMATCH,
        "power_matched_up_to": {"type": "integer"},
        "power_first_mismatch": _MISMATCH,
    },
}

PRIMES = {
    "type": "object",
    "required": ["count", "primes"],
    "properties": {
        "count": {"type": "integer"},
        "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
}
