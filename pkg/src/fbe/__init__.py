"""Function evaluation by binary digit recurrences and the matching
reversible circuits."""

from .expansion import (
    DigitString,
    FunctionSpec,
    builtin_specs,
    error_budget,
    fbe_expand,
    fbe_expand_trace,
    get_spec,
    ifbe_evaluate,
    ifbe_evaluate_trace,
    oracle_eval,
    parse_digits,
)
from .fixedpoint import (
    DomainError,
    FixedOverflow,
    FixedPoint,
    FixedPointError,
    Layout,
    WidthMismatch,
    from_value,
    make,
    parse,
    render,
)
from .circuit import Circuit, CircuitError, Gate, Register, export_text, import_text
from .synth import SynthConfig, SynthesizedCircuit, synthesize

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitError", "DigitString", "DomainError", "FixedOverflow",
    "FixedPoint", "FixedPointError", "FunctionSpec", "Gate", "Layout",
    "Register", "SynthConfig", "SynthesizedCircuit", "WidthMismatch",
    "builtin_specs", "error_budget", "export_text", "fbe_expand",
    "fbe_expand_trace", "from_value", "get_spec", "ifbe_evaluate",
    "ifbe_evaluate_trace", "import_text", "make", "oracle_eval",
    "parse", "parse_digits", "render", "synthesize",
]
