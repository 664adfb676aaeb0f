"""qaut: resolver-based refinement relations over quantitative omega-automata."""

from .automata import (
    LassoWord,
    Run,
    Transition,
    ValueWitness,
    WeightedAutomaton,
    enumerate_lassos,
    run_value,
    sup_value,
    top_value,
    validate,
)
from .errors import BoundOverflow, FormatError, QautError, SizeGuardExceeded, UnsupportedMode

__version__ = "0.1.0"

__all__ = [
    "BoundOverflow",
    "FormatError",
    "LassoWord",
    "QautError",
    "Run",
    "SizeGuardExceeded",
    "Transition",
    "UnsupportedMode",
    "ValueWitness",
    "WeightedAutomaton",
    "enumerate_lassos",
    "run_value",
    "sup_value",
    "top_value",
    "validate",
    "__version__",
]
