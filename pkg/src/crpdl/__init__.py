"""CRPDL over message sequence charts: evaluation, MSC automata and bounded verification."""

from .logic import eval_global, eval_local, parse_global, parse_local, parse_path
from .msc import Action, Msc, encode_wb, linearizations, msc_from_word, parse_word

__version__ = "0.1.0"

__all__ = [
    "Action", "Msc", "encode_wb", "eval_global", "eval_local", "linearizations",
    "msc_from_word", "parse_global", "parse_local", "parse_path", "parse_word",
]
