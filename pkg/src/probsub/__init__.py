"""Probabilistic submeasures: DDFs, aggregators, pseudo-additions and axiom checkers."""

from .report import VERSION as __version__
from .report import FormulaError, InputError, Report, Verdict

__all__ = ["__version__", "FormulaError", "InputError", "Report", "Verdict"]
