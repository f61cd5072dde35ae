"""Formula classification in the substructural hierarchy, translation into
N3 axioms via extension variables, and finite residuated-lattice checking."""

from .formula import BOT, ONE, TOP, ZERO, Bin, Const, ConstKind, Formula, Op, Var
from .hierarchy import HierarchyLevel, classify, classify_oracle, normalize_n, normalize_p
from .polarity import Polarity, annotate
from .syntax import ParseError, parse, to_text
from .translate import Mode, Sharing, alpha_equivalent, translate, translate_equiv, translate_mono

__all__ = [
    "BOT", "ONE", "TOP", "ZERO", "Bin", "Const", "ConstKind", "Formula", "Op", "Var",
    "HierarchyLevel", "classify", "classify_oracle", "normalize_n", "normalize_p",
    "Polarity", "annotate", "ParseError", "parse", "to_text",
    "Mode", "Sharing", "alpha_equivalent", "translate", "translate_equiv", "translate_mono",
]
