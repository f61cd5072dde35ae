"""Positive and negative occurrences of subformulas."""

from __future__ import annotations

import enum

from .formula import Bin, Formula, Op, Path, Step, Var, subformula_at


class Polarity(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def flip(self) -> "Polarity":
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE


def annotate(phi: Formula) -> dict[Path, Polarity]:
    """Polarity of every occurrence in ``phi``, keyed by path.

    The root is positive; the antecedent of an implication flips the
    polarity, every other argument position keeps it.
    """
    out: dict[Path, Polarity] = {}
    stack = [(phi, (), Polarity.POSITIVE)]
    while stack:
        node, path, pol = stack.pop()
        out[path] = pol
        if isinstance(node, Bin):
            left_pol = pol.flip() if node.op is Op.IMP else pol
            stack.append((node.right, path + (Step.RIGHT,), pol))
            stack.append((node.left, path + (Step.LEFT,), left_pol))
    return out


def variable_polarities(phi: Formula) -> dict[str, set[Polarity]]:
    """For each variable, the set of polarities its occurrences carry."""
    out: dict[str, set[Polarity]] = {}
    for path, pol in annotate(phi).items():
        node = subformula_at(phi, path)
        if isinstance(node, Var):
            out.setdefault(node.name, set()).add(pol)
    return out
