"""Compilation of arbitrary axioms into deductively equivalent N_3 axioms by
naming subformula occurrences with extension variables.

Two translations are provided:

``translate_equiv``
    ``prod_psi ((p_psi <-> psi') /\\ 1)^n -> p_phi`` over all occurrences, where
    ``psi'`` is ``psi`` itself for atoms and ``p_a o p_b`` for ``psi = a o b``.

``translate_mono``
    ``prod_psi E+_psi -> p_phi`` over the non-variable occurrences, where
    ``E+_psi`` is a truncated implication whose direction follows the polarity
    of the occurrence.  Variables stand for themselves.

``sigma`` in a result maps each extension variable back to the subformula it
names; applying it to the output yields a formula equivalent to the input.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .formula import (
    ONE,
    Bin,
    Const,
    Formula,
    Op,
    Path,
    Step,
    Var,
    conj,
    imp,
    mk_equiv,
    mk_power,
    mk_product,
    mk_sq_arrow,
    occurrences,
    product_factors,
    subformula_at,
    variables,
)
from .polarity import Polarity, annotate
from .syntax import to_text


class Sharing(enum.Enum):
    PER_OCCURRENCE = "occurrence"
    PER_FORMULA = "formula"


class Mode(enum.Enum):
    EQUIV = "equiv"
    MONO = "mono"


@dataclass(frozen=True)
class ExtVarAllocation:
    mapping: Mapping[Path, str]
    sharing: Sharing
    aliases: Mapping[str, str] = field(default_factory=dict)

    def name(self, phi: Formula, path: Path) -> Formula:
        """The formula standing for the occurrence at ``path``: its extension
        variable, or the variable itself when none was allocated."""
        if path in self.mapping:
            return Var(self.mapping[path])
        node = subformula_at(phi, path)
        if isinstance(node, Var):
            return node
        raise KeyError(f"no extension variable for non-variable occurrence {path}")


@dataclass(frozen=True)
class TranslationResult:
    source: Formula
    output: Formula
    factors: tuple[Formula, ...]
    allocation: ExtVarAllocation
    sigma: Mapping[str, Formula]
    mode: Mode
    n: int | None = None


def allocate(phi: Formula, sharing: Sharing = Sharing.PER_OCCURRENCE,
             include_variables: bool = False) -> ExtVarAllocation:
    """Assign fresh names ``x0, x1, ...`` to occurrences in post-order.

    Names that already occur in ``phi`` are skipped.  Aliases mirror the
    subscripted ``p_psi`` notation, with a disambiguating index when the same
    subformula is named more than once.
    """
    taken = set(variables(phi))
    paths = occurrences(phi, non_variable=not include_variables)
    counter = 0
    mapping: dict[Path, str] = {}
    by_formula: dict[Formula, str] = {}
    named: list[tuple[str, str]] = []
    for path in paths:
        sub = subformula_at(phi, path)
        if sharing is Sharing.PER_FORMULA and sub in by_formula:
            mapping[path] = by_formula[sub]
            continue
        while f"x{counter}" in taken:
            counter += 1
        name = f"x{counter}"
        counter += 1
        mapping[path] = name
        by_formula.setdefault(sub, name)
        named.append((name, to_text(sub)))
    totals = Counter(text for _, text in named)
    seen: Counter = Counter()
    aliases = {}
    for name, text in named:
        if totals[text] > 1:
            aliases[name] = f"p[{text},{seen[text]}]"
            seen[text] += 1
        else:
            aliases[name] = f"p[{text}]"
    return ExtVarAllocation(mapping, sharing, aliases)


def _shape(phi: Formula, path: Path, alloc: ExtVarAllocation) -> Formula:
    """psi itself for atoms, ``p_a o p_b`` for ``psi = a o b``."""
    node = subformula_at(phi, path)
    if isinstance(node, Bin):
        return Bin(node.op, alloc.name(phi, path + (Step.LEFT,)),
                   alloc.name(phi, path + (Step.RIGHT,)))
    return node


def extension_axiom_equiv(phi: Formula, path: Path, alloc: ExtVarAllocation) -> Formula:
    return mk_equiv(Var(alloc.mapping[path]), _shape(phi, path, alloc))


def extension_axiom_mono(phi: Formula, path: Path, polarity: Polarity,
                         alloc: ExtVarAllocation) -> Formula:
    if isinstance(subformula_at(phi, path), Var):
        raise ValueError("variables stand for themselves and get no extension axiom")
    own = Var(alloc.mapping[path])
    shape = _shape(phi, path, alloc)
    if polarity is Polarity.POSITIVE:
        return mk_sq_arrow(shape, own)
    return mk_sq_arrow(own, shape)


def _sigma(phi: Formula, alloc: ExtVarAllocation) -> dict[str, Formula]:
    return {name: subformula_at(phi, path) for path, name in alloc.mapping.items()}


def translate_equiv(phi: Formula, n: int = 1,
                    sharing: Sharing = Sharing.PER_OCCURRENCE) -> TranslationResult:
    if n < 1:
        raise ValueError("n must be at least 1")
    alloc = allocate(phi, sharing, include_variables=True)
    factors = tuple(
        mk_power(conj(extension_axiom_equiv(phi, path, alloc), ONE), n)
        for path in occurrences(phi)
    )
    output = imp(mk_product(list(factors)), Var(alloc.mapping[()]))
    return TranslationResult(phi, output, factors, alloc, _sigma(phi, alloc), Mode.EQUIV, n)


def translate_mono(phi: Formula, sharing: Sharing = Sharing.PER_OCCURRENCE) -> TranslationResult:
    alloc = allocate(phi, sharing, include_variables=False)
    pols = annotate(phi)
    factors = tuple(
        extension_axiom_mono(phi, path, pols[path], alloc)
        for path in occurrences(phi, non_variable=True)
    )
    output = imp(mk_product(list(factors)), alloc.name(phi, ()))
    return TranslationResult(phi, output, factors, alloc, _sigma(phi, alloc), Mode.MONO)


def translate(phi: Formula, mode: Mode = Mode.MONO, n: int = 1,
              sharing: Sharing = Sharing.PER_OCCURRENCE) -> TranslationResult:
    if mode is Mode.EQUIV:
        return translate_equiv(phi, n, sharing)
    return translate_mono(phi, sharing)


def inverse_sigma(result: TranslationResult) -> dict[str, Formula]:
    return dict(result.sigma)


# -- alpha-equivalence ------------------------------------------------------

def _match(f, g, fresh_f, fresh_g, fwd, bwd):
    """Structural match of ``f`` against ``g`` extending the bijection
    ``fwd``/``bwd`` between fresh names.  Returns the extended maps or None."""
    if isinstance(f, Var) and isinstance(g, Var):
        a, b = f.name, g.name
        if (a in fresh_f) != (b in fresh_g):
            return None
        if a not in fresh_f:
            return (fwd, bwd) if a == b else None
        if a in fwd:
            return (fwd, bwd) if fwd[a] == b else None
        if b in bwd:
            return None
        fwd = dict(fwd)
        bwd = dict(bwd)
        fwd[a] = b
        bwd[b] = a
        return fwd, bwd
    if isinstance(f, Const) or isinstance(g, Const):
        return (fwd, bwd) if f == g else None
    if isinstance(f, Bin) and isinstance(g, Bin) and f.op is g.op:
        res = _match(f.left, g.left, fresh_f, fresh_g, fwd, bwd)
        if res is None:
            return None
        return _match(f.right, g.right, fresh_f, fresh_g, *res)
    return None


def alpha_equivalent(f: Formula, g: Formula, fresh_f, fresh_g,
                     commute_factors: bool = False) -> dict[str, str] | None:
    """Decide whether ``f`` and ``g`` are equal up to a bijective renaming of
    the fresh variables (``fresh_f`` in ``f`` onto ``fresh_g`` in ``g``); all
    other variables must coincide.  Returns the renaming, or None.

    With ``commute_factors``, both formulas are read as ``prod -> c`` and the
    antecedent factors may be matched in any order.
    """
    fresh_f, fresh_g = set(fresh_f), set(fresh_g)
    if not commute_factors:
        res = _match(f, g, fresh_f, fresh_g, {}, {})
        return None if res is None else res[0]
    if not (isinstance(f, Bin) and isinstance(g, Bin) and f.op is g.op and f.op is Op.IMP):
        return None
    start = _match(f.right, g.right, fresh_f, fresh_g, {}, {})
    if start is None:
        return None
    fs = product_factors(f.left)
    gs = product_factors(g.left)
    if len(fs) != len(gs):
        return None

    def search(i, used, fwd, bwd):
        if i == len(fs):
            return fwd
        for j, gj in enumerate(gs):
            if j in used:
                continue
            res = _match(fs[i], gj, fresh_f, fresh_g, fwd, bwd)
            if res is not None:
                found = search(i + 1, used | {j}, *res)
                if found is not None:
                    return found
        return None

    return search(0, frozenset(), *start)
