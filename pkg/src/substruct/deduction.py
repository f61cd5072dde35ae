"""Hilbert-style derivations with modus ponens and ``a / a /\\ 1``, and the
local deduction theorem: a derivation of ``psi`` from ``Gamma`` plus ``phi``
that uses ``phi`` n times yields ``(phi /\\ 1)^n -> psi`` from ``Gamma``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Union

from .formula import (
    FULL,
    ONE,
    Bin,
    Const,
    Formula,
    Op,
    Profile,
    Var,
    conj,
    imp,
    mk_power,
)
from .syntax import ParseError, parse, to_text


class Rejected(ValueError):
    """A derivation step is not justified."""

    def __init__(self, node: "Node", where: str, reason: str):
        self.node = node
        self.where = where
        self.reason = reason
        super().__init__(f"node {where}: {reason}")


class DerivationFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Premise:
    formula: Formula
    label: str | None = None


@dataclass(frozen=True, eq=False)
class Axiom:
    formula: Formula
    label: str | None = None


@dataclass(frozen=True, eq=False)
class MP:
    """From a proof of ``chi`` and a proof of ``chi -> psi``, ``psi``."""
    left: "Node"
    right: "Node"
    label: str | None = None


@dataclass(frozen=True, eq=False)
class Adj:
    """From a proof of ``chi``, ``chi /\\ 1``."""
    child: "Node"
    label: str | None = None


Node = Union[Premise, Axiom, MP, Adj]


# -- axiom base ---------------------------------------------------------------

@dataclass(frozen=True)
class Schema:
    name: str
    formula: Formula
    bounds: bool = False


def match(schema: Formula, phi: Formula, binding: dict | None = None) -> dict[str, Formula] | None:
    """One-sided matching: a substitution s with s(schema) == phi, or None."""
    binding = {} if binding is None else binding
    if isinstance(schema, Var):
        bound = binding.get(schema.name)
        if bound is None:
            binding[schema.name] = phi
            return binding
        return binding if bound == phi else None
    if isinstance(schema, Const):
        return binding if schema == phi else None
    if not (isinstance(phi, Bin) and phi.op is schema.op):
        return None
    if match(schema.left, phi.left, binding) is None:
        return None
    return match(schema.right, phi.right, binding)


@dataclass(frozen=True)
class AxiomBase:
    schemata: tuple[Schema, ...]
    source: str

    def instance_of(self, phi: Formula) -> Schema | None:
        for s in self.schemata:
            if match(s.formula, phi) is not None:
                return s
        return None

    def formulas(self) -> list[Formula]:
        return [s.formula for s in self.schemata]


_SCHEMA_LINE = re.compile(r"(?P<name>[\w']+)\s*(?P<tag>\[bounds\])?\s*:\s*(?P<body>.+)")


def parse_base(text: str, source: str = "<text>", profile: Profile = FULL) -> AxiomBase:
    schemata = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _SCHEMA_LINE.fullmatch(line)
        if m is None:
            raise DerivationFormatError(f"{source}:{lineno}: expected '<name>: <formula>'")
        bounds = m.group("tag") is not None
        if bounds and not profile.bounds:
            continue
        schemata.append(Schema(m.group("name"), parse(m.group("body"), profile), bounds))
    return AxiomBase(tuple(schemata), source)


def default_base(profile: Profile = FULL) -> AxiomBase:
    text = resources.files("substruct").joinpath("data/fle_axioms.txt").read_text()
    return parse_base(text, "fle_axioms.txt", profile)


# -- checking -----------------------------------------------------------------

def _where(node, path):
    return node.label if node.label is not None else "/" + "".join(path)


def yields(node: Node) -> Formula:
    """The formula a node claims to prove (no checking)."""
    if isinstance(node, (Premise, Axiom)):
        return node.formula
    if isinstance(node, Adj):
        return conj(yields(node.child), ONE)
    right = yields(node.right)
    if isinstance(right, Bin) and right.op is Op.IMP:
        return right.right
    raise Rejected(node, _where(node, ""), "right premise of mp is not an implication")


def check(d: Node, gamma: Iterable[Formula], base: AxiomBase) -> Formula:
    """Verify ``d`` as a derivation from ``gamma`` and return its conclusion.

    Children are checked before their parent, left before right; the first
    unjustified node raises ``Rejected``.
    """
    gamma = set(gamma)

    def walk(node, path):
        if isinstance(node, Premise):
            if node.formula not in gamma:
                raise Rejected(node, _where(node, path), f"{to_text(node.formula)} is not a premise")
            return node.formula
        if isinstance(node, Axiom):
            if base.instance_of(node.formula) is None:
                raise Rejected(node, _where(node, path),
                               f"{to_text(node.formula)} is not an instance of any axiom schema")
            return node.formula
        if isinstance(node, Adj):
            return conj(walk(node.child, path + "0"), ONE)
        if isinstance(node, MP):
            chi = walk(node.left, path + "0")
            impl = walk(node.right, path + "1")
            if not (isinstance(impl, Bin) and impl.op is Op.IMP and impl.left == chi):
                raise Rejected(node, _where(node, path),
                               f"mp: {to_text(impl)} is not of the form {to_text(chi)} -> _")
            return impl.right
        raise TypeError(f"not a derivation node: {node!r}")

    return walk(d, "")


def premise_use_count(d: Node, phi: Formula) -> int:
    if isinstance(d, Premise):
        return int(d.formula == phi)
    if isinstance(d, Axiom):
        return 0
    if isinstance(d, Adj):
        return premise_use_count(d.child, phi)
    return premise_use_count(d.left, phi) + premise_use_count(d.right, phi)


@dataclass(frozen=True)
class DeductionResult:
    formula: Formula
    n: int
    conclusion: Formula
    steps: tuple[tuple[str, int, Formula], ...]  # (node, exponent, (phi /\ 1)^n -> yield)


def deduction_transform(d: Node, gamma: Iterable[Formula], phi: Formula,
                        base: AxiomBase) -> DeductionResult:
    """Discharge the premise ``phi``.

    Exponents follow the proof of the local deduction theorem: an occurrence
    of ``phi`` as a premise counts 1, other leaves 0, modus ponens adds the
    exponents of its two subproofs and adjunction keeps its child's.
    """
    gamma = set(gamma)
    psi = check(d, gamma | {phi}, base)
    guard = conj(phi, ONE)
    steps = []

    def walk(node, path):
        if isinstance(node, Premise):
            n = int(node.formula == phi)
        elif isinstance(node, Axiom):
            n = 0
        elif isinstance(node, Adj):
            n = walk(node.child, path + "0")
        else:
            n = walk(node.left, path + "0") + walk(node.right, path + "1")
        steps.append((_where(node, path), n, imp(mk_power(guard, n), yields(node))))
        return n

    n = walk(d, "")
    assert n == premise_use_count(d, phi)
    return DeductionResult(imp(mk_power(guard, n), psi), n, psi, tuple(steps))


# -- derivation files ---------------------------------------------------------

_LINE = re.compile(r"(?P<id>[\w.']+)\s*:\s*(?P<rule>premise|axiom|mp|adj)\s+(?P<rest>.+)")


def parse_derivation(text: str, profile: Profile = FULL) -> Node:
    """Read the line format ``<id>: premise|axiom <formula>``,
    ``<id>: mp <id> <id>``, ``<id>: adj <id>``; the last line is the conclusion."""
    nodes: dict[str, Node] = {}
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE.fullmatch(line)
        if m is None:
            raise DerivationFormatError(f"line {lineno}: cannot read {line!r}")
        ident, rule, rest = m.group("id"), m.group("rule"), m.group("rest").strip()
        if ident in nodes:
            raise DerivationFormatError(f"line {lineno}: duplicate id {ident}")
        if rule in ("premise", "axiom"):
            try:
                phi = parse(rest, profile)
            except ParseError as exc:
                raise DerivationFormatError(f"line {lineno}: {exc}") from None
            node = Premise(phi, ident) if rule == "premise" else Axiom(phi, ident)
        else:
            refs = rest.split()
            if len(refs) != (2 if rule == "mp" else 1):
                raise DerivationFormatError(f"line {lineno}: {rule} takes {2 if rule == 'mp' else 1} ids")
            missing = [r for r in refs if r not in nodes]
            if missing:
                raise DerivationFormatError(f"line {lineno}: node {ident} refers to unknown id {missing[0]}")
            if rule == "mp":
                node = MP(nodes[refs[0]], nodes[refs[1]], ident)
            else:
                node = Adj(nodes[refs[0]], ident)
        nodes[ident] = node
        last = node
    if last is None:
        raise DerivationFormatError("empty derivation")
    return last


def premises_of(d: Node) -> list[Formula]:
    """Distinct premise formulas in left-to-right order."""
    out: list[Formula] = []

    def walk(node):
        if isinstance(node, Premise):
            if node.formula not in out:
                out.append(node.formula)
        elif isinstance(node, Adj):
            walk(node.child)
        elif isinstance(node, MP):
            walk(node.left)
            walk(node.right)

    walk(d)
    return out
