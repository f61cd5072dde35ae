"""Formulas of FL_e: variables, the constants 0, 1, bot, top and the binary
connectives ->, *, /\\ and \\/.

Formulas are immutable trees.  Derived connectives (equivalence, the
truncated implication ``(a -> b) /\\ 1`` and iterated products) are not
constructors of their own; the helpers below expand them into the basic
connectives so that every other module sees the real shape of a formula.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Mapping, Sequence, Union

VAR_PATTERN = re.compile(r"[a-z][A-Za-z0-9_']*\Z")


class ProfileError(ValueError):
    """A constant was used that the active language profile excludes."""


class PathError(LookupError):
    """An occurrence path does not resolve inside the formula."""


class ConstKind(enum.Enum):
    ZERO = "0"
    ONE = "1"
    BOT = "bot"
    TOP = "top"


class Op(enum.Enum):
    IMP = "->"
    FUSE = "*"
    AND = "/\\"
    OR = "\\/"


class Step(enum.IntEnum):
    LEFT = 0
    RIGHT = 1


Path = tuple  # tuple[Step, ...]; the empty tuple is the root occurrence


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __post_init__(self):
        if not VAR_PATTERN.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")

    def __str__(self):
        from .syntax import to_text
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Const:
    kind: ConstKind

    def __str__(self):
        return self.kind.value


@dataclass(frozen=True, slots=True)
class Bin:
    op: Op
    left: "Formula"
    right: "Formula"

    def __str__(self):
        from .syntax import to_text
        return to_text(self)


Formula = Union[Var, Const, Bin]

ZERO = Const(ConstKind.ZERO)
ONE = Const(ConstKind.ONE)
BOT = Const(ConstKind.BOT)
TOP = Const(ConstKind.TOP)


@dataclass(frozen=True)
class Profile:
    """Language profile; ``bounds`` admits the lattice constants bot and top."""

    bounds: bool = True

    def const(self, kind: ConstKind) -> Const:
        if kind in (ConstKind.BOT, ConstKind.TOP) and not self.bounds:
            raise ProfileError(f"constant {kind.value} is not in the language profile")
        return Const(kind)

    def check(self, phi: Formula) -> None:
        """Raise ProfileError if ``phi`` uses a constant outside the profile."""
        if self.bounds:
            return
        for node in iter_nodes(phi):
            if isinstance(node, Const):
                self.const(node.kind)


FULL = Profile(bounds=True)
BASIC = Profile(bounds=False)


def imp(a: Formula, b: Formula) -> Bin:
    return Bin(Op.IMP, a, b)


def fuse(a: Formula, b: Formula) -> Bin:
    return Bin(Op.FUSE, a, b)


def conj(a: Formula, b: Formula) -> Bin:
    return Bin(Op.AND, a, b)


def disj(a: Formula, b: Formula) -> Bin:
    return Bin(Op.OR, a, b)


def mk_product(fs: Sequence[Formula]) -> Formula:
    """Left-nested product of ``fs``; the empty product is 1."""
    if not fs:
        return ONE
    return reduce(fuse, fs)


def mk_power(phi: Formula, n: int) -> Formula:
    if n < 0:
        raise ValueError("negative exponent")
    return mk_product([phi] * n)


def mk_equiv(a: Formula, b: Formula) -> Formula:
    return conj(imp(a, b), imp(b, a))


def mk_sq_arrow(a: Formula, b: Formula) -> Formula:
    """The truncated implication (a -> b) /\\ 1."""
    return conj(imp(a, b), ONE)


def mk_conjunction(fs: Sequence[Formula]) -> Formula:
    """Left-nested lattice conjunction; empty means top."""
    return reduce(conj, fs) if fs else TOP


def mk_disjunction(fs: Sequence[Formula]) -> Formula:
    """Left-nested lattice disjunction; empty means bot."""
    return reduce(disj, fs) if fs else BOT


def product_factors(phi: Formula) -> list[Formula]:
    """Inverse of mk_product on left-nested products (1 gives no factors)."""
    if phi == ONE:
        return []
    out = []
    while isinstance(phi, Bin) and phi.op is Op.FUSE:
        out.append(phi.right)
        phi = phi.left
    out.append(phi)
    out.reverse()
    return out


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Bin):
        return (phi.left, phi.right)
    return ()


def iter_nodes(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Bin):
            stack.append(node.right)
            stack.append(node.left)


def node_count(phi: Formula) -> int:
    return sum(1 for _ in iter_nodes(phi))


def depth(phi: Formula) -> int:
    """Height of the tree; atoms have depth 0."""
    if isinstance(phi, Bin):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 0


def variables(phi: Formula) -> list[str]:
    """Variable names of ``phi``, sorted."""
    return sorted({n.name for n in iter_nodes(phi) if isinstance(n, Var)})


def subformula_at(phi: Formula, path: Path) -> Formula:
    node = phi
    for i, step in enumerate(path):
        if not isinstance(node, Bin):
            raise PathError(f"path {path_text(path)} leaves the formula at step {i}")
        node = node.left if step == Step.LEFT else node.right
    return node


def occurrences(phi: Formula, non_variable: bool = False) -> list[Path]:
    """All occurrence paths of ``phi`` in post-order (left subtree, right
    subtree, then the node itself).  With ``non_variable`` the occurrences of
    variables are dropped."""
    out: list[Path] = []

    def walk(node, path):
        if isinstance(node, Bin):
            walk(node.left, path + (Step.LEFT,))
            walk(node.right, path + (Step.RIGHT,))
        if not (non_variable and isinstance(node, Var)):
            out.append(path)

    walk(phi, ())
    return out


def path_text(path: Path) -> str:
    return "[" + ",".join("L" if s == Step.LEFT else "R" for s in path) + "]"


def substitute(sigma: Mapping[str, Formula], phi: Formula) -> Formula:
    """Simultaneous substitution; unmapped variables stay put."""
    if isinstance(phi, Var):
        return sigma.get(phi.name, phi)
    if isinstance(phi, Bin):
        left = substitute(sigma, phi.left)
        right = substitute(sigma, phi.right)
        if left is phi.left and right is phi.right:
            return phi
        return Bin(phi.op, left, right)
    return phi
