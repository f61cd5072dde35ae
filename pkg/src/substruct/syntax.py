"""Concrete syntax.

Grammar, loosest binding first::

    formula := disj ( ('->' | '<->') formula )?      right associative
    disj    := conj ( '\\/' conj )*                  left associative
    conj    := prod ( '/\\' prod )*
    prod    := atom ( '*' atom )*
    atom    := VAR | '0' | '1' | 'bot' | 'top' | '(' formula ')'

``a <-> b`` is read as ``(a -> b) /\\ (b -> a)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    FULL,
    Bin,
    Const,
    ConstKind,
    Formula,
    Op,
    Profile,
    Var,
    mk_equiv,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|\\/|/\\|\*|\(|\))
  | (?P<word>[A-Za-z0-9_']+)
    """,
    re.VERBOSE,
)

_CONST_WORDS = {"0": ConstKind.ZERO, "1": ConstKind.ONE, "bot": ConstKind.BOT, "top": ConstKind.TOP}
_VAR = re.compile(r"[a-z][A-Za-z0-9_']*\Z")


@dataclass
class _Tok:
    kind: str  # 'op', 'var', 'const', 'end'
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup == "op":
            toks.append(_Tok("op", m.group(), pos))
        elif m.lastgroup == "word":
            word = m.group()
            if word in _CONST_WORDS:
                toks.append(_Tok("const", word, pos))
            elif _VAR.match(word):
                toks.append(_Tok("var", word, pos))
            else:
                raise ParseError(f"invalid identifier {word!r}", pos, text)
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, profile: Profile):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.profile = profile

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Tok):
        raise ParseError(message, tok.pos, self.text)

    def formula(self) -> Formula:
        left = self.disj()
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("->", "<->"):
            self.take()
            right = self.formula()
            return Bin(Op.IMP, left, right) if tok.text == "->" else mk_equiv(left, right)
        return left

    def _left_assoc(self, op: Op, sub):
        node = sub()
        while self.peek().kind == "op" and self.peek().text == op.value:
            self.take()
            node = Bin(op, node, sub())
        return node

    def disj(self) -> Formula:
        return self._left_assoc(Op.OR, self.conj)

    def conj(self) -> Formula:
        return self._left_assoc(Op.AND, self.prod)

    def prod(self) -> Formula:
        return self._left_assoc(Op.FUSE, self.atom)

    def atom(self) -> Formula:
        tok = self.take()
        if tok.kind == "var":
            return Var(tok.text)
        if tok.kind == "const":
            try:
                return self.profile.const(_CONST_WORDS[tok.text])
            except ValueError as exc:
                raise ParseError(str(exc), tok.pos, self.text) from None
        if tok.kind == "op" and tok.text == "(":
            inner = self.formula()
            close = self.take()
            if close.text != ")":
                self.error("expected ')'", close)
            return inner
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {tok.text!r}", tok)


def parse(text: str, profile: Profile = FULL) -> Formula:
    p = _Parser(text, profile)
    phi = p.formula()
    tok = p.peek()
    if tok.kind != "end":
        p.error(f"unexpected token {tok.text!r}", tok)
    return phi


_PREC = {Op.IMP: 1, Op.OR: 2, Op.AND: 3, Op.FUSE: 4}
_ATOM_PREC = 5


def to_text(phi: Formula) -> str:
    """Print with the fewest parentheses the grammar allows."""
    text, _ = _show(phi)
    return text


def _show(phi: Formula) -> tuple[str, int]:
    if isinstance(phi, Var):
        return phi.name, _ATOM_PREC
    if isinstance(phi, Const):
        return phi.kind.value, _ATOM_PREC
    prec = _PREC[phi.op]
    left, lp = _show(phi.left)
    right, rp = _show(phi.right)
    if phi.op is Op.IMP:
        # right associative
        if lp <= prec:
            left = f"({left})"
        if rp < prec:
            right = f"({right})"
    else:
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
    return f"{left} {phi.op.value} {right}", prec


def pretty(phi: Formula) -> str:
    """Unicode rendering for human-facing output."""
    symbols = {"->": "→", "*": "·", "/\\": "∧", "\\/": "∨", "bot": "⊥", "top": "⊤"}
    out = []
    for tok in tokenize(to_text(phi))[:-1]:
        out.append(symbols.get(tok.text, tok.text))
    text = " ".join(out)
    return text.replace("( ", "(").replace(" )", ")")
