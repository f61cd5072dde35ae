"""Finite pointed commutative residuated lattices and validity checking.

A formula is valid in an algebra when ``1 <= v(phi)`` (equivalently
``1 /\\ v(phi) = 1``) for every valuation ``v``.  Evaluation over many
valuations at once goes through a small compiled program of table lookups
on numpy arrays; ``evaluate`` is the plain recursive evaluator used to
re-check every counterexample the fast path reports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from . import _scan
from .formula import FULL, Const, ConstKind, Formula, Op, Profile, Var, variables
from .syntax import parse, to_text

DEFAULT_SEED = 0xF13
DEFAULT_BUDGET = 10**6
DEFAULT_SAMPLES = 10**4


class AlgebraError(ValueError):
    """Tables do not describe a pointed commutative residuated lattice."""


class EvaluationError(ValueError):
    pass


class CatalogFormatError(ValueError):
    pass


class FinitePCRL:
    """A finite pointed commutative residuated lattice on ``0..size-1``.

    Built from the order and the monoid operation; meet, join and the
    residual are derived and every defining law is checked on construction.
    """

    def __init__(self, leq, fuse, unit: int, zero: int, bounds: bool = True,
                 provenance: tuple[int, int] | None = None):
        leq = np.array(leq, dtype=bool)
        fuse = np.array(fuse, dtype=np.intp)
        n = len(leq)
        if n < 1 or leq.shape != (n, n) or fuse.shape != (n, n):
            raise AlgebraError("tables must be square and non-empty")
        if not (0 <= unit < n and 0 <= zero < n):
            raise AlgebraError("unit/zero out of range")
        if fuse.min() < 0 or fuse.max() >= n:
            raise AlgebraError("fuse table has out-of-range entries")
        self.size = n
        self.leq = leq
        self.fuse = fuse
        self.unit = int(unit)
        self.zero = int(zero)
        self.provenance = provenance
        self._check_order()
        self.meet = self._bound(lower=True)
        self.join = self._bound(lower=False)
        self._check_monoid()
        self.imp = self._residual()
        self._check_residuation()
        bottom = [x for x in range(n) if leq[x].all()][0]
        top = [x for x in range(n) if leq[:, x].all()][0]
        self.bot = bottom if bounds else None
        self.top = top if bounds else None
        for arr in (self.leq, self.fuse, self.meet, self.join, self.imp):
            arr.setflags(write=False)

    def _check_order(self):
        L = self.leq
        if not L.diagonal().all():
            raise AlgebraError("order is not reflexive")
        if (L & L.T & ~np.eye(self.size, dtype=bool)).any():
            raise AlgebraError("order is not antisymmetric")
        # L[x,y] and L[y,z] imply L[x,z]
        if ((L.astype(int) @ L.astype(int) > 0) & ~L).any():
            raise AlgebraError("order is not transitive")

    def _bound(self, lower: bool):
        n, L = self.size, self.leq
        out = np.zeros((n, n), dtype=np.intp)
        for x in range(n):
            for y in range(n):
                if lower:
                    cands = [z for z in range(n) if L[z, x] and L[z, y]]
                    best = [z for z in cands if all(L[c, z] for c in cands)]
                else:
                    cands = [z for z in range(n) if L[x, z] and L[y, z]]
                    best = [z for z in cands if all(L[z, c] for c in cands)]
                if not best:
                    raise AlgebraError(f"no {'meet' if lower else 'join'} for {x},{y}")
                out[x, y] = best[0]
        return out

    def _check_monoid(self):
        F, u, n = self.fuse, self.unit, self.size
        if (F != F.T).any():
            raise AlgebraError("fuse is not commutative")
        if (F[u] != np.arange(n)).any():
            raise AlgebraError("unit is not an identity")
        # (x*y)*z == x*(y*z)
        if (F[F[:, :, None], np.arange(n)[None, None, :]] != F[np.arange(n)[:, None, None], F[None, :, :]]).any():
            raise AlgebraError("fuse is not associative")

    def _residual(self):
        n, L, F = self.size, self.leq, self.fuse
        out = np.zeros((n, n), dtype=np.intp)
        for y in range(n):
            for z in range(n):
                cands = [x for x in range(n) if L[F[x, y], z]]
                best = [m for m in cands if all(L[c, m] for c in cands)]
                if not best:
                    raise AlgebraError(f"no residual {y} -> {z}")
                out[y, z] = best[0]
        return out

    def _check_residuation(self):
        L, F, I = self.leq, self.fuse, self.imp
        x = np.arange(self.size)[:, None, None]
        y = np.arange(self.size)[None, :, None]
        z = np.arange(self.size)[None, None, :]
        if (L[x, I[y, z]] != L[F[x, y], z]).any():
            raise AlgebraError("residuation law fails")

    def residuation_holds(self) -> bool:
        """Direct check of ``x <= y -> z  iff  x * y <= z`` on all triples."""
        n = self.size
        return all(
            bool(self.leq[x, self.imp[y, z]]) == bool(self.leq[self.fuse[x, y], z])
            for x in range(n) for y in range(n) for z in range(n)
        )

    def constant(self, kind: ConstKind) -> int:
        if kind is ConstKind.ONE:
            return self.unit
        if kind is ConstKind.ZERO:
            return self.zero
        value = self.bot if kind is ConstKind.BOT else self.top
        if value is None:
            raise EvaluationError(f"constant {kind.value} is not in this algebra's profile")
        return value

    @cached_property
    def scan_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Operation tables stacked in opcode order, and the designated set."""
        tables = np.stack([self.imp, self.fuse, self.meet, self.join]).astype(np.int64)
        return tables, np.ascontiguousarray(self.leq[self.unit])

    def is_designated(self, x: int) -> bool:
        return bool(self.leq[self.unit, x])

    def table(self, op: Op) -> np.ndarray:
        return {Op.IMP: self.imp, Op.FUSE: self.fuse, Op.AND: self.meet, Op.OR: self.join}[op]

    def key(self) -> tuple:
        return (self.size, tuple(self.leq.ravel().tolist()), tuple(self.fuse.ravel().tolist()),
                self.unit, self.zero)

    def __eq__(self, other):
        return isinstance(other, FinitePCRL) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FinitePCRL(size={self.size}, unit={self.unit}, zero={self.zero}, provenance={self.provenance})"


# -- evaluation -------------------------------------------------------------

def evaluate(A: FinitePCRL, valuation: Mapping[str, int], phi: Formula) -> int:
    """Homomorphic evaluation of ``phi`` in ``A``."""
    if isinstance(phi, Var):
        try:
            return int(valuation[phi.name])
        except KeyError:
            raise EvaluationError(f"valuation misses variable {phi.name}") from None
    if isinstance(phi, Const):
        return A.constant(phi.kind)
    return int(A.table(phi.op)[evaluate(A, valuation, phi.left), evaluate(A, valuation, phi.right)])


_OPCODES = {Op.IMP: 0, Op.FUSE: 1, Op.AND: 2, Op.OR: 3}


class Program:
    """Straight-line program evaluating several formulas with shared
    subterms.  Slots ``0..len(var_names)-1`` hold the variables."""

    def __init__(self, formulas: Sequence[Formula], var_names: Sequence[str] | None = None):
        if var_names is None:
            var_names = sorted({v for f in formulas for v in variables(f)})
        self.var_names = list(var_names)
        self.slots: dict[Formula, int] = {Var(v): i for i, v in enumerate(self.var_names)}
        self.code: list[tuple] = []  # (slot, kind, a, b)
        self.outputs = [self._emit(f) for f in formulas]

    def _emit(self, phi):
        if phi in self.slots:
            return self.slots[phi]
        if isinstance(phi, Var):
            raise EvaluationError(f"variable {phi.name} not declared")
        if isinstance(phi, Const):
            instr = ("const", phi.kind, None)
        else:
            instr = ("op", _OPCODES[phi.op], (self._emit(phi.left), self._emit(phi.right)))
        slot = len(self.slots)
        self.slots[phi] = slot
        self.code.append((slot,) + instr)
        return slot

    @cached_property
    def _operands(self):
        m = len(self.code)
        ops = np.empty(m, dtype=np.int64)
        lhs = np.zeros(m, dtype=np.int64)
        rhs = np.zeros(m, dtype=np.int64)
        consts = []
        for i, (slot, kind, a, b) in enumerate(self.code):
            if kind == "const":
                ops[i] = _scan.OP_CONST
                consts.append((i, a))
            else:
                ops[i] = a
                lhs[i], rhs[i] = b
        return ops, lhs, rhs, consts

    def arrays(self, A: FinitePCRL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Opcode, left and right operand arrays with constants resolved in ``A``."""
        ops, lhs, rhs, consts = self._operands
        if consts:
            lhs = lhs.copy()
            for i, kind in consts:
                lhs[i] = A.constant(kind)
        return ops, lhs, rhs

    def dependencies(self) -> list[int]:
        """For every code entry, the highest variable slot it depends on (-1 if none)."""
        hi = list(range(len(self.var_names)))
        for slot, kind, a, b in self.code:
            hi.append(-1 if kind == "const" else max(hi[b[0]], hi[b[1]]))
        return hi[len(self.var_names):]

    @cached_property
    def dirty_lists(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR lists: entry k holds the code entries depending on some slot >= k."""
        hi = self.dependencies()
        starts = [0]
        dirty: list[int] = []
        for k in range(len(self.var_names)):
            dirty.extend(i for i, h in enumerate(hi) if h >= k)
            starts.append(len(dirty))
        return np.array(starts, dtype=np.int64), np.array(dirty, dtype=np.int64)

    @classmethod
    def for_scan(cls, formulas: Sequence[Formula]) -> "Program":
        """Variables ordered so that the fastest-changing slots of an
        exhaustive scan feed the fewest nodes."""
        probe = cls(formulas)
        n = len(probe.var_names)
        reach = [set() for _ in range(n)]
        support = [{i} for i in range(n)]
        for slot, kind, a, b in probe.code:
            sup = set() if kind == "const" else support[b[0]] | support[b[1]]
            support.append(sup)
            for v in sup:
                reach[v].add(slot)
        order = sorted(range(n), key=lambda v: (-len(reach[v]), probe.var_names[v]))
        return cls(formulas, [probe.var_names[v] for v in order])

    def run(self, A: FinitePCRL, values: np.ndarray) -> list[np.ndarray]:
        """``values`` has one row per valuation and one column per variable."""
        n = A.size
        tables = [A.imp.ravel(), A.fuse.ravel(), A.meet.ravel(), A.join.ravel()]
        regs: list = [values[:, i] for i in range(len(self.var_names))]
        regs.extend([None] * len(self.code))
        for slot, kind, a, b in self.code:
            if kind == "const":
                regs[slot] = np.full(len(values), A.constant(a), dtype=np.intp)
            else:
                regs[slot] = tables[a][regs[b[0]] * n + regs[b[1]]]
        return [regs[o] for o in self.outputs]


# -- validity ---------------------------------------------------------------

@dataclass(frozen=True)
class Exhaustive:
    def describe(self) -> str:
        return "exhaustive"


@dataclass(frozen=True)
class Sample:
    count: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED

    def describe(self) -> str:
        return f"sample({self.count},seed={self.seed})"


Policy = Union[Exhaustive, Sample]


@dataclass(frozen=True)
class Rule:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __str__(self):
        return ", ".join(to_text(p) for p in self.premises) + " / " + to_text(self.conclusion)


_RULE_SLASH = re.compile(r"(?<!\\)/(?!\\)")


def parse_rule(text: str, profile: Profile = FULL) -> Rule:
    """``p1, p2, ... / c``.  A bare ``/`` separates premises from the
    conclusion; ``/\\`` and ``\\/`` are connectives."""
    parts = _RULE_SLASH.split(text)
    if len(parts) != 2:
        raise ValueError("a rule needs exactly one '/' separator")
    head, tail = parts
    premises = tuple(parse(p, profile) for p in head.split(",") if p.strip())
    return Rule(premises, parse(tail, profile))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    policy: str
    checked: int
    counterexample: dict[str, int] | None = None


@lru_cache(maxsize=64)
def _sample_values(size: int, k: int, count: int, seed: int) -> np.ndarray:
    """Seeded draws, sorted lexicographically (slot 0 most significant)."""
    rng = np.random.default_rng(seed)
    values = rng.integers(0, size, size=(count, k), dtype=np.int64)
    if k:
        values = values[np.lexsort(values.T[::-1])]
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    return values


def _exhaustive_row(size: int, k: int, idx: int) -> list[int]:
    digits = []
    for _ in range(k):
        idx, d = divmod(idx, size)
        digits.append(d)
    return digits[::-1]


def _rule_check(A: FinitePCRL, premises: Sequence[Formula], conclusion: Formula,
                policy: Policy, prog: Program | None = None) -> Verdict:
    if prog is None:
        prog = Program.for_scan([*premises, conclusion])
    names = prog.var_names
    ops, lhs, rhs = prog.arrays(A)
    tables, designated = A.scan_tables
    outs = np.array(prog.outputs, dtype=np.int64)
    if isinstance(policy, Sample):
        values = _sample_values(A.size, len(names), policy.count, policy.seed)
        starts, dirty = prog.dirty_lists
        bad, checked = _scan.scan_rows(ops, lhs, rhs, len(names), tables, designated,
                                       outs[:-1], outs[-1], values, starts, dirty)
        row = values[bad].tolist() if bad >= 0 else None
    else:
        starts, dirty = prog.dirty_lists
        bad, checked = _scan.scan_exhaustive(ops, lhs, rhs, len(names), A.size, tables,
                                             designated, outs[:-1], outs[-1], starts, dirty)
        row = _exhaustive_row(A.size, len(names), bad) if bad >= 0 else None
    if row is None:
        return Verdict(True, policy.describe(), int(checked))
    cx = {v: int(x) for v, x in zip(names, row)}
    _confirm(A, premises, conclusion, cx)
    return Verdict(False, policy.describe(), int(checked), cx)


def _confirm(A, premises, conclusion, cx):
    """Re-check a counterexample with the recursive evaluator."""
    if not (all(A.is_designated(evaluate(A, cx, p)) for p in premises)
            and not A.is_designated(evaluate(A, cx, conclusion))):
        raise AssertionError(f"fast evaluator reported a spurious counterexample {cx}")


def is_valid(A: FinitePCRL, phi: Formula, policy: Policy = Exhaustive()) -> Verdict:
    """Is ``1 <= v(phi)`` for every (sampled) valuation ``v``?"""
    return _rule_check(A, (), phi, policy)


def is_rule_valid(A: FinitePCRL, premises: Sequence[Formula], conclusion: Formula,
                  policy: Policy = Exhaustive()) -> Verdict:
    """Does every (sampled) valuation designating all premises designate the conclusion?"""
    return _rule_check(A, tuple(premises), conclusion, policy)


def choose_policy(A: FinitePCRL, nvars: int, budget: int = DEFAULT_BUDGET,
                  samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Policy:
    if A.size**nvars <= budget:
        return Exhaustive()
    return Sample(samples, seed)


@dataclass
class BatteryReport:
    items: list[str]
    entries: list[dict] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    samples: int = DEFAULT_SAMPLES

    @property
    def ok(self) -> bool:
        return all(e["valid"] for e in self.entries)

    @property
    def counterexamples(self) -> list[dict]:
        return [e for e in self.entries if not e["valid"]]

    def policies(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.entries:
            out[e["policy"]] = out.get(e["policy"], 0) + 1
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {
            "items": self.items,
            "seed": self.seed,
            "budget": self.budget,
            "samples": self.samples,
            "checks": len(self.entries),
            "valid": self.ok,
            "policies": self.policies(),
            "counterexamples": self.counterexamples,
        }


Item = Union[Formula, Rule]


def battery_check(items: Iterable[Item], catalog: Iterable[FinitePCRL],
                  budget: int = DEFAULT_BUDGET, samples: int = DEFAULT_SAMPLES,
                  seed: int = DEFAULT_SEED, stop_at_first: bool = False) -> BatteryReport:
    """Check every formula or rule on every model of the catalog.

    Per model the policy is exhaustive when ``size ** nvars <= budget``,
    otherwise ``samples`` seeded random valuations.  Entries are ordered by
    item, then by model.
    """
    items = list(items)
    catalog = list(catalog)
    report = BatteryReport([str(i) if isinstance(i, Rule) else to_text(i) for i in items],
                           seed=seed, budget=budget, samples=samples)
    for idx, item in enumerate(items):
        rule = item if isinstance(item, Rule) else Rule((), item)
        prog = Program.for_scan([*rule.premises, rule.conclusion])
        nvars = len(prog.var_names)
        for m, A in enumerate(catalog):
            policy = choose_policy(A, nvars, budget, samples, seed)
            verdict = _rule_check(A, rule.premises, rule.conclusion, policy, prog)
            entry = {"item": idx, "model": m, "size": A.size, "policy": verdict.policy,
                     "checked": verdict.checked, "valid": verdict.valid}
            if not verdict.valid:
                entry["counterexample"] = verdict.counterexample
                entry["algebra"] = dump_algebra(A)
            report.entries.append(entry)
            if stop_at_first and not verdict.valid:
                return report
    return report


# -- catalog files ----------------------------------------------------------

def dump_algebra(A: FinitePCRL) -> str:
    lines = [f"pcrl size={A.size}", "leq"]
    lines += [" ".join(str(int(b)) for b in row) for row in A.leq]
    lines.append("fuse")
    lines += [" ".join(str(int(x)) for x in row) for row in A.fuse]
    consts = f"unit={A.unit} zero={A.zero}"
    if A.bot is not None:
        consts += f" bot={A.bot} top={A.top}"
    lines.append(consts)
    return "\n".join(lines)


def dump_catalog(models: Iterable[FinitePCRL]) -> str:
    return "\n".join(dump_algebra(A) for A in models) + "\n"


def load_catalog(text: str) -> list[FinitePCRL]:
    """Parse a catalog; meet, join and residual are recomputed and the
    stored bot/top, when present, are cross-checked."""
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), 1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    out: list[FinitePCRL] = []
    i = 0

    def fail(msg, at=None):
        at = min(i if at is None else at, len(lines) - 1)
        raise CatalogFormatError(f"line {lines[at][0]}: {msg}")

    def row(at, n):
        if at >= len(lines):
            fail("truncated algebra", at)
        cells = lines[at][1].split()
        if len(cells) != n or not all(c.isdigit() for c in cells):
            fail(f"expected {n} integers", at)
        return [int(c) for c in cells]

    def keyword(at, word):
        if at >= len(lines) or lines[at][1] != word:
            fail(f"expected {word!r}", at)

    while i < len(lines):
        m = re.fullmatch(r"pcrl size=(\d+)", lines[i][1])
        if m is None:
            fail(f"expected header, got {lines[i][1]!r}")
        n = int(m.group(1))
        keyword(i + 1, "leq")
        leq = [row(i + 2 + r, n) for r in range(n)]
        keyword(i + 2 + n, "fuse")
        fuse = [row(i + 3 + n + r, n) for r in range(n)]
        at = i + 3 + 2 * n
        if at >= len(lines):
            fail("truncated algebra", at)
        consts = {}
        for kv in lines[at][1].split():
            k, _, v = kv.partition("=")
            if k not in ("unit", "zero", "bot", "top") or not v.isdigit():
                fail(f"bad constant {kv!r}", at)
            consts[k] = int(v)
        if not {"unit", "zero"} <= consts.keys():
            fail("missing unit/zero", at)
        bounds = "bot" in consts or "top" in consts
        try:
            A = FinitePCRL(leq, fuse, consts["unit"], consts["zero"], bounds=bounds,
                           provenance=(n, len(out)))
        except AlgebraError as exc:
            fail(f"algebra {len(out)}: {exc}")
        if bounds and (consts.get("bot") != A.bot or consts.get("top") != A.top):
            fail("bot/top disagree with the order", at)
        out.append(A)
        i = at + 1
    return out
