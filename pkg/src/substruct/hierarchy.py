"""Levels of the substructural hierarchy and the associated normal forms.

``P_k`` and ``N_k`` are the least sets such that

* ``P_0 = N_0`` are the variables,
* ``P_k`` and ``N_k`` are both included in ``P_{k+1}`` and ``N_{k+1}``,
* ``P_{k+1}`` is closed under ``*``, ``\\/`` and contains ``1``, ``bot``,
* ``N_{k+1}`` is closed under ``/\\`` and contains ``0``, ``top``,
* ``a -> b`` is in ``N_{k+1}`` when ``a`` is in ``P_{k+1}`` and ``b`` in ``N_{k+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .formula import (
    ZERO,
    Bin,
    Const,
    ConstKind,
    Formula,
    Op,
    Var,
    depth,
    imp,
    iter_nodes,
    mk_conjunction,
    mk_disjunction,
    mk_product,
    node_count,
)


class LevelError(ValueError):
    """The formula is not at the requested level."""


class OracleBoundError(ValueError):
    """The fixpoint oracle did not reach the formula within its level bound."""


class BudgetError(RuntimeError):
    """Normalisation exceeded its rewrite-step budget."""


@dataclass(frozen=True)
class HierarchyLevel:
    p: int
    n: int

    def __iter__(self):
        return iter((self.p, self.n))


@lru_cache(maxsize=65536)
def classify(phi: Formula) -> HierarchyLevel:
    """Least k with phi in P_k, and least k with phi in N_k."""
    if isinstance(phi, Var):
        return HierarchyLevel(0, 0)
    if isinstance(phi, Const):
        if phi.kind in (ConstKind.ONE, ConstKind.BOT):
            return HierarchyLevel(1, 2)
        return HierarchyLevel(2, 1)
    a = classify(phi.left)
    b = classify(phi.right)
    if phi.op in (Op.FUSE, Op.OR):
        p = max(1, a.p, b.p)
        return HierarchyLevel(p, p + 1)
    if phi.op is Op.AND:
        n = max(1, a.n, b.n)
    else:
        n = max(1, a.p, b.n)
    return HierarchyLevel(n + 1, n)


def oracle_membership(phi: Formula, k_max: int) -> tuple[tuple[bool, ...], tuple[bool, ...]]:
    """Membership of ``phi`` in P_k and N_k for k = 0..k_max.

    Materialises the least sets level by level, restricted to the
    subformulas of ``phi``, by iterating the closure clauses to a fixpoint.
    """
    subs = list(dict.fromkeys(reversed(list(iter_nodes(phi)))))
    in_p: list[set] = []
    in_n: list[set] = []
    for k in range(k_max + 1):
        if k == 0:
            base = {s for s in subs if isinstance(s, Var)}
            in_p.append(set(base))
            in_n.append(set(base))
            continue
        P = in_p[k - 1] | in_n[k - 1]
        N = set(P)
        changed = True
        while changed:
            changed = False
            for s in subs:
                if isinstance(s, Const):
                    if s.kind in (ConstKind.ONE, ConstKind.BOT):
                        target, ok = P, True
                    else:
                        target, ok = N, True
                elif isinstance(s, Bin):
                    if s.op in (Op.FUSE, Op.OR):
                        target, ok = P, s.left in P and s.right in P
                    elif s.op is Op.AND:
                        target, ok = N, s.left in N and s.right in N
                    else:
                        target, ok = N, s.left in P and s.right in N
                else:
                    continue
                if ok and s not in target:
                    target.add(s)
                    changed = True
        in_p.append(P)
        in_n.append(N)
    return tuple(phi in s for s in in_p), tuple(phi in s for s in in_n)


def classify_oracle(phi: Formula, k_max: int | None = None) -> HierarchyLevel:
    """Reference classification by direct fixpoint over the closure clauses."""
    if k_max is None:
        k_max = depth(phi) + 2
    mp, mn = oracle_membership(phi, k_max)
    if not (any(mp) and any(mn)):
        raise OracleBoundError(f"no level found up to k={k_max}")
    return HierarchyLevel(mp.index(True), mn.index(True))


# -- normal forms -----------------------------------------------------------

@dataclass(frozen=True)
class NNormalForm:
    """Conjunction of ``prod(antecedent) -> consequent``."""

    k: int
    conjuncts: tuple[tuple[tuple[Formula, ...], Formula], ...]

    def to_formula(self) -> Formula:
        return mk_conjunction([imp(mk_product(list(a)), c) for a, c in self.conjuncts])

    def shape_ok(self) -> bool:
        for ant, cons in self.conjuncts:
            if any(classify(f).n > self.k - 1 for f in ant):
                return False
            if cons != ZERO and classify(cons).p > self.k - 1:
                return False
        return True


@dataclass(frozen=True)
class PNormalForm:
    """Disjunction of products."""

    k: int
    disjuncts: tuple[tuple[Formula, ...], ...]

    def to_formula(self) -> Formula:
        return mk_disjunction([mk_product(list(fs)) for fs in self.disjuncts])

    def shape_ok(self) -> bool:
        return all(classify(f).n <= self.k - 1 for fs in self.disjuncts for f in fs)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, steps: int = 1):
        self.used += steps
        if self.used > self.limit:
            raise BudgetError(f"normalisation exceeded {self.limit} rewrite steps")


def _norm_n(phi, k, budget):
    if classify(phi).p <= k - 1 or phi == ZERO:
        return [((), phi)]
    if isinstance(phi, Const) and phi.kind is ConstKind.TOP:
        budget.spend()
        return []
    if isinstance(phi, Bin) and phi.op is Op.AND:
        budget.spend()
        return _norm_n(phi.left, k, budget) + _norm_n(phi.right, k, budget)
    if isinstance(phi, Bin) and phi.op is Op.IMP:
        # (\/_j prod F_j) -> /\_i (A_i -> b_i)  ==  /\_{j,i} (prod F_j * prod A_i -> b_i)
        ants = _norm_p(phi.left, k, budget)
        rest = _norm_n(phi.right, k, budget)
        out = []
        for fs in ants:
            for a, b in rest:
                budget.spend()
                out.append((fs + a, b))
        return out
    raise LevelError(f"{phi} is not in N_{k}")


def _norm_p(phi, k, budget):
    if classify(phi).n <= k - 1:
        return [(phi,)]
    if isinstance(phi, Const) and phi.kind is ConstKind.ONE:
        budget.spend()
        return [()]
    if isinstance(phi, Const) and phi.kind is ConstKind.BOT:
        budget.spend()
        return []
    if isinstance(phi, Bin) and phi.op is Op.OR:
        budget.spend()
        return _norm_p(phi.left, k, budget) + _norm_p(phi.right, k, budget)
    if isinstance(phi, Bin) and phi.op is Op.FUSE:
        left = _norm_p(phi.left, k, budget)
        right = _norm_p(phi.right, k, budget)
        out = []
        for a in left:
            for b in right:
                budget.spend()
                out.append(a + b)
        return out
    raise LevelError(f"{phi} is not in P_{k}")


def normalize_n(phi: Formula, k: int, budget: int | None = None) -> NNormalForm:
    """Rewrite an N_k formula into a conjunction of implications
    ``prod(N_{k-1}) -> P_{k-1}-or-0``.

    Rules, applied outermost first: ``c -> a /\\ b`` splits into two
    conjuncts, ``a \\/ b -> c`` splits on the antecedent, ``a -> (b -> c)``
    curries to ``a * b -> c``, ``*`` distributes over ``\\/``, and ``top``,
    ``bot``, ``1`` become the empty conjunction, disjunction and product.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if classify(phi).n > k:
        raise LevelError(f"formula has N-level {classify(phi).n} > {k}")
    b = _Budget(10 * node_count(phi) if budget is None else budget)
    return NNormalForm(k, tuple(_norm_n(phi, k, b)))


def normalize_p(phi: Formula, k: int, budget: int | None = None) -> PNormalForm:
    """Rewrite a P_k formula into a disjunction of products of N_{k-1} formulas."""
    if k < 1:
        raise ValueError("k must be positive")
    if classify(phi).p > k:
        raise LevelError(f"formula has P-level {classify(phi).p} > {k}")
    b = _Budget(10 * node_count(phi) if budget is None else budget)
    return PNormalForm(k, tuple(_norm_p(phi, k, b)))
