"""Seeded random and exhaustive formula generators."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .formula import ONE, ZERO, Bin, Const, Formula, Op, Var

OPS = (Op.IMP, Op.FUSE, Op.AND, Op.OR)


def random_formula(rng: random.Random, names: Sequence[str] = ("p", "q", "r"),
                   max_depth: int = 5, constants: Sequence[Const] = (ZERO, ONE),
                   leaf_prob: float = 0.3, const_prob: float = 0.2) -> Formula:
    """Random formula of depth at most ``max_depth``.

    Below the root every node becomes a leaf with probability ``leaf_prob``;
    a leaf is a constant with probability ``const_prob``.
    """

    def gen(d, root):
        if d == 0 or (not root and rng.random() < leaf_prob):
            if constants and rng.random() < const_prob:
                return rng.choice(list(constants))
            return Var(rng.choice(list(names)))
        op = rng.choice(OPS)
        return Bin(op, gen(d - 1, False), gen(d - 1, False))

    return gen(max_depth, True)


def random_corpus(count: int, seed: int, **kwargs) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, **kwargs) for _ in range(count)]


def all_formulas(max_depth: int, atoms: Sequence[Formula]) -> Iterator[Formula]:
    """Every formula over ``atoms`` of depth at most ``max_depth``, each once,
    in order of increasing depth."""
    upto = list(atoms)  # depth < d
    exact = list(atoms)  # depth == d - 1
    yield from atoms
    for _ in range(max_depth):
        new = []
        exact_ids = {id(f) for f in exact}
        for op in OPS:
            for a in upto:
                for b in upto:
                    if id(a) in exact_ids or id(b) in exact_ids:
                        new.append(Bin(op, a, b))
        yield from new
        upto = upto + new
        exact = new


def count_formulas(max_depth: int, n_atoms: int) -> int:
    total = n_atoms
    for _ in range(max_depth):
        total = n_atoms + len(OPS) * total * total
    return total
