"""Exhaustive enumeration of small pointed commutative residuated lattices.

``enumerate_pcrls`` is the production path (order first): lattices up to
isomorphism, then monotone commutative monoids with a chosen unit found by
backtracking, then the residual and the point 0.  ``enumerate_monoid_first``
is a deliberately naive second route (all commutative monoid tables, then
all partial orders, isomorphism classes by pairwise search) that exists to
cross-check the first on small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .algebra import AlgebraError, FinitePCRL
from .formula import FULL, Profile

DEFAULT_CEILING = 4
PRUNED_CEILING = 5


class CeilingError(ValueError):
    pass


@dataclass(frozen=True)
class ModelCatalog:
    models: tuple[FinitePCRL, ...]
    max_size: int
    iso_pruned: bool = True

    def __iter__(self):
        return iter(self.models)

    def __len__(self):
        return len(self.models)

    def __getitem__(self, i):
        return self.models[i]

    def by_size(self, n: int) -> list[FinitePCRL]:
        return [A for A in self.models if A.size == n]


def _is_transitive(leq, n):
    return all(not (leq[a][b] and leq[b][c]) or leq[a][c]
               for a in range(n) for b in range(n) for c in range(n))


def _is_lattice(leq, n):
    for x in range(n):
        for y in range(n):
            lower = [z for z in range(n) if leq[z][x] and leq[z][y]]
            if not any(all(leq[c][z] for c in lower) for z in lower):
                return False
            upper = [z for z in range(n) if leq[x][z] and leq[y][z]]
            if not any(all(leq[z][c] for c in upper) for z in upper):
                return False
    return True


def _relabel_leq(leq, perm, n):
    out = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[perm[i]][perm[j]] = leq[i][j]
    return tuple(tuple(r) for r in out)


@lru_cache(maxsize=None)
def lattices(n: int) -> tuple[tuple[tuple[bool, ...], ...], ...]:
    """Lattice orders on ``n`` elements, one per isomorphism type.  Labels
    follow a linear extension, so ``x <= y`` implies ``x <= y`` as integers."""
    pairs = list(combinations(range(n), 2))
    seen = set()
    out = []
    for bits in product((False, True), repeat=len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(pairs, bits):
            leq[i][j] = b
        if not _is_transitive(leq, n) or not _is_lattice(leq, n):
            continue
        canon = min(_relabel_leq(leq, p, n) for p in permutations(range(n)))
        if canon not in seen:
            seen.add(canon)
            out.append(tuple(tuple(r) for r in leq))
    return tuple(out)


def _monoids_on(leq, unit, n):
    """Commutative, monotone, associative multiplications with identity
    ``unit`` in which the bottom is absorbing."""
    bottom = 0
    free = [(i, j) for i in range(n) for j in range(i, n) if unit not in (i, j)]
    table = [[-1] * n for _ in range(n)]
    for x in range(n):
        table[unit][x] = table[x][unit] = x
    if unit == bottom and n > 1:
        return

    def monotone_ok(i, j):
        v = table[i][j]
        for a in range(n):
            for b in range(n):
                w = table[a][b]
                if w < 0:
                    continue
                if leq[a][i] and leq[b][j] and not leq[w][v]:
                    return False
                if leq[i][a] and leq[j][b] and not leq[v][w]:
                    return False
        return True

    def rec(k):
        if k == len(free):
            t = np.array(table)
            if (t[t[:, :, None], np.arange(n)[None, None, :]]
                    == t[np.arange(n)[:, None, None], t[None, :, :]]).all():
                yield t
            return
        i, j = free[k]
        values = [bottom] if bottom in (i, j) else range(n)
        for v in values:
            table[i][j] = table[j][i] = v
            if monotone_ok(i, j):
                yield from rec(k + 1)
        table[i][j] = table[j][i] = -1

    yield from rec(0)


def canonical_key(leq, fuse, unit, zero) -> tuple:
    """Least relabelled encoding over all permutations of the carrier."""
    leq = np.asarray(leq, dtype=bool)
    fuse = np.asarray(fuse)
    n = len(leq)
    best = None
    for perm in permutations(range(n)):
        p = np.array(perm)
        inv = np.argsort(p)
        L = leq[np.ix_(inv, inv)]
        F = p[fuse[np.ix_(inv, inv)]]
        key = (tuple(L.ravel().tolist()), tuple(F.ravel().tolist()), int(p[unit]), int(p[zero]))
        if best is None or key < best:
            best = key
    return best


def _from_key(n, key, bounds, provenance):
    L, F, u, z = key
    return FinitePCRL(np.array(L).reshape(n, n), np.array(F).reshape(n, n), u, z,
                      bounds=bounds, provenance=provenance)


@lru_cache(maxsize=None)
def _canonical_keys(n: int) -> tuple:
    keys = set()
    for leq in lattices(n):
        for unit in range(n):
            for fuse in _monoids_on(leq, unit, n):
                try:
                    FinitePCRL(leq, fuse, unit, 0)
                except AlgebraError:
                    continue
                for zero in range(n):
                    keys.add(canonical_key(leq, fuse, unit, zero))
    return tuple(sorted(keys))


def enumerate_size(n: int, profile: Profile = FULL, iso_pruned: bool = True) -> list[FinitePCRL]:
    keys = _canonical_keys(n)
    if iso_pruned:
        return [_from_key(n, k, profile.bounds, (n, i)) for i, k in enumerate(keys)]
    labelled = set()
    for L, F, u, z in keys:
        L = np.array(L, dtype=bool).reshape(n, n)
        F = np.array(F).reshape(n, n)
        for perm in permutations(range(n)):
            p = np.array(perm)
            inv = np.argsort(p)
            labelled.add((tuple(L[np.ix_(inv, inv)].ravel().tolist()),
                          tuple(p[F[np.ix_(inv, inv)]].ravel().tolist()), int(p[u]), int(p[z])))
    return [_from_key(n, k, profile.bounds, (n, i)) for i, k in enumerate(sorted(labelled))]


def enumerate_pcrls(max_size: int, profile: Profile = FULL, iso_pruned: bool = True) -> ModelCatalog:
    """All pointed commutative residuated lattices of size 1..max_size."""
    if max_size < 1:
        raise ValueError("max_size must be positive")
    ceiling = PRUNED_CEILING if iso_pruned else DEFAULT_CEILING
    if max_size > ceiling:
        raise CeilingError(f"max_size {max_size} exceeds the ceiling {ceiling}")
    models = []
    for n in range(1, max_size + 1):
        models.extend(enumerate_size(n, profile, iso_pruned))
    return ModelCatalog(tuple(models), max_size, iso_pruned)


# -- independent second route -------------------------------------------------

def _all_partial_orders(n):
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in product((False, True), repeat=len(cells)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(cells, bits):
            leq[i][j] = b
        if any(leq[i][j] and leq[j][i] for i, j in cells):
            continue
        if _is_transitive(leq, n):
            yield leq


def _commutative_monoids(n):
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in product(range(n), repeat=len(cells)):
        t = [[0] * n for _ in range(n)]
        for (i, j), v in zip(cells, vals):
            t[i][j] = t[j][i] = v
        units = [u for u in range(n) if all(t[u][x] == x for x in range(n))]
        if not units:
            continue
        if all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n)):
            yield t, units[0]


def _residuated(leq, t, n):
    """For all y, z the set {x : x*y <= z} must have a greatest element m,
    and then x <= m must be equivalent to x*y <= z."""
    for y in range(n):
        for z in range(n):
            s = [x for x in range(n) if leq[t[x][y]][z]]
            tops = [m for m in s if all(leq[x][m] for x in s)]
            if not tops:
                return False
            m = tops[0]
            if any(leq[x][m] != leq[t[x][y]][z] for x in range(n)):
                return False
    return True


def _isomorphic(a, b, n):
    la, ta, ua, za = a
    lb, tb, ub, zb = b
    for p in permutations(range(n)):
        if p[ua] != ub or p[za] != zb:
            continue
        if all(la[i][j] == lb[p[i]][p[j]] and p[ta[i][j]] == tb[p[i]][p[j]]
               for i in range(n) for j in range(n)):
            return True
    return False


def enumerate_monoid_first(n: int) -> list[tuple]:
    """Isomorphism classes of size-``n`` algebras as ``(leq, fuse, unit, zero)``
    tuples, by brute force over all tables.  Practical for ``n <= 3``."""
    orders = [leq for leq in _all_partial_orders(n) if _is_lattice(leq, n)]
    reps: list[tuple] = []
    for t, unit in _commutative_monoids(n):
        for leq in orders:
            if not _residuated(leq, t, n):
                continue
            for zero in range(n):
                cand = (leq, t, unit, zero)
                if not any(_isomorphic(cand, r, n) for r in reps):
                    reps.append(cand)
    return reps
