"""Compiled inner loop for validity checking."""

import numpy as np
from numba import njit

OP_IMP, OP_FUSE, OP_AND, OP_OR, OP_CONST = 0, 1, 2, 3, 4


@njit(cache=True)
def _eval_row(ops, lhs, rhs, nvars, tables, regs):
    for i in range(ops.shape[0]):
        op = ops[i]
        slot = nvars + i
        if op == OP_CONST:
            regs[slot] = lhs[i]
        else:
            regs[slot] = tables[op, regs[lhs[i]], regs[rhs[i]]]


@njit(cache=True)
def _bad(regs, designated, premises, conclusion):
    for j in range(premises.shape[0]):
        if not designated[regs[premises[j]]]:
            return False
    return not designated[regs[conclusion]]


@njit(cache=True)
def scan_exhaustive(ops, lhs, rhs, nvars, size, tables, designated, premises, conclusion,
                    starts, dirty):
    """Walk all ``size ** nvars`` valuations in lexicographic order (slot 0
    most significant).  When digits ``k..`` change, only the nodes
    ``dirty[starts[k]:starts[k+1]]`` (those depending on a variable in a slot
    ``>= k``) are recomputed.  Returns (index of first counterexample or -1,
    number of valuations checked)."""
    regs = np.zeros(nvars + ops.shape[0], dtype=np.int64)
    total = 1
    for _ in range(nvars):
        total *= size
    _eval_row(ops, lhs, rhs, nvars, tables, regs)
    for idx in range(total):
        if idx > 0:
            k = nvars - 1
            while k >= 0:
                regs[k] += 1
                if regs[k] < size:
                    break
                regs[k] = 0
                k -= 1
            for j in range(starts[k], starts[k + 1]):
                i = dirty[j]
                regs[nvars + i] = tables[ops[i], regs[lhs[i]], regs[rhs[i]]]
        if _bad(regs, designated, premises, conclusion):
            return idx, idx + 1
    return -1, total


@njit(cache=True)
def scan_rows(ops, lhs, rhs, nvars, tables, designated, premises, conclusion, values,
              starts, dirty):
    """Check the given valuations in order; ``values`` should be sorted so
    that consecutive rows share long prefixes, which the incremental update
    exploits as in ``scan_exhaustive``."""
    regs = np.zeros(nvars + ops.shape[0], dtype=np.int64)
    for idx in range(values.shape[0]):
        if idx == 0:
            for k in range(nvars):
                regs[k] = values[0, k]
            _eval_row(ops, lhs, rhs, nvars, tables, regs)
        else:
            first = nvars
            for k in range(nvars):
                if regs[k] != values[idx, k]:
                    if first == nvars:
                        first = k
                    regs[k] = values[idx, k]
            if first < nvars:
                for j in range(starts[first], starts[first + 1]):
                    i = dirty[j]
                    regs[nvars + i] = tables[ops[i], regs[lhs[i]], regs[rhs[i]]]
        if _bad(regs, designated, premises, conclusion):
            return idx, idx + 1
    return -1, values.shape[0]
