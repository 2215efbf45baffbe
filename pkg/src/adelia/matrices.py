"""List-of-lists matrix helpers, generic over the scalar type."""
from __future__ import annotations


def zeros(n, m, zero=0):
    return [[zero] * m for _ in range(n)]


def identity(n, zero=0, one=1):
    out = zeros(n, n, zero)
    for i in range(n):
        out[i][i] = one
    return out


def copy(m):
    return [list(r) for r in m]


def ncols(m, default=0):
    return len(m[0]) if m else default


def transpose(m, cols=None):
    c = ncols(m, cols or 0)
    return [[r[j] for r in m] for j in range(c)]


def matmul(a, b, zero=0, inner=None):
    """a (n x k) times b (k x m).  ``inner`` gives k when a has no columns to read it from."""
    if not a:
        return []
    k = len(a[0]) if a[0] or inner is None else inner
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [zero] * m
        for t in range(k):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(m):
                    if brow[j]:
                        acc[j] = acc[j] + x * brow[j]
        out.append(acc)
    return out


def vecmat(v, m, zero=0, width=None):
    w = ncols(m, width or 0)
    acc = [zero] * w
    for x, row in zip(v, m):
        if x:
            for j in range(w):
                if row[j]:
                    acc[j] = acc[j] + x * row[j]
    return acc


def add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(a, c):
    return [[c * x for x in r] for r in a]


def vstack(*blocks):
    out = []
    for b in blocks:
        out.extend(list(r) for r in b)
    return out


def hstack(*blocks):
    rows = max((len(b) for b in blocks), default=0)
    out = [[] for _ in range(rows)]
    for b in blocks:
        for i, r in enumerate(b):
            out[i].extend(r)
    return out


def block_diag(blocks, shapes=None, zero=0):
    """Block diagonal matrix; ``shapes`` lists (rows, cols) so empty blocks keep their width."""
    if shapes is None:
        shapes = [(len(b), ncols(b)) for b in blocks]
    total = sum(c for _, c in shapes)
    out = []
    off = 0
    for b, (r, c) in zip(blocks, shapes):
        for i in range(r):
            row = [zero] * total
            row[off:off + c] = b[i]
            out.append(row)
        off += c
    return out


def select_cols(m, cols):
    return [[r[j] for j in cols] for r in m]


def is_zero(m):
    return all(not x for r in m for x in r)


def equal(a, b):
    if len(a) != len(b):
        return False
    return all(len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b))


def map_entries(m, fn):
    return [[fn(x) for x in r] for r in m]
