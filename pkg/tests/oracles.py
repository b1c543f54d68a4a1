"""Slow, independent reference computations used to freeze expected values.

None of these call into the library's algorithms; they only share the ring
payload arithmetic where unavoidable.
"""

import itertools
import math


def closure_fixpoint(n, pairs):
    """Saturate 1-based pairs until nothing new appears."""
    rel = set(pairs) | {(i, i) for i in range(1, n + 1)}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


def kron_membership(theta1, theta2, n, m):
    """Evaluate the ceiling / mod membership rule literally on 1-based indices."""
    def pos(i):
        r = i % m
        return r if r else m

    return {
        (i, j)
        for i in range(1, n * m + 1)
        for j in range(1, n * m + 1)
        if (math.ceil(i / m), math.ceil(j / m)) in theta1 and (pos(i), pos(j)) in theta2
    }


def grassmann_sign_bubble(s, t):
    """Bubble-sort the concatenation and count swaps; None if a generator repeats."""
    word = list(s) + list(t)
    if len(set(word)) != len(word):
        return None
    swaps = 0
    for a in range(len(word)):
        for b in range(len(word) - 1 - a):
            if word[b] > word[b + 1]:
                word[b], word[b + 1] = word[b + 1], word[b]
                swaps += 1
    return (-1) ** swaps, tuple(word)


def jacobson_rewrite(i, j, k, l):
    """Concatenate y^i x^j y^k x^l as a word and delete 'xy' until stable."""
    word = "y" * i + "x" * j + "y" * k + "x" * l
    while "xy" in word:
        word = word.replace("xy", "", 1)
    ys = len(word) - len(word.lstrip("y"))
    assert set(word[ys:]) <= {"x"}
    return ys, len(word) - ys


def laplace_det(ring, rows):
    n = len(rows)
    if n == 0:
        return ring.one()
    total = ring.zero()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = ring.mul(rows[0][j], laplace_det(ring, minor))
        total = ring.add(total, term) if j % 2 == 0 else ring.sub(total, term)
    return total


def cofactor_adjugate(ring, rows):
    """Transpose of the cofactor matrix, via Laplace minors."""
    n = len(rows)
    if n == 1:
        return ((ring.one(),),)
    cof = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            d = laplace_det(ring, [tuple(r) for r in minor])
            cof[i][j] = d if (i + j) % 2 == 0 else ring.neg(d)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def brute_force_inverses(ring, rows):
    """All two-sided inverses of a small matrix over Z/m by enumeration."""
    n, m = len(rows), ring.modulus

    def mul(a, b):
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) % m for j in range(n)) for i in range(n)
        )

    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    out = []
    for vals in itertools.product(range(m), repeat=n * n):
        B = tuple(tuple(vals[i * n:(i + 1) * n]) for i in range(n))
        if mul(rows, B) == ident and mul(B, rows) == ident:
            out.append(B)
    return out
