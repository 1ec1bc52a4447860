"""Random instances for property checks: compatible seeds and exchange polynomials."""

import random
from fractions import Fraction
from math import gcd, lcm

from .errors import NotCompatible
from .qcoeff import QLaurent
from .qseed import CompatiblePair, ExtExchangeMatrix, QuantumSeed
from .ranktwo import ExchangePolynomial

__all__ = [
    "random_qlaurent",
    "random_palindromic",
    "random_exchange_polynomial",
    "random_rank_two",
    "random_compatible_pair",
    "random_seed",
    "FEASIBLE_SHAPES",
]

# (m, n) with m <= 4, n <= 3 admitting compatible pairs; m = n odd never does
FEASIBLE_SHAPES = ((2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3))


def _rng(rng):
    return rng if isinstance(rng, random.Random) else random.Random(rng)


def random_qlaurent(rng, max_terms=3, exp_range=(-4, 4), coeff_range=(-2, 2), bar_invariant=False):
    """Random element with half-exponents in ``exp_range``."""
    rng = _rng(rng)
    lo, hi = exp_range
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = rng.randint(lo, hi)
        c = rng.randint(*coeff_range)
        terms[e] = terms.get(e, 0) + c
        if bar_invariant and e:
            terms[-e] = terms.get(-e, 0) + c
    return QLaurent(terms)


def random_palindromic(rng, d, bar_invariant=False, **kw):
    """Palindromic string ``h_0 .. h_d`` with ``h_0 = h_d = 1``."""
    rng = _rng(rng)
    h = [QLaurent(1)] + [None] * (d - 1) + [QLaurent(1)]
    for i in range(1, d // 2 + 1):
        if i > d - 1:
            break
        x = random_qlaurent(rng, bar_invariant=bar_invariant, **kw)
        h[i] = h[d - i] = x
    return h


def random_exchange_polynomial(rng, d, bar_invariant=False, **kw):
    return ExchangePolynomial(tuple(random_palindromic(rng, d, bar_invariant, **kw)))


def random_rank_two(rng, max_degree=3, bar_invariant=None):
    """``(P1, P2)`` with degrees uniform in ``1..max_degree``.

    ``bar_invariant=None`` flips a fair coin per instance.
    """
    rng = _rng(rng)
    if bar_invariant is None:
        bar_invariant = rng.random() < 0.5
    d1 = rng.randint(1, max_degree)
    d2 = rng.randint(1, max_degree)
    return (
        random_exchange_polynomial(rng, d1, bar_invariant),
        random_exchange_polynomial(rng, d2, bar_invariant),
    )


def _solve(A, b):
    """Rational solutions of ``A x = b``: ``(particular, kernel basis)`` or None."""
    rows, cols = len(A), len(A[0])
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][cols] for i in range(r, rows)):
        return None
    free = [c for c in range(cols) if c not in pivots]
    part = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        part[c] = M[i][cols]
    kernel = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -M[i][f]
        kernel.append(v)
    return part, kernel


def _divisors(n):
    n = abs(n)
    return [k for k in range(1, n + 1) if n % k == 0]


def random_compatible_pair(rng, shape=None, bound=3, lam_bound=2, max_tries=10000):
    """A compatible pair with ``|b_ij| <= bound``, built Lambda-first.

    Each column of ``B~`` solves ``Lambda b_k = -t_k e_k`` over the rationals
    and is scaled to integers, so ``-Lambda B~ = [D; 0]`` holds by
    construction; ``d_k`` is a random divisor of the column content.
    Draws exceeding ``bound`` are discarded.
    """
    rng = _rng(rng)
    # shape fixed up front so rare shapes are not crowded out by retries
    m, n = shape or rng.choice(FEASIBLE_SHAPES)
    for _ in range(max_tries):
        lam = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                v = rng.randint(-lam_bound, lam_bound)
                lam[i][j], lam[j][i] = v, -v
        cols = []
        for k in range(n):
            rhs = [-int(i == k) for i in range(m)]
            sol = _solve(lam, rhs)
            if sol is None:
                break
            x, kernel = sol
            for v in kernel:
                t = rng.randint(-1, 1)
                x = [a + t * b for a, b in zip(x, v)]
            scale = lcm(*(a.denominator for a in x)) * rng.choice((1, 1, 2))
            cols.append([int(a * scale) for a in x])
        else:
            if any(abs(v) > bound for col in cols for v in col):
                continue
            rows = [[cols[k][i] for k in range(n)] for i in range(m)]
            d = [rng.choice(_divisors(gcd(*cols[k]))) for k in range(n)]
            try:
                return CompatiblePair(lam, ExtExchangeMatrix(rows, d))
            except (ValueError, NotCompatible):
                continue
    raise RuntimeError("no compatible pair found; loosen the bounds")


def random_seed(rng, shape=None, bound=3, **kw):
    """Initial quantum seed with a random compatible pair and palindromic strings."""
    rng = _rng(rng)
    pair = random_compatible_pair(rng, shape=shape, bound=bound)
    h = [random_palindromic(rng, dk, **kw) for dk in pair.bmat.d]
    return QuantumSeed(pair, h)
