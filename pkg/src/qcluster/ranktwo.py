"""Rank-two generalized quantum cluster algebras ``A_q(P1, P2)``.

Cluster variables live in the based torus with ``X_1 = X(1,0)``,
``X_2 = X(0,1)`` and ``X_1 X_2 = q X_2 X_1``.  They obey

    X_{k-1} X_{k+1} = P1(X_k)  (k even),   P2(X_k)  (k odd),

and each one is obtained from its two predecessors by exact division in the
torus, so a successful computation is an instance of the Laurent phenomenon.
"""

import itertools
from dataclasses import dataclass

from .errors import PreconditionFailed
from .qcoeff import QLaurent, ql_exact_div
from .qtorus import SkewMatrix, TorusElement, left_divide_exact, right_divide_exact
from .report import Report

__all__ = [
    "LAMBDA0",
    "ExchangePolynomial",
    "ClusterSequence",
    "StandardMonomial",
    "eval_exchange",
    "hatted",
    "cluster_var",
    "expand_in_cluster",
    "substitute",
    "check_bar_invariance",
    "reduce_to_standard",
    "standard_monomials",
    "expand_word",
    "standard_basis_check",
    "fraction_free_rank",
]

LAMBDA0 = SkewMatrix([[0, 1], [-1, 0]])


def _ql(x):
    return x if isinstance(x, QLaurent) else QLaurent(x)


@dataclass(frozen=True)
class ExchangePolynomial:
    """``P(x) = sum_i q^(i*sign/2) h_i x^i`` with palindromic ``h``.

    ``sign`` is +1 for the exchange polynomial itself and -1 for its hatted
    companion, which governs the reversed product ``X_{k+1} X_{k-1}``.
    """

    h: tuple
    sign: int = 1

    def __post_init__(self):
        h = tuple(_ql(x) for x in self.h)
        object.__setattr__(self, "h", h)
        d = len(h) - 1
        if d < 1:
            raise ValueError("exchange polynomial must have positive degree")
        if not (h[0].is_one() and h[d].is_one()):
            raise ValueError("h_0 and h_d must both equal 1")
        for i in range(d + 1):
            if h[i] != h[d - i]:
                raise ValueError(f"h is not palindromic: h_{i} != h_{d - i}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def from_interior(cls, d, interior=()):
        """Build from ``d`` and the interior coefficients ``h_1 .. h_{d-1}``."""
        interior = tuple(interior)
        if len(interior) != d - 1:
            raise ValueError(f"degree {d} needs {d - 1} interior coefficients")
        return cls((QLaurent(1),) + interior + (QLaurent(1),))

    @property
    def degree(self):
        return len(self.h) - 1

    def coefficients(self):
        """Coefficient of ``x^i`` for ``i = 0..d``."""
        return [hi.shift(self.sign * i) for i, hi in enumerate(self.h)]

    def is_bar_invariant(self):
        return all(hi.bar() == hi for hi in self.h)

    def specialize_one(self):
        return [hi.eval_one() for hi in self.h]

    def to_json(self):
        return {"d": self.degree, "h": [hi.to_pairs() for hi in self.h]}

    def __str__(self):
        parts = []
        for i, a in enumerate(self.coefficients()):
            x = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not a:
                continue
            if not x:
                parts.append(str(a))
            elif a.is_one():
                parts.append(x)
            else:
                parts.append(f"({a}){x}")
        return " + ".join(parts)


def eval_exchange(P, A):
    """``sum_i c_i A^i`` for the coefficients of ``P``."""
    result = TorusElement.one(A.lam)
    power = TorusElement.one(A.lam)
    for i, c in enumerate(P.coefficients()):
        if i == 0:
            result = TorusElement.one(A.lam).scale(c)
            continue
        power = power * A
        result = result + power.scale(c)
    return result


def hatted(P):
    """The companion with q-power prefixes negated."""
    return ExchangePolynomial(P.h, -P.sign)


class ClusterSequence:
    """Memoized cluster variables ``X_k``, ``k`` in ``Z``, for a pair ``(P1, P2)``."""

    def __init__(self, p1, p2):
        if p1.sign != 1 or p2.sign != 1:
            raise ValueError("exchange polynomials must be un-hatted")
        self.p1 = p1
        self.p2 = p2
        self.lam = LAMBDA0
        self._cache = {
            1: TorusElement.basis(LAMBDA0, (1, 0)),
            2: TorusElement.basis(LAMBDA0, (0, 1)),
        }
        self._lo = 1
        self._hi = 2

    def poly(self, k):
        """Exchange polynomial in ``X_{k-1} X_{k+1} = P(X_k)``."""
        return self.p1 if k % 2 == 0 else self.p2

    def computed(self):
        return dict(sorted(self._cache.items()))

    def __getitem__(self, k):
        return cluster_var(self, k)

    def is_bar_invariant(self):
        return self.p1.is_bar_invariant() and self.p2.is_bar_invariant()

    def shifted(self, m):
        """The sequence seen from the cluster ``(X_m, X_{m+1})``.

        Its variable ``Y_i`` corresponds to ``X_{i+m-1}``; only the parity of
        the shift matters.
        """
        if (m - 1) % 2 == 0:
            return self
        return ClusterSequence(self.p2, self.p1)


def cluster_var(S, k):
    """``X_k`` as an element of the based torus."""
    cache = S._cache
    while k > S._hi:
        n = S._hi + 1
        rhs = eval_exchange(S.poly(n - 1), cache[n - 1])
        cache[n] = left_divide_exact(rhs, cache[n - 2])
        S._hi = n
    while k < S._lo:
        n = S._lo - 1
        rhs = eval_exchange(S.poly(n + 1), cache[n + 1])
        cache[n] = right_divide_exact(rhs, cache[n + 2])
        S._lo = n
    return cache[k]


_SHIFT_CACHE_ATTR = "_shift_twin"


def expand_in_cluster(S, j, m):
    """``X_j`` written as a Laurent polynomial in the cluster ``(X_m, X_{m+1})``.

    The result lives in the based torus whose generators ``X(1,0)``,
    ``X(0,1)`` stand for ``X_m``, ``X_{m+1}``.
    """
    if (m - 1) % 2 == 0:
        T = S
    else:
        T = getattr(S, _SHIFT_CACHE_ATTR, None)
        if T is None:
            T = S.shifted(m)
            setattr(S, _SHIFT_CACHE_ATTR, T)
    return cluster_var(T, j - m + 1)


def substitute(F, y1, y2):
    """Evaluate ``F`` in ``T(LAMBDA0)`` at ``X(1,0) -> y1``, ``X(0,1) -> y2``.

    Requires ``y1 y2 = q y2 y1``.  Negative exponents are cleared by a common
    monomial factor and removed again with one exact left division.
    """
    if F.is_zero():
        return TorusElement.zero(y1.lam)
    a_min = min(0, min(c[0] for c in F._terms))
    b_min = min(0, min(c[1] for c in F._terms))

    def ordered(a, b):
        # X(a, b) = q^(-ab/2) X_1^a X_2^b
        return (y1 ** a * y2 ** b).scale(QLaurent.monomial(-a * b))

    shift = TorusElement.basis(LAMBDA0, (-a_min, -b_min))
    G = shift * F
    image = TorusElement.zero(y1.lam)
    for (a, b), coeff in G.items():
        image = image + ordered(a, b).scale(coeff)
    if a_min == 0 and b_min == 0:
        return image
    return left_divide_exact(image, ordered(-a_min, -b_min))


def check_bar_invariance(S, krange):
    """Check ``bar(X_k) == X_k`` for every ``k`` in the inclusive range."""
    for name, P in (("P1", S.p1), ("P2", S.p2)):
        for i, hi in enumerate(P.h):
            if hi.bar() != hi:
                raise PreconditionFailed(f"{name}: h_{i} = {hi} is not bar-invariant")
    report = Report()
    kmin, kmax = krange
    for k in range(kmin, kmax + 1):
        X = cluster_var(S, k)
        report.record(f"X_{k}", X.bar() == X, f"bar(X_{k}) != X_{k}")
    return report


# --- standard monomials -----------------------------------------------------

# order of letters inside a standard monomial X_1^a1 X_2^a2 X_3^a1' X_0^a2'
_POS = {1: 0, 2: 1, 3: 2, 0: 3}


@dataclass(frozen=True, order=True)
class StandardMonomial:
    a1: int
    a2: int
    a1p: int
    a2p: int

    def __post_init__(self):
        if min(self.a1, self.a2, self.a1p, self.a2p) < 0:
            raise ValueError("exponents must be nonnegative")
        if self.a1 * self.a1p or self.a2 * self.a2p:
            raise ValueError("standard monomials need a1*a1' = a2*a2' = 0")

    @property
    def degree(self):
        return self.a1 + self.a2 + self.a1p + self.a2p

    def word(self):
        return (1,) * self.a1 + (2,) * self.a2 + (3,) * self.a1p + (0,) * self.a2p

    def g_vector(self):
        return (self.a1 - self.a1p, self.a2 - self.a2p)

    def __str__(self):
        parts = [
            f"X_{i}^{a}" if a > 1 else f"X_{i}"
            for i, a in ((1, self.a1), (2, self.a2), (3, self.a1p), (0, self.a2p))
            if a
        ]
        return "*".join(parts) or "1"


def standard_monomials(max_degree):
    """All standard monomials of total degree at most ``max_degree``, sorted."""
    out = []
    for a1, a2, a1p, a2p in itertools.product(range(max_degree + 1), repeat=4):
        if a1 + a2 + a1p + a2p > max_degree or a1 * a1p or a2 * a2p:
            continue
        out.append(StandardMonomial(a1, a2, a1p, a2p))
    return sorted(out)


def _standard_key(word):
    """StandardMonomial for a standard word, else None."""
    if any(_POS[a] > _POS[b] for a, b in zip(word, word[1:])):
        return None
    counts = {i: word.count(i) for i in range(4)}
    if counts[1] and counts[3] or counts[2] and counts[0]:
        return None
    return StandardMonomial(counts[1], counts[2], counts[3], counts[0])


class _Rewriter:
    """Rewriting rules for words in ``X_0, X_1, X_2, X_3``.

    Each rule returns a list of ``(coeff, replacement word)``.  The measure
    (number of X_0/X_3 letters, number of inversions) decreases
    lexicographically with every step, so reduction terminates.
    """

    def __init__(self, p1, p2):
        self.P1 = list(enumerate(p1.coefficients()))
        self.P1hat = list(enumerate(hatted(p1).coefficients()))
        self.P2 = list(enumerate(p2.coefficients()))
        self.P2hat = list(enumerate(hatted(p2).coefficients()))
        # X_0 X_3 = q^-1 X_3 X_0 + sum_{i,j>=1} q^((i+j)/2-1)(1-q^-ij) h_i g_j X_1^(j-1) X_2^(i-1)
        extra = []
        for i, hi in enumerate(p1.h):
            for j, gj in enumerate(p2.h):
                if i and j:
                    c = (QLaurent(1) - QLaurent.monomial(-2 * i * j)).shift(i + j - 2)
                    c = c * hi * gj
                    if c:
                        extra.append((c, (1,) * (j - 1) + (2,) * (i - 1)))
        self.x0x3 = [(QLaurent.monomial(-2), (3, 0))] + extra

    def rule(self, a, b):
        """Replacement for the adjacent pair ``X_a X_b`` or None if allowed."""
        if (a, b) == (2, 1):
            return [(QLaurent.monomial(-2), (1, 2))]
        if (a, b) == (3, 2):
            return [(QLaurent.monomial(-2), (2, 3))]
        if (a, b) == (0, 1):
            return [(QLaurent.monomial(2), (1, 0))]
        if (a, b) == (1, 3):
            return [(c, (2,) * i) for i, c in self.P1]
        if (a, b) == (3, 1):
            return [(c, (2,) * i) for i, c in self.P1hat]
        if (a, b) == (0, 2):
            return [(c, (1,) * i) for i, c in self.P2]
        if (a, b) == (2, 0):
            return [(c, (1,) * i) for i, c in self.P2hat]
        if (a, b) == (0, 3):
            return self.x0x3
        return None

    def step(self, word):
        """One rewrite of a nonstandard word: list of ``(coeff, word)``."""
        for p in range(len(word) - 1):
            r = self.rule(word[p], word[p + 1])
            if r is not None:
                return [(c, word[:p] + w + word[p + 2:]) for c, w in r]
        # sorted: X_1^a X_2^b X_3^c X_0^e with a forbidden co-occurrence
        n1, n2, n3 = word.count(1), word.count(2), word.count(3)
        if n1 and n3:
            # X_1 X_2^b X_3 = q^b X_1 X_3 X_2^b = q^b P1(X_2) X_2^b
            head, tail = word[: n1 - 1], word[n1 + n2 + 1:]
            mid = (2,) * n2
            return [(c.shift(2 * n2), head + (2,) * i + mid + tail) for i, c in self.P1]
        if n2 and word.count(0):
            # X_2 X_3^c X_0 = q^c X_3^c X_2 X_0 = q^c X_3^c P2hat(X_1)
            start = n1 + n2 - 1
            head, tail = word[:start], word[start + n3 + 2:]
            mid = (3,) * n3
            return [
                (c.shift(2 * n3), head + mid + (1,) * i + tail) for i, c in self.P2hat
            ]
        raise AssertionError(f"word {word} is standard")


def reduce_to_standard(S, expr):
    """Rewrite a combination of words in ``X_0..X_3`` into standard monomials.

    ``expr`` is a mapping (or iterable of pairs) ``word -> coefficient`` where
    a word is a sequence of indices in ``{0, 1, 2, 3}``.  Returns a sorted list
    of ``(StandardMonomial, QLaurent)`` with nonzero coefficients.
    """
    rw = _Rewriter(S.p1, S.p2)
    items = expr.items() if hasattr(expr, "items") else expr
    pending = {}
    for word, coeff in items:
        word = tuple(word)
        if any(x not in _POS for x in word):
            raise ValueError(f"letters must be in 0..3, got {word}")
        pending[word] = pending.get(word, QLaurent()) + _ql(coeff)
    result = {}
    while pending:
        word, coeff = pending.popitem()
        if not coeff:
            continue
        key = _standard_key(word)
        if key is not None:
            result[key] = result.get(key, QLaurent()) + coeff
            continue
        for c, w in rw.step(word):
            pending[w] = pending.get(w, QLaurent()) + coeff * c
    return sorted((k, v) for k, v in result.items() if v)


def expand_word(S, word):
    """Torus expansion of the product ``X_{w_1} X_{w_2} ...``."""
    out = TorusElement.one(S.lam)
    for i in word:
        out = out * cluster_var(S, i)
    return out


def fraction_free_rank(rows):
    """Rank over ``Q(q^(1/2))`` of a matrix with QLaurent entries (Bareiss)."""
    M = [[_ql(x) for x in row] for row in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    prev = QLaurent(1)
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        candidates = [r for r in range(rank, nrows) if M[r][col]]
        if not candidates:
            continue
        # unit pivots keep entries small
        piv = min(candidates, key=lambda r: (not M[r][col].is_unit(), len(M[r][col])))
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nrows):
            a = M[r][col]
            row, prow = M[r], M[rank]
            for c in range(col + 1, ncols):
                v = p * row[c] - a * prow[c]
                row[c] = ql_exact_div(v, prev) if v else v
            row[col] = QLaurent()
        prev = p
        rank += 1
    return rank


def standard_basis_check(S, bound, span_bound=None):
    """Verify spanning and independence of standard monomials at bounded degree.

    SPAN: every product of two standard monomials of degree <= ``span_bound``
    (default ``bound // 2``, at least 1) reduces to standard form and the
    reduction re-expands to the directly computed torus product.
    INDEPENDENCE: the torus expansions of all standard monomials of degree
    <= ``bound`` have full rank.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if span_bound is None:
        span_bound = max(1, bound // 2)
    report = Report()
    mons = standard_monomials(bound)
    report.info["count"] = len(mons)
    expansions = {mon: expand_word(S, mon.word()) for mon in standard_monomials(max(bound, span_bound))}

    for a, b in itertools.product(standard_monomials(span_bound), repeat=2):
        direct = expansions[a] * expansions[b]
        reduced = reduce_to_standard(S, {a.word() + b.word(): 1})
        back = TorusElement.zero(S.lam)
        for mon, c in reduced:
            if mon not in expansions:
                expansions[mon] = expand_word(S, mon.word())
            back = back + expansions[mon].scale(c)
        report.record("span", back == direct, f"{a} * {b} does not round-trip")

    columns = sorted({c for mon in mons for c in expansions[mon]._terms})
    matrix = [[expansions[mon].coeff(c) for c in columns] for mon in mons]
    rank = fraction_free_rank(matrix)
    report.info["rank"] = rank
    report.record("independence", rank == len(mons), f"rank {rank} < {len(mons)}")
    return report
