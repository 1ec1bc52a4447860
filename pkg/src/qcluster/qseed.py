"""Compatible pairs, matrix mutation and quantum seed mutation.

Mutation directions ``k`` are 1-based (``1 <= k <= n``), matching the usual
mathematical indexing of exchange matrices.
"""

from fractions import Fraction
from math import lcm

from .errors import DimensionMismatch, NotCompatible
from .qcoeff import QLaurent
from .qtorus import SkewMatrix, TorusElement, left_divide_exact, normal_order
from .report import Report

__all__ = [
    "ExtExchangeMatrix",
    "CompatiblePair",
    "QuantumSeed",
    "skew_symmetrizer",
    "check_compatible",
    "mutate_B",
    "build_E",
    "mutate_Lambda",
    "mutate_seed",
    "frame_monomial",
    "verify_seed",
]


def _pos(x):
    return x if x > 0 else 0


def skew_symmetrizer(B):
    """Positive integer diagonal ``s`` with ``s_i b_ij = -s_j b_ji``, or None."""
    n = len(B)
    s = [None] * n
    for root in range(n):
        if s[root] is not None:
            continue
        s[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j:
                    continue
                bij, bji = B[i][j], B[j][i]
                if (bij == 0) != (bji == 0):
                    return None
                if bij == 0:
                    continue
                if (bij > 0) == (bji > 0):
                    return None
                sj = -s[i] * bij / bji
                if s[j] is None:
                    s[j] = sj
                    stack.append(j)
                elif s[j] != sj:
                    return None
    for i in range(n):
        if B[i][i] != 0:
            return None
    scale = lcm(*(x.denominator for x in s)) if n else 1
    return tuple(int(x * scale) for x in s)


class ExtExchangeMatrix:
    """An ``m x n`` extended exchange matrix with divisibility vector ``d``."""

    __slots__ = ("rows", "d")

    def __init__(self, rows, d=None):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if not rows or not rows[0]:
            raise ValueError("exchange matrix must be nonempty")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged exchange matrix")
        if len(rows) < n:
            raise ValueError(f"need m >= n, got m={len(rows)}, n={n}")
        d = (1,) * n if d is None else tuple(int(x) for x in d)
        if len(d) != n:
            raise ValueError(f"d must have {n} entries")
        if any(x <= 0 for x in d):
            raise ValueError("d entries must be positive")
        if skew_symmetrizer([r[:n] for r in rows[:n]]) is None:
            raise ValueError("principal part is not skew-symmetrizable")
        for k in range(n):
            for j, row in enumerate(rows):
                if row[k] % d[k]:
                    raise ValueError(
                        f"d_{k + 1} = {d[k]} does not divide b_{j + 1}{k + 1} = {row[k]}"
                    )
        self.rows = rows
        self.d = d

    @property
    def m(self):
        return len(self.rows)

    @property
    def n(self):
        return len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, k):
        """0-based column."""
        return tuple(r[k] for r in self.rows)

    def beta(self, j, k):
        """``b_jk / d_k`` (0-based indices); exact by the divisibility condition."""
        return self.rows[j][k] // self.d[k]

    def tolist(self):
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, ExtExchangeMatrix)
            and self.rows == other.rows
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.rows, self.d))

    def __repr__(self):
        return f"ExtExchangeMatrix({self.tolist()}, d={list(self.d)})"


def _check_direction(B, k):
    if not 1 <= k <= B.n:
        raise IndexError(f"mutation direction {k} outside 1..{B.n}")


def check_compatible(lam, B):
    """Return the diagonal of ``D`` when ``-Lambda B~ = [D; 0]`` with ``D > 0``.

    Raises :class:`NotCompatible` naming the first violating entry.
    """
    lam = lam if isinstance(lam, SkewMatrix) else SkewMatrix(lam)
    if lam.dim != B.m:
        raise DimensionMismatch(f"Lambda is {lam.dim}x{lam.dim} but B~ has {B.m} rows")
    m, n = B.m, B.n
    D = []
    for i in range(m):
        for k in range(n):
            v = -sum(lam.rows[i][j] * B.rows[j][k] for j in range(m))
            where = (i + 1, k + 1)
            if i >= n:
                if v:
                    raise NotCompatible(
                        f"lower block entry {where} of -Lambda*B~ is {v}, expected 0",
                        entry=where,
                        block="lower",
                    )
            elif i == k:
                if v <= 0:
                    raise NotCompatible(
                        f"diagonal entry {where} of -Lambda*B~ is {v}, expected > 0",
                        entry=where,
                        block="diagonal",
                    )
                D.append(v)
            elif v:
                raise NotCompatible(
                    f"off-diagonal entry {where} of -Lambda*B~ is {v}, expected 0",
                    entry=where,
                    block="off-diagonal",
                )
    return tuple(D)


class CompatiblePair:
    __slots__ = ("lam", "bmat", "D")

    def __init__(self, lam, bmat):
        self.lam = lam if isinstance(lam, SkewMatrix) else SkewMatrix(lam)
        self.bmat = bmat
        self.D = check_compatible(self.lam, bmat)

    def __eq__(self, other):
        return (
            isinstance(other, CompatiblePair)
            and self.lam == other.lam
            and self.bmat == other.bmat
        )

    def __repr__(self):
        return f"CompatiblePair({self.lam.tolist()}, {self.bmat!r})"


def mutate_B(B, k):
    """Matrix mutation in direction ``k``; ``d`` is unchanged."""
    _check_direction(B, k)
    k -= 1
    rows = B.rows
    out = []
    for i, row in enumerate(rows):
        new = []
        for j, bij in enumerate(row):
            if i == k or j == k:
                new.append(-bij)
            else:
                bik, bkj = row[k], rows[k][j]
                new.append(bij + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        out.append(new)
    return ExtExchangeMatrix(out, B.d)


def build_E(B, k, eps=1):
    """Identity except column ``k``, which becomes ``([-eps b_ik]_+)`` with ``-1`` at ``k``."""
    _check_direction(B, k)
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    k -= 1
    m = B.m
    E = [[int(i == j) for j in range(m)] for i in range(m)]
    for i in range(m):
        E[i][k] = -1 if i == k else _pos(-eps * B.rows[i][k])
    return E


def _conjugate(lam, E):
    m = len(E)
    LE = [[sum(lam[i][t] * E[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
    return [[sum(E[t][i] * LE[t][j] for t in range(m)) for j in range(m)] for i in range(m)]


def mutate_Lambda(pair, k, eps=1):
    """``E_eps^T Lambda E_eps``."""
    E = build_E(pair.bmat, k, eps)
    return SkewMatrix(_conjugate(pair.lam.rows, E))


def _mutate_pair(pair, k):
    return CompatiblePair(mutate_Lambda(pair, k), mutate_B(pair.bmat, k))


class QuantumSeed:
    """Compatible pair, coefficient strings and a toric frame.

    ``frame[i]`` is the current ``X'(e_{i+1})`` expressed in the coordinates
    of the initial quantum torus.  ``h[k]`` lists ``h_{k,0} .. h_{k,d_k}``.
    """

    __slots__ = ("pair", "h", "frame")

    def __init__(self, pair, h, frame=None, validate=True):
        self.pair = pair
        self.h = tuple(tuple(x if isinstance(x, QLaurent) else QLaurent(x) for x in s) for s in h)
        B = pair.bmat
        if len(self.h) != B.n:
            raise ValueError(f"need {B.n} coefficient strings, got {len(self.h)}")
        if validate:
            for k, (s, dk) in enumerate(zip(self.h, B.d)):
                if len(s) != dk + 1:
                    raise ValueError(f"h_{k + 1} needs {dk + 1} entries, got {len(s)}")
                if not (s[0].is_one() and s[-1].is_one()):
                    raise ValueError(f"h_{k + 1} must start and end with 1")
                if s != s[::-1]:
                    raise ValueError(f"h_{k + 1} is not palindromic")
        if frame is None:
            frame = [TorusElement.generator(pair.lam, i) for i in range(B.m)]
        self.frame = tuple(frame)
        if len(self.frame) != B.m:
            raise ValueError(f"frame must have {B.m} elements")

    @classmethod
    def initial(cls, lam, bmat, h):
        return cls(CompatiblePair(lam, bmat), h)

    @property
    def lam(self):
        return self.pair.lam

    @property
    def bmat(self):
        return self.pair.bmat

    @property
    def torus(self):
        """The initial torus the frame is written in."""
        return self.frame[0].lam

    def __eq__(self, other):
        return (
            isinstance(other, QuantumSeed)
            and self.pair == other.pair
            and self.h == other.h
            and self.frame == other.frame
        )

    def __repr__(self):
        return f"QuantumSeed(lam={self.lam.tolist()}, B={self.bmat.tolist()}, d={list(self.bmat.d)})"


def _ordered_product(S, c, powers):
    """``q^(no/2) G_1^c1 ... G_m^cm`` for nonnegative ``c``."""
    out = None
    for i, ci in enumerate(c):
        if not ci:
            continue
        key = (i, ci)
        if key not in powers:
            powers[key] = S.frame[i] ** ci
        out = powers[key] if out is None else out * powers[key]
    if out is None:
        return TorusElement.one(S.torus)
    return out.scale(QLaurent.monomial(normal_order(S.lam, c)))


def frame_monomial(S, c, _powers=None):
    """``X'(c)`` for the seed's toric frame, in initial torus coordinates.

    Negative parts are removed by one exact left division:
    ``X'(c) = X'(n)^(-1) q^(Lambda'(n, c)/2) X'(p)`` with ``c = p - n``.
    """
    c = tuple(c)
    if len(c) != S.bmat.m:
        raise DimensionMismatch(f"expected a vector of length {S.bmat.m}")
    powers = {} if _powers is None else _powers
    pos = tuple(_pos(x) for x in c)
    neg = tuple(_pos(-x) for x in c)
    top = _ordered_product(S, pos, powers)
    if not any(neg):
        return top
    shifted = top.scale(QLaurent.monomial(S.lam.form(neg, c)))
    return left_divide_exact(shifted, _ordered_product(S, neg, powers))


def mutate_seed(S, k):
    """Quantum seed mutation in direction ``k`` (1-based)."""
    B = S.bmat
    _check_direction(B, k)
    k0 = k - 1
    dk = B.d[k0]
    beta = [B.beta(j, k0) for j in range(B.m)]
    ek = tuple(int(j == k0) for j in range(B.m))

    # X'(w - e_k) = X'(e_k)^(-1) q^(Lambda(e_k, w)/2) X'(w); sum first, then
    # divide once, since single summands need not be Laurent.
    powers = {}
    numerator = TorusElement.zero(S.torus)
    for r, hr in enumerate(S.h[k0]):
        w = tuple(r * _pos(b) + (dk - r) * _pos(-b) for b in beta)
        term = frame_monomial(S, w, powers)
        numerator = numerator + term.scale(hr.shift(S.lam.form(ek, w)))
    new_k = left_divide_exact(numerator, S.frame[k0])

    frame = list(S.frame)
    frame[k0] = new_k
    # h'_{k,r} = h_{k,d_k-r}, which is h itself for palindromic strings
    h = list(S.h)
    h[k0] = tuple(reversed(S.h[k0]))
    return QuantumSeed(_mutate_pair(S.pair, k), h, frame, validate=False)


def verify_seed(S):
    """Check compatibility, palindromic strings and frame quasi-commutation."""
    report = Report()
    B = S.bmat
    try:
        D = check_compatible(S.lam, B)
        report.info["D"] = D
        report.record("compatible", True)
    except NotCompatible as exc:
        report.record("compatible", False, str(exc))

    for k, (s, dk) in enumerate(zip(S.h, B.d)):
        ok = len(s) == dk + 1 and s[0].is_one() and s[-1].is_one() and s == s[::-1]
        report.record("palindromic", ok, f"h_{k + 1} = {[str(x) for x in s]}")

    m = B.m
    for i in range(m):
        for j in range(i + 1, m):
            lhs = S.frame[i] * S.frame[j]
            rhs = (S.frame[j] * S.frame[i]).scale(QLaurent.monomial(2 * S.lam[i, j]))
            report.record(
                "quasi-commutation",
                lhs == rhs,
                f"X'(e_{i + 1}) X'(e_{j + 1}) != q^{S.lam[i, j]} X'(e_{j + 1}) X'(e_{i + 1})",
            )

    for j in range(B.n, m):
        report.record(
            "frozen",
            S.frame[j] == TorusElement.generator(S.torus, j),
            f"frozen X'(e_{j + 1}) differs from the initial generator",
        )
    return report
