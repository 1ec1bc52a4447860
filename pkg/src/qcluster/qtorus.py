"""The quantum torus ``T(Lambda)`` over ``Z[q^(+-1/2)]``.

Basis elements ``X(c)``, ``c`` in ``Z^m``, multiply as
``X(c) X(d) = q^(Lambda(c, d)/2) X(c + d)``.  Elements are sparse maps from
exponent tuples to nonzero :class:`QLaurent` coefficients.
"""

import heapq
from numbers import Integral

from .errors import DimensionMismatch, NotDivisible
from .qcoeff import QLaurent, ql_exact_div

__all__ = [
    "SkewMatrix",
    "TorusElement",
    "basis_mul",
    "normal_order",
    "el_mul",
    "el_bar",
    "left_divide_exact",
    "right_divide_exact",
]


class SkewMatrix:
    """An integer skew-symmetric matrix, used as the bilinear form ``c^T L d``."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        m = len(rows)
        if m == 0:
            raise ValueError("skew matrix must be nonempty")
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ValueError(f"row {i + 1} has length {len(row)}, expected {m}")
        for i in range(m):
            for j in range(i, m):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(
                        f"not skew-symmetric at entry ({i + 1}, {j + 1}): "
                        f"{rows[i][j]} vs {rows[j][i]}"
                    )
        self.rows = rows

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def form(self, c, d):
        """``Lambda(c, d) = c^T Lambda d``."""
        m = self.dim
        if len(c) != m or len(d) != m:
            raise DimensionMismatch(f"expected vectors of length {m}")
        total = 0
        for i, ci in enumerate(c):
            if ci:
                row = self.rows[i]
                total += ci * sum(r * x for r, x in zip(row, d))
        return total

    def covector(self, c):
        """The row vector ``c^T Lambda``."""
        m = self.dim
        out = [0] * m
        for i, ci in enumerate(c):
            if ci:
                row = self.rows[i]
                for j in range(m):
                    out[j] += ci * row[j]
        return tuple(out)

    def tolist(self):
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, SkewMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SkewMatrix({self.tolist()})"


def _as_skew(lam):
    return lam if isinstance(lam, SkewMatrix) else SkewMatrix(lam)


def basis_mul(lam, c, d):
    """Return ``(halfpow, c + d)`` with ``X(c) X(d) = q^(halfpow/2) X(c + d)``."""
    lam = _as_skew(lam)
    halfpow = lam.form(c, d)
    return halfpow, tuple(x + y for x, y in zip(c, d))


def normal_order(lam, c):
    """Half-power relating ``X(c)`` to the ordered product ``X_1^c1 ... X_m^cm``.

    ``X(c) = q^(h/2) X_1^c1 ... X_m^cm`` where ``h = sum_{l<k} c_k c_l lam_kl``.
    """
    lam = _as_skew(lam)
    if len(c) != lam.dim:
        raise DimensionMismatch(f"expected a vector of length {lam.dim}")
    total = 0
    for k in range(len(c)):
        if c[k]:
            row = lam.rows[k]
            for l in range(k):
                total += c[k] * c[l] * row[l]
    return total


def _add_into(acc, coeffs, shift=0, scale=1):
    for e, c in coeffs.items():
        k = e + shift
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


class TorusElement:
    """A finite ``Z[q^(+-1/2)]``-combination of basis elements ``X(c)``."""

    __slots__ = ("lam", "_terms")

    def __init__(self, lam, terms=None):
        self.lam = _as_skew(lam)
        m = self.lam.dim
        clean = {}
        for c, coeff in (terms or {}).items():
            c = tuple(int(x) for x in c)
            if len(c) != m:
                raise DimensionMismatch(f"exponent {c} does not have length {m}")
            coeff = coeff if isinstance(coeff, QLaurent) else QLaurent(coeff)
            if coeff:
                clean[c] = clean[c] + coeff if c in clean else coeff
                if not clean[c]:
                    del clean[c]
        self._terms = clean

    @classmethod
    def _raw(cls, lam, terms):
        obj = cls.__new__(cls)
        obj.lam = lam
        obj._terms = terms
        return obj

    @classmethod
    def basis(cls, lam, c, coeff=1):
        """``coeff * X(c)``."""
        lam = _as_skew(lam)
        return cls(lam, {tuple(c): coeff})

    @classmethod
    def one(cls, lam):
        lam = _as_skew(lam)
        return cls(lam, {(0,) * lam.dim: 1})

    @classmethod
    def zero(cls, lam):
        return cls(lam)

    @classmethod
    def generator(cls, lam, i):
        """``X_i = X(e_i)`` with 0-based ``i``."""
        lam = _as_skew(lam)
        c = [0] * lam.dim
        c[i] = 1
        return cls(lam, {tuple(c): 1})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, c):
        return self._terms.get(tuple(c), QLaurent())

    def support(self):
        return sorted(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def leading(self):
        """Lex-largest ``(exponent, coefficient)``."""
        c = max(self._terms)
        return c, self._terms[c]

    def _check(self, other):
        if self.lam != other.lam:
            raise DimensionMismatch("elements live in different quantum tori")

    def _lift(self, other):
        if isinstance(other, TorusElement):
            self._check(other)
            return other
        if isinstance(other, (Integral, QLaurent)):
            return TorusElement.basis(self.lam, (0,) * self.lam.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for c, a in other._terms.items():
            if c in out:
                s = out[c] + a
                if s:
                    out[c] = s
                else:
                    del out[c]
            else:
                out[c] = a
        return TorusElement._raw(self.lam, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement._raw(self.lam, {c: -a for c, a in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        """Multiply every coefficient by the central scalar ``s``."""
        s = s if isinstance(s, QLaurent) else QLaurent(s)
        if not s:
            return TorusElement._raw(self.lam, {})
        return TorusElement._raw(self.lam, {c: a * s for c, a in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Integral, QLaurent)):
            return self.scale(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return el_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (Integral, QLaurent)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            if len(self._terms) != 1:
                raise NotDivisible("only single-term elements have torus inverses")
            ((c, a),) = self._terms.items()
            inv = ql_exact_div(QLaurent(1), a)
            return TorusElement.basis(self.lam, tuple(-x for x in c), inv) ** (-n)
        result = TorusElement.one(self.lam)
        base = self
        while n:
            if n & 1:
                result = el_mul(result, base)
            n >>= 1
            if n:
                base = el_mul(base, base)
        return result

    def bar(self):
        return el_bar(self)

    def specialize_one(self):
        """Coefficients at ``q^(1/2) = 1``, zeros dropped."""
        out = {}
        for c, a in self._terms.items():
            v = a.eval_one()
            if v:
                out[c] = v
        return out

    def __eq__(self, other):
        if isinstance(other, (Integral, QLaurent)):
            other = self._lift(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.lam == other.lam and self._terms == other._terms

    def __hash__(self):
        return hash((self.lam, frozenset(self._terms.items())))

    def to_json(self):
        return {
            "lambda": self.lam.tolist(),
            "terms": [
                {"exp": list(c), "coeff": self._terms[c].to_pairs()}
                for c in sorted(self._terms)
            ],
        }

    @classmethod
    def from_json(cls, obj):
        lam = SkewMatrix(obj["lambda"])
        terms = {}
        for t in obj["terms"]:
            c = tuple(t["exp"])
            terms[c] = terms.get(c, QLaurent()) + QLaurent.from_pairs(t["coeff"])
        return cls(lam, terms)

    def __repr__(self):
        return f"TorusElement({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for c in sorted(self._terms, reverse=True):
            a = self._terms[c]
            mono = "X(" + ",".join(str(x) for x in c) + ")"
            sign = "+"
            if len(a) == 1 and next(iter(a.items()))[1] < 0:
                sign, a = "-", -a
            if a.is_one():
                body = mono
            elif len(a) == 1:
                body = f"{a}*{mono}"
            else:
                body = f"({a})*{mono}"
            if out:
                out += f" {sign} {body}"
            else:
                out = body if sign == "+" else "-" + body
        return out


# Coefficients are multiplied by Kronecker substitution: a Laurent polynomial
# sum c_e t^e (t = q^(1/2)) is evaluated at t = 2^bits relative to a base
# exponent, so a coefficient product becomes one big-integer product.  With
# |c| < 2^(bits-1) for every output coefficient the signed digits decode back
# uniquely.


def _l1(terms):
    return sum(abs(c) for a in terms.values() for c in a._terms.values())


def _pack(coeffs, base, bits):
    return sum(c << (bits * (e - base)) for e, c in coeffs.items())


def _unpack(v, base, bits):
    out = {}
    if not v:
        return out
    low = (v & -v).bit_length() - 1
    skip = low // bits
    v >>= bits * skip
    e = base + skip
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    full = 1 << bits
    while v:
        dgt = v & mask
        if dgt >= half:
            dgt -= full
        if dgt:
            out[e] = dgt
        v = (v - dgt) >> bits
        e += 1
    return out


def el_mul(A, B):
    """Product in the quantum torus, extended bilinearly from the basis rule."""
    A._check(B)
    lam = A.lam
    if not A._terms or not B._terms:
        return TorusElement._raw(lam, {})
    bits = (_l1(A._terms) * _l1(B._terms)).bit_length() + 2
    amin = min(a.min_exp() for a in A._terms.values())
    bmin = min(b.min_exp() for b in B._terms.values())
    m = lam.dim
    dlo = [min(d[i] for d in B._terms) for i in range(m)]
    dhi = [max(d[i] for d in B._terms) for i in range(m)]
    bterms = [(d, _pack(b._terms, bmin, bits)) for d, b in B._terms.items()]
    aterms = []
    smin = None
    for c, a in A._terms.items():
        w = lam.covector(c)
        # lower bound for w . d over the bounding box of B's support
        low = sum(min(x * lo, x * hi) for x, lo, hi in zip(w, dlo, dhi))
        smin = low if smin is None else min(smin, low)
        aterms.append((c, w, _pack(a._terms, amin, bits)))
    acc = {}
    for c, w, pa in aterms:
        for d, pb in bterms:
            s = 0
            for wi, di in zip(w, d):
                s += wi * di
            key = tuple(x + y for x, y in zip(c, d))
            acc[key] = acc.get(key, 0) + ((pa * pb) << (bits * (s - smin)))
    base = amin + bmin + smin
    out = {}
    for key, v in acc.items():
        if v:
            out[key] = QLaurent._raw(_unpack(v, base, bits))
    return TorusElement._raw(lam, out)


def el_bar(A):
    """Bar involution: ``q^(1/2) -> q^(-1/2)`` on coefficients, ``X(c)`` fixed."""
    return TorusElement._raw(A.lam, {c: a.bar() for c, a in A._terms.items()})


def _box(T, D):
    m = T.lam.dim
    tsup, dsup = T._terms.keys(), D._terms.keys()
    lo, hi = [], []
    for i in range(m):
        tv = [c[i] for c in tsup]
        dv = [c[i] for c in dsup]
        lo.append(min(tv) - min(dv))
        hi.append(max(tv) - max(dv))
    return lo, hi


def _divide_packed(T, D, left, lo, hi):
    """Leading-term elimination on packed coefficients; None if it breaks down.

    Packed values are exact images of the true coefficients under
    ``t -> 2^bits``, but a too-small ``bits`` can make distinct values
    collide, so the caller verifies the quotient by multiplication.
    """
    lam = T.lam
    bits = (_l1(T._terms) * _l1(D._terms)).bit_length() + 16
    d0, lead = D.leading()
    lead_unit = lead.is_unit()
    if lead_unit:
        ((lead_e, lead_c),) = lead.items()
    dterms = [
        (dc, _pack(da._terms, da.min_exp(), bits), da.min_exp(), lam.covector(dc))
        for dc, da in D._terms.items()
    ]
    # rem[c] = (v, b): coefficient sum_e c_e t^e packed as v relative to base b
    rem = {c: (_pack(a._terms, a.min_exp(), bits), a.min_exp()) for c, a in T._terms.items()}
    heap = [tuple(-x for x in c) for c in rem]
    heapq.heapify(heap)
    quotient = {}
    while rem:
        r0 = tuple(-x for x in heapq.heappop(heap))
        entry = rem.pop(r0, None)
        if entry is None:
            continue
        s = tuple(x - y for x, y in zip(r0, d0))
        if any(x < a or x > b for x, a, b in zip(s, lo, hi)):
            return None
        twist = lam.form(d0, s) if left else lam.form(s, d0)
        v, b = entry
        if lead_unit:
            gv, gb = (v if lead_c == 1 else -v), b - lead_e - twist
        else:
            try:
                gamma = ql_exact_div(QLaurent._raw(_unpack(v, b, bits)), lead)
            except NotDivisible:
                return None
            gb = gamma.min_exp() - twist
            gv = _pack(gamma._terms, gamma.min_exp(), bits)
        quotient[s] = (gv, gb)
        ws = lam.covector(s)
        for dc, dv, db, wdc in dterms:
            if dc == d0:
                continue
            if left:
                tw = sum(x * y for x, y in zip(wdc, s))
            else:
                tw = sum(x * y for x, y in zip(ws, dc))
            key = tuple(x + y for x, y in zip(dc, s))
            cv, cb = -gv * dv, gb + db + tw
            old = rem.get(key)
            if old is None:
                rem[key] = (cv, cb)
                heapq.heappush(heap, tuple(-x for x in key))
                continue
            ov, ob = old
            if ob > cb:
                ov <<= bits * (ob - cb)
                ob = cb
            elif cb > ob:
                cv <<= bits * (cb - ob)
            nv = ov + cv
            if nv:
                rem[key] = (nv, ob)
            else:
                del rem[key]
    out = {}
    for s, (v, b) in quotient.items():
        out[s] = QLaurent._raw(_unpack(v, b, bits))
    return TorusElement._raw(lam, out)


def _divide(T, D, left):
    T._check(D)
    if D.is_zero():
        raise ZeroDivisionError("division by the zero torus element")
    lam = T.lam
    if T.is_zero():
        return TorusElement._raw(lam, {})

    # The torus is a domain, so extreme coordinates add under multiplication;
    # any quotient is therefore confined to this box, which bounds the loop.
    lo, hi = _box(T, D)
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisible("support of the dividend is too small for the divisor")
    Q = _divide_packed(T, D, left, lo, hi)
    if Q is not None and (el_mul(D, Q) if left else el_mul(Q, D)) == T:
        return Q
    return _divide_exact_path(T, D, left, lo, hi)


def _divide_exact_path(T, D, left, lo, hi):
    lam = T.lam
    d0, lead = D.leading()
    dterms = [(dc, da._terms, lam.covector(dc)) for dc, da in D._terms.items()]
    rem = {c: dict(a._terms) for c, a in T._terms.items()}
    heap = [tuple(-x for x in c) for c in rem]
    heapq.heapify(heap)
    quotient = {}

    while rem:
        r0 = tuple(-x for x in heapq.heappop(heap))
        if r0 not in rem:
            continue
        s = tuple(x - y for x, y in zip(r0, d0))
        if any(x < a or x > b for x, a, b in zip(s, lo, hi)):
            raise NotDivisible(
                f"remainder term X{r0} cannot be reduced within the quotient bounds"
            )
        twist = lam.form(d0, s) if left else lam.form(s, d0)
        gamma = ql_exact_div(QLaurent._raw(rem[r0]), lead).shift(-twist)
        quotient[s] = gamma
        g = gamma._terms
        ws = lam.covector(s)
        for dc, da, wdc in dterms:
            if left:
                tw = sum(x * y for x, y in zip(wdc, s))
            else:
                tw = sum(x * y for x, y in zip(ws, dc))
            key = tuple(x + y for x, y in zip(dc, s))
            slot = rem.get(key)
            fresh = slot is None
            if fresh:
                slot = {}
            for e1, c1 in da.items():
                for e2, c2 in g.items():
                    k = e1 + e2 + tw
                    v = slot.get(k, 0) - c1 * c2
                    if v:
                        slot[k] = v
                    else:
                        slot.pop(k, None)
            if slot:
                if fresh:
                    rem[key] = slot
                    heapq.heappush(heap, tuple(-x for x in key))
            elif not fresh:
                del rem[key]
    return TorusElement._raw(lam, quotient)


def left_divide_exact(T, D):
    """Return ``S`` with ``D * S == T``; raise :class:`NotDivisible` otherwise."""
    return _divide(T, D, left=True)


def right_divide_exact(T, D):
    """Return ``S`` with ``S * D == T``; raise :class:`NotDivisible` otherwise."""
    return _divide(T, D, left=False)
