"""Integer Laurent polynomials in ``q^(1/2)``.

A :class:`QLaurent` stores a sparse map ``e -> c`` meaning ``c * q^(e/2)``.
Exponents are kept in half-units so every operation is integer arithmetic.
"""

from numbers import Integral

from .errors import NotDivisible

__all__ = ["QLaurent", "ql_mul", "ql_bar", "ql_eval_one", "ql_exact_div"]


def _clean(terms):
    return {e: c for e, c in terms.items() if c}


class QLaurent:
    """An element of ``Z[q^(+-1/2)]`` in canonical (zero-free) form.

    >>> t = QLaurent.monomial(1)
    >>> (1 + t) * (1 - t)
    QLaurent('1 - q')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, Integral):
            terms = {0: int(terms)}
        elif isinstance(terms, QLaurent):
            terms = terms._terms
        self._terms = _clean({int(e): int(c) for e, c in dict(terms).items()})
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, e, c=1):
        """``c * q^(e/2)``."""
        return cls._raw({e: c} if c else {})

    @classmethod
    def from_pairs(cls, pairs):
        terms = {}
        for e, c in pairs:
            terms[int(e)] = terms.get(int(e), 0) + int(c)
        return cls(terms)

    def to_pairs(self):
        """Sorted ``[[e, c], ...]`` encoding used in all JSON formats."""
        return [[e, self._terms[e]] for e in sorted(self._terms)]

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_unit(self):
        """True for ``+-q^(e/2)``, the units of the ring."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1)

    def is_one(self):
        return self._terms == {0: 1}

    def min_exp(self):
        return min(self._terms)

    def max_exp(self):
        return max(self._terms)

    # ring operations

    def _coerce(self, other):
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, Integral):
            return QLaurent._raw({0: int(other)} if other else {})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return QLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return QLaurent._raw(_clean(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_unit():
                raise NotDivisible(f"{self!r} is not a unit")
            ((e, c),) = self._terms.items()
            return QLaurent._raw({e * n: c ** (-n)})
        result = QLaurent._raw({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, e):
        """Multiply by ``q^(e/2)``."""
        if not e:
            return self
        return QLaurent._raw({k + e: c for k, c in self._terms.items()})

    def bar(self):
        """The involution ``q^(1/2) -> q^(-1/2)``."""
        return QLaurent._raw({-e: c for e, c in self._terms.items()})

    def eval_one(self):
        """Specialize at ``q^(1/2) = 1``."""
        return sum(self._terms.values())

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"QLaurent({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            if e == 0:
                mono = ""
            elif e == 2:
                mono = "q"
            elif e % 2 == 0:
                mono = f"q^{e // 2}"
            else:
                mono = f"q^({e}/2)"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def exact_div(self, other):
        return ql_exact_div(self, other)


def ql_mul(a, b):
    return a * b


def ql_bar(a):
    return a.bar()


def ql_eval_one(a):
    return a.eval_one()


def ql_exact_div(a, b):
    """Return ``a / b`` when it lies in ``Z[q^(+-1/2)]``.

    Raises :class:`ZeroDivisionError` for ``b == 0`` and
    :class:`NotDivisible` when the quotient is not a Laurent polynomial.
    """
    if isinstance(b, Integral):
        b = QLaurent(b)
    if not b:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not a:
        return QLaurent()
    if len(b) == 1:
        ((eb, cb),) = b.items()
        out = {}
        for e, c in a.items():
            qt, r = divmod(c, cb)
            if r:
                raise NotDivisible(f"{a} is not divisible by {b}")
            out[e - eb] = qt
        return QLaurent._raw(out)

    # long division from the top degree; both sides normalized to polynomials
    # in t = q^(1/2) with nonzero constant term
    amin, bmin = a.min_exp(), b.min_exp()
    bdeg = b.max_exp() - bmin
    blead = b._terms[b.max_exp()]
    bpoly = {e - bmin: c for e, c in b.items()}
    rem = {e - amin: c for e, c in a.items()}
    quot = {}
    while rem:
        top = max(rem)
        if top < bdeg:
            raise NotDivisible(f"{a} is not divisible by {b}")
        qc, r = divmod(rem[top], blead)
        if r:
            raise NotDivisible(f"{a} is not divisible by {b}")
        shift = top - bdeg
        quot[shift] = qc
        for e, c in bpoly.items():
            k = e + shift
            v = rem.get(k, 0) - qc * c
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return QLaurent._raw({e + amin - bmin: c for e, c in quot.items()})
