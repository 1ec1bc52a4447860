"""JSON encodings for seeds and rank-two problems.

A coefficient is a sorted list of ``[e, c]`` pairs meaning ``c q^(e/2)``.
Coefficient strings may be given in full (``h_0 .. h_d``) or by their
interior (``h_1 .. h_{d-1}``).
"""

import json

from .qcoeff import QLaurent
from .qseed import CompatiblePair, ExtExchangeMatrix, QuantumSeed
from .qtorus import SkewMatrix, TorusElement
from .ranktwo import ExchangePolynomial

__all__ = [
    "InputError",
    "SeedData",
    "parse_qlaurent",
    "parse_string",
    "load_seed_data",
    "seed_to_json",
    "load_rank_two",
    "dumps",
    "read_json",
]


class InputError(ValueError):
    """Malformed or invalid input file."""


def dumps(obj):
    """Canonical JSON text: identical data gives identical bytes."""
    return json.dumps(obj, sort_keys=True) + "\n"


def read_json(source):
    if isinstance(source, dict):
        return source
    try:
        if hasattr(source, "read"):
            return json.load(source)
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def parse_qlaurent(obj):
    if isinstance(obj, int) and not isinstance(obj, bool):
        return QLaurent(obj)
    try:
        return QLaurent.from_pairs((e, c) for e, c in obj)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad coefficient {obj!r}: expected [[e, c], ...]") from exc


def parse_string(obj, d, name):
    """Full palindromic string ``h_0 .. h_d`` from either accepted form."""
    if not isinstance(obj, list):
        raise InputError(f"{name}: expected a list of coefficients")
    h = [parse_qlaurent(x) for x in obj]
    if len(h) == d - 1:
        h = [QLaurent(1)] + h + [QLaurent(1)]
    if len(h) != d + 1:
        raise InputError(f"{name}: degree {d} needs {d + 1} (or {d - 1} interior) entries, got {len(h)}")
    if not (h[0].is_one() and h[-1].is_one()):
        raise InputError(f"{name}: h_0 and h_{d} must equal 1")
    for i in range(d + 1):
        if h[i] != h[d - i]:
            raise InputError(f"{name}: not palindromic, h_{i} = {h[i]} but h_{d - i} = {h[d - i]}")
    return h


class SeedData:
    """Parsed seed file before the compatibility check."""

    def __init__(self, lam, bmat, h, frame=None):
        self.lam = lam
        self.bmat = bmat
        self.h = h
        self.frame = frame

    def seed(self):
        """Build the quantum seed; raises NotCompatible for a bad pair."""
        return QuantumSeed(CompatiblePair(self.lam, self.bmat), self.h, self.frame, validate=False)


def load_seed_data(source):
    """Parse a seed file; structural problems raise :class:`InputError`."""
    obj = read_json(source)
    try:
        lam = SkewMatrix(_require(obj, "lambda", "seed"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"lambda: {exc}") from exc
    try:
        bmat = ExtExchangeMatrix(_require(obj, "btilde", "seed"), obj.get("d"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"btilde: {exc}") from exc
    for key, val in (("m", bmat.m), ("n", bmat.n)):
        if key in obj and obj[key] != val:
            raise InputError(f"{key} = {obj[key]} disagrees with btilde ({val})")
    if lam.dim != bmat.m:
        raise InputError(f"lambda is {lam.dim}x{lam.dim} but btilde has {bmat.m} rows")
    hs = _require(obj, "h", "seed")
    if not isinstance(hs, list) or len(hs) != bmat.n:
        raise InputError(f"h: expected {bmat.n} coefficient strings")
    h = [parse_string(s, dk, f"h_{k + 1}") for k, (s, dk) in enumerate(zip(hs, bmat.d))]
    frame = None
    if obj.get("frame") is not None:
        try:
            frame = [TorusElement.from_json(x) for x in obj["frame"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"frame: {exc}") from exc
        if len(frame) != bmat.m or len({x.lam for x in frame}) != 1:
            raise InputError(f"frame: expected {bmat.m} elements over one torus")
    return SeedData(lam, bmat, h, frame)


def seed_to_json(S):
    B = S.bmat
    return {
        "m": B.m,
        "n": B.n,
        "lambda": S.lam.tolist(),
        "btilde": B.tolist(),
        "d": list(B.d),
        "h": [[x.to_pairs() for x in s] for s in S.h],
        "frame": [x.to_json() for x in S.frame],
    }


def _load_poly(obj, name):
    d = _require(obj, "d", name)
    if not isinstance(d, int) or d < 1:
        raise InputError(f"{name}: degree must be a positive integer")
    h = parse_string(obj.get("h", []), d, name)
    return ExchangePolynomial(tuple(h))


def load_rank_two(source):
    """``(P1, P2, range or None)`` from a rank-two problem file."""
    obj = read_json(source)
    p1 = _load_poly(_require(obj, "p1", "problem"), "p1")
    p2 = _load_poly(_require(obj, "p2", "problem"), "p2")
    krange = obj.get("range")
    if krange is not None:
        if not (isinstance(krange, list) and len(krange) == 2 and all(isinstance(x, int) for x in krange)):
            raise InputError("range: expected [kmin, kmax]")
        if krange[0] > krange[1]:
            raise InputError("range: kmin exceeds kmax")
        krange = tuple(krange)
    return p1, p2, krange
