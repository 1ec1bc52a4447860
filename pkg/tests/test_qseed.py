import itertools
import random
from types import SimpleNamespace

import pytest

from oracles import ClassicalSeed, laurent_to_field
from qcluster import NotCompatible, QLaurent, SkewMatrix, TorusElement
from qcluster.fixtures import b2_seed
from qcluster.qseed import (
    CompatiblePair,
    ExtExchangeMatrix,
    QuantumSeed,
    build_E,
    check_compatible,
    frame_monomial,
    mutate_B,
    mutate_Lambda,
    mutate_seed,
    skew_symmetrizer,
    verify_seed,
)
from qcluster.sampling import random_seed

B2 = ExtExchangeMatrix([[0, 1], [-2, 0]], (2, 1))
ONE = QLaurent(1)


def X(lam, *c, coeff=1):
    return TorusElement.basis(lam, c, coeff)


def test_ext_exchange_matrix_validation():
    with pytest.raises(ValueError, match="skew-symmetrizable"):
        ExtExchangeMatrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError, match="divide"):
        ExtExchangeMatrix([[0, 1], [-2, 0]], (2, 2))
    with pytest.raises(ValueError, match="m >= n"):
        ExtExchangeMatrix([[0, 1, 1], [-1, 0, 1]])
    assert skew_symmetrizer([[0, 1], [-2, 0]]) == (2, 1)
    assert skew_symmetrizer([[0, 2], [2, 0]]) is None


def test_check_compatible_examples():
    assert check_compatible(SkewMatrix([[0, 1], [-1, 0]]), B2) == (2, 1)
    mutated = ExtExchangeMatrix([[0, -1], [2, 0]], (2, 1))
    assert check_compatible(SkewMatrix([[0, -1], [1, 0]]), mutated) == (2, 1)
    with pytest.raises(NotCompatible) as info:
        check_compatible(SkewMatrix([[0, 0], [0, 0]]), B2)
    assert info.value.block == "diagonal"


@pytest.mark.parametrize(
    "lam, rows, block, entry",
    [
        ([[0, 1], [-1, 0]], [[0, -1], [1, 0]], "diagonal", (1, 1)),
        ([[0, 1, 1], [-1, 0, 0], [-1, 0, 0]], [[0, 1], [-1, 0], [0, 0]], "lower", (3, 2)),
        ([[0, 1, 0], [-1, 0, 1], [0, -1, 0]], [[0, 1], [-1, 0], [0, 0]], "lower", (3, 1)),
        ([[0, 1, 1], [-1, 0, 0], [-1, 0, 0]], [[0, 1], [-1, 0], [0, 1]], "off-diagonal", (1, 2)),
    ],
)
def test_incompatible_blocks(lam, rows, block, entry):
    with pytest.raises(NotCompatible) as info:
        check_compatible(SkewMatrix(lam), ExtExchangeMatrix(rows))
    assert info.value.block == block
    assert info.value.entry == entry


def test_mutate_B_examples():
    assert mutate_B(B2, 1).tolist() == [[0, -1], [2, 0]]
    assert mutate_B(B2, 2).tolist() == [[0, -1], [2, 0]]
    B = ExtExchangeMatrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    assert mutate_B(B, 2).tolist() == [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]
    assert mutate_B(mutate_B(B, 2), 2) == B
    with pytest.raises(IndexError):
        mutate_B(B2, 3)


def test_build_E_examples():
    assert build_E(B2, 1, 1) == [[-1, 0], [2, 1]]
    assert build_E(B2, 1, -1) == [[-1, 0], [0, 1]]
    B = ExtExchangeMatrix([[0, 0], [0, 0], [0, 0]])
    assert build_E(B, 2) == [[1, 0, 0], [0, -1, 0], [0, 0, 1]]
    for eps in (1, -1):
        E = build_E(B2, 1, eps)
        square = [[sum(E[i][t] * E[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
        assert square == [[1, 0], [0, 1]]


def test_mutate_Lambda_examples():
    pair = CompatiblePair([[0, 1], [-1, 0]], B2)
    for eps in (1, -1):
        assert mutate_Lambda(pair, 1, eps).tolist() == [[0, -1], [1, 0]]
    twice = CompatiblePair(mutate_Lambda(pair, 1), mutate_B(B2, 1))
    assert mutate_Lambda(twice, 1) == pair.lam


def test_mutate_Lambda_trivial_direction():
    # column k of B~ vanishes and row/column k of Lambda vanish: Lambda' = Lambda
    lam = SkewMatrix([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    bmat = ExtExchangeMatrix([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    data = SimpleNamespace(lam=lam, bmat=bmat)
    assert mutate_Lambda(data, 3) == lam


def test_mutate_seed_b2():
    for h in (QLaurent(), QLaurent(1), QLaurent({-1: 1, 1: 1})):
        S = b2_seed(h)
        lam = S.torus
        S1 = mutate_seed(S, 1)
        assert S1.frame[0] == X(lam, -1, 0) + X(lam, -1, 1, coeff=h) + X(lam, -1, 2)
        assert S1.frame[1] == X(lam, 0, 1)
        assert S1.bmat.tolist() == [[0, -1], [2, 0]]
        assert S1.lam.tolist() == [[0, -1], [1, 0]]
        assert mutate_seed(S1, 1) == S
        assert mutate_seed(mutate_seed(S, 2), 2) == S
        assert verify_seed(S1).ok


def test_mutate_seed_d1_is_binomial():
    rng = random.Random(7)
    seen = 0
    for _ in range(30):
        S = random_seed(rng)
        for k in range(1, S.bmat.n + 1):
            if S.bmat.d[k - 1] != 1:
                continue
            seen += 1
            col = S.bmat.column(k - 1)
            ek = [int(j == k - 1) for j in range(S.bmat.m)]
            plus = [max(b, 0) - e for b, e in zip(col, ek)]
            minus = [max(-b, 0) - e for b, e in zip(col, ek)]
            new = mutate_seed(S, k).frame[k - 1]
            assert new == X(S.torus, *plus) + X(S.torus, *minus)
    assert seen


def test_frame_monomial_initial_seed():
    S = b2_seed(1)
    for c in itertools.product(range(-2, 3), repeat=2):
        assert frame_monomial(S, c) == X(S.torus, *c)


def test_frame_monomial_is_a_frame():
    S = mutate_seed(b2_seed(QLaurent({-1: 1, 1: 1})), 1)
    assert frame_monomial(S, (1, 0)) == S.frame[0]
    # negative powers of a non-monomial frame element leave the torus
    for a in itertools.product(range(3), repeat=2):
        for b in itertools.product(range(3), repeat=2):
            ab = tuple(x + y for x, y in zip(a, b))
            lhs = frame_monomial(S, a) * frame_monomial(S, b)
            rhs = frame_monomial(S, ab).scale(QLaurent.monomial(S.lam.form(a, b)))
            assert lhs == rhs


def test_frame_monomial_random_seeds():
    rng = random.Random(5)
    for _ in range(15):
        S = random_seed(rng)
        for k in range(1, S.bmat.n + 1):
            S = mutate_seed(S, k)
        m = S.bmat.m
        for _ in range(4):
            a = tuple(rng.randint(0, 1) for _ in range(m))
            b = tuple(rng.randint(0, 1) for _ in range(m))
            ab = tuple(x + y for x, y in zip(a, b))
            lhs = frame_monomial(S, a) * frame_monomial(S, b)
            assert lhs == frame_monomial(S, ab).scale(QLaurent.monomial(S.lam.form(a, b)))


def test_verify_seed_flags_non_palindromic():
    S = b2_seed(1)
    bad = QuantumSeed(S.pair, [(ONE, QLaurent.monomial(1), QLaurent(2)), (ONE, ONE)], validate=False)
    report = verify_seed(bad)
    assert not report.checks["palindromic"]
    assert report.checks["compatible"]
    with pytest.raises(ValueError, match="palindromic|start and end"):
        QuantumSeed(S.pair, [(ONE, QLaurent.monomial(1), QLaurent(2)), (ONE, ONE)])


def test_random_seed_invariants():
    rng = random.Random(11)
    for _ in range(60):
        S = random_seed(rng)
        assert verify_seed(S).ok
        assert max(abs(x) for row in S.bmat.tolist() for x in row) <= 3
        for k in range(1, S.bmat.n + 1):
            S1 = mutate_seed(S, k)
            assert mutate_seed(S1, k) == S
            assert mutate_Lambda(S.pair, k, 1) == mutate_Lambda(S.pair, k, -1)
            assert check_compatible(S1.lam, S1.bmat) == S.pair.D
            B1 = S1.bmat
            assert all(B1[j, c] % B1.d[c] == 0 for j in range(B1.m) for c in range(B1.n))
            report = verify_seed(S1)
            assert report.ok, report.lines()


def test_q_equals_one_oracle():
    rng = random.Random(12)
    for _ in range(40):
        S = random_seed(rng)
        O = ClassicalSeed(S.bmat.tolist(), S.bmat.d, S.h)
        for _ in range(4):
            k = rng.randint(1, S.bmat.n)
            S = mutate_seed(S, k)
            O.mutate(k)
            for i in range(S.bmat.m):
                assert laurent_to_field(S.frame[i].specialize_one(), O.gens) == O.x[i]
