"""The B2 example: a rank-two seed with ``d = (2, 1)`` and its cluster sequence."""

from .qcoeff import QLaurent
from .qseed import ExtExchangeMatrix, QuantumSeed
from .ranktwo import ExchangePolynomial, ClusterSequence

B2_LAMBDA = [[0, 1], [-1, 0]]
B2_BTILDE = [[0, 1], [-2, 0]]
B2_D = (2, 1)

# instantiations of the free middle coefficient used throughout the tests
B2_H_VALUES = {
    "0": QLaurent(),
    "1": QLaurent(1),
    "q^(-1/2) + q^(1/2)": QLaurent({-1: 1, 1: 1}),
    "q^-1 + 1 + q": QLaurent({-2: 1, 0: 1, 2: 1}),
}


def b2_seed(h=1):
    h = h if isinstance(h, QLaurent) else QLaurent(h)
    one = QLaurent(1)
    return QuantumSeed.initial(
        B2_LAMBDA, ExtExchangeMatrix(B2_BTILDE, B2_D), [(one, h, one), (one, one)]
    )


def b2_sequence(h=1):
    """``P1 = 1 + q^(1/2) h x + q x^2`` at even steps, ``P2 = 1 + q^(1/2) x`` at odd ones."""
    h = h if isinstance(h, QLaurent) else QLaurent(h)
    return ClusterSequence(ExchangePolynomial.from_interior(2, [h]), ExchangePolynomial.from_interior(1))
