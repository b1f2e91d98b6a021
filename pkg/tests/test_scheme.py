from itertools import combinations
from math import comb

import pytest

from apolarity.apolar import annihilator
from apolarity.errors import PreconditionError
from apolarity.scheme import (
    binomial_expansion,
    gm_limit,
    hs_tangent_dim,
    is_o_sequence,
    macaulay_bound,
    max_growth_at,
    persists_from,
    si_check,
)
from apolarity.ideals import hilbert_function_of_quotient, is_homogeneous_ideal

from conftest import P


def _brute_expansions(h, i):
    """All strictly decreasing expansions h = sum C(a_j, j), a_j >= j."""
    out = []

    def rec(rest, j, upper, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        if j == 0:
            return
        for a in range(j, upper):
            c = comb(a, j)
            if c > rest:
                break
            rec(rest - c, j - 1, a, acc + [(a, j)])

    rec(h, i, h + i + 2, [])
    return out


def test_binomial_expansion_examples():
    assert binomial_expansion(5, 2) == ((3, 2), (2, 1))
    assert binomial_expansion(0, 3) == ()
    for m in range(1, 9):
        assert binomial_expansion(m + 1, m) == ((m + 1, m),)
    with pytest.raises(PreconditionError):
        binomial_expansion(3, 0)


def test_binomial_expansion_is_greedy_unique():
    for i in range(1, 5):
        for h in range(0, 40):
            got = binomial_expansion(h, i)
            assert sum(comb(a, j) for a, j in got) == h
            assert got in _brute_expansions(h, i) or h == 0


def test_macaulay_bound():
    assert macaulay_bound(5, 2) == 7
    for m in range(2, 9):
        assert macaulay_bound(m + 1, m) == m + 2
    # a_j in {j, j-1} gives a fixed point
    assert macaulay_bound(2, 3) == 2
    assert macaulay_bound(1, 4) == 1


def test_o_sequences():
    assert is_o_sequence((1, 3, 6, 10))
    assert not is_o_sequence((1, 2, 4))
    assert is_o_sequence((1, 13, 12, 13, 1))
    assert not si_check((1, 13, 12, 13, 1))
    assert si_check((1, 3, 3, 1))
    assert not si_check((1, 3, 2))
    # (1,4,3,4,...) passes the numeric predicate even though no algebra exists
    assert is_o_sequence((1, 4, 3, 4, 1, 1))


def test_growth_stabilises_below_diagonal():
    H = (1, 3, 3, 2)
    assert macaulay_bound(H[3], 3) <= H[3]
    assert macaulay_bound(2, 2) == 2


def test_max_growth_and_persistence():
    assert max_growth_at((1, 2, 3, 4, 5), 2)
    assert persists_from((1, 2, 3, 4, 5), 1)
    assert not persists_from((1, 2, 3, 3), 1)


def test_tangent_dimension_small():
    cert = hs_tangent_dim(P("x1^[2]"))
    # the Hilbert scheme of the line is smooth
    assert cert.r == 3 and cert.n == 1 and cert.tangent_dim == 3 and cert.unobstructed


def test_tangent_dimension_67():
    cert = hs_tangent_dim(P("x1*x2*x3 + x4^[2] + x5^[2]*x4"))
    assert cert.r == 12
    assert cert.tangent_dim == 67
    assert not cert.unobstructed


def test_tangent_of_non_gorenstein_system():
    quadrics = [P("x1^[2]", 2), P("x2^[2]", 2)]
    cert = hs_tangent_dim(quadrics)
    assert not cert.gorenstein
    # inverse system 1, x1, x2, x1^[2], x2^[2]; the planar Hilbert scheme is smooth
    assert cert.r == 5
    assert cert.tangent_dim == 10 and cert.unobstructed


def test_gm_limit():
    f = P("x1^[5] + x2^[4] + x3^[3]")
    J = gm_limit(f)
    assert is_homogeneous_ideal(J)
    assert J.quotient_dimension() == 11
    F = P("x1^[2]*x2 + x3^[3]")
    assert gm_limit(F) == annihilator(F)
    g = P("x1^[3] + x2^[3] + x1*x2 + x2", 2)
    assert gm_limit(g) == annihilator(g.top_form())
    assert hilbert_function_of_quotient(gm_limit(g)) == (1, 2, 2, 1)


def test_pairs_are_ordered():
    for h in range(1, 20):
        for i in range(1, 4):
            e = binomial_expansion(h, i)
            assert all(a > b for (a, _), (b, _) in combinations(e, 2))
