"""The nine acceptance criteria, each as one test printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are printed
at the end of the session by the hook in conftest.py.
"""
import random

import pytest

from apolarity.apolar import annihilator, hilbert_function
from apolarity.decomp import symmetric_decomposition
from apolarity.dpring import contract
from apolarity.fields import FieldSpec
from apolarity.ideals import colon, ideal_intersection, ideal_product
from apolarity.orbits import canonical_gradedness_certificate, orbit_dimension_table
from apolarity.raysum import flatness_criterion
from apolarity.scheme import hs_tangent_dim, hs_tangent_dim_of_ideal, is_o_sequence, macaulay_bound, si_check, system_ideal

import property_suites
from conftest import P, S, random_dp
from test_orbits import NORMAL_FORMS

F2 = FieldSpec(2)

CUBIC_1661 = "x1*x2*x4 - x1*x5^[2] + x2*x3^[2] + x3*x5*x6 + x4*x6^[2]"
CUBIC_1661_CHAR2 = "x1*x2*x3 + x1*x4^[2] + x1^[2]*x5 + x2*x3*x5 + x2*x4*x6 + x3*x5*x6 + x2*x6^[2]"


@pytest.mark.acceptance(1, "worked-example Hilbert functions and decomposition tables")
def test_criterion_1_tables():
    f = P("x1^[5] + x2^[4] + x3^[3]")
    assert hilbert_function(f) == (1, 3, 3, 2, 1, 1)
    assert symmetric_decomposition(f).rows == ((1, 1, 1, 1, 1, 1), (0, 1, 1, 1, 0), (0, 1, 1, 0), (0, 0, 0))
    rows = symmetric_decomposition(P("x1^[5] + x1*x2^[3] + x3^[2]")).rows
    assert rows[1] == (0, 1, 2, 1, 0)
    assert rows[3] == (0, 1, 0)
    f = P("x1^[3]*x2 + x3^[3] + x4^[2]")
    assert hilbert_function(f) == (1, 4, 3, 2, 1)
    assert symmetric_decomposition(f).rows[2] == (0, 1, 0)


@pytest.mark.acceptance(2, "Hilbert scheme tangent dimensions 76, 76 (char 2), 25, 67 and H of S/I^2")
def test_criterion_2_tangent_dimensions():
    cert = hs_tangent_dim(P(CUBIC_1661, 6))
    assert cert.tangent_dim == 76
    assert cert.hilbert_of_I2 == (1, 6, 21, 56, 6)
    f2 = P(CUBIC_1661_CHAR2, 6, F2)
    assert hilbert_function(f2) == (1, 6, 6, 1)
    assert hs_tangent_dim(f2).tangent_dim == 76
    system = [P(t, 4) for t in ("x1*x3", "x2*x4", "x1*x4 - x2*x3")]
    I = system_ideal(system)
    assert I.local_hilbert_function() == (1, 4, 3)
    assert hs_tangent_dim_of_ideal(I, system).tangent_dim == 25
    assert hs_tangent_dim(P("x1*x2*x3 + x4^[2] + x5^[2]*x4")).tangent_dim == 67


@pytest.mark.acceptance(3, "orbit dimension table for the (1,3,3,3,1) normal forms")
def test_criterion_3_orbit_table():
    table = orbit_dimension_table([P(t, 3) for t, _ in NORMAL_FORMS])
    assert [d for _, d in table] == [29, 28, 28, 27, 27, 26, 27, 26, 26, 25, 24]


@pytest.mark.acceptance(4, "unobstructed ray-sum examples 40, 60, 56, 56")
def test_criterion_4_ray_sum_tangents():
    for text, r, n, dim in [
        ("x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1", 10, 4, 40),
        ("x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1 + x5^[2]*x4", 12, 5, 60),
        ("x1^[5] + x2^[4] + x3^[2]*x1^[2] + x4^[2]*x3", 14, 4, 56),
        ("x1^[2]*x2*x3 + x4^[2]*x1", 14, 4, 56),
    ]:
        cert = hs_tangent_dim(P(text, n))
        assert (cert.r, cert.n, cert.tangent_dim) == (r, n, dim)
        assert cert.unobstructed


@pytest.mark.acceptance(5, "flatness criterion; all three intersectands needed for (1,5,5,1)")
def test_criterion_5_flatness():
    assert flatness_criterion(P("x1^[2]*x2^[2]*x3"), S("dx2^2", 3)).holds
    assert flatness_criterion(P("x1^[2]*x3 + x2^[2]*x3"), S("dx1*dx3", 3)).holds
    f = P("x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1")
    op = S("dx1*dx4", 4)
    I = annihilator(f)
    J = colon(I, op)
    J2 = ideal_product(J, J)
    col = colon(ideal_product(I, I), op)
    IJ = ideal_product(I, J)
    triple = ideal_intersection(ideal_intersection(I, J2), col)
    assert triple == IJ
    for a, b in [(I, J2), (I, col), (J2, col)]:
        pair = ideal_intersection(a, b)
        assert pair.contains_ideal(IJ)
        assert not IJ.contains_ideal(pair)


QUADRICS = [
    "dx1^2", "dx1*dx3", "-dx1*dx4 + dx3^2", "dx1*dx5 + dx3*dx6", "dx1*dx6", "dx2^2",
    "dx2*dx3 - dx5*dx6", "dx2*dx4 + dx5^2", "dx2*dx5", "dx2*dx6", "dx3*dx4",
    "dx3*dx5 - dx4*dx6", "dx4^2", "dx4*dx5",
]


@pytest.mark.acceptance(6, "cubic with H = (1,6,6,1): 15 quadrics in Ann(F)_2")
def test_criterion_6_quadrics():
    F = P(CUBIC_1661, 6)
    I = annihilator(F)
    assert I.component_dimension(2) == 15
    for q in QUADRICS + ["dx1*dx2 - dx6^2"]:
        assert not contract(S(q, 6), F)
    assert hilbert_function(F) == (1, 6, 6, 1)


@pytest.mark.acceptance(7, "Macaulay bound (m+1)^<m> = m+2 and the SI check")
def test_criterion_7_numerics():
    for m in range(2, 9):
        assert macaulay_bound(m + 1, m) == m + 2
    H = (1, 13, 12, 13, 1)
    assert is_o_sequence(H)
    assert not si_check(H)


@pytest.mark.acceptance(8, "randomized property suites, 500 cases each")
def test_criterion_8_property_suites():
    assert len(property_suites.SUITES) == 10
    for suite in property_suites.SUITES:
        suite()


@pytest.mark.acceptance(9, "canonical gradedness: 100 random compressed cubics and the char 2 obstruction")
def test_criterion_9_gradedness():
    rng = random.Random(9)
    done = 0
    while done < 100:
        n = rng.randint(1, 4)
        f = random_dp(rng, n, 3, density=1.0, low=3, bound=5) + random_dp(rng, n, 2, density=0.8)
        if hilbert_function(f) != (1, n, n, 1):
            continue
        v = canonical_gradedness_certificate(f)
        assert v.kind == "certified-graded"
        assert v.reduced == f.top_form()
        done += 1
    f3 = P("x1*x2*x3 + x2^[3] + x3^[3]", 3, F2)
    assert not contract(S("dx1^2", 3, F2), f3)
    v = canonical_gradedness_certificate(f3 + P("x1^[2]", 3, F2))
    assert v.kind == "certified-obstruction"
    assert v.witness == S("dx1^2", 3, F2)
