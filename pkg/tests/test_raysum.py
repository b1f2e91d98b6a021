import pytest

from apolarity.apolar import annihilator, hilbert_function
from apolarity.dpring import contract
from apolarity.errors import (
    DegenerateRayError,
    HypothesisError,
    MismatchError,
    PreconditionError,
    UnsupportedCharacteristicError,
)
from apolarity.fields import FieldSpec
from apolarity.raysum import (
    RaySumSpec,
    cleavable_stretched,
    flatness_criterion,
    hf_after_ray_sum,
    ray_sum,
    ray_sum_annihilator,
)
from apolarity.scheme import hs_tangent_dim

from conftest import P, S

# random search result: the ray sum of this pair is obstructed
FAIL_F = "x1^[3]*x3 + x1^[2]*x2*x3 - x1*x2^[3] + x1*x2*x3^[2] - x3^[4]"
FAIL_OP = "dx1^2"


def test_ray_sum_examples():
    f = P("x1^[2]*x3 + x2^[2]*x3")
    g = ray_sum(RaySumSpec(f, S("dx1*dx3", 3)))
    assert g == P("x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1", 4)
    f = P("x1^[5] + x2^[4]")
    g = ray_sum(RaySumSpec(f, S("dx1^3", 2)))
    assert g == P("x1^[5] + x2^[4] + x3^[2]*x1^[2]", 3)


def test_ray_sum_constant():
    f = P("x1^[2] + x2")
    g = ray_sum(RaySumSpec(f, S("dx2", 2), 3))
    assert g == P("x1^[2] + x2 + x3^[3]", 3)


def test_ray_sum_errors():
    f = P("x1^[2]")
    with pytest.raises(DegenerateRayError):
        ray_sum(RaySumSpec(f, S("dx1^3")))
    with pytest.raises(PreconditionError):
        ray_sum(RaySumSpec(f, S("1 + dx1")))
    with pytest.raises(PreconditionError):
        ray_sum(RaySumSpec(f, S("dx1"), 1))
    with pytest.raises(UnsupportedCharacteristicError):
        ray_sum(RaySumSpec(P("x1^[2]", 1, FieldSpec(2)), S("dx1", 1, FieldSpec(2)), 3))
    with pytest.raises(MismatchError):
        ray_sum(RaySumSpec(f, S("dx1", 2)))


def test_annihilator_formula_examples():
    for f, op, d in [
        ("x1^[2]*x3 + x2^[2]*x3", "dx1*dx3", 2),
        ("x1^[3]", "dx1", 2),
        ("x1 + x2", "dx1", 3),
        ("x1^[5] + x2^[4]", "dx1^3", 2),
    ]:
        spec = RaySumSpec(P(f), S(op, P(f).n), d)
        assert ray_sum_annihilator(spec) == annihilator(ray_sum(spec))


def test_predicted_hilbert_functions():
    f = P("x1^[2]*x3 + x2^[2]*x3")
    op = S("dx1*dx3", 3)
    assert hilbert_function(f) == (1, 3, 3, 1)
    assert hf_after_ray_sum(f, op) == (1, 4, 4, 1) == hilbert_function(ray_sum(RaySumSpec(f, op)))
    f = P("x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1")
    op = S("dx1*dx4", 4)
    assert hf_after_ray_sum(f, op) == (1, 5, 5, 1) == hilbert_function(ray_sum(RaySumSpec(f, op)))
    with pytest.raises(HypothesisError):
        hf_after_ray_sum(P("x1^[2]*x3 + x2^[2]*x3 + x1^[2]"), S("dx1*dx3", 3))


def test_degree_count():
    f = P("x1^[2]*x3 + x2^[2]*x3 + x4^[2]*x1")
    op = S("dx1*dx4", 4)
    for d in (2, 3):
        g = ray_sum(RaySumSpec(f, op, d))
        assert sum(hilbert_function(g)) == sum(hilbert_function(f)) + (d - 1) * sum(hilbert_function(contract(op, f)))


def test_flatness_complete_intersection():
    assert flatness_criterion(P("x1^[2]*x2^[2]*x3"), S("dx2^2", 3)).holds
    assert flatness_criterion(P("x1^[2]*x3 + x2^[2]*x3"), S("dx1*dx3", 3)).holds


def test_flatness_failing_instance():
    f, op = P(FAIL_F, 3), S(FAIL_OP, 3)
    v = flatness_criterion(f, op)
    assert not v.holds
    assert v.witness is not None
    assert v.lhs.contains(v.witness) and not v.rhs.contains(v.witness)


def test_tangent_cross_check():
    """Flatness holds exactly when the tangent space of the ray sum is additive."""
    cases = [
        ("x1^[2]*x3 + x2^[2]*x3", "dx1*dx3", True),
        (FAIL_F, FAIL_OP, False),
    ]
    for text, optext, flat in cases:
        f = P(text, 3)
        op = S(optext, 3)
        g = ray_sum(RaySumSpec(f, op))
        lhs = hs_tangent_dim(g).tangent_dim
        # tangent data of f and op ⌟ f, lifted to one more variable
        rhs_f = hs_tangent_dim(P(text, 4)).tangent_dim
        rhs_g = hs_tangent_dim(contract(S(optext, 4), P(text, 4))).tangent_dim
        assert (lhs == rhs_f + rhs_g) == flat
        assert flatness_criterion(f, op).holds == flat


def test_flatness_needs_square_zero():
    with pytest.raises(HypothesisError):
        flatness_criterion(P("x1^[4]"), S("dx1"))


def test_cleavable():
    v = cleavable_stretched(P("x1^[3] + x2^[3]"))
    assert v.kind == "cleavable" and v.c == 1
    assert not contract(S("dx1", 2), P("x2^[3]", 2))
    v = cleavable_stretched(P("x1^[6] + x2^[3] + x3^[2]"))
    assert v.kind == "cleavable"
    v = cleavable_stretched(P("x1^[4] + x2^[4] + x3^[4] + x2*x3*x4"))
    assert v.kind == "cleavable" and v.c == 1
