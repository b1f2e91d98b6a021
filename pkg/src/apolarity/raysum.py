"""Ray sums, their annihilators and the tangent-preserving flatness test."""
from __future__ import annotations

from dataclasses import dataclass

from .apolar import annihilator, hilbert_function
from .dpring import DpPoly, Operator, contract
from .errors import (
    DegenerateRayError,
    HypothesisError,
    MismatchError,
    PivotError,
    PreconditionError,
    UnsupportedCharacteristicError,
)
from .ideals import (
    TruncatedIdeal,
    colon,
    ideal_intersection,
    ideal_product,
)


@dataclass(frozen=True)
class RaySumSpec:
    f: DpPoly
    op: Operator
    d: int = 2

    @property
    def new_index(self) -> int:
        return self.f.n

    def check(self):
        f, op, d = self.f, self.op, self.d
        if op.n != f.n or op.field != f.field:
            raise MismatchError("operator and polynomial live in different rings")
        if d < 2:
            raise PreconditionError("ray sums need d >= 2")
        if f.field.p and d > f.field.p:
            raise UnsupportedCharacteristicError(f"ray sums need d <= char k, got d={d}, char {f.field.p}")
        if not op or op.order == 0:
            raise PreconditionError("the ray operator must lie in the maximal ideal")
        if not contract(op, f):
            raise DegenerateRayError("the ray operator annihilates f")


def _lift(p, n_new: int):
    """Same polynomial in n_new >= n variables (new variables appended)."""
    pad = (0,) * (n_new - p.n)
    return type(p)._raw(n_new, p.field, {e + pad: c for e, c in p.terms.items()})


def ray_sum(spec: RaySumSpec) -> DpPoly:
    """g = sum_i x_new^[d i] (op^i ⌟ f) in one more variable."""
    spec.check()
    f, op, d = spec.f, spec.op, spec.d
    n = f.n
    out = DpPoly.zero(n + 1, f.field)
    cur = f
    i = 0
    while cur:
        out = out + DpPoly._raw(n + 1, f.field, {e + (d * i,): c for e, c in cur.terms.items()})
        cur = contract(op, cur)
        i += 1
    return out


def _ray_sum_degree(spec: RaySumSpec) -> int:
    out, cur, i = 0, spec.f, 0
    while cur:
        out = max(out, cur.degree + spec.d * i)
        cur = contract(spec.op, cur)
        i += 1
    return out


def ray_sum_annihilator(spec: RaySumSpec) -> TruncatedIdeal:
    """Ideal generated by Ann(f), alpha * Ann(op ⌟ f) and alpha^d - op."""
    spec.check()
    f, op, d = spec.f, spec.op, spec.d
    n = f.n
    field = f.field
    alpha = Operator.var(n, n + 1, field)
    gens = [_lift(s, n + 1) for s in annihilator(f).minimal_generators()]
    gens += [alpha * _lift(s, n + 1) for s in annihilator(contract(op, f)).minimal_generators()]
    gens.append(alpha ** d - _lift(op, n + 1))
    # the truncation only needs to exceed the socle degree of the ray sum
    D = max(f.degree, _ray_sum_degree(spec)) + 2
    while True:
        I = TruncatedIdeal.from_generators(gens, D, n + 1, field)
        if I.N is not None and I.N < D:
            return I
        D += 1


def hf_after_ray_sum(f: DpPoly, op: Operator, d: int = 2) -> tuple:
    """Predicted H of the ray sum: H(i) + 1 for i = 1, 2 and unchanged elsewhere."""
    spec = RaySumSpec(f, op, d)
    spec.check()
    if d != 2:
        raise HypothesisError("prediction holds for d = 2 only")
    for k in range(3):
        if f.component(k):
            raise HypothesisError(f"f has a nonzero component of degree {k}")
    if op.order < 2:
        raise HypothesisError("operator must lie in m^2")
    g = contract(op, f)
    if g.degree != 1 or not g.is_homogeneous():
        raise HypothesisError("op ⌟ f must be a linear form")
    if contract(op, g):
        raise HypothesisError("op^2 ⌟ f must vanish")
    H = list(hilbert_function(f))
    for i in (1, 2):
        H[i] += 1
    return tuple(H)


@dataclass(frozen=True)
class FlatnessVerdict:
    holds: bool
    witness: Operator | None
    lhs: TruncatedIdeal
    rhs: TruncatedIdeal

    def __bool__(self):
        return self.holds


def _flatness_ideals(f: DpPoly, op: Operator):
    if op.n != f.n or op.field != f.field:
        raise MismatchError("operator and polynomial live in different rings")
    g = contract(op, f)
    if not g:
        raise DegenerateRayError("the ray operator annihilates f")
    if contract(op, g):
        raise HypothesisError("the criterion needs op^2 ⌟ f = 0")
    I = annihilator(f)
    J = annihilator(g)
    I2 = ideal_product(I, I)
    J2 = ideal_product(J, J)
    return I, J2, colon(I2, op), ideal_product(I, J)


def flatness_criterion(f: DpPoly, op: Operator) -> FlatnessVerdict:
    """Check I ∩ J^2 ∩ (I^2 : op) ⊆ I J with I = Ann(f), J = Ann(op ⌟ f)."""
    I, J2, col, IJ = _flatness_ideals(f, op)
    lhs = ideal_intersection(ideal_intersection(I, J2), col)
    if IJ.contains_ideal(lhs):
        return FlatnessVerdict(True, None, lhs, IJ)
    return FlatnessVerdict(False, IJ.witness_outside(lhs), lhs, IJ)


def intersectand_necessity(f: DpPoly, op: Operator) -> dict:
    """For each pair of the three intersectands, whether their intersection
    alone already lies in I J. A False entry means the third one is needed."""
    I, J2, col, IJ = _flatness_ideals(f, op)
    pairs = {"I,J^2": (I, J2), "I,(I^2:op)": (I, col), "J^2,(I^2:op)": (J2, col)}
    return {k: IJ.contains_ideal(ideal_intersection(a, b)) for k, (a, b) in pairs.items()}


@dataclass(frozen=True)
class CleaveVerdict:
    kind: str  # "cleavable" | "inconclusive"
    c: int | None
    normalized: DpPoly | None


def cleavable_stretched(f: DpPoly) -> CleaveVerdict:
    """Bring f to x1^[d] + g and look for c with dx1^c ⌟ g = 0, 2c <= d."""
    from .decomp import top_degree_twist

    d = f.degree
    if d < 2:
        return CleaveVerdict("inconclusive", None, None)
    try:
        h, _, _ = top_degree_twist(f, 0)
    except (PivotError, UnsupportedCharacteristicError):
        return CleaveVerdict("inconclusive", None, None)
    g = h - DpPoly.var(0, f.n, f.field, power=d)
    d1 = Operator.var(0, f.n, f.field)
    for c in range(1, d // 2 + 1):
        if not contract(d1 ** c, g):
            return CleaveVerdict("cleavable", c, h)
    return CleaveVerdict("inconclusive", None, h)
