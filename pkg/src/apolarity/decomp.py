"""Symmetric decomposition of the Hilbert function and normal forms."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .apolar import PartialSpace, hilbert_function
from .dpring import (
    Automorphism,
    DpPoly,
    Operator,
    apply_dual_automorphism,
    contract,
    monomials_up_to,
)
from .errors import (
    HypothesisError,
    PivotError,
    PreconditionError,
    ShapeMismatchError,
    UnsupportedCharacteristicError,
    ZeroPolynomialError,
)


@dataclass(frozen=True)
class SymDecomp:
    d: int
    rows: tuple  # rows[a][i] for 0 <= i <= d - a

    def row(self, a: int) -> tuple:
        return self.rows[a]

    def column_sums(self) -> tuple:
        return tuple(sum(r[i] for r in self.rows if i < len(r)) for i in range(self.d + 1))


def _require_positive_degree(f: DpPoly):
    if not f:
        raise ZeroPolynomialError("the zero polynomial has no decomposition")
    if f.degree < 1:
        raise PreconditionError("constant polynomials have no symmetric decomposition")


def symmetric_decomposition(f: DpPoly) -> SymDecomp:
    """Delta_a(i) = w(e,i) - w(e,i-1) - w(e+1,i) + w(e+1,i-1), e = d-a-i,
    where w(e,i) = dim(m^e f ∩ P_{<=i})."""
    _require_positive_degree(f)
    ps = PartialSpace(f)
    d = ps.d
    rows = []
    top = max(d - 2, 0)
    for a in range(top + 1):
        row = []
        for i in range(d - a + 1):
            e = d - a - i
            row.append(ps.w(e, i) - ps.w(e, i - 1) - ps.w(e + 1, i) + ps.w(e + 1, i - 1))
        rows.append(tuple(row))
    return SymDecomp(d, tuple(rows))


@dataclass(frozen=True)
class LinearFiltration:
    spaces: tuple  # spaces[a] = tuple of linear DpPoly, reduced echelon basis

    def dims(self) -> tuple:
        return tuple(len(s) for s in self.spaces)


def _linear_space(ps: PartialSpace, e: int) -> list:
    """Degree-one parts of W(e) ∩ P_{<=1}, echelon basis as coefficient dicts."""
    basis, pivots = ps.basis(e)
    n = ps.f.n
    out = []
    for v, p in zip(basis, pivots):
        if sum(ps.cols[p]) <= 1:
            lin = {}
            for c, x in v.items():
                m = ps.cols[c]
                if sum(m) == 1:
                    lin[m.index(1)] = x
            if lin:
                out.append(lin)
    rows, _ = linalg.rref(ps.f.field, out, n)
    return rows


def _filtration_rows(f: DpPoly, ps: PartialSpace | None = None):
    ps = ps or PartialSpace(f)
    d = ps.d
    return [_linear_space(ps, d - a - 1) for a in range(d + 1)]


def linear_filtration(f: DpPoly) -> LinearFiltration:
    """L(f)^a = P_1 ∩ m^{d-a-1} f (modulo constants), a = 0..d-2."""
    _require_positive_degree(f)
    rows = _filtration_rows(f)
    n, field = f.n, f.field
    d = f.degree
    spaces = []
    for a in range(max(d - 1, 1)):
        spaces.append(tuple(DpPoly(n, field, {tuple(int(k == j) for k in range(n)): c for j, c in r.items()}) for r in rows[a]))
    return LinearFiltration(tuple(spaces))


def _annihilating_linear(rows: list, n: int, field) -> list:
    """Basis of the linear operators orthogonal to the span of ``rows``."""
    if not rows:
        return [Operator.var(i, n, field) for i in range(n)]
    ker = linalg.left_kernel(field, [{j: r[i] for j, r in enumerate(rows) if i in r} for i in range(n)], len(rows))
    out = []
    for k in ker:
        out.append(Operator(n, field, {tuple(int(t == i) for t in range(n)): v for i, v in k.items()}))
    return out


@dataclass(frozen=True)
class StandardFormVerdict:
    ok: bool
    component: int | None = None  # degree of the violating homogeneous piece
    witness: Operator | None = None  # linear operator with nonzero contraction

    def __bool__(self):
        return self.ok


def is_standard_form(f: DpPoly) -> StandardFormVerdict:
    """f_{d-i} ∈ k_dp[L(f)^i] for every i.

    Membership of a form g in k_dp[V] is tested as: every linear operator
    vanishing on V kills g.
    """
    if not f or f.degree < 1:
        return StandardFormVerdict(True)
    rows = _filtration_rows(f)
    d = f.degree
    for i in range(d + 1):
        comp = f.component(d - i)
        if not comp or d - i == 0:
            continue
        for ell in _annihilating_linear(rows[min(i, d)], f.n, f.field):
            if contract(ell, comp):
                return StandardFormVerdict(False, d - i, ell)
    return StandardFormVerdict(True)


def _char_guard(f: DpPoly, what: str):
    p = f.field.p
    if p and p <= f.degree:
        raise UnsupportedCharacteristicError(f"{what} needs characteristic 0 or above {f.degree}, got {p}")


def _aligned_basis(rows_by_level: list, n: int, field):
    """Basis of P_1 refining the filtration, one vector per coordinate slot.

    Each new vector is reduced against the earlier ones and placed at its
    first nonzero coordinate, so an already aligned filtration yields the
    identity.  Returns (vectors by slot, level by slot); the level of a slot
    is the first filtration index containing it (len(rows_by_level) for the
    completing unit vectors).
    """
    slots: dict = {}
    level: dict = {}
    chain: list = []

    def reduce(r):
        r = dict(r)
        for v, p in chain:
            a = r.get(p)
            if a is not None and a != 0:
                f = a / v[p]
                for c, x in v.items():
                    w = r.get(c, 0) - f * x
                    if w == 0:
                        r.pop(c, None)
                    else:
                        r[c] = w
        return r

    candidates = [(a, r) for a, rows in enumerate(rows_by_level) for r in rows]
    candidates += [(len(rows_by_level), {j: field.one}) for j in range(n)]
    for a, r in candidates:
        res = reduce(r)
        if not res:
            continue
        p = min(res)
        res = {c: x / res[p] for c, x in res.items()}
        chain.append((res, p))
        slots[p] = res
        level[p] = a
    return [slots[j] for j in range(n)], [level[j] for j in range(n)]


def _inverse(mat, field):
    n = len(mat)
    m = field.matrix(n, n, [c for r in mat for c in r]).inv()
    return [[m[i, j] for j in range(n)] for i in range(n)]


def _linear_alignment(f: DpPoly):
    """Linear automorphism whose dual sends the aligned basis b_k to x_k."""
    n, field = f.n, f.field
    rows = _filtration_rows(f)
    vecs, level = _aligned_basis(rows, n, field)
    # B[j][k] = coefficient of x_j in b_k
    B = [[vecs[k].get(j, field.zero) for k in range(n)] for j in range(n)]
    # phi^vee(x_k) = sum_i A[i][k] x_i with A = B^{-1}; phi(dx_i) = sum_k A[i][k] dx_k
    A = _inverse(B, field)
    images = [Operator(n, field, {tuple(int(t == k) for t in range(n)): A[i][k] for k in range(n)}) for i in range(n)]
    return Automorphism(images), level


def _lift_step(f: DpPoly, level: list) -> Automorphism | None:
    """phi(dx_i) = dx_i + tau_i, tau_i ∈ m^2, with deg((dx_i + tau_i) ⌟ f) < d - level_i."""
    n, field = f.n, f.field
    d = f.degree
    quad = [m for m in monomials_up_to(n, d) if sum(m) >= 2]
    conts = [contract(Operator.monomial(m, n, field), f) for m in quad]
    images = []
    for i in range(n):
        bound = d - level[i]  # need all terms of degree >= bound to vanish
        target_poly = -contract(Operator.var(i, n, field), f)
        target = {e: c for e, c in target_poly.terms.items() if sum(e) >= bound}
        base = Operator.var(i, n, field)
        if not target:
            images.append(base)
            continue
        cols = {}
        rows = []
        for p in conts:
            row = {}
            for e, c in p.terms.items():
                if sum(e) >= bound:
                    row[cols.setdefault(e, len(cols))] = c
            rows.append(row)
        tvec = {cols.setdefault(e, len(cols)): c for e, c in target.items()}
        x = linalg.solve_left(field, rows, len(cols), tvec)
        if x is None:
            return None
        tau = Operator(n, field, {quad[r]: v for r, v in x.items()})
        images.append(base + tau)
    return Automorphism(images)


@dataclass(frozen=True)
class StandardFormResult:
    g: DpPoly
    phi: Automorphism
    unit: Operator
    rounds: int = 0


def standard_form(f: DpPoly) -> StandardFormResult:
    """An element of the orbit of f in standard form, with the automorphism used."""
    _require_positive_degree(f)
    _char_guard(f, "standard_form")
    n, field = f.n, f.field
    unit = Operator.constant(1, n, field)
    phi_total = Automorphism.identity(n, field)
    g = f
    d = f.degree
    for rnd in range(d + 3):
        if is_standard_form(g):
            return _graded_cleanup(f, StandardFormResult(g, phi_total, unit, rnd))
        lin, level = _linear_alignment(g)
        if not lin.is_identity():
            g = apply_dual_automorphism(lin, g)
            phi_total = phi_total.compose(lin, d)
            _, level = _linear_alignment(g)
        step = _lift_step(g, level)
        if step is None:
            break
        g = apply_dual_automorphism(step, g)
        phi_total = phi_total.compose(step, d)
    if is_standard_form(g):
        return _graded_cleanup(f, StandardFormResult(g, phi_total, unit, d + 2))
    raise HypothesisError(f"standard form not reached after {d + 2} rounds")


def _graded_cleanup(f: DpPoly, res: StandardFormResult) -> StandardFormResult:
    """Replace a standard form by its top form when leading-form removal reaches it."""
    from .orbits import collapse_steps, move_within_orbit

    g = res.g
    if g.is_homogeneous():
        return res
    steps = move_within_orbit(g, g.top_form())
    if not steps:
        return res
    d = f.degree
    step_phi, step_unit = collapse_steps(steps, f.n, f.field, d)
    unit = step_unit.mul_truncated(step_phi.inverse(d)(res.unit, d), d)
    phi = res.phi.compose(step_phi, d)
    return StandardFormResult(g.top_form(), phi, unit, res.rounds)


def top_degree_twist(f: DpPoly, pivot: int = 0):
    """Orbit element g with dx_k^d ⌟ g = 1 and no monomials x_k^[i] (i < d)
    or x_k^[i] x_j (j != k), where k = pivot.

    Returns (g, phi, unit) with g = unit ⌟ phi^vee(f).
    """
    _require_positive_degree(f)
    _char_guard(f, "top_degree_twist")
    n, field = f.n, f.field
    d = f.degree
    k = pivot
    dk = Operator.var(k, n, field)
    c = contract(dk ** d, f)
    if not c or c.degree != 0:
        raise PivotError(f"dx{k + 1}^{d} does not act nontrivially on f")
    g = f.scale(field.one / c.coeff((0,) * n))
    phi_total = Automorphism.identity(n, field)

    # linear step: kill dx_k^{d-1} dx_j ⌟ g for j != k
    imgs = []
    for j in range(n):
        base = Operator.var(j, n, field)
        if j == k:
            imgs.append(base)
            continue
        lam = contract(dk ** (d - 1) * base, g).coeff((0,) * n)
        imgs.append(base - dk.scale(lam) if lam != 0 else base)
    lin = Automorphism(imgs)
    if not lin.is_identity():
        g = apply_dual_automorphism(lin, g)
        phi_total = phi_total.compose(lin, d)

    def bad_coeffs(poly, i):
        out = {}
        for j in range(n):
            if j == k:
                continue
            e = [0] * n
            e[k] = i
            e[j] += 1
            v = poly.coeff(tuple(e))
            if v != 0:
                out[j] = v
        return out

    for i in range(d - 2, -1, -1):
        lam = bad_coeffs(g, i)
        if not lam:
            continue
        offs = [Operator.zero(n, field) for _ in range(n)]
        for j, v in lam.items():
            offs[j] = (dk ** (d - i)).scale(-v)
        step = Automorphism.from_offsets(offs)
        g = apply_dual_automorphism(step, g)
        phi_total = phi_total.compose(step, d)

    unit = Operator.constant(field.one / c.coeff((0,) * n), n, field)
    for i in range(d - 1, -1, -1):
        e = [0] * n
        e[k] = i
        v = g.coeff(tuple(e))
        if v == 0:
            continue
        u = Operator.constant(1, n, field) - (dk ** (d - i)).scale(v)
        g = contract(u, g)
        unit = unit * u
    return g, phi_total, unit


@dataclass(frozen=True)
class QuadricSplit:
    g: DpPoly
    quadric: DpPoly
    coefficients: tuple
    e: int
    q: int
    phi: Automorphism
    certified: bool
    notes: tuple = dc_field(default_factory=tuple)


def quadric_split(f: DpPoly) -> QuadricSplit:
    """Separate the quadric part f_2 into q squares of fresh variables."""
    from .orbits import move_within_orbit

    _require_positive_degree(f)
    if f.field.p == 2:
        raise UnsupportedCharacteristicError("quadric_split needs characteristic other than 2")
    _char_guard(f, "quadric_split")
    if not is_standard_form(f):
        raise HypothesisError("quadric_split expects f in standard form")
    n, field = f.n, f.field
    d = f.degree
    sd = symmetric_decomposition(f)
    if d == 2:
        # (1, q, 1): the whole leading form is the quadric
        q = sd.rows[0][1]
    elif d > 2:
        last = sd.rows[d - 2]
        if not (len(last) == 3 and last[0] == 0 and last[2] == 0):
            raise ShapeMismatchError(f"Delta_{d - 2} = {last} is not of the shape (0, q, 0)")
        q = last[1]
    else:
        raise ShapeMismatchError("socle degree must be at least 2")

    # align coordinates to the filtration
    lin, level = _linear_alignment(f)
    g = apply_dual_automorphism(lin, f) if not lin.is_identity() else f
    phi_total = lin
    if d == 2:
        e = 0
    else:
        e = sum(1 for lv in level if lv <= d - 3)
    block = [i for i in range(n) if level[i] == d - 2]
    if len(block) != q:
        raise ShapeMismatchError(f"expected {q} variables at level {d - 2}, found {len(block)}")

    def B(poly, i, j):
        return contract(Operator.var(i, n, field) * Operator.var(j, n, field), poly.component(2)).coeff((0,) * n)

    todo = list(block)
    done = []
    while todo:
        p = todo[-1]
        if B(g, p, p) == 0:
            partner = next((r for r in todo if r != p and B(g, p, r) != 0), None)
            if partner is None:
                raise HypothesisError("quadric part cannot be split: standard form hypothesis fails")
            offs = [Operator.zero(n, field) for _ in range(n)]
            offs[p] = Operator.var(partner, n, field)
            step = Automorphism.from_offsets(offs)
            g = apply_dual_automorphism(step, g)
            phi_total = phi_total.compose(step, d)
        bpp = B(g, p, p)
        offs = [Operator.zero(n, field) for _ in range(n)]
        for j in range(n):
            if j != p:
                bjp = B(g, j, p)
                if bjp != 0:
                    offs[j] = Operator.var(p, n, field).scale(-bjp / bpp)
        step = Automorphism.from_offsets(offs)
        if not step.is_identity():
            g = apply_dual_automorphism(step, g)
            phi_total = phi_total.compose(step, d)
        todo.pop()
        done.append(p)

    coeffs = []
    quadric = DpPoly.zero(n, field)
    for p in sorted(done):
        c = B(g, p, p)
        coeffs.append(c)
        quadric = quadric + DpPoly.var(p, n, field, 2).scale(c)
    core = g - quadric
    head = DpPoly(n, field, {m: c for m, c in core.terms.items() if sum(m) >= 3})
    target = head + quadric
    moved = move_within_orbit(g, target)
    certified = moved is not None
    notes = []
    if field.p == 0:
        notes.append("over the rationals the squares keep nonzero coefficients")
    if certified:
        H0, H1 = hilbert_function(f), hilbert_function(target)
        certified = H0 == H1 and symmetric_decomposition(target) == sd
    return QuadricSplit(head, quadric, tuple(coeffs), e, q, phi_total, certified, tuple(notes))


def stretched_c(H) -> int:
    """Largest i with H(i) > 1 (the c of a stretched-type Hilbert function)."""
    c = 0
    for i, h in enumerate(H):
        if h > 1:
            c = i
    return c


__all__ = [
    "SymDecomp",
    "LinearFiltration",
    "symmetric_decomposition",
    "linear_filtration",
    "is_standard_form",
    "standard_form",
    "top_degree_twist",
    "quadric_split",
]
