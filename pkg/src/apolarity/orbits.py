"""Tangent spaces to orbits, compressed predicates and canonical gradedness."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from . import linalg
from .apolar import hilbert_function
from .dpring import (
    Automorphism,
    DpPoly,
    Operator,
    apply_dual_automorphism,
    contract,
    monomials_of_degree,
    monomials_up_to,
    pairing,
)
from .errors import PreconditionError, ZeroPolynomialError


class _Ambient:
    """Monomial coordinates on P_{<=d} (and, dually, S_{<=d})."""

    def __init__(self, n: int, d: int):
        self.mons = monomials_up_to(n, d)
        self.index = {m: i for i, m in enumerate(self.mons)}
        self.n = n
        self.d = d

    def vec(self, g: DpPoly) -> dict:
        return {self.index[e]: c for e, c in g.terms.items() if sum(e) <= self.d}


def _tangent_vectors(f: DpPoly, plus: bool):
    n, field = f.n, f.field
    d = f.degree
    amb = _Ambient(n, d)
    vecs = []
    first = 1 if plus else 0
    for a in monomials_up_to(n, d):
        if sum(a) >= first:
            p = contract(Operator.monomial(a, n, field), f)
            if p:
                vecs.append(amb.vec(p))
    second = 2 if plus else 1
    for i in range(n):
        h = DpPoly.var(i, n, field) * f
        for a in monomials_up_to(n, d + 1):
            if sum(a) >= second:
                p = contract(Operator.monomial(a, n, field), h)
                if p:
                    vecs.append(amb.vec(p))
    return amb, vecs


@dataclass(frozen=True)
class OrbitTangent:
    f: DpPoly
    tangent: tuple  # echelon basis of t.f inside P_{<=d}
    unipotent: tuple  # echelon basis of t+.f
    dim: int
    dim_unipotent: int

    def contains(self, g: DpPoly, unipotent: bool = False) -> bool:
        amb = _Ambient(self.f.n, self.f.degree)
        basis = self.unipotent if unipotent else self.tangent
        rows = [amb.vec(b) for b in basis]
        return linalg.rank(self.f.field, rows + [amb.vec(g)], len(amb.mons)) == len(rows)


def _span(field, amb, vecs):
    basis, _ = linalg.rref(field, vecs, len(amb.mons))
    return tuple(DpPoly._raw(amb.n, field, {amb.mons[c]: v for c, v in b.items()}) for b in basis)


def orbit_tangent(f: DpPoly) -> OrbitTangent:
    """t.f = Sf + sum m(x_i f) and t+.f = m f + sum m^2(x_i f) in P_{<=deg f}."""
    if not f:
        raise ZeroPolynomialError("orbit of the zero polynomial")
    amb, vt = _tangent_vectors(f, plus=False)
    _, vp = _tangent_vectors(f, plus=True)
    t = _span(f.field, amb, vt)
    tp = _span(f.field, amb, vp)
    return OrbitTangent(f, t, tp, len(t), len(tp))


def orbit_dimension(f: DpPoly) -> int:
    return orbit_tangent(f).dim


def orbit_dimension_table(polys) -> list:
    return [(f, orbit_dimension(f)) for f in polys]


def _perp_of(field, amb, basis_polys):
    """Operators of degree <= d orthogonal to the given polynomials."""
    rows = [dict() for _ in amb.mons]
    for j, b in enumerate(basis_polys):
        for e, c in b.terms.items():
            rows[amb.index[e]][j] = c
    if not basis_polys:
        return [Operator.monomial(m, amb.n, field) for m in amb.mons]
    ker = linalg.left_kernel(field, rows, len(basis_polys))
    return [Operator(amb.n, field, {amb.mons[i]: v for i, v in k.items()}) for k in ker]


def tangent_perp(f: DpPoly, unipotent: bool = False) -> list:
    """(t f)^perp (or (t+ f)^perp) as orthogonal complement inside S_{<=d}."""
    ot = orbit_tangent(f)
    amb = _Ambient(f.n, f.degree)
    return _perp_of(f.field, amb, ot.unipotent if unipotent else ot.tangent)


def tangent_perp_predicate(f: DpPoly, unipotent: bool = False) -> list:
    """Same space from the description by contraction degrees.

    t:  sigma ⌟ f = 0 and deg(d sigma/d dx_i ⌟ f) <= 0.
    t+: deg(sigma ⌟ f) <= 0 and deg(d sigma/d dx_i ⌟ f) <= 1.
    """
    n, field = f.n, f.field
    d = f.degree
    amb = _Ambient(n, d)
    lim0 = 0 if unipotent else -1
    lim1 = 1 if unipotent else 0
    cols: dict = {}
    rows = []
    for m in amb.mons:
        row = {}
        p = contract(Operator.monomial(m, n, field), f)
        for e, c in p.terms.items():
            if sum(e) > lim0:
                row[cols.setdefault(("f", e), len(cols))] = c
        for i in range(n):
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                p = contract(Operator.monomial(tuple(mm), n, field), f)
                for e, c in p.terms.items():
                    if sum(e) > lim1:
                        key = (i, e)
                        j = cols.setdefault(key, len(cols))
                        row[j] = row.get(j, 0) + field(m[i]) * c
        rows.append({j: v for j, v in row.items() if v != 0})
    if not cols:
        return [Operator.monomial(m, n, field) for m in amb.mons]
    ker = linalg.left_kernel(field, rows, len(cols))
    return [Operator(n, field, {amb.mons[i]: v for i, v in k.items()}) for k in ker]


def same_operator_space(a: list, b: list, n: int, d: int, field) -> bool:
    amb = _Ambient(n, d)
    va = [amb.vec(DpPoly._raw(n, field, dict(x.terms))) for x in a]
    vb = [amb.vec(DpPoly._raw(n, field, dict(x.terms))) for x in b]
    ra = linalg.rank(field, va, len(amb.mons))
    return ra == linalg.rank(field, vb, len(amb.mons)) == linalg.rank(field, va + vb, len(amb.mons))


def is_t_compressed_hf(H, t: int, n: int) -> bool:
    d = len(H) - 1
    if d < 2 or t < 1:
        return False
    if t > d:
        return False
    return all(H[i] == comb(i + n - 1, i) for i in range(t + 1)) and H[d - 1] == n


def is_t_compressed(f: DpPoly, t: int) -> bool:
    return is_t_compressed_hf(hilbert_function(f), t, f.n)


def max_compression(f: DpPoly) -> int:
    """Largest t >= 1 with f t-compressed, 0 if none."""
    H = hilbert_function(f)
    best = 0
    for t in range(1, len(H)):
        if is_t_compressed_hf(H, t, f.n):
            best = t
    return best


# ---------------------------------------------------------------------------
# leading-form removal


@dataclass(frozen=True)
class OrbitStep:
    """g -> unit ⌟ phi^vee(g) (homogeneous target) or exp(E) g (general)."""

    phi: Automorphism | None
    unit: Operator | None
    sigma: Operator | None = None
    taus: tuple | None = None

    def apply(self, g: DpPoly) -> DpPoly:
        if self.phi is not None:
            return contract(self.unit, apply_dual_automorphism(self.phi, g))
        return _exp_apply(self.sigma, self.taus, g)


def _lie_action(sigma: Operator, taus, g: DpPoly) -> DpPoly:
    out = contract(sigma, g)
    for i, t in enumerate(taus):
        if t:
            out = out + DpPoly.var(i, g.n, g.field) * contract(t, g)
    return out


def _exp_apply(sigma, taus, g: DpPoly) -> DpPoly:
    out = g
    term = g
    k = 1
    while True:
        term = _lie_action(sigma, taus, term)
        if not term:
            return out
        out = out + term.scale(g.field.one / g.field(factorial(k)))
        k += 1


def _solve_tangent_direction(F: DpPoly, G: DpPoly, homogeneous: bool):
    """sigma ∈ m, tau_i ∈ m^2 with sigma ⌟ F + sum x_i (tau_i ⌟ F) = G + (lower degree)."""
    n, field = F.n, F.field
    d = F.degree
    e = G.degree
    unknowns = []  # (kind, i, monomial)
    contribs = []
    if homogeneous:
        sig_mons = monomials_of_degree(n, d - e) if d - e >= 1 else ()
        tau_mons = monomials_of_degree(n, d - e + 1)
    else:
        sig_mons = [m for m in monomials_up_to(n, d) if sum(m) >= 1]
        tau_mons = [m for m in monomials_up_to(n, d + 1) if sum(m) >= 2]
    for m in sig_mons:
        p = contract(Operator.monomial(m, n, field), F)
        if p:
            unknowns.append(("s", None, m))
            contribs.append(p)
    for i in range(n):
        xi = DpPoly.var(i, n, field)
        for m in tau_mons:
            p = contract(Operator.monomial(m, n, field), F)
            if p:
                unknowns.append(("t", i, m))
                contribs.append(xi * p)
    cols: dict = {}
    rows = []
    for p in contribs:
        row = {}
        for mon, c in p.terms.items():
            if sum(mon) >= e:
                row[cols.setdefault(mon, len(cols))] = c
        rows.append(row)
    target = {}
    for mon, c in G.terms.items():
        target[cols.setdefault(mon, len(cols))] = c
    x = linalg.solve_left(field, rows, len(cols), target)
    if x is None:
        return None
    sigma = Operator.zero(n, field)
    taus = [Operator.zero(n, field) for _ in range(n)]
    for r, v in x.items():
        kind, i, m = unknowns[r]
        mono = Operator.monomial(m, n, field).scale(v)
        if kind == "s":
            sigma = sigma + mono
        else:
            taus[i] = taus[i] + mono
    return sigma, taus


def move_within_orbit(f: DpPoly, F: DpPoly, max_steps: int | None = None):
    """Try to transform f into F by leading-form removal.

    Returns the list of OrbitSteps (applied in order) or None when some
    leading form of f - F is not reached by the unipotent tangent space of F.
    """
    if f.field.p and f.field.p <= max(f.degree, F.degree):
        return None
    homogeneous = F.is_homogeneous()
    steps = []
    g = f
    limit = (max(f.degree, F.degree) + 2) if max_steps is None else max_steps
    for _ in range(limit + 1):
        diff = g - F
        if not diff:
            return steps
        G = diff.top_form()
        if homogeneous and G.degree >= F.degree:
            return None
        sol = _solve_tangent_direction(F, -G, homogeneous)
        if sol is None:
            return None
        sigma, taus = sol
        if homogeneous:
            phi = Automorphism.from_offsets(taus)
            unit = Operator.constant(1, f.n, f.field) + sigma
            step = OrbitStep(phi, unit)
        else:
            step = OrbitStep(None, None, sigma, tuple(taus))
        g_new = step.apply(g)
        new_diff = g_new - F
        if new_diff and new_diff.degree >= diff.degree:
            return None
        steps.append(step)
        g = g_new
    return steps if g == F else None


def collapse_steps(steps, n: int, field, d: int):
    """Single (phi, unit) with unit ⌟ phi^vee(f) equal to replaying the steps
    on any f of degree <= d. Only homogeneous-target steps can be collapsed."""
    phi = Automorphism.identity(n, field)
    unit = Operator.constant(1, n, field)
    for s in steps:
        if s.phi is None:
            raise PreconditionError("exponential steps have no (phi, unit) form")
        unit = s.unit.mul_truncated(s.phi.inverse(d)(unit, d), d)
        phi = phi.compose(s.phi, d)
    return phi, unit


def replay(f: DpPoly, steps) -> DpPoly:
    for s in steps:
        f = s.apply(f)
    return f


@dataclass(frozen=True)
class GradednessVerdict:
    kind: str  # "certified-graded" | "certified-obstruction" | "inconclusive"
    reduced: DpPoly | None = None
    steps: tuple = ()
    witness: Operator | None = None
    t: int = 0
    reason: str = ""


def canonical_gradedness_certificate(f: DpPoly) -> GradednessVerdict:
    if not f:
        raise ZeroPolynomialError("zero polynomial")
    F = f.top_form()
    if f.is_homogeneous():
        return GradednessVerdict("certified-graded", f, (), None, max_compression(f) if f.degree >= 2 else 0, "homogeneous")
    t = max_compression(f)
    d = f.degree
    steps = move_within_orbit(f, F)
    if steps is not None:
        return GradednessVerdict("certified-graded", replay(f, steps), tuple(steps), None, t, "leading-form removal")
    if t >= 1 and d >= 3:
        low = monomials_up_to(f.n, t + 1)
        ot = orbit_tangent(F)
        missing = [m for m in low if not ot.contains(DpPoly.monomial(m, f.n, f.field), unipotent=True)]
        if missing:
            perp = [s for s in tangent_perp(F, unipotent=True) if s.degree <= t + 1]
            perp = _low_degree_basis(perp, f.n, t + 1, f.field)
            tail = f - F
            pick = None
            for s in perp:
                if pairing(s, tail) != 0:
                    pick = s
                    break
            if pick is None and perp:
                pick = perp[0]
            if pick is not None:
                return GradednessVerdict("certified-obstruction", None, (), pick, t, "P_{<=t+1} not inside t+ of the top form")
    return GradednessVerdict("inconclusive", None, (), None, t, "no certificate found")


def _low_degree_basis(ops, n, max_deg, field):
    """Echelon basis of span(ops) ∩ S_{<=max_deg}, top degree pivots first."""
    amb = _Ambient(n, max(max_deg, max((o.degree for o in ops), default=0)))
    rows = [amb.vec(DpPoly._raw(n, field, dict(o.terms))) for o in ops]
    order = sorted(range(len(amb.mons)), key=lambda i: (sum(amb.mons[i]) <= max_deg, -sum(amb.mons[i])))
    basis, _ = linalg.rref(field, rows, len(amb.mons), order=order)
    out = []
    for b in basis:
        if all(sum(amb.mons[c]) <= max_deg for c in b):
            out.append(Operator(n, field, {amb.mons[c]: v for c, v in b.items()}))
    return out
