"""Annihilators, Hilbert functions, catalecticants and the secant test."""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .dpring import DpPoly, Operator, contract, monomials_of_degree, monomials_up_to
from .errors import NotHomogeneousError, PreconditionError, ZeroPolynomialError
from .ideals import TruncatedIdeal, monomial_table, socle_dimension


def _require_nonzero(f: DpPoly):
    if not f:
        raise ZeroPolynomialError("the zero polynomial has no apolar algebra")


class PartialSpace:
    """Echelon data for the spaces W(e) = m^e f = span{dx^a ⌟ f : |a| >= e}.

    Columns are monomials of P_{<=d} taken top degree first, so the number
    of pivots in degree <= i equals dim(W(e) ∩ P_{<=i}).
    """

    def __init__(self, f: DpPoly):
        _require_nonzero(f)
        self.f = f
        self.d = f.degree
        n, d = f.n, self.d
        self.cols = []
        for k in range(d, -1, -1):
            self.cols.extend(monomials_of_degree(n, k))
        self.col_index = {m: i for i, m in enumerate(self.cols)}
        self.partials = {}
        for a in monomials_up_to(n, d):
            self.partials[a] = contract(Operator.monomial(a, n, f.field), f)
        self._w = {}

    def vector(self, g: DpPoly) -> dict:
        return {self.col_index[e]: c for e, c in g.terms.items()}

    def w_counts(self, e: int) -> list:
        """cnt[i] = dim(W(e) ∩ P_{<=i}) for i = 0..d."""
        e = max(e, 0)
        if e > self.d:
            return [0] * (self.d + 1)
        if e not in self._w:
            rows = [self.vector(p) for a, p in self.partials.items() if sum(a) >= e and p]
            _, pivots = linalg.rref(self.f.field, rows, len(self.cols))
            per_deg = [0] * (self.d + 1)
            for p in pivots:
                per_deg[sum(self.cols[p])] += 1
            cnt, acc = [], 0
            for i in range(self.d + 1):
                acc += per_deg[i]
                cnt.append(acc)
            self._w[e] = cnt
        return self._w[e]

    def w(self, e: int, i: int) -> int:
        if i < 0:
            return 0
        return self.w_counts(e)[min(i, self.d)]

    def basis(self, e: int):
        e = max(e, 0)
        rows = [self.vector(p) for a, p in self.partials.items() if sum(a) >= e and p]
        basis, pivots = linalg.rref(self.f.field, rows, len(self.cols))
        return basis, pivots

    def to_poly(self, vec: dict) -> DpPoly:
        return DpPoly._raw(self.f.n, self.f.field, {self.cols[c]: v for c, v in vec.items()})


def apolar_degree(f: DpPoly) -> int:
    """dim_k of the apolar algebra = dim of the space of all partials."""
    return PartialSpace(f).w(0, f.degree)


def hilbert_function(f: DpPoly) -> tuple:
    """H(i) = dim(Sf ∩ P_{<=i}) - dim(Sf ∩ P_{<=i-1})."""
    ps = PartialSpace(f)
    return tuple(ps.w(0, i) - ps.w(0, i - 1) for i in range(ps.d + 1))


def annihilator(f: DpPoly) -> TruncatedIdeal:
    """Ann(f) inside S/m^D with D = deg f + 2."""
    _require_nonzero(f)
    d = f.degree
    n, field = f.n, f.field
    D = d + 2
    table = monomial_table(n, D)
    cols = {}
    rows = []
    for c in range(table.starts[d + 1]):
        row = {}
        for e, v in contract(Operator.monomial(table.mons[c], n, field), f).terms.items():
            row[cols.setdefault(e, len(cols))] = v
        rows.append(row)
    vecs = [dict(k) for k in linalg.left_kernel(field, rows, max(len(cols), 1))]
    for c in range(table.starts[d + 1], table.size):
        vecs.append({c: field.one})
    return TruncatedIdeal.from_span(n, field, D, vecs, check_closed=False)


@dataclass(frozen=True)
class ApolarSummary:
    f: DpPoly
    degree: int
    socle_degree: int
    hilbert: tuple
    ann_generators: tuple


def apolar_summary(f: DpPoly) -> ApolarSummary:
    H = hilbert_function(f)
    ann = annihilator(f)
    return ApolarSummary(f, sum(H), f.degree, H, tuple(ann.minimal_generators()))


def essential_variables(f: DpPoly) -> int:
    return hilbert_function(f)[1] if f.degree >= 1 else 0


@dataclass(frozen=True)
class Catalecticant:
    a: int
    matrix: tuple  # rows indexed by P_{d-a} monomials, columns by S_a monomials
    row_labels: tuple
    col_labels: tuple
    field: object

    @property
    def rank(self) -> int:
        rows = [{j: v for j, v in enumerate(r) if v != 0} for r in self.matrix]
        return linalg.rank(self.field, rows, len(self.col_labels))


def catalecticant(F: DpPoly, a: int) -> Catalecticant:
    """Matrix of sigma -> sigma ⌟ F from S_a to P_{d-a}."""
    _require_nonzero(F)
    if not F.is_homogeneous():
        raise NotHomogeneousError("catalecticant needs a homogeneous form")
    d = F.degree
    if not 0 <= a <= d:
        raise PreconditionError(f"catalecticant degree {a} outside 0..{d}")
    cols = monomials_of_degree(F.n, a)
    rows = monomials_of_degree(F.n, d - a)
    ridx = {m: i for i, m in enumerate(rows)}
    mat = [[F.field.zero] * len(cols) for _ in rows]
    for j, m in enumerate(cols):
        p = contract(Operator.monomial(m, F.n, F.field), F)
        for e, v in p.terms.items():
            mat[ridx[e]][j] = v
    return Catalecticant(a, tuple(tuple(r) for r in mat), rows, cols, F.field)


@dataclass(frozen=True)
class SecantVerdict:
    member: bool
    rank: int
    r: int
    proven_regime: bool

    def __bool__(self):
        return self.member


def secant_membership(F: DpPoly, r: int) -> SecantVerdict:
    """rank Cat_{floor(d/2)}(F) <= r, flagged when d < 2r."""
    _require_nonzero(F)
    if not F.is_homogeneous():
        raise NotHomogeneousError("secant test needs a homogeneous form")
    d = F.degree
    rk = catalecticant(F, d // 2).rank
    return SecantVerdict(rk <= r, rk, r, d >= 2 * r)


def apolar_socle_dimension(f: DpPoly) -> int:
    return socle_dimension(annihilator(f))
