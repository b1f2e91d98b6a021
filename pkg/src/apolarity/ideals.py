"""Ideals of k[dx1..dxn] of finite colength, stored inside S/m^D.

An ideal is kept as the reduced echelon basis of its image in S_{<D}.
Columns follow the *standard* order: increasing degree, and inside one
degree the global monomial order from the top down.  Because S_{<D} is a
prefix of S_{<D+1} in this order, vectors are valid for every larger D.
"""
from __future__ import annotations

import functools
from math import comb

from . import linalg
from .dpring import Operator, monomials_of_degree
from .errors import MismatchError, PrecisionError, PreconditionError, ZeroPolynomialError
from .fields import FieldSpec


class MonomialTable:
    """Indexing data for S_{<D} in n variables."""

    def __init__(self, n: int, D: int):
        self.n = n
        self.D = D
        mons = []
        starts = []
        for d in range(D):
            starts.append(len(mons))
            mons.extend(monomials_of_degree(n, d))
        starts.append(len(mons))
        self.mons = tuple(mons)
        self.starts = tuple(starts)
        self.index = {m: i for i, m in enumerate(mons)}
        self.degs = tuple(sum(m) for m in mons)
        self.size = len(mons)
        mult = []
        for i in range(n):
            row = []
            for m in mons:
                e = list(m)
                e[i] += 1
                row.append(self.index.get(tuple(e), -1))
            mult.append(tuple(row))
        self.mult = tuple(mult)

    def count_below(self, d: int) -> int:
        return self.starts[min(d, self.D)]

    def vec(self, op: Operator) -> dict:
        out = {}
        for e, c in op.terms.items():
            if sum(e) < self.D:
                out[self.index[e]] = c
        return out

    def op(self, vec: dict, field: FieldSpec) -> Operator:
        return Operator._raw(self.n, field, {self.mons[c]: v for c, v in vec.items() if v != 0})

    def shift(self, vec: dict, i: int) -> dict:
        row = self.mult[i]
        out = {}
        for c, v in vec.items():
            t = row[c]
            if t >= 0:
                out[t] = v
        return out

    def times_monomial(self, vec: dict, m: tuple) -> dict:
        out = {}
        D = self.D
        dm = sum(m)
        for c, v in vec.items():
            if self.degs[c] + dm >= D:
                continue
            e = tuple(a + b for a, b in zip(self.mons[c], m))
            out[self.index[e]] = v
        return out


@functools.lru_cache(maxsize=64)
def monomial_table(n: int, D: int) -> MonomialTable:
    return MonomialTable(n, D)


def _pivot_counts(pivots, table: MonomialTable) -> list:
    """cnt[d] = number of pivots in degree d."""
    cnt = [0] * table.D
    for p in pivots:
        cnt[table.degs[p]] += 1
    return cnt


class TruncatedIdeal:
    """Image of an ideal I of finite colength in S/m^D.

    ``N`` is the certified nilpotency bound (m^N ⊆ I), or None when the
    truncation is too coarse to certify it.
    """

    __slots__ = ("n", "field", "D", "basis", "pivots", "N", "_hf")

    def __init__(self, n, field, D, basis, pivots, N, hf):
        self.n = n
        self.field = field
        self.D = D
        self.basis = basis
        self.pivots = pivots
        self.N = N
        self._hf = hf

    # construction
    @classmethod
    def from_span(cls, n: int, field: FieldSpec, D: int, vectors, check_closed: bool = True) -> TruncatedIdeal:
        table = monomial_table(n, D)
        vectors = [v for v in vectors if v]
        basis, pivots = linalg.rref(field, vectors, table.size)
        obj = cls._finish(n, field, D, basis, pivots)
        if check_closed and not obj.is_closed():
            raise PreconditionError("span is not closed under multiplication by the variables")
        return obj

    @classmethod
    def _finish(cls, n, field, D, basis, pivots):
        table = monomial_table(n, D)
        cnt = _pivot_counts(pivots, table)
        hf = []
        N = None
        for d in range(D):
            h = comb(d + n - 1, n - 1) - cnt[d]
            if h == 0:
                N = d
                break
            hf.append(h)
        return cls(n, field, D, basis, pivots, N, tuple(hf))

    @classmethod
    def from_generators(cls, gens, D: int, n: int | None = None, field: FieldSpec | None = None) -> TruncatedIdeal:
        """Image in S/m^D of the ideal generated by ``gens``."""
        gens = [g for g in gens if g]
        if n is None:
            if not gens:
                raise ZeroPolynomialError("cannot infer the ring from an empty generator list")
            n, field = gens[0].n, gens[0].field
        table = monomial_table(n, D)
        seeds = []
        for g in gens:
            if g.n != n or g.field != field:
                raise MismatchError("generators live in different rings")
            v = table.vec(g)
            if v:
                seeds.append(v)
        basis, pivots = linalg.rref(field, seeds, table.size)
        rows = []
        for v in basis:
            low = min(table.degs[c] for c in v)
            for d in range(D - low):
                for m in monomials_of_degree(n, d):
                    w = table.times_monomial(v, m)
                    if w:
                        rows.append(w)
        basis, pivots = linalg.rref(field, rows, table.size)
        return cls._finish(n, field, D, basis, pivots)

    @classmethod
    def maximal_power(cls, n: int, field: FieldSpec, k: int, D: int | None = None) -> TruncatedIdeal:
        """m^k."""
        D = k + 1 if D is None else D
        table = monomial_table(n, D)
        vecs = [{c: field.one} for c in range(table.count_below(k), table.size)]
        return cls._finish(n, field, D, vecs, list(range(table.count_below(k), table.size)))

    # basic data
    @property
    def table(self) -> MonomialTable:
        return monomial_table(self.n, self.D)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def require_certified(self):
        if self.N is None:
            raise PrecisionError(f"m^N ⊆ I could not be certified below truncation D={self.D}")
        return self.N

    def is_closed(self) -> bool:
        table = self.table
        shifted = []
        for v in self.basis:
            for i in range(self.n):
                w = table.shift(v, i)
                if w:
                    shifted.append(w)
        for w in shifted:
            if linalg.reduce_against(w, self.basis, self.pivots):
                return False
        return True

    def local_hilbert_function(self) -> tuple:
        """H(i) = dim (m^i + I)/(m^{i+1} + I) for the quotient S/I."""
        self.require_certified()
        return self._hf

    def quotient_dimension(self) -> int:
        return sum(self.local_hilbert_function())

    def operators(self) -> list:
        return [self.table.op(v, self.field) for v in self.basis]

    def _same_ring(self, other: TruncatedIdeal):
        if self.n != other.n or self.field != other.field:
            raise MismatchError("ideals live in different rings")

    # re-embedding
    def reembed(self, D: int) -> TruncatedIdeal:
        """Same ideal inside S/m^D; lossless once D >= N."""
        if D == self.D:
            return self
        N = self.require_certified()
        if D < N:
            raise PrecisionError(f"cannot truncate below the nilpotency bound {N}")
        table = monomial_table(self.n, D)
        lo = table.count_below(N)
        basis, pivots = [], []
        for v, p in zip(self.basis, self.pivots):
            if p < lo:
                basis.append({c: x for c, x in v.items() if c < lo})
                pivots.append(p)
        for c in range(lo, table.size):
            basis.append({c: self.field.one})
            pivots.append(c)
        return TruncatedIdeal(self.n, self.field, D, basis, pivots, N, self._hf)

    def with_headroom(self) -> TruncatedIdeal:
        """Re-embed so that D >= N + 1 (needed for minimal generators)."""
        N = self.require_certified()
        return self if self.D >= N + 1 else self.reembed(N + 1)

    # membership
    def contains_vector(self, vec: dict) -> bool:
        return not linalg.reduce_against(vec, self.basis, self.pivots)

    def contains(self, op: Operator) -> bool:
        """op ∈ I (exact once m^D ⊆ I)."""
        self.require_certified()
        return self.contains_vector(self.table.vec(op))

    def contains_ideal(self, other: TruncatedIdeal) -> bool:
        """other ⊆ self."""
        self._same_ring(other)
        D = max(self.D, other.D)
        a, b = self.reembed(D), other.reembed(D)
        return all(a.contains_vector(v) for v in b.basis)

    def __eq__(self, other):
        if not isinstance(other, TruncatedIdeal):
            return NotImplemented
        if self.n != other.n or self.field != other.field:
            return False
        D = max(self.D, other.D)
        a, b = self.reembed(D), other.reembed(D)
        return a.rank == b.rank and a.contains_ideal(b)

    __hash__ = None

    def witness_outside(self, other: TruncatedIdeal):
        """An element of ``other`` not in ``self``, or None."""
        D = max(self.D, other.D)
        a, b = self.reembed(D), other.reembed(D)
        for v in b.basis:
            if not a.contains_vector(v):
                return b.table.op(v, self.field)
        return None

    # generators
    def minimal_generators(self) -> list:
        """Minimal generators, chosen greedily along the standard order."""
        ideal = self.with_headroom()
        table = ideal.table
        m_rows = []
        for v in ideal.basis:
            for i in range(ideal.n):
                w = table.shift(v, i)
                if w:
                    m_rows.append(w)
        mb, mp = linalg.rref(ideal.field, m_rows, table.size)
        residues = [linalg.reduce_against(v, mb, mp) for v in ideal.basis]
        chosen = _independent_prefix(ideal.field, residues, table.size)
        return [table.op(ideal.basis[k], ideal.field) for k in chosen]

    def homogeneous_component(self, d: int) -> list:
        """Basis of I ∩ S_d."""
        table = self.table
        lo, hi = table.starts[d], table.starts[d + 1]
        if not self.basis:
            return []
        # kill columns first: rows pivoting inside the block live in S_d
        order = [c for c in range(table.size) if not (lo <= c < hi)] + list(range(lo, hi))
        basis, pivots = linalg.rref(self.field, self.basis, table.size, order=order)
        out = []
        for v in basis:
            if all(lo <= c < hi for c in v):
                out.append(table.op(v, self.field))
        return out

    def component_dimension(self, d: int) -> int:
        return len(self.homogeneous_component(d))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.minimal_generators()) if self.N is not None else "?"
        return f"TruncatedIdeal(n={self.n}, D={self.D}, N={self.N}, gens=[{gens}])"


def _independent_prefix(field, rows, ncols) -> list:
    """Indices of the greedy maximal independent subset of ``rows``."""
    nz = [k for k, r in enumerate(rows) if r]
    if not nz:
        return []
    nrows = len(nz)
    flat = [0] * (ncols * nrows)
    for j, k in enumerate(nz):
        for c, v in rows[k].items():
            flat[c * nrows + j] = v
    red, rk = field.matrix(ncols, nrows, flat).rref()
    ent = red.entries()
    out = []
    for r in range(rk):
        for j in range(nrows):
            if ent[r * nrows + j] != 0:
                out.append(nz[j])
                break
    return out


def _common(ideals, extra: int = 0):
    base = ideals[0]
    for J in ideals[1:]:
        base._same_ring(J)
    D = max(max(I.D for I in ideals), max(I.require_certified() for I in ideals) + extra)
    return [I.reembed(D) for I in ideals], D


def ideal_sum(I: TruncatedIdeal, J: TruncatedIdeal) -> TruncatedIdeal:
    (a, b), D = _common([I, J])
    return TruncatedIdeal.from_span(I.n, I.field, D, a.basis + b.basis, check_closed=False)


def ideal_intersection(I: TruncatedIdeal, J: TruncatedIdeal) -> TruncatedIdeal:
    (a, b), D = _common([I, J])
    table = a.table
    vecs = linalg.intersect(I.field, a.basis, b.basis, table.size)
    return TruncatedIdeal.from_span(I.n, I.field, D, vecs, check_closed=False)


def ideal_product(I: TruncatedIdeal, J: TruncatedIdeal) -> TruncatedIdeal:
    """I*J, generated by products of minimal generators.

    The truncation starts just above max(N_I, N_J) and grows until the
    nilpotency bound of the product is certified, up to N_I + N_J + 1.
    """
    I._same_ring(J)
    if I.N is None or J.N is None:
        # no nilpotency bound: the product is only known modulo m^D
        D = min(I.D, J.D)
        table = monomial_table(I.n, D)
        gi = [table.op({c: x for c, x in v.items() if c < table.size}, I.field) for v in I.basis]
        gj = [table.op({c: x for c, x in v.items() if c < table.size}, I.field) for v in J.basis]
        return TruncatedIdeal.from_generators([a.mul_truncated(b, D - 1) for a in gi for b in gj], D, I.n, I.field)
    NI, NJ = I.N, J.N
    gi, gj = I.minimal_generators(), J.minimal_generators()
    cap = NI + NJ + 1
    D = max(NI, NJ) + 1
    while True:
        prods = [a.mul_truncated(b, D - 1) for a in gi for b in gj]
        P = TruncatedIdeal.from_generators(prods, D, I.n, I.field)
        if P.N is not None and P.N < D:
            return P
        if D >= cap:
            raise PrecisionError(f"product nilpotency bound not certified below D={D}")
        D += 1


def ideal_power(I: TruncatedIdeal, k: int) -> TruncatedIdeal:
    out = I
    for _ in range(k - 1):
        out = ideal_product(out, I)
    return out


def ideal_combine(kind: str, I: TruncatedIdeal, J: TruncatedIdeal) -> TruncatedIdeal:
    if kind == "sum":
        return ideal_sum(I, J)
    if kind == "product":
        return ideal_product(I, J)
    if kind == "intersection":
        return ideal_intersection(I, J)
    raise PreconditionError(f"unknown ideal operation {kind!r}")


def colon(I: TruncatedIdeal, sigma: Operator) -> TruncatedIdeal:
    """(I : sigma) = {tau : tau * sigma ∈ I}."""
    if not sigma:
        raise ZeroPolynomialError("colon by the zero operator")
    if sigma.n != I.n or sigma.field != I.field:
        raise MismatchError("operator and ideal live in different rings")
    N = I.require_certified()
    D = max(I.D, N)
    I = I.reembed(D)
    table = I.table
    sv = table.vec(sigma)
    images = []
    for c in range(table.size):
        images.append(table.times_monomial(sv, table.mons[c]))
    reduced = [linalg.reduce_against(v, I.basis, I.pivots) for v in images]
    ker = linalg.left_kernel(I.field, reduced, table.size)
    return TruncatedIdeal.from_span(I.n, I.field, D, ker, check_closed=False)


def quotient_by_maximal(I: TruncatedIdeal) -> TruncatedIdeal:
    """(I : m)."""
    out = None
    for i in range(I.n):
        c = colon(I, Operator.var(i, I.n, I.field))
        out = c if out is None else ideal_intersection(out, c)
    return out


def socle_dimension(I: TruncatedIdeal) -> int:
    """dim of the socle (I : m)/I of S/I."""
    I.require_certified()
    return I.quotient_dimension() - quotient_by_maximal(I).quotient_dimension()


def quotient_dimension(I: TruncatedIdeal) -> int:
    return I.quotient_dimension()


def hilbert_function_of_quotient(I: TruncatedIdeal) -> tuple:
    return I.local_hilbert_function()


def initial_ideal(I: TruncatedIdeal) -> TruncatedIdeal:
    """Ideal spanned by the lowest-degree forms of the elements of I.

    I contains m^N, so top-degree forms would only see m^N; the lowest forms
    give the tangent cone, i.e. the limit of the dilation orbit at the origin,
    and S/in(I) is the associated graded algebra of S/I.
    """
    I.require_certified()
    table = I.table
    # natural column order is degree-ascending, so each pivot is the lowest monomial
    basis, pivots = linalg.rref(I.field, I.basis, table.size)
    vecs = []
    for v, p in zip(basis, pivots):
        d = table.degs[p]
        vecs.append({c: x for c, x in v.items() if table.degs[c] == d})
    return TruncatedIdeal.from_span(I.n, I.field, I.D, vecs, check_closed=False)


def is_homogeneous_ideal(I: TruncatedIdeal) -> bool:
    return initial_ideal(I) == I
