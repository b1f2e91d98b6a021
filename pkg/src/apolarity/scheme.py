"""Macaulay bounds, O-sequences and Hilbert scheme tangent dimensions."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import linalg
from .apolar import annihilator
from .dpring import DpPoly
from .errors import PreconditionError
from .ideals import TruncatedIdeal, ideal_intersection, ideal_product, initial_ideal, socle_dimension


def binomial_expansion(h: int, i: int) -> tuple:
    """Greedy i-th binomial expansion h = C(a_i, i) + C(a_{i-1}, i-1) + ...

    Returns the pairs (a_j, j) with a_i > a_{i-1} > ... >= j >= 1.
    """
    if i < 1:
        raise PreconditionError("binomial expansions start at i = 1")
    if h < 0:
        raise PreconditionError("h must be non-negative")
    out = []
    j = i
    while h > 0 and j >= 1:
        a = j
        while comb(a + 1, j) <= h:
            a += 1
        out.append((a, j))
        h -= comb(a, j)
        j -= 1
    return tuple(out)


def macaulay_bound(h: int, i: int) -> int:
    """h^<i>: the largest possible value of H(i+1) given H(i) = h."""
    return sum(comb(a + 1, j + 1) for a, j in binomial_expansion(h, i))


def is_o_sequence(H) -> bool:
    """H(0) = 1 and H(i+1) <= H(i)^<i> for every i >= 1."""
    H = list(H)
    if not H or H[0] != 1 or any(h < 0 for h in H):
        return False
    for i in range(1, len(H) - 1):
        if H[i + 1] > macaulay_bound(H[i], i):
            return False
    return True


def max_growth_at(H, i: int) -> bool:
    H = list(H)
    if i < 1 or i + 1 >= len(H):
        return False
    return H[i + 1] == macaulay_bound(H[i], i)


def persists_from(H, i: int) -> bool:
    """Maximal growth at every j >= i inside the given range (Gotzmann persistence)."""
    H = list(H)
    return all(max_growth_at(H, j) for j in range(i, len(H) - 1))


def si_check(H) -> bool:
    """Symmetric, and the first differences of the first half form an O-sequence."""
    H = list(H)
    if not H or H != H[::-1]:
        return False
    half = H[: len(H) // 2 + 1]
    diffs = [half[0]] + [half[k] - half[k - 1] for k in range(1, len(half))]
    return is_o_sequence(diffs)


# ---------------------------------------------------------------------------
# tangent spaces


@dataclass(frozen=True)
class HSchemeCertificate:
    f: tuple  # the inverse system generators
    n: int
    r: int
    tangent_dim: int
    unobstructed: bool
    hilbert_of_I2: tuple
    conormal_dim: int  # dim I/I^2
    gorenstein: bool
    nilpotency_of_I2: int
    notes: tuple = ()


def _normal_form(vec, ideal: TruncatedIdeal):
    return linalg.reduce_against(vec, ideal.basis, ideal.pivots)


def hom_dimension(I: TruncatedIdeal, I2: TruncatedIdeal) -> int:
    """dim_k Hom_S(I, S/I), computed on the finite module I/I^2."""
    D = I2.require_certified()
    D = max(D, I.D, I2.D)
    I, I2 = I.reembed(D), I2.reembed(D)
    table = I.table
    field = I.field
    n = I.n
    # M = I/I^2 inside S/I^2
    mrows = [_normal_form(v, I2) for v in I.basis]
    mbasis, mpiv = linalg.rref(field, [v for v in mrows if v], table.size)
    # A = S/I with the standard monomials as basis
    pivset = set(I.pivots)
    std = [c for c in range(table.size) if c not in pivset]
    sidx = {c: k for k, c in enumerate(std)}
    dm, da = len(mbasis), len(std)

    def m_coords(v):
        v = _normal_form(v, I2)
        return {k: v[p] for k, p in enumerate(mpiv) if p in v}

    def a_shift(c, i):
        w = table.shift({c: field.one}, i)
        return {sidx[x]: y for x, y in _normal_form(w, I).items()}

    unknown = lambda k, a: k * da + a  # noqa: E731
    eqs = []
    for k, b in enumerate(mbasis):
        for i in range(n):
            coords = m_coords(table.shift(b, i))
            # psi(dx_i b_k) - dx_i psi(b_k) = 0, one equation per standard monomial
            rows = [dict() for _ in range(da)]
            for l, c in coords.items():
                for a in range(da):
                    rows[a][unknown(l, a)] = rows[a].get(unknown(l, a), field.zero) + c
            for a, col in enumerate(std):
                for t, v in a_shift(col, i).items():
                    key = unknown(k, a)
                    rows[t][key] = rows[t].get(key, field.zero) - v
            eqs.extend({x: y for x, y in r.items() if y != 0} for r in rows)
    eqs = [e for e in eqs if e]
    return dm * da - linalg.rank(field, eqs, dm * da)


def hs_tangent_dim(f) -> HSchemeCertificate:
    """Tangent space to the Hilbert scheme at Spec S/Ann(f).

    ``f`` may also be a list of polynomials; the ideal is then the
    intersection of their annihilators.
    """
    polys = (f,) if isinstance(f, DpPoly) else tuple(f)
    return hs_tangent_dim_of_ideal(system_ideal(polys), polys)


def system_ideal(polys) -> TruncatedIdeal:
    """Ann(F_1) ∩ ... ∩ Ann(F_k)."""
    out = None
    for g in polys:
        a = annihilator(g)
        out = a if out is None else ideal_intersection(out, a)
    if out is None:
        raise PreconditionError("empty inverse system")
    return out


def hs_tangent_dim_of_ideal(I: TruncatedIdeal, source=()) -> HSchemeCertificate:
    """Same certificate for an ideal of finite colength supported at the origin.

    For Gorenstein quotients dim Hom(I, S/I) = dim I/I^2; otherwise the
    homomorphisms are counted directly.
    """
    n = I.n
    r = I.quotient_dimension()
    I2 = ideal_product(I, I)
    conormal = I2.quotient_dimension() - r
    gorenstein = socle_dimension(I) == 1
    notes = []
    if gorenstein:
        tangent = conormal
    else:
        tangent = hom_dimension(I, I2)
        notes.append("non-Gorenstein quotient: tangent space counted as Hom(I, S/I)")
    return HSchemeCertificate(
        tuple(source), n, r, tangent, tangent == r * n, I2.local_hilbert_function(), conormal, gorenstein,
        I2.require_certified(), tuple(notes),
    )


def gm_limit(f: DpPoly) -> TruncatedIdeal:
    """The torus limit: initial ideal of Ann(f)."""
    return initial_ideal(annihilator(f))
