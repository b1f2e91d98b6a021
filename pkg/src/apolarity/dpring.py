"""Divided-power polynomials, differential operators and their group actions.

``DpPoly`` stores the coefficient of ``x^[a]`` directly.  ``Operator`` is an
ordinary polynomial in ``dx1..dxn`` and acts on ``DpPoly`` by contraction:
``dx^a . x^[b] = x^[b-a]`` when ``b >= a`` and zero otherwise.
"""
from __future__ import annotations

import functools
from math import comb, factorial

from .errors import (
    InvalidAutomorphismError,
    MismatchError,
    UnsupportedCharacteristicError,
)
from .fields import QQ, FieldSpec


@functools.total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial; compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return not isinstance(other, _MinusInfinity)

    def __eq__(self, other):
        return isinstance(other, _MinusInfinity)

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self


MINUS_INFINITY = _MinusInfinity()


def mono_key(e: tuple) -> tuple:
    """Global monomial order: total degree, then lexicographic (x1 > x2 > ...)."""
    return (sum(e), e)


@functools.lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple:
    """Exponent vectors of degree d, descending in the global order."""
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomials_up_to(n: int, d: int) -> list:
    out = []
    for k in range(d + 1):
        out.extend(monomials_of_degree(n, k))
    return out


class _Poly:
    __slots__ = ("n", "field", "terms")
    var_prefix = "x"

    def __init__(self, n: int, field: FieldSpec, terms=None):
        self.n = n
        self.field = field
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise MismatchError(f"exponent {e} has wrong length for n={n}")
                c = field(c)
                if c != 0:
                    clean[e] = clean[e] + c if e in clean else c
                    if clean[e] == 0:
                        del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, n, field, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.field = field
        obj.terms = terms
        return obj

    # construction helpers
    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ):
        return cls._raw(n, field, {})

    @classmethod
    def constant(cls, c, n: int, field: FieldSpec = QQ):
        return cls(n, field, {(0,) * n: c})

    @classmethod
    def monomial(cls, exps, n: int | None = None, field: FieldSpec = QQ, coeff=1):
        exps = tuple(exps)
        return cls(len(exps) if n is None else n, field, {exps: coeff})

    @classmethod
    def var(cls, i: int, n: int, field: FieldSpec = QQ, power: int = 1):
        """Variable with 0-based index i."""
        e = [0] * n
        e[i] = power
        return cls(n, field, {tuple(e): 1})

    # basic queries
    def _check(self, other):
        if self.n != other.n:
            raise MismatchError(f"variable count mismatch: {self.n} vs {other.n}")
        if self.field != other.field:
            raise MismatchError(f"field mismatch: {self.field} vs {other.field}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    @property
    def order(self):
        if not self.terms:
            return MINUS_INFINITY
        return min(sum(e) for e in self.terms)

    def coeff(self, e):
        return self.terms.get(tuple(e), self.field.zero)

    def component(self, i: int):
        return type(self)._raw(self.n, self.field, {e: c for e, c in self.terms.items() if sum(e) == i})

    def truncate(self, max_deg: int):
        """Drop terms of degree above max_deg."""
        return type(self)._raw(self.n, self.field, {e: c for e, c in self.terms.items() if sum(e) <= max_deg})

    def tail_from(self, min_deg: int):
        return type(self)._raw(self.n, self.field, {e: c for e, c in self.terms.items() if sum(e) >= min_deg})

    def top_form(self):
        if not self.terms:
            return self
        return self.component(self.degree)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self):
        """Terms in descending global order."""
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    def uses_variable(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    # linear structure
    def __add__(self, other):
        if isinstance(other, int):
            other = type(self).constant(other, self.n, self.field)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
        return type(self)._raw(self.n, self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.n, self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = type(self).constant(other, self.n, self.field)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.field(c)
        if c == 0:
            return type(self).zero(self.n, self.field)
        return type(self)._raw(self.n, self.field, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, _Poly) or type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.field, frozenset((e, str(c)) for e, c in self.terms.items())))

    def _mono_str(self, e) -> str:
        raise NotImplementedError

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            if self.field.p:
                sign, mag = "+", self.field.fmt(c)
            else:
                sign = "-" if c < 0 else "+"
                mag = str(-c if c < 0 else c)
            body = self._mono_str(e)
            if not body:
                text = mag
            elif mag == "1":
                text = body
            else:
                text = f"{mag}*{body}"
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self}, n={self.n}, field={self.field})"

    def to_vector(self, index: dict) -> dict:
        return {index[e]: c for e, c in self.terms.items()}


class DpPoly(_Poly):
    """Element of the divided-power ring k_dp[x1..xn]."""

    __slots__ = ()

    def _mono_str(self, e):
        parts = []
        for i, a in enumerate(e):
            if a == 1:
                parts.append(f"x{i + 1}")
            elif a > 1:
                parts.append(f"x{i + 1}^[{a}]")
        return "*".join(parts)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return dp_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented


class Operator(_Poly):
    """Element of k[dx1..dxn], acting on DpPoly by contraction."""

    __slots__ = ()

    def _mono_str(self, e):
        parts = []
        for i, a in enumerate(e):
            if a == 1:
                parts.append(f"dx{i + 1}")
            elif a > 1:
                parts.append(f"dx{i + 1}^{a}")
        return "*".join(parts)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, DpPoly):
            return contract(self, other)
        return _ordinary_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = Operator.constant(1, self.n, self.field)
        for _ in range(k):
            out = out * self
        return out

    def mul_truncated(self, other, max_deg: int):
        return _ordinary_mul(self, other, max_deg)

    def partial(self, i: int):
        """Formal derivative with respect to dx_i (0-based)."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Operator(self.n, self.field, out)

    def linear_part(self):
        return self.component(1)


class Polynomial(_Poly):
    """Ordinary polynomial in x1..xn, used for the image of Omega."""

    __slots__ = ()

    def _mono_str(self, e):
        parts = []
        for i, a in enumerate(e):
            if a == 1:
                parts.append(f"x{i + 1}")
            elif a > 1:
                parts.append(f"x{i + 1}^{a}")
        return "*".join(parts)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return _ordinary_mul(self, other)


def _ordinary_mul(a: _Poly, b: _Poly, max_deg: int | None = None):
    a._check(b)
    out: dict = {}
    for e, c in a.terms.items():
        de = sum(e)
        for f, d in b.terms.items():
            if max_deg is not None and de + sum(f) > max_deg:
                continue
            g = tuple(x + y for x, y in zip(e, f))
            out[g] = out.get(g, 0) + c * d
    return type(a)._raw(a.n, a.field, {e: c for e, c in out.items() if c != 0})


def dp_mul(f: DpPoly, g: DpPoly) -> DpPoly:
    """x^[a] * x^[b] = prod binom(a_i + b_i, a_i) x^[a+b]."""
    f._check(g)
    field = f.field
    out: dict = {}
    for a, c in f.terms.items():
        for b, d in g.terms.items():
            m = 1
            for ai, bi in zip(a, b):
                if ai and bi:
                    m *= comb(ai + bi, ai)
            k = field(m)
            if k == 0:
                continue
            e = tuple(x + y for x, y in zip(a, b))
            out[e] = out.get(e, 0) + k * c * d
    return DpPoly._raw(f.n, field, {e: c for e, c in out.items() if c != 0})


def contract(sigma: Operator, f: DpPoly) -> DpPoly:
    """sigma ⌟ f."""
    sigma._check(f)
    out: dict = {}
    fterms = f.terms
    for a, c in sigma.terms.items():
        for b, d in fterms.items():
            ok = True
            for ai, bi in zip(a, b):
                if ai > bi:
                    ok = False
                    break
            if ok:
                e = tuple(bi - ai for ai, bi in zip(a, b))
                out[e] = out.get(e, 0) + c * d
    return DpPoly._raw(f.n, f.field, {e: c for e, c in out.items() if c != 0})


def pairing(sigma: Operator, f: DpPoly):
    """<sigma, f>: the constant term of sigma ⌟ f."""
    sigma._check(f)
    tot = f.field.zero
    for a, c in sigma.terms.items():
        d = f.terms.get(a)
        if d is not None:
            tot += c * d
    return tot


def omega(f: DpPoly) -> Polynomial:
    """Char-0 ring isomorphism x^[a] -> x^a / a!."""
    if f.field.p:
        raise UnsupportedCharacteristicError("omega needs characteristic zero")
    out = {}
    for e, c in f.terms.items():
        den = 1
        for a in e:
            den *= factorial(a)
        out[e] = c / den
    return Polynomial(f.n, f.field, out)


def omega_inverse(p: Polynomial) -> DpPoly:
    if p.field.p:
        raise UnsupportedCharacteristicError("omega needs characteristic zero")
    out = {}
    for e, c in p.terms.items():
        m = 1
        for a in e:
            m *= factorial(a)
        out[e] = c * m
    return DpPoly(p.n, p.field, out)


def substitute(op: Operator, images: list, max_deg: int | None = None) -> Operator:
    """op(images[0], ..., images[n-1]) with optional degree truncation."""
    n_out = images[0].n
    field = op.field
    out = Operator.zero(n_out, field)
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            if k == 0:
                powers[key] = Operator.constant(1, n_out, field)
            else:
                prev = power(i, k - 1)
                powers[key] = prev.mul_truncated(images[i], max_deg) if max_deg is not None else prev * images[i]
        return powers[key]

    for e, c in op.terms.items():
        term = Operator.constant(c, n_out, field)
        for i, k in enumerate(e):
            if k:
                term = term.mul_truncated(power(i, k), max_deg) if max_deg is not None else term * power(i, k)
        out = out + term
    return out


class Automorphism:
    """phi(dx_i) = images[i]; images must have no constant term and an
    invertible linear part."""

    __slots__ = ("images", "n", "field")

    def __init__(self, images):
        images = tuple(images)
        if not images:
            raise InvalidAutomorphismError("automorphism needs at least one variable")
        self.n = images[0].n
        self.field = images[0].field
        for im in images:
            if im.n != self.n or im.field != self.field:
                raise MismatchError("automorphism images live in different rings")
        if len(images) != self.n:
            raise InvalidAutomorphismError("need exactly one image per variable")
        for i, im in enumerate(images):
            if any(sum(e) == 0 for e in im.terms):
                raise InvalidAutomorphismError(f"image of dx{i + 1} has a constant term")
        rows = [[im.coeff(tuple(int(j == k) for k in range(self.n))) for j in range(self.n)] for im in images]
        flat = [c for r in rows for c in r]
        if self.field.matrix(self.n, self.n, flat).rank() < self.n:
            raise InvalidAutomorphismError("linear parts of the images are dependent")
        self.images = images

    @classmethod
    def identity(cls, n: int, field: FieldSpec = QQ):
        return cls([Operator.var(i, n, field) for i in range(n)])

    @classmethod
    def from_offsets(cls, offsets):
        """phi(dx_i) = dx_i + offsets[i]."""
        offsets = list(offsets)
        n = offsets[0].n
        return cls([Operator.var(i, n, offsets[0].field) + offsets[i] for i in range(n)])

    def offsets(self):
        return [im - Operator.var(i, self.n, self.field) for i, im in enumerate(self.images)]

    def __call__(self, op: Operator, max_deg: int | None = None) -> Operator:
        return substitute(op, list(self.images), max_deg)

    def compose(self, other: Automorphism, max_deg: int | None = None) -> Automorphism:
        """self ∘ other: dx_i -> self(other(dx_i))."""
        return Automorphism([self(im, max_deg) for im in other.images])

    def inverse(self, max_deg: int) -> Automorphism:
        """psi with phi(psi(dx_i)) = dx_i modulo operators of order > max_deg."""
        n, field = self.n, self.field
        rows = [[im.coeff(tuple(int(j == k) for k in range(n))) for j in range(n)] for im in self.images]
        inv = self.field.matrix(n, n, [c for r in rows for c in r]).inv()
        highs = [im - im.linear_part() for im in self.images]
        var = [Operator.var(i, n, field) for i in range(n)]
        psi = list(var)
        for _ in range(max_deg):
            rhs = [var[i] - substitute(highs[i], psi, max_deg) for i in range(n)]
            psi = [
                sum((rhs[j].scale(inv[i, j]) for j in range(n) if inv[i, j] != 0), Operator.zero(n, field))
                for i in range(n)
            ]
        return Automorphism(psi)

    def is_identity(self) -> bool:
        return all(not d for d in self.offsets())

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Automorphism(" + ", ".join(f"dx{i + 1} -> {im}" for i, im in enumerate(self.images)) + ")"


def _char_guard(field: FieldSpec, bound, what: str):
    if field.p and not isinstance(bound, _MinusInfinity) and field.p <= bound:
        raise UnsupportedCharacteristicError(
            f"{what} needs characteristic 0 or above {bound}, got {field.p}"
        )


def apply_dual_automorphism(phi: Automorphism, f: DpPoly) -> DpPoly:
    """sum over a of x^[a] * (D^a ⌟ f) with D_i = phi(dx_i) - dx_i."""
    if phi.n != f.n or phi.field != f.field:
        raise MismatchError("automorphism and polynomial live in different rings")
    if not f:
        return f
    d = f.degree
    _char_guard(f.field, d, "the dual automorphism")
    offs = [o.truncate(d) for o in phi.offsets()]
    orders = [o.order for o in offs]
    n = f.n
    result = DpPoly.zero(n, f.field)
    powers = [[Operator.constant(1, n, f.field)] for _ in range(n)]

    def power(i, k):
        while len(powers[i]) <= k:
            powers[i].append(powers[i][-1].mul_truncated(offs[i], d))
        return powers[i][k]

    def walk(i, budget, acc_op, exps):
        nonlocal result
        if i == n:
            part = contract(acc_op, f)
            if part:
                result = result + DpPoly.monomial(exps, n, f.field) * part
            return
        if not offs[i]:
            walk(i + 1, budget, acc_op, exps + (0,))
            return
        k = 0
        while k * orders[i] <= budget:
            op = acc_op if k == 0 else acc_op.mul_truncated(power(i, k), d)
            if k == 0 or op:
                walk(i + 1, budget - k * orders[i], op, exps + (k,))
            k += 1

    walk(0, d, Operator.constant(1, n, f.field), ())
    return result


def apply_dual_derivation(derivation, f: DpPoly) -> DpPoly:
    """sum_i x_i * (D_i ⌟ f)."""
    derivation = list(derivation)
    if len(derivation) != f.n:
        raise MismatchError("derivation needs one operator per variable")
    out = DpPoly.zero(f.n, f.field)
    for i, di in enumerate(derivation):
        di._check(f)
        if di:
            out = out + DpPoly.var(i, f.n, f.field) * contract(di, f)
    return out


def dp_power_of_linear(w, k: int, n: int, field: FieldSpec) -> DpPoly:
    """ell^[k] for ell = sum w_j x_j, i.e. sum_{|a|=k} w^a x^[a]."""
    w = [field(c) for c in w]
    out = {}
    for e in monomials_of_degree(n, k):
        c = field.one
        for wj, a in zip(w, e):
            if a:
                c = c * wj ** a
        if c != 0:
            out[e] = c
    return DpPoly._raw(n, field, out)


def translate(f: DpPoly, w, up_to: int) -> DpPoly:
    """Truncation to degree up_to of f * sum_i ell^[i], ell = sum w_j x_j."""
    if len(w) != f.n:
        raise MismatchError("translation vector has wrong length")
    _char_guard(f.field, up_to, "translation")
    if f and f.degree > up_to:
        raise MismatchError("up_to must be at least deg f")
    expo = DpPoly.zero(f.n, f.field)
    for i in range(up_to + 1):
        expo = expo + dp_power_of_linear(w, i, f.n, f.field)
    return (f * expo).truncate(up_to)


def linear_substitution_dual(matrix, n: int, field: FieldSpec) -> Automorphism:
    """Linear automorphism dx_i -> sum_j matrix[i][j] dx_j."""
    return Automorphism([Operator(n, field, {tuple(int(k == j) for k in range(n)): matrix[i][j] for j in range(n)}) for i in range(n)])


def all_partials(f: DpPoly) -> list:
    """dx^a ⌟ f for every |a| <= deg f (with repetitions of zero dropped)."""
    if not f:
        return []
    out = []
    for a in monomials_up_to(f.n, f.degree):
        p = contract(Operator.monomial(a, f.n, f.field), f)
        if p:
            out.append((a, p))
    return out


def iter_exponents(n: int, max_deg: int):
    for d in range(max_deg + 1):
        yield from monomials_of_degree(n, d)
