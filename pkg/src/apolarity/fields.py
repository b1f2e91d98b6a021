"""Exact coefficient fields backed by python-flint scalars."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint

from .errors import MismatchError, PreconditionError


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p < 0 or self.p == 1:
            raise PreconditionError(f"invalid characteristic {self.p}")
        if self.p and not flint.fmpz(self.p).is_prime():
            raise PreconditionError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls(0)
        if text.startswith("fp:"):
            try:
                return cls(int(text[3:]))
            except ValueError:
                pass
        raise PreconditionError(f"unknown field {text!r}; expected q or fp:<p>")

    @property
    def char(self) -> int:
        return self.p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "q" if self.p == 0 else f"fp:{self.p}"

    def __call__(self, x):
        """Coerce an int, Fraction, flint scalar or ``"p/q"`` string."""
        p = self.p
        if isinstance(x, str):
            x = Fraction(x)
        if p == 0:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, flint.nmod):
                raise MismatchError("prime-field element used over the rationals")
            return flint.fmpq(int(x))
        if isinstance(x, flint.nmod):
            if x.modulus() != p:
                raise MismatchError("elements of different prime fields")
            return x
        if isinstance(x, (Fraction, flint.fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % p == 0:
                raise PreconditionError(f"coefficient {num}/{den} is not defined over F_{p}")
            return flint.nmod(num, p) / flint.nmod(den, p)
        return flint.nmod(int(x), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_valid_divisor(self, k: int) -> bool:
        return self.p == 0 or k % self.p != 0

    def fmt(self, c) -> str:
        if self.p == 0:
            return str(c)
        return str(int(c))

    def to_fraction(self, c) -> Fraction:
        if self.p == 0:
            return Fraction(int(c.p), int(c.q))
        return Fraction(int(c))

    def matrix(self, nrows: int, ncols: int, entries: list):
        if self.p == 0:
            return flint.fmpq_mat(nrows, ncols, entries)
        return flint.nmod_mat(nrows, ncols, entries, self.p)

    def random_element(self, rng, bound: int = 5):
        return self(rng.randint(-bound, bound))


QQ = FieldSpec(0)
