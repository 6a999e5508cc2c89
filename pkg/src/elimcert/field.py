"""Exact coefficient fields: the rationals and prime fields GF(p).

Elements are plain Python objects so polynomial kernels can use native
operators: ``gmpy2.mpq`` for the rationals, reduced ``int`` for GF(p).
"""
from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import PreconditionError

#: smallest modulus accepted for prime fields unless overridden
DEFAULT_MIN_MODULUS = 2**16


class CoefficientField:
    """An exact field; either ``QQ`` or ``GF(p)``.

    Instances compare equal by kind and modulus, so they can be used freely
    as dictionary keys and in structural checks.
    """

    __slots__ = ("modulus",)

    def __init__(self, modulus: int | None = None, *, min_modulus: int = DEFAULT_MIN_MODULUS):
        if modulus is not None:
            modulus = int(modulus)
            if not gmpy2.is_prime(modulus):
                raise PreconditionError(f"modulus {modulus} is not prime")
            if modulus < min_modulus:
                raise PreconditionError(
                    f"modulus {modulus} is below the configured floor {min_modulus}")
        self.modulus = modulus

    @property
    def kind(self) -> str:
        return "QQ" if self.modulus is None else "GF"

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("CoefficientField", self.modulus))

    def __repr__(self):
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    # element handling -------------------------------------------------

    def __call__(self, value):
        """Coerce an int, Fraction, mpq or ``"a/b"`` string into the field."""
        p = self.modulus
        if isinstance(value, str):
            num, _, den = value.partition("/")
            value = Fraction(int(num), int(den)) if den else int(num)
        if p is None:
            if isinstance(value, Fraction):
                return mpq(value.numerator, value.denominator)
            return mpq(value)
        if isinstance(value, (Fraction, mpq)):
            num, den = int(value.numerator), int(value.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        return int(value) % p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus is None:
            return 1 / a
        return pow(int(a), -1, self.modulus)

    def neg(self, a):
        return -a if self.modulus is None else (-a) % self.modulus

    def signed(self, a) -> int | Fraction:
        """Representative used for printing: symmetric residue in GF(p)."""
        p = self.modulus
        if p is None:
            return Fraction(int(a.numerator), int(a.denominator))
        a = int(a) % p
        return a - p if a > p // 2 else a

    def to_str(self, a) -> str:
        v = self.signed(a)
        if isinstance(v, Fraction) and v.denominator != 1:
            return f"{v.numerator}/{v.denominator}"
        return str(int(v))


QQ = CoefficientField()


def GF(p: int, *, min_modulus: int = DEFAULT_MIN_MODULUS) -> CoefficientField:
    return CoefficientField(p, min_modulus=min_modulus)
