"""Coefficient rings: the integers, the rationals, prime fields and Z/m.

A ring also carries the loop parameter ``delta``; every algebra computed over
the ring substitutes it for closed loops.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..errors import UnsupportedRingError

INTEGERS = "Z"
RATIONALS = "Q"
PRIME_FIELD = "Fp"
MODULAR = "Zmod"

_KINDS = (INTEGERS, RATIONALS, PRIME_FIELD, MODULAR)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CoefficientRing:
    kind: str
    modulus: int | None = None
    delta: Any = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedRingError(f"unknown ring kind {self.kind!r}")
        if self.kind == PRIME_FIELD:
            if self.modulus is None or not is_prime(self.modulus):
                raise UnsupportedRingError(f"Fp needs a prime modulus, got {self.modulus}")
        elif self.kind == MODULAR:
            if self.modulus is None or self.modulus < 2:
                raise UnsupportedRingError(f"Zmod needs m >= 2, got {self.modulus}")
        elif self.modulus is not None:
            raise UnsupportedRingError(f"{self.kind} takes no modulus")
        object.__setattr__(self, "delta", self.reduce(self.delta))

    # -- constructors -----------------------------------------------------

    @classmethod
    def integers(cls, delta=0) -> CoefficientRing:
        return cls(INTEGERS, None, delta)

    @classmethod
    def rationals(cls, delta=0) -> CoefficientRing:
        return cls(RATIONALS, None, delta)

    @classmethod
    def prime_field(cls, p: int, delta=0) -> CoefficientRing:
        return cls(PRIME_FIELD, p, delta)

    @classmethod
    def modular(cls, m: int, delta=0) -> CoefficientRing:
        return cls(MODULAR, m, delta)

    @classmethod
    def parse(cls, spec: str, delta=0) -> CoefficientRing:
        """Parse ``Z``, ``Q``, ``Fp:<p>``, ``Zmod:<m>`` (``F<p>`` is accepted too)."""
        s = spec.strip()
        if s in ("Z", "ZZ"):
            return cls.integers(delta)
        if s in ("Q", "QQ"):
            return cls.rationals(delta)
        m = re.fullmatch(r"(?:Fp:|F|GF)(\d+)", s)
        if m:
            return cls.prime_field(int(m.group(1)), delta)
        m = re.fullmatch(r"Zmod:(\d+)", s)
        if m:
            return cls.modular(int(m.group(1)), delta)
        raise UnsupportedRingError(f"cannot parse ring spec {spec!r}")

    def with_delta(self, delta) -> CoefficientRing:
        return CoefficientRing(self.kind, self.modulus, delta)

    @property
    def spec(self) -> str:
        if self.kind in (PRIME_FIELD, MODULAR):
            return f"{self.kind}:{self.modulus}"
        return self.kind

    def __str__(self) -> str:
        return f"{self.spec}[delta={self.delta}]"

    # -- predicates -------------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in (RATIONALS, PRIME_FIELD)

    @property
    def characteristic(self) -> int:
        return self.modulus if self.modulus is not None else 0

    def is_unit(self, x) -> bool:
        x = self.reduce(x)
        if self.kind == INTEGERS:
            return x in (1, -1)
        if self.kind == RATIONALS:
            return x != 0
        from math import gcd

        return x != 0 and gcd(x, self.modulus) == 1

    # -- arithmetic -------------------------------------------------------

    def reduce(self, x):
        if self.kind == INTEGERS:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise UnsupportedRingError(f"{x} is not an integer")
                return int(x.numerator)
            return int(x)
        if self.kind == RATIONALS:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.modulus)) % self.modulus
        return int(x) % self.modulus

    @property
    def zero(self):
        return self.reduce(0)

    @property
    def one(self):
        return self.reduce(1)

    def add(self, a, b):
        if self.modulus is None:
            return a + b
        return (a + b) % self.modulus

    def sub(self, a, b):
        if self.modulus is None:
            return a - b
        return (a - b) % self.modulus

    def mul(self, a, b):
        if self.modulus is None:
            return a * b
        return (a * b) % self.modulus

    def neg(self, a):
        if self.modulus is None:
            return -a
        return (-a) % self.modulus

    def inverse(self, a):
        a = self.reduce(a)
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in {self.spec}")
        if self.kind == INTEGERS:
            return a
        if self.kind == RATIONALS:
            return 1 / a
        return pow(a, -1, self.modulus)

    def delta_power(self, e: int):
        """delta**e with 0**0 == 1; memoized since tables ask repeatedly."""
        try:
            return self._cache[e]
        except KeyError:
            if e == 0:
                v = self.one
            elif self.modulus is None:
                v = self.delta**e
            else:
                v = pow(self.delta, e, self.modulus)
            self._cache[e] = v
            return v

    def to_str(self, x) -> str:
        return str(x)
