"""Exact coefficient fields: the rationals and prime fields F_p.

Every computation in this package is exact; a Field object bundles the
coefficient representation (fractions.Fraction for Q, ints in [0, p) for
F_p) with the arithmetic on it.  Field objects are immutable and hashable,
so polynomials can share them freely across threads.
"""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2's mpq is a drop-in exact rational, much faster than Fraction
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover
    _RAT = Fraction


class FieldError(ValueError):
    pass


_PRIME_LIMIT = 1 << 61


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin, valid far beyond 2^61 with this base set
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """The rationals (p is None) or F_p for a prime p < 2^61."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not (2 <= p < _PRIME_LIMIT):
                raise FieldError(f"prime out of range: {p}")
            if not _is_prime(p):
                raise FieldError(f"not a prime: {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, *a):
        raise AttributeError("Field is immutable")

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    @property
    def char(self) -> int:
        return 0 if self.p is None else self.p

    # -- element constructors ------------------------------------------

    @property
    def zero(self):
        return _RAT(0) if self.p is None else 0

    @property
    def one(self):
        return _RAT(1) if self.p is None else 1

    def of_int(self, n: int):
        return _RAT(n) if self.p is None else n % self.p

    def of_fraction(self, num: int, den: int):
        if self.p is None:
            return _RAT(num, den)
        d = den % self.p
        if d == 0:
            raise FieldError(f"denominator {den} is not invertible in F_{self.p}")
        return num * pow(d, -1, self.p) % self.p

    # -- arithmetic ----------------------------------------------------

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        return a**n if self.p is None else pow(a, n, self.p)

    # -- presentation --------------------------------------------------

    def coeff_str(self, a) -> str:
        return str(a)

    def spec(self) -> str:
        """The field's textual name: "Q" or "F<p>"."""
        return "Q" if self.p is None else f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return self.spec()


QQ = Field()


def parse_field(spec: str) -> Field:
    """Parse a field spec string: "Q", or "F<p>" such as "F2", "F5"."""
    s = spec.strip()
    if s == "Q":
        return QQ
    if s.startswith("F") and s[1:].isdigit():
        return Field(int(s[1:]))
    raise FieldError(f"bad field spec {spec!r} (expected \"Q\" or \"F<p>\")")


def GF(p: int) -> Field:
    return Field(p)
