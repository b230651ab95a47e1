"""Exact integer Laurent polynomials in one variable.

Coefficients are arbitrary-precision integers. Products and exact quotients
go through Kronecker substitution: a polynomial is packed into a single big
integer, the integer operation is carried out by GMP, and the result is
unpacked again. That keeps the determinant eliminations in
:mod:`cvdamp.prover` tractable at matrix sizes ~18 with degrees in the
thousands.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpz


class InexactDivision(ArithmeticError):
    """Raised when a polynomial quotient is requested that does not exist."""


def _strip(coeffs: list) -> tuple[int, list]:
    """Drop leading/trailing zeros; return (number of low zeros removed, rest)."""
    lo = 0
    n = len(coeffs)
    while lo < n and coeffs[lo] == 0:
        lo += 1
    hi = n
    while hi > lo and coeffs[hi - 1] == 0:
        hi -= 1
    return lo, coeffs[lo:hi]


def _pack(coeffs: Sequence, bits: int) -> mpz:
    # Horner from the top keeps everything in GMP.
    acc = mpz(0)
    for c in reversed(coeffs):
        acc = (acc << bits) + c
    return acc


def _unpack(value: mpz, bits: int, length: int) -> list:
    """Inverse of :func:`_pack` for balanced digits |c| < 2**(bits-1)."""
    out = []
    mask = (mpz(1) << bits) - 1
    half = mpz(1) << (bits - 1)
    full = mpz(1) << bits
    v = mpz(value)
    for _ in range(length):
        c = v & mask
        if c >= half:
            c -= full
        out.append(c)
        v = (v - c) >> bits
    if v != 0:
        raise OverflowError("packed value does not fit the requested length")
    return out


def _maxbits(coeffs: Iterable) -> int:
    return max((gmpy2.bit_length(mpz(c)) for c in coeffs), default=0)


class LaurentPoly:
    """sum_i coeffs[i] * d**(min_exp + i), kept in canonical form.

    Canonical form means the lowest and highest stored coefficients are
    nonzero; the zero polynomial has ``coeffs == ()`` and ``min_exp == 0``.
    Instances are immutable and hashable.
    """

    __slots__ = ("min_exp", "coeffs")

    def __init__(self, coeffs: Iterable = (), min_exp: int = 0):
        lo, rest = _strip([mpz(c) for c in coeffs])
        if rest:
            self.min_exp = int(min_exp) + lo
            self.coeffs = tuple(rest)
        else:
            self.min_exp = 0
            self.coeffs = ()

    # construction helpers -------------------------------------------------

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls((coeff,), exp)

    @classmethod
    def from_terms(cls, terms: dict[int, int]) -> "LaurentPoly":
        """Build from an {exponent: coefficient} mapping."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] += c
        return cls(coeffs, lo)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls((1,), 0)

    # basic properties -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_exp(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return self.min_exp + len(self.coeffs) - 1

    def terms(self) -> dict[int, int]:
        return {self.min_exp + i: int(c) for i, c in enumerate(self.coeffs) if c}

    def max_coeff_bits(self) -> int:
        return _maxbits(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly((other,))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.min_exp == other.min_exp and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.min_exp, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "LaurentPoly(0)"
        parts = []
        for e, c in sorted(self.terms().items(), reverse=True):
            parts.append(f"{c}*d^{e}" if e else f"{c}")
        return "LaurentPoly(" + " + ".join(parts) + ")"

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly([-c for c in self.coeffs], self.min_exp)

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly((other,))
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [mpz(0)] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.min_exp - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.min_exp - lo + i] += c
        return LaurentPoly(out, lo)

    __radd__ = __add__

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly((other,))
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPoly":
        return LaurentPoly((other,)) - self

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly([c * other for c in self.coeffs], self.min_exp)
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        a, b = self.coeffs, other.coeffs
        if len(a) == 1 or len(b) == 1:
            # cheap scalar-monomial path
            if len(a) == 1:
                a, b = b, a
            s = b[0]
            return LaurentPoly([c * s for c in a], self.min_exp + other.min_exp)
        bits = _maxbits(a) + _maxbits(b) + gmpy2.bit_length(mpz(min(len(a), len(b)))) + 2
        prod = _pack(a, bits) * _pack(b, bits)
        coeffs = _unpack(prod, bits, len(a) + len(b) - 1)
        return LaurentPoly(coeffs, self.min_exp + other.min_exp)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient q with q * other == self; raise InexactDivision otherwise."""
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.coeffs:
            return LaurentPoly()
        a, b = self.coeffs, other.coeffs
        qlen = len(a) - len(b) + 1
        if qlen <= 0:
            raise InexactDivision("divisor has larger span than dividend")
        if len(b) == 1:
            q = []
            for c in a:
                qq, rr = gmpy2.f_divmod(c, b[0])
                if rr:
                    raise InexactDivision("non-integral quotient coefficient")
                q.append(qq)
            return LaurentPoly(q, self.min_exp - other.min_exp)
        # Packed integers satisfy pack(a) == pack(q) * pack(b) exactly, so the
        # quotient is an exact integer division. The digit width has to cover
        # the (unknown) quotient coefficients; grow it until the product checks.
        bits = _maxbits(a) + 2 * gmpy2.bit_length(mpz(qlen)) + 4
        while True:
            pa, pb = _pack(a, bits), _pack(b, bits)
            pq, rem = gmpy2.f_divmod(pa, pb)
            quotient = None
            if rem == 0:
                try:
                    qc = _unpack(pq, bits, qlen)
                except OverflowError:
                    qc = None
                if qc is not None:
                    cand = LaurentPoly(qc, self.min_exp - other.min_exp)
                    if cand * other == self:
                        quotient = cand
            if quotient is not None:
                return quotient
            if bits > 64 * (_maxbits(a) + 64) + 4096:
                # Far past any true quotient's size: the division is not exact.
                raise InexactDivision("polynomial division leaves a remainder")
            bits *= 2

    def div_linear(self, root: int = 1) -> tuple["LaurentPoly", int]:
        """Synthetic division by (d - root) on the polynomial part.

        Returns (quotient, remainder) where remainder is an integer and
        ``self == quotient * (d - root) + remainder * d**min_exp``.
        """
        if not self.coeffs:
            return LaurentPoly(), 0
        top = list(reversed(self.coeffs))  # highest power first
        q = []
        acc = mpz(0)
        for c in top[:-1]:
            acc = acc * root + c
            q.append(acc)
        rem = acc * root + top[-1]
        return LaurentPoly(list(reversed(q)), self.min_exp), int(rem)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by d**k."""
        if not self.coeffs:
            return self
        return LaurentPoly(self.coeffs, self.min_exp + k)

    # evaluation -----------------------------------------------------------

    def __call__(self, x):
        """Evaluate at ``x``: int or Fraction gives an exact result, float a float."""
        if not self.coeffs:
            return 0 * x
        if isinstance(x, int):
            x = Fraction(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + int(c)
        if isinstance(x, float):
            return acc * x ** self.min_exp
        return acc * Fraction(x) ** self.min_exp

    def evalf(self, x: float) -> float:
        """Floating evaluation via exact rational arithmetic, rounded once."""
        return float(self(Fraction(x)))
