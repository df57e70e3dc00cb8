"""Arithmetic in Z/pZ: quadratic characters and dense polynomials over F_p.

Polynomials are stored lowest degree first with trailing zeros trimmed, so two
polynomials are equal iff their coefficient tuples are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2
import numpy as np

from .errors import InvalidInputError, ResourceLimitError

# Dense character tables are int8, so this caps them at 256 MiB.
TABLE_LIMIT = 1 << 28


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime 3 <= p < 2**62."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise InvalidInputError(f"modulus must be an integer, got {p!r}")
        p = int(p)
        object.__setattr__(self, "p", p)
        if p < 3 or p >= 1 << 62:
            raise InvalidInputError(f"modulus {p} outside [3, 2**62)")
        if p % 2 == 0:
            raise InvalidInputError(f"modulus {p} is even")
        # GMP runs BPSW first, and BPSW has no pseudoprimes below 2**64.
        if not gmpy2.is_prime(p):
            raise InvalidInputError(f"modulus {p} is not prime")

    @property
    def half_exponent(self) -> int:
        return (self.p - 1) // 2

    @property
    def bit_length(self) -> int:
        return self.p.bit_length()

    def __int__(self):
        return self.p


def as_modulus(p) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n by the binary reduction algorithm."""
    if n <= 0 or n % 2 == 0:
        raise InvalidInputError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def legendre_symbol(n: int, p) -> int:
    """Legendre symbol (n/p) in {-1, 0, 1}; n may be negative or >= p."""
    return jacobi_symbol(int(n), as_modulus(p).p)


def legendre_euler(n: int, p) -> int:
    """Slow path via Euler's criterion n^((p-1)/2) mod p."""
    mod = as_modulus(p)
    r = pow(int(n) % mod.p, mod.half_exponent, mod.p)
    return -1 if r == mod.p - 1 else r


def legendre_batch(values, p) -> np.ndarray:
    """Vectorized Jacobi reduction: (v/p) for every entry of ``values``.

    ``p`` may be a scalar or an array broadcastable against ``values`` (odd
    moduli below 2**62). Returns an int8 array of the broadcast shape.
    """
    values = np.asarray(values, dtype=np.int64)
    shape = np.broadcast_shapes(values.shape, np.shape(p))
    a = np.broadcast_to(values, shape).ravel().copy()
    n = np.broadcast_to(np.asarray(p, dtype=np.int64), shape).ravel().copy()
    if np.any(n <= 0) or np.any(n % 2 == 0):
        raise InvalidInputError("legendre_batch needs odd positive moduli")
    a %= n
    t = np.ones(a.shape, dtype=np.int8)
    idx = np.nonzero(a)[0]
    while idx.size:
        aa = a[idx]
        nn = n[idx]
        tt = t[idx]
        # strip powers of two; each halving flips sign when n = 3, 5 mod 8
        twos = np.zeros(aa.shape, dtype=np.int64)
        even = (aa & 1) == 0
        while even.any():
            aa = np.where(even, aa >> 1, aa)
            twos += even
            even = (aa & 1) == 0
        r8 = nn & 7
        tt = np.where((twos & 1).astype(bool) & ((r8 == 3) | (r8 == 5)), -tt, tt)
        tt = np.where(((aa & 3) == 3) & ((nn & 3) == 3), -tt, tt)
        a[idx] = nn % aa
        n[idx] = aa
        t[idx] = tt
        idx = idx[a[idx] != 0]
    return np.where(n == 1, t, 0).astype(np.int8).reshape(shape)


def quadratic_character_table(p) -> np.ndarray:
    """int8 array ``chi`` of length p with chi[x] = (x/p).

    Built by squaring 1..(p-1)/2, so it is independent of the Jacobi path.
    """
    mod = as_modulus(p)
    p = mod.p
    if p > TABLE_LIMIT:
        raise ResourceLimitError(f"character table for p={p} exceeds {TABLE_LIMIT} entries")
    chi = np.full(p, -1, dtype=np.int8)
    chi[0] = 0
    i = np.arange(1, mod.half_exponent + 1, dtype=np.int64)
    chi[(i * i) % p] = 1
    return chi


def _trim(coeffs: Iterable[int], p: int) -> tuple:
    c = [int(x) % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class FpPolynomial:
    """Polynomial over F_p, coefficients lowest degree first."""

    modulus: PrimeModulus
    coefficients: tuple = ()

    def __post_init__(self):
        mod = as_modulus(self.modulus)
        object.__setattr__(self, "modulus", mod)
        c = _trim(self.coefficients, mod.p)
        object.__setattr__(self, "coefficients", c)
        if len(c) - 1 >= mod.p:
            raise InvalidInputError(f"degree {len(c) - 1} must be below p={mod.p}")

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int], p) -> "FpPolynomial":
        return cls(as_modulus(p), tuple(coeffs))

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def _new(self, coeffs) -> "FpPolynomial":
        return FpPolynomial(self.modulus, tuple(coeffs))

    def __call__(self, x: int) -> int:
        return poly_eval(self, x)

    def __add__(self, other: "FpPolynomial") -> "FpPolynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return self._new((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                         for i in range(n))

    def __neg__(self) -> "FpPolynomial":
        return self._new(-c for c in self.coefficients)

    def __sub__(self, other: "FpPolynomial") -> "FpPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "FpPolynomial":
        if isinstance(other, int):
            return self._new(c * other for c in self.coefficients)
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return self._new(())
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FpPolynomial":
        out = self._new((1,))
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "FpPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coefficients)
        db = other.degree
        inv = pow(other.leading, -1, p)
        q = [0] * max(len(r) - db, 0)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] * inv % p
            if c:
                q[i - db] = c
                for j, y in enumerate(other.coefficients):
                    r[i - db + j] = (r[i - db + j] - c * y) % p
        return self._new(q), self._new(r[:db] if db > 0 else ())

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "FpPolynomial":
        if self.is_zero():
            return self
        return self * pow(self.leading, -1, self.p)

    def derivative(self) -> "FpPolynomial":
        return self._new(i * c for i, c in enumerate(self.coefficients) if i)

    def compose_linear(self, a: int, b: int) -> "FpPolynomial":
        """F(aX + b)."""
        lin = self._new((b, a))
        out = self._new(())
        for c in reversed(self.coefficients):
            out = out * lin + self._new((c,))
        return out

    def __repr__(self):
        return f"FpPolynomial(p={self.p}, {list(self.coefficients)})"


def poly_eval(F: FpPolynomial, x: int) -> int:
    """Horner evaluation F(x) mod p."""
    p = F.p
    acc = 0
    for c in reversed(F.coefficients):
        acc = (acc * x + c) % p
    return acc


def poly_eval_batch(F: FpPolynomial, xs) -> np.ndarray:
    """Vectorized Horner over an int64 array; needs p < 2**31 to stay in int64."""
    p = F.p
    if p >= 1 << 31:
        raise ResourceLimitError("batch evaluation needs p < 2**31")
    xs = np.asarray(xs, dtype=np.int64) % p
    acc = np.zeros(xs.shape, dtype=np.int64)
    for c in reversed(F.coefficients):
        acc = (acc * xs + c) % p
    return acc


def poly_gcd(a: FpPolynomial, b: FpPolynomial) -> FpPolynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _require_nonconstant(F: FpPolynomial):
    if F.degree < 1:
        raise InvalidInputError("polynomial must have degree >= 1")


def is_squarefree(F: FpPolynomial) -> bool:
    _require_nonconstant(F)
    return poly_gcd(F, F.derivative()).degree == 0


def squarefree_decomposition(F: FpPolynomial):
    """Yun's algorithm: list of (factor, multiplicity) with monic factors.

    Valid when every multiplicity is below p, which deg F < p guarantees.
    The product of factor**multiplicity equals F.monic().
    """
    if F.is_zero():
        raise InvalidInputError("zero polynomial has no decomposition")
    f = F.monic()
    if f.degree == 0:
        return []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def is_perfect_square(H: FpPolynomial) -> bool:
    """True iff H = c * G(X)**2 with c a nonzero square in F_p."""
    if H.is_zero():
        raise InvalidInputError("zero polynomial")
    if legendre_symbol(H.leading, H.modulus) != 1:
        return False
    return all(mult % 2 == 0 for _, mult in squarefree_decomposition(H))


def shifted_product(F: FpPolynomial, scale: int, shifts: Sequence[int]) -> FpPolynomial:
    """H(X) = prod_j F(scale*X + shift_j)."""
    H = F._new((1,))
    for b in shifts:
        H = H * F.compose_linear(scale, b)
    return H
