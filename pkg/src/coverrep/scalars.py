"""Exact scalar towers: the rationals and cyclotomic fields Q(zeta_k).

A cyclotomic number is a polynomial in zeta_k with rational coefficients,
reduced modulo the k-th cyclotomic polynomial.  Elements carry their field,
support the usual operators, and are hashable, so they can serve as matrix
entries and dictionary keys.  ``RationalField`` wraps plain ``Fraction``
values behind the same field interface so matrix code is generic in K.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def euler_phi(k: int) -> int:
    n, result, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, low degree first.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        coeff = num[shift + len(den) - 1]
        if coeff % den[-1] != 0:
            raise ArithmeticError("inexact polynomial division")
        q = coeff // den[-1]
        out[shift] = q
        for i, d in enumerate(den):
            num[shift + i] -= q * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(k: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_k, low degree first.

    Phi_k = (x^k - 1) / prod of Phi_d over proper divisors d of k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    num = [0] * (k + 1)
    num[0], num[k] = -1, 1
    for d in range(1, k):
        if k % d == 0:
            num = _poly_div_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


class Cyclo:
    """An element of Q(zeta_k): coefficient vector of length phi(k)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycloField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other):
        other = self.field.coerce(other)
        return Cyclo(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.coerce(other)
        return Cyclo(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __neg__(self):
        return Cyclo(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self.field.coerce(other)
        return Cyclo(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inv(self) -> Cyclo:
        return self.field.inv(self)

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.field.k == other.field.k and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.k, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*z" if abs(c) != 1 else ("z" if c > 0 else "-z"))
            else:
                terms.append(f"{c}*z^{i}" if abs(c) != 1 else (f"z^{i}" if c > 0 else f"-z^{i}"))
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"Cyclo({self.field.k}: {body})"


def _frac_to_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RationalField:
    """K = Q.  Elements are plain ``Fraction`` values."""

    k = 0
    qdim = 1

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def to_qvec(self, a) -> tuple[Fraction, ...]:
        return (a,)

    def from_qvec(self, vec):
        return vec[0]

    def to_json(self, a):
        return _frac_to_str(a)

    def from_json(self, s):
        return Fraction(s)

    def describe(self):
        return {"kind": "Q"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class CycloField:
    """K = Q(zeta_k) as the quotient Q[x] / Phi_k(x)."""

    _cache: dict[int, "CycloField"] = {}

    def __new__(cls, k: int):
        if k in cls._cache:
            return cls._cache[k]
        self = super().__new__(cls)
        cls._cache[k] = self
        return self

    def __init__(self, k: int):
        if getattr(self, "k", None) == k:
            return
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.modulus = cyclotomic_polynomial(k)
        self.qdim = len(self.modulus) - 1  # phi(k)
        # zeta^j reduced mod Phi_k for j up to 2*phi-2, so products fold fast
        self._power_rows: list[tuple[Fraction, ...]] = []
        for j in range(2 * self.qdim - 1):
            self._power_rows.append(self._reduce_monomial(j))

    def _reduce_monomial(self, j: int) -> tuple[Fraction, ...]:
        phi = self.qdim
        if j < phi:
            return tuple(Fraction(1) if i == j else Fraction(0) for i in range(phi))
        prev = self._power_rows[j - 1]
        # multiply by x and reduce the overflow term via Phi_k
        shifted = [Fraction(0)] + list(prev[:-1])
        top = prev[-1]
        if top:
            for i in range(phi):
                shifted[i] -= top * self.modulus[i]
        return tuple(shifted)

    @property
    def zero(self) -> Cyclo:
        return Cyclo(self, tuple(Fraction(0) for _ in range(self.qdim)))

    @property
    def one(self) -> Cyclo:
        return self.coerce(1)

    @property
    def zeta(self) -> Cyclo:
        if self.qdim == 1:
            # Phi_1 = x - 1 or Phi_2 = x + 1: zeta is rational
            root = Fraction(-self.modulus[0], self.modulus[1])
            return Cyclo(self, (root,))
        return Cyclo(self, tuple(Fraction(1) if i == 1 else Fraction(0) for i in range(self.qdim)))

    def zeta_power(self, j: int) -> Cyclo:
        return self.zeta ** (j % self.k)

    def coerce(self, x) -> Cyclo:
        if isinstance(x, Cyclo):
            if x.field.k != self.k:
                raise TypeError(f"cyclotomic field mismatch: k={x.field.k} vs k={self.k}")
            return x
        if isinstance(x, (int, Fraction)):
            coeffs = [Fraction(0)] * self.qdim
            coeffs[0] = Fraction(x)
            return Cyclo(self, tuple(coeffs))
        raise TypeError(f"cannot coerce {x!r} into Q(zeta_{self.k})")

    def element(self, coeffs) -> Cyclo:
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.qdim:
            raise ValueError(f"expected {self.qdim} coefficients, got {len(coeffs)}")
        return Cyclo(self, coeffs)

    def _mul(self, a: tuple, b: tuple) -> tuple:
        phi = self.qdim
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    conv[i + j] += ai * bj
        out = [Fraction(0)] * phi
        for j, c in enumerate(conv):
            if c != 0:
                row = self._power_rows[j]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a: Cyclo) -> Cyclo:
        """Inverse via the extended Euclidean algorithm modulo Phi_k."""
        if a.is_zero():
            raise ZeroDivisionError(f"division by zero in Q(zeta_{self.k})")
        # work with rational-coefficient polynomials, low degree first
        r0 = [Fraction(c) for c in self.modulus]
        r1 = list(a.coeffs)
        t0 = [Fraction(0)]
        t1 = [Fraction(1)]

        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        r0, r1 = trim(r0), trim(r1)
        while True:
            if not r1:
                raise ZeroDivisionError("element not invertible (Phi_k not squarefree?)")
            if len(r1) == 1:
                scale = 1 / r1[0]
                coeffs = [c * scale for c in t1] + [Fraction(0)] * self.qdim
                return Cyclo(self, tuple(coeffs[: self.qdim]))
            q = [Fraction(0)] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for shift in range(len(r0) - len(r1), -1, -1):
                factor = rem[shift + len(r1) - 1] / r1[-1]
                q[shift] = factor
                if factor:
                    for i, d in enumerate(r1):
                        rem[shift + i] -= factor * d
            rem = trim(rem)
            # t_next = t0 - q * t1
            prod = [Fraction(0)] * (len(q) + len(t1) - 1)
            for i, qi in enumerate(q):
                if qi:
                    for j, tj in enumerate(t1):
                        prod[i + j] += qi * tj
            t_next = [Fraction(0)] * max(len(t0), len(prod))
            for i, c in enumerate(t0):
                t_next[i] += c
            for i, c in enumerate(prod):
                t_next[i] -= c
            r0, r1 = r1, rem
            t0, t1 = t1, trim(t_next)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def to_qvec(self, a) -> tuple[Fraction, ...]:
        return a.coeffs

    def from_qvec(self, vec) -> Cyclo:
        return self.element(vec)

    def to_json(self, a):
        return [_frac_to_str(c) for c in a.coeffs]

    def from_json(self, data) -> Cyclo:
        return self.element([Fraction(c) for c in data])

    def describe(self):
        return {"kind": "cyclotomic", "k": self.k}

    def __repr__(self):
        return f"Q(zeta_{self.k})"


QQ = RationalField()


def field_from_json(data) -> RationalField | CycloField:
    if data["kind"] == "Q":
        return QQ
    if data["kind"] == "cyclotomic":
        return CycloField(int(data["k"]))
    raise ValueError(f"unknown field kind {data['kind']!r}")
