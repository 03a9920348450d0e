"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A value is a length-n rational vector over zeta_n^0 .. zeta_n^(n-1), reduced
modulo the n-th cyclotomic polynomial, so only the first phi(n) entries can be
nonzero and equality is plain vector equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable


class ConductorMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]  # den is monic
        if c:
            out[k - dd] = c
            for j, dj in enumerate(den):
                num[k - dd + j] -= c * dj
    assert not any(num[:dd]), "non-exact cyclotomic division"
    return out


def _reduce(vec: list, n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    vec = list(vec)
    for k in range(n - 1, deg - 1, -1):
        c = vec[k]
        if c:
            base = k - deg
            for j, pj in enumerate(phi):
                if pj:
                    vec[base + j] -= c * pj
    return tuple(Fraction(c) for c in vec)


class Cyclotomic:
    """Element of Q(zeta_n) in canonical reduced form."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable = (), *, reduced: bool = False):
        coeffs = list(coeffs)
        if len(coeffs) > n:
            # fold exponents modulo n
            folded = [0] * n
            for k, c in enumerate(coeffs):
                folded[k % n] += c
            coeffs = folded
        coeffs = coeffs + [0] * (n - len(coeffs))
        self.n = n
        self.coeffs = tuple(Fraction(c) for c in coeffs) if reduced else _reduce(coeffs, n)

    @classmethod
    def rational(cls, value, n: int = 1) -> Cyclotomic:
        return cls(n, [Fraction(value)], reduced=True) if n == 1 else cls(n, [value])

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> Cyclotomic:
        vec = [0] * n
        vec[k % n] = 1
        return cls(n, vec)

    @classmethod
    def from_exponent_counts(cls, n: int, counts: dict[int, int]) -> Cyclotomic:
        """Sum of ``counts[k]`` copies of zeta_n^k."""
        vec = [0] * n
        for k, c in counts.items():
            vec[k % n] += c
        return cls(n, vec)

    def embed(self, m: int) -> Cyclotomic:
        """The same value viewed in Q(zeta_m); requires n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise ConductorMismatch(f"cannot embed conductor {self.n} into {m}")
        step = m // self.n
        vec = [0] * m
        for k, c in enumerate(self.coeffs):
            if c:
                vec[k * step] = c
        return Cyclotomic(m, vec)

    def _coerce(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if isinstance(other, Cyclotomic):
            if other.n == self.n:
                return self, other
            m = math.lcm(self.n, other.n)
            return self.embed(m), other.embed(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.n)
        return NotImplemented

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)], reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.coeffs], reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [x * other for x in self.coeffs], reduced=True)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        n = a.n
        vec = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        vec[(i + j) % n] += x * y
        return Cyclotomic(n, vec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def conj(self) -> Cyclotomic:
        """Complex conjugate: zeta^k -> zeta^(n-k)."""
        n = self.n
        vec = [0] * n
        for k, c in enumerate(self.coeffs):
            if c:
                vec[(-k) % n] = c
        return Cyclotomic(n, vec)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_integer(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    def key(self) -> tuple[Fraction, ...]:
        return self.coeffs

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, Cyclotomic):
            if other.n == self.n:
                return self.coeffs == other.coeffs
            a, b = self._coerce(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.n, self.coeffs))

    def __repr__(self):
        return f"Cyclotomic({self.n}, {self})"

    def __str__(self):
        return render(self)


def cyclo_add(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    _same_conductor(x, y)
    return x + y


def cyclo_mul(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    _same_conductor(x, y)
    return x * y


def cyclo_conj(x: Cyclotomic) -> Cyclotomic:
    return x.conj()


def _same_conductor(x, y):
    if x.n != y.n:
        raise ConductorMismatch(f"conductors differ: {x.n} vs {y.n}")


def _sparse_form(value: Cyclotomic) -> list[Fraction]:
    """A length-n representative with small support, for display only.

    Starts from the reduced vector and greedily adds multiples of the
    vanishing sums  sum_j zeta^(a + j*n/p) = 0  (p prime dividing n).
    """
    n = value.n
    vec = list(value.coeffs)
    relations = []
    for p in range(2, n + 1):
        if n % p == 0 and all(p % q for q in range(2, int(p ** 0.5) + 1)):
            step = n // p
            for a in range(step):
                relations.append([a + j * step for j in range(p)])
    improved = True
    while improved:
        improved = False
        for support in relations:
            best, best_size = Fraction(0), sum(1 for c in vec if c)
            for c in {vec[k] for k in support if vec[k]}:
                size = sum(1 for k in range(n) if (vec[k] - c if k in support else vec[k]))
                if size < best_size:
                    best, best_size = c, size
            if best:
                for k in support:
                    vec[k] -= best
                improved = True
    return vec


def render(value: Cyclotomic) -> str:
    """Human-readable form using ``zN^k`` for zeta_N^k."""
    if value.is_rational():
        return str(value.coeffs[0])
    n = value.n
    for k in range(1, n):
        zk = Cyclotomic.zeta(n, k)
        for sign in (1, -1):
            if value == sign * zk:
                g = math.gcd(k, n)
                mono = f"z{n // g}" + (f"^{k // g}" if k // g > 1 else "")
                return mono if sign == 1 else "-" + mono
    terms = []
    for k, c in enumerate(_sparse_form(value)):
        if not c:
            continue
        mono = "" if k == 0 else (f"z{n}" if k == 1 else f"z{n}^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
