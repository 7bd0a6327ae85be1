"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A :class:`Cyclotomic` is stored as a polynomial in ``zeta_n`` with rational
coefficients, reduced modulo the n-th cyclotomic polynomial and rewritten
over the smallest subfield Q(zeta_d) that contains it.  Two values are equal
exactly when their canonical forms coincide, so ``==`` and ``hash`` are
structural.

The serialized form used in table files is one of

* an integer literal (``3``),
* a rational literal string (``"3/2"``),
* an object ``{"n": conductor, "terms": [[exponent, num, den], ...]}``.
"""

from __future__ import annotations

import cmath
import functools
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Optional, Union

from sympy import divisors, primefactors

__all__ = [
    "Cyclotomic",
    "CyclotomicError",
    "ConductorLimitError",
    "MAX_CONDUCTOR",
    "E",
    "canonicalize",
    "cyclotomic_poly",
    "cyc_sum",
]

MAX_CONDUCTOR = 10**6

RationalLike = Union[int, Fraction]


class CyclotomicError(ValueError):
    """Malformed cyclotomic input (bad serialization, bad conductor)."""


class ConductorLimitError(CyclotomicError):
    """The conductor of an intermediate result exceeds :data:`MAX_CONDUCTOR`."""


def _check_conductor(n: int) -> None:
    if n < 1:
        raise CyclotomicError(f"conductor must be positive, got {n}")
    if n > MAX_CONDUCTOR:
        raise ConductorLimitError(f"conductor {n} exceeds limit {MAX_CONDUCTOR}")


# ---------------------------------------------------------------------------
# polynomial machinery (coefficient lists, lowest degree first)


def _poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            out[i - dn] = c
            for j, p in enumerate(den):
                num[i - dn + j] -= c * p
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    _check_conductor(n)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


@functools.lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Reduced form of x^k modulo Phi_n for k = 0 .. n-1, as sparse tuples."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    if deg:
        cur[0] = 1
    for k in range(n):
        rows.append(tuple((j, c) for j, c in enumerate(cur) if c))
        # multiply by x and fold the overflow back with x^deg = -sum(phi[:deg])
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(n: int, terms: Mapping[int, RationalLike]) -> dict[int, RationalLike]:
    """Reduce sum(c * x^k) modulo x^n - 1 and Phi_n; drop zero terms."""
    table = _power_table(n)
    out: dict[int, RationalLike] = {}
    for k, c in terms.items():
        if not c:
            continue
        for j, p in table[k % n]:
            out[j] = out.get(j, 0) + c * p
    return {j: c for j, c in out.items() if c}


def _lift(n: int, terms: Mapping[int, RationalLike], big: int) -> dict[int, RationalLike]:
    step = big // n
    return {k * step: c for k, c in terms.items()}


def _split_off_prime(n: int, p: int, reduced: Mapping[int, RationalLike]) -> Optional[dict[int, RationalLike]]:
    """Rewrite x in Q(zeta_n) over Q(zeta_m), m = n/p coprime to p, if possible.

    With a*p + b*m = 1 we have zeta_n = zeta_m^a * zeta_p^b, so
    x = sum_t A_t zeta_p^t with A_t in Q(zeta_m).  Since
    1, zeta_p, ..., zeta_p^(p-2) is a basis over Q(zeta_m), x lies in the
    subfield iff A_t = A_(p-1) for t = 1 .. p-2, and then x = A_0 - A_(p-1).
    """
    m = n // p
    _, a, b = _xgcd(p, m)
    parts: list[dict[int, RationalLike]] = [{} for _ in range(p)]
    for e, c in reduced.items():
        part = parts[(b * e) % p]
        k = (a * e) % m
        part[k] = part.get(k, 0) + c
    last = _reduce(m, parts[p - 1])
    for t in range(1, p - 1):
        if _reduce(m, parts[t]) != last:
            return None
    head = dict(parts[0])
    for k, c in parts[p - 1].items():
        head[k] = head.get(k, 0) - c
    return _reduce(m, head)


def _xgcd(x: int, y: int) -> tuple[int, int, int]:
    a0, a1, b0, b1 = 1, 0, 0, 1
    while y:
        q, x, y = x // y, y, x % y
        a0, a1 = a1, a0 - q * a1
        b0, b1 = b1, b0 - q * b1
    return x, a0, b0


def _descend(n: int, reduced: dict[int, RationalLike]) -> tuple[int, dict[int, RationalLike]]:
    """Find the minimal conductor for a reduced element of Q(zeta_n).

    Removes one prime factor at a time; the subfield lattice of Q(zeta_n)
    makes the greedy descent reach the minimal conductor.
    """
    while n > 1:
        if not reduced or set(reduced) == {0}:
            return 1, reduced
        for p in primefactors(n):
            if (n // p) % p == 0:
                if all(e % p == 0 for e in reduced):
                    reduced = {e // p: c for e, c in reduced.items()}
                    n //= p
                    break
            else:
                sub = _split_off_prime(n, p, reduced)
                if sub is not None:
                    reduced = sub
                    n //= p
                    break
        else:
            return n, reduced
    return n, reduced


def _normalize_coeff(c: RationalLike) -> RationalLike:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def canonicalize(n: int, terms: Mapping[int, RationalLike]) -> "Cyclotomic":
    """Build the canonical :class:`Cyclotomic` for ``sum(c * zeta_n**k)``.

    Exponents may be any integers (they are taken modulo n); coefficients are
    ints or Fractions.
    """
    _check_conductor(n)
    reduced = _reduce(n, {k % n: Fraction(c) if not isinstance(c, int) else c for k, c in terms.items()})
    d, coords = _descend(n, reduced)
    return Cyclotomic._raw(d, {k: _normalize_coeff(c) for k, c in coords.items()})


def cyc_sum(values: Iterable["Cyclotomic"]) -> "Cyclotomic":
    """Sum many cyclotomics with a single canonicalization at the end."""
    values = [Cyclotomic.coerce(v) for v in values]
    if not values:
        return Cyclotomic(0)
    big = functools.reduce(math.lcm, (v.conductor for v in values), 1)
    _check_conductor(big)
    acc: dict[int, RationalLike] = {}
    for v in values:
        step = big // v.conductor
        for k, c in v._terms:
            acc[k * step] = acc.get(k * step, 0) + c
    return canonicalize(big, acc)


class Cyclotomic:
    """An element of Q(zeta_n) in canonical form.

    ``Cyclotomic(q)`` builds the rational ``q``; :func:`E` and
    :meth:`root` build roots of unity.  Instances are immutable.
    """

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, value: RationalLike = 0):
        q = Fraction(value)
        self._n = 1
        self._terms = ((0, _normalize_coeff(q)),) if q else ()
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: Mapping[int, RationalLike]) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj._n = n
        obj._terms = tuple(sorted((k, c) for k, c in terms.items() if c))
        obj._hash = None
        return obj

    @classmethod
    def root(cls, n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n ** k"""
        return canonicalize(n, {k % n: 1})

    @classmethod
    def coerce(cls, value) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, Fraction, Rational)):
            return cls(value)
        raise TypeError(f"cannot interpret {value!r} as a cyclotomic number")

    # -- accessors -------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def terms(self) -> dict[int, RationalLike]:
        """Canonical exponent -> coefficient mapping (a fresh dict)."""
        return dict(self._terms)

    def is_rational(self) -> bool:
        return self._n == 1

    def as_rational(self) -> Optional[Fraction]:
        if self._n != 1:
            return None
        return Fraction(self._terms[0][1]) if self._terms else Fraction(0)

    def as_integer(self) -> Optional[int]:
        """The value as a Python int, or None if it is not a rational integer."""
        q = self.as_rational()
        if q is None or q.denominator != 1:
            return None
        return int(q.numerator)

    def __complex__(self) -> complex:
        n = self._n
        return sum((float(c) * cmath.exp(2j * math.pi * k / n) for k, c in self._terms), 0j)

    def to_complex(self) -> complex:
        return complex(self)

    # -- arithmetic ------------------------------------------------------

    def _binary(self, other, mul: bool) -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            try:
                other = Cyclotomic.coerce(other)
            except TypeError:
                return NotImplemented
        a, b = self, other
        if a._n == 1 and b._n == 1:
            qa, qb = a.as_rational(), b.as_rational()
            return Cyclotomic(qa * qb if mul else qa + qb)
        if mul and (a._n == 1 or b._n == 1):
            # scaling preserves the canonical form
            q, x = (a.as_rational(), b) if a._n == 1 else (b.as_rational(), a)
            if not q:
                return Cyclotomic(0)
            return Cyclotomic._raw(x._n, {k: _normalize_coeff(c * q) for k, c in x._terms})
        big = math.lcm(a._n, b._n)
        _check_conductor(big)
        ta = _lift(a._n, dict(a._terms), big)
        tb = _lift(b._n, dict(b._terms), big)
        if mul:
            acc: dict[int, RationalLike] = {}
            for ka, ca in ta.items():
                for kb, cb in tb.items():
                    k = (ka + kb) % big
                    acc[k] = acc.get(k, 0) + ca * cb
        else:
            acc = dict(ta)
            for k, c in tb.items():
                acc[k] = acc.get(k, 0) + c
        return canonicalize(big, acc)

    def __add__(self, other):
        return self._binary(other, mul=False)

    __radd__ = __add__

    def __mul__(self, other):
        return self._binary(other, mul=True)

    __rmul__ = __mul__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic._raw(self._n, {k: -c for k, c in self._terms})

    def __pos__(self) -> "Cyclotomic":
        return self

    def __sub__(self, other):
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        return self + (-Cyclotomic.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            q = other.as_rational()
            if q is None:
                raise NotImplementedError("division by an irrational cyclotomic is not supported")
            other = q
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("cyclotomic division by zero")
        return self * (Fraction(1) / Fraction(other))

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return Cyclotomic(other) / self

    def __pow__(self, e: int) -> "Cyclotomic":
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = Cyclotomic(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugate, i.e. the image under zeta_n -> zeta_n^(n-1)."""
        if self._n == 1:
            return self
        return canonicalize(self._n, {(-k) % self._n: c for k, c in self._terms})

    def galois(self, k: int) -> "Cyclotomic":
        """Image under zeta_n -> zeta_n^k, for k coprime to the conductor."""
        if math.gcd(k, self._n) != 1:
            raise CyclotomicError(f"{k} is not coprime to conductor {self._n}")
        if self._n == 1:
            return self
        return canonicalize(self._n, {(k * e) % self._n: c for e, c in self._terms})

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            if self._n == 1:
                self._hash = hash(self.as_rational())
            else:
                self._hash = hash((self._n, self._terms))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if self._n == 1:
            return f"Cyclotomic({self.as_rational()})"
        return f"Cyclotomic<{self}>"

    def __str__(self) -> str:
        if self._n == 1:
            return str(self.as_rational())
        parts = []
        for k, c in self._terms:
            mono = "1" if k == 0 else (f"E({self._n})" if k == 1 else f"E({self._n})^{k}")
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts).replace("+-", "-")

    # -- serialization -------------------------------------------------------

    def to_json(self):
        q = self.as_rational()
        if q is not None:
            return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return {
            "n": self._n,
            "terms": [[k, Fraction(c).numerator, Fraction(c).denominator] for k, c in self._terms],
        }

    @classmethod
    def from_json(cls, obj) -> "Cyclotomic":
        if isinstance(obj, bool):
            raise CyclotomicError(f"not a cyclotomic literal: {obj!r}")
        if isinstance(obj, int):
            return cls(obj)
        if isinstance(obj, str):
            try:
                return cls(Fraction(obj.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise CyclotomicError(f"bad rational literal {obj!r}") from exc
        if isinstance(obj, dict):
            try:
                n = obj["n"]
                raw = obj["terms"]
            except KeyError as exc:
                raise CyclotomicError(f"cyclotomic object missing field {exc}") from exc
            if not isinstance(n, int) or isinstance(n, bool):
                raise CyclotomicError(f"conductor must be an integer, got {n!r}")
            _check_conductor(n)
            if not isinstance(raw, list) or not raw:
                raise CyclotomicError("terms must be a nonempty list")
            terms: dict[int, RationalLike] = {}
            last = -1
            for item in raw:
                if (not isinstance(item, list) or len(item) != 3
                        or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)):
                    raise CyclotomicError(f"bad term {item!r}")
                k, num, den = item
                if not 0 <= k < n:
                    raise CyclotomicError(f"exponent {k} out of range for conductor {n}")
                if k <= last:
                    raise CyclotomicError("exponents must be strictly ascending")
                if den == 0:
                    raise CyclotomicError("zero denominator")
                last = k
                terms[k] = _normalize_coeff(Fraction(num, den))
            return canonicalize(n, terms)
        raise CyclotomicError(f"not a cyclotomic literal: {obj!r}")


def E(n: int) -> Cyclotomic:
    """The primitive root of unity exp(2*pi*i/n)."""
    return Cyclotomic.root(n, 1)

