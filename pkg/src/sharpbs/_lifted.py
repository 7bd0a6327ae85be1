"""Lazy sums of products of cyclotomics over a common conductor.

Canonicalizing after every operation is the expensive part of cyclotomic
arithmetic.  For long sums (orthogonality relations, the class-multiplication
formula) we lift the values involved into Z[x]/(x^N - 1) for a shared N,
multiply there by adding exponents, and canonicalize once at the end.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .cyclo import Cyclotomic, canonicalize, _check_conductor

Scalar = Union[int, Fraction]
# a lifted value is either a rational scalar or a sparse {exponent mod N: coeff}
Lifted = Union[Scalar, dict]


def lift(value: Cyclotomic, big: int) -> Lifted:
    q = value.as_rational()
    if q is not None:
        return int(q) if q.denominator == 1 else q
    step = big // value.conductor
    return {k * step: c for k, c in value.terms.items()}


def lift_conj(value: Cyclotomic, big: int) -> Lifted:
    q = value.as_rational()
    if q is not None:
        return int(q) if q.denominator == 1 else q
    step = big // value.conductor
    return {(-k * step) % big: c for k, c in value.terms.items()}


class Accumulator:
    """Running sum of products of lifted values."""

    __slots__ = ("big", "scalar", "poly")

    def __init__(self, big: int):
        self.big = big
        self.scalar: Scalar = 0
        self.poly: dict[int, Scalar] = {}

    def add(self, scale: Scalar, *factors: Lifted) -> None:
        coeff = scale
        polys = []
        for f in factors:
            if isinstance(f, dict):
                polys.append(f)
            else:
                if not f:
                    return
                coeff = coeff * f
        if not coeff:
            return
        if not polys:
            self.scalar += coeff
            return
        big = self.big
        cur = polys[0]
        for other in polys[1:]:
            nxt: dict[int, Scalar] = {}
            for ka, ca in cur.items():
                for kb, cb in other.items():
                    k = (ka + kb) % big
                    nxt[k] = nxt.get(k, 0) + ca * cb
            cur = nxt
        poly = self.poly
        for k, c in cur.items():
            poly[k] = poly.get(k, 0) + coeff * c

    def value(self) -> Cyclotomic:
        if not any(self.poly.values()):
            return Cyclotomic(self.scalar)
        terms = dict(self.poly)
        terms[0] = terms.get(0, 0) + self.scalar
        return canonicalize(self.big, terms)


class LiftedMatrix:
    """A rectangular array of cyclotomics, lifted on demand.

    Rows and columns are lifted to whatever common conductor a computation
    needs (typically the lcm of two rows or a few columns), never to the lcm
    of the whole array, which can be astronomically large.
    """

    def __init__(self, rows: Sequence[Sequence[Cyclotomic]]):
        self.values = [list(row) for row in rows]
        n_cols = len(self.values[0]) if self.values else 0
        self.row_conductor = [functools.reduce(math.lcm, (v.conductor for v in row), 1) for row in self.values]
        self.col_conductor = [functools.reduce(math.lcm, (row[c].conductor for row in self.values), 1)
                              for c in range(n_cols)]
        self._cache: dict = {}

    def _get(self, key, build):
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = build()
        return hit

    def row(self, i: int, big: int, conj: bool = False) -> list[Lifted]:
        f = lift_conj if conj else lift
        return self._get(("r", i, big, conj), lambda: [f(v, big) for v in self.values[i]])

    def col(self, c: int, big: int, conj: bool = False) -> list[Lifted]:
        f = lift_conj if conj else lift
        return self._get(("c", c, big, conj), lambda: [f(row[c], big) for row in self.values])

    def conductor_for(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> int:
        n = 1
        for i in rows:
            n = math.lcm(n, self.row_conductor[i])
        for c in cols:
            n = math.lcm(n, self.col_conductor[c])
        _check_conductor(n)
        return n
