"""Class multiplication coefficients from a character table.

For classes a, b, c of G the number of pairs (u, v) in a^G x b^G with
uv = z for a fixed z in c is

    m(a, b, c) = |a^G| |b^G| / |G| * sum_chi chi(a) chi(b) conj(chi(c)) / chi(1).

Since |a^G| |b^G| / |G|^2 = 1 / (|C(a)| |C(b)|) and |G| / chi(1) is an
integer, the sum is accumulated with integer weights |G| / chi(1) and divided
once at the end.  A result that is not a nonnegative rational integer means
the table is corrupt.
"""

from __future__ import annotations

import functools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from ._lifted import Accumulator, lift
from .chartable import CharacterTable, TableError
from .cyclo import Cyclotomic, _check_conductor, cyc_sum

__all__ = [
    "CoefficientQuery",
    "TableCorruptionError",
    "class_mult_coeff",
    "coeff_sweep",
    "coefficient_cube",
    "reference_class_mult_coeff",
]

ClassRef = Union[int, str]


class TableCorruptionError(TableError):
    """A class multiplication coefficient came out non-integral or negative."""


class CoefficientQuery(NamedTuple):
    a: ClassRef
    b: ClassRef
    c: ClassRef

    def resolve(self, table: CharacterTable) -> tuple[int, int, int]:
        return table.class_index(self.a), table.class_index(self.b), table.class_index(self.c)


@dataclass
class _Engine:
    """Per-table precomputation for fast coefficient sweeps.

    Products w * chi(a) * chi(b) with w = |G| / chi(1) are formed once per
    pair (a, b).  Rational contributions are summed as plain integers; the
    rest is accumulated per target column c over the lcm of the conductors
    actually involved.
    """

    table: CharacterTable

    def __post_init__(self) -> None:
        t = self.table
        k = t.n_classes
        order = t.group_order
        weights = []
        for row in t.irreducibles:
            deg = row[t.identity_index].as_rational()
            if deg is None or deg == 0:
                raise TableCorruptionError(f"{t.group_name}: character degree {row[t.identity_index]} is unusable")
            w = Fraction(order) / deg
            weights.append(int(w) if w.denominator == 1 else w)
        self.weights = weights
        self.rational = [[v.as_rational() for v in row] for row in t.irreducibles]
        self.rational = [[(int(q) if q.denominator == 1 else q) if q is not None else None for q in row]
                         for row in self.rational]
        # per column: rational entries (0 where irrational) and the conjugated irrational entries
        self.conj_int = []
        self.conj_irr = []
        for c in range(k):
            ints = []
            irr = []
            for chi in range(k):
                q = self.rational[chi][c]
                if q is None:
                    ints.append(0)
                    irr.append((chi, t.irreducibles[chi][c].conj()))
                else:
                    ints.append(q)
            self.conj_int.append(ints)
            self.conj_irr.append(irr)
        self.cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def _weighted_products(self, a: int, b: int):
        rows = self.table.irreducibles
        ints = []
        irr = {}
        for chi, w in enumerate(self.weights):
            x, y = self.rational[chi][a], self.rational[chi][b]
            if x is not None and y is not None:
                ints.append(w * x * y)
                continue
            p = rows[chi][a] * rows[chi][b] * w
            q = p.as_rational()
            if q is None:
                ints.append(0)
                irr[chi] = p
            else:
                ints.append(int(q) if q.denominator == 1 else q)
        return ints, irr

    def sweep(self, a: int, b: int) -> tuple[int, ...]:
        key = (a, b) if a <= b else (b, a)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        t = self.table
        ints, irr = self._weighted_products(a, b)
        base = functools.reduce(math.lcm, (p.conductor for p in irr.values()), 1)
        denom = t.classes[a].centralizer_order * t.classes[b].centralizer_order
        out = []
        for c in range(t.n_classes):
            total = sum(map(operator.mul, ints, self.conj_int[c]))
            col_irr = self.conj_irr[c]
            if irr or col_irr:
                big = functools.reduce(math.lcm, (z.conductor for _, z in col_irr), base)
                _check_conductor(big)
                acc = Accumulator(big)
                for chi, p in irr.items():
                    acc.add(1, lift(p, big), self.conj_int[c][chi])
                for chi, z in col_irr:
                    p = irr.get(chi)
                    acc.add(1, lift(p, big) if p is not None else ints[chi], lift(z, big))
                acc.scalar += total
                value = acc.value()
            else:
                value = Cyclotomic(total)
            out.append(_integral(value, denom, t, (a, b, c)))
        result = tuple(out)
        self.cache[key] = result
        return result


def _integral(value: Cyclotomic, denom: int, table: CharacterTable, triple) -> int:
    q = value.as_rational()
    names = tuple(table.classes[i].name for i in triple)
    if q is None:
        raise TableCorruptionError(
            f"{table.group_name}: m{names} is irrational ({value}/{denom}); character data is corrupt")
    m = q / denom
    if m.denominator != 1 or m < 0:
        raise TableCorruptionError(
            f"{table.group_name}: m{names} = {m} is not a nonnegative integer; character data is corrupt")
    return int(m)


def _engine(table: CharacterTable) -> _Engine:
    eng = table.__dict__.get("_cmc_engine")
    if eng is None:
        eng = _Engine(table)
        table.__dict__["_cmc_engine"] = eng
    return eng


def class_mult_coeff(table: CharacterTable, a: ClassRef, b: ClassRef, c: ClassRef) -> int:
    """m(a, b, c): pairs (u, v) in a^G x b^G with uv equal to a fixed element of c.

    Classes may be given by name (``"2a"``) or index.  Raises
    :class:`TableCorruptionError` if the formula does not yield a
    nonnegative integer.
    """
    ia, ib, ic = CoefficientQuery(a, b, c).resolve(table)
    return _engine(table).sweep(ia, ib)[ic]


def coeff_sweep(table: CharacterTable, a: ClassRef, b: ClassRef) -> list[tuple[str, int]]:
    """``(class name, m(a, b, c))`` for every class c, in table order."""
    ia, ib = table.class_index(a), table.class_index(b)
    values = _engine(table).sweep(ia, ib)
    return [(cls.name, v) for cls, v in zip(table.classes, values)]


def coefficient_cube(table: CharacterTable) -> list[list[list[int]]]:
    """All coefficients as ``cube[a][b][c]``."""
    eng = _engine(table)
    k = table.n_classes
    return [[list(eng.sweep(a, b)) for b in range(k)] for a in range(k)]


def reference_class_mult_coeff(table: CharacterTable, a: ClassRef, b: ClassRef, c: ClassRef) -> int:
    """The same coefficient evaluated literally with :class:`Cyclotomic` values.

    Slow; kept as an independent route for cross-checking the fast engine.
    """
    ia, ib, ic = CoefficientQuery(a, b, c).resolve(table)
    terms = []
    for row in table.irreducibles:
        terms.append(row[ia] * row[ib] * row[ic].conj() / row[table.identity_index])
    s = cyc_sum(terms)
    sizes = table.class_sizes
    value = s * (sizes[ia] * sizes[ib]) / table.group_order
    return _integral(value, 1, table, (ia, ib, ic))
