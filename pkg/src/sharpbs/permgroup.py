"""Brute-force permutation group machinery used as an independent oracle.

Everything here works by explicit enumeration of group elements, which is
fine for the desk-scale groups we test against (order up to about 10^4).
Permutations act on the right: ``(p * q)[i] == q[p[i]]``, i.e. ``p`` is
applied first.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import random
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Optional, Sequence, Union

from sympy import primefactors

__all__ = [
    "Permutation",
    "PermGroup",
    "PrimeSet",
    "ConjugacyClass",
    "GroupError",
    "CapExceededError",
    "DegreeMismatchError",
    "CombinatorialBlowupError",
    "BSWidthReport",
    "ClassVerdict",
    "DEFAULT_MAX_ELEMENTS",
    "DEFAULT_MAX_TUPLES",
    "generate_elements",
    "subgroup_closure",
    "conjugacy_classes",
    "normal_closure",
    "pi_radical",
    "normal_subgroups",
    "brute_force_cmc",
    "brute_force_cube",
    "match_classes",
    "beta_oracle",
    "bs_width_check",
    "bs_width_for",
    "load_group",
    "load_group_fixture",
    "group_fixture_names",
    "resolve_group",
    "symmetric_group",
    "alternating_group",
    "cyclic_group",
    "dihedral_group",
]

DEFAULT_MAX_ELEMENTS = 10**6
DEFAULT_MAX_TUPLES = 10**6


class GroupError(ValueError):
    pass


class CapExceededError(GroupError):
    """Closure produced more elements than the configured cap."""


class DegreeMismatchError(GroupError):
    pass


class CombinatorialBlowupError(GroupError):
    """An exhaustive tuple search would exceed the tuple cap."""


class Permutation(tuple):
    """A permutation of {0, ..., n-1} stored as its image tuple."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise GroupError(f"not a permutation: {images}")
        return tuple.__new__(cls, images)

    @classmethod
    def _trusted(cls, images) -> "Permutation":
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return tuple.__new__(cls, range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for i, p in enumerate(cyc):
                img[p] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(self)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other) != len(self):
            raise DegreeMismatchError("degrees differ")
        return tuple.__new__(Permutation, [other[i] for i in self])

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return tuple.__new__(Permutation, inv)

    def conjugate(self, g: "Permutation") -> "Permutation":
        """g^-1 * self * g"""
        # image of g[i] under the conjugate is g[self[i]]
        out = [0] * len(self)
        for i, j in enumerate(self):
            out[g[i]] = g[j]
        return tuple.__new__(Permutation, out)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeSet:
    """A set of primes, possibly co-finite (``complement=True``)."""

    primes: frozenset = frozenset()
    complement: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "primes", frozenset(self.primes))
        if not self.complement and not self.primes:
            raise ValueError("a non-complemented prime set must be nonempty")

    @classmethod
    def of(cls, *primes: int) -> "PrimeSet":
        return cls(frozenset(primes))

    @classmethod
    def all_except(cls, *primes: int) -> "PrimeSet":
        return cls(frozenset(primes), complement=True)

    @classmethod
    def parse(cls, text: str) -> "PrimeSet":
        """``"2,3"`` or ``"not:5,7"`` (all primes except 5 and 7)."""
        text = text.strip()
        complement = False
        if text.startswith("not:"):
            complement = True
            text = text[4:]
        primes = [int(p) for p in re.split(r"[,\s]+", text) if p]
        for p in primes:
            if p < 2 or primefactors(p) != [p]:
                raise ValueError(f"{p} is not a prime")
        return cls(frozenset(primes), complement)

    def __contains__(self, p: int) -> bool:
        return (p in self.primes) != self.complement

    def is_pi_number(self, n: int) -> bool:
        return all(p in self for p in primefactors(n))

    def smallest_prime_outside(self) -> int:
        if self.complement:
            return min(self.primes)
        p = 2
        while p in self.primes:
            p += 1
            while primefactors(p) != [p]:
                p += 1
        return p

    def __str__(self) -> str:
        body = ",".join(map(str, sorted(self.primes)))
        return f"not:{body}" if self.complement else body


def bs_width_for(pi: PrimeSet) -> int:
    """The conjectured width: r for r in {2, 3}, r - 1 otherwise,
    with r the smallest prime outside pi."""
    r = pi.smallest_prime_outside()
    return r if r in (2, 3) else r - 1


# ---------------------------------------------------------------------------


def _degree_of(gens: Sequence[Permutation], degree: Optional[int]) -> int:
    degs = {len(g) for g in gens}
    if degree is not None:
        degs.add(degree)
    if len(degs) > 1:
        raise DegreeMismatchError(f"generators of different degrees: {sorted(degs)}")
    if not degs:
        raise GroupError("cannot infer the degree of an empty generator list")
    return degs.pop()


def subgroup_closure(gens: Iterable[Permutation], degree: Optional[int] = None,
                     cap: int = DEFAULT_MAX_ELEMENTS) -> frozenset:
    """Elements of the group generated by ``gens``, by BFS."""
    gens = list(gens)
    degree = _degree_of(gens, degree)
    gens = list(dict.fromkeys(g for g in gens if not g.is_identity()))
    ident = Permutation.identity(degree)
    seen = {ident}
    queue = deque(seen)
    while queue:
        h = queue.popleft()
        for g in gens:
            y = tuple.__new__(Permutation, [g[i] for i in h])
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceededError(f"group order exceeds cap {cap}")
                queue.append(y)
    return frozenset(seen)


def generate_elements(gens: Sequence[Permutation], cap: int = DEFAULT_MAX_ELEMENTS,
                      degree: Optional[int] = None) -> frozenset:
    """All elements of <gens>.  An empty generator list needs ``degree``
    (defaults to 1) and yields the trivial group."""
    if not gens:
        return frozenset({Permutation.identity(degree or 1)})
    return subgroup_closure(gens, degree=degree, cap=cap)


@dataclass(frozen=True)
class ConjugacyClass:
    name: str
    representative: Permutation
    elements: frozenset
    element_order: int

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __len__(self) -> int:
        return len(self.elements)


def _letters(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, rem = divmod(i - 1, 26)
        s = chr(ord("a") + rem) + s
    return s


class PermGroup:
    """A permutation group given by generators; elements are cached on demand."""

    def __init__(self, generators: Sequence[Permutation], degree: Optional[int] = None,
                 name: Optional[str] = None, cap: int = DEFAULT_MAX_ELEMENTS):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        self.degree = _degree_of(gens, degree) if (gens or degree) else 1
        self.generators = tuple(gens)
        self.name = name
        self.cap = cap

    @classmethod
    def from_elements(cls, elements: Iterable[Permutation], name: Optional[str] = None) -> "PermGroup":
        elements = frozenset(elements)
        deg = len(next(iter(elements)))
        G = cls(_small_generating_set(elements, deg), degree=deg, name=name)
        G.__dict__["elements"] = elements
        return G

    @cached_property
    def elements(self) -> frozenset:
        elems = generate_elements(self.generators, cap=self.cap, degree=self.degree)
        _check_axioms(elems, self.generators)
        return elems

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or f"<{len(self.generators)} generators>"
        return f"PermGroup({label}, degree={self.degree})"

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def subgroup(self, gens: Iterable[Permutation]) -> "PermGroup":
        return PermGroup.from_elements(subgroup_closure(gens, degree=self.degree, cap=self.cap))

    @cached_property
    def conjugacy_classes(self) -> tuple[ConjugacyClass, ...]:
        """Classes ordered by (element order, size, smallest element)."""
        remaining = set(self.elements)
        raw = []
        gens = self.generators
        while remaining:
            x = min(remaining)
            orbit = {x}
            queue = [x]
            while queue:
                y = queue.pop()
                for g in gens:
                    z = y.conjugate(g)
                    if z not in orbit:
                        orbit.add(z)
                        queue.append(z)
            remaining -= orbit
            raw.append((x.order(), len(orbit), min(orbit), frozenset(orbit)))
        raw.sort(key=lambda t: (t[0], t[1], t[2]))
        out = []
        count: dict[int, int] = {}
        for order, _, rep, orbit in raw:
            i = count.get(order, 0)
            count[order] = i + 1
            out.append(ConjugacyClass(f"{order}{_letters(i)}", rep, orbit, order))
        return tuple(out)

    @cached_property
    def _class_lookup(self) -> dict:
        return {g: i for i, c in enumerate(self.conjugacy_classes) for g in c.elements}

    def class_of(self, g: Permutation) -> int:
        return self._class_lookup[g]

    def class_ref(self, ref: Union[int, str, ConjugacyClass]) -> ConjugacyClass:
        classes = self.conjugacy_classes
        if isinstance(ref, ConjugacyClass):
            return ref
        if isinstance(ref, int):
            return classes[ref]
        for c in classes:
            if c.name == ref:
                return c
        raise KeyError(f"no class named {ref!r}")

    def is_normal(self, sub: Iterable[Permutation]) -> bool:
        sub = frozenset(sub)
        return all(h.conjugate(g) in sub for h in sub for g in self.generators)


def _check_axioms(elems: frozenset, gens: Sequence[Permutation]) -> None:
    for g in elems:
        if g.inverse() not in elems or any(g * h not in elems for h in gens):
            raise AssertionError("element set is not closed under products and inverses")


def _small_generating_set(elements: frozenset, degree: int) -> list[Permutation]:
    gens: list[Permutation] = []
    have = frozenset({Permutation.identity(degree)})
    for g in sorted(elements):
        if g not in have:
            gens.append(g)
            have = subgroup_closure(gens, degree=degree)
            if len(have) == len(elements):
                break
    return gens


def conjugacy_classes(G: PermGroup) -> list[tuple[Permutation, frozenset]]:
    return [(c.representative, c.elements) for c in G.conjugacy_classes]


# ---------------------------------------------------------------------------


def normal_closure(G: PermGroup, x: Permutation) -> frozenset:
    """Smallest normal subgroup of G containing x."""
    if x not in G:
        raise GroupError("element is not in the group")
    gens = [x]
    H = subgroup_closure(gens, degree=G.degree, cap=G.cap)
    queue = [x]
    while queue:
        h = queue.pop()
        for g in G.generators:
            y = h.conjugate(g)
            if y not in H:
                gens.append(y)
                queue.append(y)
                H = subgroup_closure(gens, degree=G.degree, cap=G.cap)
    return H


def _product(A: frozenset, B: frozenset) -> frozenset:
    """AB for subgroups A, B with one of them normal."""
    return frozenset(a * b for a in A for b in B)


def pi_radical(G: PermGroup, pi: PrimeSet) -> frozenset:
    """O_pi(G): the product of all normal closures that are pi-groups."""
    R = frozenset({G.identity})
    for c in G.conjugacy_classes:
        if c.representative in R:
            continue
        N = normal_closure(G, c.representative)
        if pi.is_pi_number(len(N)):
            R = _product(R, N)
    if not G.is_normal(R) or not pi.is_pi_number(len(R)):
        raise AssertionError("pi-radical postcondition violated")
    return R


def normal_subgroups(G: PermGroup) -> list[frozenset]:
    """All normal subgroups, as products of normal closures of classes."""
    closures = {normal_closure(G, c.representative) for c in G.conjugacy_classes}
    found = set(closures)
    frontier = list(found)
    while frontier:
        new = []
        for A in frontier:
            for B in closures:
                if B <= A:
                    continue
                J = _product(A, B)
                if J not in found:
                    found.add(J)
                    new.append(J)
        frontier = new
    return sorted(found, key=len)


def brute_force_cmc(G: PermGroup, a, b, c_rep: Permutation) -> int:
    """|{(u, v) in a x b : u * v = c_rep}| by direct counting."""
    A = G.class_ref(a)
    B = G.class_ref(b)
    return sum(1 for u in A.elements if u.inverse() * c_rep in B.elements)


def brute_force_cube(G: PermGroup) -> list[list[list[int]]]:
    """``cube[a][b][c]`` = brute_force_cmc for every triple of classes of G."""
    classes = G.conjugacy_classes
    lookup = G._class_lookup
    k = len(classes)
    cube = [[[0] * k for _ in range(k)] for _ in range(k)]
    for ia, A in enumerate(classes):
        for ic, C in enumerate(classes):
            z = C.representative
            for u in A.elements:
                cube[ia][lookup[u.inverse() * z]][ic] += 1
    return cube


def match_classes(G: PermGroup, table, cube: Optional[list] = None) -> Optional[list[int]]:
    """Map class i of G to a table class index.

    Candidates must agree in element order and class size; the remaining
    ambiguity is resolved by requiring that brute-force and table
    coefficients agree on every triple of already matched classes.  Returns
    None when no consistent matching exists.
    """
    from .structconst import coefficient_cube

    if G.order != table.group_order or len(G.conjugacy_classes) != table.n_classes:
        return None
    if cube is None:
        cube = brute_force_cube(G)
    tcube = coefficient_cube(table)
    sizes = table.class_sizes
    cands = [[j for j, t in enumerate(table.classes)
              if t.element_order == c.element_order and sizes[j] == c.size]
             for c in G.conjugacy_classes]
    order = sorted(range(len(cands)), key=lambda i: len(cands[i]))
    assign: dict[int, int] = {}
    used: set = set()

    def consistent(i: int, j: int) -> bool:
        done = list(assign.items()) + [(i, j)]
        for a, ta in done:
            for b, tb in done:
                if cube[a][b][i] != tcube[ta][tb][j] or cube[a][i][b] != tcube[ta][j][tb] \
                        or cube[i][a][b] != tcube[j][ta][tb]:
                    return False
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        for j in cands[i]:
            if j in used or not consistent(i, j):
                continue
            assign[i] = j
            used.add(j)
            if search(pos + 1):
                return True
            del assign[i]
            used.discard(j)
        return False

    if not search(0):
        return None
    return [assign[i] for i in range(len(cands))]


# ---------------------------------------------------------------------------


def _generated_order(gens: Sequence[Permutation], degree: int, cap: int) -> int:
    return len(subgroup_closure(gens, degree=degree, cap=cap))


def _conjugates_under(x: Permutation, L: Union[PermGroup, Iterable[Permutation]]) -> list[Permutation]:
    if isinstance(L, PermGroup):
        gens = L.generators
    else:
        elems = frozenset(L)
        gens = _small_generating_set(elems, len(x)) if len(elems) > 1 else []
    orbit = {x}
    queue = [x]
    while queue:
        y = queue.pop()
        for g in gens:
            z = y.conjugate(g)
            if z not in orbit:
                orbit.add(z)
                queue.append(z)
    return sorted(orbit)


def beta_oracle(G: PermGroup, L: Union[PermGroup, Iterable[Permutation]], x: Permutation, r: int,
                k_max: int = 4, seed: int = 0, samples: int = 20000,
                max_tuples: int = DEFAULT_MAX_TUPLES) -> Optional[int]:
    """Smallest k <= k_max such that k L-conjugates of x generate a subgroup
    of order divisible by r; None if no such k is found.

    The first conjugate is fixed to x.  k <= 2 is exhaustive; for k >= 3 the
    search is exhaustive when the tuple count is within ``max_tuples`` and
    seeded random sampling otherwise.
    """
    L_elems = L.elements if isinstance(L, PermGroup) else frozenset(L)
    if len(L_elems) % r:
        raise GroupError(f"{r} does not divide |L| = {len(L_elems)}")
    if x not in G:
        raise GroupError("element is not in the group")
    if x.order() % r == 0:
        return 1 if k_max >= 1 else None
    conj = _conjugates_under(x, L if isinstance(L, PermGroup) else L_elems)
    rng = random.Random(seed)
    deg = G.degree
    cache: dict[frozenset, int] = {}

    def hit(tup) -> bool:
        key = frozenset(tup)
        n = cache.get(key)
        if n is None:
            n = cache[key] = _generated_order(list(key), deg, G.cap)
        return n % r == 0

    for k in range(2, k_max + 1):
        total = len(conj) ** (k - 1)
        if total <= max_tuples:
            tuples = itertools.product(conj, repeat=k - 1)
        else:
            tuples = (tuple(rng.choice(conj) for _ in range(k - 1)) for _ in range(samples))
        for rest in tuples:
            if hit((x,) + rest):
                return k
    return None


@dataclass
class ClassVerdict:
    name: str
    size: int
    inside_radical: bool
    witness: Optional[tuple]
    tuples_checked: int
    verdict: str  # "agree", "disagree", "inconclusive"


@dataclass
class BSWidthReport:
    group: str
    pi: str
    m: int
    mode: str
    seed: int
    radical_order: int
    classes: list[ClassVerdict] = field(default_factory=list)

    @property
    def status(self) -> str:
        verdicts = {c.verdict for c in self.classes}
        if "disagree" in verdicts:
            return "FAIL"
        if "inconclusive" in verdicts:
            return "INCONCLUSIVE"
        return "PASS"

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_dict(self) -> dict:
        return {
            "group": self.group, "pi": self.pi, "m": self.m, "mode": self.mode, "seed": self.seed,
            "radical_order": self.radical_order, "status": self.status,
            "classes": [{"class": c.name, "size": c.size, "inside_radical": c.inside_radical,
                         "witness": [list(w) for w in c.witness] if c.witness else None,
                         "tuples_checked": c.tuples_checked, "verdict": c.verdict}
                        for c in self.classes],
        }


def bs_width_check(G: PermGroup, pi: PrimeSet, m: int, mode: str = "exhaustive", seed: int = 0,
                   max_tuples: int = DEFAULT_MAX_TUPLES, samples: int = 10000) -> BSWidthReport:
    """Compare 'class inside O_pi(G)' with 'every m-tuple from the class
    generates a pi-group', class by class."""
    if m < 1:
        raise GroupError("m must be at least 1")
    if mode not in ("exhaustive", "sampled"):
        raise GroupError(f"unknown mode {mode!r}")
    classes = G.conjugacy_classes
    if mode == "exhaustive":
        for c in classes:
            if c.size ** (m - 1) > max_tuples:
                raise CombinatorialBlowupError(
                    f"class {c.name}: {c.size}^{m - 1} tuples exceed the cap {max_tuples}")
    R = pi_radical(G, pi)
    rng = random.Random(seed)
    report = BSWidthReport(G.name or "G", str(pi), m, mode, seed, len(R))
    cache: dict[frozenset, int] = {}
    for c in classes:
        inside = c.elements <= R
        members = sorted(c.elements)
        if mode == "exhaustive":
            tuples = itertools.product(members, repeat=m - 1)
        else:
            n = min(samples, max_tuples)
            tuples = (tuple(rng.choice(members) for _ in range(m - 1)) for _ in range(n))
        witness = None
        checked = 0
        for rest in tuples:
            checked += 1
            key = frozenset((c.representative,) + rest)
            order = cache.get(key)
            if order is None:
                order = cache[key] = _generated_order(list(key), G.degree, G.cap)
            if not pi.is_pi_number(order):
                witness = (c.representative,) + rest
                break
        if (witness is not None) == (not inside):
            verdict = "agree"
        elif mode == "sampled" and witness is None:
            verdict = "inconclusive"
        else:
            verdict = "disagree"
        report.classes.append(ClassVerdict(c.name, c.size, inside, witness, checked, verdict))
    return report


# ---------------------------------------------------------------------------
# fixtures and standard constructions


def group_from_dict(obj) -> PermGroup:
    try:
        name, degree, gens = obj["name"], obj["degree"], obj["generators"]
    except (KeyError, TypeError) as exc:
        raise GroupError(f"malformed group file: missing {exc}") from None
    if not isinstance(degree, int) or degree < 1:
        raise GroupError("degree must be a positive integer")
    perms = []
    for g in gens:
        if not isinstance(g, list) or len(g) != degree:
            raise DegreeMismatchError(f"generator {g!r} does not have degree {degree}")
        perms.append(Permutation(g))
    return PermGroup(perms, degree=degree, name=name)


def load_group(path) -> PermGroup:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GroupError(f"malformed group file: {exc}") from exc
    return group_from_dict(obj)


def _group_dir():
    return resources.files("sharpbs") / "data" / "groups"


def _key(name: str) -> str:
    return re.sub(r"[^0-9a-z]", "", name.lower())


def group_fixture_names() -> list[str]:
    return sorted(p.name[:-5] for p in _group_dir().iterdir() if p.name.endswith(".json"))


def load_group_fixture(name: str) -> PermGroup:
    want = _key(name)
    for stem in group_fixture_names():
        if _key(stem) == want:
            return group_from_dict(json.loads((_group_dir() / f"{stem}.json").read_text(encoding="utf-8")))
    raise FileNotFoundError(f"no shipped permutation group named {name!r}")


def resolve_group(source) -> PermGroup:
    path = os.fspath(source)
    if os.path.isfile(path):
        return load_group(path)
    return load_group_fixture(os.path.basename(path).removesuffix(".json"))


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return PermGroup([], degree=max(n, 1), name=f"S{n}")
    gens = [Permutation.from_cycles(n, tuple(range(n))), Permutation.from_cycles(n, (0, 1))]
    return PermGroup(gens, name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([], degree=max(n, 1), name=f"A{n}")
    gens = [Permutation.from_cycles(n, (i, i + 1, i + 2)) for i in range(n - 2)]
    return PermGroup(gens, name=f"A{n}")


def cyclic_group(n: int) -> PermGroup:
    return PermGroup([Permutation.from_cycles(n, tuple(range(n)))], degree=n, name=f"C{n}")


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = Permutation.from_cycles(n, tuple(range(n)))
    refl = Permutation([(-i) % n for i in range(n)])
    return PermGroup([rot, refl], name=f"D{2 * n}")
