"""Character tables in ATLAS conventions: data model, file I/O, validation.

Table files are JSON objects::

    {"group": "M22.2", "socle": "M22", "order": 887040,
     "classes": [{"name": "1a", "order": 1, "centralizer": 887040,
                  "in_socle": true, "socle_classes": ["1a"]}, ...],
     "irreducibles": [[1, 1, ...], ...]}

``socle`` and ``socle_classes`` are optional; they only matter for tables of
almost simple groups L.2, where ``socle_classes`` lists the classes of L that
make up an inner class of the extension.  Character values use the
serialized forms of :mod:`sharpbs.cyclo`.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from typing import Iterator, Optional, Sequence, Union

from ._lifted import Accumulator, LiftedMatrix
from .cyclo import Cyclotomic, CyclotomicError

__all__ = [
    "ClassInfo",
    "CharacterTable",
    "TableError",
    "TableFormatError",
    "DimensionMismatchError",
    "DuplicateClassError",
    "UnknownClassError",
    "CheckResult",
    "ValidationReport",
    "load_table",
    "loads_table",
    "load_fixture",
    "fixture_names",
    "resolve_table",
    "validate",
]

PathLike = Union[str, os.PathLike]


class TableError(ValueError):
    """Base class for character-table problems."""


class TableFormatError(TableError):
    """The table file does not parse against the schema."""


class DimensionMismatchError(TableFormatError):
    pass


class DuplicateClassError(TableFormatError):
    pass


class UnknownClassError(TableError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class ClassInfo:
    name: str
    element_order: int
    centralizer_order: int
    in_socle: bool = True
    socle_classes: Optional[tuple[str, ...]] = None


@dataclass(frozen=True, eq=True)
class CharacterTable:
    group_name: str
    group_order: int
    classes: tuple[ClassInfo, ...]
    irreducibles: tuple[tuple[Cyclotomic, ...], ...]
    socle_name: Optional[str] = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for i, c in enumerate(self.classes):
            if c.name in index:
                raise DuplicateClassError(f"{self.group_name}: duplicate class name {c.name!r}")
            index[c.name] = i
        object.__setattr__(self, "_index", index)
        if len(self.irreducibles) != len(self.classes):
            raise DimensionMismatchError(
                f"{self.group_name}: {len(self.irreducibles)} irreducibles but {len(self.classes)} classes")
        for i, row in enumerate(self.irreducibles):
            if len(row) != len(self.classes):
                raise DimensionMismatchError(
                    f"{self.group_name}: character {i} has {len(row)} values, expected {len(self.classes)}")

    def __hash__(self) -> int:
        return hash((self.group_name, self.group_order, self.classes, self.irreducibles))

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @cached_property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(self.group_order // c.centralizer_order for c in self.classes)

    @property
    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    @property
    def degrees(self) -> list[Cyclotomic]:
        return [row[self.identity_index] for row in self.irreducibles]

    @property
    def identity_index(self) -> int:
        return self._index.get("1a", 0)

    @property
    def is_extension(self) -> bool:
        return not all(c.in_socle for c in self.classes)

    @property
    def socle(self) -> str:
        """Name of the simple socle; the group itself for a simple table."""
        return self.socle_name or self.group_name

    @property
    def socle_order(self) -> int:
        return sum(s for s, c in zip(self.class_sizes, self.classes) if c.in_socle)

    def class_by_name(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownClassError(f"{self.group_name} has no class named {name!r}") from None

    def class_index(self, cls: Union[int, str]) -> int:
        if isinstance(cls, str):
            return self.class_by_name(cls)
        if not 0 <= cls < self.n_classes:
            raise UnknownClassError(f"{self.group_name} has no class index {cls}")
        return cls

    def value(self, chi: int, cls: Union[int, str]) -> Cyclotomic:
        return self.irreducibles[chi][self.class_index(cls)]

    def with_value(self, chi: int, cls: Union[int, str], value) -> "CharacterTable":
        """Copy of the table with one character value replaced."""
        c = self.class_index(cls)
        rows = [list(r) for r in self.irreducibles]
        rows[chi][c] = Cyclotomic.coerce(value)
        return replace(self, irreducibles=tuple(tuple(r) for r in rows))

    @cached_property
    def lifted(self) -> LiftedMatrix:
        return LiftedMatrix(self.irreducibles)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        out: dict = {"group": self.group_name}
        if self.socle_name is not None:
            out["socle"] = self.socle_name
        out["order"] = self.group_order
        classes = []
        for c in self.classes:
            entry = {"name": c.name, "order": c.element_order,
                     "centralizer": c.centralizer_order, "in_socle": c.in_socle}
            if c.socle_classes is not None:
                entry["socle_classes"] = list(c.socle_classes)
            classes.append(entry)
        out["classes"] = classes
        out["irreducibles"] = [[v.to_json() for v in row] for row in self.irreducibles]
        return out

    def dumps(self) -> str:
        # one character per line keeps fixture diffs readable
        head = json.dumps({k: v for k, v in self.to_dict().items() if k != "irreducibles"})
        rows = ",\n".join(json.dumps([v.to_json() for v in row], separators=(",", ":"))
                          for row in self.irreducibles)
        return head[:-1] + ', "irreducibles": [\n' + rows + "\n]}\n"

    def save(self, path: PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def from_dict(cls, obj) -> "CharacterTable":
        if not isinstance(obj, dict):
            raise TableFormatError("table file must contain a JSON object")
        try:
            name = obj["group"]
            order = obj["order"]
            raw_classes = obj["classes"]
            raw_irr = obj["irreducibles"]
        except KeyError as exc:
            raise TableFormatError(f"missing field {exc.args[0]!r}") from None
        if not isinstance(name, str):
            raise TableFormatError("'group' must be a string")
        _require_int(order, "order", positive=True)
        if not isinstance(raw_classes, list) or not isinstance(raw_irr, list):
            raise TableFormatError("'classes' and 'irreducibles' must be arrays")
        classes = []
        for i, rc in enumerate(raw_classes):
            if not isinstance(rc, dict):
                raise TableFormatError(f"class entry {i} is not an object")
            try:
                cname, eorder, cent = rc["name"], rc["order"], rc["centralizer"]
            except KeyError as exc:
                raise TableFormatError(f"class entry {i} missing field {exc.args[0]!r}") from None
            if not isinstance(cname, str) or not cname:
                raise TableFormatError(f"class entry {i}: bad name {cname!r}")
            _require_int(eorder, f"class {cname} order", positive=True)
            _require_int(cent, f"class {cname} centralizer", positive=True)
            in_socle = rc.get("in_socle", True)
            if not isinstance(in_socle, bool):
                raise TableFormatError(f"class {cname}: in_socle must be a boolean")
            soc = rc.get("socle_classes")
            if soc is not None:
                if not isinstance(soc, list) or not all(isinstance(s, str) for s in soc):
                    raise TableFormatError(f"class {cname}: socle_classes must be a list of names")
                soc = tuple(soc)
            classes.append(ClassInfo(cname, eorder, cent, in_socle, soc))
        rows = []
        for i, row in enumerate(raw_irr):
            if not isinstance(row, list):
                raise TableFormatError(f"character {i} is not an array")
            try:
                rows.append(tuple(Cyclotomic.from_json(v) for v in row))
            except CyclotomicError as exc:
                raise TableFormatError(f"character {i}: {exc}") from exc
        socle = obj.get("socle")
        if socle is not None and not isinstance(socle, str):
            raise TableFormatError("'socle' must be a string")
        return cls(name, order, tuple(classes), tuple(rows), socle)


def _require_int(v, what: str, positive: bool = False) -> None:
    if not isinstance(v, int) or isinstance(v, bool):
        raise TableFormatError(f"{what} must be an integer, got {v!r}")
    if positive and v <= 0:
        raise TableFormatError(f"{what} must be positive, got {v}")


def loads_table(text: str) -> CharacterTable:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"malformed table file: {exc}") from exc
    return CharacterTable.from_dict(obj)


def load_table(path: PathLike) -> CharacterTable:
    """Read a table file.  Values are canonicalized; nothing is validated."""
    with open(path, encoding="utf-8") as fh:
        return loads_table(fh.read())


# -- shipped fixtures ------------------------------------------------------------

def _fixture_dir():
    return resources.files("sharpbs") / "data" / "tables"


def _key(name: str) -> str:
    return re.sub(r"[^0-9a-z.']", "", name.lower())


def fixture_names() -> list[str]:
    return sorted(p.name[:-5] for p in _fixture_dir().iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> CharacterTable:
    """Load a shipped table by group name, e.g. ``"M22.2"`` or ``"PSL(2,7)"``."""
    want = _key(name)
    for stem in fixture_names():
        if _key(stem) == want:
            return loads_table((_fixture_dir() / f"{stem}.json").read_text(encoding="utf-8"))
    raise FileNotFoundError(f"no shipped character table named {name!r}")


def resolve_table(source: PathLike) -> CharacterTable:
    """A table from a file path, falling back to a shipped fixture name.

    ``fixtures/J2`` and ``J2`` both resolve to the shipped J2 table when no
    such file exists.
    """
    path = os.fspath(source)
    if os.path.isfile(path):
        return load_table(path)
    return load_fixture(os.path.basename(path).removesuffix(".json"))


# -- validation --------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    offending: list = field(default_factory=list)
    detail: str = ""


@dataclass
class ValidationReport:
    group_name: str
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __iter__(self) -> Iterator[CheckResult]:
        return iter(self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"group": self.group_name, "ok": self.ok,
                "checks": [{"name": c.name, "passed": c.passed,
                            "offending": [list(o) if isinstance(o, tuple) else o for o in c.offending],
                            "detail": c.detail} for c in self.checks]}


def validate(table: CharacterTable) -> ValidationReport:
    """Check every structural and orthogonality invariant of ``table``.

    Failures are reported, never raised.  Offending entries are class or
    character indices (pairs for the orthogonality relations).
    """
    checks = []
    order = table.group_order
    cls = table.classes
    one = table.identity_index

    bad = [i for i, c in enumerate(cls) if order % c.centralizer_order]
    checks.append(CheckResult("centralizer_divides_order", not bad, bad))

    bad = [i for i, c in enumerate(cls) if order % c.element_order]
    checks.append(CheckResult("element_order_divides_order", not bad, bad))

    ident_ok = ("1a" in table._index and cls[one].element_order == 1
                and cls[one].centralizer_order == order)
    checks.append(CheckResult("identity_class", ident_ok, [] if ident_ok else [one]))

    degrees = [row[one].as_integer() for row in table.irreducibles]
    bad = [i for i, d in enumerate(degrees) if d is None or d <= 0]
    checks.append(CheckResult("degrees_positive_integers", not bad, bad))

    deg_sum = sum(d * d for d in degrees if d is not None)
    ok = not bad and deg_sum == order
    checks.append(CheckResult("degree_square_sum", ok, [],
                              "" if ok else f"sum of squared degrees {deg_sum} != {order}"))

    size_sum = sum(order // c.centralizer_order for c in cls)
    ok = size_sum == order and not checks[0].offending
    checks.append(CheckResult("class_size_sum", ok, [], "" if ok else f"sum of class sizes {size_sum} != {order}"))

    lifted = table.lifted
    k = table.n_classes
    sizes = table.class_sizes

    bad_rows = []
    for i in range(k):
        for j in range(i, k):
            big = lifted.conductor_for(rows=(i, j))
            ri = lifted.row(i, big)
            rj = lifted.row(j, big, conj=True)
            acc = Accumulator(big)
            for c in range(k):
                acc.add(sizes[c], ri[c], rj[c])
            if acc.value() != (order if i == j else 0):
                bad_rows.append((i, j))
    checks.append(CheckResult("row_orthogonality", not bad_rows, bad_rows))

    bad_cols = []
    for a in range(k):
        for b in range(a, k):
            big = lifted.conductor_for(cols=(a, b))
            ca = lifted.col(a, big)
            cb = lifted.col(b, big, conj=True)
            acc = Accumulator(big)
            for chi in range(k):
                acc.add(1, ca[chi], cb[chi])
            if acc.value() != (cls[a].centralizer_order if a == b else 0):
                bad_cols.append((a, b))
    checks.append(CheckResult("column_orthogonality", not bad_cols, bad_cols))

    return ValidationReport(table.group_name, checks)
