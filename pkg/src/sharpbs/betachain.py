"""Certified upper bounds on beta_r(x, L) and the sporadic case check.

beta_r(x, L) is the least number of L-conjugates of x generating a subgroup
of order divisible by r; alpha(x, L) is the least number generating <L, x>.

The bounds come from chains of classes.  If m(a, a, b) > 0 then some element
of b is a product of two conjugates of a, so k conjugates of b lie in the
group generated by 2k conjugates of a.  A chain a -> b1 -> ... -> bt ending
in a class whose element order is divisible by r therefore gives
beta_r(a, L) <= 2^t.

On the table of an extension G = L.2 the conjugates appearing in the
coefficients are G-conjugates.  They are L-conjugates of the start class
whenever x^G = x^L, which holds for outer classes and for inner classes
that do not fuse two L-classes; the chain may pass through any classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple, Optional, Union

from sympy import isprime

from .chartable import CharacterTable, TableError, UnknownClassError
from .structconst import coeff_sweep, reference_class_mult_coeff

__all__ = [
    "AlphaBoundData",
    "AlphaDataError",
    "BetaCertificate",
    "ChainStep",
    "ClassCheck",
    "Interval",
    "NoCertificateError",
    "PreconditionError",
    "TheoremReport",
    "UnknownAlphaEntryError",
    "alpha_bound",
    "beta_target",
    "beta_upper_bound",
    "check_sporadic_theorem",
    "load_alpha_data",
    "verify_certificate",
]

ClassRef = Union[int, str]


class PreconditionError(ValueError):
    pass


class NoCertificateError(LookupError):
    """The search found no chain.  ``exhausted`` is False when it stopped at
    the depth limit rather than running out of reachable classes."""

    def __init__(self, message: str, exhausted: bool):
        super().__init__(message)
        self.exhausted = exhausted


class AlphaDataError(ValueError):
    pass


class UnknownAlphaEntryError(AlphaDataError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


# ---------------------------------------------------------------------------
# certificates


class ChainStep(NamedTuple):
    from_class: str
    via_class: str
    coefficient: int


@dataclass(frozen=True)
class BetaCertificate:
    group_name: str
    prime: int
    start_class: str
    steps: tuple[ChainStep, ...]
    terminal_class: str
    bound: int

    def lines(self) -> list[str]:
        out = [f"step: {s.from_class} {s.via_class} {s.coefficient}" for s in self.steps]
        out.append(f"bound: 2^{len(self.steps)} = {self.bound}")
        return out

    def to_dict(self) -> dict:
        return {
            "group": self.group_name, "prime": self.prime, "start_class": self.start_class,
            "steps": [list(s) for s in self.steps], "terminal_class": self.terminal_class,
            "bound": self.bound,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "BetaCertificate":
        steps = tuple(ChainStep(str(a), str(b), int(c)) for a, b, c in obj["steps"])
        return cls(obj["group"], int(obj["prime"]), obj["start_class"], steps,
                   obj["terminal_class"], int(obj["bound"]))


def _square_successors(table: CharacterTable, a: int) -> list[tuple[int, int]]:
    return [(b, v) for b, (_, v) in enumerate(coeff_sweep(table, a, a)) if v > 0]


def beta_upper_bound(table: CharacterTable, x: ClassRef, r: int,
                     max_depth: Optional[int] = None) -> BetaCertificate:
    """Shortest chain certificate for beta_r(x) found by breadth-first search.

    Among shortest chains the via-sequence that is smallest in table order
    wins.  Raises :class:`PreconditionError` when r is not a prime dividing
    the group order and :class:`NoCertificateError` when no chain exists
    (within ``max_depth`` steps, if given).
    """
    if not isprime(r):
        raise PreconditionError(f"{r} is not a prime")
    if table.group_order % r:
        raise PreconditionError(f"{r} does not divide |{table.group_name}| = {table.group_order}")
    start = table.class_index(x)
    classes = table.classes
    name = table.group_name

    def cert(path: tuple[int, ...], coeffs: tuple[int, ...]) -> BetaCertificate:
        nodes = (start,) + path
        steps = tuple(ChainStep(classes[nodes[i]].name, classes[nodes[i + 1]].name, coeffs[i])
                      for i in range(len(path)))
        return BetaCertificate(name, r, classes[start].name, steps, classes[nodes[-1]].name, 2 ** len(path))

    if classes[start].element_order % r == 0:
        return cert((), ())

    # layer maps class -> lexicographically least (path, coefficients) reaching it
    layer: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {start: ((), ())}
    seen = {start}
    depth = 0
    while layer:
        if max_depth is not None and depth >= max_depth:
            raise NoCertificateError(
                f"no chain from {classes[start].name} of length <= {max_depth} for r = {r}", exhausted=False)
        depth += 1
        nxt: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        for a, (path, coeffs) in sorted(layer.items(), key=lambda kv: kv[1][0]):
            for b, v in _square_successors(table, a):
                if b in seen:
                    continue
                cand = (path + (b,), coeffs + (v,))
                old = nxt.get(b)
                if old is None or cand[0] < old[0]:
                    nxt[b] = cand
        seen.update(nxt)
        hits = [pc for b, pc in nxt.items() if classes[b].element_order % r == 0]
        if hits:
            return cert(*min(hits))
        layer = nxt
    raise NoCertificateError(f"no chain from {classes[start].name} reaches an element order divisible by {r}",
                             exhausted=True)


def verify_certificate(table: CharacterTable, cert: BetaCertificate) -> bool:
    """Re-check every claim of ``cert``, recomputing coefficients independently."""
    try:
        if cert.group_name != table.group_name or not isprime(cert.prime):
            return False
        if table.group_order % cert.prime:
            return False
        start = table.class_index(cert.start_class)
        terminal = table.class_index(cert.terminal_class)
        if cert.bound != 2 ** len(cert.steps):
            return False
        if table.classes[terminal].element_order % cert.prime:
            return False
        if not cert.steps:
            return start == terminal
        current = cert.start_class
        for step in cert.steps:
            if step.from_class != current or step.coefficient <= 0:
                return False
            value = reference_class_mult_coeff(table, step.from_class, step.from_class, step.via_class)
            if value != step.coefficient:
                return False
            current = step.via_class
        return table.class_index(current) == terminal
    except (UnknownClassError, TableError, TypeError, ValueError):
        return False


# ---------------------------------------------------------------------------
# alpha data


class Interval(NamedTuple):
    lo: int
    hi: int

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __str__(self) -> str:
        return str(self.lo) if self.lo == self.hi else f"[{self.lo},{self.hi}]"


def _interval(raw, where: str) -> Interval:
    if (not isinstance(raw, list) or len(raw) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw)):
        raise AlphaDataError(f"{where}: expected [lo, hi] integers, got {raw!r}")
    lo, hi = raw
    if not 1 <= lo <= hi:
        raise AlphaDataError(f"{where}: need 1 <= lo <= hi, got {raw!r}")
    return Interval(lo, hi)


@dataclass(frozen=True)
class AlphaBoundData:
    """Intervals for alpha(x, L), L sporadic, keyed by (group, class).

    ``entries`` are explicit intervals; other classes fall back to
    ``group_defaults[group]`` and then ``defaults``, split by whether x is an
    involution.  ``classes`` lists the nonidentity classes of each group so
    that unknown names are rejected rather than silently defaulted.
    """

    entries: dict
    defaults: dict = field(default_factory=dict)
    group_defaults: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)
    aliases: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, obj) -> "AlphaBoundData":
        if not isinstance(obj, dict):
            raise AlphaDataError("alpha data must be an object")
        entries = {}
        raw_entries = obj.get("entries", {k: v for k, v in obj.items() if "/" in k})
        for key, raw in raw_entries.items():
            group, sep, cname = key.partition("/")
            if not sep or not group or not cname:
                raise AlphaDataError(f"bad entry key {key!r}; expected 'Group/class'")
            entries[(group, cname)] = _interval(raw, key)
        defaults = {k: _interval(v, f"defaults.{k}") for k, v in obj.get("defaults", {}).items()}
        group_defaults = {g: {k: _interval(v, f"group_defaults.{g}.{k}") for k, v in d.items()}
                          for g, d in obj.get("group_defaults", {}).items()}
        classes = {g: frozenset(v) for g, v in obj.get("classes", {}).items()}
        aliases = dict(obj.get("aliases", {}))
        for (group, cname) in entries:
            if group in classes and cname not in classes[group]:
                raise AlphaDataError(f"entry {group}/{cname} names a class the group does not have")
        return cls(entries, defaults, group_defaults, classes, aliases)

    @property
    def groups(self) -> set:
        return set(self.classes) | {g for g, _ in self.entries} | set(self.group_defaults)

    def canonical_group(self, group: str) -> str:
        group = self.aliases.get(group, group)
        if group not in self.groups:
            raise UnknownAlphaEntryError(f"no alpha data for group {group!r}")
        return group


def load_alpha_data(path=None) -> AlphaBoundData:
    """Read alpha data from ``path``, or the shipped data when omitted."""
    if path is None:
        text = (resources.files("sharpbs") / "data" / "alpha_bounds.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlphaDataError(f"malformed alpha data: {exc}") from exc
    return AlphaBoundData.from_dict(obj)


def _order_from_name(cname: str) -> int:
    digits = ""
    for ch in cname:
        if not ch.isdigit():
            break
        digits += ch
    if not digits:
        raise UnknownAlphaEntryError(f"cannot read an element order from class name {cname!r}")
    return int(digits)


def alpha_bound(data: AlphaBoundData, group: str, x: str) -> Interval:
    """The interval known for alpha(x, L) with L = ``group`` and x a class name."""
    group = data.canonical_group(group)
    hit = data.entries.get((group, x))
    if hit is not None:
        return hit
    known = data.classes.get(group)
    if known is not None and x not in known:
        raise UnknownAlphaEntryError(f"{group} has no nonidentity class {x!r}")
    order = _order_from_name(x)
    if order == 1:
        raise UnknownAlphaEntryError("alpha is not defined for the identity class")
    kind = "involution" if order == 2 else "non_involution"
    rules = data.group_defaults.get(group, {})
    rule = rules.get(kind) or data.defaults.get(kind)
    if rule is None:
        raise UnknownAlphaEntryError(f"no alpha entry or default rule for {group}/{x}")
    return rule


def _alpha_of_table_class(data: AlphaBoundData, table: CharacterTable, idx: int) -> Interval:
    c = table.classes[idx]
    names = c.socle_classes or (c.name,)
    out = None
    for n in names:
        iv = alpha_bound(data, table.socle, n)
        out = iv if out is None else out.hull(iv)
    return out


# ---------------------------------------------------------------------------
# case check


def beta_target(r: int) -> int:
    return 3 if r == 3 else r - 1


@dataclass
class ClassCheck:
    class_name: str
    element_order: int
    inner: bool
    beta_target: int
    beta_bound: Optional[int]
    beta_rule: str
    alpha_target: int
    alpha_bound: Optional[int]
    alpha_rule: str
    certificate: Optional[BetaCertificate] = None
    detail: str = ""

    @property
    def beta_ok(self) -> bool:
        return self.beta_bound is not None and self.beta_bound <= self.beta_target

    @property
    def alpha_ok(self) -> bool:
        return self.alpha_bound is not None and self.alpha_bound <= self.alpha_target

    @property
    def passed(self) -> bool:
        return self.beta_ok and self.alpha_ok

    def line(self) -> str:
        kind = "inner" if self.inner else "outer"
        beta = "none" if self.beta_bound is None else str(self.beta_bound)
        alpha = "none" if self.alpha_bound is None else str(self.alpha_bound)
        text = (f"{self.class_name} ({kind}): beta <= {beta} vs {self.beta_target} by {self.beta_rule}; "
                f"alpha <= {alpha} vs {self.alpha_target} by {self.alpha_rule}: "
                f"{'PASS' if self.passed else 'FAIL'}")
        return text + (f" ({self.detail})" if self.detail else "")

    def to_dict(self) -> dict:
        return {
            "class": self.class_name, "order": self.element_order, "inner": self.inner,
            "beta_target": self.beta_target, "beta_bound": self.beta_bound, "beta_rule": self.beta_rule,
            "alpha_target": self.alpha_target, "alpha_bound": self.alpha_bound, "alpha_rule": self.alpha_rule,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "detail": self.detail, "passed": self.passed,
        }


@dataclass
class TheoremReport:
    group_name: str
    socle: str
    r: int
    s: int
    checks: list[ClassCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> ClassCheck:
        for c in self.checks:
            if c.class_name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        head = f"{self.group_name} (socle {self.socle}), r = {self.r}, s = {self.s}"
        return [head] + [c.line() for c in self.checks]

    def to_dict(self) -> dict:
        return {"group": self.group_name, "socle": self.socle, "r": self.r, "s": self.s,
                "passed": self.passed, "classes": [c.to_dict() for c in self.checks]}


def _is_fused(table: CharacterTable, idx: int) -> bool:
    names = table.classes[idx].socle_classes
    return names is not None and len(names) > 1


def check_sporadic_theorem(table: CharacterTable, data: AlphaBoundData, r: int, s: int,
                           max_depth: Optional[int] = None) -> TheoremReport:
    """Check, for every class x of prime order, that
    beta_r(x) <= (3 if r == 3 else r - 1) and alpha(x) <= s - 1.

    Inner classes use, in order: r dividing |x|, the alpha interval, a chain
    certificate.  Outer classes use a chain certificate, then the bound
    2 alpha(y) for an odd prime order y with m(x, x, y) > 0; the same
    bound serves for alpha(x).
    """
    if r % 2 == 0 or not isprime(r):
        raise PreconditionError(f"r = {r} must be an odd prime")
    if not isprime(s):
        raise PreconditionError(f"s = {s} must be a prime")
    if table.socle_name is not None and not table.is_extension:
        raise PreconditionError(f"{table.group_name} declares socle {table.socle_name} "
                                "but marks no class as outside it")
    socle_order = table.socle_order
    if socle_order % r:
        raise PreconditionError(f"r = {r} does not divide |{table.socle}| = {socle_order}")
    data.canonical_group(table.socle)
    target = beta_target(r)
    alpha_target = s - 1
    checks = []
    for idx, c in enumerate(table.classes):
        order = c.element_order
        if order == 1 or not isprime(order):
            continue
        if c.in_socle:
            checks.append(_check_inner(table, data, idx, r, target, alpha_target, max_depth))
        else:
            checks.append(_check_outer(table, data, idx, r, target, alpha_target, max_depth))
    return TheoremReport(table.group_name, table.socle, r, s, checks)


def _check_inner(table, data, idx, r, target, alpha_target, max_depth) -> ClassCheck:
    c = table.classes[idx]
    alpha = _alpha_of_table_class(data, table, idx)
    check = ClassCheck(c.name, c.element_order, True, target, None, "none",
                       alpha_target, alpha.hi, "alpha data")
    if c.element_order % r == 0:
        check.beta_bound, check.beta_rule = 1, "order"
    elif alpha.hi <= target:
        check.beta_bound, check.beta_rule = alpha.hi, "alpha data"
    elif _is_fused(table, idx):
        check.detail = "class fuses socle classes; check it on the socle table"
    else:
        try:
            cert = beta_upper_bound(table, idx, r, max_depth)
        except NoCertificateError as exc:
            check.detail = str(exc)
        else:
            check.beta_bound, check.beta_rule, check.certificate = cert.bound, "certificate", cert
    return check


def _check_outer(table, data, idx, r, target, alpha_target, max_depth) -> ClassCheck:
    c = table.classes[idx]
    check = ClassCheck(c.name, c.element_order, False, target, None, "none",
                       alpha_target, None, "none")
    best = None
    for jdx, (yname, v) in enumerate(coeff_sweep(table, idx, idx)):
        y = table.classes[jdx]
        if v <= 0 or not y.in_socle or y.element_order % 2 == 0 or not isprime(y.element_order):
            continue
        hi = _alpha_of_table_class(data, table, jdx).hi
        if best is None or hi < best[0]:
            best = (hi, yname)
    if best is not None:
        check.alpha_bound = 2 * best[0]
        check.alpha_rule = f"2*alpha({best[1]})"
    notes = []
    try:
        cert = beta_upper_bound(table, idx, r, max_depth)
    except NoCertificateError as exc:
        notes.append(str(exc))
        cert = None
    if cert is not None and cert.bound <= target:
        check.beta_bound, check.beta_rule, check.certificate = cert.bound, "certificate", cert
    elif best is not None and 2 * best[0] <= target:
        check.beta_bound, check.beta_rule = 2 * best[0], f"2*alpha({best[1]})"
    elif cert is not None:
        check.beta_bound, check.beta_rule, check.certificate = cert.bound, "certificate", cert
    if best is None:
        notes.append("no odd prime order class in x*x")
    check.detail = "; ".join(notes)
    return check
