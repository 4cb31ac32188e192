"""Finite-model checker for conjunctive structures and algebras.

Models are finite carriers with a lattice order (given as `leq` pairs or
a join table), a tensor table, an involutive antitone orthogonal map, an
optional parallel-composition table, and an optional name-indexed
injection M restricted to a finite name window.  Meets are computed from
joins via lower bounds; all quantified axioms are checked by exhaustive
enumeration, so every verdict is exact for the model at hand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional

Element = str
Report = list[tuple[str, bool, str]]


class ModelError(Exception):
    pass


@dataclass
class FinModel:
    carrier: tuple[Element, ...]
    leq: frozenset[tuple[Element, Element]]
    tensor: dict[tuple[Element, Element], Element]
    perp: dict[Element, Element]
    unit: Element
    parcomp: Optional[dict[tuple[Element, Element], Element]] = None
    window: tuple[int, ...] = ()
    m_table: dict[tuple[int, int], Element] = field(default_factory=dict)
    separator: frozenset[Element] = frozenset()

    # -- lattice ------------------------------------------------------

    def le(self, a: Element, b: Element) -> bool:
        return (a, b) in self.leq

    def join2(self, a: Element, b: Element) -> Element:
        uppers = [c for c in self.carrier if self.le(a, c) and self.le(b, c)]
        least = [c for c in uppers if all(self.le(c, d) for d in uppers)]
        if len(least) != 1:
            raise ModelError(f"join of {a} and {b} does not exist")
        return least[0]

    def join(self, elems: Iterable[Element]) -> Element:
        out = self.bottom()
        for e in elems:
            out = self.join2(out, e)
        return out

    def meet(self, elems: Iterable[Element]) -> Element:
        elems = list(elems)
        lowers = [c for c in self.carrier
                  if all(self.le(c, e) for e in elems)]
        return self.join(lowers)

    def bottom(self) -> Element:
        for c in self.carrier:
            if all(self.le(c, d) for d in self.carrier):
                return c
        raise ModelError("carrier has no bottom element")

    def top(self) -> Element:
        for c in self.carrier:
            if all(self.le(d, c) for d in self.carrier):
                return c
        raise ModelError("carrier has no top element")

    # -- derived operators --------------------------------------------

    def parr(self, a: Element, b: Element) -> Element:
        return self.perp[self.tensor[self.perp[a], self.perp[b]]]

    def arrow(self, a: Element, b: Element) -> Element:
        return self.perp[self.tensor[a, self.perp[b]]]

    def star(self, a: Element, b: Element) -> Element:
        return self.meet(c for c in self.carrier
                         if self.le(a, self.arrow(b, c)))

    def rhd(self, b: Element, c: Element) -> Element:
        if self.parcomp is None:
            raise ModelError("model has no parallel composition")
        return self.join(x for x in self.carrier
                         if self.le(self.parcomp[x, b], c))

    def exists(self, f) -> Element:
        return self.join(f(a) for a in self.carrier)

    # -- combinators --------------------------------------------------

    def s3(self) -> Element:
        return self.meet(self.arrow(self.tensor[a, b], self.tensor[b, a])
                         for a in self.carrier for b in self.carrier)

    def s4(self) -> Element:
        return self.meet(
            self.arrow(self.arrow(a, b),
                       self.arrow(self.arrow(b, c), self.arrow(a, c)))
            for a in self.carrier for b in self.carrier
            for c in self.carrier)

    def s5(self) -> Element:
        return self.meet(
            self.arrow(self.tensor[self.tensor[a, b], c],
                       self.tensor[a, self.tensor[b, c]])
            for a in self.carrier for b in self.carrier
            for c in self.carrier)

    def s6(self) -> Element:
        return self.meet(self.arrow(a, self.tensor[self.unit, a])
                         for a in self.carrier)

    def s7(self) -> Element:
        return self.meet(self.arrow(self.tensor[self.unit, a], a)
                         for a in self.carrier)

    def combinators(self) -> dict[str, Element]:
        return {"S3": self.s3(), "S4": self.s4(), "S5": self.s5(),
                "S6": self.s6(), "S7": self.s7()}

    # -- Honda-Yoshida combinators by adjunction (window-restricted) --

    def m(self, a: int, x: int) -> Element:
        try:
            return self.m_table[a, x]
        except KeyError:
            raise ModelError(f"M({a},{x}) is not defined") from None

    def hy(self) -> dict[str, dict[tuple[int, ...], Element]]:
        if self.parcomp is None or not self.m_table:
            raise ModelError("Honda-Yoshida combinators need par and M")
        w = self.window
        out: dict[str, dict[tuple[int, ...], Element]] = {
            "K": {}, "F": {}, "Bl": {}, "Br": {}, "D": {}, "S": {}}
        for a in w:
            out["K"][a,] = self.meet(self.rhd(self.m(a, x), self.unit)
                                     for x in w)
            for b in w:
                out["F"][a, b] = self.meet(
                    self.rhd(self.m(a, x), self.m(b, x)) for x in w)
        for a in w:
            for b in w:
                out["Bl"][a, b] = self.meet(
                    self.rhd(self.m(a, x), out["F"][x, b]) for x in w)
                out["Br"][a, b] = self.meet(
                    self.rhd(self.m(a, x), out["F"][b, x]) for x in w)
                for c in w:
                    out["D"][a, b, c] = self.meet(
                        self.rhd(self.m(a, x),
                                 self.parcomp[self.m(b, x), self.m(c, x)])
                        for x in w)
                    out["S"][a, b, c] = self.meet(
                        self.rhd(self.m(a, x), out["F"][b, c]) for x in w)
        return out


# ---------------------------------------------------------------------------
# model files

_SECTIONS = ("carrier", "leq", "join", "tensor", "perp", "unit", "par",
             "window", "M", "separator")


def parse_model(text: str) -> FinModel:
    sections: dict[str, list[str]] = {}
    current: Optional[str] = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SECTIONS:
                raise ModelError(f"unknown section [{current}]")
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ModelError(f"content before any section: {line!r}")
        sections[current].append(line)

    def tokens(name: str) -> list[str]:
        out: list[str] = []
        for line in sections.get(name, []):
            out.extend(line.split())
        return out

    carrier = tuple(tokens("carrier"))
    if not carrier or len(set(carrier)) != len(carrier):
        raise ModelError("carrier must list distinct elements")
    elems = set(carrier)

    def check_elem(e: str, ctx: str) -> str:
        if e not in elems:
            raise ModelError(f"{ctx}: unknown element {e!r}")
        return e

    def binary_table(name: str) -> dict[tuple[Element, Element], Element]:
        table: dict[tuple[Element, Element], Element] = {}
        for line in sections.get(name, []):
            parts = line.split()
            if len(parts) != 4 or parts[2] != "->":
                raise ModelError(f"[{name}] rows look like `a b -> c`:"
                                 f" {line!r}")
            a, b, _, c = parts
            table[check_elem(a, name), check_elem(b, name)] = \
                check_elem(c, name)
        for a in carrier:
            for b in carrier:
                if (a, b) not in table:
                    raise ModelError(f"[{name}] is missing row for {a} {b}")
        return table

    leq: set[tuple[Element, Element]] = set()
    if "leq" in sections:
        for line in sections["leq"]:
            parts = line.split()
            if len(parts) != 3 or parts[1] != "<=":
                raise ModelError(f"[leq] rows look like `a <= b`: {line!r}")
            leq.add((check_elem(parts[0], "leq"), check_elem(parts[2], "leq")))
        for a in carrier:
            leq.add((a, a))
        changed = True
        while changed:  # transitive closure
            changed = False
            for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True

    join_table = binary_table("join") if "join" in sections else None
    if join_table is not None:
        derived = {(a, b) for a in carrier for b in carrier
                   if join_table[a, b] == b}
        if leq and frozenset(derived) != frozenset(leq):
            raise ModelError("[leq] and [join] disagree about the order")
        leq = derived
    if not leq:
        raise ModelError("model needs a [leq] or [join] section")

    perp_map: dict[Element, Element] = {}
    for line in sections.get("perp", []):
        parts = line.split()
        if len(parts) != 3 or parts[1] != "->":
            raise ModelError(f"[perp] rows look like `a -> b`: {line!r}")
        perp_map[check_elem(parts[0], "perp")] = check_elem(parts[2], "perp")
    if set(perp_map) != elems:
        raise ModelError("[perp] must cover the whole carrier")

    unit_tokens = tokens("unit")
    if len(unit_tokens) != 1:
        raise ModelError("[unit] must name exactly one element")
    unit = check_elem(unit_tokens[0], "unit")

    parcomp = binary_table("par") if "par" in sections else None

    window = tuple(int(t) for t in tokens("window"))
    m_table: dict[tuple[int, int], Element] = {}
    for line in sections.get("M", []):
        parts = line.split()
        if len(parts) != 4 or parts[2] != "->":
            raise ModelError(f"[M] rows look like `a x -> elem`: {line!r}")
        m_table[int(parts[0]), int(parts[1])] = check_elem(parts[3], "M")

    separator = frozenset(check_elem(t, "separator")
                          for t in tokens("separator"))

    model = FinModel(carrier=carrier, leq=frozenset(leq),
                     tensor=binary_table("tensor"), perp=perp_map, unit=unit,
                     parcomp=parcomp, window=window, m_table=m_table,
                     separator=separator)
    if join_table is not None:
        for a in carrier:
            for b in carrier:
                if model.join2(a, b) != join_table[a, b]:
                    raise ModelError(
                        f"[join] row {a} {b} -> {join_table[a, b]} is not "
                        f"the least upper bound")
    return model


# ---------------------------------------------------------------------------
# checkers


def _entry(report: Report, name: str, witness: Optional[str]) -> None:
    report.append((name, witness is None, witness or ""))


def passed(report: Report) -> bool:
    return all(ok for _, ok, _ in report)


def check_cs(m: FinModel) -> Report:
    report: Report = []
    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.le(a, b) and m.le(b, a) and a != b:
            w = f"antisymmetry fails on {a}, {b}"
            break
    _entry(report, "order-is-partial", w)

    w = None
    try:
        m.bottom()
        for a, b in itertools.product(m.carrier, repeat=2):
            m.join2(a, b)
    except ModelError as exc:
        w = str(exc)
    _entry(report, "all-joins-exist", w)
    if w is not None:
        return report

    w = None
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if m.le(a, b):
            if not m.le(m.tensor[a, c], m.tensor[b, c]) or \
                    not m.le(m.tensor[c, a], m.tensor[c, b]):
                w = f"tensor not monotone at {a} <= {b} with {c}"
                break
    _entry(report, "tensor-monotone", w)

    w = None
    bot = m.bottom()
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if m.tensor[a, m.join2(b, c)] != \
                m.join2(m.tensor[a, b], m.tensor[a, c]) or \
                m.tensor[m.join2(b, c), a] != \
                m.join2(m.tensor[b, a], m.tensor[c, a]):
            w = f"tensor/join distributivity fails at {a}, {b}, {c}"
            break
    else:
        for a in m.carrier:
            if m.tensor[a, bot] != bot or m.tensor[bot, a] != bot:
                w = f"tensor does not absorb the empty join at {a}"
                break
    _entry(report, "tensor-join-distributive", w)

    w = None
    for a in m.carrier:
        if m.perp[m.perp[a]] != a:
            w = f"perp not involutive at {a}"
            break
    _entry(report, "perp-involutive", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.le(a, b) and not m.le(m.perp[b], m.perp[a]):
            w = f"perp not antitone at {a} <= {b}"
            break
    _entry(report, "perp-antitone", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.perp[m.join2(a, b)] != m.meet([m.perp[a], m.perp[b]]):
            w = (f"perp(join({a},{b})) = {m.perp[m.join2(a, b)]} but "
                 f"meet of perps = {m.meet([m.perp[a], m.perp[b]])}")
            break
    else:
        if m.perp[bot] != m.top():
            w = "perp of bottom is not top"
    _entry(report, "perp-de-morgan", w)
    return report


def _check_separator_rules(m: FinModel, report: Report) -> None:
    combs = m.combinators()
    w = None
    for name, value in combs.items():
        if value not in m.separator:
            w = f"(ax): {name} = {value} is outside the separator"
            break
    _entry(report, "separator-ax", w)

    w = None
    for a in m.separator:
        for b in m.carrier:
            if m.le(a, b) and b not in m.separator:
                w = f"(upc): {a} <= {b} but {b} outside"
                break
        if w:
            break
    _entry(report, "separator-upc", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.arrow(a, b) in m.separator and a in m.separator and \
                b not in m.separator:
            w = f"(mp): {a} -> {b} and {a} inside but {b} outside"
            break
    _entry(report, "separator-mp", w)

    w = None
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if m.arrow(a, b) in m.separator and \
                m.arrow(m.tensor[a, c], m.tensor[b, c]) not in m.separator:
            w = f"(ctx) fails at {a}, {b}, {c}"
            break
    _entry(report, "separator-ctx", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.arrow(a, b) in m.separator and \
                m.arrow(m.perp[b], m.perp[a]) not in m.separator:
            w = f"(ctr) fails at {a}, {b}"
            break
    _entry(report, "separator-ctr", w)

    _entry(report, "separator-unit",
           None if m.unit in m.separator else "1 is outside the separator")


def _check_parcomp(m: FinModel, report: Report) -> None:
    if m.parcomp is None:
        _entry(report, "parcomp-present", "model has no [par] section")
        return
    p = m.parcomp
    w = None
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if p[p[a, b], c] != p[a, p[b, c]]:
            w = f"par not associative at {a}, {b}, {c}"
            break
    else:
        for a, b in itertools.product(m.carrier, repeat=2):
            if p[a, b] != p[b, a]:
                w = f"par not commutative at {a}, {b}"
                break
        else:
            for a in m.carrier:
                if p[a, m.unit] != a:
                    w = f"par unit fails at {a}"
                    break
    _entry(report, "parcomp-abelian-monoid", w)

    w = None
    n = len(m.carrier)
    subsets = (itertools.chain.from_iterable(
        itertools.combinations(m.carrier, k) for k in range(n + 1))
        if 2 ** n <= 4096 else
        (tuple(m.carrier[i] for i in range(n) if k >> i & 1)
         for k in range(0, 2 ** n, max(1, 2 ** n // 2048))))
    for subset in subsets:
        joined = m.join(subset)
        for a in m.carrier:
            rhs = m.join(p[b, a] for b in subset)
            if not m.le(p[joined, a], rhs):
                w = f"par/join compatibility fails for {subset} with {a}"
                break
        if w:
            break
    _entry(report, "parcomp-join-compatible", w)


def check_ca(m: FinModel) -> Report:
    report = check_cs(m)
    if not passed(report):
        return report
    _check_parcomp(m, report)
    _check_separator_rules(m, report)
    return report


def check_cpa(m: FinModel) -> Report:
    report = check_ca(m)
    if not passed(report):
        return report
    w = None
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if m.le(m.parcomp[a, b], c) != m.le(a, m.rhd(b, c)):
            w = f"rhd adjunction fails at {a}, {b}, {c}"
            break
    _entry(report, "rhd-adjunction", w)
    return report


def check_ccpa(m: FinModel) -> Report:
    report = check_cpa(m)
    if not passed(report):
        return report
    w = None
    if not m.window or not m.m_table:
        w = "model has no [window]/[M] sections"
    _entry(report, "m-present", w)
    if w:
        return report

    w = None
    seen: dict[Element, tuple[int, int]] = {}
    for a in m.window:
        for x in m.window:
            try:
                val = m.m(a, x)
            except ModelError as exc:
                w = str(exc)
                break
            if val in seen and seen[val] != (a, x):
                w = (f"M not injective on the window: M{seen[val]} = "
                     f"M({a},{x}) = {val}")
                break
            seen[val] = (a, x)
        if w:
            break
    _entry(report, "m-injective-on-window", w)
    if w:
        return report

    hy = m.hy()
    w = None
    for label, table in hy.items():
        for args, value in table.items():
            if value not in m.separator:
                w = f"{label}{args} = {value} is outside the separator"
                break
        if w:
            break
    _entry(report, "hy-in-separator", w)

    w = None
    for a in m.window:
        for x in m.window:
            if not m.le(m.parcomp[hy["K"][a,], m.m(a, x)], m.unit):
                w = f"K({a})|M({a},{x}) exceeds 1"
                break
            for b in m.window:
                if not m.le(m.parcomp[hy["F"][a, b], m.m(a, x)], m.m(b, x)):
                    w = f"F({a},{b})|M({a},{x}) exceeds M({b},{x})"
                    break
                if not m.le(m.parcomp[hy["Bl"][a, b], m.m(a, x)],
                            hy["F"][x, b]):
                    w = f"Bl({a},{b})|M({a},{x}) exceeds F({x},{b})"
                    break
                if not m.le(m.parcomp[hy["Br"][a, b], m.m(a, x)],
                            hy["F"][b, x]):
                    w = f"Br({a},{b})|M({a},{x}) exceeds F({b},{x})"
                    break
                for c in m.window:
                    if not m.le(
                            m.parcomp[hy["D"][a, b, c], m.m(a, x)],
                            m.parcomp[m.m(b, x), m.m(c, x)]):
                        w = f"D({a},{b},{c})|M({a},{x}) exceeds M|M"
                        break
                    if not m.le(m.parcomp[hy["S"][a, b, c], m.m(a, x)],
                                hy["F"][b, c]):
                        w = f"S({a},{b},{c})|M({a},{x}) exceeds F({b},{c})"
                        break
                if w:
                    break
            if w:
                break
        if w:
            break
    _entry(report, "hy-reduction-inequalities", w)
    return report


def check_derived_props(m: FinModel) -> Report:
    report: Report = []
    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.perp[m.meet([a, b])] != m.join2(m.perp[a], m.perp[b]):
            w = f"dual De Morgan fails at {a}, {b}"
            break
    _entry(report, "dual-de-morgan", w)

    w = None
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if m.arrow(a, m.meet([b, c])) != \
                m.meet([m.arrow(a, b), m.arrow(a, c)]):
            w = f"arrow/meet distributivity fails at {a}, {b}, {c}"
            break
    _entry(report, "arrow-meet-distributive", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.le(a, b):
            for g in m.carrier:
                if not m.le(m.parr(g, a), m.parr(g, b)) or \
                        not m.le(m.parr(a, g), m.parr(b, g)):
                    w = f"parr not monotone at {a} <= {b} with {g}"
                    break
            if w:
                break
            for g in m.carrier:
                if not m.le(m.arrow(g, a), m.arrow(g, b)) or \
                        not m.le(m.arrow(b, g), m.arrow(a, g)):
                    w = f"arrow variance fails at {a} <= {b} with {g}"
                    break
            if w:
                break
    _entry(report, "parr-arrow-monotonicity", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.arrow(a, b) != m.parr(m.perp[a], b):
            w = f"arrow is not perp-parr at {a}, {b}"
            break
    _entry(report, "arrow-as-parr", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if not m.le(m.star(m.arrow(a, b), a), b) or \
                not m.le(a, m.arrow(b, m.star(a, b))):
            w = f"star/arrow unit-counit fails at {a}, {b}"
            break
    _entry(report, "star-arrow-adjunction-pair", w)

    w = None
    for a, b in itertools.product(m.separator, repeat=2):
        if m.star(a, b) not in m.separator:
            w = f"separator not closed under star at {a}, {b}"
            break
    _entry(report, "separator-star-closed", w)

    w = None
    for a in m.carrier:
        if m.arrow(a, a) not in m.separator:
            w = f"{a} -> {a} is outside the separator"
            break
    _entry(report, "identity-in-separator", w)

    w = None
    for g, a, b in itertools.product(m.carrier, repeat=3):
        if not m.le(m.parr(g, a), m.parr(g, m.join2(a, b))):
            w = f"parr/join upcast fails at {g}, {a}, {b}"
            break
    _entry(report, "parr-join-upcast", w)

    w = None
    for a, b in itertools.product(m.carrier, repeat=2):
        if m.arrow(m.perp[m.tensor[a, b]], m.perp[m.tensor[b, a]]) \
                not in m.separator:
            w = f"perp-commutation realizer missing at {a}, {b}"
            break
    _entry(report, "tensor-perp-commutation", w)

    w = None
    for a, b, c in itertools.product(m.carrier, repeat=3):
        if m.arrow(m.tensor[m.parr(a, b), c], m.parr(a, m.tensor[b, c])) \
                not in m.separator:
            w = f"semi-distribution realizer missing at {a}, {b}, {c}"
            break
    _entry(report, "parr-tensor-semi-distribution", w)

    w = None
    for g, a, b, d in itertools.product(m.carrier, repeat=4):
        target = m.arrow(m.tensor[m.parr(g, a), m.parr(b, d)],
                         m.parr(g, m.parr(m.tensor[a, b], d)))
        if target not in m.separator:
            w = f"cut realizer missing at {g}, {a}, {b}, {d}"
            break
    _entry(report, "cut-scheme-in-separator", w)
    return report


def shipped_model_names() -> list[str]:
    root = resources.files("fusioncalc") / "models"
    return sorted(path.name[:-len(".model")] for path in root.iterdir()
                  if path.name.endswith(".model"))


def load_model(name: str) -> FinModel:
    """Load a shipped model by name, or any model file by path."""
    root = resources.files("fusioncalc") / "models"
    candidate = root / f"{name}.model"
    if candidate.is_file():
        return parse_model(candidate.read_text(encoding="utf-8"))
    with open(name, encoding="utf-8") as handle:
        return parse_model(handle.read())


def hom_compose(m: FinModel, s: Element, t: Element,
                a: Element, b: Element, c: Element) -> Element:
    if s not in m.separator or not m.le(s, m.arrow(a, b)):
        raise ModelError(f"{s} is not in Hom({a},{b})")
    if t not in m.separator or not m.le(t, m.arrow(b, c)):
        raise ModelError(f"{t} is not in Hom({b},{c})")
    out = m.star(m.star(m.s4(), s), t)
    if out not in m.separator or not m.le(out, m.arrow(a, c)):
        raise ModelError("composite escaped Hom; model is not a CA")
    return out
