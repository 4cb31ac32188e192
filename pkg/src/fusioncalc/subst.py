"""Representable substitutions on names: a finite map plus word remaps.

A word remap (u -> v) sends tag(n, u) to tag(n, v) for every n and is
identity elsewhere.  The finite map takes precedence over remaps, which
is what lets restriction and canonical substitutions override a remap on
finitely many names (an entry x -> x pins the identity there).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .names import (EPSILON, Name, NameSet, Word, is_suffix, parse_name,
                    tag, untag, word, word_str)


class SubstitutionError(Exception):
    pass


@dataclass(frozen=True)
class Substitution:
    finite_map: tuple[tuple[Name, Name], ...] = ()
    word_remaps: frozenset[tuple[Word, Word]] = frozenset()

    def __post_init__(self) -> None:
        items = tuple(sorted(dict(self.finite_map).items()))
        object.__setattr__(self, "finite_map", items)
        remaps = frozenset((u, v) for u, v in self.word_remaps if u != v)
        for u, v in remaps:
            for u2, _ in remaps:
                if u != u2 and (is_suffix(u, u2) or is_suffix(u2, u)):
                    raise SubstitutionError(
                        f"overlapping remap domains {word_str(u)} / {word_str(u2)}")
        object.__setattr__(self, "word_remaps", remaps)

    def as_dict(self) -> dict[Name, Name]:
        return dict(self.finite_map)

    def apply(self, x: Name) -> Name:
        fm = dict(self.finite_map)
        if x in fm:
            return fm[x]
        for u, v in self.word_remaps:
            n = untag(x, u)
            if n is not None:
                return tag(n, v)
        return x

    def __call__(self, x: Name) -> Name:
        return self.apply(x)

    def is_identity_on(self, x: Name) -> bool:
        return self.apply(x) == x

    def support_hint(self) -> frozenset[Name]:
        """The finite-map keys; word remaps act beyond this set."""
        return frozenset(k for k, _ in self.finite_map)

    def __str__(self) -> str:
        fin = ", ".join(f"{k}:={v}" for k, v in self.finite_map)
        rem = ", ".join(f"{word_str(u)} -> {word_str(v)}"
                        for u, v in sorted(self.word_remaps))
        if rem:
            return "{" + fin + " ; " + rem + "}"
        return "{" + fin + "}"


IDENTITY = Substitution()


def finite_subst(mapping: Mapping[Name, Name]) -> Substitution:
    return Substitution(tuple(mapping.items()))


def remap_subst(remaps: Iterable[tuple[Word, Word]]) -> Substitution:
    return Substitution((), frozenset(remaps))


def _split_remap(pair: tuple[Word, Word]) -> list[tuple[Word, Word]]:
    u, v = pair
    return [((1,) + u, (1,) + v), ((2,) + u, (2,) + v)]


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """compose(sigma, tau) applies tau first: x |-> sigma(tau(x))."""
    fm: dict[Name, Name] = {}
    for x, y in tau.finite_map:
        fm[x] = sigma.apply(y)
    tau_dom_words = frozenset(u for u, _ in tau.word_remaps)
    # names that tau remaps by word into sigma's finite domain need
    # explicit entries, since the chained remap would miss the override
    for z, _ in sigma.finite_map:
        for u, v in tau.word_remaps:
            n = untag(z, v)
            if n is not None:
                x = tag(n, u)
                fm.setdefault(x, sigma.apply(z))
        if z not in dict(tau.finite_map) and not any(
                untag(z, u) is not None for u in tau_dom_words):
            fm.setdefault(z, sigma.apply(z))
    remaps: set[tuple[Word, Word]] = set()
    # chain tau's remaps through sigma's remaps, splitting when a remap
    # of sigma reaches deeper than the image word
    work = list(tau.word_remaps)
    guard = 0
    while work:
        guard += 1
        if guard > 4096:
            raise SubstitutionError("remap composition does not stabilize")
        u, v = work.pop()
        deeper = [su for su, _ in sigma.word_remaps
                  if is_suffix(v, su) and len(su) > len(v)]
        if deeper:
            work.extend(_split_remap((u, v)))
            continue
        image = v
        for su, sv in sigma.word_remaps:
            if is_suffix(su, v):
                image = v[:len(v) - len(su)] + sv
                break
        remaps.add((u, image))
    # sigma's remaps keep acting where tau is the identity; carve their
    # domains away from tau's remap domains
    work = list(sigma.word_remaps)
    guard = 0
    while work:
        guard += 1
        if guard > 4096:
            raise SubstitutionError("remap composition does not stabilize")
        su, sv = work.pop()
        if any(is_suffix(tu, su) for tu in tau_dom_words):
            continue  # fully inside tau's domain: already chained
        if any(is_suffix(su, tu) for tu in tau_dom_words):
            work.extend(_split_remap((su, sv)))
            continue
        remaps.add((su, sv))
    # finite-map keys of tau shadow any remap; identity entries pin names
    # sigma's remaps would otherwise move
    for x in dict(tau.finite_map):
        fm.setdefault(x, sigma.apply(tau.apply(x)))
    return Substitution(tuple(fm.items()), frozenset(remaps))


def restrict_away(sigma: Substitution, X: NameSet) -> Substitution:
    """Identity on X, sigma elsewhere."""
    fm = {x: y for x, y in sigma.finite_map if not X.member(x)}
    remaps: set[tuple[Word, Word]] = set()
    work = list(sigma.word_remaps)
    guard = 0
    while work:
        guard += 1
        if guard > 4096:
            raise SubstitutionError("restriction does not stabilize")
        u, v = work.pop()
        idx = _residue_vs_set(u, X)
        if idx == "inside":
            # excluded names fall outside X, so they keep their image
            for x in X.excluded:
                n = untag(x, u)
                if n is not None:
                    fm.setdefault(x, tag(n, v))
            continue
        if idx == "split":
            work.extend(_split_remap((u, v)))
            continue
        remaps.add((u, v))
        # finitely many singleton hits inside the kept domain are pinned
        for x in X.singletons:
            if untag(x, u) is not None:
                fm.setdefault(x, x)
    return Substitution(tuple(fm.items()), frozenset(remaps))


def _residue_vs_set(u: Word, X: NameSet) -> str:
    """Classify residue(u) against X's residue/universal part:
    'inside', 'outside' (only finite singleton hits possible), 'split'."""
    if X.universal:
        return "inside"
    if any(is_suffix(r, u) for r in X.residues):
        return "inside"
    if any(is_suffix(u, r) and len(r) > len(u) for r in X.residues):
        return "split"
    return "outside"


def equivalent_via(sigma: Substitution, tau: Substitution,
                   rho: Mapping[Name, Name], probe_bound: int = 32) -> bool:
    """Check sigma = rho^-1 . tau . rho on a sufficient probe set."""
    rho = dict(rho)
    inv = {v: k for k, v in rho.items()}
    if len(inv) != len(rho):
        raise SubstitutionError("rho is not a bijection on its support")

    def rho_of(x: Name) -> Name:
        return rho.get(x, x)

    def rho_inv(x: Name) -> Name:
        return inv.get(x, x)

    probes: set[Name] = set(dict(sigma.finite_map)) | set(dict(tau.finite_map))
    probes |= set(rho) | set(inv)
    for u, _ in sigma.word_remaps | tau.word_remaps:
        probes |= {tag(n, u) for n in range(probe_bound)}
    return all(sigma.apply(x) == rho_inv(tau.apply(rho_of(x))) for x in probes)


def parse_subst(text: str) -> Substitution:
    """Literal: `{0:=3, 1:=2 ; 1 -> 1.2}` (word remaps after `;`)."""
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"substitution literal must be braced: {text!r}")
    inner = text[1:-1]
    fin_part, _, rem_part = inner.partition(";")
    fm = {}
    for item in fin_part.split(","):
        item = item.strip()
        if not item:
            continue
        lhs, _, rhs = item.partition(":=")
        fm[parse_name(lhs)] = parse_name(rhs)
    remaps = set()
    for item in rem_part.split(","):
        item = item.strip()
        if not item:
            continue
        lhs, _, rhs = item.partition("->")
        remaps.add((word(lhs), word(rhs)))
    return Substitution(tuple(fm.items()), frozenset(remaps))
