"""Name arithmetic for the two dyadic injections and symbolic name sets.

Names are plain naturals.  A Word is a sequence of letters in {1,2},
applied left to right with the leftmost letter innermost: tag(n, "1.2")
= 2*(2n+1) = 4n+2.  A NameSet is a finite union of singletons and
residue classes (images of tag(., w)), optionally all of N, minus a
finite excluded set.  The excluded part has no surface syntax; it only
arises from complements, so that NameSets are closed under the boolean
operations the fusion calculus needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

Name = int
Word = tuple[int, ...]

EPSILON: Word = ()


def word(text: str) -> Word:
    """Parse a dotted word literal such as "1.2" (empty string = epsilon)."""
    text = text.strip()
    if not text:
        return EPSILON
    letters = tuple(int(part) for part in text.split("."))
    if any(letter not in (1, 2) for letter in letters):
        raise ValueError(f"word letters must be 1 or 2: {text!r}")
    return letters


def word_str(w: Word) -> str:
    return ".".join(str(letter) for letter in w)


def tag(n: Name, w: Word) -> Name:
    for letter in w:
        n = 2 * n + 1 if letter == 1 else 2 * n
    return n


def untag(x: Name, w: Word) -> Optional[Name]:
    """Inverse of tag: the n with tag(n, w) = x, if x lies in w's residue."""
    for letter in reversed(w):
        if letter == 1:
            if x % 2 == 0:
                return None
            x = (x - 1) // 2
        else:
            if x % 2 == 1:
                return None
            x = x // 2
    return x


def is_suffix(u: Word, w: Word) -> bool:
    """True iff u is a suffix of w (so residue(w) is inside residue(u))."""
    return len(u) <= len(w) and w[len(w) - len(u):] == u


def parse_name(text: str) -> Name:
    """A decimal natural or dotted sugar n.w, e.g. "1.1.2" = tag(1, "1.2")."""
    text = text.strip()
    if "." not in text:
        return int(text)
    head, rest = text.split(".", 1)
    return tag(int(head), word(rest))


@dataclass(frozen=True)
class NameSet:
    singletons: frozenset[Name] = frozenset()
    residues: frozenset[Word] = frozenset()
    universal: bool = False
    excluded: frozenset[Name] = frozenset()

    def __post_init__(self) -> None:
        # normalize: excluded names that would not be members anyway are
        # dropped, and members listed as singletons are never excluded
        base_sing = frozenset(self.singletons - self.excluded)
        excl = frozenset(
            x for x in self.excluded
            if self.universal or any(untag(x, w) is not None for w in self.residues)
        )
        object.__setattr__(self, "singletons", base_sing)
        object.__setattr__(self, "excluded", excl)
        if self.universal:
            object.__setattr__(self, "residues", frozenset())
            object.__setattr__(self, "singletons", frozenset())

    def member(self, x: Name) -> bool:
        if x in self.excluded:
            return False
        if self.universal or x in self.singletons:
            return True
        return any(untag(x, w) is not None for w in self.residues)

    def is_empty_like(self) -> bool:
        return not (self.universal or self.singletons or self.residues)

    def is_all(self) -> bool:
        return self.universal and not self.excluded

    def union(self, other: "NameSet") -> "NameSet":
        merged = NameSet(
            singletons=self.singletons | other.singletons,
            residues=self.residues | other.residues,
            universal=self.universal or other.universal,
        )
        excl = {x for x in self.excluded | other.excluded
                if not self.member(x) and not other.member(x)}
        return NameSet(merged.singletons, merged.residues, merged.universal,
                       frozenset(excl))

    def intersect(self, other: "NameSet") -> "NameSet":
        if self.universal and not self.excluded:
            return other
        if other.universal and not other.excluded:
            return self
        if self.universal:
            residues = set(other.residues)
        elif other.universal:
            residues = set(self.residues)
        else:
            residues = set()
            for u in self.residues:
                for v in other.residues:
                    if is_suffix(u, v):
                        residues.add(v)
                    elif is_suffix(v, u):
                        residues.add(u)
        base = NameSet(frozenset(), frozenset(residues),
                       self.universal and other.universal)
        singles = {x for x in self.singletons | other.singletons
                   if self.member(x) and other.member(x) and not base.member(x)}
        excl = {x for x in self.excluded | other.excluded
                if base.member(x) and not (self.member(x) and other.member(x))}
        return NameSet(frozenset(singles), base.residues, base.universal,
                       frozenset(excl))

    def complement(self) -> "NameSet":
        if self.universal:
            return NameSet(singletons=self.excluded)
        if not self.residues:
            return NameSet(universal=True, excluded=self.singletons,
                           singletons=self.excluded)
        depth = max(len(w) for w in self.residues)
        comp_residues = frozenset(
            w for w in _all_words(depth)
            if not any(is_suffix(u, w) for u in self.residues)
        )
        return NameSet(singletons=self.excluded, residues=comp_residues,
                       excluded=self.singletons)

    def __str__(self) -> str:
        if self.excluded:
            inner = NameSet(self.singletons, self.residues, self.universal)
            return f"({inner} minus {{{','.join(map(str, sorted(self.excluded)))}}})"
        if self.universal:
            return "all"
        parts = []
        if self.singletons:
            parts.append("{" + ",".join(str(x) for x in sorted(self.singletons)) + "}")
        for w in sorted(self.residues):
            parts.append("@" + word_str(w))
        return " + ".join(parts) if parts else "{}"


def _all_words(depth: int) -> Iterable[Word]:
    if depth == 0:
        yield EPSILON
        return
    def gen(k: int) -> Iterable[Word]:
        if k == 0:
            yield EPSILON
        else:
            for rest in gen(k - 1):
                yield (1,) + rest
                yield (2,) + rest
    yield from gen(depth)


EMPTY = NameSet()
ALL = NameSet(universal=True)


def finite(xs: Iterable[Name]) -> NameSet:
    return NameSet(singletons=frozenset(xs))


def residue(w: Word) -> NameSet:
    return NameSet(residues=frozenset([w]))


def index_set(w: Word, X: NameSet) -> NameSet:
    """The set of indices n with tag(n, w) in X, again as a NameSet."""
    singles = {n for x in X.singletons if (n := untag(x, w)) is not None}
    residues: set[Word] = set()
    universal = X.universal
    for r in X.residues:
        if is_suffix(r, w):
            universal = True
        elif is_suffix(w, r):
            residues.add(r[:len(r) - len(w)])
    excl = {n for x in X.excluded if (n := untag(x, w)) is not None}
    return NameSet(frozenset(singles), frozenset(residues), universal,
                   frozenset(excl))


def parse_nameset(text: str) -> NameSet:
    """Grammar: `{3,5}` | `@1` | `@1.2` | `all`, joined with `+`."""
    result = EMPTY
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty name-set component")
        if chunk == "all":
            part = ALL
        elif chunk.startswith("@"):
            part = residue(word(chunk[1:]))
        elif chunk.startswith("{") and chunk.endswith("}"):
            inner = chunk[1:-1].strip()
            names = [parse_name(p) for p in inner.split(",")] if inner else []
            part = finite(names)
        else:
            raise ValueError(f"bad name-set component: {chunk!r}")
        result = result.union(part)
    return result
