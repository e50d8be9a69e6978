"""Entity normalization: merge mentions into equivalence classes.

Two mentions of the same entity type merge when they share at least one
external ID or when their case-folded, NFC-normalized surfaces are equal;
classes are the transitive closure of that relation. Chemicals and proteins
never share a class.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import EntityMention, EType


@dataclass
class EntityClass:
    class_id: int
    etype: EType
    surface_counts: dict[str, int]
    external_ids: frozenset[str]
    canonical: str


ClassAssignment = dict[str, int]  # mention_id -> class_id


def fold_surface(surface: str) -> str:
    """Normalization used for surface merging and alias lookup."""
    return unicodedata.normalize("NFC", surface.casefold())


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        px, py = self.find(x), self.find(y)
        if px == py:
            return
        if self.rank[px] < self.rank[py]:
            px, py = py, px
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1


def canonical_mention(cls: EntityClass) -> str:
    """Display surface of a class: most frequent, ties broken by the
    lexicographically smallest surface in Unicode scalar order."""
    top = max(cls.surface_counts.values())
    return min(s for s, n in cls.surface_counts.items() if n == top)


def build_equivalence_classes(
    mentions: Sequence[EntityMention],
) -> tuple[list[EntityClass], ClassAssignment]:
    """Partition mentions into entity classes.

    The partition is independent of input order: class ids are assigned by
    sorting classes on (entity type, canonical surface) and numbering from 0.
    """
    uf = _UnionFind(len(mentions))
    by_surface: dict[tuple[EType, str], int] = {}
    by_ext_id: dict[tuple[EType, str], int] = {}
    for i, mention in enumerate(mentions):
        skey = (mention.etype, fold_surface(mention.surface))
        if skey in by_surface:
            uf.union(i, by_surface[skey])
        else:
            by_surface[skey] = i
        for ext in mention.external_ids:
            ikey = (mention.etype, ext)
            if ikey in by_ext_id:
                uf.union(i, by_ext_id[ikey])
            else:
                by_ext_id[ikey] = i

    groups: dict[int, list[EntityMention]] = {}
    for i, mention in enumerate(mentions):
        groups.setdefault(uf.find(i), []).append(mention)

    classes: list[EntityClass] = []
    members: list[list[EntityMention]] = []
    for group in groups.values():
        counts = Counter(m.surface for m in group)
        ids = frozenset(x for m in group for x in m.external_ids)
        cls = EntityClass(
            class_id=-1, etype=group[0].etype,
            surface_counts=dict(counts), external_ids=ids, canonical="",
        )
        cls.canonical = canonical_mention(cls)
        classes.append(cls)
        members.append(group)

    order = sorted(range(len(classes)),
                   key=lambda i: (classes[i].etype.value, classes[i].canonical))
    assignment: ClassAssignment = {}
    reordered: list[EntityClass] = []
    for new_id, old in enumerate(order):
        cls = classes[old]
        cls.class_id = new_id
        reordered.append(cls)
        for mention in members[old]:
            assignment[mention.mention_id] = new_id
    return reordered, assignment


def lookup_by_alias(classes: Sequence[EntityClass], alias: str) -> int | None:
    """Exact case-folded lookup against member surfaces and external IDs.

    Returns the smallest matching class id (a Chemical and a Protein class
    may legitimately share a surface), or None when nothing matches. Linear
    in the number of alias strings; the fuzzy matcher maintains its own
    precomputed structures for the service path.
    """
    folded = fold_surface(alias)
    hits = [
        cls.class_id
        for cls in classes
        if any(fold_surface(s) == folded for s in cls.surface_counts)
        or any(fold_surface(x) == folded for x in cls.external_ids)
    ]
    return min(hits) if hits else None
