"""Fuzzy query resolution over character 3-gram multisets.

Strings are normalized (case-fold, NFC, trim, inner whitespace collapsed to
single spaces) and decomposed into a multiset of character trigrams; inputs
shorter than three characters contribute a single pseudo-gram equal to the
whole normalized string. Similarity between two profiles is the generalized
Jaccard ratio sum(min(Q_i, M_i)) / sum(max(Q_i, M_i)) over gram counts,
which tolerates typos better than exact lookup.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .normalization import EntityClass

DEFAULT_MIN_SIMILARITY = 0.30

_WHITESPACE = re.compile(r"\s+")


def normalize_query(s: str) -> str:
    s = unicodedata.normalize("NFC", s.casefold())
    return _WHITESPACE.sub(" ", s).strip()


@dataclass(frozen=True)
class TrigramProfile:
    grams: Counter
    source_length: int


@dataclass(frozen=True)
class MatchResult:
    class_id: int
    matched_surface: str
    similarity: float


def trigram_profile(s: str) -> TrigramProfile:
    norm = normalize_query(s)
    if not norm:
        return TrigramProfile(Counter(), 0)
    if len(norm) < 3:
        return TrigramProfile(Counter({norm: 1}), len(norm))
    grams = Counter(norm[i:i + 3] for i in range(len(norm) - 2))
    return TrigramProfile(grams, len(norm))


def generalized_jaccard(q: TrigramProfile, m: TrigramProfile) -> float:
    """sum of elementwise minima over sum of elementwise maxima.

    1.0 exactly when the multisets are equal, 0.0 when their supports are
    disjoint or both profiles are empty.
    """
    union_total = sum((q.grams | m.grams).values())
    if union_total == 0:
        return 0.0
    return sum((q.grams & m.grams).values()) / union_total


class Matcher:
    """Resolves free-text queries against precomputed alias profiles.

    Every member surface and external ID string of every class is profiled
    once at construction; a trigram-to-alias map prunes scoring to aliases
    sharing at least one gram with the query, which cannot change results
    because disjoint-support candidates score exactly 0.
    """

    def __init__(self, classes: Sequence[EntityClass],
                 min_similarity: float = DEFAULT_MIN_SIMILARITY):
        self.min_similarity = min_similarity
        self._canonical = {cls.class_id: cls.canonical for cls in classes}
        self._aliases: list[tuple[int, str, TrigramProfile]] = []
        self._gram_index: dict[str, list[int]] = {}
        for cls in classes:
            for alias in list(cls.surface_counts) + sorted(cls.external_ids):
                profile = trigram_profile(alias)
                if not profile.grams:
                    continue
                slot = len(self._aliases)
                self._aliases.append((cls.class_id, alias, profile))
                for gram in profile.grams:
                    self._gram_index.setdefault(gram, []).append(slot)

    def resolve(self, query: str,
                min_similarity: float | None = None) -> list[MatchResult]:
        """Candidate classes above the similarity threshold, best first.

        Each class is scored by its best alias; ties between classes break
        on canonical surface. Results are invariant to query case and
        surrounding whitespace, and an exact alias match scores 1.0.
        """
        tau = self.min_similarity if min_similarity is None else min_similarity
        qp = trigram_profile(query)
        if not qp.grams:
            return []
        slots: set[int] = set()
        for gram in qp.grams:
            slots.update(self._gram_index.get(gram, ()))
        best: dict[int, tuple[float, str]] = {}
        for slot in slots:
            class_id, alias, profile = self._aliases[slot]
            sim = generalized_jaccard(qp, profile)
            if sim < tau:
                continue
            current = best.get(class_id)
            if (current is None or sim > current[0]
                    or (sim == current[0] and alias < current[1])):
                best[class_id] = (sim, alias)
        results = [MatchResult(class_id, alias, sim)
                   for class_id, (sim, alias) in best.items()]
        results.sort(key=lambda r: (-r.similarity, self._canonical[r.class_id]))
        return results


def resolve_query(query: str, matcher: Matcher,
                  min_similarity: float | None = None) -> list[MatchResult]:
    return matcher.resolve(query, min_similarity)
