"""Sparse vectors, cosine similarity and top-k user neighborhoods.

All user profiles (binary item rows, tag-frequency profiles, time-weighted
variants) are non-negative sparse vectors, so every cosine lands in [0, 1].
Neighborhood search goes through an inverted index over vector dimensions:
only users co-occurring with the target on at least one dimension are
touched, which is also exactly the set with nonzero similarity. The
brute-force all-pairs scan lives in the test suite as the oracle.

Float sums use math.fsum throughout, so results do not depend on the order
contributions happen to arrive in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from .errors import NoProfileError
from .model import Folksonomy

BINARY_ITEM = "binary-item"
TAG_PROFILE = "tag-profile"
PROFILE_KINDS = (BINARY_ITEM, TAG_PROFILE)


class SparseVector:
    """Immutable id -> weight map with strictly positive weights and a cached norm."""

    __slots__ = ("ids", "weights", "norm")

    def __init__(self, entries: Union[Mapping[int, float], Iterable[Tuple[int, float]]]) -> None:
        if isinstance(entries, Mapping):
            pairs = sorted(entries.items())
        else:
            pairs = sorted(entries)
        for _, w in pairs:
            if w <= 0.0:
                raise ValueError(f"sparse vector weights must be positive, got {w}")
        self.ids: Tuple[int, ...] = tuple(i for i, _ in pairs)
        self.weights: Tuple[float, ...] = tuple(w for _, w in pairs)
        self.norm: float = math.sqrt(math.fsum(w * w for w in self.weights))

    def __len__(self) -> int:
        return len(self.ids)

    def items(self) -> Iterable[Tuple[int, float]]:
        return zip(self.ids, self.weights)

    def get(self, ident: int, default: float = 0.0) -> float:
        lo, hi = 0, len(self.ids)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.ids[mid] < ident:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.ids) and self.ids[lo] == ident:
            return self.weights[lo]
        return default

    def dot(self, other: "SparseVector") -> float:
        a, b = self, other
        if len(a) > len(b):
            a, b = b, a
        terms = []
        for i, w in a.items():
            ow = b.get(i)
            if ow:
                terms.append(w * ow)
        return math.fsum(terms)


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine of two non-negative sparse vectors; 0.0 when either is empty."""
    if len(a) == 0 or len(b) == 0:
        return 0.0
    value = a.dot(b) / (a.norm * b.norm)
    return max(0.0, min(1.0, value))


@dataclass(frozen=True)
class Neighborhood:
    """At most k most similar users, similarity descending, user id breaking ties."""

    target: int
    neighbors: Tuple[Tuple[int, float], ...]


def binary_item_vector(train: Folksonomy, user: int) -> SparseVector:
    """Row of the binary user-item matrix: weight 1.0 per bookmarked item."""
    return SparseVector({item: 1.0 for item in train.items_of_user(user)})

def tag_profile_vector(train: Folksonomy, user: int) -> SparseVector:
    """Tag-frequency profile: weight = number of times the user applied the tag."""
    return SparseVector({t: float(c) for t, c in train.user_tag_counts(user).items()})

def item_tagger_vector(train: Folksonomy, item: int) -> SparseVector:
    """Column of the binary matrix: weight 1.0 per user who bookmarked the item."""
    return SparseVector({u: 1.0 for u in train.taggers_of_item(item)})


class UserIndex:
    """Inverted index over a fixed set of user vectors, for top-k queries.

    Immutable after construction; queries for different users are safe to run
    concurrently.
    """

    def __init__(self, vectors: Mapping[int, SparseVector]) -> None:
        self._vectors: Dict[int, SparseVector] = dict(vectors)
        postings: Dict[int, List[Tuple[int, float]]] = {}
        for user in sorted(self._vectors):
            for dim, w in self._vectors[user].items():
                postings.setdefault(dim, []).append((user, w))
        self._postings = {dim: tuple(entry) for dim, entry in postings.items()}

    def vector(self, user: int) -> SparseVector:
        return self._vectors[user]

    def __contains__(self, user: int) -> bool:
        return user in self._vectors

    def top_k(self, user: int, k: int) -> Neighborhood:
        """The k most cosine-similar users, zero-similarity users excluded.

        Raises NoProfileError when the target has no (or an empty) vector;
        callers typically skip such users, which feeds the coverage metric.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        vec = self._vectors.get(user)
        if vec is None or len(vec) == 0:
            raise NoProfileError(f"user {user} has no profile to search neighbors for")
        contributions: Dict[int, List[float]] = {}
        for dim, w in vec.items():
            for other, ow in self._postings.get(dim, ()):
                if other != user:
                    contributions.setdefault(other, []).append(w * ow)
        scored = []
        for other in sorted(contributions):
            sim = math.fsum(contributions[other]) / (vec.norm * self._vectors[other].norm)
            sim = min(1.0, sim)
            if sim > 0.0:
                scored.append((other, sim))
        scored.sort(key=lambda entry: (-entry[1], entry[0]))
        return Neighborhood(target=user, neighbors=tuple(scored[:k]))


def build_user_vectors(train: Folksonomy, profile_kind: str) -> Dict[int, SparseVector]:
    if profile_kind == BINARY_ITEM:
        return {u: binary_item_vector(train, u) for u in train.users()}
    if profile_kind == TAG_PROFILE:
        return {u: tag_profile_vector(train, u) for u in train.users()}
    raise ValueError(f"unknown profile kind: {profile_kind!r}")


def top_k_neighbors(train: Folksonomy, user: int, k: int, profile_kind: str = BINARY_ITEM) -> Neighborhood:
    """One-shot neighborhood query; batch callers should build a UserIndex once."""
    return UserIndex(build_user_vectors(train, profile_kind)).top_k(user, k)
