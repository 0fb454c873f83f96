"""Folksonomy data model.

A folksonomy is the tripartite user-item-tag structure of a social tagging
system. The atomic event is a tag assignment (user, item, tag, timestamp);
all assignments of one user on one item form a post (a bookmark). Everything
downstream (similarity search, recommending, evaluation) reads the immutable
``Folksonomy`` built here.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import EmptyDatasetError


class Interner:
    """Bidirectional map between external string labels and dense integer ids.

    Ids are assigned 0..n-1 in first-seen order, so sparse vectors and
    neighbor arrays can index directly.
    """

    __slots__ = ("_by_label", "_labels")

    def __init__(self) -> None:
        self._by_label: Dict[str, int] = {}
        self._labels: List[str] = []

    def intern(self, label: str) -> int:
        ident = self._by_label.get(label)
        if ident is None:
            ident = len(self._labels)
            self._by_label[label] = ident
            self._labels.append(label)
        return ident

    def id_of(self, label: str) -> int:
        """Look up an existing label; raises KeyError for unknown labels."""
        return self._by_label[label]

    def label_of(self, ident: int) -> str:
        return self._labels[ident]

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._by_label


@dataclass
class Vocab:
    """The three interners a folksonomy resolves its ids against."""

    users: Interner = field(default_factory=Interner)
    items: Interner = field(default_factory=Interner)
    tags: Interner = field(default_factory=Interner)


@dataclass(frozen=True)
class TagAssignment:
    """One (user, item, tag, timestamp) event, with interned integer ids."""

    user: int
    item: int
    tag: int
    timestamp: int

    def __post_init__(self) -> None:
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp: {self.timestamp}")


@dataclass(frozen=True)
class Post:
    """All tag assignments of one user on one item, treated as one bookmark.

    ``tag_times`` holds one (tag, timestamp) entry per distinct tag, sorted by
    tag id; duplicates were resolved to the earliest use. The post timestamp
    is the earliest assignment time (the bookmark's creation).
    """

    user: int
    item: int
    timestamp: int
    tag_times: Tuple[Tuple[int, int], ...]

    @property
    def tags(self) -> Tuple[int, ...]:
        return tuple(t for t, _ in self.tag_times)


@dataclass(frozen=True)
class Stats:
    """Dataset size statistics: bookmarks, users, resources, tags, assignments."""

    bookmarks: int
    users: int
    resources: int
    tags: int
    assignments: int

    def line(self) -> str:
        return (
            f"B={self.bookmarks} U={self.users} R={self.resources} "
            f"T={self.tags} TAS={self.assignments}"
        )


class Folksonomy:
    """Immutable, indexed store of posts.

    Construct via :func:`build_folksonomy`. Safe for concurrent reads; never
    mutated after construction.
    """

    def __init__(self, posts: Sequence[Post], vocab: Vocab) -> None:
        self.posts: Tuple[Post, ...] = tuple(posts)
        self.vocab = vocab
        self._user_posts: Dict[int, Tuple[Post, ...]] = {}
        self._item_posts: Dict[int, Tuple[Post, ...]] = {}
        self._user_tag_counts: Dict[int, Dict[int, int]] = {}
        self._item_tag_counts: Dict[int, Dict[int, int]] = {}
        self._build_indexes()
        self._fingerprint: str | None = None

    def _build_indexes(self) -> None:
        user_posts: Dict[int, List[Post]] = {}
        item_posts: Dict[int, List[Post]] = {}
        for post in self.posts:
            user_posts.setdefault(post.user, []).append(post)
            item_posts.setdefault(post.item, []).append(post)
            utc = self._user_tag_counts.setdefault(post.user, {})
            itc = self._item_tag_counts.setdefault(post.item, {})
            for tag, _ in post.tag_times:
                utc[tag] = utc.get(tag, 0) + 1
                itc[tag] = itc.get(tag, 0) + 1
        self._user_posts = {u: tuple(ps) for u, ps in user_posts.items()}
        self._item_posts = {i: tuple(ps) for i, ps in item_posts.items()}

    # -- accessors ---------------------------------------------------------

    def users(self) -> List[int]:
        """Ids of users with at least one post, ascending."""
        return sorted(self._user_posts)

    def items(self) -> List[int]:
        return sorted(self._item_posts)

    def tags(self) -> List[int]:
        seen = set()
        for counts in self._user_tag_counts.values():
            seen.update(counts)
        return sorted(seen)

    def posts_of_user(self, user: int) -> Tuple[Post, ...]:
        return self._user_posts.get(user, ())

    def posts_of_item(self, item: int) -> Tuple[Post, ...]:
        return self._item_posts.get(item, ())

    def items_of_user(self, user: int) -> Tuple[int, ...]:
        """Items the user has bookmarked, ascending (posts are item-sorted)."""
        return tuple(p.item for p in self._user_posts.get(user, ()))

    def taggers_of_item(self, item: int) -> Tuple[int, ...]:
        """Users who bookmarked the item, ascending."""
        return tuple(sorted(p.user for p in self._item_posts.get(item, ())))

    def user_tag_counts(self, user: int) -> Mapping[int, int]:
        """tag -> number of the user's posts carrying that tag."""
        return self._user_tag_counts.get(user, {})

    def item_tag_counts(self, item: int) -> Mapping[int, int]:
        """tag -> number of posts on this item carrying that tag."""
        return self._item_tag_counts.get(item, {})

    def item_tags(self, item: int) -> frozenset:
        """All tags any user assigned to the item."""
        return frozenset(self._item_tag_counts.get(item, {}))

    def tag_use_times(self, user: int) -> Dict[int, List[int]]:
        """tag -> ascending timestamps of the user's uses of that tag."""
        uses: Dict[int, List[int]] = {}
        for post in self._user_posts.get(user, ()):
            for tag, ts in post.tag_times:
                uses.setdefault(tag, []).append(ts)
        for times in uses.values():
            times.sort()
        return uses

    def assignments(self) -> List[TagAssignment]:
        """Flatten posts back into deduplicated tag assignments."""
        out = []
        for post in self.posts:
            for tag, ts in post.tag_times:
                out.append(TagAssignment(post.user, post.item, tag, ts))
        return out

    def stats(self) -> Stats:
        return Stats(
            bookmarks=len(self.posts),
            users=len(self._user_posts),
            resources=len(self._item_posts),
            tags=len(self.tags()),
            assignments=sum(len(p.tag_times) for p in self.posts),
        )

    def fingerprint(self) -> str:
        """Stable content digest, independent of id assignment and input order.

        Hashes the label-level canonical row set, so two loads of the same
        data (even with rows shuffled, which permutes interned ids) agree.
        """
        if self._fingerprint is None:
            rows = []
            for post in self.posts:
                user = self.vocab.users.label_of(post.user)
                item = self.vocab.items.label_of(post.item)
                for tag, ts in post.tag_times:
                    rows.append(f"{user}\t{item}\t{self.vocab.tags.label_of(tag)}\t{ts}")
            rows.sort()
            digest = hashlib.sha256("\n".join(rows).encode("utf-8")).hexdigest()
            self._fingerprint = digest
        return self._fingerprint


def build_folksonomy(assignments: Iterable[TagAssignment], vocab: Vocab) -> Folksonomy:
    """Group tag assignments into posts and build the indexed store.

    Assignments sharing (user, item) merge into one post whose timestamp is
    the earliest among them. Duplicate (user, item, tag) rows collapse to the
    earliest use so re-imports cannot inflate frequency counts. The result
    does not depend on input order.
    """
    grouped: Dict[Tuple[int, int], Dict[int, int]] = {}
    for a in assignments:
        tag_times = grouped.setdefault((a.user, a.item), {})
        prev = tag_times.get(a.tag)
        if prev is None or a.timestamp < prev:
            tag_times[a.tag] = a.timestamp
    if not grouped:
        raise EmptyDatasetError("no tag assignments to build from")
    posts = []
    for (user, item), tag_times in sorted(grouped.items()):
        pairs = tuple(sorted(tag_times.items()))
        posts.append(Post(user, item, min(tag_times.values()), pairs))
    return Folksonomy(posts, vocab)


def fingerprint(folksonomy: Folksonomy) -> str:
    return folksonomy.fingerprint()
