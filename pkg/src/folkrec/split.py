"""Chronological per-user train/test partitioning.

For every user the bookmarks are sorted in time order and the most recent
fraction is held out for testing, simulating prediction of future bookmarking
behavior from past behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet

from .errors import EmptyDatasetError
from .ingest import write_snapshot
from .model import Folksonomy, TagAssignment, build_folksonomy


@dataclass
class SplitResult:
    """Train folksonomy, held-out items per user, and per-user reference times.

    ``t_ref[u]`` is one second past the user's latest training timestamp, so
    every training recency is strictly positive and scoring happens "at the
    moment after the last observed action".
    """

    train: Folksonomy
    test: Dict[int, FrozenSet[int]]
    t_ref: Dict[int, int]


def chronological_split(folksonomy: Folksonomy, test_fraction: float = 0.2) -> SplitResult:
    """Hold out each user's most recent bookmarks.

    A user with n >= 2 posts contributes max(1, floor(test_fraction * n))
    most recent posts to the test set; a user with a single post goes to
    train only, since an empty training profile makes every personalized
    algorithm undefined. Timestamp ties break by item id ascending (the
    smaller id counts as older).
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    train_assignments = []
    test: Dict[int, FrozenSet[int]] = {}
    t_ref: Dict[int, int] = {}
    for user in folksonomy.users():
        posts = sorted(folksonomy.posts_of_user(user), key=lambda p: (p.timestamp, p.item))
        n = len(posts)
        n_test = max(1, math.floor(round(test_fraction * n, 9))) if n >= 2 else 0
        train_posts = posts[: n - n_test]
        if n_test:
            test[user] = frozenset(p.item for p in posts[n - n_test :])
        last_use = 0
        for post in train_posts:
            for tag, ts in post.tag_times:
                train_assignments.append(TagAssignment(user, post.item, tag, ts))
                last_use = max(last_use, ts)
        # over assignment times, not post times: a post carries its earliest
        # time, and recencies must stay strictly positive for every tag use
        t_ref[user] = last_use + 1
    if not train_assignments:
        raise EmptyDatasetError("no training posts after splitting")
    train = build_folksonomy(train_assignments, folksonomy.vocab)
    return SplitResult(train=train, test=test, t_ref=t_ref)


def write_split(split: SplitResult, out_dir: str | Path) -> None:
    """Emit train snapshot, `user item` test pairs, and the t_ref table."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_snapshot(split.train, out / "train.tsv")
    vocab = split.train.vocab
    pair_rows = []
    for user, items in split.test.items():
        user_label = vocab.users.label_of(user)
        for item in items:
            pair_rows.append(f"{user_label}\t{vocab.items.label_of(item)}")
    pair_rows.sort()
    with open(out / "test.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# held-out (user, item) pairs\n")
        for row in pair_rows:
            fh.write(row + "\n")
    ref_rows = sorted(
        (vocab.users.label_of(user), ts) for user, ts in split.t_ref.items()
    )
    with open(out / "t_ref.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# per-user reference timestamp (seconds since epoch)\n")
        for label, ts in ref_rows:
            fh.write(f"{label}\t{ts}\n")
