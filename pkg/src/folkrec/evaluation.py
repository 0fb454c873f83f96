"""Offline evaluation: ranking metrics, the experiment runner, report writers.

The protocol is fixed: split chronologically per user, hide the newest fifth
of each profile, recommend up to 20 items from training data only, and read
every per-k metric off prefixes of that one list. Users the algorithm cannot
serve stay in the denominator with all-zero metrics (the coverage column
reports how many were served); `count_unserved=False` switches to averaging
over served users only.

All averages use math.fsum over user ids in sorted order, so reported
numbers are bit-identical across reruns and worker counts.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, IO, Iterable, List, Mapping, Sequence, Set, Tuple

from .errors import ConfigError, EmptyDatasetError
from .model import Folksonomy, fingerprint
from .recommenders import RecommenderConfig, build_recommender
from .similarity import SparseVector, cosine
from .split import SplitResult, chronological_split

K_MAX = 20


def dcg(relevances: Sequence[int]) -> float:
    return math.fsum(rel / math.log2(position + 1) for position, rel in enumerate(relevances, start=1))


def ndcg_at_k(recommended: Sequence[int], relevant: Set[int], k: int) -> float:
    """Binary nDCG: gains are 1 for hits, ideal list packs hits at the top."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not relevant:
        return 0.0
    top = recommended[:k]
    ideal = dcg([1] * min(len(relevant), k))
    return dcg([1 if item in relevant else 0 for item in top]) / ideal


def map_at_k(recommended: Sequence[int], relevant: Set[int], k: int) -> float:
    """Average precision at k for one ranking.

    Precision is accumulated at each hit position and divided by
    min(|relevant|, k), the best hit count any length-k list can reach.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not relevant:
        return 0.0
    hits = 0
    precisions = []
    for position, item in enumerate(recommended[:k], start=1):
        if item in relevant:
            hits += 1
            precisions.append(hits / position)
    return math.fsum(precisions) / min(len(relevant), k)


def recall_at_k(recommended: Sequence[int], relevant: Set[int], k: int) -> float:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not relevant:
        return 0.0
    hit_count = sum(1 for item in recommended[:k] if item in relevant)
    return hit_count / len(relevant)


def user_coverage(results: Mapping[int, Sequence[int]], evaluable_users: Iterable[int]) -> float:
    """Fraction of evaluable users who received at least one recommendation."""
    users = sorted(set(evaluable_users))
    if not users:
        return 0.0
    served = sum(1 for user in users if results.get(user))
    return served / len(users)


def diversity(recommended: Sequence[int], item_vectors: Mapping[int, SparseVector]) -> float:
    """Mean pairwise tag-vector cosine distance within one ranked list.

    Lists with fewer than two items have no pairs and score 0. Items without
    a tag vector count as maximally distant from everything (cosine 0).
    """
    m = len(recommended)
    if m < 2:
        return 0.0
    empty = SparseVector({})
    distances = []
    for a in range(m):
        va = item_vectors.get(recommended[a], empty)
        for b in range(a + 1, m):
            distances.append(1.0 - cosine(va, item_vectors.get(recommended[b], empty)))
    return math.fsum(distances) / (m * (m - 1) / 2)


@dataclass(frozen=True)
class UserResult:
    user: int
    served: bool
    recommended: Tuple[int, ...]
    ndcg: Tuple[float, ...]  # index j holds the value at k=j+1
    ap: Tuple[float, ...]
    recall: Tuple[float, ...]
    diversity_at_max: float


@dataclass(frozen=True)
class AlgorithmReport:
    algorithm: str
    users_evaluated: int
    users_served: int
    ndcg: Tuple[float, ...]
    map: Tuple[float, ...]
    recall: Tuple[float, ...]
    diversity: float

    @property
    def coverage(self) -> float:
        return self.users_served / self.users_evaluated if self.users_evaluated else 0.0

    def at(self, metric: str, k: int) -> float:
        series = {"ndcg": self.ndcg, "map": self.map, "recall": self.recall}[metric]
        return series[k - 1]


@dataclass(frozen=True)
class EvalReport:
    dataset_fingerprint: str
    config_hash: str
    config_echo: Dict[str, object]
    algorithms: Tuple[AlgorithmReport, ...]

    def by_algorithm(self, tag: str) -> AlgorithmReport:
        for report in self.algorithms:
            if report.algorithm == tag:
                return report
        raise KeyError(tag)


def _evaluate_user(
    recommender,
    train: Folksonomy,
    user: int,
    relevant: Set[int],
    item_vectors: Mapping[int, SparseVector],
) -> UserResult:
    ranked = recommender.recommend(user, K_MAX)
    recommended = ranked.items()
    owned = set(train.items_of_user(user))
    for item in recommended:
        # a recommendation of an already-bookmarked item means test data
        # leaked into training or filtering broke; fail loudly, not quietly
        if item in owned:
            raise AssertionError(f"item {item} recommended to user {user} who already has it in training data")
    if len(set(recommended)) != len(recommended):
        raise AssertionError(f"duplicate items in recommendations for user {user}")
    served = bool(recommended)
    if not served:
        zeros = tuple(0.0 for _ in range(K_MAX))
        return UserResult(user, False, (), zeros, zeros, zeros, 0.0)
    return UserResult(
        user=user,
        served=True,
        recommended=recommended,
        ndcg=tuple(ndcg_at_k(recommended, relevant, k) for k in range(1, K_MAX + 1)),
        ap=tuple(map_at_k(recommended, relevant, k) for k in range(1, K_MAX + 1)),
        recall=tuple(recall_at_k(recommended, relevant, k) for k in range(1, K_MAX + 1)),
        diversity_at_max=diversity(recommended, item_vectors),
    )


_WORKER_STATE: Dict[str, object] = {}


def item_tag_vectors(train: Folksonomy) -> Dict[int, SparseVector]:
    """Aggregated tag-count vector per item; the representation diversity compares."""
    return {
        item: SparseVector({t: float(c) for t, c in train.item_tag_counts(item).items()})
        for item in train.items()
    }


def _worker_init(train: Folksonomy, t_ref: Dict[int, int], config: RecommenderConfig) -> None:
    _WORKER_STATE["recommender"] = build_recommender(train, t_ref, config)
    _WORKER_STATE["train"] = train
    _WORKER_STATE["vectors"] = item_tag_vectors(train)


def _worker_eval(batch: List[Tuple[int, Set[int]]]) -> List[UserResult]:
    recommender = _WORKER_STATE["recommender"]
    train = _WORKER_STATE["train"]
    vectors = _WORKER_STATE["vectors"]
    return [_evaluate_user(recommender, train, user, relevant, vectors) for user, relevant in batch]


def evaluate_algorithm(
    split: SplitResult,
    config: RecommenderConfig,
    workers: int = 1,
    count_unserved: bool = True,
) -> AlgorithmReport:
    """Run one algorithm over every test user and average the metric curves."""
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    test_users = sorted(split.test)
    if not test_users:
        raise EmptyDatasetError("split has no users with held-out items to evaluate")
    if workers == 1 or len(test_users) < 4:
        recommender = build_recommender(split.train, split.t_ref, config)
        vectors = item_tag_vectors(split.train)
        results = [
            _evaluate_user(recommender, split.train, user, split.test[user], vectors)
            for user in test_users
        ]
    else:
        batches: List[List[Tuple[int, Set[int]]]] = [[] for _ in range(workers)]
        for position, user in enumerate(test_users):
            batches[position % workers].append((user, split.test[user]))
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_worker_init,
            initargs=(split.train, split.t_ref, config),
        ) as pool:
            chunks = list(pool.map(_worker_eval, [b for b in batches if b]))
        merged = {result.user: result for chunk in chunks for result in chunk}
        results = [merged[user] for user in test_users]
    return _aggregate(config.algorithm, results, count_unserved)


def _aggregate(tag: str, results: List[UserResult], count_unserved: bool) -> AlgorithmReport:
    pool = results if count_unserved else [r for r in results if r.served]
    denominator = len(pool)
    served = [r for r in results if r.served]
    # diversity needs at least one pair, so its mean runs over the users
    # with >= 2 recommendations regardless of the accuracy denominator
    div_pool = [r for r in results if len(r.recommended) >= 2]
    div = math.fsum(r.diversity_at_max for r in div_pool) / len(div_pool) if div_pool else 0.0
    if denominator == 0:
        zeros = tuple(0.0 for _ in range(K_MAX))
        return AlgorithmReport(tag, len(results), len(served), zeros, zeros, zeros, div)

    def mean_curve(pick) -> Tuple[float, ...]:
        return tuple(
            math.fsum(pick(r)[j] for r in pool) / denominator
            for j in range(K_MAX)
        )

    return AlgorithmReport(
        algorithm=tag,
        users_evaluated=len(results),
        users_served=len(served),
        ndcg=mean_curve(lambda r: r.ndcg),
        map=mean_curve(lambda r: r.ap),
        recall=mean_curve(lambda r: r.recall),
        diversity=div,
    )


def _config_echo(
    configs: Sequence[RecommenderConfig],
    split_fraction: float,
    seed: int,
    count_unserved: bool,
) -> Dict[str, object]:
    return {
        "split_fraction": split_fraction,
        "seed": seed,
        "count_unserved": count_unserved,
        "k_max": K_MAX,
        "algorithms": [
            {
                "algorithm": c.algorithm,
                "k": c.k,
                "n": c.n,
                "bll_d": c.bll.d,
                "t0_seconds": c.t0_seconds,
                "floor": c.floor,
            }
            for c in configs
        ],
    }


def config_hash(echo: Mapping[str, object]) -> str:
    """Hash of everything that can change reported numbers.

    Worker counts and file paths are deliberately left out: they must not
    affect output, and the hash encodes that promise.
    """
    return hashlib.sha256(json.dumps(echo, sort_keys=True).encode("utf-8")).hexdigest()


def run_experiment(
    folksonomy: Folksonomy,
    configs: Sequence[RecommenderConfig],
    split_fraction: float = 0.2,
    seed: int = 0,
    workers: int = 1,
    count_unserved: bool = True,
) -> EvalReport:
    """Split once, evaluate every configured algorithm on the same split.

    The seed does not drive anything here (the split is chronological); it
    is echoed into the report metadata so a run records the sampling seed
    its input dataset was built with.
    """
    if not configs:
        raise ConfigError("at least one algorithm config is required")
    tags = [c.algorithm for c in configs]
    if len(set(tags)) != len(tags):
        raise ConfigError(f"duplicate algorithm tags in experiment: {tags}")
    split = chronological_split(folksonomy, split_fraction)
    echo = _config_echo(configs, split_fraction, seed, count_unserved)
    reports = tuple(
        evaluate_algorithm(split, config, workers=workers, count_unserved=count_unserved)
        for config in configs
    )
    return EvalReport(
        dataset_fingerprint=fingerprint(folksonomy),
        config_hash=config_hash(echo),
        config_echo=echo,
        algorithms=reports,
    )


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def write_report_txt(report: EvalReport, stream: IO[str]) -> None:
    """Human-readable summary table at the largest list length."""
    stream.write(f"dataset fingerprint: {report.dataset_fingerprint}\n")
    stream.write(f"config hash:         {report.config_hash}\n")
    stream.write("\n")
    header = f"{'algorithm':<10} {'nDCG@20':>10} {'MAP@20':>10} {'Recall@20':>10} {'Diversity':>10} {'Coverage':>9}\n"
    stream.write(header)
    stream.write("-" * (len(header) - 1) + "\n")
    for algo in report.algorithms:
        stream.write(
            f"{algo.algorithm:<10} "
            f"{_fmt(algo.ndcg[K_MAX - 1]):>10} "
            f"{_fmt(algo.map[K_MAX - 1]):>10} "
            f"{_fmt(algo.recall[K_MAX - 1]):>10} "
            f"{_fmt(algo.diversity):>10} "
            f"{100.0 * algo.coverage:>8.2f}%\n"
        )


def write_metrics_csv(report: EvalReport, stream: IO[str]) -> None:
    """Full per-k curves, one row per (algorithm, k)."""
    stream.write(f"# dataset_fingerprint={report.dataset_fingerprint}\n")
    stream.write(f"# config_hash={report.config_hash}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["algorithm", "k", "ndcg", "map", "recall"])
    for algo in report.algorithms:
        for k in range(1, K_MAX + 1):
            writer.writerow([algo.algorithm, k, _fmt(algo.ndcg[k - 1]), _fmt(algo.map[k - 1]), _fmt(algo.recall[k - 1])])


def write_summary_json(report: EvalReport, stream: IO[str]) -> None:
    # metric floats are rounded to 12 decimals: comfortably beyond reporting
    # precision, comfortably above the last-bit noise of equivalent
    # summation orders, so equivalent implementations emit identical bytes
    r12 = lambda v: round(v, 12)
    payload = {
        "dataset_fingerprint": report.dataset_fingerprint,
        "config_hash": report.config_hash,
        "config": report.config_echo,
        "algorithms": {
            algo.algorithm: {
                "users_evaluated": algo.users_evaluated,
                "users_served": algo.users_served,
                "coverage": r12(algo.coverage),
                "ndcg": [r12(v) for v in algo.ndcg],
                "map": [r12(v) for v in algo.map],
                "recall": [r12(v) for v in algo.recall],
                "diversity": r12(algo.diversity),
            }
            for algo in report.algorithms
        },
    }
    json.dump(payload, stream, sort_keys=True, indent=2)
    stream.write("\n")


def write_reports(report: EvalReport, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8", newline="\n") as handle:
        write_report_txt(report, handle)
    with open(os.path.join(out_dir, "metrics.csv"), "w", encoding="utf-8", newline="\n") as handle:
        write_metrics_csv(report, handle)
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8", newline="\n") as handle:
        write_summary_json(report, handle)
