"""Hierarchical code partitioning: Hamming-metric k-means over the codebook,
per-node centroid weights, observation-driven candidate pruning, and the
analytic complexity model.

The tree is built once per coherence block from the active spatial code and
is immutable afterwards; pruning walks it per observation keeping the q_l
best-scoring nodes per level and returns the union of surviving leaf member
sets as a sorted candidate index array.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .spatial_code import SpatialCode

KMEANS_MAX_ITER = 100


@dataclass(frozen=True)
class PartitionParams:
    """Per-level children counts k and survivor counts q."""

    k: tuple
    q: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        object.__setattr__(self, "q", tuple(int(v) for v in self.q))

    @property
    def levels(self) -> int:
        return len(self.k)

    def label(self) -> str:
        """Comma-free form safe for CSV fields, e.g. k8x8-q4x16."""
        return "k" + "x".join(map(str, self.k)) + "-q" + "x".join(map(str, self.q))


@dataclass(frozen=True)
class ParamViolation:
    level: int
    message: str


def validate_params(params: PartitionParams) -> list:
    """Empty list when valid, else one violation per offending level."""
    violations = []
    if len(params.k) != len(params.q) or len(params.k) == 0:
        violations.append(
            ParamViolation(0, f"k and q must be equal-length and nonempty, got {params.k} / {params.q}")
        )
        return violations
    prev_q = 1
    for lvl, (k, q) in enumerate(zip(params.k, params.q), start=1):
        if k < 1 or q < 1:
            violations.append(ParamViolation(lvl, f"k_{lvl}={k}, q_{lvl}={q} must be >= 1"))
            continue
        if q > prev_q * k:
            violations.append(
                ParamViolation(lvl, f"q_{lvl}={q} exceeds q_{lvl - 1}*k_{lvl}={prev_q * k}")
            )
        prev_q = q
    return violations


def require_valid_params(params: PartitionParams) -> None:
    violations = validate_params(params)
    if violations:
        detail = "; ".join(f"level {v.level}: {v.message}" for v in violations)
        raise ConfigurationError(f"invalid partition parameters: {detail}")


@dataclass
class KmeansResult:
    clusters: list  # member index arrays (absolute codeword indices)
    centroids: np.ndarray  # (n_clusters, N) uint8
    objective: list  # within-cluster Hamming distance sum per iteration


def _pairwise_hamming(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Mismatch counts between binary row sets, via the dot-product identity."""
    p = points.astype(np.float64)
    c = centroids.astype(np.float64)
    return p.sum(axis=1)[:, None] + c.sum(axis=1)[None, :] - 2.0 * (p @ c.T)


def _seed_centroids(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Distance-weighted (farthest-point flavored) seeding under Hamming."""
    n = len(points)
    seeds = [int(rng.integers(n))]
    d_min = _pairwise_hamming(points, points[seeds[-1]][None, :])[:, 0]
    while len(seeds) < k:
        total = d_min.sum()
        if total == 0:
            seeds.append(int(rng.integers(n)))
        else:
            seeds.append(int(rng.choice(n, p=d_min / total)))
        d_min = np.minimum(d_min, _pairwise_hamming(points, points[seeds[-1]][None, :])[:, 0])
    return points[seeds].copy()


def kmeans_hamming(
    members: np.ndarray,
    code: SpatialCode,
    k: int,
    rng: np.random.Generator,
    max_iter: int = KMEANS_MAX_ITER,
) -> KmeansResult:
    """Lloyd iterations with Hamming assignment and majority-vote centroids.

    Deterministic given the rng: assignment ties go to the lowest centroid
    index, coordinate majority ties resolve to 0, and empty clusters are
    re-seeded with the member farthest from its current centroid.  Surplus
    clusters (k > number of members) are dropped from the result.
    """
    members = np.asarray(members, dtype=np.int64)
    if members.size == 0:
        raise ValueError("members must be nonempty")
    points = code.codewords[members]
    n = len(members)
    k_eff = min(k, n)
    centroids = _seed_centroids(points, k_eff, rng)

    assign = np.full(n, -1)
    objective = []
    for _ in range(max_iter):
        dist = _pairwise_hamming(points, centroids)
        new_assign = np.argmin(dist, axis=1)
        own = dist[np.arange(n), new_assign].copy()
        # re-seed empty clusters with the worst-placed member
        for c in range(k_eff):
            if np.any(new_assign == c):
                continue
            far = int(np.argmax(own))
            if own[far] == 0:
                break  # every member already coincides with a centroid
            new_assign[far] = c
            own[far] = 0.0
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k_eff):
            sel = points[assign == c]
            if len(sel):
                centroids[c] = (2 * sel.sum(axis=0) > len(sel)).astype(np.uint8)
        objective.append(float(_pairwise_hamming(points, centroids)[np.arange(n), assign].sum()))

    clusters = [members[assign == c] for c in range(k_eff)]
    keep = [i for i, cl in enumerate(clusters) if len(cl)]
    return KmeansResult(
        clusters=[clusters[i] for i in keep],
        centroids=centroids[keep],
        objective=objective,
    )


def centroid_weights(members: np.ndarray, centroid: np.ndarray, code: SpatialCode) -> np.ndarray:
    """Per-position weight -log of the disagreement fraction with the centroid.

    Unanimous positions are clamped at half the smallest observable nonzero
    fraction so the weight stays finite while preserving the ordering.
    """
    members = np.asarray(members)
    if members.size == 0:
        raise ValueError("cluster must be nonempty")
    frac = (code.codewords[members] != centroid).mean(axis=0)
    floor = 1.0 / (2.0 * len(members))
    return -np.log(np.maximum(frac, floor))


@dataclass(eq=False)
class PartitionNode:
    path: tuple
    members: np.ndarray
    centroid: np.ndarray | None = None
    beta: np.ndarray | None = None
    children: list = field(default_factory=list)


@dataclass(eq=False)
class PartitionTree:
    root: PartitionNode
    params: PartitionParams
    levels: list  # levels[l] = list of nodes at depth l+1, in path order

    @property
    def leaves(self) -> list:
        return self.levels[-1]


def build_partition_tree(
    code: SpatialCode, params: PartitionParams, rng: np.random.Generator
) -> PartitionTree:
    """Recursively cluster the codebook into params.levels tiers of subcodes."""
    require_valid_params(params)
    root = PartitionNode(path=(), members=np.arange(code.size))
    frontier = [root]
    levels = []
    for k_l in params.k:
        next_frontier = []
        for node in frontier:
            result = kmeans_hamming(node.members, code, k_l, rng)
            for i, (cluster, centroid) in enumerate(zip(result.clusters, result.centroids)):
                child = PartitionNode(
                    path=node.path + (i,),
                    members=cluster,
                    centroid=centroid,
                    beta=centroid_weights(cluster, centroid, code),
                )
                node.children.append(child)
                next_frontier.append(child)
        frontier = next_frontier
        levels.append(frontier)
    return PartitionTree(root=root, params=params, levels=levels)


def preprocess(r: np.ndarray, tree: PartitionTree, params=None) -> np.ndarray:
    """Sorted candidate indices surviving the per-level centroid pruning.

    At each level the children of surviving nodes are scored by the weighted
    Hamming distance between their centroid and the observation (each with
    its own weight vector); the q_l best survive, ties resolved toward the
    lexicographically smallest path.  ``params`` optionally overrides the
    survivor counts (as a PartitionParams sharing the tree's children counts,
    or a bare q tuple) so one tree serves several pruning budgets.
    """
    if params is None:
        survivors_q = tree.params.q
    elif isinstance(params, PartitionParams):
        if params.k != tree.params.k:
            raise ConfigurationError(
                f"override children counts {params.k} differ from the tree's {tree.params.k}"
            )
        survivors_q = params.q
    else:
        survivors_q = tuple(int(v) for v in params)
    if len(survivors_q) != tree.params.levels:
        raise ConfigurationError("survivor counts must cover every level")
    require_valid_params(PartitionParams(k=tree.params.k, q=survivors_q))
    r = np.asarray(r)
    survivors = [tree.root]
    for q_l in survivors_q:
        nodes = [child for node in survivors for child in node.children]
        scored = sorted(
            nodes, key=lambda nd: (float(nd.beta[nd.centroid != r].sum()), nd.path)
        )
        survivors = scored[: min(q_l, len(scored))]
    return np.sort(np.concatenate([node.members for node in survivors]))


def estimate_complexity(params: PartitionParams | None, m: int, K: int):
    """(n_pre, n_wmd, n_total) distance-comparison counts per time slot."""
    full = m**K
    if params is None:
        return 0, full, full
    require_valid_params(params)
    n_pre = 0
    prev_q = 1
    for k_l, q_l in zip(params.k, params.q):
        n_pre += prev_q * k_l
        prev_q = q_l
    denom = int(np.prod(params.k))
    numer = full * params.q[-1]
    n_wmd = numer // denom if numer % denom == 0 else numer / denom
    return n_pre, n_wmd, n_pre + n_wmd


def tree_stats(tree: PartitionTree) -> str:
    """Plain-text report: per-level node count and member-size spread."""
    lines = [f"codewords: {tree.root.members.size}"]
    for depth, nodes in enumerate(tree.levels, start=1):
        sizes = np.array([n.members.size for n in nodes])
        lines.append(
            f"level {depth}: nodes={len(nodes)} members min={sizes.min()} "
            f"mean={sizes.mean():.2f} max={sizes.max()}"
        )
    return "\n".join(lines) + "\n"
