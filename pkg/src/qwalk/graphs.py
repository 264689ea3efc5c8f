"""Random and deterministic graph generators.

Every generator is a pure function of its parameters and a
``numpy.random.Generator``; the same seed always yields the same graph.
Per-realization seeds are derived from a master seed with
``numpy.random.SeedSequence`` so ensembles are order independent.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import GenerationError, ParameterError

__all__ = [
    "Graph",
    "GraphModelParams",
    "MODELS",
    "RNG_ALGORITHM",
    "derive_seed",
    "make_rng",
    "generate_er",
    "generate_configuration",
    "randomize_by_edge_interchange",
    "generate_complete_minus_m",
    "generate_cycle",
    "generate_complete",
    "generate",
    "generate_model",
    "count_components",
    "is_connected",
]

RNG_ALGORITHM = "numpy.random.PCG64+SeedSequence"

MODELS = ("er", "config", "complete-minus-m", "cycle", "complete")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    Edges are stored as ``(u, v)`` tuples with ``u < v``.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"node count must be a positive integer, got {self.n!r}")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ParameterError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
            normalized.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable) -> "Graph":
        """Build a graph, rejecting duplicate edges instead of merging them."""
        pairs = [tuple(sorted((int(u), int(v)))) for u, v in pairs]
        if len(set(pairs)) != len(pairs):
            raise ParameterError("duplicate edges")
        return cls(n, frozenset(pairs))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_array(self) -> np.ndarray:
        """Edges as an ``(E, 2)`` int array sorted lexicographically."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(sorted(self.edges), dtype=np.int64)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        e = self.edge_array()
        np.add.at(deg, e[:, 0], 1)
        np.add.at(deg, e[:, 1], 1)
        return deg

    def mean_degree(self) -> float:
        return 2.0 * self.num_edges / self.n

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        e = self.edge_array()
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
        return a


@dataclass(frozen=True)
class GraphModelParams:
    """Parameters of one graph family. ``seed`` is the master seed of a run."""

    model: str
    n: int
    p: float | None = None
    k: int | None = None
    m: int | None = None
    seed: int = 0

    def validate(self) -> "GraphModelParams":
        if self.model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n is None or int(self.n) != self.n:
            raise ParameterError("n must be an integer")
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if self.model == "er":
            if self.n < 2:
                raise ParameterError("ER graphs need n >= 2")
            if self.p is None or not 0 < self.p <= 1:
                raise ParameterError("ER graphs need 0 < p <= 1")
        elif self.model == "config":
            _check_configuration(self.n, self.k)
        elif self.model == "complete-minus-m":
            _check_complete_minus_m(self.n, self.m)
        elif self.model == "cycle":
            if self.n < 3:
                raise ParameterError("cycle graphs need n >= 3")
        elif self.model == "complete":
            if self.n < 2:
                raise ParameterError("complete graphs need n >= 2")
        return self

    def as_dict(self) -> dict:
        return {"model": self.model, "n": self.n, "p": self.p, "k": self.k, "m": self.m,
                "seed": int(self.seed)}


def derive_seed(master: int, *key: int) -> int:
    """Mix a master seed with an integer key path into an independent 64-bit seed."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def generate_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdős–Rényi G(n, p).

    One uniform draw per pair, pairs visited lexicographically, so a seed fixes
    the graph completely.
    """
    if int(n) != n or n < 2:
        raise ParameterError(f"ER graphs need n >= 2, got {n}")
    if not 0 <= p <= 1:
        raise ParameterError(f"connection probability must lie in [0, 1], got {p}")
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph(n, frozenset(zip(iu[keep].tolist(), ju[keep].tolist())))


def _check_configuration(n, k):
    if k is None or int(k) != k or n is None or int(n) != n:
        raise ParameterError("configuration model needs integer n and k")
    if (n * k) % 2:
        raise ParameterError(f"n·k must be even (n={n}, k={k})")
    if not 0 < k < n:
        raise ParameterError(f"configuration model needs 0 < k < n (n={n}, k={k})")


def _match_whole(n, k, rng):
    stubs = rng.permutation(np.repeat(np.arange(n), k)).reshape(-1, 2)
    u = stubs.min(axis=1)
    v = stubs.max(axis=1)
    if np.any(u == v):
        return None
    keys = u * n + v
    if np.unique(keys).size != keys.size:
        return None
    return set(zip(u.tolist(), v.tolist()))


def _match_sequential(n, k, rng):
    # Shuffle-and-pair; conflicting stubs are re-shuffled among themselves.
    edges = set()
    stubs = np.repeat(np.arange(n), k)
    while stubs.size:
        leftover = defaultdict(int)
        pairs = rng.permutation(stubs).reshape(-1, 2).tolist()
        for u, v in pairs:
            if u > v:
                u, v = v, u
            if u != v and (u, v) not in edges:
                edges.add((u, v))
            else:
                leftover[u] += 1
                leftover[v] += 1
        if not leftover:
            break
        nodes = list(leftover)
        if not any(
            (min(a, b), max(a, b)) not in edges
            for i, a in enumerate(nodes) for b in nodes[i + 1:]
        ):
            return None
        stubs = np.array([u for u, c in leftover.items() for _ in range(c)], dtype=np.int64)
    return edges


def generate_configuration(
    n: int,
    k: int,
    rng: np.random.Generator,
    *,
    strategy: str = "pairing",
    max_attempts: int = 10**6,
    mix_swaps: int | None = None,
) -> Graph:
    """Uniform-degree random graph from stub matching.

    ``strategy="reject"`` draws a full random stub matching and throws the
    whole realization away if it contains a self-loop or multi-edge.  This is
    exactly uniform over simple graphs but its acceptance rate decays like
    ``exp(-(k**2 - 1) / 4)``, so it is only usable for small ``k``.

    ``strategy="pairing"`` (default) pairs shuffled stubs, keeps the valid
    pairs and re-shuffles only the conflicting stubs, restarting when no valid
    pair is left.  The result is then mixed with ``mix_swaps`` degree-preserving
    edge interchanges (default ``10 * edges``) to wash out the residual bias of
    sequential pairing.  For ``k > (n - 1) / 2`` the complement (degree
    ``n - 1 - k``) is generated and inverted.
    """
    _check_configuration(n, k)
    if strategy not in ("pairing", "reject"):
        raise ParameterError(f"unknown configuration strategy {strategy!r}")

    complement = strategy == "pairing" and k > (n - 1) / 2
    kk = n - 1 - k if complement else k
    if kk == 0:
        edges = set()
    else:
        matcher = _match_whole if strategy == "reject" else _match_sequential
        for attempt in range(1, max_attempts + 1):
            edges = matcher(n, kk, rng)
            if edges is not None:
                break
        else:
            raise GenerationError(
                f"no simple {kk}-regular matching on {n} nodes", attempts=max_attempts
            )
    g = Graph(n, frozenset(edges))
    if strategy == "pairing" and g.num_edges > 1:
        swaps = 10 * g.num_edges if mix_swaps is None else mix_swaps
        g = randomize_by_edge_interchange(g, swaps, rng)
    if complement:
        g = Graph(n, frozenset(_complement_edges(n, g.edges)))
    return g


def _complement_edges(n, edges):
    return {(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges}


def randomize_by_edge_interchange(g: Graph, swaps: int, rng: np.random.Generator) -> Graph:
    """Propose ``swaps`` double-edge swaps ``(a,b),(c,d) -> (a,d),(c,b)``.

    A proposal is rejected (but still counted) if it would create a self-loop
    or a duplicate edge, so the degree sequence is preserved exactly.
    """
    if int(swaps) != swaps or swaps < 0:
        raise ParameterError(f"swaps must be a non-negative integer, got {swaps}")
    ne = g.num_edges
    if swaps == 0 or ne < 2:
        return g
    edges = sorted(g.edges)
    present = set(edges)
    picks = rng.integers(0, ne, size=(int(swaps), 2)).tolist()
    flips = (rng.random(int(swaps)) < 0.5).tolist()
    for (i, j), flip in zip(picks, flips):
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if flip:
            c, d = d, c
        if a == d or c == b:
            continue
        e1 = (a, d) if a < d else (d, a)
        e2 = (c, b) if c < b else (b, c)
        if e1 in present or e2 in present:
            continue
        present.difference_update((edges[i], edges[j]))
        present.update((e1, e2))
        edges[i] = e1
        edges[j] = e2
    return Graph(g.n, frozenset(present))


def _check_complete_minus_m(n, m):
    if n is None or int(n) != n or n < 2:
        raise ParameterError("complete-minus-m graphs need integer n >= 2")
    total = n * (n - 1) // 2
    if m is None or int(m) != m or not 0 <= m <= total:
        raise ParameterError(f"m must be an integer in [0, {total}], got {m}")


def generate_complete_minus_m(n: int, m: int, rng: np.random.Generator) -> Graph:
    """Complete graph with ``m`` edges removed uniformly without replacement."""
    _check_complete_minus_m(n, m)
    iu, ju = np.triu_indices(n, 1)
    keep = np.ones(iu.size, dtype=bool)
    keep[rng.choice(iu.size, size=int(m), replace=False)] = False
    return Graph(n, frozenset(zip(iu[keep].tolist(), ju[keep].tolist())))


def generate_cycle(n: int) -> Graph:
    if int(n) != n or n < 3:
        raise ParameterError(f"cycle graphs need n >= 3, got {n}")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def generate_complete(n: int) -> Graph:
    if int(n) != n or n < 2:
        raise ParameterError(f"complete graphs need n >= 2, got {n}")
    iu, ju = np.triu_indices(n, 1)
    return Graph(n, frozenset(zip(iu.tolist(), ju.tolist())))


def generate(params: GraphModelParams, rng: np.random.Generator) -> Graph:
    """Draw one graph of the family described by ``params`` from ``rng``."""
    params.validate()
    if params.model == "er":
        return generate_er(params.n, params.p, rng)
    if params.model == "config":
        return generate_configuration(params.n, params.k, rng)
    if params.model == "complete-minus-m":
        return generate_complete_minus_m(params.n, params.m, rng)
    if params.model == "cycle":
        return generate_cycle(params.n)
    return generate_complete(params.n)


def generate_model(
    params: GraphModelParams,
    seed: int,
    *,
    require_connected: bool = False,
    max_resamples: int = 10**4,
) -> tuple[Graph, int]:
    """Generate from an explicit seed; returns ``(graph, resample_count)``.

    With ``require_connected`` disconnected draws are discarded and redrawn
    from the same stream, at most ``max_resamples`` times.
    """
    rng = make_rng(seed)
    g = generate(params, rng)
    resamples = 0
    while require_connected and not is_connected(g):
        if resamples >= max_resamples:
            raise GenerationError("no connected realization", attempts=resamples + 1)
        resamples += 1
        g = generate(params, rng)
    return g, resamples


def count_components(g: Graph) -> int:
    e = g.edge_array()
    a = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    return int(connected_components(a, directed=False)[0])


def is_connected(g: Graph) -> bool:
    return count_components(g) == 1
