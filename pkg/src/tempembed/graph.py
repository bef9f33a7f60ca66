"""Temporal graphs: snapshot sequences over a shared vertex universe.

Edge streams are read as ``u v t`` lines and binned into snapshots.  Every
snapshot is an undirected simple graph stored canonically (``u < v``) with an
interaction count per edge; vertex indices are dense and shared across all
snapshots, so a vertex missing from a time bin simply shows up as isolated.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)

DENSE_GUARD = 50_000

EQUAL_WIDTH = "equal-width"
EXPLICIT = "explicit"
PRE_BINNED = "pre-binned"


class EdgeListError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class StructureError(ValueError):
    """Input parsed but does not form a usable temporal graph."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SnapshotSpec:
    mode: str = EQUAL_WIDTH
    bin_count: int | None = None
    boundaries: tuple[float, ...] = ()

    def __post_init__(self):
        if self.mode not in (EQUAL_WIDTH, EXPLICIT, PRE_BINNED):
            raise ValueError(f"unknown snapshot mode {self.mode!r}")
        if self.mode == EQUAL_WIDTH and (self.bin_count is None or self.bin_count < 2):
            raise ValueError("bin_count must be >= 2 for equal-width binning")
        if self.mode == EXPLICIT:
            b = tuple(float(x) for x in self.boundaries)
            if not b:
                raise ValueError("explicit binning needs at least one boundary")
            if any(x >= y for x, y in zip(b, b[1:])):
                raise ValueError("boundaries must be strictly increasing")
            object.__setattr__(self, "boundaries", b)

    @classmethod
    def equal_width(cls, k: int) -> "SnapshotSpec":
        return cls(EQUAL_WIDTH, bin_count=k)

    @classmethod
    def explicit(cls, boundaries: Sequence[float]) -> "SnapshotSpec":
        """Interior cut points; snapshot ``i`` covers ``[b[i-1], b[i])``."""
        return cls(EXPLICIT, boundaries=tuple(boundaries))

    @classmethod
    def pre_binned(cls) -> "SnapshotSpec":
        return cls(PRE_BINNED)


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Undirected simple graph on ``vertex_count`` vertices.

    ``src``/``dst`` hold the distinct edges with ``src < dst`` in
    lexicographic order; ``counts`` holds the interaction multiplicity.
    """

    vertex_count: int
    src: np.ndarray
    dst: np.ndarray
    counts: np.ndarray
    _csr: tuple = field(default=None, repr=False, compare=False)

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]],
                   counts: Iterable[int] | None = None) -> "Snapshot":
        """Build from (possibly repeated, unordered) pairs; self-loops dropped."""
        pairs = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        if counts is None:
            w = np.ones(len(pairs), dtype=np.int64)
        else:
            w = np.asarray(list(counts), dtype=np.int64)
            if w.shape != (len(pairs),):
                raise ValueError("counts must align with pairs")
        if len(pairs) and (pairs.min() < 0 or pairs.max() >= vertex_count):
            raise IndexError("edge endpoint out of range")
        keep = pairs[:, 0] != pairs[:, 1]
        pairs, w = pairs[keep], w[keep]
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        key = lo * vertex_count + hi
        uniq, inv = np.unique(key, return_inverse=True)
        tot = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(tot, inv, w)
        return cls(vertex_count, _frozen(uniq // vertex_count),
                   _frozen(uniq % vertex_count), _frozen(tot))

    @classmethod
    def empty(cls, vertex_count: int) -> "Snapshot":
        return cls.from_pairs(vertex_count, [])

    @property
    def edge_count(self) -> int:
        return len(self.src)

    @property
    def interaction_count(self) -> int:
        return int(self.counts.sum())

    def edges(self) -> set[tuple[int, int]]:
        return set(zip(self.src.tolist(), self.dst.tolist()))

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) of the symmetric neighbor lists, sorted per row."""
        if self._csr is None:
            n = self.vertex_count
            rows = np.concatenate([self.src, self.dst])
            cols = np.concatenate([self.dst, self.src])
            order = np.lexsort((cols, rows))
            indices = cols[order]
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
            object.__setattr__(self, "_csr", (_frozen(indptr), _frozen(indices)))
        return self._csr

    def neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        indptr, indices = self.csr()
        return indices[indptr[v]:indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        indptr, _ = self.csr()
        return np.diff(indptr)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        indptr, _ = self.csr()
        return int(indptr[v + 1] - indptr[v])

    def adjacency(self, weighted: bool = False) -> sp.csr_matrix:
        n = self.vertex_count
        w = self.counts.astype(float) if weighted else np.ones(self.edge_count)
        a = sp.coo_matrix((np.concatenate([w, w]),
                           (np.concatenate([self.src, self.dst]),
                            np.concatenate([self.dst, self.src]))), shape=(n, n))
        return a.tocsr()

    def adjacency_dense(self, weighted: bool = False, guard: int = DENSE_GUARD) -> np.ndarray:
        if self.vertex_count > guard:
            raise MemoryError(
                f"{self.vertex_count} vertices exceeds the dense adjacency guard ({guard})")
        a = np.zeros((self.vertex_count, self.vertex_count))
        w = self.counts.astype(float) if weighted else 1.0
        a[self.src, self.dst] = w
        a[self.dst, self.src] = w
        return a

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} out of range for |V|={self.vertex_count}")


def degree(snapshot: Snapshot, v: int) -> int:
    return snapshot.degree(v)


def adjacency_dense(snapshot: Snapshot, weighted: bool = False,
                    guard: int = DENSE_GUARD) -> np.ndarray:
    return snapshot.adjacency_dense(weighted, guard)


@dataclass(frozen=True, eq=False)
class TemporalGraph:
    vertex_count: int
    snapshots: tuple[Snapshot, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.snapshots) < 2:
            raise StructureError("a temporal graph needs at least 2 snapshots")
        if len(self.labels) != self.vertex_count:
            raise StructureError("one label per vertex required")
        for s in self.snapshots:
            if s.vertex_count != self.vertex_count:
                raise StructureError("snapshots must share the vertex universe")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def T(self) -> int:
        return len(self.snapshots)

    def index_of(self, label: str) -> int:
        return self._index[label]

    def label_of(self, index: int) -> str:
        return self.labels[index]

    def distinct_edges(self) -> int:
        """Distinct vertex pairs over all snapshots."""
        keys = np.concatenate([s.src * self.vertex_count + s.dst for s in self.snapshots])
        return len(np.unique(keys))

    def interactions(self) -> int:
        return sum(s.interaction_count for s in self.snapshots)

    def summary(self) -> dict:
        return {
            "nodes": self.vertex_count,
            "edges": self.distinct_edges(),
            "interactions": self.interactions(),
            "snapshots": self.T,
            "edges_per_snapshot": [s.edge_count for s in self.snapshots],
        }

    def prefix(self, stop: int) -> "TemporalGraph":
        """Graph restricted to the first ``stop`` snapshots."""
        return TemporalGraph(self.vertex_count, self.snapshots[:stop], self.labels)


def _bin_times(times: np.ndarray, spec: SnapshotSpec) -> np.ndarray:
    if spec.mode == EQUAL_WIDTH:
        lo, hi = times.min(), times.max()
        if hi == lo:
            return np.zeros(len(times), dtype=np.int64)
        b = np.floor((times - lo) / (hi - lo) * spec.bin_count).astype(np.int64)
        return np.minimum(b, spec.bin_count - 1)
    if spec.mode == EXPLICIT:
        return np.searchsorted(np.asarray(spec.boundaries), times, side="right").astype(np.int64)
    return times.astype(np.int64)


def parse_edge_list(lines: Iterable[str], spec: SnapshotSpec) -> TemporalGraph:
    """Parse ``u v t`` lines into a :class:`TemporalGraph`.

    Blank lines and ``#`` comments are skipped.  Vertices get dense indices in
    order of first appearance (self-loop lines included, although the loop
    itself is dropped).
    """
    index: dict[str, int] = {}
    us, vs, ts = [], [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EdgeListError(f"expected 'u v t', got {len(parts)} fields", lineno)
        try:
            t = float(parts[2])
        except ValueError:
            raise EdgeListError(f"bad timestamp {parts[2]!r}", lineno) from None
        if not np.isfinite(t):
            raise EdgeListError(f"non-finite timestamp {parts[2]!r}", lineno)
        if spec.mode == PRE_BINNED and (t < 0 or t != int(t)):
            raise EdgeListError(f"snapshot index must be a non-negative integer, got {parts[2]!r}",
                                lineno)
        for tok in parts[:2]:
            if tok not in index:
                index[tok] = len(index)
        us.append(index[parts[0]])
        vs.append(index[parts[1]])
        ts.append(t)
    if not ts:
        raise StructureError("edge list is empty")

    n = len(index)
    us_a, vs_a = np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)
    bins = _bin_times(np.asarray(ts), spec)
    if spec.mode == EQUAL_WIDTH:
        T = spec.bin_count
    elif spec.mode == EXPLICIT:
        T = len(spec.boundaries) + 1
    else:
        T = int(bins.max()) + 1

    snapshots = []
    for t in range(T):
        m = bins == t
        snapshots.append(Snapshot.from_pairs(n, np.stack([us_a[m], vs_a[m]], axis=1)))
    nonempty = sum(s.edge_count > 0 for s in snapshots)
    if nonempty < 2:
        raise StructureError(f"only {nonempty} non-empty snapshot(s) after binning; need >= 2")
    empty = [t for t, s in enumerate(snapshots) if s.edge_count == 0]
    if empty:
        warnings.warn(f"empty snapshots at indices {empty}", stacklevel=2)
    labels = tuple(index)
    return TemporalGraph(n, tuple(snapshots), labels)


def read_edge_list(path, spec: SnapshotSpec) -> TemporalGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, spec)


def dump_edge_list(graph: TemporalGraph) -> str:
    """Serialize as pre-binned ``u v t`` lines (``t`` = snapshot index).

    Each edge is repeated once per interaction.  Vertices that never touch an
    edge, and trailing empty snapshots, are kept alive with self-loop lines,
    which the parser registers and then drops.
    """
    out = []
    seen = np.zeros(graph.vertex_count, dtype=bool)
    for s in graph.snapshots:
        seen[s.src] = True
        seen[s.dst] = True
    lab = graph.labels
    for t, s in enumerate(graph.snapshots):
        for u, v, c in zip(s.src.tolist(), s.dst.tolist(), s.counts.tolist()):
            out.extend([f"{lab[u]} {lab[v]} {t}"] * c)
        if t == graph.T - 1 and s.edge_count == 0:
            out.append(f"{lab[0]} {lab[0]} {t}")
    for v in np.flatnonzero(~seen).tolist():
        out.append(f"{lab[v]} {lab[v]} 0")
    return "\n".join(out) + "\n"


def synth_dynamic_sbm(nodes: int, communities: int, snapshots: int, p_in: float,
                      p_out: float, churn: float, seed: int,
                      return_membership: bool = False):
    """Drifting stochastic block model.

    Snapshot 1 uses a balanced random community assignment; before each later
    snapshot ``round(churn * nodes)`` vertices are moved to uniformly random
    communities, then all edges are redrawn independently.
    """
    if not 0 <= p_out < p_in <= 1:
        raise ValueError("need 0 <= p_out < p_in <= 1")
    if not 0 <= churn <= 1:
        raise ValueError("churn must lie in [0, 1]")
    if nodes < 2 or communities < 1 or snapshots < 2:
        raise ValueError("need nodes >= 2, communities >= 1, snapshots >= 2")
    rng = np.random.default_rng(seed)
    member = rng.permutation(np.arange(nodes) % communities)
    iu, ju = np.triu_indices(nodes, k=1)
    moved = int(round(churn * nodes))
    snaps, history = [], []
    for t in range(snapshots):
        if t > 0 and moved:
            who = rng.choice(nodes, size=moved, replace=False)
            member = member.copy()
            member[who] = rng.integers(communities, size=moved)
        prob = np.where(member[iu] == member[ju], p_in, p_out)
        hit = rng.random(len(iu)) < prob
        snaps.append(Snapshot.from_pairs(nodes, np.stack([iu[hit], ju[hit]], axis=1)))
        history.append(member.copy())
    g = TemporalGraph(nodes, tuple(snaps), tuple(str(i) for i in range(nodes)))
    if return_membership:
        return g, history
    return g
