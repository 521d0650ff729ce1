"""Graph families used by the latency analysis.

Nodes are indexed 0..n-1. Torus nodes are indexed row-major over their
coordinate tuples (numpy ravel order), so for dims [k_1, ..., k_m] the node
with coordinates (c_1, ..., c_m) has index
c_1 * k_2 * ... * k_m + ... + c_{m-1} * k_m + c_m.  Eigenvalue index tuples
use the same convention.
"""
from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError, ValidationError

__all__ = [
    "Graph",
    "TorusSpec",
    "build_cycle",
    "cartesian_product",
    "build_torus",
    "torus_neighbors",
    "complete_graph",
    "save_edge_list",
    "load_edge_list",
]

_SYM_TOL = 1e-12


@dataclass(frozen=True)
class Graph:
    """Symmetric weighted graph with zero diagonal, immutable after creation."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValidationError("weights must be a square matrix")
        scale = np.abs(w).max() if w.size else 0.0
        if scale > 0 and np.abs(w - w.T).max() > _SYM_TOL * scale:
            raise ValidationError("weight matrix must be symmetric")
        w = 0.5 * (w + w.T)
        if np.any(np.diag(w) != 0.0):
            raise ValidationError("weight matrix must have zero diagonal")
        if np.any(w < 0.0):
            raise ValidationError("weights must be nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.weights.sum(axis=1)
        d.setflags(write=False)
        return d

    @cached_property
    def is_binary(self) -> bool:
        return bool(np.all((self.weights == 0.0) | (self.weights == 1.0)))

    @cached_property
    def edge_count(self) -> int:
        """Number of undirected edges (nonzero weight pairs)."""
        return int(np.count_nonzero(np.triu(self.weights)))

    def laplacian(self) -> np.ndarray:
        return np.diag(self.degrees) - self.weights

    def neighbor_lists(self) -> list[np.ndarray]:
        """Adjacency-list view: index array of neighbors per node."""
        return [np.flatnonzero(row) for row in self.weights]

    def is_connected(self) -> bool:
        n = self.n
        if n == 1:
            return True
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        nbrs = self.neighbor_lists()
        count = 1
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    queue.append(v)
        return count == n


@dataclass(frozen=True)
class TorusSpec:
    """An m-dimensional torus: per-axis sizes and neighbor radius r."""

    dims: tuple[int, ...]
    r: int

    def __init__(self, dims, r: int):
        object.__setattr__(self, "dims", tuple(int(k) for k in dims))
        object.__setattr__(self, "r", int(r))
        if len(self.dims) < 1:
            raise ParameterError("dims must contain at least one axis size")
        if any(k < 3 for k in self.dims):
            raise ParameterError("every axis size k_i must be >= 3")
        if self.r < 1:
            raise ParameterError("neighbor radius r must be >= 1")
        if 2 * self.r + 1 > min(self.dims):
            raise ParameterError(
                "2r+1 must not exceed the smallest axis size "
                f"(got r={self.r}, min k={min(self.dims)})"
            )

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        out = 1
        for k in self.dims:
            out *= k
        return out


def build_cycle(n: int, r: int) -> Graph:
    """r-nearest-neighbor cycle: i ~ j iff circular distance in [1, r].

    Adjacency is circulant and 2r-regular.
    """
    n, r = int(n), int(r)
    if n < 3:
        raise ParameterError(f"cycle needs n >= 3 nodes, got n={n}")
    if r < 1:
        raise ParameterError(f"neighbor radius must be >= 1, got r={r}")
    if 2 * r + 1 > n:
        raise ParameterError(
            f"2r+1 <= n required to avoid duplicate wrap-around edges "
            f"(got n={n}, r={r})"
        )
    idx = np.arange(n)
    dist = np.abs(idx[:, None] - idx[None, :])
    dist = np.minimum(dist, n - dist)
    weights = ((dist >= 1) & (dist <= r)).astype(float)
    return Graph(weights)


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Cartesian product: (u1,u2) ~ (v1,v2) iff equal in one coordinate and
    adjacent in the other.  Node index is row-major over (index1, index2)."""
    i1 = np.eye(g1.n)
    i2 = np.eye(g2.n)
    weights = np.kron(g1.weights, i2) + np.kron(i1, g2.weights)
    return Graph(weights)


def build_torus(spec: TorusSpec) -> Graph:
    """m-dimensional r-nearest-neighbor torus as a product of cycles."""
    g = build_cycle(spec.dims[0], spec.r)
    for k in spec.dims[1:]:
        g = cartesian_product(g, build_cycle(k, spec.r))
    return g


def torus_neighbors(spec: TorusSpec, index: int) -> np.ndarray:
    """Neighbor indices of one torus node from coordinate arithmetic,
    without materializing the adjacency matrix: along each axis the
    neighbors are the nodes at circular distance 1..r.  Sorted, distinct."""
    if not (0 <= index < spec.n):
        raise ParameterError(f"node index {index} out of range for n={spec.n}")
    coords = list(np.unravel_index(index, spec.dims))
    out = []
    for axis, k in enumerate(spec.dims):
        orig = coords[axis]
        for step in range(1, spec.r + 1):
            for c in ((orig + step) % k, (orig - step) % k):
                coords[axis] = c
                out.append(int(np.ravel_multi_index(coords, spec.dims)))
        coords[axis] = orig
    return np.unique(np.array(out, dtype=np.int64))


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ParameterError(f"complete graph needs n >= 2, got n={n}")
    return Graph(np.ones((n, n)) - np.eye(n))


def save_edge_list(g: Graph, path_or_buf) -> None:
    """Write the plain-text edge list: `n <count>` header then `i j w` rows."""
    if isinstance(path_or_buf, (str, bytes)):
        with open(path_or_buf, "w") as f:
            save_edge_list(g, f)
        return
    buf = path_or_buf
    buf.write(f"n {g.n}\n")
    rows, cols = np.nonzero(np.triu(g.weights))
    for i, j in zip(rows, cols):
        w = g.weights[i, j]
        buf.write(f"{i} {j} {w:.17g}\n")


def load_edge_list(path_or_buf) -> Graph:
    """Read a graph from the edge-list format written by save_edge_list."""
    if isinstance(path_or_buf, (str, bytes)):
        with open(path_or_buf) as f:
            return load_edge_list(f)
    lines = [ln.strip() for ln in path_or_buf if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise ValidationError("edge list must start with a 'n <count>' header")
    n = int(lines[0].split()[1])
    if n < 1:
        raise ValidationError("node count must be positive")
    weights = np.zeros((n, n))
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValidationError(f"malformed edge row: {ln!r}")
        i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"node index out of range in row: {ln!r}")
        weights[i, j] = w
        weights[j, i] = w
    return Graph(weights)


def edge_list_str(g: Graph) -> str:
    buf = io.StringIO()
    save_edge_list(g, buf)
    return buf.getvalue()
