"""Finite samples of hypersurfaces: vertices, neighbour graph, truncation frontier."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse


@dataclass
class SampledHypersurface:
    source: object
    params: np.ndarray
    points: np.ndarray
    edges: np.ndarray
    frontier: np.ndarray
    truncation: float
    normals: np.ndarray | None = None
    curvatures: np.ndarray | None = None
    _adj: object = field(default=None, repr=False)

    @property
    def n(self):
        return self.points.shape[1] - 1

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def normal_height(self):
        return self.normals[:, -1]

    @property
    def adjacency(self):
        if self._adj is None:
            V = self.size
            i, j = self.edges[:, 0], self.edges[:, 1]
            data = np.ones(2 * len(i), dtype=np.int8)
            self._adj = sparse.csr_matrix(
                (data, (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(V, V))
        return self._adj

    def neighbors(self, v):
        adj = self.adjacency
        return adj.indices[adj.indptr[v]:adj.indptr[v + 1]]

    def components(self, mask):
        """Connected components of the subgraph induced on `mask`, as index arrays."""
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return []
        sub = self.adjacency[idx][:, idx]
        ncomp, labels = sparse.csgraph.connected_components(sub, directed=False)
        order = np.argsort(labels, kind="stable")
        splits = np.flatnonzero(np.diff(labels[order])) + 1
        groups = np.split(idx[order], splits)
        # deterministic ordering: by smallest vertex index
        return sorted(groups, key=lambda g: int(g.min()))


def chebyshev_grid_edges(shape):
    """Edges between grid nodes at Chebyshev distance one (diagonals included)."""
    shape = tuple(shape)
    nd = len(shape)
    index = np.arange(int(np.prod(shape))).reshape(shape)
    edges = []
    for off in itertools.product((-1, 0, 1), repeat=nd):
        if off <= (0,) * nd:
            continue
        src = tuple(slice(max(0, -o), s - max(0, o)) for o, s in zip(off, shape))
        dst = tuple(slice(max(0, o), s - max(0, -o)) for o, s in zip(off, shape))
        edges.append(np.stack([index[src].ravel(), index[dst].ravel()], axis=1))
    return np.concatenate(edges, axis=0)


def grid_frontier(shape):
    idx = np.indices(shape).reshape(len(shape), -1)
    last = np.array(shape)[:, None] - 1
    return np.any((idx == 0) | (idx == last), axis=0)


def jitter_axis(values, amount, seed, axis_id):
    """Perturb interior nodes by up to `amount` times the local spacing.

    The perturbation of a node depends only on (seed, axis, rounded node value) so
    that nested grids (larger truncations) keep the same jitter on shared nodes.
    """
    values = np.array(values, dtype=float)
    if amount <= 0.0 or seed is None or values.size < 3:
        return values
    gaps = np.diff(values)
    local = np.minimum(gaps[:-1], gaps[1:])
    for k in range(1, values.size - 1):
        key = int(np.round(values[k] * 1e6)) & 0x7FFFFFFF
        r = np.random.default_rng([int(seed) & 0x7FFFFFFF, axis_id, key]).uniform(-1.0, 1.0)
        values[k] += amount * local[k - 1] * r
    return values


def sample_grid(surface, axes, truncation, with_forms=True):
    """Tensor-grid sample of a single-chart hypersurface."""
    shape = tuple(len(a) for a in axes)
    mesh = np.meshgrid(*axes, indexing="ij")
    params = np.stack([m.ravel() for m in mesh], axis=1)
    frontier = grid_frontier(shape)
    edges = chebyshev_grid_edges(shape)
    if with_forms:
        ff = surface.forms_at(params)
        points, normals, curv = ff.point, ff.normal, ff.principal_curvatures
    else:
        points, normals, curv = surface.point(params), None, None
    return SampledHypersurface(surface, params, points, edges, frontier, truncation, normals, curv)


def edge_lengths(S):
    a, b = S.points[S.edges[:, 0]], S.points[S.edges[:, 1]]
    from .product import ProductSpace

    return ProductSpace(S.n).distance(a, b)
