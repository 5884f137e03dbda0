"""Separating-axis tests for convex polygons and parallelepipeds.

Both tests answer "do the open interiors intersect?": shapes that only touch
along a boundary (separation >= -eps) count as disjoint.
"""

from __future__ import annotations

import itertools

import numpy as np

EPS_GEOM = 1e-12


def _edge_normals(poly):
    edges = np.roll(poly, -1, axis=0) - poly
    normals = np.column_stack([-edges[:, 1], edges[:, 0]])
    lengths = np.hypot(normals[:, 0], normals[:, 1])
    keep = lengths > 1e-300
    return normals[keep] / lengths[keep, None]


def separation_2d(p, q) -> float:
    """Largest gap between the projections of convex polygons ``p`` and ``q``
    (vertex arrays of shape (k, 2)) over all edge normals.  Positive means a
    strictly separating line exists; negative is (minus) the smallest overlap."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    best = -np.inf
    for axis in np.vstack([_edge_normals(p), _edge_normals(q)]):
        pp, qq = p @ axis, q @ axis
        gap = max(qq.min() - pp.max(), pp.min() - qq.max())
        best = max(best, gap)
    return float(best)


def interiors_intersect_2d(p, q, eps: float = EPS_GEOM) -> bool:
    return separation_2d(p, q) < -eps


def parallelepiped_vertices(origin, edges):
    origin = np.asarray(origin, dtype=float)
    edges = np.asarray(edges, dtype=float)
    return np.array([origin + np.dot(c, edges) for c in itertools.product((0.0, 1.0), repeat=3)])


def separation_3d(origin1, edges1, origin2, edges2) -> float:
    """SAT over the 15 candidate axes (3 + 3 face normals, 9 edge crosses).

    ``edges`` holds the three spanning edge vectors as rows."""
    e1 = np.asarray(edges1, dtype=float)
    e2 = np.asarray(edges2, dtype=float)
    v1 = parallelepiped_vertices(origin1, e1)
    v2 = parallelepiped_vertices(origin2, e2)
    axes = [np.cross(e1[i], e1[j]) for i, j in ((0, 1), (1, 2), (2, 0))]
    axes += [np.cross(e2[i], e2[j]) for i, j in ((0, 1), (1, 2), (2, 0))]
    axes += [np.cross(x, y) for x in e1 for y in e2]
    scale = max(np.abs(e1).max(), np.abs(e2).max()) ** 2
    best = -np.inf
    for axis in axes:
        norm = float(np.linalg.norm(axis))
        if norm <= 1e-12 * scale:
            continue
        axis = axis / norm
        a, b = v1 @ axis, v2 @ axis
        best = max(best, b.min() - a.max(), a.min() - b.max())
    return float(best)


def interiors_intersect_3d(origin1, edges1, origin2, edges2, eps: float = EPS_GEOM) -> bool:
    return separation_3d(origin1, edges1, origin2, edges2) < -eps
