"""Charging position selection: clustering until every cluster fits a disc.

The number of clusters starts at one and grows until the minimum enclosing
circle of every cluster has radius at most the charge distance; circle
centers become the charging positions.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import NetworkInstance, Point

_KMEANS_MAX_ITER = 100


@dataclass(frozen=True)
class Cluster:
    member_ids: tuple[int, ...]
    center: Point  # minimum enclosing circle center
    radius: float  # minimum enclosing circle radius


@dataclass(frozen=True)
class ChargingPositionSet:
    """Selected charging positions plus the node -> position assignment."""

    positions: tuple[Point, ...]
    assignment: tuple[int, ...]  # node index -> position index


def min_enclosing_circle(points: list[Point]) -> tuple[Point, float]:
    """Smallest circle covering all points (randomized incremental build).

    Expected linear time; the point order is shuffled with a fixed-seed
    generator so results are reproducible.
    """
    if len(points) == 0:
        raise ValidationError("cannot enclose an empty point set")
    pts = [(float(x), float(y)) for x, y in points]
    random.Random(0x5EED).shuffle(pts)
    c = None
    for i, p in enumerate(pts):
        if c is None or not _in_circle(c, p):
            c = _circle_one_boundary(pts[: i + 1], p)
    return (c[0], c[1]), c[2]


def _circle_one_boundary(points, p):
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(c, q):
            if c[2] == 0.0:
                c = _diameter_circle(p, q)
            else:
                c = _circle_two_boundary(points[: i + 1], p, q)
    return c


def _circle_two_boundary(points, p, q):
    circ = _diameter_circle(p, q)
    left = None
    right = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(circ, r):
            continue
        cross = _cross(px, py, qx, qy, r[0], r[1])
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        if cross > 0.0 and (
            left is None or _cross(px, py, qx, qy, c[0], c[1]) > _cross(px, py, qx, qy, left[0], left[1])
        ):
            left = c
        elif cross < 0.0 and (
            right is None or _cross(px, py, qx, qy, c[0], c[1]) < _cross(px, py, qx, qy, right[0], right[1])
        ):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _diameter_circle(a, b):
    cx = (a[0] + b[0]) / 2.0
    cy = (a[1] + b[1]) / 2.0
    r = max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1]))
    return (cx, cy, r)


def _circumcircle(a, b, c):
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(x - a[0], y - a[1]), math.hypot(x - b[0], y - b[1]), math.hypot(x - c[0], y - c[1]))
    return (x, y, r)


def _in_circle(c, p):
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1.0 + 1e-14) + 1e-14


def _cross(x0, y0, x1, y1, x2, y2):
    return (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)


def kmeans(points: list[Point], k: int, seed: int) -> list[Cluster]:
    """Lloyd iteration from k-means++ seeding; clusters carry their enclosing circle.

    Stops when assignments stabilize or after 100 iterations.  A cluster that
    loses all members is re-seeded from the point currently farthest from its
    assigned center.  Empty clusters remaining at convergence (possible with
    duplicate points) are dropped.
    """
    n = len(points)
    if not 1 <= k <= n:
        raise ValidationError(f"cluster count must be in 1..{n}, got {k}")
    pts = np.asarray(points, dtype=float)
    rng = np.random.default_rng(seed)

    centers = np.empty((k, 2))
    centers[0] = pts[rng.integers(n)]
    d2 = ((pts - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = int(rng.integers(n))
        centers[c] = pts[idx]
        d2 = np.minimum(d2, ((pts - centers[c]) ** 2).sum(axis=1))

    assign = np.full(n, -1, dtype=int)
    for _ in range(_KMEANS_MAX_ITER):
        dist2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = dist2.argmin(axis=1)
        # re-seed empty clusters from the farthest point, one at a time
        for _ in range(k):
            counts = np.bincount(new_assign, minlength=k)
            empty = np.flatnonzero(counts == 0)
            if empty.size == 0:
                break
            own = dist2[np.arange(n), new_assign]
            far = int(own.argmax())
            if own[far] <= 0.0:
                break  # all points coincide with their centers; leave empty
            centers[empty[0]] = pts[far]
            dist2[:, empty[0]] = ((pts - centers[empty[0]]) ** 2).sum(axis=1)
            new_assign = dist2.argmin(axis=1)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            members = pts[assign == c]
            if len(members):
                centers[c] = members.mean(axis=0)

    clusters = []
    for c in range(k):
        ids = np.flatnonzero(assign == c)
        if ids.size == 0:
            continue
        center, radius = min_enclosing_circle([tuple(pts[i]) for i in ids])
        clusters.append(Cluster(tuple(int(i) for i in ids), center, radius))
    return clusters


def select_charging_positions(instance: NetworkInstance) -> ChargingPositionSet:
    """Smallest cluster count whose enclosing circles all fit the charge range.

    Tries k = 1, 2, ... in order; the first k where every cluster's enclosing
    circle has radius at most the charge distance wins, and the circle centers
    become the charging positions.  Seeding comes from the instance's
    asymmetry seed, so the result is a pure function of the instance.
    """
    node_points = [u.pos for u in instance.nodes]
    d_max = instance.dmc.d_max
    for k in range(1, instance.n + 1):
        clusters = kmeans(node_points, k, seed=instance.asym.seed)
        if all(cl.radius <= d_max for cl in clusters):
            assignment = [0] * instance.n
            for ci, cl in enumerate(clusters):
                for nid in cl.member_ids:
                    assignment[nid] = ci
            return ChargingPositionSet(
                positions=tuple(cl.center for cl in clusters),
                assignment=tuple(assignment),
            )
    raise AssertionError("unreachable: singleton clusters always have radius 0")
