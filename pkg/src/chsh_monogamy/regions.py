"""Boundary and sample data for the (<B_AB>, <B_AC>) plane.

Three regions are emitted: the classical square ``max(|x|, |y|) <= 2``, the
quantum disc ``x^2 + y^2 <= 8`` and the no-signalling diamond
``|x| + |y| <= 4``.  Quantum first-quadrant boundary points are realized
by explicit states and measurements; the diamond is analytic only.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import permute_factors
from .monogamy import joint_max, random_real_state, tight_family

THEORIES = ("classical", "quantum", "ns")
CSV_HEADER = ("b_ab", "b_ac", "label", "provenance", "param")


@dataclass(frozen=True)
class RegionPoint:
    b_ab: float
    b_ac: float
    label: str
    provenance: str = "analytic"
    param: float = 0.0


def _chsh(a, b) -> float:
    return a[0] * (b[0] + b[1]) + a[1] * (b[0] - b[1])


def classical_values() -> list[tuple[float, float]]:
    """(<B_AB>, <B_AC>) for all 64 deterministic strategies of A, B and C."""
    outs = list(itertools.product((1, -1), repeat=2))
    return [(float(_chsh(a, b)), float(_chsh(a, c)))
            for a in outs for b in outs for c in outs]


def _hull(points) -> list[tuple[float, float]]:
    """Vertices of the convex hull, counter-clockwise (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def classical_vertices() -> list[RegionPoint]:
    verts = sorted(_hull(classical_values()), key=lambda p: (-p[0], -p[1]))
    return [RegionPoint(x, y, "classical", "realized", float(i)) for i, (x, y) in enumerate(verts)]


def _polygon_points(vertices, n_extra: int, label: str) -> list[RegionPoint]:
    """``n_extra`` points strictly inside the edges of a closed polygon.

    Edges receive points round-robin and each edge spaces its share evenly.
    ``param`` is the fractional perimeter position.
    """
    verts = [np.array(v, dtype=float) for v in vertices]
    n_edges = len(verts)
    counts = [n_extra // n_edges + (1 if k < n_extra % n_edges else 0) for k in range(n_edges)]
    out = []
    for k, m in enumerate(counts):
        a, b = verts[k], verts[(k + 1) % n_edges]
        for i in range(m):
            f = (i + 1) / (m + 1)
            p = a + (b - a) * f
            out.append(RegionPoint(float(p[0]), float(p[1]), label, "analytic",
                                   (k + f) / n_edges))
    return sorted(out, key=lambda p: p.param)


def _realized_quantum(angle: float) -> RegionPoint:
    """Realize the circle point at ``angle`` via the tight family.

    First-quadrant points come straight from :func:`joint_max`; other
    quadrants negate Bob's and/or Charlie's observables.
    """
    c, s = np.cos(angle), np.sin(angle)
    beta = float(np.arctan2(abs(s), abs(c)))
    if beta <= np.pi / 4:
        res = joint_max(tight_family(beta))
    else:
        # swapping B and C exchanges the two CHSH values
        res = joint_max(permute_factors(tight_family(np.pi / 2 - beta), (0, 2, 1)))
    sx = -1.0 if c < -1e-15 else 1.0
    sy = -1.0 if s < -1e-15 else 1.0
    prov = "realized" if sx > 0 and sy > 0 else "reflected"
    return RegionPoint(sx * res.value_ab, sy * res.value_ac, "quantum", prov, float(angle))


def boundary_samples(theory: str, n: int) -> list[RegionPoint]:
    if theory not in THEORIES:
        raise ValueError(f"theory must be one of {THEORIES}")
    if theory == "quantum":
        if n < 1:
            raise ValueError("need at least 1 quantum boundary sample")
        return [_realized_quantum(2.0 * np.pi * k / n) for k in range(n)]
    if n < 4:
        raise ValueError(f"{theory} boundary needs at least 4 samples (its vertices)")
    if theory == "classical":
        corners = classical_vertices()
        ccw = [(2, 2), (-2, 2), (-2, -2), (2, -2)]
        return corners + _polygon_points(ccw, n - 4, "classical")
    if theory == "ns":
        tips = [(4.0, 0.0), (0.0, 4.0), (-4.0, 0.0), (0.0, -4.0)]
        verts = [RegionPoint(x, y, "ns", "analytic", float(i)) for i, (x, y) in enumerate(tips)]
        return verts + _polygon_points(tips, n - 4, "ns")


def random_cloud(n: int, seed: int = 42) -> list[RegionPoint]:
    """Joint-max values of ``n`` random real three-qubit states."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        res = joint_max(random_real_state(rng))
        out.append(RegionPoint(res.value_ab, res.value_ac, "sample", "realized", float(i)))
    return sorted(out, key=lambda p: (p.label, p.param))


def fmt(x: float) -> str:
    return f"{x:.12g}"


def to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([fmt(p.b_ab), fmt(p.b_ac), p.label, p.provenance, fmt(p.param)])
    return buf.getvalue()
