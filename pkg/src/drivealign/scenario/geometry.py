"""Planar geometry: constant-curvature roads, frenet projection, oriented rectangles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def wrap_angle(theta):
    """Wrap to (-pi, pi]."""
    return np.arctan2(np.sin(theta), np.cos(theta))


def rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class RoadArc:
    """Centerline of constant curvature, parameterized by arc length.

    kappa > 0 bends left; lateral offsets are positive to the left of travel.
    """

    base_x: float
    base_y: float
    theta0: float
    kappa: float
    length: float

    def point(self, s):
        s = np.asarray(s, dtype=float)
        if self.kappa == 0.0:
            x = self.base_x + s * math.cos(self.theta0)
            y = self.base_y + s * math.sin(self.theta0)
        else:
            r = 1.0 / self.kappa
            x = self.base_x + r * (np.sin(self.theta0 + self.kappa * s) - math.sin(self.theta0))
            y = self.base_y - r * (np.cos(self.theta0 + self.kappa * s) - math.cos(self.theta0))
        return np.stack([x, y], axis=-1)

    def tangent(self, s):
        return self.theta0 + self.kappa * np.asarray(s, dtype=float)

    def offset_point(self, s, d):
        """Point at arc length s, shifted d meters to the left of the tangent."""
        p = self.point(s)
        t = self.tangent(s)
        n = np.stack([-np.sin(t), np.cos(t)], axis=-1)
        return p + np.asarray(d, dtype=float)[..., None] * n if np.ndim(d) else p + d * n

    def frenet(self, xy):
        """(s, d) for points; s unclamped, d positive-left."""
        xy = np.asarray(xy, dtype=float)
        px = xy[..., 0] - self.base_x
        py = xy[..., 1] - self.base_y
        if self.kappa == 0.0:
            c, sn = math.cos(self.theta0), math.sin(self.theta0)
            s = px * c + py * sn
            d = -px * sn + py * c
            return s, d
        r = 1.0 / self.kappa
        cx = self.base_x - r * math.sin(self.theta0)
        cy = self.base_y + r * math.cos(self.theta0)
        dx = xy[..., 0] - cx
        dy = xy[..., 1] - cy
        rho = np.hypot(dx, dy)
        # angle of the point around the arc center, measured from the base point
        phi0 = math.atan2(self.base_y - cy, self.base_x - cx)
        phi = np.arctan2(dy, dx)
        dphi = wrap_angle(phi - phi0)
        s = dphi * r  # r carries the sign of kappa via 1/kappa
        d = (abs(r) - rho) * np.sign(self.kappa)
        return s, d


def rect_corners(x: float, y: float, heading: float, length: float, width: float) -> np.ndarray:
    """4x2 corner array of an oriented rectangle centered at (x, y)."""
    hl, hw = length / 2.0, width / 2.0
    local = np.array([[hl, hw], [hl, -hw], [-hl, -hw], [-hl, hw]])
    return local @ rot(heading).T + np.array([x, y])


def rects_overlap(pose_a, size_a, pose_b, size_b) -> bool:
    """Separating-axis test for two oriented rectangles; poses are (x, y, heading)."""
    ca = rect_corners(pose_a[0], pose_a[1], pose_a[2], size_a[0], size_a[1])
    cb = rect_corners(pose_b[0], pose_b[1], pose_b[2], size_b[0], size_b[1])
    for heading in (pose_a[2], pose_b[2]):
        for theta in (heading, heading + math.pi / 2.0):
            axis = np.array([math.cos(theta), math.sin(theta)])
            pa = ca @ axis
            pb = cb @ axis
            if pa.max() < pb.min() or pb.max() < pa.min():
                return False
    return True


def rect_separation_margin(pose_a, size_a, pose_b, size_b) -> float:
    """Largest gap over SAT axes (positive: separated; negative: penetration bound)."""
    ca = rect_corners(pose_a[0], pose_a[1], pose_a[2], size_a[0], size_a[1])
    cb = rect_corners(pose_b[0], pose_b[1], pose_b[2], size_b[0], size_b[1])
    best = -math.inf
    for heading in (pose_a[2], pose_b[2]):
        for theta in (heading, heading + math.pi / 2.0):
            axis = np.array([math.cos(theta), math.sin(theta)])
            pa = ca @ axis
            pb = cb @ axis
            gap = max(pb.min() - pa.max(), pa.min() - pb.max())
            best = max(best, gap)
    return best


def points_in_rect(points: np.ndarray, x: float, y: float, heading: float,
                   length: float, width: float) -> np.ndarray:
    """Boolean mask: which of the Nx2 points fall inside the oriented rectangle."""
    rel = (points - np.array([x, y])) @ rot(heading)
    return (np.abs(rel[:, 0]) <= length / 2.0) & (np.abs(rel[:, 1]) <= width / 2.0)


def polyline_point_distance(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Min distance from each of the Nx2 points to an Mx2 polyline."""
    a = poly[:-1]
    b = poly[1:]
    ab = b - a
    denom = np.maximum((ab * ab).sum(axis=1), 1e-12)
    # N x M-1 projections
    ap = points[:, None, :] - a[None, :, :]
    t = np.clip((ap * ab[None, :, :]).sum(axis=2) / denom[None, :], 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    dist = np.linalg.norm(points[:, None, :] - closest, axis=2)
    return dist.min(axis=1)


def arc_step(x: float, y: float, heading: float, v: float, kappa: float,
             dt: float) -> tuple[float, float, float]:
    """Exact unicycle step at constant speed and curvature."""
    if abs(kappa) < 1e-12:
        return x + v * dt * math.cos(heading), y + v * dt * math.sin(heading), heading
    dphi = kappa * v * dt
    r = 1.0 / kappa
    nx = x + r * (math.sin(heading + dphi) - math.sin(heading))
    ny = y - r * (math.cos(heading + dphi) - math.cos(heading))
    return nx, ny, heading + dphi
