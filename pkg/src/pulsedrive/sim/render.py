"""Grayscale ego-view rendering via column raycasting.

A fan of rays is cast from the car across the field of view; each ray owns a
block of image columns. A hit paints a vertically centered wall slab whose
height grows as the wall gets closer and whose shade fades with distance.
Goal-region edges render as full-bright slabs so the goal is visible. Pixel
values are quantized to the 1/255 grid so frames survive byte storage exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import CarState, SimConfig
from .maze import Maze, ray_segment_hits


@dataclass(frozen=True)
class RenderConfig:
    side: int = 84
    n_rays: int = 16
    fov_deg: float = 90.0
    view_dist: float = 15.0
    sky: float = 0.15
    ground: float = 0.35
    wall_near: float = 0.95
    wall_far: float = 0.30
    goal_shade: float = 1.0
    height_gain: float = 1.5  # wall at this distance (m) fills the frame


@dataclass(frozen=True)
class Frame:
    pixels: np.ndarray  # (side, side) float in [0,1], row 0 = top
    timestamp: float


def wall_column_height(d_perp: float, cfg: RenderConfig) -> int:
    """Slab height in pixels for a hit at perpendicular distance d_perp."""
    if not math.isfinite(d_perp):
        return 0
    return min(cfg.side, int(cfg.side * cfg.height_gain / max(d_perp, 1e-6)))


def _goal_edges(maze: Maze) -> np.ndarray | None:
    if maze.goal is None:
        return None
    x1, y1, x2, y2 = maze.goal
    return np.array(
        [[x1, y1, x2, y1], [x2, y1, x2, y2], [x2, y2, x1, y2], [x1, y2, x1, y1]]
    )


def render_ego_view(state: CarState, maze: Maze, cfg: RenderConfig,
                    dt: float = SimConfig.dt) -> Frame:
    """Deterministic forward-view raster; timestamp is sim time (step * dt)."""
    side, n_rays = cfg.side, cfg.n_rays
    half_fov = math.radians(cfg.fov_deg) / 2.0
    # leftmost column looks left (positive heading offset)
    offsets = np.linspace(half_fov, -half_fov, n_rays)
    angles = state.heading + offsets
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    origin = np.array([state.x, state.y])

    wall_t = ray_segment_hits(origin, dirs, maze.walls)
    goal_segs = _goal_edges(maze)
    goal_t = (
        ray_segment_hits(origin, dirs, goal_segs)
        if goal_segs is not None
        else np.full(n_rays, np.inf)
    )

    frame = np.empty((side, side), dtype=np.float64)
    frame[: side // 2, :] = cfg.sky
    frame[side // 2 :, :] = cfg.ground

    col_ray = (np.arange(side) * n_rays) // side
    mid = side // 2
    for r in range(n_rays):
        t_wall, t_goal = wall_t[r], goal_t[r]
        t = min(t_wall, t_goal)
        if not math.isfinite(t) or t > cfg.view_dist:
            continue
        d_perp = t * math.cos(offsets[r])
        h = wall_column_height(d_perp, cfg)
        if h <= 0:
            continue
        if t_goal < t_wall:
            shade = cfg.goal_shade
        else:
            fade = min(t / cfg.view_dist, 1.0)
            shade = cfg.wall_near - (cfg.wall_near - cfg.wall_far) * fade
        top = max(0, mid - h // 2)
        bottom = min(side, top + h)
        frame[top:bottom, col_ray == r] = shade

    np.round(frame * 255.0, out=frame)
    frame /= 255.0
    return Frame(pixels=frame, timestamp=state.step_index * dt)


def ray_distances(state: CarState, maze: Maze, cfg: RenderConfig) -> np.ndarray:
    """Per-ray wall distances (same fan as the renderer); used by scripted
    drivers as a cheap range sensor."""
    half_fov = math.radians(cfg.fov_deg) / 2.0
    offsets = np.linspace(half_fov, -half_fov, cfg.n_rays)
    angles = state.heading + offsets
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return ray_segment_hits(np.array([state.x, state.y]), dirs, maze.walls)


def frame_to_u8(frame: np.ndarray) -> np.ndarray:
    return np.round(np.asarray(frame) * 255.0).astype(np.uint8)


def u8_to_frame(raw: np.ndarray, dtype=np.float64) -> np.ndarray:
    return raw.astype(dtype) / dtype(255.0)
