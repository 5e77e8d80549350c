"""Maze geometry and the textual map format.

Format (all units meters / degrees):

    maze v1 <width> <height>
    wall x1 y1 x2 y2        # axis-aligned segment, one per line
    goal x1 y1 x2 y2        # optional axis-aligned rectangle
    spawn x y heading_deg
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np


class MazeFormatError(ValueError):
    pass


@dataclass
class Maze:
    width: float
    height: float
    walls: np.ndarray  # (n, 4) rows of x1 y1 x2 y2
    spawn: tuple[float, float, float]  # x, y, heading_rad
    goal: tuple[float, float, float, float] | None = None  # x1 y1 x2 y2, normalized
    _diag: float = field(init=False, repr=False, default=0.0)

    def __post_init__(self):
        self.walls = np.asarray(self.walls, dtype=np.float64).reshape(-1, 4)
        self._diag = float(np.hypot(self.width, self.height))
        dx = np.abs(self.walls[:, 0] - self.walls[:, 2])
        dy = np.abs(self.walls[:, 1] - self.walls[:, 3])
        if np.any((dx > 1e-9) & (dy > 1e-9)):
            raise MazeFormatError("walls must be axis-aligned segments")
        if self.goal is not None:
            x1, y1, x2, y2 = self.goal
            self.goal = (min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2))
            gx1, gy1, gx2, gy2 = self.goal
            if gx1 < 0 or gy1 < 0 or gx2 > self.width or gy2 > self.height:
                raise MazeFormatError("goal region must lie inside bounds")

    @property
    def diagonal(self) -> float:
        return self._diag

    def point_in_goal(self, x: float, y: float) -> bool:
        if self.goal is None:
            return False
        x1, y1, x2, y2 = self.goal
        return x1 <= x <= x2 and y1 <= y <= y2


def segment_distances(point: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Euclidean distance from a point to each segment, vectorized."""
    p = np.asarray(point, dtype=np.float64)
    a = segs[:, 0:2]
    b = segs[:, 2:4]
    ab = b - a
    ap = p[None, :] - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.where(denom > 0, np.einsum("ij,ij->i", ap, ab) / np.where(denom > 0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[:, None] * ab
    d = p[None, :] - closest
    return np.hypot(d[:, 0], d[:, 1])


def min_wall_distance(maze: Maze, x: float, y: float) -> float:
    return float(segment_distances(np.array([x, y]), maze.walls).min())


def ray_segment_hits(origin: np.ndarray, directions: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """First-hit distance for each ray direction against every segment.

    Returns an array of length len(directions); rays that miss everything get
    +inf. Standard 2D parametric ray/segment intersection, broadcast over the
    (ray, segment) grid.
    """
    o = np.asarray(origin, dtype=np.float64)
    d = np.asarray(directions, dtype=np.float64)  # (r, 2)
    a = segs[:, 0:2]  # (s, 2)
    e = segs[:, 2:4] - a  # segment direction

    # solve o + t*d = a + u*e  via cross products
    cross_de = d[:, None, 0] * e[None, :, 1] - d[:, None, 1] * e[None, :, 0]  # (r, s)
    ao = a[None, :, :] - o[None, None, :]  # (1, s, 2)
    cross_ao_e = ao[..., 0] * e[None, :, 1] - ao[..., 1] * e[None, :, 0]
    cross_ao_d = ao[..., 0] * d[:, None, 1] - ao[..., 1] * d[:, None, 0]

    with np.errstate(divide="ignore", invalid="ignore"):
        t = cross_ao_e / cross_de
        u = cross_ao_d / cross_de
    valid = (np.abs(cross_de) > 1e-12) & (t > 1e-9) & (u >= 0.0) & (u <= 1.0)
    t = np.where(valid, t, np.inf)
    return t.min(axis=1)


def parse_maze(text: str) -> Maze:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MazeFormatError("empty maze file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "maze" or head[1] != "v1":
        raise MazeFormatError(f"bad header line: {lines[0]!r}")
    try:
        width, height = float(head[2]), float(head[3])
    except ValueError:
        raise MazeFormatError(f"bad header dimensions: {lines[0]!r}") from None

    walls, goal, spawn = [], None, None
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        kind, args = parts[0], parts[1:]
        try:
            vals = [float(v) for v in args]
        except ValueError:
            raise MazeFormatError(f"line {i}: non-numeric field in {ln!r}") from None
        if kind == "wall" and len(vals) == 4:
            walls.append(vals)
        elif kind == "goal" and len(vals) == 4:
            goal = tuple(vals)
        elif kind == "spawn" and len(vals) == 3:
            spawn = (vals[0], vals[1], float(np.deg2rad(vals[2])))
        else:
            raise MazeFormatError(f"line {i}: unrecognized entry {ln!r}")
    if spawn is None:
        raise MazeFormatError("maze file lacks a spawn line")
    if not walls:
        raise MazeFormatError("maze file lacks walls")
    return Maze(width=width, height=height, walls=np.array(walls), spawn=spawn, goal=goal)


def format_maze(maze: Maze) -> str:
    out = [f"maze v1 {maze.width:g} {maze.height:g}"]
    for x1, y1, x2, y2 in maze.walls:
        out.append(f"wall {x1:g} {y1:g} {x2:g} {y2:g}")
    if maze.goal is not None:
        out.append("goal " + " ".join(f"{v:g}" for v in maze.goal))
    sx, sy, sh = maze.spawn
    out.append(f"spawn {sx:g} {sy:g} {np.rad2deg(sh):g}")
    return "\n".join(out) + "\n"


def load_maze(path) -> Maze:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_maze(fh.read())


def default_maze() -> Maze:
    """The shipped 40x40 ring course: inner block, eight spur walls, one goal."""
    text = (
        importlib.resources.files("pulsedrive.sim").joinpath("data/default_maze.txt").read_text()
    )
    return parse_maze(text)
