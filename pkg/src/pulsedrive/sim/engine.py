"""Car kinematics, steering-only control, collision events, seeded resets.

Steering is the sole control: the throttle is automatic, so the speed rises
toward a cap that shrinks with steering magnitude (straight = fast, hard
turn = slow). A step that lands the footprint on a wall reports a collision
and the state freezes until the caller resets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .maze import Maze, min_wall_distance, segment_distances


@dataclass(frozen=True)
class SimConfig:
    steering_angles_deg: tuple[float, ...] = (-30.0, -15.0, 0.0, 15.0, 30.0)
    steering_response_s: float = 0.5  # full angle applied as heading rate over this time
    v_max: float = 5.0
    accel: float = 2.0
    k_turn: float = 0.5
    dt: float = 0.05
    car_radius: float = 0.5
    spawn_jitter_pos: float = 0.5
    spawn_jitter_heading_deg: float = 10.0
    jitter: bool = True
    episode_cap: int = 1000

    def __post_init__(self):
        angles = self.steering_angles_deg
        if len(angles) < 3:
            raise ValueError("need at least 3 steering angles")
        if any(abs(a + b) > 1e-9 for a, b in zip(angles, reversed(angles))):
            raise ValueError("steering angle set must be symmetric about 0")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def n_actions(self) -> int:
        return len(self.steering_angles_deg)

    @property
    def straight_index(self) -> int:
        return len(self.steering_angles_deg) // 2

    @property
    def max_steer_deg(self) -> float:
        return max(abs(a) for a in self.steering_angles_deg)


@dataclass(frozen=True)
class CarState:
    x: float
    y: float
    heading: float  # radians, normalized to (-pi, pi]
    speed: float
    step_index: int = 0

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class StepEvents:
    collided: bool
    reached_goal: bool
    distance_to_wall: float


def normalize_heading(h: float) -> float:
    h = math.fmod(h + math.pi, 2.0 * math.pi)
    if h <= 0.0:
        h += 2.0 * math.pi
    return h - math.pi


def footprint_hits_wall(maze: Maze, x: float, y: float, radius: float) -> bool:
    return bool(min_wall_distance(maze, x, y) <= radius)


def distance_to_nearest_wall(state: CarState, maze: Maze, config: SimConfig) -> float:
    """Distance from the car footprint boundary to the nearest wall; zero when
    the footprint intersects a wall."""
    d = min_wall_distance(maze, state.x, state.y) - config.car_radius
    return max(0.0, d)


def step(state: CarState, steering_index: int, maze: Maze, config: SimConfig,
         dt: float | None = None) -> tuple[CarState, StepEvents]:
    """Advance one control step. Deterministic given inputs."""
    if dt is None:
        dt = config.dt
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not 0 <= steering_index < config.n_actions:
        raise ValueError(
            f"steering_index {steering_index} outside [0, {config.n_actions})"
        )

    # frozen after a collision: caller must reset
    if footprint_hits_wall(maze, state.x, state.y, config.car_radius):
        return state, StepEvents(collided=True, reached_goal=False, distance_to_wall=0.0)

    steer_deg = config.steering_angles_deg[steering_index]
    heading_rate = math.radians(steer_deg) / config.steering_response_s
    heading = normalize_heading(state.heading + heading_rate * dt)

    cap = config.v_max * (1.0 - config.k_turn * abs(steer_deg) / config.max_steer_deg)
    speed = min(max(state.speed + config.accel * dt, 0.0), cap)

    x = state.x + speed * math.cos(heading) * dt
    y = state.y + speed * math.sin(heading) * dt
    new_state = CarState(x=x, y=y, heading=heading, speed=speed,
                         step_index=state.step_index + 1)

    collided = footprint_hits_wall(maze, x, y, config.car_radius)
    if collided:
        return new_state, StepEvents(collided=True, reached_goal=False, distance_to_wall=0.0)

    reached_goal = maze.point_in_goal(x, y)
    dist = distance_to_nearest_wall(new_state, maze, config)
    return new_state, StepEvents(collided=False, reached_goal=reached_goal, distance_to_wall=dist)


def reset(maze: Maze, seed: int, config: SimConfig) -> CarState:
    """Spawn the car, with seeded collision-free jitter when enabled."""
    sx, sy, sh = maze.spawn
    if not config.jitter:
        return CarState(x=sx, y=sy, heading=normalize_heading(sh), speed=0.0, step_index=0)
    rng = np.random.default_rng(seed)
    jlim = config.spawn_jitter_pos
    hlim = math.radians(config.spawn_jitter_heading_deg)
    for _ in range(256):
        x = sx + rng.uniform(-jlim, jlim)
        y = sy + rng.uniform(-jlim, jlim)
        h = normalize_heading(sh + rng.uniform(-hlim, hlim))
        if not footprint_hits_wall(maze, x, y, config.car_radius):
            return CarState(x=x, y=y, heading=h, speed=0.0, step_index=0)
    raise ValueError("could not find a collision-free jittered spawn; check spawn_pose")


def validate_maze(maze: Maze, config: SimConfig) -> None:
    """Sanity checks: enclosing boundary, collision-free spawn, goal off-wall."""
    for edge in _boundary_edges(maze):
        if not _edge_covered(maze.walls, *edge):
            raise ValueError(f"bounds edge {edge} is not fully covered by walls")
    sx, sy, _ = maze.spawn
    margin = config.car_radius + (config.spawn_jitter_pos if config.jitter else 0.0)
    if min_wall_distance(maze, sx, sy) <= margin:
        raise ValueError("spawn_pose is too close to a wall for the car footprint")
    if maze.goal is not None:
        x1, y1, x2, y2 = maze.goal
        corners = np.array([[x1, y1], [x2, y1], [x2, y2], [x1, y2]])
        mid = corners.mean(axis=0)
        for p in list(corners) + [mid]:
            if segment_distances(p, maze.walls).min() < 1e-9:
                raise ValueError("goal region touches a wall")


def _boundary_edges(maze: Maze):
    w, h = maze.width, maze.height
    return [
        ("x", 0.0, 0.0, w),   # axis fixed at value, span lo..hi
        ("x", h, 0.0, w),
        ("y", 0.0, 0.0, h),
        ("y", w, 0.0, h),
    ]


def _edge_covered(walls: np.ndarray, axis: str, value: float, lo: float, hi: float) -> bool:
    """True when collinear wall segments jointly cover [lo, hi] on the edge."""
    spans = []
    for x1, y1, x2, y2 in walls:
        if axis == "x" and abs(y1 - value) < 1e-9 and abs(y2 - value) < 1e-9:
            spans.append((min(x1, x2), max(x1, x2)))
        elif axis == "y" and abs(x1 - value) < 1e-9 and abs(x2 - value) < 1e-9:
            spans.append((min(y1, y2), max(y1, y2)))
    spans.sort()
    covered = lo
    for a, b in spans:
        if a > covered + 1e-9:
            return False
        covered = max(covered, b)
    return covered >= hi - 1e-9
