"""Deterministic 2D top-down driving simulator."""

from .engine import (
    CarState,
    SimConfig,
    StepEvents,
    distance_to_nearest_wall,
    footprint_hits_wall,
    normalize_heading,
    reset,
    step,
    validate_maze,
)
from .maze import (
    Maze,
    MazeFormatError,
    default_maze,
    format_maze,
    load_maze,
    parse_maze,
)
from .render import (
    Frame,
    RenderConfig,
    frame_to_u8,
    ray_distances,
    render_ego_view,
    u8_to_frame,
    wall_column_height,
)

__all__ = [
    "CarState", "SimConfig", "StepEvents", "Maze", "MazeFormatError",
    "Frame", "RenderConfig",
    "step", "reset", "distance_to_nearest_wall", "footprint_hits_wall",
    "normalize_heading", "validate_maze",
    "parse_maze", "format_maze", "load_maze", "default_maze",
    "render_ego_view", "ray_distances", "wall_column_height",
    "frame_to_u8", "u8_to_frame",
]
