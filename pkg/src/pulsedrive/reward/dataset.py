"""Labeled frame sessions: on-disk format, loading, and chronological splits.

Session directory layout:

    session.json   metadata (seed, driver, fps, frame_side, counts, ...)
    frames.u8      magic "FRM1", uint32 count, uint32 side, then
                   count*side*side bytes, row-major, 1 byte per pixel
    labels.csv     frame_index,timestamp_s,amplitude
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FRAMES_MAGIC = b"FRM1"


class SessionSchemaError(ValueError):
    pass


@dataclass
class Session:
    frames_u8: np.ndarray  # (n, side, side) uint8
    labels: np.ndarray  # (n,) float in [0,1]
    timestamps: np.ndarray  # (n,) seconds, 20 fps spacing
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.frames_u8 = np.asarray(self.frames_u8, dtype=np.uint8)
        self.labels = np.asarray(self.labels, dtype=np.float64)
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        if self.frames_u8.ndim != 3 or self.frames_u8.shape[1] != self.frames_u8.shape[2]:
            raise SessionSchemaError("frames must be (n, side, side)")
        n = len(self.frames_u8)
        if len(self.labels) != n or len(self.timestamps) != n:
            raise SessionSchemaError(
                f"frame/label/timestamp counts differ: {n}/{len(self.labels)}/{len(self.timestamps)}"
            )
        if n and (self.labels.min() < 0.0 or self.labels.max() > 1.0):
            raise SessionSchemaError("labels must lie in [0,1]")

    def __len__(self) -> int:
        return len(self.frames_u8)

    @property
    def side(self) -> int:
        return int(self.frames_u8.shape[1])


def save_session(session: Session, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "frames.u8", "wb") as fh:
        fh.write(FRAMES_MAGIC)
        fh.write(struct.pack("<II", len(session), session.side))
        fh.write(session.frames_u8.tobytes())

    with open(out / "labels.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame_index", "timestamp_s", "amplitude"])
        for i, (t, a) in enumerate(zip(session.timestamps, session.labels)):
            writer.writerow([i, repr(float(t)), repr(float(a))])

    meta = dict(session.metadata)
    meta.update({"n_frames": len(session), "frame_side": session.side})
    with open(out / "session.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return out


def load_session(path) -> Session:
    root = Path(path)
    for name in ("session.json", "frames.u8", "labels.csv"):
        if not (root / name).exists():
            raise SessionSchemaError(f"session directory missing {name}")

    with open(root / "session.json", "r", encoding="utf-8") as fh:
        meta = json.load(fh)

    raw = (root / "frames.u8").read_bytes()
    if raw[:4] != FRAMES_MAGIC:
        raise SessionSchemaError(f"frames.u8 bad magic {raw[:4]!r}")
    count, side = struct.unpack("<II", raw[4:12])
    expected = 12 + count * side * side
    if len(raw) != expected:
        raise SessionSchemaError(
            f"frames.u8 holds {len(raw)} bytes, header implies {expected}"
        )
    frames = np.frombuffer(raw[12:], dtype=np.uint8).reshape(count, side, side)

    idxs, ts, labels = [], [], []
    with open(root / "labels.csv", "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["frame_index", "timestamp_s", "amplitude"]:
            raise SessionSchemaError(f"labels.csv unexpected header {header!r}")
        for row in reader:
            idxs.append(int(row[0]))
            ts.append(float(row[1]))
            labels.append(float(row[2]))
    if idxs != list(range(count)):
        raise SessionSchemaError("labels.csv frame_index column is not 0..n-1")
    if meta.get("n_frames") not in (None, count):
        raise SessionSchemaError("session.json n_frames disagrees with frames.u8")

    return Session(frames_u8=frames, labels=np.array(labels),
                   timestamps=np.array(ts), metadata=meta)


@dataclass
class DataSplit:
    frames_u8: np.ndarray
    labels: np.ndarray
    timestamps: np.ndarray
    session_ids: np.ndarray

    def __len__(self) -> int:
        return len(self.frames_u8)


def split_chronological(sessions: list[Session], train_fraction: float = 0.75
                        ) -> tuple[DataSplit, DataSplit]:
    """Per session, the first floor(75%) of frames go to train and the rest to
    test; no shuffling across the boundary (batching shuffles train later)."""
    if not sessions:
        raise ValueError("no sessions given")
    tr_f, tr_l, tr_t, tr_s = [], [], [], []
    te_f, te_l, te_t, te_s = [], [], [], []
    for sid, s in enumerate(sessions):
        if len(s) < 8:
            raise ValueError(f"session {sid} has {len(s)} frames; need at least 8")
        cut = int(len(s) * train_fraction)
        tr_f.append(s.frames_u8[:cut]); te_f.append(s.frames_u8[cut:])
        tr_l.append(s.labels[:cut]); te_l.append(s.labels[cut:])
        tr_t.append(s.timestamps[:cut]); te_t.append(s.timestamps[cut:])
        tr_s.append(np.full(cut, sid)); te_s.append(np.full(len(s) - cut, sid))
    return (
        DataSplit(np.concatenate(tr_f), np.concatenate(tr_l),
                  np.concatenate(tr_t), np.concatenate(tr_s)),
        DataSplit(np.concatenate(te_f), np.concatenate(te_l),
                  np.concatenate(te_t), np.concatenate(te_s)),
    )
