"""Space-time diagrams as binary PPM (P6) images."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .dillmap import DillMap, orbit_rows
from .words import InfiniteWordSpec

# letter 0 red, letter 1 black, then eight more colors; larger letters cycle through those eight
PALETTE = np.array([
    (0xCC, 0x00, 0x00),
    (0x00, 0x00, 0x00),
    (0xFF, 0xFF, 0xFF),
    (0x00, 0x66, 0xCC),
    (0x00, 0xAA, 0x00),
    (0xFF, 0xCC, 0x00),
    (0xAA, 0x00, 0xAA),
    (0x00, 0xAA, 0xAA),
    (0x88, 0x88, 0x88),
    (0xFF, 0x88, 0x00),
], dtype=np.uint8)


def colors(letters: np.ndarray) -> np.ndarray:
    idx = np.where(letters < 2, letters, 2 + (letters.astype(np.int64) - 2) % 8)
    return PALETTE[idx]


def ppm_bytes(rows: np.ndarray) -> bytes:
    """P6 image with one pixel per letter, row ``t`` on image row ``t``."""
    height, width = rows.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + colors(rows).tobytes()


def space_time(F: DillMap, x: InfiniteWordSpec, steps: int, width: int,
               cap: int | None = None) -> bytes:
    if steps < 1 or width < 1:
        raise ValueError("steps and width must be positive")
    return ppm_bytes(orbit_rows(F, x, steps, width, cap))


def write_atomic(path, data: bytes | str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
