"""File formats: CSV tables, binary PGM rasters, harmonics files, key = value configs."""

from __future__ import annotations

import csv
import math
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .potential import PeriodicPotential, PotentialError


class FormatError(ValueError):
    """Malformed input file."""


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a header row then ``rows``; ``path='-'`` writes to stdout."""
    if str(path) == "-":
        _write_rows(sys.stdout, header, rows)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(fh, header, rows)


def _write_rows(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else _fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def raster_rows(t_axis, x_axis, intensity):
    """(t, x, intensity) triples in row-major order."""
    for i, t in enumerate(t_axis):
        for j, x in enumerate(x_axis):
            yield t, x, intensity[i, j]


def field_rows(t_axis, x_axis, field):
    for i, t in enumerate(t_axis):
        for j, x in enumerate(x_axis):
            v = field[i, j]
            yield t, x, v.real, v.imag


def pgm_depth(intensity: np.ndarray) -> int:
    """8 bits unless the positive dynamic range exceeds 255:1."""
    data = np.asarray(intensity, dtype=float)
    top = data.max(initial=0.0)
    positive = data[data > 0]
    if top <= 0 or positive.size == 0:
        return 8
    return 16 if top / positive.min() > 255 else 8


def write_pgm(path, intensity: np.ndarray, bits: int | None = None) -> int:
    """Binary P5 image, intensity mapped linearly from [0, max] to [0, maxval].

    Returns the bit depth used.
    """
    data = np.asarray(intensity, dtype=float)
    if data.ndim != 2:
        raise ValueError("intensity must be 2-d")
    if not np.all(np.isfinite(data)) or data.min(initial=0.0) < 0:
        raise ValueError("intensity must be finite and non-negative")
    bits = bits or pgm_depth(data)
    if bits not in (8, 16):
        raise ValueError(f"PGM depth must be 8 or 16, got {bits}")
    maxval = 255 if bits == 8 else 65535
    top = data.max(initial=0.0)
    scaled = np.zeros(data.shape) if top == 0 else data / top * maxval
    pixels = np.rint(scaled).astype(">u2" if bits == 16 else np.uint8)
    rows, cols = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n{maxval}\n".encode("ascii"))
        fh.write(pixels.tobytes())
    return bits


def read_pgm(path) -> np.ndarray:
    """Inverse of :func:`write_pgm` (integer pixel values)."""
    raw = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while raw[pos:pos + 1].isspace():
            pos += 1
        if raw[pos:pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
            continue
        end = pos
        while not raw[end:end + 1].isspace():
            end += 1
        fields.append(raw[pos:end].decode("ascii"))
        pos = end
    if fields[0] != "P5":
        raise FormatError(f"not a binary PGM: magic {fields[0]!r}")
    cols, rows, maxval = map(int, fields[1:])
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    return np.frombuffer(raw[pos + 1:], dtype=dtype).reshape(rows, cols)


def read_harmonics(path) -> PeriodicPotential:
    """Lines ``l re im`` (l >= 0); '#' starts a comment."""
    harmonics = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if len(parts) != 3:
                    raise ValueError(f"expected 3 fields, got {len(parts)}")
                l, re_, im_ = int(parts[0]), float(parts[1]), float(parts[2])
                if not (math.isfinite(re_) and math.isfinite(im_)):
                    raise ValueError("non-finite coefficient")
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
            if l in harmonics:
                raise FormatError(f"{path}:{lineno}: harmonic {l} given twice")
            harmonics[l] = complex(re_, im_)
    try:
        return PeriodicPotential.from_nonnegative(harmonics)
    except PotentialError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_harmonics(path, V: PeriodicPotential) -> None:
    with open(path, "w") as fh:
        for l, re_, im_ in V.nonnegative_rows():
            fh.write(f"{l} {re_!r} {im_!r}\n")


def read_config(path) -> dict[str, str]:
    """``key = value`` lines; blank lines and '#' comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise FormatError(f"{path}:{lineno}: expected 'key = value'")
            out[key.strip().replace("-", "_")] = value.strip()
    return out
