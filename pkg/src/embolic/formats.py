"""Space files (text and ``EMB1`` binary) and their metadata sidecars."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .exceptions import SpaceValidationError
from .space import MetricMeasureSpace

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sQQd")  # magic, m, n, inj


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_space(space: MetricMeasureSpace, path, binary=False):
    """Text layout: ``m n inj``, then the m weights, then m distance rows."""
    path = Path(path)
    if binary:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, space.point_count, space.dim, space.inj))
            fh.write(space.weight.astype("<f8").tobytes())
            fh.write(np.ascontiguousarray(space.dist, dtype="<f8").tobytes())
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{space.point_count} {space.dim} {_fmt(space.inj)}\n")
        fh.write(" ".join(map(_fmt, space.weight)) + "\n")
        for row in space.dist:
            fh.write(" ".join(map(_fmt, row)) + "\n")


def _bad(path, msg):
    return SpaceValidationError(f"malformed space file {path}: {msg}")


def read_space(path, name=None) -> MetricMeasureSpace:
    path = Path(path)
    raw = path.read_bytes()
    name = name or path.stem
    if raw[:4] == MAGIC:
        if len(raw) < _HEADER.size:
            raise _bad(path, "truncated header")
        _, m, n, inj = _HEADER.unpack_from(raw)
        body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
        if body.size != m + m * m:
            raise _bad(path, f"expected {m + m * m} float64 values, found {body.size}")
        weight, dist = body[:m], body[m:].reshape(m, m)
    else:
        lines = [ln for ln in raw.decode("utf-8").splitlines() if ln.strip()]
        if not lines:
            raise _bad(path, "empty file")
        try:
            head = lines[0].split()
            m, n, inj = int(head[0]), int(head[1]), float(head[2])
            if len(head) != 3:
                raise ValueError
        except (ValueError, IndexError):
            raise _bad(path, "line 1 must be 'm n inj'") from None
        if len(lines) != m + 2:
            raise _bad(path, f"expected {m + 2} lines, found {len(lines)}")
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            try:
                vals = [float(x) for x in line.split()]
            except ValueError:
                raise _bad(path, f"line {lineno}: non-numeric entry") from None
            if len(vals) != m:
                raise _bad(path, f"line {lineno}: expected {m} values, found {len(vals)}")
            rows.append(vals)
        weight, dist = np.array(rows[0]), np.array(rows[1:])
    try:
        return MetricMeasureSpace(dist, weight, dim=n, inj=inj, name=name)
    except ValueError as exc:
        raise _bad(path, str(exc)) from None


def space_metadata(space: MetricMeasureSpace) -> dict:
    return {
        "name": space.name,
        "point_count": space.point_count,
        "dim": space.dim,
        "inj": space.inj,
        "vol": space.volume,
        "betti": list(space.betti) if space.betti is not None else None,
    }


def write_metadata(space: MetricMeasureSpace, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(space_metadata(space), fh, indent=2)
        fh.write("\n")


def read_metadata(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
