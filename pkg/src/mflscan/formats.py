"""File formats: record CSV/binary, PGM debug dumps, ground-truth and
detection JSON."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .ingest import MflRecord
from .localize import Detection
from .synth import GroundTruthFlaw

MAGIC = b"MFL1"
SCHEMA_VERSION = 1


def write_record_binary(path: Path | str, record: MflRecord):
    """magic 'MFL1', u32 M, u32 N, f64 fs, f64 v, then M*N f64 row-major."""
    samples = np.ascontiguousarray(record.samples, dtype="<f8")
    m, n = samples.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IIdd", m, n, record.sampling_rate_hz, record.inspection_speed_mps))
        fh.write(samples.tobytes())


def read_record_binary(path: Path | str, label: str | None = None) -> MflRecord:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 4 + 24 or raw[:4] != MAGIC:
        raise FormatError(f"{path}: not an MFL1 record")
    m, n, fs, v = struct.unpack_from("<IIdd", raw, 4)
    expected = 4 + 24 + 8 * m * n
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(raw)}")
    samples = np.frombuffer(raw, dtype="<f8", offset=28).reshape(m, n)
    try:
        return MflRecord(samples, fs, v, label=label or path.stem)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_record_csv(path: Path | str, record: MflRecord):
    with open(path, "w") as fh:
        fh.write(
            f"# sampling_rate_hz={record.sampling_rate_hz}, "
            f"speed_mps={record.inspection_speed_mps}, "
            f"channels={record.channel_count}\n"
        )
        for row in record.samples:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_record_csv(path: Path | str, label: str | None = None) -> MflRecord:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise FormatError(f"{path}:1: missing metadata header")
        meta = {}
        for part in header.lstrip("#").split(","):
            if "=" not in part:
                raise FormatError(f"{path}:1: malformed header field {part!r}")
            key, value = part.split("=", 1)
            meta[key.strip()] = value.strip()
        try:
            fs = float(meta["sampling_rate_hz"])
            v = float(meta["speed_mps"])
            n = int(meta["channels"])
        except (KeyError, ValueError) as exc:
            raise FormatError(f"{path}:1: bad header: {exc}") from exc
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            values = line.split(",")
            if len(values) != n:
                raise FormatError(
                    f"{path}:{lineno}: expected {n} values, found {len(values)}"
                )
            try:
                rows.append([float(v) for v in values])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise FormatError(f"{path}: no sample rows")
    try:
        return MflRecord(np.array(rows), fs, v, label=label or path.stem)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def read_record(path: Path | str) -> MflRecord:
    """Dispatch on the magic bytes: binary MFL1 or headered CSV."""
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == MAGIC:
        return read_record_binary(path)
    return read_record_csv(path)


def write_pgm(path: Path | str, image: np.ndarray, *, signed: bool):
    """8-bit binary PGM. Signed images map [-1,1] to [0,255]; unsigned images
    are min-max scaled for display."""
    image = np.asarray(image, dtype=float)
    if signed:
        scaled = (image + 1.0) / 2.0
    else:
        lo, hi = image.min(), image.max()
        scaled = (image - lo) / (hi - lo) if hi > lo else np.zeros_like(image)
    pixels = np.clip(np.round(255.0 * scaled), 0, 255).astype(np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def write_ground_truth(path: Path | str, flaws: list[GroundTruthFlaw]):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "flaws": [
            {
                "axial_m": flaw.axial_position_m,
                "extent_m": flaw.axial_extent_m,
                "channel": flaw.radial_center_channel,
                "spread_channels": flaw.radial_spread_channels,
                "amplitude": flaw.amplitude,
            }
            for flaw in flaws
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_ground_truth(path: Path | str) -> list[GroundTruthFlaw]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
        return [
            GroundTruthFlaw(
                axial_position_m=entry["axial_m"],
                axial_extent_m=entry["extent_m"],
                radial_center_channel=entry.get("channel", 8.0),
                radial_spread_channels=entry.get("spread_channels", 2.0),
                amplitude=entry["amplitude"],
            )
            for entry in payload["flaws"]
        ]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"{path}: bad ground-truth file: {exc}") from exc


def write_detections(
    path: Path | str, record_label: str, f_spatial: float, detections: list[Detection]
):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "record": record_label,
        "f_spatial": f_spatial,
        "detections": [
            {
                "segment": det.segment_index,
                "box": list(det.box),
                "axial_m": det.axial_position_m,
                "axial_interval_m": [det.axial_start_m, det.axial_end_m],
                "score": det.score,
            }
            for det in detections
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_detections(path: Path | str) -> tuple[float, list[Detection]]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
        detections = [
            Detection(
                box=tuple(entry["box"]),
                axial_position_m=entry["axial_m"],
                score=entry["score"],
                segment_index=entry["segment"],
                axial_start_m=entry["axial_interval_m"][0],
                axial_end_m=entry["axial_interval_m"][1],
            )
            for entry in payload["detections"]
        ]
        return payload["f_spatial"], detections
    except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"{path}: bad detections file: {exc}") from exc
