"""Raw record preprocessing: detrend, normalize, radial interpolation, segmentation.

Records arrive as M axial samples x N channels. Preprocessing turns one record
into a sequence of fixed-size H x P images (rows radial, columns axial) with
pixel values in [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import RecordTooShort


@dataclass(frozen=True)
class MflRecord:
    """One multi-channel MFL record: M axial samples x N channels."""

    samples: np.ndarray
    sampling_rate_hz: float
    inspection_speed_mps: float
    label: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 2 or samples.shape[1] < 2:
            raise ValueError("samples must be an M x N matrix with N >= 2")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.sampling_rate_hz <= 0 or self.inspection_speed_mps <= 0:
            raise ValueError("sampling rate and inspection speed must be > 0")

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def channel_count(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class MflImage:
    """One H x P image segment (rows radial, columns axial) in [-1, 1]."""

    pixels: np.ndarray
    segment_index: int
    origin_sample: int

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def length(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class PreprocessConfig:
    half_span_la: int = 100
    image_height: int = 200
    segment_length: int = 200
    interpolation: str = "cubic_spline"

    def __post_init__(self):
        if self.half_span_la < 1:
            raise ValueError("half_span_la must be >= 1")
        if self.interpolation != "cubic_spline":
            raise ValueError(f"unknown interpolation {self.interpolation!r}")


def detrend(record: MflRecord, cfg: PreprocessConfig) -> np.ndarray:
    """Subtract a centered moving-average baseline from every channel.

    The baseline at sample m is the mean over the window [m-La, m+La-1].
    Near the record edges the window is truncated to the available samples
    and the divisor shrinks accordingly.
    """
    x = record.samples
    m_count = x.shape[0]
    la = cfg.half_span_la
    if m_count < 2 * la:
        raise RecordTooShort(
            f"record has {m_count} samples, detrending needs at least {2 * la}"
        )
    csum = np.vstack([np.zeros((1, x.shape[1])), np.cumsum(x, axis=0)])
    idx = np.arange(m_count)
    lo = np.maximum(idx - la, 0)
    hi = np.minimum(idx + la - 1, m_count - 1)
    window_sum = csum[hi + 1] - csum[lo]
    window_len = (hi - lo + 1).astype(float)[:, None]
    baseline = window_sum / window_len
    return x - baseline


def normalize(y: np.ndarray) -> np.ndarray:
    """Affine-map the global [min, max] of the record to [-1, 1].

    A flat record (max == min) maps to all zeros.
    """
    y = np.asarray(y, dtype=float)
    lo = y.min()
    hi = y.max()
    if hi == lo:
        return np.zeros_like(y)
    return 2.0 * (y - lo) / (hi - lo) - 1.0


def interpolate_radial(normalized: np.ndarray, height: int) -> np.ndarray:
    """Resample each axial row from N channels to `height` radial positions.

    The channel axis is treated as circular (the sensors form a ring, so the
    last channel neighbors the first); a periodic cubic spline interpolates
    each row and the result is clamped back to [-1, 1].
    """
    data = np.asarray(normalized, dtype=float)
    n = data.shape[1]
    if n < 2:
        raise ValueError("need at least 2 channels")
    if height < n:
        raise ValueError("target height must be >= channel count")
    knots = np.arange(n + 1, dtype=float)
    wrapped = np.concatenate([data, data[:, :1]], axis=1)
    spline = CubicSpline(knots, wrapped, axis=1, bc_type="periodic")
    positions = np.arange(height) * (n / height)
    out = spline(positions)
    return np.clip(out, -1.0, 1.0)


def segment(f: np.ndarray, length: int) -> list[MflImage]:
    """Cut the interpolated M x H matrix into floor(M/P) non-overlapping images.

    Each segment is transposed into image orientation (H rows radial, P columns
    axial). A trailing remainder shorter than P is dropped.
    """
    f = np.asarray(f, dtype=float)
    m_count = f.shape[0]
    if m_count < length:
        raise RecordTooShort(
            f"record has {m_count} interpolated samples, segmenting needs {length}"
        )
    count = m_count // length
    images = []
    for i in range(count):
        start = i * length
        block = f[start : start + length].T.copy()
        images.append(MflImage(pixels=block, segment_index=i + 1, origin_sample=start))
    return images


def preprocess(record: MflRecord, cfg: PreprocessConfig | None = None) -> list[MflImage]:
    """Full preprocessing chain: detrend -> normalize -> interpolate -> segment."""
    cfg = cfg or PreprocessConfig()
    y = detrend(record, cfg)
    norm = normalize(y)
    f = interpolate_radial(norm, cfg.image_height)
    return segment(f, cfg.segment_length)
