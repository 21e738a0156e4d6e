"""Response enhancement and SSR-weighted pyramid fusion.

Each layer response is contrast-stretched with a gamma power, bridged into
per-row upper envelopes (so a flaw's peak/valley response pair merges into one
blob), then the three layers are blended coarse-to-fine with SSR-driven
weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import DimensionMismatch


@dataclass(frozen=True)
class EnhancedLayer:
    gamma_image: np.ndarray
    envelope_image: np.ndarray
    layer_index: int


@dataclass(frozen=True)
class FusedImage:
    pixels: np.ndarray
    weights_used: tuple[float, float, float]


def gamma_enhance(response: np.ndarray, gamma: float) -> np.ndarray:
    """Rescale a response to [0, 1] by its own maximum, then raise to gamma.

    An all-zero response passes through as zeros.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    response = np.asarray(response, dtype=float)
    peak = response.max() if response.size else 0.0
    if peak <= 0:
        return np.zeros_like(response)
    return (response / peak) ** gamma


def _row_maxima(row: np.ndarray) -> list[int]:
    """Indices of interior local maxima; a plateau counts once at its center."""
    n = row.size
    maxima = []
    i = 1
    while i < n - 1:
        j = i
        while j + 1 < n and row[j + 1] == row[i]:
            j += 1
        # plateau [i, j]; maximal run of equal values
        if j < n - 1 and row[i - 1] < row[i] and row[j + 1] < row[j]:
            maxima.append((i + j) // 2)
        i = j + 1
    return maxima


def envelope(enhanced: np.ndarray) -> np.ndarray:
    """Per-row upper envelope along the axial axis.

    Local maxima are linearly interpolated across the row, the first/last
    maximum is held outward, and the result never drops below the input.
    Rows without an interior maximum pass through unchanged.
    """
    enhanced = np.asarray(enhanced, dtype=float)
    out = enhanced.copy()
    cols = np.arange(enhanced.shape[1])
    for r in range(enhanced.shape[0]):
        row = enhanced[r]
        maxima = _row_maxima(row)
        if not maxima:
            continue
        interp = np.interp(cols, maxima, row[maxima])
        out[r] = np.maximum(interp, row)
    return out


def upsample_bilinear(src: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Bilinear resize to an exact target shape (area-aligned sample centers)."""
    src = np.asarray(src, dtype=float)
    ht, wt = shape
    hs, ws = src.shape
    rows = np.clip((np.arange(ht) + 0.5) * (hs / ht) - 0.5, 0, hs - 1)
    cols = np.clip((np.arange(wt) + 0.5) * (ws / wt) - 0.5, 0, ws - 1)
    grid = np.meshgrid(rows, cols, indexing="ij")
    return map_coordinates(src, grid, order=1, mode="nearest")


def _check_halvings(f1: np.ndarray, f2: np.ndarray, f3: np.ndarray):
    if f2.shape != (f1.shape[0] // 2, f1.shape[1] // 2) or f3.shape != (
        f2.shape[0] // 2,
        f2.shape[1] // 2,
    ):
        raise DimensionMismatch(
            f"layer shapes {f1.shape}, {f2.shape}, {f3.shape} are not successive halvings"
        )


def fuse(
    envelopes: tuple[np.ndarray, np.ndarray, np.ndarray],
    weights: tuple[float, float, float],
    mode: str = "recursive",
) -> FusedImage:
    """Blend three envelope layers into one full-resolution image.

    recursive: G3 = F3; G2 = w2*F2 + (1-w2)*up(G3); G1 = w1*F1 + (1-w1)*up(G2).
    flat:      w1*F1 + w2*up(F2) + w3*up(up(F3)), all upsampled to full size.
    """
    f1, f2, f3 = (np.asarray(f, dtype=float) for f in envelopes)
    _check_halvings(f1, f2, f3)
    w1, w2, w3 = weights
    if mode == "recursive":
        g2 = w2 * f2 + (1.0 - w2) * upsample_bilinear(f3, f2.shape)
        g1 = w1 * f1 + (1.0 - w1) * upsample_bilinear(g2, f1.shape)
    elif mode == "flat":
        g1 = (
            w1 * f1
            + w2 * upsample_bilinear(f2, f1.shape)
            + w3 * upsample_bilinear(upsample_bilinear(f3, f2.shape), f1.shape)
        )
    else:
        raise ValueError(f"unknown fusion mode {mode!r}")
    return FusedImage(pixels=g1, weights_used=(w1, w2, w3))


def enhance_layer(response: np.ndarray, gamma: float, layer_index: int) -> EnhancedLayer:
    gamma_image = gamma_enhance(response, gamma)
    return EnhancedLayer(
        gamma_image=gamma_image,
        envelope_image=envelope(gamma_image),
        layer_index=layer_index,
    )
