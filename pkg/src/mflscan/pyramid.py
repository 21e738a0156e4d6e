"""Three-layer image pyramid and flaw-template cross-correlation.

A flaw shows up as a valley-then-peak pair along the rope axis, i.e. a dark
area immediately followed by a bright area in image coordinates. The template
encodes exactly that: -1 columns on the left, +1 columns on the right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate2d

from .errors import ImageTooSmall, LayerSmallerThanKernel
from .ingest import MflImage


@dataclass(frozen=True)
class ImagePyramid:
    """Layer 1 is the original image; layers 2 and 3 are repeated 2x2 poolings."""

    layers: tuple[np.ndarray, np.ndarray, np.ndarray]
    segment_index: int


@dataclass(frozen=True)
class FlawTemplate:
    kernel: np.ndarray
    size: int


def _pool2(img: np.ndarray) -> np.ndarray:
    """2x2 non-overlapping average pooling; odd trailing row/column dropped."""
    h, w = img.shape
    h2, w2 = h // 2, w // 2
    trimmed = img[: 2 * h2, : 2 * w2]
    return trimmed.reshape(h2, 2, w2, 2).mean(axis=(1, 3))


def build_pyramid(img: MflImage) -> ImagePyramid:
    pixels = np.asarray(img.pixels, dtype=float)
    if pixels.shape[0] < 4 or pixels.shape[1] < 4:
        raise ImageTooSmall(f"image {pixels.shape} too small for a 3-layer pyramid")
    layer2 = _pool2(pixels)
    layer3 = _pool2(layer2)
    return ImagePyramid(layers=(pixels, layer2, layer3), segment_index=img.segment_index)


def build_template(size: int) -> FlawTemplate:
    """Axially antisymmetric K x K template: left half -1, right half +1.

    Odd sizes get a zero center column so the entries always sum to zero,
    giving zero response on constant regions.
    """
    if size < 2:
        raise ValueError("template size must be >= 2")
    kernel = np.zeros((size, size))
    half = size // 2
    kernel[:, :half] = -1.0
    kernel[:, size - half :] = 1.0
    return FlawTemplate(kernel=kernel, size=size)


def match(layer: np.ndarray, template: FlawTemplate) -> np.ndarray:
    """Cross-correlate a pyramid layer with the flaw template, same-size output.

    Axial (left/right) edges are padded by replicating the nearest interior
    column; radial (top/bottom) edges wrap circularly, matching the ring
    sensor geometry. The returned response is the elementwise absolute value.
    """
    layer = np.asarray(layer, dtype=float)
    k = template.size
    if layer.shape[0] < k or layer.shape[1] < k:
        raise LayerSmallerThanKernel(
            f"layer {layer.shape} smaller than kernel size {k}"
        )
    before = (k - 1) // 2
    after = k // 2
    padded = np.pad(layer, ((before, after), (0, 0)), mode="wrap")
    padded = np.pad(padded, ((0, 0), (before, after)), mode="edge")
    response = correlate2d(padded, template.kernel, mode="valid")
    return np.abs(response)
