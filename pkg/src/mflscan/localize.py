"""Adaptive thresholding, binarization, and connected-component localization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import label

from .enhance import FusedImage

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class Detection:
    """One localized flaw region.

    box is (axial_start_px, axial_end_px, radial_start_px, radial_end_px),
    inclusive, in segment-local pixel coordinates. axial_start_m/axial_end_m
    are the box edges mapped to rope meters (NaN when no physical context was
    supplied).
    """

    box: tuple[int, int, int, int]
    axial_position_m: float
    score: float
    segment_index: int
    axial_start_m: float = float("nan")
    axial_end_m: float = float("nan")


@dataclass(frozen=True)
class ThresholdScan:
    thresholds: tuple[float, ...]
    region_counts: tuple[int, ...]
    chosen_threshold: float


def adaptive_threshold(fused: FusedImage, step: float = 0.05) -> ThresholdScan:
    """Sweep binarization thresholds and pick the most stable one.

    The fused image is normalized by its max, then every threshold in
    {step, 2*step, ...} < 1 is applied and the 8-connected white regions are
    counted. The chosen threshold is the midpoint of the longest contiguous
    plateau of constant nonzero region count; ties break toward the higher
    plateau. An all-zero image yields an empty scan with sentinel 1.0.
    """
    pixels = np.asarray(fused.pixels, dtype=float)
    peak = pixels.max() if pixels.size else 0.0
    if peak <= 0:
        return ThresholdScan(thresholds=(), region_counts=(), chosen_threshold=1.0)
    norm = pixels / peak
    count = int(math.ceil(1.0 / step)) - 1
    thresholds = [round((i + 1) * step, 12) for i in range(count)]
    counts = []
    for t in thresholds:
        _, n_regions = label(norm >= t, structure=EIGHT_CONNECTED)
        counts.append(n_regions)

    best = None  # (length, start, end)
    i = 0
    while i < len(counts):
        j = i
        while j + 1 < len(counts) and counts[j + 1] == counts[i]:
            j += 1
        if counts[i] > 0:
            run = (j - i + 1, i, j)
            if best is None or run[0] >= best[0]:
                best = run
        i = j + 1
    if best is None:
        chosen = 1.0
    else:
        chosen = (thresholds[best[1]] + thresholds[best[2]]) / 2.0
    return ThresholdScan(
        thresholds=tuple(thresholds),
        region_counts=tuple(counts),
        chosen_threshold=chosen,
    )


def binarize(fused: FusedImage, threshold: float) -> np.ndarray:
    """White (1) wherever the max-normalized fused value reaches the threshold."""
    if not 0 < threshold <= 1:
        raise ValueError("threshold must lie in (0, 1]")
    pixels = np.asarray(fused.pixels, dtype=float)
    peak = pixels.max() if pixels.size else 0.0
    if peak <= 0:
        return np.zeros(pixels.shape, dtype=np.uint8)
    return (pixels / peak >= threshold).astype(np.uint8)


def _wrap_merge(labeled: np.ndarray, n_regions: int) -> np.ndarray:
    """Union labels that touch across the top/bottom seam (circular radial axis)."""
    parent = list(range(n_regions + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    top, bottom = labeled[0], labeled[-1]
    width = labeled.shape[1]
    for c in range(width):
        if not top[c]:
            continue
        for dc in (-1, 0, 1):
            cc = c + dc
            if 0 <= cc < width and bottom[cc]:
                ra, rb = find(top[c]), find(bottom[cc])
                if ra != rb:
                    parent[rb] = ra
    lut = np.array([find(i) for i in range(n_regions + 1)])
    return lut[labeled]


def extract_components(
    binary: np.ndarray,
    intensity: np.ndarray | None = None,
    min_area_px: int = 4,
    *,
    segment_index: int = 0,
    origin_sample: int = 0,
    f_spatial: float = 0.0,
    radial_wrap: bool = False,
) -> list[Detection]:
    """8-connected component labeling with a minimum-area filter.

    Each surviving component becomes a Detection with a tight bounding box and
    the mean intensity over the component's pixels as score. When f_spatial is
    supplied, the box is also mapped to rope meters through origin_sample.
    With radial_wrap, components touching across the top/bottom edge are
    merged (the radial axis is circular on a ring sensor array).
    """
    binary = np.asarray(binary)
    if intensity is None:
        intensity = binary.astype(float)
    else:
        intensity = np.asarray(intensity, dtype=float)
    labeled, n_regions = label(binary, structure=EIGHT_CONNECTED)
    if radial_wrap and n_regions > 1:
        labeled = _wrap_merge(labeled, n_regions)
    detections = []
    for idx in np.unique(labeled):
        if idx == 0:
            continue
        mask = labeled == idx
        if mask.sum() < min_area_px:
            continue
        rows, cols = np.nonzero(mask)
        r0, r1 = int(rows.min()), int(rows.max())
        a0, a1 = int(cols.min()), int(cols.max())
        score = float(intensity[mask].mean())
        if f_spatial > 0:
            start_m = (origin_sample + a0) / f_spatial
            end_m = (origin_sample + a1 + 1) / f_spatial
            center_m = (start_m + end_m) / 2.0
        else:
            start_m = end_m = center_m = float("nan")
        detections.append(
            Detection(
                box=(a0, a1, r0, r1),
                axial_position_m=center_m,
                score=score,
                segment_index=segment_index,
                axial_start_m=start_m,
                axial_end_m=end_m,
            )
        )
    detections.sort(key=lambda d: d.box[0])
    return detections
