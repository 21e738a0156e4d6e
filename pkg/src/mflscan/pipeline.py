"""End-to-end record processing: preprocessing through localized detections."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import formats
from .enhance import enhance_layer, fuse, FusedImage
from .ingest import MflImage, MflRecord, PreprocessConfig, preprocess
from .localize import Detection, adaptive_threshold, binarize, extract_components
from .pyramid import build_pyramid, build_template, match
from .ssr import AdaptiveConfig, SsrContext, build_context

FLAT_WEIGHTS = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


@dataclass
class PipelineResult:
    detections: list[Detection]
    context: SsrContext
    kernel_size: int
    chosen_thresholds: list[float] = field(default_factory=list)


def process_segment(
    image: MflImage,
    context: SsrContext,
    adaptive_cfg: AdaptiveConfig,
    *,
    method: str = "adaptive",
    fusion_mode: str = "recursive",
    min_area_px: int = 4,
    threshold_step: float = 0.05,
    dump_dir: Path | None = None,
) -> tuple[list[Detection], float]:
    """Run one segment through matching, enhancement, fusion, and localization.

    Returns the segment's detections and the threshold the stability scan
    chose. Pure function of its inputs; segments may be processed in parallel.
    """
    if method == "single_scale":
        template = build_template(adaptive_cfg.kernel_base)
        kernel_size = adaptive_cfg.kernel_base
        layers = [np.asarray(image.pixels, dtype=float)]
    else:
        template = build_template(context.kernel_size)
        kernel_size = context.kernel_size
        layers = list(build_pyramid(image).layers)

    enhanced = []
    for j, layer in enumerate(layers, start=1):
        response = match(layer, template)
        enhanced.append(enhance_layer(response, adaptive_cfg.gamma, j))

    if method == "single_scale":
        fused = FusedImage(pixels=enhanced[0].envelope_image, weights_used=(1.0, 0.0, 0.0))
    elif method == "unweighted_multiscale":
        fused = fuse(tuple(e.envelope_image for e in enhanced), FLAT_WEIGHTS, mode="flat")
    elif method == "adaptive":
        fused = fuse(
            tuple(e.envelope_image for e in enhanced), context.weights, mode=fusion_mode
        )
    else:
        raise ValueError(f"unknown method {method!r}")

    scan = adaptive_threshold(fused, step=threshold_step)
    if scan.chosen_threshold >= 1.0 and not scan.thresholds:
        binary = np.zeros(fused.pixels.shape, dtype=np.uint8)
    else:
        binary = binarize(fused, scan.chosen_threshold)
    norm_peak = fused.pixels.max()
    normalized = fused.pixels / norm_peak if norm_peak > 0 else fused.pixels
    detections = extract_components(
        binary,
        normalized,
        min_area_px=min_area_px,
        segment_index=image.segment_index,
        origin_sample=image.origin_sample,
        f_spatial=context.f_spatial,
        radial_wrap=True,
    )

    if dump_dir is not None:
        i = image.segment_index
        formats.write_pgm(dump_dir / f"seg{i}_fused.pgm", fused.pixels, signed=False)
        for j, (layer, enh) in enumerate(zip(layers, enhanced), start=1):
            formats.write_pgm(dump_dir / f"seg{i}_L{j}_raw.pgm", layer, signed=True)
            formats.write_pgm(
                dump_dir / f"seg{i}_L{j}_resp.pgm", enh.gamma_image, signed=False
            )
            formats.write_pgm(
                dump_dir / f"seg{i}_L{j}_env.pgm", enh.envelope_image, signed=False
            )

    return detections, scan.chosen_threshold


def process_record(
    record: MflRecord,
    preprocess_cfg: PreprocessConfig | None = None,
    adaptive_cfg: AdaptiveConfig | None = None,
    *,
    method: str = "adaptive",
    fusion_mode: str = "recursive",
    min_area_px: int = 4,
    threshold_step: float = 0.05,
    dump_dir: Path | None = None,
) -> PipelineResult:
    """Detect flaws in one record; deterministic for identical inputs."""
    preprocess_cfg = preprocess_cfg or PreprocessConfig()
    adaptive_cfg = adaptive_cfg or AdaptiveConfig()
    context = build_context(
        record.sampling_rate_hz, record.inspection_speed_mps, adaptive_cfg
    )
    images = preprocess(record, preprocess_cfg)
    kernel_size = (
        adaptive_cfg.kernel_base if method == "single_scale" else context.kernel_size
    )
    result = PipelineResult(detections=[], context=context, kernel_size=kernel_size)
    for image in images:
        detections, threshold = process_segment(
            image,
            context,
            adaptive_cfg,
            method=method,
            fusion_mode=fusion_mode,
            min_area_px=min_area_px,
            threshold_step=threshold_step,
            dump_dir=dump_dir,
        )
        result.detections.extend(detections)
        result.chosen_thresholds.append(threshold)
    return result
