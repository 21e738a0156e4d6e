"""Spatial sampling resolution (SSR) arithmetic.

SSR is the sample density along the rope axis, f_s / v. Everything adaptive in
the pipeline (kernel size, pyramid layer weights) derives from its normalized
value mu against a fixed extreme reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveInput


@dataclass(frozen=True)
class AdaptiveConfig:
    fs_extreme_hz: float = 250.0
    v_extreme_mps: float = 1.5
    kernel_base: int = 5
    alpha: float = 5.0
    gamma: float = 2.0

    def __post_init__(self):
        for name in ("fs_extreme_hz", "v_extreme_mps", "kernel_base", "alpha", "gamma"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def f_spatial_extreme(self) -> float:
        return self.fs_extreme_hz / self.v_extreme_mps


@dataclass(frozen=True)
class SsrContext:
    """Per-record adaptive quantities derived from sampling rate and speed."""

    f_spatial: float
    mu: float
    kernel_size: int
    weights: tuple[float, float, float]
    fs_hz: float
    v_mps: float


def compute_ssr(fs_hz: float, v_mps: float) -> float:
    """Samples per meter of rope: f_s / v."""
    if fs_hz <= 0 or v_mps <= 0:
        raise NonPositiveInput("sampling rate and speed must be > 0")
    return fs_hz / v_mps


def normalize_ssr(f_spatial: float, cfg: AdaptiveConfig | None = None) -> float:
    """Normalize SSR against the extreme reference, clamped to (0, 1].

    Values above 1 mean the rope was scanned sparser than the extreme
    reference; those use the base kernel and full high-resolution weighting.
    """
    cfg = cfg or AdaptiveConfig()
    if f_spatial <= 0:
        raise NonPositiveInput("f_spatial must be > 0")
    return min(cfg.f_spatial_extreme / f_spatial, 1.0)


def adaptive_kernel_size(mu: float, cfg: AdaptiveConfig | None = None) -> int:
    """Kernel side after adaptive adjustment: ceil(K_base + alpha * (1 - mu))."""
    cfg = cfg or AdaptiveConfig()
    if not 0 < mu <= 1:
        raise NonPositiveInput("mu must lie in (0, 1]")
    return math.ceil(cfg.kernel_base + cfg.alpha * (1.0 - mu))


def layer_weights(mu: float) -> tuple[float, float, float]:
    """Pyramid layer weights (high, medium, low resolution) from normalized SSR.

    (mu^2, 2*mu*(1-mu), (1-mu)^2) -- a point on the 2-simplex by construction.
    """
    if not 0 < mu <= 1:
        raise NonPositiveInput("mu must lie in (0, 1]")
    return (mu * mu, 2.0 * mu * (1.0 - mu), (1.0 - mu) * (1.0 - mu))


def sampling_points(f_spatial: float, distance_m: float) -> float:
    """Number of samples falling within an axial distance, f_spatial * d."""
    if f_spatial <= 0 or distance_m <= 0:
        raise NonPositiveInput("f_spatial and distance must be > 0")
    return f_spatial * distance_m


def build_context(fs_hz: float, v_mps: float, cfg: AdaptiveConfig | None = None) -> SsrContext:
    """Derive all adaptive quantities for one record."""
    cfg = cfg or AdaptiveConfig()
    f_spatial = compute_ssr(fs_hz, v_mps)
    mu = normalize_ssr(f_spatial, cfg)
    return SsrContext(
        f_spatial=f_spatial,
        mu=mu,
        kernel_size=adaptive_kernel_size(mu, cfg),
        weights=layer_weights(mu),
        fs_hz=fs_hz,
        v_mps=v_mps,
    )
