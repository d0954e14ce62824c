"""Image quality metrics comparing a reconstruction against its original."""

__all__ = ("SsimConfig", "ssim_window", "ssim_image", "mse", "psnr")

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import numpy.typing as npt

from .._datastructures import FloatArray, MultiMatrix
from ..fusion import pad
from ..fusion._blocks import block_values
from ..types import DomainError, ShapeError

ImageLike = Union[MultiMatrix, npt.ArrayLike]


@dataclass(frozen=True)
class SsimConfig:
    """
    Settings for SSIM over disjoint windows.

    Parameters
    ----------
    window
        Side ``N`` of the square windows.
    c1
        Stabilizing constant of the luminance term, ``(0.01 L)^2`` for range ``L``.
    c2
        Stabilizing constant of the contrast/structure term, ``(0.03 L)^2``.
    """

    window: int = 8
    c1: float = 0.01**2
    c2: float = 0.03**2

    def __post_init__(self) -> None:
        if self.window < 2:
            raise DomainError(f"The SSIM window must be at least 2, got {self.window}")
        if not (self.c1 > 0 and self.c2 > 0):
            raise DomainError("The SSIM constants must be positive")

    @classmethod
    def for_range(cls, dynamic_range: float, window: int = 8) -> "SsimConfig":
        """Standard constants for samples in ``[0, dynamic_range]``."""
        return cls(window, (0.01 * dynamic_range) ** 2, (0.03 * dynamic_range) ** 2)


def _data(x: ImageLike) -> FloatArray:
    if isinstance(x, MultiMatrix):
        return x.data
    return np.asarray(x, dtype=np.float64)


def _same_shape(a: FloatArray, b: FloatArray) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"Can't compare arrays of shapes {a.shape} and {b.shape}")


def _covariance(dx: FloatArray, dy: FloatArray) -> FloatArray:
    # Unbiased, over the flattened window.
    return np.sum(dx * dy, axis=-1) / (dx.shape[-1] - 1)


def _ssim_terms(x: FloatArray, y: FloatArray, cfg: SsimConfig) -> FloatArray:
    # x, y: (..., N*N)
    mu_x = np.mean(x, axis=-1)
    mu_y = np.mean(y, axis=-1)
    dx = x - mu_x[..., np.newaxis]
    dy = y - mu_y[..., np.newaxis]
    var_x = _covariance(dx, dx)
    var_y = _covariance(dy, dy)
    cov = _covariance(dx, dy)
    num = (2 * mu_x * mu_y + cfg.c1) * (2 * cov + cfg.c2)
    den = (mu_x * mu_x + mu_y * mu_y + cfg.c1) * (var_x + var_y + cfg.c2)
    return num / den


def ssim_window(
    x: npt.ArrayLike, y: npt.ArrayLike, cfg: SsimConfig = SsimConfig()
) -> float:
    """
    SSIM of two equally shaped windows.

    Means are window means, variances and the covariance use the unbiased divisor
    ``N*N - 1`` over the flattened window.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    _same_shape(xa, ya)
    if xa.size < 2:
        raise ShapeError("An SSIM window needs at least 2 samples")
    return float(_ssim_terms(xa.ravel(), ya.ravel(), cfg))


def ssim_image(a: ImageLike, b: ImageLike, cfg: SsimConfig = SsimConfig()) -> float:
    """
    Mean SSIM over all disjoint ``N x N`` windows and all channels.

    Images whose dimensions aren't multiples of ``N`` are edge-padded first, so
    every pixel is covered by a window.

    Raises
    ------
    ShapeError
        If the images don't have identical dimensions.
    """
    ma, mb = MultiMatrix(_data(a)), MultiMatrix(_data(b))
    _same_shape(ma.data, mb.data)
    n = cfg.window
    xa = block_values(pad(ma, n).data, n)
    xb = block_values(pad(mb, n).data, n)
    return float(np.mean(_ssim_terms(xa, xb, cfg)))


def mse(a: ImageLike, b: ImageLike) -> float:
    """Mean over all cells of the squared difference."""
    xa, xb = _data(a), _data(b)
    _same_shape(xa, xb)
    return float(np.mean((xa - xb) ** 2))


def psnr(a: ImageLike, b: ImageLike, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10 * math.log10(peak * peak / err)
