"""Reconstruction quality metrics and nearest neighbour magnification."""

from ._magnify import nn_magnify
from ._quality import SsimConfig, mse, psnr, ssim_image, ssim_window

__all__ = (
    # _quality.py
    "SsimConfig",
    "mse",
    "psnr",
    "ssim_image",
    "ssim_window",
    # _magnify.py
    "nn_magnify",
)
