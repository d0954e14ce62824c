__all__ = ("ImageFile", "load_image", "save_image", "load_directory")

import logging
import os
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import numpy as np
import numpy.typing as npt
import PIL.Image

from .._datastructures import MultiMatrix
from .._utils import atomic_write
from ..types import ImageDecodeError, ImageWarning, NoImagesError, ShapeError

logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]

# Pillow format names we read and write, keyed by file suffix.
FORMATS = {".png": "PNG", ".ppm": "PPM", ".pgm": "PPM", ".pnm": "PPM"}

# Pillow modes that hold a single grey channel; everything else becomes RGB.
_GREY_MODES = {"1", "L", "LA", "I", "I;16", "F"}


@dataclass(frozen=True, eq=False)
class ImageFile:
    """A decoded image with samples scaled to ``[0, 1]``; 1 (grey) or 3 channels."""

    path: Path
    image: MultiMatrix

    @property
    def name(self) -> str:
        """Identifier used in reports."""
        return self.path.name


def load_image(path: PathLike) -> ImageFile:
    """
    Decode an 8-bit PNG or binary PPM/PGM file. Sample ``v`` becomes ``v / 255``.

    Raises
    ------
    ImageDecodeError
        If the file can't be read or isn't a supported image.
    """
    p = Path(path)
    try:
        with PIL.Image.open(p) as img:
            if img.format not in ("PNG", "PPM"):
                raise ImageDecodeError(f"{p}: unsupported image format {img.format}")
            target = "L" if img.mode in _GREY_MODES else "RGB"
            arr = np.asarray(img.convert(target), dtype=np.uint8)
    except ImageDecodeError:
        raise
    except (OSError, ValueError, SyntaxError) as e:
        # Pillow raises UnidentifiedImageError (an OSError) and SyntaxError for
        # malformed headers.
        raise ImageDecodeError(f"{p}: can't decode image: {e}") from e

    logger.debug("Loaded %s (%dx%d, mode %s)", p, arr.shape[0], arr.shape[1], target)
    return ImageFile(p, MultiMatrix(arr.astype(np.float64) / 255.0))


def to_uint8(m: MultiMatrix) -> npt.NDArray[np.uint8]:
    return np.clip(np.round(m.data * 255.0), 0, 255).astype(np.uint8)


def save_image(m: MultiMatrix, path: PathLike) -> None:
    """
    Encode ``m`` as 8-bit PNG or binary PPM/PGM, chosen by the file suffix. Values are
    mapped by ``round(v * 255)`` clamped to ``[0, 255]``. The file is written
    atomically.
    """
    p = Path(path)
    fmt = FORMATS.get(p.suffix.lower())
    if fmt is None:
        raise ImageDecodeError(f"{p}: unsupported image suffix {p.suffix!r}")
    if m.channels not in (1, 3):
        raise ShapeError(f"Only 1 or 3 channel images can be saved, got {m.channels}")

    samples = to_uint8(m)
    if m.channels == 1:
        img = PIL.Image.fromarray(np.ascontiguousarray(samples[:, :, 0]))
    else:
        img = PIL.Image.fromarray(samples)
    with atomic_write(p, "wb") as f:
        img.save(f, format=fmt)


def load_directory(directory: PathLike) -> List[ImageFile]:
    """
    Decode every image file directly inside ``directory``, in file name order. Files
    that fail to decode are skipped with an :class:`~devfuse.types.ImageWarning`.

    Raises
    ------
    NoImagesError
        If no file could be decoded.
    """
    d = Path(directory)
    if not d.is_dir():
        raise NoImagesError(f"no decodable images: {d} is not a directory")

    images: List[ImageFile] = []
    for path in sorted(d.iterdir()):
        if not path.is_file() or path.name.startswith("."):
            continue
        try:
            images.append(load_image(path))
        except ImageDecodeError as e:
            warnings.warn(f"Skipping {path.name}: {e}", ImageWarning, stacklevel=2)

    if not images:
        raise NoImagesError(f"no decodable images in {d}")
    logger.info("Loaded %d images from %s", len(images), d)
    return images
