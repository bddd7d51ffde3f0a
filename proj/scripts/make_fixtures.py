#!/usr/bin/env python3
"""Build the 224x224 RGB test corpus under tests/data/natural from the
scikit-image sample data set. Run once; the PNGs are committed."""
import os

import numpy as np
import skimage.data as data
from skimage.color import gray2rgb
from skimage.transform import resize
from PIL import Image

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "natural")


def square(im, cy=0.5, cx=0.5, frac=1.0):
    h, w = im.shape[:2]
    s = int(min(h, w) * frac)
    y0 = int(np.clip(cy * h - s / 2, 0, h - s))
    x0 = int(np.clip(cx * w - s / 2, 0, w - s))
    return im[y0:y0 + s, x0:x0 + s]


def to_rgb224(im):
    if im.ndim == 2:
        im = gray2rgb(im)
    im = im[..., :3]
    out = resize(im, (224, 224), anti_aliasing=True, preserve_range=True)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


SOURCES = {
    "astronaut": lambda: square(data.astronaut()),
    "astronaut_face": lambda: square(data.astronaut(), 0.3, 0.45, 0.5),
    "chelsea": lambda: square(data.chelsea()),
    "coffee": lambda: square(data.coffee()),
    "hubble": lambda: square(data.hubble_deep_field(), frac=0.5),
    "ihc": lambda: square(data.immunohistochemistry()),
    "rocket": lambda: square(data.rocket()),
    "retina": lambda: square(data.retina(), frac=0.6),
    "motorcycle": lambda: square(data.stereo_motorcycle()[0]),
    "camera": lambda: square(data.camera()),
    "coins": lambda: square(data.coins()),
    "moon": lambda: square(data.moon()),
    "clock": lambda: square(data.clock()),
    "brick": lambda: square(data.brick(), frac=0.6),
    "grass": lambda: square(data.grass(), frac=0.6),
    "gravel": lambda: square(data.gravel(), frac=0.6),
}

if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    for name, fn in SOURCES.items():
        Image.fromarray(to_rgb224(fn())).save(os.path.join(OUT, f"{name}.png"), optimize=True)
