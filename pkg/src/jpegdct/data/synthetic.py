"""Procedural labeled images in CIFAR-like geometry.

Class 0 is smooth random blobs (energy concentrated in low frequencies);
classes 1..k-1 are oriented gratings whose orientation band depends on the
class index.  Colors, phases, scales, and noise vary per image, so the
classes are learnable but not trivially separable in any single pixel.
Used for smoke/demo runs and as a stand-in corpus when no real dataset is
mounted.
"""

import numpy as np

from .cifar10 import LabeledImage


def _blob_image(rng, size):
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    img = np.zeros((size, size))
    for _ in range(rng.integers(2, 5)):
        cx, cy = rng.uniform(0, size, 2)
        sigma = rng.uniform(size / 8, size / 3)
        amp = rng.uniform(0.4, 1.0) * rng.choice([-1.0, 1.0])
        img += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * sigma**2))
    return img


def _grating_image(rng, size, theta_lo, theta_hi):
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    theta = rng.uniform(theta_lo, theta_hi)
    freq = rng.uniform(0.15, 0.35)  # cycles per pixel
    phase = rng.uniform(0, 2 * np.pi)
    t = 2 * np.pi * freq * (xx * np.cos(theta) + yy * np.sin(theta))
    return np.sin(t + phase)


def make_labeled_images(n_per_class, num_classes=2, size=32, seed=0,
                        noise_sigma=8.0) -> list:
    """Balanced image list; deterministic for a given seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    images = []
    for label in range(num_classes):
        for i in range(n_per_class):
            if label == 0:
                field = _blob_image(rng, size)
            else:
                lo = (label - 1) * np.pi / max(1, num_classes - 1)
                hi = label * np.pi / max(1, num_classes - 1)
                field = _grating_image(rng, size, lo, hi)
            base = rng.uniform(60, 196, size=3)
            amp = rng.uniform(30, 60, size=3)
            pix = base[None, None, :] + amp[None, None, :] * field[..., None]
            pix += rng.normal(0, noise_sigma, pix.shape)
            pixels = np.clip(np.round(pix), 0, 255).astype(np.uint8)
            images.append(LabeledImage(label, pixels, f"synthetic/{label}/{i}"))
    return images
