"""Shared test utilities: independent reference pipelines and corpora."""

import numpy as np

from jpegdct import reference


def composed_reference_rgb(path):
    """Independent full-decode reference built from libjpeg + scipy.

    Entropy decoding, de-quantization steps, and geometry come from the
    system libjpeg; the inverse transform is scipy's orthonormal IDCT; the
    color math is the textbook BT.601 conversion written out here.  No code
    from the package's own decode path is involved.
    """
    from scipy.fft import idctn

    width, height, comps = reference.read_coefficients(path)
    hmax = max(c["h"] for c in comps)
    vmax = max(c["v"] for c in comps)
    planes = []
    for c in comps:
        coef = c["blocks"].astype(np.float64) * c["quant_steps"].reshape(8, 8)
        samples = idctn(coef, axes=(2, 3), norm="ortho") + 128.0
        hb, wb = c["height_in_blocks"], c["width_in_blocks"]
        raster = samples.transpose(0, 2, 1, 3).reshape(hb * 8, wb * 8)
        cw = -(-width * c["h"] // hmax)
        ch = -(-height * c["v"] // vmax)
        raster = np.clip(raster[:ch, :cw], 0.0, 255.0)
        raster = np.repeat(
            np.repeat(raster, vmax // c["v"], axis=0), hmax // c["h"], axis=1
        )
        planes.append(raster[:height, :width])
    if len(planes) == 1:
        g = np.round(planes[0]).astype(np.uint8)
        return np.stack([g, g, g], axis=-1)
    y, cb, cr = planes
    r = y + 1.402 * (cr - 128.0)
    g = y - 0.344136286 * (cb - 128.0) - 0.714136286 * (cr - 128.0)
    b = y + 1.772 * (cb - 128.0)
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb), 0, 255).astype(np.uint8)


def source_photos():
    """(name, RGB array) pairs from packaged sample data plus synthetics."""
    photos = []
    try:
        import sklearn.datasets as skd

        images = skd.load_sample_images()
        for fname, arr in zip(images.filenames, images.images):
            name = fname.rsplit("/", 1)[-1].split(".")[0]
            photos.append((name, np.asarray(arr, dtype=np.uint8)))
    except Exception:
        pass
    try:
        import skimage.data

        photos.append(("astronaut", skimage.data.astronaut()[::2, ::2]))
    except Exception:
        pass

    rng = np.random.default_rng(2024)
    noise = rng.integers(0, 256, (120, 200, 3), dtype=np.uint8)
    photos.append(("noise", noise))
    yy, xx = np.mgrid[0:160, 0:240]
    grad = np.stack(
        [xx * 255 // 239, yy * 255 // 159, (xx + yy) * 255 // 398],
        axis=-1,
    ).astype(np.uint8)
    photos.append(("gradient", grad))
    return photos
