"""Session fixtures: externally-encoded JPEG corpora and synthetic datasets."""

import os

import numpy as np
import pytest

from helpers import source_photos


@pytest.fixture(scope="session")
def external_corpus(tmp_path_factory):
    """Baseline JPEGs produced by an independent encoder (Pillow/libjpeg).

    Mixes qualities, subsampling modes (4:4:4, 4:2:2, 4:2:0), grayscale,
    and odd dimensions.  Returns a list of file paths, length >= 20.
    """
    PIL = pytest.importorskip("PIL.Image")
    root = tmp_path_factory.mktemp("external")
    photos = source_photos()
    paths = []

    recipes = [
        ("q25", {"quality": 25, "subsampling": 2}),
        ("q50_422", {"quality": 50, "subsampling": 1}),
        ("q75", {"quality": 75, "subsampling": 2}),
        ("q90_444", {"quality": 90, "subsampling": 0}),
        ("q95", {"quality": 95, "subsampling": 2}),
    ]
    for name, rgb in photos:
        img = PIL.fromarray(rgb)
        for tag, kwargs in recipes:
            path = root / f"{name}_{tag}.jpg"
            img.save(path, **kwargs)
            paths.append(str(path))

    # grayscale and odd-size cases
    base = photos[0][1]
    gray = PIL.fromarray(base).convert("L")
    for q in (40, 85):
        path = root / f"gray_q{q}.jpg"
        gray.save(path, quality=q)
        paths.append(str(path))
    odd = PIL.fromarray(base[:121, :181])
    path = root / "odd_121x181.jpg"
    odd.save(path, quality=75, subsampling=2)
    paths.append(str(path))

    assert len(paths) >= 20
    return paths


@pytest.fixture(scope="session")
def progressive_jpeg(tmp_path_factory):
    PIL = pytest.importorskip("PIL.Image")
    root = tmp_path_factory.mktemp("progressive")
    rgb = source_photos()[0][1]
    path = root / "progressive.jpg"
    PIL.fromarray(rgb).save(path, quality=75, progressive=True)
    return str(path)


@pytest.fixture(scope="session")
def small_corpora(tmp_path_factory):
    """Tiny quantized + unquantized corpora over the same synthetic images."""
    from jpegdct.data import generate_variants, make_labeled_images

    root = tmp_path_factory.mktemp("corpora")
    images = make_labeled_images(12, num_classes=2, seed=11)
    quantized = generate_variants(
        images, "quantized", 75, str(root / "quantized")
    )
    unquantized = generate_variants(
        images, "unquantized", 75, str(root / "unquantized")
    )
    return {"quantized": quantized, "unquantized": unquantized,
            "images": images}


def cifar_style_source(n_train_per_class, n_test_per_class, seed=0):
    """Real CIFAR-10 when mounted, else the synthetic stand-in corpus.

    Set ``CIFAR10_DIR`` to the directory holding the binary batch files to
    run desk-scale learning on the real dataset (classes 0 and 1).
    """
    from jpegdct.data import load_cifar10, make_labeled_images
    from jpegdct.harness.run import subset_images

    cifar_dir = os.environ.get("CIFAR10_DIR", "")
    if cifar_dir and os.path.isdir(cifar_dir):
        train, test = load_cifar10(cifar_dir)
        train = subset_images(train, (0, 1), 2 * n_train_per_class, seed)
        test = subset_images(test, (0, 1), 2 * n_test_per_class, seed + 1)
        return train, test, "cifar10"
    train = make_labeled_images(n_train_per_class, 2, seed=seed)
    test = make_labeled_images(n_test_per_class, 2, seed=seed + 1)
    return train, test, "synthetic"
