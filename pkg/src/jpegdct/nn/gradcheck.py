"""Central finite-difference gradient checking utilities.

The scalar objective for a layer is sum(forward(x) * weighting) for a fixed
random weighting tensor, so ``backward(weighting)`` yields the analytic
gradients being checked.  Always run layers in float64 here.
"""

import numpy as np


def relative_error(a, b, floor=1e-3):
    """|a-b| scaled by max(|a|, |b|, floor); floor guards near-zero grads."""
    return abs(a - b) / max(abs(a), abs(b), floor)


def fd_param_gradient(layer, x, param, flat_index, weighting, eps=1e-5):
    """Central difference of the objective w.r.t. one parameter coordinate."""
    flat = param.value.reshape(-1)
    orig = flat[flat_index]
    flat[flat_index] = orig + eps
    plus = float((layer.forward(x, True) * weighting).sum())
    flat[flat_index] = orig - eps
    minus = float((layer.forward(x, True) * weighting).sum())
    flat[flat_index] = orig
    return (plus - minus) / (2 * eps)


def fd_input_gradient(layer, x, flat_index, weighting, eps=1e-5):
    """Central difference of the objective w.r.t. one input coordinate."""
    xp = x.copy().reshape(-1)
    orig = xp[flat_index]
    xp[flat_index] = orig + eps
    plus = float((layer.forward(xp.reshape(x.shape), True) * weighting).sum())
    xp[flat_index] = orig - eps
    minus = float((layer.forward(xp.reshape(x.shape), True) * weighting).sum())
    return (plus - minus) / (2 * eps)


def check_layer(layer, x, rng, n_coords=20, eps=1e-5, tol=1e-4,
                check_input=True):
    """Compare analytic vs finite-difference gradients on random coordinates.

    Returns the worst relative error seen.  Raises AssertionError with
    context on the first violation.
    """
    x = np.asarray(x, dtype=np.float64)
    out = layer.forward(x, True)
    weighting = rng.standard_normal(out.shape)
    dx = layer.backward(weighting.copy())
    worst = 0.0

    for param in layer.params():
        analytic = param.grad.reshape(-1)
        n = analytic.size
        coords = rng.choice(n, size=min(n_coords, n), replace=False)
        for idx in coords:
            fd = fd_param_gradient(layer, x, param, idx, weighting, eps)
            err = relative_error(analytic[idx], fd)
            worst = max(worst, err)
            assert err < tol, (
                f"{type(layer).__name__}.{param.name}[{idx}]: "
                f"analytic {analytic[idx]:.8e} vs fd {fd:.8e} (err {err:.2e})"
            )
        # a param-perturbing pass may have clobbered caches; rebuild them
        layer.forward(x, True)
        layer.backward(weighting.copy())

    if check_input:
        analytic = dx.reshape(-1)
        n = analytic.size
        coords = rng.choice(n, size=min(n_coords, n), replace=False)
        for idx in coords:
            fd = fd_input_gradient(layer, x, idx, weighting, eps)
            err = relative_error(analytic[idx], fd)
            worst = max(worst, err)
            assert err < tol, (
                f"{type(layer).__name__} d/dx[{idx}]: "
                f"analytic {analytic[idx]:.8e} vs fd {fd:.8e} (err {err:.2e})"
            )
    return worst
