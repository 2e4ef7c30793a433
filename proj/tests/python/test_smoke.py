import numpy as np
import pytest

import motgv


def test_modular_closed_form():
    # p = 2, |f| = 1 on a unit-measure 4x4 grid: rho = 1/2.
    f = np.ones((4, 4))
    assert motgv.modular(motgv.PhiSpec.power(2.0), f) == pytest.approx(0.5)


def test_luxemburg_norm_scaling():
    f = np.full((4, 4), 3.0)
    phi = motgv.PhiSpec.power(2.0)
    assert motgv.luxemburg_norm(phi, f) == pytest.approx(3.0 / np.sqrt(2.0), rel=1e-8)


def test_affine_is_in_the_tgv_kernel():
    n = 8
    x = (np.arange(n) + 0.5) / n
    u = 0.3 + 0.7 * x[None, :] - 0.2 * x[:, None]
    value, gap, w = motgv.tgv2(motgv.PhiSpec.power(1.5), 1.0, 1.0, u)
    assert value <= 1e-10
    assert w.shape == (n, n, 2)


def test_denoise_affine_returns_input():
    n = 8
    x = (np.arange(n) + 0.5) / n
    u = 0.4 + 0.3 * x[None, :] + 0.1 * x[:, None]
    out, energy, iters = motgv.denoise(u, motgv.PhiSpec.power(2.0), 1.0, 1.0, max_iters=400)
    assert np.max(np.abs(out - u)) <= 1e-6
    assert energy <= 1e-12


def test_variable_exponent_and_errors():
    m = motgv.ExponentMap(np.full((4, 4), 1.0))
    phi = motgv.PhiSpec.variable_exponent(m)
    # p = 1 everywhere: the modular is the weighted l1 mass.
    f = np.full((4, 4), 2.0)
    assert motgv.modular(phi, f) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        motgv.PhiSpec.power(0.5)


def test_pgm_round_trip(tmp_path):
    path = str(tmp_path / "img.pgm")
    f = np.linspace(0.0, 1.0, 16).reshape(4, 4)
    motgv.save_pgm(path, f)
    back = motgv.load_pgm(path)
    assert np.max(np.abs(back - f)) <= 0.5 / 255.0


def test_make_pmap_flat_image():
    p = motgv.make_pmap(np.full((8, 8), 0.5)).to_numpy()
    assert np.allclose(p, 2.0)
