import numpy as np
import pytest
from hypothesis import given, strategies as st

from vbgk.errors import DimensionMismatch
from vbgk.grid import (
    Grid,
    from_spectral,
    l2_norm,
    linf_norm,
    sobolev_norm,
    spectral_derivative,
    to_spectral,
    translate,
)

from conftest import random_field


def test_grid_validation():
    Grid(8)
    with pytest.raises(ValueError):
        Grid(6)
    with pytest.raises(ValueError):
        Grid(9)
    g = Grid(32)
    assert g.dx * g.n == pytest.approx(2 * np.pi, abs=1e-15)


def test_dimension_mismatch_rejected(grid32):
    with pytest.raises(DimensionMismatch):
        to_spectral(grid32, np.zeros((16, 16)))


def test_constant_field_coefficients(grid32):
    coeffs = to_spectral(grid32, np.full((32, 32), 3.0))
    assert coeffs[0, 0] == pytest.approx(3.0, abs=1e-14)
    rest = coeffs.copy()
    rest[0, 0] = 0.0
    assert np.max(np.abs(rest)) < 1e-14


def test_sin_coefficients(grid32):
    coeffs = to_spectral(grid32, np.sin(grid32.x))
    # modes (1, 0) and (-1, 0) carry -i/2 and +i/2
    assert coeffs[1, 0] == pytest.approx(-0.5j, abs=1e-14)
    assert coeffs[-1, 0] == pytest.approx(0.5j, abs=1e-14)
    coeffs[1, 0] = coeffs[-1, 0] = 0.0
    assert np.max(np.abs(coeffs)) < 1e-14


@given(seed=st.integers(0, 2 ** 31))
def test_round_trip_identity(seed):
    g = Grid(16)
    f = random_field(seed, 16)
    back = from_spectral(g, to_spectral(g, f))
    scale = max(1.0, np.max(np.abs(f)))
    assert np.max(np.abs(back - f)) / scale < 1e-12


def test_derivative_analytic(grid32):
    x = grid32.x
    d = spectral_derivative(grid32, np.sin(x), "x")
    assert np.max(np.abs(d - np.cos(x))) < 1e-10
    d2 = spectral_derivative(grid32, np.sin(2 * x), "x", order=2)
    assert np.max(np.abs(d2 + 4 * np.sin(2 * x))) < 1e-10
    dy = spectral_derivative(grid32, np.sin(grid32.y), "y")
    assert np.max(np.abs(dy - np.cos(grid32.y))) < 1e-10


def test_derivative_of_constant_is_exactly_zero(grid32):
    d = spectral_derivative(grid32, np.full((32, 32), 7.5), "x")
    assert np.all(d == 0.0)


def test_derivative_zeroes_nyquist_for_odd_order(grid32):
    # pure Nyquist line: odd derivative must vanish instead of going complex
    f = np.cos(16 * grid32.x)
    d = spectral_derivative(grid32, f, "x", order=1)
    assert np.max(np.abs(d)) < 1e-10
    d2 = spectral_derivative(grid32, f, "x", order=2)
    assert np.max(np.abs(d2 + 256 * f)) < 1e-8


def test_derivative_rejects_bad_args(grid32):
    f = np.zeros((32, 32))
    with pytest.raises(ValueError):
        spectral_derivative(grid32, f, "z")
    with pytest.raises(ValueError):
        spectral_derivative(grid32, f, "x", order=0)


def test_translate_analytic(grid32):
    x = grid32.x
    shifted = translate(grid32, np.sin(x), (np.pi / 2, 0.0))
    assert np.max(np.abs(shifted - np.sin(x - np.pi / 2))) < 1e-12
    assert np.max(np.abs(shifted + np.cos(x))) < 1e-12


def test_translate_identity_and_constant(grid32):
    f = random_field(11, 32)
    assert np.max(np.abs(translate(grid32, f, (0.0, 0.0)) - f)) < 1e-13
    c = np.full((32, 32), 2.5)
    assert np.max(np.abs(translate(grid32, c, (0.37, -1.2)) - c)) < 1e-13


@given(seed=st.integers(0, 2 ** 31), sx=st.floats(-10, 10), sy=st.floats(-10, 10))
def test_translate_round_trip(seed, sx, sy):
    g = Grid(16)
    f = random_field(seed, 16)
    back = translate(g, translate(g, f, (sx, sy)), (-sx, -sy))
    assert np.max(np.abs(back - f)) < 1e-12


def test_norm_of_constant(grid32):
    one = np.ones((32, 32))
    assert l2_norm(grid32, one) == pytest.approx(1.0, abs=1e-13)
    for s in (0.0, 1.0, 2.5, 3.5):
        assert sobolev_norm(grid32, one, s) == pytest.approx(1.0, abs=1e-13)


def test_norm_of_sin(grid32):
    f = np.sin(grid32.x)
    assert l2_norm(grid32, f) ** 2 == pytest.approx(0.5, abs=1e-13)
    assert sobolev_norm(grid32, f, 1.0) ** 2 == pytest.approx(1.0, abs=1e-13)


def test_vector_norm_root_sum_of_squares(grid32):
    f = np.stack([np.sin(grid32.x), np.cos(grid32.y)])
    expected = np.sqrt(0.5 + 0.5)
    assert l2_norm(grid32, f) == pytest.approx(expected, abs=1e-13)


def test_negative_sobolev_index_rejected(grid32):
    with pytest.raises(ValueError):
        sobolev_norm(grid32, np.ones((32, 32)), -0.5)


def test_linf_norm():
    f = np.array([[1.0, -3.5], [2.0, 0.0]])
    assert linf_norm(f) == 3.5


@given(seed=st.integers(0, 2 ** 31))
def test_parseval(seed):
    g = Grid(16)
    f = random_field(seed, 16)
    lhs = l2_norm(g, f) ** 2
    rhs = float(np.mean(f ** 2))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-14)


@given(seed=st.integers(0, 2 ** 31))
def test_sobolev_monotone_in_s(seed):
    g = Grid(16)
    f = random_field(seed, 16)
    norms = [sobolev_norm(g, f, s) for s in (0.0, 0.5, 1.0, 2.0, 3.5)]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(norms, norms[1:]))


@given(seed=st.integers(0, 2 ** 31),
       pair=st.sampled_from([(3.5, 2.0), (4.0, 1.0), (3.1, 3.0)]))
def test_interpolation_inequality(seed, pair):
    # ||f||_s' <= ||f||_0^(1-s'/s) * ||f||_s^(s'/s), Hoelder on the Fourier sum
    s, sp = pair
    g = Grid(16)
    f = random_field(seed, 16)
    theta = sp / s
    lhs = sobolev_norm(g, f, sp)
    rhs = sobolev_norm(g, f, 0.0) ** (1 - theta) * sobolev_norm(g, f, s) ** theta
    assert lhs <= rhs * (1 + 1e-12)
