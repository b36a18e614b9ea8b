import numpy as np
import pytest

from aofv.polykernel import (Polynomial, StencilSpec, cell_average, evaluate,
                             indicator_matrix, interp_matrix,
                             interpolate_from_averages,
                             smoothness_indicator)
from aofv.solver import GAUSS4

CWZ_STENCILS = [
    StencilSpec.centered(3),
    StencilSpec.centered(2),
    StencilSpec((-2, -1, 0)),
    StencilSpec((-1, 0, 1)),
    StencilSpec((0, 1, 2)),
]


def test_linear_data_reproduced():
    p = interpolate_from_averages(StencilSpec((-1, 0)), [-1.0, 0.0])
    assert np.allclose(p.coeffs, [0.0, 1.0], atol=1e-14)


def test_quadratic_cell_averages():
    # averages of x^2 over unit cells centered at -1, 0, 1 are j^2 + 1/12
    p = interpolate_from_averages(StencilSpec((-1, 0, 1)),
                                  [13 / 12, 1 / 12, 13 / 12])
    assert np.allclose(p.coeffs, [0.0, 0.0, 1.0], atol=1e-14)


def test_constants_are_fixed_points():
    for spec in CWZ_STENCILS:
        p = interpolate_from_averages(spec, np.full(spec.degree + 1, 3.25))
        assert p.coeffs[0] == pytest.approx(3.25, rel=1e-14)
        assert np.allclose(p.coeffs[1:], 0.0, atol=1e-13)


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        interpolate_from_averages(StencilSpec((-1, 0, 1)), [1.0, 2.0])


def test_stencil_must_contain_center_and_be_contiguous():
    with pytest.raises(ValueError):
        StencilSpec((1, 2, 3))
    with pytest.raises(ValueError):
        StencilSpec((-2, 0, 1))


def test_evaluate_examples():
    assert evaluate(Polynomial([0, 1]), 0.5) == 0.5
    assert evaluate(Polynomial([0, 0, 1]), -0.5) == 0.25
    assert evaluate(Polynomial([3.7]), 12.3) == 3.7


@pytest.mark.parametrize("spec", CWZ_STENCILS,
                         ids=lambda s: f"{s.offsets[0]}..{s.offsets[-1]}")
def test_interpolation_roundtrip(spec):
    rng = np.random.default_rng(abs(hash(spec.offsets)) % 2 ** 31)
    for _ in range(20):
        avgs = rng.standard_normal(spec.degree + 1)
        p = interpolate_from_averages(spec, avgs)
        back = np.array([cell_average(p, o) for o in spec.offsets])
        assert np.allclose(back, avgs, rtol=1e-13, atol=1e-13)


def test_indicator_examples():
    assert smoothness_indicator(Polynomial([4.2])) == 0.0
    assert smoothness_indicator(Polynomial([0, 1])) == pytest.approx(1.0)
    assert smoothness_indicator(Polynomial([0, 0, 1])) == \
        pytest.approx(13 / 3, rel=1e-14)


def quadrature_indicator(coeffs, dx=0.37, x_c=0.81):
    """Independent oracle: differentiate the polynomial in physical space
    and integrate the definition term by term with Gauss-Legendre."""
    poly_xi = np.polynomial.Polynomial(coeffs)
    nodes, weights = np.polynomial.legendre.leggauss(24)
    x = x_c + 0.5 * dx * nodes  # cell [x_c - dx/2, x_c + dx/2]
    total = 0.0
    for order in range(1, len(coeffs)):
        d = poly_xi.deriv(order)
        # d^i/dx^i P = dx^-i * d^i/dxi^i in the scaled variable
        vals = d((x - x_c) / dx) / dx ** order
        integral = 0.5 * dx * np.sum(weights * vals ** 2)
        total += dx ** (2 * order - 1) * integral
    return total


def test_indicator_matches_quadrature_oracle():
    rng = np.random.default_rng(2024)
    for deg in range(0, 7):
        m = indicator_matrix(deg)
        for _ in range(25):
            c = rng.standard_normal(deg + 1)
            got = float(c @ m @ c)
            want = quadrature_indicator(c)
            assert got == pytest.approx(want, rel=1e-13, abs=1e-15)


def test_indicator_matrix_properties():
    for deg in (2, 4, 6):
        m = indicator_matrix(deg)
        assert np.allclose(m, m.T)
        assert np.allclose(m[0], 0.0) and np.allclose(m[:, 0], 0.0)
        eig = np.linalg.eigvalsh(m)
        assert eig.min() > -1e-12


def test_indicator_vanishes_under_refinement_but_not_at_steps():
    spec = StencilSpec.centered(3)
    smooth_vals = []
    for j in (4, 6, 8):
        dx = 2.0 ** -j
        centers = 0.3 + np.arange(-3, 4) * dx
        avgs = GAUSS4.cell_average(np.sin, centers, dx)[:, 0]
        p = interpolate_from_averages(spec, avgs)
        smooth_vals.append(smoothness_indicator(p))
    assert smooth_vals[0] > smooth_vals[1] > smooth_vals[2]
    assert smooth_vals[2] < 1e-6

    step_vals = []
    for j in (4, 6, 8):
        avgs = np.where(np.arange(-3, 4) < 0, 0.0, 1.0)
        p = interpolate_from_averages(spec, avgs)
        step_vals.append(smoothness_indicator(p))
    assert min(step_vals) > 0.1  # stays O(1) with a discontinuity inside


def test_critical_point_decay_exponent():
    # data from 1 + sin^3(pi x) around its order-2 critical point: the
    # indicator must decay at least like dx^6, measured on the last pair
    spec = StencilSpec.centered(3)
    u = lambda x: 1.0 + np.sin(np.pi * x) ** 3
    vals = []
    for j in (7, 8, 9):
        dx = 2.0 ** -j
        xc = 0.05 * dx  # critical point just off the cell center
        centers = xc + np.arange(-3, 4) * dx
        avgs = GAUSS4.cell_average(u, centers, dx)[:, 0]
        p = interpolate_from_averages(spec, avgs)
        vals.append(smoothness_indicator(p))
    rate = np.log2(vals[-2] / vals[-1])
    assert rate >= 2 * 2 + 2 - 0.3


def test_interp_matrix_is_exact_inverse():
    for spec in CWZ_STENCILS:
        m = interp_matrix(spec.offsets)
        n = spec.degree + 1
        avg = np.empty((n, n))
        for row, j in enumerate(spec.offsets):
            for p in range(n):
                avg[row, p] = ((j + 0.5) ** (p + 1)
                               - (j - 0.5) ** (p + 1)) / (p + 1)
        assert np.allclose(avg @ m, np.eye(n), atol=1e-12)
