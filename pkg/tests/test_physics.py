import numpy as np
import pytest

from aofv.physics import (AdmissibilityError, Euler, LinearAdvection,
                          RadialEuler, char_basis, cons_to_prim, euler_flux,
                          euler_max_speed, prim_to_cons, radial_source)


def test_prim_cons_examples():
    assert prim_to_cons(1, 0, 1)[..., 2] == pytest.approx(2.5)
    assert prim_to_cons(0.125, 0, 0.1)[..., 2] == pytest.approx(0.25)
    lax = prim_to_cons(0.445, 0.6989, 3.5277)
    rho, u, p = cons_to_prim(lax)
    assert rho == pytest.approx(0.445, abs=1e-14)
    assert u == pytest.approx(0.6989, abs=1e-14)
    assert p == pytest.approx(3.5277, abs=1e-14)


def test_cons_to_prim_flags_bad_states():
    with pytest.raises(AdmissibilityError):
        cons_to_prim(np.array([-1.0, 0.0, 1.0]))
    with pytest.raises(AdmissibilityError):
        cons_to_prim(np.array([1.0, 10.0, 1.0]))  # negative pressure
    with pytest.raises(AdmissibilityError):
        prim_to_cons(1.0, 0.0, -2.0)


def test_flux_and_speed_examples():
    s = prim_to_cons(1, 0, 1)
    assert np.allclose(euler_flux(s), [0, 1, 0])
    assert euler_max_speed(s) == pytest.approx(np.sqrt(1.4))
    s2 = prim_to_cons(1, 2, 1)
    assert np.allclose(euler_flux(s2), [2, 5, 11])
    assert euler_max_speed(s2) == pytest.approx(2 + np.sqrt(1.4))


def test_advection_model():
    m = LinearAdvection()
    u = np.array([[0.3]])
    assert m.flux(u)[0, 0] == 0.3
    assert m.max_speed(u)[0] == 1.0
    left, right = m.char_basis(u)
    assert left[0].tolist() == [[1.0]] and right[0].tolist() == [[1.0]]


def test_radial_source_examples():
    s0 = prim_to_cons(2.0, 0.0, 1.3)
    assert np.allclose(radial_source(s0, np.array(0.7), 3), 0.0)
    s = prim_to_cons(1, 2, 1)
    assert np.allclose(radial_source(s, np.array(2.0), 3), [-2, -4, -2])
    assert np.allclose(radial_source(s, np.array(2.0), 1), 0.0)


def test_radial_source_scaling_in_sigma():
    rng = np.random.default_rng(1)
    s = prim_to_cons(rng.uniform(0.5, 2, 8), rng.uniform(-1, 1, 8),
                     rng.uniform(0.5, 2, 8))
    sig = rng.uniform(0.2, 1.0, 8)
    a = radial_source(s, sig, 3)
    b = radial_source(s, 2 * sig, 3)
    assert np.allclose(b, 0.5 * a, rtol=1e-13)
    with pytest.raises(ValueError):
        radial_source(s, np.zeros(8), 3)


def _random_states(n, seed=7):
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.05, 5.0, n)
    u = rng.uniform(-3.0, 3.0, n)
    p = rng.uniform(0.02, 10.0, n)
    return prim_to_cons(rho, u, p), rho, u, p


def test_char_basis_inverse_pair():
    states, _, _, _ = _random_states(10000)
    left, right = Euler().char_basis(states)
    prod = np.matmul(left, right)
    assert np.abs(prod - np.eye(3)).max() < 1e-12


def test_char_basis_diagonalizes_fd_jacobian():
    states, rho, u, p = _random_states(10000)
    c = np.sqrt(1.4 * p / rho)
    left, right = Euler().char_basis(states)
    h = 1e-6
    jac = np.empty((len(states), 3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        jac[:, :, k] = (euler_flux(states + e) - euler_flux(states - e)) \
            / (2 * h)
    diag = np.matmul(left, np.matmul(jac, right))
    eigs = np.stack([u - c, u, u + c], axis=1)
    off = diag - eigs[:, :, None] * np.eye(3)
    assert np.abs(off).max() < 1e-8
    # wave ordering and speed bound
    speeds = euler_max_speed(states)
    assert np.all(speeds >= np.abs(eigs).max(axis=1) - 1e-12)


def test_char_basis_eigenvalues_at_rest():
    s = prim_to_cons(1, 0, 1)
    left, right = char_basis(s)
    h = 1e-7
    jac = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        jac[:, k] = (euler_flux(s + e) - euler_flux(s - e)) / (2 * h)
    d = left @ jac @ right
    c = np.sqrt(1.4)
    assert np.allclose(np.diag(d), [-c, 0.0, c], atol=1e-7)


def test_radial_model_declares_source():
    m = RadialEuler(d=3)
    assert m.has_source and m.momentum_comp == 1
    with pytest.raises(ValueError):
        RadialEuler(d=5)
