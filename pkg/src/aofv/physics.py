"""PDE model definitions: linear advection, 1D Euler gas dynamics, and the
radially symmetric Euler system with its geometric source term."""

import numpy as np

GAMMA = 1.4


class AdmissibilityError(ValueError):
    """Raised for states with non-positive density or pressure."""


def prim_to_cons(rho, u, p, gamma=GAMMA):
    """(rho, u, p) -> (rho, rho*u, E) with E = p/(gamma-1) + rho*u^2/2."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0) or np.any(np.asarray(p) <= 0):
        raise AdmissibilityError("need rho > 0 and p > 0")
    m = rho * u
    E = p / (gamma - 1.0) + 0.5 * rho * u * u
    return np.stack(np.broadcast_arrays(rho, m, E), axis=-1)


def cons_to_prim(state, gamma=GAMMA):
    """Inverse map; flags non-admissible states."""
    state = np.asarray(state, dtype=float)
    rho, m, E = state[..., 0], state[..., 1], state[..., 2]
    if np.any(rho <= 0):
        raise AdmissibilityError("non-positive density")
    u = m / rho
    p = (gamma - 1.0) * (E - 0.5 * m * u)
    if np.any(p <= 0):
        raise AdmissibilityError("non-positive pressure")
    return rho, u, p


class LinearAdvection:
    """u_t + u_x = 0 with unit speed."""

    n_comp = 1
    momentum_comp = None
    has_source = False
    name = "advection"

    def flux(self, state):
        return np.asarray(state, dtype=float)

    def max_speed(self, state):
        state = np.asarray(state, dtype=float)
        return np.ones(state.shape[:-1])

    def admissible(self, state):
        return np.ones(np.asarray(state).shape[:-1], dtype=bool)

    def char_basis(self, state):
        state = np.asarray(state, dtype=float)
        eye = np.ones(state.shape[:-1] + (1, 1))
        return eye, eye


class Euler:
    """1D Euler equations for an ideal gas, conserved variables (rho, m, E)."""

    n_comp = 3
    momentum_comp = 1
    has_source = False
    name = "euler"

    def __init__(self, gamma=GAMMA):
        self.gamma = gamma

    def primitives(self, state):
        state = np.asarray(state, dtype=float)
        rho, m, E = state[..., 0], state[..., 1], state[..., 2]
        u = m / rho
        p = (self.gamma - 1.0) * (E - 0.5 * m * u)
        return rho, u, p

    def admissible(self, state):
        state = np.asarray(state, dtype=float)
        rho, m, E = state[..., 0], state[..., 1], state[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            p = (self.gamma - 1.0) * (E - 0.5 * m * m / rho)
        return (rho > 0) & (p > 0)

    def flux(self, state):
        rho, u, p = self.primitives(state)
        if np.any(np.asarray(rho) <= 0) or np.any(np.asarray(p) <= 0):
            raise AdmissibilityError("flux of non-admissible state")
        m = np.asarray(state, dtype=float)[..., 1]
        E = np.asarray(state, dtype=float)[..., 2]
        return np.stack([m, m * u + p, u * (E + p)], axis=-1)

    def max_speed(self, state):
        rho, u, p = self.primitives(state)
        if np.any(np.asarray(rho) <= 0) or np.any(np.asarray(p) <= 0):
            raise AdmissibilityError("wave speed of non-admissible state")
        return np.abs(u) + np.sqrt(self.gamma * p / rho)

    def char_basis(self, state):
        """Right eigenvector matrix R (columns ordered u-c, u, u+c) of the
        flux Jacobian at `state`, and L = R^-1; batched over leading axes."""
        state = np.asarray(state, dtype=float)
        rho, u, p = self.primitives(state)
        if np.any(np.asarray(rho) <= 0) or np.any(np.asarray(p) <= 0):
            raise AdmissibilityError("eigenbasis of non-admissible state")
        rho, u, p = np.broadcast_arrays(rho, u, p)
        c = np.sqrt(self.gamma * p / rho)
        E = state[..., 2]
        H = (E + p) / rho
        one = np.ones_like(u)
        R = np.stack([
            np.stack([one, one, one], axis=-1),
            np.stack([u - c, u, u + c], axis=-1),
            np.stack([H - u * c, 0.5 * u * u, H + u * c], axis=-1),
        ], axis=-2)
        gm1 = self.gamma - 1.0
        b1 = gm1 / (c * c)
        b2 = 0.5 * b1 * u * u
        L = 0.5 * np.stack([
            np.stack([b2 + u / c, -b1 * u - 1.0 / c, b1], axis=-1),
            np.stack([2.0 * (1.0 - b2), 2.0 * b1 * u, -2.0 * b1], axis=-1),
            np.stack([b2 - u / c, -b1 * u + 1.0 / c, b1], axis=-1),
        ], axis=-2)
        return L, R


class RadialEuler(Euler):
    """Euler system in radial symmetry: geometric source -(d-1)/sigma times
    (rho*u, rho*u^2, u*p) on the right-hand side."""

    has_source = True
    name = "euler_radial"

    def __init__(self, d=3, gamma=GAMMA):
        super().__init__(gamma)
        if d not in (1, 2, 3):
            raise ValueError("space dimension d must be 1, 2 or 3")
        self.d = d

    def source(self, state, sigma):
        return radial_source(state, sigma, self.d, self.gamma)


def euler_flux(state, gamma=GAMMA):
    return Euler(gamma).flux(state)


def euler_max_speed(state, gamma=GAMMA):
    return Euler(gamma).max_speed(state)


def char_basis(state, gamma=GAMMA):
    return Euler(gamma).char_basis(state)


def radial_source(state, sigma, d, gamma=GAMMA):
    """Geometric source of the radially symmetric Euler equations; vanishes
    identically for planar symmetry (d = 1) and for u = 0."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("radial coordinate must be positive")
    state = np.asarray(state, dtype=float)
    rho, u, p = Euler(gamma).primitives(state)
    m = state[..., 1]
    vec = np.stack([m, m * u, u * p], axis=-1)
    return -(d - 1.0) / sigma[..., None] * vec
