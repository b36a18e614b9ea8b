"""Conservative polynomial interpolation on uniform stencils and smoothness
indicators of Jiang-Shu type.

Polynomials are stored by their coefficients in the scaled local coordinate
xi = (x - x_c) / dx, where x_c is the center of the reconstruction cell.  In
that variable both the interpolation matrices and the indicator quadratic
forms are independent of dx, so they are computed once per (degree, stencil)
pair and reused; in particular the dx powers of the indicator definition
cancel exactly against the derivative scaling.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np


class Polynomial:
    """Polynomial in the scaled cell variable xi; interfaces at xi = +-1/2."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if self.coeffs.ndim != 1 or not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficients must be a finite 1D sequence")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, xi):
        return evaluate(self, xi)

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


@dataclass(frozen=True)
class StencilSpec:
    """Contiguous integer cell offsets containing 0; degree = len - 1."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(int(o) for o in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if 0 not in offs:
            raise ValueError("stencil must contain the reconstruction cell 0")
        if list(offs) != list(range(offs[0], offs[-1] + 1)):
            raise ValueError("stencil offsets must be contiguous and sorted")

    @property
    def degree(self):
        return len(self.offsets) - 1

    @classmethod
    def centered(cls, halfwidth):
        return cls(tuple(range(-halfwidth, halfwidth + 1)))


def _exact_inverse(rows):
    """Gauss-Jordan inverse of a matrix of Fractions."""
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[piv][col] == 0:
            raise np.linalg.LinAlgError("singular averaging matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = Fraction(1, 1) / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def interp_matrix(offsets):
    """Matrix mapping cell averages on `offsets` to xi-coefficients.

    Inverse of the averaging matrix A[j, p] = ((j+1/2)^(p+1) - (j-1/2)^(p+1))
    / (p+1), built exactly in rational arithmetic and stored as float64.
    """
    spec = StencilSpec(offsets)
    n = spec.degree + 1
    avg = []
    for j in spec.offsets:
        lo, hi = Fraction(2 * j - 1, 2), Fraction(2 * j + 1, 2)
        avg.append([(hi ** (p + 1) - lo ** (p + 1)) / (p + 1) for p in range(n)])
    inv = _exact_inverse(avg)
    return np.array([[float(v) for v in row] for row in inv])


def _falling(j, i):
    out = 1
    for k in range(i):
        out *= j - k
    return out


@lru_cache(maxsize=None)
def indicator_matrix(degree):
    """Symmetric PSD form M with I[P] = c^T M c on xi-coefficients.

    M[j, k] = sum_i (j)_i (k)_i Integral_{-1/2}^{1/2} xi^(j+k-2i) dxi summed
    over derivative orders i = 1..min(j,k); the first row/column vanish, so
    constants carry zero indicator.
    """
    n = degree + 1
    m = [[Fraction(0)] * n for _ in range(n)]
    for j in range(1, n):
        for k in range(1, n):
            acc = Fraction(0)
            for i in range(1, min(j, k) + 1):
                p = j + k - 2 * i
                if p % 2 == 0:
                    acc += (_falling(j, i) * _falling(k, i)
                            * Fraction(1, (p + 1) * 2 ** p))
            m[j][k] = acc
    return np.array([[float(v) for v in row] for row in m])


def interpolate_from_averages(spec, averages):
    """Polynomial whose average over every stencil cell matches the data."""
    averages = np.asarray(averages, dtype=float)
    if averages.shape != (spec.degree + 1,):
        raise ValueError(
            f"expected {spec.degree + 1} averages, got {averages.shape}")
    return Polynomial(interp_matrix(spec.offsets) @ averages)


def evaluate(p, xi):
    """Horner evaluation at the scaled coordinate xi."""
    acc = 0.0
    for c in p.coeffs[::-1]:
        acc = acc * xi + c
    return acc


def cell_average(p, offset=0):
    """Exact average of `p` over the cell at integer `offset` (1 = dx)."""
    lo, hi = offset - 0.5, offset + 0.5
    powers = np.arange(1, p.degree + 2)
    return float(np.sum(p.coeffs * (hi ** powers - lo ** powers) / powers))


def smoothness_indicator(p):
    """Jiang-Shu indicator: scaled squared L2 norms of all derivatives.

    Computed as the quadratic form on xi-coefficients, which equals
    sum_i dx^(2i-1) Integral (d^i P/dx^i)^2 dx for any dx.
    """
    m = indicator_matrix(p.degree)
    return float(p.coeffs @ m @ p.coeffs)
