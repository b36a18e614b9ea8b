"""Fused per-cell reconstruction loops compiled with numba.

Each function consumes a contiguous (n, window) batch of cell-average
windows plus the precomputed constant tables of a kernel and emits the
reconstruction evaluated at the requested points.  row_lo/row_hi/ncol
describe the active window rows and coefficient count of each candidate
so the loops skip the zero padding.  Results match the vectorized numpy
path to round-off; the test suite asserts it.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _interp_cell(wrow, smats, row_lo, row_hi, ncol, coefs):
    nk = smats.shape[0]
    for k in range(nk):
        for c in range(ncol[k]):
            acc = 0.0
            for j in range(row_lo[k], row_hi[k]):
                acc += wrow[j] * smats[k, j, c]
            coefs[k, c] = acc


@njit(cache=True, inline="always")
def _indicator_cell(coefs, ind_form, ncol, inds):
    nk = coefs.shape[0]
    for k in range(nk):
        acc = 0.0
        for a in range(1, ncol[k]):
            row = 0.0
            for b in range(1, ncol[k]):
                row += ind_form[a, b] * coefs[k, b]
            acc += coefs[k, a] * row
        inds[k] = acc


@njit(cache=True)
def single_set_values(w, smats, ind_form, linw, lam, eps, ell, vand,
                      row_lo, row_hi, ncol):
    """One nonlinear Z-weight set over all candidates (central blends)."""
    n = w.shape[0]
    nk, _, ow = smats.shape
    npts = vand.shape[0]
    out = np.empty((n, npts))
    coefs = np.zeros((nk, ow))
    inds = np.empty(nk)
    alpha = np.empty(nk)
    blend = np.empty(ow)
    for m in range(n):
        _interp_cell(w[m], smats, row_lo, row_hi, ncol, coefs)
        _indicator_cell(coefs, ind_form, ncol, inds)
        tau = 0.0
        for k in range(nk):
            tau += lam[k] * inds[k]
        tau = abs(tau)
        asum = 0.0
        for k in range(nk):
            r = tau / (inds[k] + eps)
            alpha[k] = linw[k] * (1.0 + r ** ell)
            asum += alpha[k]
        mu0 = alpha[0] / asum / linw[0]
        for c in range(ow):
            blend[c] = mu0 * coefs[0, c]
        for k in range(1, nk):
            muk = alpha[k] / asum - mu0 * linw[k]
            for c in range(ncol[k]):
                blend[c] += muk * coefs[k, c]
        for p in range(npts):
            acc = 0.0
            for c in range(ow):
                acc += vand[p, c] * blend[c]
            out[m, p] = acc
    return out


@njit(cache=True)
def cweno_set_values(w, smats, ind_form, linw, eps, ell, vand,
                     row_lo, row_hi, ncol):
    """Classical weights d_k / (I_k + eps)^ell instead of Z-weights."""
    n = w.shape[0]
    nk, _, ow = smats.shape
    npts = vand.shape[0]
    out = np.empty((n, npts))
    coefs = np.zeros((nk, ow))
    inds = np.empty(nk)
    alpha = np.empty(nk)
    blend = np.empty(ow)
    for m in range(n):
        _interp_cell(w[m], smats, row_lo, row_hi, ncol, coefs)
        _indicator_cell(coefs, ind_form, ncol, inds)
        asum = 0.0
        for k in range(nk):
            alpha[k] = linw[k] / (inds[k] + eps) ** ell
            asum += alpha[k]
        mu0 = alpha[0] / asum / linw[0]
        for c in range(ow):
            blend[c] = mu0 * coefs[0, c]
        for k in range(1, nk):
            muk = alpha[k] / asum - mu0 * linw[k]
            for c in range(ncol[k]):
                blend[c] += muk * coefs[k, c]
        for p in range(npts):
            acc = 0.0
            for c in range(ow):
                acc += vand[p, c] * blend[c]
            out[m, p] = acc
    return out


@njit(cache=True, inline="always")
def _indicator_vec(v, ind_form, width):
    acc = 0.0
    for a in range(1, width):
        row = 0.0
        for b in range(1, width):
            row += ind_form[a, b] * v[b]
        acc += v[a] * row
    return acc


@njit(cache=True)
def hierarchic_values(w, smats, ind_form, inner_w, inner_lam, outer_w,
                      eps, ell, bgs, vand, row_lo, row_hi, ncol):
    """Nested blends of the adaptive-order competitor schemes.

    Candidate order in smats: big polynomial, middle polynomial, three
    parabolas.  bgs=True runs two inner levels (orders 7 and 5) plus the
    outer one (three weight sets); otherwise the big polynomial joins the
    outer blend directly (two sets).
    """
    n = w.shape[0]
    nk, _, ow = smats.shape
    npts = vand.shape[0]
    out = np.empty((n, npts))
    coefs = np.zeros((nk, ow))
    inds = np.empty(nk)
    alpha = np.empty(4)
    r5 = np.empty(ow)
    top = np.empty(ow)
    for m in range(n):
        _interp_cell(w[m], smats, row_lo, row_hi, ncol, coefs)
        _indicator_cell(coefs, ind_form, ncol, inds)

        # inner level around the middle polynomial (candidates 1..4)
        tau = inner_lam[0] * inds[1]
        for k in range(1, 4):
            tau += inner_lam[k] * inds[1 + k]
        tau = abs(tau)
        asum = 0.0
        for k in range(4):
            r = tau / (inds[1 + k] + eps)
            alpha[k] = inner_w[k] * (1.0 + r ** ell)
            asum += alpha[k]
        mu0 = alpha[0] / asum / inner_w[0]
        for c in range(ow):
            r5[c] = mu0 * coefs[1, c]
        for k in range(1, 4):
            muk = alpha[k] / asum - mu0 * inner_w[k]
            for c in range(ncol[1 + k]):
                r5[c] += muk * coefs[1 + k, c]

        if bgs:
            # second inner level around the big polynomial (0, 2, 3, 4)
            tau = inner_lam[0] * inds[0]
            for k in range(1, 4):
                tau += inner_lam[k] * inds[1 + k]
            tau = abs(tau)
            asum = 0.0
            for k in range(4):
                base = inds[0] if k == 0 else inds[1 + k]
                r = tau / (base + eps)
                alpha[k] = inner_w[k] * (1.0 + r ** ell)
                asum += alpha[k]
            mu0 = alpha[0] / asum / inner_w[0]
            for c in range(ow):
                top[c] = mu0 * coefs[0, c]
            for k in range(1, 4):
                muk = alpha[k] / asum - mu0 * inner_w[k]
                for c in range(ncol[1 + k]):
                    top[c] += muk * coefs[1 + k, c]
            i_top = _indicator_vec(top, ind_form, ow)
        else:
            for c in range(ow):
                top[c] = coefs[0, c]
            i_top = inds[0]

        i_r5 = _indicator_vec(r5, ind_form, ow)

        tau = abs(i_top - i_r5)
        a0 = outer_w[0] * (1.0 + (tau / (i_top + eps)) ** ell)
        a1 = outer_w[1] * (1.0 + (tau / (i_r5 + eps)) ** ell)
        asum = a0 + a1
        mu0 = a0 / asum / outer_w[0]
        mu1 = a1 / asum - mu0 * outer_w[1]
        for p in range(npts):
            acc = 0.0
            for c in range(ow):
                acc += vand[p, c] * (mu0 * top[c] + mu1 * r5[c])
            out[m, p] = acc
    return out
