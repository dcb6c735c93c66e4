"""Grid-evaluation kernels with optional numba acceleration.

The two hot paths in the package are phase-space grid assemblies that
touch every (x, p) cell once per coherent dyad or quadrature offset:

- ``wigner_terms``: sum of analytic Gaussian dyad terms
  Re sum_d wc_d exp(-(x - mx_d)^2 + i kx_d x) exp(-(p - mp_d)^2 + i kp_d (p - mp_d))
  over an (x, p) grid; every Wigner surface in the package is built
  from this shape (the static dyad phase is folded into wc_d).
- ``wigner_quadrature``: direct Riemann evaluation of
  (1/pi) integral dy exp(2ipy) psi(x-y) psi*(x+y) from wavefunction
  samples; the independent oracle for the analytic path.

Both carry an njit implementation and a pure-numpy twin.  The backend is
chosen once at import: numba when importable, the numpy fallback when it
is not or when the environment variable CAVITYWALK_NO_NUMBA is set to a
nonempty value other than 0.  Results agree to rounding; within one
backend the accumulation order is fixed, so repeated runs are
bit-identical.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "backend_name", "wigner_terms", "wigner_quadrature"]


def wigner_terms_numpy(
    wc: np.ndarray,
    mx: np.ndarray,
    mp_: np.ndarray,
    kx: np.ndarray,
    kp: np.ndarray,
    xs: np.ndarray,
    ps: np.ndarray,
) -> np.ndarray:
    """Separable evaluation: one complex matmul over the dyad axis."""
    u = wc[None, :] * np.exp(
        -((xs[:, None] - mx[None, :]) ** 2) + 1j * kx[None, :] * xs[:, None]
    )
    dp = ps[:, None] - mp_[None, :]
    v = np.exp(-(dp**2) + 1j * kp[None, :] * dp)
    return (u @ v.T).real


def wigner_quadrature_numpy(psi: np.ndarray, dx: float, ps: np.ndarray) -> np.ndarray:
    """Quadrature as a (shift-product matrix) @ (phase matrix) product.

    Offsets y_k = k dx with |k| <= (n-1)//2 cover every nonzero product
    psi(x - y) psi*(x + y) on the grid; edge terms vanish by the decay
    precondition, so the Riemann sum is spectrally accurate.
    """
    psi = np.asarray(psi, dtype=complex)
    n = psi.size
    kmax = (n - 1) // 2
    m = np.zeros((n, 2 * kmax + 1), dtype=complex)
    for k in range(-kmax, kmax + 1):
        a = abs(k)
        b = n - abs(k)
        if a >= b:
            continue
        m[a:b, k + kmax] = psi[a - k : b - k] * np.conj(psi[a + k : b + k])
    phases = np.exp(2j * np.arange(-kmax, kmax + 1)[:, None] * dx * ps[None, :])
    return (dx / np.pi) * (m @ phases).real


_FORCE_NUMPY = os.environ.get("CAVITYWALK_NO_NUMBA", "").strip() not in ("", "0")

if not _FORCE_NUMPY:
    try:
        import numba
    except ImportError:
        numba = None
else:
    numba = None

if numba is not None:
    _njit = numba.njit(cache=True, parallel=True, fastmath=False)

    # Both kernels keep the innermost loop elementwise over the momentum
    # axis: every lane owns its accumulator, so LLVM vectorizes without
    # reassociating a reduction (fastmath stays off).  Transcendentals
    # live in small precomputed tables outside the hot loops.

    @_njit
    def _terms_impl(wr, wi, mx, mp_, kx, kp, xs, ps, out):
        ndyad = wr.size
        npts = ps.size
        vr = np.empty((ndyad, npts))
        vi = np.empty((ndyad, npts))
        for d in range(ndyad):
            for j in range(npts):
                dp = ps[j] - mp_[d]
                g = np.exp(-dp * dp)
                ph = kp[d] * dp
                vr[d, j] = g * np.cos(ph)
                vi[d, j] = g * np.sin(ph)
        for i in numba.prange(xs.size):
            x = xs[i]
            for j in range(npts):
                out[i, j] = 0.0
            for d in range(ndyad):
                dxc = x - mx[d]
                g = np.exp(-dxc * dxc)
                ph = kx[d] * x
                cr = g * np.cos(ph)
                ci = g * np.sin(ph)
                a = wr[d] * cr - wi[d] * ci
                b = wr[d] * ci + wi[d] * cr
                for j in range(npts):
                    out[i, j] += a * vr[d, j] - b * vi[d, j]

    @_njit
    def _quadrature_impl(pre, pim, dx, ps, out):
        n = pre.size
        npts = ps.size
        kmax_all = (n - 1) // 2
        cs = np.empty((kmax_all + 1, npts))
        sn = np.empty((kmax_all + 1, npts))
        for k in range(kmax_all + 1):
            for j in range(npts):
                ph = 2.0 * ps[j] * k * dx
                cs[k, j] = np.cos(ph)
                sn[k, j] = np.sin(ph)
        scale = dx / np.pi
        for i in numba.prange(n):
            kmax = i if i < n - 1 - i else n - 1 - i
            # k = 0 term, then +-k pairs combined into one real term
            base = pre[i] * pre[i] + pim[i] * pim[i]
            for j in range(npts):
                out[i, j] = base
            for k in range(1, kmax + 1):
                ar = pre[i - k]
                ai = pim[i - k]
                br = pre[i + k]
                bi = -pim[i + k]
                prr = 2.0 * (ar * br - ai * bi)
                pri = 2.0 * (ar * bi + ai * br)
                for j in range(npts):
                    out[i, j] += prr * cs[k, j] - pri * sn[k, j]
            for j in range(npts):
                out[i, j] *= scale

    def _wigner_terms_numba(wc, mx, mp_, kx, kp, xs, ps):
        out = np.empty((xs.size, ps.size))
        _terms_impl(
            np.ascontiguousarray(wc.real),
            np.ascontiguousarray(wc.imag),
            np.ascontiguousarray(mx, dtype=np.float64),
            np.ascontiguousarray(mp_, dtype=np.float64),
            np.ascontiguousarray(kx, dtype=np.float64),
            np.ascontiguousarray(kp, dtype=np.float64),
            np.ascontiguousarray(xs, dtype=np.float64),
            np.ascontiguousarray(ps, dtype=np.float64),
            out,
        )
        return out

    def _wigner_quadrature_numba(psi, dx, ps):
        psi = np.asarray(psi, dtype=complex)
        out = np.empty((psi.size, ps.size))
        _quadrature_impl(
            np.ascontiguousarray(psi.real),
            np.ascontiguousarray(psi.imag),
            float(dx),
            np.ascontiguousarray(ps, dtype=np.float64),
            out,
        )
        return out

    BACKEND = "numba"
    wigner_terms = _wigner_terms_numba
    wigner_quadrature = _wigner_quadrature_numba
else:
    BACKEND = "numpy"
    wigner_terms = wigner_terms_numpy
    wigner_quadrature = wigner_quadrature_numpy


def backend_name() -> str:
    """Active kernel backend, 'numba' or 'numpy'."""
    return BACKEND
