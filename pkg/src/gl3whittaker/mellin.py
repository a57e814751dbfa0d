"""Mellin-Barnes machinery for the long-element Whittaker function.

The representation is derived from the substituted unipotent integral by
applying the kernel identity

    e(x) = lim_{theta -> pi/2} (2 pi i)^{-1} int |2 pi x|^{-tau}
           e^{i tau theta sgn x} Gamma(tau) dtau

to each of the three exponential factors and folding the sign sums into the
generalized beta matrices.  With W4 = D^d(w4), W3 = D^d(w3) and the odd-beta
convention of this package (B_{-1,1}(a,b) = -i EulerBeta((1+a)/2, b/2)),

  What^d(s1, s2; mu)
    = (2 pi)^(-s1-s2) Gamma(s2) (2 pi i)^{-1} int dt Gamma(t) Gamma(s1-t)
      sum_{e1, e3, e2} c1_{e1}(t) c3_{e3}(s1-t) c2_{e2}(s2; e3)
      B^d_{e1}(1-t, t+mu1-mu2) W4 B^d_{e3}(1-s1+t, s1+mu1-mu3) W3
      B^d_{e2}(1-s1-s2+t, s2+mu2-mu3-t),

  c1_+ = cos(pi t/2),            c1_- = -i sin(pi t/2),
  (e3,e2) weights: (+,+) cos(pi tau3/2) cos(pi s2/2),
                   (+,-) +i cos(pi tau3/2) sin(pi s2/2),
                   (-,-) -i sin(pi tau3/2) cos(pi s2/2),
                   (-,+)    sin(pi tau3/2) sin(pi s2/2),   tau3 = s1 - t,

and the function itself is recovered by

  W^d(I, wl, mu, psi_y) = (2 pi i)^{-2} int int y1^{-s1} y2^{-s2}
                          What^d(s1, s2; mu) ds1 ds2 .

The commonly printed version of this formula reads differently (it carries
the opposite odd-beta sign and different sine shifts); the form above is the
one that reproduces the defining integral, checked against the absolutely
convergent Jacquet quadrature.

Evaluation strategy: the third beta factor couples s1 and s2 only through
xi = s1 + s2 and through s2 - t, so on uniform lattices Im(s_i) in h*Z the
double sum becomes, per t-node, a discrete convolution -- evaluated by FFT.
Gamma values on the fixed contour lines are spline-cached; the polynomial
parts of the beta matrices are expanded into monomials once.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import fft, ifft, next_fast_len
from scipy.interpolate import CubicSpline

from .errors import ContourPinchError
from .quadrature import panel_nodes
from .special import _btilde_scalar, _gammav
from .wigner import weyl_matrix

_DW_CACHE: dict = {}


def _dw(d, w):
    if (d, w) not in _DW_CACHE:
        _DW_CACHE[(d, w)] = weyl_matrix(d, w)
    return _DW_CACHE[(d, w)]


class LineGamma:
    """Gamma(c + i v) on a vertical line, spline-cached."""

    def __init__(self, c, vmax, step=0.0025):
        n = max(64, int(2 * (vmax + 2.0) / step))
        v = np.linspace(-vmax - 2.0, vmax + 2.0, n)
        self.spline = CubicSpline(v, _gammav(c + 1j * v))

    def __call__(self, v):
        return self.spline(v)


def monomial_coeffs(eps, m):
    """Btilde_{eps,m}(a, b) = sum_{r,q} C[r, q] a^r b^q, exact coefficients."""
    deg = m // 2 + 1
    ga = np.arange(deg + 1, dtype=float) * 0.37 + 0.11
    gb = np.arange(deg + 1, dtype=float) * 0.53 + 0.07
    A, B = np.meshgrid(ga, gb, indexing="ij")
    vals = np.asarray(_btilde_scalar(eps, m, A.astype(complex), B.astype(complex)),
                      dtype=complex)
    if vals.ndim == 0:
        vals = np.full((deg + 1, deg + 1), complex(vals))
    Va = np.vander(ga, deg + 1, increasing=True)
    Vb = np.vander(gb, deg + 1, increasing=True)
    C = np.linalg.solve(Va, vals)
    C = np.linalg.solve(Vb, C.T).T
    C[np.abs(C) < 1e-9 * max(1.0, np.abs(C).max())] = 0.0
    return C


def internal_re_s(mu):
    """Default internal contour abscissae (poles sit at Re <= 0 in these
    coordinates, but the t-window narrows as Re s grows)."""
    mu = tuple(complex(z) for z in mu)
    r1 = 0.5 + max(0.0, (mu[1] - mu[0]).real)
    r2 = 0.42 + max(0.0, (mu[2] - mu[1]).real)
    return (r1, r2)


def t_window_internal(mu, re_s1, re_s2):
    mu = tuple(complex(z) for z in mu)
    lo = max(0.0, (mu[1] - mu[0]).real, re_s1 - 1.0, re_s1 + re_s2 - 1.0)
    hi = min(1.0, re_s1, re_s2 + (mu[1] - mu[2]).real)
    return lo, hi


class MellinEvaluator:
    """Per-(d, mu) machinery; eval(ys) returns W^d(I, wl, mu, psi_y) values."""

    def __init__(self, d, mu, re_s=None, re_t=None, s_max=None, t_max=None):
        self.d = int(d)
        self.mu = tuple(complex(z) for z in mu)
        mu = self.mu
        imax = max(abs(z.imag) for z in mu)
        self.A1, self.A2 = re_s or internal_re_s(mu)
        self.Ts = s_max if s_max is not None else 16.0 + 1.6 * imax
        lo, hi = t_window_internal(mu, self.A1, self.A2)
        if hi - lo < 1e-3:
            raise ContourPinchError(
                f"t-window ({lo:.3f}, {hi:.3f}) pinched for Re s = "
                f"({self.A1:.3f}, {self.A2:.3f})")
        self.re_t = re_t if (re_t is not None and lo < re_t < hi) \
            else lo + 0.5 * (hi - lo)
        # lattice step from pole distances (trapezoid aliasing e^{-2 pi d / h});
        # pole families: s-lattices have poles at Re <= 0, the t-window gives
        # the distance for the coupled families
        dist = min(self.A1, self.A2, self.re_t - lo, hi - self.re_t, 0.4)
        self.h = min(0.085, 2 * np.pi * max(dist, 0.04) / 24.0)
        n_half = int(np.ceil(self.Ts / self.h))
        self.kk = np.arange(-n_half, n_half + 1)
        self.s1 = self.A1 + 1j * self.h * self.kk
        self.s2 = self.A2 + 1j * self.h * self.kk
        tm = t_max if t_max is not None else 40.0 + 10.0 * imax
        pos = np.geomspace(0.3, tm, 22)
        self.ti, self.tw = panel_nodes(np.concatenate([-pos[::-1], [0.0], pos]), 10)
        self._lines: dict = {}
        self._vmax = 2 * self.Ts + tm + imax + 6.0
        self._monos = {}
        for eps in (1, -1):
            for m in range(0, self.d + 1):
                if eps == -1 and m == 0:
                    continue
                self._monos[(eps, m)] = monomial_coeffs(eps, m)

    def _line(self, c):
        key = round(float(c), 10)
        if key not in self._lines:
            self._lines[key] = LineGamma(key, self._vmax)
        return self._lines[key]

    def _beta_vec_t(self, eps, a, b):
        """Diagonal of B^d_eps(a, b) at scalar (t-only) arguments."""
        d = self.d
        out = np.zeros(2 * d + 1, dtype=complex)
        for m in range(0, d + 1):
            if eps == -1 and m == 0:
                continue
            delta = m % 2
            if eps == 1:
                x1, x2 = a / 2, (delta + b) / 2
            else:
                x1, x2 = (1 + a) / 2, ((1 - delta) + b) / 2
            val = (_btilde_scalar(eps, m, a, b) * complex(_gammav(x1))
                   * complex(_gammav(x2)) / complex(_gammav((m + a + b) / 2)))
            out[d + m] = val
            out[d - m] = eps * val
        return out

    def eval(self, ys, want_tail=False):
        d, mu = self.d, self.mu
        dm = 2 * d + 1
        W4 = _dw(d, "w4")
        W3 = _dw(d, "w3")
        s1, s2 = self.s1, self.s2
        n1 = len(s1)
        Lfull = 2 * n1 - 1
        L2 = next_fast_len(Lfull)
        ys = [(float(y[0]), float(y[1])) for y in ys]
        ny = len(ys)
        K1y = [self.h * y1 ** (-s1) / (2 * np.pi) for (y1, _) in ys]
        K2y = [self.h * y2 ** (-s2) / (2 * np.pi) for (_, y2) in ys]
        # s2-only factors: Gamma(s2), cos/sin(pi s2 / 2)
        gam_s2 = self._line(self.A2)(s2.imag)
        cos_s2 = np.cos(np.pi * s2 / 2)
        sin_s2 = np.sin(np.pi * s2 / 2)
        # s1-side denominators of the third beta: Gamma((m~ + 1 - s1 + mu2 - mu3)/2)
        genm = {}
        for m in range(0, d + 1):
            cre = (m + 1 - self.A1 + (mu[1] - mu[2]).real) / 2
            genm[m] = self._line(cre)((-s1.imag + (mu[1] - mu[2]).imag) / 2)
        # second-beta s1-pure gammas Gamma((delta + s1 + mu1 - mu3)/2)
        g2_s1 = {}
        for shift in (0, 1):
            cre = (shift + self.A1 + (mu[0] - mu[2]).real) / 2
            g2_s1[shift] = self._line(cre)((s1.imag + (mu[0] - mu[2]).imag) / 2)
        # xi lattice
        kk2 = np.arange(-(n1 - 1), n1)
        xi_im = self.h * kk2
        twopi_pow = (2 * np.pi) ** (-(self.A1 + self.A2) - 1j * xi_im)
        out = np.zeros((ny, dm, dm), dtype=complex)
        tail = np.zeros((ny, dm, dm), dtype=complex)
        mask_outer = (np.abs(s1.imag) > 0.82 * self.Ts).astype(float)
        ms = np.arange(-d, d + 1)
        for it, tt0 in enumerate(self.ti):
            tt = self.re_t + 1j * tt0
            wt = self.tw[it] / (2 * np.pi)
            gam_t = complex(_gammav(tt))
            # first beta factor folded over eps1
            F1 = (np.cos(np.pi * tt / 2) * self._beta_vec_t(1, 1 - tt, tt + mu[0] - mu[1])
                  - 1j * np.sin(np.pi * tt / 2)
                  * self._beta_vec_t(-1, 1 - tt, tt + mu[0] - mu[1])) * gam_t
            # second beta factor over s1, per eps3, with Gamma(s1-t) and the
            # tau3 = s1 - t trigonometric weights
            gam_s1t = self._line(self.A1 - self.re_t)(s1.imag - tt0)
            tau3 = s1 - tt
            cos_t3 = np.cos(np.pi * tau3 / 2)
            sin_t3 = np.sin(np.pi * tau3 / 2)
            Hs = {}
            for eps3 in (1, -1):
                a2 = 1 - s1 + tt
                b2 = s1 + mu[0] - mu[2]
                B2 = np.zeros((dm, n1), dtype=complex)
                for m in range(0, d + 1):
                    if eps3 == -1 and m == 0:
                        continue
                    delta = m % 2
                    if eps3 == 1:
                        x1re = (1 - self.A1 + self.re_t) / 2
                        x1im = (tt0 - s1.imag) / 2
                        g2 = g2_s1[delta]
                    else:
                        x1re = (2 - self.A1 + self.re_t) / 2
                        x1im = (tt0 - s1.imag) / 2
                        g2 = g2_s1[1 - delta]
                    g1 = self._line(x1re)(x1im)
                    g3 = complex(_gammav((m + 1 + tt + mu[0] - mu[2]) / 2))
                    val = _btilde_scalar(eps3, m, a2, b2) * g1 * g2 / g3
                    B2[d + m] = val
                    B2[d - m] = eps3 * val
                # H[s1, m', m] = F1[m'] W4[m', j] B2[j, s1] W3[j, m] Gamma(s1-t)
                H = np.einsum('a,aj,jn,jm->nam', F1, W4, B2, W3, optimize=True)
                Hs[eps3] = H * gam_s1t[:, None, None]
            trig3 = {1: cos_t3, -1: sin_t3}
            # xi-side gamma weights per (eps2, m, r): a3 = 1 + t - xi
            a3 = (1 + tt) - (self.A1 + self.A2) - 1j * xi_im
            WXI = {}
            for (eps, m), C in self._monos.items():
                x1re = (1 + self.re_t - self.A1 - self.A2) / 2 if eps == 1 \
                    else (2 + self.re_t - self.A1 - self.A2) / 2
                gx = self._line(x1re)(a3.imag / 2)
                base = gx * twopi_pow * wt
                for r in range(C.shape[0]):
                    if np.any(C[r] != 0):
                        WXI[(eps, m, r)] = base * a3 ** r
            # s2-side third-beta data: b3 = s2 + mu2 - mu3 - t
            b3 = s2 + mu[1] - mu[2] - tt
            x2v = {}
            for shift in (0, 1):
                cre = (shift + self.A2 + (mu[1] - mu[2]).real - self.re_t) / 2
                x2v[shift] = self._line(cre)(
                    (s2.imag + (mu[1] - mu[2]).imag - tt0) / 2)
            for eps3 in (1, -1):
                for eps2 in (1, -1):
                    # trig weight in tau3 and s2, with the phase constants
                    if eps3 == 1 and eps2 == 1:
                        coef2 = cos_s2
                        phase = 1.0
                    elif eps3 == 1 and eps2 == -1:
                        coef2 = sin_s2
                        phase = 1j
                    elif eps3 == -1 and eps2 == -1:
                        coef2 = cos_s2
                        phase = -1j
                    else:
                        coef2 = sin_s2
                        phase = 1.0
                    for iy in range(ny):
                        K1 = Hs[eps3] * (K1y[iy] * trig3[eps3])[:, None, None]
                        K2base = K2y[iy] * gam_s2 * coef2
                        for m_abs in range(0, d + 1):
                            if eps2 == -1 and m_abs == 0:
                                continue
                            delta = m_abs % 2
                            shift = delta if eps2 == 1 else 1 - delta
                            C = self._monos[(eps2, m_abs)]
                            cols = [(d + m_abs, 1.0)]
                            if m_abs > 0:
                                cols.append((d - m_abs, float(eps2)))
                            FK1 = {}
                            for (mcol, sgn) in cols:
                                FK1[mcol] = fft(K1[:, :, mcol]
                                                / genm[m_abs][:, None], n=L2, axis=0)
                            for q in range(C.shape[1]):
                                if not np.any(C[:, q] != 0):
                                    continue
                                F_K2 = fft(K2base * x2v[shift] * b3 ** q, n=L2)
                                wvec = np.zeros(Lfull, dtype=complex)
                                for r in range(C.shape[0]):
                                    if C[r, q] != 0:
                                        wvec += C[r, q] * WXI[(eps2, m_abs, r)]
                                for (mcol, sgn) in cols:
                                    conv = ifft(FK1[mcol] * F_K2[:, None],
                                                axis=0)[:Lfull]
                                    out[iy][:, mcol] += phase * sgn * np.tensordot(
                                        wvec, conv, axes=(0, 0))
                                    if want_tail:
                                        Ft = fft((K1[:, :, mcol] * mask_outer[:, None])
                                                 / genm[m_abs][:, None], n=L2, axis=0)
                                        convt = ifft(Ft * F_K2[:, None], axis=0)[:Lfull]
                                        tail[iy][:, mcol] += phase * sgn * np.tensordot(
                                            wvec, convt, axes=(0, 0))
        results = []
        for iy in range(ny):
            val = out[iy]
            sc = np.max(np.abs(val))
            terr = float(np.max(np.abs(tail[iy])) / sc) if (want_tail and sc > 0) else 0.0
            results.append((val, terr))
        return results


def what_matrix(d, s_paper, mu, re_t=None, t_max=None, order=12):
    """What^d(s, mu) in the outward-facing (paper-style) coordinates.

    The library convention is Ŵ_lib(s, mu) = pi^(s1+s2) *
    What_internal(s1 - mu1, s2 + mu3), so that

        W^d(I, wl, mu, psi_y) = p_{-mu^wl}(y) *
            int int (pi y1)^{-s1} (pi y2)^{-s2} Ŵ_lib(s, mu) ds / (2 pi i)^2,

    with simple poles in s1 at mu_i - n and in s2 at -mu_i - n.
    """
    mu = tuple(complex(z) for z in mu)
    s1 = complex(s_paper[0]) - mu[0]
    s2 = complex(s_paper[1]) + mu[2]
    d = int(d)
    dm = 2 * d + 1
    W4 = _dw(d, "w4")
    W3 = _dw(d, "w3")
    lo = max(0.0, (mu[1] - mu[0]).real, s1.real - 1.0, s1.real + s2.real - 1.0)
    hi = min(1.0, s1.real, s2.real + (mu[1] - mu[2]).real)
    if hi - lo < 1e-3:
        raise ContourPinchError(f"t-window ({lo:.4f}, {hi:.4f}) pinched")
    ret = re_t if (re_t is not None and lo < re_t < hi) else 0.5 * (lo + hi)
    imax = max(abs(z.imag) for z in mu)
    tm = t_max if t_max is not None else 40.0 + 10.0 * imax
    pos = np.geomspace(0.3, tm, 22)
    ti, tw = panel_nodes(np.concatenate([-pos[::-1], [0.0], pos]), order)
    t = ret + 1j * ti

    def beta_vec(eps, a, b):
        out = np.zeros((dm,) + a.shape, dtype=complex)
        for m in range(0, d + 1):
            if eps == -1 and m == 0:
                continue
            delta = m % 2
            if eps == 1:
                x1, x2 = a / 2, (delta + b) / 2
            else:
                x1, x2 = (1 + a) / 2, ((1 - delta) + b) / 2
            val = (_btilde_scalar(eps, m, a, b) * _gammav(x1) * _gammav(x2)
                   / _gammav((m + a + b) / 2))
            out[d + m] = val
            out[d - m] = eps * val
        return out

    tau3 = s1 - t
    F1 = (np.cos(np.pi * t / 2) * beta_vec(1, 1 - t, t + mu[0] - mu[1])
          - 1j * np.sin(np.pi * t / 2) * beta_vec(-1, 1 - t, t + mu[0] - mu[1]))
    F1 = F1 * (_gammav(t) * _gammav(s1 - t))[None, :]
    B2 = {e: beta_vec(e, 1 - s1 + t, (s1 + mu[0] - mu[2]) * np.ones_like(t))
          for e in (1, -1)}
    B3 = {e: beta_vec(e, 1 - s1 - s2 + t, s2 + mu[1] - mu[2] - t)
          for e in (1, -1)}
    cos3, sin3 = np.cos(np.pi * tau3 / 2), np.sin(np.pi * tau3 / 2)
    cos2, sin2 = np.cos(np.pi * s2 / 2), np.sin(np.pi * s2 / 2)
    total = np.zeros((dm, dm), dtype=complex)
    combos = [(1, 1, cos3 * cos2, 1.0), (1, -1, cos3 * sin2, 1j),
              (-1, -1, sin3 * cos2, -1j), (-1, 1, sin3 * sin2, 1.0)]
    for (e3, e2, trig, phase) in combos:
        ker = F1 * trig[None, :] * tw[None, :] / (2 * np.pi)
        M = np.einsum('an,aj,jn,jm,mn->am', ker, W4, B2[e3], W3, B3[e2],
                      optimize=True)
        total += phase * M
    total *= (2 * np.pi) ** (-s1 - s2) * complex(_gammav(s2))
    # convert to the outward normalization
    sp1, sp2 = complex(s_paper[0]), complex(s_paper[1])
    return np.pi ** (sp1 + sp2) * total
