"""Quadrature building blocks shared by the special-function and Whittaker modules.

Three primitives cover every integral in this package:

* composite Gauss-Legendre panels (spectral on analytic panels),
* a tanh-sinh rule mapped to the real line, which absorbs the slow
  algebraic decay (1+u^2)^(-p) of the unipotent integrands,
* Wynn's epsilon algorithm applied to half-period panel sums, which
  resums the conditionally convergent oscillatory tails e(-c*u)*u^(-p).

All routines accept vectorized integrands: f(x) takes an ndarray of nodes
and returns an ndarray whose first axis matches x (trailing axes are free,
so matrix-valued integrands work unchanged).
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError  # noqa: F401  (re-export for callers)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def panel_nodes(edges, order=16):
    """Nodes and weights of composite Gauss-Legendre panels on [edges[0], edges[-1]]."""
    x0, w0 = gauss_legendre(order)
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights


def integrate_panels(f, edges, order=16):
    x, w = panel_nodes(edges, order)
    vals = np.asarray(f(x))
    return np.tensordot(w, vals, axes=(0, 0))


def tanhsinh_nodes(h=0.06, kmax=None):
    """Tanh-sinh nodes/weights on (-1,1); handles integrable endpoint singularities."""
    if kmax is None:
        kmax = int(np.ceil(4.0 / h))
    k = np.arange(-kmax, kmax + 1)
    sk = np.sinh(k * h)
    x = np.tanh(0.5 * np.pi * sk)
    w = h * 0.5 * np.pi * np.cosh(k * h) / np.cosh(0.5 * np.pi * sk) ** 2
    keep = 1.0 - np.abs(x) > 1e-17
    return x[keep], w[keep]


def sinhsinh_nodes(h=0.07, wmax=5.6, ucap=1e55):
    """Nodes/weights of the sinh-sinh rule on the real line.

    u = sinh(sinh(w)) pushes the outermost nodes to |u| ~ 1e50, so even
    decay as weak as |u|^(-1.1) leaves a negligible truncated tail; the
    transformed integrand decays double-exponentially and the trapezoid sum
    is spectrally accurate.
    """
    k = np.arange(-int(np.ceil(wmax / h)), int(np.ceil(wmax / h)) + 1)
    w = k * h
    sw = np.sinh(w)
    u = np.sinh(sw)
    jac = h * np.cosh(w) * np.cosh(sw)
    keep = np.abs(u) < ucap
    return u[keep], jac[keep]


def tanhsinh_real_line(f, h=0.07, wmax=5.6):
    """Integrate a non-oscillatory f over (-inf, inf) by the sinh-sinh rule."""
    u, jac = sinhsinh_nodes(h, wmax)
    vals = np.asarray(f(u))
    return np.tensordot(jac, vals, axes=(0, 0))


def wynn_epsilon(partial_sums):
    """Accelerate a sequence of partial sums (complex, possibly array-valued).

    Returns the deepest even-column epsilon estimate together with a crude
    error gauge (distance between the last two estimates).
    """
    S = [np.asarray(s, dtype=complex) for s in partial_sums]
    if len(S) == 1:
        return S[0], np.inf
    prev = [np.zeros_like(S[0])] * (len(S) + 1)
    cur = list(S)
    best = cur[-1]
    second = cur[-2] if len(cur) >= 2 else cur[-1]
    col = 0
    while len(cur) >= 2:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            mag = np.abs(d)
            d = np.where(mag < 1e-300, 1e-300, d)
            nxt.append(prev[i + 1] + 1.0 / d)
        col += 1
        if col % 2 == 0 and nxt:
            second = best
            best = nxt[-1]
        prev, cur = cur, nxt
    return best, float(np.max(np.abs(best - second)))


def oscillatory_tail(f, start, direction, freq, n_panels=40, order=12):
    """Resum \int_{start}^{dir*inf} f(u) du where f ~ smooth * e(-freq*u) decay.

    Panels are half-periods of the dominant frequency; Wynn epsilon is applied
    to the sequence of partial sums.  `direction` is +1 or -1 (integration
    towards +inf or -inf); `start` is a positive abscissa magnitude.
    """
    L = 0.5 / max(abs(freq), 1e-12)
    sums = []
    acc = None
    for k in range(n_panels):
        a = start + k * L
        b = a + L
        x, w = panel_nodes([a, b], order)
        if direction < 0:
            x = -x
        vals = np.asarray(f(x))
        piece = np.tensordot(w, vals, axes=(0, 0))
        acc = piece if acc is None else acc + piece
        sums.append(acc)
    return wynn_epsilon(sums)


def oscillatory_real_line(f, freq, core=8.0, core_step=0.25, n_panels=40,
                          order=12, tail_order=12):
    """Integrate f over the real line with oscillation e(-freq*u) in the tails.

    The core |u| <= core is done by plain panels (step bounded by both
    core_step and a quarter period); the two tails are epsilon-resummed.
    Returns (value, tail_error_estimate).
    """
    step = min(core_step, 0.25 / max(abs(freq), 1e-12))
    n = max(8, int(np.ceil(2 * core / step)))
    x, w = panel_nodes(np.linspace(-core, core, n + 1), order)
    total = np.tensordot(w, np.asarray(f(x)), axes=(0, 0))
    err = 0.0
    for direction in (+1, -1):
        t, e = oscillatory_tail(f, core, direction, freq, n_panels, tail_order)
        total = total + t
        err = max(err, e)
    return total, err


def geometric_line_edges(t_max, first=0.05, n=28):
    """Panel edges on [-t_max, t_max] refined geometrically near 0."""
    pos = np.geomspace(first, t_max, n)
    return np.concatenate([-pos[::-1], [0.0], pos])
