"""Scalar special functions: complex gamma, Euler beta, the classical
one-variable Whittaker integral, its functional-equation gamma factors, and
the generalized beta matrices.

Conventions.  e(t) = exp(2*pi*i*t).  The classical integral is

    W_m(y, u) = int_R (1+x^2)^(-(1+u)/2) * z(x)^(-m) * e(-y*x) dx,
    z(x) = (1+ix)/sqrt(1+x^2),

absolutely convergent for Re(u) > 0 and entire in u for y != 0.  For y != 0
we evaluate it on a deformed rectangle contour (horizontal segment [-T, T]
plus two descending verticals on which e(-yx) decays exponentially); the
deformed integral converges for every u and realizes the analytic
continuation directly.  For y = 0 the closed form

    W_m(0, u) = 2^(1-u) * pi * Gamma(u) / (Gamma((1+u+m)/2) Gamma((1+u-m)/2))

is used.  For y != 0 one also has

    W_m(y, u) = (pi|y|)^((1+u)/2) / (|y| Gamma((1-eps*m+u)/2))
                * WhittakerW(-eps*m/2, u/2, 4*pi*|y|),      eps = sgn(y),

without any sign prefactor: the (-1)^m sometimes quoted with this formula
contradicts both the defining integral and the y -> 0 limit (checked
numerically against the closed form above), so it is dropped here.

The generalized beta function is

    B_{eps,m}(a, b) = int_0^inf x^(a-1) (1+x^2)^(-(a+b)/2)
                      * (z(x)^(-m) + eps * conj(z)(x)^(-m)) dx,

with B_{eps,m} = eps * B_{eps,-m}.  Expanding the m-th powers gives finite
binomial sums of Euler betas; we store them in the factored form

    B_{eps,m}(a,b) = Btilde_{eps,m}(a,b) * [gamma-factor ratio],

where Btilde is a polynomial in (a, b) (Pochhammer sums), so poles and
zeros are explicit.  Note the odd family carries a factor -i:
B_{-1,1}(a,b) = -i * EulerBeta((1+a)/2, b/2), as the defining integral
shows; formulas quoting +i have the sign reversed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import PoleError
from .quadrature import panel_nodes

# Lanczos coefficients, g = 607/128, 15 terms (Godfrey).  Relative accuracy
# ~1e-15 on Re(z) >= 1/2; reflection handles the left half-plane.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array([
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4,
    0.15808870322491248884e-3, -0.21026444172410488319e-3,
    0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])


def _gammav(z):
    """Vectorized complex gamma without pole checks (poles return inf/nan)."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z)
    w = zz - 1.0
    acc = np.full_like(zz, _LANCZOS_C[0])
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    vals = np.sqrt(2 * np.pi) * t ** (w + 0.5) * np.exp(-t) * acc
    out[~refl] = vals[~refl]
    if refl.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            out[refl] = np.pi / (np.sin(np.pi * z[refl]) * vals[refl])
    return out[0] if scalar else out


def gamma_complex(z):
    """Complex gamma function; raises PoleError at non-positive integers."""
    zc = complex(z)
    if abs(zc.imag) < 1e-12:
        n = round(zc.real)
        if n <= 0 and abs(zc.real - n) < 1e-12:
            raise PoleError(f"gamma pole at z = {n}")
    return complex(_gammav(zc))


def euler_beta(u, v):
    """Euler beta B(u, v) = Gamma(u)Gamma(v)/Gamma(u+v)."""
    return gamma_complex(u) * gamma_complex(v) / complex(_gammav(u + v))


def _near_nonpositive_integer(z, tol=1e-6):
    zc = complex(z)
    n = round(zc.real)
    return n <= 0 and abs(zc - n) < tol


def poch(x, n):
    """Rising factorial (x)_n for integer n >= 0, vectorized in x."""
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    for k in range(n):
        out = out * (x + k)
    return out


# ---------------------------------------------------------------------------
# classical Whittaker integral
# ---------------------------------------------------------------------------

@dataclass
class ClassicalWhittakerValue:
    value: complex
    method: str  # 'quadrature' | 'closed_form_y0' | 'functional_equation'


def _w_closed_y0(m, u):
    """W_m(0, u) by the closed form, with a ring average at the lattice points
    where numerator and denominator poles must be cancelled against each
    other.  Genuine poles (even m at u = 0, -2, ...) raise PoleError."""
    m = int(m)

    def expr(uu):
        return (2.0 ** (1 - uu) * np.pi * _gammav(uu)
                / (_gammav((1 + uu + m) / 2) * _gammav((1 + uu - m) / 2)))

    if not _near_nonpositive_integer(u):
        return complex(expr(complex(u)))
    u0 = complex(round(complex(u).real))
    delta = 1e-5
    ring = u0 + delta * np.exp(2j * np.pi * np.arange(8) / 8)
    vals = expr(ring)
    avg = complex(np.mean(vals))
    if np.max(np.abs(vals)) > 50.0 * max(1.0, abs(avg)) / delta * 1e-3:
        raise PoleError(f"classical W(0, u) pole at u = {u0} (m = {m})")
    return avg


def classical_W_quadrature_general(m, y, u, order=20, t_edge=2.5):
    """Deformed-contour evaluation of the defining integral, y != 0."""
    y = float(y)
    ay = abs(y)
    sgn = 1.0 if y > 0 else -1.0
    mm = int(m)

    def f(zz):
        w = 1 + zz * zz
        return w ** (-(1 + u) / 2) * ((1 + 1j * zz) / np.sqrt(w)) ** (-mm) \
            * np.exp(-2j * np.pi * y * zz)

    n_panels = max(10, int(np.ceil(t_edge * ay * 5)))
    x, wts = panel_nodes(np.linspace(-t_edge, t_edge, 2 * n_panels + 1), order)
    horiz = np.sum(f(x.astype(complex)) * wts)
    # descending verticals at +-t_edge; e(-y z) decays like exp(-2 pi |y| v)
    wgrid, wwts = panel_nodes(
        np.concatenate([[0.0], np.geomspace(0.01, 42.0, 36)]), order)
    v = wgrid / (2 * np.pi * ay)
    dv = wwts / (2 * np.pi * ay)
    zp = t_edge - 1j * sgn * v
    zm = -t_edge - 1j * sgn * v
    tails = (-1j * sgn) * np.sum(f(zp) * dv) + (1j * sgn) * np.sum(f(zm) * dv)
    return horiz + tails


def classical_W(m, y, u):
    """The classical integral W_m(y, u); see module docstring for branches."""
    m = int(m)
    u = complex(u)
    if y == 0:
        return ClassicalWhittakerValue(_w_closed_y0(m, u), "closed_form_y0")
    if u.real > -1e-3:
        return ClassicalWhittakerValue(
            complex(classical_W_quadrature_general(m, y, u)), "quadrature")
    # reflect to Re(u') > 0 through the classical functional equation
    up = -u
    eps = 1.0 if y > 0 else -1.0
    garg = (1 - eps * m + up) / 2
    if _near_nonpositive_integer(garg, 1e-4):
        # FE factor would hit a gamma pole (the value itself is entire);
        # the deformed contour remains valid, so evaluate directly.
        return ClassicalWhittakerValue(
            complex(classical_W_quadrature_general(m, y, u)), "quadrature")
    factor = ((np.pi * abs(y)) ** (-up)
              * complex(_gammav(garg)) / complex(_gammav((1 - eps * m - up) / 2)))
    base = classical_W_quadrature_general(m, y, up)
    return ClassicalWhittakerValue(complex(factor * base), "functional_equation")


def classical_W_matrix(d, y, u):
    """Diagonal matrix W^d(y,u) with entries W_m(y,u), m = -d..d (center-indexed)."""
    return np.diag([classical_W(m, y, u).value for m in range(-d, d + 1)])


def classical_W_vector(d, y_array, u, order=16):
    """W_m(Y, u) for all |m| <= d on an array of nonzero reals Y; shape (2d+1, len(Y)).

    Shares contour nodes across m; used by the Jacquet quadrature, where the
    inner unipotent integral collapses to this classical integral.
    """
    Y = np.asarray(y_array, dtype=float)
    ay = np.abs(Y)
    sgn = np.sign(Y)
    ms = np.arange(-d, d + 1)
    t_edge = 2.5
    n_panels = max(10, int(np.ceil(t_edge * ay.max() * 5)))
    x, wts = panel_nodes(np.linspace(-t_edge, t_edge, 2 * n_panels + 1), order)
    w = 1 + x * x
    base = w ** (-(1 + u) / 2)
    zpow = ((1 + 1j * x) / np.sqrt(w))[None, :] ** (-ms[:, None])
    osc = np.exp(-2j * np.pi * Y[:, None] * x[None, :])
    horiz = np.einsum('mx,yx->my', base[None, :] * zpow * wts, osc)

    wgrid, wwts = panel_nodes(
        np.concatenate([[0.0], np.geomspace(0.01, 42.0, 36)]), order)
    v = wgrid[None, :] / (2 * np.pi * ay[:, None])
    dv = wwts[None, :] / (2 * np.pi * ay[:, None])
    out = horiz.astype(complex)
    for pm in (+1.0, -1.0):
        z = pm * t_edge - 1j * sgn[:, None] * v
        wz = 1 + z * z
        fz = wz ** (-(1 + u) / 2) * np.exp(-2j * np.pi * Y[:, None] * z)
        zp = ((1 + 1j * z) / np.sqrt(wz))
        for i, m in enumerate(ms):
            out[i] += (-1j * pm) * np.sum(zp ** (-m) * fz * dv, axis=1) * sgn
    return out


def gamma_W(d, u, eps):
    """Diagonal functional-equation factor Gamma_W^d(u, eps).

    Entries Gamma((1-eps*m+u)/2) / Gamma((1-eps*m-u)/2); the reflection-formula
    rewriting (-eps*sgn m)^m * Gamma((1+|m|+u)/2)/Gamma((1+|m|-u)/2) is checked
    in the tests.  Raises PoleError naming the offending m.
    """
    u = complex(u)
    entries = []
    for m in range(-d, d + 1):
        num = (1 - eps * m + u) / 2
        den = (1 - eps * m - u) / 2
        if _near_nonpositive_integer(num):
            raise PoleError(f"gamma_W pole in numerator at m = {m}")
        entries.append(complex(_gammav(num) / _gammav(den)))
    return np.diag(entries)


def gamma_W_second_form(d, u, eps):
    """The rewritten form of the same diagonal factor (reflection identity)."""
    u = complex(u)
    entries = []
    for m in range(-d, d + 1):
        sign = 1.0 if m == 0 else float(-eps * np.sign(m)) ** m
        entries.append(sign * complex(
            _gammav((1 + abs(m) + u) / 2) / _gammav((1 + abs(m) - u) / 2)))
    return np.diag(entries)


# ---------------------------------------------------------------------------
# generalized beta
# ---------------------------------------------------------------------------

@dataclass
class GeneralizedBeta:
    d: int
    epsilon: int
    a: complex
    b: complex
    matrix: np.ndarray  # diagonal entries, index m = -d..d from the center


def _btilde_scalar(eps, m, a, b):
    """Polynomial part Btilde_{eps,m}(a,b); m >= 0.  Pure Pochhammer sums."""
    if eps == 1:
        delta = m % 2
        return sum(comb(m, 2 * j) * (-1) ** j * poch(a / 2, j)
                   * poch((delta + b) / 2, (m - delta) // 2 - j)
                   for j in range(m // 2 + 1))
    if m == 0:
        return 0.0 + 0.0j
    delta = m % 2
    top = (m - 1) // 2
    return -1j * sum(comb(m, 2 * j + 1) * (-1) ** j * poch((1 + a) / 2, j)
                     * poch(((1 - delta) + b) / 2, top - j)
                     for j in range(top + 1))


def _beta_gamma_factor(eps, m, a, b, check_poles=True):
    """Gamma-factor of the factored form, m >= 0."""
    delta = m % 2
    if eps == 1:
        num1, num2 = a / 2, (delta + b) / 2
    else:
        num1, num2 = (1 + a) / 2, ((1 - delta) + b) / 2
    if check_poles:
        for arg, which in ((num1, "a"), (num2, "b")):
            if _near_nonpositive_integer(arg):
                raise PoleError(
                    f"generalized beta pole from the {which}-gamma at m = {m}")
    return _gammav(num1) * _gammav(num2) / _gammav((m + a + b) / 2)


def generalized_beta_scalar(eps, m, a, b, check_poles=True):
    """B_{eps,m}(a,b) by the factored finite sum; any m in Z."""
    if m < 0:
        return eps * generalized_beta_scalar(eps, -m, a, b, check_poles)
    if eps == -1 and m == 0:
        return 0.0 + 0.0j
    return complex(_btilde_scalar(eps, m, a, b)
                   * _beta_gamma_factor(eps, m, a, b, check_poles))


def beta_matrix(d, eps, a, b):
    """Diagonal matrix B^d_eps(a,b) as a GeneralizedBeta record."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    vals = np.array([generalized_beta_scalar(eps, m, a, b)
                     for m in range(-d, d + 1)])
    return GeneralizedBeta(d=d, epsilon=eps, a=complex(a), b=complex(b),
                           matrix=vals)


def btilde_scalar(eps, m, a, b):
    """Polynomial part of the factored form (pole diagnostics)."""
    if m < 0:
        return eps * btilde_scalar(eps, -m, a, b)
    if eps == -1 and m == 0:
        return 0.0 + 0.0j
    return complex(_btilde_scalar(eps, m, a, b))


def beta_quadrature(eps, m, a, b, order=18):
    """Direct quadrature of the defining integral (oracle; Re a, Re b > 0).

    Substitution x = e^w gives double-sided exponential decay with rates
    Re(a) (left) and Re(b) (right).
    """
    a = complex(a)
    b = complex(b)
    if a.real <= 0 or b.real <= 0:
        raise ValueError("quadrature oracle requires Re(a), Re(b) > 0")
    wl = 40.0 / a.real
    wr = 40.0 / b.real
    edges = np.concatenate([
        -np.geomspace(wl, 0.1, 24), [0.0], np.geomspace(0.1, wr, 24)])
    w, wts = panel_nodes(edges, order)
    x = np.exp(w)
    z = (1 + 1j * x) / np.sqrt(1 + x * x)
    vals = (x ** a * (1 + x * x) ** (-(a + b) / 2)
            * (z ** (-m) + eps * np.conj(z) ** (-m)))
    return complex(np.sum(vals * wts))
