"""Wigner D-matrix representations of SO(3,R).

The (2d+1)-dimensional representation is realized concretely:

    D^d_{m'm}(k(alpha,beta,gamma)) = e^{-i m' alpha} d^d_{m'm}(cos beta) e^{-i m gamma},

with Z-Y-Z Euler angles and matrices indexed from the center, so row r of
the ndarray corresponds to m' = r - d (top row m' = -d).  The small-d values
come from the standard factorial sum.  The fast path for a rotation given as
a unit-complex triple k~(s,t,u) = k(arg s, arg t, arg u) is

    D^d(k~(s,t,u)) = Dt(s) D^d(w3) Dt(conj t) D^d(w3) Dt(u),

where Dt(s) = diag(s^d, ..., 1, ..., s^{-d}) is the diagonal rotation.  The
same product is used with non-unit complex arguments inside deformed-contour
integrals, where it is the analytic continuation entry by entry.

The V group of diagonal sign matrices, the six Weyl representatives, and the
projectors Sigma^d_chi onto the four V-characters live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, isqrt

import numpy as np


@dataclass
class EulerAngles:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not (-1e-12 <= self.beta <= np.pi + 1e-12):
            raise ValueError("beta must lie in [0, pi]")
        self.alpha = float(self.alpha) % (2 * np.pi)
        self.gamma = float(self.gamma) % (2 * np.pi)
        self.beta = float(min(max(self.beta, 0.0), np.pi))


@dataclass
class WignerMatrix:
    d: int
    entries: np.ndarray  # (2d+1) x (2d+1) complex, row r <-> m' = r - d


@dataclass(frozen=True)
class VCharacter:
    """Character of V fixed by its values on v_{-+} (sign1) and v_{+-} (sign2)."""
    sign1: int
    sign2: int

    def __post_init__(self):
        if self.sign1 not in (1, -1) or self.sign2 not in (1, -1):
            raise ValueError("character signs must be +-1")

    def value(self, v_name):
        return {"v++": 1, "v-+": self.sign1, "v+-": self.sign2,
                "v--": self.sign1 * self.sign2}[v_name]


CHI_PP = VCharacter(1, 1)
CHI_PM = VCharacter(1, -1)
CHI_MP = VCharacter(-1, 1)
CHI_MM = VCharacter(-1, -1)

# Euler angles of the Weyl representatives and the V matrices.
WEYL_ANGLES = {
    "I": (0.0, 0.0, 0.0),
    "w2": (np.pi / 2, np.pi, 0.0),
    "w3": (3 * np.pi / 2, np.pi / 2, 3 * np.pi / 2),
    "w4": (np.pi / 2, np.pi / 2, np.pi),
    "w5": (0.0, np.pi / 2, np.pi / 2),
    "wl": (np.pi, np.pi / 2, 0.0),
}
V_ANGLES = {
    "v++": (0.0, 0.0, 0.0),
    "v-+": (np.pi, 0.0, 0.0),
    "v--": (0.0, np.pi, 0.0),
    "v+-": (np.pi, np.pi, 0.0),
}


def wigner_small_d(d, mprime, m, beta):
    """Wigner d-polynomial d^d_{m'm}(cos beta) by the factorial sum."""
    d = int(d)
    if abs(mprime) > d or abs(m) > d:
        raise ValueError("indices must satisfy |m'|, |m| <= d")
    cb = np.cos(beta / 2.0)
    sb = np.sin(beta / 2.0)
    total = 0.0
    for k in range(max(0, m - mprime), min(d + m, d - mprime) + 1):
        num = (-1) ** (k + mprime - m) * np.sqrt(
            float(factorial(d + m) * factorial(d - m)
                  * factorial(d + mprime) * factorial(d - mprime)))
        den = float(factorial(d + m - k) * factorial(k)
                    * factorial(mprime - m + k) * factorial(d - mprime - k))
        total += num / den * cb ** (2 * d + m - mprime - 2 * k) * sb ** (mprime - m + 2 * k)
    return total


def wigner_D_euler(d, alpha, beta, gamma):
    """Reference path: D^d from Euler angles via the factorial-sum d-polynomial."""
    n = 2 * d + 1
    ms = np.arange(-d, d + 1)
    small = np.array([[wigner_small_d(d, mp, m, beta) for m in ms] for mp in ms])
    return np.exp(-1j * ms[:, None] * alpha) * small * np.exp(-1j * ms[None, :] * gamma)


_W3_CACHE: dict[int, np.ndarray] = {}


def _dw3(d):
    if d not in _W3_CACHE:
        _W3_CACHE[d] = wigner_D_euler(d, *WEYL_ANGLES["w3"])
    return _W3_CACHE[d]


def diag_rotation(d, s):
    """Dt^d(s) = diag(s^d, ..., 1, ..., s^{-d}); s may be an array (last axis = m)."""
    ms = np.arange(-d, d + 1)
    s = np.asarray(s, dtype=complex)
    return s[..., None] ** (-ms)


def wigner_D_triple(d, s, t, u):
    """Fast path D^d(k~(s,t,u)) = Dt(s) D(w3) Dt(conj t) D(w3) Dt(u).

    For unit-modulus (s,t,u) this is the unitary D-matrix; for general
    complex arguments it is the entrywise analytic continuation with
    conj(t) replaced by 1/t (equal on the unit circle).
    """
    W3 = _dw3(d)
    ms = np.arange(-d, d + 1)
    sv = np.asarray(s, dtype=complex) ** (-ms)
    tv = np.asarray(1.0 / np.asarray(t, dtype=complex)) ** (-ms)
    uv = np.asarray(u, dtype=complex) ** (-ms)
    return ((sv[:, None] * W3) * tv[None, :]) @ W3 * uv[None, :]


def euler_from_matrix(k):
    """Unit-complex triple (s,t,u) with k = k~(s,t,u), per the inverse mapping.

    Row/column names follow the fixed layout [[g,h,j],[d,e,f],[a,b,c]].
    The a = b = 0 branch uses the stated fallback triple.
    """
    k = np.asarray(k, dtype=float)
    (g, h, j), (dd, e, f), (a, b, c) = k
    rab = np.hypot(a, b)
    if rab < 1e-14:
        s = (e + 1j * dd * np.sign(c)) / np.hypot(dd, e)
        return s, complex(np.sign(c)), 1.0 + 0.0j
    s = (j + 1j * f) / np.hypot(j, f)
    t = (c + 1j * rab) / np.sqrt(a * a + b * b + c * c)
    u = (-a + 1j * b) / rab
    return s, t, u


def wigner_D(d, k):
    """Wigner matrix of an element of K.

    `k` may be an EulerAngles, a unit-complex triple (s,t,u), or a 3x3
    orthogonal matrix (det +1); the triple/matrix forms go through the
    diagonal-w3 product, the angle form through the factorial sum.
    """
    d = int(d)
    if d < 0:
        raise ValueError("weight d must be >= 0")
    if isinstance(k, EulerAngles):
        return WignerMatrix(d, wigner_D_euler(d, k.alpha, k.beta, k.gamma))
    if isinstance(k, tuple) and len(k) == 3 and np.ndim(k[0]) == 0:
        s, t, u = (complex(x) for x in k)
        for name, val in (("s", s), ("t", t), ("u", u)):
            if abs(abs(val) - 1.0) > 1e-8:
                raise ValueError(f"{name} must have unit modulus")
        return WignerMatrix(d, wigner_D_triple(d, s, t, u))
    k = np.asarray(k, dtype=float)
    if k.shape == (3, 3):
        return WignerMatrix(d, wigner_D_triple(d, *euler_from_matrix(k)))
    raise TypeError("k must be EulerAngles, a complex triple, or a 3x3 matrix")


def v_matrix(d, v):
    """D^d of a V element ('v++', 'v+-', 'v-+', 'v--'); closed diagonal/antidiagonal forms."""
    d = int(d)
    n = 2 * d + 1
    ms = np.arange(-d, d + 1)
    if v == "v++":
        return np.eye(n, dtype=complex)
    if v == "v-+":
        return np.diag(((-1.0 + 0j) ** np.abs(ms)))
    out = np.zeros((n, n), dtype=complex)
    if v == "v+-":
        out[np.arange(n), n - 1 - np.arange(n)] = (-1.0) ** d
        return out
    if v == "v--":
        for r, mp in enumerate(ms):
            out[r, n - 1 - r] = (-1.0) ** (d - mp)
        return out
    raise ValueError(f"unknown V element {v!r}")


def weyl_matrix(d, w):
    """D^d of a Weyl representative by its Euler-angle table entry."""
    if w not in WEYL_ANGLES:
        raise ValueError(f"unknown Weyl element {w!r}")
    return wigner_D_euler(int(d), *WEYL_ANGLES[w])


def sigma_projector(d, chi):
    """Sigma^d_chi = |V|^{-1} sum_v chi(v) D^d(v); idempotent and symmetric."""
    if not isinstance(chi, VCharacter):
        chi = {"++": CHI_PP, "+-": CHI_PM, "-+": CHI_MP, "--": CHI_MM}[chi]
    n = 2 * int(d) + 1
    out = np.zeros((n, n), dtype=complex)
    for v in ("v++", "v+-", "v-+", "v--"):
        out += chi.value(v) * v_matrix(d, v)
    return out / 4.0


def dual_wigner_D(d, k):
    """Dual representation Dhat^d(k) = D^d(wl k wl)."""
    wl = weyl_3x3("wl")
    k = np.asarray(k, dtype=float)
    return wigner_D(d, wl @ k @ wl).entries


def weyl_3x3(w):
    """The 3x3 Weyl representatives (det +1)."""
    mats = {
        "I": np.eye(3),
        "w2": -np.array([[0., 1, 0], [1, 0, 0], [0, 0, 1]]),
        "w3": -np.array([[1., 0, 0], [0, 0, 1], [0, 1, 0]]),
        "w4": np.array([[0., 1, 0], [0, 0, 1], [1, 0, 0]]),
        "w5": np.array([[0., 0, 1], [1, 0, 0], [0, 1, 0]]),
        "wl": -np.array([[0., 0, 1], [0, 1, 0], [1, 0, 0]]),
    }
    return mats[w]


def v_3x3(v):
    mats = {
        "v++": np.diag([1., 1., 1.]),
        "v+-": np.diag([1., -1., -1.]),
        "v-+": np.diag([-1., -1., 1.]),
        "v--": np.diag([-1., 1., -1.]),
    }
    return mats[v]


def v_name_from_signs(signs):
    """Name of the V element with the given diagonal (must have det 1)."""
    key = tuple(int(s) for s in signs)
    table = {(1, 1, 1): "v++", (1, -1, -1): "v+-",
             (-1, -1, 1): "v-+", (-1, 1, -1): "v--"}
    if key not in table:
        raise ValueError(f"{signs} is not the diagonal of a V element")
    return table[key]


def sigma_rank(d, chi):
    """Rank of Sigma^d_chi by singular values (threshold 1e-8)."""
    sv = np.linalg.svd(sigma_projector(d, chi), compute_uv=False)
    return int(np.sum(sv > 1e-8))
