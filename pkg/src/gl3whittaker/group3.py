"""Structure theory of G = PSL(3,R) and Gamma = SL(3,Z).

Coordinates are fixed once:

    x = [[1, x2, x3], [0, 1, x1], [0, 0, 1]],     y = diag(y1*y2, y1, 1),

characters psi_m(x) = e(m1*x1 + m2*x2), power function
p_mu(diag(a1,a2,a3)) = |a1|^mu1 |a2|^mu2 |a3|^mu3 with mu1+mu2+mu3 = 0 and
rho = (1,0,-1), extended through the Iwasawa decomposition by
p_{rho+mu}(r x y k) = y1^(1-mu3) * y2^(1+mu1).

The Iwasawa factorization g = r x y k is the explicit Gram-Schmidt
bookkeeping; k is returned as the unit-complex triple (s,t,u) with
k = k~(s,t,u) (including the a = b = 0 fallback branch).

The Bruhat decomposition gamma = b c v w b' (b, b' in U(Q), c =
diag(1/c2, c2/c1, c1), v in V, w Weyl) is carried out in exact rational
arithmetic, with uniqueness enforced by b' in Ubar_w(Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .wigner import v_name_from_signs, v_3x3, weyl_3x3

WEYL_NAMES = ("I", "w2", "w3", "w4", "w5", "wl")

# Right action on the coordinates of mu: mu^w = (mu_{s(1)}, mu_{s(2)}, mu_{s(3)}).
WEYL_MU_PERM = {
    "I": (0, 1, 2), "w2": (1, 0, 2), "w3": (0, 2, 1),
    "w4": (2, 0, 1), "w5": (1, 2, 0), "wl": (2, 1, 0),
}

# Positions of the free coordinates of Ubar_w, named by the x-index (1, 2, 3).
UBAR_COORDS = {
    "I": (), "w2": (2,), "w3": (1,), "w4": (2, 3), "w5": (1, 3), "wl": (1, 2, 3),
}
# Complementary blocks U_w = (w^{-1} U w) cap U.
U_W_COORDS = {
    "I": (1, 2, 3), "w2": (1, 3), "w3": (2, 3), "w4": (1,), "w5": (2,), "wl": (),
}

_XPOS = {1: (1, 2), 2: (0, 1), 3: (0, 2)}  # x_i -> matrix position


def weyl_mul(w1, w2):
    """Product in the abstract Weyl group: mu^(w1 w2) = (mu^(w1))^(w2)."""
    p1, p2 = WEYL_MU_PERM[w1], WEYL_MU_PERM[w2]
    comp = tuple(p1[p2[i]] for i in range(3))
    for name, p in WEYL_MU_PERM.items():
        if p == comp:
            return name
    raise AssertionError("Weyl table closure")


def weyl_inv(w):
    for cand in WEYL_NAMES:
        if weyl_mul(w, cand) == "I":
            return cand
    raise AssertionError


@dataclass
class UnipotentX:
    x1: float
    x2: float
    x3: float

    def matrix(self):
        return np.array([[1.0, self.x2, self.x3],
                         [0.0, 1.0, self.x1],
                         [0.0, 0.0, 1.0]])


def x_matrix(x1, x2, x3):
    return np.array([[1.0, x2, x3], [0.0, 1.0, x1], [0.0, 0.0, 1.0]])


@dataclass
class DiagonalY:
    y1: float
    y2: float

    def __post_init__(self):
        if self.y1 <= 0 or self.y2 <= 0:
            raise ValueError("y coordinates must be positive")

    def matrix(self):
        return np.diag([self.y1 * self.y2, self.y1, 1.0])


def y_matrix(y1, y2):
    return np.diag([float(y1) * float(y2), float(y1), 1.0])


@dataclass
class SpectralParams:
    mu: tuple

    def __post_init__(self):
        mu = tuple(complex(z) for z in self.mu)
        if abs(sum(mu)) > 1e-12 * max(1.0, max(abs(z) for z in mu)):
            raise ValueError("spectral parameters must sum to zero")
        self.mu = mu

    def __iter__(self):
        return iter(self.mu)

    def __getitem__(self, i):
        return self.mu[i]

    def apply_weyl(self, w):
        p = WEYL_MU_PERM[w]
        return SpectralParams(tuple(self.mu[p[i]] for i in range(3)))


def weyl_action(mu, w):
    """mu^w per the fixed permutation table; accepts tuples or SpectralParams."""
    if isinstance(mu, SpectralParams):
        return mu.apply_weyl(w)
    p = WEYL_MU_PERM[w]
    return tuple(complex(mu[p[i]]) for i in range(3))


def psi(m, x):
    """psi_m(x) = e(m1 x1 + m2 x2) for x a UnipotentX, 3x3 array, or (x1,x2,x3)."""
    if isinstance(x, UnipotentX):
        x1, x2 = x.x1, x.x2
    else:
        x = np.asarray(x)
        if x.shape == (3, 3):
            x1, x2 = x[1, 2], x[0, 1]
        else:
            x1, x2 = x[0], x[1]
    return np.exp(2j * np.pi * (m[0] * x1 + m[1] * x2))


def m_action(m, v_name):
    """m^v so that psi_{m^v}(x) = psi_m(v x v)."""
    m1, m2 = m
    return {"v++": (m1, m2), "v-+": (m1, -m2),
            "v+-": (-m1, m2), "v--": (-m1, -m2)}[v_name]


@dataclass
class IwasawaDecomposition:
    r: float
    x: UnipotentX
    y: DiagonalY
    k: tuple  # unit-complex triple (s, t, u)

    def k_matrix(self):
        from .wigner import WEYL_ANGLES  # noqa: F401  (angles only for docs)
        s, t, u = self.k
        al, be, ga = np.angle(s), np.angle(t), np.angle(u)
        rz = lambda th: np.array([[np.cos(th), -np.sin(th), 0],
                                  [np.sin(th), np.cos(th), 0], [0, 0, 1.0]])
        ry = lambda th: np.array([[np.cos(th), 0, np.sin(th)],
                                  [0, 1.0, 0], [-np.sin(th), 0, np.cos(th)]])
        return rz(al) @ ry(be) @ rz(ga)

    def reassemble(self):
        return self.r * self.x.matrix() @ self.y.matrix() @ self.k_matrix()


def iwasawa(A):
    """Full Iwasawa decomposition A = r x y k, det A > 0 required."""
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    det = float(np.linalg.det(A))
    if det <= 0:
        raise ValueError("iwasawa requires det A > 0 (negate the PSL representative)")
    (g, h, j), (dd, e, f), (a, b, c) = A
    xi1 = np.array([a, b, c])
    xi2 = np.array([b * dd - a * e, c * dd - a * f, c * e - b * f])
    xi3 = np.array([b * g - a * h, c * g - a * j, c * h - b * j])
    n1 = float(np.linalg.norm(xi1))
    n2 = float(np.linalg.norm(xi2))
    if n1 < 1e-12 or n2 < 1e-12:
        raise ValueError("ill-conditioned input: a Gram-Schmidt norm underflows")
    x1 = (a * dd + b * e + c * f) / n1 ** 2
    x2 = float(np.dot(xi2, xi3)) / n2 ** 2
    x3 = (a * g + b * h + c * j) / n1 ** 2
    r = n1
    y1 = n2 / n1 ** 2
    y2 = det * n1 / n2 ** 2
    rab = np.hypot(a, b)
    if rab < 1e-12 * n1:
        # fallback triple from the middle row of the k-matrix (reduces to the
        # stated (e + i d sgn(c))/hypot(d, e) when a = b = 0 exactly)
        k21 = b * (b * dd - a * e) + c * (c * dd - a * f)
        k22 = a * (a * e - b * dd) + c * (c * e - b * f)
        s = (k22 + 1j * k21 * np.sign(c)) / np.hypot(k21, k22)
        t = complex(np.sign(c))
        u = 1.0 + 0.0j
    else:
        s = ((b * dd - a * e) * n1 + 1j * (a * (a * f - c * dd) + b * (b * f - c * e))) \
            / (rab * n2)
        t = (c + 1j * rab) / n1
        u = (-a + 1j * b) / rab
    return IwasawaDecomposition(r=r, x=UnipotentX(x1, x2, x3),
                                y=DiagonalY(y1, y2), k=(s, t, u))


def iwasawa_y_batch(A):
    """(y1, y2) of a batch of matrices, vectorized; A has shape (..., 3, 3).

    Only the y component (needed for power functions); no sign or k handling
    beyond requiring det > 0 elementwise.
    """
    A = np.asarray(A, dtype=float)
    a, b, c = A[..., 2, 0], A[..., 2, 1], A[..., 2, 2]
    dd, e, f = A[..., 1, 0], A[..., 1, 1], A[..., 1, 2]
    det = np.linalg.det(A)
    n1sq = a * a + b * b + c * c
    xi2a = b * dd - a * e
    xi2b = c * dd - a * f
    xi2c = c * e - b * f
    n2sq = xi2a ** 2 + xi2b ** 2 + xi2c ** 2
    y1 = np.sqrt(n2sq) / n1sq
    y2 = det * np.sqrt(n1sq) / n2sq
    return y1, y2


def power_function(mu, g):
    """p_{rho+mu}(g) = y1^(1-mu3) y2^(1+mu1) through the Iwasawa decomposition."""
    mu = tuple(complex(z) for z in mu)
    g = np.asarray(g, dtype=float)
    if np.linalg.det(g) < 0:
        g = -g
    dec = iwasawa(g)
    return dec.y.y1 ** (1 - mu[2]) * dec.y.y2 ** (1 + mu[0])


def power_function_y(mu, y1, y2):
    """p_{rho+mu}(y) on the diagonal part only."""
    mu = tuple(complex(z) for z in mu)
    return y1 ** (1 - mu[2]) * y2 ** (1 + mu[0])


def p_mu_y(mu, y1, y2):
    """Plain (un-shifted) p_mu(y) = (y1 y2)^mu1 * y1^mu2."""
    mu = tuple(complex(z) for z in mu)
    return (y1 * y2) ** mu[0] * y1 ** mu[1]


def involution_iota(g):
    """g^iota = wl (g^{-1})^T wl."""
    g = np.asarray(g, dtype=float)
    wl = weyl_3x3("wl")
    return wl @ np.linalg.inv(g).T @ wl


# ---------------------------------------------------------------------------
# Plucker coordinates and the Bruhat decomposition (exact arithmetic)
# ---------------------------------------------------------------------------

@dataclass
class PluckerCoords:
    A1: int
    B1: int
    C1: int
    A2: int
    B2: int
    C2: int

    def as_tuples(self):
        return (self.A1, self.B1, self.C1), (self.A2, self.B2, self.C2)


def plucker(gamma):
    """Plucker coordinates of gamma in SL(3,Z): bottom row and the 2x2 minors."""
    g = np.asarray(gamma)
    d, e, f = int(g[1, 0]), int(g[1, 1]), int(g[1, 2])
    A1, B1, C1 = int(g[2, 0]), int(g[2, 1]), int(g[2, 2])
    A2 = B1 * d - A1 * e
    B2 = A1 * f - C1 * d
    C2 = C1 * e - B1 * f
    return PluckerCoords(A1, B1, C1, A2, B2, C2)


@dataclass
class BruhatData:
    b: tuple        # (x1, x2, x3) of b in U(Q), Fractions
    c1: int
    c2: int
    v: str          # V element name
    w: str          # Weyl element name
    bprime: tuple   # (x1, x2, x3) of b' in Ubar_w(Q), Fractions (zeros off-block)

    def reassemble(self):
        """Exact rational product b c v w b'."""
        b = _u_frac(*self.b)
        c = [[Fraction(1, self.c2), 0, 0],
             [0, Fraction(self.c2, self.c1), 0],
             [0, 0, Fraction(self.c1)]]
        vw = _mat_mul(_int_mat(v_3x3(self.v)), _int_mat(weyl_3x3(self.w)))
        return _mat_mul(_mat_mul(_mat_mul(b, c), vw), _u_frac(*self.bprime))


def _int_mat(M):
    return [[Fraction(int(round(x))) for x in row] for row in np.asarray(M)]


def _u_frac(x1, x2, x3):
    return [[Fraction(1), Fraction(x2), Fraction(x3)],
            [Fraction(0), Fraction(1), Fraction(x1)],
            [Fraction(0), Fraction(0), Fraction(1)]]


def _mat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)]


def _mat_inv_unipotent(U):
    """Inverse of an upper unitriangular rational matrix."""
    x2, x3, x1 = U[0][1], U[0][2], U[1][2]
    return _u_frac(-x1, -x2, x1 * x2 - x3)


def _bruhat_cell(gamma):
    """Weyl cell from the vanishing pattern of the Plucker coordinates."""
    pl = plucker(gamma)
    if pl.A1 != 0:
        return "wl" if pl.A2 != 0 else "w4"
    if pl.B1 != 0:
        return "w5" if pl.A2 != 0 else "w3"
    return "w2" if pl.B2 != 0 else "I"


def bruhat(gamma):
    """Exact Bruhat decomposition gamma = b c v w b' with b' in Ubar_w(Q)."""
    g = [[Fraction(int(x)) for x in row] for row in np.asarray(gamma)]
    det = (g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
           - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
           + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]))
    if det != 1:
        raise ValueError("bruhat expects an SL(3,Z) matrix")
    w = _bruhat_cell(gamma)
    P = _mat_mul(_int_mat(weyl_3x3(w)), [[Fraction(1) if i == j else Fraction(0)
                                          for j in range(3)] for i in range(3)])
    # permutation of the Weyl matrix: pi(i) = column of the nonzero entry in row i
    wm = np.asarray(weyl_3x3(w))
    pi = [int(np.flatnonzero(wm[i])[0]) for i in range(3)]
    # Peel rows bottom-up: row_i(gamma) = sum_{k>=i} T[i][k] * row_{pi(k)}(bfull),
    # bfull upper unitriangular, so row pi(k) of bfull has leading 1 at pi(k).
    rows = [list(r) for r in g]
    brows = [None, None, None]
    T = [[Fraction(0)] * 3 for _ in range(3)]
    for i in (2, 1, 0):
        r = list(rows[i])
        # peel the already-known rows in order of their leading position, so
        # each coefficient is read off a column no later row touches
        for k in sorted(range(i + 1, 3), key=lambda kk: pi[kk]):
            coef = r[pi[k]]
            T[i][k] = coef
            r = [r[j] - coef * brows[pi[k]][j] for j in range(3)]
        lead = r[pi[i]]
        if lead == 0:
            raise AssertionError("cell selection produced a zero pivot")
        T[i][i] = lead
        brows[pi[i]] = [x / lead for x in r]
    bfull = brows  # upper unitriangular in U(Q)
    # split bfull = u_w * bbar with bbar in Ubar_w(Q)
    x2f, x3f, x1f = bfull[0][1], bfull[0][2], bfull[1][2]
    coords = {1: x1f, 2: x2f, 3: x3f}
    bbar_c = {i: (coords[i] if i in UBAR_COORDS[w] else Fraction(0)) for i in (1, 2, 3)}
    # solve u_w * bbar = bfull exactly: u_w = bfull * bbar^{-1}
    bbar = _u_frac(bbar_c[1], bbar_c[2], bbar_c[3])
    uw = _mat_mul(bfull, _mat_inv_unipotent(bbar))
    uw_c = {1: uw[1][2], 2: uw[0][1], 3: uw[0][2]}
    for i in (1, 2, 3):
        if i not in U_W_COORDS[w] and uw_c[i] != 0:
            raise AssertionError("U_w / Ubar_w split failed")
    # signs and c-values from the diagonal of T; the peeling above absorbed the
    # +-1 entries of the Weyl matrix into T, so divide them back out.
    wsigns = [int(wm[i, pi[i]]) for i in range(3)]
    s1, s2, s3 = ((1 if T[i][i] > 0 else -1) * wsigns[i] for i in range(3))
    c1 = abs(T[2][2])
    c2 = abs(T[1][1]) * c1
    if c1.denominator != 1 or c2.denominator != 1:
        raise AssertionError("c entries must be integers")
    v = v_name_from_signs((s1, s2, s3))
    # b = gamma * (c v w bbar)^{-1}; the U_w part of bfull folds into it and the
    # result must come out upper unitriangular (asserted by the caller's tests).
    cmat = [[Fraction(1, int(c2)), 0, 0],
            [0, Fraction(int(c2), int(c1)), 0],
            [0, 0, Fraction(int(c1))]]
    cv = _mat_mul(cmat, _int_mat(v_3x3(v)))
    wmat = _int_mat(weyl_3x3(w))
    rhs = _mat_mul(_mat_mul(cv, wmat), bbar)
    b = _mat_mul(g, _exact_inv(rhs))
    if not (b[0][0] == 1 and b[1][1] == 1 and b[2][2] == 1
            and b[1][0] == 0 and b[2][0] == 0 and b[2][1] == 0):
        raise AssertionError("extracted b is not upper unitriangular")
    bd = BruhatData(
        b=(b[1][2], b[0][1], b[0][2]),
        c1=int(c1), c2=int(c2), v=v, w=w,
        bprime=(bbar_c[1], bbar_c[2], bbar_c[3]))
    return bd


def _exact_inv(M):
    """Inverse of a 3x3 rational matrix by adjugate."""
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    adj = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    return [[x / det for x in row] for row in adj]


def random_gamma(rng, n_factors=8, max_entry=10):
    """Random SL(3,Z) element as a bounded product of elementary matrices."""
    M = np.eye(3, dtype=object)
    for _ in range(n_factors):
        i, j = rng.choice(3, size=2, replace=False)
        E = np.eye(3, dtype=object)
        E[i, j] = int(rng.integers(-3, 4))
        M = M @ E
        if np.max(np.abs(M.astype(float))) > max_entry:
            break
    return M.astype(int)


def psl_equal(A, B, tol=1e-10):
    """Equality in PSL(3,R): A = lambda*B for some real lambda != 0."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    na, nb = np.max(np.abs(A)), np.max(np.abs(B))
    if na == 0 or nb == 0:
        return na == nb
    A = A / na
    B = B / nb
    return min(np.max(np.abs(A - B)), np.max(np.abs(A + B))) < tol
