"""Arithmetic data: Schur polynomials, divisor sums, Riemann zeta, the
minimal-parabolic coefficient table zeta(w, mu, psi_n), GL(2) Maass-form
descriptors with their Hecke data, the GL(3) Hecke eigenvalues lambda_E of
the maximal-parabolic series, normalization matrices, Hecke L-functions,
and the residual-spectrum coefficients zeta_0.

Normalizations.  Gamma_R(s) = pi^(-s/2) Gamma(s/2);
zeta_E(mu) = prod_{j<k} zeta(1 + mu_j - mu_k);
sigma_s(n) = sum_{a|n} a^s; the two-variable divisor function is
multiplicative with sigma_{s1,s2}(p^a, p^b) = p^(-s2*a) S_{a,b}(p^(s1+s2), p^(s2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InadmissibleError, PoleError, TableExhaustedError
from .group3 import WEYL_NAMES, weyl_action, weyl_mul
from .special import _gammav, _near_nonpositive_integer

# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------


def factorize(n):
    """Prime factorization {p: e} of n >= 1 by trial division."""
    n = int(n)
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def sigma_classical(s, n):
    """sigma_s(n) = sum_{a|n} a^s."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("sigma_s(0) undefined")
    return sum(complex(a) ** s for a in divisors(n))


# ---------------------------------------------------------------------------
# Schur polynomials
# ---------------------------------------------------------------------------


def _schur_ratio(n1, n2, alpha, beta):
    a, b = complex(alpha), complex(beta)
    num = np.linalg.det(np.array([
        [1, b ** (n1 + n2 + 2), a ** (n1 + n2 + 2)],
        [1, b ** (n1 + 1), a ** (n1 + 1)],
        [1, 1, 1]], dtype=complex))
    den = np.linalg.det(np.array([
        [1, b ** 2, a ** 2],
        [1, b, a],
        [1, 1, 1]], dtype=complex))
    return num, den


def schur(n1, n2, alpha, beta):
    """Schur polynomial S_{n1,n2}(alpha, beta) as a bialternant ratio.

    At degenerate points (Vandermonde denominator below 1e-8 in modulus) the
    removable singularity is evaluated by an 8-point ring average of radius
    1e-4 around the requested point.
    """
    n1, n2 = int(n1), int(n2)
    if n1 < 0 or n2 < 0:
        raise ValueError("Schur indices must be non-negative")
    num, den = _schur_ratio(n1, n2, alpha, beta)
    scale = max(1.0, abs(alpha), abs(beta)) ** 3
    if abs(den) > 1e-8 * scale:
        return num / den
    vals = []
    for k in range(8):
        wshift = 1e-4 * np.exp(2j * np.pi * k / 8)
        nn, dd = _schur_ratio(n1, n2, alpha + wshift, beta + 2.3e-4 * np.exp(2j * np.pi * (k + 0.37) / 8))
        vals.append(nn / dd)
    return complex(np.mean(vals))


def sigma_twovar(s1, s2, n1, n2):
    """Two-variable divisor function of eq-type sigma_{s1,s2}; multiplicative."""
    n1, n2 = abs(int(n1)), abs(int(n2))
    if n1 == 0 or n2 == 0:
        raise ValueError("sigma_{s1,s2} requires positive arguments")
    out = 1.0 + 0.0j
    primes = set(factorize(n1)) | set(factorize(n2))
    f1, f2 = factorize(n1), factorize(n2)
    for p in primes:
        a = f1.get(p, 0)
        b = f2.get(p, 0)
        out *= complex(p) ** (-s2 * a) * schur(a, b, complex(p) ** (s1 + s2), complex(p) ** s2)
    return out


# ---------------------------------------------------------------------------
# Riemann zeta (Euler-Maclaurin with reflection)
# ---------------------------------------------------------------------------

_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6),
              Fraction(-3617, 510), Fraction(43867, 798), Fraction(-174611, 330),
              Fraction(854513, 138), Fraction(-236364091, 2730)]


def riemann_zeta(s):
    """zeta(s) by Euler-Maclaurin; reflection for Re(s) < 1/2.  PoleError at s = 1."""
    s = complex(s)
    if abs(s - 1.0) < 1e-10:
        raise PoleError("zeta pole at s = 1")
    if s.real < 0.5:
        # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
        return (2.0 ** s * np.pi ** (s - 1) * np.sin(np.pi * s / 2)
                * complex(_gammav(1 - s)) * riemann_zeta(1 - s))
    N = 25
    out = sum(n ** (-s) for n in range(1, N))
    out += N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    term = s * N ** (-s - 1)
    fact = 2.0
    for k, B in enumerate(_BERNOULLI, start=1):
        out += float(B) / fact * term
        # next term: multiply by (s+2k-1)(s+2k)/N^2, fact by (2k+1)(2k+2)
        term = term * (s + 2 * k - 1) * (s + 2 * k) / N ** 2
        fact *= (2 * k + 1) * (2 * k + 2)
    return out


def zeta_E(mu):
    """zeta_E(mu) = zeta(1+mu1-mu2) zeta(1+mu1-mu3) zeta(1+mu2-mu3)."""
    mu = tuple(complex(z) for z in mu)
    return (riemann_zeta(1 + mu[0] - mu[1]) * riemann_zeta(1 + mu[0] - mu[2])
            * riemann_zeta(1 + mu[1] - mu[2]))


def gamma_R(s):
    s = complex(s)
    if _near_nonpositive_integer(s / 2):
        raise PoleError(f"Gamma_R pole at s = {s}")
    return np.pi ** (-s / 2) * complex(_gammav(s / 2))


_GAMMA_E_PAIRS = {
    "I": (), "w2": ((0, 1),), "w3": ((1, 2),), "w4": ((1, 2), (0, 2)),
    "w5": ((0, 1), (0, 2)), "wl": ((0, 1), (1, 2), (0, 2)),
}


def gamma_E(w, mu):
    """The gamma factor of the minimal constant term: products over pairs
    Gamma_R(1-mu_j+mu_k)/Gamma_R(mu_j-mu_k)."""
    mu = tuple(complex(z) for z in mu)
    out = 1.0 + 0.0j
    for (j, k) in _GAMMA_E_PAIRS[w]:
        out *= gamma_R(1 - mu[j] + mu[k]) / gamma_R(mu[j] - mu[k])
    return out


def delta_admissible(w, n):
    """delta_{n,w}: is psi_n trivial on U_w(R)?"""
    n1, n2 = n
    return {
        "I": n1 == 0 and n2 == 0,
        "w2": n1 == 0, "w4": n1 == 0,
        "w3": n2 == 0, "w5": n2 == 0,
        "wl": True,
    }[w]


def min_eisen_zeta(w, mu, n):
    """The minimal-parabolic Fourier coefficient function zeta(w, mu, psi_n).

    Independent of the sign character v.  Raises InadmissibleError when
    delta_{n,w} = 0 and PoleError on the zeta_E(mu) zeros of the permitted
    region (i.e. at mu_i = mu_j).
    """
    if not delta_admissible(w, n):
        raise InadmissibleError(f"psi_{n} is not trivial on U_{w}")
    mu = tuple(complex(z) for z in mu)
    n1, n2 = int(n[0]), int(n[1])
    zE = zeta_E(mu)
    if n1 == 0 and n2 == 0:
        return gamma_E(w, mu) * zeta_E(weyl_action(mu, w)) / zE
    if n1 != 0 and n2 != 0:
        return sigma_twovar(mu[1] - mu[0], mu[2] - mu[1], abs(n1), abs(n2)) / zE
    if n1 == 0:
        muw = weyl_action(mu, w)
        return (gamma_E(weyl_mul(w, "w2"), mu)
                * riemann_zeta(1 + muw[1] - muw[2]) * riemann_zeta(1 + muw[0] - muw[2])
                * sigma_classical(muw[0] - muw[1], abs(n2))) / zE
    muw = weyl_action(mu, w)
    return (gamma_E(weyl_mul(w, "w3"), mu)
            * riemann_zeta(1 + muw[0] - muw[1]) * riemann_zeta(1 + muw[0] - muw[2])
            * sigma_classical(muw[1] - muw[2], abs(n1))) / zE


# ---------------------------------------------------------------------------
# GL(2) Maass-form descriptors and Hecke data
# ---------------------------------------------------------------------------


@dataclass
class MaassFormDescriptor:
    kind: str                      # 'spherical' | 'holomorphic' | 'constant'
    mu_phi: complex
    eps_phi: int = 1
    weight_kappa: int = 0
    L_adj: float = 1.0
    hecke: dict = field(default_factory=dict)   # n -> lambda_Phi(n)

    def __post_init__(self):
        if self.kind not in ("spherical", "holomorphic", "constant"):
            raise ValueError(f"unknown kind {self.kind!r}")
        self.mu_phi = complex(self.mu_phi)
        if self.kind == "holomorphic":
            if self.weight_kappa <= 0 or self.weight_kappa % 2:
                raise ValueError("holomorphic forms need even weight kappa > 0")
            self.mu_phi = complex((self.weight_kappa - 1) / 2)
            self.eps_phi = 1
        if self.kind == "constant":
            self.mu_phi = -0.5 + 0.0j
            self.eps_phi = 1
        if self.eps_phi not in (1, -1):
            raise ValueError("eps_phi must be +-1")
        if self.L_adj <= 0:
            raise ValueError("L(1, Ad^2) must be positive")
        if self.kind != "constant":
            if self.hecke.get(1, 1.0) != 1.0 and abs(self.hecke.get(1) - 1.0) > 1e-12:
                raise ValueError("lambda(1) must be 1")
            self._check_hecke()

    @property
    def alpha_phi(self):
        return 0 if self.eps_phi == 1 else 1

    def _check_hecke(self, tol=1e-8):
        tbl = self.hecke
        for p in (2, 3, 5, 7):
            for k in range(1, 6):
                if p in tbl and p ** k in tbl and p ** (k + 1) in tbl:
                    lhs = tbl[p] * tbl[p ** k]
                    rhs = tbl[p ** (k + 1)] + (tbl[p ** (k - 1)] if k > 1 else 1.0)
                    if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
                        raise ValueError(
                            f"Hecke recursion fails at p={p}, k={k}")

    def lam(self, n):
        """lambda_Phi(n), multiplicative; exact for the constant kind."""
        n = int(n)
        if n < 1:
            raise ValueError("Hecke eigenvalues indexed by n >= 1")
        if self.kind == "constant":
            # sum over ab = n of (a/b)^(1/2) = sigma_1(n)/sqrt(n)
            return float(sum(divisors(n)) / np.sqrt(n))
        if n == 1:
            return 1.0
        if n in self.hecke:
            return self.hecke[n]
        out = 1.0
        for p, e in factorize(n).items():
            q = p ** e
            if q not in self.hecke:
                raise TableExhaustedError(f"lambda({q}) not in the ingested table")
            out *= self.hecke[q]
        return out

    def satake(self, p):
        """Satake pair (a, b) with a+b = lambda(p), ab = 1."""
        lam = complex(self.lam(p))
        disc = np.sqrt(lam * lam - 4.0 + 0j)
        return (lam + disc) / 2, (lam - disc) / 2


def constant_descriptor():
    """Descriptor of the GL(2) constant function (mu_Phi = -1/2)."""
    return MaassFormDescriptor(kind="constant", mu_phi=-0.5)


def load_maass_form(path):
    """Read the line-oriented Maass-form data format."""
    kind = None
    mu = 0.0 + 0.0j
    eps = 1
    kappa = 0
    L_adj = 1.0
    hecke = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line and "\t" not in line:
                key, val = line.split("=", 1)
                key = key.strip()
                val = val.strip()
                if key == "kind":
                    kind = val
                elif key == "mu_phi":
                    re, im = (float(x) for x in val.split(","))
                    mu = complex(re, im)
                elif key == "eps":
                    eps = int(val)
                elif key == "kappa":
                    kappa = int(val)
                elif key == "L_adj":
                    L_adj = float(val)
                else:
                    raise ValueError(f"unknown header key {key!r}")
            else:
                parts = line.split("\t")
                n = int(parts[0])
                lam = float(parts[1])
                if len(parts) > 2:
                    lam = complex(lam, float(parts[2]))
                hecke[n] = lam
    if kind is None:
        raise ValueError("missing kind= header")
    return MaassFormDescriptor(kind=kind, mu_phi=mu, eps_phi=eps,
                               weight_kappa=kappa, L_adj=L_adj, hecke=hecke)


@dataclass
class HeckeGL3Value:
    n: tuple
    value: complex


def _lambda_E_prime(alpha, beta, phi, mu1, p):
    """lambda_E at (p^alpha, p^beta) by the Satake-Schur form."""
    a, b = phi.satake(p)
    q = complex(p) ** (-3 * mu1)
    return complex(p) ** (3 * mu1 * (alpha - beta)) * schur(alpha, beta, a * q, b * q)


def _lambda_E_prime_rational(alpha, beta, phi, mu1, p):
    """lambda_E at (p^alpha, p^beta) by the explicit rational form.

    The trailing p^(-6 mu1 beta) brings the rational expression onto the same
    normalization as the Satake-Schur form; without it the two differ by
    exactly that factor (checked against the coefficient sums of the series).
    """
    lam = lambda k: 1.0 if k == 0 else (0.0 if k < 0 else complex(phi.lam(p ** k)))
    q = complex(p) ** (3 * mu1)
    den = q + 1 / q - lam(1)
    if abs(den) < 1e-12:
        raise PoleError("rational lambda_E form degenerates: p^{3mu1}+p^{-3mu1} = lambda(p)")
    num = (q ** (-(alpha + 1)) * lam(beta) + q ** (beta + 1) * lam(alpha)
           - lam(alpha + 1) * lam(beta) - lam(alpha) * lam(beta + 1)
           + lam(1) * lam(alpha) * lam(beta))
    return num / den * q ** (-2 * beta)


def lambda_E(n, phi, mu1, form="schur"):
    """GL(3) Hecke eigenvalue lambda_E(n, Phi, mu1) of the maximal series."""
    n1, n2 = abs(int(n[0])), abs(int(n[1]))
    if n1 == 0 or n2 == 0:
        raise ValueError("lambda_E is indexed by positive pairs")
    fn = _lambda_E_prime if form == "schur" else _lambda_E_prime_rational
    f1, f2 = factorize(n1), factorize(n2)
    out = 1.0 + 0.0j
    for p in set(f1) | set(f2):
        out *= fn(f1.get(p, 0), f2.get(p, 0), phi, complex(mu1), p)
    return HeckeGL3Value(n=(n1, n2), value=complex(out))


def hecke_relation_r1(phi, mu1, p, alpha):
    """lambda_E((p^a, 1)) = sum_{a1<=a} lambda(p^a1) p^(-3 mu1 (a-a1)).

    This and the two relations below are the forms the series coefficients
    actually satisfy (the direction of the mu1-exponent differs from some
    printed versions; it is fixed here by the Satake-Schur form).
    """
    mu1 = complex(mu1)
    lhs = _lambda_E_prime(alpha, 0, phi, mu1, p)
    rhs = sum(complex(phi.lam(p ** a1)) * complex(p) ** (-3 * mu1 * (alpha - a1))
              for a1 in range(alpha + 1))
    return lhs, rhs


def hecke_relation_r2(phi, mu1, p, beta):
    """lambda_E((1, p^b)) = sum_{a1<=b} lambda(p^a1) p^(-3 mu1 (b+a1))."""
    mu1 = complex(mu1)
    lhs = _lambda_E_prime(0, beta, phi, mu1, p)
    rhs = sum(complex(phi.lam(p ** a1)) * complex(p) ** (-3 * mu1 * (beta + a1))
              for a1 in range(beta + 1))
    return lhs, rhs


def hecke_relation_r3(phi, mu1, p, alpha, beta):
    """lambda_E((p^a, p^b)) = lambda_E((p^a,1)) lambda_E((1,p^b))
    - p^(-6 mu1) lambda_E((p^(a-1),1)) lambda_E((1,p^(b-1)))."""
    mu1 = complex(mu1)
    lhs = _lambda_E_prime(alpha, beta, phi, mu1, p)
    t1 = _lambda_E_prime(alpha, 0, phi, mu1, p) * _lambda_E_prime(0, beta, phi, mu1, p)
    if alpha >= 1 and beta >= 1:
        t2 = (complex(p) ** (-6 * mu1)
              * _lambda_E_prime(alpha - 1, 0, phi, mu1, p)
              * _lambda_E_prime(0, beta - 1, phi, mu1, p))
    else:
        t2 = 0.0
    return lhs, t1 - t2


def gl2_normalization(phi, d):
    """Normalization matrices (Gamma^d_Phi, Gammahat^d_Phi) of section-5 type.

    Defined for the spherical and holomorphic kinds; their conjugate product
    conj(Gamma) * Gammahat is a scalar matrix.
    """
    ms = np.arange(-d, d + 1)
    if phi.kind == "spherical":
        mu = phi.mu_phi
        L = phi.L_adj
        entries = []
        for m in ms:
            inner = (np.cos(np.pi * mu) * complex(_gammav(0.5 + mu - abs(m) / 2))
                     / (2 * L * complex(_gammav(0.5 + mu + abs(m) / 2))))
            # |m| in the trailing gamma: the negative rows carry the conjugated
            # form, and only with |m| is conj(Gamma) * Gammahat a scalar matrix
            entries.append(np.pi ** (-0.5 + mu) * (1j) ** (-m)
                           * abs(inner) ** 0.5 * complex(_gammav(0.5 - mu + abs(m) / 2)))
        g = np.diag(entries)
        return g, g.copy()
    if phi.kind == "holomorphic":
        kap = phi.weight_kappa
        L = phi.L_adj
        pref = (2 * np.pi) ** kap / (np.pi * np.sqrt(np.pi / 3 * L))
        ent, enthat = [], []
        for m in ms:
            if abs(m) >= kap:
                ratio = complex(_gammav((2 + abs(m) - kap) / 2)
                                / _gammav((abs(m) + kap) / 2))
                ent.append(pref * (1j) ** (-m) * np.sqrt(ratio))
                enthat.append(pref * (1j) ** (-m) / np.sqrt(ratio))
            else:
                ent.append(pref * (1j) ** (-m))
                enthat.append(pref * (1j) ** (-m))
        return np.diag(ent), np.diag(enthat)
    raise InadmissibleError("normalization matrices exist for spherical/holomorphic kinds")


# ---------------------------------------------------------------------------
# Hecke L-functions
# ---------------------------------------------------------------------------


def L_partial(phi, s, N=10000):
    """Truncated Dirichlet series with a crude tail bound from |lambda(n)| <= sqrt(n) d(n).

    Returns (value, tail_bound).  The bound is only meaningful for Re(s) > 3/2.
    """
    s = complex(s)
    if phi.kind == "constant":
        val = sum(phi.lam(n) * n ** (-s) for n in range(1, N + 1))
    else:
        val = 0.0 + 0.0j
        for n in range(1, N + 1):
            try:
                val += complex(phi.lam(n)) * n ** (-s)
            except TableExhaustedError:
                raise
    a = s.real - 1.5
    if a > 1e-9:
        tail = 2.0 * (np.log(N) + 1.0) * N ** (-a) / a
    else:
        tail = np.inf
    return val, tail


def L_infinity(phi, s):
    """Archimedean factor of the completed L-function, by kind."""
    s = complex(s)
    mu = phi.mu_phi
    if phi.kind == "holomorphic":
        return gamma_R(s + mu) * gamma_R(1 + s + mu)
    if phi.kind == "spherical" and phi.eps_phi == -1:
        return gamma_R(1 + s + mu) * gamma_R(1 + s - mu)
    # even spherical; the constant function (mu = -1/2) carries the same shape
    return gamma_R(s + mu) * gamma_R(s - mu)


def L_root_number(phi):
    if phi.kind == "holomorphic":
        return (1j) ** phi.weight_kappa
    return 1.0 if phi.eps_phi == 1 else -1.0


def L_value(phi, s, N=10000):
    """L(Phi, s) with the strategy: exact zeta product for the constant kind;
    otherwise the partial sum, reflected through the functional equation when
    Re(s) < 1/2.  Returns (value, tail_bound)."""
    s = complex(s)
    if phi.kind == "constant":
        return riemann_zeta(s - 0.5) * riemann_zeta(s + 0.5), 0.0
    if s.real >= 0.5:
        return L_partial(phi, s, N)
    val, tail = L_partial(phi, 1 - s, N)
    fac = L_root_number(phi) * L_infinity(phi, 1 - s) / L_infinity(phi, s)
    return fac * val, abs(fac) * tail


def L_ratio_fe(phi, mu1, N=10000):
    """The prefactor L(Phi, 3 mu1)/L(Phi, 1 + 3 mu1) with the numerator
    expressed through the functional equation, so that products of the form
    ratio(mu1) * ratio(-mu1) reduce to pure archimedean quantities."""
    mu1 = complex(mu1)
    if phi.kind == "constant":
        num = riemann_zeta(3 * mu1 - 0.5) * riemann_zeta(3 * mu1 + 0.5)
        den = riemann_zeta(1 + 3 * mu1 - 0.5) * riemann_zeta(1 + 3 * mu1 + 0.5)
        return num / den
    fac = L_root_number(phi) * L_infinity(phi, 1 - 3 * mu1) / L_infinity(phi, 3 * mu1)
    num, _ = L_partial(phi, 1 - 3 * mu1, N)
    den, _ = L_partial(phi, 1 + 3 * mu1, N)
    return fac * num / den


# ---------------------------------------------------------------------------
# residual-spectrum coefficients
# ---------------------------------------------------------------------------


def residual_zeta0(w, s, n):
    """zeta_0(w, s, psi_n): Fourier data of the residue of the minimal series
    at mu_F = (1/2+s, -1/2+s, -2s).  Inadmissible combinations return 0."""
    s = complex(s)
    n1, n2 = int(n[0]), int(n[1])
    pref = 6.0 / np.pi ** 2
    if n1 != 0 and n2 != 0:
        return 0.0 + 0.0j
    if n1 == 0 and n2 == 0:
        if w == "w2":
            return pref
        if w == "w5":
            return pref * riemann_zeta(0.5 + 3 * s) / riemann_zeta(1.5 + 3 * s)
        if w == "wl":
            return pref * riemann_zeta(-0.5 + 3 * s) / riemann_zeta(1.5 + 3 * s)
        return 0.0 + 0.0j
    if n1 == 0:
        if w != "wl":
            return 0.0 + 0.0j
        return pref * sigma_classical(0.5 - 3 * s, abs(n2)) / riemann_zeta(1.5 + 3 * s)
    if w != "w5":
        return 0.0 + 0.0j
    return pref * sigma_classical(-0.5 - 3 * s, abs(n1)) / riemann_zeta(1.5 + 3 * s)


def mu_F(s):
    """The residual spectral parameter (1/2+s, -1/2+s, -2s)."""
    s = complex(s)
    return (0.5 + s, -0.5 + s, -2 * s)
