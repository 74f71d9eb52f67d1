"""Boundary points, the generating function Phi(u; omega) and the link to level N."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .gtcore import Signature, signatures, weyl_dimension
from .links import StochasticRow


class EvaluationError(ArithmeticError):
    pass


class IntegrityError(RuntimeError):
    pass


def _fracs(xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class OmegaPoint:
    """Finitely supported point of the boundary; gamma is stored, delta derived."""

    alpha_plus: tuple = ()
    alpha_minus: tuple = ()
    beta_plus: tuple = ()
    beta_minus: tuple = ()
    gamma_plus: Fraction = Fraction(0)
    gamma_minus: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha_plus", "alpha_minus", "beta_plus", "beta_minus"):
            xs = _fracs(getattr(self, name))
            if any(x < 0 for x in xs) or any(a < b for a, b in zip(xs, xs[1:])):
                raise ValueError(f"{name} must be weakly decreasing and nonnegative: {xs}")
            object.__setattr__(self, name, xs)
        for name in ("gamma_plus", "gamma_minus"):
            g = Fraction(getattr(self, name))
            if g < 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, g)
        b1 = (self.beta_plus[:1] or (0,))[0] + (self.beta_minus[:1] or (0,))[0]
        if b1 > 1:
            raise ValueError("beta_1^+ + beta_1^- must not exceed 1")

    @property
    def delta_plus(self) -> Fraction:
        return self.gamma_plus + sum(self.alpha_plus) + sum(self.beta_plus)

    @property
    def delta_minus(self) -> Fraction:
        return self.gamma_minus + sum(self.alpha_minus) + sum(self.beta_minus)

    @property
    def is_polynomial(self) -> bool:
        """Phi is a Laurent polynomial: no alpha, no gamma."""
        return not (self.alpha_plus or self.alpha_minus or self.gamma_plus or self.gamma_minus)

    @property
    def has_alpha(self) -> bool:
        return bool(self.alpha_plus or self.alpha_minus)


def phi_value(u: complex, omega: OmegaPoint) -> complex:
    """Phi(u; omega) at a nonzero complex point."""
    u = complex(u)
    if u == 0:
        raise EvaluationError("Phi is undefined at u = 0")
    inv = 1 / u
    val = cmath.exp(float(omega.gamma_plus) * (u - 1) + float(omega.gamma_minus) * (inv - 1))
    for b in omega.beta_plus:
        val *= 1 + float(b) * (u - 1)
    for b in omega.beta_minus:
        val *= 1 + float(b) * (inv - 1)
    for a in omega.alpha_plus:
        den = 1 - float(a) * (u - 1)
        if abs(den) < 1e-14:
            raise EvaluationError(f"pole of Phi at u = 1 + 1/{a}")
        val /= den
    for a in omega.alpha_minus:
        den = 1 - float(a) * (inv - 1)
        if abs(den) < 1e-14:
            raise EvaluationError(f"pole of Phi at u = 1/(1 + 1/{a})")
        val /= den
    return val


def extreme_character(omega: OmegaPoint, eigenvalues: Sequence[complex]) -> complex:
    """prod_k Phi(u_k; omega) over eigenvalues on the unit circle."""
    out = complex(1)
    for u in eigenvalues:
        if abs(abs(complex(u)) - 1) > 1e-12:
            raise EvaluationError(f"eigenvalue {u} is not on the unit circle")
        out *= phi_value(u, omega)
    return out


# -- Laurent coefficients ----------------------------------------------------


@dataclass
class LaurentCoeffs:
    window: tuple[int, int]
    coeffs: dict
    method: str
    tail_bound: float = 0.0
    fallback: bool = False

    def __getitem__(self, n: int):
        return self.coeffs.get(n, 0)


def _poly_part(omega: OmegaPoint) -> dict[int, Fraction]:
    series = {0: Fraction(1)}
    factors = [{0: 1 - b, 1: b} for b in omega.beta_plus]
    factors += [{0: 1 - b, -1: b} for b in omega.beta_minus]
    for f in factors:
        nxt: dict[int, Fraction] = {}
        for i, a in series.items():
            for j, c in f.items():
                nxt[i + j] = nxt.get(i + j, 0) + a * c
        series = {k: v for k, v in nxt.items() if v != 0}
    return series


def _poisson_series(g: Fraction, reach: int) -> tuple[dict[int, float], float]:
    """e^{-g} g^n / n! for 0 <= n <= T, plus a bound on the neglected tail."""
    if g == 0:
        return {0: 1.0}, 0.0
    gf = float(g)
    T = max(reach, int(2 * gf) + 10)
    while True:
        # Sum_{n>T} e^-g g^n/n! <= e^-g g^{T+1}/(T+1)! / (1 - g/(T+2))
        lead = math.exp((T + 1) * math.log(gf) - gf - math.lgamma(T + 2))
        bound = lead / (1 - gf / (T + 2))
        if bound < 1e-18:
            break
        T += 8
    return {n: math.exp(n * math.log(gf) - gf - math.lgamma(n + 1)) for n in range(T + 1)}, bound


def _series_coeffs(omega: OmegaPoint, window: tuple[int, int]) -> LaurentCoeffs:
    poly = _poly_part(omega)
    if not omega.gamma_plus and not omega.gamma_minus:
        lo, hi = window
        return LaurentCoeffs(window, {n: poly.get(n, Fraction(0)) for n in range(lo, hi + 1)}, "exact")
    reach = max(abs(window[0]), abs(window[1])) + len(omega.beta_minus) + len(omega.beta_plus)
    gp, tp = _poisson_series(omega.gamma_plus, reach)
    gm, tm = _poisson_series(omega.gamma_minus, reach)
    series: dict[int, float] = {}
    for i, a in poly.items():
        for j, b in gp.items():
            for k, c in gm.items():
                n = i + j - k
                series[n] = series.get(n, 0.0) + float(a) * b * c
    lo, hi = window
    return LaurentCoeffs(window, {n: series.get(n, 0.0) for n in range(lo, hi + 1)}, "exact", tp + tm)


def _fourier_coeffs(omega: OmegaPoint, window: tuple[int, int], samples: int) -> LaurentCoeffs:
    k = np.arange(samples)
    u = np.exp(2j * np.pi * k / samples)
    vals = np.exp(float(omega.gamma_plus) * (u - 1) + float(omega.gamma_minus) * (1 / u - 1))
    for b in omega.beta_plus:
        vals = vals * (1 + float(b) * (u - 1))
    for b in omega.beta_minus:
        vals = vals * (1 + float(b) * (1 / u - 1))
    for a in omega.alpha_plus:
        vals = vals / (1 - float(a) * (u - 1))
    for a in omega.alpha_minus:
        vals = vals / (1 - float(a) * (1 / u - 1))
    c = np.fft.fft(vals) / samples
    lo, hi = window
    if hi - lo + 1 > samples:
        raise ValueError("window wider than the number of samples")
    coeffs = {n: float(c[n % samples].real) for n in range(lo, hi + 1)}
    # coefficients around n = samples/2 measure how much aliasing is left
    mid = samples // 2
    alias = float(np.abs(c[mid - samples // 16 : mid + samples // 16]).sum())
    return LaurentCoeffs(window, coeffs, "numeric", alias)


def laurent_coeffs(
    omega: OmegaPoint, window: tuple[int, int], method: str = "auto", samples: int = 1 << 14
) -> LaurentCoeffs:
    """Coefficients phi_n(omega), n in ``window``.

    ``exact``: convolution of per-factor expansions (needs alpha = 0).
    ``numeric``: FFT of Phi sampled at ``samples`` points of the unit circle.
    ``auto`` picks ``exact`` whenever it applies.
    """
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    if method == "auto":
        method = "numeric" if omega.has_alpha else "exact"
    if method == "exact":
        if omega.has_alpha:
            out = _fourier_coeffs(omega, window, samples)
            out.fallback = True
            return out
        return _series_coeffs(omega, window)
    if method == "numeric":
        return _fourier_coeffs(omega, window, samples)
    raise ValueError(f"unknown method {method!r}")


# -- determinants ------------------------------------------------------------


def exact_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Fraction-free (Bareiss) elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _phi_matrix(phi, nu: Signature):
    N = len(nu)
    return [[phi(nu[i] - i + j) for j in range(N)] for i in range(N)]


# -- the link to level N -----------------------------------------------------


def link_infinity(
    omega: OmegaPoint,
    N: int,
    truncation: Sequence[Signature] | None = None,
    *,
    eps: float = 1e-12,
    tolerance: float = 1e-12,
) -> StochasticRow:
    """Row nu -> Dim_N nu * det[phi_{nu_i - i + j}(omega)].

    Polynomial Phi gives a finite support and an exact, complete row. Otherwise
    the row is truncated, either to ``truncation`` or to a box of parts grown
    until the missing mass is below ``eps``.
    """
    if omega.is_polynomial and truncation is None:
        lo, hi = -len(omega.beta_minus), len(omega.beta_plus)
        phi = _series_coeffs(omega, (lo - N, hi + N))
        row = {}
        for nu in signatures(N, lo, hi):
            v = weyl_dimension(nu) * exact_det(_phi_matrix(phi.__getitem__, nu))
            if v:
                if v < 0:
                    raise IntegrityError(f"negative mass {v} at {nu}")
                row[nu] = v
        return StochasticRow(omega, row, complete=True, residual=Fraction(0))

    def numeric_row(sigs):
        lo = min(min(s) for s in sigs) - N
        hi = max(max(s) for s in sigs) + N
        phi = laurent_coeffs(omega, (lo, hi))
        row = {}
        for nu in sigs:
            v = weyl_dimension(nu) * float(np.linalg.det(np.array(_phi_matrix(phi.__getitem__, nu), dtype=float)))
            if v < -tolerance:
                raise IntegrityError(f"negative mass {v} at {nu}")
            if v > 0:
                row[nu] = v
        return row, phi.tail_bound

    if truncation is not None:
        row, tail = numeric_row([Signature(s) for s in truncation])
        exact = omega.is_polynomial
        residual = 1 - sum(row.values(), Fraction(0) if exact else 0.0)
        return StochasticRow(omega, row, complete=False, residual=residual)

    lo, hi = _initial_range(omega)
    while True:
        row, tail = numeric_row(signatures(N, lo, hi))
        residual = 1.0 - sum(row.values())
        if residual < eps or hi - lo > 400:
            break
        lo -= 0 if not (omega.gamma_minus or omega.alpha_minus) else 4
        hi += 0 if not (omega.gamma_plus or omega.alpha_plus) else 4
        if not (omega.gamma_minus or omega.alpha_minus or omega.gamma_plus or omega.alpha_plus):
            break
    return StochasticRow(omega, row, complete=False, residual=max(residual, 0.0) + tail)


def _initial_range(omega: OmegaPoint) -> tuple[int, int]:
    hi = len(omega.beta_plus) + int(2 * float(omega.gamma_plus)) + (4 if omega.gamma_plus or omega.alpha_plus else 0)
    lo = -len(omega.beta_minus) - int(2 * float(omega.gamma_minus)) - (4 if omega.gamma_minus or omega.alpha_minus else 0)
    return lo, hi


# -- independent oracles -----------------------------------------------------


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def schur_oracle(omega: OmegaPoint, N: int) -> dict[Signature, Fraction]:
    """Expand prod_k Phi(u_k) in characters by multiplying with the Vandermonde
    and reading off antisymmetric leading exponents. Polynomial omega only."""
    if not omega.is_polynomial:
        raise ValueError("the Schur oracle needs a Laurent-polynomial Phi")
    unit = tuple([0] * N)
    f = {unit: Fraction(1)}
    for k in range(N):
        def e(p):
            v = [0] * N
            v[k] = p
            return tuple(v)

        for b in omega.beta_plus:
            f = _mul(f, {unit: 1 - b, e(1): b})
        for b in omega.beta_minus:
            f = _mul(f, {unit: 1 - b, e(-1): b})
    for i in range(N):
        for j in range(i + 1, N):
            vi = [0] * N
            vj = [0] * N
            vi[i] = 1
            vj[j] = 1
            f = _mul(f, {tuple(vi): Fraction(1), tuple(vj): Fraction(-1)})
    out = {}
    for exps, c in f.items():
        if all(exps[i] > exps[i + 1] for i in range(N - 1)):
            nu = Signature(exps[i] - (N - 1 - i) for i in range(N))
            out[nu] = c * weyl_dimension(nu)
    return {k: out[k] for k in sorted(out)}


def poisson_oracle(gamma: Fraction, N: int, nu: Signature) -> float:
    """Lambda^infty_N for omega = (gamma^+ = gamma), from the expansion
    e^{gamma p_1} = sum_lambda gamma^|lambda| dim(lambda)/|lambda|! s_lambda."""
    from .bouquet import YoungDiagram, dim_young

    if nu[-1] < 0:
        return 0.0
    size = sum(nu)
    g = float(gamma)
    lam = YoungDiagram(p for p in nu if p > 0)
    return weyl_dimension(nu) * math.exp(-N * g + size * math.log(g) - math.lgamma(size + 1)) * dim_young(lam)
