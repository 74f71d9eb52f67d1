"""Admissible parameters, zw-measures and their coherency.

Everything that must be exact (weight ratios, detailed balance) goes through
rational recurrences; Gamma values only show up in the Dougall cross-check
and in the consistency report for the normalisation constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.special import loggamma

from .gtcore import Signature


class InadmissibleError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ZwPair:
    """A pair (zeta, zeta') in the set 𝒵.

    ``kind`` is ``"real"`` (``a``, ``b`` are the two members) or ``"conjugate"``
    (``a`` is the real part, ``b`` the imaginary part of zeta; zeta' = conj).
    """

    kind: str
    a: Fraction
    b: Fraction

    @classmethod
    def real(cls, first, second) -> ZwPair:
        return cls("real", _frac(first), _frac(second))

    @classmethod
    def conjugate(cls, re, im) -> ZwPair:
        return cls("conjugate", _frac(re), _frac(im))

    def members(self) -> tuple[complex, complex]:
        if self.kind == "real":
            return complex(self.a), complex(self.b)
        z = complex(float(self.a), float(self.b))
        return z, z.conjugate()

    def prod(self, x) -> Fraction:
        """(zeta + x)(zeta' + x), exactly; x may be any rational."""
        x = _frac(x)
        if self.kind == "real":
            return (self.a + x) * (self.b + x)
        return (self.a + x) ** 2 + self.b**2

    @property
    def total(self) -> Fraction:
        """zeta + zeta' (always real for pairs in 𝒵)."""
        return self.a + self.b if self.kind == "real" else 2 * self.a

    def violation(self) -> str | None:
        if self.kind == "conjugate":
            if self.b == 0:
                return "conjugate pair must be non-real"
            return None
        for v in (self.a, self.b):
            if v.denominator == 1:
                return f"{v} is an integer, so (zeta+k)(zeta'+k) vanishes at k={-v}"
        if math.floor(self.a) != math.floor(self.b):
            return f"{self.a} and {self.b} are not in a common interval (m, m+1)"
        return None

    def __str__(self) -> str:
        if self.kind == "real":
            return f"({self.a}, {self.b})"
        sign = "+" if self.b >= 0 else "-"
        return f"({self.a}{sign}{abs(self.b)}i, conj)"


def make_pair(first, second) -> ZwPair:
    """Build a pair from two numbers given as rationals or (re, im) tuples."""
    re1, im1 = first if isinstance(first, tuple) else (first, 0)
    re2, im2 = second if isinstance(second, tuple) else (second, 0)
    re1, im1, re2, im2 = map(_frac, (re1, im1, re2, im2))
    if im1 == 0 and im2 == 0:
        return ZwPair.real(re1, re2)
    if re1 == re2 and im1 == -im2:
        return ZwPair.conjugate(re1, im1)
    raise InadmissibleError(
        f"({first}, {second}) is neither a real pair nor a conjugate pair"
    )


@dataclass(frozen=True)
class ZwParams:
    z: ZwPair
    w: ZwPair

    def __post_init__(self):
        ok, reason = is_admissible(self)
        if not ok:
            raise InadmissibleError(reason)

    @classmethod
    def from_values(cls, z, z2, w, w2) -> ZwParams:
        return cls(make_pair(z, z2), make_pair(w, w2))

    @property
    def total(self) -> Fraction:
        return self.z.total + self.w.total

    def complex_values(self) -> tuple[complex, complex, complex, complex]:
        return (*self.z.members(), *self.w.members())

    def __str__(self) -> str:
        return f"z={self.z} w={self.w}"


def is_admissible(params) -> tuple[bool, str]:
    """Admissibility test; returns (flag, reason naming the first failed clause)."""
    if isinstance(params, ZwParams):
        zp, wp = params.z, params.w
    else:
        try:
            z, z2, w, w2 = params
            zp, wp = make_pair(z, z2), make_pair(w, w2)
        except InadmissibleError as exc:
            return False, str(exc)
    for name, pair in (("(z, z')", zp), ("(w, w')", wp)):
        v = pair.violation()
        if v is not None:
            return False, f"{name} not in 𝒵: {v}"
    total = zp.total + wp.total
    if total <= -1:
        return False, f"Re(z+z'+w+w') = {total} is not > -1"
    return True, "admissible"


# -- coordinates -------------------------------------------------------------


def to_point_configuration(nu: Sequence[int]) -> tuple[int, ...]:
    """n_i = nu_i + N - i: a strictly decreasing integer tuple."""
    N = len(nu)
    return tuple(p + N - 1 - i for i, p in enumerate(nu))


def from_point_configuration(n: Sequence[int]) -> Signature:
    N = len(n)
    return Signature(p - (N - 1 - i) for i, p in enumerate(n))


def _vandermonde(n: Sequence[int]) -> int:
    return math.prod(n[i] - n[j] for i in range(len(n)) for j in range(i + 1, len(n)))


# -- weights -----------------------------------------------------------------


def single_ratio(params: ZwParams, N: int, m: int) -> Fraction:
    """w(m+1)/w(m) for the one-particle weight of the level-N ensemble.

    w(m) = 1 / (Gamma(z+N-m) Gamma(z'+N-m) Gamma(w+1+m) Gamma(w'+1+m)).
    """
    return params.z.prod(N - 1 - m) / params.w.prod(m + 1)


def weight_ratio(params: ZwParams, nu: Sequence[int], k: int, direction: int) -> Fraction:
    """M'(nu ± e_k) / M'(nu) without evaluating any Gamma function.

    ``k`` is a 0-based coordinate index.  A move that makes two point
    coordinates collide has ratio 0 (the dimension factor vanishes).
    """
    N = len(nu)
    if direction not in (1, -1) or not 0 <= k < N:
        raise ValueError(f"invalid move k={k}, direction={direction} for N={N}")
    n = to_point_configuration(nu)
    m = list(n)
    m[k] += direction
    v_new = _vandermonde(m)
    if v_new == 0:
        return Fraction(0)
    vr = Fraction(v_new, _vandermonde(n)) ** 2
    if direction == 1:
        return single_ratio(params, N, n[k]) * vr
    return vr / single_ratio(params, N, n[k] - 1)


def single_weight(params: ZwParams, N: int, m: int) -> Fraction:
    """w(m)/w(0) as an exact telescoping product."""
    out = Fraction(1)
    if m >= 0:
        for j in range(m):
            out *= single_ratio(params, N, j)
    else:
        for j in range(m, 0):
            out /= single_ratio(params, N, j)
    return out


def relative_weight(params: ZwParams, n: Sequence[int]) -> Fraction:
    """M'(n)/M'(delta) for a point configuration ``n``, delta = (N-1, ..., 0)."""
    N = len(n)
    delta = tuple(range(N - 1, -1, -1))
    out = Fraction(_vandermonde(n), _vandermonde(delta)) ** 2
    for a, b in zip(n, delta):
        out *= single_weight(params, N, a) / single_weight(params, N, b)
    return out


def _lgamma(x) -> complex:
    return loggamma(np.asarray(x, dtype=complex))


def log_single_weights(params: ZwParams, N: int, lo: int, hi: int) -> np.ndarray:
    """log(w(m)/w(0)) for m in [lo, hi] via cumulative log-ratios (floating point)."""
    ms = np.arange(lo, hi + 1)
    zr, zi = float(params.z.a), float(params.z.b)
    wr, wi = float(params.w.a), float(params.w.b)

    def zprod(x):
        x = np.asarray(x, dtype=float)
        if params.z.kind == "real":
            return (zr + x) * (zi + x)
        return (zr + x) ** 2 + zi**2

    def wprod(x):
        x = np.asarray(x, dtype=float)
        if params.w.kind == "real":
            return (wr + x) * (wi + x)
        return (wr + x) ** 2 + wi**2

    def log_ratio(m):
        return np.log(zprod(N - 1 - m)) - np.log(wprod(m + 1))

    out = np.zeros(len(ms))
    pos = ms >= 0
    if hi >= 0:
        steps = log_ratio(np.arange(0, hi))
        cum = np.concatenate([[0.0], np.cumsum(steps)])
        out[pos] = cum[ms[pos]]
    if lo < 0:
        steps = log_ratio(np.arange(-1, lo - 1, -1))
        cum = -np.cumsum(steps)
        out[~pos] = cum[-ms[~pos] - 1]
    return out


def log_Mprime_delta(params: ZwParams, N: int) -> float:
    """log M'(delta) from Gamma values (used only for consistency reports)."""
    z, z2, w, w2 = params.complex_values()
    total = 0.0
    for i in range(1, N + 1):
        # nu = 0 row of the definition
        total -= _lgamma(z + i) + _lgamma(z2 + i) + _lgamma(w + N + 1 - i) + _lgamma(w2 + N + 1 - i)
    return float(np.real(total))


def log_normalization(params: ZwParams, N: int) -> float:
    """log C_{zw|N} from Gamma values."""
    z, z2, w, w2 = params.complex_values()
    s = z + z2 + w + w2
    total = 0.0
    for i in range(1, N + 1):
        total += _lgamma(s + i)
        total -= _lgamma(z + w + i) + _lgamma(z + w2 + i) + _lgamma(z2 + w + i) + _lgamma(z2 + w2 + i)
        total -= _lgamma(i)
    return float(np.real(total))


@dataclass
class FiniteMeasure:
    """Truncated measure on level-N point configurations.

    ``states`` holds point configurations (one row per state, strictly
    decreasing), ``masses`` the matching probabilities.
    """

    N: int
    states: np.ndarray
    masses: np.ndarray
    mode: str = "numeric"
    residual: float = 0.0
    box: int = 0
    info: dict = field(default_factory=dict)

    @property
    def support(self) -> list[Signature]:
        return [from_point_configuration(tuple(int(x) for x in s)) for s in self.states]

    def as_dict(self) -> dict[Signature, float]:
        return dict(zip(self.support, (float(m) for m in self.masses)))

    def total(self) -> float:
        return float(self.masses.sum())


def _config_grid(N: int, L: int) -> np.ndarray:
    return np.array(list(combinations(range(L, -L - 1, -1), N)), dtype=np.int64).reshape(-1, N)


def _log_vandermonde(states: np.ndarray) -> np.ndarray:
    out = np.zeros(len(states))
    N = states.shape[1]
    for i in range(N):
        for j in range(i + 1, N):
            out += np.log((states[:, i] - states[:, j]).astype(float))
    return out


def log_weights_on(params: ZwParams, states: np.ndarray) -> np.ndarray:
    """log(M'(n)/M'(delta)) for an array of point configurations."""
    N = states.shape[1]
    lo, hi = int(states.min()), int(states.max())
    lw = log_single_weights(params, N, min(lo, 0), max(hi, N))
    off = -min(lo, 0)
    delta = np.arange(N - 1, -1, -1)
    out = lw[states + off].sum(axis=1) - lw[delta + off].sum()
    out += 2 * (_log_vandermonde(states) - _log_vandermonde(delta[None, :])[0])
    return out


def tail_exponent(params: ZwParams) -> float:
    """Decay exponent of the one-coordinate marginal, |n|^-(Re(z+z'+w+w')+2)."""
    return float(params.total) + 2.0


def zw_measure(
    params: ZwParams,
    N: int,
    eps: float = 1e-8,
    *,
    start: int = 8,
    max_box: int | None = None,
) -> FiniteMeasure:
    """Adaptively truncated zw-measure on the box [-L, L]^N in point coordinates.

    The box doubles until the integral-comparison tail bound drops below ``eps``
    or ``max_box`` is hit; ``residual`` is the final bound.
    """
    if max_box is None:
        max_box = {1: 1 << 20, 2: 2048}.get(N, 128)
    p = tail_exponent(params)
    L = max(start, N)
    while True:
        states = _config_grid(N, L)
        logw = log_weights_on(params, states)
        w = np.exp(logw - logw.max())
        total = w.sum()
        outer = np.abs(states).max(axis=1) > L // 2
        layer = w[outer].sum() / total
        # mass beyond L relative to the shell (L/2, L] for a |n|^-p density
        bound = 4.0 * layer / (2.0 ** (p - 1.0) - 1.0)
        if bound < eps or 2 * L > max_box:
            break
        L *= 2
    masses = w / total
    exact_mass = float(np.exp(logw.max() + np.log(total) + log_Mprime_delta(params, N) - log_normalization(params, N)))
    return FiniteMeasure(
        N,
        states,
        masses,
        mode="numeric",
        residual=bound,
        box=L,
        info={"layer_mass": layer, "gamma_normalized_mass": exact_mass, "tail_exponent": p},
    )


def exact_weights(params: ZwParams, N: int, states: Sequence[Sequence[int]]) -> dict:
    """M'(n)/M'(delta) as exact rationals on an explicit list of configurations."""
    return {tuple(s): relative_weight(params, tuple(s)) for s in states}


# -- Dougall -----------------------------------------------------------------


@dataclass
class DougallReport:
    n_cut: int
    lhs: complex
    rhs: complex
    residual: float
    tail_estimate: float


def dougall_term(params: ZwParams, n) -> complex:
    z, z2, w, w2 = params.complex_values()
    n = np.asarray(n)
    return np.exp(-(_lgamma(z - n + 1) + _lgamma(z2 - n + 1) + _lgamma(w + n + 1) + _lgamma(w2 + n + 1)))


def dougall_rhs(params: ZwParams) -> complex:
    z, z2, w, w2 = params.complex_values()
    s = z + z2 + w + w2
    return complex(
        np.exp(
            _lgamma(s + 1)
            - _lgamma(z + w + 1)
            - _lgamma(z + w2 + 1)
            - _lgamma(z2 + w + 1)
            - _lgamma(z2 + w2 + 1)
        )
    )


def dougall_check(params: ZwParams, n_cut: int) -> DougallReport:
    """Truncated bilateral Dougall sum against its closed form."""
    if n_cut < 1:
        raise ValueError("n_cut must be >= 1")
    ns = np.arange(-n_cut, n_cut + 1)
    terms = dougall_term(params, ns)
    lhs = complex(terms.sum())
    rhs = dougall_rhs(params)
    p = tail_exponent(params)
    # |term(n)| ~ c |n|^-p, so the tail beyond n_cut is about |term| n_cut/(p-1) per side
    tail = (abs(terms[0]) + abs(terms[-1])) * n_cut / (p - 1)
    return DougallReport(n_cut, lhs, rhs, abs(lhs - rhs) / abs(rhs), float(tail / abs(rhs)))


# -- coherency ---------------------------------------------------------------


def _dense_level(params: ZwParams, N: int, L: int):
    """M_N / Dim_N on a dense grid of nu-coordinates, normalised on the box."""
    lo = -L - (N - 1)
    width = 2 * L + N
    axes = np.meshgrid(*[np.arange(lo, lo + width)] * N, indexing="ij", sparse=True)
    n = [axes[i] + (N - 1 - i) for i in range(N)]
    valid = np.ones([width] * N, dtype=bool)
    for i in range(N):
        valid = valid & (n[i] >= -L) & (n[i] <= L)
        if i + 1 < N:
            valid = valid & (n[i] > n[i + 1])
    states = np.stack([np.broadcast_to(x, valid.shape)[valid] for x in n], axis=1)
    logw = log_weights_on(params, states)
    w = np.exp(logw - logw.max())
    w /= w.sum()
    dim = np.exp(_log_vandermonde(states) - _log_vandermonde(np.arange(N - 1, -1, -1)[None, :])[0])
    grid = np.zeros(valid.shape)
    grid[valid] = w / dim
    return grid, lo, states, w


def _box_sums(prefix: np.ndarray, lows: list, highs: list) -> np.ndarray:
    """Sum of the original array over per-axis inclusive index ranges."""
    N = prefix.ndim
    out = 0.0
    for mask in range(1 << N):
        idx = []
        sign = 1
        for ax in range(N):
            if mask >> ax & 1:
                idx.append(lows[ax])
                sign = -sign
            else:
                idx.append(highs[ax] + 1)
        out = out + sign * prefix[tuple(idx)]
    return out


def push_forward_dense(params: ZwParams, N: int, L: int):
    """(M_N Lambda^N_{N-1})(lambda) for every lambda reachable from the level-N box.

    Uses box sums: the nu interlacing a fixed lambda form a product of intervals.
    Returns (lambda point configurations, masses).
    """
    grid, lo, _, _ = _dense_level(params, N, L)
    width = grid.shape[0]
    prefix = grid
    for ax in range(N):
        prefix = np.cumsum(prefix, axis=ax)
    prefix = np.pad(prefix, [(1, 0)] * N)
    K = N - 1
    lam = _config_grid(K, L + 1) if K else np.zeros((1, 0), dtype=np.int64)
    lam_sig = lam - np.arange(K - 1, -1, -1)[None, :]
    keep = (lam_sig >= lo).all(axis=1) & (lam_sig < lo + width).all(axis=1)
    lam, lam_sig = lam[keep], lam_sig[keep]
    idx = lam_sig - lo
    lows, highs = [], []
    for ax in range(N):
        lows.append(idx[:, ax] if ax < K else np.zeros(len(idx), dtype=np.int64))
        highs.append(idx[:, ax - 1] if ax > 0 else np.full(len(idx), width - 1))
    sums = _box_sums(prefix, lows, highs)
    dimlam = np.exp(_log_vandermonde(lam) - _log_vandermonde(np.arange(K - 1, -1, -1)[None, :])[0])
    return lam, sums * dimlam


def _moment_table(params: ZwParams, N: int, R: int, kmax: int):
    """Cumulative sums of w(m) (m - c)^k over m in [-R, R], with a zero pad in front."""
    m = np.arange(-R, R + 1)
    lw = log_single_weights(params, N, -R, R)
    w = np.exp(lw - lw.max())
    c = float((w * m).sum() / w.sum())
    x = (m - c) / _scale(R)
    cum = np.zeros((kmax + 1, len(m) + 1))
    for k in range(kmax + 1):
        cum[k, 1:] = np.cumsum(w * x**k)
    return cum


def _scale(R: int) -> float:
    return max(1.0, R / 64)


def heine_total(params: ZwParams, N: int, R: int) -> float:
    """det of the Hankel moment matrix: the sum of prod w(n_i) V(n)^2 over strictly
    decreasing n in [-R, R]^N, in the scaled units of ``_moment_table``."""
    mom = _moment_table(params, N, R, 2 * N - 2)[:, -1]
    return float(np.linalg.det(np.array([[mom[i + j] for j in range(N)] for i in range(N)])))


def push_forward(params: ZwParams, N: int, lam: np.ndarray, R: int = 1 << 20) -> np.ndarray:
    """(M_N Lambda^N_{N-1})(lambda) for level-(N-1) point configurations ``lam``.

    The level-N measure is truncated to point coordinates in [-R, R]. For fixed
    lambda the interlacing nu range over a product of intervals and M_N/Dim_N is
    prod w(n_i) times a Vandermonde determinant, so the sum over nu collapses to
    an N x N determinant of interval moment sums (multilinearity in rows).
    """
    K = N - 1
    cum = _moment_table(params, N, R, N - 1)
    lam = np.asarray(lam, dtype=np.int64).reshape(-1, K)
    nu_lam = lam - np.arange(K - 1, -1, -1)[None, :]
    S = np.empty((len(lam), N, N))
    for i in range(N):
        shift = N - 1 - i
        lo = nu_lam[:, i] + shift if i < K else np.full(len(lam), -R)
        hi = nu_lam[:, i - 1] + shift if i > 0 else np.full(len(lam), R)
        lo = np.clip(lo, -R, R + 1) + R
        hi = np.clip(hi, -R - 1, R) + R
        for j in range(N):
            S[:, i, j] = np.where(hi >= lo, cum[N - 1 - j, hi + 1] - cum[N - 1 - j, lo], 0.0)
    # moments are taken in x = (m - c)/s, which rescales V by s^{N(N-1)/2}
    scale = _scale(R) ** (N * (N - 1) / 2)
    vdelta = float(_vandermonde(tuple(range(N - 1, -1, -1))))
    dim_lam = np.exp(_log_vandermonde(lam) - _log_vandermonde(np.arange(K - 1, -1, -1)[None, :])[0])
    return dim_lam * vdelta * np.linalg.det(S) / (heine_total(params, N, R) * scale)


def level_masses(params: ZwParams, states: np.ndarray, R: int = 1 << 20) -> np.ndarray:
    """M_N at explicit point configurations, normalised by the Heine sum over [-R, R]."""
    states = np.asarray(states, dtype=np.int64)
    N = states.shape[1]
    lw = log_single_weights(params, N, -R, R)
    logw = (
        lw[states + R].sum(axis=1)
        - N * lw.max()
        + 2 * _log_vandermonde(states)
        - N * (N - 1) * math.log(_scale(R))
    )
    return np.exp(logw) / heine_total(params, N, R)


@dataclass
class CoherencyReport:
    N: int
    eps: float
    box: int
    tv: float
    tv_box: float
    tail_pushed: float
    tail_lower: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.tv <= self.tolerance


def verify_coherency(
    params: ZwParams,
    N: int,
    eps: float = 1e-8,
    tolerance: float | None = None,
    *,
    R: int = 1 << 20,
) -> CoherencyReport:
    """Total variation between M_N Lambda^N_{N-1} and M_{N-1}.

    Both sides are compared on the level-(N-1) box chosen by ``zw_measure`` at
    ``eps``; the mass either side puts outside that box is added in full, so
    ``tv`` is an upper bound. Passes when ``tv <= tolerance`` (default 10 eps).
    """
    if N < 2:
        raise ValueError("coherency needs N >= 2")
    lower = zw_measure(params, N - 1, eps)
    lam = lower.states
    pushed = push_forward(params, N, lam, R)
    direct = level_masses(params, lam, R)
    tv_box = 0.5 * float(np.abs(pushed - direct).sum())
    tail_p = max(0.0, 1.0 - float(pushed.sum()))
    tail_d = max(0.0, 1.0 - float(direct.sum()))
    tv = tv_box + 0.5 * (tail_p + tail_d)
    if tolerance is None:
        tolerance = 10 * eps
    return CoherencyReport(N, eps, lower.box, tv, tv_box, tail_p, tail_d, tolerance)
