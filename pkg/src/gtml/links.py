"""Stochastic links between levels of the GT graph and relative dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Hashable, Iterable

from .gtcore import EMPTY, Signature, count_paths, enumerate_down, weyl_dimension


class PoleError(ArithmeticError):
    """Evaluation point hits a pole of a rational function."""


@dataclass
class StochasticRow:
    """A finitely supported probability row, stored sparsely.

    ``complete`` is False when the row was truncated; ``residual`` then carries
    the missing mass (or a bound on it).
    """

    source: Hashable
    entries: dict = field(default_factory=dict)
    complete: bool = True
    residual: float | Fraction = 0

    def __post_init__(self):
        self.entries = {k: self.entries[k] for k in sorted(self.entries)}

    def total(self):
        return sum(self.entries.values(), Fraction(0) if self.exact else 0.0)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.entries.values())

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self):
        return len(self.entries)


def link_one_step(nu: Signature) -> StochasticRow:
    """Row of Lambda^N_{N-1}: lambda -> Dim lambda / Dim nu over lambda < nu."""
    nu = Signature(nu)
    if len(nu) == 1:
        return StochasticRow(nu, {EMPTY: Fraction(1)})
    d = weyl_dimension(nu)
    return StochasticRow(nu, {lam: Fraction(weyl_dimension(lam), d) for lam in enumerate_down(nu)})


def link_multi(nu: Signature, K: int) -> StochasticRow:
    """Row of Lambda^N_K via Dim_K kappa * Dim_{K,N}(kappa, nu) / Dim_N nu."""
    nu = Signature(nu)
    N = len(nu)
    if not 1 <= K < N:
        raise ValueError(f"need 1 <= K < N, got K={K}, N={N}")
    d = weyl_dimension(nu)
    row = {}
    for kappa in _reachable_at(nu, K):
        c = count_paths(kappa, nu)
        if c:
            row[kappa] = Fraction(weyl_dimension(kappa) * c, d)
    return StochasticRow(nu, row)


def _reachable_at(nu: Signature, K: int) -> list[Signature]:
    d = len(nu) - K
    ranges = [range(nu[i + d], nu[i] + 1) for i in range(K)]
    return [Signature(p) for p in product(*ranges) if all(a >= b for a, b in zip(p, p[1:]))]


def iterate_links(nu: Signature, K: int) -> StochasticRow:
    """Lambda^N_K as the matrix product of one-step links (independent route)."""
    row = {Signature(nu): Fraction(1)}
    for _ in range(len(nu) - K):
        nxt: dict[Signature, Fraction] = {}
        for sig, m in row.items():
            for lam, p in link_one_step(sig):
                nxt[lam] = nxt.get(lam, 0) + m * p
        row = nxt
    return StochasticRow(Signature(nu), row)


def push_forward(measure: dict, step=link_one_step) -> dict:
    """Compose a finitely supported measure with a link given row by row."""
    out: dict = {}
    for sig, m in measure.items():
        for lam, p in step(sig):
            out[lam] = out.get(lam, 0) + m * p
    return out


def relative_dimension(kappa: Signature, nu: Signature) -> Fraction:
    """F_kappa(nu) = Dim_{K,N}(kappa, nu) / Dim_N nu."""
    return Fraction(count_paths(kappa, nu), weyl_dimension(Signature(nu)))


def h_star(t, nu: Signature) -> Fraction:
    """prod_j (t+j)/(t+j-nu_j) evaluated exactly at rational ``t``."""
    t = Fraction(t)
    num, den = Fraction(1), Fraction(1)
    for j, part in enumerate(nu, start=1):
        if t + j - part == 0:
            raise PoleError(f"h_star has a pole at t={t} (factor j={j})")
        num *= t + j
        den *= t + j - part
    return num / den


def _shift_ratio(t: Fraction, k: int, N: int) -> Fraction:
    # (t+1)...(t+N) / ((t+1-k)...(t+N-k))
    den = prod((t + j - k for j in range(1, N + 1)), start=Fraction(1))
    if den == 0:
        raise PoleError(f"pole at t={t} for k={k}")
    return prod((t + j for j in range(1, N + 1)), start=Fraction(1)) / den


def h_star_expansion(t, nu: Signature) -> Fraction:
    """Right-hand side sum_k F_k(nu) (t+1)..(t+N)/((t+1-k)..(t+N-k))."""
    t = Fraction(t)
    nu = Signature(nu)
    N = len(nu)
    total = Fraction(0)
    for k in range(nu[-1], nu[0] + 1):
        f = relative_dimension(Signature((k,)), nu)
        if f:
            total += f * _shift_ratio(t, k, N)
    return total


@dataclass
class IdentityReport:
    signature: Signature
    points: list = field(default_factory=list)  # (t, lhs, rhs, equal)
    skipped: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.points) and all(p[3] for p in self.points)


def verify_theorem_3A(nu: Signature, sample_points: Iterable) -> IdentityReport:
    """Check the generating identity for F_k(nu) at exact sample points."""
    nu = Signature(nu)
    rep = IdentityReport(nu)
    for t in sample_points:
        t = Fraction(t)
        try:
            lhs = h_star(t, nu)
            rhs = h_star_expansion(t, nu)
        except PoleError:
            rep.skipped.append(t)
            continue
        rep.points.append((t, lhs, rhs, lhs == rhs))
    return rep
