"""The jump process on point configurations and its finite-box machinery.

States are strictly decreasing integer tuples (point coordinates). Rates are
exact rationals; they are turned into floats only inside ``simulate`` and
``semigroup_apply``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.stats import poisson

from .gtcore import Signature
from .links import link_one_step
from .zw import ZwParams, from_point_configuration, relative_weight, to_point_configuration


class IntegrityError(RuntimeError):
    """An internal invariant was violated (signals a bug, not bad input)."""


PointState = tuple


def vandermonde(n: Sequence[int]) -> int:
    """V(n) = prod_{i<j} (n_i - n_j)."""
    return math.prod(n[i] - n[j] for i in range(len(n)) for j in range(i + 1, len(n)))


def rates(params: ZwParams, n: Sequence[int]) -> list[tuple[PointState, Fraction]]:
    """Outgoing jumps from ``n`` with their exact rates.

    Moves onto a collision have zero Vandermonde and are omitted.
    """
    n = tuple(n)
    N = len(n)
    v = vandermonde(n)
    out = []
    for k in range(N):
        for step in (1, -1):
            m = list(n)
            m[k] += step
            vm = vandermonde(m)
            if vm == 0:
                continue
            if step == 1:
                poly = params.z.prod(N - 1 - n[k])
            else:
                poly = params.w.prod(n[k])
            out.append((tuple(m), Fraction(vm, v) * poly))
    return out


def total_rate(params: ZwParams, n: Sequence[int]) -> Fraction:
    return sum((r for _, r in rates(params, n)), Fraction(0))


def generator_row(params: ZwParams, n: Sequence[int]) -> dict[PointState, Fraction]:
    """Row of Q at ``n`` including the diagonal, which makes the row sum zero."""
    row = dict(rates(params, n))
    row[tuple(n)] = -sum(row.values(), Fraction(0))
    return row


def box_states(N: int, L: int) -> list[PointState]:
    """Strictly decreasing N-tuples with entries in [-L, L], lexicographic."""
    return sorted(combinations(range(L, -L - 1, -1), N))


@dataclass
class GeneratorMatrix:
    """Rate matrix of the process on a coordinate box.

    The diagonal is minus the full total rate, including jumps that leave the
    box, so boundary rows are substochastic. ``interior`` marks states whose
    every neighbour stays inside.
    """

    states: list
    rates: dict
    diagonal: list
    interior: list
    L: int

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def row_sum(self, i: int) -> Fraction:
        return self.diagonal[i] + sum(
            (r for (a, _), r in self.rates.items() if a == i), Fraction(0)
        )

    def to_sparse(self) -> sparse.csr_matrix:
        n = len(self.states)
        rows, cols, vals = [], [], []
        for (i, j), r in self.rates.items():
            rows.append(i)
            cols.append(j)
            vals.append(float(r))
        for i, d in enumerate(self.diagonal):
            rows.append(i)
            cols.append(i)
            vals.append(float(d))
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def generator_matrix(params: ZwParams, N: int, L: int) -> GeneratorMatrix:
    """Assemble the truncated generator on the box [-L, L]^N of point coordinates."""
    states = box_states(N, L) if L >= 0 else []
    if not states:
        raise ValueError(f"box [-{L}, {L}] holds no state for N={N}")
    idx = {s: i for i, s in enumerate(states)}
    off: dict[tuple[int, int], Fraction] = {}
    diag, interior = [], []
    for i, s in enumerate(states):
        out = rates(params, s)
        inside = True
        for t, r in out:
            j = idx.get(t)
            if j is None:
                inside = False
            else:
                off[(i, j)] = r
        diag.append(-sum((r for _, r in out), Fraction(0)))
        interior.append(inside)
    return GeneratorMatrix(states, off, diag, interior, L)


# -- simulation --------------------------------------------------------------


@dataclass
class Trajectory:
    initial: PointState
    events: list = field(default_factory=list)  # (time, state)
    horizon: float = 0.0
    seed: int = 0

    def occupation(self) -> dict[PointState, float]:
        """Time spent in each state up to the last event (or the horizon)."""
        occ: dict[PointState, float] = {}
        t_prev, state = 0.0, self.initial
        for t, s in self.events:
            occ[state] = occ.get(state, 0.0) + (t - t_prev)
            t_prev, state = t, s
        end = self.horizon if math.isfinite(self.horizon) else t_prev
        if end > t_prev:
            occ[state] = occ.get(state, 0.0) + (end - t_prev)
        return occ

    def to_csv(self) -> str:
        lines = ["time,state"]
        lines.append(f"{0.0!r},{' '.join(map(str, self.initial))}")
        for t, s in self.events:
            lines.append(f"{t!r},{' '.join(map(str, s))}")
        return "\n".join(lines) + "\n"


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; ``stream`` selects an independent trajectory."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, stream]))


def simulate(
    params: ZwParams,
    start: Sequence[int],
    horizon: float,
    seed: int,
    *,
    max_jumps: int | None = None,
    stream: int = 0,
) -> Trajectory:
    """Event-driven simulation of the jump chain up to ``horizon`` or ``max_jumps``."""
    rng = rng_for(seed, stream)
    state = tuple(start)
    traj = Trajectory(state, [], horizon, seed)
    cache: dict[PointState, tuple[list, np.ndarray, float]] = {}
    t = 0.0
    jumps = 0
    while max_jumps is None or jumps < max_jumps:
        if state not in cache:
            out = rates(params, state)
            r = np.array([float(x) for _, x in out])
            cache[state] = ([s for s, _ in out], np.cumsum(r), float(r.sum()))
        targets, cum, tot = cache[state]
        if tot <= 0:
            raise IntegrityError(f"zero total rate at {state}")
        t += rng.exponential(1.0 / tot)
        if t > horizon:
            break
        j = int(np.searchsorted(cum, rng.random() * tot, side="right"))
        state = targets[min(j, len(targets) - 1)]
        traj.events.append((t, state))
        jumps += 1
    if max_jumps is not None and jumps >= max_jumps:
        traj.horizon = t
    return traj


# -- semigroup ---------------------------------------------------------------


@dataclass
class SemigroupResult:
    vector: np.ndarray
    mass_defect: float
    poisson_error: float
    terms: int


def semigroup_apply(Q: GeneratorMatrix, t: float, v: np.ndarray, tol: float = 1e-12) -> SemigroupResult:
    """v e^{tQ} for a row measure ``v`` by uniformization on the box.

    ``mass_defect`` is the mass lost through the box boundary; ``poisson_error``
    bounds the neglected Poisson weight on both sides.
    """
    v = np.asarray(v, dtype=float)
    if t == 0:
        return SemigroupResult(v.copy(), 0.0, 0.0, 0)
    A = Q.to_sparse()
    lam = float(max(-d for d in Q.diagonal))
    P = (sparse.identity(A.shape[0], format="csr") + A / lam).T.tocsr()
    mu = lam * t
    k_hi = int(poisson.isf(tol / 2, mu)) + 1
    k_lo = max(0, int(poisson.ppf(tol / 2, mu)) - 1)
    ks = np.arange(k_lo, k_hi + 1)
    weights = poisson.pmf(ks, mu)
    err = float(poisson.cdf(k_lo - 1, mu) + poisson.sf(k_hi, mu)) if k_lo > 0 else float(poisson.sf(k_hi, mu))
    out = np.zeros_like(v)
    cur = v.copy()
    for k in range(k_hi + 1):
        if k >= k_lo:
            out += weights[k - k_lo] * cur
        cur = P @ cur
    return SemigroupResult(out, float(v.sum() - out.sum()), err, k_hi + 1)


# -- verification ------------------------------------------------------------


@dataclass
class BalanceReport:
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _rate_to(params: ZwParams, a: PointState, b: PointState) -> Fraction:
    return dict(rates(params, a)).get(tuple(b), Fraction(0))


def verify_detailed_balance(params: ZwParams, pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> BalanceReport:
    """M'(n) Q(n, n') == M'(n') Q(n', n) exactly for each pair of point states."""
    rep = BalanceReport(0)
    for a, b in pairs:
        a, b = tuple(a), tuple(b)
        rep.checked += 1
        if a == b:
            continue
        lhs = relative_weight(params, a) * _rate_to(params, a, b)
        rhs = relative_weight(params, b) * _rate_to(params, b, a)
        if lhs != rhs or lhs == 0:
            rep.failures.append((a, b, lhs, rhs))
    return rep


def random_moves(N: int, L: int, count: int, seed: int, interior: bool = True) -> list:
    """Random valid nearest-neighbour moves inside the box, reproducible by seed."""
    rng = rng_for(seed)
    lim = L - 1 if interior else L
    states = box_states(N, lim)
    out = []
    while len(out) < count:
        s = states[int(rng.integers(len(states)))]
        k = int(rng.integers(N))
        step = 1 if rng.random() < 0.5 else -1
        m = list(s)
        m[k] += step
        if vandermonde(m) != 0:
            out.append((s, tuple(m)))
    return out


@dataclass
class IntertwiningReport:
    N: int
    L: int
    rows_checked: int
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.rows_checked > 0 and not self.mismatches


def _sig_generator_row(params: ZwParams, sig: Signature) -> dict[Signature, Fraction]:
    row = generator_row(params, to_point_configuration(sig))
    return {from_point_configuration(s): r for s, r in row.items()}


def _link_row(sig: Signature) -> dict:
    return dict(link_one_step(sig))


def intertwining_rows(params: ZwParams, nu: Signature) -> tuple[dict, dict]:
    """Both sides of (Q_N Lambda)(nu, .) = (Lambda Q_{N-1})(nu, .), as sparse rows."""
    lhs: dict = {}
    for nb, q in _sig_generator_row(params, nu).items():
        for lam, p in _link_row(nb).items():
            lhs[lam] = lhs.get(lam, 0) + q * p
    rhs: dict = {}
    for lam, p in _link_row(nu).items():
        for mu, q in _sig_generator_row(params, lam).items():
            rhs[mu] = rhs.get(mu, 0) + p * q
    strip = lambda d: {k: v for k, v in d.items() if v != 0}  # noqa: E731
    return strip(lhs), strip(rhs)


def verify_intertwining(params: ZwParams, N: int, L: int) -> IntertwiningReport:
    """Generator-level intertwining on every interior state of the level-N box."""
    if N < 2:
        raise ValueError("intertwining needs N >= 2")
    rep = IntertwiningReport(N, L, 0)
    for n in box_states(N, L - 1):
        nu = from_point_configuration(n)
        lhs, rhs = intertwining_rows(params, nu)
        rep.rows_checked += 1
        if lhs != rhs:
            rep.mismatches.append((nu, lhs, rhs))
    return rep
