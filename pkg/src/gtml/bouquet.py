"""Young graph dimensions and links, GT+ links on padded diagrams, and the
large-level limit of GT+ links."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Sequence

from .gtcore import Signature, count_paths, weyl_dimension


class YoungDiagram(tuple):
    """Weakly decreasing tuple of positive row lengths; () is the empty diagram."""

    def __new__(cls, rows=()):
        rows = tuple(int(r) for r in rows)
        if any(r <= 0 for r in rows):
            raise ValueError(f"rows must be positive: {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"rows must be weakly decreasing: {rows}")
        return super().__new__(cls, rows)

    @property
    def size(self) -> int:
        return sum(self)

    def contains(self, other: YoungDiagram) -> bool:
        return len(other) <= len(self) and all(b <= a for a, b in zip(self, other))

    def corners(self) -> list[YoungDiagram]:
        """Diagrams obtained by removing one box."""
        out = []
        for i, r in enumerate(self):
            if i + 1 == len(self) or self[i + 1] < r:
                rows = list(self)
                rows[i] -= 1
                out.append(YoungDiagram(x for x in rows if x > 0))
        return out

    def padded(self, N: int) -> Signature:
        if len(self) > N:
            raise ValueError(f"{tuple(self)} has more than {N} rows")
        return Signature(tuple(self) + (0,) * (N - len(self)))

    def __repr__(self) -> str:
        return f"YoungDiagram({tuple(self)})"


def partitions(n: int, max_part: int | None = None) -> list[YoungDiagram]:
    """All diagrams of size n, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [YoungDiagram()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append(YoungDiagram((first,) + tuple(rest)))
    return out


@dataclass(frozen=True)
class ThomaConePoint:
    alpha: tuple = ()
    beta: tuple = ()
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "beta"):
            xs = tuple(Fraction(x) for x in getattr(self, name))
            if any(x < 0 for x in xs) or any(a < b for a, b in zip(xs, xs[1:])):
                raise ValueError(f"{name} must be weakly decreasing and nonnegative")
            object.__setattr__(self, name, xs)
        d = Fraction(self.delta)
        object.__setattr__(self, "delta", d)
        if sum(self.alpha) + sum(self.beta) > d:
            raise ValueError("sum(alpha) + sum(beta) exceeds delta")


@lru_cache(maxsize=None)
def skew_dim(lam: YoungDiagram, mu: YoungDiagram) -> int:
    """Number of add-a-box chains from mu up to lam."""
    lam, mu = YoungDiagram(lam), YoungDiagram(mu)
    if not lam.contains(mu):
        raise ValueError(f"{tuple(mu)} is not contained in {tuple(lam)}")
    if lam == mu:
        return 1
    return sum(skew_dim(c, mu) for c in lam.corners() if c.contains(mu))


def dim_young(lam: YoungDiagram) -> int:
    return skew_dim(YoungDiagram(lam), YoungDiagram())


def hook_length_dim(lam: YoungDiagram) -> int:
    """n! / prod of hook lengths (independent check of ``dim_young``)."""
    lam = YoungDiagram(lam)
    cols = [sum(1 for r in lam if r > j) for j in range(lam[0])] if lam else []
    hooks = prod((lam[i] - j) + (cols[j] - i) - 1 for i in range(len(lam)) for j in range(lam[i]))
    return factorial(lam.size) // hooks


def young_link(lam: YoungDiagram, mu: YoungDiagram) -> Fraction:
    """dim mu * dim lam/mu / dim lam, zero unless mu is inside lam."""
    lam, mu = YoungDiagram(lam), YoungDiagram(mu)
    if lam.size <= mu.size:
        raise ValueError("young_link needs |lam| > |mu|")
    if not lam.contains(mu):
        return Fraction(0)
    return Fraction(dim_young(mu) * skew_dim(lam, mu), dim_young(lam))


def relative_dim_young(lam: YoungDiagram, mu: YoungDiagram) -> Fraction:
    """l(l-1)...(l-m+1) dim lam/mu / dim lam."""
    lam, mu = YoungDiagram(lam), YoungDiagram(mu)
    l, m = lam.size, mu.size
    if l < m:
        raise ValueError("need |lam| >= |mu|")
    if not lam.contains(mu):
        return Fraction(0)
    falling = prod(range(l - m + 1, l + 1))
    return Fraction(falling * skew_dim(lam, mu), dim_young(lam))


def gt_plus_link(lam: YoungDiagram, N_from: int, mu: YoungDiagram, N: int) -> Fraction:
    """Entry of the GT link from level N_from down to level N at padded diagrams."""
    if N_from <= N:
        raise ValueError("need N_from > N")
    nu = YoungDiagram(lam).padded(N_from)
    kappa = YoungDiagram(mu).padded(N)
    # same entry as links.link_multi(nu, N)[kappa], without building the row
    return Fraction(weyl_dimension(kappa) * count_paths(kappa, nu), weyl_dimension(nu))


def binomial_hypothesis(lam: YoungDiagram, mu: YoungDiagram, ratio: Fraction) -> Fraction:
    """binom(l, m) p^m (1-p)^(l-m) dim mu dim lam/mu / dim lam with p = ratio.

    A conjectural closed form, used only as a diagnostic next to the limit.
    """
    lam, mu = YoungDiagram(lam), YoungDiagram(mu)
    if not lam.contains(mu):
        return Fraction(0)
    p = Fraction(ratio)
    l, m = lam.size, mu.size
    w = comb(l, m) * p**m * (1 - p) ** (l - m)
    return w * Fraction(dim_young(mu) * skew_dim(lam, mu), dim_young(lam))


@dataclass
class LimitReport:
    lam: YoungDiagram
    mu: YoungDiagram
    ratio: Fraction
    levels: list = field(default_factory=list)  # (N, N_from)
    values: list = field(default_factory=list)
    tolerance: float = 1e-2
    hypothesis: Fraction | None = None

    @property
    def realized_ratios(self) -> list[Fraction]:
        return [Fraction(n, m) for n, m in self.levels]

    @property
    def differences(self) -> list[float]:
        return [abs(float(b - a)) for a, b in zip(self.values, self.values[1:])]

    @property
    def last(self) -> Fraction:
        return self.values[-1]

    @property
    def extrapolated(self) -> float:
        """One Richardson step assuming an O(1/N) error."""
        if len(self.values) < 2:
            return float(self.values[-1])
        (n1, _), (n2, _) = self.levels[-2], self.levels[-1]
        v1, v2 = self.values[-2], self.values[-1]
        return float((n2 * v2 - n1 * v1) / (n2 - n1))

    @property
    def passed(self) -> bool:
        d = self.differences
        return bool(d) and d[-1] < self.tolerance


def yb_link_limit(
    lam: YoungDiagram,
    mu: YoungDiagram,
    ratio: Fraction,
    schedule: Sequence[int],
    *,
    tolerance: float = 1e-2,
    hypothesis: bool = False,
) -> LimitReport:
    """GT+ link values along N -> infinity with N_from = round(N / ratio)."""
    lam, mu = YoungDiagram(lam), YoungDiagram(mu)
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    if list(schedule) != sorted(set(schedule)):
        raise ValueError("schedule must be strictly increasing")
    rep = LimitReport(lam, mu, ratio, tolerance=tolerance)
    for N in schedule:
        N_from = round(N / ratio)
        if N_from <= N or len(lam) > N_from or len(mu) > N:
            raise ValueError(f"level N={N} too small for these diagrams")
        rep.levels.append((N, N_from))
        rep.values.append(gt_plus_link(lam, N_from, mu, N) if lam.contains(mu) else Fraction(0))
    if hypothesis:
        rep.hypothesis = binomial_hypothesis(lam, mu, ratio)
    return rep


@dataclass
class CompatibilityReport:
    lam: YoungDiagram
    mu: YoungDiagram
    lhs: float
    rhs: float
    truncation: int
    tolerance: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def yb_compatibility_check(
    ratios: tuple,
    lam: YoungDiagram,
    mu: YoungDiagram,
    truncation: int,
    *,
    schedule: Sequence[int] = (8, 16, 32),
    tolerance: float = 2e-2,
) -> CompatibilityReport:
    """Compare link(r''->r') * link(r'->r) with link(r''->r) at (lam, mu).

    ``ratios`` is (r, r', r'') with r < r' < r''; the intermediate sum runs
    over diagrams of size at most ``truncation``.
    """
    r, r1, r2 = (Fraction(x) for x in ratios)
    if not 0 < r < r1 < r2:
        raise ValueError("need 0 < r < r' < r''")
    lam, mu = YoungDiagram(lam), YoungDiagram(mu)

    def limit(a, b, ratio):
        if not a.contains(b):
            return 0.0
        return yb_link_limit(a, b, ratio, schedule).extrapolated

    lhs = 0.0
    for size in range(truncation + 1):
        for kappa in partitions(size):
            if lam.contains(kappa) and kappa.contains(mu):
                lhs += limit(lam, kappa, r1 / r2) * limit(kappa, mu, r / r1)
    rhs = limit(lam, mu, r / r2)
    return CompatibilityReport(lam, mu, lhs, rhs, truncation, tolerance)
