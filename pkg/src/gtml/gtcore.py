"""Signatures, interlacing and exact path counting in the Gelfand-Tsetlin graph."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import prod
from typing import Iterable, Iterator


class DimensionError(ValueError):
    """Raised when signature lengths do not fit the requested relation."""


class Signature(tuple):
    """Weakly decreasing tuple of integers; a vertex of the GT graph.

    The empty signature stands for the virtual level-0 vertex.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"signature parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def level(self) -> int:
        return len(self)

    def shift(self, c: int) -> Signature:
        return Signature(p + c for p in self)

    def __repr__(self) -> str:
        return f"Signature({tuple(self)!r})"

    def __str__(self) -> str:
        return ",".join(str(p) for p in self)


EMPTY = Signature(())


def parse_signature(text: str) -> Signature:
    text = text.strip().strip("()")
    if not text:
        return EMPTY
    return Signature(int(p) for p in text.split(","))


def interlaces(lower: Signature, upper: Signature) -> bool:
    """True iff ``lower`` interlaces ``upper`` (nu_i >= lambda_i >= nu_{i+1})."""
    if len(lower) != len(upper) - 1:
        raise DimensionError(
            f"interlacing needs lengths (N-1, N), got ({len(lower)}, {len(upper)})"
        )
    return all(upper[i] >= lower[i] >= upper[i + 1] for i in range(len(lower)))


def weyl_dimension(nu: Signature) -> int:
    """Dimension of the irreducible U(N) module with highest weight ``nu``."""
    n = len(nu)
    num = prod(nu[i] - nu[j] + j - i for i in range(n) for j in range(i + 1, n))
    den = prod(j - i for i in range(n) for j in range(i + 1, n))
    q, r = divmod(num, den)
    assert r == 0, "Weyl formula must divide exactly"
    return q


def enumerate_down(nu: Signature) -> list[Signature]:
    """All signatures of length N-1 interlacing ``nu``, in lexicographic order."""
    if len(nu) == 0:
        raise DimensionError("the virtual vertex has no lower neighbours")
    if len(nu) == 1:
        return [EMPTY]
    ranges = [range(nu[i + 1], nu[i] + 1) for i in range(len(nu) - 1)]
    return [Signature(p) for p in product(*ranges)]


def enumerate_up(lam: Signature, lo: int, hi: int) -> Iterator[Signature]:
    """Signatures of length N+1 above ``lam`` with all parts in [lo, hi]."""
    if len(lam) == 0:
        for k in range(lo, hi + 1):
            yield Signature((k,))
        return
    ranges = [range(lam[0], hi + 1)]
    ranges += [range(lam[i], lam[i - 1] + 1) for i in range(1, len(lam))]
    ranges.append(range(lo, lam[-1] + 1))
    for p in product(*ranges):
        yield Signature(p)


def _reaches(lam: Signature, kappa: Signature) -> bool:
    # a descending chain lam -> ... -> kappa exists iff lam_i >= kappa_i >= lam_{i+d}
    d = len(lam) - len(kappa)
    return all(lam[i] >= kappa[i] >= lam[i + d] for i in range(len(kappa)))


def count_paths(kappa: Signature, nu: Signature) -> int:
    """Number of interlacing chains kappa < ... < nu (Dim_{K,N})."""
    kappa, nu = Signature(kappa), Signature(nu)
    return _count_paths(kappa, nu)


@lru_cache(maxsize=65536)
def _count_paths(kappa: Signature, nu: Signature) -> int:
    K, N = len(kappa), len(nu)
    if K > N:
        raise ValueError(f"source level {K} exceeds target level {N}")
    if K == N:
        return int(kappa == nu)
    if not _reaches(nu, kappa):
        return 0
    # level-by-level DP downward from nu, keyed by signature
    layer = {nu: 1}
    for _ in range(N - K):
        nxt: dict[Signature, int] = {}
        for sig, cnt in layer.items():
            for lam in enumerate_down(sig):
                if _reaches(lam, kappa):
                    nxt[lam] = nxt.get(lam, 0) + cnt
        layer = nxt
    return layer.get(kappa, 0)


def gt_schemes(kappa: Signature, nu: Signature) -> Iterator[tuple[Signature, ...]]:
    """Yield every GT scheme (bottom row ``kappa``, top row ``nu``) by brute force."""
    K, N = len(kappa), len(nu)
    if K == N:
        if kappa == nu:
            yield (nu,)
        return

    def rec(chain: tuple[Signature, ...]):
        top = chain[0]
        if len(top) == K:
            if top == kappa:
                yield chain
            return
        for lam in enumerate_down(top):
            yield from rec((lam,) + chain)

    yield from rec((nu,))


def signatures(N: int, lo: int, hi: int) -> list[Signature]:
    """All signatures of length N with parts in [lo, hi], lexicographic."""
    if N == 0:
        return [EMPTY]
    out = []

    def rec(prefix: list[int], top: int):
        if len(prefix) == N:
            out.append(Signature(prefix))
            return
        for p in range(lo, top + 1):
            rec(prefix + [p], p)

    rec([], hi)
    return sorted(out)
