"""Finite elements of the representation ring R^U and the operator 𝔇.

An element is a dict from monomials to exact coefficients; a monomial is the
tuple of its indices sorted in decreasing order, so phi_2 phi_0^2 is (2, 0, 0).
Only finite elements are ever built. The infinite series inside the
second-order coefficients are generated over a finite index range, and
``apply_D`` asserts that everything beyond the requested window cancels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .gtcore import Signature, weyl_dimension
from .markov import rates, total_rate
from .zw import ZwParams, from_point_configuration, to_point_configuration


class IntegrityError(RuntimeError):
    def __init__(self, message: str, survivors: dict | None = None):
        super().__init__(message)
        self.survivors = survivors or {}


class NotInSpanError(ValueError):
    pass


Monomial = tuple


def _mono(indices) -> Monomial:
    return tuple(sorted(indices, reverse=True))


class RingElement(dict):
    """Finite linear combination of monomials in the phi_n, zero terms pruned."""

    def __init__(self, terms=None):
        super().__init__()
        for m, c in (terms or {}).items():
            if c:
                self[_mono(m)] = self.get(_mono(m), 0) + c
        for m in [m for m, c in self.items() if c == 0]:
            del self[m]

    @classmethod
    def phi(cls, n: int) -> RingElement:
        return cls({(n,): Fraction(1)})

    @property
    def degree(self) -> int:
        return max((len(m) for m in self), default=0)

    def indices(self) -> set[int]:
        return {i for m in self for i in m}

    def __add__(self, other: RingElement) -> RingElement:
        out = dict(self)
        for m, c in other.items():
            out[m] = out.get(m, 0) + c
        return RingElement(out)

    def __sub__(self, other: RingElement) -> RingElement:
        return self + other.scale(-1)

    def scale(self, c) -> RingElement:
        return RingElement({m: c * v for m, v in self.items()})

    def __mul__(self, other: RingElement) -> RingElement:
        out: dict = {}
        for m1, c1 in self.items():
            for m2, c2 in other.items():
                m = _mono(m1 + m2)
                out[m] = out.get(m, 0) + c1 * c2
        return RingElement(out)

    def derivative(self, n: int) -> RingElement:
        out: dict = {}
        for m, c in self.items():
            k = m.count(n)
            if k:
                rest = list(m)
                rest.remove(n)
                out[tuple(rest)] = out.get(tuple(rest), 0) + k * c
        return RingElement(out)

    def __repr__(self) -> str:
        if not self:
            return "0"
        parts = []
        for m in sorted(self):
            parts.append(f"{self[m]}*" + "*".join(f"phi[{i}]" for i in m))
        return " + ".join(parts)


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def character_element(nu: Signature) -> RingElement:
    """chi_nu = det[phi_{nu_i - i + j}], expanded over all N! permutations."""
    N = len(nu)
    terms: dict = {}
    for p in permutations(range(N)):
        m = _mono(nu[i] - i + p[i] for i in range(N))
        terms[m] = terms.get(m, 0) + _perm_sign(p)
    return RingElement({m: Fraction(c) for m, c in terms.items()})


# -- the operator ------------------------------------------------------------


def B_coefficient(params: ZwParams, n: int) -> RingElement:
    """First-order coefficient B_n (the only part that depends on parameters)."""
    z, w = params.z, params.w
    return RingElement(
        {
            (n + 1,): w.prod(n + 1),
            (n - 1,): z.prod(1 - n),
            (n,): -(z.prod(-n) + w.prod(n)),
        }
    )


def A_coefficient(n1: int, n2: int, lo: int, hi: int) -> RingElement:
    """A_{n1 n2} (n1 >= n2), keeping only monomials with both indices in [lo, hi]."""
    if n1 < n2:
        raise ValueError("A_{n1 n2} is defined for n1 >= n2")
    d = n1 - n2
    out: dict = {}

    def add(a, b, c):
        if lo <= a <= hi and lo <= b <= hi:
            m = _mono((a, b))
            out[m] = out.get(m, 0) + c

    p = 0
    # every term at step p has an index >= n1 + p and one <= n2 - p
    while n1 + p <= hi and n2 - p >= lo:
        add(n1 + p + 1, n2 - p, d + 2 * p + 1)
        add(n1 + p, n2 - p - 1, d + 2 * p + 1)
        if p >= 1:
            add(n1 + p, n2 - p, -2 * (d + 2 * p))
        p += 1
    add(n1, n2, -d)
    return RingElement({m: Fraction(c) for m, c in out.items()})


def _apply_D_raw(params: ZwParams, x: RingElement, lo: int, hi: int) -> RingElement:
    result = RingElement()
    idx = sorted(x.indices())
    for n in idx:
        dx = x.derivative(n)
        if dx:
            result = result + B_coefficient(params, n) * dx
    for i, a in enumerate(idx):
        da = x.derivative(a)
        for b in idx[: i + 1]:
            dab = da.derivative(b)
            if not dab:
                continue
            coeff = A_coefficient(a, b, lo, hi)
            result = result + (coeff * dab).scale(1 if a == b else 2)
    return result


@dataclass
class DResult:
    value: RingElement
    window: tuple[int, int]
    widened: int = 0


def apply_D(
    params: ZwParams,
    x: RingElement,
    window: tuple[int, int] | None = None,
    *,
    margin: int = 2,
    cap: int = 8,
) -> RingElement:
    """Apply 𝔇 to a finite element and return the finite remainder.

    The A-series are generated over ``window`` widened by ``margin``; any
    surviving monomial that touches an index outside ``window`` raises
    ``IntegrityError`` once the window has been widened up to ``cap``.
    """
    return apply_D_report(params, x, window, margin=margin, cap=cap).value


def apply_D_report(params, x, window=None, *, margin=2, cap=8) -> DResult:
    if not x:
        return DResult(RingElement(), window or (0, 0))
    idx = x.indices()
    if window is None:
        window = (min(idx) - 2, max(idx) + 2)
    lo0, hi0 = window
    last_survivors: dict = {}
    for extra in range(0, cap + 1):
        lo, hi = lo0 - extra, hi0 + extra
        raw = _apply_D_raw(params, x, lo - margin, hi + margin)
        survivors = {m: c for m, c in raw.items() if min(m) < lo or max(m) > hi}
        if not survivors:
            return DResult(raw, (lo, hi), extra)
        last_survivors = survivors
    raise IntegrityError(
        f"{len(last_survivors)} monomials survive outside window widened to ±{cap}",
        last_survivors,
    )


# -- characters --------------------------------------------------------------


def expand_in_characters(x: RingElement, N: int, max_steps: int = 100_000) -> dict[Signature, Fraction]:
    """Write a homogeneous degree-N element as a finite combination of chi_nu.

    Leading-term elimination: the lexicographically smallest monomial of chi_nu
    (indices sorted decreasingly) is the diagonal product prod phi_{nu_i}, and
    every other monomial of chi_nu is lexicographically larger. Elimination that
    drifts more than 2N beyond the index range of ``x`` cannot come back and is
    reported as not in the span.
    """
    rest = RingElement(x)
    if any(len(m) != N for m in rest):
        raise NotInSpanError(f"element is not homogeneous of degree {N}")
    out: dict[Signature, Fraction] = {}
    if not rest:
        return out
    idx = rest.indices()
    lo, hi = min(idx) - 2 * N, max(idx) + 2 * N
    for _ in range(max_steps):
        if not rest:
            return {k: out[k] for k in sorted(out) if out[k] != 0}
        lead = min(rest)
        if lead[0] > hi or lead[-1] < lo:
            raise NotInSpanError(f"elimination escaped the index range at {lead}")
        nu = Signature(lead)
        chi = character_element(nu)
        c = rest[lead] / chi[lead]
        out[nu] = out.get(nu, 0) + c
        rest = rest - chi.scale(c)
    raise NotInSpanError(f"elimination did not terminate; remainder has {len(rest)} terms")


def from_characters(coeffs: dict[Signature, Fraction]) -> RingElement:
    out = RingElement()
    for nu, c in coeffs.items():
        out = out + character_element(nu).scale(c)
    return out


@dataclass
class ConsistencyReport:
    signature: Signature
    lhs: dict = field(default_factory=dict)
    rhs: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def generator_column(params: ZwParams, nu: Signature) -> dict[Signature, Fraction]:
    """mu -> Q(mu, nu) Dim mu / Dim nu over mu with Q(mu, nu) != 0 (incl. mu = nu)."""
    n = to_point_configuration(nu)
    d = weyl_dimension(nu)
    col: dict[Signature, Fraction] = {}
    for k in range(len(n)):
        for step in (1, -1):
            m = list(n)
            m[k] += step
            if len(set(m)) < len(m):
                continue
            q = dict(rates(params, tuple(m))).get(n, Fraction(0))
            if q:
                mu = from_point_configuration(m)
                col[mu] = q * Fraction(weyl_dimension(mu), d)
    col[Signature(nu)] = -total_rate(params, n)
    return {k: col[k] for k in sorted(col) if col[k] != 0}


def verify_generator_consistency(params: ZwParams, nu: Signature) -> ConsistencyReport:
    """𝔇 chi_nu against sum_mu Q(mu, nu) (Dim mu / Dim nu) chi_mu, both exact."""
    nu = Signature(nu)
    image = apply_D(params, character_element(nu))
    lhs = expand_in_characters(image, len(nu))
    return ConsistencyReport(nu, lhs, generator_column(params, nu))
