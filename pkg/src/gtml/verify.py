"""Verification suites: batteries of exact or toleranced checks behind `gtml verify`.

Each suite returns a ``VerificationReport``. Cases run in a thread pool whose
size comes from ``GTML_THREADS`` (default: machine parallelism); the report
lists cases in a fixed order, so output does not depend on scheduling.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import boundary, bouquet, links, markov, repring, zw
from .gtcore import EMPTY, count_paths, signatures, weyl_dimension

THREADS_ENV = "GTML_THREADS"

PARAM_SETS = {
    "A": zw.ZwParams.from_values(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
    "C": zw.ZwParams.from_values((Fraction(1, 2), 1), (Fraction(1, 2), -1), Fraction(1, 4), Fraction(1, 4)),
}

THM3A_POINTS = (Fraction(1, 3), Fraction(7, 2), Fraction(13, 5), Fraction(29, 7), Fraction(9, 11))


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        n = int(raw)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer")
        return n
    return os.cpu_count() or 1


@dataclass
class Case:
    id: str
    inputs: dict
    expected: object
    got: object
    passed: bool
    residual: float | None = None

    def as_dict(self) -> dict:
        d = {"id": self.id, "inputs": self.inputs, "expected": self.expected, "got": self.got, "pass": self.passed}
        if self.residual is not None:
            d["residual"] = self.residual
        return d


@dataclass
class VerificationReport:
    suite: str
    cases: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(c.passed for c in self.cases)

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    def as_dict(self) -> dict:
        # wall time stays out so identical runs serialize identically
        return {
            "suite": self.suite,
            "pass": self.passed,
            "cases": [c.as_dict() for c in self.cases],
        }


def _run(tasks: list[Callable[[], Case | list[Case]]]) -> list[Case]:
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        results = list(pool.map(lambda f: f(), tasks))
    out: list[Case] = []
    for r in results:
        out.extend(r if isinstance(r, list) else [r])
    return out


def _params(opts: dict) -> dict[str, zw.ZwParams]:
    p = opts.get("params")
    return {"given": p} if p is not None else dict(PARAM_SETS)


# -- suites ------------------------------------------------------------------


def suite_dims(opts: dict) -> list:
    max_N, lo, hi = opts.get("max_N", 4), opts.get("lo", 0), opts.get("hi", 3)

    def case(nu):
        def f():
            w, c = weyl_dimension(nu), count_paths(EMPTY, nu)
            return Case(f"dims/{nu}", {"signature": nu}, w, c, w == c)

        return f

    return [case(nu) for N in range(1, max_N + 1) for nu in signatures(N, lo, hi)]


def suite_thm3a(opts: dict) -> list:
    max_N, lo, hi = opts.get("max_N", 4), opts.get("lo", -2), opts.get("hi", 2)
    points = opts.get("points", THM3A_POINTS)

    def case(nu):
        def f():
            rep = links.verify_theorem_3A(nu, points)
            bad = [p[0] for p in rep.points if not p[3]]
            return Case(
                f"thm3a/{nu}",
                {"signature": nu, "points": list(points)},
                {"failing_points": []},
                {"failing_points": bad, "skipped": rep.skipped},
                rep.passed,
            )

        return f

    return [case(nu) for N in range(1, max_N + 1) for nu in signatures(N, lo, hi)]


def suite_links(opts: dict) -> list:
    max_N, lo, hi = opts.get("max_N", 4), opts.get("lo", -2), opts.get("hi", 2)

    def case(nu):
        def f():
            out = []
            total = links.link_one_step(nu).total()
            out.append(Case(f"links/{nu}/sum", {"signature": nu}, Fraction(1), total, total == 1))
            for K in range(1, len(nu)):
                a, b = links.link_multi(nu, K), links.iterate_links(nu, K)
                out.append(
                    Case(f"links/{nu}/K{K}", {"signature": nu, "K": K}, len(b), len(a), a.entries == b.entries)
                )
            return out

        return f

    return [case(nu) for N in range(1, max_N + 1) for nu in signatures(N, lo, hi)]


def suite_dougall(opts: dict) -> list:
    given = opts.get("params")
    cut = opts.get("cut", 500)
    if given is not None:
        runs = [("given", given, opts.get("tolerance", 1e-8))]
    else:
        runs = [("A", PARAM_SETS["A"], 1e-8), ("C", PARAM_SETS["C"], 1e-6)]

    def case(name, p, tol):
        def f():
            rep = zw.dougall_check(p, cut)
            return Case(
                f"dougall/{name}",
                {"params": str(p), "cut": cut, "tolerance": tol},
                rep.rhs,
                rep.lhs,
                rep.residual <= tol,
                rep.residual,
            )

        return f

    return [case(*r) for r in runs]


def suite_coherency(opts: dict) -> list:
    eps = opts.get("eps", 1e-8)
    levels = opts.get("levels", (2, 3))
    tol = {2: 1e-6, 3: 1e-5}

    def case(name, p, N):
        def f():
            t = opts.get("tolerance", tol.get(N, 1e-5))
            rep = zw.verify_coherency(p, N, eps, t)
            return Case(
                f"coherency/{name}/N{N}",
                {"params": str(p), "N": N, "eps": eps, "box": rep.box, "tolerance": t},
                0.0,
                rep.tv,
                rep.passed,
                rep.tv,
            )

        return f

    return [case(n, p, N) for n, p in _params(opts).items() for N in levels]


def suite_balance(opts: dict) -> list:
    count, box, seed = opts.get("pairs", 50), opts.get("box", 8), opts.get("seed", 0)
    levels = opts.get("levels", (1, 2, 3))

    def case(name, p, N):
        def f():
            moves = markov.random_moves(N, box, count, seed)
            rep = markov.verify_detailed_balance(p, moves)
            return Case(
                f"balance/{name}/N{N}",
                {"params": str(p), "N": N, "moves": count, "seed": seed},
                [],
                [[list(a), list(b)] for a, b, *_ in rep.failures],
                rep.passed and rep.checked >= count,
            )

        return f

    return [case(n, p, N) for n, p in _params(opts).items() for N in levels]


def suite_intertwine(opts: dict) -> list:
    box = opts.get("box", 4)
    levels = opts.get("levels", (2, 3))

    def case(name, p, N):
        def f():
            rep = markov.verify_intertwining(p, N, box)
            return Case(
                f"intertwine/{name}/N{N}",
                {"params": str(p), "N": N, "box": box},
                {"rows": rep.rows_checked, "mismatches": 0},
                {"rows": rep.rows_checked, "mismatches": len(rep.mismatches)},
                rep.passed,
            )

        return f

    return [case(n, p, N) for n, p in _params(opts).items() for N in levels]


def stationary_on_box(p: zw.ZwParams, N: int, L: int) -> tuple[list, np.ndarray]:
    states = markov.box_states(N, L)
    w = np.array([float(zw.relative_weight(p, s)) for s in states])
    return states, w / w.sum()


def semigroup_case(p: zw.ZwParams, N: int, L: int, t: float) -> dict:
    Q = markov.generator_matrix(p, N, L)
    _, m = stationary_on_box(p, N, L)
    res = markov.semigroup_apply(Q, t, m)
    tv = 0.5 * float(np.abs(res.vector - m).sum())
    return {"tv": tv, "leakage": res.mass_defect, "poisson_error": res.poisson_error}


def suite_semigroup(opts: dict) -> list:
    box, t = opts.get("box", 8), opts.get("time", 1.0)
    levels = opts.get("levels", (1, 2))

    def case(name, p, N):
        def f():
            r = semigroup_case(p, N, box, t)
            bound = r["leakage"] + 1e-6
            return Case(
                f"semigroup/{name}/N{N}",
                {"params": str(p), "N": N, "box": box, "t": t},
                {"tv_at_most": bound},
                r,
                r["tv"] <= bound,
                r["tv"],
            )

        return f

    return [case(n, p, N) for n, p in _params(opts).items() for N in levels]


def occupation_tv(p: zw.ZwParams, traj: markov.Trajectory) -> float:
    occ = traj.occupation()
    total = sum(occ.values())
    meas = zw.zw_measure(p, 1)
    pi = {int(s[0]): float(m) for s, m in zip(meas.states, meas.masses)}
    seen = 0.0
    diff = 0.0
    for s, t in occ.items():
        q = pi.get(s[0], 0.0)
        seen += q
        diff += abs(t / total - q)
    return 0.5 * (diff + max(0.0, 1.0 - seen))


def suite_simulation(opts: dict) -> list:
    p = opts.get("params") or PARAM_SETS["A"]
    seed, jumps = opts.get("seed", 12345), opts.get("jumps", 100_000)

    def run():
        return markov.simulate(p, (0,), math.inf, seed, max_jumps=jumps)

    first, second = run(), run()
    tv = occupation_tv(p, first)
    same = first.to_csv() == second.to_csv()
    return [
        lambda: Case("simulation/occupation", {"params": str(p), "jumps": jumps, "seed": seed}, {"tv_at_most": 0.05}, tv, tv <= 0.05, tv),
        lambda: Case("simulation/reproducible", {"seed": seed}, True, same, same),
    ]


BETA_POINTS = [
    boundary.OmegaPoint(beta_plus=(Fraction(1, 2),)),
    boundary.OmegaPoint(beta_plus=(Fraction(1, 2), Fraction(1, 3))),
    boundary.OmegaPoint(beta_plus=(Fraction(2, 3), Fraction(2, 3))),
    boundary.OmegaPoint(beta_plus=(Fraction(3, 4), Fraction(1, 5)), beta_minus=(Fraction(1, 4),)),
]


def _omega_label(o: boundary.OmegaPoint) -> str:
    parts = []
    for name in ("alpha_plus", "alpha_minus", "beta_plus", "beta_minus"):
        v = getattr(o, name)
        if v:
            parts.append(f"{name}=" + ",".join(map(str, v)))
    for name in ("gamma_plus", "gamma_minus"):
        if getattr(o, name):
            parts.append(f"{name}={getattr(o, name)}")
    return ";".join(parts) or "trivial"


def suite_boundary(opts: dict) -> list:
    max_N = opts.get("max_N", 3)
    tol = opts.get("tolerance", 1e-10)

    def schur(o, N):
        def f():
            row = boundary.link_infinity(o, N)
            oracle = boundary.schur_oracle(o, N)
            total = row.total()
            return [
                Case(f"boundary/schur/{_omega_label(o)}/N{N}", {"omega": _omega_label(o), "N": N}, len(oracle), len(row), row.entries == oracle),
                Case(f"boundary/sum/{_omega_label(o)}/N{N}", {"omega": _omega_label(o), "N": N}, Fraction(1), total, total == 1 and row.complete),
            ]

        return f

    def coherent(o, N, K):
        def f():
            pushed: dict = {}
            for nu, m in boundary.link_infinity(o, N):
                for kappa, q in links.link_multi(nu, K):
                    pushed[kappa] = pushed.get(kappa, 0) + m * q
            pushed = {k: v for k, v in pushed.items() if v}
            direct = boundary.link_infinity(o, K).entries
            return Case(f"boundary/coherent/{_omega_label(o)}/N{N}K{K}", {"omega": _omega_label(o), "N": N, "K": K}, len(direct), len(pushed), pushed == direct)

        return f

    def methods(o):
        def f():
            window = (-6, 6)
            a = boundary.laurent_coeffs(o, window, "exact")
            b = boundary.laurent_coeffs(o, window, "numeric")
            err = max(abs(float(a[n]) - b[n]) for n in range(window[0], window[1] + 1))
            return Case(f"boundary/methods/{_omega_label(o)}", {"omega": _omega_label(o)}, {"max_abs_at_most": 1e-10}, err, err <= 1e-10, err)

        return f

    def poisson(g, N):
        def f():
            o = boundary.OmegaPoint(gamma_plus=g)
            row = boundary.link_infinity(o, N)
            err = max(abs(v - boundary.poisson_oracle(g, N, nu)) for nu, v in row)
            ok = err <= tol and row.residual <= tol
            return Case(f"boundary/poisson/{g}/N{N}", {"gamma_plus": g, "N": N}, {"max_abs_at_most": tol}, {"max_abs": err, "residual": row.residual}, ok, err)

        return f

    tasks = [schur(o, N) for o in BETA_POINTS for N in range(1, max_N + 1)]
    tasks += [coherent(o, N, K) for o in BETA_POINTS for N in range(2, max_N + 1) for K in range(1, N)]
    tasks += [methods(o) for o in BETA_POINTS]
    tasks += [poisson(g, N) for g in (Fraction(1), Fraction(1, 2)) for N in range(1, max_N + 1)]
    return tasks


def suite_repring(opts: dict) -> list:
    def case(name, p, nu):
        def f():
            rep = repring.verify_generator_consistency(p, nu)
            return Case(f"repring/{name}/{nu}", {"params": str(p), "signature": nu}, rep.rhs, rep.lhs, rep.passed)

        return f

    sigs = signatures(1, -5, 5) + signatures(2, -2, 2)
    return [case(n, p, nu) for n, p in _params(opts).items() for nu in sigs]


def suite_bouquet(opts: dict) -> list:
    Y = bouquet.YoungDiagram
    half = Fraction(1, 2)

    def constant():
        rep = bouquet.yb_link_limit(Y((1,)), Y((1,)), half, (2, 4, 8, 16))
        ok = all(v == half for v in rep.values)
        return Case("bouquet/limit/(1)->(1)", {"ratio": half, "schedule": [2, 4, 8, 16]}, [half] * 4, rep.values, ok)

    def converging():
        sched = opts.get("schedule", (5, 10, 20, 40))
        rep = bouquet.yb_link_limit(Y((2, 1)), Y((1,)), half, sched, tolerance=1e-2)
        d = rep.differences[-1]
        return Case(
            "bouquet/limit/(2,1)->(1)",
            {"ratio": half, "schedule": list(sched)},
            {"last_difference_below": 1e-2},
            {"values": rep.values, "extrapolated": rep.extrapolated},
            rep.passed,
            d,
        )

    def stochastic():
        bad = []
        for n in range(1, 7):
            for lam in bouquet.partitions(n):
                for m in range(n):
                    s = sum((bouquet.young_link(lam, mu) for mu in bouquet.partitions(m)), Fraction(0))
                    if s != 1:
                        bad.append([list(lam), m])
        return Case("bouquet/young_link/stochastic", {"max_size": 6}, [], bad, not bad)

    def hooks():
        bad = [list(l) for n in range(9) for l in bouquet.partitions(n) if bouquet.dim_young(l) != bouquet.hook_length_dim(l)]
        return Case("bouquet/dim/hook_length", {"max_size": 8}, [], bad, not bad)

    def compat(mu):
        def f():
            rep = bouquet.yb_compatibility_check((1, 2, 4), Y((1,)), Y(mu), 1)
            return Case(f"bouquet/compatibility/(1)->{tuple(mu)}", {"ratios": [1, 2, 4]}, rep.rhs, rep.lhs, rep.passed, rep.residual)

        return f

    return [constant, converging, stochastic, hooks, compat(()), compat((1,))]


SUITES: dict[str, Callable[[dict], list]] = {
    "dims": suite_dims,
    "thm3a": suite_thm3a,
    "links": suite_links,
    "dougall": suite_dougall,
    "coherency": suite_coherency,
    "balance": suite_balance,
    "intertwine": suite_intertwine,
    "semigroup": suite_semigroup,
    "simulation": suite_simulation,
    "boundary": suite_boundary,
    "repring": suite_repring,
    "bouquet": suite_bouquet,
}


def verify_suite(name: str, opts: dict | None = None) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    opts = {k: v for k, v in (opts or {}).items() if v is not None}
    start = time.perf_counter()
    cases = _run(SUITES[name](opts))
    return VerificationReport(name, cases, time.perf_counter() - start)
