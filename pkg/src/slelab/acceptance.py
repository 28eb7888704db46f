"""Exit criteria of the package, each runnable on its own.

Every ``criterion_*`` function returns a :class:`Criterion` with the verdict,
a one-line detail and the wall time against its budget.  The pytest module
``tests/test_acceptance.py`` and ``slelab selftest`` both drive these.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    PBWVector,
    VermaParams,
    act_raising,
    find_singular_vectors,
    kac_labels,
    kappa_parameterization,
    minimal_model_c,
    minimal_model_weight,
    submodule_reduce,
)
from .bridge import solve_kappa_null, solve_kappa_singular
from .loewner import (
    DrivePath,
    FlowConfig,
    conjugation_check,
    flow_displacement,
    flow_forward_many,
    inverse_many,
    principal_root,
    sqrt_h,
    trace_sample,
)
from .stochastic import (
    backward_law_experiment,
    sample_brownian,
    sample_brownian_batch,
    scale_invariance_experiment,
    stationarity_experiment,
)


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = float("inf")

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.budget

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (f"[{verdict}] {self.number:2d}. {self.name}: {self.detail} "
                f"({self.seconds:.2f}s / budget {self.budget:g}s)")


def _timed(number, name, budget):
    def wrap(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return Criterion(number, name, bool(passed), detail, time.perf_counter() - t0, budget)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@_timed(1, "level-2 correspondence", 1.0)
def criterion_level2(seed: int = 2024, count: int = 20):
    rng = random.Random(seed)
    kappas = set()
    while len(kappas) < count:
        k = Fraction(rng.randint(1, 2000), rng.randint(1, 100))
        if 0 < k <= 20:
            kappas.add(k)
    bad = []
    for k in sorted(kappas):
        c, delta = kappa_parameterization(k)
        params = VermaParams(c, delta)
        v = PBWVector(2, {(2,): 1, (1, 1): -k / 4}, params)
        if not (act_raising(v, 1).is_zero() and act_raising(v, 2).is_zero()):
            bad.append(k)
    return not bad, f"{count} kappa values, failures: {[str(k) for k in bad]}"


YANG_LEE_LEVEL4 = [Fraction(1), Fraction(5, 27), Fraction(-5, 3), Fraction(125, 27), Fraction(-125, 108)]


@_timed(2, "Yang-Lee level-4 singular vector", 1.0)
def criterion_yang_lee_singular():
    vecs = find_singular_vectors(4, VermaParams(Fraction(-22, 5), 0))
    if len(vecs) != 1:
        return False, f"expected one vector, got {len(vecs)}"
    got = [cf.constant_value() for cf in vecs[0].coefficients()]
    return got == YANG_LEE_LEVEL4, "coefficients " + ", ".join(str(x) for x in got)


@_timed(3, "null vector (L_-4 - 5/3 L_-2^2)|0>", 1.0)
def criterion_null_vector():
    params = VermaParams(Fraction(-22, 5), 0)
    gen1 = PBWVector(1, {(1,): 1}, params)
    gen4 = PBWVector.from_coefficients(4, YANG_LEE_LEVEL4, params)
    v = PBWVector(4, {(4,): 1, (2, 2): Fraction(-5, 3)}, params)
    res = submodule_reduce(v, [gen1, gen4])
    return res.is_zero(), f"residue {res}"


@_timed(4, "kappa solver", 5.0)
def criterion_kappa_solver():
    yl = solve_kappa_null(2, 2, 5, 2, 1, 1)
    s1 = solve_kappa_null(2, 1, 5, 2, 1, 1)
    singular_empty = all(solve_kappa_singular(n, s).is_empty for n in (2, 3) for s in (1, 2))
    ok = (yl.roots == [Fraction(40)] and not s1.nonnegative_roots and singular_empty)
    return ok, (f"s=2 roots {[str(k) for k in yl.roots]}, s=1 roots {[str(k) for k in s1.roots]}, "
                f"n=2,3 singular empty: {singular_empty}")


@_timed(5, "minimal-model tables", 1.0)
def criterion_minimal_models():
    ok = minimal_model_c(5, 2) == Fraction(-22, 5)
    d12 = minimal_model_weight(5, 2, 1, 2)
    ok &= d12 == Fraction(-1, 5)
    ok &= kappa_parameterization(10)[1] == d12
    sym = all(
        minimal_model_weight(p, pp, r, s) == minimal_model_weight(p, pp, pp - r, p - s)
        for p, pp in ((5, 2), (4, 3)) for r, s in kac_labels(p, pp)
    )
    return ok and sym, f"c(5,2)={minimal_model_c(5, 2)}, Δ12={d12}, Kac symmetry {sym}"


def _wedge_points(n):
    radii = (0.5, 1.0, 1.5, 2.0, 3.0)
    fracs = (0.2, 0.4, 0.65, 0.85)
    return np.array([r * np.exp(1j * np.pi / n * f) for r in radii for f in fracs])


@_timed(6, "zero-drive closed forms", 1.0)
def criterion_zero_drive(dt: float = 1e-3, t: float = 1.0):
    worst = {"g": 0.0, "trace": 0.0, "tau": 0.0}
    drive = DrivePath.zero(t, dt)
    for n in (1, 2, 3):
        cfg = FlowConfig(n=n, dt=dt)
        z = _wedge_points(n)
        res = flow_forward_many(z, drive, cfg, t)
        # the 2n-th root taken on the branch that lands in the wedge
        exact = principal_root(sqrt_h(z ** (2 * n) + 4 * n * t), n)
        if not res.alive.all():
            return False, f"off-ray point swallowed at n={n}"
        worst["g"] = max(worst["g"], np.abs(res.value - exact).max())
        times = np.array([0.25, 0.5, 1.0])
        tr = trace_sample(drive, cfg, times)
        tip = (4 * n * times) ** (1 / (2 * n)) * np.exp(1j * np.pi / (2 * n))
        worst["trace"] = max(worst["trace"], np.abs(tr.points - tip).max())
        radii = np.array([0.3, 0.6, 0.9, 1.1, 1.3])
        radii = radii[radii ** (2 * n) / (4 * n) <= t]
        on_ray = radii * np.exp(1j * np.pi / (2 * n))
        tau = flow_forward_many(on_ray, drive, cfg, t).tau
        worst["tau"] = max(worst["tau"], np.abs(tau - radii ** (2 * n) / (4 * n)).max())
    ok = all(v <= 1e-9 for v in worst.values())
    return ok, ", ".join(f"max {k} err {v:.2e}" for k, v in worst.items())


CONJ_POINTS = tuple(np.sqrt(np.array([2j, 1 + 2.5j, -1 + 2.5j, 3j])))


@_timed(7, "conjugation oracle", 60.0)
def criterion_conjugation(seeds=range(10), kappa: float = 2.0, dt: float = 1e-4, t: float = 0.5):
    n = 2
    cfg = FlowConfig(n=n, dt=dt)
    worst = 0.0
    for seed in seeds:
        base = sample_brownian(n * t, n * dt, seed, kappa)
        for z in CONJ_POINTS:
            assert (z * z).imag >= 0.5
            lhs, rhs, gap = conjugation_check(z, base, cfg, t)
            if gap is None:
                return False, f"swallowed at seed {seed}, z {z}"
            worst = max(worst, gap)
    return worst <= 1e-6, f"max pathwise gap {worst:.2e} over {len(list(seeds))} paths"


@_timed(8, "hydrodynamic normalization", 60.0)
def criterion_hydrodynamic(seed: int = 0, kappa: float = 2.0, dt: float = 1e-4, t: float = 1.0):
    errs = {}
    drives = {"zero": DrivePath.zero(t, dt), "brownian": sample_brownian(t, dt, seed, kappa)}
    for n in (1, 2):
        cfg = FlowConfig(n=n, dt=dt)
        z = 1e3 * np.exp(1j * np.pi / (2 * n))
        for name, drive in drives.items():
            dz = flow_displacement(z, drive, cfg, t)
            errs[(n, name)] = abs(dz * z ** (2 * n - 1) - 2 * t) / (2 * t)
    worst = max(errs.values())
    return worst <= 1e-3, ", ".join(f"n={n} {d}: {e:.1e}" for (n, d), e in errs.items())


STAT_CASES = (
    ("scale-invariance n=1", lambda seed: scale_invariance_experiment(1, 2.0, 4.0, 2j, 0.25, 2000, seed)),
    ("scale-invariance n=2", lambda seed: scale_invariance_experiment(
        2, 2.0, 2.0, 1.5 * np.exp(1j * np.pi / 4), 0.2, 2000, seed)),
    ("stationarity n=1", lambda seed: stationarity_experiment(1, 2.0, 0.1, 0.35, 2j, 2000, seed)),
    ("stationarity n=2", lambda seed: stationarity_experiment(
        2, 2.0, 0.1, 0.3, 1.5 * np.exp(1j * np.pi / 4), 2000, seed)),
    ("backward-law n=1", lambda seed: backward_law_experiment(1, 2.0, 0.25, 2j, 2000, seed)),
    ("backward-law n=2", lambda seed: backward_law_experiment(
        2, 2.0, 0.2, 1.5 * np.exp(1j * np.pi / 4), 2000, seed)),
)


@_timed(9, "statistical laws", 900.0)
def criterion_statistical_laws(seeds=range(10), required: int = 9):
    summary = []
    ok = True
    for name, run in STAT_CASES:
        passes = 0
        max_swallow = 0.0
        for seed in seeds:
            rep = run(seed)
            max_swallow = max(max_swallow, rep.swallow_fraction)
            passes += rep.status == "pass"
        case_ok = passes >= required and max_swallow < 0.05
        ok &= case_ok
        summary.append(f"{name} {passes}/{len(list(seeds))}")
    return ok, "; ".join(summary)


@_timed(10, "Brownian normalization", 60.0)
def criterion_brownian(seed: int = 7, kappa: float = 2.0, N: int = 10_000):
    dt = 0.1
    batch = sample_brownian_batch(1.0, dt, seed, kappa, N)
    lines = []
    ok = True
    for t, s in ((0.3, 0.7), (0.5, 0.5), (0.2, 0.9)):
        prod = batch.value(t) * batch.value(s)
        mean = prod.mean()
        se = prod.std(ddof=1) / np.sqrt(N)
        target = kappa * min(t, s)
        ok &= abs(mean - target) <= 3 * se
        lines.append(f"E[Y{t}Y{s}]={mean:.4f} vs {target:.2f} (3SE {3 * se:.4f})")
    return ok, "; ".join(lines)


@_timed(11, "round trip and determinism", 60.0)
def criterion_roundtrip(seed: int = 3, kappa: float = 2.0, dt: float = 1e-4):
    worst = 0.0
    for n in (1, 2):
        cfg = FlowConfig(n=n, dt=dt)
        drive = sample_brownian(1.0, dt, seed, kappa)
        # Im(z**n) >= 0.5 and away from the hull
        z = np.array([r * np.exp(1j * np.pi / (2 * n) * f) for r in (1.5, 2.5) for f in (0.6, 1.0, 1.4)])
        for t in (0.5, 1.0):
            fwd = flow_forward_many(z, drive, cfg, t)
            if not fwd.alive.all():
                return False, f"forward flow swallowed a test point (n={n}, t={t})"
            back = inverse_many(fwd.value, drive, cfg, t)
            worst = max(worst, np.abs(back - z).max())
    cert1 = _certificate_bytes()
    cert2 = _certificate_bytes()
    rep1 = backward_law_experiment(2, 2.0, 0.05, 1.5 * np.exp(1j * np.pi / 4), 200, 11).to_json()
    rep2 = backward_law_experiment(2, 2.0, 0.05, 1.5 * np.exp(1j * np.pi / 4), 200, 11).to_json()
    same = cert1 == cert2 and rep1 == rep2
    return worst <= 1e-8 and same, f"round-trip max {worst:.1e}; byte-identical reruns: {same}"


def _certificate_bytes() -> bytes:
    import json

    return json.dumps(solve_kappa_null(2, 2, 5, 2, 1, 1).to_dict(), sort_keys=True).encode()


ALL = (
    criterion_level2,
    criterion_yang_lee_singular,
    criterion_null_vector,
    criterion_kappa_solver,
    criterion_minimal_models,
    criterion_zero_drive,
    criterion_conjugation,
    criterion_hydrodynamic,
    criterion_statistical_laws,
    criterion_brownian,
    criterion_roundtrip,
)


def run_all(skip_slow: bool = False, echo=print) -> list:
    out = []
    for crit in ALL:
        if skip_slow and crit is criterion_statistical_laws:
            continue
        res = crit()
        if echo:
            echo(res.line())
        out.append(res)
    return out
