"""Seeded Brownian drives and law-equality experiments.

Stream derivation: sample ``i`` of master seed ``m`` on stream ``tag`` reads
a Philox generator keyed by ``SeedSequence(m, spawn_key=(tag, i, side))``
where ``side`` is 0 for ``t >= 0`` and 1 for ``t < 0``.  Normal variates
are inverse-CDF transforms of 53-bit uniforms, so nothing depends on
rejection sampling.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats
from scipy.special import ndtri

from .loewner import (
    DrivePath,
    FlowConfig,
    _forward_w,
    _reverse_w,
    backward_many,
    in_wedge,
    ipow,
    principal_root,
    shifted_flow_many,
)

STREAM_A = 0
STREAM_B = 1
P_THRESHOLD = 0.01
MAX_SWALLOW_FRACTION = 0.05


def _normals(master: int, key: tuple, size: int) -> np.ndarray:
    ss = np.random.SeedSequence(int(master), spawn_key=key)
    rng = np.random.Generator(np.random.Philox(ss))
    u = (rng.integers(0, 2**53, size=size, dtype=np.uint64).astype(float) + 0.5) / 2.0**53
    return ndtri(u)


def _one_side(master, tag, index, side, k, dt, kappa):
    if kappa == 0 or k == 0:
        return np.zeros(k + 1)
    inc = np.sqrt(kappa * dt) * _normals(master, (tag, index, side), k)
    return np.concatenate(([0.0], np.cumsum(inc)))


def sample_brownian(T: float, dt: float, seed: int, kappa: float,
                    two_sided: bool = False, index: int = 0, stream: int = STREAM_A) -> DrivePath:
    """``sqrt(kappa) B`` sampled on ``[0, T]`` (or ``[-T, T]``)."""
    if T <= 0 or dt <= 0 or kappa < 0:
        raise ValueError("need T > 0, dt > 0, kappa >= 0")
    k = int(round(T / dt))
    if abs(k * dt - T) > 1e-9 * max(1.0, T):
        raise ValueError("T must be a multiple of dt")
    pos = _one_side(seed, stream, index, 0, k, dt, kappa)
    if not two_sided:
        return DrivePath(0.0, dt, pos, kappa)
    neg = _one_side(seed, stream, index, 1, k, dt, kappa)
    return DrivePath(-k * dt, dt, np.concatenate((neg[:0:-1], pos)), kappa)


def sample_brownian_batch(T: float, dt: float, seed: int, kappa: float, N: int,
                          two_sided: bool = False, stream: int = STREAM_A) -> DrivePath:
    """``N`` independent paths as one batched :class:`DrivePath`."""
    paths = [sample_brownian(T, dt, seed, kappa, two_sided, i, stream).samples for i in range(N)]
    t0 = -int(round(T / dt)) * dt if two_sided else 0.0
    return DrivePath(t0, dt, np.stack(paths), kappa)


# KS ------------------------------------------------------------------------------

@dataclass(frozen=True)
class TestReport:
    statistic: float
    p_value: float
    n1: int
    n2: int
    threshold: float = P_THRESHOLD

    __test__ = False  # not a pytest class

    @property
    def passed(self) -> bool:
        return self.p_value > self.threshold


def ks_two_sample(xs, ys, threshold: float = P_THRESHOLD) -> TestReport:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size == 0 or ys.size == 0:
        raise ValueError("both samples must be nonempty")
    res = stats.ks_2samp(np.sort(xs), np.sort(ys), method="asymp")
    return TestReport(float(res.statistic), float(min(max(res.pvalue, 0.0), 1.0)),
                      xs.size, ys.size, threshold)


# experiments --------------------------------------------------------------------

@dataclass
class ExperimentReport:
    experiment: str
    n: int
    kappa: float
    N: int
    seed: int
    re: TestReport | None
    im: TestReport | None
    swallow_fraction: float
    params: dict = field(default_factory=dict)
    threshold: float = P_THRESHOLD

    @property
    def status(self) -> str:
        if self.swallow_fraction > MAX_SWALLOW_FRACTION or self.re is None:
            return "inconclusive"
        return "pass" if (self.re.passed and self.im.passed) else "fail"

    @property
    def p_value(self) -> float:
        return min(self.re.p_value, self.im.p_value) if self.re else float("nan")

    @property
    def statistic(self) -> float:
        return max(self.re.statistic, self.im.statistic) if self.re else float("nan")

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "n": self.n,
            "kappa": self.kappa,
            "N": self.N,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "swallow_fraction": self.swallow_fraction,
            "seed": self.seed,
            "components": {"re": asdict(self.re) if self.re else None,
                           "im": asdict(self.im) if self.im else None},
            "threshold": self.threshold,
            "status": self.status,
            "params": self.params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _compare(name, n, kappa, N, seed, a, b, params) -> ExperimentReport:
    a = np.asarray(a)
    b = np.asarray(b)
    keep = np.isfinite(a) & np.isfinite(b)
    frac = 1.0 - keep.mean()
    if keep.sum() == 0:
        return ExperimentReport(name, n, kappa, N, seed, None, None, frac, params)
    re = ks_two_sample(a[keep].real, b[keep].real)
    im = ks_two_sample(a[keep].imag, b[keep].imag)
    return ExperimentReport(name, n, kappa, N, seed, re, im, float(frac), params)


def _forward_batch(z, drive: DrivePath, cfg: FlowConfig, t: float) -> np.ndarray:
    """g_t(z) for one z per drive path; NaN where swallowed."""
    w0 = np.full(drive.n_paths, ipow(complex(z), cfg.n))
    w, tau, _ = _forward_w(w0, drive.forward_values(0.0, t), cfg.dt, cfg.n, cfg.eps_swallow)
    out = np.full(w.shape, np.nan + 0j)
    alive = np.isinf(tau)
    out[alive] = principal_root(w[alive], cfg.n)
    return out


def _check_z(z, n):
    if not in_wedge(z, n):
        raise ValueError(f"z = {z} is not in the open wedge of grade {n}")


def scale_invariance_experiment(n: int, kappa: float, alpha: float, z: complex, t: float,
                                N: int = 2000, seed: int = 0, dt: float = 1e-4,
                                shared_seeds: bool = False) -> ExperimentReport:
    """``alpha**(-1/2n) g_{alpha t}(alpha**(1/2n) z)`` against ``g_t(z)``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    _check_z(z, n)
    cfg = FlowConfig(n=n, dt=dt)
    da = sample_brownian_batch(t, dt, seed, kappa, N, stream=STREAM_A)
    db = sample_brownian_batch(alpha * t, dt, seed, kappa, N,
                               stream=STREAM_A if shared_seeds else STREAM_B)
    scale = alpha ** (1.0 / (2 * n))
    lhs = _forward_batch(z, da, cfg, t)
    rhs = _forward_batch(scale * z, db, cfg, alpha * t) / scale
    return _compare("scale-invariance", n, kappa, N, seed, lhs, rhs,
                    {"alpha": alpha, "z": [z.real, z.imag], "t": t, "dt": dt})


def stationarity_experiment(n: int, kappa: float, t0: float, t1: float, z: complex,
                            N: int = 2000, seed: int = 0, dt: float = 1e-4,
                            shared_seeds: bool = False) -> ExperimentReport:
    """The map restarted at ``t0`` and run to ``t1`` against a fresh ``g_{t1 - t0}``."""
    if not t1 > t0 >= 0:
        raise ValueError("need t1 > t0 >= 0")
    _check_z(z, n)
    cfg = FlowConfig(n=n, dt=dt)
    da = sample_brownian_batch(t1, dt, seed, kappa, N, stream=STREAM_A)
    db = sample_brownian_batch(t1 - t0, dt, seed, kappa, N,
                               stream=STREAM_A if shared_seeds else STREAM_B)
    lhs = _shifted_batch(z, da, cfg, t0, t1 - t0)
    rhs = _forward_batch(z, db, cfg, t1 - t0)
    return _compare("stationarity", n, kappa, N, seed, lhs, rhs,
                    {"t0": t0, "t1": t1, "z": [z.real, z.imag], "dt": dt})


def _shifted_batch(z, drive: DrivePath, cfg: FlowConfig, t1: float, t: float) -> np.ndarray:
    if t1 == 0:
        return _forward_batch(z, drive, cfg, t)
    n = cfg.n
    y1 = drive.value(t1)
    start = principal_root(ipow(complex(z), n) + y1, n)
    back = _reverse_w(ipow(start, n), drive.forward_values(0.0, t1)[::-1], cfg.dt, n)
    w, tau, _ = _forward_w(back, drive.forward_values(0.0, t1 + t), cfg.dt, n, cfg.eps_swallow)
    out = np.full(w.shape, np.nan + 0j)
    alive = np.isinf(tau)
    out[alive] = principal_root(w[alive] - y1[alive], n)
    return out


def backward_law_experiment(n: int, kappa: float, t: float, z: complex,
                            N: int = 2000, seed: int = 0, dt: float = 1e-4,
                            shared_seeds: bool = False) -> ExperimentReport:
    """``g_{-t}(z)`` against ``root((g_t^{-1}(root(z**n + Y_t)))**n - Y_t)``."""
    _check_z(z, n)
    cfg = FlowConfig(n=n, dt=dt)
    if t == 0:
        same = np.full(N, complex(z))
        return _compare("backward-law", n, kappa, N, seed, same, same, {"t": t, "z": [z.real, z.imag]})
    da = sample_brownian_batch(t, dt, seed, kappa, N, two_sided=True, stream=STREAM_A)
    db = da if shared_seeds else sample_brownian_batch(t, dt, seed, kappa, N, stream=STREAM_B)
    lhs = backward_many(np.full(N, complex(z)), da, cfg, t)
    yt = db.value(t)
    start = principal_root(ipow(complex(z), n) + yt, n)
    w = _reverse_w(ipow(start, n), db.forward_values(0.0, t)[::-1], dt, n)
    rhs = principal_root(w - yt, n)
    return _compare("backward-law", n, kappa, N, seed, lhs, rhs,
                    {"t": t, "z": [z.real, z.imag], "dt": dt})


__all__ = [
    "ExperimentReport", "TestReport", "backward_law_experiment", "ks_two_sample",
    "sample_brownian", "sample_brownian_batch", "scale_invariance_experiment",
    "shifted_flow_many", "stationarity_experiment",
]
