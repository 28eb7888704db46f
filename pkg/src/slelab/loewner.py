"""Grade-n Loewner flows in the wedge ``0 < arg z < pi/n``.

Everything is integrated in the coordinate ``w = g**n`` where the flow is
ordinary chordal Loewner with a rescaled constant,

    dw/dt = 2n / (w - Y_t),

and with ``Y`` frozen over a step the equation is solved exactly by
``w' = Y + sqrt_H((w - Y)**2 + 4 n dt)``.  The drive is piecewise constant
and takes, on each grid interval ``(t_k, t_{k+1}]``, the sample at the right
end ``Y(t_{k+1})``; this holds on the negative half-line too.

All flow functions accept arrays of starting points and either a single
drive or a batch of drives (one per point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra.minimal import DomainError


class BranchError(ArithmeticError):
    """The square-root argument left the closed upper half-plane."""


class SwallowedError(ArithmeticError):
    """An intermediate point of a composed map was swallowed."""


# elementary maps --------------------------------------------------------------

def sqrt_h(u):
    """Square root with non-negative imaginary part.

    On the real axis the non-negative root is taken.
    """
    r = np.sqrt(np.asarray(u, dtype=complex))
    flip = (r.imag < 0) | ((r.imag == 0) & (r.real < 0))
    r = np.where(flip, -r, r)
    return r[()] if r.ndim == 0 else r


def ipow(z, n: int):
    """``z**n`` by repeated multiplication (keeps exact zeros exact)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for _ in range(n):
        out = out * z
    return out[()] if out.ndim == 0 else out


def principal_root(w, n: int):
    """``|w|**(1/n) exp(i arg(w) / n)`` with ``arg(w)`` in ``[0, pi]``.

    ``w = 0`` maps to 0; points strictly below the real axis raise
    :class:`DomainError`.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(w.imag < 0):
        raise DomainError("principal root needs Im(w) >= 0")
    if n == 1:
        return w[()] if w.ndim == 0 else w
    arg = np.where(w.imag == 0, np.where(w.real < 0, np.pi, 0.0), np.angle(w))
    out = np.abs(w) ** (1.0 / n) * np.exp(1j * arg / n)
    return out[()] if out.ndim == 0 else out


def in_wedge(z, n: int):
    """Membership in the open wedge ``0 < arg z < pi/n``."""
    z = np.asarray(z, dtype=complex)
    arg = np.angle(z)
    return (np.abs(z) > 0) & (z.imag > 0) & (arg > 0) & (arg < np.pi / n)


@dataclass(frozen=True)
class Wedge:
    n: int

    def __contains__(self, z) -> bool:
        return bool(in_wedge(z, self.n))

    @property
    def bisector(self) -> complex:
        return complex(np.exp(1j * np.pi / (2 * self.n)))


def step_exact(w, y: float, dt: float, n: int, eps_swallow: float | None = None):
    """One exactly integrated step of ``dw/dt = 2n/(w - y)``.

    Returns ``None`` when ``eps_swallow`` is given and ``|w - y|`` is already
    within it at the start of the step.
    """
    d = complex(w) - y
    if eps_swallow is not None and abs(d) <= eps_swallow:
        return None
    if dt == 0:
        return complex(w)
    return complex(y + sqrt_h(d * d + 4.0 * n * dt))


# drives -----------------------------------------------------------------------

@dataclass(frozen=True)
class DrivePath:
    """Samples of ``Y`` on a uniform grid ``t0 + k dt``.

    ``samples`` has shape ``(K,)`` for one path or ``(M, K)`` for a batch.
    One-sided paths start at ``t0 = 0``; two-sided ones at ``t0 = -T``.
    """

    t0: float
    dt: float
    samples: np.ndarray
    kappa: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t0 > 0:
            raise ValueError("drives must cover t = 0")
        if s.ndim not in (1, 2):
            raise ValueError("samples must be 1-D or 2-D")
        if np.any(s[..., self.index(0.0)] != 0):
            raise ValueError("drive must vanish at t = 0")

    @classmethod
    def zero(cls, T: float, dt: float, two_sided: bool = False) -> "DrivePath":
        k = _grid_count(T, dt)
        size = 2 * k + 1 if two_sided else k + 1
        return cls(-k * dt if two_sided else 0.0, dt, np.zeros(size), 0.0)

    @property
    def batch(self) -> bool:
        return self.samples.ndim == 2

    @property
    def n_paths(self) -> int:
        return self.samples.shape[0] if self.batch else 1

    @property
    def two_sided(self) -> bool:
        return self.t0 < 0

    @property
    def horizon(self) -> float:
        return self.t0 + (self.samples.shape[-1] - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.shape[-1])

    def index(self, t: float) -> int:
        k = _grid_count(t - self.t0, self.dt)
        if not 0 <= k < self.samples.shape[-1]:
            raise ValueError(f"t = {t} outside the drive's range")
        return k

    def value(self, t: float):
        return self.samples[..., self.index(t)]

    def forward_values(self, t_start: float, t_end: float) -> np.ndarray:
        """Drive values for steps over ``[t_start, t_end]``, one row per step."""
        i, j = self.index(t_start), self.index(t_end)
        if j < i:
            raise ValueError("t_end before t_start")
        return self.samples[..., i + 1: j + 1].T

    def backward_values(self, t: float) -> np.ndarray:
        """Values for the steps from 0 down to ``-t``: ``Y(0), Y(-dt), ...``."""
        i0 = self.index(0.0)
        j = self.index(-t)
        return self.samples[..., j + 1: i0 + 1][..., ::-1].T

    def rescaled(self, factor: float) -> "DrivePath":
        """Same samples on a grid whose spacing is multiplied by ``factor``."""
        return DrivePath(self.t0 * factor, self.dt * factor, self.samples, self.kappa)

    def path(self, i: int) -> "DrivePath":
        if not self.batch:
            return self
        return DrivePath(self.t0, self.dt, self.samples[i], self.kappa)


def _grid_count(t: float, dt: float) -> int:
    k = int(round(t / dt))
    if abs(k * dt - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError(f"t = {t} is not a multiple of dt = {dt}")
    return k


@dataclass(frozen=True)
class FlowConfig:
    """Grade, sign choice, step size and swallow tolerance."""

    n: int = 1
    s: int = 1
    dt: float = 1e-4
    eps_swallow: float = 1e-8

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grade must be positive")
        if self.s not in (1, 2):
            raise ValueError("s must be 1 or 2")
        if self.dt <= 0 or self.eps_swallow <= 0:
            raise ValueError("dt and eps_swallow must be positive")


@dataclass(frozen=True)
class FlowResult:
    """Outcome of a flow for a single starting point."""

    value: complex | None = None
    tau: float | None = None

    @property
    def status(self) -> str:
        return "alive" if self.value is not None else "swallowed"

    @property
    def alive(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class FlowArrays:
    """Vectorised outcome: ``value`` is NaN and ``tau`` finite where swallowed."""

    value: np.ndarray
    tau: np.ndarray

    @property
    def alive(self) -> np.ndarray:
        return np.isinf(self.tau)

    def result(self, i: int = 0) -> FlowResult:
        if np.isinf(self.tau.flat[i]):
            return FlowResult(value=complex(self.value.flat[i]))
        return FlowResult(tau=float(self.tau.flat[i]))


# core loops in w = g**n ---------------------------------------------------------

def _forward_w(w0, ys, dt, n, eps, t_start=0.0):
    """Forward steps on ``w``; returns ``(w, tau, w - w0)``, tau = inf if alive.

    The displacement from ``w0`` is accumulated separately so that far-out
    points (|w| >> 1) keep full relative accuracy in ``w - w0``.
    """
    w0 = np.array(w0, dtype=complex, ndmin=1)
    ys = np.ascontiguousarray(ys)
    disp = np.zeros_like(w0)
    tau = np.full(w0.shape, np.inf)
    alive = np.ones(w0.shape, dtype=bool)
    a = 4.0 * n * dt
    with np.errstate(invalid="ignore", divide="ignore"):
        for k in range(len(ys)):
            y = ys[k]
            d = (w0 + disp) - y
            u = d * d
            s_star = np.clip(-u.real / (4.0 * n), 0.0, dt)
            closest = np.sqrt(np.abs(u + 4.0 * n * s_star))
            root = sqrt_h(u + a)
            new_disp = disp + a / (root + d)
            w_new = w0 + new_disp
            tol = eps * np.maximum(1.0, np.abs(y))
            hit = alive & ((closest <= tol) | (w_new.imag <= eps * np.maximum(1.0, np.abs(w_new))))
            if hit.any():
                tau[hit] = t_start + k * dt + s_star[hit]
                alive &= ~hit
            disp = np.where(alive, new_disp, disp)
    return w0 + disp, tau, disp


def _reverse_w(w, ys, dt, n):
    """Apply ``w -> Y + sqrt_H((w - Y)**2 - 4 n dt)`` for each value in ``ys``."""
    w = np.array(w, dtype=complex, ndmin=1)
    ys = np.ascontiguousarray(ys)
    a = 4.0 * n * dt
    for k in range(len(ys)):
        d = w - ys[k]
        root = sqrt_h(d * d - a)
        if np.any(root.imag <= 0):
            raise BranchError("inverse step left the open upper half-plane")
        w = w + (-a) / (root + d)
    return w


def _check_drive(drive: DrivePath, cfg: FlowConfig):
    if not math.isclose(drive.dt, cfg.dt, rel_tol=1e-12):
        raise ValueError(f"drive dt {drive.dt} differs from config dt {cfg.dt}")


def _as_points(z, n, name="z"):
    z = np.array(z, dtype=complex, ndmin=1)
    if not np.all(in_wedge(z, n)):
        raise DomainError(f"{name} must lie in the open wedge 0 < arg < pi/{n}")
    return z


def _unwrap(z, arr):
    return arr[0] if np.ndim(z) == 0 else arr


# flows ----------------------------------------------------------------------------

def flow_forward_many(z, drive: DrivePath, cfg: FlowConfig, t: float) -> FlowArrays:
    """Vectorised ``g_t(z)`` for an array of points."""
    _check_drive(drive, cfg)
    pts = _as_points(z, cfg.n)
    w, tau, _ = _forward_w(ipow(pts, cfg.n), drive.forward_values(0.0, t), cfg.dt, cfg.n, cfg.eps_swallow)
    alive = np.isinf(tau)
    value = np.full(pts.shape, np.nan + 0j)
    value[alive] = principal_root(w[alive], cfg.n)
    return FlowArrays(value, tau)


def flow_forward(z, drive: DrivePath, cfg: FlowConfig, t: float) -> FlowResult:
    """``g_t(z)`` or a swallow record with the swallow-time estimate."""
    return flow_forward_many([z], drive, cfg, t).result(0)


def flow_displacement(z, drive: DrivePath, cfg: FlowConfig, t: float):
    """``g_t(z) - z`` computed without cancellation.

    Uses ``g - z = (g**n - z**n) / sum_j g**j z**(n-1-j)``.
    """
    _check_drive(drive, cfg)
    pts = _as_points(z, cfg.n)
    w0 = ipow(pts, cfg.n)
    w, tau, dw = _forward_w(w0, drive.forward_values(0.0, t), cfg.dt, cfg.n, cfg.eps_swallow)
    if np.any(np.isfinite(tau)):
        raise SwallowedError("point swallowed before t")
    g = principal_root(w, cfg.n)
    denom = sum(ipow(g, j) * ipow(pts, cfg.n - 1 - j) for j in range(cfg.n))
    return _unwrap(z, dw / denom)


def backward_many(z, drive: DrivePath, cfg: FlowConfig, t: float) -> np.ndarray:
    """``g_{-t}(z)``: the flow run to negative times on a two-sided drive."""
    _check_drive(drive, cfg)
    if not drive.two_sided:
        raise ValueError("negative-time flow needs a two-sided drive")
    pts = _as_points(z, cfg.n)
    w = _reverse_w(ipow(pts, cfg.n), drive.backward_values(t), cfg.dt, cfg.n)
    return _unwrap(z, principal_root(w, cfg.n))


def f_map(z, drive: DrivePath, cfg: FlowConfig, t: float) -> FlowResult:
    """Centred map ``f_t``.

    ``s = 1``: ``f_t**n = g_t**n - Y_t``;  ``s = 2``: ``f_t**n = g_{-t}**n - Y_{-t}``.
    """
    return f_map_many([z], drive, cfg, t).result(0)


def f_map_many(z, drive: DrivePath, cfg: FlowConfig, t: float) -> FlowArrays:
    _check_drive(drive, cfg)
    pts = _as_points(z, cfg.n)
    n = cfg.n
    if cfg.s == 1:
        w, tau, _ = _forward_w(ipow(pts, n), drive.forward_values(0.0, t), cfg.dt, n, cfg.eps_swallow)
        alive = np.isinf(tau)
        value = np.full(pts.shape, np.nan + 0j)
        shifted = w - drive.value(t)
        value[alive] = principal_root(shifted[alive], n)
        return FlowArrays(value, tau)
    if not drive.two_sided:
        raise ValueError("s = 2 needs a two-sided drive")
    w = _reverse_w(ipow(pts, n), drive.backward_values(t), cfg.dt, n)
    return FlowArrays(principal_root(w - drive.value(-t), n), np.full(pts.shape, np.inf))


def inverse_many(w, drive: DrivePath, cfg: FlowConfig, t: float, *, check_domain: bool = True):
    """``g_t^{-1}(w)``: per-step inverses applied from ``t`` back to 0."""
    _check_drive(drive, cfg)
    pts = _as_points(w, cfg.n, "w") if check_domain else np.array(w, dtype=complex, ndmin=1)
    ys = drive.forward_values(0.0, t)[::-1]
    out = _reverse_w(ipow(pts, cfg.n), ys, cfg.dt, cfg.n)
    return _unwrap(w, principal_root(out, cfg.n))


def inverse_map(w, drive: DrivePath, cfg: FlowConfig, t: float) -> complex:
    return complex(inverse_many(w, drive, cfg, t))


def shifted_flow_many(z, drive: DrivePath, cfg: FlowConfig, t1: float, t: float):
    """``ghat_t^{(t1)}(z)``, computed as the literal composition.

    ``(ghat)**n = (g_{t1+t}(g_{t1}^{-1}(root(z**n + Y_{t1}))))**n - Y_{t1}``.
    """
    _check_drive(drive, cfg)
    n = cfg.n
    pts = _as_points(z, n)
    y1 = drive.value(t1)
    start = principal_root(ipow(pts, n) + y1, n)
    back = _reverse_w(ipow(start, n), drive.forward_values(0.0, t1)[::-1], cfg.dt, n)
    w, tau, _ = _forward_w(back, drive.forward_values(0.0, t1 + t), cfg.dt, n, cfg.eps_swallow)
    if np.any(np.isfinite(tau)):
        raise SwallowedError("intermediate point swallowed in shifted flow")
    return _unwrap(z, principal_root(w - y1, n))


def shifted_flow(z, drive: DrivePath, cfg: FlowConfig, t1: float, t: float) -> complex:
    return complex(shifted_flow_many(z, drive, cfg, t1, t))


# traces and hulls ---------------------------------------------------------------

@dataclass(frozen=True)
class TraceCurve:
    t: np.ndarray
    points: np.ndarray

    def __len__(self):
        return len(self.t)


def trace_sample(drive: DrivePath, cfg: FlowConfig, times, eps: float = 1e-6) -> TraceCurve:
    """Points of the trace, ``lim_{z -> 0} f_t^{-1}(z)``, at the given times.

    The limit is replaced by the basepoint ``eps * exp(i pi / (2n))``.
    For ``s = 1`` the centred inverse ``g_t^{-1}(root(z**n + Y_t))`` is used;
    for ``s = 2`` the tip of the hull grown by the negative-time flow,
    ``g_{-t}(z)`` at the same basepoint.  ``eps`` should stay well below
    ``sqrt(dt)``.
    """
    _check_drive(drive, cfg)
    if drive.batch:
        raise ValueError("trace_sample takes a single drive")
    n = cfg.n
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    z0n = ipow(eps * np.exp(1j * np.pi / (2 * n)), n)
    ks = np.array([_grid_count(t, cfg.dt) for t in times])
    a = 4.0 * n * cfg.dt
    if cfg.s == 2:
        if not drive.two_sided:
            raise ValueError("s = 2 traces need a two-sided drive")
        ys = drive.backward_values(times[-1])
        out = np.empty(len(times), dtype=complex)
        w = complex(z0n)
        j = 0
        for k in range(ks[-1] + 1):
            while j < len(ks) and ks[j] == k:
                out[j] = w
                j += 1
            if k == ks[-1]:
                break
            d = w - ys[k]
            w = w - a / (complex(sqrt_h(d * d - a)) + d)
        return TraceCurve(times, principal_root(out, n))

    # s = 1: walk every requested time back to t = 0 simultaneously
    ys = drive.forward_values(0.0, times[-1])
    w = np.array([z0n + drive.value(t) for t in times], dtype=complex)
    with np.errstate(invalid="ignore"):
        for k in range(ks[-1] - 1, -1, -1):
            active = ks > k
            d = w[active] - ys[k]
            root = sqrt_h(d * d - a)
            if np.any(root.imag <= 0):
                raise BranchError("trace step left the open upper half-plane")
            w[active] = w[active] - a / (root + d)
    return TraceCurve(times, principal_root(w, n))


@dataclass(frozen=True)
class GridSpec:
    """Cartesian sampling window; lines within 1e-12 of an axis are snapped onto it."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def axes(self):
        def snap(v):
            scale = max(abs(v).max(), 1.0)
            v = v.copy()
            v[np.abs(v) < 1e-12 * scale] = 0.0
            return v

        return (snap(np.linspace(self.re_min, self.re_max, self.nx)),
                snap(np.linspace(self.im_min, self.im_max, self.ny)))

    def points(self) -> np.ndarray:
        xs, ys = self.axes()
        return (xs[None, :] + 1j * ys[:, None]).ravel()


@dataclass(frozen=True)
class HullGrid:
    """Swallow times on a grid; ``tau`` is NaN outside the wedge, inf if alive."""

    grid: GridSpec
    points: np.ndarray
    tau: np.ndarray
    t: float

    def swallowed(self, t: float | None = None) -> np.ndarray:
        t = self.t if t is None else t
        with np.errstate(invalid="ignore"):
            return self.tau <= t

    def swallowed_points(self, t: float | None = None) -> np.ndarray:
        return self.points[self.swallowed(t)]


def hull_grid(drive: DrivePath, cfg: FlowConfig, t: float, grid: GridSpec) -> HullGrid:
    """Grid approximation of the hull: points whose swallow time is at most ``t``."""
    pts = grid.points()
    tau = np.full(pts.shape, np.nan)
    inside = in_wedge(pts, cfg.n)
    if inside.any():
        res = flow_forward_many(pts[inside], drive, cfg, t)
        tau[inside] = res.tau
    return HullGrid(grid, pts, tau, t)


# cross-checks --------------------------------------------------------------------

def conjugation_check(z, drive: DrivePath, cfg: FlowConfig, t: float):
    """Grade-n flow against the grade-1 flow conjugated by ``z -> z**n``.

    ``drive`` is the grade-one drive ``sqrt(kappa) B`` on a grid of spacing
    ``n * cfg.dt``; the grade-n side runs on ``Y_t = sqrt(kappa) B_{n t}``.
    Returns ``(lhs, rhs, gap)``; ``gap`` is None if either side was swallowed.
    """
    n = cfg.n
    if not math.isclose(drive.dt, n * cfg.dt, rel_tol=1e-12):
        raise ValueError("grade-one drive must have spacing n * cfg.dt")
    fast = drive.rescaled(1.0 / n)
    lhs = flow_forward(z, fast, cfg, t)
    base = FlowConfig(1, 1, n * cfg.dt, cfg.eps_swallow)
    rhs_w = flow_forward(complex(ipow(z, n)), drive, base, n * t)
    rhs = complex(principal_root(rhs_w.value, n)) if rhs_w.alive else None
    if lhs.value is None or rhs is None:
        return lhs.value, rhs, None
    return lhs.value, rhs, abs(lhs.value - rhs)
