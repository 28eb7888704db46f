import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slelab.algebra import DomainError
from slelab.loewner import (
    DrivePath,
    FlowConfig,
    GridSpec,
    SwallowedError,
    backward_many,
    conjugation_check,
    flow_displacement,
    flow_forward,
    flow_forward_many,
    hull_grid,
    in_wedge,
    inverse_many,
    principal_root,
    shifted_flow,
    sqrt_h,
    step_exact,
    trace_sample,
)
from slelab.stochastic import _forward_batch, sample_brownian, sample_brownian_batch


def closed_form(z, n, t):
    return principal_root(sqrt_h(z ** (2 * n) + 4 * n * t), n)


def closed_form_inverse(w, n, t):
    return principal_root(sqrt_h(w ** (2 * n) - 4 * n * t), n)


# elementary maps -----------------------------------------------------------------

def test_sqrt_h_branch():
    assert sqrt_h(-4 + 0j) == 2j
    assert sqrt_h(4 + 0j) == 2
    for u in (1 - 1j, -3 - 0.1j, 2j, -2j):
        r = sqrt_h(u)
        assert r.imag >= 0 and abs(r * r - u) < 1e-14


def test_step_exact_examples():
    assert step_exact(1j, 0.0, 1.0, 1) == pytest.approx(math.sqrt(3))
    assert step_exact(2j, 0.0, 1.0, 1) == 0
    assert step_exact(0.3 + 0.7j, 0.1, 0.0, 2) == 0.3 + 0.7j


def test_principal_root_lands_in_wedge():
    for w in (1j, -1 + 0.1j, 3 + 2j, -5 + 1e-9j):
        for n in (1, 2, 3, 5):
            r = principal_root(w, n)
            assert 0 <= cmath.phase(r) <= math.pi / n + 1e-15
            assert abs(r ** n - w) < 1e-12 * max(1, abs(w))
    with pytest.raises(DomainError):
        principal_root(1 - 1j, 2)


def test_points_outside_wedge_are_rejected():
    drive = DrivePath.zero(1.0, 1e-2)
    assert not in_wedge(-1 + 1j, 2)
    with pytest.raises(ValueError):
        flow_forward(-1 + 1j, drive, FlowConfig(n=2, dt=1e-2), 1.0)


def test_drive_validation():
    with pytest.raises(ValueError):
        DrivePath(0.0, 0.1, np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        DrivePath.zero(1.0, 0.3)
    d = DrivePath.zero(1.0, 0.25, two_sided=True)
    assert d.horizon == 1.0 and d.t0 == -1.0 and d.two_sided


# zero drive ----------------------------------------------------------------------

# angles as a fraction of the wedge opening, kept off the bisector where points get swallowed
wedge_points = st.tuples(st.floats(0.2, 3.0), st.one_of(st.floats(0.05, 0.45), st.floats(0.55, 0.95)))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 4), pt=wedge_points, t=st.sampled_from([0.1, 0.5, 1.0]))
def test_zero_drive_matches_closed_form(n, pt, t):
    r, frac = pt
    z = r * cmath.exp(1j * math.pi / n * frac)
    res = flow_forward(z, DrivePath.zero(1.0, 1e-3), FlowConfig(n=n, dt=1e-3), t)
    assert res.alive
    assert abs(res.value - closed_form(z, n, t)) <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_drive_inverse_closed_form(n):
    drive = DrivePath.zero(1.0, 1e-3)
    w = np.array([1.5 * cmath.exp(1j * math.pi / n * f) for f in (0.3, 0.5, 0.7)])
    got = inverse_many(w, drive, FlowConfig(n=n, dt=1e-3), 0.5)
    assert np.abs(got - closed_form_inverse(w, n, 0.5)).max() <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 3])
def test_on_ray_swallow_times(n):
    drive = DrivePath.zero(1.0, 1e-3)
    r = np.array([0.4, 0.8, 1.0])
    z = r * np.exp(1j * np.pi / (2 * n))
    res = flow_forward_many(z, drive, FlowConfig(n=n, dt=1e-3), 1.0)
    assert not res.alive.any()
    assert np.abs(res.tau - r ** (2 * n) / (4 * n)).max() <= 1e-9


def test_grade_two_hull_at_one_eighth():
    drive = DrivePath.zero(0.125, 1e-3)
    # the ray of length 1 is swallowed; its tip sits exactly on the boundary tau = t
    res = flow_forward(0.999 * np.exp(1j * np.pi / 4), drive, FlowConfig(n=2, dt=1e-3), 0.125)
    assert not res.alive and res.tau == pytest.approx(0.999 ** 4 / 8, abs=1e-12)
    beyond = flow_forward(1.01 * np.exp(1j * np.pi / 4), drive, FlowConfig(n=2, dt=1e-3), 0.125)
    assert beyond.alive


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_drive_trace(n):
    drive = DrivePath.zero(1.0, 1e-3)
    times = np.array([0.0, 0.25, 1.0])
    tr = trace_sample(drive, FlowConfig(n=n, dt=1e-3), times)
    tip = (4 * n * times) ** (1 / (2 * n)) * np.exp(1j * np.pi / (2 * n))
    assert np.abs(tr.points - tip).max() <= 1e-5  # the t = 0 point is the basepoint


def test_grade_one_hull_is_vertical_segment():
    t = 0.25
    drive = DrivePath.zero(t, 1e-3)
    grid = GridSpec(-0.5, 0.5, 0.1, 1.5, 5, 15)
    hull = hull_grid(drive, FlowConfig(n=1, dt=1e-3), t, grid)
    hit = hull.swallowed_points()
    assert np.all(hit.real == 0)
    assert np.all(hit.imag <= 2 * math.sqrt(t) + 1e-12)
    on_axis = hull.points[(hull.points.real == 0) & (hull.points.imag <= 1.0)]
    assert len(hit) == len(on_axis) > 0


def test_hull_at_time_zero_is_empty():
    drive = DrivePath.zero(0.1, 1e-3)
    hull = hull_grid(drive, FlowConfig(n=2, dt=1e-3), 0.0, GridSpec(0, 1, 0, 1, 11, 11))
    assert hull.swallowed_points().size == 0
    assert np.isnan(hull.tau[~in_wedge(hull.points, 2)]).all()


# Brownian drive ------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_round_trip(n):
    drive = sample_brownian(1.0, 1e-4, 11, 2.0)
    cfg = FlowConfig(n=n, dt=1e-4)
    z = np.array([2.0 * np.exp(1j * np.pi / (2 * n) * f) for f in (0.7, 1.0, 1.3)])
    fwd = flow_forward_many(z, drive, cfg, 1.0)
    assert fwd.alive.all()
    assert np.abs(inverse_many(fwd.value, drive, cfg, 1.0) - z).max() <= 1e-8


@pytest.mark.parametrize("seed", range(3))
def test_conjugation_is_exact_up_to_rounding(seed):
    n, dt, t = 2, 1e-4, 0.5
    base = sample_brownian(n * t, n * dt, seed, 2.0)
    z = complex(np.sqrt(2.5j))
    lhs, rhs, gap = conjugation_check(z, base, FlowConfig(n=n, dt=dt), t)
    assert gap is not None and gap <= 1e-12


def test_conjugation_for_zero_drive():
    lhs, rhs, gap = conjugation_check(1 + 1j, DrivePath.zero(1.0, 2e-3), FlowConfig(n=2, dt=1e-3), 0.5)
    assert gap <= 1e-14


def test_trace_conjugates_to_grade_one():
    n, dt = 2, 1e-4
    base = sample_brownian(1.0, n * dt, 4, 2.0)
    times = np.array([0.1, 0.3, 0.5])
    grade_n = trace_sample(base.rescaled(1.0 / n), FlowConfig(n=n, dt=dt), times, eps=1e-3)
    grade_1 = trace_sample(base, FlowConfig(n=1, dt=n * dt), n * times, eps=1e-6)
    assert np.abs(grade_n.points - principal_root(grade_1.points, n)).max() <= 1e-9


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("kind", ["zero", "brownian"])
def test_hydrodynamic_normalization(n, kind):
    t = 1.0
    drive = DrivePath.zero(t, 1e-4) if kind == "zero" else sample_brownian(t, 1e-4, 0, 2.0)
    z = 1e3 * np.exp(1j * np.pi / (2 * n))
    dz = flow_displacement(z, drive, FlowConfig(n=n, dt=1e-4), t)
    assert abs(dz * z ** (2 * n - 1) - 2 * t) / (2 * t) <= 1e-3


def test_hydrodynamic_next_order_for_grade_one():
    # (g - z) z = 2t + (2 int_0^t Y ds) / z + O(1/z^2); the second term explains
    # the finite-|z| error on Brownian drives.
    t, dt = 1.0, 1e-4
    drive = sample_brownian(t, dt, 5, 2.0)
    z = 1e3j
    dz = flow_displacement(z, drive, FlowConfig(n=1, dt=dt), t)
    area = dt * drive.forward_values(0.0, t).sum()
    assert abs(dz * z - 2 * t - 2 * area / z) <= 1e-5


def test_step_size_self_convergence_is_first_order():
    T = 1.024
    fine = sample_brownian_batch(T, 1e-5, 3, 2.0, 20)
    z = 1 + 1.5j
    factors = (1, 4, 16, 64)
    vals = {f: _forward_batch(z, DrivePath(0.0, 1e-5 * f, fine.samples[:, ::f], 2.0),
                              FlowConfig(n=1, dt=1e-5 * f), T) for f in factors}
    errs = [np.mean(np.abs(vals[f] - vals[1])) for f in factors[1:]]
    slope = np.polyfit(np.log(factors[1:]), np.log(errs), 1)[0]
    assert errs[0] < errs[1] < errs[2]
    assert 0.7 <= slope <= 1.5


def test_backward_flow_needs_two_sided_drive():
    with pytest.raises(ValueError):
        backward_many(1j, sample_brownian(0.1, 1e-3, 0, 2.0), FlowConfig(dt=1e-3), 0.1)


def test_shifted_flow_at_zero_offset_is_forward_flow():
    drive = sample_brownian(0.5, 1e-3, 2, 2.0)
    cfg = FlowConfig(n=2, dt=1e-3)
    z = 1.2 * np.exp(1j * np.pi / 4)
    assert shifted_flow(z, drive, cfg, 0.0, 0.5) == pytest.approx(flow_forward(z, drive, cfg, 0.5).value, abs=1e-12)


def test_shifted_flow_reports_swallowing():
    drive = DrivePath.zero(1.0, 1e-3)
    with pytest.raises(SwallowedError):
        shifted_flow(0.5 * np.exp(1j * np.pi / 4), drive, FlowConfig(n=2, dt=1e-3), 0.2, 0.5)
