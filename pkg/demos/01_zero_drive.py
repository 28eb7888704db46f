"""With no driving noise every grade grows a straight slit along the wedge bisector.

Run:  python demos/01_zero_drive.py
"""

import numpy as np

from slelab.loewner import DrivePath, FlowConfig, GridSpec, flow_forward_many, hull_grid, trace_sample

dt, t = 1e-3, 1.0
drive = DrivePath.zero(t, dt)

for n in (1, 2, 3):
    cfg = FlowConfig(n=n, dt=dt)
    tip = trace_sample(drive, cfg, [t]).points[0]
    print(f"grade {n}: tip at |z| = {abs(tip):.6f} (expected {(4 * n * t) ** (1 / (2 * n)):.6f}), "
          f"angle {np.degrees(np.angle(tip)):.2f} deg")

# Points on the bisector are eaten at time r**(2n) / (4n); everything else survives.
n = 2
radii = np.array([0.25, 0.5, 0.75, 1.0])
res = flow_forward_many(radii * np.exp(1j * np.pi / 4), drive, FlowConfig(n=n, dt=dt), t)
for r, tau in zip(radii, res.tau):
    print(f"  r = {r:.2f}: swallowed at {tau:.6f}  vs  {r ** 4 / 8:.6f}")

hull = hull_grid(DrivePath.zero(0.125, dt), FlowConfig(n=2, dt=dt), 0.125, GridSpec(0, 1.5, 0, 1.5, 16, 16))
print("grade-2 hull at t = 1/8 contains", len(hull.swallowed_points()), "grid points, all on the diagonal:",
      bool(np.all(np.isclose(hull.swallowed_points().real, hull.swallowed_points().imag))))
