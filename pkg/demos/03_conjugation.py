"""A grade-2 evolution is a chordal one seen through z -> z**2.

Both flows below use the same Brownian samples; the grade-2 clock runs at
half speed.  Because each step is solved exactly, the two answers agree to
rounding rather than to discretisation error.  The script also writes a trace
for plotting.
"""

import sys

import numpy as np

from slelab.io import trace_to_csv
from slelab.loewner import FlowConfig, conjugation_check, principal_root, trace_sample
from slelab.stochastic import sample_brownian

n, kappa, dt, t = 2, 2.0, 1e-4, 0.5
base = sample_brownian(n * t, n * dt, seed=1, kappa=kappa)
cfg = FlowConfig(n=n, dt=dt)

for z in (1.2 + 0.9j, np.sqrt(3j), 0.7 + 1.6j):
    lhs, rhs, gap = conjugation_check(z, base, cfg, t)
    print(f"z = {complex(z):.3f}: grade-2 {lhs:.6f}  chordal {rhs:.6f}  gap {gap:.1e}")

times = np.linspace(0, t, 51)
tr2 = trace_sample(base.rescaled(1 / n), cfg, times, eps=1e-3)
tr1 = trace_sample(base, FlowConfig(n=1, dt=n * dt), n * times, eps=1e-6)
print("trace gap:", np.abs(tr2.points - principal_root(tr1.points, n)).max())

out = sys.argv[1] if len(sys.argv) > 1 else None
if out:
    with open(out, "w") as fh:
        fh.write(trace_to_csv(tr2))
    print("wrote", out)
