"""Monte Carlo checks that the grade-n flow has the expected symmetries in law.

Each experiment compares two samples with a two-sample KS test on the real and
imaginary parts at the 1% level, so a correct flow still fails now and
then: roughly one run in fifty per experiment.  The acceptance suite therefore
asks for nine passes out of ten seeds rather than ten.
"""

import numpy as np

from slelab.stochastic import backward_law_experiment, scale_invariance_experiment, stationarity_experiment

N, kappa = 2000, 2.0
bisector = 1.5 * np.exp(1j * np.pi / 4)
runs = [
    scale_invariance_experiment(1, kappa, 4.0, 2j, 0.25, N, seed=0),
    scale_invariance_experiment(2, kappa, 2.0, bisector, 0.2, N, seed=0),
    stationarity_experiment(2, kappa, 0.1, 0.3, bisector, N, seed=0),
    backward_law_experiment(2, kappa, 0.2, bisector, N, seed=0),
]
for rep in runs:
    print(f"{rep.experiment:<17} n={rep.n}  D={rep.statistic:.3f}  p={rep.p_value:.3f}  "
          f"swallowed={rep.swallow_fraction:.1%}  -> {rep.status}")
