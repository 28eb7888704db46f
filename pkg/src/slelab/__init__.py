"""Grade-n Loewner evolutions and the Virasoro null vectors that go with them.

:mod:`slelab.algebra` and :mod:`slelab.bridge` do exact rational algebra on
Verma modules and solve for kappa.  :mod:`slelab.loewner` and
:mod:`slelab.stochastic` integrate the flow with Brownian drives and test its
laws by Monte Carlo.
"""

__version__ = "0.1.0"
