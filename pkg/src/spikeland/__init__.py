"""Spiked tensor landscapes: critical-point complexity, trivialization
thresholds, sharp counting asymptotics, ground-state predictions, and the
Monte Carlo machinery that validates all of them against direct simulation.

The package is organized as:

* ``model``          -- shared parameter and value types.
* ``scalar_core``    -- the scalar building blocks: complexity surfaces,
                        their partial derivatives, ridge curves, Laplace
                        factors, and the weighted-polynomial machinery.
* ``thresholds_gse`` -- critical signal strengths and the closed-form
                        ground-state energy / latitude.
* ``kac_rice``       -- expected counts on latitude-energy windows: exact
                        determinant identities, two-term asymptotics, the
                        sharp leading term, and the limit constant.
* ``rmt_mc``         -- random-matrix Monte Carlo: GOE sampling, determinant
                        estimates, Gaussian-integral cross-checks, tail
                        asymptote error curves.
* ``landscape_sim``  -- direct simulation of sampled landscapes: evaluation,
                        spherical derivatives, moment checks, descent-based
                        ground-state estimation, and exact critical-point
                        censuses in two dimensions.
* ``cli``            -- the ``spikeland`` command-line interface.
"""

from .model import ComplexityValue, LandscapePoint, ModelParams
from .rng import default_workers, parallel_map, substream

__all__ = [
    "ComplexityValue",
    "LandscapePoint",
    "ModelParams",
    "default_workers",
    "parallel_map",
    "substream",
]

__version__ = "0.1.0"
