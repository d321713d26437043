"""Analysis toolkit for a three-species discrete food-chain map.

Library layout:

- :mod:`trichain.map_core` -- parameters, states, the map, its Jacobian,
  domain predicates, logistic comparison maps.
- :mod:`trichain.equilibria` -- fixed points, eigenvalues, stability
  classes, critical surfaces, zone classifier.
- :mod:`trichain.escape` -- escape times, fate classification, plane
  rasters.
- :mod:`trichain.lyapunov` -- full Lyapunov spectrum along orbits.
- :mod:`trichain.bifurcation` -- parameter sweeps, local-maxima levels,
  invariant-curve onset location.
- :mod:`trichain.spectral` -- DFT magnitudes and frequency-halving
  detection.
- :mod:`trichain.cli` -- the ``trichain`` command.
"""

from .bifurcation import (
    PathSpec,
    SweepRecord,
    local_maxima,
    maxima_levels,
    neimark_sacker_gamma,
    sweep,
)
from .equilibria import (
    CriticalMu,
    FixedPointId,
    FixedPointReport,
    NoCrossingError,
    StabilityClass,
    ZoneId,
    classify,
    critical_mu_values,
    eigenvalues_closed,
    eigenvalues_numeric,
    fixed_point_coordinates,
    fixed_point_exists,
    fixed_points,
    in_H4,
    in_NM4,
    psi4,
    psi4_crossings,
    zone,
)
from .escape import (
    EscapeRaster,
    Fate,
    FateKind,
    PlaneSlice,
    classify_fate,
    escape_time,
    one_step_escapes,
    raster_slice,
)
from .lyapunov import LyapunovResult, lyapunov_spectrum, max_lyapunov
from .map_core import (
    Params,
    State,
    Trajectory,
    damped_logistic,
    in_domain_E,
    in_simplex,
    iterate,
    iterate_streaming,
    jacobian,
    logistic,
    step,
)
from .spectral import Peak, Spectrum, detect_halving, dft, dominant_peak, halving_chain

__version__ = "0.1.0"
