"""Summation of divergent series and cohomological equations psi(t) - psi(qt) = theta(t)."""
from .coboundary import (
    CEVerdict,
    FiniteDynSys,
    QOrbitDecomposition,
    TrigPoly,
    coboundary_of,
    nonmeasurability_verdict,
    q_orbit_decomposition,
    solve_finite_ce,
    solve_trig_ce,
)
from .ergodic import (
    OrbitalSeriesSpec,
    birkhoff_average,
    l2_norm_orbital,
    lacunarity_kappa,
    level_set_measure,
    orbital_partial_sum,
    orbital_report,
    summation_from_solution,
)
from .errors import DivsumError
from .poly import Poly, RationalFn, RootSet, find_roots, partial_fractions, poly_divmod, poly_eval
from .quasiexp import (
    QuasiExpSeries,
    Spectrum,
    SubspaceBasis,
    decompose,
    detect_recurrence,
    epsilon1,
    extension_obstruction,
    is_summable,
    regularize,
    spectrum,
    theta_xL,
)
from .scalar import GaussianRational, exact
from .sequences import SampledSeries, SumValue, delta, delta_preimage, partial_sums, shift, standard_sum
from .summation import cesaro1, euler_sum, generating_function, periodic_sum, radius

__version__ = "0.1.0"
