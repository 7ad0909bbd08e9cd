"""Noether-Lefschetz hypothesis checks on complete simplicial toric threefolds."""

from .catalog import catalog, parse_divisor
from .checks import (
    HypothesisReport,
    LedgerInput,
    codim_upper_bound,
    corollary4_bounds,
    is_m_regular,
    lemma41_ledger,
    theorem1_check,
    theorem3_check,
)
from .cohomology import (
    CohomologyTable,
    cohomology,
    euler_char,
    h0,
    is_ample,
    is_globally_generated,
    is_nef,
    is_very_ample,
    triple_intersection,
)
from .detcurve import check_avoidance, corollary44_check, curve_invariants, minor_eval, section_basis
from .geometry import RationalPolyhedron, SimplicialComplex, lattice_points, normalized_volume, primitive, reduced_betti
from .toric import (
    Fan,
    FanError,
    ToricThreefold,
    WeilDivisor,
    canonical_divisor,
    is_fano,
    is_gorenstein,
    is_qfactorial,
    is_smooth,
    validate_fan,
)
from .wps import delta_sigma, scan, wps_fan

__version__ = "0.1.0"
