"""Certified spectra of Hill operators with energy-dependent potentials.

The package computes the quasi-periodic, 2-periodic, Dirichlet, Neumann and
mixed spectra of -y'' + V(x, lambda) y = lambda y with V analytic in lambda,
certifies where those spectra are real, builds Green kernels for the
resolvent, and drives the third-order pipeline of the good Boussinesq
equation (ramifications, three-point eigenvalues, Floquet reduction back to
a Hill potential).
"""

from .boussinesq import (Monodromy3, MultiplierSet, ThirdOrderCoeffs,
                         cubic_discriminant, discriminant_handle,
                         floquet_psi3, integrate_third_order,
                         label_by_windows, multipliers, ram_asymptotic,
                         ramifications, reduce_to_hill,
                         three_point_determinant, three_point_eigenvalues,
                         three_point_handle, window_edges, window_index,
                         zeta_asymptotic)
from .errors import (BandStructureError, BoundaryZeroError, ConfigError,
                     DomainError, HillbandsError, IntegrationError,
                     NearRamificationError, SpectralPointError,
                     SubdivisionDepthError, UnsupportedRegionError,
                     WeylSingularityError, WindingPrecisionError)
from .fundsol import (DEFAULT_CONFIG, FundamentalData, IntegratorConfig,
                      fundamental_values, integrate_fundamental,
                      picard_fundamental, wronskian_defect)
from .lyapunov import (DiscriminantSample, delta1, delta2, discriminant,
                       discriminant_value, envelope_check)
from .potentials import (ConstantPotential, CosFamilyPotential,
                         ExpFamilyPotential, FourierProfile, HalfPlane,
                         HalfStrip, LambdaIndependentPotential, Potential,
                         RationalDecayPotential, Rect, Sector,
                         TabulatedPotential, ZeroPotential, load_potential,
                         potential_from_json, potential_to_json)
from .reality import (RealityCertificate, certify_derivative_strip,
                      certify_halfplane, certify_strip, eigenvalue_imag_slack,
                      xi_functional)
from .resolvent import (GreenKernelDirichlet, GreenKernelQuasi,
                        green_dirichlet, green_quasi, resolvent_residual)
from .rootfind import LocatedZero, count_zeros, isolate_zeros, real_scan, \
    refine_newton
from .spectra import (BandFunctionTable, BandStructure, Eigenvalue, Problem,
                      SpectralWorkspace, assemble_bands, band_functions,
                      dirichlet_spectrum, interlacing_report, mixed_spectra,
                      neumann_spectrum, quasi_spectrum,
                      region_is_real_certified, two_periodic_spectrum)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
