"""Hermite-basis numerics for the sharp Strichartz inequality of the free
Schrödinger equation: resonant coefficient tables, the Strichartz
functional and its flows, constrained Hessian spectra at Hermite critical
points, and the combinatorial bound behind nonpositivity at the Gaussian.
"""
from .flows import (direct_quadrature_oracle, fourier_phase_map, gradient_flow,
                    hamiltonian_flow, strichartz_gradient, strichartz_numerator,
                    strichartz_value)
from .hermite import free_evolution, free_evolution_coeff, hermite_fn, hermite_functions
from .hessian import (assemble_hessian_1d, assemble_hessian_gaussian, positive_ratio,
                      spectrum_1d, spectrum_gaussian)
from .inequality import column_sum_check, hessest_check, hessest_lhs
from .integrals import lambda6, weighted_pair_integral
from .lambda_table import LambdaTable, build_lambda_table, cached_table
from .linalg import Spectrum, symmetric_eigenvalues
from .qmho import qmho_flow, qmho_functional

__version__ = "0.1.0"
