"""Exact polarization identities: recover a symmetric multilinear map from its diagonal."""

from .errors import (ArityMismatch, CharacteristicDividesFactorial, CharacteristicTwo,
                     DimensionMismatch, FieldMismatch, IndexOutOfRange, InexactScalar,
                     NotHomogeneous, NotPositiveSemidefinite, OddOrder, PolarizationError)
from .inclexcl import (SetSystem, complement_intersection_count, inclusion_exclusion,
                       verify_indicator_identity)
from .poly import Polynomial, lemma_check, nelson_identity_check
from .polarize import (coefficient_extraction, constant_check, polarize_offset,
                       polarize_operator, polarize_signed, polarize_subset_sum,
                       polarize_subset_sum_gray, recover, shift_expand, subset_sum)
from .scalar import GF, QQ, Mod, invert_factorial
from .symtensor import (DiagonalFn, SymMultiMap, diagonal, eval_direct, from_polynomial,
                        random_symmetric, to_polynomial)
from .vector import Vector
from .wick import (Covariance, gaussian_moment_single, isserlis, isserlis_diagonal_consistency,
                   monte_carlo_estimate, pair_partitions)

__version__ = "0.1.0"
