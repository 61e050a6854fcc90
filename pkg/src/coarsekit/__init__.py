"""coarsekit: desk-scale computations in coarse geometry.

Exact finite windows of uniformly locally finite metric spaces, the
inverse semigroup of bounded-displacement partial bijections, window
evaluators for boundary-dynamics criteria with independently checkable
certificates, slowly varying function construction, and exact-rational
truncations of the uniform Roe algebra.
"""

__version__ = "0.1.0"

from .spaces import (MetricReport, Partition, Point, SpacePresentation, UsageError,
                     Window, check_metric, neighborhood, separated_partition,
                     ulf_profile)
from .zoo import (CoarseUnionSpace, FinitePatternSpace, FreeGroupSpace, GridSpace,
                  PairedColumnSpace, SquareTupleSpace, TernarySupportSpace,
                  load_space, make_cluster_space, make_coarse_union, make_free_group,
                  make_grid, make_paired_columns, make_square_tuples, make_ternary,
                  pattern_window, window_from_spec)
from .translations import (BoundedRelation, PartialTranslation, apply_translation,
                           compose, decompose, fixed_points, identity_on, invert,
                           partial_translation, random_translation, relation_at,
                           relation_degree)
from .criteria import (BOUNDED, DIVERGING, MIXED, UNBOUNDED_AT_WINDOW,
                       ComponentDecomposition, EndsReport, NoWitnessAtScale,
                       PairFamilyWitness, SeparationProfile, SplitWitness,
                       TowerWitness, TrendReport, asdim0_profile, divergence_report,
                       ends_report, equal_annuli, find_pair_family_witness,
                       find_tower_witness, scale_components, separation_profile,
                       separation_value, split_witness, tower_bounds)
from .higson import (HigsonFunction, VariationReport, build_separating_function,
                     pointwise_max, variation_report)
from .roe import (BandOperator, ClusterLimitRep, DiagonalOperator, InvariantViolation,
                  KernelCheck, TailTranslation, add, adjoint, band, cluster_block,
                  cluster_rep, commutant_dimension, diagonal, expectation,
                  ideal_membership, indicator, kernel_check, multiply, scalar,
                  tail_translation, translation_matrix, vf, window_tail_translation)
from .verify import (check_pair_family, check_partition, check_split_witness,
                     check_tower_witness, check_translation_cover)
