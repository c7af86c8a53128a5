"""Free Fock space, its toy Fock space approximation, and free limit theorems."""

from .words import enumerate_adapted, is_adapted, word, word_key
from .toy import (ToyVector, SiteMatrix, apply_elementary, embed_apply, inner, vacuum_state,
                  alternating_moment, elementary, matrix_unit, site_op)
from .grid import Grid, StepTensor, PartitionSpec, project, embed_toy, ingest, test_vector
from .approximation import (DiscreteOpSpec, ConvergenceRow, discrete_op_apply, operator_convergence,
                            projection_convergence, multiplicity_discrete_op)
from .limits import (WalkSpec, DiscreteMeasure, MomentTable, walk_moment, walk_moment_oracle,
                     bernoulli_law, semicircle_moment, free_poisson_moment, multiplicity_demo,
                     two_dim_walk_moments)
from .oracle import (noncrossing_partitions, moments_to_cumulants, cumulants_to_moments,
                     free_sum_moments)

__version__ = "0.1.0"
