"""Exact MAP inference for discrete Bayesian networks in the (min, +) semiring."""

from .errors import (BNetError, CycleDetected, DomainError, DuplicateEdge,
                     InfeasibleConfig, InvalidNode, NoExplanation, NotGraded,
                     ParseError, SliceTooLarge, StateSpaceTooLarge,
                     UnassignedVariable, UngradedSlice, UnknownFixture,
                     UnknownName, ValidationError)
from .graph import Dag, build_dag, topological_sort
from .hmm import hmm_evidence, hmm_to_network, viterbi_hmm
from .inference import (InferenceResult, Trellis, backtrace, explanation_count,
                        forward_dp, infer, slice_term_weight, trop_brute_force)
from .io import (parse_evidence, parse_network, serialize_evidence,
                 serialize_network)
from .model import (Cpt, NetworkModel, Variable, joint_probability,
                    make_network, marginal_brute_force, max_joint_brute_force,
                    parameter_count, validate)
from .netgen import GenConfig, gen_fixture, gen_graded, reseed_cpts
from .ranking import (RankAssignment, SliceStateSpace, compute_semi_ranks,
                      is_graded, slice_states)
from .tropical import (WeightModel, trop_add, trop_mul, tropicalize,
                       tropicalize_model)

__version__ = "0.1.0"
