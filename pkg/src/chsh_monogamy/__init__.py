"""Monogamy of CHSH correlations: <B_AB>^2 + <B_AC>^2 <= 8 and the tools behind it."""

from .canonical import CanonicalForm, assemble_blocks, balance_pair, canonicalize_pair
from .chsh import (ChshMeasurements, CorrelationMatrix, chsh_operator, chsh_value,
                   correlation_matrix, horodecki_max, lemma2_value, optimal_directions,
                   real_max)
from .linalg import (ALGEBRAIC_TOL, OPT_TOL, EigenDecomposition, PureState, expectation,
                     hermitian_eig, kron, partial_trace)
from .monogamy import (JointMaxResult, PairExpectations, commutation_defect, joint_max,
                       monogamy_residual, pair_expectations, tight_family)
from .observables import (DichotomicObservable, commutator_observable, direction_observable,
                          pauli, planar_observable)
from .regions import RegionPoint, boundary_samples, classical_vertices, random_cloud
from .seesaw import (BellScenario, SeesawConfig, SeesawResult, build_bell_operator,
                     effective_operator, seesaw_maximize, sign_observable)
from .witness import (WitnessReport, anticommutes, local_commutator_bounds,
                      tsirelson_commutator_relation, witness_bound)

__version__ = "0.1.0"
