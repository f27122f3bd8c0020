"""rigicount: realisation counting and rigidity certificates for bar-joint
frameworks.

The package computes complex and real realisation numbers of d-rigid graphs
by tracking the pinned edge-length system with a total-degree homotopy,
applies count-aware graph operations (extensions, splits, replacements,
substitutions, sphere contractions), and emits machine-checkable
certificates for divisibility laws and lower bounds such as the
``2^(n-4)`` bound for triangulated spheres.
"""

from .graphs import (
    Graph,
    GraphFormatError,
    Triangulation,
    common_neighbors,
    parse_graph,
    parse_triangulation,
    serialize_graph,
    triangulation_graph,
)
from .frameworks import (
    DegeneratePins,
    Framework,
    canonical_pin,
    maxwell_threshold,
    rigidity_matrix,
    validate_dimension,
)
from .certificates import (
    Certificate,
    HypothesisNotEstablished,
    PrimeFactorBudget,
    certify_sphere_bound,
    check_edge_addition_drop,
    check_spanning_divisibility,
    check_subgraph_divisibility,
    greedy_augment,
    verify_certificate,
    verify_operation_effect,
)
from .spheres import bundled_spheres, load_bundled_sphere
from .rigidity import (
    DEFAULT_SEED,
    NotRigid,
    RankWitness,
    generic_rank,
    is_d_rigid,
    is_minimally_d_rigid,
    rigidity_report,
    spanning_minimally_rigid_subgraph,
)
from .operations import (
    ConstructionSequence,
    ConstructionStep,
    NoContractibleEdge,
    contract_edge,
    contract_triangulation_edge,
    one_extension,
    spider_split,
    split_triangulation_vertex,
    steinitz_contract,
    subgraph_substitution,
    vertex_split,
    xv_replacement,
    zero_extension,
)
from .config import RunConfig
from .engine import (
    CountDisagreement,
    CountResult,
    ExcessiveFailures,
    PathBudgetExceeded,
    PinnedSystem,
    SolutionSet,
    build_pinned_system,
    count_complex,
    count_real_samples,
    track_fiber,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphFormatError",
    "Triangulation",
    "common_neighbors",
    "parse_graph",
    "parse_triangulation",
    "serialize_graph",
    "triangulation_graph",
    "DegeneratePins",
    "Framework",
    "canonical_pin",
    "maxwell_threshold",
    "rigidity_matrix",
    "validate_dimension",
    "Certificate",
    "HypothesisNotEstablished",
    "PrimeFactorBudget",
    "certify_sphere_bound",
    "check_edge_addition_drop",
    "check_spanning_divisibility",
    "check_subgraph_divisibility",
    "greedy_augment",
    "verify_certificate",
    "verify_operation_effect",
    "bundled_spheres",
    "load_bundled_sphere",
    "DEFAULT_SEED",
    "NotRigid",
    "RankWitness",
    "generic_rank",
    "is_d_rigid",
    "is_minimally_d_rigid",
    "rigidity_report",
    "spanning_minimally_rigid_subgraph",
    "ConstructionSequence",
    "ConstructionStep",
    "NoContractibleEdge",
    "contract_edge",
    "contract_triangulation_edge",
    "one_extension",
    "spider_split",
    "split_triangulation_vertex",
    "steinitz_contract",
    "subgraph_substitution",
    "vertex_split",
    "xv_replacement",
    "zero_extension",
    "RunConfig",
    "CountDisagreement",
    "CountResult",
    "ExcessiveFailures",
    "PathBudgetExceeded",
    "PinnedSystem",
    "SolutionSet",
    "build_pinned_system",
    "count_complex",
    "count_real_samples",
    "track_fiber",
]
