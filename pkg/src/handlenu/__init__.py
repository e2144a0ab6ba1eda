"""Handle-decomposition replay, boundary-complexity bounds, and
piece-counting obstructions for compact manifolds."""

from .homology import (
    ConnectedSum,
    DescriptorError,
    Explicit,
    HomologyVector,
    Product,
    RationalChainComplex,
    Sphere,
    Surface,
    betti,
    chain_betti,
    desc_equal,
    descriptor_from_json,
    descriptor_to_json,
    dimension,
    normalize,
    pretty,
    total_betti,
)
from .trace import (
    AttachError,
    BoundaryComponent,
    BoundaryState,
    Declared,
    Dim3One,
    Dim3Three,
    Dim3Two,
    Dim3Zero,
    HandleRecord,
    NonSeparating,
    OrderedHandleDecomposition,
    ReplayError,
    Separating,
    TraceError,
    attach,
    canonical_dumps,
    dualize,
    reorder,
    replay,
    trace_from_json,
    trace_to_json,
    validate,
)
from .nu import (
    Bound,
    NuBoundsReport,
    NuEvaluation,
    e_mu,
    heegaard_upper,
    iter_linear_extensions,
    lower_bound_rules,
    nu_bounds,
    nu_of_ordering,
    search_min_nu,
)
from .union import (
    ChainReport,
    GlueError,
    GlueSpec,
    InequalityReport,
    check_chain,
    check_key_inequality,
    compose,
)
from .obstruction import (
    DecompositionGraph,
    HandleBudget,
    RefutationVerdict,
    betti1_floor,
    h_upper,
    interface_lower_bound,
    pieces_ceiling,
    refute,
)
from .catalog import CatalogEntry, Certification, lookup, names, verify_all

__version__ = "0.1.0"
