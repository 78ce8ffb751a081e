"""dendrolab: finite metric trees, hyperspace metrics, maximal chains and
back-and-forth homeomorphisms, all in exact rational arithmetic."""

from .builder import (
    BondingFunction,
    RefinementSchedule,
    build_wm,
    gamma_chain,
    inverse_limit_stage,
    rational_branch_endpoints,
)
from .chains import (
    ALL_ARCS,
    ROOT_ARCS,
    Chain,
    check_full_chain,
    check_generic_conditions,
    generate_generic_chain,
    hitting_level,
    hitting_time,
    is_willful,
    root,
    root_continuity_probe,
)
from .errors import (
    AmbientMismatchError,
    DendrolabError,
    InvalidPointError,
    PreconditionError,
    RefineNeeded,
)
from .fullness import (
    ARC,
    COMPONENT,
    FIBER,
    endpoint_diff,
    full_copy_diagnostics,
    is_full,
    is_maximal_branch,
    is_nowhere_dense,
    perturb_to_full,
)
from .homeo import (
    ChainsContext,
    PartialIso,
    SubcontinuaContext,
    bf_chains,
    bf_chains_omega,
    bf_subcontinua,
    check_branch_endpoint_conditions,
    extend_and_verify,
    verify_invariants,
)
from .hyperspace import (
    OpenBall,
    VietorisBasic,
    directed_hausdorff,
    hausdorff,
    hausdorff2,
    vietoris_member,
)
from .nerve import (
    Cover,
    GraphBall,
    MetricGraph,
    NerveGraph,
    Subspace,
    graph_from_dendrite,
    graph_from_subdendrite,
    is_tree_nerve,
    nerve,
    tree_approximation,
    tree_like_check,
)
from .tree import (
    OMEGA,
    Component,
    Dendrite,
    Point,
    Subdendrite,
    arc,
    between,
    branch_points,
    components_at,
    distance,
    endpoints,
    first_point_map,
    median,
    node_point,
    order_of,
    point_along_path,
)

__all__ = [name for name in dir() if not name.startswith("_")]
