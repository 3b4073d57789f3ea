"""Random walks on wedge subgraphs of Z^(d+1).

The library builds wedges from profile functions, derives the integer
staircases that control their geometry, and offers four views of the
recurrence question: a series classifier, exact effective resistances
with certified two-sided bounds, explicit unit flows, and Monte Carlo
walkers for Green values and collision counts.
"""

__version__ = "0.1.0"

from .classify import (
    VERDICTS,
    SeriesReport,
    classify,
    doubling_schedule,
    partial_sums,
)
from .errors import (
    AnchorOutsideTruncationError,
    DisconnectedError,
    DomainMismatchError,
    HorizonExceededError,
    NegativeValueError,
    NonMonotoneError,
    NotInTubeError,
    NotInWedgeError,
    OutsideTruncationError,
    SchemaError,
    SolverFailureError,
    WedgewalkError,
    ZeroDimensionError,
)
from .flow import (
    FlowEnergyBound,
    Tube,
    UnitFlow,
    anchored_flow,
    derive_tube,
    layer_up_value,
    layered_unit_flow,
    resistance_upper_bound,
    staircase_wedge_vertices,
    transport_flow,
    verify_straightening,
    verify_tube_properties,
)
from .geometry import (
    Layer,
    axial_box,
    crossing_edge_counts,
    enumerate_truncation,
    in_wedge,
    layer,
    layer_counts,
    layer_piece,
    layer_size_bounds,
    neighbors,
    origin,
    truncation_edges,
    wedge_degree,
)
from .network import (
    SolveReport,
    TruncationGraph,
    build_truncation_graph,
    effective_resistance,
    green_diagonal,
    potentials,
    resistance_lower_bound,
    shorted_lower_bound,
)
from .profiles import (
    Profile,
    ProfileFunction,
    Staircase,
    Vertex,
    box_reciprocal_terms,
    box_sizes,
    derive_staircase,
    first_reach_level,
    layer_index,
    layer_index_array,
    validate_profile,
)
from .walker import (
    CollisionStats,
    GreenEstimate,
    WalkConfig,
    collision_run,
    green_mc,
    step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
