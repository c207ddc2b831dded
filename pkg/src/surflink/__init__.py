"""Symmetric quandle colorings of marked-vertex surface-link diagrams and
the ribbon-concordance obstructions they support."""

from .algebra import (
    FiniteQuandle,
    GoodInvolution,
    MalformedTableError,
    QuandleAction,
    SymmetricQuandle,
    VerificationReport,
    enumerate_good_involutions,
    fixed_points,
    involution_from_spec,
    make_dihedral,
    make_regular_action,
    make_trivial_action,
    make_trivial_quandle,
    quandle_from_spec,
    quandle_from_table_text,
    verify_action,
    verify_good_involution,
    verify_quandle,
)
from .diagram import (
    ChDiagram,
    ChdError,
    ChdParseError,
    Crossing,
    FaceMap,
    LinkDiagram,
    MarkedVertex,
    PlanarityError,
    SurfaceComponent,
    UnpairedEdgeError,
    ch_index,
    count_components,
    euler_characteristic,
    faces,
    flip_edge,
    mirror,
    parse_chd,
    relabel,
    smooth,
    surface_components,
    to_chd,
    validate,
)
from .coloring import (
    CapExceededError,
    Coloring,
    ConstraintSystem,
    EnumerationBudgetError,
    brute_force_all,
    build_constraints,
    count_colorings,
    is_monochromatic_fixed_point,
    iter_solutions,
    solve_all,
)

__version__ = "0.1.0"
