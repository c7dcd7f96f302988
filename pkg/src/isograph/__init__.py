"""isograph: supersingular isogeny graphs with level structure.

Builds the graphs G(p, l, H) whose vertices are supersingular curves
carrying a level-H structure and whose edges are degree-l isogenies,
then computes and verifies their spectra, components, Weil-invariant
partitions, automorphisms and modular-curve dimension identities.
"""

from .errors import ClaimFalsified, InvariantBreach, UsageError
from .fields import (
    GF,
    FieldElement,
    FiniteField,
    dlog_in_mu_n,
    embedding,
    ext_field_build,
    frobenius_map,
    primitive_nth_root,
    sqrt,
)
from .curves import (
    AutGroup,
    Curve,
    CurvePoint,
    TorsionBasis,
    automorphism_group,
    canonical_model,
    curve_from_j,
    is_supersingular,
    isomorphisms_between,
    point_count,
    torsion_basis,
)
from .isogenies import Isogeny, kernel_subgroups, push_level_structure, velu, weil_pairing
from .level import (
    GL2,
    LevelStructureClass,
    LevelSubgroup,
    WeilInvariant,
    aut_of_pair,
    canonical_class,
    k_and_kprime,
    named_family,
    subgroup_from_generators,
    weil_invariant,
)
from .graphs import (
    CayleyGraph,
    GraphOperator,
    IsogenyGraph,
    Vertex,
    adjoint_matrix,
    borel_cartan_iso,
    build_graph,
    build_vertices,
    cayley_graph,
    component_split,
    enumerate_supersingular,
    graph_operator,
    graphs_equal,
    quotient_graph,
)
from .spectral import (
    GapReport,
    KMReport,
    Spectrum,
    classify_angles,
    eigenvalues,
    eta_scan,
    gap_report,
    km_density,
    km_report,
    verify_adjointness,
)
from .modular import (
    DimensionReport,
    check_dimensions,
    dim_new_gamma0,
    dim_pnew_gamma0,
    genus_X0,
)

__version__ = "0.1.0"
