"""Finite inverse semigroups, coverages, nuclei, and groupoids of filters.

The package computes, on finite instances: the semigroup of compatible order
ideals and the universal pseudogroup of a coverage, germs and filter
groupoids with their element and patch topologies, bisection pseudogroups,
spectra of finite frames, groupoid embeddings induced by nuclei, subspaces
cut out by coverages, and tight filters with their groupoid.
"""

from .coverages import (
    AmbientJoins,
    Coverage,
    CoverageReport,
    check_axioms,
    close_coverage,
    empty_coverage,
    extend_from_idempotents,
    induced_coverage,
    is_cover_to_join,
    minimal_covers,
    restrict_to_idempotents,
    tight_coverage,
    union,
)
from .filters import (
    FilterFamily,
    PrincipalFilter,
    enumerate_filters,
    filter_at,
    filter_from_germ_data,
    germ,
    is_completely_prime,
    range_filter,
    ultrafilters,
)
from .fixtures import (
    chain_semilattice,
    cyclic_group,
    make_fixture,
    powerset_semilattice,
    symmetric_inverse,
)
from .groupoids import (
    FiniteGroupoid,
    bisections,
    check_etale,
    filter_groupoid,
    find_isomorphism,
    groupoids_isomorphic,
    is_sober,
    nucleus_embedding,
    pair_groupoid,
    prime_filter_groupoid,
    reduce_groupoid,
    sober_space_report,
    sobriety_report,
    space_as_groupoid,
    spectrum,
    subspace_from_coverage,
    validate_groupoid,
)
from .ideals import (
    IdealSemigroup,
    Nucleus,
    NucleusQuotient,
    Pseudogroup,
    UniversalPseudogroup,
    apply_nucleus_quotient,
    as_frame,
    as_pseudogroup,
    build_ideal_semigroup,
    close_mask,
    generated_coverage,
    is_pseudogroup,
    nucleus_from_coverage,
    nucleus_on_pseudogroup,
    reconstruction_isomorphism,
    universal_pseudogroup,
    verify_universal_property,
)
from .semigroups import (
    FiniteInverseSemigroup,
    compatible,
    down_set,
    from_op,
    idempotents,
    leq,
    restrict,
    up_set,
    validate_table,
)
from .tight import (
    tight_filter_topology,
    tight_filters,
    tight_filters_by_closure,
    tight_frame_iso,
    tight_groupoid,
    tight_nucleus_direct,
    tight_subspace_of_filter_space,
)
from .topology import FiniteTopology, discrete_topology, generate_topology

__version__ = "0.1.0"
