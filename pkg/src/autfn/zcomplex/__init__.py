from .lattice import (
    SNFResult,
    check_snf,
    coordinate_rank,
    invariant_factors,
    is_primitive,
    primitive_vectors,
    reduce_rank,
    smith_normal_form,
    spans_direct_summand,
    unimodular_complete,
)
from .quotient import abelianized_simplex
from .simplicial import (
    HomologyGroup,
    Simplex,
    SimplicialComplex,
    format_complex,
    homology,
    parse_complex,
    simplex,
    star_link,
    truncated_Bn,
)
