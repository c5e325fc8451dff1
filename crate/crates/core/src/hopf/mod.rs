//! Comultiplication candidates on finite-dimensional *-algebras and exact
//! checks of the Hopf and multiplier-Hopf axioms.

mod algebra;
mod axioms;
mod candidate;
mod wedderburn;

pub use algebra::{
    compose, function_algebra, group_algebra, invert, matrix_algebra, perm_word, permutations, FiniteAlgebra,
    FiniteGroup,
};
pub use axioms::{
    check_axioms, check_axioms_with, check_coassociativity, check_magic_relations, check_t1_t2, cointegral_map_rank,
    find_cointegral, verify_corepresentation, AxiomOptions, AxiomReport, AxiomVerdict, CointegralReport, CorepReport,
    Status, TRanks, TripleSweep, DEFAULT_TRIPLE_SAMPLES, EXHAUSTIVE_TRIPLE_LIMIT,
};
pub use candidate::{
    cyclic_group_model, group_ring_model, literal_delta, literal_index, literal_index_inverse, std_model,
    ComultiplicationCandidate, Target, Tensor, Tensor2, Tensor3,
};
pub use wedderburn::{
    artin_wedderburn, center, discrete_qg_check, group_ring_descriptor, is_semisimple, DiscreteQuantumGroupReport,
    GroupRingDescriptor, GroupType, WedderburnReport, MAX_WEDDERBURN_DIM,
};
