//! The degree-three specialization: the explicit symmetrizer `S`, its
//! determinant and positivity lemmas, discriminant conditions, structural
//! assumptions, classification of characteristic points and the cutoff
//! extension of symbols.

pub mod classify;
pub mod conditions;
pub mod extend;
pub mod lemmas;
pub mod matrices;
pub mod report;

pub use classify::{classify_characteristics, CharacteristicClass, Classification};
pub use conditions::{check_miki, condition_e, condition_h, MikiOptions};
pub use extend::{extend_symbols, Cutoffs};
pub use lemmas::{
    check_lemma_setudo, check_positivity_b, check_positivity_dts, check_positivity_tj, setudo_floor,
    side_conditions, LemmaOptions, DEFAULT_EPS_BAR,
};
pub use matrices::{a_matrix, det_s, ds_matrix, j_b, s_matrix, sa_matrix};
pub use report::{ClauseReport, ConditionReport, GridPoint};
