//! Correlators over formal points, their cobracket and specialization,
//! multiple polylogarithms and the symbol map.

mod cor;
mod letter;
mod point;
mod symbol;

pub use cor::{
    cobracket, cobracket_term_filtered, cor, cor_wedge, cor_weight, iterated_integral, li, multiple_li, specialize, specialize_points,
    specialize_wedges, CorPoint, CorTerm, CorVec, CorWedge, CorWedgeVec, DeformMode, DeformedPoint, Direction, MultipleLi,
};
pub use letter::{log_diff, WOne, WOneVec};
pub use point::{Affine, Monomial, Point};
pub use symbol::{
    b2_vector, clear_symbol_memo, delta_bar_iterated, set_symbol_checks, symbol, symbol_checks, symbol_tensor, symbol_term, symbol_wedges, B2Letter,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorrError {
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("cross-ratio of non-distinct points")]
    DegenerateCrossRatio,
    #[error("correlators need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("inhomogeneous input")]
    Inhomogeneous,
    #[error("invalid polylogarithm indices")]
    BadPolylogIndices,
    #[error("polylogarithm argument is zero")]
    ZeroArgument,
    #[error("partial products need monomial arguments")]
    NonMonomialArgument,
    #[error("deformation has no leading term")]
    InfiniteDeformation,
    #[error("weight {0} is not admissible here")]
    BadWeight(usize),
    #[error("symbol reconstruction failed for {0}")]
    SymbolMismatch(String),
}
