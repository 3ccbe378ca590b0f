//! Exact rational scalars, sparse vectors and deterministic Gaussian
//! elimination.

mod linspace;
mod rat;
mod sparse;

pub use linspace::{intersect, kernel, member, rank, reduce, Aug, Echelon, LinSpace};
pub use rat::{binomial, factorial, ParseRatError, Rat};
pub use sparse::SparseVec;

/// Parses the canonical `c*b + c*b` form produced by `SparseVec`'s
/// `Display`, with `0` for the empty vector.
pub fn parse_sparse<B, E, F>(s: &str, mut basis: F) -> Result<SparseVec<B>, String>
where
    B: Ord + Clone,
    E: std::fmt::Display,
    F: FnMut(&str) -> Result<B, E>,
{
    let s = s.trim();
    let mut out = SparseVec::new();
    if s == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let (c, b) = term.split_once('*').ok_or_else(|| format!("missing coefficient in `{term}`"))?;
        let c: Rat = c.parse().map_err(|e: ParseRatError| e.to_string())?;
        if c.is_zero() {
            return Err(format!("zero coefficient in `{term}`"));
        }
        let b = basis(b).map_err(|e| e.to_string())?;
        if out.get(&b).is_some() {
            return Err(format!("repeated basis symbol in `{term}`"));
        }
        out.add_term(b, c);
    }
    Ok(out)
}
