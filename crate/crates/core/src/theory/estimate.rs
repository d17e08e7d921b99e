use crate::densify::DensifiedSketch;
use crate::error::{config, Result};
use crate::sketch::OphSketch;

/// Number of positions where the two sketches agree.
pub fn match_count(d1: &DensifiedSketch, d2: &DensifiedSketch) -> Result<usize> {
    if d1.scheme() != d2.scheme() {
        return Err(config(format!(
            "comparing {} sketch with {} sketch",
            d1.scheme(),
            d2.scheme()
        )));
    }
    if d1.len() != d2.len() {
        return Err(config(format!("sketch lengths {} and {}", d1.len(), d2.len())));
    }
    Ok(d1
        .values()
        .iter()
        .zip(d2.values())
        .filter(|(a, b)| a == b)
        .count())
}

/// Fraction of agreeing positions; unbiased for the resemblance under both
/// schemes.
pub fn estimate_resemblance(d1: &DensifiedSketch, d2: &DensifiedSketch) -> Result<f64> {
    let hits = match_count(d1, d2)?;
    if d1.is_empty() {
        return Err(config("sketches have no positions"));
    }
    Ok(hits as f64 / d1.len() as f64)
}

/// Number of bins empty in both OPH sketches.
pub fn simultaneous_empty_count(sk1: &OphSketch, sk2: &OphSketch) -> Result<usize> {
    if sk1.len() != sk2.len() {
        return Err(config(format!("sketch lengths {} and {}", sk1.len(), sk2.len())));
    }
    Ok(sk1
        .bins()
        .iter()
        .zip(sk2.bins())
        .filter(|(a, b)| a.is_none() && b.is_none())
        .count())
}
