//! Locally repairable codes and the additive codes built from their parity checks.
//!
//! Using the parity-check matrix of an LRC as `G0` turns dual codewords that
//! repair one erased symbol into masking vectors that rewrite around one stuck
//! cell, so repair locality on one side becomes rewriting locality on the other.

use serde::Serialize;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::lwc::{analyze, singleton_value, AdditiveCode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrcProfile {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Symbols read to rebuild each coordinate; `None` when no dual codeword covers it.
    pub repair_locality: Vec<Option<usize>>,
    pub r: Option<usize>,
    pub optimal: bool,
}

/// Single-erasure repair locality of every coordinate of `code`.
pub fn repair_locality(code: &LinearCode) -> Result<LrcProfile> {
    let d = code.min_distance()?;
    let repair_locality: Vec<Option<usize>> =
        code.dual().covering_weights()?.into_iter().map(|w| w.map(|w| w - 1)).collect();
    let r = repair_locality.iter().copied().collect::<Option<Vec<_>>>().and_then(|l| l.into_iter().max());
    let optimal = r.is_some_and(|r| d == singleton_value(code.n(), code.k(), r));
    Ok(LrcProfile { n: code.n(), k: code.k(), d, repair_locality, r, optimal })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Repair {
    pub value: bool,
    /// Coordinates read during repair.
    pub accessed: Vec<usize>,
}

/// Rebuilds coordinate `erased` of a stored codeword from the other symbols.
///
/// The value at `erased` in `observed` is ignored. The repair reads exactly the
/// support of a lightest dual codeword covering `erased`, minus `erased` itself.
pub fn repair_symbol(code: &LinearCode, observed: &BitVector, erased: usize) -> Result<Repair> {
    if observed.len() != code.n() {
        return Err(Error::dim(format!("word has length {}, expected n = {}", observed.len(), code.n())));
    }
    let h = code.dual().min_covering_word(erased)?.ok_or(Error::Unrepairable(erased))?;
    let accessed: Vec<usize> = h.support().filter(|&j| j != erased).collect();
    let value = accessed.iter().fold(false, |acc, &j| acc ^ observed.get(j));
    Ok(Repair { value, accessed })
}

/// The additive code with `G0` equal to the parity-check matrix of `lrc`.
pub fn lwc_from_lrc(lrc: &LinearCode) -> Result<AdditiveCode> {
    AdditiveCode::build(lrc.parity_check().clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrcSummary {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub d_dual: usize,
    pub r: Option<usize>,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LwcSummary {
    pub d_star: usize,
    pub r_star: Option<usize>,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub lrc: LrcSummary,
    pub lwc: LwcSummary,
    /// Whether `(d★, r★) = (d, d⊥ − 1)` and `r = d⊥ − 1` were measured to hold.
    pub identities_hold: bool,
    /// The identities are only guaranteed for cyclic inputs.
    pub cyclic: bool,
}

/// Measures both sides independently and compares them.
pub fn verify_duality(lrc: &LinearCode) -> Result<DualityReport> {
    let profile = repair_locality(lrc)?;
    let d_dual = lrc.dual().min_distance()?;
    let lwc = lwc_from_lrc(lrc)?;
    let a = analyze(&lwc)?;

    let expected_r = d_dual - 1;
    let identities_hold = a.d_star == profile.d && a.r_star == Some(expected_r) && profile.r == Some(expected_r);
    Ok(DualityReport {
        lrc: LrcSummary { n: profile.n, k: profile.k, d: profile.d, d_dual, r: profile.r, optimal: profile.optimal },
        lwc: LwcSummary { d_star: a.d_star, r_star: a.r_star, optimal: a.optimal },
        identities_hold,
        cyclic: lrc.is_cyclic(),
    })
}
