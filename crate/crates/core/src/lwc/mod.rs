//! Additive (coset) encoding for memories with stuck-at cells.
//!
//! A message `m` of `k` bits is stored as `c = (m, 0) + G0 · p`, where the
//! parity vector `p` is chosen so that `c` agrees with every stuck cell. The
//! decoder computes `m̂ = H0ᵀ y`, which ignores the `G0 · p` term because
//! `H0ᵀ G0 = 0`.
//!
//! When the last `n − k` rows of `G0` are not invertible the code is brought to
//! systematic form on permuted coordinates: `(m, 0)` then places message bit
//! `j` at coordinate `perm[j]` and zeros at the parity coordinates
//! `perm[k..]`. All public inputs and outputs stay in the original coordinate
//! order.

mod bounds;

use std::sync::OnceLock;

use serde::Serialize;

pub use bounds::{kuznetsov_bounds, singleton_bound, KuznetsovBounds};
pub(crate) use bounds::singleton_value;

use crate::channel::ChannelState;
use crate::codes::{for_each_codeword, LinearCode, DEFAULT_ENUM_CAP};
use crate::error::{Error, MaskingFailure, Result};
use crate::gf2::{solve, BitMatrix, BitVector, Solution};

/// Largest parity coset (as a power of two) searched exhaustively for the cheapest codeword.
pub const DEFAULT_COSET_CAP: u32 = 20;

/// An additive masking code built from `G0 ∈ F₂^{n×(n−k)}`.
#[derive(Debug)]
pub struct AdditiveCode {
    n: usize,
    k: usize,
    g0: BitMatrix,
    h0: BitMatrix,
    h0t: BitMatrix,
    r: BitMatrix,
    c0: LinearCode,
    perm: Vec<usize>,
    coset_cap: u32,
    analysis: OnceLock<LwcAnalysis>,
}

/// Distance and locality profile of an additive code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LwcAnalysis {
    pub n: usize,
    pub k: usize,
    pub d_star: usize,
    /// Rewriting locality per coordinate; `None` where no codeword of `C0` covers the cell.
    pub locality: Vec<Option<usize>>,
    pub r_star: Option<usize>,
    /// `n − k − ⌈k/r★⌉ + 2`.
    pub bound: Option<usize>,
    pub optimal: bool,
}

/// Cost accounting for one write.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    /// `∥c∥ − t∖0` for an initial write into all-zero memory.
    pub write_cost: Option<usize>,
    /// `∥c − c′∥` for an update.
    pub rewrite_cost: Option<usize>,
    /// Right-hand side of the single-defect cost bound, present when at most one cell is stuck.
    pub bound: Option<usize>,
    pub cells_touched: Vec<usize>,
    /// False when the parity coset was too large to search and the first feasible vector was used.
    pub minimal: bool,
}

impl CostReport {
    pub fn cost(&self) -> usize {
        self.write_cost.or(self.rewrite_cost).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Encoding {
    pub codeword: BitVector,
    pub parity: BitVector,
    pub report: CostReport,
}

impl AdditiveCode {
    /// Builds the code and its systematic decoder.
    ///
    /// Parity coordinates are chosen greedily from the last row of `G0`
    /// upward, so the permutation is the identity whenever the bottom
    /// `(n − k) × (n − k)` block is already invertible.
    pub fn build(g0: BitMatrix) -> Result<Self> {
        let (n, r) = (g0.rows(), g0.cols());
        if r == 0 {
            return Err(Error::Construction("G0 has no columns (n - k = 0)".into()));
        }
        if r >= n {
            return Err(Error::Construction(format!("G0 is {n}x{r}, leaving no message cells (k = 0)")));
        }
        if g0.rank() != r {
            return Err(Error::Construction(format!("G0 has rank {} but {r} columns", g0.rank())));
        }
        let k = n - r;

        let mut basis: Vec<(usize, BitVector)> = Vec::with_capacity(r);
        let mut parity = Vec::with_capacity(r);
        for i in (0..n).rev() {
            if parity.len() == r {
                break;
            }
            let mut v = g0.row(i).clone();
            for (p, b) in &basis {
                if v.get(*p) {
                    v.xor_assign(b);
                }
            }
            let lead = v.support().next();
            if let Some(p) = lead {
                for (_, b) in basis.iter_mut() {
                    if b.get(p) {
                        b.xor_assign(&v);
                    }
                }
                basis.push((p, v));
                parity.push(i);
            }
        }
        parity.sort_unstable();
        let info: Vec<usize> = (0..n).filter(|i| parity.binary_search(i).is_err()).collect();

        let b_inv = g0.select_rows(&parity).inverse().expect("selected rows are independent");
        let r_mat = g0.select_rows(&info).mul(&b_inv)?;

        let mut h0t = BitMatrix::zeros(k, n);
        for (j, &i) in info.iter().enumerate() {
            h0t.set(j, i, true);
            for l in r_mat.row(j).support() {
                h0t.set(j, parity[l], true);
            }
        }
        if !h0t.mul(&g0)?.is_zero() {
            return Err(Error::Construction("decoder matrix is not orthogonal to G0".into()));
        }

        let c0 = LinearCode::from_generator(g0.clone())?;
        let perm = info.into_iter().chain(parity).collect();
        Ok(Self {
            n,
            k,
            h0: h0t.transpose(),
            h0t,
            r: r_mat,
            g0,
            c0,
            perm,
            coset_cap: DEFAULT_COSET_CAP,
            analysis: OnceLock::new(),
        })
    }

    /// Overrides the exhaustive parity-search cap.
    pub fn with_coset_cap(mut self, cap: u32) -> Self {
        self.coset_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn g0(&self) -> &BitMatrix {
        &self.g0
    }

    /// Decoder matrix (`n × k`, original coordinates).
    pub fn h0(&self) -> &BitMatrix {
        &self.h0
    }

    /// `R` with `G0 = [R; I]` on the permuted coordinates.
    pub fn r_matrix(&self) -> &BitMatrix {
        &self.r
    }

    /// The code spanned by the columns of `G0`.
    pub fn c0(&self) -> &LinearCode {
        &self.c0
    }

    /// `perm[j]` is the original coordinate at systematic position `j`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn information_positions(&self) -> &[usize] {
        &self.perm[..self.k]
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.perm[self.k..]
    }

    /// `(m, 0_{n−k})` on the systematic coordinates.
    pub fn place_message(&self, m: &BitVector) -> Result<BitVector> {
        if m.len() != self.k {
            return Err(Error::dim(format!("message has length {}, expected k = {}", m.len(), self.k)));
        }
        let mut x = BitVector::zeros(self.n);
        for j in m.support() {
            x.set(self.perm[j], true);
        }
        Ok(x)
    }

    /// `m̂ = H0ᵀ y`.
    pub fn decode(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.n {
            return Err(Error::dim(format!("word has length {}, expected n = {}", y.len(), self.n)));
        }
        self.h0t.mul_vec(y)
    }

    /// Cached [`analyze`] result.
    pub fn analysis(&self) -> Result<&LwcAnalysis> {
        if let Some(a) = self.analysis.get() {
            return Ok(a);
        }
        let a = analyze(self)?;
        Ok(self.analysis.get_or_init(|| a))
    }

    fn check_state(&self, s: &ChannelState) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::dim(format!("channel state has length {}, expected n = {}", s.len(), self.n)));
        }
        Ok(())
    }

    /// Finds the parity vector minimizing `cost` among all that mask `s`.
    fn choose_parity(
        &self,
        base: &BitVector,
        s: &ChannelState,
        cost: impl Fn(&BitVector) -> usize,
    ) -> Result<(BitVector, BitVector, bool)> {
        let defects: Vec<(usize, bool)> = s.defects().collect();
        let rows: Vec<usize> = defects.iter().map(|&(i, _)| i).collect();
        let a = self.g0.select_rows(&rows);
        let rhs = BitVector::from_bits(&defects.iter().map(|&(i, v)| v ^ base.get(i)).collect::<Vec<_>>());
        let (particular, nullbasis) = match solve(&a, &rhs)? {
            Solution::Solvable { particular, nullbasis } => (particular, nullbasis),
            Solution::Inconsistent { certificate } => {
                let defects = certificate.support().map(|j| rows[j]).collect();
                return Err(Error::Masking(MaskingFailure { defects }));
            }
        };

        let mut word = base.clone();
        word.xor_assign(&self.g0.mul_vec(&particular)?);
        if nullbasis.len() as u32 > self.coset_cap {
            return Ok((particular, word, false));
        }

        let images: Vec<BitVector> = nullbasis.iter().map(|v| self.g0.mul_vec(v)).collect::<Result<_>>()?;
        let mut p = particular;
        let mut best = (cost(&word), p.clone(), word.clone());
        for step in 1u64..(1u64 << nullbasis.len()) {
            let j = step.trailing_zeros() as usize;
            p.xor_assign(&nullbasis[j]);
            word.xor_assign(&images[j]);
            let c = cost(&word);
            if c < best.0 || (c == best.0 && p.lex_cmp(&best.1).is_lt()) {
                best = (c, p.clone(), word.clone());
            }
        }
        Ok((best.1, best.2, true))
    }

    /// Stores `m` into all-zero memory with stuck cells `s`, choosing the
    /// lightest codeword that masks every stuck cell.
    pub fn encode_initial(&self, m: &BitVector, s: &ChannelState) -> Result<Encoding> {
        self.check_state(s)?;
        let base = self.place_message(m)?;
        let (parity, codeword, minimal) = self.choose_parity(&base, s, BitVector::weight)?;

        let stuck: Vec<bool> = s.cells().iter().map(|c| *c != crate::channel::Cell::Normal).collect();
        let cells_touched: Vec<usize> = codeword.support().filter(|&i| !stuck[i]).collect();
        let bound = self.single_defect_bound(s, |r| m.weight() + r);
        let report = CostReport {
            write_cost: Some(codeword.weight() - s.nonzero_defect_count()),
            rewrite_cost: None,
            bound,
            cells_touched,
            minimal,
        };
        Ok(Encoding { codeword, parity, report })
    }

    /// Rewrites memory holding `c_prev` so it stores `m_new`, changing as few cells as possible.
    pub fn encode_update(&self, c_prev: &BitVector, m_new: &BitVector, s: &ChannelState) -> Result<Encoding> {
        self.check_state(s)?;
        if c_prev.len() != self.n {
            return Err(Error::dim(format!("previous word has length {}, expected n = {}", c_prev.len(), self.n)));
        }
        if !s.is_masked_by(c_prev) {
            return Err(Error::Usage(format!("previous word {c_prev} does not match stuck cells {s}")));
        }
        let base = self.place_message(m_new)?;
        let (parity, codeword, minimal) = self.choose_parity(&base, s, |c| c.distance(c_prev))?;

        let m_prev = self.decode(c_prev)?;
        let changed = &codeword + c_prev;
        let bound = self.single_defect_bound(s, |r| (m_prev.distance(m_new) + r).saturating_sub(1));
        let report = CostReport {
            write_cost: None,
            rewrite_cost: Some(changed.weight()),
            bound,
            cells_touched: changed.support().collect(),
            minimal,
        };
        Ok(Encoding { codeword, parity, report })
    }

    fn single_defect_bound(&self, s: &ChannelState, rhs: impl Fn(usize) -> usize) -> Option<usize> {
        if s.defect_count() > 1 {
            return None;
        }
        self.analysis().ok().and_then(|a| a.r_star).map(rhs)
    }
}

/// Computes `d★` and the rewriting locality of every coordinate.
///
/// `d★` is the minimum weight of a nonzero `x` with `G0ᵀ x = 0`, found by
/// enumerating the `2^k` words of `C0^⊥`. The locality of coordinate `i` is
/// one less than the lightest codeword of `C0` whose support contains `i`,
/// found by enumerating the `2^{n−k}` words of `C0`.
pub fn analyze(code: &AdditiveCode) -> Result<LwcAnalysis> {
    analyze_capped(code, DEFAULT_ENUM_CAP)
}

pub fn analyze_capped(code: &AdditiveCode, cap: u32) -> Result<LwcAnalysis> {
    let (n, k) = (code.n, code.k);
    let null_basis = code.c0.parity_check().columns();
    let mut d_star = usize::MAX;
    for_each_codeword(&null_basis, n, cap, "d* enumeration", |x| {
        let w = x.weight();
        if w > 0 && w < d_star {
            d_star = w;
        }
    })?;

    let locality: Vec<Option<usize>> =
        code.c0.covering_weights_capped(cap)?.into_iter().map(|w| w.map(|w| w - 1)).collect();
    let r_star = locality.iter().copied().collect::<Option<Vec<_>>>().and_then(|l| l.into_iter().max());
    let bound = r_star.map(|r| singleton_value(n, k, r));
    Ok(LwcAnalysis { n, k, d_star, locality, r_star, bound, optimal: bound == Some(d_star) })
}
