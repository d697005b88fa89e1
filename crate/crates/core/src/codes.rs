//! Binary linear codes: construction, exhaustive distance computations and
//! the stock families used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{nullspace, polymod_divides, BinPolynomial, BitMatrix, BitVector};

/// Default cap on exhaustive enumeration: at most `2^24` codewords.
pub const DEFAULT_ENUM_CAP: u32 = 24;

/// Visits every codeword spanned by `basis` (including zero) in Gray-code order.
pub(crate) fn for_each_codeword(
    basis: &[BitVector],
    n: usize,
    cap: u32,
    what: &'static str,
    mut visit: impl FnMut(&BitVector),
) -> Result<()> {
    let k = basis.len();
    if k as u32 > cap || k >= 64 {
        return Err(Error::Capacity { what, needed: k as u32, cap });
    }
    let mut word = BitVector::zeros(n);
    visit(&word);
    for step in 1u64..(1u64 << k) {
        word.xor_assign(&basis[step.trailing_zeros() as usize]);
        visit(&word);
    }
    Ok(())
}

/// A binary linear code of length `n` and dimension `k`.
///
/// `gen` is `n × k` and `pcheck` is `n × (n − k)`; both use the column
/// convention, so codewords are `gen · m` and satisfy `pcheckᵀ · c = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    gen: BitMatrix,
    pcheck: BitMatrix,
    cyclic: bool,
}

impl LinearCode {
    /// Assembles a code from both matrices, checking ranks and orthogonality.
    pub fn from_parts(gen: BitMatrix, pcheck: BitMatrix, cyclic: bool) -> Result<Self> {
        let n = gen.rows();
        if pcheck.rows() != n {
            return Err(Error::dim(format!("generator has {n} rows, parity check has {}", pcheck.rows())));
        }
        let k = gen.cols();
        if k + pcheck.cols() != n {
            return Err(Error::Construction(format!(
                "generator has {k} columns and parity check {} columns; they must sum to n = {n}",
                pcheck.cols()
            )));
        }
        if gen.rank() != k {
            return Err(Error::Construction("generator columns are linearly dependent".into()));
        }
        if pcheck.rank() != n - k {
            return Err(Error::Construction("parity-check columns are linearly dependent".into()));
        }
        if !pcheck.transpose().mul(&gen)?.is_zero() {
            return Err(Error::Construction("parity check is not orthogonal to the generator".into()));
        }
        let code = Self { n, k, gen, pcheck, cyclic };
        if cyclic && !code.shift_closed() {
            return Err(Error::Construction("code flagged cyclic is not closed under cyclic shifts".into()));
        }
        Ok(code)
    }

    /// The code spanned by the columns of `gen` (which must be independent).
    pub fn from_generator(gen: BitMatrix) -> Result<Self> {
        let n = gen.rows();
        let h = BitMatrix::from_columns(&nullspace(&gen.transpose()), n)?;
        Self::from_parts(gen, h, false)
    }

    /// The code `{c : hᵀ c = 0}`, keeping `h` verbatim as its parity check.
    pub fn from_parity_check(h: BitMatrix) -> Result<Self> {
        let n = h.rows();
        let gen = BitMatrix::from_columns(&nullspace(&h.transpose()), n)?;
        Self::from_parts(gen, h, false)
    }

    /// Cyclic code of length `n` generated by `g`, which must divide `x^n − 1`.
    ///
    /// The generator columns are the shifts `x^i g(x)`, `0 ≤ i < n − deg g`.
    /// The parity check is built from the reciprocal of `h(x) = (x^n − 1)/g(x)`,
    /// whose shifts span the dual code.
    pub fn cyclic(n: usize, g: &BinPolynomial) -> Result<Self> {
        let deg = g.degree().ok_or_else(|| Error::Usage("generator polynomial is zero".into()))?;
        if deg >= n {
            return Err(Error::Construction(format!("generator degree {deg} is not below n = {n}")));
        }
        if !polymod_divides(g, n)? {
            return Err(Error::Construction(format!("{g} does not divide x^{n} - 1")));
        }
        let k = n - deg;
        let (h, _) = BinPolynomial::x_pow_n_minus_1(n).div_rem(g)?;
        let h_rec = h.reciprocal();
        let shift = |p: &BinPolynomial, i: usize| {
            let base = p.to_vector(n);
            let mut v = BitVector::zeros(n);
            for j in base.support() {
                v.set((j + i) % n, true);
            }
            v
        };
        let gen_cols: Vec<_> = (0..k).map(|i| shift(g, i)).collect();
        let chk_cols: Vec<_> = (0..deg).map(|i| shift(&h_rec, i)).collect();
        Self::from_parts(BitMatrix::from_columns(&gen_cols, n)?, BitMatrix::from_columns(&chk_cols, n)?, true)
    }

    /// `{0ⁿ, 1ⁿ}`.
    pub fn repetition(n: usize) -> Result<Self> {
        let all: Vec<usize> = (0..n).collect();
        Self::cyclic(n, &BinPolynomial::from_exponents(&all))
    }

    /// Single-parity-check (even-weight) code of length `n`.
    pub fn even_weight(n: usize) -> Result<Self> {
        Self::cyclic(n, &BinPolynomial::from_exponents(&[0, 1]))
    }

    /// Cyclic (7,4) Hamming code, `g = x³ + x + 1`.
    pub fn hamming7() -> Self {
        Self::cyclic(7, &BinPolynomial::from_exponents(&[0, 1, 3])).expect("x^3+x+1 divides x^7-1")
    }

    /// Cyclic (7,3) simplex code, `g = x⁴ + x² + x + 1`.
    pub fn simplex7() -> Self {
        Self::cyclic(7, &BinPolynomial::from_exponents(&[0, 1, 2, 4])).expect("x^4+x^2+x+1 divides x^7-1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.gen
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.pcheck
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// `gen · m`.
    pub fn encode(&self, m: &BitVector) -> Result<BitVector> {
        self.gen.mul_vec(m)
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        x.len() == self.n && (0..self.pcheck.cols()).all(|j| !self.pcheck_column(j).dot(x))
    }

    fn pcheck_column(&self, j: usize) -> BitVector {
        self.pcheck.column(j)
    }

    fn shift_closed(&self) -> bool {
        self.gen.columns().iter().all(|c| {
            let mut s = BitVector::zeros(self.n);
            for i in c.support() {
                s.set((i + 1) % self.n, true);
            }
            self.contains(&s)
        })
    }

    /// Same codeword set (compared through generators and parity checks).
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.k == other.k && self.gen.columns().iter().all(|c| other.contains(c))
    }

    /// The dual code; generator and parity check swap roles.
    pub fn dual(&self) -> LinearCode {
        LinearCode { n: self.n, k: self.n - self.k, gen: self.pcheck.clone(), pcheck: self.gen.clone(), cyclic: self.cyclic }
    }

    /// Visits all `2^k` codewords in Gray-code order.
    pub fn for_each_codeword(&self, cap: u32, visit: impl FnMut(&BitVector)) -> Result<()> {
        for_each_codeword(&self.gen.columns(), self.n, cap, "codeword enumeration", visit)
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_capped(DEFAULT_ENUM_CAP)
    }

    /// Minimum nonzero weight, by exhaustive enumeration.
    pub fn min_distance_capped(&self, cap: u32) -> Result<usize> {
        if self.k == 0 {
            return Err(Error::Usage("the zero code has no minimum distance".into()));
        }
        let mut best = usize::MAX;
        for_each_codeword(&self.gen.columns(), self.n, cap, "minimum distance", |c| {
            let w = c.weight();
            if w > 0 && w < best {
                best = w;
            }
        })?;
        Ok(best)
    }

    /// Minimum weight of a codeword whose support contains `i`, or `None` when
    /// no codeword covers `i`.
    pub fn covering_weight(&self, i: usize) -> Result<Option<usize>> {
        if i >= self.n {
            return Err(Error::Usage(format!("coordinate {i} out of range for length {}", self.n)));
        }
        Ok(self.covering_weights()?[i])
    }

    pub fn covering_weights(&self) -> Result<Vec<Option<usize>>> {
        self.covering_weights_capped(DEFAULT_ENUM_CAP)
    }

    /// [`covering_weight`](Self::covering_weight) for every coordinate in one enumeration.
    pub fn covering_weights_capped(&self, cap: u32) -> Result<Vec<Option<usize>>> {
        let mut best: Vec<Option<usize>> = vec![None; self.n];
        for_each_codeword(&self.gen.columns(), self.n, cap, "covering weight", |c| {
            let w = c.weight();
            for i in c.support() {
                if best[i].is_none_or(|b| w < b) {
                    best[i] = Some(w);
                }
            }
        })?;
        Ok(best)
    }

    /// A minimum-weight codeword covering `i`; ties go to the lexicographically smallest word.
    pub fn min_covering_word(&self, i: usize) -> Result<Option<BitVector>> {
        if i >= self.n {
            return Err(Error::Usage(format!("coordinate {i} out of range for length {}", self.n)));
        }
        let mut best: Option<BitVector> = None;
        for_each_codeword(&self.gen.columns(), self.n, DEFAULT_ENUM_CAP, "covering word search", |c| {
            if !c.get(i) {
                return;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    let (wc, wb) = (c.weight(), b.weight());
                    wc < wb || (wc == wb && c.lex_cmp(b).is_lt())
                }
            };
            if better {
                best = Some(c.clone());
            }
        })?;
        Ok(best)
    }
}

/// `G0 = 1_n`: the single-flag masking code (`k = n − 1`).
pub fn flip_code(n: usize) -> Result<BitMatrix> {
    if n < 2 {
        return Err(Error::Construction(format!("flip code needs n >= 2, got {n}")));
    }
    BitMatrix::from_columns(&[BitVector::ones(n)], n)
}

/// Block-diagonal `G0` with `groups` all-ones columns of length `n / groups` (`k = n − groups`).
pub fn groupflip_code(n: usize, groups: usize) -> Result<BitMatrix> {
    if groups == 0 || !n.is_multiple_of(groups) {
        return Err(Error::Construction(format!("{groups} groups do not divide n = {n}")));
    }
    let size = n / groups;
    if size < 2 {
        return Err(Error::Construction(format!("groups of size {size} leave no message cells")));
    }
    let cols: Vec<_> = (0..groups).map(|g| BitVector::from_support(n, g * size..(g + 1) * size)).collect();
    BitMatrix::from_columns(&cols, n)
}

/// Serializable description of a code pair.
///
/// Every spec denotes an LRC `C` together with the additive code whose `G0`
/// is a parity-check matrix of `C`. Constructions phrased as `G0` (flip,
/// group flip, explicit `G0`) define `C` as the code with parity check `G0`;
/// constructions phrased as a code (cyclic, explicit generator) define the
/// additive code through `G0 = H_C`. `k` is shared by both views.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub construction: Construction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Construction {
    /// Rows of `G0` (`n` rows of `n − k` entries).
    ExplicitG0 { g0: Vec<Vec<u8>> },
    /// Rows of the generator (`n` rows of `k` entries).
    ExplicitGenerator { generator: Vec<Vec<u8>> },
    /// Generator polynomial coefficients, lowest degree first.
    Cyclic { genpoly: Vec<u8> },
    Flip,
    Groupflip { groups: usize },
    FromLrc { lrc: Box<CodeSpec> },
}

impl CodeSpec {
    pub fn flip(n: usize) -> Self {
        Self { n, k: Some(n.saturating_sub(1)), construction: Construction::Flip }
    }

    pub fn groupflip(n: usize, groups: usize) -> Self {
        Self { n, k: Some(n.saturating_sub(groups)), construction: Construction::Groupflip { groups } }
    }

    pub fn cyclic(n: usize, g: &BinPolynomial) -> Self {
        let genpoly = g.coeffs().iter().map(|&b| u8::from(b)).collect();
        Self { n, k: g.degree().map(|d| n.saturating_sub(d)), construction: Construction::Cyclic { genpoly } }
    }

    pub fn from_lrc(lrc: CodeSpec) -> Self {
        Self { n: lrc.n, k: lrc.k, construction: Construction::FromLrc { lrc: Box::new(lrc) } }
    }

    /// Resolves a stock name such as `flip4`, `groupflip6`, `groupflip8-4`,
    /// `hamming7`, `simplex7`, `repetition5`, `spc4` or `cyclic7:1101`.
    /// A trailing `-lwc` is accepted and names the same pair.
    pub fn from_name(name: &str) -> Result<Self> {
        let base = name.strip_suffix("-lwc").unwrap_or(name);
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse(format!("unknown code name {name:?}")))
        };
        let spec = if base == "hamming7" {
            Self::cyclic(7, &BinPolynomial::from_exponents(&[0, 1, 3]))
        } else if base == "simplex7" {
            Self::cyclic(7, &BinPolynomial::from_exponents(&[0, 1, 2, 4]))
        } else if let Some(rest) = base.strip_prefix("groupflip") {
            match rest.split_once('-') {
                Some((n, g)) => Self::groupflip(num(n)?, num(g)?),
                None => Self::groupflip(num(rest)?, 2),
            }
        } else if let Some(rest) = base.strip_prefix("flip") {
            Self::flip(num(rest)?)
        } else if let Some(rest) = base.strip_prefix("repetition") {
            let n = num(rest)?;
            Self::cyclic(n, &BinPolynomial::from_exponents(&(0..n).collect::<Vec<_>>()))
        } else if let Some(rest) = base.strip_prefix("spc") {
            Self::cyclic(num(rest)?, &BinPolynomial::from_exponents(&[0, 1]))
        } else if let Some(rest) = base.strip_prefix("cyclic") {
            let (n, poly) =
                rest.split_once(':').ok_or_else(|| Error::Parse(format!("expected cyclic<n>:<coeffs>, got {name:?}")))?;
            let g: BitVector = poly.parse()?;
            Self::cyclic(num(n)?, &BinPolynomial::from_coeffs(&g.iter().collect::<Vec<_>>()))
        } else {
            return Err(Error::Parse(format!("unknown code name {name:?}")));
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The parity-check matrix of the LRC, which is `G0` of the additive code.
    pub fn g0(&self) -> Result<BitMatrix> {
        let g0 = match &self.construction {
            Construction::ExplicitG0 { g0 } => {
                let cols = g0.first().map_or(0, Vec::len);
                if g0.len() != self.n {
                    return Err(Error::dim(format!("G0 has {} rows, expected n = {}", g0.len(), self.n)));
                }
                BitMatrix::from_rows_u8(g0, cols)?
            }
            Construction::Flip => flip_code(self.n)?,
            Construction::Groupflip { groups } => groupflip_code(self.n, *groups)?,
            Construction::FromLrc { lrc } => {
                if lrc.n != self.n {
                    return Err(Error::dim(format!("outer n = {} but LRC has n = {}", self.n, lrc.n)));
                }
                lrc.g0()?
            }
            Construction::ExplicitGenerator { .. } | Construction::Cyclic { .. } => {
                self.lrc()?.parity_check().clone()
            }
        };
        Ok(g0)
    }

    /// The LRC side of the pair.
    pub fn lrc(&self) -> Result<LinearCode> {
        let code = match &self.construction {
            Construction::Cyclic { genpoly } => {
                let coeffs = genpoly
                    .iter()
                    .map(|&c| match c {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::Parse(format!("polynomial coefficient {other} is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                LinearCode::cyclic(self.n, &BinPolynomial::from_coeffs(&coeffs))?
            }
            Construction::ExplicitGenerator { generator } => {
                if generator.len() != self.n {
                    return Err(Error::dim(format!("generator has {} rows, expected n = {}", generator.len(), self.n)));
                }
                let cols = generator.first().map_or(0, Vec::len);
                LinearCode::from_generator(BitMatrix::from_rows_u8(generator, cols)?)?
            }
            Construction::FromLrc { lrc } => lrc.lrc()?,
            _ => LinearCode::from_parity_check(self.g0()?)?,
        };
        Ok(code)
    }

    /// Checks that the construction resolves and agrees with `n` and `k`.
    pub fn validate(&self) -> Result<()> {
        let code = self.lrc()?;
        if code.n() != self.n {
            return Err(Error::Construction(format!("construction has length {}, spec says {}", code.n(), self.n)));
        }
        if let Some(k) = self.k {
            if code.k() != k {
                return Err(Error::Construction(format!("construction has k = {}, spec says {k}", code.k())));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_codewords(c: &LinearCode) -> Vec<BitVector> {
        let mut out = Vec::new();
        c.for_each_codeword(DEFAULT_ENUM_CAP, |w| out.push(w.clone())).unwrap();
        out
    }

    #[test]
    fn hamming_and_simplex_distances() {
        let h = LinearCode::hamming7();
        assert_eq!((h.n(), h.k()), (7, 4));
        assert_eq!(h.min_distance().unwrap(), 3);
        let s = LinearCode::simplex7();
        assert_eq!((s.n(), s.k()), (7, 3));
        let words = all_codewords(&s);
        assert_eq!(words.len(), 8);
        assert!(words.iter().filter(|w| !w.is_zero()).all(|w| w.weight() == 4));
        assert_eq!(s.min_distance().unwrap(), 4);
    }

    #[test]
    fn even_weight_and_repetition() {
        let e = LinearCode::even_weight(4).unwrap();
        assert_eq!((e.k(), e.min_distance().unwrap()), (3, 2));
        let r = LinearCode::repetition(5).unwrap();
        assert_eq!((r.k(), r.min_distance().unwrap()), (1, 5));
        assert!(r.dual().same_code(&LinearCode::even_weight(5).unwrap()));
    }

    #[test]
    fn non_divisor_is_rejected() {
        let g = BinPolynomial::from_exponents(&[0, 1, 2]);
        assert!(matches!(LinearCode::cyclic(4, &g), Err(Error::Construction(_))));
    }

    #[test]
    fn dual_of_hamming_is_simplex() {
        // The dual is generated by the reciprocal check polynomial x^4+x^3+x^2+1.
        let dual = LinearCode::hamming7().dual();
        let expected = LinearCode::cyclic(7, &BinPolynomial::from_exponents(&[0, 2, 3, 4])).unwrap();
        assert!(dual.same_code(&expected));
        let words = all_codewords(&dual);
        assert!(words.iter().filter(|w| !w.is_zero()).all(|w| w.weight() == 4));
        assert_eq!(dual.min_distance().unwrap(), LinearCode::simplex7().min_distance().unwrap());
        let h = LinearCode::hamming7();
        assert_eq!(h.dual().dual(), h);
    }

    #[test]
    fn cyclic_closure_of_every_codeword() {
        for code in [LinearCode::hamming7(), LinearCode::simplex7(), LinearCode::even_weight(6).unwrap()] {
            for w in all_codewords(&code) {
                let mut s = BitVector::zeros(code.n());
                for i in w.support() {
                    s.set((i + 1) % code.n(), true);
                }
                assert!(code.contains(&s));
            }
        }
    }

    #[test]
    fn covering_weights_examples() {
        let rep = LinearCode::repetition(6).unwrap();
        assert!(rep.covering_weights().unwrap().iter().all(|&w| w == Some(6)));
        let s = LinearCode::simplex7();
        assert!(s.covering_weights().unwrap().iter().all(|&w| w == Some(4)));
        // Coordinate 2 is zero in every codeword.
        let gen = BitMatrix::from_rows_u8(&[vec![1], vec![1], vec![0]], 1).unwrap();
        let c = LinearCode::from_generator(gen).unwrap();
        assert_eq!(c.covering_weight(2).unwrap(), None);
        assert_eq!(c.covering_weight(0).unwrap(), Some(2));
        assert!(c.covering_weight(3).is_err());
    }

    #[test]
    fn capacity_error_names_the_cap() {
        let big = LinearCode::even_weight(30).unwrap();
        match big.min_distance() {
            Err(Error::Capacity { needed, cap, .. }) => assert_eq!((needed, cap), (29, DEFAULT_ENUM_CAP)),
            other => panic!("expected capacity error, got {other:?}"),
        }
        assert_eq!(LinearCode::even_weight(10).unwrap().min_distance_capped(9).unwrap(), 2);
        assert!(LinearCode::even_weight(10).unwrap().min_distance_capped(8).is_err());
    }

    #[test]
    fn flip_and_groupflip_matrices() {
        assert_eq!(flip_code(4).unwrap().to_rows_u8(), vec![vec![1]; 4]);
        let g = groupflip_code(6, 2).unwrap();
        assert_eq!(g.to_rows_u8(), vec![vec![1, 0], vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 1]]);
        assert_eq!(groupflip_code(5, 1).unwrap(), flip_code(5).unwrap());
        assert!(groupflip_code(6, 4).is_err());
        assert!(groupflip_code(6, 6).is_err());
        assert!(flip_code(1).is_err());
    }

    #[test]
    fn named_specs_resolve() {
        let h = CodeSpec::from_name("hamming7-lwc").unwrap();
        assert_eq!(h.k, Some(4));
        assert!(h.lrc().unwrap().same_code(&LinearCode::hamming7()));
        assert_eq!(h.g0().unwrap(), LinearCode::hamming7().parity_check().clone());
        assert_eq!(CodeSpec::from_name("groupflip8-4").unwrap().g0().unwrap(), groupflip_code(8, 4).unwrap());
        assert_eq!(CodeSpec::from_name("groupflip6").unwrap(), CodeSpec::groupflip(6, 2));
        assert_eq!(CodeSpec::from_name("cyclic7:1101").unwrap(), CodeSpec::from_name("hamming7").unwrap());
        assert!(CodeSpec::from_name("spc4").unwrap().lrc().unwrap().same_code(&LinearCode::even_weight(4).unwrap()));
        assert!(CodeSpec::from_name("bogus").is_err());
        assert!(CodeSpec::from_name("flipx").is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec = CodeSpec::groupflip(6, 2);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"n":6,"k":4,"construction":{"type":"groupflip","groups":2}}"#);
        let explicit: CodeSpec =
            serde_json::from_str(r#"{"n":4,"k":3,"construction":{"type":"explicit-g0","g0":[[1],[1],[1],[1]]}}"#)
                .unwrap();
        assert_eq!(explicit.g0().unwrap(), flip_code(4).unwrap());
        explicit.validate().unwrap();
        let wrong_k: CodeSpec =
            serde_json::from_str(r#"{"n":4,"k":2,"construction":{"type":"flip"}}"#).unwrap();
        assert!(wrong_k.validate().is_err());
    }
}
