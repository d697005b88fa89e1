//! The stuck-at defect channel `y = x ∘ s`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// One memory cell: normal (`λ`) or stuck at a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Normal,
    Stuck(bool),
}

impl Cell {
    fn to_char(self) -> char {
        match self {
            Cell::Normal => '*',
            Cell::Stuck(false) => '0',
            Cell::Stuck(true) => '1',
        }
    }
}

/// Defect side information for an `n`-cell memory.
///
/// Text form is one character per cell: `*` for a normal cell, `0`/`1` for a
/// cell stuck at that value, e.g. `*1**0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChannelState {
    cells: Vec<Cell>,
}

impl ChannelState {
    pub fn new(cells: Vec<Cell>) -> Self {
        Self { cells }
    }

    /// All cells normal.
    pub fn clean(n: usize) -> Self {
        Self { cells: vec![Cell::Normal; n] }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> Cell {
        self.cells[i]
    }

    /// `t`, the number of stuck cells.
    pub fn defect_count(&self) -> usize {
        self.cells.iter().filter(|c| **c != Cell::Normal).count()
    }

    /// Number of cells stuck at 1.
    pub fn nonzero_defect_count(&self) -> usize {
        self.cells.iter().filter(|c| **c == Cell::Stuck(true)).count()
    }

    /// Stuck coordinates with their values, ascending.
    pub fn defects(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.cells.iter().enumerate().filter_map(|(i, c)| match c {
            Cell::Stuck(v) => Some((i, *v)),
            Cell::Normal => None,
        })
    }

    /// True when `x` agrees with every stuck cell.
    pub fn is_masked_by(&self, x: &BitVector) -> bool {
        x.len() == self.len() && self.defects().all(|(i, v)| x.get(i) == v)
    }
}

impl fmt::Display for ChannelState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.cells.iter().map(|c| c.to_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for ChannelState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChannelState({self})")
    }
}

impl FromStr for ChannelState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cells = s
            .chars()
            .map(|c| match c {
                '*' => Ok(Cell::Normal),
                '0' => Ok(Cell::Stuck(false)),
                '1' => Ok(Cell::Stuck(true)),
                other => Err(Error::Parse(format!("unexpected character {other:?} in channel state {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cells })
    }
}

impl Serialize for ChannelState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChannelState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `y = x ∘ s`: normal cells pass `x`, stuck cells output their stuck value.
pub fn apply(x: &BitVector, s: &ChannelState) -> Result<BitVector> {
    if x.len() != s.len() {
        return Err(Error::dim(format!("input has length {} but channel state has {}", x.len(), s.len())));
    }
    let mut y = x.clone();
    for (i, v) in s.defects() {
        y.set(i, v);
    }
    Ok(y)
}

/// i.i.d. defect model: a cell is stuck with probability `beta`, and a stuck
/// cell is stuck at 0 or 1 with equal probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectModel {
    pub beta: f64,
    pub seed: u64,
}

impl DefectModel {
    pub fn new(beta: f64, seed: u64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta, seed })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::Usage(format!("defect probability {beta} is outside [0, 1]")))
    }
}

/// Draws a channel state with the ChaCha8 generator seeded from `model.seed`.
pub fn sample(model: &DefectModel, n: usize) -> Result<ChannelState> {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    sample_with(&mut rng, model.beta, n)
}

/// Draws a channel state from a caller-supplied generator.
pub fn sample_with<R: Rng + ?Sized>(rng: &mut R, beta: f64, n: usize) -> Result<ChannelState> {
    check_beta(beta)?;
    let cells = (0..n)
        .map(|_| if rng.gen_bool(beta) { Cell::Stuck(rng.gen_bool(0.5)) } else { Cell::Normal })
        .collect();
    Ok(ChannelState { cells })
}

/// Draws a state with exactly `t` stuck cells at uniformly random positions.
pub fn sample_exact<R: Rng + ?Sized>(rng: &mut R, n: usize, t: usize) -> Result<ChannelState> {
    if t > n {
        return Err(Error::Usage(format!("cannot place {t} defects in {n} cells")));
    }
    let mut cells = vec![Cell::Normal; n];
    let mut positions = index::sample(rng, n, t).into_vec();
    positions.sort_unstable();
    for i in positions {
        cells[i] = Cell::Stuck(rng.gen_bool(0.5));
    }
    Ok(ChannelState { cells })
}

/// Default cap on [`enumerate_states`]: `2^24` states.
pub const DEFAULT_STATE_CAP: u64 = 1 << 24;

/// `C(n, t) · 2^t`, or `None` on overflow.
pub fn state_count(n: usize, t: usize) -> Option<u64> {
    if t > n {
        return Some(0);
    }
    let mut c: u128 = 1;
    for i in 0..t as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    let total = c.checked_mul(1u128.checked_shl(t as u32)?)?;
    u64::try_from(total).ok()
}

/// Every state with exactly `t` stuck cells, each with every assignment of stuck values.
///
/// Supports are visited in lexicographic order; within a support, stuck
/// values count up in binary with the first stuck cell least significant.
pub fn enumerate_states(n: usize, t: usize) -> Result<impl Iterator<Item = ChannelState>> {
    enumerate_states_capped(n, t, DEFAULT_STATE_CAP)
}

pub fn enumerate_states_capped(n: usize, t: usize, cap: u64) -> Result<impl Iterator<Item = ChannelState>> {
    if t > n {
        return Err(Error::Usage(format!("cannot place {t} defects in {n} cells")));
    }
    match state_count(n, t) {
        Some(count) if count <= cap => {}
        _ => {
            return Err(Error::Capacity {
                what: "defect state enumeration",
                needed: state_count(n, t).map_or(u32::MAX, |c| 64 - c.leading_zeros()),
                cap: 63 - cap.leading_zeros(),
            })
        }
    }
    Ok((0..n).combinations(t).flat_map(move |support| {
        (0u64..(1u64 << t)).map(move |values| {
            let mut cells = vec![Cell::Normal; n];
            for (j, &i) in support.iter().enumerate() {
                cells[i] = Cell::Stuck((values >> j) & 1 == 1);
            }
            ChannelState { cells }
        })
    }))
}
