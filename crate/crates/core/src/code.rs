//! Classical `[n,k,d]_q` codes and the subset structure they induce on the
//! players of the sharing scheme.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{GFMatrix, GFVector};

/// Enumeration and memory ceilings. Exceeding one is an error, never a hang.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Upper bound on `q^k` for codeword enumeration.
    pub max_codewords: u64,
    /// Upper bound on `n` for anything that walks column subsets.
    pub max_subset_players: usize,
    /// Upper bound on `q^n` state-vector amplitudes.
    pub max_amplitudes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_codewords: 1 << 24,
            max_subset_players: 20,
            max_amplitudes: 1 << 24,
        }
    }
}

impl Budget {
    pub(crate) fn check_subsets(&self, n: usize) -> Result<()> {
        if n > self.max_subset_players {
            return Err(Error::BudgetExceeded(format!(
                "n = {n} players exceeds the subset budget of {}",
                self.max_subset_players
            )));
        }
        Ok(())
    }
}

/// A set of players (carrier positions), stored 0-based and sorted.
/// Displayed and serialized 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerSet(Vec<usize>);

impl PlayerSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PlayerSet(v)
    }

    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidSubset("player indices are 1-based".into()));
        }
        Ok(PlayerSet::new(indices.iter().map(|i| i - 1)))
    }

    pub fn all(n: usize) -> Self {
        PlayerSet((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> PlayerSet {
        PlayerSet((0..n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn is_subset_of(&self, other: &PlayerSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&i) if i >= n => Err(Error::InvalidSubset(format!(
                "player {} does not exist among {n} players",
                i + 1
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.one_based().iter().join(","))
    }
}

impl Serialize for PlayerSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// An `[n,k]_q` linear code given by a full-row-rank `k×n` generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: GFMatrix,
}

/// Whether the complement of `subset_b` is LOCC-assisting for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetReport {
    pub subset_b: PlayerSet,
    pub is_assisted: bool,
    pub rank_gb: usize,
}

/// Odometer over `F_q^len` in lexicographic order (last digit fastest).
pub(crate) fn next_word(word: &mut [u32], q: u32) -> bool {
    for d in word.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

impl LinearCode {
    pub fn new(generator: GFMatrix) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if n < k {
            return Err(Error::DimensionMismatch(format!(
                "generator is {k}x{n}; need n >= k"
            )));
        }
        let rank = generator.rank();
        if rank != k {
            return Err(Error::RankDeficient { rank, k });
        }
        Ok(LinearCode { generator })
    }

    /// The `[n,1,n]_q` repetition code.
    pub fn repetition(field: &Field, n: usize) -> Result<Self> {
        LinearCode::new(GFMatrix::new(field, 1, n, vec![1; n])?)
    }

    /// The trivial `[k,k,1]_q` code.
    pub fn identity(field: &Field, k: usize) -> Result<Self> {
        LinearCode::new(GFMatrix::identity(field, k))
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn generator(&self) -> &GFMatrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn q(&self) -> u32 {
        self.field().q()
    }

    /// `q^k`, saturating.
    pub fn num_codewords(&self) -> u64 {
        (self.q() as u64).saturating_pow(self.k() as u32)
    }

    /// `G_S`: the columns of `G` belonging to the players in `s`.
    pub fn restriction(&self, s: &PlayerSet) -> Result<GFMatrix> {
        self.generator.select_columns(s.indices())
    }

    /// Minimum Hamming weight over all nonzero codewords.
    pub fn min_distance(&self, budget: &Budget) -> Result<usize> {
        let total = self.num_codewords();
        if total > budget.max_codewords {
            return Err(Error::BudgetExceeded(format!(
                "{total} codewords exceeds the enumeration budget of {}",
                budget.max_codewords
            )));
        }
        let q = self.q();
        let mut x = vec![0u32; self.k()];
        let mut word = vec![0u32; self.n()];
        let mut best = self.n();
        while next_word(&mut x, q) {
            self.generator.left_mul_into(&x, &mut word);
            let w = word.iter().filter(|&&v| v != 0).count();
            best = best.min(w);
            if best == 1 {
                break;
            }
        }
        Ok(best)
    }

    /// Distance from the column-deletion characterisation:
    /// `1 + max r` such that deleting any `r` columns keeps rank `k`.
    pub fn distance_via_rank(&self, budget: &Budget) -> Result<usize> {
        let (n, k) = (self.n(), self.k());
        budget.check_subsets(n)?;
        let mut max_r = 0;
        // Deleting fewer columns can only keep more rank, so stop at the
        // first r that fails.
        for r in 1..=n - k {
            let all_full = (0..n).combinations(n - r).all(|cols| {
                self.generator
                    .select_columns(&cols)
                    .map(|m| m.rank() == k)
                    .unwrap_or(false)
            });
            if !all_full {
                break;
            }
            max_r = r;
        }
        Ok(max_r + 1)
    }

    pub fn is_mds(&self, budget: &Budget) -> Result<bool> {
        Ok(self.min_distance(budget)? == self.n() - self.k() + 1)
    }

    /// Rank test for `A` being LOCC-assisting for its complement `B`.
    pub fn is_locc_assisting(&self, a: &PlayerSet) -> Result<SubsetReport> {
        a.check_within(self.n())?;
        if a.len() == self.n() {
            return Err(Error::InvalidSubset(
                "A cannot contain every player; B would be empty".into(),
            ));
        }
        Ok(self.report_for_b(a.complement(self.n())))
    }

    fn report_for_b(&self, b: PlayerSet) -> SubsetReport {
        let rank_gb = self
            .restriction(&b)
            .expect("B is a nonempty in-range set")
            .rank();
        SubsetReport {
            is_assisted: rank_gb == self.k(),
            subset_b: b,
            rank_gb,
        }
    }

    /// One report per proper nonempty `B`, by size and then lexicographically.
    pub fn enumerate_assisting(&self, budget: &Budget) -> Result<Vec<SubsetReport>> {
        let n = self.n();
        budget.check_subsets(n)?;
        let subsets: Vec<PlayerSet> = (1..n)
            .flat_map(|size| (0..n).combinations(size).map(PlayerSet::new))
            .collect();
        Ok(subsets
            .into_par_iter()
            .map(|b| self.report_for_b(b))
            .collect())
    }

    /// A message pair `x1 ≠ x2` with `x1·G_B = x2·G_B`, present exactly when
    /// `rank(G_B) < k`.
    pub fn collision_witness(&self, b: &PlayerSet) -> Result<Option<(GFVector, GFVector)>> {
        let gb = self.restriction(b)?;
        let kernel = gb.transpose().kernel();
        Ok(kernel
            .into_iter()
            .next()
            .map(|x2| (GFVector::zeros(self.field(), self.k()), x2)))
    }
}

/// Reports violating the distance threshold: some `B` with `|B| > n - d`
/// that is not assisted.
pub fn distance_threshold_violations(
    reports: &[SubsetReport],
    n: usize,
    d: usize,
) -> Vec<&SubsetReport> {
    reports
        .iter()
        .filter(|r| r.subset_b.len() + d > n && !r.is_assisted)
        .collect()
}

/// Reports violating the MDS threshold: `B` is assisted iff `|B| >= k`.
pub fn mds_threshold_violations(reports: &[SubsetReport], k: usize) -> Vec<&SubsetReport> {
    reports
        .iter()
        .filter(|r| r.is_assisted != (r.subset_b.len() >= k))
        .collect()
}
