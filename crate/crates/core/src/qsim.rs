//! Dense state-vector simulation of `n` qudits of dimension `q`.
//!
//! Basis states are tuples in `F_q^n`. The amplitude index is the base-q
//! number whose most significant digit is site 0 (player 1).

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::code::{next_word, Budget, LinearCode, PlayerSet};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::linalg::GFVector;

/// Tolerance for deterministic algebraic identities.
pub const TOLERANCE: f64 = 1e-9;

// Above this order the Fourier matrix is evaluated entry by entry.
const DENSE_FOURIER_MAX_Q: u32 = 1024;

/// `exp(2πi j/p)` for `j = 0..p`.
fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / p as f64))
        .collect()
}

/// Fixed 12-decimal rendering with negative zero folded to zero.
pub fn format_fixed(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Rounds to 12 decimals so serialized output is stable.
pub fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    field: Field,
    sites: usize,
    amps: Vec<Complex64>,
}

fn dimension(q: u32, sites: usize) -> Option<usize> {
    (q as usize).checked_pow(sites as u32)
}

impl StateVector {
    /// `|0…0⟩` on `sites` qudits.
    pub fn zero_state(field: &Field, sites: usize) -> Result<Self> {
        StateVector::basis(field, sites, 0)
    }

    pub fn basis(field: &Field, sites: usize, index: usize) -> Result<Self> {
        let dim = dimension(field.q(), sites)
            .ok_or_else(|| Error::BudgetExceeded("state dimension overflows".into()))?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            field: field.clone(),
            sites,
            amps,
        })
    }

    /// Wraps normalized amplitudes.
    pub fn from_amplitudes(field: &Field, sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = dimension(field.q(), sites);
        if dim != Some(amps.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {sites} qudits of dimension {}",
                amps.len(),
                field.q()
            )));
        }
        let state = StateVector {
            field: field.clone(),
            sites,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn q(&self) -> usize {
        self.field.q() as usize
    }

    /// Index of the basis tuple `digits`.
    pub fn index_of(&self, digits: &[u32]) -> usize {
        debug_assert_eq!(digits.len(), self.sites);
        digits
            .iter()
            .fold(0usize, |acc, &d| acc * self.q() + d as usize)
    }

    /// Basis tuple of `index`.
    pub fn digits_of(&self, mut index: usize) -> Vec<u32> {
        let q = self.q();
        let mut out = vec![0u32; self.sites];
        for d in out.iter_mut().rev() {
            *d = (index % q) as u32;
            index /= q;
        }
        out
    }

    pub fn amplitude(&self, digits: &[u32]) -> Complex64 {
        self.amps[self.index_of(digits)]
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.sites {
            return Err(Error::IndexOutOfRange {
                index: site,
                len: self.sites,
            });
        }
        Ok(())
    }

    /// Applies a single-site operator given by its matrix entries
    /// `entry(row, col)` (so `|x⟩ ↦ Σ_z entry(z, x) |z⟩`).
    fn apply_site<F: Fn(usize, usize) -> Complex64>(&mut self, site: usize, entry: F) {
        let q = self.q();
        let stride = q.pow((self.sites - 1 - site) as u32);
        let block = stride * q;
        let mut col = vec![Complex64::new(0.0, 0.0); q];
        for base in (0..self.amps.len()).step_by(block) {
            for lo in 0..stride {
                let start = base + lo;
                for (x, c) in col.iter_mut().enumerate() {
                    *c = self.amps[start + x * stride];
                }
                for z in 0..q {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, c) in col.iter().enumerate() {
                        if c.re != 0.0 || c.im != 0.0 {
                            acc += entry(z, x) * c;
                        }
                    }
                    self.amps[start + z * stride] = acc;
                }
            }
        }
    }

    fn apply_fourier_signed(&mut self, site: usize, adjoint: bool) -> Result<()> {
        self.check_site(site)?;
        let f = self.field.clone();
        let p = f.p();
        let roots = roots_of_unity(p);
        let scale = 1.0 / (f.q() as f64).sqrt();
        let exponent = move |tr: u32| if adjoint { (p - tr) % p } else { tr };
        if f.q() <= DENSE_FOURIER_MAX_Q {
            let matrix = fourier_matrix_with(&f, adjoint);
            let q = f.q() as usize;
            self.apply_site(site, |z, x| matrix[z * q + x]);
        } else {
            let traces = f.trace_table();
            self.apply_site(site, |z, x| {
                roots[exponent(traces[f.mul(x as u32, z as u32) as usize]) as usize] * scale
            });
        }
        Ok(())
    }

    /// `F = q^{-1/2} Σ_{x,z} ω^{tr(xz)} |z⟩⟨x|` on one site.
    pub fn apply_fourier(&mut self, site: usize) -> Result<()> {
        self.apply_fourier_signed(site, false)
    }

    /// `F†` on one site.
    pub fn apply_fourier_adjoint(&mut self, site: usize) -> Result<()> {
        self.apply_fourier_signed(site, true)
    }

    /// `Z^z = Σ_x ω^{tr(zx)} |x⟩⟨x|` on one site.
    pub fn apply_z(&mut self, site: usize, z: &FieldElement) -> Result<()> {
        self.check_site(site)?;
        if *z.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if z.is_zero() {
            return Ok(());
        }
        let f = &self.field;
        let roots = roots_of_unity(f.p());
        let phases: Vec<Complex64> = (0..f.q())
            .map(|x| roots[f.trace(f.mul(z.value(), x)) as usize])
            .collect();
        let q = self.q();
        let stride = q.pow((self.sites - 1 - site) as u32);
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phases[(i / stride) % q];
        }
        Ok(())
    }

    /// Splits every basis index into its `A` part and complement part,
    /// each read as a base-q number in ascending site order.
    fn split_indices(&self, a: &PlayerSet) -> Vec<(usize, usize)> {
        let q = self.q();
        let in_a: Vec<bool> = (0..self.sites).map(|s| a.contains(s)).collect();
        let mut digits = vec![0u32; self.sites];
        let mut out = Vec::with_capacity(self.amps.len());
        loop {
            let (mut ai, mut bi) = (0usize, 0usize);
            for (s, &d) in digits.iter().enumerate() {
                if in_a[s] {
                    ai = ai * q + d as usize;
                } else {
                    bi = bi * q + d as usize;
                }
            }
            out.push((ai, bi));
            if !next_word(&mut digits, self.field.q()) {
                break;
            }
        }
        out
    }

    fn check_measured_set(&self, a: &PlayerSet) -> Result<()> {
        a.check_within(self.sites)?;
        if a.is_empty() || a.len() == self.sites {
            return Err(Error::InvalidSubset(format!(
                "measured set {a} must be a proper nonempty subset of {} sites",
                self.sites
            )));
        }
        Ok(())
    }

    /// The state with `F†` applied on every site of `a`, so that a
    /// computational readout of those sites is a Fourier-basis measurement
    /// with outcome `a` ↔ projector `F|a⟩⟨a|F†`.
    fn rotated_for_measurement(&self, a: &PlayerSet) -> Result<StateVector> {
        let mut rotated = self.clone();
        for &s in a.indices() {
            rotated.apply_fourier_adjoint(s)?;
        }
        Ok(rotated)
    }

    /// Born-rule probabilities of every Fourier-basis outcome on `a`,
    /// indexed lexicographically over `F_q^{|a|}`.
    pub fn outcome_distribution(&self, a: &PlayerSet) -> Result<Vec<f64>> {
        self.check_measured_set(a)?;
        let rotated = self.rotated_for_measurement(a)?;
        let mut probs = vec![0.0; self.q().pow(a.len() as u32)];
        for (amp, (ai, _)) in rotated.amps.iter().zip(self.split_indices(a)) {
            probs[ai] += amp.norm_sqr();
        }
        Ok(probs)
    }

    fn project_rotated(
        &self,
        rotated: &StateVector,
        a: &PlayerSet,
        outcome_index: usize,
    ) -> Result<(f64, StateVector)> {
        let b_sites = self.sites - a.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.q().pow(b_sites as u32)];
        for (amp, (ai, bi)) in rotated.amps.iter().zip(self.split_indices(a)) {
            if ai == outcome_index {
                amps[bi] = *amp;
            }
        }
        let prob: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if prob < 1e-12 {
            return Err(Error::DegenerateState(prob));
        }
        let inv = 1.0 / prob.sqrt();
        amps.iter_mut().for_each(|c| *c *= inv);
        Ok((
            prob,
            StateVector {
                field: self.field.clone(),
                sites: b_sites,
                amps,
            },
        ))
    }

    /// Conditions on the Fourier-basis outcome `outcome` for the sites in
    /// `a`, returning its probability and the normalized state of the
    /// remaining sites (ascending original order).
    pub fn project_fourier(&self, a: &PlayerSet, outcome: &GFVector) -> Result<(f64, StateVector)> {
        self.check_measured_set(a)?;
        if *outcome.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if outcome.len() != a.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} outcomes for {} measured sites",
                outcome.len(),
                a.len()
            )));
        }
        let idx = outcome
            .as_slice()
            .iter()
            .fold(0usize, |acc, &d| acc * self.q() + d as usize);
        let rotated = self.rotated_for_measurement(a)?;
        self.project_rotated(&rotated, a, idx)
    }

    /// Measures every site of `a` in the Fourier basis `{F|x⟩}`, sampling by
    /// the Born rule, and returns the record and the post-measurement state
    /// of the complement.
    pub fn measure_fourier<R: Rng + ?Sized>(
        &self,
        a: &PlayerSet,
        rng: &mut R,
    ) -> Result<(MeasurementRecord, StateVector)> {
        self.check_measured_set(a)?;
        let rotated = self.rotated_for_measurement(a)?;
        let mut probs = vec![0.0; self.q().pow(a.len() as u32)];
        for (amp, (ai, _)) in rotated.amps.iter().zip(self.split_indices(a)) {
            probs[ai] += amp.norm_sqr();
        }
        let idx = sample_index(&probs, rng.random::<f64>());
        let (probability, post) = self.project_rotated(&rotated, a, idx)?;

        let q = self.q();
        let mut digits = vec![0u32; a.len()];
        let mut rest = idx;
        for d in digits.iter_mut().rev() {
            *d = (rest % q) as u32;
            rest /= q;
        }
        Ok((
            MeasurementRecord {
                subset_a: a.clone(),
                outcomes: GFVector::new(&self.field, digits)?,
                probability,
            },
            post,
        ))
    }

    /// One line per nonzero amplitude, `d1,d2,…  re  im`, sorted by index.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() <= 1e-12 {
                continue;
            }
            let digits: Vec<String> = self.digits_of(i).iter().map(u32::to_string).collect();
            let _ = writeln!(
                out,
                "{}  {}  {}",
                digits.join(","),
                format_fixed(a.re),
                format_fixed(a.im)
            );
        }
        out
    }
}

impl AsRef<StateVector> for StateVector {
    fn as_ref(&self) -> &StateVector {
        self
    }
}

fn sample_index(probs: &[f64], r: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = r * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if acc > target && p > 0.0 {
            return i;
        }
    }
    last_nonzero
}

/// Dense `q×q` Fourier matrix, row-major with entry `[z][x] = ω^{tr(xz)}/√q`.
pub fn fourier_matrix(field: &Field) -> Vec<Complex64> {
    fourier_matrix_with(field, false)
}

fn fourier_matrix_with(field: &Field, adjoint: bool) -> Vec<Complex64> {
    let q = field.q();
    let p = field.p();
    let roots = roots_of_unity(p);
    let scale = 1.0 / (q as f64).sqrt();
    let mut m = Vec::with_capacity((q * q) as usize);
    for z in 0..q {
        for x in 0..q {
            let tr = field.trace(field.mul(x, z));
            let e = if adjoint { (p - tr) % p } else { tr };
            m.push(roots[e as usize] * scale);
        }
    }
    m
}

/// A `k`-qudit secret `Σ_x c(x)|x⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Secret {
    state: StateVector,
}

impl Secret {
    pub fn new(field: &Field, k: usize, amps: Vec<Complex64>) -> Result<Self> {
        Ok(Secret {
            state: StateVector::from_amplitudes(field, k, amps)?,
        })
    }

    /// Normalizes `amps`, returning the secret and the original squared norm.
    pub fn normalizing(field: &Field, k: usize, mut amps: Vec<Complex64>) -> Result<(Self, f64)> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm < 1e-24 {
            return Err(Error::NotNormalized(norm));
        }
        let inv = 1.0 / norm.sqrt();
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok((Secret::new(field, k, amps)?, norm))
    }

    pub fn basis(field: &Field, k: usize, index: usize) -> Result<Self> {
        Ok(Secret {
            state: StateVector::basis(field, k, index)?,
        })
    }

    /// Haar-random secret (normalized complex Gaussian amplitudes).
    pub fn random<R: Rng + ?Sized>(field: &Field, k: usize, rng: &mut R) -> Result<Self> {
        let dim = dimension(field.q(), k)
            .ok_or_else(|| Error::BudgetExceeded("secret dimension overflows".into()))?;
        let amps = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        Ok(Secret::normalizing(field, k, amps)?.0)
    }

    pub fn k(&self) -> usize {
        self.state.sites
    }

    pub fn field(&self) -> &Field {
        &self.state.field
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.state.amps
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }
}

impl AsRef<StateVector> for Secret {
    fn as_ref(&self) -> &StateVector {
        &self.state
    }
}

/// Outcome of a Fourier-basis measurement of the sites in `subset_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub subset_a: PlayerSet,
    pub outcomes: GFVector,
    pub probability: f64,
}

/// `V: |x⟩ ↦ |x·G⟩`.
pub fn encode_secret(secret: &Secret, code: &LinearCode, budget: &Budget) -> Result<StateVector> {
    if secret.field() != code.field() {
        return Err(Error::FieldMismatch);
    }
    if secret.k() != code.k() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qudit secret for a code with k = {}",
            secret.k(),
            code.k()
        )));
    }
    let amps_needed = (code.q() as u64).checked_pow(code.n() as u32);
    if amps_needed.is_none_or(|a| a > budget.max_amplitudes) {
        return Err(Error::BudgetExceeded(format!(
            "{}^{} amplitudes exceeds the memory budget of {}",
            code.q(),
            code.n(),
            budget.max_amplitudes
        )));
    }
    let mut out = StateVector {
        field: code.field().clone(),
        sites: code.n(),
        amps: vec![Complex64::new(0.0, 0.0); amps_needed.unwrap() as usize],
    };
    let mut x = vec![0u32; code.k()];
    let mut word = vec![0u32; code.n()];
    for &c in secret.amplitudes() {
        code.generator().left_mul_into(&x, &mut word);
        let idx = out.index_of(&word);
        out.amps[idx] = c;
        next_word(&mut x, code.q());
    }
    Ok(out)
}

/// `|⟨u|v⟩|²`.
pub fn fidelity<U: AsRef<StateVector>, V: AsRef<StateVector>>(u: U, v: V) -> Result<f64> {
    let (u, v) = (u.as_ref(), v.as_ref());
    if u.field.q() != v.field.q() || u.amps.len() != v.amps.len() {
        return Err(Error::DimensionMismatch(format!(
            "states of dimension {} and {}",
            u.amps.len(),
            v.amps.len()
        )));
    }
    let overlap: Complex64 = u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.norm_sqr().min(1.0))
}
