//! The LOCC-assisted sharing protocol: the dealer encodes, players in `A`
//! measure in the Fourier basis and broadcast their outcomes, and the
//! players in `B` apply a `Z^z` correction followed by a fixed decoding
//! isometry `V_B`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{next_word, Budget, LinearCode, PlayerSet};
use crate::error::{Error, Result};
use crate::linalg::{AffineSolution, GFMatrix, GFVector};
use crate::qsim::{encode_secret, fidelity, round12, Secret, StateVector, TOLERANCE};
use crate::schema::{amplitude_pairs, CodeSpec};

/// Seeds the protocol's random source.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn not_assisted(code: &LinearCode, b: &PlayerSet, rank: usize) -> Error {
    Error::NotAssisted {
        subset_b: b.to_string(),
        rank,
        k: code.k(),
    }
}

/// `V_B: |x·G_B⟩ ↦ |x⟩`. Depends only on the code and `B`.
#[derive(Debug)]
pub struct DecodeIsometry {
    subset_b: PlayerSet,
    restriction: GFMatrix,
    /// Index into the `B` register of `x·G_B`, for each message index `x`.
    images: Vec<usize>,
    k: usize,
}

impl DecodeIsometry {
    pub fn new(code: &LinearCode, b: &PlayerSet) -> Result<Self> {
        b.check_within(code.n())?;
        let restriction = code.restriction(b)?;
        let rank = restriction.rank();
        if rank != code.k() {
            return Err(not_assisted(code, b, rank));
        }
        let q = code.q() as usize;
        let mut images = Vec::with_capacity(code.num_codewords() as usize);
        let mut x = vec![0u32; code.k()];
        let mut word = vec![0u32; b.len()];
        loop {
            restriction.left_mul_into(&x, &mut word);
            images.push(word.iter().fold(0usize, |acc, &d| acc * q + d as usize));
            if !next_word(&mut x, code.q()) {
                break;
            }
        }
        Ok(DecodeIsometry {
            subset_b: b.clone(),
            restriction,
            images,
            k: code.k(),
        })
    }

    pub fn subset_b(&self) -> &PlayerSet {
        &self.subset_b
    }

    /// `G_B`.
    pub fn restriction(&self) -> &GFMatrix {
        &self.restriction
    }

    /// Maps a `B` state supported on `span{|x·G_B⟩}` back to the secret
    /// register. Mass outside that span is an error.
    pub fn apply(&self, state_b: &StateVector) -> Result<Secret> {
        let field = self.restriction.field();
        if state_b.field() != field || state_b.sites() != self.subset_b.len() {
            return Err(Error::DimensionMismatch(format!(
                "decoder for {} expects {} qudits, got {}",
                self.subset_b,
                self.subset_b.len(),
                state_b.sites()
            )));
        }
        let amps: Vec<Complex64> = self
            .images
            .iter()
            .map(|&i| state_b.amplitudes()[i])
            .collect();
        let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let leak = (state_b.norm_sqr() - kept).max(0.0);
        if leak > TOLERANCE {
            return Err(Error::SupportLeak(leak));
        }
        Ok(Secret::normalizing(field, self.k, amps)?.0)
    }
}

/// Applies `V_B` built fresh for `(code, b)`.
pub fn apply_decode_isometry(state_b: &StateVector, code: &LinearCode, b: &PlayerSet) -> Result<Secret> {
    DecodeIsometry::new(code, b)?.apply(state_b)
}

/// All `z` with `G_B·z^T = G_A·a^T`.
pub fn correction_solutions(
    code: &LinearCode,
    a: &PlayerSet,
    outcomes: &GFVector,
) -> Result<AffineSolution> {
    a.check_within(code.n())?;
    if outcomes.len() != a.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} outcomes for |A| = {}",
            outcomes.len(),
            a.len()
        )));
    }
    let b = a.complement(code.n());
    if b.is_empty() {
        return Err(Error::InvalidSubset("B is empty".into()));
    }
    let g_b = code.restriction(&b)?;
    let rank = g_b.rank();
    if rank != code.k() {
        return Err(not_assisted(code, &b, rank));
    }
    let rhs = if a.is_empty() {
        GFVector::zeros(code.field(), code.k())
    } else {
        code.restriction(a)?.mul_vec(outcomes)?
    };
    g_b.solve_affine(&rhs)
}

/// Canonical correction (free variables zero) for the outcomes `a`.
pub fn compute_correction(code: &LinearCode, a: &PlayerSet, outcomes: &GFVector) -> Result<GFVector> {
    correction_solutions(code, a, outcomes).map(|s| s.particular)
}

/// Record of one protocol execution.
#[derive(Debug, Clone)]
pub struct ProtocolTranscript {
    pub code: LinearCode,
    pub subset_a: PlayerSet,
    pub secret: Secret,
    pub outcomes_a: GFVector,
    pub outcome_probability: f64,
    pub correction_z: GFVector,
    pub recovered: Secret,
    pub fidelity: f64,
    pub seed: Option<u64>,
    /// The `V_B` used; shared by every run of the same decoder.
    pub isometry: Arc<DecodeIsometry>,
}

#[derive(Serialize)]
struct TranscriptJson<'a> {
    code: CodeSpec,
    subset_a: &'a PlayerSet,
    subset_b: &'a PlayerSet,
    seed: Option<u64>,
    secret: Vec<[f64; 2]>,
    outcomes_a: &'a [u32],
    outcome_probability: f64,
    correction_z: &'a [u32],
    recovered: Vec<[f64; 2]>,
    fidelity: f64,
}

impl ProtocolTranscript {
    pub fn subset_b(&self) -> &PlayerSet {
        self.isometry.subset_b()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(TranscriptJson {
            code: CodeSpec::of(&self.code),
            subset_a: &self.subset_a,
            subset_b: self.subset_b(),
            seed: self.seed,
            secret: amplitude_pairs(self.secret.amplitudes()),
            outcomes_a: self.outcomes_a.as_slice(),
            outcome_probability: round12(self.outcome_probability),
            correction_z: self.correction_z.as_slice(),
            recovered: amplitude_pairs(self.recovered.amplitudes()),
            fidelity: round12(self.fidelity),
        })
        .expect("transcript fields serialize")
    }
}

/// Intermediate states of one run, for inspection and display.
#[derive(Debug, Clone)]
pub struct RunStages {
    pub encoded: StateVector,
    pub measured: StateVector,
    pub corrected: StateVector,
}

/// The decoder held by `B` for a fixed assisting set `A`: `V_B` is built
/// once and reused for every measurement outcome.
#[derive(Debug, Clone)]
pub struct LoccDecoder {
    code: LinearCode,
    subset_a: PlayerSet,
    budget: Budget,
    isometry: Arc<DecodeIsometry>,
}

impl LoccDecoder {
    pub fn new(code: &LinearCode, a: &PlayerSet, budget: Budget) -> Result<Self> {
        a.check_within(code.n())?;
        if a.is_empty() || a.len() == code.n() {
            return Err(Error::InvalidSubset(format!(
                "A = {a} must be a proper nonempty subset of the {} players",
                code.n()
            )));
        }
        let b = a.complement(code.n());
        Ok(LoccDecoder {
            code: code.clone(),
            subset_a: a.clone(),
            budget,
            isometry: Arc::new(DecodeIsometry::new(code, &b)?),
        })
    }

    pub fn isometry(&self) -> &Arc<DecodeIsometry> {
        &self.isometry
    }

    pub fn subset_a(&self) -> &PlayerSet {
        &self.subset_a
    }

    /// Runs the protocol, sampling the measurement with `rng`.
    pub fn run<R: Rng + ?Sized>(&self, secret: &Secret, rng: &mut R) -> Result<ProtocolTranscript> {
        self.run_inner(secret, Outcome::Sample(rng)).map(|(t, _)| t)
    }

    /// Runs the protocol conditioned on a given outcome tuple.
    pub fn run_with_outcome(
        &self,
        secret: &Secret,
        outcomes: &GFVector,
    ) -> Result<(ProtocolTranscript, RunStages)> {
        self.run_inner::<ChaCha8Rng>(secret, Outcome::Fixed(outcomes))
    }

    /// Runs the protocol and also returns the intermediate states.
    pub fn run_staged<R: Rng + ?Sized>(
        &self,
        secret: &Secret,
        rng: &mut R,
    ) -> Result<(ProtocolTranscript, RunStages)> {
        self.run_inner(secret, Outcome::Sample(rng))
    }

    fn run_inner<R: Rng + ?Sized>(
        &self,
        secret: &Secret,
        outcome: Outcome<'_, R>,
    ) -> Result<(ProtocolTranscript, RunStages)> {
        let encoded = encode_secret(secret, &self.code, &self.budget)?;
        let (outcomes_a, probability, measured) = match outcome {
            Outcome::Sample(rng) => {
                let (rec, post) = encoded.measure_fourier(&self.subset_a, rng)?;
                (rec.outcomes, rec.probability, post)
            }
            Outcome::Fixed(a) => {
                let (prob, post) = encoded.project_fourier(&self.subset_a, a)?;
                (a.clone(), prob, post)
            }
        };
        let expected = (self.code.q() as f64).powi(-(self.subset_a.len() as i32));
        if (probability - expected).abs() > TOLERANCE {
            return Err(Error::NonUniformOutcome {
                got: probability,
                expected,
            });
        }

        let correction = compute_correction(&self.code, &self.subset_a, &outcomes_a)?;
        let mut corrected = measured.clone();
        for (site, z) in correction.as_slice().iter().enumerate() {
            corrected.apply_z(site, &self.code.field().elem(*z)?)?;
        }
        self.check_phase_free(secret, &corrected)?;

        let recovered = self.isometry.apply(&corrected)?;
        let fid = fidelity(secret, &recovered)?;
        Ok((
            ProtocolTranscript {
                code: self.code.clone(),
                subset_a: self.subset_a.clone(),
                secret: secret.clone(),
                outcomes_a,
                outcome_probability: probability,
                correction_z: correction,
                recovered,
                fidelity: fid,
                seed: None,
                isometry: Arc::clone(&self.isometry),
            },
            RunStages {
                encoded,
                measured,
                corrected,
            },
        ))
    }

    /// After `Z^z` the amplitude on `|x·G_B⟩` must be `c(x)` itself. The
    /// zero message (or the largest amplitude, if that one vanishes) fixes
    /// the global phase.
    fn check_phase_free(&self, secret: &Secret, corrected: &StateVector) -> Result<()> {
        let images = &self.isometry.images;
        let c = secret.amplitudes();
        let reference = if c[0].norm() > 1e-6 {
            0
        } else {
            (0..c.len())
                .max_by(|&i, &j| c[i].norm().total_cmp(&c[j].norm()))
                .unwrap_or(0)
        };
        let ratio = corrected.amplitudes()[images[reference]] / c[reference];
        let phase = if ratio.norm() > 0.0 {
            ratio / ratio.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let worst = c
            .iter()
            .zip(images)
            .map(|(cx, &i)| (corrected.amplitudes()[i] - cx * phase).norm())
            .fold(0.0, f64::max);
        if worst > TOLERANCE {
            return Err(Error::PhaseResidual(worst));
        }
        Ok(())
    }
}

enum Outcome<'a, R: ?Sized> {
    Sample(&'a mut R),
    Fixed(&'a GFVector),
}

/// Full protocol run with a ChaCha8 source seeded from `seed`.
pub fn run_protocol(
    code: &LinearCode,
    a: &PlayerSet,
    secret: &Secret,
    seed: u64,
) -> Result<ProtocolTranscript> {
    let decoder = LoccDecoder::new(code, a, Budget::default())?;
    let mut rng = seeded_rng(seed);
    let mut t = decoder.run(secret, &mut rng)?;
    t.seed = Some(seed);
    Ok(t)
}

/// What the rank test predicts for `A`, and the evidence gathered.
#[derive(Debug, Clone, Serialize)]
pub struct SubsetVerdict {
    pub subset_a: PlayerSet,
    pub subset_b: PlayerSet,
    pub rank_gb: usize,
    pub k: usize,
    pub evidence: Evidence,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `rank(G_B) = k`: randomized runs all recovered the secret.
    Recovered {
        trials: usize,
        min_fidelity: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        failure: Option<String>,
    },
    /// `rank(G_B) < k`: two messages land on the same `B` word, and their
    /// post-measurement `B` states coincide up to phase.
    Collision {
        x1: Vec<u32>,
        x2: Vec<u32>,
        b_word: Vec<u32>,
        outcome: Vec<u32>,
        overlap: f64,
    },
}

/// Checks the rank criterion for `A` in whichever direction applies.
pub fn verify_theorem1<R: Rng + ?Sized>(
    code: &LinearCode,
    a: &PlayerSet,
    trials: usize,
    budget: &Budget,
    rng: &mut R,
) -> Result<SubsetVerdict> {
    if a.is_empty() {
        return Err(Error::InvalidSubset("A must be nonempty".into()));
    }
    let report = code.is_locc_assisting(a)?;
    let b = report.subset_b.clone();

    let evidence = if report.is_assisted {
        let decoder = LoccDecoder::new(code, a, *budget)?;
        let mut min_fidelity: f64 = 1.0;
        let mut failure = None;
        for _ in 0..trials {
            let secret = Secret::random(code.field(), code.k(), rng)?;
            match decoder.run(&secret, rng) {
                Ok(t) => min_fidelity = min_fidelity.min(t.fidelity),
                Err(e @ Error::BudgetExceeded(_)) => return Err(e),
                Err(e) => {
                    min_fidelity = 0.0;
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        Evidence::Recovered {
            trials,
            min_fidelity: round12(min_fidelity),
            failure,
        }
    } else {
        let (x1, x2) = code
            .collision_witness(&b)?
            .expect("rank-deficient restriction has a nontrivial left kernel");
        let g_b = code.restriction(&b)?;
        let mut w1 = vec![0; b.len()];
        let mut w2 = vec![0; b.len()];
        g_b.left_mul_into(x1.as_slice(), &mut w1);
        g_b.left_mul_into(x2.as_slice(), &mut w2);
        debug_assert_eq!(w1, w2);

        let basis_state = |x: &GFVector| -> Result<StateVector> {
            let probe = StateVector::zero_state(code.field(), code.k())?;
            let secret = Secret::basis(code.field(), code.k(), probe.index_of(x.as_slice()))?;
            encode_secret(&secret, code, budget)
        };
        let s1 = basis_state(&x1)?;
        let s2 = basis_state(&x2)?;
        let (rec, post1) = s1.measure_fourier(a, rng)?;
        let (_, post2) = s2.project_fourier(a, &rec.outcomes)?;
        Evidence::Collision {
            x1: x1.as_slice().to_vec(),
            x2: x2.as_slice().to_vec(),
            b_word: w1,
            outcome: rec.outcomes.as_slice().to_vec(),
            overlap: round12(fidelity(&post1, &post2)?),
        }
    };

    let pass = match &evidence {
        Evidence::Recovered {
            min_fidelity,
            failure,
            ..
        } => failure.is_none() && *min_fidelity >= 1.0 - TOLERANCE,
        Evidence::Collision {
            x1, x2, overlap, ..
        } => x1 != x2 && *overlap >= 1.0 - TOLERANCE,
    };
    Ok(SubsetVerdict {
        subset_a: a.clone(),
        subset_b: b,
        rank_gb: report.rank_gb,
        k: code.k(),
        evidence,
        pass,
    })
}

/// Every proper nonempty `A`, by size then lexicographically.
pub fn proper_subsets(n: usize) -> Vec<PlayerSet> {
    use itertools::Itertools;
    (1..n)
        .flat_map(|size| (0..n).combinations(size).map(PlayerSet::new))
        .collect()
}

/// [`verify_theorem1`] over every proper nonempty `A`. Subset `i` uses the
/// seed `seed + i`, so results do not depend on scheduling.
pub fn verify_all(code: &LinearCode, trials: usize, seed: u64, budget: &Budget) -> Result<Vec<SubsetVerdict>> {
    budget.check_subsets(code.n())?;
    proper_subsets(code.n())
        .into_par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut rng = seeded_rng(seed.wrapping_add(i as u64));
            verify_theorem1(code, &a, trials, budget, &mut rng)
        })
        .collect()
}
