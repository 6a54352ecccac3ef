use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use qshare_core::catalog::small_codes;
use qshare_core::protocol::{
    correction_solutions, proper_subsets, seeded_rng, verify_all, Evidence, LoccDecoder,
};
use qshare_core::qsim::TOLERANCE;
use qshare_core::{
    fidelity, Budget, Error, Field, GFMatrix, GFVector, LinearCode, PlayerSet, Secret, StateVector,
};
use rand::Rng;

fn assisted_subsets(code: &LinearCode) -> Vec<PlayerSet> {
    proper_subsets(code.n())
        .into_iter()
        .filter(|a| code.is_locc_assisting(a).unwrap().is_assisted)
        .collect()
}

#[test]
fn every_assisted_subset_recovers_every_secret() {
    for nc in small_codes() {
        let code = &nc.code;
        for a in assisted_subsets(code) {
            let dec = LoccDecoder::new(code, &a, Budget::default()).unwrap();
            let g_a = code.restriction(&a).unwrap();
            let g_b = dec.isometry().restriction().clone();
            for seed in 0..5u64 {
                let mut rng = seeded_rng(seed);
                for _ in 0..20 {
                    let secret = Secret::random(code.field(), code.k(), &mut rng).unwrap();
                    let t = dec.run(&secret, &mut rng).unwrap();
                    assert!((t.fidelity - 1.0).abs() < TOLERANCE, "{} A={a}", nc.name);
                    assert_eq!(
                        g_b.mul_vec(&t.correction_z).unwrap(),
                        g_a.mul_vec(&t.outcomes_a).unwrap(),
                        "{} A={a}",
                        nc.name
                    );
                    assert!(Arc::ptr_eq(&t.isometry, dec.isometry()));
                }
            }
        }
    }
}

#[test]
fn any_solution_of_the_correction_system_decodes() {
    let mut rng = seeded_rng(77);
    for nc in small_codes() {
        let code = &nc.code;
        for a in assisted_subsets(code) {
            let dec = LoccDecoder::new(code, &a, Budget::default()).unwrap();
            let secret = Secret::random(code.field(), code.k(), &mut rng).unwrap();
            let (t, stages) = dec.run_staged(&secret, &mut rng).unwrap();
            let sols = correction_solutions(code, &a, &t.outcomes_a).unwrap();
            let coeffs: Vec<u32> = (0..sols.kernel.len()).map(|_| rng.random_range(0..code.q())).collect();
            let z = sols.point(&coeffs).unwrap();
            let mut state = stages.measured.clone();
            for (site, &zi) in z.as_slice().iter().enumerate() {
                state.apply_z(site, &code.field().elem(zi).unwrap()).unwrap();
            }
            let recovered = dec.isometry().apply(&state).unwrap();
            assert!((fidelity(&secret, &recovered).unwrap() - 1.0).abs() < TOLERANCE, "{} A={a}", nc.name);
        }
    }
}

#[test]
fn corrected_state_carries_the_secret_amplitudes() {
    let mut rng = seeded_rng(5);
    for nc in small_codes() {
        let code = &nc.code;
        for a in assisted_subsets(code) {
            let dec = LoccDecoder::new(code, &a, Budget::default()).unwrap();
            let secret = Secret::random(code.field(), code.k(), &mut rng).unwrap();
            let (t, stages) = dec.run_staged(&secret, &mut rng).unwrap();
            // The decoded register equals the secret amplitude by amplitude.
            for (r, c) in t.recovered.amplitudes().iter().zip(secret.amplitudes()) {
                assert!((r - c).norm() < TOLERANCE, "{} A={a}", nc.name);
            }
            assert!((stages.corrected.norm_sqr() - 1.0).abs() < TOLERANCE);
        }
    }
}

#[test]
fn factored_decoder_reproduces_phased_isometry() {
    // Z^z followed by V_B sends |x·G_B⟩ to ω^{tr(x·G_A·a^T)} |x⟩.
    let mut rng = seeded_rng(3);
    for nc in small_codes().into_iter().filter(|c| c.code.k() <= 2) {
        let code = &nc.code;
        let f = code.field().clone();
        for a in assisted_subsets(code) {
            let dec = LoccDecoder::new(code, &a, Budget::default()).unwrap();
            let g_a = code.restriction(&a).unwrap();
            let g_b = dec.isometry().restriction().clone();
            let outcome: Vec<u32> = (0..a.len()).map(|_| rng.random_range(0..f.q())).collect();
            let outcome = GFVector::new(&f, outcome).unwrap();
            let z = qshare_core::compute_correction(code, &a, &outcome).unwrap();
            let rhs = g_a.mul_vec(&outcome).unwrap();
            let probe = StateVector::zero_state(&f, code.k()).unwrap();
            for xi in 0..code.num_codewords() as usize {
                let x = probe.digits_of(xi);
                let mut word = vec![0; g_b.cols()];
                g_b.left_mul_into(&x, &mut word);
                let b_state = StateVector::basis(&f, word.len(), StateVector::zero_state(&f, word.len()).unwrap().index_of(&word)).unwrap();
                let mut corrected = b_state;
                for (site, &zi) in z.as_slice().iter().enumerate() {
                    corrected.apply_z(site, &f.elem(zi).unwrap()).unwrap();
                }
                let out = dec.isometry().apply(&corrected).unwrap();
                let pairing = x.iter().zip(rhs.as_slice()).fold(0, |acc, (&xi, &ri)| f.add(acc, f.mul(xi, ri)));
                let phase = Complex64::from_polar(1.0, 2.0 * PI * f.trace(pairing) as f64 / f.p() as f64);
                assert!((out.amplitudes()[xi] - phase).norm() < TOLERANCE, "{} A={a} x={x:?}", nc.name);
            }
        }
    }
}

#[test]
fn correction_targets_b_sites_in_ascending_order() {
    // Tetracode over GF(3), A = {2,3}, B = {1,4}. For a = (1,0):
    // G_A·a^T = (0,1); G_B = [[1,1],[0,2]] gives z = (1,2).
    let f3 = Field::prime(3).unwrap();
    let code = LinearCode::new(GFMatrix::from_rows(&f3, &[[1, 0, 1, 1], [0, 1, 1, 2]]).unwrap()).unwrap();
    let a = PlayerSet::from_one_based(&[2, 3]).unwrap();
    let out = GFVector::new(&f3, vec![1, 0]).unwrap();
    let z = qshare_core::compute_correction(&code, &a, &out).unwrap();
    assert_eq!(z.as_slice(), &[1, 2]);

    let dec = LoccDecoder::new(&code, &a, Budget::default()).unwrap();
    let mut rng = seeded_rng(1);
    let secret = Secret::random(&f3, 2, &mut rng).unwrap();
    let (t, stages) = dec.run_with_outcome(&secret, &out).unwrap();
    assert!((t.fidelity - 1.0).abs() < TOLERANCE);

    // The same correction applied with the sites swapped leaves phases behind.
    let mut wrong = stages.measured.clone();
    wrong.apply_z(0, &f3.elem(2).unwrap()).unwrap();
    wrong.apply_z(1, &f3.elem(1).unwrap()).unwrap();
    let recovered = dec.isometry().apply(&wrong).unwrap();
    assert!(fidelity(&secret, &recovered).unwrap() < 1.0 - 1e-3);
}

#[test]
fn gf3_parity_code_by_hand() {
    // G = [[1,0,1],[0,1,1]], A = {1}: B holds Σ c(x) ω^{-x1·a} |x2, x1+x2⟩
    // and the correction is z = (-a, a).
    let f3 = Field::prime(3).unwrap();
    let code = LinearCode::new(GFMatrix::from_rows(&f3, &[[1, 0, 1], [0, 1, 1]]).unwrap()).unwrap();
    let a = PlayerSet::new([0]);
    let dec = LoccDecoder::new(&code, &a, Budget::default()).unwrap();
    let mut rng = seeded_rng(8);
    let secret = Secret::random(&f3, 2, &mut rng).unwrap();
    let w = |e: u32| Complex64::from_polar(1.0, 2.0 * PI * e as f64 / 3.0);
    for outcome in 0..3u32 {
        let (t, stages) = dec
            .run_with_outcome(&secret, &GFVector::new(&f3, vec![outcome]).unwrap())
            .unwrap();
        assert_eq!(t.correction_z.as_slice(), &[(3 - outcome) % 3, outcome]);
        let mut hand = [Complex64::new(0.0, 0.0); 9];
        for x1 in 0..3u32 {
            for x2 in 0..3u32 {
                let c = secret.amplitudes()[(x1 * 3 + x2) as usize];
                hand[(x2 * 3 + (x1 + x2) % 3) as usize] = c * w((3 - (x1 * outcome) % 3) % 3);
            }
        }
        for (got, want) in stages.measured.amplitudes().iter().zip(hand) {
            assert!((got - want).norm() < TOLERANCE);
        }
        assert!((t.fidelity - 1.0).abs() < TOLERANCE);
    }
}

#[test]
fn unassisted_subsets_yield_collision_witnesses() {
    let budget = Budget::default();
    for nc in small_codes() {
        let code = &nc.code;
        let verdicts = verify_all(code, 3, 99, &budget).unwrap();
        assert_eq!(verdicts.len(), proper_subsets(code.n()).len());
        for v in verdicts {
            assert!(v.pass, "{} A={}", nc.name, v.subset_a);
            match &v.evidence {
                Evidence::Collision { x1, x2, b_word, .. } => {
                    assert!(v.rank_gb < v.k);
                    let g_b = code.restriction(&v.subset_b).unwrap();
                    let (mut w1, mut w2) = (vec![0; b_word.len()], vec![0; b_word.len()]);
                    g_b.left_mul_into(x1, &mut w1);
                    g_b.left_mul_into(x2, &mut w2);
                    assert_ne!(x1, x2);
                    assert_eq!(&w1, b_word);
                    assert_eq!(&w2, b_word);
                }
                Evidence::Recovered { .. } => assert_eq!(v.rank_gb, v.k),
            }
        }
    }
}

#[test]
fn unassisted_decoder_is_refused() {
    let f2 = Field::prime(2).unwrap();
    let code = LinearCode::new(GFMatrix::from_rows(&f2, &[[1, 0, 1], [0, 1, 1]]).unwrap()).unwrap();
    assert!(matches!(
        LoccDecoder::new(&code, &PlayerSet::new([0, 1]), Budget::default()),
        Err(Error::NotAssisted { rank: 1, k: 2, .. })
    ));
}

#[test]
fn verification_is_reproducible() {
    let nc = small_codes().into_iter().find(|c| c.name.starts_with("tetracode")).unwrap();
    let a = serde_json::to_string(&verify_all(&nc.code, 4, 5, &Budget::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_all(&nc.code, 4, 5, &Budget::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}
