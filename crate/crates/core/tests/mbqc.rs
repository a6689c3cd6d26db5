mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use oneway_core::cluster::build_cluster_eq1;
use oneway_core::mbqc::*;
use oneway_core::noise::{solve_p_for_fidelity, white_noise};
use oneway_core::rng::seeded;
use oneway_core::{MeasurementBasis, Operator, Outcome, StateVector, C64};

fn reference_state(p: &Pattern) -> StateVector {
    match ideal_reference(p).unwrap() {
        Reference::State(s) => s,
        Reference::Distribution(_) => panic!("state expected"),
    }
}

/// Output of branch (s₂, s₃) computed directly from the gate identity
/// σ_x^{s₃} H R_z((−1)^{s₂}β') σ_x^{s₂} H R_z(α)|+⟩ with β' the basis angle
/// actually used, independent of the measurement simulation.
fn rotation_branch_oracle(alpha: f64, beta_used: f64, s2: u8, s3: u8) -> StateVector {
    let mut psi = StateVector::plus();
    psi = psi.apply(&Operator::rz(alpha), &[0]).unwrap().apply(&Operator::hadamard(), &[0]).unwrap();
    if s2 == 1 {
        psi = psi.apply(&Operator::pauli_x(), &[0]).unwrap();
    }
    psi.apply(&Operator::rz(beta_used), &[0])
        .unwrap()
        .apply(&Operator::hadamard(), &[0])
        .unwrap()
        .apply(&if s3 == 1 { Operator::pauli_x() } else { Operator::identity(1) }, &[0])
        .unwrap()
}

#[test]
fn raw_rotation_branches_match_gate_identity() {
    for (alpha, beta) in [(0.3, 1.2), (-FRAC_PI_2, -FRAC_PI_2), (FRAC_PI_4, PI / 12.0)] {
        for policy in [FeedForwardPolicy::Active, FeedForwardPolicy::Off] {
            let res = run_single_qubit_rotation(alpha, beta, policy, 1, 0).unwrap();
            for b in &res.branches {
                let (s2, s3) = (b.outcomes[0].bit(), b.outcomes[1].bit());
                let beta_used = adapted_beta(beta, b.outcomes[0], policy);
                let raw = rotation_branch_oracle(alpha, beta_used, s2, s3);
                let expected = match policy {
                    FeedForwardPolicy::Active => branch_correction(&b.correction, &raw).unwrap(),
                    FeedForwardPolicy::Off => raw,
                };
                let f = b.output.as_ref().unwrap().expectation_in(&expected).unwrap();
                assert!((f - 1.0).abs() < 1e-9, "{alpha} {beta} {policy:?} {:?}: {f}", b.outcomes);
            }
        }
    }
}

#[test]
fn feed_forward_is_deterministic_on_angle_grid() {
    for i in 0..8 {
        for j in 0..8 {
            let (alpha, beta) = (i as f64 * PI / 4.0 - PI, j as f64 * PI / 4.0 - PI + 0.1);
            let res = run_single_qubit_rotation(alpha, beta, FeedForwardPolicy::Active, 1, 0).unwrap();
            for b in &res.branches {
                assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn rotation_without_feed_forward_averages_to_half() {
    for (alpha, beta) in [(FRAC_PI_4, PI / 12.0), (0.7, -2.1), (-FRAC_PI_2, -FRAC_PI_2)] {
        let res = run_single_qubit_rotation(alpha, beta, FeedForwardPolicy::Off, 1, 0).unwrap();
        assert!((res.exact_average_fidelity - 0.5).abs() < 1e-12);
    }
}

#[test]
fn sampled_branch_frequencies_are_uniform() {
    let shots = 100_000u64;
    let res = run_single_qubit_rotation(0.4, 0.9, FeedForwardPolicy::Active, shots, 7).unwrap();
    let kept = res.kept_shots() as f64;
    let ps = res.post_selection.as_ref().unwrap();
    assert_eq!(ps.discarded_shots + res.kept_shots(), shots);
    let sigma_keep = (shots as f64 * 0.25).sqrt();
    assert!((kept - shots as f64 / 2.0).abs() < 3.0 * sigma_keep);
    let sigma = (kept * 0.25 * 0.75).sqrt();
    for b in &res.branches {
        assert!((b.count as f64 - kept / 4.0).abs() < 3.0 * sigma, "{:?}: {}", b.outcomes, b.count);
    }
}

#[test]
fn same_seed_same_result() {
    let a = run_single_qubit_rotation(0.1, 0.2, FeedForwardPolicy::Off, 5000, 99).unwrap();
    let b = run_single_qubit_rotation(0.1, 0.2, FeedForwardPolicy::Off, 5000, 99).unwrap();
    let c = run_single_qubit_rotation(0.1, 0.2, FeedForwardPolicy::Off, 5000, 100).unwrap();
    assert_eq!(a, b);
    assert_ne!(
        a.branches.iter().map(|x| x.count).collect::<Vec<_>>(),
        c.branches.iter().map(|x| x.count).collect::<Vec<_>>()
    );
}

#[test]
fn measure_qubit_statistics_and_replay() {
    let zero = StateVector::zero().tensor(&StateVector::zero()).unwrap();
    let mut rng = seeded(3);
    let mut ones = 0;
    let mut seq = Vec::new();
    for _ in 0..100_000 {
        let (o, _) = measure_qubit(&zero, 1, &MeasurementBasis::pauli_x(), &mut rng).unwrap();
        ones += o.bit() as u32;
        if seq.len() < 64 {
            seq.push(o);
        }
    }
    assert!((ones as f64 / 1e5 - 0.5).abs() < 0.01);
    let mut rng = seeded(3);
    let replay: Vec<Outcome> =
        (0..64).map(|_| measure_qubit(&zero, 1, &MeasurementBasis::pauli_x(), &mut rng).unwrap().0).collect();
    assert_eq!(seq, replay);
}

#[test]
fn two_qubit_table() {
    let p = Pattern::TwoQubit { alpha: 0.0, beta: 0.0 };
    let target = reference_state(&p);
    // (|0+⟩ + |1−⟩)/√2
    let h = 0.5;
    let expected =
        StateVector::from_amplitudes(vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)])
            .unwrap();
    assert!(target.equals_up_to_phase(&expected, 1e-12));

    let on = run_two_qubit_gate(0.0, 0.0, FeedForwardPolicy::Active, 1, 0).unwrap();
    let off = run_two_qubit_gate(0.0, 0.0, FeedForwardPolicy::Off, 1, 0).unwrap();
    for b in &on.branches {
        assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-9);
        assert!((b.probability - 0.25).abs() < 1e-12);
    }
    let b11 = off.branch(&[Outcome::One, Outcome::One]).unwrap();
    assert!(b11.fidelity.unwrap() < 1e-9);
    // Explicit table: s₂ → σ_x on qubit 1, s₃ → σ_x on qubit 4.
    for b in &on.branches {
        assert_eq!(b.correction.x_power(0), b.outcomes[0].bit());
        assert_eq!(b.correction.x_power(1), b.outcomes[1].bit());
        assert_eq!(b.correction.z_power(0) | b.correction.z_power(1), 0);
    }
}

#[test]
fn two_qubit_feed_forward_on_angle_grid() {
    for i in 0..6 {
        for j in 0..6 {
            let (a, b) = (i as f64 * 1.1 - 3.0, j as f64 * 0.9 - 2.0);
            let res = run_two_qubit_gate(a, b, FeedForwardPolicy::Active, 1, 0).unwrap();
            for br in &res.branches {
                assert!((br.fidelity.unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn grover_finds_every_tag() {
    for tag in 0..4u8 {
        let r = run_grover(tag, FeedForwardPolicy::Active, 100, 1).unwrap();
        assert!((r.probabilities[tag as usize] - 1.0).abs() < 1e-9);
        assert_eq!(r.counts[tag as usize], 100);
        let off = run_grover(tag, FeedForwardPolicy::Off, 1, 1).unwrap();
        for p in off.probabilities {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }
}

#[test]
fn grover_relabel_equals_explicit_correction() {
    let p = solve_p_for_fidelity(0.62, 4).unwrap();
    let noisy = white_noise(&build_cluster_eq1(), p).unwrap();
    for source in [ClusterSource::Ideal, ClusterSource::Mixed(&noisy)] {
        for tag in 0..4u8 {
            let opts = RunOptions { shots: 1, seed: 0, cluster: source };
            let a = run_grover_with(tag, FeedForwardPolicy::Active, GroverCorrection::Relabel, &opts).unwrap();
            let b = run_grover_with(tag, FeedForwardPolicy::Active, GroverCorrection::Explicit, &opts).unwrap();
            for (ba, bb) in a.branches.iter().zip(&b.branches) {
                for k in 0..4 {
                    assert!((ba.reported_distribution[k] - bb.reported_distribution[k]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn grover_with_calibrated_noise() {
    let p = solve_p_for_fidelity(0.62, 4).unwrap();
    let noisy = white_noise(&build_cluster_eq1(), p).unwrap();
    let opts = RunOptions { shots: 1, seed: 0, cluster: ClusterSource::Mixed(&noisy) };
    let r = run_grover_with(0, FeedForwardPolicy::Active, GroverCorrection::Relabel, &opts).unwrap();
    let p00 = r.probabilities[0];
    assert!(p00 > 0.25 && p00 < 1.0);
    // White noise only mixes in the uniform distribution.
    assert!((p00 - (p + (1.0 - p) / 4.0)).abs() < 1e-12);
}

#[test]
fn grover_off_sampling_is_uniform() {
    let r = run_grover(0, FeedForwardPolicy::Off, 100_000, 5).unwrap();
    for f in r.frequencies {
        assert!((f - 0.25).abs() < 0.01);
    }
}

#[test]
fn fidelity_is_monotone_in_noise() {
    let phi = build_cluster_eq1();
    let mut last = [0.0f64; 2];
    for p in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let rho = white_noise(&phi, p).unwrap();
        let opts = RunOptions { shots: 1, seed: 0, cluster: ClusterSource::Mixed(&rho) };
        let f = [
            run_single_qubit_rotation_with(0.5, 1.3, FeedForwardPolicy::Active, &opts).unwrap().exact_average_fidelity,
            run_two_qubit_gate_with(0.5, 1.3, FeedForwardPolicy::Active, &opts).unwrap().exact_average_fidelity,
        ];
        for k in 0..2 {
            assert!(f[k] >= last[k] - 1e-12);
            last[k] = f[k];
        }
    }
    assert!((last[0] - 1.0).abs() < 1e-9 && (last[1] - 1.0).abs() < 1e-9);
}

#[test]
fn mixed_ideal_input_matches_pure_path() {
    let rho = build_cluster_eq1().to_density();
    let opts = RunOptions { shots: 1000, seed: 4, cluster: ClusterSource::Mixed(&rho) };
    let a = run_single_qubit_rotation_with(0.2, 0.8, FeedForwardPolicy::Off, &opts).unwrap();
    let b = run_single_qubit_rotation(0.2, 0.8, FeedForwardPolicy::Off, 1000, 4).unwrap();
    assert!((a.averaged_fidelity - b.averaged_fidelity).abs() < 1e-12);
    assert_eq!(
        a.branches.iter().map(|x| x.count).collect::<Vec<_>>(),
        b.branches.iter().map(|x| x.count).collect::<Vec<_>>()
    );
}

#[test]
fn lab_frame_of_fig2b_angles_is_plus() {
    let r = reference_state(&Pattern::Rotation { alpha: -FRAC_PI_2, beta: -FRAC_PI_2 });
    assert!(lab_frame(&r).unwrap().equals_up_to_phase(&StateVector::plus(), 1e-12));
    assert!(r.equals_up_to_phase(&StateVector::zero(), 1e-12));
}
