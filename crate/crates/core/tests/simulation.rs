use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use saes_grover::grover::{diffusion, run_attack, success_after, success_curve, AttackOptions, GroverPlan};
use saes_grover::oracle::build_oracle;
use saes_grover::qsim::{check_agreement, emulate, Backend, PhasedBasisState, Sign, StateVector, DEFAULT_QUBIT_LIMIT};
use saes_grover::{AttackInstance, Block, CircuitBuilder, Gate, Key, KeyNibble, OracleVariant, RoundConstants};

use KeyNibble::{B0Hi, B0Lo, B1Hi, B1Lo};

const RC: RoundConstants = RoundConstants::STANDARD;

fn instance(variant: OracleVariant, leaked: &[KeyNibble]) -> AttackInstance {
    AttackInstance::from_key(variant, Block::from_u16(0x6F6B), Key::from_u16(0xA73B), leaked)
}

fn random_inputs(n: usize, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, 1 << n, count)
        .into_iter()
        .map(|i| i as u64)
        .collect()
}

#[test]
fn backends_agree_on_small_oracles() {
    for (v, leaked) in [
        (OracleVariant::Split, &[B1Hi, B1Lo][..]),
        (OracleVariant::DoubleSplit, &[B0Hi, B1Lo][..]),
        (OracleVariant::DoubleSplit, &[B0Hi, B0Lo, B1Hi][..]),
    ] {
        let (c, _) = build_oracle(&instance(v, leaked), RC).unwrap();
        let report = check_agreement(&c, &random_inputs(c.qubit_count(), 100, 7), DEFAULT_QUBIT_LIMIT).unwrap();
        assert_eq!(report.backend, Backend::Dense);
        assert_eq!(report.inputs, 100);
        assert!(report.passed(), "{v}: {report:?}");
    }
}

#[test]
fn sparse_backend_agrees_on_full_oracle() {
    let (c, _) = build_oracle(&instance(OracleVariant::FullBasic, &[]), RC).unwrap();
    let report = check_agreement(&c, &random_inputs(32, 100, 7), DEFAULT_QUBIT_LIMIT).unwrap();
    assert_eq!(report.backend, Backend::Sparse);
    assert!(report.passed());
}

#[test]
fn agreement_detects_a_wrong_emulator_prediction() {
    // A Hadamard spreads amplitude, which no signed permutation can match.
    let mut b = CircuitBuilder::new(&[("q", 2)]).unwrap();
    b.x(0).unwrap();
    let c = b.finish();
    assert!(check_agreement(&c, &[0, 1, 2, 3], 26).unwrap().passed());
    let mut b = CircuitBuilder::new(&[("q", 2)]).unwrap();
    b.h(0).unwrap();
    assert!(check_agreement(&b.finish(), &[0], 26).is_err());
}

#[test]
fn emulator_tracks_phase() {
    let mut b = CircuitBuilder::new(&[("q", 3)]).unwrap();
    b.x(0).unwrap();
    b.x(2).unwrap();
    b.mcz(&[0, 2]).unwrap();
    b.cx(0, 1).unwrap();
    let out = emulate(PhasedBasisState::new(3, 0), &b.finish()).unwrap();
    assert_eq!(out.bits, 0b111);
    assert_eq!(out.phase, Sign::Minus);
    assert_eq!(out.to_string(), "111 -");
}

#[test]
fn qubit_guard() {
    assert!(StateVector::new(27, 0).is_err());
    assert!(StateVector::with_limit(12, 0, 10).is_err());
}

fn uniform(n: usize) -> (StateVector, Vec<usize>) {
    let mut s = StateVector::new(n, 0).unwrap();
    let reg: Vec<usize> = (0..n).collect();
    for &q in &reg {
        s.apply(&Gate::H(q)).unwrap();
    }
    (s, reg)
}

#[test]
fn diffusion_fixes_the_uniform_state() {
    let (mut s, reg) = uniform(4);
    let before = s.clone();
    let mut b = CircuitBuilder::new(&[("k", 4)]).unwrap();
    diffusion(&mut b, &reg).unwrap();
    s.run(&b.finish()).unwrap();
    // Inversion about the mean fixes the mean direction up to a global sign.
    let phase = s.amplitude(0) / before.amplitude(0);
    assert!((phase.norm() - 1.0).abs() < 1e-12);
    for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
        assert!((a - b * phase).norm() < 1e-12);
    }
}

#[test]
fn diffusion_twice_is_identity() {
    let mut b = CircuitBuilder::new(&[("k", 3)]).unwrap();
    diffusion(&mut b, &[0, 1, 2]).unwrap();
    diffusion(&mut b, &[0, 1, 2]).unwrap();
    let c = b.finish();
    for basis in 0..8 {
        let mut s = StateVector::new(3, basis).unwrap();
        s.run(&c).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expected = if i as u64 == basis { 1.0 } else { 0.0 };
            assert!((a - Complex64::new(expected, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn two_qubit_search_succeeds_in_one_iteration() {
    let (mut s, reg) = uniform(2);
    let mut b = CircuitBuilder::new(&[("k", 2)]).unwrap();
    b.x(0).unwrap();
    b.mcz(&reg).unwrap();
    b.x(0).unwrap();
    diffusion(&mut b, &reg).unwrap();
    s.run(&b.finish()).unwrap();
    // The marked element has qubit 0 clear and qubit 1 set.
    assert!((s.amplitude(0b10).norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn plans() {
    assert_eq!(GroverPlan::new(16, 1).iterations, 201);
    assert_eq!(GroverPlan::new(8, 1).iterations, 12);
    assert_eq!(GroverPlan::new(4, 1).iterations, 3);
    assert!((GroverPlan::new(4, 1).predicted_success - 0.9613189697265625).abs() < 1e-12);
    assert!((GroverPlan::new(8, 1).predicted_success - 0.9999470421032736).abs() < 1e-12);
    assert!((GroverPlan::new(16, 1).predicted_success - 0.9999882596461666).abs() < 1e-12);
}

fn check_curve(inst: &AttackInstance, r_max: u64) {
    let plan = saes_grover::grover::plan(inst, RC);
    assert_eq!(plan.m, 1);
    let curve = success_curve(inst, RC, r_max, DEFAULT_QUBIT_LIMIT).unwrap();
    assert_eq!(curve.len() as u64, r_max + 1);
    assert!((curve[0].1 - 1.0 / plan.n as f64).abs() < 1e-12);
    for &(r, p) in &curve {
        assert!((p - success_after(plan.n, plan.m, r)).abs() < 1e-9, "r={r}: {p}");
    }
    let first_peak = (1..curve.len() - 1)
        .find(|&i| curve[i].1 > curve[i - 1].1 && curve[i].1 >= curve[i + 1].1)
        .unwrap() as u64;
    assert_eq!(first_peak, plan.iterations);
}

#[test]
fn eleven_qubit_curve_matches_closed_form() {
    check_curve(&instance(OracleVariant::DoubleSplit, &[B0Hi, B0Lo, B1Hi]), 8);
}

#[test]
fn fifteen_qubit_curve_matches_closed_form() {
    check_curve(&instance(OracleVariant::DoubleSplit, &[B0Hi, B1Lo]), 20);
}

fn check_sampled(inst: &AttackInstance, expected: f64) {
    let opts = AttackOptions {
        shots: 4096,
        seed: 11,
        ..AttackOptions::default()
    };
    let result = run_attack(inst, RC, opts).unwrap();
    let sigma = (expected * (1.0 - expected) / 4096.0).sqrt();
    assert!((result.empirical_success - expected).abs() <= 3.0 * sigma);
    assert!(result.verified);
    assert_eq!(result.best_key, Key::from_u16(0xA73B));
    assert_eq!(result.histogram.values().sum::<usize>(), 4096);
    let again = run_attack(inst, RC, opts).unwrap();
    assert_eq!(again, result);
}

#[test]
fn eleven_qubit_attack_samples_within_three_sigma() {
    check_sampled(
        &instance(OracleVariant::DoubleSplit, &[B0Hi, B0Lo, B1Hi]),
        0.9613189697265625,
    );
}

#[test]
fn fifteen_qubit_attack_samples_within_three_sigma() {
    check_sampled(&instance(OracleVariant::DoubleSplit, &[B0Hi, B1Lo]), 0.9999470421032736);
}

#[test]
fn attack_on_seventeen_qubit_split() {
    let inst = instance(OracleVariant::Split, &[B1Hi, B1Lo]);
    let result = run_attack(
        &inst,
        RC,
        AttackOptions {
            shots: 256,
            ..AttackOptions::default()
        },
    )
    .unwrap();
    assert!(result.verified);
    assert_eq!(result.total_qubits, 17);
}

#[test]
fn attack_refuses_unsolvable_and_oversized() {
    let p = Block::from_u16(0x6F6B);
    let leak: saes_grover::LeakConfig = "B0^0=0,B0^1=0,B1^0=0".parse().unwrap();
    let c = (0..=u16::MAX)
        .map(Block::from_u16)
        .find(|&c| saes_grover::saes::solutions(p, c, &leak).is_empty())
        .unwrap();
    let inst = AttackInstance::new(OracleVariant::DoubleSplit, p, c, leak);
    assert!(matches!(
        run_attack(&inst, RC, AttackOptions::default()),
        Err(saes_grover::Error::NoSolutions)
    ));
    assert!(!saes_grover::grover::plan(&inst, RC).attackable());
    let big = instance(OracleVariant::DoubleSplit, &[]);
    let opts = AttackOptions {
        qubit_limit: 20,
        ..AttackOptions::default()
    };
    assert!(run_attack(&big, RC, opts).is_err());
}

#[test]
fn iterations_keep_norm_and_real_amplitudes() {
    let inst = instance(OracleVariant::DoubleSplit, &[B0Hi, B0Lo, B1Lo]);
    let (iteration, layout) = saes_grover::grover::iteration_circuit(&inst, RC).unwrap();
    let mut s = StateVector::new(layout.total_qubits, 0).unwrap();
    for &q in &layout.key_register {
        s.apply(&Gate::H(q)).unwrap();
    }
    for _ in 0..6 {
        s.run(&iteration).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-9);
        assert!(s.amplitudes().iter().all(|a| a.im.abs() < 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_is_a_probability(bits in 1usize..20, m in 1u64..64, r in 0u64..300) {
        let n = 1u64 << bits;
        prop_assume!(m <= n);
        let p = success_after(n, m, r);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
        let plan = GroverPlan::new(bits, m);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&plan.predicted_success));
    }

    #[test]
    fn measurement_is_seed_deterministic(seed in any::<u64>()) {
        let (s, reg) = uniform(5);
        prop_assert_eq!(s.measure(&reg, seed, 200), s.measure(&reg, seed, 200));
        prop_assert_eq!(s.measure(&reg, seed, 200).values().sum::<usize>(), 200);
    }

    #[test]
    fn circuit_inverse_undoes_random_reversible_circuits(
        ops in proptest::collection::vec((0usize..4, 0usize..6, 0usize..6, 0usize..6), 1..40),
        input in 0u64..64,
    ) {
        let mut b = CircuitBuilder::new(&[("q", 6)]).unwrap();
        for (kind, a, c, t) in ops {
            let _ = match kind {
                0 => b.x(a),
                1 => b.cx(a, t),
                2 => b.ccx(a, c, t),
                _ => b.relabel(&[(a, t), (t, a)]),
            };
        }
        let c = b.finish();
        let forward = emulate(PhasedBasisState::new(6, input), &c).unwrap();
        let back = emulate(forward, &c.inverse()).unwrap();
        prop_assert_eq!(back.bits, input);
        prop_assert_eq!(back.phase, Sign::Plus);
    }
}
