//! Grover attack driver.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::circuit::{Circuit, CircuitBuilder, QubitId};
use crate::error::{Error, Result};
use crate::oracle::{build_oracle, AttackInstance, OracleLayout};
use crate::qsim::StateVector;
use crate::saes::{encrypt_with, Key, RoundConstants};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverPlan {
    pub search_qubits: usize,
    pub n: u64,
    pub m: u64,
    pub iterations: u64,
    pub predicted_success: f64,
}

impl GroverPlan {
    pub fn new(search_qubits: usize, m: u64) -> GroverPlan {
        let n = 1u64 << search_qubits;
        if m == 0 {
            return GroverPlan {
                search_qubits,
                n,
                m,
                iterations: 0,
                predicted_success: 0.0,
            };
        }
        let iterations = (FRAC_PI_4 * (n as f64 / m as f64).sqrt()).floor() as u64;
        GroverPlan {
            search_qubits,
            n,
            m,
            iterations,
            predicted_success: success_after(n, m, iterations),
        }
    }

    pub fn attackable(&self) -> bool {
        self.m > 0
    }
}

/// `sin^2((2r + 1) asin(sqrt(M / N)))`.
pub fn success_after(n: u64, m: u64, r: u64) -> f64 {
    let theta = (m as f64 / n as f64).sqrt().asin();
    ((2 * r + 1) as f64 * theta).sin().powi(2)
}

pub fn plan(inst: &AttackInstance, rc: RoundConstants) -> GroverPlan {
    GroverPlan::new(inst.leak.search_bits(), inst.solutions(rc).len() as u64)
}

/// Inversion about the mean on `key`.
pub fn diffusion(b: &mut CircuitBuilder, key: &[QubitId]) -> Result<()> {
    key.iter().try_for_each(|&q| b.h(q))?;
    key.iter().try_for_each(|&q| b.x(q))?;
    if !key.is_empty() {
        b.mcz(key)?;
    }
    key.iter().try_for_each(|&q| b.x(q))?;
    key.iter().try_for_each(|&q| b.h(q))
}

/// One Grover iteration: the oracle followed by diffusion on the key register.
pub fn iteration_circuit(inst: &AttackInstance, rc: RoundConstants) -> Result<(Circuit, OracleLayout)> {
    let (oracle, layout) = build_oracle(inst, rc)?;
    let mut b = CircuitBuilder::new(&[("all", layout.total_qubits)])?;
    for g in oracle.gates() {
        b.append(g.clone())?;
    }
    diffusion(&mut b, &layout.key_register)?;
    Ok((b.finish(), layout))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackOptions {
    pub shots: usize,
    pub seed: u64,
    pub qubit_limit: usize,
}

impl Default for AttackOptions {
    fn default() -> Self {
        AttackOptions {
            shots: 1024,
            seed: 0,
            qubit_limit: crate::qsim::DEFAULT_QUBIT_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackResult {
    /// Searched-register value to shot count.
    pub histogram: BTreeMap<u64, usize>,
    pub best_key: Key,
    pub verified: bool,
    pub empirical_success: f64,
    pub plan: GroverPlan,
    pub total_qubits: usize,
}

struct Prepared {
    iteration: Circuit,
    layout: OracleLayout,
    state: StateVector,
    solutions: Vec<Key>,
}

fn prepare(inst: &AttackInstance, rc: RoundConstants, qubit_limit: usize) -> Result<Prepared> {
    let solutions = inst.solutions(rc);
    if solutions.is_empty() {
        return Err(Error::NoSolutions);
    }
    let (iteration, layout) = iteration_circuit(inst, rc)?;
    let mut state = StateVector::with_limit(layout.total_qubits, 0, qubit_limit)?;
    for &q in &layout.key_register {
        state.apply(&crate::circuit::Gate::H(q))?;
    }
    Ok(Prepared {
        iteration,
        layout,
        state,
        solutions,
    })
}

fn solution_mass(state: &StateVector, layout: &OracleLayout, inst: &AttackInstance, solutions: &[Key]) -> f64 {
    let marginal = state.marginal(&layout.key_register);
    solutions.iter().map(|&k| marginal[inst.leak.project(k) as usize]).sum()
}

pub fn run_attack(inst: &AttackInstance, rc: RoundConstants, opts: AttackOptions) -> Result<AttackResult> {
    let Prepared {
        iteration,
        layout,
        mut state,
        solutions,
    } = prepare(inst, rc, opts.qubit_limit)?;
    let plan = GroverPlan::new(layout.key_register.len(), solutions.len() as u64);
    for r in 0..plan.iterations {
        state.run(&iteration)?;
        log::debug!("iteration {}/{} done", r + 1, plan.iterations);
    }
    let histogram = state.measure(&layout.key_register, opts.seed, opts.shots);
    let (&mode, _) = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .expect("at least one shot");
    let best_key = inst.leak.merge(mode as u32);
    let hits: usize = histogram
        .iter()
        .filter(|(&kappa, _)| solutions.contains(&inst.leak.merge(kappa as u32)))
        .map(|(_, &c)| c)
        .sum();
    Ok(AttackResult {
        verified: encrypt_with(inst.plaintext, best_key, rc) == inst.ciphertext,
        empirical_success: hits as f64 / opts.shots.max(1) as f64,
        histogram,
        best_key,
        plan,
        total_qubits: layout.total_qubits,
    })
}

/// Exact probability of measuring a solution after each of `0..=r_max` iterations.
pub fn success_curve(
    inst: &AttackInstance,
    rc: RoundConstants,
    r_max: u64,
    qubit_limit: usize,
) -> Result<Vec<(u64, f64)>> {
    let Prepared {
        iteration,
        layout,
        mut state,
        solutions,
    } = prepare(inst, rc, qubit_limit)?;
    let mut curve = vec![(0, solution_mass(&state, &layout, inst, &solutions))];
    for r in 1..=r_max {
        state.run(&iteration)?;
        curve.push((r, solution_mass(&state, &layout, inst, &solutions)));
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_counts() {
        assert_eq!(GroverPlan::new(16, 1).iterations, 201);
        assert_eq!(GroverPlan::new(8, 1).iterations, 12);
        assert_eq!(GroverPlan::new(4, 1).iterations, 3);
        let all = GroverPlan::new(3, 8);
        assert_eq!(all.iterations, 0);
        assert!((all.predicted_success - 1.0).abs() < 1e-12);
        assert!(!GroverPlan::new(4, 0).attackable());
    }

    #[test]
    fn two_qubit_search_is_exact() {
        assert!((success_after(4, 1, 1) - 1.0).abs() < 1e-12);
    }
}
