//! Lowering rotation circuits to Clifford+T and calibrating the shared ε_T.

use super::exact::Letter;
use super::synth::{synthesize_rz, SUPPORTED_FLOOR};
use crate::error::{Error, Result};
use crate::gatedecomp::{ElementaryCircuit, Op};
use crate::terms::{state_error, CoefficientSet};

fn letter_op(l: Letter, q: usize) -> Op {
    match l {
        Letter::H => Op::H(q),
        Letter::S => Op::S(q),
        Letter::Sdg => Op::Sdg(q),
        Letter::T => Op::T(q),
        Letter::Tdg => Op::Tdg(q),
        Letter::X => Op::X(q),
        Letter::Z => Op::Z(q),
    }
}

/// Replaces every rotation by a Clifford+T word at tolerance `eps_t`.
///
/// `Ry(θ) = S H Rz(θ) H S†`, so an Ry becomes `SDG, H, word, H, S` in time
/// order. Returns the lowered circuit and its total T-count.
pub fn lower_circuit(circ: &ElementaryCircuit, eps_t: f64) -> Result<(ElementaryCircuit, usize)> {
    let mut out = ElementaryCircuit::new(circ.qubits);
    out.global_phase = circ.global_phase;
    let mut t_total = 0;
    for op in &circ.ops {
        match *op {
            Op::Rz(q, theta) | Op::Ry(q, theta) => {
                let word = synthesize_rz(theta, eps_t)?;
                let is_ry = matches!(op, Op::Ry(..));
                if is_ry {
                    out.push(Op::Sdg(q));
                    out.push(Op::H(q));
                }
                for &l in &word.letters {
                    out.push(letter_op(l, q));
                }
                if is_ry {
                    out.push(Op::H(q));
                    out.push(Op::S(q));
                }
                out.global_phase -= word.phase;
                t_total += word.t_count;
            }
            other => out.push(other),
        }
    }
    Ok((out, t_total))
}

/// Error budget and the ε_T search bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisBudget {
    /// Final tolerance on `max |c - c'|`.
    pub epsilon: f64,
    /// Per-rotation tolerance; the calibrated value after a search.
    pub epsilon_t: f64,
    pub search_lo: f64,
    pub search_hi: f64,
    pub iterations: u32,
}

impl SynthesisBudget {
    pub fn new(epsilon: f64) -> Self {
        SynthesisBudget { epsilon, epsilon_t: 0.5, search_lo: SUPPORTED_FLOOR, search_hi: 0.5, iterations: 20 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.search_lo > 0.0 && self.search_lo < self.search_hi && self.search_hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad eps_t bracket [{}, {}]",
                self.search_lo, self.search_hi
            )));
        }
        Ok(())
    }
}

/// Result of lowering at one ε_T.
#[derive(Debug, Clone)]
pub struct Probe {
    pub eps_t: f64,
    pub circuit: ElementaryCircuit,
    pub t_count: usize,
    pub error: f64,
}

/// Lowers at `eps_t` and measures `max |c - c'|` by re-simulation.
pub fn probe(circ: &ElementaryCircuit, cs: &CoefficientSet, eps_t: f64) -> Result<Probe> {
    let (circuit, t_count) = lower_circuit(circ, eps_t)?;
    let state = circuit.simulate(cs.qubits())?;
    let error = state_error(&state, cs)?;
    Ok(Probe { eps_t, circuit, t_count, error })
}

/// Bisection on `log2 ε_T` for the largest shared tolerance whose lowered
/// circuit still meets `budget.epsilon`. Returns the budget with
/// `epsilon_t` set, plus the lowered circuit at that tolerance.
pub fn calibrate_eps_t(
    circ: &ElementaryCircuit,
    cs: &CoefficientSet,
    budget: &SynthesisBudget,
) -> Result<(SynthesisBudget, Probe)> {
    budget.validate()?;
    let passes = |p: &Probe| p.error <= budget.epsilon;
    let unreachable = || Error::BudgetUnreachable { lo: budget.search_lo, hi: budget.search_hi, epsilon: budget.epsilon };
    let top = probe(circ, cs, budget.search_hi)?;
    let mut best = if passes(&top) {
        top
    } else {
        // The floor is the most expensive probe, so it is tried only if no
        // bisection point passes.
        let (mut lo, mut hi) = (budget.search_lo.log2(), budget.search_hi.log2());
        let mut best = None;
        for _ in 0..budget.iterations {
            let mid = 0.5 * (lo + hi);
            let p = probe(circ, cs, mid.exp2())?;
            if passes(&p) {
                lo = mid;
                best = Some(p);
            } else {
                hi = mid;
            }
        }
        match best {
            Some(p) => p,
            None => {
                let bottom = probe(circ, cs, budget.search_lo)?;
                if !passes(&bottom) {
                    return Err(unreachable());
                }
                bottom
            }
        }
    };
    // Independent final re-simulation of the chosen configuration.
    let check = probe(circ, cs, best.eps_t)?;
    if !passes(&check) || check.t_count != best.t_count {
        return Err(unreachable());
    }
    best.error = check.error;
    let mut out = *budget;
    out.epsilon_t = best.eps_t;
    Ok((out, best))
}
