//! End-to-end PREPARE synthesis: AQCE (or the multiplexed baseline), exact
//! decomposition into rotations, then Clifford+T lowering at a calibrated ε_T.

use std::time::Instant;

use crate::aqce::{run_aqce, AqceCircuit, AqceConfig};
use crate::baselines::naive_prepare;
use crate::cliffordt::{calibrate_eps_t, probe, SynthesisBudget, SUPPORTED_FLOOR};
use crate::error::{Error, Result};
use crate::gatedecomp::{decompose_circuit, ElementaryCircuit};
use crate::report::{Method, Status, StageTimings, SynthesisReport};
use crate::terms::{build_target, CoefficientSet};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub method: Method,
    /// Budget on `max |c - c'|` for the final Clifford+T circuit.
    pub epsilon: f64,
    /// AQCE settings; a `None` threshold means `ε' = ε`.
    pub aqce: AqceConfig,
    /// ε_T bracket and bisection depth; `epsilon` is taken from above.
    pub budget: SynthesisBudget,
}

impl PipelineConfig {
    /// Default settings for an instance with `terms` coefficients.
    pub fn new(method: Method, epsilon: f64, terms: usize) -> Self {
        PipelineConfig {
            method,
            epsilon,
            aqce: AqceConfig::for_terms(terms),
            budget: SynthesisBudget::new(epsilon),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub report: SynthesisReport,
    /// Clifford+T circuit.
    pub circuit: ElementaryCircuit,
    /// The same circuit before lowering.
    pub rotations: ElementaryCircuit,
    pub aqce: Option<AqceCircuit>,
    pub timings: StageTimings,
}

/// Runs one method end to end. A run that misses the budget still returns
/// its best-effort circuit, flagged through `report.status`.
pub fn run_pipeline(cs: &CoefficientSet, cfg: &PipelineConfig) -> Result<PipelineRun> {
    if !(cfg.epsilon.is_finite() && cfg.epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", cfg.epsilon)));
    }
    let start = Instant::now();
    let mut timings = StageTimings::default();
    let mut status = Status::Ok;

    let (rotations, aqce, two_qubit_gates) = match cfg.method {
        Method::Aqce => {
            let t0 = Instant::now();
            // AQCE needs two qubits; a one-qubit target gets an idle partner.
            let target = build_target(cs).padded(2);
            let cs_eps = cs.clone().with_epsilon(cfg.epsilon);
            let circ = run_aqce(&target, &cs_eps, &cfg.aqce)?;
            timings.aqce_seconds = t0.elapsed().as_secs_f64();
            if !circ.converged {
                status = Status::NotConverged;
            }
            let t1 = Instant::now();
            let rot = decompose_circuit(&circ)?;
            timings.decomp_seconds = t1.elapsed().as_secs_f64();
            let m = circ.gates.len();
            (rot, Some(circ), m)
        }
        Method::Naive => {
            let t1 = Instant::now();
            let prep = naive_prepare(cs);
            timings.decomp_seconds = t1.elapsed().as_secs_f64();
            let cx = prep.circuit.two_qubit_count();
            (prep.circuit, None, cx)
        }
        Method::QromModel => {
            return Err(Error::InvalidArgument("the QROM method is a cost model; use qrom_cost".into()));
        }
    };

    let t2 = Instant::now();
    let budget = SynthesisBudget { epsilon: cfg.epsilon, ..cfg.budget };
    let lowered = if status == Status::Ok {
        match calibrate_eps_t(&rotations, cs, &budget) {
            Ok((b, p)) => Some((b.epsilon_t, p)),
            Err(Error::BudgetUnreachable { .. }) => {
                status = Status::BudgetUnreachable;
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (eps_t, best) = match lowered {
        Some(x) => x,
        None => {
            // Best effort: split the budget evenly over the rotations.
            let per = cfg.epsilon / rotations.rotation_count().max(1) as f64;
            let eps_t = per.clamp(budget.search_lo.max(SUPPORTED_FLOOR), budget.search_hi);
            (eps_t, probe(&rotations, cs, eps_t)?)
        }
    };
    timings.synth_seconds = t2.elapsed().as_secs_f64();
    timings.total_seconds = start.elapsed().as_secs_f64();

    let report = SynthesisReport {
        method: cfg.method,
        terms: cs.len(),
        qubits: cs.qubits(),
        two_qubit_gates,
        rotation_count: rotations.rotation_count(),
        t_count: best.t_count as u64,
        ancilla_count: 0,
        achieved_error: best.error,
        epsilon: cfg.epsilon,
        wall_seconds: timings.total_seconds,
        status,
        eps_t: (rotations.rotation_count() > 0).then_some(eps_t),
    };
    Ok(PipelineRun { report, circuit: best.circuit, rotations, aqce, timings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::state_error;

    #[test]
    fn single_term_costs_nothing() {
        let cs = CoefficientSet::from_signed(&[2.5]).unwrap();
        for method in [Method::Aqce, Method::Naive] {
            let run = run_pipeline(&cs, &PipelineConfig::new(method, 1e-3, 1)).unwrap();
            assert_eq!(run.report.t_count, 0);
            assert_eq!(run.report.achieved_error, 0.0);
            assert_eq!(run.report.status, Status::Ok);
        }
    }

    #[test]
    fn two_term_aqce_uses_padding() {
        let cs = CoefficientSet::from_signed(&[0.7, 0.3]).unwrap();
        let run = run_pipeline(&cs, &PipelineConfig::new(Method::Aqce, 1e-3, 2)).unwrap();
        assert_eq!(run.report.status, Status::Ok);
        assert_eq!(run.report.qubits, 1);
        let err = state_error(&run.circuit.simulate(1).unwrap(), &cs).unwrap();
        assert!(err <= 1e-3);
        assert_eq!(err, run.report.achieved_error);
    }

    #[test]
    fn forced_gate_cap_is_flagged() {
        let v: Vec<f64> = (1..=16).map(|i| 1.0 / (i as f64).powf(0.7)).collect();
        let cs = CoefficientSet::from_signed(&v).unwrap();
        let mut cfg = PipelineConfig::new(Method::Aqce, 1e-6, 16);
        cfg.aqce.max_gates = Some(1);
        let run = run_pipeline(&cs, &cfg).unwrap();
        assert_eq!(run.report.status, Status::NotConverged);
        assert_eq!(run.report.two_qubit_gates, 1);
    }
}
