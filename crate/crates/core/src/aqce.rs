//! Automatic quantum circuit encoding with real two-qubit gates.
//!
//! The circuit `C = U_M ... U_1` is grown until `C|0>` reproduces the target
//! coefficients within a max-coefficient threshold. Each gate update maximizes
//! `|<psi|C|0>|` with every other gate held fixed: for each qubit pair the
//! environment matrix `rho` is formed and its SVD `rho = X D Y` gives the
//! optimum `U = Y^T X^T` with fidelity `sum(D)`.

use crate::error::{Error, Result};
use crate::linalg::{matmul4, svd4, transpose4};
use crate::statesim::{environment_unchecked, StateVector, TwoQubitGate};
use crate::terms::{state_error, CoefficientSet, TargetState};

/// Hyperparameters for [`run_aqce`].
#[derive(Debug, Clone, PartialEq)]
pub struct AqceConfig {
    /// Gates in the initial circuit (`M0`).
    pub initial_gates: usize,
    /// Gates appended per expansion (`dM`).
    pub gates_per_expansion: usize,
    /// Forward+backward sweeps per round (`N`).
    pub sweeps: usize,
    /// Convergence threshold on `max |c - c'|`. `None` uses the coefficient set's epsilon.
    pub threshold: Option<f64>,
    /// Hard cap on the gate count. `None` means `4 * 2^m`.
    pub max_gates: Option<usize>,
    /// Reserved for randomized tie-breaking; the default path is deterministic.
    pub seed: u64,
    /// A round stops sweeping early once a full sweep raises the fidelity by
    /// less than this amount. Zero disables the shortcut.
    pub plateau_tol: f64,
    /// Keep the fidelity after every single gate update.
    pub record_trace: bool,
}

impl Default for AqceConfig {
    fn default() -> Self {
        AqceConfig {
            initial_gates: 1,
            gates_per_expansion: 1,
            sweeps: 100,
            threshold: None,
            max_gates: None,
            seed: 0,
            plateau_tol: 1e-15,
            record_trace: false,
        }
    }
}

impl AqceConfig {
    /// `(M0, dM, N) = (1, 1, 100)` for up to 200 terms, `(12, 6, 100)` beyond.
    pub fn for_terms(terms: usize) -> Self {
        if terms <= 200 {
            AqceConfig::default()
        } else {
            AqceConfig { initial_gates: 12, gates_per_expansion: 6, ..AqceConfig::default() }
        }
    }

    fn validate(&self, qubits: usize) -> Result<usize> {
        if self.initial_gates == 0 || self.gates_per_expansion == 0 || self.sweeps == 0 {
            return Err(Error::InvalidArgument("M0, dM and N must all be at least 1".into()));
        }
        let max_gates = self.max_gates.unwrap_or(4 << qubits);
        if max_gates < self.initial_gates {
            return Err(Error::InvalidArgument(format!(
                "max gates {max_gates} is below the initial gate count {}",
                self.initial_gates
            )));
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument("AQCE threshold must be positive".into()));
            }
        }
        Ok(max_gates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// State of the circuit after one directional pass.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub gates: usize,
    pub fidelity: f64,
    pub max_error: f64,
}

/// Metric evaluation at the end of a round of sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub gates: usize,
    pub fidelity: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AqceCircuit {
    pub gates: Vec<TwoQubitGate>,
    pub qubits: usize,
    pub history: Vec<SweepRecord>,
    pub evaluations: Vec<Evaluation>,
    /// Fidelity after every gate update, when requested in the config.
    pub fidelity_trace: Vec<f64>,
    pub converged: bool,
}

impl AqceCircuit {
    /// `M0` identity gates on qubits `(0, 1)`.
    pub fn with_identities(qubits: usize, count: usize) -> Result<Self> {
        if qubits < 2 {
            return Err(Error::InvalidArgument("AQCE needs a register of at least two qubits".into()));
        }
        Ok(AqceCircuit {
            gates: vec![TwoQubitGate::identity(0, 1); count],
            qubits,
            history: Vec::new(),
            evaluations: Vec::new(),
            fidelity_trace: Vec::new(),
            converged: false,
        })
    }

    /// `C|0...0>`.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.qubits)?;
        for g in &self.gates {
            state.apply(g, false)?;
        }
        Ok(state)
    }

    /// `|<target|C|0>|`.
    pub fn fidelity(&self, target: &TargetState) -> Result<f64> {
        let out = self.simulate()?;
        Ok(dot(out.amplitudes(), target.amplitudes()).abs())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_target(circ: &AqceCircuit, target: &TargetState) -> Result<()> {
    if target.qubits() != circ.qubits {
        return Err(Error::DimensionMismatch { expected: 1 << circ.qubits, got: target.amplitudes().len() });
    }
    Ok(())
}

/// Best gate over all qubit pairs for the environment `|phi><psi|`.
/// Ties keep the lexicographically smallest pair.
fn best_gate(phi: &[f64], psi: &[f64], qubits: usize) -> (TwoQubitGate, f64) {
    let mut best: Option<(TwoQubitGate, f64)> = None;
    for i in 0..qubits {
        for j in (i + 1)..qubits {
            let rho = environment_unchecked(phi, psi, i, j);
            let svd = svd4(&rho);
            let score: f64 = svd.d.iter().sum();
            if best.as_ref().map_or(true, |(_, s)| score > *s) {
                let mat = matmul4(&transpose4(&svd.y), &transpose4(&svd.x));
                best = Some((TwoQubitGate { mat, i, j }, score));
            }
        }
    }
    best.expect("register has at least one qubit pair")
}

/// Re-optimizes gate `s` (0-based) in place and returns the new fidelity.
pub fn optimize_gate(circ: &mut AqceCircuit, s: usize, target: &TargetState) -> Result<f64> {
    check_target(circ, target)?;
    if s >= circ.gates.len() {
        return Err(Error::InvalidArgument(format!("gate index {s} out of range for {} gates", circ.gates.len())));
    }
    let mut phi = StateVector::zero(circ.qubits)?;
    for g in &circ.gates[..s] {
        phi.apply(g, false)?;
    }
    let mut psi = StateVector::from_target(target);
    for g in circ.gates[s + 1..].iter().rev() {
        psi.apply(g, true)?;
    }
    let (gate, score) = best_gate(phi.amplitudes(), psi.amplitudes(), circ.qubits);
    circ.gates[s] = gate;
    Ok(score)
}

/// One directional pass of gate updates using incrementally maintained
/// environments. Returns the fidelity after the last update.
pub fn sweep(
    circ: &mut AqceCircuit,
    target: &TargetState,
    cs: &CoefficientSet,
    direction: Direction,
) -> Result<f64> {
    let fid = sweep_inner(circ, target, direction, false)?;
    let max_error = state_error(&circ.simulate()?, cs)?;
    circ.history.push(SweepRecord { gates: circ.gates.len(), fidelity: fid, max_error });
    Ok(fid)
}

fn sweep_inner(circ: &mut AqceCircuit, target: &TargetState, direction: Direction, trace: bool) -> Result<f64> {
    check_target(circ, target)?;
    let m = circ.gates.len();
    if m == 0 {
        return Err(Error::InvalidArgument("cannot sweep an empty circuit".into()));
    }
    let mut fid = 0.0;
    match direction {
        Direction::Forward => {
            let mut phi = StateVector::zero(circ.qubits)?;
            let mut psi = StateVector::from_target(target);
            for g in circ.gates[1..].iter().rev() {
                psi.apply(g, true)?;
            }
            for s in 0..m {
                let (gate, score) = best_gate(phi.amplitudes(), psi.amplitudes(), circ.qubits);
                phi.apply(&gate, false)?;
                circ.gates[s] = gate;
                fid = score;
                if trace {
                    circ.fidelity_trace.push(score);
                }
                if s + 1 < m {
                    psi.apply(&circ.gates[s + 1], false)?;
                }
            }
        }
        Direction::Backward => {
            let mut psi = StateVector::from_target(target);
            let mut phi = StateVector::zero(circ.qubits)?;
            for g in &circ.gates[..m - 1] {
                phi.apply(g, false)?;
            }
            for s in (0..m).rev() {
                let (gate, score) = best_gate(phi.amplitudes(), psi.amplitudes(), circ.qubits);
                psi.apply(&gate, true)?;
                circ.gates[s] = gate;
                fid = score;
                if trace {
                    circ.fidelity_trace.push(score);
                }
                if s > 0 {
                    phi.apply(&circ.gates[s - 1], true)?;
                }
            }
        }
    }
    Ok(fid)
}

/// Runs the full grow-and-sweep loop.
///
/// The target must live on at least two qubits. The returned circuit is flagged
/// `converged` when `max |c - c'| <= threshold` on a from-scratch simulation;
/// otherwise it is the best circuit seen before the gate cap was reached.
pub fn run_aqce(target: &TargetState, cs: &CoefficientSet, cfg: &AqceConfig) -> Result<AqceCircuit> {
    let qubits = target.qubits();
    let max_gates = cfg.validate(qubits)?;
    let threshold = match cfg.threshold {
        Some(t) => t,
        None => cs.epsilon().filter(|e| *e > 0.0).ok_or_else(|| {
            Error::InvalidArgument("no AQCE threshold given and the coefficient set has no epsilon".into())
        })?,
    };

    let mut circ = AqceCircuit::with_identities(qubits, cfg.initial_gates)?;
    let mut best: Option<(f64, Vec<TwoQubitGate>)> = None;
    loop {
        let mut last_fid = f64::NEG_INFINITY;
        for _ in 0..cfg.sweeps {
            let mut fid = 0.0;
            for dir in [Direction::Forward, Direction::Backward] {
                fid = sweep_inner(&mut circ, target, dir, cfg.record_trace)?;
                let max_error = state_error(&circ.simulate()?, cs)?;
                circ.history.push(SweepRecord { gates: circ.gates.len(), fidelity: fid, max_error });
            }
            if cfg.plateau_tol > 0.0 && fid - last_fid < cfg.plateau_tol {
                break;
            }
            last_fid = fid;
        }

        let state = circ.simulate()?;
        let fidelity = dot(state.amplitudes(), target.amplitudes()).abs();
        let max_error = state_error(&state, cs)?;
        circ.evaluations.push(Evaluation { gates: circ.gates.len(), fidelity, max_error });
        if best.as_ref().map_or(true, |(e, _)| max_error < *e) {
            best = Some((max_error, circ.gates.clone()));
        }
        if max_error <= threshold {
            circ.converged = true;
            return Ok(circ);
        }
        let m = circ.gates.len();
        if m + cfg.gates_per_expansion > max_gates {
            if let Some((_, gates)) = best {
                circ.gates = gates;
            }
            return Ok(circ);
        }

        // New identity gates sit after the current circuit, so for each of them
        // psi_s is the target itself.
        let mut phi = state;
        let psi = StateVector::from_target(target);
        for _ in 0..cfg.gates_per_expansion {
            let (gate, score) = best_gate(phi.amplitudes(), psi.amplitudes(), qubits);
            phi.apply(&gate, false)?;
            circ.gates.push(gate);
            if cfg.record_trace {
                circ.fidelity_trace.push(score);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statesim::orthogonality_residual;
    use crate::terms::build_target;

    fn cs(values: &[f64]) -> CoefficientSet {
        CoefficientSet::from_signed(values).unwrap()
    }

    #[test]
    fn trivial_target_converges_immediately() {
        let c = cs(&[1.0]);
        let target = build_target(&c).padded(3);
        let cfg = AqceConfig { threshold: Some(1e-12), ..AqceConfig::default() };
        let circ = run_aqce(&target, &c, &cfg).unwrap();
        assert!(circ.converged);
        assert_eq!(circ.gates.len(), 1);
        assert_eq!(circ.evaluations.len(), 1);
        assert_eq!(circ.evaluations[0].max_error, 0.0);
        assert!((circ.fidelity(&target).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_target_single_gate() {
        let amps = vec![0.5f64.sqrt(), 0.0, 0.0, 0.5f64.sqrt()];
        let target = TargetState::from_amplitudes(amps).unwrap();
        let mut circ = AqceCircuit::with_identities(2, 1).unwrap();
        let f = optimize_gate(&mut circ, 0, &target).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        assert!((circ.fidelity(&target).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_instance_needs_one_gate() {
        let c = cs(&[0.5, 0.25, 0.125, 0.125]);
        let target = build_target(&c);
        let cfg = AqceConfig { threshold: Some(1e-10), ..AqceConfig::default() };
        let circ = run_aqce(&target, &c, &cfg).unwrap();
        assert!(circ.converged);
        assert_eq!(circ.gates.len(), 1);
        let err = state_error(&circ.simulate().unwrap(), &c).unwrap();
        assert!(err < 1e-10);
    }

    #[test]
    fn sweeps_do_not_decrease_fidelity_and_keep_orthogonality() {
        let values: Vec<f64> = (1..=8).map(|k| 1.0 / (k as f64).powf(1.5)).collect();
        let c = cs(&values);
        let target = build_target(&c);
        let mut circ = AqceCircuit::with_identities(3, 3).unwrap();
        let mut prev = circ.fidelity(&target).unwrap();
        for n in 0..6 {
            let dir = if n % 2 == 0 { Direction::Forward } else { Direction::Backward };
            let f = sweep(&mut circ, &target, &c, dir).unwrap();
            assert!(f >= prev - 1e-10);
            assert!((circ.fidelity(&target).unwrap() - f).abs() < 1e-10);
            for g in &circ.gates {
                assert!(orthogonality_residual(&g.mat) < 1e-10);
            }
            prev = f;
        }
        assert_eq!(circ.history.len(), 6);
    }

    #[test]
    fn gate_cap_flags_failure() {
        let values: Vec<f64> = (1..=16).map(|k| 1.0 + (k as f64).sin()).collect();
        let c = cs(&values);
        let target = build_target(&c);
        let cfg = AqceConfig { threshold: Some(1e-12), max_gates: Some(1), sweeps: 3, ..AqceConfig::default() };
        let circ = run_aqce(&target, &c, &cfg).unwrap();
        assert!(!circ.converged);
        assert_eq!(circ.gates.len(), 1);
    }

    #[test]
    fn config_validation() {
        let c = cs(&[1.0, 2.0, 3.0]);
        let target = build_target(&c);
        let bad = AqceConfig { sweeps: 0, threshold: Some(1e-3), ..AqceConfig::default() };
        assert!(run_aqce(&target, &c, &bad).is_err());
        let bad = AqceConfig { initial_gates: 5, max_gates: Some(2), threshold: Some(1e-3), ..AqceConfig::default() };
        assert!(run_aqce(&target, &c, &bad).is_err());
        // No threshold and no epsilon on the set.
        assert!(run_aqce(&target, &c, &AqceConfig::default()).is_err());
        let one_qubit = build_target(&cs(&[1.0, 1.0]));
        let cfg = AqceConfig { threshold: Some(1e-3), ..AqceConfig::default() };
        assert!(run_aqce(&one_qubit, &cs(&[1.0, 1.0]), &cfg).is_err());
    }

    #[test]
    fn hyperparameter_switch() {
        assert_eq!(AqceConfig::for_terms(184).initial_gates, 1);
        let big = AqceConfig::for_terms(201);
        assert_eq!((big.initial_gates, big.gates_per_expansion, big.sweeps), (12, 6, 100));
    }
}
