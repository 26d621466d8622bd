//! Comparison points: the ancilla-free multiplexed-Ry preparation and the
//! closed-form cost of QROM-based PREPARE.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cliffordt::{calibrate_eps_t, SynthesisBudget};
use crate::error::{Error, Result};
use crate::gatedecomp::{ElementaryCircuit, Op};
use crate::report::{Method, Status, SynthesisReport};
use crate::terms::CoefficientSet;

/// Binary-tree Ry angles and the circuit realizing them.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexedPrep {
    /// `angles[k]` holds the `2^k` angles of tree level `k`; level 0 acts on
    /// the most significant qubit.
    pub angles: Vec<Vec<f64>>,
    pub circuit: ElementaryCircuit,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Angle tree from the probability mass `c_l / λ` of every basis slot.
pub fn angle_tree(cs: &CoefficientSet) -> Vec<Vec<f64>> {
    let m = cs.qubits();
    let mut mass: Vec<f64> = (0..1usize << m).map(|l| cs.coeff(l) / cs.lambda()).collect();
    let mut levels = vec![Vec::new(); m];
    // Bottom-up: level k splits each prefix of k high bits on qubit m-1-k.
    for k in (0..m).rev() {
        let nodes = 1 << k;
        let mut parent = vec![0.0; nodes];
        let mut angles = vec![0.0; nodes];
        for j in 0..nodes {
            let (left, right) = (mass[2 * j], mass[2 * j + 1]);
            parent[j] = left + right;
            if left + right > 0.0 {
                angles[j] = 2.0 * right.sqrt().atan2(left.sqrt());
            }
        }
        levels[k] = angles;
        mass = parent;
    }
    levels
}

/// Exact preparation with uniformly controlled Ry rotations (Gray-code
/// multiplexors): `2^m - 1` rotations and `2^m - 2` CNOTs at full support.
/// Levels whose angles are all zero are skipped, as are zero-angle rotations.
pub fn naive_prepare(cs: &CoefficientSet) -> MultiplexedPrep {
    let m = cs.qubits();
    let angles = angle_tree(cs);
    let mut circuit = ElementaryCircuit::new(m);
    for (k, theta) in angles.iter().enumerate() {
        if theta.iter().all(|&t| t == 0.0) {
            continue;
        }
        let target = m - 1 - k;
        let n = theta.len();
        for i in 0..n {
            let g = gray(i);
            let phi: f64 = theta
                .iter()
                .enumerate()
                .map(|(j, t)| if (j & g).count_ones() % 2 == 0 { *t } else { -*t })
                .sum::<f64>()
                / n as f64;
            if phi != 0.0 {
                circuit.push(Op::Ry(target, phi));
            }
            if k > 0 {
                let flip = g ^ gray((i + 1) % n);
                let control = m - k + flip.trailing_zeros() as usize;
                circuit.push(Op::Cnot { control, target });
            }
        }
    }
    MultiplexedPrep { angles, circuit }
}

/// Lowers the naive circuit with a calibrated shared ε_T and reports the cost.
pub fn naive_t_count(cs: &CoefficientSet, epsilon: f64) -> Result<SynthesisReport> {
    naive_t_count_with(cs, &SynthesisBudget::new(epsilon)).map(|(r, _)| r)
}

/// [`naive_t_count`] with an explicit bracket; also returns the lowered circuit.
pub fn naive_t_count_with(cs: &CoefficientSet, budget: &SynthesisBudget) -> Result<(SynthesisReport, ElementaryCircuit)> {
    let start = Instant::now();
    let prep = naive_prepare(cs);
    let (calibrated, probe) = calibrate_eps_t(&prep.circuit, cs, budget)?;
    let report = SynthesisReport {
        method: Method::Naive,
        terms: cs.len(),
        qubits: cs.qubits(),
        two_qubit_gates: prep.circuit.two_qubit_count(),
        rotation_count: prep.circuit.rotation_count(),
        t_count: probe.t_count as u64,
        ancilla_count: 0,
        achieved_error: probe.error,
        epsilon: budget.epsilon,
        wall_seconds: start.elapsed().as_secs_f64(),
        status: Status::Ok,
        eps_t: Some(calibrated.epsilon_t),
    };
    Ok((report, probe.circuit))
}

/// T-count fed to the model for the pair of `UNIFORM_L` rotations when no
/// better value is known.
pub const DEFAULT_G_T: u64 = 239;

/// Closed-form resources of the QROM/alias-sampling PREPARE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QromCostModel {
    #[serde(rename = "L")]
    pub terms: u64,
    #[serde(rename = "m")]
    pub qubits: u64,
    pub mu: u64,
    pub lambda: f64,
    pub delta_e: f64,
    pub g_t: u64,
    pub t_count: u64,
    pub ancilla_count: u64,
    pub work_qubits: u64,
}

impl QromCostModel {
    /// Counts from explicit `L`, `m`, `μ` and `g_T`.
    pub fn from_parts(terms: u64, qubits: u64, mu: u64, g_t: u64) -> Self {
        QromCostModel {
            terms,
            qubits,
            mu,
            lambda: f64::NAN,
            delta_e: f64::NAN,
            g_t,
            t_count: 4 * terms + 4 * mu + 11 * qubits + 2 * g_t - 12,
            ancilla_count: 2 * mu + qubits + 1,
            work_qubits: (qubits + 1).max(mu),
        }
    }
}

/// Bits of keep-register precision:
/// `ceil(log2(4 λ (1 + ΔE²/(8λ²)) / (√2 ΔE²)))`, at least one.
pub fn qrom_mu(lambda: f64, delta_e: f64) -> Result<u64> {
    if !(lambda > 0.0 && lambda.is_finite() && delta_e > 0.0 && delta_e.is_finite()) {
        return Err(Error::InvalidArgument(format!("need positive lambda and deltaE, got {lambda}, {delta_e}")));
    }
    let arg = 4.0 * lambda * (1.0 + delta_e * delta_e / (8.0 * lambda * lambda))
        / (std::f64::consts::SQRT_2 * delta_e * delta_e);
    Ok(arg.log2().ceil().max(1.0) as u64)
}

/// Range `(lo, hi]` of λ for which [`qrom_mu`] returns `mu`, on the branch
/// `λ >= ΔE/√8` where the precision argument grows with λ.
pub fn lambda_interval_for_mu(mu: u64, delta_e: f64) -> (f64, f64) {
    // 4λ + ΔE²/(2λ) = √2 ΔE² 2^μ, larger root.
    let root = |mu: f64| {
        let k = std::f64::consts::SQRT_2 * delta_e * delta_e * mu.exp2();
        let disc = (k * k - 8.0 * delta_e * delta_e).max(0.0);
        (k + disc.sqrt()) / 8.0
    };
    let floor = delta_e / 8f64.sqrt();
    (root(mu as f64 - 1.0).max(floor), root(mu as f64).max(floor))
}

pub fn qrom_cost(cs: &CoefficientSet, delta_e: f64, g_t: u64) -> Result<QromCostModel> {
    let mu = qrom_mu(cs.lambda(), delta_e)?;
    let mut model = QromCostModel::from_parts(cs.len() as u64, cs.qubits() as u64, mu, g_t);
    model.lambda = cs.lambda();
    model.delta_e = delta_e;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::state_error;

    fn cs(v: &[f64]) -> CoefficientSet {
        CoefficientSet::from_signed(v).unwrap()
    }

    #[test]
    fn single_term_is_empty() {
        let p = naive_prepare(&cs(&[1.0]));
        assert!(p.circuit.ops.is_empty());
        assert_eq!(naive_t_count(&cs(&[1.0]), 1e-3).unwrap().t_count, 0);
    }

    #[test]
    fn even_split_is_one_ry() {
        let c = cs(&[0.5, 0.5]);
        let p = naive_prepare(&c);
        assert_eq!(p.circuit.ops, vec![Op::Ry(0, std::f64::consts::FRAC_PI_2)]);
        let s = p.circuit.simulate(1).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - a[1].re).abs() < 1e-15);
        assert_eq!(naive_t_count(&c, 0.4).unwrap().t_count, 0);
    }

    #[test]
    fn full_support_counts_and_round_trip() {
        use rand_chacha::ChaCha8Rng;
        use rand_core::{RngCore, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 1..=6 {
            let v: Vec<f64> = (0..1 << m).map(|_| 0.05 + (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64).collect();
            let c = cs(&v);
            let p = naive_prepare(&c);
            assert_eq!(p.circuit.rotation_count(), (1 << m) - 1);
            assert_eq!(p.circuit.two_qubit_count(), (1 << m) - 2);
            let err = state_error(&p.circuit.simulate(m).unwrap(), &c).unwrap();
            assert!(err < 1e-12, "m={m} err={err}");
        }
    }

    #[test]
    fn partial_support_round_trip() {
        let c = cs(&[0.4, 0.3, 0.2, 0.05, 0.05]);
        let p = naive_prepare(&c);
        assert!(state_error(&p.circuit.simulate(3).unwrap(), &c).unwrap() < 1e-12);
    }

    #[test]
    fn qrom_formula() {
        let h2 = QromCostModel::from_parts(14, 4, 21, 239);
        assert_eq!((h2.t_count, h2.ancilla_count, h2.work_qubits), (650, 47, 21));
        let tiny = QromCostModel::from_parts(1, 1, 1, 0);
        assert_eq!((tiny.t_count, tiny.ancilla_count), (7, 4));
    }

    #[test]
    fn mu_matches_interval() {
        for mu in 12..40 {
            let (lo, hi) = lambda_interval_for_mu(mu, 0.0016);
            assert_eq!(qrom_mu(hi * (1.0 - 1e-9), 0.0016).unwrap(), mu);
            assert_eq!(qrom_mu(lo * (1.0 + 1e-6), 0.0016).unwrap(), mu);
            assert_eq!(qrom_mu((lo * hi).sqrt(), 0.0016).unwrap(), mu);
        }
        assert_eq!(qrom_mu(4.0 / 8f64.sqrt(), 4.0).unwrap(), 1);
    }
}
