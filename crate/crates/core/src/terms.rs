//! Coefficient ingestion, the PREPARE target state and the error budget.
//!
//! A Hamiltonian `H = sum_l d_l P_l` enters as a list of signed weights. The
//! signs are absorbed into the unitaries, so only `c_l = |d_l|` is kept, sorted
//! in descending order (stable, so equal weights keep file order).

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Input file layout accepted by [`load_terms`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermsFormat {
    /// One decimal float per line.
    CoeffList,
    /// `<float> <pauli word>` per line, e.g. `-0.2234 IIZI`.
    PauliTerms,
}

impl FromStr for TermsFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coeff-list" => Ok(TermsFormat::CoeffList),
            "pauli-terms" => Ok(TermsFormat::PauliTerms),
            other => Err(Error::InvalidArgument(format!("unknown terms format '{other}'"))),
        }
    }
}

/// Positive LCU weights `c_l`, sorted descending, with their derived sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    coeffs: Vec<f64>,
    lambda: f64,
    qubits: usize,
    epsilon: Option<f64>,
}

impl CoefficientSet {
    /// Builds a set from signed weights: magnitudes are taken, zeros dropped,
    /// and the remainder stably sorted in descending order.
    pub fn from_signed(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {bad}")));
        }
        let mut coeffs: Vec<f64> = values.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
        if coeffs.is_empty() {
            return Err(Error::AllZero);
        }
        // `sort_by` is stable, which fixes the order of ties.
        coeffs.sort_by(|a, b| b.total_cmp(a));
        let lambda = coeffs.iter().sum();
        let qubits = qubits_for_terms(coeffs.len());
        Ok(CoefficientSet { coeffs, lambda, qubits, epsilon: None })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Number of terms `L`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `lambda = sum_l c_l`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Register width `m = ceil(log2 L)`, clamped to at least one qubit.
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn set_epsilon(&mut self, epsilon: f64) {
        self.epsilon = Some(epsilon);
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// Coefficient `c_l`, zero for padding slots `l >= L`.
    pub fn coeff(&self, l: usize) -> f64 {
        self.coeffs.get(l).copied().unwrap_or(0.0)
    }
}

/// `ceil(log2 terms)`, never below one.
pub fn qubits_for_terms(terms: usize) -> usize {
    let exact = terms.max(1).next_power_of_two().trailing_zeros() as usize;
    exact.max(1)
}

/// Parses the text of a terms file.
pub fn parse_terms(text: &str, format: TermsFormat) -> Result<CoefficientSet> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let value_field = fields.next().unwrap_or_default();
        let value = parse_finite(value_field, line_no)?;
        match format {
            TermsFormat::CoeffList => {
                if let Some(extra) = fields.next() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unexpected token '{extra}' after coefficient"),
                    });
                }
            }
            TermsFormat::PauliTerms => {
                let word = fields.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: "missing Pauli word".into(),
                })?;
                if !word.chars().all(|c| matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("invalid Pauli word '{word}'"),
                    });
                }
                if let Some(extra) = fields.next() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unexpected token '{extra}' after Pauli word"),
                    });
                }
            }
        }
        values.push(value);
    }
    CoefficientSet::from_signed(&values)
}

fn parse_finite(field: &str, line: usize) -> Result<f64> {
    let value: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("'{field}' is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse { line, msg: format!("non-finite value '{field}'") });
    }
    Ok(value)
}

/// Reads and parses a terms file. The returned set has no epsilon yet.
pub fn load_terms(path: impl AsRef<Path>, format: TermsFormat) -> Result<CoefficientSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_terms(&text, format)
}

/// Real amplitudes `sqrt(c_l / lambda)` on `2^m` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    amplitudes: Vec<f64>,
    qubits: usize,
}

impl TargetState {
    /// Wraps explicit real amplitudes; the length must be a power of two and
    /// the vector normalized.
    pub fn from_amplitudes(amplitudes: Vec<f64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("amplitude count {len} is not a power of two >= 2")));
        }
        let norm: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(TargetState { qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// The same amplitudes embedded in a wider register (extra high qubits in |0>).
    pub fn padded(&self, qubits: usize) -> TargetState {
        let qubits = qubits.max(self.qubits);
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(1 << qubits, 0.0);
        TargetState { amplitudes, qubits }
    }
}

pub fn build_target(cs: &CoefficientSet) -> TargetState {
    let qubits = cs.qubits();
    let mut amplitudes = vec![0.0; 1 << qubits];
    for (amp, &c) in amplitudes.iter_mut().zip(cs.coeffs()) {
        *amp = (c / cs.lambda()).sqrt();
    }
    TargetState { amplitudes, qubits }
}

/// Max-coefficient tolerance guaranteeing an energy shift of at most `delta_e`:
/// `sqrt(2) dE / (4 L (1 + dE^2 / (8 lambda^2)))`.
pub fn epsilon_budget(cs: &CoefficientSet, delta_e: f64) -> f64 {
    epsilon_budget_raw(cs.len(), cs.lambda(), delta_e)
}

pub fn epsilon_budget_raw(terms: usize, lambda: f64, delta_e: f64) -> f64 {
    let l = terms as f64;
    std::f64::consts::SQRT_2 * delta_e / (4.0 * l * (1.0 + delta_e * delta_e / (8.0 * lambda * lambda)))
}

/// Anything that yields basis-state probabilities `|amp_k|^2`.
pub trait Probabilities {
    fn probabilities(&self) -> Vec<f64>;
}

impl Probabilities for TargetState {
    fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }
}

/// `c'_l = |amp_l|^2 * lambda` over every basis slot of the register.
pub fn induced_coefficients<S: Probabilities + ?Sized>(state: &S, cs: &CoefficientSet) -> Result<Vec<f64>> {
    let probs = state.probabilities();
    if probs.len() < cs.len() {
        return Err(Error::DimensionMismatch { expected: 1 << cs.qubits(), got: probs.len() });
    }
    let norm: f64 = probs.iter().sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    Ok(probs.iter().map(|p| p * cs.lambda()).collect())
}

/// `max_l |c_l - c'_l|`, with `c_l = 0` past the last term so leakage counts.
pub fn max_coeff_error(cs: &CoefficientSet, cprime: &[f64]) -> f64 {
    let span = cprime.len().max(cs.len());
    (0..span)
        .map(|l| (cs.coeff(l) - cprime.get(l).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Convenience: induced coefficients followed by the max error.
pub fn state_error<S: Probabilities + ?Sized>(state: &S, cs: &CoefficientSet) -> Result<f64> {
    Ok(max_coeff_error(cs, &induced_coefficients(state, cs)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_values_become_sorted_magnitudes() {
        let cs = parse_terms("0.5\n-0.25\n0.25\n", TermsFormat::CoeffList).unwrap();
        assert_eq!(cs.coeffs(), &[0.5, 0.25, 0.25]);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs.qubits(), 2);
        assert_eq!(cs.lambda(), 1.0);
        assert_eq!(cs.epsilon(), None);
    }

    #[test]
    fn single_pauli_term_clamps_to_one_qubit() {
        let cs = parse_terms("2.0 ZZ\n", TermsFormat::PauliTerms).unwrap();
        assert_eq!(cs.coeffs(), &[2.0]);
        assert_eq!(cs.qubits(), 1);
        assert_eq!(cs.lambda(), 2.0);
    }

    #[test]
    fn fourteen_terms_need_four_qubits() {
        let values: Vec<f64> = (1..=14).map(|k| 1.0 / k as f64).collect();
        let cs = CoefficientSet::from_signed(&values).unwrap();
        assert_eq!(cs.len(), 14);
        assert_eq!(cs.qubits(), 4);
    }

    #[test]
    fn qubit_law_on_powers_of_two() {
        assert_eq!(qubits_for_terms(1), 1);
        assert_eq!(qubits_for_terms(2), 1);
        assert_eq!(qubits_for_terms(3), 2);
        assert_eq!(qubits_for_terms(4), 2);
        assert_eq!(qubits_for_terms(5), 3);
        assert_eq!(qubits_for_terms(7150), 13);
    }

    #[test]
    fn comments_crlf_and_zeros() {
        let text = "# header\r\n1.0 # first\r\n\r\n0\r\n-3e-1\r\n";
        let cs = parse_terms(text, TermsFormat::CoeffList).unwrap();
        assert_eq!(cs.coeffs(), &[1.0, 0.3]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_terms("", TermsFormat::CoeffList), Err(Error::EmptyInput)));
        assert!(matches!(parse_terms("0\n0.0\n", TermsFormat::CoeffList), Err(Error::AllZero)));
        assert!(matches!(parse_terms("abc\n", TermsFormat::CoeffList), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_terms("1.0\nNaN\n", TermsFormat::CoeffList), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_terms("inf\n", TermsFormat::CoeffList), Err(Error::Parse { .. })));
        assert!(matches!(parse_terms("1.0 XQ\n", TermsFormat::PauliTerms), Err(Error::Parse { .. })));
        assert!(matches!(parse_terms("1.0\n", TermsFormat::PauliTerms), Err(Error::Parse { .. })));
        assert!(matches!(parse_terms("1.0 2.0\n", TermsFormat::CoeffList), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_terms("/nonexistent/terms.txt", TermsFormat::CoeffList).unwrap_err();
        assert_eq!(err.kind(), "io");
    }

    #[test]
    fn target_examples() {
        let t = build_target(&CoefficientSet::from_signed(&[1.0]).unwrap());
        assert_eq!(t.amplitudes(), &[1.0, 0.0]);

        let t = build_target(&CoefficientSet::from_signed(&[0.5, 0.5]).unwrap());
        assert_eq!(t.amplitudes(), &[0.5f64.sqrt(), 0.5f64.sqrt()]);

        let t = build_target(&CoefficientSet::from_signed(&[0.5, 0.3, 0.2]).unwrap());
        let expect = [0.5f64.sqrt(), 0.3f64.sqrt(), 0.2f64.sqrt(), 0.0];
        for (a, e) in t.amplitudes().iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn budget_examples() {
        let values: Vec<f64> = vec![10.0 / 14.0; 14];
        let cs = CoefficientSet::from_signed(&values).unwrap();
        let eps = epsilon_budget(&cs, 0.0016);
        // sqrt(2) * 0.0016 / (56 * (1 + 0.0016^2 / 800))
        let expect = 2f64.sqrt() * 0.0016 / (56.0 * (1.0 + 0.0016f64.powi(2) / 800.0));
        assert!((eps - expect).abs() / expect < 1e-9);
        assert!((eps - 4.04059e-5).abs() / 4.04059e-5 < 1e-5);

        let de = 0.37;
        let one = epsilon_budget_raw(1, 1.0, de);
        assert!((one - 2f64.sqrt() * de / (4.0 * (1.0 + de * de / 8.0))).abs() < 1e-15);
        assert!(epsilon_budget_raw(5, 2.0, 1e-300) < 1e-299);
    }

    #[test]
    fn induced_examples() {
        let cs = CoefficientSet::from_signed(&[0.5, 0.25, 0.25]).unwrap();
        let t = build_target(&cs);
        let cp = induced_coefficients(&t, &cs).unwrap();
        assert!(max_coeff_error(&cs, &cp) < 1e-15);

        struct Uniform;
        impl Probabilities for Uniform {
            fn probabilities(&self) -> Vec<f64> {
                vec![0.25; 4]
            }
        }
        let cp = induced_coefficients(&Uniform, &cs).unwrap();
        assert_eq!(cp, vec![0.25; 4]);
        assert_eq!(max_coeff_error(&cs, &cp), 0.25);
    }

    #[test]
    fn unnormalized_state_rejected() {
        struct Half;
        impl Probabilities for Half {
            fn probabilities(&self) -> Vec<f64> {
                vec![0.25, 0.25]
            }
        }
        let cs = CoefficientSet::from_signed(&[1.0]).unwrap();
        assert!(matches!(induced_coefficients(&Half, &cs), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn max_error_examples() {
        let cs = CoefficientSet::from_signed(&[1.0]).unwrap();
        assert!((max_coeff_error(&cs, &[0.9, 0.1]) - 0.1).abs() < 1e-15);
        let cs = CoefficientSet::from_signed(&[0.6, 0.4, 0.2]).unwrap();
        assert_eq!(max_coeff_error(&cs, &[0.6, 0.4, 0.2, 0.0]), 0.0);
        assert_eq!(max_coeff_error(&cs, &[0.6, 0.4, 0.2, 0.125]), 0.125);
    }
}
