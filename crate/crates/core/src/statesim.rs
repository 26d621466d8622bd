//! Dense statevector simulation on small registers.
//!
//! Qubit 0 is the least significant bit of the basis index. A two-qubit gate
//! bound to `(i, j)` uses the local index `2 * bit_i + bit_j`, so a Kronecker
//! product `A ⊗ B` acts with `A` on qubit `i` and `B` on qubit `j`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::terms::{Probabilities, TargetState};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 26;

pub type Mat4 = [[f64; 4]; 4];

fn check_qubits(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { qubits, max: MAX_QUBITS });
    }
    Ok(())
}

fn qubits_of_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("amplitude count {len} is not a power of two")));
    }
    let qubits = len.trailing_zeros() as usize;
    check_qubits(qubits)?;
    Ok(qubits)
}

/// Inserts zero bits at positions `lo < hi` into `k`.
#[inline]
fn insert_two_zeros(k: usize, lo: usize, hi: usize) -> usize {
    let low_mask = (1 << lo) - 1;
    let x = (k & low_mask) | ((k & !low_mask) << 1);
    let mid_mask = (1 << hi) - 1;
    (x & mid_mask) | ((x & !mid_mask) << 1)
}

#[inline]
fn local_indices(base: usize, i: usize, j: usize) -> [usize; 4] {
    let (bi, bj) = (1 << i, 1 << j);
    [base, base | bj, base | bi, base | bi | bj]
}

/// Real amplitudes on `m` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<f64>,
    qubits: usize,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![0.0; dim];
        amps[index] = 1.0;
        Ok(StateVector { amps, qubits })
    }

    pub fn from_amplitudes(amps: Vec<f64>) -> Result<Self> {
        let qubits = qubits_of_len(amps.len())?;
        Ok(StateVector { amps, qubits })
    }

    pub fn from_target(target: &TargetState) -> Self {
        StateVector { amps: target.amplitudes().to_vec(), qubits: target.qubits() }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        for q in [i, j] {
            if q >= self.qubits {
                return Err(Error::QubitOutOfRange { index: q, qubits: self.qubits });
            }
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("gate acts twice on qubit {i}")));
        }
        Ok(())
    }

    /// Applies `g` (or `g^T` when `adjoint`) in place.
    pub fn apply(&mut self, g: &TwoQubitGate, adjoint: bool) -> Result<()> {
        self.check_pair(g.i, g.j)?;
        apply_real_4x4(&mut self.amps, &g.mat, g.i, g.j, adjoint);
        Ok(())
    }

    /// Out-of-place variant of [`StateVector::apply`].
    pub fn applied(&self, g: &TwoQubitGate, adjoint: bool) -> Result<Self> {
        let mut out = self.clone();
        out.apply(g, adjoint)?;
        Ok(out)
    }
}

impl Probabilities for StateVector {
    fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a * a).collect()
    }
}

pub(crate) fn apply_real_4x4(amps: &mut [f64], mat: &Mat4, i: usize, j: usize, transpose: bool) {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let quarter = amps.len() >> 2;
    for k in 0..quarter {
        let idx = local_indices(insert_two_zeros(k, lo, hi), i, j);
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &dst) in idx.iter().enumerate() {
            let mut acc = 0.0;
            for (c, vc) in v.iter().enumerate() {
                let m = if transpose { mat[c][r] } else { mat[r][c] };
                acc += m * vc;
            }
            amps[dst] = acc;
        }
    }
}

/// Real orthogonal 4x4 matrix bound to an ordered qubit pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    pub mat: Mat4,
    pub i: usize,
    pub j: usize,
}

/// Orthogonality tolerance for gate construction.
pub const ORTHO_TOL: f64 = 1e-10;

impl TwoQubitGate {
    pub fn new(mat: Mat4, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidArgument(format!("gate acts twice on qubit {i}")));
        }
        let resid = orthogonality_residual(&mat);
        if resid > ORTHO_TOL {
            return Err(Error::NotOrthogonal(resid));
        }
        Ok(TwoQubitGate { mat, i, j })
    }

    pub fn identity(i: usize, j: usize) -> Self {
        TwoQubitGate { mat: identity4(), i, j }
    }
}

pub fn identity4() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    m
}

/// Max-entry deviation of `M^T M` from the identity.
pub fn orthogonality_residual(m: &Mat4) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            let dot: f64 = (0..4).map(|k| m[k][r] * m[k][c]).sum();
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// Partial trace of `|phi><psi|` onto qubits `(i, j)`:
/// `rho[a][b] = sum_rest phi[a, rest] * psi[b, rest]`, so that
/// `Tr(rho G) = <psi| G_(i,j) |phi>`.
pub fn environment_matrix(phi: &StateVector, psi: &StateVector, i: usize, j: usize) -> Result<Mat4> {
    if phi.qubits != psi.qubits {
        return Err(Error::DimensionMismatch { expected: phi.amps.len(), got: psi.amps.len() });
    }
    phi.check_pair(i, j)?;
    Ok(environment_unchecked(&phi.amps, &psi.amps, i, j))
}

pub(crate) fn environment_unchecked(phi: &[f64], psi: &[f64], i: usize, j: usize) -> Mat4 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let mut rho = [[0.0; 4]; 4];
    for k in 0..(phi.len() >> 2) {
        let idx = local_indices(insert_two_zeros(k, lo, hi), i, j);
        let f = [phi[idx[0]], phi[idx[1]], phi[idx[2]], phi[idx[3]]];
        let p = [psi[idx[0]], psi[idx[1]], psi[idx[2]], psi[idx[3]]];
        for a in 0..4 {
            for b in 0..4 {
                rho[a][b] += f[a] * p[b];
            }
        }
    }
    rho
}

/// Signed overlap `sum_k a_k b_k`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.qubits != b.qubits {
        return Err(Error::DimensionMismatch { expected: a.amps.len(), got: b.amps.len() });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x * y).sum())
}

pub type Mat2c = [[Complex64; 2]; 2];
pub type Mat4c = [[Complex64; 4]; 4];

/// Complex amplitudes, used to re-simulate lowered circuits.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStateVector {
    amps: Vec<Complex64>,
    qubits: usize,
}

impl ComplexStateVector {
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(ComplexStateVector { amps, qubits })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let qubits = qubits_of_len(amps.len())?;
        Ok(ComplexStateVector { amps, qubits })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.qubits {
            return Err(Error::QubitOutOfRange { index: q, qubits: self.qubits });
        }
        Ok(())
    }

    pub fn apply_1q(&mut self, u: &Mat2c, q: usize) -> Result<()> {
        self.check(q)?;
        let bit = 1 << q;
        for base in 0..self.amps.len() {
            if base & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[base], self.amps[base | bit]);
            self.amps[base] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[base | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check(control)?;
        self.check(target)?;
        if control == target {
            return Err(Error::InvalidArgument("CNOT control equals target".into()));
        }
        let (c, t) = (1 << control, 1 << target);
        for k in 0..self.amps.len() {
            if k & c != 0 && k & t == 0 {
                self.amps.swap(k, k | t);
            }
        }
        Ok(())
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::InvalidArgument("SWAP on a single qubit".into()));
        }
        let (ba, bb) = (1 << a, 1 << b);
        for k in 0..self.amps.len() {
            if k & ba != 0 && k & bb == 0 {
                self.amps.swap(k, (k & !ba) | bb);
            }
        }
        Ok(())
    }

    pub fn apply_2q(&mut self, u: &Mat4c, i: usize, j: usize) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::InvalidArgument(format!("gate acts twice on qubit {i}")));
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        for k in 0..(self.amps.len() >> 2) {
            let idx = local_indices(insert_two_zeros(k, lo, hi), i, j);
            let v = [self.amps[idx[0]], self.amps[idx[1]], self.amps[idx[2]], self.amps[idx[3]]];
            for (r, &dst) in idx.iter().enumerate() {
                self.amps[dst] = (0..4).map(|c| u[r][c] * v[c]).sum();
            }
        }
        Ok(())
    }

    pub fn inner(&self, other: &ComplexStateVector) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), got: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }
}

impl From<&StateVector> for ComplexStateVector {
    fn from(v: &StateVector) -> Self {
        ComplexStateVector {
            amps: v.amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            qubits: v.qubits,
        }
    }
}

impl Probabilities for ComplexStateVector {
    fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap_mat() -> Mat4 {
        [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]
    }

    fn rotation_mat(t: f64) -> Mat4 {
        // Givens rotations in the (0,3) and (1,2) planes.
        let (c, s) = (t.cos(), t.sin());
        let (c2, s2) = ((2.0 * t).cos(), (2.0 * t).sin());
        [[c, 0.0, 0.0, -s], [0.0, c2, -s2, 0.0], [0.0, s2, c2, 0.0], [s, 0.0, 0.0, c]]
    }

    #[test]
    fn identity_is_bit_exact() {
        let v = StateVector::from_amplitudes(vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]).unwrap();
        let w = v.applied(&TwoQubitGate::identity(2, 0), false).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn swap_moves_basis_state() {
        // |01> in (q1 q0) notation is index 1; SWAP on (0,1) gives index 2.
        let mut v = StateVector::basis(2, 1).unwrap();
        v.apply(&TwoQubitGate::new(swap_mat(), 0, 1).unwrap(), false).unwrap();
        assert_eq!(v, StateVector::basis(2, 2).unwrap());
    }

    #[test]
    fn adjoint_undoes_gate() {
        let g = TwoQubitGate::new(rotation_mat(0.37), 1, 3).unwrap();
        let v = StateVector::from_amplitudes((0..16).map(|k| (k as f64 * 0.7).sin()).collect()).unwrap();
        let w = v.applied(&g, false).unwrap().applied(&g, true).unwrap();
        for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(TwoQubitGate::new(identity4(), 1, 1), Err(Error::InvalidArgument(_))));
        let mut bad = identity4();
        bad[0][1] = 1e-3;
        assert!(matches!(TwoQubitGate::new(bad, 0, 1), Err(Error::NotOrthogonal(_))));
        let mut v = StateVector::zero(2).unwrap();
        assert!(matches!(v.apply(&TwoQubitGate::identity(0, 2), false), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(StateVector::zero(27), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn environment_of_zero_state() {
        let z = StateVector::zero(2).unwrap();
        let rho = environment_matrix(&z, &z, 0, 1).unwrap();
        let mut expect = [[0.0; 4]; 4];
        expect[0][0] = 1.0;
        assert_eq!(rho, expect);
    }

    #[test]
    fn environment_two_qubits_is_outer_product() {
        // With (i, j) = (1, 0) the local index equals the global index.
        let phi = StateVector::from_amplitudes(vec![0.5, -0.5, 0.5, 0.5]).unwrap();
        let psi = StateVector::from_amplitudes(vec![0.1, 0.7, 0.7, 0.1]).unwrap();
        let rho = environment_matrix(&phi, &psi, 1, 0).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(rho[a][b], phi.amplitudes()[a] * psi.amplitudes()[b]);
            }
        }
        assert!(environment_matrix(&phi, &StateVector::zero(3).unwrap(), 0, 1).is_err());
    }

    #[test]
    fn overlap_examples() {
        let a = StateVector::from_amplitudes(vec![0.6, 0.8]).unwrap();
        assert!((overlap(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let (b0, b1) = (StateVector::basis(3, 2).unwrap(), StateVector::basis(3, 5).unwrap());
        assert_eq!(overlap(&b0, &b1).unwrap(), 0.0);
        assert!(overlap(&a, &b0).is_err());
    }

    #[test]
    fn complex_gates() {
        let mut v = ComplexStateVector::basis(3, 0b001).unwrap();
        v.apply_cnot(0, 2).unwrap();
        assert_eq!(v, ComplexStateVector::basis(3, 0b101).unwrap());
        v.apply_swap(2, 1).unwrap();
        assert_eq!(v, ComplexStateVector::basis(3, 0b011).unwrap());
        assert!(v.apply_cnot(1, 1).is_err());
        assert!(v.apply_swap(0, 3).is_err());
    }
}
