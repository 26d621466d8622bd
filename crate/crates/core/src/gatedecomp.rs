//! Lowering real two-qubit gates to Clifford gates plus single-qubit rotations.
//!
//! For `g` in O(4), conjugation by the magic matrix `M` maps `g` (det +1) or
//! `g` followed by a SWAP (det -1) into SU(2) ⊗ SU(2). `M` itself is a short
//! Clifford circuit, and each SU(2) factor is an `Rz Ry Rz` product, so every
//! gate costs exactly six rotations.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::aqce::AqceCircuit;
use crate::error::{Error, Result};
use crate::linalg::det4;
use crate::statesim::{identity4, orthogonality_residual, ComplexStateVector, Mat2c, Mat4c, TwoQubitGate, ORTHO_TOL};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// One operation of an elementary circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    Rz(usize, f64),
    Ry(usize, f64),
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::H(_) => "H",
            Op::S(_) => "S",
            Op::Sdg(_) => "SDG",
            Op::T(_) => "T",
            Op::Tdg(_) => "TDG",
            Op::X(_) => "X",
            Op::Z(_) => "Z",
            Op::Cnot { .. } => "CNOT",
            Op::Swap(..) => "SWAP",
            Op::Rz(..) => "RZ",
            Op::Ry(..) => "RY",
        }
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, Op::Rz(..) | Op::Ry(..))
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Op::T(_) | Op::Tdg(_))
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Op::Cnot { .. } | Op::Swap(..))
    }

    fn max_qubit(&self) -> usize {
        match *self {
            Op::Cnot { control, target } => control.max(target),
            Op::Swap(a, b) => a.max(b),
            Op::H(q) | Op::S(q) | Op::Sdg(q) | Op::T(q) | Op::Tdg(q) | Op::X(q) | Op::Z(q) => q,
            Op::Rz(q, _) | Op::Ry(q, _) => q,
        }
    }

    /// 2x2 matrix of a single-qubit op, `None` for CNOT and SWAP.
    pub fn matrix(&self) -> Option<Mat2c> {
        let h = FRAC_1_SQRT_2;
        let m = match *self {
            Op::H(_) => [[c(h), c(h)], [c(h), c(-h)]],
            Op::S(_) => [[ONE, ZERO], [ZERO, I]],
            Op::Sdg(_) => [[ONE, ZERO], [ZERO, -I]],
            Op::T(_) => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, PI / 4.0)]],
            Op::Tdg(_) => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, -PI / 4.0)]],
            Op::X(_) => [[ZERO, ONE], [ONE, ZERO]],
            Op::Z(_) => [[ONE, ZERO], [ZERO, -ONE]],
            Op::Rz(_, t) => rz(t),
            Op::Ry(_, t) => ry(t),
            Op::Cnot { .. } | Op::Swap(..) => return None,
        };
        Some(m)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::Cnot { control, target } => write!(f, "CNOT {control},{target}"),
            Op::Swap(a, b) => write!(f, "SWAP {a},{b}"),
            Op::Rz(q, t) | Op::Ry(q, t) => write!(f, "{} {q} {t:.16e}", self.name()),
            Op::H(q) | Op::S(q) | Op::Sdg(q) | Op::T(q) | Op::Tdg(q) | Op::X(q) | Op::Z(q) => {
                write!(f, "{} {q}", self.name())
            }
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `Rz(t) = diag(e^{-it/2}, e^{it/2})`.
pub fn rz(t: f64) -> Mat2c {
    [[Complex64::from_polar(1.0, -t / 2.0), ZERO], [ZERO, Complex64::from_polar(1.0, t / 2.0)]]
}

/// `Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]`.
pub fn ry(t: f64) -> Mat2c {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co), c(-s)], [c(s), c(co)]]
}

pub fn mul2(a: &Mat2c, b: &Mat2c) -> Mat2c {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            out[r][col] = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    out
}

pub fn dagger2(a: &Mat2c) -> Mat2c {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn det2(a: &Mat2c) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn scale2(a: &Mat2c, s: Complex64) -> Mat2c {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn mul4c(a: &Mat4c, b: &Mat4c) -> Mat4c {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = (0..4).map(|k| a[r][k] * b[k][col]).sum();
        }
    }
    out
}

pub fn dagger4(a: &Mat4c) -> Mat4c {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = a[col][r].conj();
        }
    }
    out
}

pub fn kron2(a: &Mat2c, b: &Mat2c) -> Mat4c {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = a[r / 2][col / 2] * b[r % 2][col % 2];
        }
    }
    out
}

pub fn frobenius_diff4c(a: &Mat4c, b: &Mat4c) -> f64 {
    let mut acc = 0.0;
    for r in 0..4 {
        for col in 0..4 {
            acc += (a[r][col] - b[r][col]).norm_sqr();
        }
    }
    acc.sqrt()
}

/// The magic basis change, in the local `2 * bit_i + bit_j` ordering.
pub fn magic_matrix() -> Mat4c {
    let h = c(FRAC_1_SQRT_2);
    let i = I * h;
    [
        [h, i, ZERO, ZERO],
        [ZERO, ZERO, i, h],
        [ZERO, ZERO, i, -h],
        [h, -i, ZERO, ZERO],
    ]
}

pub fn swap_matrix() -> Mat4c {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][2] = ONE;
    m[2][1] = ONE;
    m[3][3] = ONE;
    m
}

fn real_to_complex4(g: &[[f64; 4]; 4]) -> Mat4c {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = c(g[r][col]);
        }
    }
    out
}

/// Determinant rounding tolerance for picking the decomposition branch.
pub const DET_TOL: f64 = 1e-8;

/// Returns `M g M^†` (times SWAP when `det g = -1`) and the rounded determinant.
pub fn magic_conjugate(g: &[[f64; 4]; 4]) -> Result<(Mat4c, i8)> {
    let resid = orthogonality_residual(g);
    if resid > ORTHO_TOL {
        return Err(Error::NotOrthogonal(resid));
    }
    let det = det4(g);
    let sign = if (det - 1.0).abs() <= DET_TOL {
        1
    } else if (det + 1.0).abs() <= DET_TOL {
        -1
    } else {
        return Err(Error::BadDeterminant(det));
    };
    let m = magic_matrix();
    let mut conj = mul4c(&mul4c(&m, &real_to_complex4(g)), &dagger4(&m));
    if sign < 0 {
        conj = mul4c(&conj, &swap_matrix());
    }
    Ok((conj, sign))
}

/// `c = phase * (a ⊗ b)` with `a, b` in SU(2).
#[derive(Debug, Clone, PartialEq)]
pub struct KronFactors {
    pub a: Mat2c,
    pub b: Mat2c,
    pub phase: Complex64,
}

/// Residual tolerance for accepting a Kronecker factorization.
pub const KRON_TOL: f64 = 1e-9;

/// Splits a 4x4 unitary with tensor-product structure into SU(2) factors.
///
/// Sign convention: `Re(a[0][0]) >= 0`; when that entry is purely imaginary
/// the sign is fixed by `Re(b[0][0]) >= 0`, then by the imaginary parts.
pub fn kron_factor(cm: &Mat4c) -> Result<KronFactors> {
    let block = |x: usize, y: usize| -> Mat2c {
        [[cm[2 * x][2 * y], cm[2 * x][2 * y + 1]], [cm[2 * x + 1][2 * y], cm[2 * x + 1][2 * y + 1]]]
    };
    let block_norm = |m: &Mat2c| m.iter().flatten().map(|e| e.norm_sqr()).sum::<f64>();
    let mut pick = (0, 0);
    let mut best = -1.0;
    for x in 0..2 {
        for y in 0..2 {
            let n = block_norm(&block(x, y));
            if n > best {
                best = n;
                pick = (x, y);
            }
        }
    }
    let pivot = block(pick.0, pick.1);
    let det = det2(&pivot);
    if det.norm() < 1e-12 {
        return Err(Error::NotTensorProduct(f64::INFINITY));
    }
    let mut b = scale2(&pivot, det.sqrt().inv());
    let b_dag = dagger2(&b);
    let mut a = [[ZERO; 2]; 2];
    for (x, row) in a.iter_mut().enumerate() {
        for (y, e) in row.iter_mut().enumerate() {
            let prod = mul2(&b_dag, &block(x, y));
            *e = (prod[0][0] + prod[1][1]) / 2.0;
        }
    }
    let det_a = det2(&a);
    if det_a.norm() < 1e-12 {
        return Err(Error::NotTensorProduct(f64::INFINITY));
    }
    let mut phase = det_a.sqrt();
    a = scale2(&a, phase.inv());

    let tol = 1e-12;
    let flip = if a[0][0].re.abs() > tol {
        a[0][0].re < 0.0
    } else if b[0][0].re.abs() > tol {
        b[0][0].re < 0.0
    } else if a[0][0].im.abs() > tol {
        a[0][0].im < 0.0
    } else {
        b[0][0].im < 0.0
    };
    if flip {
        a = scale2(&a, -ONE);
        b = scale2(&b, -ONE);
    }

    let recon = kron2(&a, &b);
    let scaled: Mat4c = {
        let mut s = recon;
        s.iter_mut().flatten().for_each(|e| *e *= phase);
        s
    };
    let resid = frobenius_diff4c(&scaled, cm);
    if resid > KRON_TOL {
        return Err(Error::NotTensorProduct(resid));
    }
    // Snap a numerically real unit phase.
    if (phase.im).abs() < 1e-15 {
        phase = c(phase.re.signum());
    }
    Ok(KronFactors { a, b, phase })
}

/// Angles with `Rz(alpha) Ry(beta) Rz(gamma) = sign * A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `+1` or `-1`.
    pub sign: f64,
}

impl Su2Euler {
    pub fn matrix(&self) -> Mat2c {
        mul2(&mul2(&rz(self.alpha), &ry(self.beta)), &rz(self.gamma))
    }
}

const GIMBAL_TOL: f64 = 1e-12;

/// ZYZ factorization of an SU(2) matrix; `beta` lies in `[0, pi]`.
/// Near `beta = 0` or `pi` the whole z-rotation is folded into `alpha`.
pub fn zyz_angles(a: &Mat2c) -> Result<Su2Euler> {
    let det = det2(a);
    if (det - ONE).norm() > 1e-9 {
        return Err(Error::InvalidArgument(format!("matrix is not in SU(2): det = {det}")));
    }
    let (p, q) = (a[0][0], a[1][0]);
    let beta = 2.0 * q.norm().atan2(p.norm());
    let (alpha, gamma) = if q.norm() < GIMBAL_TOL {
        (-2.0 * p.arg(), 0.0)
    } else if p.norm() < GIMBAL_TOL {
        (2.0 * q.arg(), 0.0)
    } else {
        (q.arg() - p.arg(), -p.arg() - q.arg())
    };
    let mut e = Su2Euler { alpha, beta, gamma, sign: 1.0 };
    e.alpha = canonical_angle(e.alpha).0;
    e.gamma = canonical_angle(e.gamma).0;
    let m = e.matrix();
    // Decide the sign from the largest entry to avoid a near-zero comparison.
    let (r, col) = if p.norm() >= q.norm() { (0, 0) } else { (1, 0) };
    let ratio = m[r][col] / a[r][col];
    e.sign = if ratio.re >= 0.0 { 1.0 } else { -1.0 };
    Ok(e)
}

/// Reduces an angle to `(-pi, pi]`. The second value is `-1` when an odd
/// multiple of `2 pi` was removed, since `Rz(t + 2 pi) = -Rz(t)`.
pub fn canonical_angle(t: f64) -> (f64, f64) {
    let turns = ((t - PI) / (2.0 * PI)).ceil();
    let mut r = t - 2.0 * PI * turns;
    let mut k = turns as i64;
    if r <= -PI {
        r += 2.0 * PI;
        k -= 1;
    }
    if r > PI {
        r -= 2.0 * PI;
        k += 1;
    }
    (r, if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 })
}

/// Ordered list of elementary gates on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryCircuit {
    pub ops: Vec<Op>,
    pub qubits: usize,
    /// Accumulated global phase (radians); reported, never corrected.
    pub global_phase: f64,
}

impl ElementaryCircuit {
    pub fn new(qubits: usize) -> Self {
        ElementaryCircuit { ops: Vec::new(), qubits, global_phase: 0.0 }
    }

    /// Appends an op, reducing rotation angles to `(-pi, pi]`.
    pub fn push(&mut self, op: Op) {
        let op = match op {
            Op::Rz(q, t) | Op::Ry(q, t) => {
                let (r, sign) = canonical_angle(t);
                if sign < 0.0 {
                    self.global_phase += PI;
                }
                if matches!(op, Op::Rz(..)) {
                    Op::Rz(q, r)
                } else {
                    Op::Ry(q, r)
                }
            }
            other => other,
        };
        self.qubits = self.qubits.max(op.max_qubit() + 1);
        self.ops.push(op);
    }

    pub fn rotation_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_rotation()).count()
    }

    pub fn t_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_t()).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_two_qubit()).count()
    }

    pub fn apply_to(&self, state: &mut ComplexStateVector) -> Result<()> {
        for op in &self.ops {
            match *op {
                Op::Cnot { control, target } => state.apply_cnot(control, target)?,
                Op::Swap(a, b) => state.apply_swap(a, b)?,
                _ => {
                    let m = op.matrix().expect("single-qubit op");
                    state.apply_1q(&m, op.max_qubit())?;
                }
            }
        }
        Ok(())
    }

    /// Output state on `|0...0>` over `max(qubits, register)` qubits.
    pub fn simulate(&self, register: usize) -> Result<ComplexStateVector> {
        let mut state = ComplexStateVector::zero(self.qubits.max(register))?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// Plain-text listing, one op per line after a `# qubits` header.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {}\n", self.qubits);
        for op in &self.ops {
            out.push_str(&op.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut circ = ElementaryCircuit::new(0);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('#') {
                let mut words = rest.split_whitespace();
                if words.next() == Some("qubits") {
                    if let Some(n) = words.next().and_then(|w| w.parse::<usize>().ok()) {
                        circ.qubits = circ.qubits.max(n);
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            circ.ops.push(parse_op(line, line_no)?);
            let top = circ.ops.last().map(|o| o.max_qubit() + 1).unwrap_or(0);
            circ.qubits = circ.qubits.max(top);
        }
        Ok(circ)
    }
}

fn parse_op(line: &str, line_no: usize) -> Result<Op> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let fields: Vec<&str> = line.split_whitespace().collect();
    let qubit = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad qubit index '{s}'")));
    let pair = |s: &str| -> Result<(usize, usize)> {
        let (a, b) = s.split_once(',').ok_or_else(|| err(format!("expected 'a,b', got '{s}'")))?;
        let (a, b) = (qubit(a)?, qubit(b)?);
        if a == b {
            return Err(err(format!("two-qubit gate on a single qubit {a}")));
        }
        Ok((a, b))
    };
    let angle = |s: &str| -> Result<f64> {
        let t: f64 = s.parse().map_err(|_| err(format!("bad angle '{s}'")))?;
        if !t.is_finite() {
            return Err(err(format!("non-finite angle '{s}'")));
        }
        Ok(t)
    };
    let op = match fields.as_slice() {
        ["H", q] => Op::H(qubit(q)?),
        ["S", q] => Op::S(qubit(q)?),
        ["SDG", q] => Op::Sdg(qubit(q)?),
        ["T", q] => Op::T(qubit(q)?),
        ["TDG", q] => Op::Tdg(qubit(q)?),
        ["X", q] => Op::X(qubit(q)?),
        ["Z", q] => Op::Z(qubit(q)?),
        ["CNOT", p] => {
            let (control, target) = pair(p)?;
            Op::Cnot { control, target }
        }
        ["SWAP", p] => {
            let (a, b) = pair(p)?;
            Op::Swap(a, b)
        }
        ["RZ", q, t] => Op::Rz(qubit(q)?, angle(t)?),
        ["RY", q, t] => Op::Ry(qubit(q)?, angle(t)?),
        _ => return Err(err(format!("unrecognized gate line '{line}'"))),
    };
    Ok(op)
}

fn push_magic(circ: &mut ElementaryCircuit, i: usize, j: usize) {
    circ.push(Op::S(i));
    circ.push(Op::S(j));
    circ.push(Op::H(j));
    circ.push(Op::Cnot { control: j, target: i });
}

fn push_magic_dagger(circ: &mut ElementaryCircuit, i: usize, j: usize) {
    circ.push(Op::Cnot { control: j, target: i });
    circ.push(Op::H(j));
    circ.push(Op::Sdg(j));
    circ.push(Op::Sdg(i));
}

fn push_euler(circ: &mut ElementaryCircuit, q: usize, e: &Su2Euler) {
    // Matrix order Rz(alpha) Ry(beta) Rz(gamma) means gamma acts first.
    circ.push(Op::Rz(q, e.gamma));
    circ.push(Op::Ry(q, e.beta));
    circ.push(Op::Rz(q, e.alpha));
    if e.sign < 0.0 {
        circ.global_phase += PI;
    }
}

/// Appends the Clifford + six-rotation template for `g` to `circ`.
pub fn decompose_o4_into(circ: &mut ElementaryCircuit, g: &TwoQubitGate) -> Result<()> {
    let (conj, det) = magic_conjugate(&g.mat)?;
    let factors = kron_factor(&conj)?;
    let ea = zyz_angles(&factors.a)?;
    let eb = zyz_angles(&factors.b)?;
    push_magic(circ, g.i, g.j);
    if det < 0 {
        circ.push(Op::Swap(g.i, g.j));
    }
    push_euler(circ, g.i, &ea);
    push_euler(circ, g.j, &eb);
    push_magic_dagger(circ, g.i, g.j);
    circ.global_phase += factors.phase.arg();
    Ok(())
}

pub fn decompose_o4(g: &TwoQubitGate) -> Result<ElementaryCircuit> {
    let mut circ = ElementaryCircuit::new(g.i.max(g.j) + 1);
    decompose_o4_into(&mut circ, g)?;
    Ok(circ)
}

/// Lowers every gate of an AQCE circuit in order. Gates that are exactly the
/// identity emit nothing.
pub fn decompose_circuit(circ: &AqceCircuit) -> Result<ElementaryCircuit> {
    let mut out = ElementaryCircuit::new(circ.qubits);
    for g in circ.gates.iter().filter(|g| g.mat != identity4()) {
        decompose_o4_into(&mut out, g)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unitary_of(circ: &ElementaryCircuit, i: usize, j: usize) -> Mat4c {
        // Columns indexed by the local 2*bit_i + bit_j ordering.
        let mut u = [[ZERO; 4]; 4];
        for col in 0..4 {
            let idx = ((col >> 1) << i) | ((col & 1) << j);
            let mut s = ComplexStateVector::basis(circ.qubits, idx).unwrap();
            circ.apply_to(&mut s).unwrap();
            for (row, u_row) in u.iter_mut().enumerate() {
                let out = ((row >> 1) << i) | ((row & 1) << j);
                u_row[col] = s.amplitudes()[out];
            }
        }
        u
    }

    fn phase_distance(a: &Mat4c, b: &Mat4c) -> f64 {
        let ip: Complex64 = (0..4).flat_map(|r| (0..4).map(move |c| (r, c))).map(|(r, c)| a[r][c].conj() * b[r][c]).sum();
        let ph = if ip.norm() > 0.0 { ip / ip.norm() } else { ONE };
        let mut scaled = *a;
        scaled.iter_mut().flatten().for_each(|e| *e *= ph);
        frobenius_diff4c(&scaled, b)
    }

    #[test]
    fn magic_matches_clifford_circuit() {
        let mut circ = ElementaryCircuit::new(2);
        push_magic(&mut circ, 1, 0);
        let u = unitary_of(&circ, 1, 0);
        assert!(frobenius_diff4c(&u, &magic_matrix()) < 1e-14);
    }

    #[test]
    fn identity_and_swap_conjugates() {
        let id = crate::statesim::identity4();
        let (cm, det) = magic_conjugate(&id).unwrap();
        assert_eq!(det, 1);
        let f = kron_factor(&cm).unwrap();
        assert!(frobenius_diff4c(&kron2(&f.a, &f.b), &kron2(&rz(0.0), &rz(0.0))) < 1e-14);

        let swap = [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let (cm, det) = magic_conjugate(&swap).unwrap();
        assert_eq!(det, -1);
        assert!(kron_factor(&cm).is_ok());
    }

    #[test]
    fn bad_determinant_rejected() {
        let mut g = crate::statesim::identity4();
        g[0][0] = 0.5;
        assert!(matches!(magic_conjugate(&g), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn kron_of_z_and_x() {
        let z = [[ONE, ZERO], [ZERO, -ONE]];
        let x = [[ZERO, ONE], [ONE, ZERO]];
        let cm = kron2(&z, &x);
        let f = kron_factor(&cm).unwrap();
        assert!((det2(&f.a) - ONE).norm() < 1e-14);
        assert!((det2(&f.b) - ONE).norm() < 1e-14);
        let mut recon = kron2(&f.a, &f.b);
        recon.iter_mut().flatten().for_each(|e| *e *= f.phase);
        assert!(frobenius_diff4c(&recon, &cm) < 1e-14);
    }

    #[test]
    fn non_product_rejected() {
        let mut cnot = [[ZERO; 4]; 4];
        cnot[0][0] = ONE;
        cnot[1][1] = ONE;
        cnot[2][3] = ONE;
        cnot[3][2] = ONE;
        assert!(matches!(kron_factor(&cnot), Err(Error::NotTensorProduct(_))));
    }

    #[test]
    fn zyz_examples() {
        let e = zyz_angles(&rz(0.0)).unwrap();
        assert_eq!((e.alpha, e.beta, e.gamma), (0.0, 0.0, 0.0));
        let e = zyz_angles(&ry(0.7)).unwrap();
        assert!(e.alpha.abs() < 1e-15 && (e.beta - 0.7).abs() < 1e-15 && e.gamma.abs() < 1e-15);
        let a = mul2(&mul2(&rz(0.3), &ry(1.1)), &rz(-0.4));
        let e = zyz_angles(&a).unwrap();
        assert!((e.alpha - 0.3).abs() < 1e-12 && (e.beta - 1.1).abs() < 1e-12 && (e.gamma + 0.4).abs() < 1e-12);
        let m = e.matrix();
        for r in 0..2 {
            for col in 0..2 {
                assert!((m[r][col] * e.sign - a[r][col]).norm() < 1e-12);
            }
        }
        // beta = pi gimbal lock.
        let a = mul2(&rz(0.9), &ry(PI));
        let e = zyz_angles(&a).unwrap();
        assert_eq!(e.gamma, 0.0);
        let m = e.matrix();
        assert!((0..2).all(|r| (0..2).all(|col| (m[r][col] * e.sign - a[r][col]).norm() < 1e-12)));
    }

    #[test]
    fn canonical_angles() {
        assert_eq!(canonical_angle(0.5), (0.5, 1.0));
        assert_eq!(canonical_angle(PI), (PI, 1.0));
        let (r, s) = canonical_angle(-PI);
        assert_eq!((r, s), (PI, -1.0));
        let (r, s) = canonical_angle(3.0 * PI / 2.0);
        assert!((r + PI / 2.0).abs() < 1e-15 && s == -1.0);
        let (r, s) = canonical_angle(4.0 * PI + 0.25);
        assert!((r - 0.25).abs() < 1e-14 && s == 1.0);
    }

    #[test]
    fn identity_gate_template() {
        let g = TwoQubitGate::identity(0, 1);
        let circ = decompose_o4(&g).unwrap();
        assert_eq!(circ.rotation_count(), 6);
        let u = unitary_of(&circ, 0, 1);
        assert!(phase_distance(&u, &real_to_complex4(&g.mat)) < 1e-10);
    }

    #[test]
    fn cnot_as_o4() {
        let mat = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]];
        for (i, j) in [(0, 1), (1, 0), (2, 0)] {
            let g = TwoQubitGate::new(mat, i, j).unwrap();
            let circ = decompose_o4(&g).unwrap();
            assert_eq!(circ.rotation_count(), 6);
            assert_eq!(circ.ops.iter().filter(|o| !o.is_rotation()).count(), 9);
            let u = unitary_of(&circ, i, j);
            assert!(phase_distance(&u, &real_to_complex4(&mat)) < 1e-9);
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let mut circ = ElementaryCircuit::new(3);
        circ.push(Op::H(0));
        circ.push(Op::Cnot { control: 0, target: 2 });
        circ.push(Op::Rz(1, 0.1234567890123456789));
        circ.push(Op::Ry(2, -2.5));
        circ.push(Op::Swap(1, 2));
        circ.push(Op::Tdg(1));
        let text = circ.to_text();
        assert!(text.contains("CNOT 0,2\n"));
        let back = ElementaryCircuit::parse_text(&text).unwrap();
        assert_eq!(back.ops, circ.ops);
        assert_eq!(back.qubits, 3);

        assert!(ElementaryCircuit::parse_text("H 0\nFOO 1\n").is_err());
        assert!(ElementaryCircuit::parse_text("CNOT 1,1\n").is_err());
        assert!(ElementaryCircuit::parse_text("RZ 0 nan\n").is_err());
        assert!(ElementaryCircuit::parse_text("RZ 0\n").is_err());
        assert!(ElementaryCircuit::parse_text("H x\n").is_err());
    }

    fn random_orthogonal(rng: &mut rand_chacha::ChaCha8Rng) -> [[f64; 4]; 4] {
        use rand_core::RngCore;
        let mut rows = [[0.0; 4]; 4];
        for r in 0..4 {
            let mut v = [0.0; 4];
            for e in v.iter_mut() {
                *e = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            }
            for prev in rows.iter().take(r) {
                let d: f64 = (0..4).map(|k| v[k] * prev[k]).sum();
                (0..4).for_each(|k| v[k] -= d * prev[k]);
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            rows[r] = v.map(|x| x / n);
        }
        rows
    }

    #[test]
    fn random_o4_round_trip_with_phase() {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut seen = [0usize; 2];
        for _ in 0..200 {
            let mat = random_orthogonal(&mut rng);
            let g = TwoQubitGate::new(mat, 1, 0).unwrap();
            let circ = decompose_o4(&g).unwrap();
            assert_eq!(circ.rotation_count(), 6);
            seen[(det4(&mat) < 0.0) as usize] += 1;
            let mut u = unitary_of(&circ, 1, 0);
            let ph = Complex64::from_polar(1.0, circ.global_phase);
            u.iter_mut().flatten().for_each(|e| *e *= ph);
            assert!(frobenius_diff4c(&u, &real_to_complex4(&mat)) < 1e-9);
        }
        assert!(seen[0] > 50 && seen[1] > 50);
    }
}
