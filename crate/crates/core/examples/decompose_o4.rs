//! Exact decomposition of a real orthogonal two-qubit gate into Cliffords and
//! six single-qubit rotations, checked by re-simulation.
//!
//! cargo run --example decompose_o4

use num_complex::Complex64;
use prepsynth::gatedecomp::decompose_o4;
use prepsynth::statesim::{ComplexStateVector, StateVector, TwoQubitGate};

fn main() -> prepsynth::Result<()> {
    // A rotation in the (|01>, |10>) plane followed by a reflection: det = -1.
    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    let mat = [[1.0, 0.0, 0.0, 0.0], [0.0, c, -s, 0.0], [0.0, s, c, 0.0], [0.0, 0.0, 0.0, -1.0]];
    let gate = TwoQubitGate::new(mat, 0, 1)?;
    let circ = decompose_o4(&gate)?;
    print!("{}", circ.to_text());
    println!("# rotations {}, global phase {:.6}", circ.rotation_count(), circ.global_phase);

    let phase = Complex64::from_polar(1.0, circ.global_phase);
    let mut worst: f64 = 0.0;
    for col in 0..4 {
        let mut a = ComplexStateVector::basis(2, col)?;
        circ.apply_to(&mut a)?;
        let mut b = StateVector::basis(2, col)?;
        b.apply(&gate, false)?;
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            worst = worst.max((x * phase - y).norm());
        }
    }
    println!("# max entry deviation {worst:.2e}");
    Ok(())
}
