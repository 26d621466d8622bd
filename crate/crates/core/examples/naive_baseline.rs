//! The exact multiplexed-Ry preparation: angle tree, gate counts and its
//! Clifford+T cost.
//!
//! cargo run --release --example naive_baseline

use prepsynth::baselines::{naive_prepare, naive_t_count};
use prepsynth::terms::{state_error, CoefficientSet};

fn main() -> prepsynth::Result<()> {
    let cs = CoefficientSet::from_signed(&[0.4, 0.3, 0.2, 0.1])?;
    let prep = naive_prepare(&cs);
    for (k, level) in prep.angles.iter().enumerate() {
        println!("level {k}: {:?}", level);
    }
    print!("{}", prep.circuit.to_text());

    println!("\n m  L    Ry  CNOT  T(eps=1e-3)");
    for m in 1..=7 {
        let values: Vec<f64> = (1..=1usize << m).map(|l| 1.0 / l as f64).collect();
        let cs = CoefficientSet::from_signed(&values)?;
        let prep = naive_prepare(&cs);
        assert!(state_error(&prep.circuit.simulate(m)?, &cs)? < 1e-12);
        let report = naive_t_count(&cs, 1e-3)?;
        println!(
            "{m:2} {:4} {:4} {:5}  {}",
            cs.len(),
            prep.circuit.rotation_count(),
            prep.circuit.two_qubit_count(),
            report.t_count
        );
    }
    Ok(())
}
