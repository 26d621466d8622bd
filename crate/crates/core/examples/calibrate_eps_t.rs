//! Bisection for the largest shared per-rotation tolerance that keeps the
//! lowered circuit within the coefficient budget.
//!
//! cargo run --release --example calibrate_eps_t

use prepsynth::baselines::naive_prepare;
use prepsynth::cliffordt::{calibrate_eps_t, probe, SynthesisBudget};
use prepsynth::instances::{generate, Decay};
use prepsynth::terms::CoefficientSet;

fn main() -> prepsynth::Result<()> {
    let cs = CoefficientSet::from_signed(&generate(32, 3, Decay::Power(1.5))?)?;
    let circ = naive_prepare(&cs).circuit;
    let budget = SynthesisBudget::new(1e-3);
    println!("{} rotations, epsilon {:e}", circ.rotation_count(), budget.epsilon);

    for eps_t in [1e-1, 1e-2, 1e-3, 1e-4] {
        let p = probe(&circ, &cs, eps_t)?;
        println!("  eps_t {eps_t:.0e}: T = {:5}, max|c - c'| = {:.3e}", p.t_count, p.error);
    }
    let (calibrated, best) = calibrate_eps_t(&circ, &cs, &budget)?;
    println!(
        "calibrated eps_t = {:.4e}: T = {}, max|c - c'| = {:.3e}",
        calibrated.epsilon_t, best.t_count, best.error
    );
    Ok(())
}
