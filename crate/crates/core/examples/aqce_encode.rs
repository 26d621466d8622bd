//! Grow-and-sweep AQCE on a synthetic 64-term instance, printing the error
//! after each round and the final gate layout.
//!
//! cargo run --release --example aqce_encode

use prepsynth::aqce::{run_aqce, AqceConfig};
use prepsynth::instances::{generate, Decay};
use prepsynth::terms::{build_target, state_error, CoefficientSet};

fn main() -> prepsynth::Result<()> {
    let cs = CoefficientSet::from_signed(&generate(64, 11, Decay::Power(1.5))?)?;
    let target = build_target(&cs);
    let cfg = AqceConfig { threshold: Some(1e-5), ..AqceConfig::for_terms(cs.len()) };
    let circ = run_aqce(&target, &cs, &cfg)?;

    for ev in &circ.evaluations {
        println!("M = {:3}  fidelity = {:.12}  max|c - c'| = {:.3e}", ev.gates, ev.fidelity, ev.max_error);
    }
    println!("converged: {}", circ.converged);
    let pairs: Vec<String> = circ.gates.iter().map(|g| format!("({},{})", g.i, g.j)).collect();
    println!("gates: {}", pairs.join(" "));
    println!("re-simulated error: {:.3e}", state_error(&circ.simulate()?, &cs)?);
    Ok(())
}
