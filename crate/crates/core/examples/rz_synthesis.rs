//! Clifford+T approximations of one z-rotation over a range of tolerances.
//!
//! cargo run --release --example rz_synthesis -- [theta]

use prepsynth::cliffordt::{phase_distance, synthesize_rz};
use prepsynth::gatedecomp::rz;

fn main() -> prepsynth::Result<()> {
    let theta: f64 = std::env::args().nth(1).map_or(Ok(0.1), |a| a.parse()).expect("theta must be a number");
    println!("theta = {theta}");
    for k in 1..=9 {
        let eps = 10f64.powi(-k);
        let start = std::time::Instant::now();
        let w = synthesize_rz(theta, eps)?;
        let check = phase_distance(&rz(theta), &w.matrix());
        println!(
            "eps {eps:.0e}: T = {:3}, length {:3}, error {:.3e} (recheck {:.3e}), {:.1} ms",
            w.t_count,
            w.letters.len(),
            w.achieved_error,
            check,
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    let w = synthesize_rz(theta, 1e-2)?;
    let word: Vec<String> = w.letters.iter().map(|l| l.to_string()).collect();
    println!("word at 1e-2: {}", word.join(" "));
    Ok(())
}
