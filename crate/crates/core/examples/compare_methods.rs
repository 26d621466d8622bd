//! AQCE against the multiplexed baseline on growing synthetic instances,
//! written as CSV report rows.
//!
//! cargo run --release --example compare_methods -- [epsilon]

use prepsynth::instances::{generate, Decay};
use prepsynth::pipeline::{run_pipeline, PipelineConfig};
use prepsynth::report::{to_csv, Method};
use prepsynth::terms::CoefficientSet;

fn main() -> prepsynth::Result<()> {
    let epsilon: f64 = std::env::args().nth(1).map_or(Ok(1e-3), |a| a.parse()).expect("epsilon must be a number");
    let mut rows = Vec::new();
    for l in [16, 64, 184] {
        let cs = CoefficientSet::from_signed(&generate(l, 1, Decay::Power(1.5))?)?;
        for method in [Method::Aqce, Method::Naive] {
            let run = run_pipeline(&cs, &PipelineConfig::new(method, epsilon, l))?;
            eprintln!("L={l} {method}: T={} in {:.1}s", run.report.t_count, run.report.wall_seconds);
            rows.push(run.report);
        }
    }
    print!("{}", to_csv(&rows)?);
    Ok(())
}
