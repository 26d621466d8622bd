//! PREPARE for the 14-term H2 Hamiltonian at chemical accuracy: AQCE, the
//! multiplexed-Ry baseline and the QROM cost model side by side.
//!
//! cargo run --release --example prepare_h2

use prepsynth::baselines::{qrom_cost, DEFAULT_G_T};
use prepsynth::pipeline::{run_pipeline, PipelineConfig};
use prepsynth::report::{to_csv, Method};
use prepsynth::terms::{epsilon_budget, load_terms, TermsFormat};

fn main() -> prepsynth::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/h2_sto3g.txt");
    let cs = load_terms(path, TermsFormat::PauliTerms)?;
    let delta_e = 0.0016;
    let epsilon = epsilon_budget(&cs, delta_e);
    println!("L = {}, m = {}, lambda = {:.6}, epsilon = {:.3e}", cs.len(), cs.qubits(), cs.lambda(), epsilon);

    let mut rows = Vec::new();
    for method in [Method::Aqce, Method::Naive] {
        let run = run_pipeline(&cs, &PipelineConfig::new(method, epsilon, cs.len()))?;
        rows.push(run.report);
    }
    print!("{}", to_csv(&rows)?);

    let q = qrom_cost(&cs, delta_e, DEFAULT_G_T)?;
    println!("qrom-model: mu = {}, T = {}, ancilla = {}, work qubits = {}", q.mu, q.t_count, q.ancilla_count, q.work_qubits);
    Ok(())
}
