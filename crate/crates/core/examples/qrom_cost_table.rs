//! The QROM-based PREPARE cost model: what each molecule's ancilla count
//! implies for the keep-register width and the λ range consistent with it.
//!
//! cargo run --example qrom_cost_table

use prepsynth::baselines::{lambda_interval_for_mu, QromCostModel, DEFAULT_G_T};
use prepsynth::terms::qubits_for_terms;

fn main() {
    let rows = [
        ("H2", 14, 47),
        ("H4", 184, 55),
        ("H6", 918, 59),
        ("H8", 2912, 63),
        ("H10", 7150, 66),
        ("LiH", 630, 57),
        ("H2O", 1085, 64),
        ("NH3", 3056, 65),
        ("CH4", 2211, 63),
        ("CO", 4426, 68),
        ("H2S", 6245, 70),
        ("C2H2", 5184, 66),
    ];
    println!("{:5} {:>5} {:>3} {:>3} {:>7} {:>4} {:>17}", "mol", "L", "m", "mu", "T", "Na", "lambda range");
    for (name, l, anc) in rows {
        let m = qubits_for_terms(l) as u64;
        let mu = (anc - m - 1) / 2;
        let model = QromCostModel::from_parts(l as u64, m, mu, DEFAULT_G_T);
        let (lo, hi) = lambda_interval_for_mu(mu, 0.0016);
        println!(
            "{name:5} {l:5} {m:3} {mu:3} {:7} {:4} ({lo:7.2}, {hi:7.2}]",
            model.t_count, model.ancilla_count
        );
    }
}
