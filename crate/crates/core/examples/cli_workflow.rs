//! The `prepsynth` subcommands driven in-process: generate an instance,
//! synthesize, verify the emitted circuit and time the stages.
//!
//! cargo run --release --example cli_workflow

use prepsynth::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("prepsynth-cli-workflow");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let steps: [Vec<String>; 4] = [
        ["gen", "--L", "32", "--seed", "5", "--decay", "lognormal:1", "--out", &p("terms.txt")].map(String::from).to_vec(),
        ["synth", "--terms", &p("terms.txt"), "--epsilon", "1e-3", "--emit-circuit", &p("circuit.txt"), "--report", &p("report.csv")]
            .map(String::from)
            .to_vec(),
        ["verify", "--circuit", &p("circuit.txt"), "--terms", &p("terms.txt"), "--epsilon", "1e-3"].map(String::from).to_vec(),
        ["bench", "--terms", &p("terms.txt"), "--epsilon", "1e-3", "--method", "naive"].map(String::from).to_vec(),
    ];
    for args in steps {
        println!("$ prepsynth {}", args.join(" "));
        let code = run(std::iter::once("prepsynth".to_string()).chain(args));
        println!("exit {code}\n");
        if code != 0 {
            std::process::exit(code);
        }
    }
}
