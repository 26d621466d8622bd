pub mod diophantine;
pub mod exact;
pub mod grid;
pub mod lower;
pub mod ring;
pub mod synth;

pub use exact::Letter;
pub use synth::{clear_cache, phase_distance, synthesize_rz, CliffordTWord, SUPPORTED_FLOOR};
pub use lower::{calibrate_eps_t, lower_circuit, probe, Probe, SynthesisBudget};
