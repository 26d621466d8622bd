use prepsynth::baselines::naive_prepare;
use prepsynth::cliffordt::{calibrate_eps_t, lower_circuit, probe, SynthesisBudget};
use prepsynth::error::Error;
use prepsynth::gatedecomp::{ElementaryCircuit, Op};
use prepsynth::instances::{generate, Decay};
use prepsynth::pipeline::{run_pipeline, PipelineConfig};
use prepsynth::report::Method;
use prepsynth::terms::{state_error, CoefficientSet};

fn instance(l: usize, seed: u64) -> CoefficientSet {
    CoefficientSet::from_signed(&generate(l, seed, Decay::Power(1.5)).unwrap()).unwrap()
}

#[test]
fn zero_rotations_return_bracket_top() {
    let cs = CoefficientSet::from_signed(&[1.0]).unwrap();
    let circ = ElementaryCircuit::new(1);
    let (b, p) = calibrate_eps_t(&circ, &cs, &SynthesisBudget::new(1e-3)).unwrap();
    assert_eq!(b.epsilon_t, b.search_hi);
    assert_eq!(p.t_count, 0);
}

#[test]
fn huge_budget_passes_coarsest_probe() {
    let cs = instance(16, 1);
    let prep = naive_prepare(&cs);
    let budget = SynthesisBudget::new(10.0 * cs.lambda());
    let (b, _) = calibrate_eps_t(&prep.circuit, &cs, &budget).unwrap();
    assert_eq!(b.epsilon_t, 0.5);
}

#[test]
fn unreachable_budget_is_an_error() {
    let cs = instance(16, 2);
    let mut circ = naive_prepare(&cs).circuit;
    // Spoil the exact circuit so no ε_T can recover it.
    circ.push(Op::Ry(0, 0.3));
    let err = calibrate_eps_t(&circ, &cs, &SynthesisBudget { iterations: 4, ..SynthesisBudget::new(1e-6) }).unwrap_err();
    assert!(matches!(err, Error::BudgetUnreachable { .. }), "{err}");
}

#[test]
fn bad_bracket_rejected() {
    let cs = instance(4, 3);
    let circ = naive_prepare(&cs).circuit;
    let budget = SynthesisBudget { search_lo: 0.5, search_hi: 0.1, ..SynthesisBudget::new(1e-3) };
    assert!(calibrate_eps_t(&circ, &cs, &budget).is_err());
}

/// The returned ε_T passes on a fresh re-simulation. Doubling it usually
/// fails, but pass/fail is not monotone in ε_T (a looser tolerance can pick
/// different words whose errors happen to cancel), so the doubled probe is
/// only counted, not required to fail.
#[test]
fn calibrated_eps_t_is_tight() {
    let mut doubled_fail = 0;
    for seed in 0..5 {
        let cs = instance(16, seed);
        let run = run_pipeline(&cs, &PipelineConfig::new(Method::Aqce, 1e-3, 16)).unwrap();
        let eps_t = run.report.eps_t.unwrap();
        let (low, _) = lower_circuit(&run.rotations, eps_t).unwrap();
        assert!(state_error(&low.simulate(4).unwrap(), &cs).unwrap() <= 1e-3);
        let up = probe(&run.rotations, &cs, 2.0 * eps_t).unwrap();
        if up.error > 1e-3 || 2.0 * eps_t >= 0.5 {
            doubled_fail += 1;
        }
    }
    assert!(doubled_fail >= 4, "2*eps_t failed only {doubled_fail}/5 times");
}

#[test]
fn lowering_error_within_triangle_bound() {
    let cs = instance(8, 9);
    let circ = naive_prepare(&cs).circuit;
    for eps_t in [1e-2, 1e-3, 1e-4] {
        let (low, t) = lower_circuit(&circ, eps_t).unwrap();
        assert_eq!(low.rotation_count(), 0);
        assert_eq!(low.t_count(), t);
        let a = circ.simulate(3).unwrap();
        let b = low.simulate(3).unwrap();
        let fid = a.inner(&b).unwrap().norm();
        let dist = (2.0 - 2.0 * fid).max(0.0).sqrt();
        assert!(dist <= circ.rotation_count() as f64 * eps_t, "{dist} at {eps_t}");
    }
}
