use proptest::prelude::*;

use prepsynth::baselines::naive_prepare;
use prepsynth::cliffordt::{clear_cache, synthesize_rz};
use prepsynth::gatedecomp::{canonical_angle, ElementaryCircuit, Op};
use prepsynth::report::{from_csv, to_csv, Method, Status, SynthesisReport};
use prepsynth::terms::{state_error, CoefficientSet};

fn op_strategy() -> impl Strategy<Value = Op> {
    let q = 0usize..5;
    prop_oneof![
        q.clone().prop_map(Op::H),
        q.clone().prop_map(Op::S),
        q.clone().prop_map(Op::Sdg),
        q.clone().prop_map(Op::T),
        q.clone().prop_map(Op::Tdg),
        q.clone().prop_map(Op::X),
        q.clone().prop_map(Op::Z),
        (0usize..5, 1usize..5).prop_map(|(c, d)| Op::Cnot { control: c, target: (c + d) % 5 }),
        (0usize..5, 1usize..5).prop_map(|(a, d)| Op::Swap(a, (a + d) % 5)),
        (q.clone(), -10.0f64..10.0).prop_map(|(q, t)| Op::Rz(q, t)),
        (q, -10.0f64..10.0).prop_map(|(q, t)| Op::Ry(q, t)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn naive_prepare_is_exact(values in prop::collection::vec(1e-6f64..10.0, 1..=256)) {
        let cs = CoefficientSet::from_signed(&values).unwrap();
        let circ = naive_prepare(&cs).circuit;
        let err = state_error(&circ.simulate(cs.qubits()).unwrap(), &cs).unwrap();
        prop_assert!(err < 1e-10 * cs.lambda().max(1.0), "err {err}");
    }

    #[test]
    fn sparse_targets_prune(values in prop::collection::vec(prop_oneof![Just(0.0), 0.1f64..1.0], 2..=64)) {
        prop_assume!(values.iter().any(|v| *v > 0.0));
        let cs = CoefficientSet::from_signed(&values).unwrap();
        let circ = naive_prepare(&cs).circuit;
        let m = cs.qubits();
        prop_assert!(circ.rotation_count() < 1 << m);
        prop_assert!(state_error(&circ.simulate(m).unwrap(), &cs).unwrap() < 1e-10);
    }

    #[test]
    fn canonical_angle_range(t in -1e3f64..1e3) {
        let (r, sign) = canonical_angle(t);
        prop_assert!(r > -std::f64::consts::PI && r <= std::f64::consts::PI);
        prop_assert!(sign == 1.0 || sign == -1.0);
    }

    #[test]
    fn circuit_text_round_trips(ops in prop::collection::vec(op_strategy(), 0..40)) {
        let mut c = ElementaryCircuit::new(5);
        for op in ops {
            c.push(op);
        }
        let back = ElementaryCircuit::parse_text(&c.to_text()).unwrap();
        prop_assert_eq!(back.ops, c.ops);
        prop_assert_eq!(back.qubits, c.qubits);
    }

    #[test]
    fn report_csv_round_trips(
        terms in 1usize..10000, t in 0u64..1_000_000, err in 0.0f64..1.0, eps_t in prop::option::of(1e-9f64..0.5),
        naive in any::<bool>(), ok in any::<bool>(),
    ) {
        let r = SynthesisReport {
            method: if naive { Method::Naive } else { Method::Aqce },
            terms,
            qubits: 13,
            two_qubit_gates: terms / 3,
            rotation_count: terms,
            t_count: t,
            ancilla_count: 0,
            achieved_error: err,
            epsilon: err * 1.5,
            wall_seconds: err / 7.0,
            status: if ok { Status::Ok } else { Status::BudgetUnreachable },
            eps_t,
        };
        let back: Vec<SynthesisReport> = from_csv(&to_csv(std::slice::from_ref(&r)).unwrap()).unwrap();
        prop_assert_eq!(&back[0], &r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn rz_adjoint_symmetry(theta in 0.01f64..3.1, k in 0usize..3) {
        let eps = [1e-2, 1e-3, 1e-4][k];
        let a = synthesize_rz(theta, eps).unwrap();
        let b = synthesize_rz(-theta, eps).unwrap();
        prop_assert_eq!(a.t_count, b.t_count);
    }

    #[test]
    fn rz_is_deterministic(theta in -3.1f64..3.1) {
        let a = synthesize_rz(theta, 1e-3).unwrap();
        clear_cache();
        let b = synthesize_rz(theta, 1e-3).unwrap();
        prop_assert_eq!(a, b);
    }
}
