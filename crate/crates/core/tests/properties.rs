//! Randomized invariants, checked with proptest.

use proptest::prelude::*;

use mbqc_adders::adders::{qcla_out_of_place, round_structure, vbe_ripple, Phase};
use mbqc_adders::circuit::{Bitstring, Circuit, Gate, Registers};

fn arb_gate(width: usize) -> impl Strategy<Value = Gate> {
    let q = 0..width;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        (0..width, 0..width)
            .prop_filter("distinct", |(c, t)| c != t)
            .prop_map(|(c, t)| Gate::Cnot { control: c, target: t }),
        (0..width, 0..width, 0..width)
            .prop_filter("distinct", |(a, b, t)| a != b && a != t && b != t)
            .prop_map(|(a, b, t)| Gate::Toffoli { controls: [a, b], target: t }),
    ]
}

fn arb_circuit(width: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(arb_gate(width), 0..24).prop_map(move |gates| {
        let regs = Registers {
            a: vec![],
            b: vec![],
            z: vec![],
            ancilla: (0..width).collect(),
        };
        Circuit::new(width, regs, gates).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_circuit(c in arb_circuit(5), input in 0usize..32) {
        let bits = Bitstring::from_index(input, 5);
        let forward = c.classical_eval(&bits).unwrap();
        let back = c.invert().classical_eval(&forward).unwrap();
        prop_assert_eq!(back, bits);
    }

    #[test]
    fn classical_and_statevector_agree(c in arb_circuit(5), input in 0usize..32) {
        let bits = Bitstring::from_index(input, 5);
        let classical = c.classical_eval(&bits).unwrap();
        let state = c.statevector_eval(&bits).unwrap();
        prop_assert!((state.amplitude(classical.to_index()).norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bitstring_text_roundtrip(value in 0usize..1024, width in 10usize..16) {
        let bits = Bitstring::from_index(value, width);
        let parsed: Bitstring = bits.to_string().parse().unwrap();
        prop_assert_eq!(parsed, bits);
    }

    #[test]
    fn adders_agree_on_random_sums(n in 1usize..=12, seed in any::<u64>()) {
        let a = seed % (1 << n);
        let b = (seed >> 12) % (1 << n);
        let q = qcla_out_of_place(n).unwrap().add(a, b).unwrap();
        let v = vbe_ripple(n).unwrap().add(a, b).unwrap();
        prop_assert_eq!(q.z, a + b);
        prop_assert_eq!(v.z, a + b);
        prop_assert!(q.ancilla_clean && v.ancilla_clean);
    }

    #[test]
    fn propagate_spans_halve_each_round(n in 2usize..=64) {
        let lc = qcla_out_of_place(n).unwrap();
        let rounds = round_structure(&lc).unwrap();
        let p_counts: Vec<usize> = rounds
            .iter()
            .filter(|(label, _)| label.phase == Phase::P && label.level >= 1)
            .map(|(_, count)| *count)
            .collect();
        prop_assert_eq!(p_counts.len() as u32, (n as u64).ilog2());
        for (t, count) in p_counts.iter().enumerate() {
            prop_assert_eq!(*count, n >> (t + 1));
        }
    }
}
