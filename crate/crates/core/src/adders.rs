//! Generators for the out-of-place quantum carry-lookahead adder (QCLA)
//! and the VBE ripple-carry adder.
//!
//! Both adders map |a, b, 0⟩ → |a, b, a+b⟩: the sum lands in a separate
//! (n+1)-bit z register, the inputs are left intact, and every scratch
//! ancilla is uncomputed back to 0. Gates carry round labels so the
//! compiler can box rounds on the lattice.
//!
//! The QCLA uses the standard carry-status recurrences: per-bit propagate
//! p_i = a_i⊕b_i and generate g_i = a_i∧b_i, span propagates
//! P_t[m] = P_{t-1}[2m]∧P_{t-1}[2m+1] into fresh ancillas, generate
//! accumulation whose span doubles each round, and a carry fan-back. The
//! XOR-accumulation in the G/C networks is exact because g_i and p_i are
//! never both 1. The construction is kept in unoptimized form: one fresh
//! ancilla per span value, no reuse across rounds.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Bitstring, Circuit, Gate, Registers};
use crate::error::{Error, Result};

/// Network phase of a round, in circuit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Init,
    P,
    G,
    C,
    InverseP,
    Sum,
}

impl Phase {
    fn tag(self) -> &'static str {
        match self {
            Phase::Init => "Init",
            Phase::P => "P",
            Phase::G => "G",
            Phase::C => "C",
            Phase::InverseP => "InvP",
            Phase::Sum => "Sum",
        }
    }
}

/// Round `level` within a `phase`; Init and Sum are level 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoundLabel {
    pub phase: Phase,
    pub level: u32,
}

impl RoundLabel {
    pub fn new(phase: Phase, level: u32) -> Self {
        RoundLabel { phase, level }
    }
}

impl fmt::Display for RoundLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            Phase::Init | Phase::Sum => write!(f, "{}", self.phase.tag()),
            _ => write!(f, "{}{}", self.phase.tag(), self.level),
        }
    }
}

impl FromStr for RoundLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("InvP") {
            (Phase::InverseP, r)
        } else if s == "Init" {
            return Ok(RoundLabel::new(Phase::Init, 0));
        } else if s == "Sum" {
            return Ok(RoundLabel::new(Phase::Sum, 0));
        } else if let Some(r) = s.strip_prefix('P') {
            (Phase::P, r)
        } else if let Some(r) = s.strip_prefix('G') {
            (Phase::G, r)
        } else if let Some(r) = s.strip_prefix('C') {
            (Phase::C, r)
        } else {
            return Err(Error::MalformedCircuit(format!("bad round label {s:?}")));
        };
        let level: u32 = rest
            .parse()
            .map_err(|_| Error::MalformedCircuit(format!("bad round label {s:?}")))?;
        if level == 0 {
            return Err(Error::MalformedCircuit(format!(
                "round label {s:?} has level 0"
            )));
        }
        Ok(RoundLabel::new(phase, level))
    }
}

/// A circuit with one round label per gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCircuit {
    pub circuit: Circuit,
    pub labels: Vec<RoundLabel>,
}

impl LabeledCircuit {
    pub fn new(circuit: Circuit, labels: Vec<RoundLabel>) -> Result<Self> {
        if labels.len() != circuit.gates.len() {
            return Err(Error::Contract(format!(
                "{} labels for {} gates",
                labels.len(),
                circuit.gates.len()
            )));
        }
        for pair in labels.windows(2) {
            if pair[1].phase < pair[0].phase {
                return Err(Error::Contract(format!(
                    "round labels not monotone: {} after {}",
                    pair[1], pair[0]
                )));
            }
        }
        Ok(LabeledCircuit { circuit, labels })
    }

    pub fn bits(&self) -> usize {
        self.circuit.registers.bits()
    }

    pub fn to_json(&self) -> String {
        let rounds: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        self.circuit.to_json_with_rounds(Some(&rounds))
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let (circuit, rounds) = Circuit::from_json(json)?;
        let labels = rounds
            .into_iter()
            .map(|r| {
                r.ok_or_else(|| Error::MalformedCircuit("gate is missing a round label".into()))
                    .and_then(|s| s.parse())
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledCircuit::new(circuit, labels)
    }

    /// Convenience wrapper: evaluate the adder on integer operands.
    pub fn add(&self, a: u64, b: u64) -> Result<crate::circuit::RegisterValues> {
        let input = self
            .circuit
            .registers
            .encode_input(self.circuit.width, a, b);
        let output = self.circuit.classical_eval(&input)?;
        Ok(self.circuit.registers.decode_output(&output))
    }

    pub fn encode_input(&self, a: u64, b: u64) -> Bitstring {
        self.circuit
            .registers
            .encode_input(self.circuit.width, a, b)
    }
}

struct Builder {
    gates: Vec<Gate>,
    labels: Vec<RoundLabel>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            gates: vec![],
            labels: vec![],
        }
    }

    fn cnot(&mut self, control: usize, target: usize, label: RoundLabel) {
        self.gates.push(Gate::Cnot { control, target });
        self.labels.push(label);
    }

    fn toffoli(&mut self, c1: usize, c2: usize, target: usize, label: RoundLabel) {
        self.gates.push(Gate::Toffoli {
            controls: [c1, c2],
            target,
        });
        self.labels.push(label);
    }
}

/// Largest `t ≥ 1` with `3·2^(t-1) ≤ n`, i.e. the number of carry
/// fan-back rounds; 0 when `n < 3`.
fn carry_rounds(n: usize) -> u32 {
    let mut t = 0;
    while 3usize << t <= n {
        t += 1;
    }
    t
}

/// Out-of-place carry-lookahead adder for `n`-bit operands.
///
/// Register layout: a = 0..n, b = n..2n, z = 2n..3n+1, then one ancilla
/// per span-propagate value P_t[m] (t = 1..⌊log₂n⌋, m = 0..⌊n/2^t⌋).
/// The b register temporarily holds p_i between Init and Sum; z_i holds
/// the carry c_i once the G and C networks finish.
pub fn qcla_out_of_place(n: usize) -> Result<LabeledCircuit> {
    if n == 0 {
        return Err(Error::InvalidParameter("adder bit width must be ≥ 1".into()));
    }
    let a = |i: usize| i;
    let b = |i: usize| n + i;
    let z = |i: usize| 2 * n + i;

    let levels: u32 = if n >= 2 { n.ilog2() } else { 0 };
    let mut next = 3 * n + 1;
    // spans[t-1][m] holds P_t[m]
    let mut spans: Vec<Vec<usize>> = Vec::new();
    for t in 1..=levels {
        let count = n >> t;
        spans.push(
            (0..count)
                .map(|_| {
                    let q = next;
                    next += 1;
                    q
                })
                .collect(),
        );
    }
    let width = next;
    // P_0[i] is p_i, living in the b register after Init.
    let span = |t: u32, m: usize| -> usize {
        if t == 0 {
            b(m)
        } else {
            spans[t as usize - 1][m]
        }
    };

    let mut bld = Builder::new();
    let init = RoundLabel::new(Phase::Init, 0);
    for i in 0..n {
        bld.toffoli(a(i), b(i), z(i + 1), init); // g_i
    }
    for i in 0..n {
        bld.cnot(a(i), b(i), init); // b_i ← p_i
    }

    // P network: span propagates, halving the active count each round.
    for t in 1..=levels {
        let label = RoundLabel::new(Phase::P, t);
        for m in 0..n >> t {
            bld.toffoli(span(t - 1, 2 * m), span(t - 1, 2 * m + 1), spans[t as usize - 1][m], label);
        }
    }

    // G network: carry generation, span doubling each round.
    for t in 1..=levels {
        let label = RoundLabel::new(Phase::G, t);
        let stride = 1usize << t;
        for m in 0..n >> t {
            bld.toffoli(
                z(m * stride + stride / 2),
                span(t - 1, 2 * m + 1),
                z((m + 1) * stride),
                label,
            );
        }
    }

    // C network: fan carries back down to the remaining positions.
    for t in (1..=carry_rounds(n)).rev() {
        let label = RoundLabel::new(Phase::C, t);
        let stride = 1usize << t;
        for m in 1..=(n - stride / 2) / stride {
            bld.toffoli(z(m * stride), span(t - 1, 2 * m), z(m * stride + stride / 2), label);
        }
    }

    // Uncompute the span ancillas.
    for t in (1..=levels).rev() {
        let label = RoundLabel::new(Phase::InverseP, t);
        for m in (0..n >> t).rev() {
            bld.toffoli(span(t - 1, 2 * m), span(t - 1, 2 * m + 1), spans[t as usize - 1][m], label);
        }
    }

    // Sum: z_i ⊕= p_i, then restore b.
    let sum = RoundLabel::new(Phase::Sum, 0);
    for i in 0..n {
        bld.cnot(b(i), z(i), sum);
    }
    for i in 0..n {
        bld.cnot(a(i), b(i), sum);
    }

    let registers = Registers {
        a: (0..n).collect(),
        b: (n..2 * n).collect(),
        z: (2 * n..3 * n + 1).collect(),
        ancilla: (3 * n + 1..width).collect(),
    };
    LabeledCircuit::new(Circuit::new(width, registers, bld.gates)?, bld.labels)
}

/// Out-of-place VBE ripple-carry adder for `n`-bit operands.
///
/// Register layout: a = 0..n, b = n..2n, z = 2n..3n+1, plus n−1 carry
/// ancillas holding c_1..c_{n-1} (the top carry goes straight into z_n).
/// The forward pass ripples carries up (labeled as G rounds), the sum is
/// copied into z (C round), and the return pass uncomputes the carries
/// and restores b (InverseP rounds).
pub fn vbe_ripple(n: usize) -> Result<LabeledCircuit> {
    if n == 0 {
        return Err(Error::InvalidParameter("adder bit width must be ≥ 1".into()));
    }
    let a = |i: usize| i;
    let b = |i: usize| n + i;
    let z = |i: usize| 2 * n + i;
    let width = 3 * n + 1 + n.saturating_sub(1);
    // carry_out(i) holds c_{i+1}
    let carry_out = |i: usize| if i == n - 1 { z(n) } else { 3 * n + 1 + i };

    let mut bld = Builder::new();
    for i in 0..n {
        let label = RoundLabel::new(Phase::G, i as u32 + 1);
        bld.toffoli(a(i), b(i), carry_out(i), label);
        bld.cnot(a(i), b(i), label); // b_i ← p_i
        if i > 0 {
            bld.toffoli(carry_out(i - 1), b(i), carry_out(i), label);
        }
    }

    let sum = RoundLabel::new(Phase::C, 1);
    for i in 0..n {
        bld.cnot(b(i), z(i), sum);
    }
    for i in 1..n {
        bld.cnot(carry_out(i - 1), z(i), sum);
    }

    // Return pass. The top carry block is not undone (its target is the
    // output bit z_n); only its CNOT needs reverting to restore b.
    bld.cnot(a(n - 1), b(n - 1), RoundLabel::new(Phase::InverseP, n as u32));
    for i in (0..n.saturating_sub(1)).rev() {
        let label = RoundLabel::new(Phase::InverseP, i as u32 + 1);
        if i > 0 {
            bld.toffoli(carry_out(i - 1), b(i), carry_out(i), label);
        }
        bld.cnot(a(i), b(i), label);
        bld.toffoli(a(i), b(i), carry_out(i), label);
    }

    let registers = Registers {
        a: (0..n).collect(),
        b: (n..2 * n).collect(),
        z: (2 * n..3 * n + 1).collect(),
        ancilla: (3 * n + 1..width).collect(),
    };
    LabeledCircuit::new(Circuit::new(width, registers, bld.gates)?, bld.labels)
}

/// One `(label, gate count)` entry per non-empty round, in circuit order.
pub fn round_structure(c: &LabeledCircuit) -> Result<Vec<(RoundLabel, usize)>> {
    if c.labels.len() != c.circuit.gates.len() {
        return Err(Error::Contract("circuit is not fully labeled".into()));
    }
    let mut out: Vec<(RoundLabel, usize)> = Vec::new();
    for &label in &c.labels {
        match out.last_mut() {
            Some((last, count)) if *last == label => *count += 1,
            _ => out.push((label, 1)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_sum(lc: &LabeledCircuit, a: u64, b: u64) {
        let vals = lc.add(a, b).unwrap();
        assert_eq!(vals.a, a, "a register disturbed for {a}+{b}");
        assert_eq!(vals.b, b, "b register disturbed for {a}+{b}");
        assert_eq!(vals.z, a + b, "wrong sum for {a}+{b}");
        assert!(vals.ancilla_clean, "dirty ancillas for {a}+{b}");
    }

    #[test]
    fn qcla_small_examples() {
        let lc = qcla_out_of_place(2).unwrap();
        check_sum(&lc, 3, 1); // z = 4
        let lc = qcla_out_of_place(4).unwrap();
        check_sum(&lc, 0, 0);
        let lc = qcla_out_of_place(10).unwrap();
        check_sum(&lc, 681, 342); // z = 1023
    }

    #[test]
    fn vbe_small_examples() {
        let lc = vbe_ripple(1).unwrap();
        check_sum(&lc, 1, 1); // z = 2
        let lc = vbe_ripple(3).unwrap();
        check_sum(&lc, 5, 3); // full carry ripple → 8
    }

    #[test]
    fn exhaustive_small_widths() {
        for n in 1..=4 {
            let qcla = qcla_out_of_place(n).unwrap();
            let vbe = vbe_ripple(n).unwrap();
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    check_sum(&qcla, a, b);
                    check_sum(&vbe, a, b);
                }
            }
        }
    }

    #[test]
    fn zero_width_rejected() {
        assert!(matches!(
            qcla_out_of_place(0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(vbe_ripple(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn qcla_invert_round_trip_n4() {
        let lc = qcla_out_of_place(4).unwrap();
        let inv = lc.circuit.invert();
        for a in 0..16u64 {
            for b in 0..16u64 {
                let input = lc.encode_input(a, b);
                let out = lc.circuit.classical_eval(&input).unwrap();
                let back = inv.classical_eval(&out).unwrap();
                assert_eq!(back, input);
            }
        }
    }

    #[test]
    fn qcla_statevector_matches_classical() {
        let lc = qcla_out_of_place(2).unwrap();
        let input = lc.encode_input(3, 1);
        let state = lc.circuit.statevector_eval(&input).unwrap();
        let classical = lc.circuit.classical_eval(&input).unwrap();
        let amp = state.amplitude(classical.to_index());
        assert!((amp.norm() - 1.0).abs() < 1e-12);
        assert_eq!(lc.circuit.registers.decode_output(&classical).z, 4);
    }

    #[test]
    fn p_round_counts() {
        let structure = |n: usize| {
            let lc = qcla_out_of_place(n).unwrap();
            round_structure(&lc).unwrap()
        };
        let p_rounds = |n: usize| {
            structure(n)
                .iter()
                .filter(|(l, _)| l.phase == Phase::P)
                .count()
        };
        assert_eq!(p_rounds(4), 2);
        assert_eq!(p_rounds(10), 3);
        assert_eq!(p_rounds(1), 0);
        // n = 1: only Init and Sum phases appear.
        let phases: Vec<Phase> = structure(1).iter().map(|(l, _)| l.phase).collect();
        assert!(phases.iter().all(|p| matches!(p, Phase::Init | Phase::Sum)));
    }

    #[test]
    fn p_rounds_halve_active_spans() {
        for n in [4usize, 10, 16, 33, 64] {
            let lc = qcla_out_of_place(n).unwrap();
            let p_counts: Vec<usize> = round_structure(&lc)
                .unwrap()
                .into_iter()
                .filter(|(l, _)| l.phase == Phase::P)
                .map(|(_, c)| c)
                .collect();
            let mut active = n;
            for count in p_counts {
                active /= 2;
                assert_eq!(count, active);
            }
        }
    }

    #[test]
    fn generate_and_propagate_are_mutually_exclusive() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                for i in 0..4 {
                    let g = a >> i & b >> i & 1;
                    let p = (a >> i ^ b >> i) & 1;
                    assert!(g & p == 0);
                }
            }
        }
    }

    #[test]
    fn labels_parse_and_display() {
        for s in ["Init", "P1", "G3", "C2", "InvP1", "Sum"] {
            let label: RoundLabel = s.parse().unwrap();
            assert_eq!(label.to_string(), s);
        }
        assert!("Q7".parse::<RoundLabel>().is_err());
        assert!("P0".parse::<RoundLabel>().is_err());
    }

    #[test]
    fn labeled_json_round_trip() {
        let lc = qcla_out_of_place(3).unwrap();
        let json = lc.to_json();
        let back = LabeledCircuit::from_json(&json).unwrap();
        assert_eq!(back, lc);
    }
}
