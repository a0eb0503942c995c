//! Gate-level IR for reversible adder circuits.
//!
//! The gate set is {X, CNOT, Toffoli}: every circuit is a permutation of
//! computational basis states, so classical bit-level evaluation is an
//! exact oracle for the statevector semantics.
//!
//! Bit-order convention: index 0 is the least-significant bit of its
//! register, and textual bitstrings print index 0 leftmost.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{StateVector, QUBIT_LIMIT};

/// A reversible gate; controls come before the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    Cnot { control: usize, target: usize },
    Toffoli { controls: [usize; 2], target: usize },
}

impl Gate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::Cnot { .. } => "CNOT",
            Gate::Toffoli { .. } => "Toffoli",
        }
    }

    /// Operand indices, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], target],
        }
    }

    pub fn is_toffoli(&self) -> bool {
        matches!(self, Gate::Toffoli { .. })
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        let mut seen = HashSet::new();
        for &q in &qs {
            if q >= width {
                return Err(Error::MalformedCircuit(format!(
                    "gate {} references qubit {q} outside width {width}",
                    self.kind_name()
                )));
            }
            if !seen.insert(q) {
                return Err(Error::MalformedCircuit(format!(
                    "gate {} has duplicate operand {q}",
                    self.kind_name()
                )));
            }
        }
        Ok(())
    }

    fn from_parts(kind: &str, qubits: &[usize]) -> Result<Gate> {
        match (kind, qubits) {
            ("X", [q]) => Ok(Gate::X(*q)),
            ("CNOT", [c, t]) => Ok(Gate::Cnot {
                control: *c,
                target: *t,
            }),
            ("Toffoli", [c1, c2, t]) => Ok(Gate::Toffoli {
                controls: [*c1, *c2],
                target: *t,
            }),
            _ => Err(Error::MalformedCircuit(format!(
                "gate kind {kind:?} with {} operands",
                qubits.len()
            ))),
        }
    }
}

/// Role map over the circuit's qubit indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registers {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub z: Vec<usize>,
    pub ancilla: Vec<usize>,
}

impl Registers {
    /// Register sets must be disjoint and cover `[0, width)`.
    pub fn validate(&self, width: usize) -> Result<()> {
        let mut seen = vec![false; width];
        for &q in self
            .a
            .iter()
            .chain(&self.b)
            .chain(&self.z)
            .chain(&self.ancilla)
        {
            if q >= width {
                return Err(Error::MalformedCircuit(format!(
                    "register index {q} outside width {width}"
                )));
            }
            if seen[q] {
                return Err(Error::MalformedCircuit(format!(
                    "register index {q} appears twice"
                )));
            }
            seen[q] = true;
        }
        if let Some(q) = seen.iter().position(|covered| !covered) {
            return Err(Error::MalformedCircuit(format!(
                "qubit {q} is not assigned to any register"
            )));
        }
        Ok(())
    }

    /// Adder bit width n = |a|.
    pub fn bits(&self) -> usize {
        self.a.len()
    }

    /// Builds the circuit input for operands `a_val`, `b_val` with z and
    /// ancilla registers cleared.
    pub fn encode_input(&self, width: usize, a_val: u64, b_val: u64) -> Bitstring {
        let mut bits = Bitstring::zeros(width);
        for (i, &q) in self.a.iter().enumerate() {
            bits.set(q, a_val >> i & 1 == 1);
        }
        for (i, &q) in self.b.iter().enumerate() {
            bits.set(q, b_val >> i & 1 == 1);
        }
        bits
    }

    fn read(&self, bits: &Bitstring, reg: &[usize]) -> u64 {
        reg.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &q)| acc | (bits.get(q) as u64) << i)
    }

    /// Decodes an output bitstring into register values.
    pub fn decode_output(&self, bits: &Bitstring) -> RegisterValues {
        RegisterValues {
            a: self.read(bits, &self.a),
            b: self.read(bits, &self.b),
            z: self.read(bits, &self.z),
            ancilla_clean: self.ancilla.iter().all(|&q| !bits.get(q)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterValues {
    pub a: u64,
    pub b: u64,
    pub z: u64,
    pub ancilla_clean: bool,
}

/// Fixed-width sequence of bits; index 0 is the LSB of its register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn zeros(len: usize) -> Self {
        Bitstring(vec![false; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Bitstring(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.0[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Index of the corresponding computational basis state.
    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (b as usize) << i)
    }

    pub fn from_index(index: usize, len: usize) -> Self {
        Bitstring((0..len).map(|i| index >> i & 1 == 1).collect())
    }
}

impl fmt::Display for Bitstring {
    /// Index 0 prints leftmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidParameter(format!(
                    "bitstring has non-binary character {c:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bitstring)
    }
}

/// An ordered list of reversible gates over role-tagged registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub width: usize,
    pub registers: Registers,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, registers: Registers, gates: Vec<Gate>) -> Result<Self> {
        registers.validate(width)?;
        for g in &gates {
            g.validate(width)?;
        }
        Ok(Circuit {
            width,
            registers,
            gates,
        })
    }

    /// Applies each gate in order to a classical basis state.
    pub fn classical_eval(&self, input: &Bitstring) -> Result<Bitstring> {
        if input.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                got: input.len(),
            });
        }
        let mut bits = input.clone();
        for g in &self.gates {
            apply_classical(g, &mut bits);
        }
        Ok(bits)
    }

    /// Statevector semantics of the same permutation; basis inputs map to
    /// single-amplitude basis outputs.
    pub fn statevector_eval(&self, input: &Bitstring) -> Result<StateVector> {
        self.statevector_eval_limited(input, QUBIT_LIMIT)
    }

    pub fn statevector_eval_limited(&self, input: &Bitstring, limit: usize) -> Result<StateVector> {
        if input.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                got: input.len(),
            });
        }
        StateVector::check_limit(self.width, limit)?;
        let mut state = StateVector::basis_state(input.bits());
        for g in &self.gates {
            match *g {
                Gate::X(q) => state.apply_x(q),
                Gate::Cnot { control, target } => state.apply_cnot(control, target),
                Gate::Toffoli { controls, target } => {
                    state.apply_toffoli(controls[0], controls[1], target)
                }
            }
        }
        Ok(state)
    }

    /// All gates are self-inverse, so reversing the gate list inverts the
    /// circuit.
    pub fn invert(&self) -> Circuit {
        Circuit {
            width: self.width,
            registers: self.registers.clone(),
            gates: self.gates.iter().rev().copied().collect(),
        }
    }
}

pub fn apply_classical(gate: &Gate, bits: &mut Bitstring) {
    match *gate {
        Gate::X(q) => {
            let v = bits.get(q);
            bits.set(q, !v);
        }
        Gate::Cnot { control, target } => {
            if bits.get(control) {
                let v = bits.get(target);
                bits.set(target, !v);
            }
        }
        Gate::Toffoli { controls, target } => {
            if bits.get(controls[0]) && bits.get(controls[1]) {
                let v = bits.get(target);
                bits.set(target, !v);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON interchange format:
// { "width": int, "registers": {"a":[..],"b":[..],"z":[..],"ancilla":[..]},
//   "gates": [{"kind":"CNOT","qubits":[0,1],"round":"P1"?}, ...] }

#[derive(Serialize, Deserialize)]
struct GateRepr {
    kind: String,
    qubits: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    round: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    width: usize,
    registers: Registers,
    gates: Vec<GateRepr>,
}

impl Circuit {
    pub fn to_json(&self) -> String {
        self.to_json_with_rounds(None)
    }

    pub(crate) fn to_json_with_rounds(&self, rounds: Option<&[String]>) -> String {
        let repr = CircuitRepr {
            width: self.width,
            registers: self.registers.clone(),
            gates: self
                .gates
                .iter()
                .enumerate()
                .map(|(i, g)| GateRepr {
                    kind: g.kind_name().to_string(),
                    qubits: g.qubits(),
                    round: rounds.map(|r| r[i].clone()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("circuit serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<(Circuit, Vec<Option<String>>)> {
        let repr: CircuitRepr = serde_json::from_str(json)?;
        let mut gates = Vec::with_capacity(repr.gates.len());
        let mut rounds = Vec::with_capacity(repr.gates.len());
        for g in &repr.gates {
            gates.push(Gate::from_parts(&g.kind, &g.qubits)?);
            rounds.push(g.round.clone());
        }
        let circuit = Circuit::new(repr.width, repr.registers, gates)?;
        Ok((circuit, rounds))
    }
}
