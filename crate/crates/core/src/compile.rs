//! Placement and scheduling on the 2D Manhattan lattice.
//!
//! Logical qubits become horizontal rails spaced at a pitch of four
//! lattice rows. Gates are layered greedily as soon as possible with
//! gate-order dependence only: two gates share a round iff their qubit
//! supports are disjoint. A round of Clifford gates (X, CNOT) consumes
//! one MBQC time step; a round containing a Toffoli consumes two, and
//! Toffoli rounds are not mixed with Clifford gates. Long-distance gates
//! cost nothing extra because wires and swaps are free within a round.
//!
//! Site accounting: each time step consumes a band of 4 columns per the
//! lattice pitch, so total sites = height × (4 × total steps). The
//! closed-form totals in [`crate::resources`] remain the authority for
//! the published comparison; the reconciliation report prints both.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::adders::{LabeledCircuit, RoundLabel};
use crate::circuit::Gate;
use crate::error::{Error, Result};

/// Lattice rows between adjacent logical rails.
pub const PITCH: usize = 4;
/// Columns consumed per MBQC time step.
pub const STEP_BAND: usize = 4;

fn circuit_signature(c: &LabeledCircuit) -> u64 {
    let mut h = DefaultHasher::new();
    c.circuit.width.hash(&mut h);
    c.circuit.gates.hash(&mut h);
    h.finish()
}

/// One boxed generator round on the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundBox {
    pub label: RoundLabel,
    /// Columns `[col_start, col_end)` occupied by the box.
    pub col_start: usize,
    pub col_end: usize,
    /// MBQC steps that the round consumes (1 or 2).
    pub steps: usize,
    /// Logical qubits touched by gates in this round.
    pub qubits: Vec<usize>,
}

/// Rails, boxes, and lattice extent for one circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// Adder operand width n.
    pub bits: usize,
    pub logical_qubits: usize,
    /// Lattice rows: 4·(Q−1)+1.
    pub height: usize,
    /// Total columns over all round boxes (min 1 so a bare rail exists).
    pub columns: usize,
    pub boxes: Vec<RoundBox>,
    signature: u64,
}

impl Layout {
    /// Lattice row of a logical qubit's rail.
    pub fn rail_row(&self, qubit: usize) -> usize {
        PITCH * qubit
    }
}

/// One scheduled round: gates with pairwise disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledRound {
    pub gates: Vec<Gate>,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub rounds: Vec<ScheduledRound>,
    pub total_steps: usize,
    signature: u64,
}

impl Schedule {
    /// Gates flattened back out in round order.
    pub fn flatten(&self) -> Vec<Gate> {
        self.rounds.iter().flat_map(|r| r.gates.clone()).collect()
    }
}

/// Physical resource totals for one compiled circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceEstimate {
    pub n: usize,
    pub logical_qubits: usize,
    pub lattice_sites: u64,
    pub mbqc_depth: u64,
}

/// Places a labeled circuit: one rail per logical qubit at pitch 4, one
/// box per generator round ordered left to right.
pub fn place(c: &LabeledCircuit) -> Result<Layout> {
    if c.labels.len() != c.circuit.gates.len() {
        return Err(Error::Contract("circuit is not fully labeled".into()));
    }
    let q = c.circuit.width;
    if q == 0 {
        return Err(Error::Contract("cannot place a zero-qubit circuit".into()));
    }
    let mut boxes: Vec<RoundBox> = Vec::new();
    let mut col = 0usize;
    let mut i = 0;
    while i < c.circuit.gates.len() {
        let label = c.labels[i];
        let mut j = i;
        let mut has_toffoli = false;
        let mut qubits: Vec<usize> = Vec::new();
        while j < c.circuit.gates.len() && c.labels[j] == label {
            has_toffoli |= c.circuit.gates[j].is_toffoli();
            qubits.extend(c.circuit.gates[j].qubits());
            j += 1;
        }
        qubits.sort_unstable();
        qubits.dedup();
        let steps = if has_toffoli { 2 } else { 1 };
        let width = STEP_BAND * steps;
        boxes.push(RoundBox {
            label,
            col_start: col,
            col_end: col + width,
            steps,
            qubits,
        });
        col += width;
        i = j;
    }
    Ok(Layout {
        bits: c.bits(),
        logical_qubits: q,
        height: PITCH * (q - 1) + 1,
        columns: col.max(1),
        boxes,
        signature: circuit_signature(c),
    })
}

/// Greedy as-soon-as-possible layering with gate-order dependence only.
pub fn schedule(c: &LabeledCircuit) -> Schedule {
    struct Layer {
        toffoli: bool,
        support: Vec<u64>,
        gates: Vec<Gate>,
    }
    let words = c.circuit.width.div_ceil(64);
    let mask_of = |gate: &Gate| {
        let mut m = vec![0u64; words];
        for q in gate.qubits() {
            m[q / 64] |= 1 << (q % 64);
        }
        m
    };
    let overlaps =
        |a: &[u64], b: &[u64]| a.iter().zip(b).any(|(x, y)| x & y != 0);

    let mut layers: Vec<Layer> = Vec::new();
    for gate in &c.circuit.gates {
        let mask = mask_of(gate);
        let toffoli = gate.is_toffoli();
        // deepest earlier layer whose support intersects this gate
        let dep = layers
            .iter()
            .rposition(|l| overlaps(&l.support, &mask))
            .map(|i| i as isize)
            .unwrap_or(-1);
        let slot = layers
            .iter()
            .enumerate()
            .skip((dep + 1) as usize)
            .find(|(_, l)| l.toffoli == toffoli)
            .map(|(i, _)| i);
        match slot {
            Some(i) => {
                for (w, m) in layers[i].support.iter_mut().zip(&mask) {
                    *w |= m;
                }
                layers[i].gates.push(*gate);
            }
            None => layers.push(Layer {
                toffoli,
                support: mask,
                gates: vec![*gate],
            }),
        }
    }
    let rounds: Vec<ScheduledRound> = layers
        .into_iter()
        .map(|l| ScheduledRound {
            steps: if l.toffoli { 2 } else { 1 },
            gates: l.gates,
        })
        .collect();
    let total_steps = rounds.iter().map(|r| r.steps).sum();
    Schedule {
        rounds,
        total_steps,
        signature: circuit_signature(c),
    }
}

/// Combines a layout and schedule of the same circuit into site/depth
/// totals.
pub fn count_resources(layout: &Layout, sched: &Schedule) -> Result<ResourceEstimate> {
    if layout.signature != sched.signature {
        return Err(Error::Contract(
            "layout and schedule derive from different circuits".into(),
        ));
    }
    let columns = (STEP_BAND * sched.total_steps).max(1) as u64;
    Ok(ResourceEstimate {
        n: layout.bits,
        logical_qubits: layout.logical_qubits,
        lattice_sites: layout.height as u64 * columns,
        mbqc_depth: sched.total_steps as u64,
    })
}

/// Compiles a labeled circuit end to end.
pub fn compile(c: &LabeledCircuit) -> Result<(Layout, Schedule, ResourceEstimate)> {
    let layout = place(c)?;
    let sched = schedule(c);
    let estimate = count_resources(&layout, &sched)?;
    Ok((layout, sched, estimate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            other => Err(Error::Usage(format!("unsupported format {other:?}"))),
        }
    }
}

/// Renders a layout deterministically. Rails are rows, round boxes are
/// labeled column bands, and the first a-register qubit's propagation
/// path is highlighted (rail 0).
pub fn render_layout(layout: &Layout, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(layout),
        RenderFormat::Svg => render_svg(layout),
    }
}

const HIGHLIGHT_QUBIT: usize = 0;

fn render_ascii(layout: &Layout) -> String {
    let mut out = String::new();
    let total_width: usize = layout.columns + layout.boxes.len() + 1;

    // Header: round labels at their box start columns.
    let mut header = vec![' '; total_width];
    let mut border = vec!['-'; total_width];
    border[0] = '+';
    {
        let mut x = 1;
        for b in &layout.boxes {
            let label = b.label.to_string();
            for (k, ch) in label.chars().enumerate() {
                if x + k < total_width {
                    header[x + k] = ch;
                }
            }
            x += b.col_end - b.col_start;
            if x < total_width {
                border[x] = '+';
            }
            x += 1;
        }
        if layout.boxes.is_empty() {
            border[total_width - 1] = '+';
        }
    }
    out.push_str(&header.iter().collect::<String>());
    out.push('\n');
    out.push_str(&border.iter().collect::<String>());
    out.push('\n');

    for row in 0..layout.height {
        let on_rail = row % PITCH == 0;
        let qubit = row / PITCH;
        let mut line = String::with_capacity(total_width);
        line.push('|');
        if layout.boxes.is_empty() {
            for _ in 0..layout.columns {
                line.push(if on_rail { '-' } else { '·' });
            }
            line.push('|');
        } else {
            for b in &layout.boxes {
                for _ in b.col_start..b.col_end {
                    let ch = if !on_rail {
                        '·'
                    } else if b.qubits.contains(&qubit) {
                        '#'
                    } else if qubit == HIGHLIGHT_QUBIT {
                        '*'
                    } else {
                        '-'
                    };
                    line.push(ch);
                }
                line.push('|');
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    let mut bottom = vec!['-'; total_width];
    bottom[0] = '+';
    {
        let mut x = 1;
        for b in &layout.boxes {
            x += b.col_end - b.col_start;
            if x < total_width {
                bottom[x] = '+';
            }
            x += 1;
        }
        if layout.boxes.is_empty() {
            bottom[total_width - 1] = '+';
        }
    }
    out.push_str(&bottom.iter().collect::<String>());
    out.push('\n');
    out
}

fn render_svg(layout: &Layout) -> String {
    const CELL: usize = 10;
    let width = layout.columns * CELL + 2 * CELL;
    let height = layout.height * CELL + 3 * CELL;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str("  <style>text{font-family:monospace;font-size:8px}</style>\n");
    let ox = CELL;
    let oy = 2 * CELL;
    for b in &layout.boxes {
        let x = ox + b.col_start * CELL;
        let w = (b.col_end - b.col_start) * CELL;
        let h = layout.height * CELL;
        out.push_str(&format!(
            "  <rect x=\"{x}\" y=\"{oy}\" width=\"{w}\" height=\"{h}\" \
             fill=\"none\" stroke=\"black\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{x}\" y=\"{}\">{}</text>\n",
            oy - 4,
            b.label
        ));
    }
    for qubit in 0..layout.logical_qubits {
        let y = oy + layout.rail_row(qubit) * CELL + CELL / 2;
        let color = if qubit == HIGHLIGHT_QUBIT {
            "gold"
        } else {
            "black"
        };
        out.push_str(&format!(
            "  <line x1=\"{ox}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\"/>\n",
            ox + layout.columns * CELL
        ));
    }
    for b in &layout.boxes {
        for &q in &b.qubits {
            let x = ox + b.col_start * CELL;
            let y = oy + layout.rail_row(q) * CELL;
            let w = (b.col_end - b.col_start) * CELL;
            out.push_str(&format!(
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{CELL}\" \
                 fill=\"steelblue\" fill-opacity=\"0.35\" stroke=\"none\"/>\n"
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Plain-text reconciliation table: one row per quantity, measured vs
/// closed-form with delta.
pub fn reconciliation_report(rows: &[(String, i64, i64)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} {:>12} {:>12} {:>12}\n",
        "quantity", "measured", "closed-form", "delta"
    ));
    for (name, measured, closed) in rows {
        out.push_str(&format!(
            "{:<28} {:>12} {:>12} {:>12}\n",
            name,
            measured,
            closed,
            measured - closed
        ));
    }
    out
}
