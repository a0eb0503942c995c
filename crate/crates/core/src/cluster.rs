//! Cluster states, stabilizer verification, and measurement patterns.
//!
//! Clusters are built with controlled-phase (CZ) entangling operations on
//! all-|+⟩ inputs; a per-site sign bit k_a folds in as a local Z. Every
//! site's correlation operator (X on the site, Z on each lattice
//! neighbor) then stabilizes the state with eigenvalue (−1)^{k_a}.
//!
//! Pattern execution consumes measured sites one by one, tracking the
//! random Pauli byproducts in a classical frame so that the corrected
//! output is independent of the measurement outcomes. Clifford patterns
//! (wire, Hadamard, CNOT) need a single round; the Toffoli phase gate
//! (CCZ) needs two, with the second round's bases chosen from the first
//! round's outcomes.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Basis, StateVector, QUBIT_LIMIT};

pub type Site = usize;

/// Vertices, CZ edges, and per-vertex sign bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphState {
    vertices: BTreeSet<Site>,
    edges: BTreeSet<(Site, Site)>,
    k: BTreeMap<Site, u8>,
}

impl GraphState {
    pub fn new() -> Self {
        GraphState {
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
            k: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, v: Site) {
        self.vertices.insert(v);
        self.k.entry(v).or_insert(0);
    }

    pub fn set_sign(&mut self, v: Site, k: u8) {
        self.add_vertex(v);
        self.k.insert(v, k & 1);
    }

    pub fn add_edge(&mut self, u: Site, v: Site) -> Result<()> {
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at site {u}")));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Site> + '_ {
        self.vertices.iter().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        self.edges.iter().copied()
    }

    pub fn sign(&self, v: Site) -> u8 {
        self.k.get(&v).copied().unwrap_or(0)
    }

    pub fn neighbors(&self, v: Site) -> Vec<Site> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Dense qubit index of each vertex, in sorted site order.
    pub fn qubit_index(&self, v: Site) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }
}

impl Default for GraphState {
    fn default() -> Self {
        Self::new()
    }
}

/// Correlation (stabilizer) operator of a site: `site_axis` on the site,
/// `neighbor_axis` on each of its neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationOperator {
    pub site: Site,
    pub site_axis: char,
    pub neighbor_axis: char,
    pub support: Vec<Site>,
}

impl CorrelationOperator {
    pub fn standard(g: &GraphState, site: Site) -> Result<Self> {
        if !g.vertices.contains(&site) {
            return Err(Error::InvalidParameter(format!("site {site} not in graph")));
        }
        let mut support = vec![site];
        support.extend(g.neighbors(site));
        Ok(CorrelationOperator {
            site,
            site_axis: 'x',
            neighbor_axis: 'z',
            support,
        })
    }
}

/// Builds the cluster state: |+⟩ on every vertex, CZ per edge, local Z
/// where k_a = 1.
pub fn build_cluster(g: &GraphState) -> Result<StateVector> {
    build_cluster_limited(g, QUBIT_LIMIT)
}

pub fn build_cluster_limited(g: &GraphState, limit: usize) -> Result<StateVector> {
    StateVector::check_limit(g.num_vertices(), limit)?;
    let mut state = StateVector::plus_state(g.num_vertices());
    for (u, v) in g.edges() {
        state.apply_cz(g.qubit_index(u).unwrap(), g.qubit_index(v).unwrap());
    }
    for v in g.vertices() {
        if g.sign(v) == 1 {
            state.apply_z(g.qubit_index(v).unwrap());
        }
    }
    state.normalize();
    Ok(state)
}

/// Checks whether `state` is an eigenstate of the site's correlation
/// operator; returns the signed eigenvalue, or `None` when it is not an
/// eigenstate within tolerance 1e-10.
pub fn verify_correlation(
    state: &StateVector,
    g: &GraphState,
    site: Site,
) -> Result<Option<i8>> {
    if state.num_qubits() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            state_qubits: state.num_qubits(),
            graph_vertices: g.num_vertices(),
        });
    }
    let op = CorrelationOperator::standard(g, site)?;
    let mut applied = state.clone();
    applied.apply_x(g.qubit_index(op.site).unwrap());
    for &nb in &op.support[1..] {
        applied.apply_z(g.qubit_index(nb).unwrap());
    }
    let overlap = state.inner(&applied);
    for eig in [1.0f64, -1.0] {
        if (overlap.re - eig).abs() < 1e-10 && overlap.im.abs() < 1e-10 {
            // eigenstate check: ‖K|ψ⟩ − λ|ψ⟩‖ must vanish too
            let deviation: f64 = applied
                .amps()
                .iter()
                .zip(state.amps())
                .map(|(ka, sa)| (ka - sa * eig).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if deviation < 1e-10 {
                return Ok(Some(if eig > 0.0 { 1 } else { -1 }));
            }
        }
    }
    Ok(None)
}

/// How a site's basis is chosen at measurement time.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisRule {
    Fixed(Basis),
    /// XY-plane measurement at `angle·(−1)^s` where `s` is the XOR of the
    /// listed earlier-round outcomes.
    AdaptiveXy { angle: f64, flip_sign_on: Vec<Site> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteRule {
    pub site: Site,
    pub round: u32,
    pub rule: BasisRule,
}

/// Byproduct dependencies of one output site: its Pauli-frame exponents
/// are XORs of the listed measurement outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByproductRule {
    pub site: Site,
    #[serde(default)]
    pub x_from: Vec<Site>,
    #[serde(default)]
    pub z_from: Vec<Site>,
}

/// Measurement pattern over a graph-state region.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPattern {
    pub sites: Vec<SiteRule>,
    pub inputs: Vec<Site>,
    pub outputs: Vec<Site>,
    pub byproducts: Vec<ByproductRule>,
}

impl MeasurementPattern {
    pub fn rounds(&self) -> u32 {
        self.sites.iter().map(|s| s.round).max().unwrap_or(0)
    }

    pub fn measured_sites(&self) -> Vec<Site> {
        let mut sites: Vec<(u32, Site)> =
            self.sites.iter().map(|s| (s.round, s.site)).collect();
        sites.sort();
        sites.into_iter().map(|(_, s)| s).collect()
    }

    /// Round indices contiguous from 1; adaptive rules may only reference
    /// strictly earlier rounds.
    pub fn validate(&self) -> Result<()> {
        let rounds: BTreeSet<u32> = self.sites.iter().map(|s| s.round).collect();
        let expected: BTreeSet<u32> = (1..=self.rounds()).collect();
        if rounds != expected {
            return Err(Error::Contract("round indices not contiguous from 1".into()));
        }
        let round_of: BTreeMap<Site, u32> =
            self.sites.iter().map(|s| (s.site, s.round)).collect();
        for s in &self.sites {
            if let BasisRule::AdaptiveXy { flip_sign_on, .. } = &s.rule {
                for dep in flip_sign_on {
                    match round_of.get(dep) {
                        Some(&r) if r < s.round => {}
                        _ => {
                            return Err(Error::Contract(format!(
                                "site {} adapts on site {dep}, which is not in an earlier round",
                                s.site
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Pauli frame over pattern outputs; exponents are in {0, 1} and compose
/// by addition mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    /// `(x_exponent, z_exponent)` per output qubit, in output order.
    pub exponents: Vec<(u8, u8)>,
}

impl PauliFrame {
    pub fn identity(outputs: usize) -> Self {
        PauliFrame {
            exponents: vec![(0, 0); outputs],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&(x, z)| x == 0 && z == 0)
    }

    /// Applies the frame correction X^x Z^z to each output qubit.
    pub fn apply_correction(&self, state: &mut StateVector) {
        for (q, &(x, z)) in self.exponents.iter().enumerate() {
            if z == 1 {
                state.apply_z(q);
            }
            if x == 1 {
                state.apply_x(q);
            }
        }
    }
}

/// Where measurement outcomes come from.
#[derive(Debug, Clone)]
pub enum OutcomeSource {
    /// Born-rule sampling from a seeded PRNG (ChaCha8).
    Seeded(u64),
    /// Forced outcomes for the measured sites, in round-then-site order.
    Forced(Vec<u8>),
}

/// One pattern execution over a graph region; also usable for bare
/// site-by-site measurement.
pub struct ClusterRun {
    state: StateVector,
    /// site → current qubit position, for unmeasured sites
    positions: BTreeMap<Site, usize>,
    outcomes: BTreeMap<Site, u8>,
    rng: ChaCha8Rng,
}

impl ClusterRun {
    /// Starts from the bare cluster state of `g`.
    pub fn from_graph(g: &GraphState) -> Result<Self> {
        let state = build_cluster(g)?;
        Ok(ClusterRun {
            state,
            positions: g.vertices().enumerate().map(|(i, v)| (v, i)).collect(),
            outcomes: BTreeMap::new(),
            rng: ChaCha8Rng::seed_from_u64(0),
        })
    }

    /// Starts from `g` with `input` placed on the `inputs` sites (in
    /// order) instead of |+⟩; all other sites start in |+⟩ and all CZ
    /// edges are applied.
    pub fn with_input(g: &GraphState, inputs: &[Site], input: &StateVector) -> Result<Self> {
        if input.num_qubits() != inputs.len() {
            return Err(Error::DimensionMismatch {
                state_qubits: input.num_qubits(),
                graph_vertices: inputs.len(),
            });
        }
        StateVector::check_limit(g.num_vertices(), QUBIT_LIMIT)?;
        for s in inputs {
            if !g.vertices.contains(s) {
                return Err(Error::Contract(format!("input site {s} not in graph")));
            }
        }
        // Tensor the input with |+⟩ on the rest, then permute qubits into
        // sorted site order.
        let rest: Vec<Site> = g.vertices().filter(|v| !inputs.contains(v)).collect();
        let mut state = input.clone();
        state.tensor_plus(rest.len());
        // qubit j of `state` currently holds: inputs[j] for j < inputs.len(),
        // rest[j - inputs.len()] otherwise.
        let site_of_qubit: Vec<Site> = inputs.iter().chain(rest.iter()).copied().collect();
        let sorted: Vec<Site> = g.vertices().collect();
        let perm: Vec<usize> = sorted
            .iter()
            .map(|s| site_of_qubit.iter().position(|t| t == s).unwrap())
            .collect();
        state.permute(&perm);
        for (u, v) in g.edges() {
            state.apply_cz(g.qubit_index(u).unwrap(), g.qubit_index(v).unwrap());
        }
        for v in g.vertices() {
            if g.sign(v) == 1 {
                state.apply_z(g.qubit_index(v).unwrap());
            }
        }
        Ok(ClusterRun {
            state,
            positions: sorted.into_iter().enumerate().map(|(i, v)| (v, i)).collect(),
            outcomes: BTreeMap::new(),
            rng: ChaCha8Rng::seed_from_u64(0),
        })
    }

    pub fn seed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn outcome(&self, site: Site) -> Option<u8> {
        self.outcomes.get(&site). copied()
    }

    /// Measures one site and removes it from the active set.
    pub fn measure_site(&mut self, site: Site, basis: Basis, forced: Option<u8>) -> Result<u8> {
        let &pos = self
            .positions
            .get(&site)
            .ok_or(Error::AlreadyMeasured(site))?;
        let (outcome, _prob) = self
            .state
            .measure_remove(pos, basis, forced, &mut self.rng)
            .map_err(|e| match e {
                Error::ImpossibleBranch { outcome, .. } => {
                    Error::ImpossibleBranch { site, outcome }
                }
                other => other,
            })?;
        self.positions.remove(&site);
        for p in self.positions.values_mut() {
            if *p > pos {
                *p -= 1;
            }
        }
        self.outcomes.insert(site, outcome);
        Ok(outcome)
    }

    /// Extracts the remaining state with qubits reordered to `outputs`.
    fn extract_outputs(mut self, outputs: &[Site]) -> Result<StateVector> {
        if self.positions.len() != outputs.len() {
            return Err(Error::Contract(format!(
                "{} unmeasured sites but {} outputs",
                self.positions.len(),
                outputs.len()
            )));
        }
        let perm: Vec<usize> = outputs
            .iter()
            .map(|s| {
                self.positions
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::Contract(format!("output site {s} was measured")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.state.permute(&perm);
        Ok(self.state)
    }
}

/// Executes a pattern on a graph region and returns the raw output state
/// together with the accumulated Pauli frame. Applying the frame
/// correction yields the pattern's target unitary applied to the input,
/// up to global phase, for every outcome source.
pub fn run_pattern(
    g: &GraphState,
    pattern: &MeasurementPattern,
    input: &StateVector,
    source: &OutcomeSource,
) -> Result<(StateVector, PauliFrame)> {
    pattern.validate()?;
    for s in &pattern.sites {
        if !g.vertices.contains(&s.site) {
            return Err(Error::Contract(format!(
                "pattern site {} not in graph",
                s.site
            )));
        }
    }
    let mut run = ClusterRun::with_input(g, &pattern.inputs, input)?;
    let mut forced_iter = match source {
        OutcomeSource::Seeded(seed) => {
            run.seed(*seed);
            None
        }
        OutcomeSource::Forced(bits) => {
            let measured = pattern.measured_sites().len();
            if bits.len() != measured {
                return Err(Error::InvalidParameter(format!(
                    "{} forced outcomes for {} measured sites",
                    bits.len(),
                    measured
                )));
            }
            Some(bits.iter().copied())
        }
    };

    let mut by_round: BTreeMap<u32, Vec<&SiteRule>> = BTreeMap::new();
    for s in &pattern.sites {
        by_round.entry(s.round).or_default().push(s);
    }
    for rules in by_round.values_mut() {
        rules.sort_by_key(|r| r.site);
    }
    for rules in by_round.values() {
        for rule in rules {
            let basis = match &rule.rule {
                BasisRule::Fixed(b) => *b,
                BasisRule::AdaptiveXy { angle, flip_sign_on } => {
                    let mut s = 0u8;
                    for dep in flip_sign_on {
                        s ^= run.outcome(*dep).ok_or_else(|| {
                            Error::Contract(format!(
                                "adaptive basis on site {} references unmeasured site {dep}",
                                rule.site
                            ))
                        })?;
                    }
                    Basis::Xy(if s == 1 { -*angle } else { *angle })
                }
            };
            let forced = forced_iter.as_mut().map(|it| it.next().unwrap());
            run.measure_site(rule.site, basis, forced)?;
        }
    }

    let mut frame = PauliFrame::identity(pattern.outputs.len());
    for (slot, out) in pattern.outputs.iter().enumerate() {
        if let Some(bp) = pattern.byproducts.iter().find(|b| b.site == *out) {
            let fold = |sites: &[Site]| -> Result<u8> {
                let mut acc = 0u8;
                for s in sites {
                    acc ^= run
                        .outcome(*s)
                        .ok_or_else(|| Error::Contract(format!("byproduct references unmeasured site {s}")))?;
                }
                Ok(acc)
            };
            frame.exponents[slot] = (fold(&bp.x_from)?, fold(&bp.z_from)?);
        }
    }
    let output = run.extract_outputs(&pattern.outputs)?;
    Ok((output, frame))
}

/// A gate pattern: its graph-state region plus the measurement pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct GatePattern {
    pub graph: GraphState,
    pub pattern: MeasurementPattern,
}

/// Identity/Hadamard wire: a chain of `length` sites, input at site 1,
/// output at site `length`, all interior measurements in X in one round.
/// The simulated unitary is H^(length−1), so odd lengths give a wire and
/// even lengths a Hadamard.
pub fn wire_pattern(length: usize) -> Result<GatePattern> {
    if length < 2 {
        return Err(Error::InvalidParameter("wire length must be ≥ 2".into()));
    }
    let mut graph = GraphState::new();
    for i in 1..length {
        graph.add_edge(i, i + 1)?;
    }
    let measured = length - 1;
    let sites: Vec<SiteRule> = (1..length)
        .map(|i| SiteRule {
            site: i,
            round: 1,
            rule: BasisRule::Fixed(Basis::X),
        })
        .collect();
    // Outcome s_j propagates through the remaining (measured − j) Hadamard
    // teleportations: it lands as X when that count is even, Z when odd.
    let mut x_from = vec![];
    let mut z_from = vec![];
    for j in 1..length {
        if (measured - j) % 2 == 0 {
            x_from.push(j);
        } else {
            z_from.push(j);
        }
    }
    Ok(GatePattern {
        graph,
        pattern: MeasurementPattern {
            sites,
            inputs: vec![1],
            outputs: vec![length],
            byproducts: vec![ByproductRule {
                site: length,
                x_from,
                z_from,
            }],
        },
    })
}

pub fn hadamard_pattern() -> GatePattern {
    wire_pattern(2).expect("length 2 is valid")
}

/// CNOT on (control, target): control stays on site 1, the target rides
/// the chain 2–3–4 with a bridge edge 1–3. Measuring sites 2 and 3 in X
/// (outcomes s2, s3) leaves X^{s3} Z^{s2} on the target output and
/// Z^{s2} on the control.
pub fn cnot_pattern() -> GatePattern {
    let control = 1;
    let (t_in, t_mid, t_out) = (2, 3, 4);
    let mut graph = GraphState::new();
    graph.add_edge(t_in, t_mid).unwrap();
    graph.add_edge(t_mid, t_out).unwrap();
    graph.add_edge(control, t_mid).unwrap();
    GatePattern {
        graph,
        pattern: MeasurementPattern {
            sites: vec![
                SiteRule {
                    site: t_in,
                    round: 1,
                    rule: BasisRule::Fixed(Basis::X),
                },
                SiteRule {
                    site: t_mid,
                    round: 1,
                    rule: BasisRule::Fixed(Basis::X),
                },
            ],
            inputs: vec![control, t_in],
            outputs: vec![control, t_out],
            byproducts: vec![
                ByproductRule {
                    site: control,
                    x_from: vec![],
                    z_from: vec![t_in],
                },
                ByproductRule {
                    site: t_out,
                    x_from: vec![t_mid],
                    z_from: vec![t_in],
                },
            ],
        },
    }
}

/// Toffoli phase gate (CCZ) on three logical sites, in exactly two
/// measurement rounds.
///
/// CCZ is diagonal: (−1)^{xyz} = exp(iπ/4 · Σ_S (−1)^{|S|+1} parity_S)
/// over the seven non-empty subsets S of the three qubits. Each subset
/// gets a two-site gadget hanging off the cluster: a collector site
/// adjacent to the subset's logical qubits and to a rotation site.
/// Round 1 measures every collector in X, which deposits the subset
/// parity (XORed with the outcome) on the rotation site; round 2
/// measures each rotation site in the XY plane at ±π/4, the sign chosen
/// from the collector's round-1 outcome. The logical qubits are never
/// measured, so inputs and outputs coincide and the only byproducts are
/// Z's on the subset members.
pub fn toffoli_phase_pattern() -> GatePattern {
    let logical = [1usize, 2, 3];
    let subsets: [&[usize]; 7] = [
        &[0],
        &[1],
        &[2],
        &[0, 1],
        &[0, 2],
        &[1, 2],
        &[0, 1, 2],
    ];
    let mut graph = GraphState::new();
    for &l in &logical {
        graph.add_vertex(l);
    }
    let mut sites = Vec::new();
    let mut byproducts: Vec<ByproductRule> = logical
        .iter()
        .map(|&l| ByproductRule {
            site: l,
            x_from: vec![],
            z_from: vec![],
        })
        .collect();
    let mut next = 4;
    for subset in subsets {
        let collector = next;
        let rotation = next + 1;
        next += 2;
        for &member in subset {
            graph.add_edge(logical[member], collector).unwrap();
        }
        graph.add_edge(collector, rotation).unwrap();
        sites.push(SiteRule {
            site: collector,
            round: 1,
            rule: BasisRule::Fixed(Basis::X),
        });
        // Gadget algebra: with collector outcome s_a and rotation outcome
        // s_b measured at angle φ = −θ·(−1)^{s_a}, the logical state
        // gains exp(iθ·parity) and a Z^{s_b} on each subset member.
        let theta = if subset.len() % 2 == 1 {
            std::f64::consts::FRAC_PI_4
        } else {
            -std::f64::consts::FRAC_PI_4
        };
        sites.push(SiteRule {
            site: rotation,
            round: 2,
            rule: BasisRule::AdaptiveXy {
                angle: -theta,
                flip_sign_on: vec![collector],
            },
        });
        for &member in subset {
            byproducts[member].z_from.push(rotation);
        }
    }
    GatePattern {
        graph,
        pattern: MeasurementPattern {
            sites,
            inputs: logical.to_vec(),
            outputs: logical.to_vec(),
            byproducts,
        },
    }
}

/// Gate kinds with library patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternGate {
    Wire(usize),
    Hadamard,
    Cnot,
    ToffoliPhase,
}

pub fn pattern_for_gate(gate: PatternGate) -> Result<GatePattern> {
    match gate {
        PatternGate::Wire(len) => wire_pattern(len),
        PatternGate::Hadamard => Ok(hadamard_pattern()),
        PatternGate::Cnot => Ok(cnot_pattern()),
        PatternGate::ToffoliPhase => Ok(toffoli_phase_pattern()),
    }
}

impl PatternGate {
    /// Applies the gate's target unitary to `input` (qubit order matches
    /// the pattern's inputs list).
    pub fn apply_target(&self, input: &StateVector) -> StateVector {
        let mut s = input.clone();
        match self {
            PatternGate::Wire(len) => {
                if (len - 1) % 2 == 1 {
                    s.apply_h(0);
                }
            }
            PatternGate::Hadamard => s.apply_h(0),
            PatternGate::Cnot => s.apply_cnot(0, 1),
            PatternGate::ToffoliPhase => s.apply_ccz(0, 1, 2),
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Pattern serialization (JSON): sites carry {"site", "round", "basis",
// "adapt"?}; "basis" is "X" | "Y" | "Z" | {"xy": angle}.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BasisRepr {
    Named(String),
    Xy { xy: f64 },
}

#[derive(Serialize, Deserialize)]
struct AdaptRepr {
    flip_sign_on: Vec<Site>,
}

#[derive(Serialize, Deserialize)]
struct SiteRepr {
    site: Site,
    round: u32,
    basis: BasisRepr,
    #[serde(skip_serializing_if = "Option::is_none")]
    adapt: Option<AdaptRepr>,
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    sites: Vec<SiteRepr>,
    inputs: Vec<Site>,
    outputs: Vec<Site>,
    byproducts: Vec<ByproductRule>,
}

impl MeasurementPattern {
    pub fn to_json(&self) -> String {
        let sites = self
            .sites
            .iter()
            .map(|s| match &s.rule {
                BasisRule::Fixed(b) => SiteRepr {
                    site: s.site,
                    round: s.round,
                    basis: match b {
                        Basis::X => BasisRepr::Named("X".into()),
                        Basis::Y => BasisRepr::Named("Y".into()),
                        Basis::Z => BasisRepr::Named("Z".into()),
                        Basis::Xy(phi) => BasisRepr::Xy { xy: *phi },
                    },
                    adapt: None,
                },
                BasisRule::AdaptiveXy { angle, flip_sign_on } => SiteRepr {
                    site: s.site,
                    round: s.round,
                    basis: BasisRepr::Xy { xy: *angle },
                    adapt: Some(AdaptRepr {
                        flip_sign_on: flip_sign_on.clone(),
                    }),
                },
            })
            .collect();
        let repr = PatternRepr {
            sites,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            byproducts: self.byproducts.clone(),
        };
        serde_json::to_string_pretty(&repr).expect("pattern serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let repr: PatternRepr = serde_json::from_str(json)?;
        let sites = repr
            .sites
            .into_iter()
            .map(|s| {
                let rule = match (s.basis, s.adapt) {
                    (BasisRepr::Xy { xy }, Some(adapt)) => BasisRule::AdaptiveXy {
                        angle: xy,
                        flip_sign_on: adapt.flip_sign_on,
                    },
                    (BasisRepr::Xy { xy }, None) => BasisRule::Fixed(Basis::Xy(xy)),
                    (BasisRepr::Named(name), None) => BasisRule::Fixed(match name.as_str() {
                        "X" => Basis::X,
                        "Y" => Basis::Y,
                        "Z" => Basis::Z,
                        other => {
                            return Err(Error::InvalidParameter(format!(
                                "unknown basis {other:?}"
                            )))
                        }
                    }),
                    (BasisRepr::Named(_), Some(_)) => {
                        return Err(Error::InvalidParameter(
                            "adaptive rules require an xy basis".into(),
                        ))
                    }
                };
                Ok(SiteRule {
                    site: s.site,
                    round: s.round,
                    rule,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let pattern = MeasurementPattern {
            sites,
            inputs: repr.inputs,
            outputs: repr.outputs,
            byproducts: repr.byproducts,
        };
        pattern.validate()?;
        Ok(pattern)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_cluster_is_plus() {
        let mut g = GraphState::new();
        g.add_vertex(0);
        let state = build_cluster(&g).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((state.amplitude(0).re - s).abs() < 1e-12);
        assert!((state.amplitude(1).re - s).abs() < 1e-12);
    }

    #[test]
    fn two_vertex_cluster_amplitudes() {
        // CZ|++⟩ = (|0+⟩ + |1−⟩)/√2: amplitudes (1,1,1,−1)/2.
        let mut g = GraphState::new();
        g.add_edge(0, 1).unwrap();
        let state = build_cluster(&g).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (i, &e) in expected.iter().enumerate() {
            assert!((state.amplitude(i).re - e).abs() < 1e-12);
            assert!(state.amplitude(i).im.abs() < 1e-12);
        }
    }

    #[test]
    fn grid_2x2_correlations_all_plus_one() {
        let mut g = GraphState::new();
        for (u, v) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            g.add_edge(u, v).unwrap();
        }
        let state = build_cluster(&g).unwrap();
        for v in g.vertices().collect::<Vec<_>>() {
            assert_eq!(verify_correlation(&state, &g, v).unwrap(), Some(1));
        }
    }

    #[test]
    fn sign_bit_flips_eigenvalue() {
        let mut g = GraphState::new();
        g.add_edge(1, 2).unwrap();
        g.set_sign(2, 1);
        let state = build_cluster(&g).unwrap();
        assert_eq!(verify_correlation(&state, &g, 1).unwrap(), Some(1));
        assert_eq!(verify_correlation(&state, &g, 2).unwrap(), Some(-1));
    }

    #[test]
    fn single_vertex_stabilizer() {
        let mut g = GraphState::new();
        g.add_vertex(7);
        let state = build_cluster(&g).unwrap();
        assert_eq!(verify_correlation(&state, &g, 7).unwrap(), Some(1));
    }

    #[test]
    fn non_eigenstate_returns_none() {
        let mut g = GraphState::new();
        g.add_vertex(0);
        let state = StateVector::zero_state(1);
        assert_eq!(verify_correlation(&state, &g, 0).unwrap(), None);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut g = GraphState::new();
        g.add_edge(0, 1).unwrap();
        let state = StateVector::zero_state(1);
        assert!(matches!(
            verify_correlation(&state, &g, 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn self_loop_rejected() {
        let mut g = GraphState::new();
        assert!(g.add_edge(3, 3).is_err());
    }

    #[test]
    fn re_measurement_is_an_error() {
        let mut g = GraphState::new();
        g.add_edge(0, 1).unwrap();
        let mut run = ClusterRun::from_graph(&g).unwrap();
        run.measure_site(0, Basis::X, Some(0)).unwrap();
        assert!(matches!(
            run.measure_site(0, Basis::X, Some(0)),
            Err(Error::AlreadyMeasured(0))
        ));
    }

    #[test]
    fn one_bit_teleportation() {
        // 2-site cluster, measure site 0 in X forcing outcome 0: site 1
        // collapses to H|ψ⟩.
        let mut g = GraphState::new();
        g.add_edge(0, 1).unwrap();
        let input = StateVector::basis_state(&[true]); // |1⟩
        let mut run = ClusterRun::with_input(&g, &[0], &input).unwrap();
        run.measure_site(0, Basis::X, Some(0)).unwrap();
        let mut expected = input.clone();
        expected.apply_h(0);
        assert!(run.state().fidelity(&expected) > 1.0 - 1e-12);
    }

    #[test]
    fn toffoli_phase_pattern_shape() {
        let gp = toffoli_phase_pattern();
        gp.pattern.validate().unwrap();
        assert_eq!(gp.pattern.rounds(), 2);
        assert_eq!(gp.graph.num_vertices(), 17);
        let adaptive = gp
            .pattern
            .sites
            .iter()
            .filter(|s| matches!(s.rule, BasisRule::AdaptiveXy { .. }))
            .count();
        assert_eq!(adaptive, 7);
        assert!(gp
            .pattern
            .sites
            .iter()
            .filter(|s| s.round == 2)
            .all(|s| matches!(s.rule, BasisRule::AdaptiveXy { .. })));
    }

    #[test]
    fn adaptive_rule_must_reference_earlier_round() {
        let mut gp = toffoli_phase_pattern();
        // Point one adaptive rule at a round-2 site.
        let round2_site = gp
            .pattern
            .sites
            .iter()
            .find(|s| s.round == 2)
            .map(|s| s.site)
            .unwrap();
        for s in &mut gp.pattern.sites {
            if let BasisRule::AdaptiveXy { flip_sign_on, .. } = &mut s.rule {
                *flip_sign_on = vec![round2_site];
            }
        }
        assert!(gp.pattern.validate().is_err());
    }

    #[test]
    fn pattern_json_round_trip() {
        for gp in [
            wire_pattern(5).unwrap(),
            cnot_pattern(),
            toffoli_phase_pattern(),
        ] {
            let json = gp.pattern.to_json();
            let back = MeasurementPattern::from_json(&json).unwrap();
            assert_eq!(back, gp.pattern);
        }
    }
}
