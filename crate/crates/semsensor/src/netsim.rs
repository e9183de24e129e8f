//! Deterministic multi-hop sensor-network simulation.
//!
//! Every round, each live node encodes one reading, fragments the payload
//! into link-layer frames, and forwards it along a minimum-hop routing tree
//! to the sink. Transmitting `k` bits over distance `d` costs
//! `e_elec·k + eps_amp·k·d²`; receiving costs `e_elec·k` (the sink is
//! mains-powered and pays nothing). The only stochastic input is node
//! placement, driven by a seeded ChaCha stream, so a run is a pure function
//! of its arguments.
//!
//! Node death is resolved at round boundaries: before a round executes, any
//! node whose scheduled cost exceeds its residual energy is removed and the
//! tree is rebuilt without it, repeating until the schedule is affordable.
//! Nodes left without a route stay alive but stop generating.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::codec::{CodecOptions, Encoding};
use crate::observation::{canonical_f64, SensorReading};
use crate::{es3n, ssw};

/// First-order radio model parameters plus link-layer framing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioEnergyModel {
    /// Electronics cost per bit, transmit and receive alike (J/bit).
    pub e_elec_j_per_bit: f64,
    /// Amplifier cost per bit per square metre (J/bit/m²).
    pub eps_amp_j_per_bit_m2: f64,
    /// Payload bytes carried by one link-layer frame.
    pub frame_payload_bytes: u32,
    /// Header/trailer bytes added to every frame.
    pub frame_overhead_bytes: u32,
}

impl Default for RadioEnergyModel {
    fn default() -> Self {
        Self {
            e_elec_j_per_bit: 50e-9,
            eps_amp_j_per_bit_m2: 100e-12,
            frame_payload_bytes: 102,
            frame_overhead_bytes: 25,
        }
    }
}

impl RadioEnergyModel {
    /// On-air bytes for one payload: the payload itself plus per-frame
    /// overhead, last frame partial.
    pub fn on_air_bytes(&self, payload_bytes: u64) -> u64 {
        payload_bytes + self.frames(payload_bytes) * u64::from(self.frame_overhead_bytes)
    }

    /// Number of frames a payload fragments into.
    pub fn frames(&self, payload_bytes: u64) -> u64 {
        payload_bytes.div_ceil(u64::from(self.frame_payload_bytes))
    }

    /// Transmission energy for `bits` over distance `d` metres.
    pub fn tx_energy(&self, bits: u64, d: f64) -> f64 {
        let bits = bits as f64;
        self.e_elec_j_per_bit * bits + self.eps_amp_j_per_bit_m2 * bits * d * d
    }

    /// Reception energy for `bits`.
    pub fn rx_energy(&self, bits: u64) -> f64 {
        self.e_elec_j_per_bit * bits as f64
    }

    fn check(&self) -> Result<(), SimError> {
        let ok = self.e_elec_j_per_bit > 0.0
            && self.eps_amp_j_per_bit_m2 > 0.0
            && self.frame_payload_bytes > 0
            && self.frame_overhead_bytes > 0;
        if ok {
            Ok(())
        } else {
            Err(SimError::BadParameter(
                "all radio model parameters must be positive".into(),
            ))
        }
    }
}

/// Per-node runtime state at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub id: u32,
    pub position: (f64, f64),
    pub residual_energy_j: f64,
    pub alive: bool,
}

/// A sensor field: node positions, the sink, and the radio range that
/// defines connectivity. Construction guarantees every node can reach the
/// sink.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<(f64, f64)>,
    sink: (f64, f64),
    radio_range: f64,
}

/// Construction or configuration failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("{0}")]
    BadParameter(String),
    #[error(
        "no connected placement found after {attempts} attempts; increase the radio range or shrink the field"
    )]
    Disconnected { attempts: u32 },
}

const PLACEMENT_ATTEMPTS: u32 = 64;

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

impl Topology {
    /// Places `n` nodes uniformly at random in a `field_side` × `field_side`
    /// square with the sink at the centre. Coordinates are drawn from a
    /// ChaCha12 stream (placement attempt `i` reseeds with
    /// `seed + i·0x9E3779B97F4A7C15`), taking the top 53 bits of each 64-bit
    /// word as a uniform fraction. Disconnected placements are redrawn up to
    /// a bounded number of attempts.
    pub fn random(n: u32, field_side: f64, radio_range: f64, seed: u64) -> Result<Self, SimError> {
        if n < 1 {
            return Err(SimError::BadParameter("need at least one node".into()));
        }
        if !(field_side > 0.0) || !(radio_range > 0.0) {
            return Err(SimError::BadParameter(
                "field_side and radio_range must be positive".into(),
            ));
        }
        for attempt in 0..PLACEMENT_ATTEMPTS {
            let sub_seed = seed.wrapping_add(u64::from(attempt).wrapping_mul(0x9E3779B97F4A7C15));
            let mut rng = ChaCha12Rng::seed_from_u64(sub_seed);
            let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let positions: Vec<(f64, f64)> = (0..n)
                .map(|_| (unit() * field_side, unit() * field_side))
                .collect();
            let topology = Topology {
                positions,
                sink: (field_side / 2.0, field_side / 2.0),
                radio_range,
            };
            if topology.is_connected() {
                return Ok(topology);
            }
        }
        Err(SimError::Disconnected {
            attempts: PLACEMENT_ATTEMPTS,
        })
    }

    /// Builds a topology from explicit positions, enforcing connectivity.
    pub fn from_positions(
        positions: Vec<(f64, f64)>,
        sink: (f64, f64),
        radio_range: f64,
    ) -> Result<Self, SimError> {
        if positions.is_empty() {
            return Err(SimError::BadParameter("need at least one node".into()));
        }
        if !(radio_range > 0.0) {
            return Err(SimError::BadParameter("radio_range must be positive".into()));
        }
        let topology = Topology {
            positions,
            sink,
            radio_range,
        };
        if topology.is_connected() {
            Ok(topology)
        } else {
            Err(SimError::Disconnected { attempts: 1 })
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, id: u32) -> (f64, f64) {
        self.positions[id as usize]
    }

    pub fn sink(&self) -> (f64, f64) {
        self.sink
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    fn in_range(&self, a: (f64, f64), b: (f64, f64)) -> bool {
        distance(a, b) <= self.radio_range
    }

    fn is_connected(&self) -> bool {
        let all = vec![true; self.len()];
        let tree = self.route_with_alive(&all);
        tree.parent.iter().all(Option::is_some)
    }

    /// Minimum-hop routing tree toward the sink (breadth-first from the
    /// sink), considering only `alive` nodes. Parent ties resolve to the
    /// lower node id, then to the shorter link. Unreachable or dead nodes
    /// get no parent.
    pub fn route_with_alive(&self, alive: &[bool]) -> RoutingTree {
        let n = self.len();
        let mut hops: Vec<Option<u32>> = vec![None; n];
        let mut parent: Vec<Option<Parent>> = vec![None; n];

        // Hop 1: nodes that reach the sink directly.
        let mut frontier: Vec<u32> = Vec::new();
        for id in 0..n as u32 {
            if alive[id as usize] && self.in_range(self.position(id), self.sink) {
                hops[id as usize] = Some(1);
                parent[id as usize] = Some(Parent::Sink);
                frontier.push(id);
            }
        }

        let mut hop = 1;
        while !frontier.is_empty() {
            hop += 1;
            let mut next = Vec::new();
            for id in 0..n as u32 {
                if !alive[id as usize] || hops[id as usize].is_some() {
                    continue;
                }
                let pos = self.position(id);
                let best = frontier
                    .iter()
                    .copied()
                    .filter(|&f| self.in_range(pos, self.position(f)))
                    .min_by(|&a, &b| {
                        let da = distance(pos, self.position(a));
                        let db = distance(pos, self.position(b));
                        a.cmp(&b).then(da.total_cmp(&db))
                    });
                if let Some(upstream) = best {
                    hops[id as usize] = Some(hop);
                    parent[id as usize] = Some(Parent::Node(upstream));
                    next.push(id);
                }
            }
            frontier = next;
        }

        RoutingTree { parent, hops }
    }

    /// Routing tree with every node alive.
    pub fn route(&self) -> RoutingTree {
        self.route_with_alive(&vec![true; self.len()])
    }
}

/// Next hop toward the sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parent {
    Sink,
    Node(u32),
}

impl std::fmt::Display for Parent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parent::Sink => f.write_str("sink"),
            Parent::Node(id) => write!(f, "{id}"),
        }
    }
}

/// Parent pointers and hop counts toward the sink; `None` marks nodes that
/// are dead or cut off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingTree {
    pub parent: Vec<Option<Parent>>,
    pub hops: Vec<Option<u32>>,
}

/// Everything [`run`] needs besides the topology.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub encoding: Encoding,
    /// Per-round readings are derived from this template; values are
    /// perturbed per node and round without changing their lexical length,
    /// so payload sizes stay constant.
    pub template: SensorReading,
    pub rounds: u32,
    pub radio: RadioEnergyModel,
    pub initial_energy_j: f64,
    pub codec: CodecOptions,
}

/// Accumulated outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    /// Bytes put on the air across all hops, frame overhead included.
    pub total_tx_bytes: u64,
    /// Bytes received across all receivers, the sink included. Without a
    /// loss model this equals `total_tx_bytes`.
    pub total_rx_bytes: u64,
    pub per_node_tx: BTreeMap<u32, u64>,
    pub energy_spent_j: f64,
    /// Round at whose start the first node died; 0 if none died.
    pub rounds_until_first_death: u32,
    pub rounds_completed: u32,
}

/// One hop-level transmission: a node forwarding its round batch upstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxEvent {
    pub round: u32,
    pub sender: u32,
    pub receiver: Parent,
    pub bytes: u64,
    pub tx_joules: f64,
}

/// Renders events in the documented log form:
/// `round,sender,receiver,bytes,joules`.
pub fn event_log(events: &[TxEvent]) -> String {
    let mut out = String::from("round,sender,receiver,bytes,joules\n");
    for e in events {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.round,
            e.sender,
            e.receiver,
            e.bytes,
            canonical_f64(e.tx_joules)
        ));
    }
    out
}

/// Metrics plus the event trail and final node states.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub metrics: RunMetrics,
    /// One event per node-to-parent transfer, for replay verification.
    pub events: Vec<TxEvent>,
    pub nodes: Vec<NodeState>,
}

/// Runs the simulation and returns the metrics.
pub fn run(topology: &Topology, config: &RunConfig) -> Result<RunMetrics, SimError> {
    simulate(topology, config).map(|outcome| outcome.metrics)
}

/// Runs the simulation, keeping the full event trail and final node states.
pub fn simulate(topology: &Topology, config: &RunConfig) -> Result<RunOutcome, SimError> {
    config.radio.check()?;
    if !(config.initial_energy_j > 0.0) {
        return Err(SimError::BadParameter(
            "initial_energy_j must be positive".into(),
        ));
    }

    let n = topology.len();
    let mut residual = vec![config.initial_energy_j; n];
    let mut alive = vec![true; n];
    let mut metrics = RunMetrics {
        total_tx_bytes: 0,
        total_rx_bytes: 0,
        per_node_tx: BTreeMap::new(),
        energy_spent_j: 0.0,
        rounds_until_first_death: 0,
        rounds_completed: 0,
    };
    let mut events = Vec::new();

    for round in 1..=config.rounds {
        if alive.iter().all(|&a| !a) {
            break;
        }

        // Payload sizes for this round; constant across the death
        // fixed-point below because they depend only on node id and round.
        let mut payload_bytes = vec![0u64; n];
        for id in 0..n as u32 {
            if alive[id as usize] {
                payload_bytes[id as usize] = encode_round_reading(config, id, round)?;
            }
        }

        // Resolve deaths at the round boundary: drop any node whose
        // scheduled cost would take its energy negative, reroute, and
        // repeat until the schedule is affordable for everyone left in it.
        let schedule = loop {
            let tree = topology.route_with_alive(&alive);
            let schedule = build_schedule(topology, config, &tree, &alive, &payload_bytes);
            let mut died = false;
            for id in 0..n {
                if alive[id] && schedule.cost[id] > residual[id] {
                    alive[id] = false;
                    residual[id] = 0.0;
                    died = true;
                }
            }
            if !died {
                break schedule;
            }
            if metrics.rounds_until_first_death == 0 {
                metrics.rounds_until_first_death = round;
            }
        };

        // Execute the round.
        for id in 0..n {
            let Some(load) = schedule.load[id] else {
                continue;
            };
            residual[id] -= schedule.cost[id];
            metrics.energy_spent_j += schedule.cost[id];
            metrics.total_tx_bytes += load.tx_bytes;
            metrics.total_rx_bytes += load.tx_bytes; // every frame is received by the parent
            *metrics.per_node_tx.entry(id as u32).or_insert(0) += load.tx_bytes;
            events.push(TxEvent {
                round,
                sender: id as u32,
                receiver: load.parent,
                bytes: load.tx_bytes,
                tx_joules: load.tx_joules,
            });
            // Paying out to exactly zero exhausts the battery as well.
            if residual[id] <= 0.0 {
                residual[id] = 0.0;
                alive[id] = false;
                if metrics.rounds_until_first_death == 0 {
                    metrics.rounds_until_first_death = round;
                }
            }
        }
        metrics.rounds_completed = round;
    }

    let nodes = (0..n)
        .map(|id| NodeState {
            id: id as u32,
            position: topology.position(id as u32),
            residual_energy_j: residual[id],
            alive: alive[id],
        })
        .collect();
    Ok(RunOutcome {
        metrics,
        events,
        nodes,
    })
}

/// Encodes the reading node `id` generates in `round` and returns its
/// payload size.
fn encode_round_reading(config: &RunConfig, id: u32, round: u32) -> Result<u64, SimError> {
    let reading = round_reading(&config.template, id, round);
    let encoded = match config.encoding {
        Encoding::Ssw => ssw::encode(&reading, &config.codec),
        Encoding::Es3n => es3n::encode(&reading, &config.codec),
    };
    encoded
        .map(|p| p.size_bytes() as u64)
        .map_err(|e| SimError::BadParameter(format!("template does not encode: {e}")))
}

/// The reading node `id` generates in `round`: the template with its sensor
/// id substituted and each value perturbed without changing its lexical
/// length.
pub fn round_reading(template: &SensorReading, id: u32, round: u32) -> SensorReading {
    let mut reading = template.clone();
    reading.sensor_id = id;
    for (slot, field) in reading.record.fields.iter_mut().enumerate() {
        field.value = perturb(field.value, u64::from(id) + u64::from(round) + slot as u64);
    }
    reading
}

/// Replaces the last digit of the value's canonical lexical form with a
/// nonzero digit selected by `salt`. Falls back to the original value if
/// the result would not round-trip at the same length.
fn perturb(value: f64, salt: u64) -> f64 {
    let lexical = canonical_f64(value);
    let bytes = lexical.as_bytes();
    let Some(&last) = bytes.last() else {
        return value;
    };
    if !last.is_ascii_digit() {
        return value;
    }
    let digit = b'1' + ((u64::from(last - b'0') + salt) % 9) as u8;
    let mut candidate = lexical.clone();
    candidate.pop();
    candidate.push(digit as char);
    match candidate.parse::<f64>() {
        Ok(v) if canonical_f64(v) == candidate && candidate.len() == lexical.len() => v,
        _ => value,
    }
}

#[derive(Clone, Copy)]
struct NodeLoad {
    parent: Parent,
    tx_bytes: u64,
    tx_joules: f64,
}

struct Schedule {
    /// Per-node transmission load; `None` for dead or stranded nodes.
    load: Vec<Option<NodeLoad>>,
    /// Per-node energy cost (transmit plus receive).
    cost: Vec<f64>,
}

/// Computes what every connected node transmits and pays this round.
fn build_schedule(
    topology: &Topology,
    config: &RunConfig,
    tree: &RoutingTree,
    alive: &[bool],
    payload_bytes: &[u64],
) -> Schedule {
    let n = topology.len();

    // Own traffic for connected nodes.
    let mut tx_bytes: Vec<u64> = (0..n)
        .map(|id| {
            if alive[id] && tree.parent[id].is_some() {
                config.radio.on_air_bytes(payload_bytes[id])
            } else {
                0
            }
        })
        .collect();
    let mut rx_bytes = vec![0u64; n];

    // Accumulate subtree traffic from the deepest hops inward.
    let mut order: Vec<usize> = (0..n).filter(|&id| tree.hops[id].is_some()).collect();
    order.sort_by_key(|&id| std::cmp::Reverse((tree.hops[id], id as u32)));
    for &id in &order {
        if let Some(Parent::Node(parent)) = tree.parent[id] {
            tx_bytes[parent as usize] += tx_bytes[id];
            rx_bytes[parent as usize] += tx_bytes[id];
        }
    }

    let mut load = vec![None; n];
    let mut cost = vec![0.0; n];
    for id in 0..n {
        let Some(parent) = tree.parent[id] else {
            continue;
        };
        if !alive[id] {
            continue;
        }
        let link = match parent {
            Parent::Sink => distance(topology.position(id as u32), topology.sink()),
            Parent::Node(p) => distance(topology.position(id as u32), topology.position(p)),
        };
        let tx_joules = config.radio.tx_energy(tx_bytes[id] * 8, link);
        cost[id] = tx_joules + config.radio.rx_energy(rx_bytes[id] * 8);
        load[id] = Some(NodeLoad {
            parent,
            tx_bytes: tx_bytes[id],
            tx_joules,
        });
    }
    Schedule { load, cost }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observation::default_reading;

    fn line_topology() -> Topology {
        // Sink at the origin, three nodes strung out at 10 m intervals.
        Topology::from_positions(
            vec![(10.0, 0.0), (20.0, 0.0), (30.0, 0.0)],
            (0.0, 0.0),
            10.0,
        )
        .unwrap()
    }

    fn line_config(encoding: Encoding) -> RunConfig {
        RunConfig {
            encoding,
            template: default_reading(),
            rounds: 1,
            radio: RadioEnergyModel::default(),
            initial_energy_j: 2.0,
            codec: CodecOptions::default(),
        }
    }

    #[test]
    fn single_node_links_to_sink() {
        let t = Topology::random(1, 10.0, 10.0, 7).unwrap();
        assert_eq!(t.len(), 1);
        let tree = t.route();
        assert_eq!(tree.parent[0], Some(Parent::Sink));
        assert_eq!(tree.hops[0], Some(1));
    }

    #[test]
    fn same_seed_same_topology() {
        let a = Topology::random(25, 100.0, 40.0, 3).unwrap();
        let b = Topology::random(25, 100.0, 40.0, 3).unwrap();
        assert_eq!(a, b);
        let c = Topology::random(25, 100.0, 40.0, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_topology_is_connected() {
        let t = Topology::random(50, 200.0, 50.0, 1).unwrap();
        assert_eq!(t.len(), 50);
        assert!(t.route().parent.iter().all(Option::is_some));
    }

    #[test]
    fn unreachable_placement_reports_disconnection() {
        // Two nodes in a huge field with a tiny range cannot both reach the
        // sink no matter the draw.
        let err = Topology::random(2, 10_000.0, 0.001, 1).unwrap_err();
        assert!(matches!(err, SimError::Disconnected { .. }));
    }

    #[test]
    fn line_routing_follows_the_chain() {
        let tree = line_topology().route();
        assert_eq!(
            tree.parent,
            vec![
                Some(Parent::Sink),
                Some(Parent::Node(0)),
                Some(Parent::Node(1)),
            ]
        );
        assert_eq!(tree.hops, vec![Some(1), Some(2), Some(3)]);
    }

    #[test]
    fn hop_counts_match_floyd_warshall_oracle() {
        let t = Topology::random(50, 200.0, 60.0, 11).unwrap();
        let tree = t.route();

        // Independent oracle: all-pairs shortest hop counts over the same
        // links, sink as an extra vertex.
        let n = t.len();
        let inf = u32::MAX / 2;
        let mut d = vec![vec![inf; n + 1]; n + 1];
        let pos = |i: usize| {
            if i == n {
                t.sink()
            } else {
                t.position(i as u32)
            }
        };
        for i in 0..=n {
            d[i][i] = 0;
            for j in 0..=n {
                if i != j && distance(pos(i), pos(j)) <= t.radio_range() {
                    d[i][j] = 1;
                }
            }
        }
        for k in 0..=n {
            for i in 0..=n {
                for j in 0..=n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        for id in 0..n {
            assert_eq!(tree.hops[id], Some(d[id][n]), "node {id}");
        }
        // And every hop count is one more than the parent's.
        for id in 0..n {
            match tree.parent[id] {
                Some(Parent::Sink) => assert_eq!(tree.hops[id], Some(1)),
                Some(Parent::Node(p)) => {
                    assert_eq!(tree.hops[id], tree.hops[p as usize].map(|h| h + 1))
                }
                None => panic!("node {id} unrouted"),
            }
        }
    }

    #[test]
    fn zero_rounds_yields_zero_metrics() {
        let mut config = line_config(Encoding::Ssw);
        config.rounds = 0;
        let metrics = run(&line_topology(), &config).unwrap();
        assert_eq!(metrics.total_tx_bytes, 0);
        assert_eq!(metrics.total_rx_bytes, 0);
        assert_eq!(metrics.energy_spent_j, 0.0);
        assert_eq!(metrics.rounds_until_first_death, 0);
        assert_eq!(metrics.rounds_completed, 0);
    }

    #[test]
    fn line_totals_match_the_analytic_value() {
        // One round, payload sized to exactly one frame: depth-weighted
        // frame counts 1 + 2 + 3, so total bytes = 6 whole frames.
        let topology = line_topology();
        let mut config = line_config(Encoding::Ssw);
        let payload = crate::ssw::encode(&round_reading(&config.template, 0, 1), &config.codec)
            .unwrap()
            .size_bytes() as u64;
        config.radio.frame_payload_bytes = payload as u32;
        let frame = payload + u64::from(config.radio.frame_overhead_bytes);

        let RunOutcome { metrics, events, .. } = simulate(&topology, &config).unwrap();
        assert_eq!(metrics.total_tx_bytes, 6 * frame);
        assert_eq!(metrics.total_rx_bytes, 6 * frame);
        assert_eq!(metrics.per_node_tx[&0], 3 * frame);
        assert_eq!(metrics.per_node_tx[&1], 2 * frame);
        assert_eq!(metrics.per_node_tx[&2], frame);

        // Hand-computed energy: every link is 10 m.
        let radio = config.radio;
        let expected = radio.tx_energy(3 * frame * 8, 10.0)
            + radio.tx_energy(2 * frame * 8, 10.0)
            + radio.tx_energy(frame * 8, 10.0)
            + radio.rx_energy(2 * frame * 8)
            + radio.rx_energy(frame * 8);
        let rel = (metrics.energy_spent_j - expected).abs() / expected;
        assert!(rel < 1e-9, "relative error {rel}");
        assert_eq!(events.len(), 3);
    }

    #[test]
    fn identical_inputs_identical_metrics() {
        let topology = Topology::random(20, 100.0, 40.0, 5).unwrap();
        let config = RunConfig {
            rounds: 5,
            ..line_config(Encoding::Es3n)
        };
        let a = run(&topology, &config).unwrap();
        let b = run(&topology, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn event_replay_reproduces_the_metrics() {
        let topology = Topology::random(20, 100.0, 40.0, 5).unwrap();
        let config = RunConfig {
            rounds: 3,
            ..line_config(Encoding::Ssw)
        };
        let RunOutcome { metrics, events, .. } = simulate(&topology, &config).unwrap();

        let mut tx_bytes = 0u64;
        let mut energy = 0.0f64;
        for e in &events {
            tx_bytes += e.bytes;
            let d = match e.receiver {
                Parent::Sink => distance(topology.position(e.sender), topology.sink()),
                Parent::Node(p) => distance(topology.position(e.sender), topology.position(p)),
            };
            energy += config.radio.tx_energy(e.bytes * 8, d);
            if let Parent::Node(_) = e.receiver {
                energy += config.radio.rx_energy(e.bytes * 8);
            }
        }
        assert_eq!(tx_bytes, metrics.total_tx_bytes);
        let rel = (energy - metrics.energy_spent_j).abs() / metrics.energy_spent_j;
        assert!(rel < 1e-9, "relative error {rel}");
    }

    #[test]
    fn perturbation_keeps_lexical_length() {
        for (value, salt) in [(35.1, 0), (35.1, 7), (6.5, 3), (-40.0, 1), (12.25, 9), (0.0, 2)] {
            let perturbed = perturb(value, salt);
            assert_eq!(
                canonical_f64(perturbed).len(),
                canonical_f64(value).len(),
                "value {value} salt {salt}"
            );
        }
    }

    #[test]
    fn payload_sizes_stay_constant_across_rounds() {
        let template = default_reading();
        let options = CodecOptions::with_timestamp(true);
        let reference = crate::ssw::encode(&round_reading(&template, 3, 1), &options)
            .unwrap()
            .size_bytes();
        for round in 2..20 {
            let size = crate::ssw::encode(&round_reading(&template, 3, round), &options)
                .unwrap()
                .size_bytes();
            assert_eq!(size, reference, "round {round}");
        }
    }

    #[test]
    fn low_energy_kills_nodes_and_es3n_dies_no_later() {
        let topology = Topology::random(15, 80.0, 40.0, 9).unwrap();
        let base = RunConfig {
            rounds: 200,
            initial_energy_j: 0.005,
            ..line_config(Encoding::Ssw)
        };
        let ssw = run(&topology, &base).unwrap();
        let es3n = run(
            &topology,
            &RunConfig {
                encoding: Encoding::Es3n,
                ..base.clone()
            },
        )
        .unwrap();
        assert!(ssw.rounds_until_first_death > 0);
        assert!(es3n.rounds_until_first_death > 0);
        assert!(ssw.rounds_until_first_death >= es3n.rounds_until_first_death);
    }

    #[test]
    fn es3n_transmits_more_than_ssw_on_the_same_topology() {
        let topology = Topology::random(30, 120.0, 40.0, 2).unwrap();
        let base = RunConfig {
            rounds: 4,
            ..line_config(Encoding::Ssw)
        };
        let ssw = run(&topology, &base).unwrap();
        let es3n = run(
            &topology,
            &RunConfig {
                encoding: Encoding::Es3n,
                ..base
            },
        )
        .unwrap();
        assert!(es3n.total_tx_bytes > ssw.total_tx_bytes);
    }

    #[test]
    fn event_log_format() {
        let events = simulate(&line_topology(), &line_config(Encoding::Ssw)).unwrap().events;
        let log = event_log(&events);
        let mut lines = log.lines();
        assert_eq!(lines.next(), Some("round,sender,receiver,bytes,joules"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("1,0,sink,"));
    }
}
