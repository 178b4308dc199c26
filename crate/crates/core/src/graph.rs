//! Layered chord-tone graph.
//!
//! One layer per chord, one node per tone pattern. Every node of layer `k`
//! links to every node of layer `k + 1`; a source links to the first layer and
//! the last layer links to a sink. Node ids are `0` for the source, then the
//! pattern nodes layer by layer, then the sink.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arpeggio::{expand_patterns, generate_shapes, Fingerprint, StretchConfig, TonePattern};
use crate::error::GenerationError;
use crate::fretboard::{all_positions, fret_distance, DistanceConfig, FretPosition, CELL_COUNT};
use crate::music::{ChordSymbol, Progression};
use crate::prefs::PreferenceStore;
use crate::FORMAT_VERSION;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternNode {
    pub id: NodeId,
    pub chord_index: usize,
    pub positions: Vec<FretPosition>,
    pub shape_ref: Fingerprint,
}

impl PatternNode {
    pub fn min_fret(&self) -> u8 {
        self.positions.iter().map(|p| p.fret).min().unwrap_or(0)
    }
}

/// A single fretboard cell standing in for the source node, which pulls the
/// first chord towards that region of the neck.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSourceNode {
    pub position: FretPosition,
}

impl RandomSourceNode {
    /// Uniform over all 138 cells.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cell = rng.random_range(0..CELL_COUNT);
        let position = all_positions().nth(cell).expect("cell index within the grid");
        RandomSourceNode { position }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SourceNode {
    #[default]
    Null,
    Random(RandomSourceNode),
}

/// Coefficients of the linear edge weight
/// `transition · w1 + hand_move · w2 + preference · w3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightConfig {
    pub distance: DistanceConfig,
    pub coeff_transition: f64,
    pub coeff_hand_move: f64,
    pub coeff_preference: f64,
    /// Weight added per net dislike of the destination shape.
    pub preference_unit: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            distance: DistanceConfig::default(),
            coeff_transition: 1.0,
            coeff_hand_move: 0.0,
            coeff_preference: 0.0,
            preference_unit: 1.0,
        }
    }
}

impl WeightConfig {
    pub fn validate(&self) -> Result<(), GenerationError> {
        let fields = [
            ("penalty", self.distance.string_change_penalty),
            ("a", self.coeff_transition),
            ("b", self.coeff_hand_move),
            ("c", self.coeff_preference),
            ("preference unit", self.preference_unit),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(GenerationError::InvalidConfig(format!("{name} must be a non-negative number, got {value}")));
            }
        }
        Ok(())
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        WeightConfig {
            coeff_transition: self.coeff_transition * factor,
            coeff_hand_move: self.coeff_hand_move * factor,
            coeff_preference: self.coeff_preference * factor,
            ..*self
        }
    }

    fn combine(&self, transition: f64, hand_move: f64, preference: f64) -> f64 {
        let w = self.coeff_transition * transition + self.coeff_hand_move * hand_move + self.coeff_preference * preference;
        w.max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: f64,
}

/// Smallest fret-wise distance between any tone of `a` and any tone of `b`.
pub fn transition_distance(a: &[FretPosition], b: &[FretPosition], cfg: &DistanceConfig) -> f64 {
    a.iter()
        .flat_map(|&i| b.iter().map(move |&j| fret_distance(i, j, cfg)))
        .fold(f64::INFINITY, f64::min)
}

/// Hand travel between the lowest frets of two patterns.
pub fn hand_move(a: &PatternNode, b: &PatternNode) -> f64 {
    f64::from(a.min_fret().abs_diff(b.min_fret()))
}

fn preference_term(dest: &Fingerprint, cfg: &WeightConfig, prefs: &PreferenceStore) -> f64 {
    cfg.preference_unit * prefs.votes(dest).net_penalty()
}

/// Weight of the edge from `from` into `to`, clamped at zero.
pub fn edge_weight(from: &PatternNode, to: &PatternNode, cfg: &WeightConfig, prefs: &PreferenceStore) -> f64 {
    cfg.combine(
        transition_distance(&from.positions, &to.positions, &cfg.distance),
        hand_move(from, to),
        preference_term(&to.shape_ref, cfg, prefs),
    )
}

/// Distance from the random source cell to the nearest tone of `first`.
pub fn source_weight(src: &RandomSourceNode, first: &PatternNode, cfg: &WeightConfig) -> f64 {
    transition_distance(&[src.position], &first.positions, &cfg.distance)
}

/// Weight of the edge from the source into a first-layer node.
///
/// A null source contributes no transition or hand travel, so only the
/// preference term remains; a random source acts as a one-note pattern.
fn source_edge_weight(src: &SourceNode, first: &PatternNode, cfg: &WeightConfig, prefs: &PreferenceStore) -> f64 {
    let preference = preference_term(&first.shape_ref, cfg, prefs);
    match src {
        SourceNode::Null => cfg.combine(0.0, 0.0, preference),
        SourceNode::Random(random) => cfg.combine(
            source_weight(random, first, cfg),
            f64::from(random.position.fret.abs_diff(first.min_fret())),
            preference,
        ),
    }
}

#[derive(Clone, Debug)]
pub struct ToneGraph {
    chords: Vec<ChordSymbol>,
    npm: usize,
    weights: WeightConfig,
    source: SourceNode,
    layers: Vec<Vec<PatternNode>>,
    edges: Vec<Edge>,
}

impl ToneGraph {
    /// Assembles a graph from per-chord patterns and weighs every edge.
    pub fn from_layers(
        chords: Vec<ChordSymbol>,
        npm: usize,
        layers: Vec<Vec<TonePattern>>,
        source: SourceNode,
        weights: WeightConfig,
        prefs: &PreferenceStore,
    ) -> Result<Self, GenerationError> {
        weights.validate()?;
        let mut next_id = 1;
        let mut nodes = Vec::with_capacity(layers.len());
        for (chord_index, patterns) in layers.into_iter().enumerate() {
            if patterns.is_empty() {
                let chord = chords.get(chord_index).map(|c| c.source_text.clone()).unwrap_or_default();
                return Err(GenerationError::EmptyLayer { chord_index, chord });
            }
            let layer: Vec<PatternNode> = patterns
                .into_iter()
                .map(|p| {
                    let node = PatternNode { id: next_id, chord_index, positions: p.positions, shape_ref: p.shape_ref };
                    next_id += 1;
                    node
                })
                .collect();
            nodes.push(layer);
        }
        if nodes.is_empty() {
            return Err(GenerationError::InvalidConfig("a graph needs at least one chord".into()));
        }
        let sink = next_id;

        let mut edges = Vec::new();
        for node in &nodes[0] {
            edges.push(Edge { from: 0, to: node.id, weight: source_edge_weight(&source, node, &weights, prefs) });
        }
        for pair in nodes.windows(2) {
            for from in &pair[0] {
                for to in &pair[1] {
                    edges.push(Edge { from: from.id, to: to.id, weight: edge_weight(from, to, &weights, prefs) });
                }
            }
        }
        for node in nodes.last().expect("at least one layer") {
            edges.push(Edge { from: node.id, to: sink, weight: 0.0 });
        }

        Ok(ToneGraph { chords, npm, weights, source, layers: nodes, edges })
    }

    pub fn source_id(&self) -> NodeId {
        0
    }

    pub fn sink_id(&self) -> NodeId {
        self.node_count() + 1
    }

    /// Pattern nodes only; source and sink are not counted.
    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn node(&self, id: NodeId) -> Option<&PatternNode> {
        if id == 0 {
            return None;
        }
        let mut offset = id - 1;
        for layer in &self.layers {
            if offset < layer.len() {
                return Some(&layer[offset]);
            }
            offset -= layer.len();
        }
        None
    }

    pub fn layers(&self) -> &[Vec<PatternNode>] {
        &self.layers
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn chords(&self) -> &[ChordSymbol] {
        &self.chords
    }

    pub fn npm(&self) -> usize {
        self.npm
    }

    pub fn weights(&self) -> &WeightConfig {
        &self.weights
    }

    pub fn source(&self) -> &SourceNode {
        &self.source
    }

    /// Expected edge count for the current layer sizes.
    pub fn expected_edge_count(&self) -> usize {
        let sizes: Vec<usize> = self.layers.iter().map(Vec::len).collect();
        sizes[0] + sizes.windows(2).map(|w| w[0] * w[1]).sum::<usize>() + sizes[sizes.len() - 1]
    }

    /// Replaces every edge weight, clamping the result at zero.
    pub fn map_weights(&mut self, mut f: impl FnMut(&Edge) -> f64) {
        for edge in &mut self.edges {
            edge.weight = f(edge).max(0.0);
        }
    }

    pub fn dump(&self) -> GraphDump {
        GraphDump {
            format_version: FORMAT_VERSION,
            chords: self.chords.iter().map(|c| c.source_text.clone()).collect(),
            npm: self.npm,
            source: DumpSource {
                id: self.source_id(),
                position: match self.source {
                    SourceNode::Null => None,
                    SourceNode::Random(r) => Some(r.position),
                },
            },
            sink: self.sink_id(),
            nodes: self
                .layers
                .iter()
                .flatten()
                .map(|n| DumpNode {
                    id: n.id,
                    chord_index: n.chord_index,
                    fingerprint: n.shape_ref.clone(),
                    positions: n.positions.clone(),
                })
                .collect(),
            edges: self.edges.iter().map(|e| (e.from, e.to, e.weight)).collect(),
        }
    }
}

/// Diagnostic JSON form of a graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphDump {
    pub format_version: u32,
    pub chords: Vec<String>,
    pub npm: usize,
    pub source: DumpSource,
    pub sink: NodeId,
    pub nodes: Vec<DumpNode>,
    pub edges: Vec<(NodeId, NodeId, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DumpSource {
    pub id: NodeId,
    pub position: Option<FretPosition>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DumpNode {
    pub id: NodeId,
    pub chord_index: usize,
    pub fingerprint: Fingerprint,
    pub positions: Vec<FretPosition>,
}

/// Generates every chord's shapes, expands them to `npm`-note patterns and
/// weighs the resulting layered graph. `randomize` seeds a random source cell.
pub fn build_graph(
    progression: &Progression,
    npm: usize,
    stretch: StretchConfig,
    weights: WeightConfig,
    prefs: &PreferenceStore,
    randomize: Option<u64>,
) -> Result<ToneGraph, GenerationError> {
    weights.validate()?;
    let chords = progression.chords();
    if let Some(chord) = chords.iter().find(|c| c.tone_count() > npm) {
        return Err(GenerationError::PatternTooShort {
            chord: chord.source_text.clone(),
            npm,
            tones: chord.tone_count(),
        });
    }
    let mut layers = Vec::with_capacity(chords.len());
    for (chord_index, chord) in chords.iter().enumerate() {
        let shapes = generate_shapes(chord, stretch).map_err(|_| GenerationError::EmptyLayer {
            chord_index,
            chord: chord.source_text.clone(),
        })?;
        let mut layer = Vec::with_capacity(shapes.len());
        for shape in &shapes {
            layer.extend(expand_patterns(shape, npm)?);
        }
        layers.push(layer);
    }
    let source = match randomize {
        Some(seed) => SourceNode::Random(RandomSourceNode::from_seed(seed)),
        None => SourceNode::Null,
    };
    ToneGraph::from_layers(chords.to_vec(), npm, layers, source, weights, prefs)
}
