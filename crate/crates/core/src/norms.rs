//! Descriptive norms for cooperation and shirking and their update rules.
//!
//! Norms are beliefs about typical behavior, updated once per step from the
//! behavior observed in the step just finished:
//!
//! ```text
//! norm <- (1 - h) * norm + h * mean(observed behavior)
//! ```
//!
//! The global environment observes everyone; the local environments observe
//! the eight Moore neighbours on a torus or eight peers sampled afresh each step.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::behavior::TimeAllocation;
use crate::error::ModelError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormPair {
    pub cooperation: f64,
    pub shirking: f64,
}

impl NormPair {
    pub fn new(cooperation: f64, shirking: f64) -> Self {
        NormPair {
            cooperation,
            shirking,
        }
    }

    /// Individual-work time implied by the two norms under budget `tau`.
    pub fn implied_production(&self, tau: f64) -> f64 {
        tau - self.cooperation - self.shirking
    }
}

/// Which peers an agent looks at when forming its norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Environment {
    Global,
    Neighbours,
    Random,
}

impl Environment {
    pub const ALL: [Environment; 3] = [Environment::Global, Environment::Neighbours, Environment::Random];

    pub fn name(self) -> &'static str {
        match self {
            Environment::Global => "global",
            Environment::Neighbours => "neighbours",
            Environment::Random => "random",
        }
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Environment {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "global" => Ok(Environment::Global),
            "neighbours" | "neighbors" => Ok(Environment::Neighbours),
            "random" => Ok(Environment::Random),
            _ => Err(ModelError::UnknownEnvironment(s.to_string())),
        }
    }
}

/// Local update formula.
///
/// `Literal` evaluates `(sum_j h * t_j - norm) / M` exactly as written in the
/// original appendix, clamped at zero so collapsed norms stay valid. It drives
/// norms to zero within a few steps and exists only for comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormFormula {
    #[default]
    WeightedAverage,
    Literal,
}

impl FromStr for NormFormula {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "weightedaverage" | "average" => Ok(NormFormula::WeightedAverage),
            "literal" => Ok(NormFormula::Literal),
            _ => Err(ModelError::InvalidParameter {
                name: "norm_formula",
                reason: format!("expected weighted-average or literal, got '{s}'"),
            }),
        }
    }
}

impl fmt::Display for NormFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormFormula::WeightedAverage => "weighted-average",
            NormFormula::Literal => "literal",
        })
    }
}

/// Norms in force: one shared pair, or one pair per agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NormState {
    Global(NormPair),
    PerAgent(Vec<NormPair>),
}

impl NormState {
    pub fn for_agent(&self, agent: usize) -> NormPair {
        match self {
            NormState::Global(pair) => *pair,
            NormState::PerAgent(pairs) => pairs[agent],
        }
    }

    /// The global pair, or the population mean of per-agent pairs.
    pub fn mean(&self) -> NormPair {
        match self {
            NormState::Global(pair) => *pair,
            NormState::PerAgent(pairs) => {
                let n = pairs.len().max(1) as f64;
                let (c, s) = pairs
                    .iter()
                    .fold((0.0, 0.0), |(c, s), p| (c + p.cooperation, s + p.shirking));
                NormPair::new(c / n, s / n)
            }
        }
    }
}

fn check_rate(h: f64) -> Result<(), ModelError> {
    if !(0.0..=1.0).contains(&h) {
        return Err(ModelError::InvalidParameter {
            name: "h",
            reason: format!("adjustment rate must lie in [0, 1], got {h}"),
        });
    }
    Ok(())
}

fn blend(prev: f64, observed: f64, h: f64) -> f64 {
    if h == 0.0 {
        prev
    } else if h == 1.0 {
        observed
    } else {
        (1.0 - h) * prev + h * observed
    }
}

pub fn update_global(prev: NormPair, behaviors: &[TimeAllocation], h: f64) -> Result<NormPair, ModelError> {
    check_rate(h)?;
    if behaviors.is_empty() {
        return Err(ModelError::EmptyPopulation);
    }
    let n = behaviors.len() as f64;
    let (c, s) = behaviors
        .iter()
        .fold((0.0, 0.0), |(c, s), b| (c + b.cooperation, s + b.shirking));
    Ok(NormPair::new(blend(prev.cooperation, c / n, h), blend(prev.shirking, s / n, h)))
}

fn update_from_peers<'a, I>(
    prev: &[NormPair],
    behaviors: &[TimeAllocation],
    peer_sets: I,
    h: f64,
    formula: NormFormula,
) -> Result<Vec<NormPair>, ModelError>
where
    I: Iterator<Item = &'a [usize]>,
{
    check_rate(h)?;
    if behaviors.is_empty() {
        return Err(ModelError::EmptyPopulation);
    }
    if prev.len() != behaviors.len() {
        return Err(ModelError::LengthMismatch {
            expected: behaviors.len(),
            actual: prev.len(),
        });
    }
    prev.iter()
        .zip(peer_sets)
        .map(|(own, peers)| {
            if peers.is_empty() {
                return Err(ModelError::EmptyPopulation);
            }
            let m = peers.len() as f64;
            let (c, s) = peers.iter().fold((0.0, 0.0), |(c, s), &j| {
                (c + behaviors[j].cooperation, s + behaviors[j].shirking)
            });
            Ok(match formula {
                NormFormula::WeightedAverage => {
                    NormPair::new(blend(own.cooperation, c / m, h), blend(own.shirking, s / m, h))
                }
                NormFormula::Literal => NormPair::new(
                    ((h * c - own.cooperation) / m).max(0.0),
                    ((h * s - own.shirking) / m).max(0.0),
                ),
            })
        })
        .collect()
}

pub fn update_neighbours(
    prev: &[NormPair],
    behaviors: &[TimeAllocation],
    topology: &GridTopology,
    h: f64,
    formula: NormFormula,
) -> Result<Vec<NormPair>, ModelError> {
    if topology.len() != behaviors.len() {
        return Err(ModelError::LengthMismatch {
            expected: behaviors.len(),
            actual: topology.len(),
        });
    }
    update_from_peers(prev, behaviors, topology.neighbour_sets().iter().map(|s| s.as_slice()), h, formula)
}

pub fn update_random(
    prev: &[NormPair],
    behaviors: &[TimeAllocation],
    peers: &[Vec<usize>],
    h: f64,
    formula: NormFormula,
) -> Result<Vec<NormPair>, ModelError> {
    if peers.len() != behaviors.len() {
        return Err(ModelError::LengthMismatch {
            expected: behaviors.len(),
            actual: peers.len(),
        });
    }
    update_from_peers(prev, behaviors, peers.iter().map(|p| p.as_slice()), h, formula)
}

/// For every agent, `peers` distinct other agents drawn without replacement.
pub fn sample_peers<R: Rng + ?Sized>(
    rng: &mut R,
    population: usize,
    peers: usize,
) -> Result<Vec<Vec<usize>>, ModelError> {
    if peers >= population {
        return Err(ModelError::TooManyPeers { peers, population });
    }
    Ok((0..population)
        .map(|agent| {
            rand::seq::index::sample(rng, population - 1, peers)
                .into_iter()
                .map(|j| if j >= agent { j + 1 } else { j })
                .collect()
        })
        .collect())
}

/// Toroidal grid; agent `i` sits at row `i / width`, column `i % width`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridTopology {
    width: usize,
    height: usize,
    neighbours: Vec<Vec<usize>>,
}

impl GridTopology {
    pub fn new(width: usize, height: usize) -> Result<Self, ModelError> {
        if width < 3 || height < 3 {
            return Err(ModelError::NonRectangularPopulation { agents: width * height });
        }
        let neighbours = (0..width * height)
            .map(|i| {
                let (row, col) = (i / width, i % width);
                let mut cells = Vec::with_capacity(8);
                for dr in [height - 1, 0, 1] {
                    for dc in [width - 1, 0, 1] {
                        if dr == 0 && dc == 0 {
                            continue;
                        }
                        cells.push(((row + dr) % height) * width + (col + dc) % width);
                    }
                }
                cells
            })
            .collect();
        Ok(GridTopology {
            width,
            height,
            neighbours,
        })
    }

    /// The most nearly square torus holding exactly `agents` cells.
    pub fn for_population(agents: usize) -> Result<Self, ModelError> {
        let mut best = None;
        let mut w = 3;
        while w * w <= agents {
            if agents % w == 0 && agents / w >= 3 {
                best = Some(w);
            }
            w += 1;
        }
        match best {
            Some(height) => GridTopology::new(agents / height, height),
            None => Err(ModelError::NonRectangularPopulation { agents }),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbours(&self, agent: usize) -> &[usize] {
        &self.neighbours[agent]
    }

    pub fn neighbour_sets(&self) -> &[Vec<usize>] {
        &self.neighbours
    }
}
