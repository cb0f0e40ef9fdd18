//! The one-level hierarchy: two subordinates climb their own slice of the
//! decision space from a shared status quo, forward one proposal each, and a
//! decision maker turns the assembled proposals into the final decision.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{Genotype, Landscape, MAX_COMPONENTS};

/// A set of component indices, packed like [`Genotype`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mask {
    bits: u64,
    n: usize,
}

impl Mask {
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        if n == 0 || n > MAX_COMPONENTS {
            return Err(Error::InvalidComponentCount(n));
        }
        let mut bits = 0u64;
        for &i in indices {
            if i >= n {
                return Err(Error::ComponentIndex { index: i, n });
            }
            bits |= 1 << i;
        }
        Ok(Self { bits, n })
    }

    /// Components `start..end`.
    pub fn range(start: usize, end: usize, n: usize) -> Result<Self> {
        Self::new(&(start..end).collect::<Vec<_>>(), n)
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::range(0, n, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.bits >> i & 1 == 1
    }

    /// Member indices, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// Partition of the components between the two subordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionAssignment {
    masks: Vec<Mask>,
}

impl DecisionAssignment {
    pub const SUBORDINATES: usize = 2;

    pub fn new(masks: Vec<Mask>) -> Result<Self> {
        if masks.len() != Self::SUBORDINATES {
            return Err(Error::Assembly(format!(
                "expected {} subordinate masks, got {}",
                Self::SUBORDINATES,
                masks.len()
            )));
        }
        let n = masks[0].n();
        let mut seen = 0u64;
        for (s, m) in masks.iter().enumerate() {
            if m.n() != n {
                return Err(Error::Assembly("masks disagree on component count".into()));
            }
            if m.is_empty() {
                return Err(Error::Assembly(format!("subordinate {s} has no decisions")));
            }
            if seen & m.bits() != 0 {
                return Err(Error::Assembly("subordinate masks overlap".into()));
            }
            seen |= m.bits();
        }
        if seen != Mask::full(n)?.bits() {
            return Err(Error::Assembly("masks do not cover every component".into()));
        }
        Ok(Self { masks })
    }

    /// Subordinate A takes the first `a` components, B the next `b`.
    pub fn from_split(a: usize, b: usize) -> Result<Self> {
        let n = a + b;
        Self::new(vec![Mask::range(0, a, n)?, Mask::range(a, n, n)?])
    }

    pub fn n(&self) -> usize {
        self.masks[0].n()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionMakerMode {
    /// Accepts the assembled proposals as the decision.
    Passive,
    /// Keeps climbing over the whole decision space from the assembled proposals.
    Active,
}

impl DecisionMakerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionMakerMode::Passive => "passive",
            DecisionMakerMode::Active => "active",
        }
    }
}

impl fmt::Display for DecisionMakerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DecisionMakerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "passive" => Ok(DecisionMakerMode::Passive),
            "active" => Ok(DecisionMakerMode::Active),
            other => Err(Error::validation(
                "mode",
                format!("expected \"passive\" or \"active\", got {other:?}"),
            )),
        }
    }
}

/// The single alternative a subordinate forwards: values for its own
/// components, ascending by component index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposal {
    pub subordinate: usize,
    pub bits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeOutcome {
    pub status_quo: Genotype,
    pub proposals: Vec<Proposal>,
    pub assembled: Genotype,
    pub decision: Genotype,
    pub final_fitness: f64,
}

/// Steepest-ascent hill climbing restricted to `mask`, returning every visited
/// genotype starting with `start`.
///
/// Each step flips the masked bit giving the largest strict improvement; ties
/// go to the lowest component index. Stops when no single masked flip
/// improves fitness.
pub fn climb(landscape: &Landscape, start: &Genotype, mask: &Mask) -> Result<Vec<Genotype>> {
    landscape.check_arity(start)?;
    if mask.n() != landscape.n() {
        return Err(Error::Domain(format!(
            "mask over {} components used on landscape with {}",
            mask.n(),
            landscape.n()
        )));
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let mut current = *start;
    let mut current_fitness = landscape.fitness(&current)?;
    let mut path = vec![current];
    loop {
        let mut best: Option<(Genotype, f64)> = None;
        for i in mask.indices() {
            let candidate = current.flipped(i);
            let f = landscape.fitness(&candidate)?;
            let threshold = best.map_or(current_fitness, |(_, bf)| bf);
            if f > threshold {
                best = Some((candidate, f));
            }
        }
        match best {
            Some((next, f)) => {
                current = next;
                current_fitness = f;
                path.push(current);
            }
            None => return Ok(path),
        }
    }
}

/// Local optimum within `mask` reached by [`climb`] from `start`.
pub fn steepest_ascent(landscape: &Landscape, start: &Genotype, mask: &Mask) -> Result<Genotype> {
    climb(landscape, start, mask).map(|path| *path.last().expect("path holds the start"))
}

/// Climbs the subordinate's own components with everything else pinned at the
/// status quo, and forwards the result.
pub fn subordinate_propose(
    landscape: &Landscape,
    subordinate: usize,
    status_quo: &Genotype,
    mask: &Mask,
) -> Result<Proposal> {
    let reached = steepest_ascent(landscape, status_quo, mask)?;
    Ok(Proposal {
        subordinate,
        bits: mask.indices().map(|i| reached.get(i)).collect(),
    })
}

/// Overlays each subordinate's proposal onto the status quo.
pub fn assemble(
    status_quo: &Genotype,
    proposals: &[Proposal],
    assignment: &DecisionAssignment,
) -> Result<Genotype> {
    if status_quo.len() != assignment.n() {
        return Err(Error::GenotypeArity {
            expected: assignment.n(),
            actual: status_quo.len(),
        });
    }
    let masks = assignment.masks();
    let mut used = vec![false; masks.len()];
    let mut out = *status_quo;
    for p in proposals {
        let mask = masks
            .get(p.subordinate)
            .ok_or_else(|| Error::Assembly(format!("unknown subordinate {}", p.subordinate)))?;
        if std::mem::replace(&mut used[p.subordinate], true) {
            return Err(Error::Assembly(format!(
                "duplicate proposal from subordinate {}",
                p.subordinate
            )));
        }
        if p.bits.len() != mask.len() {
            return Err(Error::Assembly(format!(
                "subordinate {} proposed {} bits for {} decisions",
                p.subordinate,
                p.bits.len(),
                mask.len()
            )));
        }
        for (i, &b) in mask.indices().zip(&p.bits) {
            out = out.with(i, b);
        }
    }
    if let Some(missing) = used.iter().position(|u| !u) {
        return Err(Error::Assembly(format!(
            "missing proposal from subordinate {missing}"
        )));
    }
    Ok(out)
}

pub fn decide(
    landscape: &Landscape,
    assembled: &Genotype,
    mode: DecisionMakerMode,
) -> Result<Genotype> {
    landscape.check_arity(assembled)?;
    match mode {
        DecisionMakerMode::Passive => Ok(*assembled),
        DecisionMakerMode::Active => {
            steepest_ascent(landscape, assembled, &Mask::full(landscape.n())?)
        }
    }
}

/// Draws the status quo uniformly over all `2^n` genotypes: the low `n` bits
/// of one `u64` from `rng`.
pub fn draw_status_quo<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Genotype> {
    Genotype::new(rng.gen::<u64>(), n)
}

/// One episode with a random status quo.
pub fn run_episode<R: Rng + ?Sized>(
    landscape: &Landscape,
    assignment: &DecisionAssignment,
    mode: DecisionMakerMode,
    rng: &mut R,
) -> Result<EpisodeOutcome> {
    let status_quo = draw_status_quo(rng, landscape.n())?;
    run_episode_from(landscape, assignment, mode, status_quo)
}

/// One episode from a given status quo. Both subordinates search from the
/// same status quo without seeing each other's proposal.
pub fn run_episode_from(
    landscape: &Landscape,
    assignment: &DecisionAssignment,
    mode: DecisionMakerMode,
    status_quo: Genotype,
) -> Result<EpisodeOutcome> {
    if assignment.n() != landscape.n() {
        return Err(Error::Assembly(format!(
            "assignment covers {} components, landscape has {}",
            assignment.n(),
            landscape.n()
        )));
    }
    let proposals = assignment
        .masks()
        .iter()
        .enumerate()
        .map(|(s, mask)| subordinate_propose(landscape, s, &status_quo, mask))
        .collect::<Result<Vec<_>>>()?;
    let assembled = assemble(&status_quo, &proposals, assignment)?;
    let decision = decide(landscape, &assembled, mode)?;
    let final_fitness = landscape.fitness(&decision)?;
    Ok(EpisodeOutcome {
        status_quo,
        proposals,
        assembled,
        decision,
        final_fitness,
    })
}
