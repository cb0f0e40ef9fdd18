//! NK fitness landscapes.
//!
//! A landscape over `n` binary decision components assigns every component a
//! contribution table indexed by its *local configuration*: the component's own
//! bit followed by the bits of the `k` components that influence it, in
//! ascending component order. Fitness is the weighted sum of the looked-up
//! contributions.
//!
//! Generation is a pure function of `(n, k, weights, seed)`. Table entries are
//! drawn from a ChaCha8 stream seeded with `seed`, component by component, and
//! within a component in ascending key order. Each entry is a uniform `f64` on
//! `[0, 1)` with 53 bits of precision.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Genotypes are packed into a `u64`, one bit per component.
pub const MAX_COMPONENTS: usize = 64;
/// Largest `n` for which [`Landscape::global_optimum`] will enumerate.
pub const MAX_ENUMERATION: usize = 30;
/// Largest `k` accepted by the generator; tables hold `2^(k+1)` entries.
pub const MAX_INTERACTION: usize = 20;
/// Tolerance on the sum of a weight vector.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// One full assignment of the `n` binary decision components.
///
/// Component `i` (0-based) lives in bit `i`. The textual form lists components
/// left to right, so `"10"` sets component 0 and clears component 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genotype {
    bits: u64,
    len: usize,
}

impl Genotype {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_COMPONENTS {
            return Err(Error::InvalidComponentCount(len));
        }
        Ok(Self {
            bits: bits & low_mask(len),
            len,
        })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let packed = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Self::new(packed, bits.len())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed representation, component `i` in bit `i`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Value of component `i`; panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "component {i} out of range for len {}",
            self.len
        );
        self.bits >> i & 1 == 1
    }

    pub fn with(&self, i: usize, value: bool) -> Self {
        assert!(
            i < self.len,
            "component {i} out of range for len {}",
            self.len
        );
        let bits = if value {
            self.bits | 1 << i
        } else {
            self.bits & !(1 << i)
        };
        Self {
            bits,
            len: self.len,
        }
    }

    pub fn flipped(&self, i: usize) -> Self {
        assert!(
            i < self.len,
            "component {i} out of range for len {}",
            self.len
        );
        Self {
            bits: self.bits ^ 1 << i,
            len: self.len,
        }
    }

    /// Number of components on which `self` and `other` differ.
    pub fn hamming(&self, other: &Genotype) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genotype({self})")
    }
}

impl FromStr for Genotype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!(
                    "invalid genotype character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits)
    }
}

/// Non-negative component weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("weight vector is empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and non-negative, got {w}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(weights))
    }

    /// Every component weighted `1/n`.
    pub fn equal(n: usize) -> Self {
        assert!(n > 0, "equal weights need at least one component");
        Self(vec![1.0 / n as f64; n])
    }

    /// Normalizes non-negative raw weights to sum to one.
    pub fn proportional(raw: &[f64]) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidWeights(format!(
                "raw weights must have a positive finite sum, got {total}"
            )));
        }
        Self::new(raw.iter().map(|w| w / total).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_equal(&self) -> bool {
        let n = self.0.len() as f64;
        self.0
            .iter()
            .all(|w| (w - 1.0 / n).abs() <= WEIGHT_SUM_TOLERANCE)
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(value: WeightVector) -> Self {
        value.0
    }
}

/// Lookup key into a [`ContributionTable`]: own bit first (most significant),
/// then influencer bits in ascending component order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalKey {
    index: usize,
    width: usize,
}

impl LocalKey {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

impl fmt::Display for LocalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.index, width = self.width)
    }
}

impl fmt::Debug for LocalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalKey({self})")
    }
}

/// Contribution values of one component, indexed by [`LocalKey::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct ContributionTable {
    component: usize,
    values: Vec<f64>,
}

impl ContributionTable {
    pub fn component(&self) -> usize {
        self.component
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, key: LocalKey) -> f64 {
        self.values[key.index]
    }
}

/// Every genotype attaining the maximum fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimumReport {
    pub argmax: Vec<Genotype>,
    pub optimum_fitness: f64,
}

impl OptimumReport {
    pub fn contains(&self, g: &Genotype) -> bool {
        self.argmax.contains(g)
    }
}

/// An immutable NK landscape.
#[derive(Clone, Debug, PartialEq)]
pub struct Landscape {
    n: usize,
    k: usize,
    influencers: Vec<Vec<usize>>,
    tables: Vec<ContributionTable>,
    weights: WeightVector,
    seed: u64,
}

impl Landscape {
    /// Draws a fresh landscape. See the module docs for the exact draw order.
    pub fn generate(n: usize, k: usize, weights: WeightVector, seed: u64) -> Result<Self> {
        check_shape(n, k, &weights)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = 1usize << (k + 1);
        let tables = (0..n)
            .map(|component| ContributionTable {
                component,
                values: (0..entries).map(|_| rng.gen::<f64>()).collect(),
            })
            .collect();
        Ok(Self {
            n,
            k,
            influencers: influence_map(n, k),
            tables,
            weights,
            seed,
        })
    }

    /// Builds a landscape from explicit tables, one per component, each with
    /// `2^(k+1)` entries in `[0, 1)`. The generation seed is recorded as 0.
    pub fn from_tables(k: usize, tables: Vec<Vec<f64>>, weights: WeightVector) -> Result<Self> {
        let n = tables.len();
        check_shape(n, k, &weights)?;
        let entries = 1usize << (k + 1);
        for (i, t) in tables.iter().enumerate() {
            if t.len() != entries {
                return Err(Error::Domain(format!(
                    "table {i} has {} entries, expected {entries}",
                    t.len()
                )));
            }
            if let Some(v) = t.iter().find(|v| !(0.0..1.0).contains(*v)) {
                return Err(Error::Domain(format!("table {i} value {v} outside [0, 1)")));
            }
        }
        Ok(Self {
            n,
            k,
            influencers: influence_map(n, k),
            tables: tables
                .into_iter()
                .enumerate()
                .map(|(component, values)| ContributionTable { component, values })
                .collect(),
            weights,
            seed: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn tables(&self) -> &[ContributionTable] {
        &self.tables
    }

    /// Components influencing component `i`, ascending.
    pub fn influencers(&self, i: usize) -> &[usize] {
        &self.influencers[i]
    }

    pub fn local_configuration(&self, i: usize, g: &Genotype) -> Result<LocalKey> {
        self.check_arity(g)?;
        if i >= self.n {
            return Err(Error::ComponentIndex {
                index: i,
                n: self.n,
            });
        }
        Ok(self.key_unchecked(i, g.bits()))
    }

    fn key_unchecked(&self, i: usize, bits: u64) -> LocalKey {
        let index = self.influencers[i]
            .iter()
            .fold((bits >> i & 1) as usize, |acc, &j| {
                acc << 1 | (bits >> j & 1) as usize
            });
        LocalKey {
            index,
            width: self.k + 1,
        }
    }

    /// Weighted sum of component contributions.
    pub fn fitness(&self, g: &Genotype) -> Result<f64> {
        self.check_arity(g)?;
        Ok(self.fitness_bits(g.bits()))
    }

    fn fitness_bits(&self, bits: u64) -> f64 {
        let mut total = 0.0;
        for (i, (w, table)) in self.weights.as_slice().iter().zip(&self.tables).enumerate() {
            total += w * table.get(self.key_unchecked(i, bits));
        }
        total
    }

    /// Exhaustively evaluates all `2^n` genotypes.
    pub fn global_optimum(&self) -> Result<OptimumReport> {
        if self.n > MAX_ENUMERATION {
            return Err(Error::EnumerationTooLarge(self.n));
        }
        let mut best = f64::NEG_INFINITY;
        let mut argmax = Vec::new();
        for bits in 0..1u64 << self.n {
            let f = self.fitness_bits(bits);
            if f > best {
                best = f;
                argmax.clear();
            }
            if f == best {
                argmax.push(Genotype { bits, len: self.n });
            }
        }
        Ok(OptimumReport {
            argmax,
            optimum_fitness: best,
        })
    }

    pub fn check_arity(&self, g: &Genotype) -> Result<()> {
        if g.len() != self.n {
            return Err(Error::GenotypeArity {
                expected: self.n,
                actual: g.len(),
            });
        }
        Ok(())
    }

    /// Debug dump: `{n, k, seed, weights, tables}` with tables keyed by
    /// bit-string local configuration.
    pub fn to_json(&self) -> String {
        let dump = LandscapeDump {
            n: self.n,
            k: self.k,
            seed: self.seed,
            weights: self.weights.as_slice().to_vec(),
            tables: self
                .tables
                .iter()
                .map(|t| {
                    t.values
                        .iter()
                        .enumerate()
                        .map(|(index, &v)| {
                            let key = LocalKey {
                                index,
                                width: self.k + 1,
                            };
                            (key.to_string(), v)
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dump).expect("landscape dump is always serializable")
    }
}

#[derive(Serialize)]
struct LandscapeDump {
    n: usize,
    k: usize,
    seed: u64,
    weights: Vec<f64>,
    tables: Vec<BTreeMap<String, f64>>,
}

fn check_shape(n: usize, k: usize, weights: &WeightVector) -> Result<()> {
    if n == 0 || n > MAX_COMPONENTS {
        return Err(Error::InvalidComponentCount(n));
    }
    if k >= n || k > MAX_INTERACTION {
        return Err(Error::InvalidInteractionDegree { n, k });
    }
    if weights.len() != n {
        return Err(Error::InvalidWeights(format!(
            "expected {n} weights, got {}",
            weights.len()
        )));
    }
    Ok(())
}

// The k components following i cyclically, sorted ascending. For k = n-1
// this is every other component.
fn influence_map(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| {
            let mut others: Vec<usize> = (1..=k).map(|d| (i + d) % n).collect();
            others.sort_unstable();
            others
        })
        .collect()
}

fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}
