//! Oracles shared by the integration and acceptance targets. Written without
//! any reference to the library's internals.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tables exactly as the generator should draw them: component by component,
/// key by key, one uniform f64 each.
pub fn draw_tables(n: usize, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..1usize << (k + 1)).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

pub fn influencers(n: usize, k: usize, i: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=k).map(|d| (i + d) % n).collect();
    v.sort();
    v
}

pub fn oracle_fitness(tables: &[Vec<f64>], weights: &[f64], k: usize, bits: &[u8]) -> f64 {
    let n = bits.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut key = String::new();
        key.push(if bits[i] == 1 { '1' } else { '0' });
        for j in influencers(n, k, i) {
            key.push(if bits[j] == 1 { '1' } else { '0' });
        }
        let idx = usize::from_str_radix(&key, 2).unwrap();
        total += weights[i] * tables[i][idx];
    }
    total
}

pub fn to_bits(x: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((x >> i) & 1) as u8).collect()
}

pub fn bits_str(bits: &[u8]) -> String {
    bits.iter()
        .map(|b| if *b == 1 { '1' } else { '0' })
        .collect()
}

/// Second exhaustive pass, walking the space from the top down.
pub fn oracle_optimum(
    tables: &[Vec<f64>],
    weights: &[f64],
    k: usize,
    n: usize,
) -> (f64, Vec<String>) {
    let values: Vec<(u64, f64)> = (0..1u64 << n)
        .rev()
        .map(|x| (x, oracle_fitness(tables, weights, k, &to_bits(x, n))))
        .collect();
    let best = values.iter().map(|v| v.1).fold(f64::MIN, f64::max);
    let mut arg: Vec<String> = values
        .iter()
        .filter(|v| v.1 == best)
        .map(|v| bits_str(&to_bits(v.0, n)))
        .collect();
    arg.sort();
    (best, arg)
}

pub struct OracleTrial {
    pub status_quo: String,
    pub decision: String,
    pub final_fitness: f64,
    pub optimum: f64,
    pub is_optimal: bool,
    pub rate: f64,
}

pub fn oracle_climb(
    tables: &[Vec<f64>],
    w: &[f64],
    k: usize,
    start: &[u8],
    allowed: &[usize],
) -> Vec<u8> {
    let mut cur = start.to_vec();
    loop {
        let here = oracle_fitness(tables, w, k, &cur);
        let mut best_gain_at: Option<(usize, f64)> = None;
        for &i in allowed {
            let mut next = cur.clone();
            next[i] = 1 - next[i];
            let f = oracle_fitness(tables, w, k, &next);
            let bar = match best_gain_at {
                Some((_, bf)) => bf,
                None => here,
            };
            if f > bar {
                best_gain_at = Some((i, f));
            }
        }
        match best_gain_at {
            Some((i, _)) => cur[i] = 1 - cur[i],
            None => return cur,
        }
    }
}

/// generate -> status quo -> two simultaneous climbs -> assemble -> decide,
/// straight through.
pub fn oracle_trial(split: (usize, usize), active: bool, trial_seed: u64) -> OracleTrial {
    let n = split.0 + split.1;
    let k = n - 1;
    let w = vec![1.0 / n as f64; n];
    let tables = draw_tables(n, k, trial_seed);

    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    rng.set_stream(1);
    let raw: u64 = rng.gen();
    let sq = to_bits(raw, n);

    let a: Vec<usize> = (0..split.0).collect();
    let b: Vec<usize> = (split.0..n).collect();
    let from_a = oracle_climb(&tables, &w, k, &sq, &a);
    let from_b = oracle_climb(&tables, &w, k, &sq, &b);
    let mut assembled = sq.clone();
    for &i in &a {
        assembled[i] = from_a[i];
    }
    for &i in &b {
        assembled[i] = from_b[i];
    }
    let all: Vec<usize> = (0..n).collect();
    let decision = if active {
        oracle_climb(&tables, &w, k, &assembled, &all)
    } else {
        assembled
    };
    let final_fitness = oracle_fitness(&tables, &w, k, &decision);
    let (optimum, arg) = oracle_optimum(&tables, &w, k, n);
    let is_optimal = arg.contains(&bits_str(&decision));
    OracleTrial {
        status_quo: bits_str(&sq),
        decision: bits_str(&decision),
        final_fitness,
        optimum,
        is_optimal,
        rate: if is_optimal {
            1.0
        } else {
            final_fitness / optimum
        },
    }
}
