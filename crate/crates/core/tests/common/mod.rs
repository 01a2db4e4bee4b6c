#![allow(dead_code)]

use morrey_core::SparseSequence;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sequence with `1..=max_len` support points in `[lo, hi]` and
/// integer values in `1..=5`.
pub fn random_sequence(rng: &mut ChaCha8Rng, lo: i128, hi: i128, max_len: usize) -> SparseSequence {
    let len = rng.gen_range(1..=max_len);
    let pairs: Vec<(i128, f64)> = (0..len)
        .map(|_| (rng.gen_range(lo..=hi), rng.gen_range(1..=5) as f64))
        .collect();
    // Duplicates keep the first value.
    let mut seen = std::collections::BTreeMap::new();
    for (i, v) in pairs {
        seen.entry(i).or_insert(v);
    }
    SparseSequence::from_pairs(seen).unwrap()
}

/// Random `1 <= p <= q <= q_max`, with `p = q` about one time in ten.
pub fn random_exponents(rng: &mut ChaCha8Rng, q_max: f64) -> (f64, f64) {
    let a = rng.gen_range(1.0..=q_max);
    if rng.gen_bool(0.1) {
        return (a, a);
    }
    let b = rng.gen_range(1.0..=q_max);
    (a.min(b), a.max(b))
}

/// Random corpus for the oracle and constant checks.
pub fn discrete_corpus(seed: u64, count: usize) -> Vec<(SparseSequence, f64, f64)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let seq = random_sequence(&mut r, -50, 50, 30);
            let (p, q) = random_exponents(&mut r, 8.0);
            (seq, p, q)
        })
        .collect()
}

/// Small sequences with support inside a window of 13 cells.
pub fn step_corpus(seed: u64, count: usize) -> Vec<(SparseSequence, f64, f64)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let base = r.gen_range(-20..=20);
            let seq = random_sequence(&mut r, base, base + 12, 6);
            let (p, q) = random_exponents(&mut r, 8.0);
            (seq, p, q)
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Continuous norm by brute grid search plus local pattern search, using a
/// plain running integral. Shares no code with the library engine.
pub struct GridOracle {
    cells: Vec<(f64, f64)>,
    p: f64,
    alpha: f64,
}

impl GridOracle {
    pub fn new(seq: &SparseSequence, p: f64, q: f64) -> Self {
        let cells = seq
            .iter()
            .map(|(i, v)| (i as f64, v.abs().powf(p)))
            .collect();
        Self {
            cells,
            p,
            alpha: 1.0 / q - 1.0 / p,
        }
    }

    fn integral_to(&self, t: f64) -> f64 {
        self.cells
            .iter()
            .map(|&(c, m)| m * (t - c).clamp(0.0, 1.0))
            .sum()
    }

    pub fn objective(&self, l: f64, r: f64) -> f64 {
        if r <= l {
            return 0.0;
        }
        let mass = self.integral_to(r) - self.integral_to(l);
        if mass <= 0.0 {
            return 0.0;
        }
        (r - l).powf(self.alpha) * mass.powf(1.0 / self.p)
    }

    /// Grid of spacing `h` over the hull of the support, then refinement of
    /// the best few grid points down to step `1e-9`.
    pub fn norm(&self, h: f64) -> f64 {
        let lo = self.cells.first().map(|c| c.0).unwrap_or(0.0);
        let hi = self.cells.last().map(|c| c.0 + 1.0).unwrap_or(0.0);
        let steps = ((hi - lo) / h).round() as usize;
        let grid: Vec<f64> = (0..=steps).map(|i| lo + i as f64 * h).collect();
        let prefix: Vec<f64> = grid.iter().map(|&t| self.integral_to(t)).collect();
        let mut top: Vec<(f64, f64, f64)> = Vec::new();
        for a in 0..grid.len() {
            for b in a + 1..grid.len() {
                let mass = prefix[b] - prefix[a];
                if mass <= 0.0 {
                    continue;
                }
                let v = (grid[b] - grid[a]).powf(self.alpha) * mass.powf(1.0 / self.p);
                if top.len() < 8 || v > top[top.len() - 1].0 {
                    top.push((v, grid[a], grid[b]));
                    top.sort_by(|x, y| y.0.total_cmp(&x.0));
                    top.truncate(8);
                }
            }
        }
        top.iter()
            .map(|&(_, l, r)| self.refine(l, r, h))
            .fold(0.0, f64::max)
    }

    fn refine(&self, mut l: f64, mut r: f64, h: f64) -> f64 {
        let mut best = self.objective(l, r);
        let mut step = h;
        while step > 1e-9 {
            let mut moved = false;
            for (dl, dr) in [
                (-1.0, 0.0),
                (1.0, 0.0),
                (0.0, -1.0),
                (0.0, 1.0),
                (-1.0, 1.0),
                (1.0, -1.0),
                (1.0, 1.0),
                (-1.0, -1.0),
            ] {
                let (nl, nr) = (l + dl * step, r + dr * step);
                let v = self.objective(nl, nr);
                if v > best {
                    best = v;
                    l = nl;
                    r = nr;
                    moved = true;
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        best
    }
}

/// Inclusion criterion in exact integer arithmetic for integer exponents.
pub fn included_exact(p1: u32, q1: u32, p2: u32, q2: u32) -> bool {
    q2 <= q1 && p1 * q2 <= p2 * q1
}

/// `(p, q)` pairs with `p in {1,2,3}`, `q in {2,4,6}`, `p <= q`.
pub fn exponent_grid() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in [1, 2, 3] {
        for q in [2, 4, 6] {
            if p <= q {
                out.push((p, q));
            }
        }
    }
    out
}
