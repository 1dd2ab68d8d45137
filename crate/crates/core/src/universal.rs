//! Universal sets: vectors whose projections onto any `k` coordinates realize every pattern.
//!
//! Known asymptotic sizes are `O(k·2^k·log z)` for binary vectors, with explicit
//! constructions of size `2^k·log₂(z)·k^{O(log k)}`. Only the product construction and an
//! exact search for tiny parameters are provided here.

use alloc::{collections::BTreeSet, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{checked_pow, decode, encode, order_prefers, SwapInstance, Value};

/// A set of length-`z` vectors over `0..m` claimed universal at strength `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniversalSet {
    pub m: usize,
    pub z: usize,
    pub k: usize,
    pub vectors: Vec<Vec<Value>>,
}

impl UniversalSet {
    pub fn new(m: usize, z: usize, k: usize, vectors: Vec<Vec<Value>>) -> Result<Self> {
        if m < 2 || k > z {
            return Err(Error::InvalidSpec("universal set needs m ≥ 2 and k ≤ z".into()));
        }
        if vectors.iter().any(|v| v.len() != z || v.iter().any(|&x| x as usize >= m)) {
            return Err(Error::InvalidSpec("vector outside {0..m-1}^z".into()));
        }
        Ok(UniversalSet { m, z, k, vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_universal(&self) -> bool {
        is_universal(self)
    }

    /// Same vectors, checked at another strength.
    pub fn at_strength(&self, k: usize) -> UniversalSet {
        UniversalSet { k, ..self.clone() }
    }
}

/// Ascending `k`-subsets of `0..z` in lexicographic order.
pub fn combinations(z: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, z: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..z {
            if z - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, z, k, cur, out);
            cur.pop();
        }
    }
    rec(0, z, k, &mut cur, &mut out);
    out
}

pub fn is_universal(set: &UniversalSet) -> bool {
    let (m, z, k) = (set.m, set.z, set.k);
    if k > z {
        return false;
    }
    let Some(patterns) = checked_pow(m, k) else { return false };
    combinations(z, k).iter().all(|coords| {
        let mut seen = vec![false; patterns];
        let mut hit = 0;
        for v in &set.vectors {
            let p = encode(coords.iter().map(|&c| v[c]), m);
            if !core::mem::replace(&mut seen[p], true) {
                hit += 1;
            }
        }
        hit == patterns
    })
}

/// For every `k`-subset of coordinates and every pattern, one vector carrying the pattern
/// there and 0 elsewhere; duplicates removed.
pub fn construct_product(m: usize, z: usize, k: usize) -> Result<UniversalSet> {
    if m < 2 || k > z {
        return Err(Error::InvalidSpec("universal set needs m ≥ 2 and k ≤ z".into()));
    }
    let patterns = checked_pow(m, k).ok_or(Error::BudgetExceeded { what: "patterns", limit: usize::MAX as u64 })?;
    let mut set = BTreeSet::new();
    for coords in combinations(z, k) {
        for p in 0..patterns {
            let digits = decode(p, k, m);
            let mut v = vec![0; z];
            for (&c, &d) in coords.iter().zip(&digits) {
                v[c] = d;
            }
            set.insert(v);
        }
    }
    Ok(UniversalSet { m, z, k, vectors: set.into_iter().collect() })
}

struct CoverSearch {
    cover: Vec<Vec<u64>>,
    requirements: usize,
    per_vector: usize,
    nodes: u64,
    budget: u64,
}

impl CoverSearch {
    fn search(&mut self, covered: &mut Vec<u64>, count: usize, depth: usize, chosen: &mut Vec<usize>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { what: "universal set search nodes", limit: self.budget });
        }
        if count == self.requirements {
            return Ok(true);
        }
        if depth == 0 || (self.requirements - count) > depth * self.per_vector {
            return Ok(false);
        }
        let word = covered.iter().position(|w| *w != u64::MAX).expect("uncovered requirement");
        let req = word * 64 + (!covered[word]).trailing_zeros() as usize;
        for cand in 0..self.cover.len() {
            if self.cover[cand][req / 64] >> (req % 64) & 1 == 0 {
                continue;
            }
            let saved = covered.clone();
            let mut gained = 0;
            for (c, &bits) in covered.iter_mut().zip(&self.cover[cand]) {
                gained += (bits & !*c).count_ones() as usize;
                *c |= bits;
            }
            chosen.push(cand);
            if self.search(covered, count + gained, depth - 1, chosen)? {
                return Ok(true);
            }
            chosen.pop();
            *covered = saved;
        }
        Ok(false)
    }
}

/// Smallest universal set by iterative deepening over the size, starting at `m^k`.
///
/// Without loss of generality the all-zero vector is included (values can be relabeled
/// per coordinate); each level branches on the vectors covering the first uncovered
/// (coordinate set, pattern) requirement.
pub fn construct_minimal(m: usize, z: usize, k: usize, budget: u64) -> Result<UniversalSet> {
    if m < 2 || k > z {
        return Err(Error::InvalidSpec("universal set needs m ≥ 2 and k ≤ z".into()));
    }
    let space = checked_pow(m, z)
        .filter(|&s| s <= 1 << 16)
        .ok_or(Error::BudgetExceeded { what: "candidate vectors", limit: 1 << 16 })?;
    let coords = combinations(z, k);
    let patterns = checked_pow(m, k).expect("m^k fits when m^z does");
    let requirements = coords.len() * patterns;
    let words = requirements.div_ceil(64).max(1);
    let cover: Vec<Vec<u64>> = (0..space)
        .map(|idx| {
            let v = decode(idx, z, m);
            let mut bits = vec![0u64; words];
            for (ci, cs) in coords.iter().enumerate() {
                let r = ci * patterns + encode(cs.iter().map(|&c| v[c]), m);
                bits[r / 64] |= 1 << (r % 64);
            }
            bits
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    for r in requirements..words * 64 {
        full[r / 64] &= !(1u64 << (r % 64));
    }
    let mut search = CoverSearch { cover, requirements, per_vector: coords.len(), nodes: 0, budget };
    for size in patterns..=requirements.max(1) {
        let mut covered: Vec<u64> = full.iter().map(|w| !w).collect();
        let mut count = 0;
        for (c, &bits) in covered.iter_mut().zip(&search.cover[0]) {
            count += bits.count_ones() as usize;
            *c |= bits;
        }
        let mut chosen = vec![0];
        if search.search(&mut covered, count, size - 1, &mut chosen)? {
            chosen.sort_unstable();
            let vectors = chosen.into_iter().map(|i| decode(i, z, m)).collect();
            return Ok(UniversalSet { m, z, k, vectors });
        }
    }
    unreachable!("the full product set is always universal")
}

/// Lifts each vector onto the `n-1` variables other than `v`, preserving variable order.
/// Each returned context is a full assignment with `v` set to 0.
pub fn context_set(set: &UniversalSet, v: usize, n: usize) -> Result<Vec<Vec<Value>>> {
    if set.z + 1 != n || v >= n {
        return Err(Error::InvalidSpec("universal set length must be n-1".into()));
    }
    Ok(set
        .vectors
        .iter()
        .map(|u| {
            let mut full = Vec::with_capacity(n);
            full.extend_from_slice(&u[..v]);
            full.push(0);
            full.extend_from_slice(&u[v..]);
            full
        })
        .collect())
}

/// Swaps over one variable chaining a total order per context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapExpression {
    pub variable: usize,
    pub swaps: Vec<SwapInstance>,
}

/// For each context, the `m-1` canonical swaps between consecutive values of its order.
pub fn swap_expression(contexts: &[Vec<Value>], v: usize, orders: &[Vec<Value>]) -> SwapExpression {
    let swaps = contexts
        .iter()
        .zip(orders)
        .flat_map(|(ctx, order)| {
            order.windows(2).map(move |w| {
                let (a, b) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
                debug_assert!(order_prefers(order, w[0], w[1]));
                SwapInstance::over(ctx, v, a, b)
            })
        })
        .collect();
    SwapExpression { variable: v, swaps }
}
