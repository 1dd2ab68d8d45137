//! Random nets for simulations.

use alloc::{vec, vec::Vec};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::model::{ClassSpec, CpNet, Cpt, Value};

/// A random net of the class: a random topological order, a uniform number of at most `k`
/// parents per variable drawn from its predecessors, and random rows redrawn until every
/// parent matters. Incomplete classes leave each row Empty with probability 1/4.
pub fn random_net<R: Rng + ?Sized>(spec: &ClassSpec, rng: &mut R) -> Result<CpNet> {
    spec.validate()?;
    let (n, m, k) = (spec.n, spec.m, spec.k);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut cpts: Vec<Option<Cpt>> = vec![None; n];
    for (pos, &v) in order.iter().enumerate() {
        let count = rng.gen_range(0..=k.min(pos));
        let mut parents: Vec<usize> = order[..pos].choose_multiple(rng, count).copied().collect();
        parents.sort_unstable();
        let cpt = loop {
            let rows = (0..m.pow(parents.len() as u32))
                .map(|_| {
                    if !spec.is_complete() && rng.gen_ratio(1, 4) {
                        return None;
                    }
                    let mut row: Vec<Value> = (0..m as Value).collect();
                    row.shuffle(rng);
                    Some(row)
                })
                .collect();
            let cpt = Cpt::new(v, parents.clone(), rows, m)?;
            if cpt.is_minimal() {
                break cpt;
            }
        };
        cpts[v] = Some(cpt);
    }
    CpNet::new(*spec, cpts.into_iter().map(|c| c.expect("every variable placed")).collect())
}

/// A random net in which every variable has at most one parent and every row is complete.
pub fn random_tree<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<CpNet> {
    random_net(&ClassSpec::complete(n, m, 1.min(n.saturating_sub(1)))?, rng)
}
