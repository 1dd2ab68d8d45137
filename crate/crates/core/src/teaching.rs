//! Constructive teaching sets and their verification against explicit classes.

use alloc::{collections::BTreeSet, vec::Vec};

use crate::classes::{ConceptClass, Labels};
use crate::error::{Error, Result};
use crate::model::{is_maximal_in_class, ClassSpec, CpNet, SwapInstance, Value};
use crate::universal::{context_set, swap_expression, UniversalSet};

/// Labeled swap examples meant to single out `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeachingSet {
    pub examples: Vec<(SwapInstance, bool)>,
    pub target: CpNet,
}

impl TeachingSet {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    fn push_unique(&mut self, seen: &mut BTreeSet<SwapInstance>, x: SwapInstance) {
        if seen.insert(x.clone()) {
            let label = self.target.evaluate(&x);
            self.examples.push((x, label));
        }
    }
}

/// Two swaps over `child` whose contexts differ only at `witness_parent` and whose labels differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictPair {
    pub x: SwapInstance,
    pub x2: SwapInstance,
    pub child: usize,
    pub witness_parent: usize,
}

/// Whether `(x, x2)` is a conflict pair under `net`.
pub fn is_conflict_pair(net: &CpNet, x: &SwapInstance, x2: &SwapInstance) -> Option<usize> {
    if x.swapped() != x2.swapped() || x.swapped_values() != x2.swapped_values() {
        return None;
    }
    let diff: Vec<usize> = (0..x.n()).filter(|&i| x.first().get(i) != x2.first().get(i)).collect();
    match diff[..] {
        [p] if net.evaluate(x) != net.evaluate(x2) => Some(p),
        _ => None,
    }
}

/// The least `x2` (by changed value of `parent`) completing `x` to a conflict pair.
pub fn complete_conflict_pair(net: &CpNet, x: &SwapInstance, parent: usize) -> Option<ConflictPair> {
    let here = x.first().get(parent);
    (0..net.m() as Value).filter(|&r| r != here).find_map(|r| {
        let x2 = SwapInstance::new(x.first().with(parent, r), x.second().with(parent, r)).ok()?;
        (net.evaluate(&x2) != net.evaluate(x))
            .then(|| ConflictPair { x: x.clone(), x2, child: x.swapped(), witness_parent: parent })
    })
}

/// Exhaustive search over the swaps of `child` for a conflict pair given `parent`. Both
/// directions are searched when the class allows Empty rows.
pub fn find_conflict_pair(net: &CpNet, child: usize, parent: usize) -> Option<ConflictPair> {
    crate::model::instance_space(net.spec(), !net.spec().is_complete())
        .into_iter()
        .filter(|x| x.swapped() == child)
        .find_map(|x| complete_conflict_pair(net, &x, parent))
}

fn in_class(net: &CpNet, spec: &ClassSpec) -> Result<CpNet> {
    if net.n() != spec.n || net.m() != spec.m {
        return Err(Error::InvalidSpec("net and class differ in n or m".into()));
    }
    net.with_spec(*spec)
}

/// Context of a CPT row with non-parents fixed to 0.
fn row_context(net: &CpNet, v: usize, row: usize) -> Vec<Value> {
    let mut ctx = alloc::vec![0; net.n()];
    for (&p, val) in net.parents(v).iter().zip(net.cpt(v).context_of(row)) {
        ctx[p] = val;
    }
    ctx
}

/// `m-1` chained swaps per statement, non-parents fixed to 0.
pub fn teaching_set_maximal(net: &CpNet, spec: &ClassSpec) -> Result<TeachingSet> {
    let net = in_class(net, spec)?;
    if !is_maximal_in_class(&net) {
        return Err(Error::NotMaximal);
    }
    let mut t = TeachingSet { examples: Vec::new(), target: net.clone() };
    let mut seen = BTreeSet::new();
    for v in 0..net.n() {
        for (row, order) in net.cpt(v).rows().iter().enumerate() {
            let order = order.as_ref().expect("maximal nets are complete");
            let expr = swap_expression(&[row_context(&net, v, row)], v, core::slice::from_ref(order));
            for x in expr.swaps {
                t.push_unique(&mut seen, x);
            }
        }
    }
    Ok(t)
}

fn check_universal(u: &UniversalSet, spec: &ClassSpec) -> Result<()> {
    if u.m != spec.m || u.z + 1 != spec.n || !u.at_strength(spec.k).is_universal() {
        return Err(Error::UniversalSetTooWeak);
    }
    Ok(())
}

fn universal_construction(net: &CpNet, u: &UniversalSet, both_directions: bool) -> Result<TeachingSet> {
    let (n, m) = (net.n(), net.m());
    let identity: Vec<Value> = (0..m as Value).collect();
    let mut t = TeachingSet { examples: Vec::new(), target: net.clone() };
    let mut seen = BTreeSet::new();
    for v in 0..n {
        let contexts = context_set(u, v, n)?;
        let orders: Vec<Vec<Value>> = contexts
            .iter()
            .map(|c| net.cpt(v).row_for(c).map_or_else(|| identity.clone(), <[Value]>::to_vec))
            .collect();
        let mut expr = swap_expression(&contexts, v, &orders).swaps;
        if both_directions {
            expr = expr.into_iter().flat_map(|x| [x.clone(), x.reversed()]).collect();
        }
        for x in &expr {
            t.push_unique(&mut seen, x.clone());
        }
        expr.sort();
        for &p in net.parents(v) {
            let pair = expr
                .iter()
                .find_map(|x| complete_conflict_pair(net, x, p))
                .ok_or(Error::UniversalSetTooWeak)?;
            t.push_unique(&mut seen, pair.x2);
        }
    }
    Ok(t)
}

/// Swap expressions of the context sets imposed by `u`, plus one conflict-pair completion
/// per edge.
pub fn teaching_set_universal(net: &CpNet, spec: &ClassSpec, u: &UniversalSet) -> Result<TeachingSet> {
    let net = in_class(net, spec)?;
    if !net.is_complete() {
        return Err(Error::InvalidSpec("target must be complete".into()));
    }
    check_universal(u, spec)?;
    universal_construction(&net, u, false)
}

/// As [`teaching_set_universal`] with every swap-expression example in both directions.
/// Empty rows are chained along the identity order.
pub fn teaching_set_incomplete(net: &CpNet, spec: &ClassSpec, u: &UniversalSet) -> Result<TeachingSet> {
    let net = in_class(net, spec)?;
    check_universal(u, spec)?;
    universal_construction(&net, u, true)
}

/// True iff exactly one concept of `class` agrees with every example and it is the target.
pub fn verify_teaching_set(t: &TeachingSet, class: &ConceptClass) -> bool {
    let target = class.labels_of(&t.target);
    let mut mask: Labels = 0;
    let mut want: Labels = 0;
    for (x, label) in &t.examples {
        let Some(i) = class.instance_position(x) else { return false };
        if t.target.evaluate(x) != *label {
            return false;
        }
        mask |= 1 << i;
        if *label {
            want |= 1 << i;
        }
    }
    let mut consistent = class.concepts().iter().filter(|c| c.labels & mask == want);
    matches!((consistent.next(), consistent.next()), (Some(c), None) if c.labels == target)
}
