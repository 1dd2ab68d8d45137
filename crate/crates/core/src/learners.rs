//! Exact learners from swap membership queries.
//!
//! Query counts are distinct instances charged to the session during the run.

use alloc::{collections::BTreeMap, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{decode, order_prefers, ClassSpec, CpNet, Cpt, Outcome, SwapInstance, Value};
use crate::oracles::{f_ball, OracleAnswer, OracleSession};
use crate::teaching::ConflictPair;
use crate::universal::{construct_product, context_set, UniversalSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnResult {
    pub net: CpNet,
    pub queries_used: usize,
    pub transcript: Vec<(SwapInstance, OracleAnswer)>,
}

/// How each learner query is turned into a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    #[default]
    None,
    /// Majority over the distance-1 neighbors when the oracle answers "don't know".
    Lim,
    /// Majority over the distance-1 neighbors for every query.
    Mal,
}

/// Relation between the two outcomes of a swap as read from both query directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pref {
    Forward,
    Backward,
    Incomparable,
}

impl Pref {
    fn row(self) -> Option<Vec<Value>> {
        match self {
            Pref::Forward => Some(vec![0, 1]),
            Pref::Backward => Some(vec![1, 0]),
            Pref::Incomparable => None,
        }
    }
}

/// The `m` test sets of a variable: set `j` varies the variable over every value while all
/// other variables take value `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSetFamily {
    pub variable: usize,
    pub sets: Vec<Vec<Outcome>>,
}

pub fn test_sets(spec: &ClassSpec, v: usize) -> TestSetFamily {
    let sets = (0..spec.m as Value)
        .map(|j| (0..spec.m as Value).map(|r| Outcome::from(vec![j; spec.n]).with(v, r)).collect())
        .collect();
    TestSetFamily { variable: v, sets }
}

struct Asker<'a> {
    session: &'a mut OracleSession,
    strategy: Strategy,
    spec: ClassSpec,
}

impl Asker<'_> {
    fn majority(&mut self, x: &SwapInstance) -> Result<bool> {
        let (mut yes, mut no) = (0usize, 0usize);
        for y in f_ball(x, 1, &self.spec) {
            match self.session.answer(&y)? {
                OracleAnswer::Yes => yes += 1,
                OracleAnswer::No => no += 1,
                OracleAnswer::Unknown => {}
            }
        }
        match yes.cmp(&no) {
            core::cmp::Ordering::Greater => Ok(true),
            core::cmp::Ordering::Less => Ok(false),
            core::cmp::Ordering::Equal => Err(Error::MajorityTie),
        }
    }

    fn label(&mut self, x: &SwapInstance) -> Result<bool> {
        match self.strategy {
            Strategy::None => self.session.answer(x)?.label().ok_or(Error::UnexpectedUnknown),
            Strategy::Lim => match self.session.answer(x)?.label() {
                Some(l) => Ok(l),
                None => self.majority(x),
            },
            Strategy::Mal => self.majority(x),
        }
    }

    fn pref(&mut self, x: &SwapInstance) -> Result<Pref> {
        match (self.label(x)?, self.label(&x.reversed())?) {
            (true, false) => Ok(Pref::Forward),
            (false, true) => Ok(Pref::Backward),
            (false, false) => Ok(Pref::Incomparable),
            (true, true) => Err(Error::OracleContradiction(alloc::format!("both directions of {x} answered yes"))),
        }
    }
}

/// `ask(x)` with a majority vote fallback per `strategy`.
pub fn robust_answer(session: &mut OracleSession, x: &SwapInstance, strategy: Strategy, spec: &ClassSpec) -> Result<bool> {
    Asker { session, strategy, spec: *spec }.label(x)
}

/// Binary search for a variable of `candidates` that flips the answer between `anchor` and
/// `other`, two swaps over the same variable and value pair whose contexts agree outside
/// `candidates`. The pair stays a genuine conflict after every step.
fn search_parent<T: PartialEq>(
    ask: &mut dyn FnMut(&SwapInstance) -> Result<T>,
    mut anchor: SwapInstance,
    mut other: SwapInstance,
    mut d: Vec<usize>,
) -> Result<usize> {
    let v = anchor.swapped();
    let (a, b) = anchor.swapped_values();
    if other.swapped() != v || other.swapped_values() != (a, b) || d.contains(&v) {
        return Err(Error::NoParentFound);
    }
    let (ca, co) = (anchor.first().values(), other.first().values());
    if (0..anchor.n()).any(|i| i != v && ca[i] != co[i] && !d.contains(&i)) {
        return Err(Error::NoParentFound);
    }
    let first = ask(&anchor)?;
    if first == ask(&other)? {
        return Err(Error::NoParentFound);
    }
    while d.len() > 1 {
        let h = d.len().div_ceil(2);
        let mut ctx = anchor.first().values().to_vec();
        for &i in &d[h..] {
            ctx[i] = other.first().get(i);
        }
        let q = SwapInstance::over(&ctx, v, a, b);
        if ask(&q)? != first {
            other = q;
            d.drain(..h);
        } else {
            anchor = q;
            d.truncate(h);
        }
    }
    let p = *d.first().ok_or(Error::NoParentFound)?;
    if anchor.first().get(p) == other.first().get(p) {
        return Err(Error::NoParentFound);
    }
    Ok(p)
}

/// Finds a parent of the conflict pair's child among `candidates` against a complete oracle.
/// Uses at most `⌈log₂|candidates|⌉` queries beyond the pair itself.
pub fn find_parent(session: &mut OracleSession, conflict: &ConflictPair, candidates: &[usize]) -> Result<usize> {
    let spec = match session.target() {
        Some(t) => *t.spec(),
        None => ClassSpec::complete(conflict.x.n(), 2, 0)?,
    };
    let mut asker = Asker { session, strategy: Strategy::None, spec };
    search_parent(&mut |x: &SwapInstance| asker.label(x), conflict.x.clone(), conflict.x2.clone(), candidates.to_vec())
}

fn start(session: &OracleSession) -> usize {
    session.distinct()
}

fn finish(session: &OracleSession, before: usize, net: CpNet) -> LearnResult {
    LearnResult { net, queries_used: session.distinct() - before, transcript: session.log().to_vec() }
}

/// Orders `0..m` most preferred first by merge sort over swap queries under `ctx`.
fn sort_values(asker: &mut Asker<'_>, ctx: &[Value], v: usize, m: usize) -> Result<Vec<Value>> {
    let mut seen: BTreeMap<(Value, Value), bool> = BTreeMap::new();
    let mut prefers = |a: Value, b: Value| -> Result<bool> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let label = asker.label(&SwapInstance::over(ctx, v, lo, hi))?;
        seen.insert((lo, hi), label);
        Ok(if a < b { label } else { !label })
    };
    fn merge_sort(xs: Vec<Value>, prefers: &mut dyn FnMut(Value, Value) -> Result<bool>) -> Result<Vec<Value>> {
        if xs.len() <= 1 {
            return Ok(xs);
        }
        let mut right = xs;
        let left = right.drain(..right.len() / 2).collect();
        let (left, right) = (merge_sort(left, prefers)?, merge_sort(right, prefers)?);
        let mut out = Vec::with_capacity(left.len() + right.len());
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            if prefers(left[i], right[j])? {
                out.push(left[i]);
                i += 1;
            } else {
                out.push(right[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&left[i..]);
        out.extend_from_slice(&right[j..]);
        Ok(out)
    }
    let order = merge_sort((0..m as Value).collect(), &mut prefers)?;
    for (&(lo, hi), &label) in &seen {
        if order_prefers(&order, lo, hi) != label {
            return Err(Error::OracleContradiction(alloc::format!("answers for variable {v} are not a total order")));
        }
    }
    Ok(order)
}

fn others(n: usize, v: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != v).collect()
}

fn tree_complete(asker: &mut Asker<'_>, spec: &ClassSpec) -> Result<CpNet> {
    let (n, m) = (spec.n, spec.m);
    let mut cpts = Vec::with_capacity(n);
    for v in 0..n {
        let orders = (0..m as Value)
            .map(|j| sort_values(asker, &vec![j; n], v, m))
            .collect::<Result<Vec<_>>>()?;
        let Some(j2) = orders.iter().position(|o| o != &orders[0]) else {
            cpts.push(Cpt::unconditional(v, Some(orders[0].clone()), m)?);
            continue;
        };
        let (a, b) = orders[0]
            .windows(2)
            .map(|w| (w[0], w[1]))
            .find(|&(a, b)| order_prefers(&orders[j2], b, a))
            .expect("distinct total orders invert an adjacent pair");
        let (lo, hi) = (a.min(b), a.max(b));
        let anchor = SwapInstance::over(&vec![0; n], v, lo, hi);
        let other = SwapInstance::over(&vec![j2 as Value; n], v, lo, hi);
        let p = search_parent(&mut |x: &SwapInstance| asker.label(x), anchor, other, others(n, v))?;
        cpts.push(Cpt::new(v, vec![p], orders.into_iter().map(Some).collect(), m)?);
    }
    CpNet::minimalized(*spec, cpts)
}

fn tree_incomplete(asker: &mut Asker<'_>, spec: &ClassSpec) -> Result<CpNet> {
    let n = spec.n;
    let mut cpts = Vec::with_capacity(n);
    for v in 0..n {
        let xs = [SwapInstance::over(&vec![0; n], v, 0, 1), SwapInstance::over(&vec![1; n], v, 0, 1)];
        let prefs = [asker.pref(&xs[0])?, asker.pref(&xs[1])?];
        if prefs[0] == prefs[1] {
            cpts.push(Cpt::unconditional(v, prefs[0].row(), 2)?);
            continue;
        }
        let [anchor, other] = xs;
        let p = search_parent(&mut |x: &SwapInstance| asker.pref(x), anchor, other, others(n, v))?;
        cpts.push(Cpt::new(v, vec![p], prefs.iter().map(|p| p.row()).collect(), 2)?);
    }
    CpNet::minimalized(*spec, cpts)
}

/// Learns a complete net in which every variable has at most one parent.
///
/// For `m = 2` this uses at most `2n + e⌈log₂ n⌉` distinct queries.
pub fn learn_tree_complete(session: &mut OracleSession, spec: &ClassSpec) -> Result<LearnResult> {
    spec.validate()?;
    let before = start(session);
    let net = tree_complete(&mut Asker { session: &mut *session, strategy: Strategy::None, spec: *spec }, spec)?;
    Ok(finish(session, before, net))
}

/// Learns a binary tree net that may contain Empty rows, asking every swap in both
/// directions. At most `4n + 2e⌈log₂ n⌉` distinct queries.
pub fn learn_tree_incomplete(session: &mut OracleSession, spec: &ClassSpec) -> Result<LearnResult> {
    spec.validate()?;
    if spec.m != 2 {
        return Err(Error::Unsupported("the incomplete tree learner needs m = 2".into()));
    }
    let before = start(session);
    let net = tree_incomplete(&mut Asker { session: &mut *session, strategy: Strategy::None, spec: *spec }, spec)?;
    Ok(finish(session, before, net))
}

fn check_kbounded(spec: &ClassSpec, u: &UniversalSet) -> Result<()> {
    spec.validate()?;
    if spec.m != 2 {
        return Err(Error::Unsupported("the k-bounded learner needs m = 2".into()));
    }
    if u.m != 2 || u.z + 1 != spec.n || !u.at_strength(spec.k).is_universal() {
        return Err(Error::UniversalSetTooWeak);
    }
    Ok(())
}

/// Per variable: one answer per context imposed by `u`, then parents are added one at a time
/// from the first conflicting pair among contexts that agree on the parents found so far.
fn kbounded<T: Clone + PartialEq>(
    spec: &ClassSpec,
    u: &UniversalSet,
    ask: &mut dyn FnMut(&SwapInstance) -> Result<T>,
    row: impl Fn(&T) -> Option<Vec<Value>>,
) -> Result<CpNet> {
    let n = spec.n;
    let mut cpts = Vec::with_capacity(n);
    for v in 0..n {
        let contexts = context_set(u, v, n)?;
        let xs: Vec<SwapInstance> = contexts.iter().map(|c| SwapInstance::over(c, v, 0, 1)).collect();
        let answers = xs.iter().map(&mut *ask).collect::<Result<Vec<T>>>()?;
        let mut parents: Vec<usize> = Vec::new();
        while parents.len() < spec.k {
            let mut groups: BTreeMap<Vec<Value>, Vec<usize>> = BTreeMap::new();
            for (i, c) in contexts.iter().enumerate() {
                groups.entry(parents.iter().map(|&p| c[p]).collect()).or_default().push(i);
            }
            let conflict = groups.values().find_map(|g| {
                g.iter().find(|&&j| answers[j] != answers[g[0]]).map(|&j| (g[0], j))
            });
            let Some((i, j)) = conflict else { break };
            let d: Vec<usize> = (0..n).filter(|&w| contexts[i][w] != contexts[j][w]).collect();
            let p = search_parent(ask, xs[i].clone(), xs[j].clone(), d)?;
            let at = parents.partition_point(|&q| q < p);
            parents.insert(at, p);
        }
        let rows = (0..1usize << parents.len())
            .map(|r| {
                let want = decode(r, parents.len(), 2);
                contexts
                    .iter()
                    .position(|c| parents.iter().zip(&want).all(|(&p, &w)| c[p] == w))
                    .map(|i| row(&answers[i]))
                    .ok_or(Error::UniversalSetTooWeak)
            })
            .collect::<Result<Vec<_>>>()?;
        cpts.push(Cpt::new(v, parents, rows, 2)?);
    }
    CpNet::minimalized(*spec, cpts)
}

fn kbounded_complete(asker: &mut Asker<'_>, spec: &ClassSpec, u: &UniversalSet) -> Result<CpNet> {
    kbounded(spec, u, &mut |x: &SwapInstance| asker.label(x), |&l| Some(if l { vec![0, 1] } else { vec![1, 0] }))
}

/// Learns a complete binary net with at most `k` parents per variable from the contexts
/// imposed by the universal set `u`. At most `n|u| + e⌈log₂ n⌉` distinct queries.
pub fn learn_kbounded_complete(session: &mut OracleSession, spec: &ClassSpec, u: &UniversalSet) -> Result<LearnResult> {
    check_kbounded(spec, u)?;
    let before = start(session);
    let net = kbounded_complete(&mut Asker { session: &mut *session, strategy: Strategy::None, spec: *spec }, spec, u)?;
    Ok(finish(session, before, net))
}

/// As [`learn_kbounded_complete`] with every swap asked in both directions; two No answers
/// give an Empty row.
pub fn learn_kbounded_incomplete(session: &mut OracleSession, spec: &ClassSpec, u: &UniversalSet) -> Result<LearnResult> {
    check_kbounded(spec, u)?;
    let before = start(session);
    let mut asker = Asker { session: &mut *session, strategy: Strategy::None, spec: *spec };
    let net = kbounded(spec, u, &mut |x: &SwapInstance| asker.pref(x), |p| p.row())?;
    Ok(finish(session, before, net))
}

/// Runs the tree learner (`k ≤ 1`) or the k-bounded learner with every query answered
/// through [`robust_answer`]. Without `u` the product universal set is used.
pub fn learn_with_corruption(
    session: &mut OracleSession,
    spec: &ClassSpec,
    strategy: Strategy,
    u: Option<&UniversalSet>,
) -> Result<LearnResult> {
    spec.validate()?;
    if spec.m != 2 {
        return Err(Error::Unsupported("corruption-robust learning needs m = 2".into()));
    }
    let before = start(session);
    let mut asker = Asker { session: &mut *session, strategy, spec: *spec };
    let net = if spec.k <= 1 {
        tree_complete(&mut asker, spec)?
    } else {
        let owned;
        let u = match u {
            Some(u) => u,
            None => {
                owned = construct_product(2, spec.n - 1, spec.k)?;
                &owned
            }
        };
        check_kbounded(spec, u)?;
        kbounded_complete(&mut asker, spec, u)?
    };
    Ok(finish(session, before, net))
}
