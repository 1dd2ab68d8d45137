//! Explicit concept classes and brute-force information-complexity parameters.
//!
//! Concepts are label bitvectors over an ordered instance list (bit `i` is the label of
//! instance `i`), so instance spaces are limited to [`MAX_INSTANCES`] elements.

use alloc::{collections::BTreeMap, collections::BTreeSet, format, vec, vec::Vec};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{
    binomial, checked_pow, instance_space, parents_acyclic, ClassSpec, CpNet, Cpt, SwapInstance, Value,
};
use crate::universal::combinations;

pub type Labels = u128;

pub const MAX_INSTANCES: usize = 128;

/// Work limit for the exponential searches in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub steps: u64,
}

impl Budget {
    pub const fn new(steps: u64) -> Self {
        Budget { steps }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { steps: 20_000_000_000 }
    }
}

struct Meter {
    used: u64,
    limit: u64,
    what: &'static str,
}

impl Meter {
    fn new(budget: Budget, what: &'static str) -> Self {
        Meter { used: 0, limit: budget.steps, what }
    }

    fn tick(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            return Err(Error::BudgetExceeded { what: self.what, limit: self.limit });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub labels: Labels,
    pub net: Option<CpNet>,
}

/// A finite class given by its label matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptClass {
    width: usize,
    instances: Vec<SwapInstance>,
    concepts: Vec<Concept>,
    enumerated: usize,
}

pub fn labels_over(net: &CpNet, instances: &[SwapInstance]) -> Labels {
    instances
        .iter()
        .enumerate()
        .filter(|(_, x)| net.evaluate(x))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn check_width(width: usize) -> Result<()> {
    if width > MAX_INSTANCES {
        return Err(Error::BudgetExceeded { what: "instance space size", limit: MAX_INSTANCES as u64 });
    }
    Ok(())
}

impl ConceptClass {
    /// Concepts of the given nets over `instances`; nets with an already seen label vector are dropped.
    pub fn from_nets(instances: Vec<SwapInstance>, nets: impl IntoIterator<Item = CpNet>) -> Result<Self> {
        check_width(instances.len())?;
        let mut seen = BTreeSet::new();
        let mut concepts = Vec::new();
        let mut enumerated = 0;
        for net in nets {
            enumerated += 1;
            let labels = labels_over(&net, &instances);
            if seen.insert(labels) {
                concepts.push(Concept { labels, net: Some(net) });
            }
        }
        Ok(ConceptClass { width: instances.len(), instances, concepts, enumerated })
    }

    /// A class without swap instances, for abstract label matrices.
    pub fn from_labels(width: usize, labels: impl IntoIterator<Item = Labels>) -> Result<Self> {
        check_width(width)?;
        let mask = full_mask(width);
        let mut seen = BTreeSet::new();
        let mut concepts = Vec::new();
        let mut enumerated = 0;
        for l in labels {
            enumerated += 1;
            if l & !mask != 0 {
                return Err(Error::InvalidSpec(format!("label vector wider than {width}")));
            }
            if seen.insert(l) {
                concepts.push(Concept { labels: l, net: None });
            }
        }
        Ok(ConceptClass { width, instances: Vec::new(), concepts, enumerated })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Number of inputs before deduplication by label vector.
    pub fn enumerated(&self) -> usize {
        self.enumerated
    }

    pub fn instances(&self) -> &[SwapInstance] {
        &self.instances
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn labels(&self) -> Vec<Labels> {
        self.concepts.iter().map(|c| c.labels).collect()
    }

    pub fn position(&self, labels: Labels) -> Option<usize> {
        self.concepts.iter().position(|c| c.labels == labels)
    }

    pub fn contains(&self, labels: Labels) -> bool {
        self.position(labels).is_some()
    }

    pub fn instance_position(&self, x: &SwapInstance) -> Option<usize> {
        self.instances.iter().position(|y| y == x)
    }

    pub fn labels_of(&self, net: &CpNet) -> Labels {
        labels_over(net, &self.instances)
    }

    pub fn position_of_net(&self, net: &CpNet) -> Option<usize> {
        self.position(self.labels_of(net))
    }

    /// Projection onto the instances at `positions` (in that order), deduplicated.
    pub fn restrict(&self, positions: &[usize]) -> ConceptClass {
        let mut seen = BTreeSet::new();
        let mut concepts = Vec::new();
        for c in &self.concepts {
            let l = positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| c.labels >> p & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i);
            if seen.insert(l) {
                concepts.push(Concept { labels: l, net: c.net.clone() });
            }
        }
        let instances = if self.instances.is_empty() {
            Vec::new()
        } else {
            positions.iter().map(|&p| self.instances[p].clone()).collect()
        };
        ConceptClass { width: positions.len(), instances, enumerated: self.concepts.len(), concepts }
    }

    /// The concepts at `indices`.
    pub fn subclass(&self, indices: &[usize]) -> ConceptClass {
        ConceptClass {
            width: self.width,
            instances: self.instances.clone(),
            concepts: indices.iter().map(|&i| self.concepts[i].clone()).collect(),
            enumerated: indices.len(),
        }
    }
}

fn full_mask(width: usize) -> Labels {
    if width == 128 {
        Labels::MAX
    } else {
        (1 << width) - 1
    }
}

/// All subsets of size at most `s` of a `t`-element space.
pub fn bounded_subsets(t: usize, s: usize) -> Result<ConceptClass> {
    check_width(t)?;
    if t > 24 {
        return Err(Error::BudgetExceeded { what: "synthetic class size", limit: 24 });
    }
    ConceptClass::from_labels(t, (0..1u128 << t).filter(|l| l.count_ones() as usize <= s))
}

/// The empty concept and all singletons over `t` instances.
pub fn singletons_plus_empty(t: usize) -> Result<ConceptClass> {
    check_width(t)?;
    ConceptClass::from_labels(t, core::iter::once(0).chain((0..t).map(|i| 1 << i)))
}

fn permutations(m: usize) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    let mut cur: Vec<Value> = Vec::new();
    fn rec(m: usize, cur: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in 0..m as Value {
            if !cur.contains(&v) {
                cur.push(v);
                rec(m, cur, out);
                cur.pop();
            }
        }
    }
    rec(m, &mut cur, &mut out);
    out
}

/// Default cap on the number of nets materialized by [`enumerate_class`].
pub const DEFAULT_NET_BUDGET: u64 = 5_000_000;

/// Minimal CPTs of `v` over `parents`, each with its label mask over `instances`.
fn cpt_options(spec: &ClassSpec, v: usize, parents: &[usize], instances: &[SwapInstance], budget: u64) -> Result<Vec<(Cpt, Labels)>> {
    let mut row_opts: Vec<Option<Vec<Value>>> = permutations(spec.m).into_iter().map(Some).collect();
    if !spec.is_complete() {
        row_opts.push(None);
    }
    let rows = checked_pow(spec.m, parents.len()).expect("small parent set");
    let fillings = checked_pow(row_opts.len(), rows)
        .filter(|&f| f as u64 <= budget)
        .ok_or(Error::BudgetExceeded { what: "CPT fillings", limit: budget })?;
    let relevant: Vec<(usize, &SwapInstance)> = instances.iter().enumerate().filter(|(_, x)| x.swapped() == v).collect();
    let mut out = Vec::new();
    for f in 0..fillings {
        let choice = crate::model::decode(f, rows, row_opts.len());
        let table = choice.iter().map(|&c| row_opts[c as usize].clone()).collect();
        let cpt = Cpt::new(v, parents.to_vec(), table, spec.m)?;
        if !cpt.is_minimal() {
            continue;
        }
        let mask = relevant.iter().fold(0, |acc, (i, x)| {
            let (a, b) = x.swapped_values();
            match cpt.row_for(x.first().values()) {
                Some(order) if crate::model::order_prefers(order, a, b) => acc | 1 << i,
                _ => acc,
            }
        });
        out.push((cpt, mask));
    }
    Ok(out)
}

/// All nets of the class (before deduplication), with their label vectors over the
/// class instance space.
/// Nets of a class with their labels over the class's instance list.
pub type LabeledNets = (Vec<SwapInstance>, Vec<(CpNet, Labels)>);

pub fn enumerate_nets(spec: &ClassSpec, budget: u64) -> Result<LabeledNets> {
    spec.validate()?;
    let instances = instance_space(spec, !spec.is_complete());
    check_width(instances.len())?;
    let n = spec.n;
    // parent-set choices per variable, each with its CPT options
    type Choice = (Vec<usize>, Vec<(Cpt, Labels)>);
    let mut choices: Vec<Vec<Choice>> = Vec::with_capacity(n);
    for v in 0..n {
        let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        let mut per_v = Vec::new();
        for size in 0..=spec.k {
            for combo in combinations(n - 1, size) {
                let parents: Vec<usize> = combo.iter().map(|&i| others[i]).collect();
                let opts = cpt_options(spec, v, &parents, &instances, budget)?;
                per_v.push((parents, opts));
            }
        }
        choices.push(per_v);
    }
    let mut graphs: Vec<Vec<usize>> = Vec::new();
    let mut total: u64 = 0;
    let mut pick = vec![0usize; n];
    loop {
        let parents: Vec<Vec<usize>> = (0..n).map(|v| choices[v][pick[v]].0.clone()).collect();
        if parents_acyclic(&parents) {
            let count = (0..n).try_fold(1u64, |acc, v| acc.checked_mul(choices[v][pick[v]].1.len() as u64));
            total = count.and_then(|c| total.checked_add(c)).filter(|&t| t <= budget).ok_or(
                Error::BudgetExceeded { what: "nets in class", limit: budget },
            )?;
            graphs.push(pick.clone());
        }
        let mut i = 0;
        while i < n {
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut nets = Vec::with_capacity(total as usize);
    for g in graphs {
        let opts: Vec<&Vec<(Cpt, Labels)>> = (0..n).map(|v| &choices[v][g[v]].1).collect();
        let mut idx = vec![0usize; n];
        if opts.iter().any(|o| o.is_empty()) {
            continue;
        }
        loop {
            let cpts: Vec<Cpt> = (0..n).map(|v| opts[v][idx[v]].0.clone()).collect();
            let labels = (0..n).fold(0, |acc, v| acc | opts[v][idx[v]].1);
            nets.push((CpNet::new(*spec, cpts)?, labels));
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] < opts[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    Ok((instances, nets))
}

/// The class of all acyclic k-bounded nets of `spec`, over `X_swap` for complete classes and
/// over the two-directional instance space otherwise. Deduplicated by label vector.
pub fn enumerate_class(spec: &ClassSpec) -> Result<ConceptClass> {
    enumerate_class_with_budget(spec, DEFAULT_NET_BUDGET)
}

pub fn enumerate_class_with_budget(spec: &ClassSpec, budget: u64) -> Result<ConceptClass> {
    let (instances, nets) = enumerate_nets(spec, budget)?;
    let enumerated = nets.len();
    let mut seen = BTreeSet::new();
    let concepts = nets
        .into_iter()
        .filter(|(_, l)| seen.insert(*l))
        .map(|(net, labels)| Concept { labels, net: Some(net) })
        .collect();
    Ok(ConceptClass { width: instances.len(), instances, concepts, enumerated })
}

/// One canonical swap per variable and value pair, with every other variable at 0.
pub fn sep_instances(spec: &ClassSpec) -> Vec<SwapInstance> {
    let mut out = Vec::new();
    let zero = vec![0; spec.n];
    for v in 0..spec.n {
        for a in 0..spec.m as Value {
            for b in a + 1..spec.m as Value {
                out.push(SwapInstance::over(&zero, v, a, b));
            }
        }
    }
    out
}

/// Complete separable nets over the reduced instance space of [`sep_instances`].
pub fn separable_class_over_sep(n: usize, m: usize) -> Result<ConceptClass> {
    let spec = ClassSpec::complete(n, m, 0)?;
    let class = enumerate_class(&spec)?;
    let positions: Vec<usize> = sep_instances(&spec)
        .iter()
        .map(|x| class.instance_position(x).expect("sep instance is a swap"))
        .collect();
    Ok(class.restrict(&positions))
}

fn bit_positions(mask: Labels) -> impl Iterator<Item = usize> {
    let mut m = mask;
    core::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// Compresses the bits of `labels` at `subset` into the low bits.
fn project(labels: Labels, subset: &[usize]) -> usize {
    subset.iter().enumerate().fold(0, |acc, (i, &p)| acc | (((labels >> p) & 1) as usize) << i)
}

pub fn shatters(class: &ConceptClass, subset: &[usize]) -> bool {
    let d = subset.len();
    if d >= usize::BITS as usize - 1 || class.len() < 1 << d {
        return false;
    }
    let mut seen = vec![false; 1 << d];
    let mut hit = 0;
    for c in &class.concepts {
        let p = project(c.labels, subset);
        if !core::mem::replace(&mut seen[p], true) {
            hit += 1;
            if hit == 1 << d {
                return true;
            }
        }
    }
    false
}

fn floor_log2(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// Exact VC dimension, searching subset sizes downward from `min(|X|, log₂|C|)`.
pub fn vcd(class: &ConceptClass, budget: Budget) -> Result<usize> {
    if class.len() <= 1 {
        return Ok(0);
    }
    let mut meter = Meter::new(budget, "VC dimension subsets");
    let top = class.width.min(floor_log2(class.len()));
    for d in (1..=top).rev() {
        for subset in combinations(class.width, d) {
            meter.tick(class.len() as u64)?;
            if shatters(class, &subset) {
                return Ok(d);
            }
        }
    }
    Ok(0)
}

/// Minimum hitting set of `sets` (none empty), by iterative deepening.
fn min_hitting_set(sets: &[Labels], meter: &mut Meter) -> Result<Labels> {
    let mut sorted: Vec<Labels> = sets.to_vec();
    sorted.sort_unstable_by_key(|s| (s.count_ones(), *s));
    sorted.dedup();
    let mut minimal: Vec<Labels> = Vec::with_capacity(sorted.len());
    meter.tick((sorted.len() * sorted.len() / 8) as u64)?;
    for s in sorted {
        if !minimal.iter().any(|&t| t & !s == 0) {
            minimal.push(s);
        }
    }

    fn dfs(sets: &[Labels], chosen: Labels, depth: usize, meter: &mut Meter) -> Result<Option<Labels>> {
        meter.tick(sets.len() as u64)?;
        let Some(first) = sets.iter().position(|&s| s & chosen == 0) else {
            return Ok(Some(chosen));
        };
        if depth == 0 {
            return Ok(None);
        }
        let mut packed: Labels = 0;
        let mut disjoint = 0;
        for &s in &sets[first..] {
            if s & chosen == 0 && s & packed == 0 {
                packed |= s;
                disjoint += 1;
                if disjoint > depth {
                    return Ok(None);
                }
            }
        }
        for b in bit_positions(sets[first]) {
            if let Some(found) = dfs(sets, chosen | 1 << b, depth - 1, meter)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    for depth in 0..=MAX_INSTANCES {
        if let Some(found) = dfs(&minimal, 0, depth, meter)? {
            return Ok(found);
        }
    }
    unreachable!("the union of all sets hits every set")
}

fn teaching_set_within(labels: &[Labels], target: usize, meter: &mut Meter) -> Result<Labels> {
    let t = labels[target];
    let diffs: Vec<Labels> = labels.iter().enumerate().filter(|&(i, _)| i != target).map(|(_, &l)| l ^ t).collect();
    min_hitting_set(&diffs, meter)
}

/// Positions of a smallest teaching set for the concept at `index`.
pub fn minimum_teaching_set(class: &ConceptClass, index: usize, budget: Budget) -> Result<Vec<usize>> {
    let mut meter = Meter::new(budget, "teaching set search");
    Ok(bit_positions(teaching_set_within(&class.labels(), index, &mut meter)?).collect())
}

/// Teaching dimension of the concept at `index`.
pub fn td(class: &ConceptClass, index: usize, budget: Budget) -> Result<usize> {
    Ok(minimum_teaching_set(class, index, budget)?.len())
}

/// Teaching dimension of every concept.
pub fn td_all(class: &ConceptClass, budget: Budget) -> Result<Vec<usize>> {
    let labels = class.labels();
    let mut meter = Meter::new(budget, "teaching set search");
    (0..labels.len())
        .map(|i| Ok(teaching_set_within(&labels, i, &mut meter)?.count_ones() as usize))
        .collect()
}

pub fn td_class(class: &ConceptClass, budget: Budget) -> Result<usize> {
    Ok(td_all(class, budget)?.into_iter().max().unwrap_or(0))
}

pub fn td_min(class: &ConceptClass, budget: Budget) -> Result<usize> {
    Ok(td_all(class, budget)?.into_iter().min().unwrap_or(0))
}

/// The peeling sequence: at each step, the concepts of smallest teaching dimension within the
/// remaining class and that dimension.
pub fn rtd_layers(class: &ConceptClass, budget: Budget) -> Result<Vec<(usize, Vec<usize>)>> {
    let mut meter = Meter::new(budget, "recursive teaching search");
    let mut remaining: Vec<usize> = (0..class.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let labels: Vec<Labels> = remaining.iter().map(|&i| class.concepts[i].labels).collect();
        let tds = (0..labels.len())
            .map(|i| Ok(teaching_set_within(&labels, i, &mut meter)?.count_ones() as usize))
            .collect::<Result<Vec<_>>>()?;
        let min = *tds.iter().min().expect("non-empty");
        let (layer, rest): (Vec<_>, Vec<_>) =
            remaining.iter().copied().zip(tds).partition(|&(_, t)| t == min);
        layers.push((min, layer.into_iter().map(|(i, _)| i).collect()));
        remaining = rest.into_iter().map(|(i, _)| i).collect();
    }
    Ok(layers)
}

pub fn rtd(class: &ConceptClass, budget: Budget) -> Result<usize> {
    Ok(rtd_layers(class, budget)?.into_iter().map(|(t, _)| t).max().unwrap_or(0))
}

/// `Σ_{i≤d} C(w, i)`.
pub fn sauer_bound(width: usize, d: usize) -> u64 {
    (0..=d).map(|i| binomial(width as u64, i as u64)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralReport {
    pub is_maximum: bool,
    pub is_maximal: bool,
    pub is_intersection_closed: bool,
    pub is_extremal: bool,
}

pub fn is_maximum(class: &ConceptClass, budget: Budget) -> Result<bool> {
    let d = vcd(class, budget)?;
    Ok(class.len() as u64 == sauer_bound(class.width, d))
}

/// Adding any concept outside the class raises the VC dimension.
pub fn is_maximal(class: &ConceptClass, budget: Budget) -> Result<bool> {
    let d = vcd(class, budget)?;
    let w = class.width;
    if d == w {
        return Ok(true);
    }
    if w > 30 {
        return Err(Error::BudgetExceeded { what: "candidate concepts for maximality", limit: 1 << 30 });
    }
    let mut meter = Meter::new(budget, "maximality check");
    // (subset, missing pattern) pairs where the class misses exactly one pattern
    let mut gaps: Vec<(Labels, Labels)> = Vec::new();
    for subset in combinations(w, d + 1) {
        meter.tick(class.len() as u64)?;
        let mut seen = vec![false; 1 << (d + 1)];
        for c in &class.concepts {
            seen[project(c.labels, &subset)] = true;
        }
        let missing: Vec<usize> = (0..seen.len()).filter(|&p| !seen[p]).collect();
        if let [p] = missing[..] {
            let mask = subset.iter().fold(0, |acc, &s| acc | 1 << s);
            let pat = subset.iter().enumerate().filter(|(i, _)| p >> i & 1 == 1).fold(0, |acc, (_, &s)| acc | 1 << s);
            gaps.push((mask, pat));
        }
    }
    let members: BTreeSet<Labels> = class.concepts.iter().map(|c| c.labels).collect();
    for c in 0..(1 as Labels) << w {
        meter.tick(1 + gaps.len() as u64)?;
        if members.contains(&c) {
            continue;
        }
        if !gaps.iter().any(|&(mask, pat)| c & mask == pat) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed under intersection of the positively labeled sets.
pub fn is_intersection_closed(class: &ConceptClass) -> bool {
    let members: BTreeSet<Labels> = class.concepts.iter().map(|c| c.labels).collect();
    members.iter().all(|&a| members.range(a..).all(|&b| members.contains(&(a & b))))
}

/// Every shattered set is strongly shattered.
pub fn is_extremal(class: &ConceptClass, budget: Budget) -> Result<bool> {
    let mut meter = Meter::new(budget, "extremality check");
    let w = class.width;
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(set) = frontier.pop() {
        meter.tick(class.len() as u64)?;
        if !strongly_shatters(class, &set) {
            return Ok(false);
        }
        let start = set.last().map_or(0, |&l| l + 1);
        for i in start..w {
            let mut bigger = set.clone();
            bigger.push(i);
            meter.tick(class.len() as u64)?;
            if shatters(class, &bigger) {
                frontier.push(bigger);
            }
        }
    }
    Ok(true)
}

/// Some fixed labeling outside `subset` is compatible with all patterns on `subset`.
pub fn strongly_shatters(class: &ConceptClass, subset: &[usize]) -> bool {
    let mask = subset.iter().fold(0 as Labels, |acc, &s| acc | 1 << s);
    let mut groups: BTreeMap<Labels, BTreeSet<Labels>> = BTreeMap::new();
    for c in &class.concepts {
        groups.entry(c.labels & !mask).or_default().insert(c.labels & mask);
    }
    groups.values().any(|g| g.len() == 1 << subset.len())
}

pub fn structural_report(class: &ConceptClass, budget: Budget) -> Result<StructuralReport> {
    Ok(StructuralReport {
        is_maximum: is_maximum(class, budget)?,
        is_maximal: is_maximal(class, budget)?,
        is_intersection_closed: is_intersection_closed(class),
        is_extremal: is_extremal(class, budget)?,
    })
}

fn floor_log2_ratio(q: Ratio<i128>) -> i64 {
    let (num, den) = (*q.numer(), *q.denom());
    let mut r: i64 = 0;
    if num >= den {
        while num >= den << (r + 1) {
            r += 1;
        }
    } else {
        while num << (-r) < den {
            r -= 1;
        }
    }
    r
}

/// Evaluates the published lower bound on membership queries for learning k-bounded binary
/// nets with `e` edges:
/// `1` if `k = 0`, `u(r+1)` if `k = 1`, `u(2^k + k(r-1) - 1)` if `k > 1`, where
/// `r = ⌊log₂((n-u)/k)⌋`.
///
/// Here `u = e/k` is kept as an exact fraction, which is how the bound is evaluated at
/// `e = e_max` to obtain `n·2^(n-2) - n² + n/2`; [`kz_lower_bound_floored`] uses `⌊e/k⌋`.
pub fn kz_lower_bound(n: u32, k: u32, e: u32) -> Result<Ratio<i128>> {
    kz_eval(n, k, e, false)
}

/// As [`kz_lower_bound`] with `u = ⌊e/k⌋`.
pub fn kz_lower_bound_floored(n: u32, k: u32, e: u32) -> Result<Ratio<i128>> {
    kz_eval(n, k, e, true)
}

fn kz_eval(n: u32, k: u32, e: u32, floor_u: bool) -> Result<Ratio<i128>> {
    if k >= n || k > 30 {
        return Err(Error::DomainError(format!("need 0 ≤ k < n, got k = {k}, n = {n}")));
    }
    if e < k || e as u64 > binomial(n as u64, 2) {
        return Err(Error::DomainError(format!("need k ≤ e ≤ C(n,2), got e = {e}")));
    }
    if k == 0 {
        return Ok(Ratio::from_integer(1));
    }
    let mut u = Ratio::new(e as i128, k as i128);
    if floor_u {
        u = u.floor();
    }
    let arg = (Ratio::from_integer(n as i128) - u) / Ratio::from_integer(k as i128);
    if arg <= Ratio::from_integer(0) {
        return Err(Error::DomainError(format!("log argument (n-u)/k = {arg} is not positive")));
    }
    let r = floor_log2_ratio(arg) as i128;
    let k = k as i128;
    Ok(if k == 1 {
        u * Ratio::from_integer(r + 1)
    } else {
        u * Ratio::from_integer((1i128 << k) + k * (r - 1) - 1)
    })
}
