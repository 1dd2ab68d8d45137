//! CP-net data model: class parameters, outcomes, swap instances, CPTs and nets.
//!
//! Values of a variable are indices `0..m`. An order is written most-preferred
//! first, so `[1, 0]` reads "1 ≻ 0". A row without an order (`None`) is an
//! empty statement: the two values are incomparable under that context.

use alloc::{format, string::String, vec, vec::Vec};
use core::fmt;

use crate::error::{Error, Result};

/// A value index of a variable.
pub type Value = u8;

/// Whether CPT rows may be left empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Completeness {
    CompleteOnly,
    AllowIncomplete,
}

/// Parameters of a class of CP-nets: `n` variables with domains of size `m`
/// and at most `k` parents per variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub completeness: Completeness,
}

impl ClassSpec {
    pub fn new(n: usize, m: usize, k: usize, completeness: Completeness) -> Result<Self> {
        let spec = ClassSpec { n, m, k, completeness };
        spec.validate()?;
        Ok(spec)
    }

    pub fn complete(n: usize, m: usize, k: usize) -> Result<Self> {
        Self::new(n, m, k, Completeness::CompleteOnly)
    }

    pub fn incomplete(n: usize, m: usize, k: usize) -> Result<Self> {
        Self::new(n, m, k, Completeness::AllowIncomplete)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if self.m < 2 || self.m > 256 {
            return Err(Error::InvalidSpec(format!("m = {} is outside 2..=256", self.m)));
        }
        if self.k >= self.n {
            return Err(Error::InvalidSpec(format!("k = {} must be below n = {}", self.k, self.n)));
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::CompleteOnly
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.n, self.m, k, self.completeness)
    }

    pub fn with_completeness(&self, completeness: Completeness) -> Self {
        ClassSpec { completeness, ..*self }
    }

    /// `m^n`, or `None` on overflow.
    pub fn outcome_count(&self) -> Option<usize> {
        checked_pow(self.m, self.n)
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Digits of `index` in base `m`, most significant first.
pub(crate) fn decode(mut index: usize, len: usize, m: usize) -> Vec<Value> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % m) as Value;
        index /= m;
    }
    out
}

pub(crate) fn encode(digits: impl IntoIterator<Item = Value>, m: usize) -> usize {
    digits.into_iter().fold(0, |acc, d| acc * m + d as usize)
}

/// A full assignment of values to the `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<Value>);

impl Outcome {
    pub fn new(spec: &ClassSpec, values: Vec<Value>) -> Result<Self> {
        if values.len() != spec.n {
            return Err(Error::InvalidOutcome(format!(
                "expected {} values, got {}",
                spec.n,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v as usize >= spec.m) {
            return Err(Error::InvalidOutcome(format!("value {v} outside domain of size {}", spec.m)));
        }
        Ok(Outcome(values))
    }

    /// The outcome at position `index` of the lexicographic enumeration of `m^n` outcomes.
    pub fn from_index(n: usize, m: usize, index: usize) -> Self {
        Outcome(decode(index, n, m))
    }

    pub fn index(&self, m: usize) -> usize {
        encode(self.0.iter().copied(), m)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> Value {
        self.0[var]
    }

    /// Copy with `var` set to `value`.
    pub fn with(&self, var: usize, value: Value) -> Self {
        let mut v = self.0.clone();
        v[var] = value;
        Outcome(v)
    }

    pub fn into_values(self) -> Vec<Value> {
        self.0
    }
}

impl From<Vec<Value>> for Outcome {
    fn from(values: Vec<Value>) -> Self {
        Outcome(values)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// An ordered pair of outcomes that differ in exactly one variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwapInstance {
    first: Outcome,
    second: Outcome,
    swapped: usize,
}

impl SwapInstance {
    /// Keeps the given direction. Fails unless exactly one coordinate differs.
    pub fn new(first: Outcome, second: Outcome) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::NotASwap);
        }
        let mut diff = first.0.iter().zip(&second.0).enumerate().filter(|(_, (a, b))| a != b);
        let swapped = match (diff.next(), diff.next()) {
            (Some((i, _)), None) => i,
            _ => return Err(Error::NotASwap),
        };
        Ok(SwapInstance { first, second, swapped })
    }

    /// Builds the swap over `var` with `var = a` in the first outcome and `var = b`
    /// in the second; the other coordinates are taken from `context`.
    pub fn over(context: &[Value], var: usize, a: Value, b: Value) -> Self {
        debug_assert_ne!(a, b);
        let mut first = context.to_vec();
        let mut second = context.to_vec();
        first[var] = a;
        second[var] = b;
        SwapInstance { first: Outcome(first), second: Outcome(second), swapped: var }
    }

    pub fn first(&self) -> &Outcome {
        &self.first
    }

    pub fn second(&self) -> &Outcome {
        &self.second
    }

    pub fn swapped(&self) -> usize {
        self.swapped
    }

    /// Values of the swapped variable in the first and second outcome.
    pub fn swapped_values(&self) -> (Value, Value) {
        (self.first.0[self.swapped], self.second.0[self.swapped])
    }

    pub fn reversed(&self) -> Self {
        SwapInstance { first: self.second.clone(), second: self.first.clone(), swapped: self.swapped }
    }

    pub fn is_canonical(&self) -> bool {
        let (a, b) = self.swapped_values();
        a < b
    }

    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            self.reversed()
        }
    }

    /// The shared values of all variables except the swapped one.
    pub fn context(&self) -> Vec<Value> {
        self.first
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.swapped)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn n(&self) -> usize {
        self.first.len()
    }
}

impl fmt::Display for SwapInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.first, self.second)
    }
}

/// Orders the two outcomes so that the smaller value of the swapped variable comes first.
pub fn canonical_swap(o: &Outcome, o2: &Outcome) -> Result<SwapInstance> {
    Ok(SwapInstance::new(o.clone(), o2.clone())?.canonical())
}

/// All swap instances in lexicographic order: by swapped variable, then context, then value pair.
///
/// Without redundancies only canonical swaps are listed (`n·m^(n-1)·C(m,2)` of them).
/// With redundancies both directions are listed, each canonical swap followed by its reverse.
pub fn instance_space(spec: &ClassSpec, redundancies: bool) -> Vec<SwapInstance> {
    let (n, m) = (spec.n, spec.m);
    let contexts = checked_pow(m, n - 1).expect("instance space too large");
    let mut out = Vec::new();
    for v in 0..n {
        for c in 0..contexts {
            let others = decode(c, n - 1, m);
            let mut full = Vec::with_capacity(n);
            full.extend_from_slice(&others[..v]);
            full.push(0);
            full.extend_from_slice(&others[v..]);
            for a in 0..m as Value {
                for b in a + 1..m as Value {
                    let x = SwapInstance::over(&full, v, a, b);
                    if redundancies {
                        let r = x.reversed();
                        out.push(x);
                        out.push(r);
                    } else {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// A conditional preference statement: a context over the parents and an order (or none).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceStatement {
    pub context: Vec<Value>,
    pub order: Option<Vec<Value>>,
}

fn is_permutation(order: &[Value], m: usize) -> bool {
    if order.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &v in order {
        let v = v as usize;
        if v >= m || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// True iff `a` precedes `b` in `order`.
pub fn order_prefers(order: &[Value], a: Value, b: Value) -> bool {
    for &v in order {
        if v == a {
            return true;
        }
        if v == b {
            return false;
        }
    }
    false
}

/// Parents and rows of one table, as accepted by [`CpNet::from_tables`].
pub type Table = (Vec<usize>, Vec<Option<Vec<Value>>>);

/// Conditional preference table of one variable.
///
/// Rows are indexed by the parent context in lexicographic order, first parent most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cpt {
    variable: usize,
    parents: Vec<usize>,
    rows: Vec<Option<Vec<Value>>>,
    m: usize,
}

impl Cpt {
    pub fn new(variable: usize, parents: Vec<usize>, rows: Vec<Option<Vec<Value>>>, m: usize) -> Result<Self> {
        let bad = |reason: String| Error::InvalidCpt { variable, reason };
        if parents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("parents must be strictly increasing".into()));
        }
        if parents.contains(&variable) {
            return Err(bad("a variable cannot be its own parent".into()));
        }
        let expected = checked_pow(m, parents.len()).ok_or_else(|| bad("too many parents".into()))?;
        if rows.len() != expected {
            return Err(bad(format!("expected {expected} rows, got {}", rows.len())));
        }
        for order in rows.iter().flatten() {
            if !is_permutation(order, m) {
                return Err(bad(format!("{order:?} is not a total order over {m} values")));
            }
        }
        Ok(Cpt { variable, parents, rows, m })
    }

    pub fn unconditional(variable: usize, order: Option<Vec<Value>>, m: usize) -> Result<Self> {
        Self::new(variable, Vec::new(), vec![order], m)
    }

    pub fn variable(&self) -> usize {
        self.variable
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn rows(&self) -> &[Option<Vec<Value>>] {
        &self.rows
    }

    pub fn domain_size(&self) -> usize {
        self.m
    }

    /// Parent values of row `index`.
    pub fn context_of(&self, index: usize) -> Vec<Value> {
        decode(index, self.parents.len(), self.m)
    }

    pub fn statements(&self) -> Vec<PreferenceStatement> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, order)| PreferenceStatement { context: self.context_of(i), order: order.clone() })
            .collect()
    }

    /// Row index selected by the parent values of a full assignment.
    pub fn context_index(&self, outcome: &[Value]) -> usize {
        encode(self.parents.iter().map(|&p| outcome[p]), self.m)
    }

    pub fn row_for(&self, outcome: &[Value]) -> Option<&[Value]> {
        self.rows[self.context_index(outcome)].as_deref()
    }

    /// Number of specified (non-empty) statements.
    pub fn size(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|r| r.is_some())
    }

    fn stride(&self, pos: usize) -> usize {
        checked_pow(self.m, self.parents.len() - 1 - pos).unwrap_or(0)
    }

    /// Whether the parent at position `pos` changes some statement. Empty counts as a
    /// statement value of its own.
    pub fn parent_is_relevant(&self, pos: usize) -> bool {
        let stride = self.stride(pos);
        let m = self.m;
        (0..self.rows.len()).any(|idx| {
            let digit = (idx / stride) % m;
            digit == 0 && (1..m).any(|r| self.rows[idx] != self.rows[idx + r * stride])
        })
    }

    pub fn is_minimal(&self) -> bool {
        (0..self.parents.len()).all(|p| self.parent_is_relevant(p))
    }

    fn drop_parent(&self, pos: usize) -> Cpt {
        let stride = self.stride(pos);
        let m = self.m;
        let rows = (0..self.rows.len())
            .filter(|idx| (idx / stride).is_multiple_of(m))
            .map(|idx| self.rows[idx].clone())
            .collect();
        let mut parents = self.parents.clone();
        parents.remove(pos);
        Cpt { variable: self.variable, parents, rows, m }
    }

    /// Removes parents that influence no statement.
    pub fn minimalized(&self) -> Cpt {
        let mut cpt = self.clone();
        while let Some(pos) = (0..cpt.parents.len()).find(|&p| !cpt.parent_is_relevant(p)) {
            cpt = cpt.drop_parent(pos);
        }
        cpt
    }

    fn map_orders(&self, f: impl Fn(&[Value]) -> Vec<Value>) -> Cpt {
        Cpt { rows: self.rows.iter().map(|r| r.as_deref().map(&f)).collect(), ..self.clone() }
    }
}

/// Kahn's algorithm on parent lists.
pub fn parents_acyclic(parents: &[Vec<usize>]) -> bool {
    let n = parents.len();
    let mut indeg: Vec<usize> = parents.iter().map(|p| p.len()).collect();
    let mut children = vec![Vec::new(); n];
    for (v, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(v);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                stack.push(c);
            }
        }
    }
    seen == n
}

/// A CP-net over the variables `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpNet {
    spec: ClassSpec,
    cpts: Vec<Cpt>,
}

impl CpNet {
    /// Validates shape, indegree bound, minimality, completeness and acyclicity.
    pub fn new(spec: ClassSpec, cpts: Vec<Cpt>) -> Result<Self> {
        let net = Self::new_cyclic(spec, cpts)?;
        if !net.is_acyclic() {
            return Err(Error::Cyclic);
        }
        Ok(net)
    }

    /// Same checks as [`CpNet::new`] except acyclicity of the dependency graph.
    pub fn new_cyclic(spec: ClassSpec, cpts: Vec<Cpt>) -> Result<Self> {
        spec.validate()?;
        if cpts.len() != spec.n {
            return Err(Error::InvalidSpec(format!("expected {} CPTs, got {}", spec.n, cpts.len())));
        }
        for (v, cpt) in cpts.iter().enumerate() {
            let bad = |reason: &str| Error::InvalidCpt { variable: v, reason: reason.into() };
            if cpt.variable != v {
                return Err(bad("CPTs must be listed in variable order"));
            }
            if cpt.m != spec.m {
                return Err(bad("domain size differs from the class"));
            }
            if cpt.parents.iter().any(|&p| p >= spec.n) {
                return Err(bad("parent index out of range"));
            }
            if cpt.parents.len() > spec.k {
                return Err(bad("indegree exceeds k"));
            }
            if !cpt.is_minimal() {
                return Err(bad("dummy parent"));
            }
            if spec.is_complete() && !cpt.is_complete() {
                return Err(bad("empty row in a complete class"));
            }
        }
        Ok(CpNet { spec, cpts })
    }

    /// Convenience constructor from `(parents, rows)` per variable.
    pub fn from_tables(spec: ClassSpec, tables: Vec<Table>) -> Result<Self> {
        let cpts = tables
            .into_iter()
            .enumerate()
            .map(|(v, (parents, rows))| Cpt::new(v, parents, rows, spec.m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, cpts)
    }

    /// Prunes dummy parents before validating.
    pub fn minimalized(spec: ClassSpec, cpts: Vec<Cpt>) -> Result<Self> {
        Self::new(spec, cpts.iter().map(Cpt::minimalized).collect())
    }

    pub fn spec(&self) -> &ClassSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn cpt(&self, v: usize) -> &Cpt {
        &self.cpts[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.cpts[v].parents
    }

    pub fn parent_lists(&self) -> Vec<Vec<usize>> {
        self.cpts.iter().map(|c| c.parents.clone()).collect()
    }

    /// Edges `(parent, child)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.cpts.iter().flat_map(|c| c.parents.iter().map(move |&p| (p, c.variable))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.cpts.iter().map(|c| c.parents.len()).sum()
    }

    /// Number of specified statements.
    pub fn size(&self) -> usize {
        self.cpts.iter().map(Cpt::size).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.cpts.iter().all(Cpt::is_complete)
    }

    pub fn is_acyclic(&self) -> bool {
        parents_acyclic(&self.parent_lists())
    }

    /// Label of a swap instance: 1 iff the governing row ranks `x.first` above `x.second`.
    pub fn evaluate(&self, x: &SwapInstance) -> bool {
        let cpt = &self.cpts[x.swapped()];
        let (a, b) = x.swapped_values();
        match cpt.row_for(x.first().values()) {
            Some(order) => order_prefers(order, a, b),
            None => false,
        }
    }

    /// Same net with every order reversed.
    pub fn complement(&self) -> CpNet {
        let cpts = self
            .cpts
            .iter()
            .map(|c| c.map_orders(|o| o.iter().rev().copied().collect()))
            .collect();
        CpNet { spec: self.spec, cpts }
    }

    /// Same net under another class (for example a larger k). Validated.
    pub fn with_spec(&self, spec: ClassSpec) -> Result<CpNet> {
        CpNet::new(spec, self.cpts.clone())
    }
}

pub fn evaluate_swap(net: &CpNet, x: &SwapInstance) -> bool {
    net.evaluate(x)
}

/// Maximum number of statements of a k-bounded acyclic CP-net.
pub fn max_size(spec: &ClassSpec) -> u64 {
    let (n, m, k) = (spec.n as u64, spec.m as u64, spec.k as u32);
    let mk = m.pow(k);
    (n - k as u64) * mk + (mk - 1) / (m - 1)
}

/// Maximum number of edges of a k-bounded acyclic CP-net.
pub fn max_edges(spec: &ClassSpec) -> u64 {
    let (n, k) = (spec.n as u64, spec.k as u64);
    (n - k) * k + binomial(k, 2)
}

/// True iff every statement `y1 ≻ y2` specified in `lower` is also specified in `upper`
/// under some context extending the one in `lower`.
pub fn subsumes(upper: &CpNet, lower: &CpNet) -> bool {
    if upper.n() != lower.n() || upper.m() != lower.m() {
        return false;
    }
    let m = upper.m();
    upper.cpts.iter().zip(&lower.cpts).all(|(cu, cl)| {
        if cl.size() == 0 {
            return true;
        }
        let Some(pos): Option<Vec<usize>> =
            cl.parents.iter().map(|p| cu.parents.iter().position(|q| q == p)).collect()
        else {
            return false;
        };
        cl.rows.iter().enumerate().all(|(li, lrow)| {
            let Some(lorder) = lrow else { return true };
            let lctx = cl.context_of(li);
            let extending: Vec<&Vec<Value>> = cu
                .rows
                .iter()
                .enumerate()
                .filter(|(ui, _)| {
                    let uctx = cu.context_of(*ui);
                    pos.iter().zip(&lctx).all(|(&p, &val)| uctx[p] == val)
                })
                .filter_map(|(_, r)| r.as_ref())
                .collect();
            (0..m).all(|i| {
                (i + 1..m).all(|j| {
                    let (y1, y2) = (lorder[i], lorder[j]);
                    extending.iter().any(|o| order_prefers(o, y1, y2))
                })
            })
        })
    })
}

pub fn strictly_subsumes(upper: &CpNet, lower: &CpNet) -> bool {
    upper != lower && subsumes(upper, lower)
}

/// Fills every empty row with the identity order `0 ≻ 1 ≻ … ≻ m-1` and prunes dummy parents.
pub fn complete_extension(net: &CpNet) -> CpNet {
    let identity: Vec<Value> = (0..net.m() as Value).collect();
    let cpts: Vec<Cpt> = net
        .cpts
        .iter()
        .map(|c| {
            Cpt {
                rows: c.rows.iter().map(|r| Some(r.clone().unwrap_or_else(|| identity.clone()))).collect(),
                ..c.clone()
            }
            .minimalized()
        })
        .collect();
    CpNet::new(net.spec, cpts).expect("completion keeps the net valid")
}

/// Whether `net` is maximal among complete k-bounded acyclic nets: complete, and no
/// variable can take another parent without exceeding k or closing a cycle.
pub fn is_maximal_in_class(net: &CpNet) -> bool {
    if !net.is_complete() {
        return false;
    }
    let parents = net.parent_lists();
    for v in 0..net.n() {
        if parents[v].len() >= net.spec.k {
            continue;
        }
        for u in 0..net.n() {
            if u == v || parents[v].contains(&u) {
                continue;
            }
            let mut grown = parents.clone();
            grown[v].push(u);
            if parents_acyclic(&grown) {
                return false;
            }
        }
    }
    true
}
