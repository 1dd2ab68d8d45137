//! Membership-query oracles over swap instances.
//!
//! All oracles are persistent: a repeated query is served from the session log and is not
//! charged again. Limited oracles answer [`OracleAnswer::Unknown`] on a fixed set `L`,
//! malicious oracles flip the label on `L`.

use alloc::{collections::BTreeMap, collections::BTreeSet, format, vec, vec::Vec};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{instance_space, ClassSpec, CpNet, Cpt, SwapInstance, Value};
use crate::universal::combinations;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OracleAnswer {
    Yes,
    No,
    Unknown,
}

impl OracleAnswer {
    pub fn from_label(label: bool) -> Self {
        if label {
            OracleAnswer::Yes
        } else {
            OracleAnswer::No
        }
    }

    pub fn label(self) -> Option<bool> {
        match self {
            OracleAnswer::Yes => Some(true),
            OracleAnswer::No => Some(false),
            OracleAnswer::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Perfect,
    Limited,
    Malicious,
    Human,
}

/// The fixed set `L` of corrupted instances.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorruptionSet {
    pub members: BTreeSet<SwapInstance>,
}

impl CorruptionSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &SwapInstance) -> bool {
        self.members.contains(x)
    }
}

impl FromIterator<SwapInstance> for CorruptionSet {
    fn from_iter<I: IntoIterator<Item = SwapInstance>>(iter: I) -> Self {
        CorruptionSet { members: iter.into_iter().collect() }
    }
}

/// A persistent answer source with an append-only log.
///
/// A human session holds the answers supplied so far; asking anything else fails with
/// [`Error::AwaitingAnswer`], which lets a deterministic learner be suspended and replayed.
#[derive(Debug, Clone)]
pub struct OracleSession {
    kind: OracleKind,
    target: Option<CpNet>,
    corruption: CorruptionSet,
    supplied: BTreeMap<SwapInstance, OracleAnswer>,
    log: Vec<(SwapInstance, OracleAnswer)>,
    memo: BTreeMap<SwapInstance, OracleAnswer>,
    asked: usize,
}

impl OracleSession {
    fn with(kind: OracleKind, target: Option<CpNet>, corruption: CorruptionSet) -> Self {
        OracleSession {
            kind,
            target,
            corruption,
            supplied: BTreeMap::new(),
            log: Vec::new(),
            memo: BTreeMap::new(),
            asked: 0,
        }
    }

    pub fn perfect(target: CpNet) -> Self {
        Self::with(OracleKind::Perfect, Some(target), CorruptionSet::default())
    }

    pub fn limited(target: CpNet, corruption: CorruptionSet) -> Self {
        Self::with(OracleKind::Limited, Some(target), corruption)
    }

    pub fn malicious(target: CpNet, corruption: CorruptionSet) -> Self {
        Self::with(OracleKind::Malicious, Some(target), corruption)
    }

    pub fn human(supplied: impl IntoIterator<Item = (SwapInstance, OracleAnswer)>) -> Self {
        let mut s = Self::with(OracleKind::Human, None, CorruptionSet::default());
        s.supplied = supplied.into_iter().collect();
        s
    }

    /// Records an externally given answer for a human session.
    pub fn supply(&mut self, x: SwapInstance, answer: OracleAnswer) {
        self.supplied.insert(x, answer);
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn target(&self) -> Option<&CpNet> {
        self.target.as_ref()
    }

    pub fn corruption(&self) -> &CorruptionSet {
        &self.corruption
    }

    pub fn log(&self) -> &[(SwapInstance, OracleAnswer)] {
        &self.log
    }

    /// Distinct instances asked so far.
    pub fn distinct(&self) -> usize {
        self.memo.len()
    }

    /// All calls to [`OracleSession::answer`], repeats included.
    pub fn asked(&self) -> usize {
        self.asked
    }

    pub fn answer(&mut self, x: &SwapInstance) -> Result<OracleAnswer> {
        self.asked += 1;
        if let Some(&a) = self.memo.get(x) {
            return Ok(a);
        }
        let truth = |s: &Self| OracleAnswer::from_label(s.target.as_ref().expect("simulated oracle has a target").evaluate(x));
        let a = match self.kind {
            OracleKind::Perfect => truth(self),
            OracleKind::Limited if self.corruption.contains(x) => OracleAnswer::Unknown,
            OracleKind::Malicious if self.corruption.contains(x) => match truth(self) {
                OracleAnswer::Yes => OracleAnswer::No,
                _ => OracleAnswer::Yes,
            },
            OracleKind::Limited | OracleKind::Malicious => truth(self),
            OracleKind::Human => match self.supplied.get(x) {
                Some(&a) => a,
                None => {
                    self.asked -= 1;
                    return Err(Error::AwaitingAnswer(x.clone()));
                }
            },
        };
        self.memo.insert(x.clone(), a);
        self.log.push((x.clone(), a));
        Ok(a)
    }
}

pub fn answer(session: &mut OracleSession, x: &SwapInstance) -> Result<OracleAnswer> {
    session.answer(x)
}

/// Swaps over the same variable and value pair as `x` whose context differs from `x`'s in
/// exactly `t` variables.
pub fn f_ball(x: &SwapInstance, t: usize, spec: &ClassSpec) -> Vec<SwapInstance> {
    let v = x.swapped();
    let others: Vec<usize> = (0..spec.n).filter(|&i| i != v).collect();
    let base = x.first().values().to_vec();
    let (a, b) = x.swapped_values();
    let mut out = Vec::new();
    for combo in combinations(others.len(), t) {
        let vars: Vec<usize> = combo.iter().map(|&i| others[i]).collect();
        // each chosen variable takes one of its m-1 other values
        let total = (spec.m - 1).pow(t as u32);
        for choice in 0..total {
            let mut ctx = base.clone();
            let mut c = choice;
            for &var in vars.iter().rev() {
                let step = (c % (spec.m - 1)) as Value + 1;
                c /= spec.m - 1;
                ctx[var] = ((base[var] as usize + step as usize) % spec.m) as Value;
            }
            out.push(SwapInstance::over(&ctx, v, a, b));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptionMode {
    LimitedBound,
    MaliciousBound,
}

/// Largest admissible `|F¹(x) ∩ L|` for which majority voting still recovers every label.
pub fn corruption_bound(spec: &ClassSpec, mode: CorruptionMode) -> Result<usize> {
    let (n, k) = (spec.n as i64, spec.k as i64);
    if spec.m != 2 {
        return Err(Error::InfeasibleParameters("corruption bounds need m = 2".into()));
    }
    if n <= 2 * k + 2 {
        return Err(Error::InfeasibleParameters(format!("need n > 2k + 2, got n = {n}, k = {k}")));
    }
    let bound = match mode {
        CorruptionMode::LimitedBound => n - 2 - 2 * k,
        CorruptionMode::MaliciousBound => (n - 1) / 2 - k - 1,
    };
    usize::try_from(bound).map_err(|_| Error::InfeasibleParameters(format!("bound {bound} is negative")))
}

/// `max_x |F¹(x) ∩ L|` over the canonical instance space.
pub fn f1_overlap(corruption: &CorruptionSet, spec: &ClassSpec) -> usize {
    instance_space(spec, false)
        .iter()
        .map(|x| f_ball(x, 1, spec).iter().filter(|y| corruption.contains(y)).count())
        .max()
        .unwrap_or(0)
}

/// Visits the canonical instances in seeded random order and keeps each one whose insertion
/// keeps every `|F¹(x) ∩ L|` within the bound of `mode`. Returns `L` and its certificate
/// `max_x |F¹(x) ∩ L|`.
pub fn sample_corruption_set(spec: &ClassSpec, mode: CorruptionMode, seed: u64) -> Result<(CorruptionSet, usize)> {
    let bound = corruption_bound(spec, mode)?;
    let mut candidates = instance_space(spec, false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);
    let mut load: BTreeMap<SwapInstance, usize> = BTreeMap::new();
    let mut members = BTreeSet::new();
    for y in candidates {
        // y ∈ F¹(x) exactly when x ∈ F¹(y)
        let ball = f_ball(&y, 1, spec);
        if ball.iter().all(|x| load.get(x).copied().unwrap_or(0) < bound) {
            for x in ball {
                *load.entry(x).or_insert(0) += 1;
            }
            members.insert(y);
        }
    }
    let set = CorruptionSet { members };
    let certificate = f1_overlap(&set, spec);
    Ok((set, certificate))
}

/// All swaps over `v` whose parent context equals `context`, together with two nets that
/// disagree exactly on those swaps. The parents of `v` are the `k` smallest other variables,
/// every other variable prefers 0 unconditionally.
pub fn hopeless_corruption_set(spec: &ClassSpec, v: usize, context: &[Value]) -> Result<(CorruptionSet, CpNet, CpNet)> {
    let (n, k) = (spec.n, spec.k);
    if spec.m != 2 || k == 0 || v >= n || context.len() != k || context.iter().any(|&c| c > 1) {
        return Err(Error::InfeasibleParameters("need m = 2, 1 ≤ k, v < n and a binary context over k parents".into()));
    }
    let parents: Vec<usize> = (0..n).filter(|&u| u != v).take(k).collect();
    let flipped_row = crate::model::encode(context.iter().copied(), 2);
    let plain = || Some(vec![0, 1]);
    let mut with_flip = vec![plain(); 1 << k];
    with_flip[flipped_row] = Some(vec![1, 0]);
    let build = |rows: Vec<Option<Vec<Value>>>| -> Result<CpNet> {
        let cpts = (0..n)
            .map(|u| {
                if u == v {
                    Cpt::new(u, parents.clone(), rows.clone(), 2)
                } else {
                    Cpt::unconditional(u, plain(), 2)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        CpNet::minimalized(*spec, cpts)
    };
    let first = build(with_flip)?;
    let second = build(vec![plain(); 1 << k])?;
    let members = instance_space(spec, false)
        .into_iter()
        .filter(|x| x.swapped() == v && parents.iter().zip(context).all(|(&p, &c)| x.first().get(p) == c))
        .collect();
    Ok((CorruptionSet { members }, first, second))
}
