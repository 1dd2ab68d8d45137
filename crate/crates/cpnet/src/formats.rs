//! JSON and plain-text file formats.

use cpnet_core::learners::LearnResult;
use cpnet_core::oracles::{CorruptionSet, OracleAnswer, OracleKind};
use cpnet_core::teaching::TeachingSet;
use cpnet_core::universal::UniversalSet;
use cpnet_core::{ClassSpec, Completeness, CpNet, Outcome, SwapInstance, Value};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] cpnet_core::Error),
}

pub type FormatResult<T> = Result<T, FormatError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub context: Vec<Value>,
    pub order: Option<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CptJson {
    pub variable: usize,
    pub parents: Vec<usize>,
    pub rows: Vec<RowJson>,
}

/// A net on disk: `{"n", "m", "k", "cpts"}` with contexts in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetJson {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub cpts: Vec<CptJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompletenessJson {
    Complete,
    Incomplete,
}

impl From<CompletenessJson> for Completeness {
    fn from(c: CompletenessJson) -> Self {
        match c {
            CompletenessJson::Complete => Completeness::CompleteOnly,
            CompletenessJson::Incomplete => Completeness::AllowIncomplete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(default = "complete")]
    pub completeness: CompletenessJson,
}

fn complete() -> CompletenessJson {
    CompletenessJson::Complete
}

impl SpecJson {
    pub fn to_spec(&self) -> FormatResult<ClassSpec> {
        Ok(ClassSpec::new(self.n, self.m, self.k, self.completeness.into())?)
    }

    pub fn from_spec(spec: &ClassSpec) -> Self {
        let completeness = if spec.is_complete() { CompletenessJson::Complete } else { CompletenessJson::Incomplete };
        SpecJson { n: spec.n, m: spec.m, k: spec.k, completeness }
    }
}

pub fn net_to_json(net: &CpNet) -> NetJson {
    let spec = net.spec();
    let cpts = net
        .cpts()
        .iter()
        .map(|c| CptJson {
            variable: c.variable(),
            parents: c.parents().to_vec(),
            rows: c.rows().iter().enumerate().map(|(i, r)| RowJson { context: c.context_of(i), order: r.clone() }).collect(),
        })
        .collect();
    NetJson { n: spec.n, m: spec.m, k: spec.k, cpts }
}

/// Builds a net from its JSON form. Without an explicit `completeness` the class allows
/// Empty rows exactly when the file contains one.
pub fn net_from_json(json: &NetJson, completeness: Option<Completeness>) -> FormatResult<CpNet> {
    let has_empty = json.cpts.iter().any(|c| c.rows.iter().any(|r| r.order.is_none()));
    let completeness = completeness.unwrap_or(if has_empty {
        Completeness::AllowIncomplete
    } else {
        Completeness::CompleteOnly
    });
    let spec = ClassSpec::new(json.n, json.m, json.k, completeness)?;
    if json.cpts.len() != json.n {
        return Err(FormatError::Invalid(format!("expected {} cpts, found {}", json.n, json.cpts.len())));
    }
    let mut cpts: Vec<&CptJson> = json.cpts.iter().collect();
    cpts.sort_by_key(|c| c.variable);
    let mut tables = Vec::with_capacity(json.n);
    for (v, c) in cpts.into_iter().enumerate() {
        if c.variable != v {
            return Err(FormatError::Invalid(format!("missing cpt for variable {v}")));
        }
        for (i, row) in c.rows.iter().enumerate() {
            let want = context_digits(i, c.parents.len(), json.m);
            if row.context != want {
                return Err(FormatError::Invalid(format!(
                    "variable {v}: row {i} has context {:?}, expected {want:?}",
                    row.context
                )));
            }
        }
        tables.push((c.parents.clone(), c.rows.iter().map(|r| r.order.clone()).collect()));
    }
    Ok(CpNet::from_tables(spec, tables)?)
}

fn context_digits(mut index: usize, len: usize, m: usize) -> Vec<Value> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = (index % m) as Value;
        index /= m;
    }
    out
}

pub fn parse_net(text: &str, completeness: Option<Completeness>) -> FormatResult<CpNet> {
    net_from_json(&serde_json::from_str(text)?, completeness)
}

pub fn write_net(net: &CpNet) -> String {
    serde_json::to_string_pretty(&net_to_json(net)).expect("nets serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapJson {
    pub first: Vec<Value>,
    pub second: Vec<Value>,
    pub swapped: usize,
}

impl SwapJson {
    pub fn from_swap(x: &SwapInstance) -> Self {
        SwapJson { first: x.first().values().to_vec(), second: x.second().values().to_vec(), swapped: x.swapped() }
    }

    pub fn to_swap(&self) -> FormatResult<SwapInstance> {
        let x = SwapInstance::new(Outcome::from(self.first.clone()), Outcome::from(self.second.clone()))?;
        if x.swapped() != self.swapped {
            return Err(FormatError::Invalid(format!("swap differs at {}, not at {}", x.swapped(), self.swapped)));
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleJson {
    pub first: Vec<Value>,
    pub second: Vec<Value>,
    pub swapped: usize,
    pub label: bool,
}

pub fn teaching_set_to_json(t: &TeachingSet) -> Vec<ExampleJson> {
    t.examples
        .iter()
        .map(|(x, label)| {
            let s = SwapJson::from_swap(x);
            ExampleJson { first: s.first, second: s.second, swapped: s.swapped, label: *label }
        })
        .collect()
}

pub fn teaching_examples_from_json(examples: &[ExampleJson]) -> FormatResult<Vec<(SwapInstance, bool)>> {
    examples
        .iter()
        .map(|e| {
            let s = SwapJson { first: e.first.clone(), second: e.second.clone(), swapped: e.swapped };
            Ok((s.to_swap()?, e.label))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerJson {
    Yes,
    No,
    Unknown,
}

impl From<OracleAnswer> for AnswerJson {
    fn from(a: OracleAnswer) -> Self {
        match a {
            OracleAnswer::Yes => AnswerJson::Yes,
            OracleAnswer::No => AnswerJson::No,
            OracleAnswer::Unknown => AnswerJson::Unknown,
        }
    }
}

impl From<AnswerJson> for OracleAnswer {
    fn from(a: AnswerJson) -> Self {
        match a {
            AnswerJson::Yes => OracleAnswer::Yes,
            AnswerJson::No => OracleAnswer::No,
            AnswerJson::Unknown => OracleAnswer::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryJson {
    pub x: SwapJson,
    pub answer: AnswerJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptJson {
    pub kind: String,
    pub queries: Vec<QueryJson>,
    pub distinct: usize,
}

pub fn kind_name(kind: OracleKind) -> &'static str {
    match kind {
        OracleKind::Perfect => "perfect",
        OracleKind::Limited => "limited",
        OracleKind::Malicious => "malicious",
        OracleKind::Human => "human",
    }
}

pub fn transcript_to_json(kind: OracleKind, log: &[(SwapInstance, OracleAnswer)]) -> TranscriptJson {
    TranscriptJson {
        kind: kind_name(kind).to_string(),
        queries: log.iter().map(|(x, a)| QueryJson { x: SwapJson::from_swap(x), answer: (*a).into() }).collect(),
        distinct: log.len(),
    }
}

pub fn transcript_from_json(t: &TranscriptJson) -> FormatResult<Vec<(SwapInstance, OracleAnswer)>> {
    t.queries.iter().map(|q| Ok((q.x.to_swap()?, q.answer.into()))).collect()
}

pub fn corruption_to_json(l: &CorruptionSet) -> Vec<SwapJson> {
    l.members.iter().map(SwapJson::from_swap).collect()
}

pub fn corruption_from_json(xs: &[SwapJson]) -> FormatResult<CorruptionSet> {
    xs.iter().map(SwapJson::to_swap).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalJson {
    pub m: usize,
    pub z: usize,
    pub k: usize,
    pub vectors: Vec<Vec<Value>>,
}

impl UniversalJson {
    pub fn from_set(u: &UniversalSet) -> Self {
        UniversalJson { m: u.m, z: u.z, k: u.k, vectors: u.vectors.clone() }
    }

    pub fn to_set(&self) -> FormatResult<UniversalSet> {
        Ok(UniversalSet::new(self.m, self.z, self.k, self.vectors.clone())?)
    }
}

/// One vector per line, one digit per coordinate.
pub fn universal_to_text(u: &UniversalSet) -> String {
    u.vectors.iter().map(|v| v.iter().map(|d| char::from(b'0' + d)).collect::<String>() + "\n").collect()
}

/// Reads the line format; blank lines are skipped and `m`, `k` are supplied by the caller.
pub fn universal_from_text(text: &str, m: usize, k: usize) -> FormatResult<UniversalSet> {
    let mut vectors = Vec::new();
    for (i, line) in text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty()) {
        let v = line
            .chars()
            .map(|c| c.to_digit(10).filter(|&d| (d as usize) < m).map(|d| d as Value))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| FormatError::Invalid(format!("line {}: expected digits below {m}", i + 1)))?;
        vectors.push(v);
    }
    let z = vectors.first().map_or(0, Vec::len);
    Ok(UniversalSet::new(m, z, k, vectors)?)
}

/// Accepts either the JSON form or the line form.
pub fn parse_universal(text: &str, m: usize, k: usize) -> FormatResult<UniversalSet> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str::<UniversalJson>(text)?.to_set()
    } else {
        universal_from_text(text, m, k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnResultJson {
    pub net: NetJson,
    pub queries_used: usize,
    pub transcript: Option<String>,
}

pub fn learn_result_to_json(r: &LearnResult, transcript: Option<String>) -> LearnResultJson {
    LearnResultJson { net: net_to_json(&r.net), queries_used: r.queries_used, transcript }
}
