//! Elicitation sessions in which a person answers the learner's queries.
//!
//! The learner is deterministic, so a session keeps only the answered queries and re-runs the
//! learner against them after every answer. The run stops at the first unanswered query,
//! which becomes the pending one.

use cpnet_core::learners::{
    learn_kbounded_complete, learn_kbounded_incomplete, learn_tree_complete, learn_tree_incomplete, LearnResult,
};
use cpnet_core::oracles::{OracleAnswer, OracleKind, OracleSession};
use cpnet_core::universal::{construct_product, UniversalSet};
use cpnet_core::{ClassSpec, CpNet, Error, SwapInstance};
use serde::{Deserialize, Serialize};

use crate::dot::default_names;
use crate::formats::{transcript_from_json, transcript_to_json, FormatError, SpecJson, TranscriptJson, UniversalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Tree,
    Kbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    AwaitingAnswer,
    Learning,
    Done,
    Aborted,
    Failed,
}

/// `first` means the first outcome of the pending swap is preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HumanAnswer {
    First,
    Second,
    Unknown,
}

/// Display names for attributes and, optionally, for their values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Names {
    #[serde(default)]
    pub attributes: Vec<String>,
    #[serde(default)]
    pub values: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub spec: SpecJson,
    pub learner: LearnerKind,
    #[serde(default)]
    pub universal: Option<UniversalJson>,
    #[serde(default)]
    pub names: Option<Names>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("invalid session: {0}")]
    Invalid(String),
    #[error("session is not awaiting an answer")]
    NotAwaiting,
    #[error("this session needs a complete answer")]
    UnknownNotAllowed,
}

impl From<FormatError> for SessionError {
    fn from(e: FormatError) -> Self {
        SessionError::Invalid(e.to_string())
    }
}

impl From<Error> for SessionError {
    fn from(e: Error) -> Self {
        SessionError::Invalid(e.to_string())
    }
}

/// What is stored on disk after every change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub config: SessionConfig,
    pub status: Status,
    pub transcript: TranscriptJson,
    pub updated: u64,
}

#[derive(Debug, Clone)]
pub struct ElicitationSession {
    pub id: String,
    pub config: SessionConfig,
    spec: ClassSpec,
    universal: Option<UniversalSet>,
    history: Vec<(SwapInstance, OracleAnswer)>,
    status: Status,
    pending: Option<SwapInstance>,
    result: Option<LearnResult>,
    failure: Option<String>,
    pub updated: u64,
}

impl ElicitationSession {
    pub fn new(id: String, config: SessionConfig, now: u64) -> Result<Self, SessionError> {
        let spec = config.spec.to_spec()?;
        if spec.m != 2 {
            return Err(SessionError::Invalid("sessions need binary domains".into()));
        }
        let universal = match config.learner {
            LearnerKind::Tree => {
                if spec.k > 1 {
                    return Err(SessionError::Invalid("the tree learner needs k ≤ 1".into()));
                }
                None
            }
            LearnerKind::Kbounded => Some(match &config.universal {
                Some(u) => u.to_set()?,
                None => construct_product(2, spec.n - 1, spec.k)?,
            }),
        };
        if let Some(names) = &config.names {
            if !names.attributes.is_empty() && names.attributes.len() != spec.n {
                return Err(SessionError::Invalid(format!("expected {} attribute names", spec.n)));
            }
            if let Some(values) = &names.values {
                if values.len() != spec.n || values.iter().any(|v| v.len() != spec.m) {
                    return Err(SessionError::Invalid("value names must be n lists of m names".into()));
                }
            }
        }
        let mut s = ElicitationSession {
            id,
            config,
            spec,
            universal,
            history: Vec::new(),
            status: Status::Learning,
            pending: None,
            result: None,
            failure: None,
            updated: now,
        };
        s.advance()?;
        Ok(s)
    }

    /// Restores a stored session by replaying its transcript.
    pub fn from_record(record: SessionRecord) -> Result<Self, SessionError> {
        let mut s = Self::new(record.id, record.config, record.updated)?;
        s.history = transcript_from_json(&record.transcript)?;
        s.advance()?;
        if record.status == Status::Aborted {
            s.abort();
        }
        Ok(s)
    }

    pub fn record(&self) -> SessionRecord {
        SessionRecord {
            id: self.id.clone(),
            config: self.config.clone(),
            status: self.status,
            transcript: transcript_to_json(OracleKind::Human, &self.history),
            updated: self.updated,
        }
    }

    pub fn spec(&self) -> &ClassSpec {
        &self.spec
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn pending(&self) -> Option<&SwapInstance> {
        self.pending.as_ref()
    }

    pub fn result(&self) -> Option<&CpNet> {
        self.result.as_ref().map(|r| &r.net)
    }

    pub fn failure(&self) -> Option<&str> {
        self.failure.as_deref()
    }

    pub fn history(&self) -> &[(SwapInstance, OracleAnswer)] {
        &self.history
    }

    pub fn allows_unknown(&self) -> bool {
        !self.spec.is_complete()
    }

    pub fn attribute_names(&self) -> Vec<String> {
        match &self.config.names {
            Some(n) if n.attributes.len() == self.spec.n => n.attributes.clone(),
            _ => default_names(self.spec.n),
        }
    }

    pub fn value_names(&self) -> Option<&Vec<Vec<String>>> {
        self.config.names.as_ref().and_then(|n| n.values.as_ref())
    }

    /// Answers recorded for `x` imply the opposite answer for the reversed swap, except that
    /// "unknown" in an incomplete session means neither outcome is preferred.
    fn oracle(&self) -> OracleSession {
        let mut supplied = Vec::with_capacity(2 * self.history.len());
        for (x, a) in &self.history {
            let (fwd, back) = match a {
                OracleAnswer::Yes => (OracleAnswer::Yes, OracleAnswer::No),
                OracleAnswer::No => (OracleAnswer::No, OracleAnswer::Yes),
                OracleAnswer::Unknown => (OracleAnswer::No, OracleAnswer::No),
            };
            supplied.push((x.reversed(), back));
            supplied.push((x.clone(), fwd));
        }
        OracleSession::human(supplied)
    }

    fn advance(&mut self) -> Result<(), SessionError> {
        self.status = Status::Learning;
        let mut oracle = self.oracle();
        let spec = self.spec;
        let run = match (self.config.learner, &self.universal) {
            (LearnerKind::Tree, _) if spec.is_complete() => learn_tree_complete(&mut oracle, &spec),
            (LearnerKind::Tree, _) => learn_tree_incomplete(&mut oracle, &spec),
            (LearnerKind::Kbounded, Some(u)) if spec.is_complete() => learn_kbounded_complete(&mut oracle, &spec, u),
            (LearnerKind::Kbounded, Some(u)) => learn_kbounded_incomplete(&mut oracle, &spec, u),
            (LearnerKind::Kbounded, None) => return Err(SessionError::Invalid("missing universal set".into())),
        };
        match run {
            Ok(r) => {
                self.pending = None;
                self.result = Some(r);
                self.status = Status::Done;
            }
            Err(Error::AwaitingAnswer(x)) => {
                self.pending = Some(x);
                self.status = Status::AwaitingAnswer;
            }
            Err(Error::UniversalSetTooWeak) => return Err(SessionError::Invalid(Error::UniversalSetTooWeak.to_string())),
            Err(e) => {
                self.pending = None;
                self.failure = Some(e.to_string());
                self.status = Status::Failed;
            }
        }
        Ok(())
    }

    /// Records the answer to the pending query and runs the learner up to its next query.
    pub fn answer(&mut self, answer: HumanAnswer, now: u64) -> Result<(), SessionError> {
        if self.status != Status::AwaitingAnswer {
            return Err(SessionError::NotAwaiting);
        }
        let x = self.pending.clone().ok_or(SessionError::NotAwaiting)?;
        let a = match answer {
            HumanAnswer::First => OracleAnswer::Yes,
            HumanAnswer::Second => OracleAnswer::No,
            HumanAnswer::Unknown if self.allows_unknown() => OracleAnswer::Unknown,
            HumanAnswer::Unknown => return Err(SessionError::UnknownNotAllowed),
        };
        self.history.push((x, a));
        self.updated = now;
        self.advance()
    }

    pub fn abort(&mut self) {
        if self.status != Status::Done {
            self.status = Status::Aborted;
            self.pending = None;
        }
    }
}
