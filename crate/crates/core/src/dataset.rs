//! Versioned JSON dataset documents.
//!
//! Relations are stored as `{"n": N, "encoding": "...", "data": BASE64}` where
//! the payload is [`Rel::to_row_bytes`] in standard base64.

use std::collections::BTreeMap;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::causal::CausalStructure;
use crate::error::{Error, Result};
use crate::relation::Rel;
use crate::report::CheckReport;
use crate::spacetimes::{Event, EventSet, SamplingRecord, SpacetimeModel};

pub const FORMAT_NAME: &str = "kcausal-dataset";
pub const FORMAT_VERSION: &str = "1";
pub const RELATION_ENCODING: &str = "rows-lsb-first-base64";

/// Conventional relation names.
pub const CHRONOLOGY: &str = "I";
pub const K_PLUS: &str = "K";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EncodedRelation {
    n: usize,
    encoding: String,
    data: String,
}

impl From<&Rel> for EncodedRelation {
    fn from(r: &Rel) -> Self {
        EncodedRelation {
            n: r.n(),
            encoding: RELATION_ENCODING.to_string(),
            data: STANDARD.encode(r.to_row_bytes()),
        }
    }
}

impl EncodedRelation {
    fn decode(&self) -> Result<Rel> {
        if self.encoding != RELATION_ENCODING {
            return Err(Error::MalformedDataset(format!("unknown relation encoding {:?}", self.encoding)));
        }
        let bytes = STANDARD
            .decode(&self.data)
            .map_err(|e| Error::MalformedDataset(format!("bad base64 payload: {e}")))?;
        Rel::from_row_bytes(self.n, &bytes)
    }
}

pub fn encode_relation(r: &Rel) -> String {
    STANDARD.encode(r.to_row_bytes())
}

pub fn decode_relation(n: usize, data: &str) -> Result<Rel> {
    EncodedRelation {
        n,
        encoding: RELATION_ENCODING.to_string(),
        data: data.to_string(),
    }
    .decode()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Document {
    format: String,
    version: String,
    model: SpacetimeModel,
    sampling: SamplingRecord,
    events: Vec<Event>,
    #[serde(default)]
    radius: Option<f64>,
    #[serde(default)]
    iterations: Option<usize>,
    #[serde(default)]
    relations: BTreeMap<String, EncodedRelation>,
    #[serde(default)]
    reports: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub events: EventSet,
    pub radius: Option<f64>,
    pub iterations: Option<usize>,
    pub relations: BTreeMap<String, Rel>,
    pub reports: Vec<CheckReport>,
}

impl Dataset {
    pub fn new(events: EventSet) -> Self {
        Dataset {
            events,
            radius: None,
            iterations: None,
            relations: BTreeMap::new(),
            reports: Vec::new(),
        }
    }

    /// Dataset holding the events, radius, `I`, `K` and iteration count.
    pub fn from_structure(cs: &CausalStructure) -> Self {
        let mut d = Dataset::new(cs.events.clone());
        d.radius = cs.topology.radius();
        d.iterations = Some(cs.iterations);
        d.relations.insert(CHRONOLOGY.into(), cs.chronology.clone());
        d.relations.insert(K_PLUS.into(), cs.k.clone());
        d
    }

    pub fn relation(&self, name: &str) -> Result<&Rel> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::MalformedDataset(format!("relation {name:?} not present")))
    }

    /// Rebuilds the causal structure from the stored radius, `I` and `K`.
    pub fn causal_structure(&self) -> Result<CausalStructure> {
        let radius = self
            .radius
            .ok_or_else(|| Error::MalformedDataset("no topology radius recorded".into()))?;
        Ok(CausalStructure {
            topology: self.events.ball_topology(radius)?,
            chronology: self.relation(CHRONOLOGY)?.clone(),
            k: self.relation(K_PLUS)?.clone(),
            iterations: self.iterations.unwrap_or(0),
            events: self.events.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION.into(),
            model: self.events.model.clone(),
            sampling: self.events.sampling.clone(),
            events: self.events.events.clone(),
            radius: self.radius,
            iterations: self.iterations,
            relations: self.relations.iter().map(|(k, r)| (k.clone(), r.into())).collect(),
            reports: self.reports.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document =
            serde_json::from_str(text).map_err(|e| Error::MalformedDataset(e.to_string()))?;
        if doc.format != FORMAT_NAME {
            return Err(Error::MalformedDataset(format!("unexpected format {:?}", doc.format)));
        }
        if doc.version != FORMAT_VERSION {
            return Err(Error::MalformedDataset(format!("unsupported version {:?}", doc.version)));
        }
        let model = SpacetimeModel::new(doc.model.kind, doc.model.region)?;
        let events = EventSet::new(model, doc.events, doc.sampling)?;
        let mut relations = BTreeMap::new();
        for (name, enc) in doc.relations {
            let r = enc.decode()?;
            if r.n() != events.len() {
                return Err(Error::MalformedDataset(format!(
                    "relation {name:?} has n = {} but there are {} events",
                    r.n(),
                    events.len()
                )));
            }
            relations.insert(name, r);
        }
        Ok(Dataset {
            events,
            radius: doc.radius,
            iterations: doc.iterations,
            relations,
            reports: doc.reports,
        })
    }
}
