//! Command-line value syntax and JSON input documents.

use std::path::Path;

use paley_core::combinatorics::ConeOrder;
use paley_core::inequality::{Instance, Template};
use paley_core::measures::{Measure, MeasureHypothesis, MeasureInstance, MeasureTemplate};
use paley_core::proofkit::ReplayInput;
use paley_core::{Freq, Window};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

/// `1,3,7` for scalars; `5,1;0,3` for tuples.
pub fn parse_freqs(s: &str) -> Result<Vec<Freq>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty frequency list".into());
    }
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("not an integer: {:?}", t.trim()));
    let out: Vec<Freq> = if s.contains(';') {
        s.split(';').map(|t| t.split(',').map(int).collect::<Result<Vec<_>, _>>().map(Freq)).collect::<Result<_, _>>()?
    } else {
        s.split(',').map(|t| int(t).map(Freq::scalar)).collect::<Result<_, _>>()?
    };
    let d = out[0].dim();
    if out.iter().any(|f| f.dim() != d) {
        return Err("frequencies of different dimensions".into());
    }
    Ok(out)
}

/// Inverse of [`parse_freqs`].
pub fn format_freqs(k: &[Freq]) -> String {
    let sep = if k.iter().any(|f| f.dim() > 1) { ";" } else { "," };
    k.iter()
        .map(|f| f.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(sep)
}

/// `lo:hi`, inclusive.
pub fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("window must be lo:hi, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("not an integer: {:?}", t.trim()));
    Window::new(p(lo)?, p(hi)?).map_err(|e| e.to_string())
}

pub fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: malformed JSON: {e}", path.display()))
}

fn decode<T: DeserializeOwned>(v: Value, what: &str) -> Result<T, String> {
    serde_json::from_value(v).map_err(|e| format!("invalid {what}: {e}"))
}

fn has(v: &Value, key: &str) -> bool {
    v.get(key).is_some()
}

/// Anything `replay` accepts; failure dumps of either campaign included.
#[derive(Clone, Debug)]
pub enum ReplayDocument {
    Input(ReplayInput),
    Instance { index: u64, instance: Instance },
    Measure(MeasureInstance),
    MeasureCheck(MeasureCheck),
}

/// An explicit measure to check against K.
#[derive(Clone, Debug, Deserialize)]
pub struct MeasureCheck {
    pub measure: Measure,
    pub k: Vec<Freq>,
    pub hypothesis: MeasureHypothesis,
    #[serde(default)]
    pub order: Option<ConeOrder>,
}

impl ReplayDocument {
    pub fn from_value(v: Value) -> Result<Self, String> {
        if has(&v, "spectrum") && has(&v, "mode") {
            return decode(v, "replay input").map(ReplayDocument::Input);
        }
        if has(&v, "measure") {
            return decode(v, "measure check").map(ReplayDocument::MeasureCheck);
        }
        if has(&v, "forbidden") {
            return decode(v, "instance").map(|instance| ReplayDocument::Instance { index: 0, instance });
        }
        if has(&v, "hypothesis") {
            return decode(v, "measure instance").map(ReplayDocument::Measure);
        }
        if let Some(inner) = v.get("instance") {
            let index = v.get("index").and_then(Value::as_u64).unwrap_or(0);
            return match Self::from_value(inner.clone())? {
                ReplayDocument::Instance { instance, .. } => Ok(ReplayDocument::Instance { index, instance }),
                other => Ok(other),
            };
        }
        Err("not a replay input, instance or failure dump".into())
    }
}

/// Campaign file: one template, a list, or `{templates, trials?, seed?}`.
#[derive(Clone, Debug)]
pub struct CampaignDocument<T> {
    pub templates: Vec<T>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

impl<T: DeserializeOwned> CampaignDocument<T> {
    pub fn from_value(v: Value) -> Result<Self, String> {
        match v {
            Value::Array(_) => Ok(CampaignDocument { templates: decode(v, "template list")?, trials: None, seed: None }),
            Value::Object(ref m) if m.contains_key("templates") => {
                let trials = m.get("trials").map(|t| decode(t.clone(), "trials")).transpose()?;
                let seed = m.get("seed").map(|t| decode(t.clone(), "seed")).transpose()?;
                let templates = decode(m["templates"].clone(), "template list")?;
                Ok(CampaignDocument { templates, trials, seed })
            }
            _ => Ok(CampaignDocument { templates: vec![decode(v, "template")?], trials: None, seed: None }),
        }
    }
}

pub type InequalityCampaign = CampaignDocument<Template>;
pub type MeasureCampaign = CampaignDocument<MeasureTemplate>;

/// `measures --instances`: a campaign, or a single instance or explicit check.
pub enum MeasureDocument {
    Campaign(MeasureCampaign),
    Single(ReplayDocument),
}

impl MeasureDocument {
    pub fn from_value(v: Value) -> Result<Self, String> {
        if v.is_object() && (has(&v, "measure") || has(&v, "seed") || has(&v, "instance")) && !has(&v, "templates") {
            return ReplayDocument::from_value(v).map(MeasureDocument::Single);
        }
        MeasureCampaign::from_value(v).map(MeasureDocument::Campaign)
    }
}
