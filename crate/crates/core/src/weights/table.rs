use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::WeightEstimate;
use crate::error::Result;
use crate::graphs::GraphId;
use crate::polyalg::rational::{format_rational, parse_rational};
use crate::polyalg::Rational;

/// One cached weight: the estimate and, if snapping succeeded, the exact
/// value it was snapped to.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightEntry {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub snapped: Option<Rational>,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    mean: f64,
    stderr: f64,
    samples: u64,
    seed: u64,
    snapped: Option<String>,
}

impl Serialize for WeightEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EntryRepr {
            mean: self.mean,
            stderr: self.stderr,
            samples: self.samples,
            seed: self.seed,
            snapped: self.snapped.as_ref().map(format_rational),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = EntryRepr::deserialize(d)?;
        let snapped = r
            .snapped
            .map(|s| parse_rational(&s))
            .transpose()
            .map_err(D::Error::custom)?;
        Ok(WeightEntry {
            mean: r.mean,
            stderr: r.stderr,
            samples: r.samples,
            seed: r.seed,
            snapped,
        })
    }
}

/// Weight cache keyed by graph id. Entries are only ever added or replaced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTable {
    entries: BTreeMap<GraphId, WeightEntry>,
}

const BUILTIN: &str = include_str!("../../data/weights_order2.json");

impl WeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Snapped weights for every graph of order at most two, shipped with
    /// the library.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("shipped weight table is valid JSON")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weight tables always serialize")
    }

    /// A missing file reads as an empty table.
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(s) => Self::from_json(&s),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &GraphId) -> Option<&WeightEntry> {
        self.entries.get(id)
    }

    pub fn snapped(&self, id: &GraphId) -> Option<&Rational> {
        self.entries.get(id).and_then(|e| e.snapped.as_ref())
    }

    pub fn estimate(&self, id: &GraphId) -> Option<WeightEstimate> {
        self.entries.get(id).map(|e| WeightEstimate {
            graph: id.clone(),
            mean: e.mean,
            stderr: e.stderr,
            samples: e.samples,
            seed: e.seed,
        })
    }

    /// Records an estimate, replacing any earlier entry for the same graph.
    pub fn insert(&mut self, est: &WeightEstimate, snapped: Option<Rational>) {
        self.entries.insert(
            est.graph.clone(),
            WeightEntry {
                mean: est.mean,
                stderr: est.stderr,
                samples: est.samples,
                seed: est.seed,
                snapped,
            },
        );
    }

    pub fn merge(&mut self, other: &WeightTable) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GraphId, &WeightEntry)> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rational::rat;

    #[test]
    fn json_round_trip_and_last_write_wins() {
        let id = GraphId::parse("1;2;[b1,b2]").unwrap();
        let mut t = WeightTable::new();
        let est = WeightEstimate {
            graph: id.clone(),
            mean: 0.5001,
            stderr: 0.0003,
            samples: 1000,
            seed: 7,
        };
        t.insert(&est, None);
        t.insert(&est, Some(rat(1, 2)));
        assert_eq!(t.len(), 1);
        let js = t.to_json();
        assert!(js.contains("\"snapped\": \"1/2\""));
        let back = WeightTable::from_json(&js).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.snapped(&id), Some(&rat(1, 2)));
        assert_eq!(back.estimate(&id).unwrap(), est);
    }

    #[test]
    fn null_snap_parses() {
        let js = r#"{"1;2;[b1,b2]": {"mean": 0.5, "stderr": 0.1, "samples": 10, "seed": 1, "snapped": null}}"#;
        let t = WeightTable::from_json(js).unwrap();
        assert!(t.snapped(&GraphId::parse("1;2;[b1,b2]").unwrap()).is_none());
        assert!(WeightTable::from_json(r#"{"1;2;[b1,b2]": {"mean": 0.5}}"#).is_err());
    }
}
