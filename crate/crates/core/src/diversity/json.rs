//! JSON form of [`FiniteDiversity`].
//!
//! ```json
//! {"labels": ["a", "b", "c"], "values": {"a,b": 1, "a,c": 1, "b,c": 1, "a,b,c": 2}}
//! ```
//!
//! Keys are comma-joined labels (any order on input, sorted on output). Every
//! subset of size at least two must be present unless `"completion": true`, in
//! which case a missing subset takes the largest value among its entered
//! subsets. Sets of size at most one may be given, but only with value `0`.
//! A symmetric table may instead give `"profile": [f0, f1, ...]`.

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FiniteDiversity;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Repr {
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<IndexMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    profile: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    completion: bool,
}

impl FiniteDiversity {
    /// Key of the subset `mask`: its labels sorted and comma-joined.
    pub fn subset_key(&self, mask: usize) -> String {
        let mut names = self.subset_labels(mask);
        names.sort();
        names.join(",")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("diversity serializes")
    }
}

impl Serialize for FiniteDiversity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values = (0..self.values.len())
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (self.subset_key(m), self.values[m]))
            .collect();
        Repr {
            labels: self.labels.clone(),
            values: Some(values),
            profile: None,
            completion: false,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteDiversity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = Repr::deserialize(d)?;
        from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn from_repr(repr: Repr) -> Result<FiniteDiversity> {
    let Repr {
        labels,
        values,
        profile,
        completion,
    } = repr;
    match (values, profile) {
        (Some(_), Some(_)) => Err(Error::Parse("give either \"values\" or \"profile\", not both".into())),
        (None, None) => Err(Error::Parse("missing \"values\" or \"profile\"".into())),
        (None, Some(f)) => FiniteDiversity::from_profile(labels, &f),
        (Some(entries), None) => from_entries(labels, entries, completion),
    }
}

fn from_entries(
    labels: Vec<String>,
    entries: IndexMap<String, f64>,
    completion: bool,
) -> Result<FiniteDiversity> {
    super::check_labels(&labels)?;
    let n = labels.len();
    let mut table: Vec<Option<f64>> = vec![None; 1 << n];
    for (key, value) in entries {
        let mut mask = 0usize;
        for name in key.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::Parse(format!("unknown label {name:?} in key {key:?}")))?;
            if mask >> i & 1 == 1 {
                return Err(Error::Parse(format!("label {name:?} repeated in key {key:?}")));
            }
            mask |= 1 << i;
        }
        if table[mask].is_some() {
            return Err(Error::Parse(format!("subset {key:?} given twice")));
        }
        table[mask] = Some(value);
    }
    table[0].get_or_insert(0.0);
    for i in 0..n {
        table[1 << i].get_or_insert(0.0);
    }

    let mut values = vec![0.0; 1 << n];
    for mask in 0..1usize << n {
        values[mask] = match table[mask] {
            Some(v) => v,
            None if completion => {
                let mut best = 0.0f64;
                let mut sub = mask;
                while sub > 0 {
                    sub = (sub - 1) & mask;
                    if let Some(v) = table[sub] {
                        best = best.max(v);
                    }
                }
                best
            }
            None => {
                return Err(Error::Parse(format!(
                    "missing value for subset {:?} (set \"completion\": true to fill it)",
                    super::subset_labels(&labels, mask).join(",")
                )))
            }
        };
    }
    FiniteDiversity::new(labels, values)
}
