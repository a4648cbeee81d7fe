//! Parsing of Poisson structures and polynomial arguments, and access to
//! the weight table with its on-disk cache.

use std::collections::BTreeMap;
use std::path::Path;

use defq::weights::WeightTable;
use defq::{PolyVector, Polynomial};
use serde::Deserialize;

use crate::CliError;

/// On-disk form of a Poisson structure. Keys are `"i,j"` with `1 ≤ i < j ≤ dim`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PiFile {
    dim: usize,
    #[serde(default)]
    components: BTreeMap<String, String>,
}

const SO3: &str = r#"{"dim": 3, "components": {"1,2": "x3", "2,3": "x1", "1,3": "-x2"}}"#;
const CANONICAL: &str = r#"{"dim": 2, "components": {"1,2": "1"}}"#;

/// Accepts a preset name, inline JSON, or a path to a JSON file.
pub fn load_pi(arg: &str) -> Result<PolyVector, CliError> {
    let text = match arg.trim() {
        "so3" => SO3.to_string(),
        "canonical" => CANONICAL.to_string(),
        t if t.starts_with('{') => t.to_string(),
        _ => std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?,
    };
    parse_pi(&text)
}

pub fn parse_pi(text: &str) -> Result<PolyVector, CliError> {
    let file: PiFile = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad Poisson structure: {e}")))?;
    if file.dim == 0 {
        return Err(CliError::Usage("dimension must be positive".into()));
    }
    let mut pi = PolyVector::zero(file.dim, 2);
    for (key, poly) in &file.components {
        let (i, j) = parse_key(key, file.dim)?;
        let p = Polynomial::parse(poly, file.dim)?;
        pi.add_component(vec![i - 1, j - 1], p)?;
    }
    Ok(pi)
}

fn parse_key(key: &str, dim: usize) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad component key {key:?}: expected \"i,j\" with 1 <= i < j <= {dim}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || i >= j || j > dim {
        return Err(bad());
    }
    Ok((i, j))
}

pub fn parse_poly(s: &str, dim: usize) -> Result<Polynomial, CliError> {
    Ok(Polynomial::parse(s, dim)?)
}

/// The shipped table overlaid with the cache, if one exists.
pub fn weight_table(cache: Option<&Path>) -> Result<WeightTable, CliError> {
    let mut table = WeightTable::builtin();
    if let Some(path) = cache {
        if path.exists() {
            table.merge(&WeightTable::load(path)?);
        }
    }
    Ok(table)
}

/// Merges `fresh` into the cache file, replacing entries with the same id.
pub fn record(cache: Option<&Path>, fresh: &WeightTable) -> Result<(), CliError> {
    let Some(path) = cache else { return Ok(()) };
    let mut stored = if path.exists() { WeightTable::load(path)? } else { WeightTable::new() };
    stored.merge(fresh);
    stored.save(path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        let so3 = load_pi("so3").unwrap();
        assert_eq!(so3.dim(), 3);
        assert_eq!(so3.component(&[0, 1]), Polynomial::var(3, 2).unwrap());
        assert_eq!(so3.component(&[0, 2]), -&Polynomial::var(3, 1).unwrap());
        assert!(load_pi("canonical").unwrap().is_constant());
    }

    #[test]
    fn bad_keys_are_rejected() {
        for key in ["2,1", "0,1", "1,4", "1;2", "1,1"] {
            let text = format!(r#"{{"dim": 3, "components": {{"{key}": "1"}}}}"#);
            assert!(matches!(parse_pi(&text), Err(CliError::Usage(_))), "{key}");
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_pi(r#"{"dim": 2, "comps": {}}"#).is_err());
    }
}
