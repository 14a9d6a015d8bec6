//! Command-line values and input files.

use std::path::Path;

use anyhow::{bail, Context};
use cflab::parse::parse_poly;
use cflab::{ComplexMatrix, MultiPoly, C64};
use serde::de::DeserializeOwned;

/// A complex constant in the polynomial grammar, e.g. `0.3-0.4i` or
/// `sqrt(2)/2`.
pub fn complex(src: &str) -> anyhow::Result<C64> {
    let p = parse_poly(src, 0).with_context(|| format!("reading `{src}`"))?;
    if p.degree() > 0 {
        bail!("`{src}` is not a constant");
    }
    Ok(p.coeff(&vec![0; p.nvars()]))
}

pub fn complex_list(src: &str) -> anyhow::Result<Vec<C64>> {
    src.split(',').map(|s| complex(s.trim())).collect()
}

pub fn poly(src: &str) -> anyhow::Result<MultiPoly> {
    parse_poly(src, 1).with_context(|| format!("reading polynomial `{src}`"))
}

pub fn json_file<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn matrix_file(path: &Path) -> anyhow::Result<ComplexMatrix> {
    json_file(path)
}

pub fn matrices_file(path: &Path) -> anyhow::Result<Vec<ComplexMatrix>> {
    json_file(path)
}

/// A JSON array of numbers, or numbers separated by whitespace or commas.
pub fn angles_file(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad angle `{s}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(complex("-0.3+0.4i").unwrap(), C64::new(-0.3, 0.4));
        assert!((complex("sqrt(2)/2").unwrap().re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(complex("z1").is_err());
        assert_eq!(complex_list("1, 0,2i").unwrap().len(), 3);
    }
}
