//! Settings resolved from flags, an optional TOML file and defaults, in
//! that order of precedence.

use std::path::PathBuf;

use anyhow::Context;
use cflab::Tolerance;
use serde::Deserialize;

use crate::GlobalArgs;

pub const DEFAULT_WINDOW: usize = 16;
pub const DEFAULT_GRID: usize = 360;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    threads: Option<usize>,
    window: Option<usize>,
    grid: Option<usize>,
    #[serde(default)]
    tolerance: ToleranceFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceFile {
    algebraic: Option<f64>,
    spectral: Option<f64>,
    grid: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: u64,
    pub threads: Option<usize>,
    pub window: usize,
    pub grid: usize,
    pub tol: Tolerance,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> anyhow::Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str::<ConfigFile>(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        let d = Tolerance::default();
        let tol = Tolerance::new(
            args.tol_algebraic.or(file.tolerance.algebraic).unwrap_or(d.algebraic),
            args.tol_spectral.or(file.tolerance.spectral).unwrap_or(d.spectral),
            args.tol_grid.or(file.tolerance.grid).unwrap_or(d.grid),
        )?;
        let threads = args.threads.or(file.threads);
        if threads == Some(0) {
            anyhow::bail!("--threads must be positive");
        }
        Ok(Self {
            seed: args.seed.or(file.seed).unwrap_or(0),
            threads,
            window: args.window.or(file.window).unwrap_or(DEFAULT_WINDOW),
            grid: args.grid.or(file.grid).unwrap_or(DEFAULT_GRID),
            tol,
            out: args.out.clone(),
            csv: args.csv.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = std::env::temp_dir().join(format!("cflab-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.toml");
        std::fs::write(&path, "seed = 9\nwindow = 12\n[tolerance]\ngrid = 0.01\n").unwrap();
        let args = GlobalArgs {
            config: Some(path),
            window: Some(20),
            ..GlobalArgs::default()
        };
        let s = Settings::resolve(&args).unwrap();
        assert_eq!((s.seed, s.window, s.grid), (9, 20, DEFAULT_GRID));
        assert_eq!(s.tol.grid, 0.01);
        assert_eq!(s.tol.spectral, Tolerance::default().spectral);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
