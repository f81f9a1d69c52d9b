//! Run configuration: built-in defaults, then a `key=value` file, then flags.

use std::path::Path;

use fqgamma::ffarith::{Fq, MAX_Q};

use crate::CliError;

pub const DEFAULT_Q: u32 = 3;
pub const DEFAULT_TRUNC_T: usize = 64;
pub const DEFAULT_DEG_F_CAP: usize = 6;
pub const MIN_PREC: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub q: u32,
    /// Number of u-adic coefficients carried by results.
    pub prec: i64,
    pub trunc_t: usize,
    pub deg_f_cap: usize,
    pub seed: u64,
}

/// Values that may come from a file or from flags; unset fields fall through.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub q: Option<u32>,
    pub prec: Option<i64>,
    pub trunc_t: Option<usize>,
    pub deg_f_cap: Option<usize>,
    pub seed: Option<u64>,
}

impl Overrides {
    /// Parses `key=value` lines; blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Overrides, CliError> {
        let mut o = Overrides::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
            let v = v.trim();
            let bad = |_| CliError::Config(format!("line {}: bad value {v:?}", n + 1));
            match k.trim().replace('-', "_").as_str() {
                "q" => o.q = Some(v.parse().map_err(bad)?),
                "prec" => o.prec = Some(v.parse().map_err(bad)?),
                "trunc_t" => o.trunc_t = Some(v.parse().map_err(bad)?),
                "deg_f_cap" => o.deg_f_cap = Some(v.parse().map_err(bad)?),
                "seed" => o.seed = Some(v.parse().map_err(bad)?),
                other => return Err(CliError::Config(format!("line {}: unknown key {other:?}", n + 1))),
            }
        }
        Ok(o)
    }

    pub fn load(path: &Path) -> Result<Overrides, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Overrides::parse(&text)
    }

    /// Fields of `self` win over those of `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            q: self.q.or(base.q),
            prec: self.prec.or(base.prec),
            trunc_t: self.trunc_t.or(base.trunc_t),
            deg_f_cap: self.deg_f_cap.or(base.deg_f_cap),
            seed: self.seed.or(base.seed),
        }
    }
}

impl Config {
    pub fn resolve(o: &Overrides) -> Result<Config, CliError> {
        let q = o.q.unwrap_or(DEFAULT_Q);
        let cfg = Config {
            q,
            prec: o.prec.unwrap_or(128 * (i64::from(q) - 1)),
            trunc_t: o.trunc_t.unwrap_or(DEFAULT_TRUNC_T),
            deg_f_cap: o.deg_f_cap.unwrap_or(DEFAULT_DEG_F_CAP),
            seed: o.seed.unwrap_or(0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.q > MAX_Q {
            return Err(CliError::Config(format!("q = {} exceeds {MAX_Q}", self.q)));
        }
        Fq::new(self.q).map_err(|e| CliError::Config(e.to_string()))?;
        if self.prec < MIN_PREC {
            return Err(CliError::Config(format!("prec must be at least {MIN_PREC}")));
        }
        if self.trunc_t == 0 || self.deg_f_cap == 0 {
            return Err(CliError::Config("caps must be positive".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> Fq {
        Fq::new(self.q).expect("validated")
    }
}
