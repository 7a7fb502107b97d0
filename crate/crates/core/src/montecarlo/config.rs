use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matroid::Budget;

/// Experiment presets. Each checks one family of claims at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// Exhaustive oracle suites.
    E0,
    /// Full-rank probability.
    E1,
    /// Point probabilities of the corank hitting time and the U_{1,2} minor.
    E2,
    /// U_{2,3} appears with the first dependency.
    E3,
    /// Short circuit counts.
    E4,
    /// Length of the first circuit.
    E5,
    /// Hamilton circuit hitting time.
    E6,
    /// Properties of b(a).
    E7,
    /// Connectivity.
    E8,
    /// Covering all points of PG(r-1, q).
    E9,
    /// Critical number.
    E10,
    /// Equivalence of the three random models.
    E11,
}

impl Preset {
    pub const ALL: [Preset; 12] = [
        Preset::E0,
        Preset::E1,
        Preset::E2,
        Preset::E3,
        Preset::E4,
        Preset::E5,
        Preset::E6,
        Preset::E7,
        Preset::E8,
        Preset::E9,
        Preset::E10,
        Preset::E11,
    ];

    /// Presets whose outcome depends only on the parameters, not on trials.
    pub fn is_deterministic(self) -> bool {
        matches!(self, Preset::E0 | Preset::E7)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?} (expected E0..E11)")))
    }
}

/// Parameters of one experiment run. Optional fields not used by the
/// preset are ignored; [`ExperimentConfig::for_preset`] fills the ones it uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub n: usize,
    pub q: u32,
    pub trials: u64,
    pub seed: u64,
    pub m: Option<usize>,
    pub c: Option<usize>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    /// Minor catalog id, see [`MinorKind::parse`](crate::process::MinorKind::parse).
    pub minor: Option<String>,
    /// Second parameter set for presets with two parts.
    pub n2: Option<usize>,
    pub m2: Option<usize>,
    /// Trial count of a preset's secondary part.
    pub sub_trials: Option<u64>,
    pub monitor_trials: Option<u64>,
    pub budget: Budget,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// The preset at the sizes used by the acceptance suite.
    pub fn for_preset(preset: Preset) -> ExperimentConfig {
        let base = ExperimentConfig {
            preset,
            n: 0,
            q: 2,
            trials: 1,
            seed: 1,
            m: None,
            c: None,
            k: None,
            r: None,
            minor: None,
            n2: None,
            m2: None,
            sub_trials: None,
            monitor_trials: None,
            budget: Budget::default(),
            threads: None,
        };
        match preset {
            Preset::E0 => ExperimentConfig { n: 5, ..base },
            Preset::E1 => ExperimentConfig {
                n: 16,
                m: Some(16),
                trials: 100_000,
                ..base
            },
            Preset::E2 => ExperimentConfig {
                n: 60,
                c: Some(1),
                trials: 100_000,
                ..base
            },
            Preset::E3 => ExperimentConfig {
                n: 200,
                minor: Some("U23".into()),
                trials: 10_000,
                ..base
            },
            Preset::E4 => ExperimentConfig {
                n: 3,
                m: Some(4),
                k: Some(2),
                n2: Some(10),
                m2: Some(40),
                trials: 100_000,
                ..base
            },
            Preset::E5 => ExperimentConfig {
                n: 100,
                trials: 10_000,
                ..base
            },
            Preset::E6 => ExperimentConfig {
                n: 16,
                trials: 1_000,
                budget: Budget {
                    kernel_sweep: 1 << 24,
                    ..Budget::default()
                },
                ..base
            },
            Preset::E7 => ExperimentConfig { n: 1, ..base },
            Preset::E8 => ExperimentConfig {
                n: 10,
                k: Some(2),
                n2: Some(12),
                m2: Some(22),
                sub_trials: Some(1_000),
                monitor_trials: Some(200),
                trials: 10_000,
                ..base
            },
            Preset::E9 => ExperimentConfig {
                n: 3,
                r: Some(3),
                trials: 10_000,
                ..base
            },
            Preset::E10 => ExperimentConfig {
                n: 10,
                k: Some(1),
                n2: Some(8),
                sub_trials: Some(1_000),
                trials: 1_000,
                ..base
            },
            Preset::E11 => ExperimentConfig {
                n: 4,
                m: Some(3),
                trials: 100_000,
                ..base
            },
        }
    }

    /// `n + ceil((k-1) log_q n)`, the column count of the E8 connectivity check.
    pub fn conn_columns(&self) -> usize {
        let k = self.k.unwrap_or(2);
        let ln = (self.n as f64).ln() / (self.q as f64).ln();
        self.n + ((k - 1) as f64 * ln - 1e-9).ceil().max(0.0) as usize
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.q).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trial count must be at least 1".into());
        }
        self.field()?;
        let b = &self.budget;
        if b.partition_max_m == 0
            || b.kernel_sweep == 0
            || b.subset_max_m == 0
            || b.subspaces == 0
            || b.minor_max_m == 0
        {
            return bad("budgets must be positive".into());
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        let max_n = match self.preset {
            Preset::E0 => 5,
            Preset::E1 | Preset::E2 | Preset::E3 | Preset::E5 => 1024,
            Preset::E4 | Preset::E9 | Preset::E11 => 12,
            Preset::E6 | Preset::E10 => 40,
            Preset::E7 => usize::MAX,
            Preset::E8 => 16,
        };
        if self.n > max_n {
            return bad(format!("{}: n = {} exceeds {max_n}", self.preset, self.n));
        }
        match self.preset {
            Preset::E1 => {
                let m = self.m.unwrap_or(self.n);
                if m == 0 || m > self.n {
                    return bad("E1 needs 1 <= m <= n".into());
                }
            }
            Preset::E2 if self.c.unwrap_or(1) == 0 => return bad("E2 needs c >= 1".into()),
            Preset::E4 => {
                let k = self.k.unwrap_or(2);
                if k == 0 || self.m.unwrap_or(4) > 64 || self.m2.unwrap_or(40) > 64 {
                    return bad("E4 needs k >= 1 and m <= 64".into());
                }
            }
            Preset::E8 => {
                let k = self.k.unwrap_or(2);
                if k < 2 {
                    return bad("E8 needs k >= 2".into());
                }
                let m = self.conn_columns();
                let m2 = self.m2.unwrap_or(0);
                if m > b.partition_max_m || m2 > b.partition_max_m {
                    return bad(format!(
                        "E8 needs m = {m} and m2 = {m2} within the partition budget {}",
                        b.partition_max_m
                    ));
                }
            }
            Preset::E9 => {
                let r = self.r.unwrap_or(self.n);
                if r == 0 || r > 12 || r != self.n {
                    return bad("E9 needs n = r with 1 <= r <= 12".into());
                }
            }
            Preset::E10 => {
                let k = self.k.unwrap_or(1);
                if k == 0 || k >= self.n || self.n2.unwrap_or(8) == 0 {
                    return bad("E10 needs 1 <= k < n".into());
                }
            }
            Preset::E11 => {
                let m = self.m.unwrap_or(3) as u64;
                let zeta = crate::theory::gaussian_binomial_f64(self.n as u64, 1, self.q as u64);
                if m == 0 || m as f64 > zeta {
                    return bad("E11 needs 1 <= m <= [n]_q".into());
                }
            }
            _ => {}
        }
        if let Some(id) = &self.minor {
            crate::process::MinorKind::parse(id)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for p in Preset::ALL {
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
            ExperimentConfig::for_preset(p).validate().unwrap();
        }
        assert!("E12".parse::<Preset>().is_err());
        let mut c = ExperimentConfig::for_preset(Preset::E1);
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 1;
        c.q = 6;
        assert!(c.validate().is_err());
    }
}
