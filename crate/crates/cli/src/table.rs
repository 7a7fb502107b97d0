use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fqmatroid::montecarlo::SCHEMA_VERSION;
use fqmatroid::theory::{b_of_a, ko_t_upper_bound, lb_alpha, limit_cck};

use crate::predict::field_order;
use crate::{output, CliResult, Failure};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Table {
    /// Columns a, b: the threshold b(a) on a grid of a in (0, 1].
    Bofa,
    /// Columns t, lb_alpha, ko_upper: bounds on tau_{k-conn}/n - 1, t in (0, 1).
    Bounds,
    /// Columns k, cck: the limiting pmf of tau_{crk=c} - n.
    Cck,
}

#[derive(Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    what: Table,
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Corank for `cck`.
    #[arg(long, default_value_t = 1)]
    c: u64,
    /// Grid start (a, t, or k).
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    /// Grid end, inclusive.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// CSV file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `from, from+step, ...` up to `to` (with a little slack for rounding).
fn grid(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !from.is_finite() || !to.is_finite() || from > to {
        return Err(Failure::Usage(format!("empty grid: from {from} to {to} step {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as u64 + 1;
    if count > 1_000_000 {
        return Err(Failure::Usage(format!("grid of {count} points is too large")));
    }
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

pub fn run(a: &TableArgs) -> CliResult<()> {
    let q = field_order(Some(a.q), a.what)?;
    let (lo, hi, st) = match a.what {
        Table::Bofa => (0.01, 1.0, 0.01),
        Table::Bounds => (0.01, 0.99, 0.01),
        Table::Cck => (-20.0, a.c as f64, 1.0),
    };
    let xs = grid(a.from.unwrap_or(lo), a.to.unwrap_or(hi), a.step.unwrap_or(st))?;
    let rows: Vec<String> = match a.what {
        Table::Bofa => {
            if xs.iter().any(|&x| !(x > 0.0 && x <= 1.0 + 1e-12)) {
                return Err(Failure::Usage("a must lie in (0, 1]".into()));
            }
            xs.iter()
                .map(|&x| {
                    let x = x.min(1.0);
                    format!("{x},{}", b_of_a(q, x))
                })
                .collect()
        }
        Table::Bounds => {
            if xs.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return Err(Failure::Usage("t must lie in (0, 1)".into()));
            }
            xs.iter()
                .map(|&t| format!("{t},{},{}", lb_alpha(q, t), ko_t_upper_bound(q, t)))
                .collect()
        }
        Table::Cck => {
            if a.c == 0 {
                return Err(Failure::Usage("--c must be at least 1".into()));
            }
            xs.iter()
                .map(|&k| {
                    let k = k.round() as i64;
                    format!("{k},{}", limit_cck(q, a.c, k))
                })
                .collect()
        }
    };
    let header = match a.what {
        Table::Bofa => "a,b",
        Table::Bounds => "t,lb_alpha,ko_upper",
        Table::Cck => "k,cck",
    };
    let mut w = output(a.out.as_deref())?;
    writeln!(
        w,
        "# schema_version={SCHEMA_VERSION} table={} q={q} c={} from={} to={} step={}",
        a.what.to_possible_value().unwrap().get_name(),
        a.c,
        xs[0],
        xs[xs.len() - 1],
        a.step.unwrap_or(st)
    )?;
    writeln!(w, "{header}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    Ok(())
}
