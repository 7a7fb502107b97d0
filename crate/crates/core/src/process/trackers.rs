//! Hitting-time trackers. Each tracker watches the step reports of one
//! process and records the first step at which its property holds.

use std::collections::{BTreeMap, HashSet};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matroid::{
    binary_rows_avoid, check_subspace_budget, pack_binary, rows_avoid, Budget, ColumnRanker,
    Extended, RepMatroid,
};
use crate::subspace::{BinaryCursor, SubspaceCursor};
use crate::theory::q_integer;

use super::{ProcessState, StepReport};

/// First steps at which tracked properties hold. Unset entries were not
/// reached within the run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HittingTimes {
    pub tau_crk: BTreeMap<usize, usize>,
    pub tau_first_circuit: Option<usize>,
    pub first_circuit_length: Option<usize>,
    pub tau_k_circ: BTreeMap<usize, usize>,
    pub tau_k_conn: BTreeMap<usize, usize>,
    pub tau_k_crt: BTreeMap<usize, usize>,
    pub tau_minor: BTreeMap<String, usize>,
    pub tau_pg: BTreeMap<usize, usize>,
    pub tau_hamilton: Option<usize>,
    /// Steps after full rank at which the vertical connectivity dropped.
    pub kappa_decreases: Vec<usize>,
    /// Step of the first zero column when critical-number tracking halted on it.
    pub loop_at: Option<usize>,
    /// Steps at which the critical number jumped by more than one.
    pub chi_skips: Vec<usize>,
}

impl HittingTimes {
    /// Ordering constraints that hold on every trial.
    pub fn check_order(&self) -> std::result::Result<(), String> {
        let strictly_increasing = |m: &BTreeMap<usize, usize>, name: &str| {
            let v: Vec<(usize, usize)> = m.iter().map(|(&k, &t)| (k, t)).collect();
            for w in v.windows(2) {
                if w[1].0 == w[0].0 + 1 && w[1].1 <= w[0].1 {
                    return Err(format!("{name}[{}] = {} not after {name}[{}] = {}", w[1].0, w[1].1, w[0].0, w[0].1));
                }
            }
            Ok(())
        };
        strictly_increasing(&self.tau_crk, "tau_crk")?;
        strictly_increasing(&self.tau_k_crt, "tau_k_crt")?;
        if !self.chi_skips.is_empty() {
            return Err(format!("critical number skipped at {:?}", self.chi_skips));
        }
        Ok(())
    }
}

pub trait Tracker {
    fn observe(&mut self, st: &ProcessState, rep: &StepReport) -> Result<()>;
    fn finished(&self) -> bool;
    fn record(&self, out: &mut HittingTimes);
}

/// Steps `st` until every tracker is finished or `max_steps` columns exist.
pub fn run_trackers(
    st: &mut ProcessState,
    trackers: &mut [&mut dyn Tracker],
    max_steps: usize,
) -> Result<HittingTimes> {
    while st.m() < max_steps && !trackers.iter().all(|t| t.finished()) {
        let rep = st.step();
        for t in trackers.iter_mut() {
            if !t.finished() {
                t.observe(st, &rep)?;
            }
        }
    }
    let mut out = HittingTimes::default();
    for t in trackers.iter() {
        t.record(&mut out);
    }
    Ok(out)
}

/// `tau_crk=c` for `c = 1..=c_max`.
pub struct CorankTracker {
    c_max: usize,
    taus: BTreeMap<usize, usize>,
}

impl CorankTracker {
    pub fn new(c_max: usize) -> CorankTracker {
        CorankTracker {
            c_max,
            taus: BTreeMap::new(),
        }
    }
}

impl Tracker for CorankTracker {
    fn observe(&mut self, _: &ProcessState, rep: &StepReport) -> Result<()> {
        if rep.dependent && rep.corank <= self.c_max {
            self.taus.insert(rep.corank, rep.m);
        }
        Ok(())
    }

    fn finished(&self) -> bool {
        self.taus.len() == self.c_max
    }

    fn record(&self, out: &mut HittingTimes) {
        out.tau_crk.extend(&self.taus);
    }
}

/// Step and length of the first circuit.
#[derive(Default)]
pub struct FirstCircuitTracker {
    hit: Option<(usize, usize)>,
}

impl FirstCircuitTracker {
    pub fn new() -> FirstCircuitTracker {
        FirstCircuitTracker::default()
    }
}

impl Tracker for FirstCircuitTracker {
    fn observe(&mut self, _: &ProcessState, rep: &StepReport) -> Result<()> {
        if let Some(c) = &rep.circuit {
            self.hit = Some((rep.m, c.len()));
        }
        Ok(())
    }

    fn finished(&self) -> bool {
        self.hit.is_some()
    }

    fn record(&self, out: &mut HittingTimes) {
        if let Some((m, len)) = self.hit {
            out.tau_first_circuit = Some(m);
            out.first_circuit_length = Some(len);
        }
    }
}

/// `tau_k-circ`. New circuits must contain the new column, so only dependent
/// steps are examined, sweeping the kernel vectors whose last coordinate is 1.
pub struct KCircuitTracker {
    k: usize,
    budget: Budget,
    hamilton: bool,
    hit: Option<usize>,
}

impl KCircuitTracker {
    pub fn new(k: usize, budget: Budget) -> KCircuitTracker {
        assert!(k >= 1);
        KCircuitTracker {
            k,
            budget,
            hamilton: false,
            hit: None,
        }
    }

    /// A circuit of length `n`.
    pub fn hamilton(n: usize, budget: Budget) -> KCircuitTracker {
        KCircuitTracker {
            hamilton: true,
            ..KCircuitTracker::new(n, budget)
        }
    }
}

fn mask_of_support(v: &[Elem]) -> u64 {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

/// Supports of all kernel vectors with last coordinate 1, i.e. `new + sum c_i k_i`.
fn new_circuit_candidates(
    field: &Field,
    kernel: &[Vec<Elem>],
    budget: &Budget,
    mut visit: impl FnMut(u64) -> bool,
) -> Result<()> {
    let d = kernel.len();
    let (newest, rest) = kernel.split_last().expect("dependent step has a kernel vector");
    let q = field.q() as u128;
    let count = q.checked_pow((d - 1) as u32).unwrap_or(u128::MAX);
    if count > budget.kernel_sweep {
        return Err(Error::budget("k-circuit kernel sweep", count, budget.kernel_sweep));
    }
    if field.is_binary() {
        let base = mask_of_support(newest);
        let masks: Vec<u64> = rest.iter().map(|v| mask_of_support(v)).collect();
        let mut cur = base;
        if !visit(cur) {
            return Ok(());
        }
        for i in 1u64..(1 << (d - 1)) {
            cur ^= masks[i.trailing_zeros() as usize];
            if !visit(cur) {
                return Ok(());
            }
        }
        return Ok(());
    }
    let mut coeffs = vec![0 as Elem; d - 1];
    let qe = field.q();
    loop {
        let mut v = newest.clone();
        for (c, k) in coeffs.iter().zip(rest) {
            field.axpy(&mut v, *c, k);
        }
        if !visit(mask_of_support(&v)) {
            return Ok(());
        }
        let mut i = 0;
        while i < coeffs.len() {
            coeffs[i] += 1;
            if (coeffs[i] as u32) < qe {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == coeffs.len() {
            return Ok(());
        }
    }
}

impl Tracker for KCircuitTracker {
    fn observe(&mut self, st: &ProcessState, rep: &StepReport) -> Result<()> {
        if !rep.dependent || rep.m < self.k {
            return Ok(());
        }
        if rep.m > 64 {
            return Err(Error::budget("k-circuit tracking (m <= 64)", rep.m as u128, 64));
        }
        let kernel = st.kernel_basis();
        let ranker = ColumnRanker::new(st.matrix());
        let k = self.k;
        let mut found = false;
        new_circuit_candidates(st.field(), &kernel, &self.budget, |s| {
            if s.count_ones() as usize == k && ranker.is_circuit_support(s) {
                found = true;
            }
            !found
        })?;
        if found {
            self.hit = Some(rep.m);
        }
        Ok(())
    }

    fn finished(&self) -> bool {
        self.hit.is_some()
    }

    fn record(&self, out: &mut HittingTimes) {
        if let Some(m) = self.hit {
            out.tau_k_circ.insert(self.k, m);
            if self.hamilton {
                out.tau_hamilton = Some(m);
            }
        }
    }
}

/// `tau_k-conn` for `k = 1..=k_max` by exhaustive bipartition search, plus a
/// monitor of drops in the vertical connectivity after full rank. With
/// `monitor_to` set the tracker keeps running until that step.
pub struct ConnectivityTracker {
    k_max: usize,
    budget: Budget,
    monitor_to: usize,
    taus: BTreeMap<usize, usize>,
    last_full_rank_kappa: Option<Extended>,
    decreases: Vec<usize>,
    last_m: usize,
}

impl ConnectivityTracker {
    pub fn new(k_max: usize, budget: Budget) -> ConnectivityTracker {
        ConnectivityTracker {
            k_max,
            budget,
            monitor_to: 0,
            taus: BTreeMap::new(),
            last_full_rank_kappa: None,
            decreases: Vec::new(),
            last_m: 0,
        }
    }

    pub fn with_monitor(mut self, until_step: usize) -> ConnectivityTracker {
        self.monitor_to = until_step;
        self
    }
}

impl Tracker for ConnectivityTracker {
    fn observe(&mut self, st: &ProcessState, rep: &StepReport) -> Result<()> {
        self.last_m = rep.m;
        let full = rep.rank == st.n();
        let need_tau = self.taus.len() < self.k_max;
        let need_monitor = full && rep.m <= self.monitor_to;
        if !need_tau && !need_monitor {
            return Ok(());
        }
        // an independent column is a coloop: kappa = 1 once there is any other rank
        let kappa = if !rep.dependent && rep.rank >= 2 {
            Extended::Finite(1)
        } else {
            RepMatroid::new(st.matrix().clone())
                .vertical_connectivity(&self.budget)?
                .value
        };
        for k in 1..=self.k_max {
            if kappa >= Extended::Finite(k) {
                self.taus.entry(k).or_insert(rep.m);
            }
        }
        if full {
            if let Some(prev) = self.last_full_rank_kappa {
                if kappa < prev {
                    self.decreases.push(rep.m);
                }
            }
            self.last_full_rank_kappa = Some(kappa);
        }
        Ok(())
    }

    fn finished(&self) -> bool {
        self.taus.len() == self.k_max && self.last_m >= self.monitor_to
    }

    fn record(&self, out: &mut HittingTimes) {
        out.tau_k_conn.extend(&self.taus);
        out.kappa_decreases.extend(&self.decreases);
    }
}

enum Level {
    Binary(BinaryCursor, Vec<u64>),
    General(SubspaceCursor, Vec<Vec<Elem>>),
    /// `chi = n`: the zero subspace misses every nonzero column.
    Top,
}

/// `tau_k-crt` for `k = 1..=k_max`, the first step with critical number
/// `k + 1`. The set of subspaces avoiding the columns only shrinks, so each
/// level keeps a cursor that resumes where the last witness was found.
/// Stops at the first zero column, where the critical number is undefined.
pub struct CriticalTracker {
    k_max: usize,
    budget: Budget,
    chi: usize,
    level: Option<Level>,
    bin_cols: Vec<u64>,
    cols: Vec<Vec<Elem>>,
    taus: BTreeMap<usize, usize>,
    loop_at: Option<usize>,
    skips: Vec<usize>,
    history: Vec<usize>,
}

impl CriticalTracker {
    pub fn new(k_max: usize, budget: Budget) -> CriticalTracker {
        CriticalTracker {
            k_max,
            budget,
            chi: 0,
            level: None,
            bin_cols: Vec::new(),
            cols: Vec::new(),
            taus: BTreeMap::new(),
            loop_at: None,
            skips: Vec::new(),
            history: Vec::new(),
        }
    }

    /// Critical number after each observed step.
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    fn open_level(&mut self, field: &Field, n: usize, k: usize) -> Result<()> {
        if k == n {
            self.level = Some(Level::Top);
            return Ok(());
        }
        check_subspace_budget(n, k, field.q(), &self.budget)?;
        self.level = Some(if field.is_binary() && n <= 64 {
            Level::Binary(BinaryCursor::new(n, k), Vec::new())
        } else {
            Level::General(SubspaceCursor::new(field, n, k), Vec::new())
        });
        Ok(())
    }

    /// Advances the current level's cursor to a subspace avoiding all
    /// columns. Returns false if the level is exhausted.
    fn find_witness(&mut self, field: &Field) -> bool {
        match self.level.as_mut().expect("level open") {
            Level::Top => true,
            Level::Binary(cur, w) => {
                if !w.is_empty() && binary_rows_avoid(w, &self.bin_cols) {
                    return true;
                }
                while let Some(rows) = cur.advance() {
                    if binary_rows_avoid(rows, &self.bin_cols) {
                        *w = rows.to_vec();
                        return true;
                    }
                }
                false
            }
            Level::General(cur, w) => {
                if !w.is_empty() && rows_avoid(field, w, &self.cols) {
                    return true;
                }
                while let Some(rows) = cur.advance() {
                    if rows_avoid(field, rows, &self.cols) {
                        *w = rows.to_vec();
                        return true;
                    }
                }
                false
            }
        }
    }
}

impl Tracker for CriticalTracker {
    fn observe(&mut self, st: &ProcessState, rep: &StepReport) -> Result<()> {
        if rep.zero_column {
            self.loop_at = Some(rep.m);
            return Ok(());
        }
        let col = st.matrix().col(rep.m - 1);
        let f = st.field().clone();
        let n = st.n();
        if f.is_binary() && n <= 64 {
            self.bin_cols.push(pack_binary(col));
        } else {
            self.cols.push(col.to_vec());
        }
        let before = self.chi;
        if self.chi == 0 {
            self.chi = 1;
            self.open_level(&f, n, 1)?;
        }
        while !self.find_witness(&f) {
            self.chi += 1;
            self.open_level(&f, n, self.chi)?;
        }
        if self.chi > before + 1 && before > 0 {
            self.skips.push(rep.m);
        }
        for c in before.max(1)..self.chi {
            // chi reached c + 1 at this step
            if c <= self.k_max {
                self.taus.insert(c, rep.m);
            }
        }
        self.history.push(self.chi);
        Ok(())
    }

    fn finished(&self) -> bool {
        self.loop_at.is_some() || self.chi > self.k_max
    }

    fn record(&self, out: &mut HittingTimes) {
        out.tau_k_crt.extend(&self.taus);
        out.loop_at = out.loop_at.or(self.loop_at);
        out.chi_skips.extend(&self.skips);
    }
}

/// Minors with a tracking shortcut, plus the general case.
#[derive(Debug, Clone)]
pub enum MinorKind {
    /// A parallel pair: first circuit of length at least 2.
    U12,
    /// First circuit of length at least 3.
    U23,
    /// Free matroid of rank r: rank reaches r.
    Free(usize),
    /// Exhaustive `has_minor` at every step once rank and corank allow it.
    General(RepMatroid),
}

impl MinorKind {
    /// Catalog ids: `U12`, `U23`, `free:r`.
    pub fn parse(id: &str) -> Result<MinorKind> {
        match id {
            "U12" | "u12" => Ok(MinorKind::U12),
            "U23" | "u23" => Ok(MinorKind::U23),
            _ => match id.strip_prefix("free:").map(str::parse::<usize>) {
                Some(Ok(r)) => Ok(MinorKind::Free(r)),
                _ => Err(Error::InvalidParam(format!("unknown minor id {id:?}"))),
            },
        }
    }

    pub fn id(&self) -> String {
        match self {
            MinorKind::U12 => "U12".into(),
            MinorKind::U23 => "U23".into(),
            MinorKind::Free(r) => format!("free:{r}"),
            MinorKind::General(m) => format!("general(r={},m={})", m.rank(), m.size()),
        }
    }

    /// Corank of the minor; `tau_minor >= tau_crk` at this value.
    pub fn corank(&self) -> usize {
        match self {
            MinorKind::U12 | MinorKind::U23 => 1,
            MinorKind::Free(_) => 0,
            MinorKind::General(m) => m.corank(),
        }
    }
}

pub struct MinorTracker {
    kind: MinorKind,
    budget: Budget,
    hit: Option<usize>,
}

impl MinorTracker {
    pub fn new(kind: MinorKind, budget: Budget) -> MinorTracker {
        MinorTracker {
            kind,
            budget,
            hit: None,
        }
    }
}

impl Tracker for MinorTracker {
    fn observe(&mut self, st: &ProcessState, rep: &StepReport) -> Result<()> {
        let hit = match &self.kind {
            MinorKind::U12 => rep.dependent && !rep.zero_column,
            // a long circuit through a parallel copy would have existed already
            MinorKind::U23 => rep.circuit.as_ref().is_some_and(|c| c.len() >= 3),
            MinorKind::Free(r) => rep.rank >= *r,
            MinorKind::General(nm) => {
                rep.rank >= nm.rank()
                    && rep.corank >= nm.corank()
                    && RepMatroid::new(st.matrix().clone())
                        .has_minor(nm, &self.budget)?
                        .is_some()
            }
        };
        if hit {
            self.hit = Some(rep.m);
        }
        Ok(())
    }

    fn finished(&self) -> bool {
        self.hit.is_some()
    }

    fn record(&self, out: &mut HittingTimes) {
        if let Some(m) = self.hit {
            out.tau_minor.insert(self.kind.id(), m);
        }
    }
}

/// `tau_PGr`. When `n = r` this is coverage of all `[r]_q` points; otherwise
/// the general minor search runs at every step from rank `r` on.
pub struct PgTracker {
    r: usize,
    budget: Budget,
    points: HashSet<Vec<Elem>>,
    zeta: Option<usize>,
    hit: Option<usize>,
}

impl PgTracker {
    pub fn new(r: usize, q: u32, budget: Budget) -> PgTracker {
        PgTracker {
            r,
            budget,
            points: HashSet::new(),
            zeta: q_integer(r as u64, q as u64).to_usize(),
            hit: None,
        }
    }
}

impl Tracker for PgTracker {
    fn observe(&mut self, st: &ProcessState, rep: &StepReport) -> Result<()> {
        if st.n() == self.r {
            let mut v = st.matrix().col(rep.m - 1).to_vec();
            if st.field().normalize(&mut v) {
                self.points.insert(v);
            }
            if Some(self.points.len()) == self.zeta {
                self.hit = Some(rep.m);
            }
        } else if rep.rank >= self.r
            && RepMatroid::new(st.matrix().clone()).contains_pg(self.r, &self.budget)?
        {
            self.hit = Some(rep.m);
        }
        Ok(())
    }

    fn finished(&self) -> bool {
        self.hit.is_some()
    }

    fn record(&self, out: &mut HittingTimes) {
        if let Some(m) = self.hit {
            out.tau_pg.insert(self.r, m);
        }
    }
}
