//! The column process `A_1, A_2, ...`: each step appends an independent
//! uniform column of F_q^n.

mod models;
mod trackers;

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::field::{Elem, Field};
use crate::matrix::{random_vector, FqMatrix, FqVector};
use crate::rng::{trial_rng, TrialRng};
use crate::rref::{Insert, RrefState};

pub use models::{
    projective_point, sample_m1, sample_m1_simple, sample_m2, sample_m3, Model, ModelSample,
};
pub use trackers::{
    run_trackers, ConnectivityTracker, CorankTracker, CriticalTracker, FirstCircuitTracker,
    HittingTimes, KCircuitTracker, MinorKind, MinorTracker, PgTracker, Tracker,
};

/// What happened at one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub m: usize,
    pub rank: usize,
    pub corank: usize,
    pub dependent: bool,
    pub zero_column: bool,
    /// For a dependent column, the support of its kernel vector: the
    /// fundamental circuit of the new column, as column indices.
    pub circuit: Option<Vec<usize>>,
}

impl StepReport {
    /// True at the step where the corank first becomes 1.
    pub fn is_first_dependency(&self) -> bool {
        self.dependent && self.corank == 1
    }
}

/// One run of the process with its own random stream.
pub struct ProcessState {
    field: Field,
    n: usize,
    seed: u64,
    trial: u64,
    rng: TrialRng,
    a: FqMatrix,
    rref: RrefState,
    corank_history: Vec<usize>,
}

impl ProcessState {
    pub fn new(field: &Field, n: usize, seed: u64, trial: u64) -> ProcessState {
        ProcessState {
            field: field.clone(),
            n,
            seed,
            trial,
            rng: trial_rng(seed, trial),
            a: FqMatrix::empty(field, n),
            rref: RrefState::new(field, n, true),
            corank_history: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial(&self) -> u64 {
        self.trial
    }

    /// Number of columns so far.
    pub fn m(&self) -> usize {
        self.a.m()
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.a
    }

    pub fn rref(&self) -> &RrefState {
        &self.rref
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    pub fn corank(&self) -> usize {
        self.rref.corank()
    }

    /// `corank(A_1), corank(A_2), ...`.
    pub fn corank_history(&self) -> &[usize] {
        &self.corank_history
    }

    /// Appends a uniform random column.
    pub fn step(&mut self) -> StepReport {
        let v = random_vector(&self.field, self.n, &mut self.rng);
        self.feed(&v)
    }

    /// Appends a given column; `step` is this with a random one.
    pub fn feed(&mut self, v: &[Elem]) -> StepReport {
        let before = self.corank();
        let ins = self.rref.insert(v);
        self.a.push_column(v);
        let corank = self.corank();
        assert!(
            corank == before || corank == before + 1,
            "corank moved from {before} to {corank}"
        );
        self.corank_history.push(corank);
        let circuit = match &ins {
            Insert::Dependent(Some(k)) => Some(
                k.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, _)| i)
                    .collect(),
            ),
            _ => None,
        };
        StepReport {
            m: self.m(),
            rank: self.rank(),
            corank,
            dependent: ins.is_dependent(),
            zero_column: v.iter().all(|&x| x == 0),
            circuit,
        }
    }

    /// Steps until the corank equals `c` and returns that step, `tau_crk=c`.
    pub fn run_until_corank(&mut self, c: usize) -> usize {
        assert!(c >= 1, "c must be positive");
        while self.corank() < c {
            self.step();
        }
        self.m()
    }

    /// Steps until the first dependent column; returns the step and the
    /// length of the first circuit.
    pub fn track_first_circuit(&mut self) -> (usize, usize) {
        loop {
            let r = self.step();
            if let Some(c) = r.circuit {
                return (r.m, c.len());
            }
        }
    }

    /// Recomputes the rank from scratch and compares.
    pub fn rank_consistent(&self) -> bool {
        self.a.rank() == self.rref.rank()
    }

    /// Kernel basis of the current matrix, one vector per dependent step,
    /// padded to length `m`.
    pub fn kernel_basis(&self) -> Vec<FqVector> {
        self.rref.kernel_basis()
    }
}

/// One trajectory line: `step m: rank r, corank c` plus event tags.
pub fn trajectory_line(r: &StepReport) -> String {
    let mut s = format!("step {}: rank {}, corank {}", r.m, r.rank, r.corank);
    let mut tags = Vec::new();
    if r.zero_column {
        tags.push("loop".to_string());
    }
    if r.dependent {
        tags.push("dependent".to_string());
    }
    if r.is_first_dependency() {
        let len = r.circuit.as_ref().map_or(0, |c| c.len());
        tags.push(format!("first-circuit len={len}"));
    }
    if !tags.is_empty() {
        s.push_str(", ");
        s.push_str(&tags.join(" "));
    }
    s
}

/// Runs `steps` steps, writing a trajectory line per step and then the
/// final matrix in the fixture text format.
pub fn dump_trajectory(
    state: &mut ProcessState,
    steps: usize,
    out: &mut impl Write,
) -> Result<()> {
    writeln!(out, "# seed {} trial {}", state.seed(), state.trial())?;
    for _ in 0..steps {
        let r = state.step();
        writeln!(out, "{}", trajectory_line(&r))?;
    }
    out.write_all(state.matrix().to_text().as_bytes())?;
    Ok(())
}
