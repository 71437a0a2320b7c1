//! Two-syndrome error-detection circuit.
//!
//! Qubit layout for a spec with `2n` data qubits:
//!
//! | qubits      | role                                  |
//! |-------------|---------------------------------------|
//! | `0..2n`     | complementarity state                 |
//! | `2n`        | parity qubit added by the extension   |
//! | `2n + 1`    | syndrome a (bit-parity check)         |
//! | `2n + 2`    | syndrome b (complement/phase check)   |
//!
//! Syndrome a collects the parity of all `2n + 1` qubits. Syndrome b is put
//! in `|+>`, controls an X on every data qubit `0..2n`, and is rotated back
//! with H, which measures the eigenvalue of `X^{(x)2n}`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::error_model::{matrix_of, named_error_suite, ErrorPrimitive, ErrorSpec};
use crate::statevector::{Gate1Q, StateVector, MAX_QUBITS};
use crate::states::ComplementarySpec;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instruction {
    Cnot { control: usize, target: usize },
    H(usize),
    Error { primitive: ErrorPrimitive, qubit: usize },
}

impl Instruction {
    pub fn apply(&self, s: &mut StateVector) -> Result<()> {
        match *self {
            Instruction::Cnot { control, target } => s.apply_cnot(control, target),
            Instruction::H(q) => s.apply_1q(&Gate1Q::hadamard(), q),
            Instruction::Error { primitive, qubit } => s.apply_1q(&matrix_of(&primitive)?, qubit),
        }
    }
}

/// The full detection circuit for one spec and optional error.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolCircuit {
    pub n: usize,
    pub spec: ComplementarySpec,
    pub error: Option<ErrorSpec>,
    /// `2n` CNOTs writing the data parity into qubit `2n`.
    pub extension: Vec<Instruction>,
    pub error_gates: Vec<Instruction>,
    /// Syndrome coupling: `2n + 1` CNOTs onto syndrome a, then H, `2n`
    /// controlled flips from syndrome b, H.
    pub syndrome: Vec<Instruction>,
}

impl ProtocolCircuit {
    pub fn num_qubits(&self) -> usize {
        2 * self.n + 3
    }

    pub fn parity_qubit(&self) -> usize {
        2 * self.n
    }

    pub fn syndrome_a(&self) -> usize {
        2 * self.n + 1
    }

    pub fn syndrome_b(&self) -> usize {
        2 * self.n + 2
    }

    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.extension
            .iter()
            .chain(&self.error_gates)
            .chain(&self.syndrome)
    }

    pub fn gate_count(&self) -> usize {
        self.extension.len() + self.error_gates.len() + self.syndrome.len()
    }

    pub fn cnot_count(&self) -> usize {
        self.instructions()
            .filter(|i| matches!(i, Instruction::Cnot { .. }))
            .count()
    }

    /// `|psi_spec> (x) |0> (x) |00>` over `2n + 3` qubits.
    pub fn initial_state(&self) -> Result<StateVector> {
        initial_state(&self.spec)
    }

    /// Runs every instruction from [`Self::initial_state`].
    pub fn execute(&self) -> Result<StateVector> {
        let mut s = self.initial_state()?;
        for inst in self.instructions() {
            inst.apply(&mut s)?;
        }
        Ok(s)
    }
}

fn initial_state(spec: &ComplementarySpec) -> Result<StateVector> {
    let terms = spec.terms()?;
    let m = spec.num_qubits() + 3;
    if m > MAX_QUBITS {
        return Err(Error::size(format!("protocol needs {m} qubits; limit is {MAX_QUBITS}")));
    }
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1usize << m];
    for (idx, a) in terms {
        amps[idx << 3] = num_complex::Complex64::new(a, 0.0);
    }
    StateVector::from_amplitudes(m, amps)
}

pub fn build_circuit(spec: &ComplementarySpec, error: Option<&ErrorSpec>) -> Result<ProtocolCircuit> {
    let report = spec.validate();
    if !report.is_valid() {
        return Err(Error::validation(format!("invalid spec:\n{report}")));
    }
    let n = spec.n;
    let data = 2 * n;
    let parity = data;
    let (sa, sb) = (data + 1, data + 2);
    if data + 3 > MAX_QUBITS {
        return Err(Error::size(format!("protocol needs {} qubits; limit is {MAX_QUBITS}", data + 3)));
    }

    let extension = (0..data)
        .map(|q| Instruction::Cnot { control: q, target: parity })
        .collect();

    let error_gates = match error {
        None => Vec::new(),
        Some(e) => {
            if e.target > parity {
                return Err(Error::index(format!(
                    "error target {} outside data qubits 0..={parity}",
                    e.target
                )));
            }
            if e.sequence.is_empty() {
                return Err(Error::validation("error sequence is empty"));
            }
            e.sequence
                .iter()
                .map(|&primitive| Instruction::Error { primitive, qubit: e.target })
                .collect()
        }
    };

    let mut syndrome: Vec<Instruction> = (0..=parity)
        .map(|q| Instruction::Cnot { control: q, target: sa })
        .collect();
    syndrome.push(Instruction::H(sb));
    syndrome.extend((0..data).map(|q| Instruction::Cnot { control: sb, target: q }));
    syndrome.push(Instruction::H(sb));

    Ok(ProtocolCircuit {
        n,
        spec: spec.clone(),
        error: error.cloned(),
        extension,
        error_gates,
        syndrome,
    })
}

/// Measured bits of the two syndrome qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SyndromeOutcome {
    pub s_a: u8,
    pub s_b: u8,
}

impl SyndromeOutcome {
    /// Outcomes in table-column order: `00, 10, 01, 11`.
    pub const ALL: [SyndromeOutcome; 4] = [
        SyndromeOutcome { s_a: 0, s_b: 0 },
        SyndromeOutcome { s_a: 1, s_b: 0 },
        SyndromeOutcome { s_a: 0, s_b: 1 },
        SyndromeOutcome { s_a: 1, s_b: 1 },
    ];

    pub fn new(s_a: u8, s_b: u8) -> Result<Self> {
        if s_a > 1 || s_b > 1 {
            return Err(Error::validation(format!("syndrome bits must be 0/1, got ({s_a},{s_b})")));
        }
        Ok(SyndromeOutcome { s_a, s_b })
    }

    fn column(self) -> usize {
        usize::from(self.s_a) + 2 * usize::from(self.s_b)
    }

    /// Label with the pre-Hadamard state of syndrome b, e.g. `{1,+}`.
    pub fn sign_label(self) -> &'static str {
        ["{0,+}", "{1,+}", "{0,-}", "{1,-}"][self.column()]
    }
}

impl fmt::Display for SyndromeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.s_a, self.s_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ErrorClass {
    NoError,
    BitFlip,
    PhaseFlip,
    Both,
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::NoError => "NoError",
            ErrorClass::BitFlip => "BitFlip",
            ErrorClass::PhaseFlip => "PhaseFlip",
            ErrorClass::Both => "Both",
        })
    }
}

/// `00 -> NoError`, `10 -> BitFlip`, `01 -> PhaseFlip`, `11 -> Both`.
pub fn classify(o: SyndromeOutcome) -> ErrorClass {
    match (o.s_a, o.s_b) {
        (0, 0) => ErrorClass::NoError,
        (_, 0) => ErrorClass::BitFlip,
        (0, _) => ErrorClass::PhaseFlip,
        _ => ErrorClass::Both,
    }
}

/// Classifies relative to the outcome the spec yields with no error. A spec
/// with sign `-` reads `01` when error-free.
pub fn classify_with_baseline(o: SyndromeOutcome, baseline: SyndromeOutcome) -> ErrorClass {
    classify(SyndromeOutcome {
        s_a: o.s_a ^ baseline.s_a,
        s_b: o.s_b ^ baseline.s_b,
    })
}

/// Outcome probabilities in column order `00, 10, 01, 11`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyndromeDistribution {
    pub probs: [f64; 4],
}

impl SyndromeDistribution {
    /// Reorders a marginal table over `[syndrome_a, syndrome_b]`
    /// (index `2 s_a + s_b`) into column order.
    fn from_marginal(table: &[f64]) -> Self {
        SyndromeDistribution { probs: [table[0], table[2], table[1], table[3]] }
    }

    pub fn get(&self, o: SyndromeOutcome) -> f64 {
        self.probs[o.column()]
    }

    /// Most probable outcome; ties go to the earlier column.
    pub fn modal(&self) -> SyndromeOutcome {
        let mut best = 0;
        for k in 1..4 {
            if self.probs[k] > self.probs[best] {
                best = k;
            }
        }
        SyndromeOutcome::ALL[best]
    }

    pub fn max_abs_diff(&self, other: &[f64; 4]) -> f64 {
        self.probs
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SyndromeCounts {
    pub counts: [u64; 4],
    pub shots: u64,
}

impl SyndromeCounts {
    pub fn frequencies(&self) -> SyndromeDistribution {
        let n = self.shots as f64;
        SyndromeDistribution { probs: self.counts.map(|k| k as f64 / n) }
    }
}

fn syndrome_marginal(c: &ProtocolCircuit) -> Result<(StateVector, [usize; 2])> {
    let s = c.execute()?;
    Ok((s, [c.syndrome_a(), c.syndrome_b()]))
}

/// Exact syndrome distribution.
pub fn run_exact(spec: &ComplementarySpec, error: Option<&ErrorSpec>) -> Result<SyndromeDistribution> {
    let circuit = build_circuit(spec, error)?;
    let (s, qubits) = syndrome_marginal(&circuit)?;
    Ok(SyndromeDistribution::from_marginal(&s.marginal_distribution(&qubits)?))
}

/// `shots` seeded samples of the syndrome pair.
pub fn run_shots(
    spec: &ComplementarySpec,
    error: Option<&ErrorSpec>,
    shots: u64,
    seed: u64,
) -> Result<SyndromeCounts> {
    let circuit = build_circuit(spec, error)?;
    let (s, qubits) = syndrome_marginal(&circuit)?;
    let raw = s.sample_counts(&qubits, shots, seed)?;
    Ok(SyndromeCounts { counts: [raw[0], raw[2], raw[1], raw[3]], shots })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    X,
    Y,
    Z,
}

impl SweepAxis {
    pub fn rotation(self, theta: f64) -> ErrorPrimitive {
        match self {
            SweepAxis::X => ErrorPrimitive::Rx(theta),
            SweepAxis::Y => ErrorPrimitive::Ry(theta),
            SweepAxis::Z => ErrorPrimitive::Rz(theta),
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(SweepAxis::X),
            "Y" => Ok(SweepAxis::Y),
            "Z" => Ok(SweepAxis::Z),
            other => Err(Error::parse(format!("unknown sweep axis \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exact,
    /// Point `k` is sampled with seed [`point_seed`]`(seed, k)`.
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub dist: SyndromeDistribution,
}

/// `k pi / 15` for `k` in `-15..=15`.
pub fn default_theta_grid() -> Vec<f64> {
    (-15..=15).map(|k| k as f64 * std::f64::consts::PI / 15.0).collect()
}

/// Per-point sampling seed (SplitMix64 finalizer over the master seed and
/// point index).
pub fn point_seed(master: u64, index: usize) -> u64 {
    let mut z = master ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sweep_point(
    spec: &ComplementarySpec,
    axis: SweepAxis,
    target: usize,
    mode: SweepMode,
    index: usize,
    theta: f64,
) -> Result<SweepRow> {
    let error = ErrorSpec::single(axis.rotation(theta), target);
    let dist = match mode {
        SweepMode::Exact => run_exact(spec, Some(&error))?,
        SweepMode::Shots { shots, seed } => {
            run_shots(spec, Some(&error), shots, point_seed(seed, index))?.frequencies()
        }
    };
    Ok(SweepRow { theta, dist })
}

fn check_sweep(spec: &ComplementarySpec, target: usize, thetas: &[f64]) -> Result<()> {
    if thetas.is_empty() {
        return Err(Error::validation("theta grid is empty"));
    }
    if target > 2 * spec.n {
        return Err(Error::index(format!("sweep target {target} outside 0..={}", 2 * spec.n)));
    }
    Ok(())
}

/// One row per angle. Points are independent and run in parallel when the
/// `parallel` feature is on; the result does not depend on scheduling.
pub fn sweep(
    spec: &ComplementarySpec,
    axis: SweepAxis,
    thetas: &[f64],
    target: usize,
    mode: SweepMode,
) -> Result<Vec<SweepRow>> {
    check_sweep(spec, target, thetas)?;
    #[cfg(feature = "parallel")]
    {
        thetas
            .par_iter()
            .enumerate()
            .map(|(k, &t)| sweep_point(spec, axis, target, mode, k, t))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_sequential(spec, axis, thetas, target, mode)
    }
}

pub fn sweep_sequential(
    spec: &ComplementarySpec,
    axis: SweepAxis,
    thetas: &[f64],
    target: usize,
    mode: SweepMode,
) -> Result<Vec<SweepRow>> {
    check_sweep(spec, target, thetas)?;
    thetas
        .iter()
        .enumerate()
        .map(|(k, &t)| sweep_point(spec, axis, target, mode, k, t))
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "theta,p00,p10,p01,p11,class_mode";

/// Flat record for CSV/JSON output. `class_mode` is the class of the modal
/// outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub theta: f64,
    pub p00: f64,
    pub p10: f64,
    pub p01: f64,
    pub p11: f64,
    pub class_mode: ErrorClass,
}

impl From<&SweepRow> for SweepRecord {
    fn from(r: &SweepRow) -> Self {
        let [p00, p10, p01, p11] = r.dist.probs;
        SweepRecord {
            theta: r.theta,
            p00,
            p10,
            p01,
            p11,
            class_mode: classify(r.dist.modal()),
        }
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let rec = SweepRecord::from(r);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            rec.theta, rec.p00, rec.p10, rec.p01, rec.p11, rec.class_mode
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub name: &'static str,
    pub error: ErrorSpec,
    pub dist: SyndromeDistribution,
}

/// Runs the eight-error suite with every entry retargeted to `target`.
/// In shot mode row `k` uses seed [`point_seed`]`(seed, k)`.
pub fn run_suite(spec: &ComplementarySpec, target: usize, mode: SweepMode) -> Result<Vec<SuiteRow>> {
    named_error_suite()
        .into_iter()
        .enumerate()
        .map(|(k, named)| {
            let error = named.spec.with_target(target);
            let dist = match mode {
                SweepMode::Exact => run_exact(spec, Some(&error))?,
                SweepMode::Shots { shots, seed } => {
                    run_shots(spec, Some(&error), shots, point_seed(seed, k))?.frequencies()
                }
            };
            Ok(SuiteRow { name: named.name, error, dist })
        })
        .collect()
}
