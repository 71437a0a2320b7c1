//! ibmqx5 device model and CNOT legality checks.
//!
//! The built-in model is parsed from `data/ibmqx5.txt`, a sectioned
//! whitespace table:
//!
//! ```text
//! [qubits]
//! Q<i> <freq GHz> <coherence us> <relaxation us> <gate err 1e-3> <readout err 1e-2> <CXi_j=v;... | ->
//! [coupling]
//! Q<i> -> Q<j>,Q<k>
//! ```
//!
//! `#` starts a comment line. Parameters are metadata only; they never
//! enter the simulation.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{Instruction, ProtocolCircuit};

const IBMQX5_DATA: &str = include_str!("../data/ibmqx5.txt");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CxError {
    pub control: usize,
    pub target: usize,
    /// In units of 1e-2.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitParams {
    pub id: usize,
    pub frequency_ghz: f64,
    pub coherence_us: f64,
    pub relaxation_us: f64,
    /// In units of 1e-3.
    pub gate_error: f64,
    /// In units of 1e-2.
    pub readout_error: f64,
    pub cx_errors: Vec<CxError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceModel {
    pub name: String,
    pub qubits: Vec<QubitParams>,
    /// Directed `(control, target)` pairs in listing order.
    pub coupling: Vec<(usize, usize)>,
}

fn parse_qubit_label(s: &str) -> Result<usize> {
    s.trim()
        .strip_prefix('Q')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::parse(format!("bad qubit label \"{s}\"")))
}

fn parse_value(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(format!("bad {what} value \"{s}\"")))?;
    if !v.is_finite() || v < 0.0 {
        return Err(Error::parse(format!("{what} must be finite and nonnegative, got {s}")));
    }
    Ok(v)
}

fn parse_cx_errors(field: &str) -> Result<Vec<CxError>> {
    if field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(';')
        .map(|entry| {
            let (label, value) = entry
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("bad CX error entry \"{entry}\"")))?;
            let pair = label
                .strip_prefix("CX")
                .and_then(|p| p.split_once('_'))
                .ok_or_else(|| Error::parse(format!("bad CX label \"{label}\"")))?;
            let control = pair.0.parse().map_err(|_| Error::parse(format!("bad CX label \"{label}\"")))?;
            let target = pair.1.parse().map_err(|_| Error::parse(format!("bad CX label \"{label}\"")))?;
            Ok(CxError { control, target, value: parse_value(value, "CX error")? })
        })
        .collect()
}

impl DeviceModel {
    /// Parses the tabular device format described in the module docs.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Qubits,
            Coupling,
        }
        let mut section = Section::None;
        let mut qubits = Vec::new();
        let mut coupling = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ctx = |e: Error| Error::parse(format!("line {}: {e}", lineno + 1));
            match line {
                "[qubits]" => section = Section::Qubits,
                "[coupling]" => section = Section::Coupling,
                _ if section == Section::Qubits => {
                    let f: Vec<&str> = line.split_whitespace().collect();
                    if f.len() != 7 {
                        return Err(ctx(Error::parse(format!("expected 7 fields, got {}", f.len()))));
                    }
                    qubits.push(QubitParams {
                        id: parse_qubit_label(f[0]).map_err(ctx)?,
                        frequency_ghz: parse_value(f[1], "frequency").map_err(ctx)?,
                        coherence_us: parse_value(f[2], "coherence time").map_err(ctx)?,
                        relaxation_us: parse_value(f[3], "relaxation time").map_err(ctx)?,
                        gate_error: parse_value(f[4], "gate error").map_err(ctx)?,
                        readout_error: parse_value(f[5], "readout error").map_err(ctx)?,
                        cx_errors: parse_cx_errors(f[6]).map_err(ctx)?,
                    });
                }
                _ if section == Section::Coupling => {
                    let (ctrl, targets) = line
                        .split_once("->")
                        .ok_or_else(|| ctx(Error::parse("expected \"Qi -> Qj,...\"")))?;
                    let c = parse_qubit_label(ctrl).map_err(ctx)?;
                    for t in targets.split(',') {
                        coupling.push((c, parse_qubit_label(t).map_err(ctx)?));
                    }
                }
                _ => return Err(ctx(Error::parse(format!("content outside a section: \"{line}\"")))),
            }
        }
        let model = DeviceModel { name: name.to_string(), qubits, coupling };
        model.check()?;
        Ok(model)
    }

    fn check(&self) -> Result<()> {
        for (i, q) in self.qubits.iter().enumerate() {
            if q.id != i {
                return Err(Error::parse(format!("qubit rows out of order at Q{}", q.id)));
            }
        }
        let n = self.qubits.len();
        let mut seen = BTreeSet::new();
        for &(c, t) in &self.coupling {
            if c >= n || t >= n || c == t {
                return Err(Error::parse(format!("coupling Q{c}->Q{t} invalid for {n} qubits")));
            }
            if !seen.insert((c, t)) {
                return Err(Error::parse(format!("coupling Q{c}->Q{t} listed twice")));
            }
        }
        Ok(())
    }

    /// Writes the model back in the tabular format.
    pub fn to_table_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.name);
        out.push_str("[qubits]\n");
        out.push_str("# qubit freq_ghz coherence_us relaxation_us gate_error_1e-3 readout_error_1e-2 cx_errors_1e-2\n");
        for q in &self.qubits {
            let cx = if q.cx_errors.is_empty() {
                "-".to_string()
            } else {
                q.cx_errors
                    .iter()
                    .map(|e| format!("CX{}_{}={:.2}", e.control, e.target, e.value))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let _ = writeln!(
                out,
                "Q{} {:.2} {:.2} {:.2} {:.2} {:.2} {}",
                q.id, q.frequency_ghz, q.coherence_us, q.relaxation_us, q.gate_error, q.readout_error, cx
            );
        }
        out.push_str("[coupling]\n");
        let mut i = 0;
        while i < self.coupling.len() {
            let c = self.coupling[i].0;
            let mut targets = Vec::new();
            while i < self.coupling.len() && self.coupling[i].0 == c {
                targets.push(format!("Q{}", self.coupling[i].1));
                i += 1;
            }
            let _ = writeln!(out, "Q{c} -> {}", targets.join(","));
        }
        out
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn has_edge(&self, control: usize, target: usize) -> bool {
        self.coupling.contains(&(control, target))
    }

    pub fn classify_cnot(&self, control: usize, target: usize) -> Legality {
        if self.has_edge(control, target) {
            Legality::Legal
        } else if self.has_edge(target, control) {
            Legality::Reversible
        } else {
            Legality::Illegal
        }
    }
}

/// The 16-qubit ibmqx5 processor.
pub fn builtin_ibmqx5() -> DeviceModel {
    DeviceModel::parse("ibmqx5", IBMQX5_DATA).expect("embedded ibmqx5 table parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Legality {
    /// The directed edge exists.
    Legal,
    /// Only the opposite edge exists; H on both qubits flips the direction.
    Reversible,
    /// No edge in either direction.
    Illegal,
}

impl fmt::Display for Legality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Legality::Legal => "legal",
            Legality::Reversible => "reversible",
            Legality::Illegal => "illegal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnotCheck {
    pub logical: (usize, usize),
    pub physical: (usize, usize),
    pub legality: Legality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegalityReport {
    pub checks: Vec<CnotCheck>,
}

impl LegalityReport {
    pub fn count(&self, l: Legality) -> usize {
        self.checks.iter().filter(|c| c.legality == l).count()
    }

    pub fn all_legal(&self) -> bool {
        self.count(Legality::Legal) == self.checks.len()
    }
}

fn check_layout(circuit: &ProtocolCircuit, device: &DeviceModel, layout: &[usize]) -> Result<()> {
    if layout.len() < circuit.num_qubits() {
        return Err(Error::validation(format!(
            "layout maps {} qubits; circuit uses {}",
            layout.len(),
            circuit.num_qubits()
        )));
    }
    let mut used = BTreeSet::new();
    for (logical, &phys) in layout.iter().enumerate() {
        if phys >= device.num_qubits() {
            return Err(Error::validation(format!(
                "logical {logical} mapped to Q{phys}, outside the {}-qubit device",
                device.num_qubits()
            )));
        }
        if !used.insert(phys) {
            return Err(Error::validation(format!("physical qubit Q{phys} used twice in layout")));
        }
    }
    Ok(())
}

/// Categorizes every CNOT of `circuit` under `layout` (`layout[logical] = physical`).
pub fn check_legality(
    circuit: &ProtocolCircuit,
    device: &DeviceModel,
    layout: &[usize],
) -> Result<LegalityReport> {
    check_layout(circuit, device, layout)?;
    let checks = circuit
        .instructions()
        .filter_map(|inst| match *inst {
            Instruction::Cnot { control, target } => {
                let physical = (layout[control], layout[target]);
                Some(CnotCheck {
                    logical: (control, target),
                    physical,
                    legality: device.classify_cnot(physical.0, physical.1),
                })
            }
            _ => None,
        })
        .collect();
    Ok(LegalityReport { checks })
}

/// Maps the circuit onto physical qubits and reverses every reversible CNOT
/// with H conjugation. Fails on the first illegal CNOT; no SWAPs are inserted.
pub fn fix_directions(
    circuit: &ProtocolCircuit,
    device: &DeviceModel,
    layout: &[usize],
) -> Result<Vec<Instruction>> {
    check_layout(circuit, device, layout)?;
    let mut out = Vec::new();
    for inst in circuit.instructions() {
        match *inst {
            Instruction::Cnot { control, target } => {
                let (c, t) = (layout[control], layout[target]);
                match device.classify_cnot(c, t) {
                    Legality::Legal => out.push(Instruction::Cnot { control: c, target: t }),
                    Legality::Reversible => out.extend([
                        Instruction::H(c),
                        Instruction::H(t),
                        Instruction::Cnot { control: t, target: c },
                        Instruction::H(c),
                        Instruction::H(t),
                    ]),
                    Legality::Illegal => {
                        return Err(Error::validation(format!(
                            "CNOT Q{c}->Q{t} has no coupling edge in either direction"
                        )))
                    }
                }
            }
            Instruction::H(q) => out.push(Instruction::H(layout[q])),
            Instruction::Error { primitive, qubit } => {
                out.push(Instruction::Error { primitive, qubit: layout[qubit] })
            }
        }
    }
    Ok(out)
}
