//! OpenQASM 2.0 emission for protocol circuits.
//!
//! Logical qubit `i` is written as `q[i]` of a 16-qubit register sized for
//! ibmqx5; the two syndrome qubits are measured into `c[0]` (syndrome a)
//! and `c[1]` (syndrome b). Error primitives are encoded as:
//!
//! | primitive    | emitted                 |
//! |--------------|-------------------------|
//! | `Y_theta`    | `u3(theta,0,0)`         |
//! | `X_theta`    | `u3(theta,-pi/2,pi/2)`  |
//! | `Z_theta`    | `u1(theta)`             |
//! | `U1`, `U3`   | `u1`, `u3`              |
//! | `X`, `H`     | `x`, `h`                |
//! | `Y`          | `u3(pi,pi/2,pi/2)`      |
//! | `Z`          | `u1(pi)`                |
//! | `I`          | `u3(0,0,0)`             |
//!
//! `u3(theta,-pi/2,pi/2)` equals the half-angle X rotation exactly;
//! `u1(theta)` matches the Z rotation up to a global phase.
//!
//! Single-representative specs (Bell and GHZ-type states) are prepared with
//! H, a CNOT chain and X masks. Any other spec is written as a commented
//! amplitude-initialization block that a loader must honor.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::error_model::{pi_fraction, ErrorPrimitive};
use crate::protocol::{Instruction, ProtocolCircuit};
use crate::states::Sign;

/// Quantum register size of the target device.
pub const REGISTER_SIZE: usize = 16;

/// Gates an emitted program may contain.
pub const GATE_WHITELIST: [&str; 6] = ["u1", "u3", "h", "x", "cx", "measure"];

/// Section markers, in emission order.
pub const SECTION_PREP: &str = "// -- state preparation";
pub const SECTION_EXTENSION: &str = "// -- parity extension";
pub const SECTION_ERROR: &str = "// -- error";
pub const SECTION_SYNDROME: &str = "// -- syndrome coupling";
pub const SECTION_MEASURE: &str = "// -- measurement";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmProgram {
    pub text: String,
    /// Qubits used by the circuit (the register itself has [`REGISTER_SIZE`]).
    pub num_qubits: usize,
    pub num_clbits: usize,
    /// Whether the state preparation was emitted as gates rather than an
    /// initialization comment block.
    pub gate_prepared: bool,
}

/// `pi/3`, `-2*pi/3`, `0`, or a decimal.
pub fn qasm_angle(theta: f64) -> String {
    match pi_fraction(theta) {
        Some((0, _)) => "0".to_string(),
        Some((p, q)) => {
            let num = match p {
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                _ => format!("{p}*pi"),
            };
            if q == 1 {
                num
            } else {
                format!("{num}/{q}")
            }
        }
        None => format!("{theta}"),
    }
}

fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> String {
    format!("u3({},{},{}) q[{q}];", qasm_angle(theta), qasm_angle(phi), qasm_angle(lambda))
}

fn primitive_line(p: &ErrorPrimitive, q: usize) -> String {
    use std::f64::consts::{FRAC_PI_2, PI};
    match *p {
        ErrorPrimitive::Ry(t) => u3(t, 0.0, 0.0, q),
        ErrorPrimitive::Rx(t) => u3(t, -FRAC_PI_2, FRAC_PI_2, q),
        ErrorPrimitive::Rz(t) | ErrorPrimitive::U1(t) => format!("u1({}) q[{q}];", qasm_angle(t)),
        ErrorPrimitive::U3 { theta, phi, lambda } => u3(theta, phi, lambda, q),
        ErrorPrimitive::X => format!("x q[{q}];"),
        ErrorPrimitive::Y => u3(PI, FRAC_PI_2, FRAC_PI_2, q),
        ErrorPrimitive::Z => format!("u1(pi) q[{q}];"),
        ErrorPrimitive::H => format!("h q[{q}];"),
        ErrorPrimitive::I => u3(0.0, 0.0, 0.0, q),
    }
}

fn instruction_line(inst: &Instruction) -> String {
    match inst {
        Instruction::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
        Instruction::H(q) => format!("h q[{q}];"),
        Instruction::Error { primitive, qubit } => primitive_line(primitive, *qubit),
    }
}

fn ket_label(index: usize, len: usize) -> String {
    (0..len)
        .map(|q| if index >> (len - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Emits the program text. Output is a pure function of the circuit.
pub fn emit_qasm(circuit: &ProtocolCircuit) -> Result<QasmProgram> {
    let m = circuit.num_qubits();
    if m > REGISTER_SIZE {
        return Err(Error::size(format!(
            "circuit uses {m} qubits; the register holds {REGISTER_SIZE}"
        )));
    }
    let n = circuit.n;
    let data = 2 * n;
    let mut t = String::new();
    t.push_str("OPENQASM 2.0;\n");
    t.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(t, "// two-syndrome error detection, n = {n}, {} entangled qubits", data + 1);
    let _ = writeln!(
        t,
        "// data q[0]..q[{}], parity q[{}], syndrome a q[{}], syndrome b q[{}]",
        data - 1,
        circuit.parity_qubit(),
        circuit.syndrome_a(),
        circuit.syndrome_b()
    );
    match &circuit.error {
        Some(e) => {
            let _ = writeln!(t, "// error: {e} on q[{}] (primitives in application order)", e.target);
        }
        None => t.push_str("// error: none\n"),
    }
    let _ = writeln!(t, "qreg q[{REGISTER_SIZE}];");
    t.push_str("creg c[2];\n");

    t.push_str(SECTION_PREP);
    t.push('\n');
    let spec = &circuit.spec;
    let gate_prepared = spec.representatives.len() == 1;
    if gate_prepared {
        let rep = &spec.representatives[0];
        t.push_str("h q[0];\n");
        if spec.sign == Sign::Minus {
            t.push_str("u1(pi) q[0];\n");
        }
        for q in 1..data {
            let _ = writeln!(t, "cx q[0],q[{q}];");
        }
        for (q, bit) in rep.as_str().bytes().enumerate() {
            if bit == b'1' {
                let _ = writeln!(t, "x q[{q}];");
            }
        }
    } else {
        let _ = writeln!(
            t,
            "// amplitude initialization of q[0]..q[{}] (no gate decomposition):",
            data - 1
        );
        let mut terms = spec.terms()?;
        terms.sort_by_key(|&(idx, _)| idx);
        for (idx, amp) in terms {
            let _ = writeln!(t, "//   {amp:+.15} |{}>", ket_label(idx, data));
        }
    }

    for (marker, body) in [
        (SECTION_EXTENSION, &circuit.extension),
        (SECTION_ERROR, &circuit.error_gates),
        (SECTION_SYNDROME, &circuit.syndrome),
    ] {
        t.push_str(marker);
        t.push('\n');
        for inst in body {
            t.push_str(&instruction_line(inst));
            t.push('\n');
        }
    }

    t.push_str(SECTION_MEASURE);
    t.push('\n');
    let _ = writeln!(t, "measure q[{}] -> c[0];", circuit.syndrome_a());
    let _ = writeln!(t, "measure q[{}] -> c[1];", circuit.syndrome_b());

    Ok(QasmProgram { text: t, num_qubits: m, num_clbits: 2, gate_prepared })
}

/// Problems found by [`lint`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LintIssue {
    MissingHeader,
    RegisterCount { qregs: usize, cregs: usize },
    ClassicalRegisterSize(String),
    GateBeforeDeclaration(usize),
    GateNotAllowed { line: usize, gate: String },
    GateAfterMeasure(usize),
    QubitOutOfRange { line: usize },
}

/// Structural checks: header, one quantum and one 2-bit classical register
/// declared before any gate, whitelisted gates only, measurements last.
pub fn lint(text: &str) -> Vec<LintIssue> {
    let mut issues = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with("//"));
    if lines.next().map(|(_, l)| l) != Some("OPENQASM 2.0;") {
        issues.push(LintIssue::MissingHeader);
    }
    let (mut qregs, mut cregs) = (0, 0);
    let mut qsize = 0usize;
    let mut seen_measure = false;
    for (no, line) in lines {
        if line.starts_with("include ") {
            continue;
        }
        if let Some(decl) = line.strip_prefix("qreg ") {
            qregs += 1;
            qsize = decl
                .split(['[', ']'])
                .nth(1)
                .and_then(|s| s.parse().ok())
                .unwrap_or(0);
            continue;
        }
        if let Some(decl) = line.strip_prefix("creg ") {
            cregs += 1;
            if decl.replace(' ', "") != "c[2];" {
                issues.push(LintIssue::ClassicalRegisterSize(decl.to_string()));
            }
            continue;
        }
        if qregs == 0 || cregs == 0 {
            issues.push(LintIssue::GateBeforeDeclaration(no));
        }
        let gate: String = line
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        if !GATE_WHITELIST.contains(&gate.as_str()) {
            issues.push(LintIssue::GateNotAllowed { line: no, gate: gate.clone() });
        }
        if gate == "measure" {
            seen_measure = true;
        } else if seen_measure {
            issues.push(LintIssue::GateAfterMeasure(no));
        }
        let in_range = line
            .match_indices("q[")
            .filter_map(|(i, _)| line[i + 2..].split(']').next()?.parse::<usize>().ok())
            .all(|q| q < qsize);
        if !in_range {
            issues.push(LintIssue::QubitOutOfRange { line: no });
        }
    }
    if qregs != 1 || cregs != 1 {
        issues.push(LintIssue::RegisterCount { qregs, cregs });
    }
    issues
}
