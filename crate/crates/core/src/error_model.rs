//! Single-qubit error library.
//!
//! Rotations use the half-angle form `R_A(theta) = cos(theta/2) I - i sin(theta/2) sigma_A`.
//! An [`ErrorSpec`] lists primitives in the order they act in time, so
//! `X:pi/3,Y:pi/3` applies the X rotation first.
//!
//! Mini-language accepted by [`parse_error_sequence`]:
//!
//! ```text
//! sequence  := primitive ("," primitive)*
//! primitive := "X" | "Y" | "Z" | "H" | "I"          Pauli / Hadamard / identity
//!            | ("X" | "Y" | "Z") ":" angle           axis rotation
//!            | ("RX" | "RY" | "RZ") ":" angle        axis rotation
//!            | "U1" ":" angle
//!            | "U3" ":" angle ":" angle ":" angle
//!            | "R"                                   Y:pi/2 then X:pi/2
//! angle     := ["-"|"+"] (decimal | [decimal ["*"]] "pi") ["/" decimal]
//! ```
//!
//! Names are case-insensitive. Examples: `X:pi/3,Y:2pi/3`, `Z:-14pi/15`, `U3:pi:0:0.5`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::Gate1Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimitiveKind {
    Rx,
    Ry,
    Rz,
    U1,
    U3,
    X,
    Y,
    Z,
    H,
    I,
}

impl PrimitiveKind {
    pub fn arity(self) -> usize {
        match self {
            PrimitiveKind::U3 => 3,
            PrimitiveKind::Rx | PrimitiveKind::Ry | PrimitiveKind::Rz | PrimitiveKind::U1 => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorPrimitive {
    Rx(f64),
    Ry(f64),
    Rz(f64),
    U1(f64),
    U3 { theta: f64, phi: f64, lambda: f64 },
    X,
    Y,
    Z,
    H,
    I,
}

impl ErrorPrimitive {
    /// Builds a primitive from a kind and a parameter list, checking arity.
    pub fn from_kind(kind: PrimitiveKind, params: &[f64]) -> Result<Self> {
        if params.len() != kind.arity() {
            return Err(Error::validation(format!(
                "{kind:?} takes {} parameter(s), got {}",
                kind.arity(),
                params.len()
            )));
        }
        let p = ErrorPrimitive::from_kind_unchecked(kind, params);
        p.check_finite()?;
        Ok(p)
    }

    fn from_kind_unchecked(kind: PrimitiveKind, params: &[f64]) -> Self {
        match kind {
            PrimitiveKind::Rx => ErrorPrimitive::Rx(params[0]),
            PrimitiveKind::Ry => ErrorPrimitive::Ry(params[0]),
            PrimitiveKind::Rz => ErrorPrimitive::Rz(params[0]),
            PrimitiveKind::U1 => ErrorPrimitive::U1(params[0]),
            PrimitiveKind::U3 => ErrorPrimitive::U3 {
                theta: params[0],
                phi: params[1],
                lambda: params[2],
            },
            PrimitiveKind::X => ErrorPrimitive::X,
            PrimitiveKind::Y => ErrorPrimitive::Y,
            PrimitiveKind::Z => ErrorPrimitive::Z,
            PrimitiveKind::H => ErrorPrimitive::H,
            PrimitiveKind::I => ErrorPrimitive::I,
        }
    }

    pub fn kind(&self) -> PrimitiveKind {
        match self {
            ErrorPrimitive::Rx(_) => PrimitiveKind::Rx,
            ErrorPrimitive::Ry(_) => PrimitiveKind::Ry,
            ErrorPrimitive::Rz(_) => PrimitiveKind::Rz,
            ErrorPrimitive::U1(_) => PrimitiveKind::U1,
            ErrorPrimitive::U3 { .. } => PrimitiveKind::U3,
            ErrorPrimitive::X => PrimitiveKind::X,
            ErrorPrimitive::Y => PrimitiveKind::Y,
            ErrorPrimitive::Z => PrimitiveKind::Z,
            ErrorPrimitive::H => PrimitiveKind::H,
            ErrorPrimitive::I => PrimitiveKind::I,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            ErrorPrimitive::Rx(t)
            | ErrorPrimitive::Ry(t)
            | ErrorPrimitive::Rz(t)
            | ErrorPrimitive::U1(t) => vec![t],
            ErrorPrimitive::U3 { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    fn check_finite(&self) -> Result<()> {
        if self.params().iter().all(|p| p.is_finite()) {
            Ok(())
        } else {
            Err(Error::validation(format!("{self:?} has a non-finite angle")))
        }
    }
}

impl fmt::Display for ErrorPrimitive {
    /// Writes the primitive back in mini-language form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ErrorPrimitive::Rx(t) => write!(f, "X:{}", format_angle(t)),
            ErrorPrimitive::Ry(t) => write!(f, "Y:{}", format_angle(t)),
            ErrorPrimitive::Rz(t) => write!(f, "Z:{}", format_angle(t)),
            ErrorPrimitive::U1(t) => write!(f, "U1:{}", format_angle(t)),
            ErrorPrimitive::U3 { theta, phi, lambda } => write!(
                f,
                "U3:{}:{}:{}",
                format_angle(theta),
                format_angle(phi),
                format_angle(lambda)
            ),
            ErrorPrimitive::X => f.write_str("X"),
            ErrorPrimitive::Y => f.write_str("Y"),
            ErrorPrimitive::Z => f.write_str("Z"),
            ErrorPrimitive::H => f.write_str("H"),
            ErrorPrimitive::I => f.write_str("I"),
        }
    }
}

/// An ordered error sequence acting on one data qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpec {
    pub sequence: Vec<ErrorPrimitive>,
    pub target: usize,
}

impl ErrorSpec {
    pub fn new(sequence: Vec<ErrorPrimitive>, target: usize) -> Result<Self> {
        if sequence.is_empty() {
            return Err(Error::validation("error sequence is empty"));
        }
        for p in &sequence {
            p.check_finite()?;
        }
        Ok(ErrorSpec { sequence, target })
    }

    pub fn single(p: ErrorPrimitive, target: usize) -> Self {
        ErrorSpec { sequence: vec![p], target }
    }

    /// Parses the mini-language; see the module docs.
    pub fn parse(text: &str, target: usize) -> Result<Self> {
        ErrorSpec::new(parse_error_sequence(text)?, target)
    }

    pub fn with_target(&self, target: usize) -> Self {
        ErrorSpec { sequence: self.sequence.clone(), target }
    }

    pub fn compose(&self) -> Result<Gate1Q> {
        compose(self)
    }
}

impl fmt::Display for ErrorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sequence.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The 2x2 unitary of one primitive.
pub fn matrix_of(p: &ErrorPrimitive) -> Result<Gate1Q> {
    p.check_finite()?;
    let m = match *p {
        ErrorPrimitive::Rx(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        ErrorPrimitive::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        ErrorPrimitive::Rz(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
        }
        ErrorPrimitive::U1(l) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::cis(l)]],
        ErrorPrimitive::U3 { theta, phi, lambda } => {
            let (s, co) = (theta / 2.0).sin_cos();
            [
                [c(co, 0.0), -Complex64::cis(lambda) * s],
                [Complex64::cis(phi) * s, Complex64::cis(phi + lambda) * co],
            ]
        }
        ErrorPrimitive::X => return Ok(Gate1Q::pauli_x()),
        ErrorPrimitive::Y => return Ok(Gate1Q::pauli_y()),
        ErrorPrimitive::Z => return Ok(Gate1Q::pauli_z()),
        ErrorPrimitive::H => return Ok(Gate1Q::hadamard()),
        ErrorPrimitive::I => return Ok(Gate1Q::identity()),
    };
    Ok(Gate1Q::from_matrix_unchecked(m))
}

/// Product of the sequence in application order: `P_k ... P_2 P_1`.
pub fn compose(spec: &ErrorSpec) -> Result<Gate1Q> {
    if spec.sequence.is_empty() {
        return Err(Error::validation("error sequence is empty"));
    }
    let mut acc = Gate1Q::identity();
    for p in &spec.sequence {
        acc = matrix_of(p)?.mul(&acc);
    }
    let defect = acc.unitarity_defect();
    if defect > crate::statevector::UNITARITY_TOL {
        return Err(Error::validation(format!("composed error drifted from unitarity ({defect:e})")));
    }
    Ok(acc)
}

/// Squared Pauli-basis coefficients of a single-qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliWeights {
    pub identity: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PauliWeights {
    pub fn as_array(&self) -> [f64; 4] {
        [self.identity, self.x, self.y, self.z]
    }

    pub fn sum(&self) -> f64 {
        self.identity + self.x + self.y + self.z
    }
}

/// `w_P = |Tr(P^dagger g) / 2|^2` for `P` in `{I, X, Y, Z}`.
pub fn pauli_weights(g: &Gate1Q) -> Result<PauliWeights> {
    let defect = g.unitarity_defect();
    if defect > crate::statevector::UNITARITY_TOL {
        return Err(Error::validation(format!("gate is not unitary (defect {defect:e})")));
    }
    let w = |p: Gate1Q| (p.adjoint().mul(g).trace() / 2.0).norm_sqr();
    Ok(PauliWeights {
        identity: w(Gate1Q::identity()),
        x: w(Gate1Q::pauli_x()),
        y: w(Gate1Q::pauli_y()),
        z: w(Gate1Q::pauli_z()),
    })
}

/// A labelled entry of the eight-error suite.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedError {
    pub name: &'static str,
    pub spec: ErrorSpec,
}

/// The eight composite errors, all targeting qubit 0. Composite names list
/// primitives in the order they are applied.
pub fn named_error_suite() -> Vec<NamedError> {
    let third = PI / 3.0;
    let two_thirds = 2.0 * PI / 3.0;
    let entry = |name, seq: Vec<ErrorPrimitive>| NamedError {
        name,
        spec: ErrorSpec { sequence: seq, target: 0 },
    };
    use ErrorPrimitive::{Rx, Ry};
    vec![
        entry("Y_{pi/3}", vec![Ry(third)]),
        entry("X_{pi/3}", vec![Rx(third)]),
        entry("X_{pi/3}Y_{pi/3}", vec![Rx(third), Ry(third)]),
        entry("X_{pi/3}Y_{2pi/3}", vec![Rx(third), Ry(two_thirds)]),
        entry("X_{2pi/3}Y_{pi/3}", vec![Rx(two_thirds), Ry(third)]),
        entry("X_{2pi/3}Y_{2pi/3}", vec![Rx(two_thirds), Ry(two_thirds)]),
        entry("R", r_sequence()),
        entry("H", vec![ErrorPrimitive::H]),
    ]
}

fn r_sequence() -> Vec<ErrorPrimitive> {
    vec![ErrorPrimitive::Ry(FRAC_PI_2), ErrorPrimitive::Rx(FRAC_PI_2)]
}

/// Recognizes `theta = p*pi/q` for small denominators.
pub fn pi_fraction(theta: f64) -> Option<(i64, i64)> {
    if theta == 0.0 {
        return Some((0, 1));
    }
    for q in 1..=64i64 {
        let p = theta / PI * q as f64;
        let rounded = p.round();
        if (p - rounded).abs() < 1e-9 && rounded.abs() < 1e6 {
            return Some((rounded as i64, q));
        }
    }
    None
}

/// Mini-language angle text: `pi`, `-2pi/3`, `0`, or a decimal.
pub fn format_angle(theta: f64) -> String {
    match pi_fraction(theta) {
        Some((0, _)) => "0".to_string(),
        Some((p, q)) => {
            let num = match p {
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                _ => format!("{p}pi"),
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

/// Parses one angle expression (see the module docs).
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    if t.is_empty() {
        return Err(Error::parse("empty angle"));
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t.as_str()),
    };
    if body.starts_with(['-', '+']) {
        return Err(Error::parse(format!("repeated sign in angle \"{text}\"")));
    }
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (body.trim(), None),
    };
    let number = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(format!("bad number \"{s}\" in angle \"{text}\"")))
    };
    let mut value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let k = if coef.is_empty() { 1.0 } else { number(coef)? };
        k * PI
    } else {
        number(num)?
    };
    if let Some(d) = den {
        let d = number(d)?;
        if d == 0.0 {
            return Err(Error::parse(format!("division by zero in angle \"{text}\"")));
        }
        value /= d;
    }
    Ok(if neg { -value } else { value })
}

fn parse_primitive(token: &str) -> Result<Vec<ErrorPrimitive>> {
    let mut parts = token.split(':');
    let name = parts.next().unwrap_or("").trim().to_ascii_uppercase();
    let args = parts.map(parse_angle).collect::<Result<Vec<f64>>>()?;
    let kind = match (name.as_str(), args.len()) {
        ("R", 0) => return Ok(r_sequence()),
        ("X", 0) => PrimitiveKind::X,
        ("Y", 0) => PrimitiveKind::Y,
        ("Z", 0) => PrimitiveKind::Z,
        ("H", _) => PrimitiveKind::H,
        ("I", _) => PrimitiveKind::I,
        ("X" | "RX", _) => PrimitiveKind::Rx,
        ("Y" | "RY", _) => PrimitiveKind::Ry,
        ("Z" | "RZ", _) => PrimitiveKind::Rz,
        ("U1", _) => PrimitiveKind::U1,
        ("U3", _) => PrimitiveKind::U3,
        _ => return Err(Error::parse(format!("unknown error primitive \"{token}\""))),
    };
    ErrorPrimitive::from_kind(kind, &args)
        .map(|p| vec![p])
        .map_err(|e| Error::parse(format!("\"{token}\": {e}")))
}

/// Parses a comma-separated error sequence.
pub fn parse_error_sequence(text: &str) -> Result<Vec<ErrorPrimitive>> {
    if text.trim().is_empty() {
        return Err(Error::parse("empty error expression"));
    }
    let mut out = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::parse(format!("empty primitive in \"{text}\"")));
        }
        out.extend(parse_primitive(token)?);
    }
    Ok(out)
}
