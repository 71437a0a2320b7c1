//! Complementarity-closed states and their entanglement checks.
//!
//! A [`ComplementarySpec`] lists one representative ket per complementary
//! pair `{a, not a}` and a single global sign. The state it denotes is the
//! uniform superposition of every listed ket plus `sign` times each
//! complement, over `2n` qubits.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{StateVector, MAX_QUBITS};

/// Even-length bitstring naming a computational basis ket. Character `i` is
/// qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct KetString(String);

impl KetString {
    pub fn new(bits: impl Into<String>) -> Result<Self> {
        let bits = bits.into();
        if bits.len() < 2 || bits.len() % 2 != 0 {
            return Err(Error::validation(format!(
                "ket \"{bits}\" must have even length >= 2"
            )));
        }
        if bits.len() > 64 {
            return Err(Error::validation(format!("ket \"{bits}\" longer than 64 bits")));
        }
        if !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::validation(format!("ket \"{bits}\" contains characters other than 0/1")));
        }
        Ok(KetString(bits))
    }

    /// Builds the ket for basis `index` over `len` qubits.
    pub fn from_index(index: u64, len: usize) -> Result<Self> {
        let bits: String = (0..len)
            .map(|q| if index >> (len - 1 - q) & 1 == 1 { '1' } else { '0' })
            .collect();
        KetString::new(bits)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Basis index with qubit 0 as the most significant bit.
    pub fn index(&self) -> u64 {
        self.0
            .bytes()
            .fold(0u64, |acc, b| (acc << 1) | u64::from(b == b'1'))
    }

    /// Number of 1s.
    pub fn weight(&self) -> usize {
        self.0.bytes().filter(|&b| b == b'1').count()
    }

    /// Bitwise NOT: every bit summed with 1 modulo 2.
    pub fn complement(&self) -> KetString {
        KetString(
            self.0
                .chars()
                .map(|c| if c == '0' { '1' } else { '0' })
                .collect(),
        )
    }
}

pub fn complement_of(k: &KetString) -> KetString {
    k.complement()
}

impl TryFrom<String> for KetString {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        KetString::new(value)
    }
}

impl From<KetString> for String {
    fn from(k: KetString) -> String {
        k.0
    }
}

impl fmt::Display for KetString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One violated invariant of a [`ComplementarySpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroN,
    TooManyQubits { qubits: usize },
    LengthMismatch { ket: KetString, expected: usize },
    Duplicate { ket: KetString },
    ComplementCollision { ket: KetString, complement: KetString },
    EmptySet,
    FullSet,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroN => write!(f, "n must be at least 1"),
            Violation::TooManyQubits { qubits } => {
                write!(f, "{qubits} data qubits exceed the {MAX_QUBITS}-qubit engine limit")
            }
            Violation::LengthMismatch { ket, expected } => {
                write!(f, "ket {ket} has length {}, expected {expected}", ket.len())
            }
            Violation::Duplicate { ket } => write!(f, "ket {ket} listed more than once"),
            Violation::ComplementCollision { ket, complement } => write!(
                f,
                "ket {ket} and its complement {complement} are both listed; list each pair once"
            ),
            Violation::EmptySet => write!(f, "no representatives given"),
            Violation::FullSet => write!(
                f,
                "representatives cover every basis ket; at least one pair must be left out"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "- {v}")?;
        }
        Ok(())
    }
}

/// Parity of the 1-count across every ket of a spec's pair-closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    AllEven,
    AllOdd,
    Mixed,
}

/// Representative kets plus a global sign. JSON form:
/// `{"n": 2, "representatives": ["0000", "1010"], "sign": "+"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementarySpec {
    pub n: usize,
    pub representatives: Vec<KetString>,
    pub sign: Sign,
}

impl ComplementarySpec {
    pub fn new(n: usize, representatives: &[&str], sign: Sign) -> Result<Self> {
        let representatives = representatives
            .iter()
            .map(|r| KetString::new(*r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplementarySpec { n, representatives, sign })
    }

    /// `(|00> + |11>)/sqrt(2)`.
    pub fn bell() -> Self {
        ComplementarySpec::new(1, &["00"], Sign::Plus).expect("static ket")
    }

    /// `(|0...0> + |1...1>)/sqrt(2)` on `2n` qubits.
    pub fn ghz(n: usize) -> Result<Self> {
        ComplementarySpec::new(n, &["0".repeat(2 * n).as_str()], Sign::Plus)
    }

    /// Named specs: `bell`, `ghz:<2n>` (qubit count), `paper13` (12-qubit
    /// GHZ-type state; with the parity qubit the protocol entangles 13), and
    /// `paper13-mixed` (12 qubits, mixed-parity closure).
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "bell" => Ok(ComplementarySpec::bell()),
            "paper13" => ComplementarySpec::ghz(6),
            "paper13-mixed" => ComplementarySpec::new(
                6,
                &["000000000000", "100000000000", "110000000000"],
                Sign::Plus,
            ),
            _ => {
                let qubits = name
                    .strip_prefix("ghz:")
                    .and_then(|q| q.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(format!("unknown builtin spec \"{name}\"")))?;
                if qubits < 2 || qubits % 2 != 0 {
                    return Err(Error::parse(format!(
                        "ghz:<2n> needs an even qubit count >= 2, got {qubits}"
                    )));
                }
                ComplementarySpec::ghz(qubits / 2)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("spec file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.n
    }

    /// Checks every structural invariant and lists each violation found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let len = 2 * self.n;
        if self.n == 0 {
            violations.push(Violation::ZeroN);
        }
        if len > MAX_QUBITS {
            violations.push(Violation::TooManyQubits { qubits: len });
        }
        if self.representatives.is_empty() {
            violations.push(Violation::EmptySet);
        }
        let mut seen: HashSet<&KetString> = HashSet::new();
        let mut reported_pairs: HashSet<KetString> = HashSet::new();
        for ket in &self.representatives {
            if ket.len() != len {
                violations.push(Violation::LengthMismatch { ket: ket.clone(), expected: len });
                continue;
            }
            if !seen.insert(ket) {
                violations.push(Violation::Duplicate { ket: ket.clone() });
                continue;
            }
            let comp = ket.complement();
            if seen.contains(&comp) && reported_pairs.insert(comp.clone()) {
                reported_pairs.insert(ket.clone());
                violations.push(Violation::ComplementCollision { ket: comp, complement: ket.clone() });
            }
        }
        if self.n > 0 && len < 64 && violations.is_empty() {
            let closure = 2 * self.representatives.len() as u128;
            if closure >= 1u128 << len {
                violations.push(Violation::FullSet);
            }
        }
        ValidationReport { violations }
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "invalid complementarity spec: {}",
                report
                    .violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; ")
            )))
        }
    }

    /// Nonzero amplitudes of the state as `(basis index, amplitude)`.
    pub fn terms(&self) -> Result<Vec<(usize, f64)>> {
        self.ensure_valid()?;
        let amp = 1.0 / ((2 * self.representatives.len()) as f64).sqrt();
        let signed = self.sign.value() * amp;
        Ok(self
            .representatives
            .iter()
            .flat_map(|r| {
                [
                    (r.index() as usize, amp),
                    (r.complement().index() as usize, signed),
                ]
            })
            .collect())
    }

    /// Draws a spec whose pair set is a uniformly random nonempty proper
    /// subset of all `2^(2n-1)` complementary pairs. Each chosen pair's
    /// representative is picked at random from its two kets.
    pub fn random<R: Rng + ?Sized>(n: usize, sign: Sign, rng: &mut R) -> Result<Self> {
        let len = 2 * n;
        if n == 0 || len > MAX_QUBITS {
            return Err(Error::size(format!("cannot draw a spec with n = {n}")));
        }
        let pairs = 1u64 << (len - 1);
        let chosen = loop {
            let pick: Vec<u64> = (0..pairs).filter(|_| rng.gen_bool(0.5)).collect();
            if !pick.is_empty() && (pick.len() as u64) < pairs {
                break pick;
            }
        };
        let mut representatives = chosen
            .into_iter()
            .map(|idx| {
                let ket = KetString::from_index(idx, len)?;
                Ok(if rng.gen_bool(0.5) { ket.complement() } else { ket })
            })
            .collect::<Result<Vec<_>>>()?;
        representatives.shuffle(rng);
        Ok(ComplementarySpec { n, representatives, sign })
    }
}

/// Builds the `2n`-qubit state of a valid spec.
pub fn build_state(spec: &ComplementarySpec) -> Result<StateVector> {
    let terms = spec.terms()?;
    let m = spec.num_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << m];
    for (idx, a) in terms {
        amps[idx] = Complex64::new(a, 0.0);
    }
    StateVector::from_amplitudes(m, amps)
}

/// `|<s| sigma_y^{(x)m} |s*>|`, defined for even qubit counts.
pub fn concurrence(s: &StateVector) -> Result<f64> {
    let m = s.num_qubits();
    if !m.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "concurrence needs an even qubit count, got {m}"
        )));
    }
    let amps = s.amplitudes();
    let full = amps.len() - 1;
    // sigma_y^{(x)m} |b> = i^{#0(b)} (-i)^{#1(b)} |not b> = i^{m - 2 w(b)} |not b>
    const PHASES: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let total: Complex64 = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(b, a)| {
            let w = b.count_ones() as usize;
            let phase = PHASES[(m + 4 * m - 2 * w) % 4];
            amps[full ^ b].conj() * phase * a.conj()
        })
        .sum();
    Ok(total.norm())
}

pub fn parity_class(spec: &ComplementarySpec) -> Result<ParityClass> {
    spec.ensure_valid()?;
    // complementing a 2n-bit ket preserves the parity of its 1-count
    let odd = spec.representatives.iter().filter(|r| r.weight() % 2 == 1).count();
    Ok(match odd {
        0 => ParityClass::AllEven,
        k if k == spec.representatives.len() => ParityClass::AllOdd,
        _ => ParityClass::Mixed,
    })
}

/// Whether the parity qubit appended by the extension circuit ends up
/// entangled with the data qubits.
pub fn ancilla_is_entangling(spec: &ComplementarySpec) -> Result<bool> {
    Ok(parity_class(spec)? == ParityClass::Mixed)
}
