//! Shared fixtures for the integration and acceptance targets: published
//! measurement tables, device data transcribed independently of the
//! embedded data file, golden QASM cases, and a dense-matrix reference
//! simulator.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use syndromelab::error_model::ErrorSpec;
use syndromelab::states::{ComplementarySpec, KetString, Sign};

pub const SEED: u64 = 2018;
pub const SHOTS: u64 = 8192;

/// Sweep tables, one row per `k` in `-15..=15` (`theta = k pi / 15`). Each
/// row holds the `{0,+}` probability and the probability of the single
/// other populated column: `{1,+}` for X, `{1,-}` for Y, `{0,-}` for Z.
pub const X_SWEEP: [(f64, f64); 31] = [
    (0.0, 1.0),
    (0.012, 0.988),
    (0.045, 0.955),
    (0.092, 0.908),
    (0.1644, 0.8356),
    (0.25, 0.75),
    (0.35, 0.65),
    (0.45, 0.55),
    (0.55, 0.45),
    (0.65, 0.35),
    (0.752, 0.248),
    (0.843, 0.157),
    (0.905, 0.095),
    (0.952, 0.048),
    (0.987, 0.013),
    (1.0, 0.0),
    (0.99, 0.0091),
    (0.957, 0.043),
    (0.906, 0.094),
    (0.831, 0.17),
    (0.75, 0.25),
    (0.658, 0.342),
    (0.554, 0.446),
    (0.436, 0.563),
    (0.34, 0.66),
    (0.25, 0.75),
    (0.164, 0.836),
    (0.094, 0.91),
    (0.044, 0.956),
    (0.012, 0.988),
    (0.0, 1.0),
];

/// The source prints `651` and `554` in the `{1,-}` column at `-9pi/15` and
/// `-8pi/15`; read here as `0.651` and `0.554`.
pub const Y_SWEEP: [(f64, f64); 31] = [
    (0.0, 1.0),
    (0.011, 0.99),
    (0.044, 0.956),
    (0.098, 0.902),
    (0.166, 0.834),
    (0.251, 0.75),
    (0.35, 0.651),
    (0.45, 0.554),
    (0.56, 0.44),
    (0.66, 0.34),
    (0.75, 0.25),
    (0.84, 0.164),
    (0.905, 0.095),
    (0.957, 0.042),
    (0.988, 0.012),
    (1.0, 0.0),
    (0.989, 0.011),
    (0.957, 0.043),
    (0.905, 0.095),
    (0.831, 0.17),
    (0.751, 0.25),
    (0.65, 0.35),
    (0.56, 0.44),
    (0.45, 0.552),
    (0.35, 0.65),
    (0.25, 0.75),
    (0.168, 0.832),
    (0.092, 0.908),
    (0.039, 0.96),
    (0.012, 0.99),
    (0.0, 1.0),
];

pub const Z_SWEEP: [(f64, f64); 31] = [
    (0.0, 1.0),
    (0.011, 0.988),
    (0.044, 0.956),
    (0.096, 0.904),
    (0.163, 0.837),
    (0.25, 0.75),
    (0.35, 0.65),
    (0.45, 0.55),
    (0.55, 0.45),
    (0.65, 0.35),
    (0.75, 0.25),
    (0.83, 0.17),
    (0.91, 0.09),
    (0.96, 0.04),
    (0.99, 0.011),
    (1.0, 0.0),
    (0.99, 0.01),
    (0.96, 0.043),
    (0.903, 0.097),
    (0.831, 0.17),
    (0.76, 0.24),
    (0.65, 0.34),
    (0.55, 0.45),
    (0.44, 0.56),
    (0.35, 0.65),
    (0.25, 0.75),
    (0.17, 0.83),
    (0.099, 0.9),
    (0.04, 0.96),
    (0.011, 0.989),
    (0.0, 1.0),
];

/// Column holding the second value of a sweep row, per axis `X, Y, Z`.
pub const SWEEP_COLUMN: [usize; 3] = [1, 3, 2];

/// Expands a sweep row into the four columns `{0,+},{1,+},{0,-},{1,-}`.
pub fn sweep_row(column: usize, (a, b): (f64, f64)) -> [f64; 4] {
    let mut row = [0.0; 4];
    row[0] = a;
    row[column] = b;
    row
}

/// Eight-error table in suite order. The `{0,-}` entry of the
/// `X_{2pi/3}Y_{2pi/3}` row is printed as `0.056`; the row then sums to 0.49,
/// and it is read as `0.56`.
pub const SUITE_TABLE: [(&str, [f64; 4]); 8] = [
    ("Y_{pi/3}", [0.747, 0.0, 0.0, 0.253]),
    ("X_{pi/3}", [0.75, 0.25, 0.0, 0.0]),
    ("X_{pi/3}Y_{pi/3}", [0.56, 0.185, 0.066, 0.188]),
    ("X_{pi/3}Y_{2pi/3}", [0.18, 0.063, 0.184, 0.574]),
    ("X_{2pi/3}Y_{pi/3}", [0.19, 0.55, 0.195, 0.063]),
    ("X_{2pi/3}Y_{2pi/3}", [0.06, 0.19, 0.56, 0.185]),
    ("R", [0.25, 0.252, 0.252, 0.245]),
    ("H", [0.0, 0.503, 0.497, 0.0]),
];

/// `(qubit, freq GHz, coherence us, relaxation us, gate err 1e-3,
/// readout err 1e-2, [(control, target, cx err 1e-2)])`.
pub type QubitRow = (usize, f64, f64, f64, f64, f64, &'static [(usize, usize, f64)]);

pub const DEVICE_TABLE: [QubitRow; 16] = [
    (0, 5.26, 42.60, 22.70, 2.37, 5.43, &[]),
    (1, 5.40, 39.40, 67.70, 2.81, 5.93, &[(1, 0, 5.01), (1, 2, 3.87)]),
    (2, 5.28, 35.50, 50.00, 3.53, 8.61, &[(2, 3, 3.42)]),
    (3, 5.08, 56.60, 88.30, 1.65, 4.18, &[(3, 4, 4.66), (3, 14, 4.78)]),
    (4, 4.98, 28.00, 28.70, 1.89, 6.90, &[]),
    (5, 5.15, 38.50, 43.10, 1.62, 6.15, &[(5, 4, 4.37)]),
    (6, 5.31, 53.81, 107.50, 1.54, 5.02, &[(6, 5, 3.19), (6, 7, 2.84), (6, 1, 2.51)]),
    (7, 5.25, 37.50, 38.70, 1.77, 3.64, &[(7, 10, 60.59)]),
    (8, 5.12, 42.40, 74.60, 1.12, 5.37, &[(8, 7, 3.63)]),
    (9, 5.16, 39.80, 68.00, 1.68, 11.88, &[(9, 8, 10.80), (9, 10, 3.27)]),
    (10, 5.04, 39.50, 66.80, 1.38, 8.74, &[]),
    (11, 5.11, 58.90, 96.80, 1.43, 4.47, &[(11, 10, 3.69)]),
    (12, 4.95, 45.30, 49.90, 1.37, 11.90, &[(12, 5, 3.87), (12, 11, 3.94), (12, 13, 5.30)]),
    (13, 5.09, 40.70, 41.40, 3.44, 3.75, &[(13, 4, 5.83), (13, 14, 5.34)]),
    (14, 4.87, 31.20, 60.60, 2.55, 5.68, &[]),
    (15, 5.10, 29.00, 79.40, 2.84, 9.82, &[(15, 0, 3.86), (15, 2, 3.21), (15, 14, 3.40)]),
];

/// Directed CNOT edges `(control, target)` of the 16-qubit coupling map.
pub const COUPLING: [(usize, usize); 22] = [
    (1, 0),
    (1, 2),
    (2, 3),
    (3, 14),
    (3, 4),
    (5, 4),
    (6, 11),
    (6, 7),
    (6, 5),
    (8, 7),
    (7, 10),
    (9, 8),
    (9, 10),
    (11, 10),
    (12, 13),
    (12, 11),
    (12, 5),
    (13, 14),
    (13, 4),
    (15, 14),
    (15, 2),
    (15, 0),
];

/// Golden QASM fixtures: file name, builtin spec, optional error and target.
/// `(file, builtin spec, optional (error, target))`.
pub type GoldenCase = (&'static str, &'static str, Option<(&'static str, usize)>);

pub const GOLDEN_CASES: [GoldenCase; 4] = [
    ("bell.qasm", "bell", None),
    ("ghz4_z.qasm", "ghz:4", Some(("Z:pi/2", 1))),
    ("paper13_x.qasm", "paper13", Some(("X:2pi/3", 0))),
    ("paper13_mixed_r.qasm", "paper13-mixed", Some(("R", 3))),
];

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn golden_case(
    spec: &str,
    error: Option<(&str, usize)>,
) -> (ComplementarySpec, Option<ErrorSpec>) {
    let spec = ComplementarySpec::builtin(spec).unwrap();
    let error = error.map(|(e, t)| ErrorSpec::parse(e, t).unwrap());
    (spec, error)
}

/// Every valid sign-`+` spec at `n` qubit pairs: each nonempty proper subset
/// of the complementary pairs, with every choice of representative.
/// Only practical for `n = 1` (4 specs) and `n = 2`.
pub fn all_specs(n: usize) -> Vec<ComplementarySpec> {
    let len = 2 * n;
    let pairs = 1usize << (len - 1);
    let mut out = Vec::new();
    for subset in 1..(1usize << pairs) - 1 {
        let chosen: Vec<usize> = (0..pairs).filter(|p| subset >> p & 1 == 1).collect();
        for orient in 0..1usize << chosen.len() {
            let reps: Vec<KetString> = chosen
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    let k = KetString::from_index(p as u64, len).unwrap();
                    if orient >> j & 1 == 1 {
                        k.complement()
                    } else {
                        k
                    }
                })
                .collect();
            out.push(ComplementarySpec { n, representatives: reps, sign: Sign::Plus });
        }
    }
    out
}

/// `{0^{2n}, 10^{2n-1}, 110^{2n-2}}`, a mixed-parity spec for `n >= 2`.
pub fn mixed_spec(n: usize) -> ComplementarySpec {
    let len = 2 * n;
    let reps = ["0".repeat(len), format!("1{}", "0".repeat(len - 1)), format!("11{}", "0".repeat(len - 2))];
    let refs: Vec<&str> = reps.iter().map(String::as_str).collect();
    ComplementarySpec::new(n, &refs, Sign::Plus).unwrap()
}

// ---- dense reference simulator ----

pub type Dense = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> Dense {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `U` on qubit `q` of `m`, qubit 0 being the most significant factor.
pub fn embed_1q(u: &[[Complex64; 2]; 2], q: usize, m: usize) -> Dense {
    let small: Dense = u.iter().map(|r| r.to_vec()).collect();
    let id2 = identity(2);
    let mut out = identity(1);
    for k in 0..m {
        out = kron(&out, if k == q { &small } else { &id2 });
    }
    out
}

/// CNOT as a permutation on basis labels read as bit strings.
#[allow(clippy::needless_range_loop)]
pub fn cnot_matrix(control: usize, target: usize, m: usize) -> Dense {
    let d = 1usize << m;
    let mut out = vec![vec![c(0.0, 0.0); d]; d];
    for col in 0..d {
        let bits: Vec<u8> = (0..m).map(|q| (col >> (m - 1 - q) & 1) as u8).collect();
        let mut flipped = bits.clone();
        if bits[control] == 1 {
            flipped[target] ^= 1;
        }
        let row = flipped.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        out[row][col] = c(1.0, 0.0);
    }
    out
}

pub fn mat_vec(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `e^{i alpha} U3(theta, phi, lambda)` with random angles.
pub fn random_unitary<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    use std::f64::consts::PI;
    let theta = rng.gen_range(0.0..PI);
    let (phi, lam, alpha) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
    let g = Complex64::from_polar(1.0, alpha);
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [g * cs, -g * Complex64::from_polar(sn, lam)],
        [g * Complex64::from_polar(sn, phi), g * Complex64::from_polar(cs, phi + lam)],
    ]
}

pub fn random_state<R: Rng>(m: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> =
        (0..1usize << m).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
