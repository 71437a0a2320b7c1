//! Golden-file and interpreter checks for emitted QASM. Set
//! `SYNDROMELAB_BLESS=1` to rewrite the golden files.

mod common;

use common::*;
use num_complex::Complex64;
use syndromelab::protocol::{build_circuit, run_exact};
use syndromelab::qasm::{emit_qasm, lint, REGISTER_SIZE};
use syndromelab::states::ComplementarySpec;
use syndromelab::statevector::{Gate1Q, StateVector};

#[test]
fn golden_files_match() {
    let bless = std::env::var_os("SYNDROMELAB_BLESS").is_some();
    for (file, spec, error) in GOLDEN_CASES {
        let (spec, error) = golden_case(spec, error);
        let text = emit_qasm(&build_circuit(&spec, error.as_ref()).unwrap()).unwrap().text;
        let path = golden_dir().join(file);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let golden = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, golden, "{file}");
        assert!(lint(&golden).is_empty(), "{file}");
    }
}

/// Minimal interpreter for the emitted gate set, using its own gate
/// definitions (qelib1 conventions).
fn interpret(text: &str, m: usize) -> (StateVector, Vec<usize>) {
    let mut s = StateVector::zero_state(m).unwrap();
    let mut measured = Vec::new();
    let qubit = |arg: &str| -> usize {
        arg.trim().trim_start_matches("q[").trim_end_matches(']').parse().unwrap()
    };
    let angle = |a: &str| -> f64 {
        let a = a.trim();
        let (neg, body) = match a.strip_prefix('-') {
            Some(b) => (-1.0, b),
            None => (1.0, a),
        };
        let v = if let Some(rest) = body.strip_prefix("pi") {
            std::f64::consts::PI / rest.strip_prefix('/').map_or(1.0, |d| d.parse().unwrap())
        } else if let Some((num, rest)) = body.split_once("*pi") {
            num.parse::<f64>().unwrap() * std::f64::consts::PI
                / rest.strip_prefix('/').map_or(1.0, |d| d.parse().unwrap())
        } else {
            body.parse().unwrap()
        };
        neg * v
    };
    let c = Complex64::new;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("//") || line.starts_with("OPENQASM")
            || line.starts_with("include") || line.starts_with("qreg") || line.starts_with("creg")
        {
            continue;
        }
        let line = line.trim_end_matches(';');
        let (head, args) = line.split_once(' ').unwrap();
        let (name, params) = match head.split_once('(') {
            Some((n, p)) => (n, p.trim_end_matches(')').split(',').map(angle).collect::<Vec<_>>()),
            None => (head, Vec::new()),
        };
        match name {
            "measure" => measured.push(qubit(args.split("->").next().unwrap())),
            "cx" => {
                let (a, b) = args.split_once(',').unwrap();
                s.apply_cnot(qubit(a), qubit(b)).unwrap();
            }
            _ => {
                let u = match name {
                    "h" => Gate1Q::hadamard(),
                    "x" => Gate1Q::pauli_x(),
                    "u1" => Gate1Q::new([
                        [c(1.0, 0.0), c(0.0, 0.0)],
                        [c(0.0, 0.0), Complex64::from_polar(1.0, params[0])],
                    ])
                    .unwrap(),
                    "u3" => {
                        let (t, p, l) = (params[0], params[1], params[2]);
                        let (cs, sn) = ((t / 2.0).cos(), (t / 2.0).sin());
                        Gate1Q::new([
                            [c(cs, 0.0), -Complex64::from_polar(sn, l)],
                            [Complex64::from_polar(sn, p), Complex64::from_polar(cs, p + l)],
                        ])
                        .unwrap()
                    }
                    other => panic!("unexpected gate {other}"),
                };
                s.apply_1q(&u, qubit(args)).unwrap();
            }
        }
    }
    (s, measured)
}

#[test]
fn gate_prepared_programs_reproduce_simulation() {
    for (spec, error) in [
        ("bell", None),
        ("bell", Some(("X:pi/3", 0))),
        ("ghz:4", Some(("Z:pi/2", 1))),
        ("ghz:6", Some(("Y:2pi/3", 5))),
        ("ghz:4", Some(("X:pi/3,Y:2pi/3", 2))),
        ("ghz:4", Some(("H", 3))),
        ("ghz:4", Some(("R", 0))),
    ] {
        let (spec, error) = golden_case(spec, error);
        let circuit = build_circuit(&spec, error.as_ref()).unwrap();
        let program = emit_qasm(&circuit).unwrap();
        assert!(program.gate_prepared);
        let (state, measured) = interpret(&program.text, circuit.num_qubits());
        let table = state.marginal_distribution(&measured).unwrap();
        let expect = run_exact(&spec, error.as_ref()).unwrap();
        let got = [table[0], table[2], table[1], table[3]];
        assert!(expect.max_abs_diff(&got) < 1e-12, "{error:?}: {got:?} vs {:?}", expect.probs);
    }
}

#[test]
fn non_ghz_specs_get_an_amplitude_block() {
    let spec = ComplementarySpec::builtin("paper13-mixed").unwrap();
    let program = emit_qasm(&build_circuit(&spec, None).unwrap()).unwrap();
    assert!(!program.gate_prepared);
    assert_eq!(program.text.lines().filter(|l| l.starts_with("//   +")).count(), 6);
    assert!(program.text.contains(&format!("qreg q[{REGISTER_SIZE}];")));
}
