//! Dense statevector engine.
//!
//! Basis index `b` of an `m`-qubit state encodes qubit `q` in bit `m - 1 - q`,
//! so qubit 0 is the leftmost character of a ket string and the most
//! significant bit of the index. Every other module inherits this order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels;

/// Largest supported register.
pub const MAX_QUBITS: usize = 26;

/// Largest register accepted by [`StateVector::marginal_distribution`].
pub const MAX_MARGINAL_QUBITS: usize = 16;

/// Elementwise tolerance on `U^dagger U - I`.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A 2x2 unitary acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate1Q {
    m: [[Complex64; 2]; 2],
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

impl Gate1Q {
    /// Builds a gate from its matrix `[[u00, u01], [u10, u11]]`, rejecting
    /// anything that is not unitary within [`UNITARITY_TOL`].
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let g = Gate1Q { m };
        if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("gate matrix has non-finite entries"));
        }
        let defect = g.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::validation(format!(
                "gate is not unitary: max |U^dagger U - I| = {defect:e}"
            )));
        }
        Ok(g)
    }

    /// Skips the unitarity check. Callers build the matrix from a closed form
    /// that is unitary by construction.
    pub(crate) const fn from_matrix_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        Gate1Q { m }
    }

    pub const fn identity() -> Self {
        Gate1Q { m: [[ONE, ZERO], [ZERO, ONE]] }
    }

    pub const fn pauli_x() -> Self {
        Gate1Q { m: [[ZERO, ONE], [ONE, ZERO]] }
    }

    pub fn pauli_y() -> Self {
        Gate1Q { m: [[ZERO, -I], [I, ZERO]] }
    }

    pub fn pauli_z() -> Self {
        Gate1Q { m: [[ONE, ZERO], [ZERO, -ONE]] }
    }

    pub fn hadamard() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Gate1Q { m: [[s, s], [s, -s]] }
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Gate1Q) -> Gate1Q {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Gate1Q { m: out }
    }

    pub fn adjoint(&self) -> Gate1Q {
        let m = &self.m;
        Gate1Q {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn scale(&self, k: Complex64) -> Gate1Q {
        let m = &self.m;
        Gate1Q {
            m: [[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]],
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// `max |U^dagger U - I|` over the four entries.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Gate1Q::identity();
        p.max_abs_diff(&id)
    }

    pub fn max_abs_diff(&self, other: &Gate1Q) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True if `self = e^{i phi} other` for some phase, within `tol`.
    pub fn equals_up_to_phase(&self, other: &Gate1Q, tol: f64) -> bool {
        // <other, self> / 2 carries the relative phase for unitaries.
        let overlap = other.adjoint().mul(self).trace() / 2.0;
        if overlap.norm() < 0.5 {
            return false;
        }
        let phase = overlap / overlap.norm();
        self.max_abs_diff(&other.scale(phase)) <= tol
    }
}

/// Dense vector of `2^m` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(m: usize) -> Result<()> {
    if m == 0 || m > MAX_QUBITS {
        return Err(Error::size(format!(
            "qubit count {m} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|0...0>` on `m` qubits.
    pub fn zero_state(m: usize) -> Result<Self> {
        check_qubit_count(m)?;
        let mut amps = vec![ZERO; 1usize << m];
        amps[0] = ONE;
        Ok(StateVector { num_qubits: m, amps })
    }

    /// Basis state `|index>` on `m` qubits.
    pub fn basis_state(m: usize, index: usize) -> Result<Self> {
        check_qubit_count(m)?;
        if index >= 1usize << m {
            return Err(Error::index(format!("basis index {index} out of range for {m} qubits")));
        }
        let mut amps = vec![ZERO; 1usize << m];
        amps[index] = ONE;
        Ok(StateVector { num_qubits: m, amps })
    }

    /// Wraps `amps`, normalized to unit L2 norm.
    pub fn from_amplitudes(m: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(m)?;
        if amps.len() != 1usize << m {
            return Err(Error::size(format!(
                "expected {} amplitudes for {m} qubits, got {}",
                1usize << m,
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Normalization("non-finite amplitude".into()));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Normalization("cannot normalize a zero vector".into()));
        }
        for z in &mut amps {
            *z /= norm;
        }
        Ok(StateVector { num_qubits: m, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::index(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    #[cfg(feature = "parallel")]
    fn use_parallel(&self) -> bool {
        self.amps.len() >= kernels::PARALLEL_MIN_LEN
    }

    /// Applies `g` to qubit `q` in place.
    pub fn apply_1q(&mut self, g: &Gate1Q, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let defect = g.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::validation(format!("gate is not unitary (defect {defect:e})")));
        }
        #[cfg(feature = "parallel")]
        if self.use_parallel() {
            kernels::apply_1q_par(&mut self.amps, self.num_qubits, g.matrix(), q);
            return Ok(());
        }
        kernels::apply_1q_seq(&mut self.amps, self.num_qubits, g.matrix(), q);
        Ok(())
    }

    /// Applies CNOT with `control` and `target` in place.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::index(format!("CNOT control and target are both {control}")));
        }
        #[cfg(feature = "parallel")]
        if self.use_parallel() {
            kernels::apply_cnot_par(&mut self.amps, self.num_qubits, control, target);
            return Ok(());
        }
        kernels::apply_cnot_seq(&mut self.amps, self.num_qubits, control, target);
        Ok(())
    }

    fn outcome_masks(&self, qubits: &[usize]) -> Result<Vec<usize>> {
        if qubits.is_empty() || qubits.len() > MAX_MARGINAL_QUBITS {
            return Err(Error::size(format!(
                "marginal over {} qubits; expected 1..={MAX_MARGINAL_QUBITS}",
                qubits.len()
            )));
        }
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return Err(Error::index(format!("qubit {q} listed twice")));
            }
        }
        Ok(qubits
            .iter()
            .map(|&q| kernels::stride_of(self.num_qubits, q))
            .collect())
    }

    /// Probability of each outcome on `qubits`. Outcome `b` lists the first
    /// requested qubit as its most significant bit.
    pub fn marginal_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        let masks = self.outcome_masks(qubits)?;
        #[cfg(feature = "parallel")]
        if self.use_parallel() {
            return Ok(kernels::marginal_par(&self.amps, &masks));
        }
        Ok(kernels::marginal_seq(&self.amps, &masks))
    }

    /// Draws `shots` i.i.d. outcomes on `qubits` and returns counts per
    /// outcome (same indexing as [`Self::marginal_distribution`]).
    ///
    /// Sampling is inverse-CDF over the marginal table with a ChaCha8
    /// generator seeded from `seed`.
    pub fn sample_counts(&self, qubits: &[usize], shots: u64, seed: u64) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::validation("shots must be at least 1"));
        }
        let probs = self.marginal_distribution(qubits)?;
        Ok(sample_from_table(&probs, shots, seed))
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::size(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `Tr(rho_q^2)` of the reduced density matrix of qubit `q`.
    pub fn single_qubit_purity(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let stride = kernels::stride_of(self.num_qubits, q);
        let (mut p0, mut p1, mut coh) = (0.0, 0.0, ZERO);
        for block in self.amps.chunks(2 * stride) {
            let (lo, hi) = block.split_at(stride);
            for (a, b) in lo.iter().zip(hi) {
                p0 += a.norm_sqr();
                p1 += b.norm_sqr();
                coh += a * b.conj();
            }
        }
        Ok(p0 * p0 + p1 * p1 + 2.0 * coh.norm_sqr())
    }
}

/// Inverse-CDF sampling of `shots` draws from a probability table.
pub(crate) fn sample_from_table(probs: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        counts[idx] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> StateVector {
        StateVector::from_amplitudes(2, vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap()
    }

    #[test]
    fn zero_state_shapes() {
        let s = StateVector::zero_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);
        let s = StateVector::zero_state(2).unwrap();
        assert_eq!(s.marginal_distribution(&[0, 1]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        let s = StateVector::zero_state(15).unwrap();
        assert_eq!(s.len(), 32768);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_state_rejects_bad_sizes() {
        assert!(matches!(StateVector::zero_state(0), Err(Error::Size(_))));
        assert!(matches!(StateVector::zero_state(MAX_QUBITS + 1), Err(Error::Size(_))));
    }

    #[test]
    fn from_amplitudes_normalizes() {
        let s = StateVector::from_amplitudes(1, vec![c(1.0), c(1.0)]).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let b = bell();
        assert!((b.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((b.amplitudes()[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn from_amplitudes_errors() {
        assert!(matches!(
            StateVector::from_amplitudes(2, vec![c(0.0); 4]),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(2, vec![c(1.0); 3]),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn single_qubit_gates() {
        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&Gate1Q::pauli_x(), 0).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0)]);

        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&Gate1Q::hadamard(), 0).unwrap();
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn y_rotation_on_zero() {
        // Y_theta = cos(theta/2) I - i sin(theta/2) sigma_y, theta = pi/3.
        let h = PI / 6.0;
        let ry = Gate1Q::new([[c(h.cos()), c(-h.sin())], [c(h.sin()), c(h.cos())]]).unwrap();
        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&ry, 0).unwrap();
        assert!((s.amplitudes()[0] - c((PI / 6.0).cos())).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c((PI / 6.0).sin())).norm() < 1e-15);
    }

    #[test]
    fn apply_1q_errors() {
        let mut s = StateVector::zero_state(2).unwrap();
        assert!(matches!(s.apply_1q(&Gate1Q::pauli_x(), 2), Err(Error::Index(_))));
        let bad = Gate1Q::from_matrix_unchecked([[c(1.0), c(1.0)], [c(0.0), c(1.0)]]);
        assert!(matches!(s.apply_1q(&bad, 0), Err(Error::Validation(_))));
    }

    #[test]
    fn gate_constructor_rejects_non_unitary() {
        assert!(Gate1Q::new([[c(1.0), c(0.0)], [c(0.0), c(1.0 + 2e-12)]]).is_err());
        assert!(Gate1Q::new([[c(1.0), c(0.0)], [c(0.0), c(1.0 + 1e-13)]]).is_ok());
    }

    #[test]
    fn cnot_cases() {
        let mut s = StateVector::basis_state(2, 0b10).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0b11], c(1.0));

        let mut s = StateVector::zero_state(2).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0));

        let mut s = StateVector::from_amplitudes(2, vec![c(1.0), c(0.0), c(1.0), c(0.0)]).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert!(s.amplitudes().iter().zip(bell().amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));

        assert!(matches!(s.apply_cnot(1, 1), Err(Error::Index(_))));
    }

    #[test]
    fn marginals() {
        let b = bell();
        let p = b.marginal_distribution(&[0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert!(matches!(b.marginal_distribution(&[0, 0]), Err(Error::Index(_))));
        // outcome order follows the requested qubit order
        let s = StateVector::basis_state(3, 0b100).unwrap();
        assert_eq!(s.marginal_distribution(&[2, 0]).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn sampling_contract() {
        let s = StateVector::zero_state(2).unwrap();
        assert_eq!(s.sample_counts(&[0, 1], 8192, 1).unwrap(), vec![8192, 0, 0, 0]);

        let b = bell();
        for seed in [0u64, 1, 2, 42, 8192] {
            let counts = b.sample_counts(&[0], 8192, seed).unwrap();
            assert_eq!(counts.iter().sum::<u64>(), 8192);
            assert!(counts.iter().all(|&k| (k as i64 - 4096).abs() <= 300), "{counts:?}");
        }
        assert_eq!(b.sample_counts(&[0], 8192, 99).unwrap(), b.sample_counts(&[0], 8192, 99).unwrap());
        assert!(b.sample_counts(&[0], 0, 1).is_err());
    }

    #[test]
    fn inner_products() {
        let b = bell();
        assert!((b.inner_product(&b).unwrap() - c(1.0)).norm() < 1e-15);
        let z = StateVector::basis_state(2, 0).unwrap();
        let o = StateVector::basis_state(2, 3).unwrap();
        assert_eq!(z.inner_product(&o).unwrap(), c(0.0));
        assert!(matches!(
            z.inner_product(&StateVector::zero_state(3).unwrap()),
            Err(Error::Size(_))
        ));

        // <Bell| Y x Y |Bell*> has magnitude 1
        let mut tilde = StateVector::from_amplitudes(
            2,
            b.amplitudes().iter().map(|a| a.conj()).collect(),
        )
        .unwrap();
        tilde.apply_1q(&Gate1Q::pauli_y(), 0).unwrap();
        tilde.apply_1q(&Gate1Q::pauli_y(), 1).unwrap();
        assert!((b.inner_product(&tilde).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn purity() {
        let s = StateVector::zero_state(2).unwrap();
        assert!((s.single_qubit_purity(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((bell().single_qubit_purity(0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(s.single_qubit_purity(2), Err(Error::Index(_))));

        // GHZ-4 plus its parity qubit: all terms even, so the parity qubit is |0>.
        let mut amps = vec![c(0.0); 32];
        amps[0b00000] = c(1.0);
        amps[0b11110] = c(1.0);
        let s = StateVector::from_amplitudes(5, amps).unwrap();
        assert!((s.single_qubit_purity(4).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn up_to_phase_comparison() {
        let x = Gate1Q::pauli_x();
        assert!(x.scale(Complex64::new(0.0, -1.0)).equals_up_to_phase(&x, 1e-15));
        assert!(!x.equals_up_to_phase(&Gate1Q::pauli_z(), 1e-3));
    }
}
