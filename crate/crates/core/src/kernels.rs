//! In-place amplitude kernels.
//!
//! Every kernel exists in a sequential form and, with the `parallel` feature,
//! a rayon form. Both forms visit the same amplitude pairs and perform the
//! same floating-point operations per element, so their outputs are bitwise
//! identical. Reductions use a chunk layout that depends only on the input
//! size, never on the thread count.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// States with at least this many amplitudes go through the rayon kernels
/// when the `parallel` feature is enabled.
pub const PARALLEL_MIN_LEN: usize = 1 << 14;

/// Minimum number of independent `2 * stride` blocks before the parallel
/// kernels split on blocks rather than inside a block.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_BLOCKS: usize = 32;

#[inline]
pub(crate) fn stride_of(num_qubits: usize, qubit: usize) -> usize {
    1usize << (num_qubits - 1 - qubit)
}

fn for_each_pair_seq<F>(amps: &mut [Complex64], stride: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64),
{
    for (block, chunk) in amps.chunks_mut(2 * stride).enumerate() {
        let base = block * 2 * stride;
        let (lo, hi) = chunk.split_at_mut(stride);
        for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(base + k, a, b);
        }
    }
}

#[cfg(feature = "parallel")]
fn for_each_pair_par<F>(amps: &mut [Complex64], stride: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64) + Sync,
{
    let block_len = 2 * stride;
    if amps.len() / block_len >= MIN_PARALLEL_BLOCKS {
        amps.par_chunks_mut(block_len)
            .enumerate()
            .for_each(|(block, chunk)| {
                let base = block * block_len;
                let (lo, hi) = chunk.split_at_mut(stride);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    f(base + k, a, b);
                }
            });
    } else {
        for (block, chunk) in amps.chunks_mut(block_len).enumerate() {
            let base = block * block_len;
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .enumerate()
                .with_min_len(1024)
                .for_each(|(k, (a, b))| f(base + k, a, b));
        }
    }
}

#[inline]
fn mix(u: &[[Complex64; 2]; 2], a: &mut Complex64, b: &mut Complex64) {
    let x = *a;
    let y = *b;
    *a = u[0][0] * x + u[0][1] * y;
    *b = u[1][0] * x + u[1][1] * y;
}

/// Applies the 2x2 matrix `u` to `qubit` of an `num_qubits`-qubit amplitude array.
pub fn apply_1q_seq(amps: &mut [Complex64], num_qubits: usize, u: &[[Complex64; 2]; 2], qubit: usize) {
    let stride = stride_of(num_qubits, qubit);
    for_each_pair_seq(amps, stride, |_, a, b| mix(u, a, b));
}

#[cfg(feature = "parallel")]
pub fn apply_1q_par(amps: &mut [Complex64], num_qubits: usize, u: &[[Complex64; 2]; 2], qubit: usize) {
    let stride = stride_of(num_qubits, qubit);
    for_each_pair_par(amps, stride, |_, a, b| mix(u, a, b));
}

/// Flips `target` on every basis index whose `control` bit is set.
pub fn apply_cnot_seq(amps: &mut [Complex64], num_qubits: usize, control: usize, target: usize) {
    let stride = stride_of(num_qubits, target);
    let cmask = stride_of(num_qubits, control);
    for_each_pair_seq(amps, stride, |idx, a, b| {
        if idx & cmask != 0 {
            std::mem::swap(a, b);
        }
    });
}

#[cfg(feature = "parallel")]
pub fn apply_cnot_par(amps: &mut [Complex64], num_qubits: usize, control: usize, target: usize) {
    let stride = stride_of(num_qubits, target);
    let cmask = stride_of(num_qubits, control);
    for_each_pair_par(amps, stride, |idx, a, b| {
        if idx & cmask != 0 {
            std::mem::swap(a, b);
        }
    });
}

#[inline]
fn outcome_index(idx: usize, masks: &[usize]) -> usize {
    masks
        .iter()
        .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0))
}

/// Number of partial tables used by the marginal reduction. Depends only on
/// the amplitude count and the table size.
fn reduction_chunks(len: usize, table_len: usize) -> usize {
    (len / table_len).clamp(1, 64)
}

fn partial_table(chunk: &[Complex64], offset: usize, masks: &[usize], table_len: usize) -> Vec<f64> {
    let mut table = vec![0.0; table_len];
    for (k, amp) in chunk.iter().enumerate() {
        table[outcome_index(offset + k, masks)] += amp.norm_sqr();
    }
    table
}

fn merge_tables(tables: Vec<Vec<f64>>, table_len: usize) -> Vec<f64> {
    let mut out = vec![0.0; table_len];
    for table in tables {
        for (o, v) in out.iter_mut().zip(table) {
            *o += v;
        }
    }
    out
}

/// Marginal probability table over the qubits selected by `masks`
/// (first mask is the most significant outcome bit).
pub fn marginal_seq(amps: &[Complex64], masks: &[usize]) -> Vec<f64> {
    let table_len = 1usize << masks.len();
    let chunk_len = amps.len().div_ceil(reduction_chunks(amps.len(), table_len));
    let tables = amps
        .chunks(chunk_len)
        .enumerate()
        .map(|(c, chunk)| partial_table(chunk, c * chunk_len, masks, table_len))
        .collect();
    merge_tables(tables, table_len)
}

#[cfg(feature = "parallel")]
pub fn marginal_par(amps: &[Complex64], masks: &[usize]) -> Vec<f64> {
    let table_len = 1usize << masks.len();
    let chunk_len = amps.len().div_ceil(reduction_chunks(amps.len(), table_len));
    let tables = amps
        .par_chunks(chunk_len)
        .enumerate()
        .map(|(c, chunk)| partial_table(chunk, c * chunk_len, masks, table_len))
        .collect();
    merge_tables(tables, table_len)
}
