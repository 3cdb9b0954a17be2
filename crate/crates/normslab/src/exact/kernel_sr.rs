//! Integer kernel via constraint-by-constraint elimination with online size
//! reduction.
//!
//! Maintains a basis `B` of the kernel of the columns processed so far
//! (starting from the identity) and intersects with one column constraint at
//! a time. The row carrying the gcd of each constraint is dropped, so the
//! surviving rows may be freely size-reduced between steps; this keeps entry
//! growth under control where a plain Hermite transform explodes on
//! group-ring-structured matrices.

use super::matrix::IntMat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // balanced quotient: |a - q b| <= |b| / 2
    use num_integer::Integer;
    if b.is_negative() {
        return -div_round(a, &-b);
    }
    let q = a.div_floor(b);
    let r = a - &q * b;
    if &r * BigInt::from(2) > *b {
        q + BigInt::from(1)
    } else {
        q
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

fn row_bits(row: &[BigInt]) -> u64 {
    row.iter().map(|e| e.bits()).max().unwrap_or(0)
}

/// Subtract `q * source` from `target` in place.
fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

const REDUCE_TRIGGER_BITS: u64 = 48;
const REDUCE_AGAINST: usize = 24;

/// Size-reduce the fat rows of `basis` against its shortest rows.
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    if basis.len() < 2 {
        return;
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| row_bits(&basis[i]));
    let shortest: Vec<usize> = order.iter().take(REDUCE_AGAINST).cloned().collect();
    for &i in order.iter().rev() {
        if row_bits(&basis[i]) <= REDUCE_TRIGGER_BITS {
            break;
        }
        for pass in 0..2 {
            let mut changed = false;
            for &j in &shortest {
                if i == j {
                    continue;
                }
                let denom = dot(&basis[j], &basis[j]);
                if denom.is_zero() {
                    continue;
                }
                let num = dot(&basis[i], &basis[j]);
                let mu = div_round(&num, &denom);
                if !mu.is_zero() {
                    let source = basis[j].clone();
                    sub_multiple(&mut basis[i], &source, &mu);
                    changed = true;
                }
            }
            if !changed || pass == 1 {
                break;
            }
        }
    }
}

/// Basis of `{x : x * m = 0}` over the integers; rows span the saturated
/// kernel lattice.
pub fn kernel(m: &IntMat) -> IntMat {
    let n = m.rows();
    let cols = m.cols();
    // columns as sparse (row index, value) lists, processed sparsest first
    let mut column_order: Vec<usize> = (0..cols).collect();
    let nnz: Vec<usize> =
        (0..cols).map(|c| (0..n).filter(|&r| !m[(r, c)].is_zero()).count()).collect();
    column_order.sort_by_key(|&c| nnz[c]);

    let mut basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = BigInt::from(1);
            row
        })
        .collect();

    for &c in &column_order {
        if basis.is_empty() {
            break;
        }
        let col: Vec<(usize, BigInt)> = (0..n)
            .filter_map(|r| {
                let v = &m[(r, c)];
                (!v.is_zero()).then(|| (r, v.clone()))
            })
            .collect();
        if col.is_empty() {
            continue;
        }
        let mut values: Vec<BigInt> = basis
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (r, v) in &col {
                    if !row[*r].is_zero() {
                        acc += &row[*r] * v;
                    }
                }
                acc
            })
            .collect();
        // Euclid on the value vector: reduce everything by the current
        // minimum with balanced quotients until one nonzero value remains.
        loop {
            let mut imin: Option<usize> = None;
            for (i, v) in values.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                imin = match imin {
                    None => Some(i),
                    Some(k) => {
                        if v.abs() < values[k].abs() {
                            Some(i)
                        } else {
                            Some(k)
                        }
                    }
                };
            }
            let Some(pivot) = imin else { break };
            let mut clean = true;
            let pv = values[pivot].clone();
            let prow = basis[pivot].clone();
            for i in 0..basis.len() {
                if i == pivot || values[i].is_zero() {
                    continue;
                }
                let q = div_round(&values[i], &pv);
                values[i] -= &q * &pv;
                sub_multiple(&mut basis[i], &prow, &q);
                if !values[i].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // constraint reduced to a single row; drop it
                basis.remove(pivot);
                values.remove(pivot);
                break;
            }
        }
        if basis.iter().any(|row| row_bits(row) > REDUCE_TRIGGER_BITS) {
            size_reduce(&mut basis);
        }
    }
    size_reduce(&mut basis);
    if basis.is_empty() {
        IntMat::zero(0, n)
    } else {
        IntMat::from_rows(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::hnf;

    #[test]
    fn agrees_with_hermite_kernel_on_small_cases() {
        let cases = vec![
            IntMat::from_i64(3, 2, &[2, 0, -2, 0, 4, 6]),
            IntMat::from_i64(2, 2, &[1, 2, 3, 4]),
            IntMat::from_i64(4, 3, &[1, 2, 3, 2, 4, 6, 0, 1, 1, 1, 1, 1]),
            IntMat::zero(3, 2),
        ];
        for m in cases {
            let a = hnf::row_basis(&kernel(&m));
            let b = hnf::row_basis(&hnf::kernel(&m));
            assert_eq!(a, b, "kernel mismatch for {m:?}");
            assert!(kernel(&m).mul(&m).is_zero());
        }
    }
}
