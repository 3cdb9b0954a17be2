use super::fastelim;
use super::matrix::IntMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of a row Hermite reduction: `u * input = h` with `u` unimodular.
pub struct Hnf {
    pub h: IntMat,
    pub u: Option<IntMat>,
    /// Column index of the pivot of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form over the integers.
///
/// The result is canonical for the row span: pivots are positive, entries
/// above a pivot lie in `[0, pivot)`, nonzero rows come first in echelon
/// order. Two integer matrices have the same row lattice iff their canonical
/// forms (with zero rows dropped) coincide.
///
/// Runs an i128 fast path first and falls back to arbitrary precision on
/// overflow.
pub fn hermite(input: &IntMat, want_u: bool) -> Hnf {
    if let Some(fast) = fastelim::hermite(input, want_u) {
        return Hnf {
            h: fast.h.to_intmat(),
            u: fast.u.map(|u| u.to_intmat()),
            pivots: fast.pivots,
        };
    }
    hermite_big(input, want_u)
}

fn hermite_big(input: &IntMat, want_u: bool) -> Hnf {
    let mut h = input.clone();
    let mut u = want_u.then(|| IntMat::identity(input.rows()));
    let (rows, cols) = (h.rows(), h.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..rows {
            if !h[(i, c)].is_zero() {
                best = match best {
                    None => Some(i),
                    Some(b) => {
                        if h[(i, c)].abs() < h[(b, c)].abs() {
                            Some(i)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
        }
        let Some(p) = best else { continue };
        h.swap_rows(r, p);
        if let Some(u) = u.as_mut() {
            u.swap_rows(r, p);
        }
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let x = h[(r, c)].clone();
            let y = h[(i, c)].clone();
            if (&y % &x).is_zero() {
                let q = -(&y / &x);
                h.add_row_multiple(i, r, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, r, &q);
                }
            } else {
                let e = y.extended_gcd(&x);
                // e.gcd = e.x * y + e.y * x
                let (a, b) = (&x / &e.gcd, &y / &e.gcd);
                let neg_b = -&b;
                h.two_row_transform(r, i, &e.y, &e.x, &neg_b, &a);
                if let Some(u) = u.as_mut() {
                    u.two_row_transform(r, i, &e.y, &e.x, &neg_b, &a);
                }
            }
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_mut() {
                u.negate_row(r);
            }
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                let neg_q = -q;
                h.add_row_multiple(i, r, &neg_q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, r, &neg_q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Canonical basis of the row lattice: nonzero rows of the Hermite form.
pub fn row_basis(input: &IntMat) -> IntMat {
    let hnf = hermite(input, false);
    hnf.h.submatrix(0..hnf.pivots.len(), 0..input.cols())
}

/// Basis of the left kernel lattice `{x : x * m = 0}` over the integers.
///
/// The returned rows form a lattice basis (the kernel is saturated in Z^rows).
pub fn kernel(m: &IntMat) -> IntMat {
    super::kernel_sr::kernel(m)
}

/// Express `b` against an echelon basis (rows of `h`, pivot columns given).
/// Returns the coefficient vector on the rows of `h`.
pub fn solve_echelon(h: &IntMat, pivots: &[usize], b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), h.cols(), "solve_echelon: rhs length mismatch");
    let mut y = vec![BigInt::zero(); h.rows()];
    let mut resid: Vec<BigInt> = b.to_vec();
    for (row, &c) in pivots.iter().enumerate() {
        let p = &h[(row, c)];
        if resid[c].is_zero() {
            continue;
        }
        let (q, rem) = resid[c].div_rem(p);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..h.cols() {
            let sub = &q * &h[(row, j)];
            resid[j] -= sub;
        }
        y[row] = q;
    }
    if resid.iter().any(|e| !e.is_zero()) {
        return None;
    }
    Some(y)
}

/// Solve `x * m = b` over the integers; returns any witness.
///
/// Implemented through the kernel of the matrix stacked with `-b`: any
/// kernel combination with last coordinate 1 yields a witness, which avoids
/// tracking a full Hermite transform.
pub fn solve(m: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.cols(), "solve: rhs length mismatch");
    if b.iter().all(|e| e.is_zero()) {
        return Some(vec![BigInt::zero(); m.rows()]);
    }
    let neg_b = IntMat::from_rows(vec![b.iter().map(|e| -e).collect()]);
    let stacked = m.vstack(&neg_b);
    let k = kernel(&stacked);
    let last = m.rows();
    // find y with sum(y_i * k[i][last]) = 1 via a running xgcd
    let mut combo: Option<(Vec<BigInt>, BigInt)> = None; // (combination rows, gcd value)
    for i in 0..k.rows() {
        let v = k[(i, last)].clone();
        if v.is_zero() {
            continue;
        }
        combo = Some(match combo {
            None => (k.row_vec(i), v),
            Some((acc, g)) => {
                let e = g.extended_gcd(&v);
                // e.gcd = e.x * g + e.y * v
                let row: Vec<BigInt> = acc
                    .iter()
                    .zip(k.row(i))
                    .map(|(a, b)| &e.x * a + &e.y * b)
                    .collect();
                (row, e.gcd)
            }
        });
        if let Some((_, g)) = &combo {
            if g.abs() == BigInt::one() {
                break;
            }
        }
    }
    let (row, g) = combo?;
    if g.abs() != BigInt::one() {
        return None;
    }
    let sign = if g == BigInt::one() { BigInt::one() } else { -BigInt::one() };
    let x: Vec<BigInt> = row[..last].iter().map(|e| e * &sign).collect();
    debug_assert_eq!(m.row_times(&x), b.to_vec());
    Some(x)
}

/// Rank of the rational row span.
pub fn rank(m: &IntMat) -> usize {
    hermite(m, false).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_is_canonical_on_spanning_sets() {
        let a = IntMat::from_i64(3, 2, &[2, 1, 0, 3, 2, 4]);
        let b = IntMat::from_i64(2, 2, &[2, 4, 0, 3]);
        // same lattice: (2,1) = (2,4) - (0,3); (2,4) = (2,1) + (0,3)
        assert_eq!(row_basis(&a), row_basis(&b));
    }

    #[test]
    fn hermite_transform_is_consistent() {
        let a = IntMat::from_i64(3, 3, &[4, 7, 2, 6, 3, 1, 0, 5, 5]);
        let hnf = hermite(&a, true);
        assert_eq!(hnf.u.unwrap().mul(&a), hnf.h);
    }

    #[test]
    fn fast_and_big_paths_agree() {
        let a = IntMat::from_i64(4, 5, &[3, 0, -4, 7, 2, 0, 0, 6, 1, -1, 9, 2, 0, 0, 5, 1, 1, 1, 1, 1]);
        let fast = hermite(&a, true);
        let big = hermite_big(&a, true);
        assert_eq!(fast.h, big.h);
        assert_eq!(fast.pivots, big.pivots);
        assert_eq!(big.u.unwrap().mul(&a), big.h);
    }

    #[test]
    fn kernel_annihilates() {
        let m = IntMat::from_i64(3, 2, &[2, 0, -2, 0, 4, 6]);
        let k = kernel(&m);
        assert_eq!(k.rows(), 1);
        let prod = k.mul(&m);
        assert!(prod.is_zero());
        // (1,1,0) should span the kernel
        assert!(solve(&k, &[BigInt::from(1), BigInt::from(1), BigInt::from(0)]).is_some());
    }

    #[test]
    fn kernel_of_injective_is_empty() {
        let m = IntMat::from_i64(2, 2, &[1, 2, 3, 4]);
        assert_eq!(kernel(&m).rows(), 0);
    }

    #[test]
    fn solve_finds_witness_and_rejects() {
        let m = IntMat::from_i64(1, 1, &[2]);
        assert_eq!(solve(&m, &[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(solve(&m, &[BigInt::from(3)]), None);
        let m2 = IntMat::from_i64(2, 3, &[1, 0, 1, 0, 1, 1]);
        let x = solve(&m2, &[BigInt::from(2), BigInt::from(3), BigInt::from(5)]).unwrap();
        assert_eq!(m2.row_times(&x), vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)]);
    }
}
