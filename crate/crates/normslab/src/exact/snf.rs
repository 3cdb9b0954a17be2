use super::matrix::IntMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Smith normal form data: `u * input * v = d` with `u`, `v` unimodular and
/// `d` diagonal with a divisibility chain `d_1 | d_2 | ...`, all entries >= 0.
pub struct Snf {
    pub d: IntMat,
    pub u: Option<IntMat>,
    pub v: Option<IntMat>,
}

impl Snf {
    /// The nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|e| !e.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form over the integers with optional transform tracking.
///
/// Runs an i128 fast path first and falls back to arbitrary precision on
/// overflow.
pub fn smith(input: &IntMat, want_transforms: bool) -> Snf {
    if let Some(fast) = super::fastelim::smith(input, want_transforms) {
        return Snf {
            d: fast.d.to_intmat(),
            u: fast.u.map(|m| m.to_intmat()),
            v: fast.v.map(|m| m.to_intmat()),
        };
    }
    smith_big(input, want_transforms)
}

fn smith_big(input: &IntMat, want_transforms: bool) -> Snf {
    let mut d = input.clone();
    let mut u = want_transforms.then(|| IntMat::identity(input.rows()));
    let mut v = want_transforms.then(|| IntMat::identity(input.cols()));
    let n = d.rows().min(d.cols());

    for t in 0..n {
        if !place_pivot(&mut d, &mut u, &mut v, t) {
            break; // remaining block is zero
        }
        loop {
            clear_col(&mut d, &mut u, t);
            let row_clean = clear_row(&mut d, &mut v, t);
            let col_clean = (t + 1..d.rows()).all(|i| d[(i, t)].is_zero());
            if row_clean && col_clean {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }

    enforce_divisibility_chain(&mut d, &mut u, &mut v, n);
    Snf { d, u, v }
}

/// Choose the nonzero entry of smallest absolute value in the trailing block
/// and move it to `(t, t)`. Returns false when the block is zero.
fn place_pivot(d: &mut IntMat, u: &mut Option<IntMat>, v: &mut Option<IntMat>, t: usize) -> bool {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            best = match best {
                None => Some((i, j)),
                Some(b) => {
                    if d[(i, j)].abs() < d[b].abs() {
                        Some((i, j))
                    } else {
                        Some(b)
                    }
                }
            };
        }
    }
    let Some((i, j)) = best else { return false };
    d.swap_rows(t, i);
    if let Some(u) = u.as_mut() {
        u.swap_rows(t, i);
    }
    d.swap_cols(t, j);
    if let Some(v) = v.as_mut() {
        v.swap_cols(t, j);
    }
    true
}

fn clear_col(d: &mut IntMat, u: &mut Option<IntMat>, t: usize) {
    for i in t + 1..d.rows() {
        while !d[(i, t)].is_zero() {
            let q = d[(i, t)].div_floor(&d[(t, t)]);
            let neg_q = -q;
            d.add_row_multiple(i, t, &neg_q);
            if let Some(u) = u.as_mut() {
                u.add_row_multiple(i, t, &neg_q);
            }
            if d[(i, t)].is_zero() {
                break;
            }
            // remainder is a smaller pivot candidate; swap it up
            d.swap_rows(t, i);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, i);
            }
        }
    }
}

fn clear_row(d: &mut IntMat, v: &mut Option<IntMat>, t: usize) -> bool {
    let mut touched = false;
    for j in t + 1..d.cols() {
        while !d[(t, j)].is_zero() {
            let q = d[(t, j)].div_floor(&d[(t, t)]);
            let neg_q = -q;
            d.add_col_multiple(j, t, &neg_q);
            if let Some(v) = v.as_mut() {
                v.add_col_multiple(j, t, &neg_q);
            }
            if d[(t, j)].is_zero() {
                break;
            }
            d.swap_cols(t, j);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, j);
            }
            touched = true;
        }
    }
    !touched
}

fn enforce_divisibility_chain(
    d: &mut IntMat,
    u: &mut Option<IntMat>,
    v: &mut Option<IntMat>,
    n: usize,
) {
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = d[(i, i)].clone();
            let b = d[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                // move the nonzero entry forward in the chain
                d.swap_rows(i, i + 1);
                d.swap_cols(i, i + 1);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(i, i + 1);
                }
                if let Some(v) = v.as_mut() {
                    v.swap_cols(i, i + 1);
                }
                fixed = false;
                continue;
            }
            if a.is_zero() || b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            // fold b into position (i, i) so the gcd can be extracted
            let one = BigInt::one();
            d.add_col_multiple(i, i + 1, &one);
            if let Some(v) = v.as_mut() {
                v.add_col_multiple(i, i + 1, &one);
            }
            // re-run elimination on the 2x2 block starting at i
            loop {
                clear_col_pair(d, u, i);
                let row_ok = clear_row_pair(d, v, i);
                let col_ok = d[(i + 1, i)].is_zero();
                if row_ok && col_ok {
                    break;
                }
            }
            if d[(i, i)].is_negative() {
                d.negate_row(i);
                if let Some(u) = u.as_mut() {
                    u.negate_row(i);
                }
            }
            if d[(i + 1, i + 1)].is_negative() {
                d.negate_row(i + 1);
                if let Some(u) = u.as_mut() {
                    u.negate_row(i + 1);
                }
            }
            fixed = false;
        }
        if fixed {
            break;
        }
    }
}

fn clear_col_pair(d: &mut IntMat, u: &mut Option<IntMat>, i: usize) {
    while !d[(i + 1, i)].is_zero() {
        let q = d[(i + 1, i)].div_floor(&d[(i, i)]);
        let neg_q = -q;
        d.add_row_multiple(i + 1, i, &neg_q);
        if let Some(u) = u.as_mut() {
            u.add_row_multiple(i + 1, i, &neg_q);
        }
        if d[(i + 1, i)].is_zero() {
            break;
        }
        d.swap_rows(i, i + 1);
        if let Some(u) = u.as_mut() {
            u.swap_rows(i, i + 1);
        }
    }
}

fn clear_row_pair(d: &mut IntMat, v: &mut Option<IntMat>, i: usize) -> bool {
    let mut clean = true;
    while !d[(i, i + 1)].is_zero() {
        let q = d[(i, i + 1)].div_floor(&d[(i, i)]);
        let neg_q = -q;
        d.add_col_multiple(i + 1, i, &neg_q);
        if let Some(v) = v.as_mut() {
            v.add_col_multiple(i + 1, i, &neg_q);
        }
        if d[(i, i + 1)].is_zero() {
            break;
        }
        d.swap_cols(i, i + 1);
        if let Some(v) = v.as_mut() {
            v.swap_cols(i, i + 1);
        }
        clean = false;
    }
    clean
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(input: &IntMat, expected_diag: &[i64]) {
        let snf = smith(input, true);
        let u = snf.u.as_ref().unwrap();
        let v = snf.v.as_ref().unwrap();
        assert_eq!(u.mul(input).mul(v), snf.d, "u*m*v = d fails");
        assert_eq!(u.det().abs(), BigInt::one(), "u not unimodular");
        assert_eq!(v.det().abs(), BigInt::one(), "v not unimodular");
        let got: Vec<BigInt> = snf.invariant_factors();
        let want: Vec<BigInt> = expected_diag.iter().map(|&e| BigInt::from(e)).collect();
        assert_eq!(got, want);
        // divisibility chain
        for w in got.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
    }

    #[test]
    fn worked_examples() {
        check(&IntMat::from_i64(2, 2, &[2, 4, 6, 8]), &[2, 4]);
        check(&IntMat::identity(3), &[1, 1, 1]);
        check(&IntMat::zero(2, 2), &[]);
        check(&IntMat::from_i64(2, 2, &[2, 0, 0, 3]), &[1, 6]);
    }

    #[test]
    fn five_by_five() {
        check(
            &IntMat::from_i64(
                5,
                5,
                &[
                    -20, -7, -27, 2, 29, 17, 8, 14, -4, -10, 13, 8, 10, -4, -6, -9, -2, -14, 0,
                    16, 5, 0, 5, -1, -4,
                ],
            ),
            &[1, 1, 1, 2, 60],
        );
    }

    #[test]
    fn rectangular() {
        check(&IntMat::from_i64(2, 3, &[2, 4, 6, 4, 8, 10]), &[2, 2]);
        check(&IntMat::from_i64(3, 1, &[6, 10, 15]), &[1]);
    }

    #[test]
    fn determinant_preserved_up_to_sign() {
        let m = IntMat::from_i64(2, 2, &[2, 4, 6, 8]);
        let snf = smith(&m, false);
        let prod: BigInt = snf.invariant_factors().iter().product();
        assert_eq!(prod, m.det().abs());
    }
}
