use super::hnf;
use super::matrix::IntMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Stack `m * I` below the input so integer row operations see the full
/// defining lattice of the span over `Z/m`.
fn lift_with_modulus(input: &IntMat, modulus: &BigInt) -> IntMat {
    let scaled_id = IntMat::identity(input.cols()).scale(modulus);
    input.vstack(&scaled_id)
}

fn reduce_mod(v: &BigInt, modulus: &BigInt) -> BigInt {
    v.mod_floor(modulus)
}

/// Canonical row-span form over `Z/m`.
///
/// Computed as the Hermite basis of the integer lattice generated by the rows
/// together with `m * I`, reduced mod `m` with zero rows dropped. Since
/// submodules of `(Z/m)^n` correspond bijectively to integer lattices between
/// `m Z^n` and `Z^n`, two matrices have equal row spans over `Z/m` iff they
/// have equal forms.
pub fn howell(input: &IntMat, modulus: &BigInt) -> IntMat {
    assert!(modulus > &BigInt::zero(), "modulus must be positive");
    let basis = hnf::row_basis(&lift_with_modulus(input, modulus));
    basis.map(|e| reduce_mod(e, modulus)).drop_zero_rows()
}

/// Generators of the left kernel `{x : x * m = 0}` over `Z/m`.
pub fn kernel(input: &IntMat, modulus: &BigInt) -> IntMat {
    let lifted = lift_with_modulus(input, modulus);
    let int_kernel = super::kernel_sr::kernel(&lifted);
    let x_part = int_kernel.submatrix(0..int_kernel.rows(), 0..input.rows());
    howell(&x_part, modulus)
}

/// Solve `x * m = b` over `Z/m`; any witness is acceptable.
pub fn solve(input: &IntMat, b: &[BigInt], modulus: &BigInt) -> Option<Vec<BigInt>> {
    let lifted = lift_with_modulus(input, modulus);
    let sol = hnf::solve(&lifted, b)?;
    Some(sol[..input.rows()].iter().map(|e| reduce_mod(e, modulus)).collect())
}

/// Number of elements in the row span over `Z/m`.
pub fn span_cardinality(input: &IntMat, modulus: &BigInt) -> BigInt {
    let basis = hnf::hermite(&lift_with_modulus(input, modulus), false);
    // the lattice L satisfies mZ^n <= L <= Z^n; |span| = [L : mZ^n]
    let n = input.cols();
    let mut index = BigInt::from(1u32);
    for (row, &c) in basis.pivots.iter().enumerate() {
        index *= modulus / &basis.h[(row, c)];
    }
    debug_assert_eq!(basis.pivots.len(), n, "lifted lattice must have full rank");
    index
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m4() -> BigInt {
        BigInt::from(4)
    }

    #[test]
    fn already_canonical() {
        let m = IntMat::from_i64(1, 1, &[2]);
        assert_eq!(howell(&m, &m4()), IntMat::from_i64(1, 1, &[2]));
    }

    #[test]
    fn zero_row_gives_empty_form() {
        let m = IntMat::from_i64(1, 2, &[0, 0]);
        assert_eq!(howell(&m, &m4()).rows(), 0);
    }

    #[test]
    fn span_cardinality_matches_enumeration() {
        // rows (1,1), (0,2) over Z/4: enumerate the 16 combinations
        let m = IntMat::from_i64(2, 2, &[1, 1, 0, 2]);
        let mut seen = std::collections::HashSet::new();
        for a in 0..4i64 {
            for b in 0..4i64 {
                let x = ((a * 1 + b * 0).rem_euclid(4), (a * 1 + b * 2).rem_euclid(4));
                seen.insert(x);
            }
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(span_cardinality(&m, &m4()), BigInt::from(8));
        // the canonical form spans the same set
        let form = howell(&m, &m4());
        assert_eq!(span_cardinality(&form, &m4()), BigInt::from(8));
    }

    #[test]
    fn howell_detects_hidden_annihilator_rows() {
        // span of (2,1) over Z/4 contains (0,2), which a naive echelon misses
        let m = IntMat::from_i64(1, 2, &[2, 1]);
        let form = howell(&m, &m4());
        assert_eq!(form.rows(), 2);
        assert!(solve(&form, &[BigInt::zero(), BigInt::from(2)], &m4()).is_some());
    }

    #[test]
    fn kernel_over_z4() {
        // x * [2] = 0 over Z/4 <=> x in {0, 2}
        let m = IntMat::from_i64(1, 1, &[2]);
        let k = kernel(&m, &m4());
        assert_eq!(k, IntMat::from_i64(1, 1, &[2]));
    }

    #[test]
    fn solve_over_z4() {
        let m = IntMat::from_i64(1, 1, &[2]);
        let x = solve(&m, &[BigInt::from(2)], &m4()).unwrap();
        assert_eq!((x[0].clone() * 2i32).mod_floor(&m4()), BigInt::from(2));
        assert!(solve(&m, &[BigInt::from(1)], &m4()).is_none());
    }

    #[test]
    fn equal_spans_iff_equal_forms_small_cases() {
        let m6 = BigInt::from(6);
        // (2) and (4) generate the same ideal in Z/6: both give {0,2,4}
        let a = IntMat::from_i64(1, 1, &[2]);
        let b = IntMat::from_i64(1, 1, &[4]);
        assert_eq!(howell(&a, &m6), howell(&b, &m6));
        let c = IntMat::from_i64(1, 1, &[3]);
        assert_ne!(howell(&a, &m6), howell(&c, &m6));
    }
}
