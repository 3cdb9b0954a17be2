//! Exact normal-form linear algebra over the integers and over `Z/m`.
//!
//! Every higher-level computation in the crate lowers to the operations here:
//! Smith and Hermite normal forms over `Z`, Howell forms over `Z/m`, kernels
//! and linear solves. The row-vector convention `x * M` is used throughout.

mod fastelim;
mod hnf;
mod howell;
mod kernel_sr;
mod matrix;
mod snf;

pub use hnf::{hermite, row_basis, Hnf};
pub use matrix::IntMat;
pub use snf::{smith, Snf};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The coefficient base: the integers, or the integers modulo `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Int,
    Mod(BigInt),
}

impl Base {
    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            Base::Int => None,
            Base::Mod(m) => Some(m),
        }
    }

    /// Normalise a representative: identity over `Z`, reduction into `[0, m)`
    /// over `Z/m`.
    pub fn reduce(&self, v: &BigInt) -> BigInt {
        match self {
            Base::Int => v.clone(),
            Base::Mod(m) => v.mod_floor(m),
        }
    }

    pub fn reduce_mat(&self, m: &IntMat) -> IntMat {
        match self {
            Base::Int => m.clone(),
            Base::Mod(_) => m.map(|e| self.reduce(e)),
        }
    }

    pub fn is_zero(&self, v: &BigInt) -> bool {
        self.reduce(v).is_zero()
    }
}

impl std::fmt::Display for Base {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Base::Int => write!(f, "Z"),
            Base::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

/// Smith normal form over the integers: `(u, d, v)` with `u * m * v = d`.
///
/// Total over `Z`; call sites working over `Z/m` must not use this entry
/// point (the modulus is part of the `Base` contract).
pub fn smith_normal_form(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let snf = smith(m, true);
    (snf.u.unwrap(), snf.d, snf.v.unwrap())
}

/// Canonical row-span form over `Z/m`; see [`howell`].
pub fn howell_form(m: &IntMat, modulus: &BigInt) -> IntMat {
    howell::howell(m, modulus)
}

/// Generators of the left kernel `{x : x * m = 0}` over the given base.
///
/// Over `Z` the rows are a lattice basis; over `Z/m` they span the kernel.
pub fn kernel_basis(m: &IntMat, base: &Base) -> IntMat {
    match base {
        Base::Int => kernel_sr::kernel(m),
        Base::Mod(modulus) => howell::kernel(m, modulus),
    }
}

/// Solve `x * m = b` over the given base; returns any witness.
pub fn solve_linear(m: &IntMat, b: &[BigInt], base: &Base) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.cols() {
        return Err(Error::ShapeMismatch(format!(
            "solve_linear: rhs has length {}, matrix has {} columns",
            b.len(),
            m.cols()
        )));
    }
    Ok(match base {
        Base::Int => hnf::solve(m, b),
        Base::Mod(modulus) => howell::solve(m, b, modulus),
    })
}

/// Cardinality of the row span over `Z/m`.
pub fn span_cardinality_mod(m: &IntMat, modulus: &BigInt) -> BigInt {
    howell::span_cardinality(m, modulus)
}

/// A row span over a base, held in canonical form.
///
/// Supports membership, equality, sums and canonical generators. This is the
/// workhorse representation for submodules once group-ring data is flattened
/// to base-level rows. Membership runs by back-substitution against an
/// integer echelon basis, so no Hermite transform is ever tracked.
#[derive(Clone, Debug)]
pub struct RowSpace {
    base: Base,
    /// Canonical basis: Hermite over `Z`, Howell over `Z/m`. May have 0 rows.
    basis: IntMat,
    /// Integer echelon basis used for solving. Over `Z` this equals `basis`;
    /// over `Z/m` it is the Hermite basis of the lift stacked with `m * I`.
    echelon: IntMat,
    pivots: Vec<usize>,
    cols: usize,
}

impl PartialEq for RowSpace {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.basis == other.basis
    }
}
impl Eq for RowSpace {}

impl RowSpace {
    pub fn from_rows(base: &Base, rows: IntMat) -> RowSpace {
        let cols = rows.cols();
        match base {
            Base::Int => {
                let hnf = hermite(&rows, false);
                let basis = hnf.h.submatrix(0..hnf.pivots.len(), 0..cols);
                RowSpace {
                    base: base.clone(),
                    echelon: basis.clone(),
                    pivots: hnf.pivots,
                    basis,
                    cols,
                }
            }
            Base::Mod(m) => {
                let lifted = rows.vstack(&IntMat::identity(cols).scale(m));
                let hnf = hermite(&lifted, false);
                let echelon = hnf.h.submatrix(0..hnf.pivots.len(), 0..cols);
                let basis = echelon.map(|e| e.mod_floor(m)).drop_zero_rows();
                RowSpace { base: base.clone(), basis, echelon, pivots: hnf.pivots, cols }
            }
        }
    }

    pub fn zero(base: &Base, cols: usize) -> RowSpace {
        RowSpace::from_rows(base, IntMat::zero(0, cols))
    }

    pub fn full(base: &Base, cols: usize) -> RowSpace {
        RowSpace::from_rows(base, IntMat::identity(cols))
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        hnf::solve_echelon(&self.echelon, &self.pivots, v).is_some()
    }

    /// Express `v` in terms of the canonical basis rows, if possible.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.basis.rows() == 0 {
            return v.iter().all(|e| self.base.is_zero(e)).then_some(vec![]);
        }
        match &self.base {
            Base::Int => hnf::solve_echelon(&self.echelon, &self.pivots, v),
            Base::Mod(m) => howell::solve(&self.basis, v, m),
        }
    }

    pub fn contains_all(&self, rows: &IntMat) -> bool {
        (0..rows.rows()).all(|i| self.contains(rows.row(i)))
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        other.contains_all(&self.basis)
    }

    pub fn sum(&self, other: &RowSpace) -> RowSpace {
        assert_eq!(self.cols, other.cols, "span sum shape mismatch");
        RowSpace::from_rows(&self.base, self.basis.vstack(&other.basis))
    }

    /// Rational rank over `Z`; over `Z/m` the number of canonical generators.
    pub fn free_rank(&self) -> usize {
        match &self.base {
            Base::Int => self.basis.rows(),
            Base::Mod(_) => self.basis.rows(),
        }
    }

    /// Over `Z`: whether `other <= self` with finite index (equal Q-spans).
    pub fn contains_with_finite_index(&self, other: &RowSpace) -> bool {
        assert!(matches!(self.base, Base::Int));
        other.is_subspace_of(self) && self.rank() == other.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rowspace_membership_and_equality() {
        let base = Base::Int;
        let a = RowSpace::from_rows(&base, IntMat::from_i64(2, 2, &[2, 0, 0, 3]));
        assert!(a.contains(&[BigInt::from(4), BigInt::from(3)]));
        assert!(!a.contains(&[BigInt::from(1), BigInt::from(0)]));
        let b = RowSpace::from_rows(&base, IntMat::from_i64(2, 2, &[2, 3, 0, 3]));
        assert_eq!(a, b);
        let c = RowSpace::from_rows(&base, IntMat::from_i64(2, 2, &[2, 3, 2, -3]));
        assert_ne!(a, c); // index-12 sublattice, not the same span
    }

    #[test]
    fn rowspace_mod_base() {
        let base = Base::Mod(BigInt::from(4));
        let s = RowSpace::from_rows(&base, IntMat::from_i64(1, 2, &[2, 1]));
        assert!(s.contains(&[BigInt::zero(), BigInt::from(2)]));
        assert!(!s.contains(&[BigInt::one(), BigInt::zero()]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// SNF contract: u*m*v = d, divisibility chain, |det| preserved.
        #[test]
        fn snf_contract(entries in proptest::collection::vec(-9i64..=9, 9)) {
            let m = IntMat::from_i64(3, 3, &entries);
            let (u, d, v) = smith_normal_form(&m);
            prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
            prop_assert_eq!(u.det().abs(), BigInt::one());
            prop_assert_eq!(v.det().abs(), BigInt::one());
            let factors: Vec<BigInt> =
                (0..3).map(|i| d[(i, i)].clone()).filter(|e| !e.is_zero()).collect();
            for w in factors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            let prod: BigInt = factors.iter().product();
            if factors.len() == 3 {
                prop_assert_eq!(prod, m.det().abs());
            } else {
                prop_assert_eq!(m.det(), BigInt::zero());
            }
        }

        /// Kernel rows annihilate exactly, and small enumerated kernel
        /// elements lie in the span (Z/m side).
        #[test]
        fn kernel_contract_mod(entries in proptest::collection::vec(0i64..=5, 4), modulus in 2i64..=6) {
            let m = IntMat::from_i64(2, 2, &entries);
            let base = Base::Mod(BigInt::from(modulus));
            let k = kernel_basis(&m, &base);
            let prod = base.reduce_mat(&k.mul(&m));
            prop_assert!(prod.is_zero());
            let span = RowSpace::from_rows(&base, k);
            for a in 0..modulus {
                for b in 0..modulus {
                    let x = vec![BigInt::from(a), BigInt::from(b)];
                    let image = base.reduce_mat(&IntMat::from_rows(vec![m.row_times(&x)]));
                    if image.is_zero() {
                        prop_assert!(span.contains(&x));
                    }
                }
            }
        }

        /// Howell membership decisions agree with brute-force enumeration
        /// for spans of cardinality <= 4096.
        #[test]
        fn howell_matches_enumeration(entries in proptest::collection::vec(0i64..=7, 6), modulus in 2i64..=8) {
            let m = IntMat::from_i64(2, 3, &entries);
            let md = BigInt::from(modulus);
            let card = span_cardinality_mod(&m, &md);
            prop_assume!(card <= BigInt::from(4096));
            let mut seen = std::collections::HashSet::new();
            for a in 0..modulus {
                for b in 0..modulus {
                    let x = vec![BigInt::from(a), BigInt::from(b)];
                    let y: Vec<i64> = m
                        .row_times(&x)
                        .iter()
                        .map(|e| {
                            let r = e.mod_floor(&md);
                            i64::try_from(&r).unwrap()
                        })
                        .collect();
                    seen.insert(y);
                }
            }
            prop_assert_eq!(BigInt::from(seen.len()), card);
            let form = howell_form(&m, &md);
            let space = RowSpace::from_rows(&Base::Mod(md.clone()), m.clone());
            for v in &seen {
                let vv: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
                prop_assert!(space.contains(&vv));
                prop_assert!(howell::solve(&form, &vv, &md).is_some());
            }
        }
    }
}

/// Diagnostic probe used by benches: run the i128 fast Hermite path and
/// report (rank, approximate bit size of the largest transform entry).
pub fn fast_hermite_probe(m: &IntMat, want_u: bool) -> Option<(usize, u32)> {
    let fast = fastelim::hermite(m, want_u)?;
    let bits = fast
        .u
        .as_ref()
        .map(|u| u.data.iter().map(|e| 128 - e.unsigned_abs().leading_zeros()).max().unwrap_or(0))
        .unwrap_or(0);
    Some((fast.pivots.len(), bits))
}
