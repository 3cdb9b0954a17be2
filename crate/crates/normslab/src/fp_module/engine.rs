//! Lowering of group-ring module arithmetic to base-level linear algebra.
//!
//! A vector over `R = B[A]` flattens to a base vector by concatenating
//! coefficient vectors; a matrix over `R` flattens blockwise through the
//! regular representation, so that `flat(x * M) = flat(x) * flatten(M)`.
//! R-spans, R-syzygies and R-linear solves then reduce to integer (or `Z/m`)
//! kernels and solves, with the `A`-action appearing as the block structure.

use crate::exact::{hermite, kernel_basis, IntMat, RowSpace};
use crate::group_ring::{GroupRing, RingElement};
use num_bigint::BigInt;
use num_traits::Zero;

/// A matrix over a group ring, rows acting from the left: `x * M`.
#[derive(Clone, PartialEq, Eq)]
pub struct RMatrix {
    ring: GroupRing,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl RMatrix {
    pub fn zero(ring: &GroupRing, rows: usize, cols: usize) -> RMatrix {
        RMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &GroupRing, n: usize) -> RMatrix {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &GroupRing, rows: Vec<Vec<RingElement>>) -> RMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        let entries: Vec<RingElement> = rows.into_iter().flatten().collect();
        assert!(entries.iter().all(|e| e.ring() == ring), "entry from a foreign ring");
        RMatrix { ring: ring.clone(), rows: r, cols: c, entries }
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        assert!(v.ring() == &self.ring);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<RingElement> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<RingElement>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> RMatrix {
        let mut m = Self::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "R-matrix product shape mismatch");
        assert!(self.ring == other.ring, "R-matrix product ring mismatch");
        let mut out = Self::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    let cur = out.at(i, j).add(&prod);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.cols);
        assert!(self.ring == other.ring);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        RMatrix { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn select_rows(&self, idx: &[usize]) -> RMatrix {
        RMatrix::from_rows(&self.ring, idx.iter().map(|&i| self.row(i)).collect::<Vec<_>>())
    }

    /// Apply a ring homomorphism entrywise (tower transition / base change).
    pub fn map_entries(&self, f: &crate::group_ring::RingHom) -> RMatrix {
        let entries = self.entries.iter().map(|e| f.apply(e)).collect();
        RMatrix { ring: f.target().clone(), rows: self.rows, cols: self.cols, entries }
    }

    /// Base-level matrix with `flat(x * M) = flat(x) * flatten(M)`.
    pub fn flatten(&self) -> IntMat {
        let g = self.ring.order();
        let mut out = IntMat::zero(self.rows * g, self.cols * g);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.at(i, j);
                if e.is_zero() {
                    continue;
                }
                let block = e.regular_representation();
                for s in 0..g {
                    for a in 0..g {
                        let v = &block[(s, a)];
                        if !v.is_zero() {
                            out[(i * g + s, j * g + a)] = v.clone();
                        }
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RMatrix {}x{} over {:?} [", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Flatten an R-vector by concatenating coefficient vectors.
pub fn flatten_vec(v: &[RingElement]) -> Vec<BigInt> {
    let mut out = Vec::new();
    for e in v {
        out.extend(e.coeffs().iter().cloned());
    }
    out
}

/// Reassemble an R-vector from a flat base vector.
pub fn unflatten_vec(ring: &GroupRing, flat: &[BigInt]) -> Vec<RingElement> {
    let g = ring.order();
    assert_eq!(flat.len() % g, 0, "flat vector length not a multiple of |A|");
    flat.chunks(g).map(|c| ring.from_coeffs(c.to_vec())).collect()
}

/// The base-level row space of the R-span of the given rows.
pub fn r_span(rows: &RMatrix) -> RowSpace {
    RowSpace::from_rows(rows.ring().base(), rows.flatten())
}

/// Generators of the R-syzygy module `{c in R^rows : c * rows = 0}`.
pub fn r_syzygies(rows: &RMatrix) -> RMatrix {
    let flat = rows.flatten();
    let k = kernel_basis(&flat, rows.ring().base());
    let gens: Vec<Vec<RingElement>> =
        (0..k.rows()).map(|i| unflatten_vec(rows.ring(), k.row(i))).collect();
    let out = RMatrix::from_rows(rows.ring(), gens);
    if out.rows() == 0 {
        RMatrix::zero(rows.ring(), 0, rows.rows())
    } else {
        out
    }
}

/// Solve `c * rows = target` for `c` over R, if possible.
pub fn r_solve(rows: &RMatrix, target: &[RingElement]) -> Option<Vec<RingElement>> {
    assert_eq!(target.len(), rows.cols(), "r_solve shape mismatch");
    if rows.rows() == 0 {
        return target.iter().all(|e| e.is_zero()).then_some(vec![]);
    }
    let flat = rows.flatten();
    let b = flatten_vec(target);
    let sol = crate::exact::solve_linear(&flat, &b, rows.ring().base()).ok()??;
    Some(unflatten_vec(rows.ring(), &sol))
}

/// Generators of the preimage condition `{c in R^k : c * rows in span}`,
/// where `span` is given by generator rows in the same ambient.
///
/// Used for kernels of maps into quotient modules: take `rows` = the map
/// matrix and `span` = the target relations.
pub fn r_preimage_kernel(rows: &RMatrix, span: &RMatrix) -> RMatrix {
    assert_eq!(rows.cols(), span.cols(), "shape mismatch");
    let stacked = rows.vstack(span);
    let k = r_syzygies(&stacked);
    // keep the first block of coordinates
    let gens: Vec<Vec<RingElement>> =
        (0..k.rows()).map(|i| k.row(i)[..rows.rows()].to_vec()).collect();
    let candidate = if gens.is_empty() {
        RMatrix::zero(rows.ring(), 0, rows.rows())
    } else {
        RMatrix::from_rows(rows.ring(), gens)
    };
    prune_generators(&candidate, None)
}

/// Greedy removal of R-redundant rows: keep a row only if it is not already
/// in the R-span of the kept rows (plus an optional ambient span).
pub fn prune_generators(rows: &RMatrix, extra_span: Option<&RowSpace>) -> RMatrix {
    if rows.rows() == 0 {
        return rows.clone();
    }
    let g = rows.ring().order();
    let flat = rows.flatten();
    // visit sparse rows first so kept generators stay short
    let mut order: Vec<usize> = (0..rows.rows()).collect();
    let weight = |i: usize| -> u64 {
        let mut w = 0u64;
        for s in 0..g {
            for e in flat.row(i * g + s) {
                w += e.bits();
            }
        }
        w
    };
    order.sort_by_key(|&i| weight(i));
    let base = rows.ring().base();
    let mut kept: Vec<usize> = Vec::new();
    let mut space = match extra_span {
        Some(s) => s.clone(),
        None => RowSpace::zero(base, rows.cols() * g),
    };
    for &i in &order {
        let probe = flatten_vec(&rows.row(i));
        if space.contains(&probe) {
            continue;
        }
        kept.push(i);
        let translated = flat.submatrix(i * g..(i + 1) * g, 0..flat.cols());
        space = space.sum(&RowSpace::from_rows(base, translated));
    }
    kept.sort();
    rows.select_rows(&kept)
}

/// Prune relation rows that are redundant and reduce entries; the span of
/// the returned rows equals the span of the input rows.
pub fn prune_relations(rows: &RMatrix) -> RMatrix {
    prune_generators(rows, None)
}

/// Rank of the flattened span (free base rank of the spanned lattice).
pub fn flat_rank(rows: &RMatrix) -> usize {
    hermite(&rows.flatten(), false).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Base;
    use crate::group_ring::FiniteAbelianGroup;

    fn zc2() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(2))
    }

    #[test]
    fn flatten_respects_products() {
        let r = zc2();
        let g = r.monomial(1);
        let m = RMatrix::from_rows(
            &r,
            vec![vec![r.one().add(&g), r.scalar(2)], vec![r.zero(), g.clone()]],
        );
        let x = vec![r.scalar(3), r.one().sub(&g)];
        // x * m computed over R
        let direct: Vec<RingElement> = (0..2)
            .map(|j| {
                let mut acc = r.zero();
                for (k, xe) in x.iter().enumerate() {
                    acc = acc.add(&xe.mul(m.at(k, j)));
                }
                acc
            })
            .collect();
        let flat = m.flatten().row_times(&flatten_vec(&x));
        assert_eq!(flatten_vec(&direct), flat);
    }

    #[test]
    fn syzygies_of_augmentation_pair() {
        // over Z[C2], the single row (g - 1) has syzygy module (g + 1)
        let r = zc2();
        let g = r.monomial(1);
        let m = RMatrix::from_rows(&r, vec![vec![g.sub(&r.one())]]);
        let syz = r_syzygies(&m);
        assert!(syz.mul(&m).is_zero());
        let span = r_span(&syz);
        assert!(span.contains(&flatten_vec(&[r.one().add(&g)])));
        // and (g+1) generates it: spans are equal
        let expect = r_span(&RMatrix::from_rows(&r, vec![vec![r.one().add(&g)]]));
        assert_eq!(span, expect);
    }

    #[test]
    fn solve_over_the_ring() {
        let r = zc2();
        let g = r.monomial(1);
        let m = RMatrix::from_rows(&r, vec![vec![r.scalar(2), g.clone()]]);
        let target = vec![r.scalar(4), g.scale(&2.into())];
        let c = r_solve(&m, &target).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0], r.scalar(2));
        assert!(r_solve(&m, &[r.one(), r.zero()]).is_none());
    }

    #[test]
    fn prune_removes_translates_and_combinations() {
        let r = zc2();
        let g = r.monomial(1);
        let m = RMatrix::from_rows(
            &r,
            vec![
                vec![r.one()],
                vec![g.clone()],          // translate of the first row
                vec![r.one().add(&g)],    // combination
            ],
        );
        let pruned = prune_generators(&m, None);
        assert_eq!(pruned.rows(), 1);
    }
}
