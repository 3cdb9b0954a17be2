//! Hom modules, duals, Ext^1, duals of finite modules, and the base-to-ring
//! Hom comparison isomorphism.

use super::engine::{self, RMatrix};
use super::{FpModule, ModuleElement, ModuleMap, SubmoduleData};
use crate::error::{Error, Result};
use crate::exact::{Base, RowSpace};
use crate::group_ring::RingElement;
use num_bigint::BigInt;
use num_traits::Zero;

/// `Hom_R(M, N)` presented as a module together with its generators realised
/// as explicit maps.
pub struct HomModule {
    /// Abstract presentation of the Hom module.
    pub module: FpModule,
    /// The generator maps, one per ambient basis vector of `module`.
    pub generator_maps: Vec<ModuleMap>,
    source: FpModule,
    target: FpModule,
}

impl HomModule {
    /// Realise an element of the Hom module (coordinates on the generators)
    /// as an actual map.
    pub fn realise(&self, coords: &[RingElement]) -> ModuleMap {
        assert_eq!(coords.len(), self.generator_maps.len(), "coordinate width mismatch");
        let ring = self.source.ring();
        let mut matrix =
            RMatrix::zero(ring, self.source.ambient_rank(), self.target.ambient_rank());
        for (c, gm) in coords.iter().zip(&self.generator_maps) {
            if c.is_zero() {
                continue;
            }
            for i in 0..matrix.rows() {
                for j in 0..matrix.cols() {
                    let add = c.mul(gm.matrix().at(i, j));
                    let cur = matrix.at(i, j).add(&add);
                    matrix.set(i, j, cur);
                }
            }
        }
        ModuleMap::new(&self.source, &self.target, matrix)
            .expect("realised Hom elements are well-defined maps")
    }

    /// Apply a Hom element to a module element.
    pub fn apply(&self, coords: &[RingElement], e: &ModuleElement) -> ModuleElement {
        self.realise(coords).apply(e)
    }
}

/// Flatten a map matrix into a vector over `R^(b_M * b_N)`.
fn matrix_as_vector(m: &RMatrix) -> Vec<RingElement> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        v.extend(m.row(i));
    }
    v
}

fn vector_as_matrix(v: &[RingElement], rows: usize, cols: usize) -> RMatrix {
    assert_eq!(v.len(), rows * cols);
    let ring = v.first().map(|e| e.ring().clone()).expect("nonempty vector");
    RMatrix::from_rows(&ring, v.chunks(cols).map(|c| c.to_vec()).collect::<Vec<_>>())
}

/// Generators (as map matrices) of `{Phi : rel_M * Phi <= rel_N-span}`,
/// i.e. of the matrices defining genuine maps `M -> N`.
fn hom_candidates(source: &FpModule, target: &FpModule) -> Vec<RMatrix> {
    let ring = source.ring();
    let (bm, bn) = (source.ambient_rank(), target.ambient_rank());
    if bm == 0 || bn == 0 {
        return vec![];
    }
    let rel_m = source.relations();
    if rel_m.rows() == 0 {
        // free source: every matrix is a map; generators are the unit matrices
        let mut gens = Vec::new();
        for i in 0..bm {
            for j in 0..bn {
                let mut m = RMatrix::zero(ring, bm, bn);
                m.set(i, j, ring.one());
                gens.push(m);
            }
        }
        return gens;
    }
    // unknowns: Phi in R^(bm*bn); constraints: for each relation row r and
    // target slot j, sum_k Phi[k][j] * rel_m[r][k] lands in rel_N-span.
    // Encode as a syzygy problem over R in a doubled variable set.
    let a_m = rel_m.rows();
    let constraint_cols = a_m * bn;
    // rows of the big matrix: one per unknown, entries in R^(constraint_cols)
    let mut rows: Vec<Vec<RingElement>> = Vec::new();
    for k in 0..bm {
        for j in 0..bn {
            let mut row = vec![ring.zero(); constraint_cols];
            for r in 0..a_m {
                row[r * bn + j] = rel_m.at(r, k).clone();
            }
            rows.push(row);
        }
    }
    // null directions absorbing the rel_N-span in each constraint slot
    let rel_n = target.relations();
    for r in 0..a_m {
        for s in 0..rel_n.rows() {
            let mut row = vec![ring.zero(); constraint_cols];
            for j in 0..bn {
                row[r * bn + j] = rel_n.at(s, j).neg();
            }
            rows.push(row);
        }
    }
    let big = RMatrix::from_rows(ring, rows);
    let syz = engine::r_syzygies(&big);
    let mut gens = Vec::new();
    for i in 0..syz.rows() {
        let phi = syz.row(i)[..bm * bn].to_vec();
        if phi.iter().any(|e| !e.is_zero()) {
            gens.push(vector_as_matrix(&phi, bm, bn));
        }
    }
    gens
}

/// The lattice of null maps: matrices whose rows all lie in the relation
/// span of the target (these induce the zero map).
fn null_map_rows(source: &FpModule, target: &FpModule) -> RMatrix {
    let ring = source.ring();
    let (bm, bn) = (source.ambient_rank(), target.ambient_rank());
    let rel_n = target.relations();
    let mut rows = Vec::new();
    for k in 0..bm {
        for s in 0..rel_n.rows() {
            let mut m = RMatrix::zero(ring, bm, bn);
            for j in 0..bn {
                m.set(k, j, rel_n.at(s, j).clone());
            }
            rows.push(matrix_as_vector(&m));
        }
    }
    if rows.is_empty() {
        RMatrix::zero(ring, 0, bm * bn)
    } else {
        RMatrix::from_rows(ring, rows)
    }
}

/// `Hom_R(M, N)` with its application realisation.
///
/// Computed from the kernel description `Hom(M, N) = ker(N^b -> N^a)`
/// induced by the relation matrix, lowered to base-level linear algebra.
pub fn hom_module(source: &FpModule, target: &FpModule) -> Result<HomModule> {
    if source.ring() != target.ring() {
        return Err(Error::RingMismatch("hom_module over different rings".into()));
    }
    let ring = source.ring();
    let (bm, bn) = (source.ambient_rank(), target.ambient_rank());
    let candidates = hom_candidates(source, target);
    let null_rows = null_map_rows(source, target);
    if candidates.is_empty() {
        return Ok(HomModule {
            module: FpModule::zero_module(ring),
            generator_maps: vec![],
            source: source.clone(),
            target: target.clone(),
        });
    }
    let cand_rows =
        RMatrix::from_rows(ring, candidates.iter().map(matrix_as_vector).collect::<Vec<_>>());
    let null_space = if null_rows.rows() == 0 {
        RowSpace::zero(ring.base(), bm * bn * ring.order())
    } else {
        engine::r_span(&null_rows)
    };
    let pruned = engine::prune_generators(&cand_rows, Some(&null_space));
    if pruned.rows() == 0 {
        return Ok(HomModule {
            module: FpModule::zero_module(ring),
            generator_maps: vec![],
            source: source.clone(),
            target: target.clone(),
        });
    }
    let relations = engine::r_preimage_kernel(&pruned, &null_rows);
    let module = FpModule::new(ring, pruned.rows(), relations);
    let generator_maps = (0..pruned.rows())
        .map(|i| {
            ModuleMap::new(source, target, vector_as_matrix(&pruned.row(i), bm, bn))
                .expect("hom generators are well-defined maps")
        })
        .collect();
    Ok(HomModule { module, generator_maps, source: source.clone(), target: target.clone() })
}

/// `M^* = Hom_R(M, R)`, with generators as row functionals on `R^b`.
///
/// A functional is a vector `phi in R^b`; evaluation on an element `x` is
/// `sum_j x_j phi_j`. The dual is the syzygy module of the transposed
/// relation matrix.
pub struct DualModule {
    pub module: FpModule,
    /// Generator functionals, rows in `R^b` of the source.
    pub functionals: RMatrix,
}

impl DualModule {
    pub fn evaluate(&self, functional_coords: &[RingElement], x: &[RingElement]) -> RingElement {
        let ring = self.functionals.ring();
        let mut phi = vec![ring.zero(); self.functionals.cols()];
        for (c, i) in functional_coords.iter().zip(0..self.functionals.rows()) {
            if c.is_zero() {
                continue;
            }
            for (j, p) in phi.iter_mut().enumerate() {
                *p = p.add(&c.mul(self.functionals.at(i, j)));
            }
        }
        evaluate_functional(&phi, x)
    }
}

/// Evaluate a row functional on an element of `R^b`.
pub fn evaluate_functional(phi: &[RingElement], x: &[RingElement]) -> RingElement {
    assert_eq!(phi.len(), x.len(), "functional width mismatch");
    let ring = phi.first().expect("nonempty functional").ring();
    let mut acc = ring.zero();
    for (p, v) in phi.iter().zip(x) {
        if !p.is_zero() && !v.is_zero() {
            acc = acc.add(&p.mul(v));
        }
    }
    acc
}

pub fn dual(module: &FpModule) -> DualModule {
    let ring = module.ring();
    let b = module.ambient_rank();
    let rel = module.relations();
    if rel.rows() == 0 || b == 0 {
        return DualModule {
            module: FpModule::free(ring, b),
            functionals: RMatrix::identity(ring, b),
        };
    }
    let functionals = engine::prune_generators(&engine::r_syzygies(&rel.transpose()), None);
    if functionals.rows() == 0 {
        return DualModule {
            module: FpModule::zero_module(ring),
            functionals: RMatrix::zero(ring, 0, b),
        };
    }
    let relations = engine::r_syzygies(&functionals);
    let module = FpModule::new(ring, functionals.rows(), engine::prune_relations(&relations));
    DualModule { module, functionals }
}

/// `Ext^1_R(M, R)`: one syzygy step of the presentation, dualised, homology
/// at the middle. Independent of the syzygy choice up to isomorphism.
pub fn ext1(module: &FpModule) -> FpModule {
    let ring = module.ring();
    let rel = module.relations(); // a x b
    let a = rel.rows();
    if a == 0 {
        return FpModule::zero_module(ring);
    }
    let syz = module.syzygies(); // c x a, rows span ker(R^a -> R^b)
    // middle homology of R^b -> R^a -> R^c (duals, right-multiplication)
    let kernel_gens = if syz.rows() == 0 {
        RMatrix::identity(ring, a)
    } else {
        engine::r_syzygies(&syz.transpose())
    };
    let image_rows = rel.transpose(); // b rows in R^a
    let pruned = engine::prune_generators(&kernel_gens, Some(&engine::r_span(&image_rows)));
    if pruned.rows() == 0 {
        return FpModule::zero_module(ring);
    }
    let relations = engine::r_preimage_kernel(&pruned, &image_rows);
    FpModule::new(ring, pruned.rows(), relations)
}

/// Dual of a finite module.
///
/// Over base `Z` this is `Ext^1_R(M, R)` (the dimension-one realisation of
/// the finite dual); over base `Z/m` it is the base-level annihilator dual
/// with its natural R-action.
pub fn pontryagin_dual(module: &FpModule) -> Result<FpModule> {
    if !module.is_finite() {
        return Err(Error::Precondition("pontryagin_dual needs a finite module".into()));
    }
    match module.ring().base() {
        Base::Int => Ok(ext1(module)),
        Base::Mod(_) => {
            let ring = module.ring();
            let n = module.ambient_rank() * ring.order();
            let basis = module.relation_space().basis().clone();
            let ann = if basis.rows() == 0 {
                crate::exact::IntMat::identity(n)
            } else {
                crate::exact::kernel_basis(&basis.transpose(), ring.base())
            };
            let free = FpModule::free(ring, module.ambient_rank());
            let gens: Vec<ModuleElement> =
                (0..ann.rows()).map(|i| free.element_from_flat(ann.row(i))).collect();
            let sub = SubmoduleData::new(&free, gens).pruned();
            Ok(sub.presented())
        }
    }
}

/// Verify that `f -> (m -> sum_s s^{-1} f(s m))` is a bijection from the
/// base-level dual of `M` onto `Hom_R(M, R)` (with the auxiliary action
/// inverted), by comparing base-level spans.
pub fn hom_twist_check(module: &FpModule) -> bool {
    let ring = module.ring();
    let g = ring.order();
    let b = module.ambient_rank();
    if b == 0 {
        return true;
    }
    // base-level dual: flat vectors annihilating the relation lattice
    let basis = module.relation_space().basis().clone();
    let base_dual = if basis.rows() == 0 {
        crate::exact::IntMat::identity(b * g)
    } else {
        crate::exact::kernel_basis(&basis.transpose(), ring.base())
    };
    // twist each base functional into a candidate R-functional:
    // F_j has coefficient at a equal to f((j, -a))
    let mut twisted_rows = Vec::new();
    for i in 0..base_dual.rows() {
        let y = base_dual.row(i);
        let mut f_vec: Vec<RingElement> = Vec::with_capacity(b);
        for j in 0..b {
            let coeffs: Vec<BigInt> =
                (0..g).map(|a| y[j * g + ring.neg_index(a)].clone()).collect();
            f_vec.push(ring.from_coeffs(coeffs));
        }
        twisted_rows.push(f_vec);
    }
    let dual_data = dual(module);
    // every twisted functional must be a genuine R-functional on M
    let rel = module.relations();
    for f_vec in &twisted_rows {
        for r in 0..rel.rows() {
            let v = evaluate_functional(f_vec, &rel.row(r));
            if !v.is_zero() {
                return false;
            }
        }
    }
    // span comparison: the twisted base-dual generates exactly the R-dual
    let base = ring.base();
    let lhs = if twisted_rows.is_empty() {
        RowSpace::zero(base, b * g)
    } else {
        engine::r_span(&RMatrix::from_rows(ring, twisted_rows))
    };
    let rhs = if dual_data.functionals.rows() == 0 {
        RowSpace::zero(base, b * g)
    } else {
        engine::r_span(&dual_data.functionals)
    };
    lhs == rhs
}

/// Enumerate coset representatives of a finite module, if its cardinality is
/// at most `limit`. Representatives are flat base vectors.
pub fn enumerate_elements(module: &FpModule, limit: usize) -> Option<Vec<Vec<BigInt>>> {
    let card = module.cardinality()?;
    if card > BigInt::from(limit) {
        return None;
    }
    let n = module.ambient_rank() * module.ring().order();
    if n == 0 {
        return Some(vec![vec![]]);
    }
    // box representatives under the full-rank echelon lattice
    let space = module.relation_space();
    let (basis, diag): (crate::exact::IntMat, Vec<BigInt>) = match module.ring().base() {
        Base::Int => {
            let b = space.basis().clone();
            let d = (0..n).map(|i| b[(i, i)].clone()).collect();
            (b, d)
        }
        Base::Mod(m) => {
            let lift = space.basis().vstack(&crate::exact::IntMat::identity(n).scale(m));
            let h = crate::exact::row_basis(&lift);
            let d = (0..n).map(|i| h[(i, i)].clone()).collect();
            (h, d)
        }
    };
    let _ = basis;
    let mut reps: Vec<Vec<BigInt>> = vec![vec![]];
    for d in &diag {
        let bound = d.clone();
        let mut next = Vec::new();
        let mut v = BigInt::zero();
        while &v < &bound {
            for r in &reps {
                let mut r2 = r.clone();
                r2.push(v.clone());
                next.push(r2);
            }
            v += 1;
        }
        reps = next;
    }
    Some(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Base;
    use crate::group_ring::{FiniteAbelianGroup, GroupRing};

    fn z() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::trivial())
    }

    fn zc2() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(2))
    }

    fn cyclic_quotient(ring: &GroupRing, n: i64) -> FpModule {
        FpModule::new(ring, 1, RMatrix::from_rows(ring, vec![vec![ring.scalar(n)]]))
    }

    #[test]
    fn hom_of_torsion_into_free_is_zero() {
        let r = z();
        let m = cyclic_quotient(&r, 5);
        let h = hom_module(&m, &FpModule::free(&r, 1)).unwrap();
        assert!(h.module.is_zero());
    }

    #[test]
    fn hom_of_ring_with_itself_is_free_rank_one() {
        let r = zc2();
        let free1 = FpModule::free(&r, 1);
        let h = hom_module(&free1, &free1).unwrap();
        assert_eq!(h.module.ambient_rank(), 1);
        assert!(h.module.relations().is_zero());
        // the generator acts as multiplication by a unit-ish element
        let gen = &h.generator_maps[0];
        assert!(!gen.matrix().at(0, 0).is_zero());
    }

    #[test]
    fn hom_cardinality_example() {
        // Hom_{Z/8}(Z/4, Z/8) has 4 elements: images of the generator are
        // the multiples of 2
        let r8 = GroupRing::new(Base::Mod(8.into()), FiniteAbelianGroup::trivial());
        let m = cyclic_quotient(&r8, 4);
        let n = FpModule::free(&r8, 1);
        let h = hom_module(&m, &n).unwrap();
        assert_eq!(h.module.cardinality(), Some(4.into()));
    }

    #[test]
    fn dual_examples() {
        let r = zc2();
        // dual of free rank d is free rank d
        let d = dual(&FpModule::free(&r, 3));
        assert_eq!(d.module.ambient_rank(), 3);
        assert!(d.module.relations().is_zero());
        // dual of R/(g-1) is generated by the norm functional
        let g = r.monomial(1);
        let m = FpModule::new(&r, 1, RMatrix::from_rows(&r, vec![vec![g.sub(&r.one())]]));
        let dm = dual(&m);
        assert_eq!(dm.module.base_rank(), 1);
        // the functional must kill the relation
        let phi = dm.functionals.row(0);
        assert!(evaluate_functional(&phi, &[g.sub(&r.one())]).is_zero());
    }

    #[test]
    fn ext1_examples() {
        let r = z();
        // Ext^1_Z(Z/n, Z) has cardinality n
        for n in [2i64, 4, 6] {
            let e = ext1(&cyclic_quotient(&r, n));
            assert_eq!(e.cardinality(), Some(n.into()), "n = {n}");
        }
        // Ext^1 of free is zero
        assert!(ext1(&FpModule::free(&r, 2)).is_zero());
        // Ext^1_{Z[C2]}(Z, Z[C2]) = 0: free modules are cohomologically
        // trivial, so the periodic resolution gives vanishing odd Ext
        let r2 = zc2();
        let g = r2.monomial(1);
        let zm = FpModule::new(&r2, 1, RMatrix::from_rows(&r2, vec![vec![g.sub(&r2.one())]]));
        assert!(ext1(&zm).is_zero());
        // Ext^1_{Z[C2]}(R/(g-1, 2), Z[C2]) has cardinality 2
        let fin = FpModule::new(
            &r2,
            1,
            RMatrix::from_rows(&r2, vec![vec![g.sub(&r2.one())], vec![r2.scalar(2)]]),
        );
        assert_eq!(ext1(&fin).cardinality(), Some(2.into()));
    }

    #[test]
    fn pontryagin_examples() {
        let r = z();
        // (Z/2)^dual: cardinality 2
        let d = pontryagin_dual(&cyclic_quotient(&r, 2)).unwrap();
        assert_eq!(d.cardinality(), Some(2.into()));
        // zero module: zero
        assert!(pontryagin_dual(&FpModule::zero_module(&r)).unwrap().is_zero());
        // infinite module rejected
        assert!(pontryagin_dual(&FpModule::free(&r, 1)).is_err());
        // R/(g-1, 2) over Z[C2]: finite of cardinality 2, trivial action
        let r2 = zc2();
        let g = r2.monomial(1);
        let fin = FpModule::new(
            &r2,
            1,
            RMatrix::from_rows(&r2, vec![vec![g.sub(&r2.one())], vec![r2.scalar(2)]]),
        );
        let dualm = pontryagin_dual(&fin).unwrap();
        assert_eq!(dualm.cardinality(), Some(2.into()));
        // action is trivial: (g-1) annihilates the dual
        let gm = dualm.generators();
        for e in &gm {
            let moved = e.scale(&g.sub(&r2.one()));
            assert!(moved.is_zero());
        }
    }

    #[test]
    fn pontryagin_mod_base() {
        let r = GroupRing::new(Base::Mod(4.into()), FiniteAbelianGroup::trivial());
        let m = cyclic_quotient(&r, 2);
        let d = pontryagin_dual(&m).unwrap();
        assert_eq!(d.cardinality(), Some(2.into()));
    }

    #[test]
    fn hom_twist_examples() {
        let r = zc2();
        // M = R itself
        assert!(hom_twist_check(&FpModule::free(&r, 1)));
        // M = 0
        assert!(hom_twist_check(&FpModule::zero_module(&r)));
        // M = Z[C2]/(g-1)
        let g = r.monomial(1);
        let m = FpModule::new(&r, 1, RMatrix::from_rows(&r, vec![vec![g.sub(&r.one())]]));
        assert!(hom_twist_check(&m));
    }

    #[test]
    fn enumerate_small_modules() {
        let r = z();
        let m = cyclic_quotient(&r, 6);
        let elems = enumerate_elements(&m, 10).unwrap();
        assert_eq!(elems.len(), 6);
        assert!(enumerate_elements(&FpModule::free(&r, 1), 10).is_none());
    }

    /// Brute-force |Hom(M, N)| by enumerating generator images.
    fn brute_force_hom_count(m: &FpModule, n: &FpModule, cap: usize) -> Option<usize> {
        let n_elems = enumerate_elements(n, cap)?;
        let bm = m.ambient_rank();
        let mut assignments: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..bm {
            let mut next = Vec::new();
            for a in &assignments {
                for i in 0..n_elems.len() {
                    let mut a2 = a.clone();
                    a2.push(i);
                    next.push(a2);
                }
            }
            assignments = next;
            if assignments.len() > 100_000 {
                return None;
            }
        }
        let rel = m.relations();
        let mut count = 0usize;
        for a in &assignments {
            let images: Vec<ModuleElement> =
                a.iter().map(|&i| n.element_from_flat(&n_elems[i])).collect();
            let ok = (0..rel.rows()).all(|r| {
                let mut acc = n.zero_element();
                for (k, img) in images.iter().enumerate() {
                    acc = acc.add(&img.scale(rel.at(r, k)));
                }
                acc.is_zero()
            });
            if ok {
                count += 1;
            }
        }
        Some(count)
    }

    #[test]
    fn hom_cardinality_matches_brute_force() {
        let r = z();
        let cases = vec![
            (cyclic_quotient(&r, 4), cyclic_quotient(&r, 6)),
            (cyclic_quotient(&r, 6), cyclic_quotient(&r, 4)),
            (
                cyclic_quotient(&r, 2).direct_sum(&cyclic_quotient(&r, 4)),
                cyclic_quotient(&r, 8),
            ),
        ];
        for (m, n) in cases {
            let h = hom_module(&m, &n).unwrap();
            let expected = brute_force_hom_count(&m, &n, 256).unwrap();
            assert_eq!(h.module.cardinality(), Some(BigInt::from(expected)));
        }
        // and over a genuine group ring
        let r2 = zc2();
        let g = r2.monomial(1);
        let m = FpModule::new(
            &r2,
            1,
            RMatrix::from_rows(&r2, vec![vec![g.sub(&r2.one())], vec![r2.scalar(2)]]),
        );
        let n = FpModule::new(&r2, 1, RMatrix::from_rows(&r2, vec![vec![r2.scalar(4)]]));
        let h = hom_module(&m, &n).unwrap();
        let expected = brute_force_hom_count(&m, &n, 256).unwrap();
        assert_eq!(h.module.cardinality(), Some(BigInt::from(expected)));
    }
}
