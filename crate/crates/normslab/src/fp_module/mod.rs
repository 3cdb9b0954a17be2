//! Finitely presented modules over a [`GroupRing`] and the homological
//! toolkit that the bidual and tower layers build on.
//!
//! A module is the cokernel of `R^a -> R^b` given by a relation matrix whose
//! rows are relation vectors in `R^b`. Presentations are never compared
//! directly; equality of modules always means explicit certificates.

mod certify;
mod engine;
mod hom;

pub use certify::{freeness_certificate, iso_certificate, iso_certificate_with_budget, FreenessVerdict, IsoVerdict, WITNESS_SEARCH_BUDGET};
pub use hom::{
    dual, enumerate_elements, evaluate_functional, ext1, hom_module, hom_twist_check,
    pontryagin_dual, DualModule, HomModule,
};
pub use engine::{
    flatten_vec, prune_generators, r_preimage_kernel, r_solve, r_span, r_syzygies, unflatten_vec,
    RMatrix,
};

use crate::error::{Error, Result};
use crate::exact::{smith, Base, IntMat, RowSpace};
use crate::group_ring::{GroupRing, RingElement, RingHom};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::{Arc, OnceLock};

#[derive(Default)]
struct Caches {
    relation_space: OnceLock<RowSpace>,
    syzygies: OnceLock<RMatrix>,
}

/// A finitely presented module `coker(R^a -> R^b)`.
#[derive(Clone)]
pub struct FpModule {
    ring: GroupRing,
    ambient: usize,
    relations: RMatrix,
    caches: Arc<Caches>,
}

impl PartialEq for FpModule {
    /// Presentation equality only; module isomorphism is a certificate.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.ambient == other.ambient
            && self.relations == other.relations
    }
}
impl Eq for FpModule {}

impl std::fmt::Debug for FpModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FpModule(ambient {} over {:?}, {} relations)",
            self.ambient,
            self.ring,
            self.relations.rows()
        )
    }
}

impl FpModule {
    pub fn new(ring: &GroupRing, ambient: usize, relations: RMatrix) -> FpModule {
        assert_eq!(relations.cols(), ambient, "relation width must match ambient rank");
        assert!(relations.ring() == ring, "relations over a foreign ring");
        FpModule { ring: ring.clone(), ambient, relations, caches: Arc::default() }
    }

    pub fn free(ring: &GroupRing, rank: usize) -> FpModule {
        FpModule::new(ring, rank, RMatrix::zero(ring, 0, rank))
    }

    pub fn zero_module(ring: &GroupRing) -> FpModule {
        FpModule::free(ring, 0)
    }

    /// Rebuild with pruned relations (same module, smaller presentation).
    pub fn pruned(&self) -> FpModule {
        FpModule::new(&self.ring, self.ambient, engine::prune_relations(&self.relations))
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn relations(&self) -> &RMatrix {
        &self.relations
    }

    /// Flattened row space of the relations, cached.
    pub fn relation_space(&self) -> &RowSpace {
        self.caches.relation_space.get_or_init(|| {
            if self.relations.rows() == 0 {
                RowSpace::zero(self.ring.base(), self.ambient * self.ring.order())
            } else {
                engine::r_span(&self.relations)
            }
        })
    }

    /// One syzygy step of the presentation, cached (reused by Ext^1 and the
    /// Fitting/bidual paths).
    pub fn syzygies(&self) -> &RMatrix {
        self.caches.syzygies.get_or_init(|| engine::r_syzygies(&self.relations))
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement { module: self.clone(), vec: vec![self.ring.zero(); self.ambient] }
    }

    pub fn basis_element(&self, i: usize) -> ModuleElement {
        assert!(i < self.ambient);
        let mut vec = vec![self.ring.zero(); self.ambient];
        vec[i] = self.ring.one();
        ModuleElement { module: self.clone(), vec }
    }

    pub fn element(&self, vec: Vec<RingElement>) -> ModuleElement {
        assert_eq!(vec.len(), self.ambient, "element width must match ambient rank");
        ModuleElement { module: self.clone(), vec }
    }

    pub fn generators(&self) -> Vec<ModuleElement> {
        (0..self.ambient).map(|i| self.basis_element(i)).collect()
    }

    /// Number of elements, when finite.
    pub fn cardinality(&self) -> Option<BigInt> {
        let n = self.ambient * self.ring.order();
        if n == 0 {
            return Some(BigInt::one());
        }
        let space = self.relation_space();
        match self.ring.base() {
            Base::Int => {
                if space.rank() < n {
                    return None;
                }
                let basis = space.basis();
                let mut card = BigInt::one();
                // HNF pivots of a full-rank lattice sit on the diagonal
                for i in 0..n {
                    card *= &basis[(i, i)];
                }
                Some(card.abs())
            }
            Base::Mod(m) => {
                let span = if self.relations.rows() == 0 {
                    BigInt::one()
                } else {
                    crate::exact::span_cardinality_mod(&self.relations.flatten(), m)
                };
                let total = num_traits::pow::pow(m.clone(), n);
                Some(total / span)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.cardinality().map_or(false, |c| c.is_one())
    }

    /// Free rank of the base-level module (rank of `M tensor Q`); base `Z`.
    pub fn base_rank(&self) -> usize {
        assert!(matches!(self.ring.base(), Base::Int), "base_rank needs base Z");
        self.ambient * self.ring.order() - self.relation_space().rank()
    }

    /// Invariant factors of the underlying abelian group: (free rank,
    /// torsion factors > 1 in divisibility order).
    pub fn base_invariants(&self) -> (usize, Vec<BigInt>) {
        let n = self.ambient * self.ring.order();
        let space = self.relation_space();
        let basis = match self.ring.base() {
            Base::Int => space.basis().clone(),
            Base::Mod(_) => {
                // the lifted integer lattice presents the group
                let m = self.ring.base().modulus().unwrap();
                space.basis().vstack(&IntMat::identity(n).scale(m))
            }
        };
        if basis.rows() == 0 {
            return (n, vec![]);
        }
        let snf = smith(&basis, false);
        let factors = snf.invariant_factors();
        let free_rank = n - factors.len();
        let torsion: Vec<BigInt> = factors.into_iter().filter(|f| !f.is_one()).collect();
        (free_rank, torsion)
    }

    /// The element with the given flat coordinate vector.
    pub fn element_from_flat(&self, flat: &[BigInt]) -> ModuleElement {
        self.element(engine::unflatten_vec(&self.ring, flat))
    }

    pub fn direct_sum(&self, other: &FpModule) -> FpModule {
        assert!(self.ring == other.ring, "direct sum over different rings");
        let b = self.ambient + other.ambient;
        let mut rows = Vec::new();
        for i in 0..self.relations.rows() {
            let mut row = self.relations.row(i);
            row.extend(vec![self.ring.zero(); other.ambient]);
            rows.push(row);
        }
        for i in 0..other.relations.rows() {
            let mut row = vec![self.ring.zero(); self.ambient];
            row.extend(other.relations.row(i));
            rows.push(row);
        }
        let relations = if rows.is_empty() {
            RMatrix::zero(&self.ring, 0, b)
        } else {
            RMatrix::from_rows(&self.ring, rows)
        };
        FpModule::new(&self.ring, b, relations)
    }

    pub fn tensor_product(&self, other: &FpModule) -> FpModule {
        assert!(self.ring == other.ring, "tensor product over different rings");
        let b = self.ambient * other.ambient;
        let slot = |i: usize, j: usize| i * other.ambient + j;
        let mut rows = Vec::new();
        for r in 0..self.relations.rows() {
            for j in 0..other.ambient {
                let mut row = vec![self.ring.zero(); b];
                for k in 0..self.ambient {
                    row[slot(k, j)] = self.relations.at(r, k).clone();
                }
                rows.push(row);
            }
        }
        for r in 0..other.relations.rows() {
            for i in 0..self.ambient {
                let mut row = vec![self.ring.zero(); b];
                for k in 0..other.ambient {
                    row[slot(i, k)] = other.relations.at(r, k).clone();
                }
                rows.push(row);
            }
        }
        let relations = if rows.is_empty() {
            RMatrix::zero(&self.ring, 0, b)
        } else {
            engine::prune_relations(&RMatrix::from_rows(&self.ring, rows))
        };
        FpModule::new(&self.ring, b, relations)
    }

    /// Extension of scalars along a ring homomorphism: apply it entrywise to
    /// the relation matrix. Right-exact by construction.
    pub fn base_change(&self, f: &RingHom) -> Result<FpModule> {
        if f.source() != &self.ring {
            return Err(Error::RingMismatch("base_change: homomorphism source mismatch".into()));
        }
        Ok(FpModule::new(f.target(), self.ambient, self.relations.map_entries(f)))
    }

    /// Generators of the base-level torsion submodule (base `Z` only).
    pub fn torsion_submodule(&self) -> Result<SubmoduleData> {
        if !matches!(self.ring.base(), Base::Int) {
            return Err(Error::Precondition("torsion_submodule needs base Z".into()));
        }
        let n = self.ambient * self.ring.order();
        let rel_basis = self.relation_space().basis().clone();
        if rel_basis.rows() == 0 {
            return Ok(SubmoduleData::new(self, vec![]));
        }
        // saturation of the relation lattice: x with k*x in L for some k != 0
        let right_kernel = crate::exact::kernel_basis(&rel_basis.transpose(), &Base::Int);
        let saturation = if right_kernel.rows() == 0 {
            IntMat::identity(n)
        } else {
            crate::exact::kernel_basis(&right_kernel.transpose(), &Base::Int)
        };
        let mut gens = Vec::new();
        let rel_space = self.relation_space();
        for i in 0..saturation.rows() {
            if !rel_space.contains(saturation.row(i)) {
                gens.push(self.element_from_flat(saturation.row(i)));
            }
        }
        let sub = SubmoduleData::new(self, gens);
        Ok(sub.pruned())
    }

    /// The torsion-free quotient, with its R-action.
    pub fn tf_part(&self) -> Result<FpModule> {
        let tors = self.torsion_submodule()?;
        Ok(self.quotient_by(&tors))
    }

    pub fn quotient_by(&self, sub: &SubmoduleData) -> FpModule {
        assert!(sub.ambient() == self, "quotient by a submodule of a different module");
        let mut rows = self.relations.rows_vec();
        for g in sub.generators() {
            rows.push(g.vec.clone());
        }
        let relations = if rows.is_empty() {
            RMatrix::zero(&self.ring, 0, self.ambient)
        } else {
            engine::prune_relations(&RMatrix::from_rows(&self.ring, rows))
        };
        FpModule::new(&self.ring, self.ambient, relations)
    }
}

/// An element of an [`FpModule`], held as a coset representative in `R^b`.
#[derive(Clone)]
pub struct ModuleElement {
    module: FpModule,
    vec: Vec<RingElement>,
}

impl ModuleElement {
    pub fn module(&self) -> &FpModule {
        &self.module
    }

    pub fn vec(&self) -> &[RingElement] {
        &self.vec
    }

    pub fn flat(&self) -> Vec<BigInt> {
        engine::flatten_vec(&self.vec)
    }

    pub fn is_zero(&self) -> bool {
        self.module.relation_space().contains(&self.flat())
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        assert!(self.module == other.module, "element addition across modules");
        let vec = self.vec.iter().zip(&other.vec).map(|(a, b)| a.add(b)).collect();
        ModuleElement { module: self.module.clone(), vec }
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        assert!(self.module == other.module, "element subtraction across modules");
        let vec = self.vec.iter().zip(&other.vec).map(|(a, b)| a.sub(b)).collect();
        ModuleElement { module: self.module.clone(), vec }
    }

    pub fn scale(&self, c: &RingElement) -> ModuleElement {
        let vec = self.vec.iter().map(|a| a.mul(c)).collect();
        ModuleElement { module: self.module.clone(), vec }
    }

    pub fn equals(&self, other: &ModuleElement) -> bool {
        self.module == other.module && self.sub(other).is_zero()
    }
}

impl std::fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:?}]", self.vec)
    }
}

/// A finitely generated submodule of an ambient [`FpModule`], given by
/// generators (coset representatives in `R^b`).
#[derive(Clone)]
pub struct SubmoduleData {
    ambient: FpModule,
    generators: Vec<ModuleElement>,
}

impl SubmoduleData {
    pub fn new(ambient: &FpModule, generators: Vec<ModuleElement>) -> SubmoduleData {
        for g in &generators {
            assert!(g.module() == ambient, "generator from a different ambient module");
        }
        SubmoduleData { ambient: ambient.clone(), generators }
    }

    pub fn zero(ambient: &FpModule) -> SubmoduleData {
        SubmoduleData::new(ambient, vec![])
    }

    /// The whole ambient module as a submodule of itself.
    pub fn full(ambient: &FpModule) -> SubmoduleData {
        SubmoduleData::new(ambient, ambient.generators())
    }

    pub fn ambient(&self) -> &FpModule {
        &self.ambient
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn gen_matrix(&self) -> RMatrix {
        if self.generators.is_empty() {
            return RMatrix::zero(self.ambient.ring(), 0, self.ambient.ambient_rank());
        }
        RMatrix::from_rows(
            self.ambient.ring(),
            self.generators.iter().map(|g| g.vec.clone()).collect::<Vec<_>>(),
        )
    }

    /// Flattened span of the generators together with the ambient relations
    /// (i.e. the full preimage lattice of the submodule).
    pub fn span(&self) -> RowSpace {
        let rel = self.ambient.relation_space().clone();
        if self.generators.is_empty() {
            return rel;
        }
        rel.sum(&engine::r_span(&self.gen_matrix()))
    }

    pub fn contains_element(&self, e: &ModuleElement) -> bool {
        assert!(e.module() == &self.ambient);
        self.span().contains(&e.flat())
    }

    pub fn contains(&self, other: &SubmoduleData) -> bool {
        assert!(other.ambient == self.ambient, "containment across different ambients");
        let span = self.span();
        other.generators.iter().all(|g| span.contains(&g.flat()))
    }

    pub fn equals(&self, other: &SubmoduleData) -> bool {
        self.span() == other.span()
    }

    /// Remove generators already in the span of the remaining ones.
    pub fn pruned(&self) -> SubmoduleData {
        if self.generators.is_empty() {
            return self.clone();
        }
        let pruned =
            engine::prune_generators(&self.gen_matrix(), Some(self.ambient.relation_space()));
        let generators =
            (0..pruned.rows()).map(|i| self.ambient.element(pruned.row(i))).collect();
        SubmoduleData::new(&self.ambient, generators)
    }

    /// Present the submodule abstractly: ambient rank = number of
    /// generators, relations = their syzygies modulo the ambient relations.
    pub fn presented(&self) -> FpModule {
        let gens = self.gen_matrix();
        if gens.rows() == 0 {
            return FpModule::zero_module(self.ambient.ring());
        }
        let relations = engine::r_preimage_kernel(&gens, self.ambient.relations());
        FpModule::new(self.ambient.ring(), gens.rows(), relations)
    }

    /// The inclusion of [`Self::presented`] into the ambient module.
    pub fn inclusion(&self) -> ModuleMap {
        ModuleMap::new(&self.presented(), &self.ambient, self.gen_matrix())
            .expect("submodule inclusion is always well defined")
    }

    /// Sum of two submodules of the same ambient.
    pub fn sum(&self, other: &SubmoduleData) -> SubmoduleData {
        assert!(other.ambient == self.ambient);
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        SubmoduleData::new(&self.ambient, gens).pruned()
    }
}

impl std::fmt::Debug for SubmoduleData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Submodule({} generators of {:?})", self.generators.len(), self.ambient)
    }
}

/// An R-linear map between presented modules, given on ambient basis vectors
/// by a matrix (row convention: the image of `x` is `x * matrix`).
#[derive(Clone)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: RMatrix,
}

impl ModuleMap {
    /// Checked constructor: the matrix must carry every source relation into
    /// the target relation span.
    pub fn new(source: &FpModule, target: &FpModule, matrix: RMatrix) -> Result<ModuleMap> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch("module map across different rings".into()));
        }
        if matrix.rows() != source.ambient_rank() || matrix.cols() != target.ambient_rank() {
            return Err(Error::ShapeMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.ambient_rank(),
                target.ambient_rank()
            )));
        }
        if source.relations().rows() > 0 {
            let carried = source.relations().mul(&matrix);
            let tspace = target.relation_space();
            for i in 0..carried.rows() {
                if !tspace.contains(&engine::flatten_vec(&carried.row(i))) {
                    return Err(Error::Precondition(
                        "matrix does not carry source relations into target relations".into(),
                    ));
                }
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(module: &FpModule) -> ModuleMap {
        ModuleMap::new(module, module, RMatrix::identity(module.ring(), module.ambient_rank()))
            .expect("identity map is always well defined")
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> ModuleMap {
        ModuleMap::new(
            source,
            target,
            RMatrix::zero(source.ring(), source.ambient_rank(), target.ambient_rank()),
        )
        .expect("zero map is always well defined")
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn apply(&self, e: &ModuleElement) -> ModuleElement {
        assert!(e.module() == &self.source, "apply: element not in the source module");
        let ring = self.source.ring();
        let vec: Vec<RingElement> = (0..self.target.ambient_rank())
            .map(|j| {
                let mut acc = ring.zero();
                for (k, c) in e.vec.iter().enumerate() {
                    if !c.is_zero() {
                        acc = acc.add(&c.mul(self.matrix.at(k, j)));
                    }
                }
                acc
            })
            .collect();
        self.target.element(vec)
    }

    pub fn compose(&self, then: &ModuleMap) -> Result<ModuleMap> {
        if then.source != self.target {
            return Err(Error::RingMismatch("composition mismatch".into()));
        }
        ModuleMap::new(&self.source, &then.target, self.matrix.mul(&then.matrix))
    }

    /// Kernel as a submodule of the source.
    pub fn kernel_submodule(&self) -> SubmoduleData {
        let gens_matrix = engine::r_preimage_kernel(&self.matrix, self.target.relations());
        let generators =
            (0..gens_matrix.rows()).map(|i| self.source.element(gens_matrix.row(i))).collect();
        SubmoduleData::new(&self.source, generators).pruned()
    }

    /// Kernel presented as an abstract module.
    pub fn kernel(&self) -> FpModule {
        self.kernel_submodule().presented()
    }

    /// Image as a submodule of the target.
    pub fn image_submodule(&self) -> SubmoduleData {
        let generators =
            (0..self.matrix.rows()).map(|i| self.target.element(self.matrix.row(i))).collect();
        SubmoduleData::new(&self.target, generators).pruned()
    }

    pub fn image(&self) -> FpModule {
        self.image_submodule().presented()
    }

    pub fn cokernel(&self) -> FpModule {
        self.target.quotient_by(&self.image_submodule())
    }

    pub fn is_surjective(&self) -> bool {
        let full = RowSpace::full(
            self.source.ring().base(),
            self.target.ambient_rank() * self.source.ring().order(),
        );
        self.image_submodule().span() == full
    }

    pub fn is_injective(&self) -> bool {
        let rel = self.source.relation_space();
        self.kernel_submodule().generators().iter().all(|g| rel.contains(&g.flat()))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }
}

impl std::fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModuleMap({:?} -> {:?})", self.source, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::FiniteAbelianGroup;

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
    fn cardinality_and_rank() {
        let r = z();
        let m = cyclic_quotient(&r, 5);
        assert_eq!(m.cardinality(), Some(5.into()));
        assert!(FpModule::free(&r, 2).cardinality().is_none());
        assert_eq!(FpModule::free(&r, 2).base_rank(), 2);
        assert!(FpModule::zero_module(&r).is_zero());

        // coker([[2,0],[0,1]]) on Z^2 = Z/2
        let m2 = FpModule::new(
            &r,
            2,
            RMatrix::from_rows(&r, vec![vec![r.scalar(2), r.zero()], vec![r.zero(), r.one()]]),
        );
        assert_eq!(m2.cardinality(), Some(2.into()));
        let (free, tors) = m2.base_invariants();
        assert_eq!(free, 0);
        assert_eq!(tors, vec![BigInt::from(2)]);
    }

    #[test]
    fn torsion_of_mixed_module() {
        let r = z();
        // Z + Z/3
        let m = FpModule::free(&r, 1).direct_sum(&cyclic_quotient(&r, 3));
        let tors = m.torsion_submodule().unwrap();
        let presented = tors.presented();
        assert_eq!(presented.cardinality(), Some(3.into()));
        let tf = m.tf_part().unwrap();
        assert_eq!(tf.base_rank(), 1);
        assert_eq!(tf.cardinality(), None);
        // free module: zero torsion
        assert!(FpModule::free(&r, 3).torsion_submodule().unwrap().generators().is_empty());
        // coker(diag(2,1)): all torsion
        let m2 = FpModule::new(
            &r,
            2,
            RMatrix::from_rows(&r, vec![vec![r.scalar(2), r.zero()], vec![r.zero(), r.one()]]),
        );
        let t2 = m2.torsion_submodule().unwrap().presented();
        assert_eq!(t2.cardinality(), Some(2.into()));
    }

    #[test]
    fn kernel_image_cokernel() {
        let r = z();
        let free2 = FpModule::free(&r, 2);
        // psi = [[0,0],[0,2]] on Z^2: kernel = Z e1, image = 2Z e2
        let psi = ModuleMap::new(
            &free2,
            &free2,
            RMatrix::from_rows(&r, vec![vec![r.zero(), r.zero()], vec![r.zero(), r.scalar(2)]]),
        )
        .unwrap();
        let ker = psi.kernel();
        assert_eq!(ker.base_rank(), 1);
        let ker_sub = psi.kernel_submodule();
        assert!(ker_sub.contains_element(&free2.basis_element(0)));
        assert!(!ker_sub.contains_element(&free2.basis_element(1)));
        // cokernel = Z + Z/2
        let cok = psi.cokernel();
        assert_eq!(cok.base_rank(), 1);
        let (fr, tors) = cok.base_invariants();
        assert_eq!((fr, tors), (1, vec![BigInt::from(2)]));
        // cokernel of identity is zero; image of zero map is zero
        assert!(ModuleMap::identity(&free2).cokernel().is_zero());
        assert!(ModuleMap::zero(&free2, &free2).image().is_zero());
    }

    #[test]
    fn base_change_examples() {
        let r4 = GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(4));
        let r2 = zc2();
        let f = RingHom::new(&r4, &r2, vec![1]).unwrap();
        // free rank d stays free rank d
        let free3 = FpModule::free(&r4, 3);
        let bc = free3.base_change(&f).unwrap();
        assert_eq!(bc.ambient_rank(), 3);
        assert!(bc.relations().is_zero());
        // Z[C4]/(g-1) -> Z[C2]/(h-1)
        let m = FpModule::new(
            &r4,
            1,
            RMatrix::from_rows(&r4, vec![vec![r4.monomial(1).sub(&r4.one())]]),
        );
        let n = m.base_change(&f).unwrap();
        let expect = FpModule::new(
            &r2,
            1,
            RMatrix::from_rows(&r2, vec![vec![r2.monomial(1).sub(&r2.one())]]),
        );
        assert_eq!(n.relation_space(), expect.relation_space());
        // Z[C2]/(g-1) to base Z/2: cardinality 2
        let rm = GroupRing::new(Base::Mod(2.into()), FiniteAbelianGroup::cyclic(2));
        let to_mod = RingHom::new(&r2, &rm, vec![1]).unwrap();
        let mm = FpModule::new(
            &r2,
            1,
            RMatrix::from_rows(&r2, vec![vec![r2.monomial(1).sub(&r2.one())]]),
        );
        assert_eq!(mm.base_change(&to_mod).unwrap().cardinality(), Some(2.into()));
    }

    #[test]
    fn submodule_spans_and_quotients() {
        let r = zc2();
        let free1 = FpModule::free(&r, 1);
        let g = r.monomial(1);
        // augmentation ideal (g - 1) inside R
        let aug = SubmoduleData::new(&free1, vec![free1.element(vec![g.sub(&r.one())])]);
        assert!(!aug.contains_element(&free1.basis_element(0)));
        let q = free1.quotient_by(&aug);
        // R/(g-1) = Z, infinite
        assert_eq!(q.cardinality(), None);
        assert_eq!(q.base_rank(), 1);
        // presented submodule: one generator with syzygy (g+1)
        let p = aug.presented();
        assert_eq!(p.ambient_rank(), 1);
        assert_eq!(p.base_rank(), 1);
    }

    #[test]
    fn tensor_product_of_cyclics() {
        let r = z();
        // Z/2 tensor Z/3 = 0; Z/4 tensor Z/6 = Z/2
        let a = cyclic_quotient(&r, 2);
        let b = cyclic_quotient(&r, 3);
        assert!(a.tensor_product(&b).is_zero());
        let c = cyclic_quotient(&r, 4).tensor_product(&cyclic_quotient(&r, 6));
        assert_eq!(c.cardinality(), Some(2.into()));
    }

    #[test]
    fn map_validation_rejects_bad_matrices() {
        let r = z();
        let m2 = cyclic_quotient(&r, 2); // Z/2
        let free1 = FpModule::free(&r, 1);
        // Z/2 -> Z by 1 is not well defined (2 must map into 0)
        assert!(ModuleMap::new(&m2, &free1, RMatrix::identity(&r, 1)).is_err());
        // Z/2 -> Z/4 by 2 is fine
        let m4 = cyclic_quotient(&r, 4);
        assert!(ModuleMap::new(&m2, &m4, RMatrix::from_rows(&r, vec![vec![r.scalar(2)]])).is_ok());
    }
}
