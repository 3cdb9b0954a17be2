//! Exterior powers, exterior biduals, the natural comparison map, rank
//! reduction with the explicit shuffle-determinant formula, evaluation
//! pairings, and induced maps on biduals.
//!
//! Wedge bases are ordered lexicographically by multi-index; every sign in
//! the crate derives from the parity of the sorting permutation, one
//! convention shared by rank reduction, the determinant-module projection
//! and the tests.

use crate::error::{Error, Result};
use crate::fp_module::{
    r_solve, FpModule, ModuleElement, ModuleMap, RMatrix, SubmoduleData,
};
use crate::fp_module::{dual as module_dual, DualModule};
use crate::group_ring::{GroupRing, RingElement};
use crate::ideals::r_det;
use num_bigint::BigInt;
use std::collections::HashMap;

/// A strictly increasing index tuple within `0..b`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    /// All r-element multi-indices in `0..b`, lexicographic.
    pub fn all(b: usize, r: usize) -> Vec<MultiIndex> {
        if r > b {
            return vec![];
        }
        if r == 0 {
            return vec![MultiIndex(vec![])];
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            out.push(MultiIndex(idx.clone()));
            let mut i = r;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + b - r {
                    break;
                }
            }
            if idx[i] == i + b - r {
                return out;
            }
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Remove the entry at position `pos`.
    pub fn without_position(&self, pos: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(pos);
        MultiIndex(v)
    }

    /// Sign `(-1)^{#{j in self : j < k}}` of inserting `k`, with the sorted
    /// result; `None` if `k` already occurs.
    pub fn insert(&self, k: usize) -> Option<(i64, MultiIndex)> {
        if self.0.contains(&k) {
            return None;
        }
        let before = self.0.iter().filter(|&&j| j < k).count();
        let mut v = self.0.clone();
        v.insert(before, k);
        let sign = if before % 2 == 0 { 1 } else { -1 };
        Some((sign, MultiIndex(v)))
    }
}

/// Evaluate a row functional on an element row: `sum_i x_i * phi_i`.
pub fn eval_row(x: &[RingElement], phi: &[RingElement]) -> RingElement {
    assert_eq!(x.len(), phi.len(), "functional width mismatch");
    let ring = phi.first().expect("nonempty row").ring().clone();
    let mut acc = ring.zero();
    for (a, b) in x.iter().zip(phi) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(b));
        }
    }
    acc
}

/// The free exterior power of `R^ambient` in a fixed degree, with its
/// lexicographic basis. Elements are coordinate vectors over the basis.
#[derive(Clone, Debug)]
pub struct FreeWedge {
    ring: GroupRing,
    ambient: usize,
    degree: usize,
    indices: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
}

impl FreeWedge {
    pub fn new(ring: &GroupRing, ambient: usize, degree: usize) -> FreeWedge {
        let indices = MultiIndex::all(ambient, degree);
        let positions = indices.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        FreeWedge { ring: ring.clone(), ambient, degree, indices, positions }
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, idx: &MultiIndex) -> usize {
        self.positions[idx]
    }

    pub fn module(&self) -> FpModule {
        FpModule::free(&self.ring, self.rank())
    }

    pub fn zero(&self) -> Vec<RingElement> {
        vec![self.ring.zero(); self.rank()]
    }

    pub fn basis_vector(&self, idx: &MultiIndex) -> Vec<RingElement> {
        let mut v = self.zero();
        v[self.position(idx)] = self.ring.one();
        v
    }

    /// Wedge a list of ambient vectors into coordinates, fully expanded by
    /// multilinearity and antisymmetry.
    pub fn wedge_of_vectors(&self, vectors: &[Vec<RingElement>]) -> Vec<RingElement> {
        assert_eq!(vectors.len(), self.degree, "wrong number of wedge factors");
        let mut out = self.zero();
        if self.degree == 0 {
            out[0] = self.ring.one();
            return out;
        }
        for idx in &self.indices {
            // coefficient of e_idx: determinant of the selected coordinates
            let rows: Vec<Vec<RingElement>> = vectors
                .iter()
                .map(|v| idx.0.iter().map(|&c| v[c].clone()).collect())
                .collect();
            let d = r_det(&RMatrix::from_rows(&self.ring, rows));
            if !d.is_zero() {
                let pos = self.position(idx);
                out[pos] = out[pos].add(&d);
            }
        }
        out
    }

    /// Single-functional reduction: contract one slot.
    ///
    /// On a pure wedge the image is the alternating sum of the functional's
    /// values times the wedges with one factor omitted.
    pub fn reduce_once(&self, phi: &[RingElement], x: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(phi.len(), self.ambient, "functional width mismatch");
        assert!(self.degree >= 1, "cannot reduce degree 0");
        let target = FreeWedge::new(&self.ring, self.ambient, self.degree - 1);
        let mut out = target.zero();
        for (pos_i, idx) in self.indices.iter().enumerate() {
            let c = &x[pos_i];
            if c.is_zero() {
                continue;
            }
            for (k, &comp) in idx.0.iter().enumerate() {
                let val = &phi[comp];
                if val.is_zero() {
                    continue;
                }
                let rest = idx.without_position(k);
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let term = c.mul(val).scale(&BigInt::from(sign));
                let tpos = target.position(&rest);
                out[tpos] = out[tpos].add(&term);
            }
        }
        out
    }

    /// Rank reduction by a list of functionals via the explicit formula:
    /// the signed sum over shuffles of the `s x s` determinant of functional
    /// values times the complementary wedge.
    pub fn rank_reduce(
        &self,
        functionals: &[Vec<RingElement>],
        x: &[RingElement],
    ) -> Result<Vec<RingElement>> {
        let s = functionals.len();
        let r = self.degree;
        if s > r {
            return Err(Error::DegreeMismatch(format!(
                "cannot reduce a degree-{r} wedge by {s} functionals"
            )));
        }
        for phi in functionals {
            if phi.len() != self.ambient {
                return Err(Error::DegreeMismatch("functional width mismatch".into()));
            }
        }
        if s == 0 {
            return Ok(x.to_vec());
        }
        let target = FreeWedge::new(&self.ring, self.ambient, r - s);
        let mut out = target.zero();
        for (pos_i, idx) in self.indices.iter().enumerate() {
            let c = &x[pos_i];
            if c.is_zero() {
                continue;
            }
            // choose which s positions of idx feed the determinant
            for subset in MultiIndex::all(r, s) {
                let chosen: Vec<usize> = subset.0.iter().map(|&p| idx.0[p]).collect();
                let rest: Vec<usize> =
                    (0..r).filter(|p| !subset.0.contains(p)).map(|p| idx.0[p]).collect();
                // shuffle sign: move the chosen positions to the front
                let mut inversions = 0usize;
                for (j, &p) in subset.0.iter().enumerate() {
                    inversions += p - j;
                }
                let sgn = if inversions % 2 == 0 { 1i64 } else { -1 };
                let det_rows: Vec<Vec<RingElement>> = functionals
                    .iter()
                    .map(|phi| chosen.iter().map(|&c2| phi[c2].clone()).collect())
                    .collect();
                let det = r_det(&RMatrix::from_rows(&self.ring, det_rows));
                if det.is_zero() {
                    continue;
                }
                let term = c.mul(&det).scale(&BigInt::from(sgn));
                let tpos = target.position(&MultiIndex(rest));
                out[tpos] = out[tpos].add(&term);
            }
        }
        Ok(out)
    }

    /// Iterated single-functional reduction, applying the first functional
    /// first. Used as an independent route for the explicit formula.
    pub fn rank_reduce_iterated(
        &self,
        functionals: &[Vec<RingElement>],
        x: &[RingElement],
    ) -> Result<Vec<RingElement>> {
        if functionals.len() > self.degree {
            return Err(Error::DegreeMismatch("too many functionals".into()));
        }
        let mut cur = x.to_vec();
        let mut wedge = self.clone();
        for phi in functionals {
            cur = wedge.reduce_once(phi, &cur);
            wedge = FreeWedge::new(&self.ring, self.ambient, wedge.degree - 1);
        }
        Ok(cur)
    }
}

/// A presentation of the exterior power of a presented module.
pub struct WedgeData {
    pub source: FpModule,
    pub degree: usize,
    /// Presentation with one generator per multi-index of the source ambient.
    pub presentation: FpModule,
    pub indices: Vec<MultiIndex>,
}

impl WedgeData {
    /// The wedge of a list of source elements, as an element of the
    /// presentation (alternating and multilinear).
    pub fn symbol(&self, factors: &[ModuleElement]) -> ModuleElement {
        assert_eq!(factors.len(), self.degree, "wrong number of wedge factors");
        let free =
            FreeWedge::new(self.source.ring(), self.source.ambient_rank(), self.degree);
        let vectors: Vec<Vec<RingElement>> = factors.iter().map(|f| f.vec().to_vec()).collect();
        let coords = free.wedge_of_vectors(&vectors);
        self.presentation.element(coords)
    }
}

/// Standard presentation of the r-th exterior power: generators are the
/// multi-indices of the ambient basis; relations wedge each source relation
/// into the remaining slots. Degenerate degrees give the zero module.
pub fn wedge_power(module: &FpModule, r: usize) -> WedgeData {
    let ring = module.ring();
    let b = module.ambient_rank();
    if r == 0 {
        return WedgeData {
            source: module.clone(),
            degree: 0,
            presentation: FpModule::free(ring, 1),
            indices: vec![MultiIndex(vec![])],
        };
    }
    if r > b {
        return WedgeData {
            source: module.clone(),
            degree: r,
            presentation: FpModule::zero_module(ring),
            indices: vec![],
        };
    }
    let indices = MultiIndex::all(b, r);
    let pos: HashMap<MultiIndex, usize> =
        indices.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let rel = module.relations();
    let mut rows = Vec::new();
    for t in 0..rel.rows() {
        for j_idx in MultiIndex::all(b, r - 1) {
            let mut row = vec![ring.zero(); indices.len()];
            let mut nonzero = false;
            for k in 0..b {
                let coef = rel.at(t, k);
                if coef.is_zero() {
                    continue;
                }
                if let Some((sign, full)) = j_idx.insert(k) {
                    let term = coef.scale(&BigInt::from(sign));
                    let p = pos[&full];
                    row[p] = row[p].add(&term);
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let relations = if rows.is_empty() {
        RMatrix::zero(ring, 0, indices.len())
    } else {
        crate::fp_module::prune_generators(&RMatrix::from_rows(ring, rows), None)
    };
    WedgeData {
        source: module.clone(),
        degree: r,
        presentation: FpModule::new(ring, indices.len(), relations),
        indices,
    }
}

/// The r-th exterior bidual of a module: the dual of the r-th exterior
/// power of the dual, with elements realised as functionals.
pub struct BidualData {
    pub source: FpModule,
    pub degree: usize,
    /// `M^*` with its generator functionals.
    pub source_dual: DualModule,
    /// Presentation of the wedge of the dual.
    pub dual_wedge: WedgeData,
    /// Presentation of the bidual itself.
    pub presentation: FpModule,
    /// Functionals on the dual wedge realising bidual generators.
    pub realising: DualModule,
}

/// An element of an exterior bidual, stored extensionally by its values on
/// the generators of the wedge of the dual.
#[derive(Clone, Debug)]
pub struct BidualElement {
    pub degree: usize,
    /// One value per ambient generator of the dual-wedge presentation.
    pub values: Vec<RingElement>,
}

impl BidualElement {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

impl BidualData {
    /// Check well-definedness on relations and wrap the values.
    pub fn element(&self, values: Vec<RingElement>) -> Result<BidualElement> {
        if values.len() != self.dual_wedge.presentation.ambient_rank() {
            return Err(Error::ShapeMismatch("bidual element width mismatch".into()));
        }
        let rel = self.dual_wedge.presentation.relations();
        for ti in 0..rel.rows() {
            let mut acc = self.source.ring().zero();
            for (j, v) in values.iter().enumerate() {
                if !v.is_zero() {
                    acc = acc.add(&rel.at(ti, j).mul(v));
                }
            }
            if !acc.is_zero() {
                return Err(Error::Precondition(
                    "bidual element not well defined on the dual-wedge relations".into(),
                ));
            }
        }
        Ok(BidualElement { degree: self.degree, values })
    }

    /// Coordinates of a bidual element on the presentation generators.
    pub fn coordinates(&self, e: &BidualElement) -> Option<Vec<RingElement>> {
        if self.realising.functionals.rows() == 0 {
            return e.values.iter().all(|v| v.is_zero()).then_some(vec![]);
        }
        r_solve(&self.realising.functionals, &e.values)
    }

    /// The bidual element carried by given presentation coordinates.
    pub fn from_coordinates(&self, coords: &[RingElement]) -> BidualElement {
        let t = self.realising.functionals.rows();
        assert_eq!(coords.len(), t, "coordinate width mismatch");
        let width = self.dual_wedge.presentation.ambient_rank();
        let ring = self.source.ring();
        let mut values = vec![ring.zero(); width];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, v) in values.iter_mut().enumerate() {
                *v = v.add(&c.mul(self.realising.functionals.at(i, j)));
            }
        }
        BidualElement { degree: self.degree, values }
    }
}

/// Construct the r-th exterior bidual package of a module.
pub fn bidual(module: &FpModule, r: usize) -> BidualData {
    let ring = module.ring();
    if r == 0 {
        let free1 = FpModule::free(ring, 1);
        let d = module_dual(&free1);
        return BidualData {
            source: module.clone(),
            degree: 0,
            source_dual: module_dual(module),
            dual_wedge: WedgeData {
                source: free1.clone(),
                degree: 0,
                presentation: free1,
                indices: vec![MultiIndex(vec![])],
            },
            presentation: d.module.clone(),
            realising: d,
        };
    }
    let source_dual = module_dual(module);
    let dual_wedge = wedge_power(&source_dual.module, r);
    let realising = module_dual(&dual_wedge.presentation);
    BidualData {
        source: module.clone(),
        degree: r,
        source_dual,
        dual_wedge,
        presentation: realising.module.clone(),
        realising,
    }
}

/// Evaluate a dual-wedge element on a bidual element: the bidual element is
/// a functional, so this is application (bilinear in both arguments).
pub fn eval_pair(f_coords: &[RingElement], a: &BidualElement) -> Result<RingElement> {
    if f_coords.len() != a.values.len() {
        return Err(Error::DegreeMismatch(
            "dual-wedge coordinates do not match the bidual element".into(),
        ));
    }
    let Some(first) = a.values.first().or_else(|| f_coords.first()) else {
        return Err(Error::DegreeMismatch("empty bidual element".into()));
    };
    let ring = first.ring().clone();
    let mut acc = ring.zero();
    for (c, v) in f_coords.iter().zip(&a.values) {
        if !c.is_zero() && !v.is_zero() {
            acc = acc.add(&c.mul(v));
        }
    }
    Ok(acc)
}

/// The natural map from the exterior power to the exterior bidual,
/// `m -> (f -> f(m))`. For free modules it is an isomorphism.
pub fn xi_map(module: &FpModule, r: usize) -> Result<ModuleMap> {
    let ring = module.ring();
    let wedge = wedge_power(module, r);
    let bid = bidual(module, r);
    if r == 0 {
        return ModuleMap::new(&wedge.presentation, &bid.presentation, RMatrix::identity(ring, 1));
    }
    let b = module.ambient_rank();
    let free = FreeWedge::new(ring, b, r);
    let dual_gens = &bid.source_dual.functionals; // t x b
    let mut matrix_rows = Vec::new();
    for idx in &wedge.indices {
        // value of the natural image of e_idx on each dual-wedge generator
        let x = free.basis_vector(idx);
        let mut values = Vec::with_capacity(bid.dual_wedge.indices.len());
        for j_idx in &bid.dual_wedge.indices {
            let fs: Vec<Vec<RingElement>> = j_idx.0.iter().map(|&j| dual_gens.row(j)).collect();
            let full = free.rank_reduce(&fs, &x)?;
            values.push(full.first().cloned().unwrap_or_else(|| ring.zero()));
        }
        let elem = bid.element(values)?;
        let coords = bid.coordinates(&elem).ok_or_else(|| {
            Error::Precondition("natural map value escapes the bidual presentation".into())
        })?;
        matrix_rows.push(coords);
    }
    let matrix = if matrix_rows.is_empty() {
        RMatrix::zero(ring, 0, bid.presentation.ambient_rank())
    } else {
        RMatrix::from_rows(ring, matrix_rows)
    };
    ModuleMap::new(&wedge.presentation, &bid.presentation, matrix)
}

/// The kernel realisation of an exterior bidual inside an ambient free
/// wedge: for a submodule `X = ker(R^d -> R^s)` cut out by functionals, the
/// bidual of `X` sits inside the free wedge as the joint kernel of the
/// single-functional contractions.
pub struct KernelBidual {
    pub free_wedge: FreeWedge,
    pub functionals: Vec<Vec<RingElement>>,
    /// The kernel of the contraction map, as a submodule of the free wedge.
    pub submodule: SubmoduleData,
}

/// Build the kernel realisation `ker( /\^r R^d -> (+) /\^{r-1} R^d )` for
/// the given cutting functionals.
pub fn kernel_bidual(
    ring: &GroupRing,
    ambient: usize,
    functionals: &[Vec<RingElement>],
    r: usize,
) -> KernelBidual {
    let free_wedge = FreeWedge::new(ring, ambient, r);
    let s = functionals.len();
    let wedge_module = free_wedge.module();
    if r == 0 || s == 0 {
        return KernelBidual {
            free_wedge,
            functionals: functionals.to_vec(),
            submodule: SubmoduleData::full(&wedge_module),
        };
    }
    let lower = FreeWedge::new(ring, ambient, r - 1);
    // matrix of the contraction map into the direct sum of s lower wedges
    let cols = s * lower.rank();
    let mut rows = Vec::new();
    for idx in free_wedge.indices() {
        let x = free_wedge.basis_vector(idx);
        let mut row = vec![ring.zero(); cols];
        for (i, phi) in functionals.iter().enumerate() {
            let image = free_wedge.reduce_once(phi, &x);
            for (j, v) in image.iter().enumerate() {
                if !v.is_zero() {
                    row[i * lower.rank() + j] = v.clone();
                }
            }
        }
        rows.push(row);
    }
    let matrix = RMatrix::from_rows(ring, rows);
    let target = FpModule::free(ring, cols);
    let map = ModuleMap::new(&wedge_module, &target, matrix)
        .expect("contraction map is well defined on free modules");
    let submodule = map.kernel_submodule();
    KernelBidual { free_wedge, functionals: functionals.to_vec(), submodule }
}

impl KernelBidual {
    /// Lift functionals on the cut submodule to ambient functionals and
    /// contract: realise an ambient kernel element as an abstract bidual
    /// element of the submodule. `x_gens` are the generators of the
    /// submodule inside `R^d`.
    pub fn ambient_to_bidual(
        &self,
        bid: &BidualData,
        x_gens: &RMatrix,
        k: &[RingElement],
    ) -> Result<BidualElement> {
        let ring = self.free_wedge.ring().clone();
        // lift each generator functional of the submodule dual through the
        // inclusion into the ambient free module
        let mut lifts: Vec<Vec<RingElement>> = Vec::new();
        for i in 0..bid.source_dual.functionals.rows() {
            let phi = bid.source_dual.functionals.row(i); // values on generators
            // find psi on R^d with psi(gen_t) = phi_t for all t
            let lifted = r_solve(&x_gens.transpose(), &phi).ok_or_else(|| {
                Error::HypothesisViolation(
                    "submodule functional does not lift to the ambient free module".into(),
                )
            })?;
            lifts.push(lifted);
        }
        let mut values = Vec::with_capacity(bid.dual_wedge.indices.len());
        for j_idx in &bid.dual_wedge.indices {
            let fs: Vec<Vec<RingElement>> = j_idx.0.iter().map(|&j| lifts[j].clone()).collect();
            let full = self.free_wedge.rank_reduce(&fs, k)?;
            values.push(full.first().cloned().unwrap_or_else(|| ring.zero()));
        }
        bid.element(values)
    }
}

/// Push a bidual element along a module map by dualising twice: the
/// functional is precomposed with the wedge of the dual of the map.
pub fn bidual_induced_map(
    f: &ModuleMap,
    r: usize,
    source_bid: &BidualData,
    target_bid: &BidualData,
) -> Result<ModuleMap> {
    let ring = f.source().ring().clone();
    // dual of f: express each target-dual generator composed with f in terms
    // of the source-dual generators
    let tgt_dual = &target_bid.source_dual;
    let src_dual = &source_bid.source_dual;
    let mut fstar_rows = Vec::new();
    for i in 0..tgt_dual.functionals.rows() {
        let phi = tgt_dual.functionals.row(i);
        // (phi o f)(e_k) = phi(f(e_k)): a functional on the source ambient
        let composed: Vec<RingElement> = (0..f.source().ambient_rank())
            .map(|k| eval_row(&f.matrix().row(k), &phi))
            .collect();
        let coords = r_solve(&src_dual.functionals, &composed).ok_or_else(|| {
            Error::HypothesisViolation("dual of the map does not land in the source dual".into())
        })?;
        fstar_rows.push(coords);
    }
    let fstar = if fstar_rows.is_empty() {
        RMatrix::zero(&ring, 0, src_dual.functionals.rows())
    } else {
        RMatrix::from_rows(&ring, fstar_rows)
    };
    // the induced functional: b(psi_J) = a( /\^r f^* (psi_J) )
    let src_free = FreeWedge::new(&ring, src_dual.functionals.rows(), r);
    let mut matrix_rows = Vec::new();
    for i in 0..source_bid.presentation.ambient_rank() {
        let mut coords = vec![ring.zero(); source_bid.presentation.ambient_rank()];
        coords[i] = ring.one();
        let a = source_bid.from_coordinates(&coords);
        let mut values = Vec::new();
        for j_idx in &target_bid.dual_wedge.indices {
            let factors: Vec<Vec<RingElement>> = j_idx.0.iter().map(|&j| fstar.row(j)).collect();
            let expanded = src_free.wedge_of_vectors(&factors);
            let mut acc = ring.zero();
            for (pos, c) in expanded.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&c.mul(&a.values[pos]));
                }
            }
            values.push(acc);
        }
        let elem = target_bid.element(values)?;
        let tcoords = target_bid.coordinates(&elem).ok_or_else(|| {
            Error::HypothesisViolation("induced bidual image escapes the target bidual".into())
        })?;
        matrix_rows.push(tcoords);
    }
    let matrix = if matrix_rows.is_empty() {
        RMatrix::zero(&ring, 0, target_bid.presentation.ambient_rank())
    } else {
        RMatrix::from_rows(&ring, matrix_rows)
    };
    ModuleMap::new(&source_bid.presentation, &target_bid.presentation, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Base;
    use crate::group_ring::FiniteAbelianGroup;

    fn z() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::trivial())
    }

    fn zc2() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(2))
    }

    #[test]
    fn multiindex_enumeration_is_lexicographic() {
        let all = MultiIndex::all(4, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], MultiIndex(vec![0, 1]));
        assert_eq!(all[5], MultiIndex(vec![2, 3]));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn wedge_of_free_module() {
        let r = z();
        let m = FpModule::free(&r, 3);
        let w = wedge_power(&m, 2);
        assert_eq!(w.presentation.ambient_rank(), 3);
        assert!(w.presentation.relations().is_zero());
        // r = 0 gives the ring
        let w0 = wedge_power(&m, 0);
        assert_eq!(w0.presentation.ambient_rank(), 1);
        // degenerate degree gives zero
        assert!(wedge_power(&m, 4).presentation.is_zero());
    }

    #[test]
    fn wedge_of_mixed_module() {
        // M = Z/2 + Z over Z: /\^2 M = Z/2
        let r = z();
        let m =
            FpModule::new(&r, 2, RMatrix::from_rows(&r, vec![vec![r.scalar(2), r.zero()]]));
        let w = wedge_power(&m, 2);
        assert_eq!(w.presentation.cardinality(), Some(2.into()));
    }

    #[test]
    fn wedge_symbol_is_alternating() {
        let r = zc2();
        let m = FpModule::free(&r, 3);
        let w = wedge_power(&m, 2);
        let a = m.basis_element(0);
        let b = m.basis_element(2);
        let ab = w.symbol(&[a.clone(), b.clone()]);
        let ba = w.symbol(&[b, a.clone()]);
        assert!(ab.add(&ba).is_zero());
        assert!(w.symbol(&[a.clone(), a]).is_zero());
    }

    #[test]
    fn rank_reduce_single_matches_formula() {
        // r=2, s=1: f, m1^m2 -> f(m1) m2 - f(m2) m1
        let r = z();
        let free = FreeWedge::new(&r, 2, 2);
        let f = vec![r.scalar(0), r.scalar(2)]; // 2 * e2^*
        let x = free.basis_vector(&MultiIndex(vec![0, 1]));
        let red = free.rank_reduce(&[f.clone()], &x).unwrap();
        // expect f(e0) e1 - f(e1) e0 = -2 e0
        assert_eq!(red[0], r.scalar(-2));
        assert_eq!(red[1], r.scalar(0));
        // agreement with the iterated route
        let red2 = free.rank_reduce_iterated(&[f], &x).unwrap();
        assert_eq!(red, red2);
    }

    #[test]
    fn rank_reduce_full_contraction_is_det() {
        let r = z();
        let free = FreeWedge::new(&r, 2, 2);
        let f1 = vec![r.one(), r.zero()];
        let f2 = vec![r.zero(), r.one()];
        let x = free.basis_vector(&MultiIndex(vec![0, 1]));
        let v = free.rank_reduce(&[f1.clone(), f2.clone()], &x).unwrap();
        assert_eq!(v[0], r.one());
        // r = s = 1: f(m)
        let free1 = FreeWedge::new(&r, 2, 1);
        let m = vec![r.scalar(3), r.scalar(5)];
        let v1 = free1.rank_reduce(&[vec![r.scalar(2), r.zero()]], &m).unwrap();
        assert_eq!(v1[0], r.scalar(6));
    }

    #[test]
    fn rank_reduce_matches_iterated_on_random_shapes() {
        let ring = z();
        let free = FreeWedge::new(&ring, 3, 2);
        let f1 = vec![ring.scalar(1), ring.scalar(2), ring.zero()];
        let f2 = vec![ring.zero(), ring.scalar(1), ring.scalar(3)];
        for idx in free.indices() {
            let x = free.basis_vector(idx);
            let direct = free.rank_reduce(&[f1.clone(), f2.clone()], &x).unwrap();
            let iterated = free.rank_reduce_iterated(&[f1.clone(), f2.clone()], &x).unwrap();
            assert_eq!(direct, iterated, "mismatch on {idx:?}");
        }
    }

    #[test]
    fn bidual_of_free_is_free() {
        let r = zc2();
        for (d, rr, expect) in [(3usize, 2usize, 3usize), (2, 1, 2), (2, 2, 1)] {
            let m = FpModule::free(&r, d);
            let b = bidual(&m, rr);
            assert_eq!(b.presentation.ambient_rank(), expect, "binom({d},{rr})");
            assert!(b.presentation.relations().is_zero());
        }
    }

    #[test]
    fn bidual_kills_torsion() {
        // M = Z + Z/5 over Z: first bidual = Z
        let r = z();
        let m =
            FpModule::new(&r, 2, RMatrix::from_rows(&r, vec![vec![r.zero(), r.scalar(5)]]));
        let b = bidual(&m, 1);
        assert_eq!(b.presentation.base_rank(), 1);
        assert!(b.presentation.torsion_submodule().unwrap().generators().is_empty());
    }

    #[test]
    fn bidual_of_zero_module() {
        let r = z();
        let zero = FpModule::zero_module(&r);
        // degree 0 gives R
        assert_eq!(bidual(&zero, 0).presentation.base_rank(), 1);
        // degree >= 1 gives 0
        assert!(bidual(&zero, 1).presentation.is_zero());
    }

    #[test]
    fn xi_iso_for_free_and_degenerate_for_torsion() {
        let r = zc2();
        let m = FpModule::free(&r, 2);
        let xi = xi_map(&m, 2).unwrap();
        assert!(xi.is_isomorphism());
        let xi1 = xi_map(&m, 1).unwrap();
        assert!(xi1.is_isomorphism());
        // M = Z/2 + Z over Z, r = 1: the natural map kills torsion
        let rz = z();
        let mt =
            FpModule::new(&rz, 2, RMatrix::from_rows(&rz, vec![vec![rz.scalar(2), rz.zero()]]));
        let xi_t = xi_map(&mt, 1).unwrap();
        assert!(!xi_t.is_injective());
        // r = 0: identity on R
        let xi0 = xi_map(&mt, 0).unwrap();
        assert!(xi0.is_isomorphism());
    }

    #[test]
    fn eval_pair_matches_full_reduction() {
        let r = zc2();
        let m = FpModule::free(&r, 2);
        let bid = bidual(&m, 2);
        let xi = xi_map(&m, 2).unwrap();
        let w = wedge_power(&m, 2);
        let top = w.presentation.basis_element(0);
        let img = xi.apply(&top);
        let a = bid.from_coordinates(img.vec());
        // evaluating the generator dual-wedge functional matches the full
        // contraction determinant
        let mut f_coords = vec![r.zero(); bid.dual_wedge.presentation.ambient_rank()];
        f_coords[0] = r.one();
        let v = eval_pair(&f_coords, &a).unwrap();
        let free = FreeWedge::new(&r, 2, 2);
        let f1 = bid.source_dual.functionals.row(0);
        let f2 = bid.source_dual.functionals.row(1);
        let direct =
            free.rank_reduce(&[f1, f2], &free.basis_vector(&MultiIndex(vec![0, 1]))).unwrap();
        assert_eq!(v, direct[0]);
    }

    #[test]
    fn kernel_bidual_of_block_functional() {
        // d = 2, functionals = {(0, 2)}: kernel of the single contraction on
        // degree-1 wedges over Z is Z e0
        let r = z();
        let kb = kernel_bidual(&r, 2, &[vec![r.zero(), r.scalar(2)]], 1);
        let gens = kb.submodule.generators();
        assert_eq!(gens.len(), 1);
        let e0 = kb.submodule.ambient().basis_element(0);
        assert!(kb.submodule.contains_element(&e0));
    }

    #[test]
    fn induced_map_identity() {
        let r = zc2();
        let m = FpModule::free(&r, 2);
        let bid = bidual(&m, 1);
        let id = ModuleMap::identity(&m);
        let ind = bidual_induced_map(&id, 1, &bid, &bid).unwrap();
        assert!(ind.is_isomorphism());
    }
}
