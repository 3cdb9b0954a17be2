//! Universal norms, norm-coherent sequences, the determinant-module
//! projection and basic norms over a truncated tower.

use super::{LevelData, SyntheticComplex};
use crate::error::{Error, Result};
use crate::exact::Base;
use crate::fp_module::{
    freeness_certificate, r_solve, FpModule, FreenessVerdict, ModuleMap, RMatrix, SubmoduleData,
};
use crate::group_ring::RingElement;
use crate::ideals::{fitting_ideal, Ideal};
use crate::multilinear::{bidual, kernel_bidual, BidualData, FreeWedge, KernelBidual, MultiIndex};
use num_bigint::BigInt;
use num_traits::Zero;

/// The kernel realisation of the degree-`r` bidual of the level cohomology
/// inside the free wedge of the ambient.
pub fn level_kernel_bidual(data: &LevelData, r: usize) -> KernelBidual {
    kernel_bidual(&data.ring, data.psi.rows(), &data.cut_functionals, r)
}

/// The norm-coherent sequences of rank `r`: the top-level kernel bidual.
pub struct NormSequences {
    pub degree: usize,
    pub top: KernelBidual,
    pub presented: FpModule,
}

pub fn norm_sequences(cx: &SyntheticComplex, r: usize) -> Result<NormSequences> {
    let data = cx.descend(cx.top_level())?;
    let top = level_kernel_bidual(&data, r);
    let presented = top.submodule.presented();
    Ok(NormSequences { degree: r, top, presented })
}

impl NormSequences {
    /// Base rank of the module (base Z only).
    pub fn base_rank(&self) -> usize {
        self.presented.base_rank()
    }

    /// Generators as ambient wedge coordinate rows.
    pub fn generator_rows(&self) -> RMatrix {
        self.top.submodule.gen_matrix()
    }
}

/// Push ambient wedge coordinates from level `m` to level `n` along the
/// transition homomorphism (coefficientwise on the shared wedge basis).
pub fn push_wedge_coords(
    cx: &SyntheticComplex,
    m: usize,
    n: usize,
    coords: &[RingElement],
) -> Vec<RingElement> {
    let f = cx.transition_between(m, n);
    coords.iter().map(|c| f.apply(c)).collect()
}

/// The image of the level-`m` kernel bidual inside the level-`n` one, as a
/// submodule of the level-`n` free wedge; the landing is asserted.
pub fn cores_image(
    cx: &SyntheticComplex,
    m: usize,
    n: usize,
    r: usize,
) -> Result<SubmoduleData> {
    if n > m {
        return Err(Error::Precondition("cores must descend the tower".into()));
    }
    let data_m = cx.descend(m)?;
    let kb_m = level_kernel_bidual(&data_m, r);
    let data_n = cx.descend(n)?;
    let kb_n = level_kernel_bidual(&data_n, r);
    let ambient = kb_n.submodule.ambient().clone();
    let mut gens = Vec::new();
    for g in kb_m.submodule.generators() {
        let pushed = push_wedge_coords(cx, m, n, g.vec());
        let elem = ambient.element(pushed);
        if !kb_n.submodule.contains_element(&elem) {
            return Err(Error::HypothesisViolation(format!(
                "transition image from level {m} escapes the level-{n} bidual"
            )));
        }
        gens.push(elem);
    }
    Ok(SubmoduleData::new(&ambient, gens).pruned())
}

/// Universal norms of rank `r` at level `n`: the decreasing chain of images
/// from the levels above, with its stabilisation flag.
pub struct UniversalNorms {
    pub degree: usize,
    pub level: usize,
    /// Image spans for m = n..=N, in order.
    pub chain: Vec<SubmoduleData>,
    /// The final image (the universal norms).
    pub norms: SubmoduleData,
    /// True iff the last two images of the chain coincide.
    pub stabilised: bool,
}

pub fn universal_norms(cx: &SyntheticComplex, r: usize, n: usize) -> Result<UniversalNorms> {
    let top = cx.top_level();
    if n > top {
        return Err(Error::Precondition("level beyond the truncation".into()));
    }
    let mut chain = Vec::new();
    for m in n..=top {
        chain.push(cores_image(cx, m, n, r)?);
    }
    // the chain is decreasing by functoriality; verified here
    for w in chain.windows(2) {
        if !w[0].contains(&w[1]) {
            return Err(Error::HypothesisViolation(
                "universal-norm chain is not decreasing".into(),
            ));
        }
    }
    let norms = chain.last().expect("chain is nonempty").clone();
    let stabilised = if chain.len() >= 2 {
        chain[chain.len() - 2].equals(&norms)
    } else {
        true
    };
    Ok(UniversalNorms { degree: r, level: n, chain, norms, stabilised })
}

/// The determinant-module projection at a level: the rank reduction of the
/// top wedge basis vector by the lower-column functionals, landing in the
/// kernel bidual (asserted).
pub fn theta_projection(cx: &SyntheticComplex, n: usize) -> Result<Vec<RingElement>> {
    let cfg = cx.config();
    let data = cx.descend(n)?;
    let d = cfg.d;
    let free_top = FreeWedge::new(&data.ring, d, d);
    let top_vector = free_top.basis_vector(&MultiIndex((0..d).collect()));
    let theta = free_top.rank_reduce(&data.cut_functionals, &top_vector)?;
    // landing assertion: the image lies in the degree-r_t kernel bidual
    let kb = level_kernel_bidual(&data, cfg.r_t);
    let elem = kb.submodule.ambient().element(theta.clone());
    if !kb.submodule.contains_element(&elem) {
        return Err(Error::HypothesisViolation(
            "determinant-module projection escapes the kernel bidual".into(),
        ));
    }
    Ok(theta)
}

/// Basic norms at a level: the cyclic submodule generated by the projection.
pub struct BasicNorms {
    pub level: usize,
    pub theta: Vec<RingElement>,
    /// The cyclic submodule of the free wedge generated by theta.
    pub submodule: SubmoduleData,
    /// Freeness certificate for the cyclic module (rank one expected).
    pub freeness: FreenessVerdict,
    /// Whether the projection vanished (degenerate instance).
    pub degenerate: bool,
    /// Quotient of the rank-r_t kernel bidual by the basic norms.
    pub quotient: FpModule,
    /// Base Z only: whether the quotient is base-torsion (finite).
    pub quotient_torsion: Option<bool>,
}

pub fn basic_norms(cx: &SyntheticComplex, n: usize) -> Result<BasicNorms> {
    let cfg = cx.config();
    let data = cx.descend(n)?;
    let theta = theta_projection(cx, n)?;
    let kb = level_kernel_bidual(&data, cfg.r_t);
    let ambient = kb.submodule.ambient().clone();
    let theta_elem = ambient.element(theta.clone());
    let degenerate = theta.iter().all(|c| c.is_zero());
    let submodule = if degenerate {
        SubmoduleData::zero(&ambient)
    } else {
        SubmoduleData::new(&ambient, vec![theta_elem.clone()])
    };
    let presented = submodule.presented();
    let freeness = if degenerate {
        FreenessVerdict::NotFree("projection vanished".into())
    } else {
        freeness_certificate(&presented, 1)
    };
    // quotient of the kernel bidual by the cyclic submodule
    let ns_presented = kb.submodule.presented();
    let quotient = if degenerate {
        ns_presented.clone()
    } else {
        let coords = r_solve(&kb.submodule.gen_matrix(), &theta).ok_or_else(|| {
            Error::HypothesisViolation("projection not in the span of the bidual generators".into())
        })?;
        let theta_in_gens = ns_presented.element(coords);
        ns_presented.quotient_by(&SubmoduleData::new(&ns_presented, vec![theta_in_gens]))
    };
    let quotient_torsion = matches!(cfg.base, Base::Int).then(|| quotient.base_rank() == 0);
    Ok(BasicNorms {
        level: n,
        theta,
        submodule,
        freeness,
        degenerate,
        quotient,
        quotient_torsion,
    })
}

/// Check that every wedge coordinate of the projection generator lies in the
/// zeroth Fitting ideal of the top-level degree-two cohomology; additionally
/// report whether the coordinate ideal equals that Fitting ideal.
pub fn eta_fitting_membership(cx: &SyntheticComplex) -> Result<(bool, bool)> {
    let top = cx.top_level();
    let data = cx.descend(top)?;
    let theta = theta_projection(cx, top)?;
    if theta.iter().all(|c| c.is_zero()) {
        return Ok((true, true)); // vacuous
    }
    let fitt = fitting_ideal(&data.h2, 0)?;
    let contained = theta.iter().all(|c| c.is_zero() || fitt.contains(c));
    let coord_ideal = Ideal::new(&data.ring, theta.clone());
    let equal = coord_ideal.equals(&fitt);
    Ok((contained, equal))
}

/// An explicit correspondence between the kernel realisation and the
/// abstract bidual of the level cohomology: the map sending an ambient
/// kernel element to the functional it induces.
pub struct Correspondence {
    pub abstract_bidual: BidualData,
    /// Map from the presented kernel submodule to the abstract presentation.
    pub to_abstract: ModuleMap,
}

/// Build the correspondence and report whether it is an isomorphism (the
/// exactness of the kernel description of the bidual).
pub fn bidual_ambient_correspondence(
    data: &LevelData,
    r: usize,
) -> Result<(KernelBidual, Correspondence)> {
    let kb = level_kernel_bidual(data, r);
    let abstract_bidual = bidual(&data.h0, r);
    let presented = kb.submodule.presented();
    let gens = kb.submodule.gen_matrix();
    let x_gens = data.h0_sub.gen_matrix();
    let mut rows = Vec::new();
    for i in 0..gens.rows() {
        let elem = kb.ambient_to_bidual(&abstract_bidual, &x_gens, &gens.row(i))?;
        let coords = abstract_bidual.coordinates(&elem).ok_or_else(|| {
            Error::HypothesisViolation(
                "ambient kernel element does not define a bidual functional".into(),
            )
        })?;
        rows.push(coords);
    }
    let matrix = if rows.is_empty() {
        RMatrix::zero(&data.ring, 0, abstract_bidual.presentation.ambient_rank())
    } else {
        RMatrix::from_rows(&data.ring, rows)
    };
    let to_abstract = ModuleMap::new(&presented, &abstract_bidual.presentation, matrix)?;
    Ok((kb, Correspondence { abstract_bidual, to_abstract }))
}

impl Correspondence {
    /// Whether the correspondence is a certified isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        self.to_abstract.is_isomorphism()
    }

    /// Pull abstract bidual coordinates back to an ambient wedge element of
    /// the kernel realisation (solving through the correspondence).
    pub fn abstract_to_ambient(
        &self,
        kb: &KernelBidual,
        coords: &[RingElement],
    ) -> Option<Vec<RingElement>> {
        // solve c * to_abstract = coords modulo the abstract relations
        let m = self.to_abstract.matrix();
        let rel = self.to_abstract.target().relations();
        let stacked = if rel.rows() == 0 {
            m.clone()
        } else {
            m.vstack(rel)
        };
        let sol = r_solve(&stacked, coords)?;
        let c = &sol[..m.rows()];
        // assemble the ambient element from the kernel generators
        let gens = kb.submodule.gen_matrix();
        let width = gens.cols();
        let ring = kb.free_wedge.ring();
        let mut out = vec![ring.zero(); width];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.add(&ci.mul(gens.at(i, j)));
            }
        }
        Some(out)
    }
}

/// Expected base rank of the rank-r norm-coherent sequences on an accepted
/// integral instance: |G_N| * C(r_t, r).
pub fn expected_ns_rank(cx: &SyntheticComplex, r: usize) -> usize {
    cx.top_ring().order() * super::binomial(cx.config().r_t, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::TowerConfig;

    #[test]
    fn minimal_theta_is_minus_two_e1() {
        let cx = SyntheticComplex::minimal();
        let theta = theta_projection(&cx, 0).unwrap();
        // single reduction: f(b1) b2 - f(b2) b1 with f = 2 e2^*: -2 e1
        let ring = cx.top_ring();
        assert_eq!(theta.len(), 2);
        assert_eq!(theta[0], ring.scalar(-2));
        assert!(theta[1].is_zero());
    }

    #[test]
    fn minimal_norm_sequences_and_basic_norms() {
        let cx = SyntheticComplex::minimal();
        let ns = norm_sequences(&cx, 1).unwrap();
        assert_eq!(ns.base_rank(), 1);
        assert_eq!(ns.base_rank(), expected_ns_rank(&cx, 1));
        let bn = basic_norms(&cx, 0).unwrap();
        assert!(!bn.degenerate);
        assert!(bn.freeness.is_basis());
        assert_eq!(bn.quotient.cardinality(), Some(2.into()));
        assert_eq!(bn.quotient_torsion, Some(true));
    }

    #[test]
    fn minimal_universal_norms_are_h0() {
        let cx = SyntheticComplex::minimal();
        let un = universal_norms(&cx, 1, 0).unwrap();
        assert!(un.stabilised);
        // degenerate single-level tower: the norms are all of the bidual
        let data = cx.descend(0).unwrap();
        let kb = level_kernel_bidual(&data, 1);
        assert!(un.norms.equals(&SubmoduleData::new(
            kb.submodule.ambient(),
            kb.submodule.generators().to_vec()
        )));
    }

    #[test]
    fn minimal_eta_membership() {
        let cx = SyntheticComplex::minimal();
        let (contained, equal) = eta_fitting_membership(&cx).unwrap();
        assert!(contained);
        assert!(equal);
    }

    #[test]
    fn correspondence_is_iso_on_minimal() {
        let cx = SyntheticComplex::minimal();
        let data = cx.descend(0).unwrap();
        let (kb, corr) = bidual_ambient_correspondence(&data, 1).unwrap();
        assert!(corr.is_isomorphism());
        // round trip a generator
        let gens = kb.submodule.gen_matrix();
        let elem = kb
            .ambient_to_bidual(&corr.abstract_bidual, &data.h0_sub.gen_matrix(), &gens.row(0))
            .unwrap();
        let coords = corr.abstract_bidual.coordinates(&elem).unwrap();
        let back = corr.abstract_to_ambient(&kb, &coords).unwrap();
        let ambient = kb.submodule.ambient();
        let diff_in = ambient
            .element(back)
            .sub(&ambient.element(gens.row(0)));
        assert!(diff_in.is_zero());
    }

    #[test]
    fn theta_codescent_compatibility_small_tower() {
        let cfg = TowerConfig {
            p: 3,
            top_level: 1,
            aux_invariants: vec![],
            base: crate::exact::Base::Int,
            d: 2,
            r_t: 1,
            seed: 5,
        };
        let cx = super::super::generate_complex(&cfg).unwrap();
        let theta_top = theta_projection(&cx, 1).unwrap();
        let theta_down = theta_projection(&cx, 0).unwrap();
        let pushed = push_wedge_coords(&cx, 1, 0, &theta_top);
        assert_eq!(pushed, theta_down);
    }
}
