//! The duality pairing between the norm quotient and the ring modulo the
//! reflexive hull of the degree-two Fitting ideal.

use super::norms::{basic_norms, level_kernel_bidual, theta_projection};
use super::SyntheticComplex;
use crate::error::{Error, Result};
use crate::exact::Base;
use crate::fp_module::{ext1, r_solve, FpModule, IsoVerdict, RMatrix, SubmoduleData};
use crate::group_ring::RingElement;
use crate::ideals::{colon, fitting_ideal, reflexive_hull, FractionalIdeal, Ideal};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairingVerdict {
    Perfect,
    Degenerate(String),
}

/// A pairing value in `Q(R)/R`, represented as a numerator over a fixed
/// positive integer denominator with coefficients reduced into `[0, den)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingValue {
    pub numerator: Vec<BigInt>,
    pub denominator: BigInt,
}

impl PairingValue {
    pub fn is_zero(&self) -> bool {
        self.numerator.iter().all(|c| c.is_zero())
    }
}

/// Report of the pairing construction at the top level of a tower.
pub struct PairingReport {
    /// The generator of the basic norms (ambient wedge coordinates).
    pub eta: Vec<RingElement>,
    /// Denominator used for the dual functional values.
    pub exponent: BigInt,
    /// Pairing values of (bidual generator, 1) pairs, reduced into Q(R)/R.
    pub table: Vec<PairingValue>,
    /// Whether the right annihilator equals the reflexive hull of the
    /// degree-two Fitting ideal.
    pub right_kernel_matches: bool,
    /// Structural left-kernel consistency: a generator pairs integrally iff
    /// it lies in the basic norms.
    pub left_kernel_matches: bool,
    /// Certificate for the adjoint identification of the norm quotient.
    pub ext_verdict: IsoVerdict,
    pub verdict: PairingVerdict,
}

/// Construct the pairing at the top level; base `Z` instances with a
/// non-vanishing, non-zero-divisor projection generator only.
pub fn build_pairing(cx: &SyntheticComplex) -> Result<PairingReport> {
    let cfg = cx.config();
    if !matches!(cfg.base, Base::Int) {
        return Err(Error::Precondition("the pairing needs base Z".into()));
    }
    let top = cx.top_level();
    let data = cx.descend(top)?;
    let ring = data.ring.clone();
    let eta = theta_projection(cx, top)?;
    if eta.iter().all(|c| c.is_zero()) {
        return Err(Error::Precondition("basic norms vanish; pairing undefined".into()));
    }
    // the generator must be a non-zero-divisor multiple: its annihilator in
    // the ambient free wedge must vanish
    let eta_matrix = RMatrix::from_rows(&ring, vec![eta.clone()]);
    let ann = crate::fp_module::r_syzygies(&eta_matrix);
    let ann_nonzero = (0..ann.rows()).any(|i| ann.row(i).iter().any(|e| !e.is_zero()));
    if ann_nonzero {
        return Err(Error::Precondition(
            "basic norm generator is annihilated by a nonzero element".into(),
        ));
    }
    let kb = level_kernel_bidual(&data, cfg.r_t);
    let ns_presented = kb.submodule.presented();
    let gens = kb.submodule.gen_matrix();
    // quotient by the cyclic submodule and its exponent
    let bn = basic_norms(cx, top)?;
    let quotient = &bn.quotient;
    let Some(card) = quotient.cardinality() else {
        return Err(Error::Precondition(
            "norm quotient is infinite; the pairing hypotheses fail".into(),
        ));
    };
    let (_, torsion) = quotient.base_invariants();
    let exponent = torsion.last().cloned().unwrap_or_else(BigInt::one);
    let _ = card;
    // dual functional values: for each generator u, the unique q_u with
    // q_u * eta = u, held as x_u / exponent
    let mut q_values: Vec<Vec<BigInt>> = Vec::new();
    let mut left_kernel_matches = true;
    let eta_span = SubmoduleData::new(
        kb.submodule.ambient(),
        vec![kb.submodule.ambient().element(eta.clone())],
    );
    let mut table = Vec::new();
    for i in 0..gens.rows() {
        let u = gens.row(i);
        let scaled: Vec<RingElement> = u.iter().map(|c| c.scale(&exponent)).collect();
        let x = r_solve(&eta_matrix, &scaled).ok_or_else(|| {
            Error::HypothesisViolation(
                "norm generator is not a rational multiple of the basic generator".into(),
            )
        })?;
        let x_coeffs = x[0].coeffs().to_vec();
        // left-kernel consistency: q_u integral iff u lies in the basic norms
        let integral = x_coeffs.iter().all(|c| (c % &exponent).is_zero());
        let in_basic = eta_span.contains_element(&kb.submodule.ambient().element(u.clone()));
        if integral != in_basic {
            left_kernel_matches = false;
        }
        let reduced: Vec<BigInt> = x_coeffs.iter().map(|c| c.mod_floor(&exponent)).collect();
        table.push(PairingValue { numerator: reduced, denominator: exponent.clone() });
        q_values.push(x_coeffs);
    }
    // the fractional ideal of dual values and its colon against the ring
    let value_ideal = Ideal::new(
        &ring,
        q_values.iter().map(|x| ring.from_coeffs(x.clone())).collect(),
    );
    let value_frac = FractionalIdeal::new(value_ideal, exponent.clone())?;
    let unit = FractionalIdeal::from_ideal(Ideal::unit(&ring));
    let right_annihilator = colon(&unit, &value_frac)?;
    // the reflexive hull of the degree-two Fitting ideal
    let fitt = fitting_ideal(&data.h2, 0)?;
    let hull = reflexive_hull(&fitt)?;
    let right_kernel_matches = right_annihilator.equals(&hull);
    // adjoint identification: Ext^1 of the norm quotient vs R / hull
    let ext_module = ext1(quotient);
    let hull_quotient = if hull.denominator().is_one() {
        hull.numerator().quotient_module()
    } else {
        return Err(Error::HypothesisViolation(
            "reflexive hull of an integral ideal escaped the ring".into(),
        ));
    };
    // a witness is required only at small cardinality; beyond that the
    // invariant comparison is the honest verdict
    let small = ext_module.cardinality().map_or(false, |c| c <= BigInt::from(512));
    let budget = if small { crate::fp_module::WITNESS_SEARCH_BUDGET } else { 0 };
    let ext_verdict =
        crate::fp_module::iso_certificate_with_budget(&ext_module, &hull_quotient, budget);
    let verdict = if right_kernel_matches && left_kernel_matches {
        PairingVerdict::Perfect
    } else if !right_kernel_matches {
        PairingVerdict::Degenerate("right annihilator differs from the reflexive hull".into())
    } else {
        PairingVerdict::Degenerate("a generator pairs integrally outside the basic norms".into())
    };
    Ok(PairingReport {
        eta,
        exponent,
        table,
        right_kernel_matches,
        left_kernel_matches,
        ext_verdict,
        verdict,
    })
}

/// Pseudo-isomorphism shadow for the torsion comparison: the norm quotient
/// against the twist of `R / Fitt^0(H2)`; over base `Z` both must be finite
/// with Fitting chains equal up to finite discrepancy. Returns
/// (both finite, chains agree rationally, chains agree exactly).
pub fn pseudo_isomorphism_shadow(cx: &SyntheticComplex) -> Result<(bool, bool, bool)> {
    let cfg = cx.config();
    if !matches!(cfg.base, Base::Int) {
        return Err(Error::Precondition("the shadow needs base Z".into()));
    }
    let top = cx.top_level();
    let data = cx.descend(top)?;
    let bn = basic_norms(cx, top)?;
    let fitt = fitting_ideal(&data.h2, 0)?;
    // twist the tower action before comparison
    let twisted: Vec<RingElement> = fitt
        .generators()
        .iter()
        .map(|g| g.twist_circ().expect("tower rings declare their split"))
        .collect();
    let twisted_quotient = Ideal::new(&data.ring, twisted).quotient_module();
    let both_finite = bn.quotient.is_finite() && twisted_quotient.is_finite();
    let mut rational = true;
    let mut exact = true;
    if both_finite {
        let max_i = bn.quotient.ambient_rank().max(twisted_quotient.ambient_rank());
        for i in 0..=max_i.min(crate::ideals::FITTING_AMBIENT_CAP) {
            let a = fitting_ideal(&bn.quotient, i);
            let b = fitting_ideal(&twisted_quotient, i);
            let (Ok(a), Ok(b)) = (a, b) else { continue };
            if !a.equals(&b) {
                exact = false;
                // rational agreement: equal spans after tensoring with Q
                let ra = a.span();
                let rb = b.span();
                if ra.rank() != rb.rank() {
                    rational = false;
                } else {
                    // same rank; check mutual containment up to finite index
                    let sum = ra.sum(&rb);
                    if sum.rank() != ra.rank() {
                        rational = false;
                    }
                }
            }
        }
    }
    Ok((both_finite, rational, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::SyntheticComplex;

    #[test]
    fn minimal_instance_pairing_is_perfect() {
        let cx = SyntheticComplex::minimal();
        let report = build_pairing(&cx).unwrap();
        assert_eq!(report.verdict, PairingVerdict::Perfect);
        assert!(report.right_kernel_matches);
        assert!(report.left_kernel_matches);
        // eta = -2 e1, exponent 2
        assert_eq!(report.exponent, BigInt::from(2));
        // the pairing value of (e1, 1) is -1/2 mod Z: numerator 1 over 2
        assert_eq!(report.table.len(), 1);
        let v = &report.table[0];
        assert_eq!(v.denominator, BigInt::from(2));
        assert_eq!(v.numerator, vec![BigInt::one()]);
        assert!(!v.is_zero());
        // adjoint side is proven isomorphic (cardinality 2)
        assert!(report.ext_verdict.is_proven());
    }

    #[test]
    fn minimal_pseudo_isomorphism_shadow() {
        let cx = SyntheticComplex::minimal();
        let (finite, rational, exact) = pseudo_isomorphism_shadow(&cx).unwrap();
        assert!(finite);
        assert!(rational);
        assert!(exact);
    }
}
