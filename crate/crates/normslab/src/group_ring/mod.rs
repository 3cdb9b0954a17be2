//! The group ring `B[A]` for a finite abelian group `A` over `B = Z` or
//! `Z/m`, together with ring homomorphisms and the two action-twisting
//! involutions.
//!
//! Elements are coefficient vectors indexed by group elements; products run
//! through a precomputed index-addition table. A `GroupRing` may declare a
//! product split of its group into a leading "tower part" and a trailing
//! auxiliary part; the `sharp` involution inverts the auxiliary part and the
//! `circ` involution inverts the tower part.

use crate::error::{Error, Result};
use crate::exact::{kernel_basis, Base, IntMat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// A finite abelian group presented by invariant factors (each >= 2; the
/// empty list is the trivial group). Elements are mixed-radix tuples,
/// enumerated lexicographically; the element index is the canonical handle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> FiniteAbelianGroup {
        assert!(factors.iter().all(|&f| f >= 2), "invariant factors must be >= 2");
        let order = factors.iter().product::<u64>() as usize;
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        FiniteAbelianGroup { factors, strides, order: order.max(1) }
    }

    pub fn trivial() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![])
    }

    pub fn cyclic(n: u64) -> FiniteAbelianGroup {
        if n <= 1 {
            FiniteAbelianGroup::trivial()
        } else {
            FiniteAbelianGroup::new(vec![n])
        }
    }

    /// Direct product, `self` factors first.
    pub fn product(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        FiniteAbelianGroup::new(f)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tuple_of(&self, index: usize) -> Vec<u64> {
        debug_assert!(index < self.order);
        let mut t = Vec::with_capacity(self.factors.len());
        let mut rest = index;
        for (i, &f) in self.factors.iter().enumerate() {
            t.push((rest / self.strides[i]) as u64 % f);
            rest %= self.strides[i];
        }
        t
    }

    pub fn index_of(&self, tuple: &[u64]) -> usize {
        debug_assert_eq!(tuple.len(), self.factors.len());
        tuple
            .iter()
            .zip(&self.factors)
            .zip(&self.strides)
            .map(|((&t, &f), &s)| (t % f) as usize * s)
            .sum()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ta, tb) = (self.tuple_of(a), self.tuple_of(b));
        let sum: Vec<u64> =
            ta.iter().zip(&tb).zip(&self.factors).map(|((&x, &y), &f)| (x + y) % f).collect();
        self.index_of(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let t = self.tuple_of(a);
        let n: Vec<u64> = t.iter().zip(&self.factors).map(|(&x, &f)| (f - x) % f).collect();
        self.index_of(&n)
    }

    /// Inversion applied only to the tuple components in `[lo, hi)`.
    fn neg_partial(&self, a: usize, lo: usize, hi: usize) -> usize {
        let t = self.tuple_of(a);
        let n: Vec<u64> = t
            .iter()
            .zip(&self.factors)
            .enumerate()
            .map(|(i, (&x, &f))| if i >= lo && i < hi { (f - x) % f } else { x })
            .collect();
        self.index_of(&n)
    }

    /// Index of the `i`-th generator (the element with 1 in component `i`).
    pub fn generator(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn num_generators(&self) -> usize {
        self.factors.len()
    }

    pub fn order_of(&self, a: usize) -> u64 {
        let t = self.tuple_of(a);
        t.iter()
            .zip(&self.factors)
            .map(|(&x, &f)| if x == 0 { 1 } else { f / num_integer::gcd(x, f) })
            .fold(1u64, num_integer::lcm)
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{:?}", self.factors)
    }
}

struct RingInner {
    base: Base,
    group: FiniteAbelianGroup,
    /// Number of leading invariant factors forming the declared tower part.
    tower_factors: Option<usize>,
    /// add_table[a * order + b] = index of a + b
    add_table: Vec<u32>,
    neg_table: Vec<u32>,
}

/// The ring `B[A]`; cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct GroupRing {
    inner: Arc<RingInner>,
}

impl PartialEq for GroupRing {
    fn eq(&self, other: &Self) -> bool {
        self.inner.base == other.inner.base
            && self.inner.group == other.inner.group
            && self.inner.tower_factors == other.inner.tower_factors
    }
}
impl Eq for GroupRing {}

impl fmt::Debug for GroupRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{:?}]", self.inner.base, self.inner.group)
    }
}

impl GroupRing {
    pub fn new(base: Base, group: FiniteAbelianGroup) -> GroupRing {
        Self::with_split(base, group, None)
    }

    /// Declare the leading `tower_factors` invariant factors as the tower
    /// part of a product decomposition; required by the twist involutions.
    pub fn with_split(
        base: Base,
        group: FiniteAbelianGroup,
        tower_factors: Option<usize>,
    ) -> GroupRing {
        if let Some(k) = tower_factors {
            assert!(k <= group.num_generators(), "split exceeds the number of factors");
        }
        let g = group.order();
        let mut add_table = vec![0u32; g * g];
        for a in 0..g {
            for b in 0..g {
                add_table[a * g + b] = group.add(a, b) as u32;
            }
        }
        let neg_table = (0..g).map(|a| group.neg(a) as u32).collect();
        GroupRing { inner: Arc::new(RingInner { base, group, tower_factors, add_table, neg_table }) }
    }

    pub fn base(&self) -> &Base {
        &self.inner.base
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.inner.group
    }

    pub fn order(&self) -> usize {
        self.inner.group.order()
    }

    pub fn tower_factors(&self) -> Option<usize> {
        self.inner.tower_factors
    }

    #[inline]
    pub fn add_indices(&self, a: usize, b: usize) -> usize {
        self.inner.add_table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn neg_index(&self, a: usize) -> usize {
        self.inner.neg_table[a] as usize
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.clone(), coeffs: vec![BigInt::zero(); self.order()] }
    }

    pub fn one(&self) -> RingElement {
        let mut coeffs = vec![BigInt::zero(); self.order()];
        coeffs[0] = BigInt::one();
        RingElement { ring: self.clone(), coeffs }
    }

    /// The group element with the given index, as a ring element.
    pub fn monomial(&self, index: usize) -> RingElement {
        let mut coeffs = vec![BigInt::zero(); self.order()];
        coeffs[index] = BigInt::one();
        RingElement { ring: self.clone(), coeffs }
    }

    pub fn from_coeffs(&self, coeffs: Vec<BigInt>) -> RingElement {
        assert_eq!(coeffs.len(), self.order(), "coefficient vector length mismatch");
        let coeffs = coeffs.iter().map(|c| self.inner.base.reduce(c)).collect();
        RingElement { ring: self.clone(), coeffs }
    }

    pub fn scalar(&self, c: i64) -> RingElement {
        let mut coeffs = vec![BigInt::zero(); self.order()];
        coeffs[0] = self.inner.base.reduce(&BigInt::from(c));
        RingElement { ring: self.clone(), coeffs }
    }

    /// The norm element: the sum of all elements of the subgroup generated
    /// by the given group element.
    pub fn norm_element(&self, index: usize) -> RingElement {
        let mut coeffs = vec![BigInt::zero(); self.order()];
        let mut cur = 0usize;
        loop {
            coeffs[cur] += BigInt::one();
            cur = self.add_indices(cur, index);
            if cur == 0 {
                break;
            }
        }
        self.from_coeffs(coeffs)
    }

    /// Generators `{h - 1}` of the relative augmentation ideal for the
    /// quotient of this ring's group by the subgroup the homomorphism kills.
    ///
    /// The homomorphism must be a group-level quotient map out of this ring.
    pub fn augmentation_ideal(&self, quotient: &RingHom) -> Result<Vec<RingElement>> {
        if quotient.source() != self {
            return Err(Error::NotAQuotient(
                "homomorphism does not start at this ring".into(),
            ));
        }
        let mut gens = Vec::new();
        for a in 1..self.order() {
            if quotient.group_image(a) == 0 {
                let x = self.monomial(a).sub(&self.one());
                gens.push(x);
            }
        }
        Ok(gens)
    }
}

/// An element of a [`GroupRing`]: a base-coefficient vector indexed by group
/// elements, always held in base-normalised form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: GroupRing,
    coeffs: Vec<BigInt>,
}

impl RingElement {
    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> &BigInt {
        &self.coeffs[index]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn assert_same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::OwnerMismatch("ring elements from different rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other).expect("add: owner mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.base().reduce(&(a + b)))
            .collect();
        RingElement { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other).expect("sub: owner mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.base().reduce(&(a - b)))
            .collect();
        RingElement { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> RingElement {
        let coeffs = self.coeffs.iter().map(|a| self.ring.base().reduce(&(-a))).collect();
        RingElement { ring: self.ring.clone(), coeffs }
    }

    /// Group convolution through the precomputed index-addition table.
    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other).expect("mul: owner mismatch");
        let g = self.ring.order();
        let mut coeffs = vec![BigInt::zero(); g];
        for a in 0..g {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..g {
                if other.coeffs[b].is_zero() {
                    continue;
                }
                let idx = self.ring.add_indices(a, b);
                coeffs[idx] += &self.coeffs[a] * &other.coeffs[b];
            }
        }
        self.ring.from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        let coeffs = self.coeffs.iter().map(|a| self.ring.base().reduce(&(a * c))).collect();
        RingElement { ring: self.ring.clone(), coeffs }
    }

    /// Matrix of multiplication by this element on the base module `B^|A|`,
    /// acting by the row convention: `flat(y * x) = flat(y) * matrix(x)`.
    pub fn regular_representation(&self) -> IntMat {
        let g = self.ring.order();
        let mut m = IntMat::zero(g, g);
        for i in 0..g {
            for j in 0..g {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let k = self.ring.add_indices(i, j);
                m[(i, k)] += &self.coeffs[j];
            }
        }
        self.ring.base().reduce_mat(&m)
    }

    /// True iff some nonzero element multiplies this one to zero, decided
    /// through the base-level kernel of the regular representation.
    pub fn is_zero_divisor(&self) -> bool {
        let m = self.regular_representation();
        kernel_basis(&m, self.ring.base()).rows() > 0
    }

    /// Determinant of the regular representation (the algebra norm down to
    /// the base). Over `Z` it is nonzero iff the element is a non-zero-divisor.
    pub fn algebra_norm(&self) -> BigInt {
        self.regular_representation().det()
    }

    /// Apply the inversion involution to the auxiliary (non-tower) part.
    pub fn twist_sharp(&self) -> Result<RingElement> {
        let Some(k) = self.ring.tower_factors() else {
            return Err(Error::SplitUndeclared);
        };
        let n = self.ring.group().num_generators();
        Ok(self.permute_by(|g| self.ring.group().neg_partial(g, k, n)))
    }

    /// Apply the inversion involution to the tower part.
    pub fn twist_circ(&self) -> Result<RingElement> {
        let Some(k) = self.ring.tower_factors() else {
            return Err(Error::SplitUndeclared);
        };
        Ok(self.permute_by(|g| self.ring.group().neg_partial(g, 0, k)))
    }

    /// Full inversion `g -> -g` on all of the group.
    pub fn twist_full(&self) -> RingElement {
        self.permute_by(|g| self.ring.neg_index(g))
    }

    fn permute_by(&self, f: impl Fn(usize) -> usize) -> RingElement {
        let g = self.ring.order();
        let mut coeffs = vec![BigInt::zero(); g];
        for a in 0..g {
            coeffs[f(a)] = self.coeffs[a].clone();
        }
        RingElement { ring: self.ring.clone(), coeffs }
    }

    /// Augmentation: the sum of all coefficients, in the base.
    pub fn augmentation(&self) -> BigInt {
        self.ring.base().reduce(&self.coeffs.iter().sum::<BigInt>())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*s{:?}", self.ring.group().tuple_of(i))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A unital ring homomorphism `B[A] -> B'[A']` determined by a group map on
/// generators and a base map (identity or reduction mod m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    source: GroupRing,
    target: GroupRing,
    /// Image (as a target group index) of each source group generator.
    gen_images: Vec<usize>,
    /// Image of every source group element, precomputed.
    images: Vec<usize>,
}

impl RingHom {
    pub fn new(source: &GroupRing, target: &GroupRing, gen_images: Vec<usize>) -> Result<RingHom> {
        if gen_images.len() != source.group().num_generators() {
            return Err(Error::ShapeMismatch(
                "one generator image per source invariant factor required".into(),
            ));
        }
        match (source.base(), target.base()) {
            (Base::Int, _) => {}
            (Base::Mod(m), Base::Mod(m2)) if (m % m2).is_zero() => {}
            _ => {
                return Err(Error::ModulusMismatch(
                    "base map must be identity, Z -> Z/m, or Z/m -> Z/m' with m' | m".into(),
                ))
            }
        }
        // multiplicativity: the image of each generator must have order
        // dividing the generator's order
        for (i, &img) in gen_images.iter().enumerate() {
            let ord = source.group().invariant_factors()[i];
            if ord % target.group().order_of(img) != 0 {
                return Err(Error::Precondition(format!(
                    "generator {i} of order {ord} maps to an element of order {}",
                    target.group().order_of(img)
                )));
            }
        }
        let images = (0..source.order())
            .map(|a| {
                let t = source.group().tuple_of(a);
                let mut acc = 0usize;
                for (i, &e) in t.iter().enumerate() {
                    for _ in 0..e {
                        acc = target.add_indices(acc, gen_images[i]);
                    }
                }
                acc
            })
            .collect();
        Ok(RingHom { source: source.clone(), target: target.clone(), gen_images, images })
    }

    pub fn identity(ring: &GroupRing) -> RingHom {
        let gens = (0..ring.group().num_generators()).map(|i| ring.group().generator(i)).collect();
        RingHom::new(ring, ring, gens).expect("identity is always a valid homomorphism")
    }

    pub fn source(&self) -> &GroupRing {
        &self.source
    }

    pub fn target(&self) -> &GroupRing {
        &self.target
    }

    pub fn group_image(&self, index: usize) -> usize {
        self.images[index]
    }

    pub fn apply(&self, x: &RingElement) -> RingElement {
        assert_eq!(x.ring(), &self.source, "apply: element not from the source ring");
        let mut coeffs = vec![BigInt::zero(); self.target.order()];
        for (a, c) in x.coeffs().iter().enumerate() {
            if !c.is_zero() {
                coeffs[self.images[a]] += c;
            }
        }
        self.target.from_coeffs(coeffs)
    }

    pub fn compose(&self, then: &RingHom) -> Result<RingHom> {
        if then.source != self.target {
            return Err(Error::RingMismatch("composition target/source mismatch".into()));
        }
        let gens = self.gen_images.iter().map(|&g| then.images[g]).collect();
        RingHom::new(&self.source, &then.target, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zc2() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(2))
    }

    fn zc4() -> GroupRing {
        GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(4))
    }

    #[test]
    fn one_plus_g_times_one_minus_g_is_zero() {
        let r = zc2();
        let g = r.monomial(1);
        let a = r.one().add(&g);
        let b = r.one().sub(&g);
        assert!(a.mul(&b).is_zero());
    }

    #[test]
    fn identity_and_monomial_products() {
        let r = zc4();
        let g = r.monomial(1);
        let a = r.from_coeffs(vec![3.into(), 1.into(), 0.into(), (-2).into()]);
        assert_eq!(r.one().mul(&a), a);
        assert_eq!(g.mul(&g), r.monomial(2));
    }

    #[test]
    fn zero_divisors() {
        let r = zc2();
        let g = r.monomial(1);
        assert!(r.one().add(&g).is_zero_divisor());
        assert!(!r.scalar(2).is_zero_divisor());
        let z4 = GroupRing::new(Base::Mod(4.into()), FiniteAbelianGroup::trivial());
        assert!(z4.scalar(2).is_zero_divisor());
        assert!(!z4.scalar(3).is_zero_divisor());
    }

    #[test]
    fn regular_representation_matches_products() {
        let r = zc4();
        let x = r.from_coeffs(vec![1.into(), 2.into(), 0.into(), (-1).into()]);
        let y = r.from_coeffs(vec![0.into(), 3.into(), 1.into(), 5.into()]);
        let m = x.regular_representation();
        let lhs = y.mul(&x);
        let flat = m.row_times(y.coeffs());
        assert_eq!(lhs.coeffs().to_vec(), flat);
    }

    #[test]
    fn augmentation_ideal_examples() {
        // full augmentation of Z[C2]: ideal (g - 1)
        let r = zc2();
        let triv = GroupRing::new(Base::Int, FiniteAbelianGroup::trivial());
        let quot = RingHom::new(&r, &triv, vec![0]).unwrap();
        let gens = r.augmentation_ideal(&quot).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0], r.monomial(1).sub(&r.one()));

        // trivial quotient: zero ideal
        let id = RingHom::identity(&r);
        assert!(r.augmentation_ideal(&id).unwrap().is_empty());

        // Z[C4] -> Z[C2]: kernel subgroup {1, g^2}, ideal (g^2 - 1)
        let r4 = zc4();
        let to_c2 = RingHom::new(&r4, &r, vec![1]).unwrap();
        let gens = r4.augmentation_ideal(&to_c2).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0], r4.monomial(2).sub(&r4.one()));
    }

    #[test]
    fn twists_are_involutions_on_the_declared_split() {
        // group = C4 (tower part) x C2 (auxiliary part)
        let g = FiniteAbelianGroup::new(vec![4, 2]);
        let r = GroupRing::with_split(Base::Int, g, Some(1));
        let gamma = r.monomial(r.group().generator(0));
        let aux = r.monomial(r.group().generator(1));
        let x = gamma.add(&aux).add(&r.scalar(7));
        let sharp = x.twist_sharp().unwrap();
        // sharp inverts only the auxiliary part; C2 inversion is the identity
        assert_eq!(sharp, x);
        let circ = x.twist_circ().unwrap();
        let gamma_inv = r.monomial(r.group().neg(r.group().generator(0)));
        assert_eq!(circ, gamma_inv.add(&aux).add(&r.scalar(7)));
        assert_eq!(circ.twist_circ().unwrap(), x);
        // no split declared: twist errors
        let r2 = zc2();
        assert!(r2.one().twist_sharp().is_err());
    }

    #[test]
    fn hom_preserves_products_and_composes() {
        let r4 = zc4();
        let r2 = zc2();
        let f = RingHom::new(&r4, &r2, vec![1]).unwrap();
        let x = r4.from_coeffs(vec![1.into(), 2.into(), 3.into(), 4.into()]);
        let y = r4.from_coeffs(vec![0.into(), 1.into(), 0.into(), (-1).into()]);
        assert_eq!(f.apply(&x.mul(&y)), f.apply(&x).mul(&f.apply(&y)));
        assert_eq!(f.apply(&r4.one()), r2.one());
        let triv = GroupRing::new(Base::Int, FiniteAbelianGroup::trivial());
        let g = RingHom::new(&r2, &triv, vec![0]).unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.apply(&x), g.apply(&f.apply(&x)));
    }

    #[test]
    fn invalid_hom_rejected() {
        let r2 = zc2();
        let r4 = zc4();
        // C2 generator cannot map to an order-4 element
        assert!(RingHom::new(&r2, &r4, vec![1]).is_err());
        // but can map to the order-2 element g^2
        assert!(RingHom::new(&r2, &r4, vec![2]).is_ok());
    }

    #[test]
    fn norm_element_kills_augmentation_generator() {
        let r = zc4();
        let nu = r.norm_element(1); // 1 + g + g^2 + g^3
        let aug = r.monomial(1).sub(&r.one());
        assert!(nu.mul(&aug).is_zero());
        assert_eq!(nu.augmentation(), BigInt::from(4));
    }
}
