use normslab::exact::Base;
use normslab::group_ring::{FiniteAbelianGroup, GroupRing};
use normslab::ideals::*;

fn main() {
    let r = GroupRing::new(Base::Int, FiniteAbelianGroup::cyclic(2));
    let g = r.monomial(1);
    let x = r.scalar(2).add(&g);
    println!("x = {:?}, nzd = {}", x, !x.is_zero_divisor());
    let unit = FractionalIdeal::from_ideal(Ideal::unit(&r));
    let inner = colon(&unit, &FractionalIdeal::from_ideal(Ideal::principal(&x))).unwrap();
    println!("inner (R : (x)) = {:?}", inner);
    let hull = reflexive_hull(&Ideal::principal(&x)).unwrap();
    println!("hull = {:?}", hull);
    println!("expected = {:?}", FractionalIdeal::from_ideal(Ideal::principal(&x)));
    println!("hull span basis = {:?}", hull.numerator().span().basis());
    println!("(x) span basis = {:?}", Ideal::principal(&x).span().basis());
}
