use normslab::exact::{kernel_basis, Base, IntMat};
use num_bigint::BigInt;

struct Rng(u64);
impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13; self.0 ^= self.0 >> 7; self.0 ^= self.0 << 17; self.0
    }
    fn range(&mut self, n: usize) -> usize { (self.next() % n as u64) as usize }
    fn small(&mut self) -> i64 { (self.next() % 5) as i64 - 2 }
}

fn build(g: usize) -> IntMat {
    let d = 4usize;
    let r_t = 2usize;
    let n = d * g;
    let mut rng = Rng(0x9e3779b97f4a7c15);
    let mut psi = vec![vec![0i64; n]; n];
    for bi in r_t..d {
        for bj in r_t..d {
            for _ in 0..2 {
                let (c, v) = (rng.range(g), rng.small());
                for r in 0..g {
                    psi[bi * g + r][bj * g + (r + c) % g] += v;
                }
            }
        }
    }
    for _ in 0..6 {
        let bi = rng.range(d);
        let bj = if bi < r_t { rng.range(r_t) } else { rng.range(d) };
        if bi == bj { continue; }
        let shift = rng.range(g);
        let q: i64 = if rng.next() % 2 == 0 { 1 } else { -1 };
        for r in 0..g {
            for c in 0..n {
                let add = q * psi[bj * g + (r + shift) % g][c];
                psi[bi * g + r][c] += add;
            }
        }
        for rr in 0..n {
            for cc in 0..g {
                let sub = q * psi[rr][bi * g + cc];
                psi[rr][bj * g + (cc + shift) % g] -= sub;
            }
        }
    }
    let entries: Vec<i64> = psi.iter().flatten().cloned().collect();
    IntMat::from_fn(n, n, |i, j| BigInt::from(entries[i * n + j]))
}

fn main() {
    for g in [12, 27, 54, 100, 108] {
        let m = build(g);
        let t = std::time::Instant::now();
        let k = kernel_basis(&m, &Base::Int);
        let el = t.elapsed();
        assert!(k.mul(&m).is_zero());
        println!("g={g} n={}: kernel rank {} in {:?}, max|entry| {}", m.rows(), k.rows(), el, k.max_abs());
    }
}
