//! i128 fast paths for Hermite and Smith elimination.
//!
//! All arithmetic is checked; any overflow aborts the fast path and the
//! caller falls back to the arbitrary-precision routines. Canonical outputs
//! (the Hermite form, the Smith diagonal) are unique, so results agree with
//! the BigInt path whenever the fast path succeeds.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::matrix::IntMat;

/// Dense i128 working matrix.
pub struct FastMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl FastMat {
    pub fn from_intmat(m: &IntMat) -> Option<FastMat> {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for e in m.row(i) {
                data.push(e.to_i128()?);
            }
        }
        Some(FastMat { rows: m.rows(), cols: m.cols(), data })
    }

    pub fn identity(n: usize) -> FastMat {
        let mut data = vec![0i128; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        FastMat { rows: n, cols: n, data }
    }

    pub fn to_intmat(&self) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |i, j| BigInt::from(self.data[i * self.cols + j]))
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn row_nnz(&self, i: usize) -> usize {
        (0..self.cols).filter(|&c| self.at(i, c) != 0).count()
    }

    /// rows (r, i) <- (s*r + t*i, -b*r + a*i); None on overflow.
    fn two_row(&mut self, r: usize, i: usize, s: i128, t: i128, nb: i128, a: i128) -> Option<()> {
        for c in 0..self.cols {
            let x = self.at(r, c);
            let y = self.at(i, c);
            let nr = s.checked_mul(x)?.checked_add(t.checked_mul(y)?)?;
            let ni = nb.checked_mul(x)?.checked_add(a.checked_mul(y)?)?;
            self.set(r, c, nr);
            self.set(i, c, ni);
        }
        Some(())
    }

    /// row_i -= q * row_r; None on overflow.
    fn sub_multiple(&mut self, i: usize, r: usize, q: i128) -> Option<()> {
        if q == 0 {
            return Some(());
        }
        for c in 0..self.cols {
            let x = self.at(r, c);
            if x != 0 {
                let v = self.at(i, c).checked_sub(q.checked_mul(x)?)?;
                self.set(i, c, v);
            }
        }
        Some(())
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = self.at(i, c);
            self.set(i, c, -v);
        }
    }
}

fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, x, y) = xgcd(b, a.rem_euclid(b));
    (g, y, x - (a.div_euclid(b)) * y)
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

pub struct FastHnf {
    pub h: FastMat,
    pub u: Option<FastMat>,
    pub pivots: Vec<usize>,
}

/// Row Hermite form with xgcd elimination; None on overflow.
pub fn hermite(m: &IntMat, want_u: bool) -> Option<FastHnf> {
    let mut h = FastMat::from_intmat(m)?;
    let mut u = want_u.then(|| FastMat::identity(h.rows));
    let (rows, cols) = (h.rows, h.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // pivot: smallest |value|, ties broken by row sparsity
        let mut best: Option<(usize, i128, usize)> = None;
        for i in r..rows {
            let v = h.at(i, c);
            if v == 0 {
                continue;
            }
            let a = v.unsigned_abs();
            let replace = match &best {
                None => true,
                Some((_, bv, bn)) => {
                    let ba = bv.unsigned_abs();
                    a < ba || (a == ba && h.row_nnz(i) < *bn)
                }
            };
            if replace {
                best = Some((i, v, h.row_nnz(i)));
            }
        }
        let Some((p, _, _)) = best else { continue };
        h.swap_rows(r, p);
        if let Some(u) = u.as_mut() {
            u.swap_rows(r, p);
        }
        for i in r + 1..rows {
            let y = h.at(i, c);
            if y == 0 {
                continue;
            }
            let x = h.at(r, c);
            if y % x == 0 {
                let q = y / x;
                h.sub_multiple(i, r, q)?;
                if let Some(u) = u.as_mut() {
                    u.sub_multiple(i, r, q)?;
                }
            } else {
                let (g, s, t) = xgcd(x, y);
                let (a, b) = (x / g, y / g);
                h.two_row(r, i, s, t, -b, a)?;
                if let Some(u) = u.as_mut() {
                    u.two_row(r, i, s, t, -b, a)?;
                }
            }
        }
        if h.at(r, c) < 0 {
            h.negate_row(r);
            if let Some(u) = u.as_mut() {
                u.negate_row(r);
            }
        }
        let piv = h.at(r, c);
        for i in 0..r {
            let q = div_floor(h.at(i, c), piv);
            if q != 0 {
                h.sub_multiple(i, r, q)?;
                if let Some(u) = u.as_mut() {
                    u.sub_multiple(i, r, q)?;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Some(FastHnf { h, u, pivots })
}

pub struct FastSnf {
    pub d: FastMat,
    pub u: Option<FastMat>,
    pub v: Option<FastMat>,
}

/// Smith form on i128; None on overflow. Mirrors the BigInt algorithm.
pub fn smith(m: &IntMat, want_transforms: bool) -> Option<FastSnf> {
    let mut d = FastMat::from_intmat(m)?;
    let mut u = want_transforms.then(|| FastMat::identity(d.rows));
    let mut vt = want_transforms.then(|| FastMat::identity(d.cols));
    // column operations on d become row operations on its transpose; keep a
    // transposed copy in lockstep to reuse the row machinery
    let n = d.rows.min(d.cols);
    for t in 0..n {
        // pivot with smallest |value| in trailing block
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                let v = d.at(i, j);
                if v == 0 {
                    continue;
                }
                if best.map_or(true, |(_, _, bv)| v.unsigned_abs() < bv.unsigned_abs()) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        d.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        swap_cols(&mut d, t, pj);
        if let Some(vt) = vt.as_mut() {
            vt.swap_rows(t, pj);
        }
        loop {
            // clear column t below the pivot
            for i in t + 1..d.rows {
                let y = d.at(i, t);
                if y == 0 {
                    continue;
                }
                let x = d.at(t, t);
                if y % x == 0 {
                    let q = y / x;
                    d.sub_multiple(i, t, q)?;
                    if let Some(u) = u.as_mut() {
                        u.sub_multiple(i, t, q)?;
                    }
                } else {
                    let (g, s, tt) = xgcd(x, y);
                    let (a, b) = (x / g, y / g);
                    d.two_row(t, i, s, tt, -b, a)?;
                    if let Some(u) = u.as_mut() {
                        u.two_row(t, i, s, tt, -b, a)?;
                    }
                }
            }
            // clear row t to the right of the pivot (column ops)
            let mut row_was_clean = true;
            for j in t + 1..d.cols {
                let y = d.at(t, j);
                if y == 0 {
                    continue;
                }
                row_was_clean = false;
                let x = d.at(t, t);
                if y % x == 0 {
                    let q = y / x;
                    sub_col_multiple(&mut d, j, t, q)?;
                    if let Some(vt) = vt.as_mut() {
                        vt.sub_multiple(j, t, q)?;
                    }
                } else {
                    let (g, s, tt) = xgcd(x, y);
                    let (a, b) = (x / g, y / g);
                    two_col(&mut d, t, j, s, tt, -b, a)?;
                    if let Some(vt) = vt.as_mut() {
                        vt.two_row(t, j, s, tt, -b, a)?;
                    }
                }
            }
            let col_clean = (t + 1..d.rows).all(|i| d.at(i, t) == 0);
            if row_was_clean && col_clean {
                break;
            }
        }
        if d.at(t, t) < 0 {
            d.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
    // divisibility chain
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = d.at(i, i);
            let b = d.at(i + 1, i + 1);
            if a == 0 && b != 0 {
                d.swap_rows(i, i + 1);
                swap_cols(&mut d, i, i + 1);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(i, i + 1);
                }
                if let Some(vt) = vt.as_mut() {
                    vt.swap_rows(i, i + 1);
                }
                fixed = false;
                continue;
            }
            if a == 0 || b == 0 || b % a == 0 {
                continue;
            }
            // gcd/lcm fold on the 2x2 diagonal block
            let (g, s, t2) = xgcd(a, b);
            let l = (a / g).checked_mul(b)?;
            // [[a,0],[0,b]] = [[s,t2],[-b/g,a/g]]^-1ish; apply:
            // rows: r_i <- s*r_i + t2*r_{i+1}; r_{i+1} <- -(b/g)*r_i + (a/g)*r_{i+1}
            d.two_row(i, i + 1, s, t2, -(b / g), a / g)?;
            if let Some(u) = u.as_mut() {
                u.two_row(i, i + 1, s, t2, -(b / g), a / g)?;
            }
            // now rows are [[sa, t2 b],[-ab/g, ab/g... ]]; clean with col ops
            // col_{i} <- col_i + col_{i+1}
            add_col(&mut d, i, i + 1)?;
            if let Some(vt) = vt.as_mut() {
                let one = 1i128;
                vt.sub_multiple(i, i + 1, -one)?;
            }
            // re-eliminate the 2x2 block
            loop {
                let x = d.at(i, i);
                let y = d.at(i + 1, i);
                if y != 0 {
                    let (gg, ss, tt) = xgcd(x, y);
                    d.two_row(i, i + 1, ss, tt, -(y / gg), x / gg)?;
                    if let Some(u) = u.as_mut() {
                        u.two_row(i, i + 1, ss, tt, -(y / gg), x / gg)?;
                    }
                }
                let x = d.at(i, i);
                let y = d.at(i, i + 1);
                if y != 0 {
                    let (gg, ss, tt) = xgcd(x, y);
                    two_col(&mut d, i, i + 1, ss, tt, -(y / gg), x / gg)?;
                    if let Some(vt) = vt.as_mut() {
                        vt.two_row(i, i + 1, ss, tt, -(y / gg), x / gg)?;
                    }
                }
                if d.at(i + 1, i) == 0 && d.at(i, i + 1) == 0 {
                    break;
                }
            }
            if d.at(i, i) < 0 {
                d.negate_row(i);
                if let Some(u) = u.as_mut() {
                    u.negate_row(i);
                }
            }
            if d.at(i + 1, i + 1) < 0 {
                d.negate_row(i + 1);
                if let Some(u) = u.as_mut() {
                    u.negate_row(i + 1);
                }
            }
            debug_assert_eq!(d.at(i, i), g.abs());
            debug_assert_eq!(d.at(i + 1, i + 1).abs(), l.abs());
            fixed = false;
        }
        if fixed {
            break;
        }
    }
    Some(FastSnf { d, u, v: vt.map(|m| transpose(&m)) })
}

fn swap_cols(m: &mut FastMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..m.rows {
        m.data.swap(r * m.cols + i, r * m.cols + j);
    }
}

fn sub_col_multiple(m: &mut FastMat, j: usize, k: usize, q: i128) -> Option<()> {
    if q == 0 {
        return Some(());
    }
    for r in 0..m.rows {
        let x = m.at(r, k);
        if x != 0 {
            let v = m.at(r, j).checked_sub(q.checked_mul(x)?)?;
            m.set(r, j, v);
        }
    }
    Some(())
}

fn add_col(m: &mut FastMat, j: usize, k: usize) -> Option<()> {
    for r in 0..m.rows {
        let v = m.at(r, j).checked_add(m.at(r, k))?;
        m.set(r, j, v);
    }
    Some(())
}

fn two_col(m: &mut FastMat, j: usize, k: usize, s: i128, t: i128, nb: i128, a: i128) -> Option<()> {
    for r in 0..m.rows {
        let x = m.at(r, j);
        let y = m.at(r, k);
        let nj = s.checked_mul(x)?.checked_add(t.checked_mul(y)?)?;
        let nk = nb.checked_mul(x)?.checked_add(a.checked_mul(y)?)?;
        m.set(r, j, nj);
        m.set(r, k, nk);
    }
    Some(())
}

fn transpose(m: &FastMat) -> FastMat {
    let mut out = FastMat { rows: m.cols, cols: m.rows, data: vec![0; m.rows * m.cols] };
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.set(j, i, m.at(i, j));
        }
    }
    out
}
