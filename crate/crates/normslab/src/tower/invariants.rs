//! Exact growth-law fitting for module orders along a tower.

use crate::error::{Error, Result};

/// An exact fit `e_n = mu * p^n + lambda * n + nu` valid for `n >= fit_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaFit {
    pub mu: u64,
    pub lambda: u64,
    pub nu: i64,
    pub fit_from: usize,
}

/// Find the least starting level and nonnegative integers `mu`, `lambda`
/// (and an integer `nu`) with `e_n = mu p^n + lambda n + nu` exactly for all
/// levels from there on. Reports failure rather than guessing when no exact
/// fit exists.
pub fn estimate_iwasawa_invariants(orders: &[u64], p: u64) -> Result<IwasawaFit> {
    if orders.len() < 3 {
        return Err(Error::Precondition(
            "growth fitting needs at least 3 consecutive levels".into(),
        ));
    }
    let e: Vec<i128> = orders.iter().map(|&x| x as i128).collect();
    let p = p as i128;
    for fit_from in 0..=orders.len() - 3 {
        let n0 = fit_from as u32;
        let d1 = e[fit_from + 1] - e[fit_from];
        let d2 = e[fit_from + 2] - e[fit_from + 1];
        // d2 - d1 = mu * p^n0 * (p - 1)^2
        let denom = p.pow(n0) * (p - 1) * (p - 1);
        let diff = d2 - d1;
        if diff < 0 || diff % denom != 0 {
            continue;
        }
        let mu = diff / denom;
        let lambda = d1 - mu * p.pow(n0) * (p - 1);
        if lambda < 0 {
            continue;
        }
        let nu = e[fit_from] - mu * p.pow(n0) - lambda * fit_from as i128;
        let fits = (fit_from..orders.len()).all(|n| {
            let expect = mu * p.pow(n as u32) + lambda * n as i128 + nu;
            expect == e[n]
        });
        if fits {
            return Ok(IwasawaFit {
                mu: mu as u64,
                lambda: lambda as u64,
                nu: nu as i64,
                fit_from,
            });
        }
    }
    Err(Error::Precondition("no exact growth-law fit within the given levels".into()))
}

/// Generate the order sequence of a planted `(mu, lambda, nu)` triple.
pub fn planted_sequence(mu: u64, lambda: u64, nu: i64, p: u64, levels: usize) -> Vec<u64> {
    (0..levels)
        .map(|n| {
            let v = mu as i128 * (p as i128).pow(n as u32) + lambda as i128 * n as i128 + nu as i128;
            u64::try_from(v).expect("planted sequence must be nonnegative")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_planted_triples() {
        // planted (2, 3, 1) at p = 3 gives (3, 10, 25, 64)
        let seq = planted_sequence(2, 3, 1, 3, 4);
        assert_eq!(seq, vec![3, 10, 25, 64]);
        let fit = estimate_iwasawa_invariants(&seq, 3).unwrap();
        assert_eq!(fit, IwasawaFit { mu: 2, lambda: 3, nu: 1, fit_from: 0 });
    }

    #[test]
    fn constant_sequences_fit_trivially() {
        let fit = estimate_iwasawa_invariants(&[5, 5, 5, 5], 3).unwrap();
        assert_eq!(fit, IwasawaFit { mu: 0, lambda: 0, nu: 5, fit_from: 0 });
    }

    #[test]
    fn rejects_non_conforming_sequences() {
        assert!(estimate_iwasawa_invariants(&[1, 2, 4, 9], 3).is_err());
        assert!(estimate_iwasawa_invariants(&[1, 2], 3).is_err());
    }

    #[test]
    fn fits_from_a_later_level() {
        // irregular start, exact growth from level 1 on
        let mut seq = planted_sequence(1, 1, 0, 3, 5);
        seq[0] = 7; // break the fit at level 0 (planted value is 1)
        let fit = estimate_iwasawa_invariants(&seq, 3).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.fit_from), (1, 1, 1));
    }

    #[test]
    fn negative_nu_allowed() {
        let seq = planted_sequence(1, 0, -1, 3, 4); // 0, 2, 8, 26
        assert_eq!(seq, vec![0, 2, 8, 26]);
        let fit = estimate_iwasawa_invariants(&seq, 3).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.nu), (1, 0, -1));
    }
}
