//! Weighted monomial enumeration and counting: graded-piece dimensions of
//! the coordinate ring, the Hilbert function of a hypersurface, and the
//! monomial shapes that certify quasi-smoothness at a coordinate point.

use serde::Serialize;

use crate::family::{HypersurfaceFamily, Result, WeightSystem};

/// Exponents of a monomial, one per ambient weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn weighted_degree(&self, w: &WeightSystem) -> u64 {
        self.0.iter().zip(w.weights()).map(|(&e, &a)| e * a).sum()
    }
}

fn enumerate_rec(weights: &[u64], k: u64, prefix: &mut Vec<u64>, out: &mut Vec<ExponentVector>) {
    match weights {
        [] => {
            if k == 0 {
                out.push(ExponentVector(prefix.clone()));
            }
        }
        [a, rest @ ..] => {
            for e in (0..=k / a).rev() {
                prefix.push(e);
                enumerate_rec(rest, k - e * a, prefix, out);
                prefix.pop();
            }
        }
    }
}

/// All exponent vectors of weighted degree exactly `k`, first exponent
/// largest first.
pub fn enumerate_monomials(w: &WeightSystem, k: u64) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(w.len());
    enumerate_rec(w.weights(), k, &mut prefix, &mut out);
    out
}

/// |S_k|: the number of monomials of weighted degree `k`, by the standard
/// coin-counting dynamic program over the weights.
pub fn count_monomials(w: &WeightSystem, k: u64) -> u128 {
    let k = k as usize;
    let mut dp = vec![0u128; k + 1];
    dp[0] = 1;
    for &a in w.weights() {
        let a = a as usize;
        for m in a..=k {
            dp[m] += dp[m - a];
        }
    }
    dp[k]
}

/// dim H^0(X, O_X(k)) = |S_k| - |S_{k-d}|; zero for negative k. The
/// difference is clamped at zero: it can only go negative when S_d is
/// empty, i.e. when no hypersurface of degree d exists at all.
pub fn h0_hypersurface(f: &HypersurfaceFamily, k: i64) -> u128 {
    if k < 0 {
        return 0;
    }
    let k = k as u64;
    let d = f.degree();
    let total = count_monomials(f.ambient(), k);
    if k >= d {
        total.saturating_sub(count_monomials(f.ambient(), k - d))
    } else {
        total
    }
}

/// Whether the coordinate point P_r can be moved off the hypersurface:
/// true iff a_r divides d, so the pure power of z_r has degree d.
pub fn coordinate_point_avoidable(f: &HypersurfaceFamily, r: usize) -> Result<bool> {
    let a_r = f.ambient().weight(r)?;
    Ok(f.degree().is_multiple_of(a_r))
}

/// A monomial shape z_j z_r^c (or the pure power z_r^c when `j` is absent)
/// of total degree d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointWitness {
    pub j: Option<usize>,
    pub c: u64,
}

/// The monomial shapes whose presence in the defining polynomial certifies
/// quasi-smoothness at P_r: the pure power when a_r | d, and every mixed
/// shape z_j z_r^c with j != r, c >= 1, d = a_j + c a_r.
pub fn qs_at_pr_witnesses(f: &HypersurfaceFamily, r: usize) -> Result<Vec<PointWitness>> {
    let a_r = f.ambient().weight(r)?;
    let d = f.degree();
    let mut out = Vec::new();
    if d.is_multiple_of(a_r) {
        out.push(PointWitness {
            j: None,
            c: d / a_r,
        });
    }
    for (j, &a_j) in f.weights().iter().enumerate() {
        if j == r || d <= a_j {
            continue;
        }
        let rem = d - a_j;
        if rem.is_multiple_of(a_r) {
            out.push(PointWitness {
                j: Some(j),
                c: rem / a_r,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Error;

    fn fam(w: &[u64], d: u64) -> HypersurfaceFamily {
        HypersurfaceFamily::new(w.to_vec(), d).unwrap()
    }

    fn ws(w: &[u64]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_examples() {
        let ms = enumerate_monomials(&ws(&[1, 1, 2]), 2);
        let expect: Vec<Vec<u64>> =
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 1]];
        assert_eq!(ms.iter().map(|m| m.0.clone()).collect::<Vec<_>>(), expect);

        assert!(enumerate_monomials(&ws(&[2, 3, 7]), 1).is_empty());
        assert_eq!(
            enumerate_monomials(&ws(&[3, 4, 5]), 0),
            vec![ExponentVector(vec![0, 0, 0])]
        );
    }

    #[test]
    fn count_matches_enumeration() {
        for k in 0..=20u64 {
            let w = ws(&[1, 2, 2, 3, 5]);
            assert_eq!(
                count_monomials(&w, k),
                enumerate_monomials(&w, k).len() as u128
            );
        }
    }

    #[test]
    fn h0_examples() {
        let f = fam(&[1, 1, 1, 2, 2], 6);
        assert_eq!(h0_hypersurface(&f, 0), 1);
        assert_eq!(h0_hypersurface(&f, 1), 3);
        assert_eq!(h0_hypersurface(&f, -3), 0);
        let s6 = count_monomials(f.ambient(), 6);
        assert_eq!(h0_hypersurface(&f, 6), s6 - 1);
    }

    #[test]
    fn coordinate_point_examples() {
        let f = fam(&[1, 1, 2, 3, 5], 12);
        assert!(coordinate_point_avoidable(&f, 3).unwrap()); // weight 3
        assert!(!coordinate_point_avoidable(&fam(&[1, 1, 1, 1, 2], 5), 4).unwrap());
        assert!(coordinate_point_avoidable(&fam(&[1, 1, 1, 1, 1], 4), 2).unwrap());
        assert!(matches!(
            coordinate_point_avoidable(&f, 9),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn pr_witness_examples() {
        // the quintic in P(1,1,1,1,2): no pure power, four mixed shapes
        // z_j z_4^2 with a_j = 1
        let f = fam(&[1, 1, 1, 1, 2], 5);
        let w = qs_at_pr_witnesses(&f, 4).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|p| p.c == 2 && p.j.is_some()));

        // boundary: d - a_r = 0 leaves only the pure power
        let f = fam(&[1, 1, 2], 2);
        let w = qs_at_pr_witnesses(&f, 2).unwrap();
        assert_eq!(w, vec![PointWitness { j: None, c: 1 }]);

        // 10 - 3c is never one of {2, 5}, and 3 does not divide 10
        let f = fam(&[2, 3, 5], 10);
        assert!(qs_at_pr_witnesses(&f, 1).unwrap().is_empty());
    }
}
