//! Bounded brute-force generation of candidate families: every
//! non-decreasing weight tuple with the requested dimension and Fano
//! index, with optional well-formedness and smoothness filters. Serves as
//! the independent search harness behind the classification sweeps.

use crate::family::{Error, HypersurfaceFamily, Result};
use crate::rational::gcd_u64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct EnumSpec {
    /// Hypersurface dimension n; the tuples have n + 2 weights.
    pub dim: usize,
    /// Target Fano index; the degree is sum(weights) - index.
    pub index: i64,
    pub max_weight: u64,
    pub max_degree: u64,
    pub require_smooth_necessary: bool,
    pub require_wellformed: bool,
}

impl EnumSpec {
    fn check(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Bounds("dimension must be at least 1".into()));
        }
        if self.max_weight < 1 || self.max_weight > self.max_degree {
            return Err(Error::Bounds(format!(
                "need 1 <= max_weight <= max_degree, got max_weight={}, max_degree={}",
                self.max_weight, self.max_degree
            )));
        }
        Ok(())
    }
}

fn emit_if_valid(spec: &EnumSpec, tuple: &[u64], f: &mut impl FnMut(HypersurfaceFamily)) {
    let sum: u64 = tuple.iter().sum();
    let d = sum as i64 - spec.index;
    if d < 1 || d as u64 > spec.max_degree {
        return;
    }
    let d = d as u64;
    if tuple.contains(&d) {
        return; // linear cone
    }
    if spec.require_smooth_necessary && tuple.iter().any(|&a| !d.is_multiple_of(a)) {
        return;
    }
    let fam = HypersurfaceFamily::new(tuple.to_vec(), d).expect("bounds checked");
    if spec.require_wellformed && !fam.ambient().is_wellformed_ambient() {
        return;
    }
    f(fam);
}

fn descend(spec: &EnumSpec, tuple: &mut Vec<u64>, f: &mut impl FnMut(HypersurfaceFamily)) {
    let len = spec.dim + 2;
    if tuple.len() == len {
        emit_if_valid(spec, tuple, f);
        return;
    }
    let rem = (len - tuple.len()) as u64;
    let sum: u64 = tuple.iter().sum();
    let start = tuple.last().copied().unwrap_or(1);
    // the degree cap bounds the weight sum by max_degree + index
    let sum_cap = spec.max_degree as i64 + spec.index;
    for a in start..=spec.max_weight {
        if sum as i64 + (rem * a) as i64 > sum_cap {
            break;
        }
        if spec.require_smooth_necessary && a > 1 {
            // smooth families need pairwise-coprime weights above 1, whose
            // product then divides the degree
            if tuple.iter().any(|&t| t > 1 && gcd_u64(t, a) != 1) {
                continue;
            }
            let prod: u128 = tuple
                .iter()
                .filter(|&&t| t > 1)
                .map(|&t| t as u128)
                .product::<u128>()
                * a as u128;
            if prod > spec.max_degree as u128 {
                break;
            }
        }
        tuple.push(a);
        descend(spec, tuple, f);
        tuple.pop();
    }
}

/// Streams every candidate family for `spec` in lexicographic order of the
/// non-decreasing weight tuple.
pub fn for_each_candidate(spec: &EnumSpec, mut f: impl FnMut(HypersurfaceFamily)) -> Result<()> {
    spec.check()?;
    let mut tuple = Vec::with_capacity(spec.dim + 2);
    descend(spec, &mut tuple, &mut f);
    Ok(())
}

pub fn collect_candidates_seq(spec: &EnumSpec) -> Result<Vec<HypersurfaceFamily>> {
    let mut out = Vec::new();
    for_each_candidate(spec, |fam| out.push(fam))?;
    Ok(out)
}

/// Parallel collection, partitioned on the leading weight; the
/// concatenation preserves lexicographic order.
#[cfg(feature = "parallel")]
pub fn collect_candidates(spec: &EnumSpec) -> Result<Vec<HypersurfaceFamily>> {
    spec.check()?;
    let chunks: Vec<Vec<HypersurfaceFamily>> = (1..=spec.max_weight)
        .into_par_iter()
        .map(|a0| {
            let mut out = Vec::new();
            let mut tuple = vec![a0];
            descend(spec, &mut tuple, &mut |fam| out.push(fam));
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

#[cfg(not(feature = "parallel"))]
pub fn collect_candidates(spec: &EnumSpec) -> Result<Vec<HypersurfaceFamily>> {
    collect_candidates_seq(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(dim: usize, index: i64, max_weight: u64, max_degree: u64) -> EnumSpec {
        EnumSpec {
            dim,
            index,
            max_weight,
            max_degree,
            require_smooth_necessary: false,
            require_wellformed: true,
        }
    }

    fn has(fams: &[HypersurfaceFamily], w: &[u64], d: u64) -> bool {
        fams.iter().any(|f| f.weights() == w && f.degree() == d)
    }

    #[test]
    fn tiny_threefold_sweep() {
        let fams = collect_candidates_seq(&spec(3, 1, 2, 8)).unwrap();
        assert!(has(&fams, &[1, 1, 1, 2, 2], 6));
        assert!(has(&fams, &[1, 1, 1, 1, 2], 5));
    }

    #[test]
    fn forced_conic() {
        let fams = collect_candidates_seq(&spec(1, 1, 1, 3)).unwrap();
        assert_eq!(fams.len(), 1);
        assert!(has(&fams, &[1, 1, 1], 2));
    }

    #[test]
    fn smooth_filter_keeps_exception_shape() {
        let mut s = spec(4, 3, 5, 20);
        s.require_smooth_necessary = true;
        let fams = collect_candidates_seq(&s).unwrap();
        assert!(has(&fams, &[1, 1, 1, 1, 2, 3], 6));
        assert!(fams.iter().all(|f| f.smoothness_necessary()));
    }

    #[test]
    fn deterministic_lexicographic_order() {
        let fams = collect_candidates_seq(&spec(2, 2, 4, 12)).unwrap();
        let keys: Vec<&[u64]> = fams.iter().map(|f| f.weights()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
        assert!(fams.iter().all(|f| f.fano_index() == 2));
        assert!(fams.iter().all(|f| !f.is_linear_cone()));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let s = spec(3, 1, 6, 30);
        assert_eq!(
            collect_candidates(&s).unwrap(),
            collect_candidates_seq(&s).unwrap()
        );
    }

    #[test]
    fn bad_bounds() {
        assert!(matches!(
            collect_candidates_seq(&spec(0, 1, 2, 8)),
            Err(Error::Bounds(_))
        ));
        assert!(matches!(
            collect_candidates_seq(&spec(3, 1, 9, 8)),
            Err(Error::Bounds(_))
        ));
    }

    #[test]
    fn embedded_families_appear_in_covering_sweep() {
        let fams = collect_candidates_seq(&spec(3, 1, 35, 66)).unwrap();
        for rec in crate::datasets::embedded_threefold_families() {
            assert!(
                has(&fams, &rec.weights, rec.degree),
                "missing {:?} d={}",
                rec.weights,
                rec.degree
            );
        }
    }
}
