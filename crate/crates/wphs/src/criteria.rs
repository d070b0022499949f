//! Delta-invariant lower bounds, K-stability verdicts, and the smooth-case
//! classification by gamma, together with the finite coprime-ratio sweep.

use serde::Serialize;

use crate::family::{Error, HypersurfaceFamily, Result};
use crate::rational::{gcd_u64, Rational};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The best lower bound (n+1) a_r / d available for delta(O_X(1)).
///
/// The witness is the largest weight above 1 that divides the degree; when
/// the value is shared, the smallest ascending index is reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaBound {
    pub witness_index: usize,
    pub witness_weight: u64,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictTag {
    NotApplicable { reason: String },
    NotFano,
    KStable,
    DeltaGeOne,
    Inconclusive,
}

impl VerdictTag {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictTag::NotApplicable { .. } => "NotApplicable",
            VerdictTag::NotFano => "NotFano",
            VerdictTag::KStable => "KStable",
            VerdictTag::DeltaGeOne => "DeltaGeOne",
            VerdictTag::Inconclusive => "Inconclusive",
        }
    }
}

/// The two index-3 shapes of the smooth corollary that stay open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Index3Exception {
    /// X_{2k} in P(1, ..., 1, 2)
    UnitsAndTwo { k: u64 },
    /// X_{6k} in P(1, ..., 1, 2, 3)
    UnitsTwoThree { k: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub detail: Option<DeltaBound>,
    /// bound / iota, a lower bound for delta(-K_X), when iota >= 1 and a
    /// bound exists.
    pub delta_anticanonical_bound: Option<Rational>,
    /// Set when the bound meets the index exactly.
    pub equality: bool,
    pub index3_exception: Option<Index3Exception>,
}

impl Verdict {
    fn bare(tag: VerdictTag) -> Verdict {
        Verdict {
            tag,
            detail: None,
            delta_anticanonical_bound: None,
            equality: false,
            index3_exception: None,
        }
    }
}

/// Largest weight a_r > 1 with a_r | d, as a delta bound; `None` when no
/// such weight exists. Linear cones are rejected.
pub fn delta_lower_bound(f: &HypersurfaceFamily) -> Result<Option<DeltaBound>> {
    if f.is_linear_cone() {
        return Err(Error::LinearCone);
    }
    let d = f.degree();
    let n = f.dim() as i128;
    let best = f
        .weights()
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 1 && d.is_multiple_of(w))
        .max_by_key(|&(i, &w)| (w, std::cmp::Reverse(i)));
    Ok(best.map(|(i, &w)| DeltaBound {
        witness_index: i,
        witness_weight: w,
        bound: Rational::new((n + 1) * w as i128, d as i128),
    }))
}

/// Full verdict for one family: linear cones and non-Fano data are routed
/// to their own tags, otherwise the delta bound is compared with the index.
///
/// When the ambient has only unit weights the hypersurface is smooth and
/// the same cutting argument yields the bound (n+1)/d, so that case is
/// scored with witness weight 1 rather than left inconclusive.
pub fn kstability_verdict(f: &HypersurfaceFamily) -> Verdict {
    if f.is_linear_cone() {
        return Verdict::bare(VerdictTag::NotApplicable {
            reason: "linear cone".into(),
        });
    }
    let iota = f.fano_index();
    if iota <= 0 {
        return Verdict::bare(VerdictTag::NotFano);
    }
    let n = f.dim();
    let d = f.degree();
    let bound = delta_lower_bound(f)
        .expect("linear cone handled above")
        .or_else(|| {
            (f.ambient().c1_count() == f.ambient().len()).then(|| DeltaBound {
                witness_index: f.ambient().len() - 1,
                witness_weight: 1,
                bound: Rational::new(n as i128 + 1, d as i128),
            })
        });
    match bound {
        None => Verdict::bare(VerdictTag::Inconclusive),
        Some(b) => {
            let iota_q = Rational::from_integer(iota as i128);
            let dac = b.bound / iota_q;
            let equality = b.bound == iota_q;
            let tag = if b.bound >= iota_q {
                if n >= 3 {
                    VerdictTag::KStable
                } else {
                    VerdictTag::DeltaGeOne
                }
            } else {
                VerdictTag::Inconclusive
            };
            Verdict {
                tag,
                detail: Some(b),
                delta_anticanonical_bound: Some(dac),
                equality,
                index3_exception: None,
            }
        }
    }
}

/// Johnson-Kollar criterion for index-1 families: n d < (n+1) a_0 a_1,
/// checked in exact integers.
pub fn johnson_kollar(f: &HypersurfaceFamily) -> Result<bool> {
    let iota = f.fano_index();
    if iota != 1 {
        return Err(Error::WrongIndex {
            expected: 1,
            found: iota,
        });
    }
    let n = f.dim() as u128;
    let w = f.weights();
    Ok(n * (f.degree() as u128) < (n + 1) * w[0] as u128 * w[1] as u128)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaBound1Outcome {
    pub holds: bool,
    pub equality: bool,
    /// The clause "equality implies a_0 > 1"; vacuously true when strict.
    pub a0_gt1_on_equality: bool,
}

/// Evaluates (n+1) a_{n+1} / d >= 1 and the equality clause for index-1
/// quasi-smooth well-formed families with a_{n+1} | d.
pub fn lemma_bound1_check(f: &HypersurfaceFamily) -> Result<LemmaBound1Outcome> {
    let iota = f.fano_index();
    if iota != 1 {
        return Err(Error::Precondition(format!(
            "Fano index must be 1, found {iota}"
        )));
    }
    if f.quasi_smooth != Some(true) {
        return Err(Error::Precondition(
            "quasi-smooth flag is not set to true".into(),
        ));
    }
    if !f.ambient().is_wellformed_ambient() {
        return Err(Error::Precondition("ambient is not well-formed".into()));
    }
    let w = f.weights();
    let top = w[w.len() - 1];
    let d = f.degree();
    if !d.is_multiple_of(top) {
        return Err(Error::Precondition(format!(
            "largest weight {top} does not divide the degree {d}"
        )));
    }
    let n = f.dim() as i128;
    let lhs = Rational::new((n + 1) * top as i128, d as i128);
    let equality = lhs == Rational::ONE;
    Ok(LemmaBound1Outcome {
        holds: lhs >= Rational::ONE,
        equality,
        a0_gt1_on_equality: !equality || w[0] > 1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioSearchOutcome {
    pub max_ratio: Rational,
    /// Lexicographically smallest tuple attaining the maximum.
    pub argmax: Vec<u64>,
    /// Every tuple attaining the maximum.
    pub attained_by: Vec<Vec<u64>>,
    /// Tuples whose ratio exceeds 1/3 (expected empty).
    pub violations: Vec<(Vec<u64>, Rational)>,
    pub tuples_checked: u64,
}

struct RatioAcc {
    max: Option<Rational>,
    attained: Vec<Vec<u64>>,
    violations: Vec<(Vec<u64>, Rational)>,
    checked: u64,
}

impl RatioAcc {
    fn new() -> Self {
        RatioAcc {
            max: None,
            attained: Vec::new(),
            violations: Vec::new(),
            checked: 0,
        }
    }

    fn record(&mut self, tuple: &[u64], ratio: Rational) {
        self.checked += 1;
        if ratio > Rational::new(1, 3) {
            self.violations.push((tuple.to_vec(), ratio));
        }
        match self.max {
            Some(m) if ratio < m => {}
            Some(m) if ratio == m => self.attained.push(tuple.to_vec()),
            _ => {
                self.max = Some(ratio);
                self.attained = vec![tuple.to_vec()];
            }
        }
    }

    fn merge(mut self, other: RatioAcc) -> RatioAcc {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        match (self.max, other.max) {
            (_, None) => {}
            (None, Some(_)) => {
                self.max = other.max;
                self.attained = other.attained;
            }
            (Some(a), Some(b)) => {
                if b > a {
                    self.max = other.max;
                    self.attained = other.attained;
                } else if b == a {
                    self.attained.extend(other.attained);
                }
            }
        }
        self
    }
}

fn ratio_descend(
    tuple: &mut Vec<u64>,
    sum: u64,
    prod: u128,
    k_min: usize,
    k_max: usize,
    b_max: u64,
    acc: &mut RatioAcc,
) {
    if tuple.len() >= k_min {
        acc.record(tuple, Rational::new(sum as i128, prod as i128));
    }
    if tuple.len() == k_max {
        return;
    }
    let start = tuple.last().map_or(2, |&b| b + 1);
    // adding x only lowers the ratio further, and the first extension is
    // largest at the smallest x, so (sum+start)/(prod*start) bounds every
    // completion of this prefix
    if !tuple.is_empty() {
        let ub = Rational::new((sum + start) as i128, prod as i128 * start as i128);
        let floor = acc
            .max
            .map_or(Rational::new(1, 3), |m| m.min(Rational::new(1, 3)));
        if ub < floor {
            return;
        }
    }
    for b in start..=b_max {
        if tuple.iter().any(|&t| gcd_u64(t, b) != 1) {
            continue;
        }
        tuple.push(b);
        ratio_descend(tuple, sum + b, prod * b as u128, k_min, k_max, b_max, acc);
        tuple.pop();
    }
}

fn ratio_finish(acc: RatioAcc) -> Result<RatioSearchOutcome> {
    let max_ratio = acc
        .max
        .ok_or_else(|| Error::Bounds("search space is empty".into()))?;
    let mut attained = acc.attained;
    attained.sort();
    attained.dedup();
    let mut violations = acc.violations;
    violations.sort();
    Ok(RatioSearchOutcome {
        max_ratio,
        argmax: attained[0].clone(),
        attained_by: attained,
        violations,
        tuples_checked: acc.checked,
    })
}

fn ratio_check_bounds(k_min: usize, k_max: usize, b_max: u64) -> Result<()> {
    if k_min < 3 || k_min > k_max {
        return Err(Error::Bounds(format!(
            "need 3 <= k_min <= k_max, got k_min={k_min}, k_max={k_max}"
        )));
    }
    if b_max < 5 {
        return Err(Error::Bounds(format!("need b_max >= 5, got {b_max}")));
    }
    Ok(())
}

/// Exhaustive sweep over strictly increasing pairwise-coprime tuples
/// 1 < b_1 < ... < b_k <= b_max, k in [k_min, k_max], maximizing
/// sum(b)/prod(b) and flagging anything above 1/3.
pub fn ratio_extremum_search_seq(
    k_min: usize,
    k_max: usize,
    b_max: u64,
) -> Result<RatioSearchOutcome> {
    ratio_check_bounds(k_min, k_max, b_max)?;
    let mut acc = RatioAcc::new();
    let mut tuple = Vec::with_capacity(k_max);
    ratio_descend(&mut tuple, 0, 1, k_min, k_max, b_max, &mut acc);
    ratio_finish(acc)
}

#[cfg(feature = "parallel")]
pub fn ratio_extremum_search(k_min: usize, k_max: usize, b_max: u64) -> Result<RatioSearchOutcome> {
    ratio_check_bounds(k_min, k_max, b_max)?;
    let acc = (2..=b_max)
        .into_par_iter()
        .map(|b1| {
            let mut acc = RatioAcc::new();
            let mut tuple = vec![b1];
            ratio_descend(&mut tuple, b1, b1 as u128, k_min, k_max, b_max, &mut acc);
            acc
        })
        .reduce(RatioAcc::new, RatioAcc::merge);
    ratio_finish(acc)
}

#[cfg(not(feature = "parallel"))]
pub fn ratio_extremum_search(k_min: usize, k_max: usize, b_max: u64) -> Result<RatioSearchOutcome> {
    ratio_extremum_search_seq(k_min, k_max, b_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmoothCase {
    /// a_n = 1: at most one weight above 1.
    AnEquals1,
    /// a_{n-1} = 1 and a_n > 1: exactly two weights above 1.
    An1Equals1AnGt1,
    /// a_{n-1} > 1: three or more weights above 1.
    An1Gt1,
}

/// Rows of the two exception tables for gamma <= 1 with index at most 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExceptionRow {
    /// a_n = 1, iota = 2, a_{n+1} = 2: gamma = 1.
    UnitAnIndex2Weight2,
    /// a_n = 1, iota = 3, a_{n+1} = 2, d = 2k: gamma = 2/3 + 1/(3k).
    UnitAnIndex3Weight2,
    /// a_n = 1, iota = 3, a_{n+1} = 3: gamma = 1.
    UnitAnIndex3Weight3,
    /// a_{n-1} = 1, iota = 2, d = 6, (a_n, a_{n+1}) = (2, 3): gamma = 1.
    MidIndex2Degree6,
    /// a_{n-1} = 1, iota = 3, (a_n, a_{n+1}) = (2, 3): gamma = 1 - 1/d.
    MidIndex3Weights23,
    /// a_{n-1} = 1, iota = 3, d = 12, (a_n, a_{n+1}) = (3, 4): gamma = 1.
    MidIndex3Degree12,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothClassification {
    pub case: SmoothCase,
    pub gamma: Rational,
    pub exception: Option<ExceptionRow>,
    /// gamma equals a_{n+1} / (2 iota), the extreme of the general lower
    /// bound; forces the shape X_{2(n+1)} in P(1^n, 2, n+1) with n even.
    pub item0_equality: bool,
}

fn smooth_preconditions(f: &HypersurfaceFamily) -> Result<i64> {
    if f.is_linear_cone() {
        return Err(Error::Precondition("family is a linear cone".into()));
    }
    if !f.smoothness_necessary() {
        return Err(Error::Precondition(
            "smoothness necessary conditions fail (a weight does not divide d, \
             or two weights above 1 share a factor)"
                .into(),
        ));
    }
    let iota = f.fano_index();
    if iota < 1 {
        return Err(Error::Precondition(format!(
            "Fano index must be at least 1, found {iota}"
        )));
    }
    let w = f.weights();
    if w[w.len() - 1] <= 1 {
        return Err(Error::Precondition("largest weight must exceed 1".into()));
    }
    Ok(iota)
}

/// Computes gamma = (n+1) a_{n+1} / (iota d) exactly and matches the
/// gamma <= 1 outcomes (for index at most 3) against the exception tables.
pub fn classify_smooth(f: &HypersurfaceFamily) -> Result<SmoothClassification> {
    let iota = smooth_preconditions(f)?;
    let w = f.weights();
    let len = w.len();
    let n = f.dim();
    let d = f.degree();
    let (a_top, a_n, a_n1) = (w[len - 1], w[len - 2], w[len - 3]);
    let gamma = Rational::new((n as i128 + 1) * a_top as i128, iota as i128 * d as i128);
    let case = if a_n == 1 {
        SmoothCase::AnEquals1
    } else if a_n1 == 1 {
        SmoothCase::An1Equals1AnGt1
    } else {
        SmoothCase::An1Gt1
    };
    let exception = if iota <= 3 && gamma <= Rational::ONE {
        let row = match case {
            SmoothCase::AnEquals1 => match (iota, a_top) {
                (2, 2) => Some((ExceptionRow::UnitAnIndex2Weight2, Rational::ONE)),
                (3, 2) => Some((
                    ExceptionRow::UnitAnIndex3Weight2,
                    Rational::new(2, 3) + Rational::new(2, 3 * d as i128),
                )),
                (3, 3) => Some((ExceptionRow::UnitAnIndex3Weight3, Rational::ONE)),
                _ => None,
            },
            SmoothCase::An1Equals1AnGt1 => match (iota, a_n, a_top) {
                (2, 2, 3) if d == 6 => Some((ExceptionRow::MidIndex2Degree6, Rational::ONE)),
                (3, 2, 3) => Some((
                    ExceptionRow::MidIndex3Weights23,
                    Rational::ONE - Rational::new(1, d as i128),
                )),
                (3, 3, 4) if d == 12 => Some((ExceptionRow::MidIndex3Degree12, Rational::ONE)),
                _ => None,
            },
            SmoothCase::An1Gt1 => None,
        };
        if let Some((_, expected)) = row {
            debug_assert_eq!(gamma, expected, "exception row formula mismatch");
        }
        row.map(|(r, _)| r)
    } else {
        None
    };
    let item0_equality = gamma == Rational::new(a_top as i128, 2 * iota as i128);
    Ok(SmoothClassification {
        case,
        gamma,
        exception,
        item0_equality,
    })
}

/// Smooth-case verdict: index 1 and 2 are always K-stable (gamma = 1 rows
/// fall back to the main bound with an equality annotation); index 3 is
/// K-stable except for the two open shapes.
pub fn corollary3_verdict(f: &HypersurfaceFamily) -> Result<Verdict> {
    let iota = smooth_preconditions(f)?;
    if iota > 3 {
        return Err(Error::Precondition(format!(
            "corollary covers index at most 3, found {iota}"
        )));
    }
    let cls = classify_smooth(f)?;
    let detail = delta_lower_bound(f)?;
    let equality = cls.gamma == Rational::ONE;
    let d = f.degree();
    let w = f.weights();
    let top = w[w.len() - 1];
    if iota == 3 && cls.gamma < Rational::ONE {
        let shape = if top == 2 {
            Index3Exception::UnitsAndTwo { k: d / 2 }
        } else {
            Index3Exception::UnitsTwoThree { k: d / 6 }
        };
        return Ok(Verdict {
            tag: VerdictTag::Inconclusive,
            detail,
            delta_anticanonical_bound: Some(cls.gamma),
            equality: false,
            index3_exception: Some(shape),
        });
    }
    Ok(Verdict {
        tag: VerdictTag::KStable,
        detail,
        delta_anticanonical_bound: Some(cls.gamma),
        equality,
        index3_exception: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothSweepOutcome {
    pub families_checked: u64,
    /// How often each exception-table row was hit.
    pub exception_counts: Vec<(ExceptionRow, u64)>,
    /// (weights, degree) of the families attaining gamma = a_{n+1}/(2 iota).
    pub item0_equality_hits: Vec<(Vec<u64>, u64)>,
    pub counterexamples: Vec<String>,
}

fn sweep_dim_index(dim: usize, index: i64, dmax: u64, out: &mut SmoothSweepOutcome) {
    let spec = crate::enumerate::EnumSpec {
        dim,
        index,
        max_weight: dmax,
        max_degree: dmax,
        require_smooth_necessary: true,
        require_wellformed: true,
    };
    fn bump(counts: &mut Vec<(ExceptionRow, u64)>, row: ExceptionRow) {
        match counts.iter_mut().find(|(r, _)| *r == row) {
            Some((_, c)) => *c += 1,
            None => counts.push((row, 1)),
        }
    }
    crate::enumerate::for_each_candidate(&spec, |f| {
        let w = f.weights();
        let top = w[w.len() - 1];
        if top == 1 {
            return; // straight projective space, outside the weighted classification
        }
        let label = || format!("{:?} d={}", f.weights(), f.degree());
        let cls = match classify_smooth(&f) {
            Ok(c) => c,
            Err(e) => {
                out.counterexamples.push(format!("{}: {e}", label()));
                return;
            }
        };
        out.families_checked += 1;
        if cls.gamma <= Rational::ONE {
            match cls.exception {
                Some(row) => bump(&mut out.exception_counts, row),
                None => out.counterexamples.push(format!(
                    "{}: gamma = {} <= 1 outside the exception tables",
                    label(),
                    cls.gamma
                )),
            }
            if cls.case == SmoothCase::An1Gt1 {
                out.counterexamples.push(format!(
                    "{}: gamma = {} <= 1 with two smallest weights above 1",
                    label(),
                    cls.gamma
                ));
            }
        }
        let floor = Rational::new(top as i128, 2 * index as i128);
        if cls.gamma < floor {
            out.counterexamples.push(format!(
                "{}: gamma = {} below the general bound {}",
                label(),
                cls.gamma,
                floor
            ));
        }
        if cls.item0_equality {
            let n = f.dim();
            let mut expect = vec![1u64; n];
            expect.extend([2, n as u64 + 1]);
            let shape_ok =
                n % 2 == 0 && f.weights() == expect.as_slice() && f.degree() == 2 * (n as u64 + 1);
            if shape_ok {
                out.item0_equality_hits
                    .push((f.weights().to_vec(), f.degree()));
            } else {
                out.counterexamples.push(format!(
                    "{}: general-bound equality off the expected shape",
                    label()
                ));
            }
        }
    })
    .expect("spec bounds validated by caller");
}

fn sweep_check_bounds(nmax: usize, dmax: u64) -> Result<Vec<(usize, i64)>> {
    if nmax < 1 {
        return Err(Error::Bounds("need nmax >= 1".into()));
    }
    if dmax < 2 {
        return Err(Error::Bounds("need dmax >= 2".into()));
    }
    Ok((1..=nmax)
        .flat_map(|n| (1..=3i64).map(move |i| (n, i)))
        .collect())
}

fn sweep_merge(parts: Vec<SmoothSweepOutcome>) -> SmoothSweepOutcome {
    let mut total = SmoothSweepOutcome {
        families_checked: 0,
        exception_counts: Vec::new(),
        item0_equality_hits: Vec::new(),
        counterexamples: Vec::new(),
    };
    for p in parts {
        total.families_checked += p.families_checked;
        for (row, c) in p.exception_counts {
            match total.exception_counts.iter_mut().find(|(r, _)| *r == row) {
                Some((_, t)) => *t += c,
                None => total.exception_counts.push((row, c)),
            }
        }
        total.item0_equality_hits.extend(p.item0_equality_hits);
        total.counterexamples.extend(p.counterexamples);
    }
    total.item0_equality_hits.sort();
    total.counterexamples.sort();
    total
}

/// Sweeps every family with the smoothness necessary conditions, index at
/// most 3, dimension at most `nmax`, and degree at most `dmax`, checking
/// the gamma classification: each gamma <= 1 instance must land on an
/// exception-table row, and the general bound gamma >= a_{n+1}/(2 iota)
/// must hold with equality only on the expected shape.
pub fn smooth_classification_sweep_seq(nmax: usize, dmax: u64) -> Result<SmoothSweepOutcome> {
    let pairs = sweep_check_bounds(nmax, dmax)?;
    let parts = pairs
        .into_iter()
        .map(|(n, i)| {
            let mut out = sweep_merge(Vec::new());
            sweep_dim_index(n, i, dmax, &mut out);
            out
        })
        .collect();
    Ok(sweep_merge(parts))
}

#[cfg(feature = "parallel")]
pub fn smooth_classification_sweep(nmax: usize, dmax: u64) -> Result<SmoothSweepOutcome> {
    let pairs = sweep_check_bounds(nmax, dmax)?;
    let parts = pairs
        .into_par_iter()
        .map(|(n, i)| {
            let mut out = sweep_merge(Vec::new());
            sweep_dim_index(n, i, dmax, &mut out);
            out
        })
        .collect();
    Ok(sweep_merge(parts))
}

#[cfg(not(feature = "parallel"))]
pub fn smooth_classification_sweep(nmax: usize, dmax: u64) -> Result<SmoothSweepOutcome> {
    smooth_classification_sweep_seq(nmax, dmax)
}
