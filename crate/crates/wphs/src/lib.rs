//! Criteria engine for K-stability of quasi-smooth hypersurfaces in
//! weighted projective space.
//!
//! Given the integer data (a_0, ..., a_{n+1}; d) of a family X_d in
//! P(a_0, ..., a_{n+1}), the crate decides the structural predicates
//! (Fano index, well-formedness, linear cones, smoothness conditions),
//! computes the delta-invariant lower bound (n+1) a_r / d from a weight
//! a_r > 1 dividing d, and turns it into a K-stability verdict. It also
//! ships the embedded list of the 95 index-1 terminal quasi-smooth Fano
//! threefold families, bounded enumeration of candidate weight systems,
//! Hilbert-function counting, and the finite coprime-ratio sweep backing
//! the smooth-case classification.

pub mod criteria;
pub mod datasets;
pub mod enumerate;
pub mod family;
pub mod monomials;
pub mod rational;

pub use criteria::{
    classify_smooth, corollary3_verdict, delta_lower_bound, johnson_kollar, kstability_verdict,
    lemma_bound1_check, ratio_extremum_search, ratio_extremum_search_seq,
    smooth_classification_sweep, smooth_classification_sweep_seq, DeltaBound, ExceptionRow,
    Index3Exception, LemmaBound1Outcome, RatioSearchOutcome, SmoothCase, SmoothClassification,
    SmoothSweepOutcome, Verdict, VerdictTag,
};
pub use datasets::{
    embedded_threefold_families, parse_family_stream, serialize_csv, serialize_json, FamilyRecord,
    Format,
};
pub use enumerate::{collect_candidates, collect_candidates_seq, for_each_candidate, EnumSpec};
pub use family::{Error, HypersurfaceFamily, Result, WeightSystem};
pub use monomials::{
    coordinate_point_avoidable, count_monomials, enumerate_monomials, h0_hypersurface,
    qs_at_pr_witnesses, ExponentVector, PointWitness,
};
pub use rational::Rational;
