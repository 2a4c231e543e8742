//! Jacobian-criterion smoothness certificates and exhaustive point counts.
//!
//! Only `F_p`-rational points are examined. A singular point defined over
//! an extension of `F_p` is invisible here, so `Certified` means "no
//! singular `F_p`-point"; running several primes narrows the gap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{check_budget, AmbientPoints};
use super::reduce::{rank_mod_p, ReducedSpace};
use crate::error::Result;

/// Ambient size above which exhaustive enumeration is refused.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateStatus {
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub space_id: String,
    pub p: u64,
    pub status: CertificateStatus,
    /// First failing point in enumeration order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub points_examined: u64,
    pub locus_points: u64,
}

impl SmoothnessCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::Certified
    }
}

struct ChunkResult {
    locus: u64,
    failure: Option<(u128, Vec<u64>, &'static str)>,
}

fn scan(r: &ReducedSpace, pts: &AmbientPoints, range: std::ops::Range<u128>) -> ChunkResult {
    let codim = r.expected_codimension();
    let mut x = vec![0u64; r.ambient().nvars()];
    let mut out = ChunkResult { locus: 0, failure: None };
    for idx in range {
        pts.point_into(idx, &mut x);
        if !r.vanishes_at(&x) {
            continue;
        }
        out.locus += 1;
        if out.failure.is_some() {
            continue;
        }
        if r.rank_zero_at(&x) {
            out.failure = Some((idx, x.clone(), "matrix vanishes identically"));
        } else if rank_mod_p(&r.jacobian_at(&x), r.modulus()) < codim {
            out.failure = Some((idx, x.clone(), "Jacobian rank drops"));
        }
    }
    out
}

/// Exhaustive Jacobian check over all `F_p`-points of the reduced space.
pub fn smoothness_certificate(r: &ReducedSpace) -> Result<SmoothnessCertificate> {
    smoothness_certificate_with_budget(r, DEFAULT_BUDGET)
}

pub fn smoothness_certificate_with_budget(r: &ReducedSpace, budget: u128) -> Result<SmoothnessCertificate> {
    let pts = AmbientPoints::new(r.ambient(), r.modulus());
    check_budget(&pts, budget)?;
    let parts: Vec<ChunkResult> = pts.chunks(64).into_par_iter().map(|c| scan(r, &pts, c)).collect();
    let locus = parts.iter().map(|c| c.locus).sum();
    let failure = parts.into_iter().filter_map(|c| c.failure).min_by_key(|f| f.0);
    let (status, witness, reason) = match failure {
        None => (CertificateStatus::Certified, None, None),
        Some((_, x, why)) => (CertificateStatus::Inconclusive, Some(x), Some(why.to_string())),
    };
    Ok(SmoothnessCertificate {
        space_id: r.name().to_string(),
        p: r.modulus(),
        status,
        witness,
        reason,
        points_examined: pts.len() as u64,
        locus_points: locus,
    })
}

/// One exact tally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusCount {
    pub p: u64,
    pub locus: String,
    pub count: u64,
    /// Number of points of the ambient that was enumerated.
    pub ambient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionVerdict {
    ProperLikely,
    NotProper,
}

/// Restriction of two plane curves to a random line over a large prime field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCertificate {
    pub modulus: u64,
    /// Two points spanning the line.
    pub line: [Vec<u64>; 2],
    /// Degrees of the two restrictions after removing chart factors.
    pub degrees: [usize; 2],
    pub charts_checked: usize,
    /// The restrictions have no common root in any checked chart.
    pub coprime: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub space_id: String,
    pub counts: Vec<LocusCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<IntersectionVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<LineCertificate>,
    /// Informational constants, never asserted against the counts.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub constants: Vec<(String, i64)>,
}

/// Exact number of `F_p`-points of the reduced space.
pub fn count_points(r: &ReducedSpace, budget: u128) -> Result<CountReport> {
    let pts = AmbientPoints::new(r.ambient(), r.modulus());
    check_budget(&pts, budget)?;
    let count: u64 = pts
        .chunks(64)
        .into_par_iter()
        .map(|c| {
            let mut x = vec![0u64; r.ambient().nvars()];
            c.filter(|&i| {
                pts.point_into(i, &mut x);
                r.vanishes_at(&x)
            })
            .count() as u64
        })
        .sum();
    Ok(CountReport {
        space_id: r.name().to_string(),
        counts: vec![LocusCount { p: r.modulus(), locus: r.name().to_string(), count, ambient: pts.len() as u64 }],
        ..Default::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use crate::algebra::space::GradedSpace;
    use crate::constructions::data::x1_form;
    use crate::modp::reduce::reduce_space;
    use crate::fibration::FiberedSpace;

    fn p2() -> GradedSpace {
        GradedSpace::projective("X", 2)
    }

    #[test]
    fn conic_is_certified() {
        let q = Poly::from_int_terms(3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        let r = ReducedSpace::from_forms("conic", &p2(), &[q], 5).unwrap();
        let c = smoothness_certificate(&r).unwrap();
        assert!(c.is_certified());
        // x^2 + y^2 + z^2 over F_5 is a smooth conic with p + 1 points
        assert_eq!(c.locus_points, 6);
    }

    #[test]
    fn x1_is_certified_at_some_small_prime() {
        let x1 = FiberedSpace::hypersurface("X1", GradedSpace::p1_power(2), x1_form(), vec![0]).unwrap();
        let first = [5u64, 7, 11, 13]
            .into_iter()
            .find(|&p| smoothness_certificate(&reduce_space(&x1, p).unwrap()).unwrap().is_certified());
        assert!(first.is_some());
    }

    #[test]
    fn nonreduced_form_gives_a_witness() {
        // S3^2 F on (P^1)^3 is singular along S3 = F = 0
        let s = GradedSpace::p1_power(3);
        let f = x1_form().embed(6, &[0, 1, 2, 3]);
        let g = &Poly::var(6, 4).pow(2) * &f;
        let r = ReducedSpace::from_forms("S3^2 F", &s, &[g], 5).unwrap();
        let c = smoothness_certificate(&r).unwrap();
        assert_eq!(c.status, CertificateStatus::Inconclusive);
        let w = c.witness.unwrap();
        assert_eq!(w[4], 0);
    }

    #[test]
    fn counts_of_trivial_loci() {
        let one = Poly::one(2);
        let s = GradedSpace::projective("S", 1);
        let r = ReducedSpace::from_forms("empty", &s, &[one], 7).unwrap();
        assert_eq!(count_points(&r, DEFAULT_BUDGET).unwrap().counts[0].count, 0);
        let r = ReducedSpace::from_forms("all", &s, &[], 7).unwrap();
        assert_eq!(count_points(&r, DEFAULT_BUDGET).unwrap().counts[0].count, 8);
        let tiny = AmbientPoints::new(&GradedSpace::bundle_p2(), 13);
        assert!(check_budget(&tiny, 10).is_err());
    }

    #[test]
    fn certificate_is_reproducible() {
        let x1 = FiberedSpace::hypersurface("X1", GradedSpace::p1_power(2), x1_form(), vec![0]).unwrap();
        let r = reduce_space(&x1, 7).unwrap();
        assert_eq!(smoothness_certificate(&r).unwrap(), smoothness_certificate(&r).unwrap());
    }
}
