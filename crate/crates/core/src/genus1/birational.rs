//! Chains of explicit birational maps between curve models.
//!
//! Each step carries forward and backward polynomial tuples. Where a tuple
//! vanishes identically on one projective block, the image is recovered from
//! a local power-series branch of the source curve.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::weierstrass::ECPoint;
use crate::algebra::field::Rational;
use crate::algebra::poly::Poly;
use crate::algebra::series::{eval_series, local_branch, Series};
use crate::algebra::space::{BlockKind, GradedSpace};
use crate::error::{Error, Result};

/// Initial and largest precision of the branch used to resolve indeterminacy.
const BRANCH_PREC: usize = 8;
const BRANCH_PREC_MAX: usize = 96;

/// A curve cut out by `eqs` in `space`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub space: GradedSpace,
    pub eqs: Vec<Poly>,
}

impl Curve {
    pub fn new(space: GradedSpace, eqs: Vec<Poly>) -> Self {
        Curve { space, eqs }
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.space.nvars() && self.eqs.iter().all(|e| e.eval(p).is_zero())
    }

    /// Local branch through `p` in the chart of largest coordinates, with
    /// chart variables held at 1.
    pub fn branch(&self, p: &[Rational], prec: usize) -> Result<Vec<Series>> {
        let chart = self.space.chart_for(p)?;
        let x = self.space.dehomogenize(p, &chart)?;
        let fixed: Vec<usize> = chart
            .iter()
            .enumerate()
            .filter(|(k, _)| self.space.block_kind(*k) == BlockKind::Projective)
            .map(|(_, &i)| i)
            .collect();
        let free: Vec<usize> = (0..self.space.nvars()).filter(|i| !fixed.contains(i)).collect();
        let assign: Vec<(usize, Rational)> = fixed.iter().map(|&i| (i, Rational::one())).collect();
        let eqs: Vec<Poly> = self
            .eqs
            .iter()
            .map(|e| e.partial_eval(&assign).restrict_vars(&free))
            .filter(|e| !e.is_zero())
            .collect();
        let xa: Vec<Rational> = free.iter().map(|&i| x[i].clone()).collect();
        let br = local_branch(&eqs, &xa, prec)?;
        let mut out = vec![Series::constant(prec, Rational::one()); self.space.nvars()];
        for (k, &i) in free.iter().enumerate() {
            out[i] = br[k].clone();
        }
        Ok(out)
    }
}

/// One birational map `source -> target` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapStep {
    pub name: String,
    pub source: Curve,
    pub target: Curve,
    /// One polynomial on the source per target variable.
    pub forward: Vec<Poly>,
    /// One polynomial on the target per source variable.
    pub backward: Vec<Poly>,
}

impl MapStep {
    pub fn forward_point(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        apply_polys(&self.forward, &self.source, &self.target, p)
    }

    pub fn backward_point(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        apply_polys(&self.backward, &self.target, &self.source, p)
    }
}

fn apply_polys(polys: &[Poly], src: &Curve, dst: &Curve, p: &[Rational]) -> Result<Vec<Rational>> {
    if !src.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let mut vals: Vec<Rational> = polys.iter().map(|f| f.eval(p)).collect();
    let zero_blocks: Vec<usize> = (0..dst.space.num_blocks())
        .filter(|&k| dst.space.block_kind(k) == BlockKind::Projective)
        .filter(|&k| dst.space.block_range(k).all(|i| vals[i].is_zero()))
        .collect();
    if !zero_blocks.is_empty() {
        resolve_by_branch(polys, src, dst, p, &zero_blocks, &mut vals)?;
    }
    let out = dst.space.normalize(&vals)?;
    if !dst.contains(&out) {
        return Err(Error::EliminationFailure("map image does not lie on the target curve".into()));
    }
    Ok(out)
}

fn resolve_by_branch(
    polys: &[Poly],
    src: &Curve,
    dst: &Curve,
    p: &[Rational],
    blocks: &[usize],
    vals: &mut [Rational],
) -> Result<()> {
    let mut prec = BRANCH_PREC;
    loop {
        let br = src.branch(p, prec)?;
        let mut done = true;
        for &k in blocks {
            let r = dst.space.block_range(k);
            let ser: Vec<Series> = r.clone().map(|i| eval_series(&polys[i], &br)).collect();
            let Some(v) = ser.iter().filter_map(|s| s.valuation()).min() else {
                done = false;
                break;
            };
            for (i, s) in r.zip(&ser) {
                vals[i] = s.coeff(v).clone();
            }
        }
        if done {
            return Ok(());
        }
        if prec >= BRANCH_PREC_MAX {
            return Err(Error::IndeterminatePoint);
        }
        prec *= 2;
    }
}

/// A composite birational map, applied step by step.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BirationalRecord {
    steps: Vec<MapStep>,
}

impl BirationalRecord {
    pub fn new(steps: Vec<MapStep>) -> Result<Self> {
        for w in steps.windows(2) {
            if w[0].target.space != w[1].source.space {
                return Err(Error::InvalidInput(format!("step {} does not feed step {}", w[0].name, w[1].name)));
            }
        }
        Ok(BirationalRecord { steps })
    }

    pub fn steps(&self) -> &[MapStep] {
        &self.steps
    }

    pub fn then(mut self, other: BirationalRecord) -> Result<Self> {
        self.steps.extend(other.steps);
        Self::new(self.steps)
    }

    pub fn apply_forward(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        let mut x = p.to_vec();
        for s in &self.steps {
            x = s.forward_point(&x)?;
        }
        Ok(x)
    }

    pub fn apply_backward(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        let mut x = p.to_vec();
        for s in self.steps.iter().rev() {
            x = s.backward_point(&x)?;
        }
        Ok(x)
    }

    /// Forward image, read as a point of `y^2 z = x^3 + ...` in `(x : y : z)`.
    pub fn apply_to_ec(&self, p: &[Rational]) -> Result<ECPoint> {
        let q = self.apply_forward(p)?;
        projective_to_ec(&q)
    }

    pub fn apply_from_ec(&self, p: &ECPoint) -> Result<Vec<Rational>> {
        self.apply_backward(&p.to_projective())
    }

    pub fn to_json(&self) -> RecordJson {
        RecordJson {
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let sn = s.source.space.var_names();
                    let tn = s.target.space.var_names();
                    StepJson {
                        name: s.name.clone(),
                        source_vars: sn.clone(),
                        source_equations: s.source.eqs.iter().map(|e| e.display_with(&sn)).collect(),
                        target_vars: tn.clone(),
                        target_equations: s.target.eqs.iter().map(|e| e.display_with(&tn)).collect(),
                        forward: s.forward.iter().map(|e| e.display_with(&sn)).collect(),
                        backward: s.backward.iter().map(|e| e.display_with(&tn)).collect(),
                        defined_away_from: (0..s.target.space.num_blocks())
                            .map(|k| s.target.space.block_range(k).map(|i| s.forward[i].display_with(&sn)).collect())
                            .collect(),
                    }
                })
                .collect(),
        }
    }
}

pub fn projective_to_ec(q: &[Rational]) -> Result<ECPoint> {
    if q.len() != 3 {
        return Err(Error::InvalidInput("expected a point of P2".into()));
    }
    if q[2].is_zero() {
        if q[0].is_zero() && !q[1].is_zero() {
            return Ok(ECPoint::Infinity);
        }
        return Err(Error::NotOnCurve);
    }
    Ok(ECPoint::Affine(&q[0] / &q[2], &q[1] / &q[2]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub name: String,
    pub source_vars: Vec<String>,
    pub source_equations: Vec<String>,
    pub target_vars: Vec<String>,
    pub target_equations: Vec<String>,
    pub forward: Vec<String>,
    pub backward: Vec<String>,
    /// Per target block, forms whose common zeros on the source are
    /// resolved by branches rather than direct evaluation.
    pub defined_away_from: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub steps: Vec<StepJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::poly;

    /// Projection of the conic `x^2 + y^2 = z^2` from `(1:0:1)` to `P1`.
    fn conic_step() -> MapStep {
        let src = Curve::new(GradedSpace::projective("x", 2), vec![poly!(3; [2,0,0] => 1, [0,2,0] => 1, [0,0,2] => -1)]);
        let dst = Curve::new(GradedSpace::projective("s", 1), vec![]);
        MapStep {
            name: "conic".into(),
            source: src,
            target: dst,
            // (x:y:z) -> (y : z - x)
            forward: vec![poly!(3; [0,1,0] => 1), poly!(3; [0,0,1] => 1, [1,0,0] => -1)],
            // (s:t) -> (s^2 - t^2 : 2st : s^2 + t^2) up to the sign fixing the marked point
            backward: vec![poly!(2; [2,0] => 1, [0,2] => -1), poly!(2; [1,1] => 2), poly!(2; [2,0] => 1, [0,2] => 1)],
        }
    }

    #[test]
    fn indeterminacy_resolved_by_branch() {
        let s = conic_step();
        // at the center of projection the tangent direction is (0:1:0), so the image is (1:0)
        let img = s.forward_point(&[int(1), int(0), int(1)]).unwrap();
        assert_eq!(img, vec![int(1), int(0)]);
        assert_eq!(s.backward_point(&img).unwrap(), vec![int(1), int(0), int(1)]);
    }

    #[test]
    fn round_trip_on_points() {
        let s = conic_step();
        let r = BirationalRecord::new(vec![s]).unwrap();
        for p in [[3, 4, 5], [-3, 4, 5], [0, 1, 1], [5, -12, 13], [-1, 0, 1]] {
            let p = p.map(int);
            let q = r.apply_forward(&p).unwrap();
            let back = r.apply_backward(&q).unwrap();
            assert!(GradedSpace::projective("x", 2).same_point(&back, &p).unwrap());
        }
        assert_eq!(r.apply_forward(&[int(1), int(1), int(1)]), Err(Error::NotOnCurve));
        assert_eq!(r.to_json().steps[0].forward.len(), 2);
    }
}
