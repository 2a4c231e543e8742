//! Multihomogeneous forms on a graded space.

use serde::{Deserialize, Serialize};

use super::field::{format_rational, parse_rational, Fp, Rational};
use super::poly::Poly;
use super::space::{BlockKind, GradedSpace, VarBlock};
use crate::error::{Error, Result};

/// A polynomial on `space`, every term of which has multidegree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiForm {
    space: GradedSpace,
    poly: Poly,
    degree: Vec<i64>,
}

impl MultiForm {
    /// Infers the multidegree; fails on zero or inhomogeneous input.
    pub fn new(space: &GradedSpace, poly: Poly) -> Result<Self> {
        if poly.nvars() != space.nvars() {
            return Err(Error::InvalidInput("polynomial ring differs from the space".into()));
        }
        let degree = space
            .homogeneous_degree(&poly)
            .ok_or_else(|| Error::InvalidInput("form is zero or not multihomogeneous".into()))?;
        Ok(MultiForm { space: space.clone(), poly, degree })
    }

    pub fn with_degree(space: &GradedSpace, poly: Poly, degree: Vec<i64>) -> Result<Self> {
        if poly.nvars() != space.nvars() || degree.len() != space.rank() {
            return Err(Error::InvalidInput("form does not match the space".into()));
        }
        if poly.terms().any(|(e, _)| space.degree_of(e) != degree) {
            return Err(Error::InvalidInput(format!("form is not of multidegree {degree:?}")));
        }
        Ok(MultiForm { space: space.clone(), poly, degree })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> &[i64] {
        &self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.space.nvars() {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.space.nvars()
            )));
        }
        Ok(self.poly.eval(point))
    }

    pub fn eval_fp(&self, point: &[Fp]) -> Result<Fp> {
        let p = point
            .first()
            .map(|x| x.modulus())
            .ok_or_else(|| Error::InvalidInput("empty point".into()))?;
        if point.len() != self.space.nvars() {
            return Err(Error::InvalidInput("point length differs from variable count".into()));
        }
        let mut acc = Fp::new(0, p);
        for (e, c) in self.poly.terms() {
            let mut t = Fp::from_rational(c, p)?;
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * *x;
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Partial derivative in variable `var`; the multidegree drops by the
    /// variable's degree vector.
    pub fn derivative(&self, var: usize) -> Result<MultiForm> {
        if var >= self.space.nvars() {
            return Err(Error::InvalidInput(format!("no variable with index {var}")));
        }
        let degree = self.degree.iter().zip(self.space.var_degree(var)).map(|(a, b)| a - b).collect();
        Ok(MultiForm { space: self.space.clone(), poly: self.poly.derivative(var), degree })
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<MultiForm> {
        self.derivative(self.space.var_index(name)?)
    }

    pub fn display(&self) -> String {
        self.poly.display_with(&self.space.var_names())
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            vars: self.space.var_names(),
            grading: (0..self.space.nvars()).map(|i| self.space.var_degree(i).to_vec()).collect(),
            degree: Some(self.degree.clone()),
            terms: self.poly.terms().map(|(e, c)| TermJson { exp: e.clone(), coeff: format_rational(c) }).collect(),
        }
    }

    pub fn from_json(j: &FormJson) -> Result<Self> {
        let space = space_from_grading(&j.vars, &j.grading)?;
        let mut terms = vec![];
        for t in &j.terms {
            if t.exp.len() != space.nvars() {
                return Err(Error::InvalidInput("exponent vector length differs from variable count".into()));
            }
            terms.push((t.exp.clone(), parse_rational(&t.coeff)?));
        }
        let poly = Poly::from_terms(space.nvars(), terms);
        match &j.degree {
            Some(d) => Self::with_degree(&space, poly, d.clone()),
            None => Self::new(&space, poly),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

/// Wire format: `{vars, grading, terms: [{exp, coeff}]}` with coefficients
/// as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub vars: Vec<String>,
    pub grading: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<Vec<i64>>,
    pub terms: Vec<TermJson>,
}

/// Rebuilds blocks from per-variable degree vectors: consecutive variables
/// sharing their last nonzero component form one projective block, and
/// variables of degree zero are affine.
pub fn space_from_grading(vars: &[String], grading: &[Vec<i64>]) -> Result<GradedSpace> {
    if vars.len() != grading.len() {
        return Err(Error::InvalidInput("vars and grading differ in length".into()));
    }
    let lead = |d: &Vec<i64>| d.iter().rposition(|&x| x != 0);
    let mut blocks: Vec<VarBlock> = vec![];
    let mut last: Option<Option<usize>> = None;
    for (n, d) in vars.iter().zip(grading) {
        let l = lead(d);
        let extend = l.is_some() && last == Some(l);
        if extend {
            let b = blocks.last_mut().expect("block exists");
            b.names.push(n.clone());
            b.degrees.push(d.clone());
        } else {
            let kind = if l.is_some() { BlockKind::Projective } else { BlockKind::Affine };
            blocks.push(VarBlock { names: vec![n.clone()], degrees: vec![d.clone()], kind });
        }
        last = Some(l);
    }
    GradedSpace::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::poly;

    fn x1() -> MultiForm {
        let s = GradedSpace::p1_power(2);
        // S1^2 S2 T2 + S1 T1 (2 S2^2 + 2 S2 T2 + 3 T2^2) + T1^2 T2 (S2 + T2)
        let p = poly!(4;
            [2,0,1,1] => 1,
            [1,1,2,0] => 2, [1,1,1,1] => 2, [1,1,0,2] => 3,
            [0,2,1,1] => 1, [0,2,0,2] => 1);
        MultiForm::new(&s, p).unwrap()
    }

    #[test]
    fn evaluation_on_known_points() {
        let f = x1();
        assert_eq!(f.eval(&[int(1), int(0), int(0), int(1)]).unwrap(), int(0));
        assert_eq!(f.eval(&[int(1), int(-3), int(2), int(3)]).unwrap(), int(0));
        assert!(f.eval(&[int(1)]).is_err());
        assert_eq!(f.degree(), &[2, 2]);
    }

    #[test]
    fn derivative_lowers_degree() {
        let s = GradedSpace::p1_power(2);
        let f = MultiForm::new(&s, poly!(4; [0,0,1,1] => 1)).unwrap();
        let d = f.derivative_by_name("S2").unwrap();
        assert_eq!(d.poly(), &poly!(4; [0,0,0,1] => 1));
        assert_eq!(d.degree(), &[0, 1]);
        assert!(f.derivative(9).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = x1();
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back = MultiForm::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, f);
        let b = GradedSpace::bundle_p2();
        let g = MultiForm::new(&b, poly!(7; [1,0,0,0,0,0,1] => 1, [0,0,0,1,0,0,0] => 3)).unwrap();
        let back = MultiForm::from_json(&g.to_json()).unwrap();
        assert_eq!(back.space(), &b);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let s = GradedSpace::p1_power(1);
        assert!(MultiForm::new(&s, poly!(2; [1,0] => 1, [2,0] => 1)).is_err());
    }

    #[test]
    fn fp_evaluation_matches() {
        let f = x1();
        let p = 7;
        let pt: Vec<Fp> = [1, -3, 2, 3].iter().map(|&v| Fp::new(v, p)).collect();
        assert_eq!(f.eval_fp(&pt).unwrap().value(), 0);
    }
}
