//! Fibered total spaces and their fibers.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::field::Rational;
use crate::algebra::form::{FormJson, MultiForm};
use crate::algebra::poly::Poly;
use crate::algebra::resultant::ternary_cubic_discriminant;
use crate::algebra::space::{BlockKind, GradedSpace, VarBlock};
use crate::error::{Error, Result};
use crate::genus1::{biquadratic_is_smooth, quadric_pencil_quartic, Biquadratic, GenusOneModel, PlaneCubic, QuadricIntersection};

/// Defining data: forms cutting a complete intersection, or a 2x3 matrix
/// whose rank one locus is the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defining {
    Forms(Vec<MultiForm>),
    Degeneracy(Vec<Vec<MultiForm>>),
}

/// A subvariety of `ambient` fibered over the product of `base_blocks`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedSpace {
    name: String,
    ambient: GradedSpace,
    defining: Defining,
    base_blocks: Vec<usize>,
}

/// The three 2x2 minors of a 2x3 matrix, columns `(0,1), (0,2), (1,2)`.
pub fn minors_of(rows: &[Vec<Poly>]) -> Vec<Poly> {
    let mut out = vec![];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        out.push(&(&rows[0][i] * &rows[1][j]) - &(&rows[0][j] * &rows[1][i]));
    }
    out
}

/// Blocks `blocks` of `space` as a space of their own, with fresh grading.
pub fn sub_space(space: &GradedSpace, blocks: &[usize]) -> Result<GradedSpace> {
    let rank = blocks.iter().filter(|&&k| space.block_kind(k) == BlockKind::Projective).count();
    let mut next = 0;
    let mut out = vec![];
    for &k in blocks {
        let b = &space.blocks()[k];
        let mut d = vec![0; rank];
        if b.kind == BlockKind::Projective {
            d[next] = 1;
            next += 1;
        }
        out.push(VarBlock { names: b.names.clone(), degrees: vec![d; b.names.len()], kind: b.kind });
    }
    GradedSpace::new(out)
}

impl FiberedSpace {
    pub fn new(name: &str, ambient: GradedSpace, defining: Defining, base_blocks: Vec<usize>) -> Result<Self> {
        let nb = ambient.num_blocks();
        if base_blocks.iter().any(|&k| k >= nb) || base_blocks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("base blocks must be increasing block indices".into()));
        }
        if base_blocks.len() == nb {
            return Err(Error::InvalidInput("a fibration needs at least one fiber block".into()));
        }
        match &defining {
            Defining::Forms(fs) => {
                if fs.is_empty() || fs.iter().any(|f| f.space() != &ambient) {
                    return Err(Error::InvalidInput("defining forms must live on the ambient space".into()));
                }
            }
            Defining::Degeneracy(rows) => {
                if rows.len() != 2 || rows.iter().any(|r| r.len() != 3) {
                    return Err(Error::InvalidInput("degeneracy data must be a 2x3 matrix".into()));
                }
                for r in rows {
                    if r.iter().any(|f| f.space() != &ambient) {
                        return Err(Error::InvalidInput("matrix entries must live on the ambient space".into()));
                    }
                    if r.iter().any(|f| f.degree() != r[0].degree()) {
                        return Err(Error::InvalidInput("entries of a row must share one multidegree".into()));
                    }
                }
            }
        }
        Ok(FiberedSpace { name: name.to_string(), ambient, defining, base_blocks })
    }

    pub fn hypersurface(name: &str, ambient: GradedSpace, form: Poly, base_blocks: Vec<usize>) -> Result<Self> {
        Self::complete_intersection(name, ambient, vec![form], base_blocks)
    }

    pub fn complete_intersection(
        name: &str,
        ambient: GradedSpace,
        forms: Vec<Poly>,
        base_blocks: Vec<usize>,
    ) -> Result<Self> {
        let fs = forms.into_iter().map(|f| MultiForm::new(&ambient, f)).collect::<Result<Vec<_>>>()?;
        Self::new(name, ambient, Defining::Forms(fs), base_blocks)
    }

    pub fn degeneracy(name: &str, ambient: GradedSpace, rows: Vec<Vec<Poly>>, base_blocks: Vec<usize>) -> Result<Self> {
        let m = rows
            .into_iter()
            .map(|r| r.into_iter().map(|f| MultiForm::new(&ambient, f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, ambient, Defining::Degeneracy(m), base_blocks)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &GradedSpace {
        &self.ambient
    }

    pub fn defining(&self) -> &Defining {
        &self.defining
    }

    pub fn base_blocks(&self) -> &[usize] {
        &self.base_blocks
    }

    pub fn matrix(&self) -> Option<Vec<Vec<Poly>>> {
        match &self.defining {
            Defining::Degeneracy(m) => Some(m.iter().map(|r| r.iter().map(|f| f.poly().clone()).collect()).collect()),
            Defining::Forms(_) => None,
        }
    }

    /// Generators of the ideal: the forms, or the three minors.
    pub fn equations(&self) -> Vec<Poly> {
        match &self.defining {
            Defining::Forms(fs) => fs.iter().map(|f| f.poly().clone()).collect(),
            Defining::Degeneracy(_) => minors_of(&self.matrix().expect("matrix")),
        }
    }

    pub fn expected_codimension(&self) -> usize {
        match &self.defining {
            Defining::Forms(fs) => fs.len(),
            Defining::Degeneracy(_) => 2,
        }
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.ambient.nvars() && self.equations().iter().all(|e| e.eval(p).is_zero())
    }

    pub fn fiber_blocks(&self) -> Vec<usize> {
        (0..self.ambient.num_blocks()).filter(|k| !self.base_blocks.contains(k)).collect()
    }

    pub fn base_vars(&self) -> Vec<usize> {
        self.base_blocks.iter().flat_map(|&k| self.ambient.block_range(k)).collect()
    }

    pub fn fiber_vars(&self) -> Vec<usize> {
        self.fiber_blocks().into_iter().flat_map(|k| self.ambient.block_range(k)).collect()
    }

    pub fn base_space(&self) -> Result<GradedSpace> {
        sub_space(&self.ambient, &self.base_blocks)
    }

    /// The fiber ambient, each fiber block read as a plain projective space.
    pub fn fiber_space(&self) -> GradedSpace {
        let names: Vec<Vec<String>> =
            self.fiber_blocks().into_iter().map(|k| self.ambient.blocks()[k].names.clone()).collect();
        GradedSpace::projective_product(&names)
    }

    /// Splits a point into base and fiber coordinates.
    pub fn split(&self, p: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        (self.base_vars().iter().map(|&i| p[i].clone()).collect(), self.fiber_vars().iter().map(|&i| p[i].clone()).collect())
    }

    pub fn join(&self, base: &[Rational], fiber: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient.nvars()];
        for (&i, v) in self.base_vars().iter().zip(base) {
            out[i] = v.clone();
        }
        for (&i, v) in self.fiber_vars().iter().zip(fiber) {
            out[i] = v.clone();
        }
        out
    }

    fn base_assignment(&self, b: &[Rational]) -> Result<Vec<(usize, Rational)>> {
        let bv = self.base_vars();
        if b.len() != bv.len() {
            return Err(Error::InvalidInput(format!("base point needs {} coordinates, got {}", bv.len(), b.len())));
        }
        Ok(bv.into_iter().zip(b.iter().cloned()).collect())
    }

    /// Row-one values at `b` and the chart of largest absolute value.
    pub fn row_one_at(&self, b: &[Rational]) -> Result<(Vec<Rational>, usize)> {
        let m = self.matrix().ok_or_else(|| Error::InvalidInput("not a degeneracy locus".into()))?;
        let assign = self.base_assignment(b)?;
        let fv = self.fiber_vars();
        let mut beta = vec![];
        for f in &m[0] {
            let g = f.partial_eval(&assign).restrict_vars(&fv);
            if !g.is_constant() {
                return Err(Error::NotAFibration("row one varies along the fiber".into()));
            }
            beta.push(g.constant_term());
        }
        let chart = (0..3)
            .filter(|&j| !beta[j].is_zero())
            .max_by(|&a, &c| beta[a].abs().cmp(&beta[c].abs()).then(c.cmp(&a)))
            .ok_or(Error::RankZeroLocus)?;
        Ok((beta, chart))
    }

    /// Equations of the fiber over `b` in the fiber variables; for a
    /// degeneracy locus, the two minors through the chart column.
    pub fn fiber_equations(&self, b: &[Rational]) -> Result<Vec<Poly>> {
        let assign = self.base_assignment(b)?;
        let fv = self.fiber_vars();
        let raw: Vec<Poly> = match &self.defining {
            Defining::Forms(fs) => fs.iter().map(|f| f.poly().partial_eval(&assign).restrict_vars(&fv)).collect(),
            Defining::Degeneracy(_) => {
                let (beta, i) = self.row_one_at(b)?;
                let m = self.matrix().expect("matrix");
                let r: Vec<Poly> = m[1].iter().map(|f| f.partial_eval(&assign).restrict_vars(&fv)).collect();
                (0..3)
                    .filter(|&j| j != i)
                    .map(|j| &r[j].scale(&beta[i]) - &r[i].scale(&beta[j]))
                    .collect()
            }
        };
        let mut out = vec![];
        for e in raw {
            if e.is_zero() {
                continue;
            }
            if e.is_constant() {
                return Err(Error::NotAFibration("base point lies outside the image of the projection".into()));
            }
            out.push(e);
        }
        Ok(out)
    }

    /// The fiber over `b` as an unmarked genus-one curve; fails on singular fibers.
    pub fn fiber_model_at(&self, b: &[Rational]) -> Result<FiberCurve> {
        let eqs = self.fiber_equations(b)?;
        let sizes: Vec<usize> = self.fiber_blocks().iter().map(|&k| self.ambient.block_range(k).len()).collect();
        let deg = |p: &Poly| p.total_degree().unwrap_or(0);
        let curve = match (sizes.as_slice(), eqs.as_slice()) {
            ([3], [f]) if deg(f) == 3 => FiberCurve::PlaneCubic(f.clone()),
            ([2, 2], [f]) if GradedSpace::p1_power(2).homogeneous_degree(f) == Some(vec![2, 2]) => {
                FiberCurve::Biquadratic(f.clone())
            }
            ([4], [q1, q2]) if deg(q1) == 2 && deg(q2) == 2 => FiberCurve::QuadricPair(q1.clone(), q2.clone()),
            _ => {
                return Err(Error::NotAFibration(format!(
                    "fiber blocks {sizes:?} cut by {} equations are not a supported genus-one model",
                    eqs.len()
                )))
            }
        };
        if !curve.is_smooth()? {
            return Err(Error::SingularFiber);
        }
        Ok(curve)
    }

    pub fn to_json(&self) -> SpaceJson {
        let defining = match &self.defining {
            Defining::Forms(fs) => DefiningJson::Forms(fs.iter().map(|f| f.to_json()).collect()),
            Defining::Degeneracy(m) => {
                DefiningJson::Matrix(m.iter().map(|r| r.iter().map(|f| f.to_json()).collect()).collect())
            }
        };
        SpaceJson { name: self.name.clone(), ambient: self.ambient.clone(), defining, base_blocks: self.base_blocks.clone() }
    }

    pub fn from_json(j: &SpaceJson) -> Result<Self> {
        let names = j.ambient.var_names();
        let load = |f: &FormJson| -> Result<MultiForm> {
            if f.vars != names {
                return Err(Error::InvalidInput("form variables differ from the ambient variables".into()));
            }
            let m = MultiForm::from_json(f)?;
            match &f.degree {
                Some(d) => MultiForm::with_degree(&j.ambient, m.poly().clone(), d.clone()),
                None => MultiForm::new(&j.ambient, m.poly().clone()),
            }
        };
        let defining = match &j.defining {
            DefiningJson::Forms(fs) => Defining::Forms(fs.iter().map(load).collect::<Result<_>>()?),
            DefiningJson::Matrix(m) => Defining::Degeneracy(
                m.iter().map(|r| r.iter().map(load).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?,
            ),
        };
        Self::new(&j.name, j.ambient.clone(), defining, j.base_blocks.clone())
    }
}

/// Wire format of a fibered space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub name: String,
    pub ambient: GradedSpace,
    pub defining: DefiningJson,
    pub base_blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefiningJson {
    Forms(Vec<FormJson>),
    Matrix(Vec<Vec<FormJson>>),
}

/// A fiber as an unmarked genus-one curve in the fiber variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberCurve {
    PlaneCubic(Poly),
    Biquadratic(Poly),
    QuadricPair(Poly, Poly),
}

impl FiberCurve {
    pub fn kind(&self) -> &'static str {
        match self {
            FiberCurve::PlaneCubic(_) => "plane_cubic",
            FiberCurve::Biquadratic(_) => "biquadratic",
            FiberCurve::QuadricPair(..) => "quadric_intersection",
        }
    }

    pub fn equations(&self) -> Vec<Poly> {
        match self {
            FiberCurve::PlaneCubic(f) | FiberCurve::Biquadratic(f) => vec![f.clone()],
            FiberCurve::QuadricPair(a, b) => vec![a.clone(), b.clone()],
        }
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.equations().iter().all(|e| e.nvars() == p.len() && e.eval(p).is_zero())
    }

    pub fn is_smooth(&self) -> Result<bool> {
        match self {
            FiberCurve::PlaneCubic(f) => Ok(!ternary_cubic_discriminant(f)?.is_zero()),
            FiberCurve::Biquadratic(f) => biquadratic_is_smooth(f),
            FiberCurve::QuadricPair(a, b) => {
                let q = quadric_pencil_quartic(a, b);
                Ok(!q.is_zero() && q.is_squarefree())
            }
        }
    }

    /// The curve with `p` as its marked point.
    pub fn with_marked(&self, p: &[Rational]) -> Result<GenusOneModel> {
        match self {
            FiberCurve::PlaneCubic(f) => {
                let q: [Rational; 3] = p.to_vec().try_into().map_err(|_| Error::InvalidInput("expected 3 coordinates".into()))?;
                Ok(GenusOneModel::PlaneCubic(PlaneCubic::new(f.clone(), q)?))
            }
            FiberCurve::Biquadratic(f) => {
                let q: [Rational; 4] = p.to_vec().try_into().map_err(|_| Error::InvalidInput("expected 4 coordinates".into()))?;
                Ok(GenusOneModel::Biquadratic(Biquadratic::new(f.clone(), q)?))
            }
            FiberCurve::QuadricPair(a, b) => {
                let q: [Rational; 4] = p.to_vec().try_into().map_err(|_| Error::InvalidInput("expected 4 coordinates".into()))?;
                Ok(GenusOneModel::QuadricIntersection(QuadricIntersection::new(a.clone(), b.clone(), q)?))
            }
        }
    }
}

/// Same as [`FiberedSpace::fiber_model_at`].
pub fn fiber_model_at(space: &FiberedSpace, b: &[Rational]) -> Result<FiberCurve> {
    space.fiber_model_at(b)
}

/// True iff all 2x2 minors of the matrix vanish at `p`.
pub fn degeneracy_membership(space: &FiberedSpace, p: &[Rational]) -> Result<bool> {
    if space.matrix().is_none() {
        return Err(Error::InvalidInput("not a degeneracy locus".into()));
    }
    if p.len() != space.ambient().nvars() {
        return Err(Error::InvalidInput("point length differs from the ambient".into()));
    }
    Ok(space.equations().iter().all(|m| m.eval(p).is_zero()))
}
