//! Smooth plane cubics with a marked point and the chord-tangent group law.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::field::{big, Rational};
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};

pub type P2 = [Rational; 3];

pub fn cross(a: &[Rational], b: &[Rational]) -> P2 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Projective equality of two nonzero vectors of equal length.
pub fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

/// Primitive integer representative with positive first nonzero entry.
pub fn normalize_vec(v: &[Rational]) -> Result<Vec<Rational>> {
    let names: Vec<String> = (0..v.len()).map(|i| format!("x{i}")).collect();
    GradedSpace::projective_product(&[names]).normalize(v)
}

fn normalize3(v: P2) -> P2 {
    let n = normalize_vec(&v).expect("nonzero point");
    [n[0].clone(), n[1].clone(), n[2].clone()]
}

/// Primitive integer coordinates; chord arithmetic runs here to avoid
/// rational normalisation at every step.
type IP = [BigInt; 3];

/// Integer multiple of a cubic form, as (exponents, coefficient) terms.
type IForm = Vec<([u32; 3], BigInt)>;

fn to_iform(f: &Poly) -> IForm {
    let den = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    f.terms()
        .map(|(e, c)| ([e[0], e[1], e[2]], (c * Rational::from_integer(den.clone())).to_integer()))
        .collect()
}

fn ieval(f: &IForm, p: &IP) -> BigInt {
    let pw: Vec<[BigInt; 4]> = p
        .iter()
        .map(|x| {
            let x2 = x * x;
            let x3 = &x2 * x;
            [BigInt::one(), x.clone(), x2, x3]
        })
        .collect();
    let mut acc = BigInt::zero();
    for (e, c) in f {
        let mut t = c.clone();
        for i in 0..3 {
            if e[i] > 0 {
                t *= &pw[i][e[i] as usize];
            }
        }
        acc += t;
    }
    acc
}

fn iprimitive(mut v: IP) -> IP {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

fn ilin(a: &BigInt, p: &IP, b: &BigInt, q: &IP) -> IP {
    [a * &p[0] + b * &q[0], a * &p[1] + b * &q[1], a * &p[2] + b * &q[2]]
}

fn icross(a: &IP, b: &IP) -> IP {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn iproportional(a: &IP, b: &IP) -> bool {
    icross(a, b).iter().all(|x| x.is_zero())
}

fn to_ip(p: &[Rational]) -> IP {
    let n = normalize3([p[0].clone(), p[1].clone(), p[2].clone()]);
    [n[0].to_integer(), n[1].to_integer(), n[2].to_integer()]
}

fn from_ip(p: &IP) -> P2 {
    [big(&p[0]), big(&p[1]), big(&p[2])]
}

/// A plane cubic `F(x0, x1, x2) = 0` with marked point `origin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCubic {
    form: Poly,
    origin: P2,
    iform: IForm,
    igrad: [IForm; 3],
    iorigin: IP,
}

impl PlaneCubic {
    pub fn new(form: Poly, origin: P2) -> Result<Self> {
        if form.nvars() != 3 {
            return Err(Error::InvalidModel("plane cubic needs three variables".into()));
        }
        if form.is_zero() || form.terms().any(|(e, _)| e.iter().sum::<u32>() != 3) {
            return Err(Error::InvalidModel("plane cubic must be a nonzero ternary cubic form".into()));
        }
        let origin = normalize3(origin);
        let iform = to_iform(&form);
        let igrad = [0, 1, 2].map(|i| to_iform(&form.derivative(i)));
        let iorigin = to_ip(&origin);
        let c = PlaneCubic { form, origin, iform, igrad, iorigin };
        if !c.contains(&c.origin) {
            return Err(Error::NotOnCurve);
        }
        if c.gradient(&c.origin).iter().all(|x| x.is_zero()) {
            return Err(Error::SingularPoint);
        }
        Ok(c)
    }

    pub fn form(&self) -> &Poly {
        &self.form
    }

    pub fn origin(&self) -> &P2 {
        &self.origin
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.form.eval(p).is_zero()
    }

    pub fn gradient(&self, p: &[Rational]) -> P2 {
        [self.form.derivative(0).eval(p), self.form.derivative(1).eval(p), self.form.derivative(2).eval(p)]
    }

    fn checked(&self, p: &[Rational]) -> Result<IP> {
        if !self.contains(p) {
            return Err(Error::NotOnCurve);
        }
        Ok(to_ip(p))
    }

    /// Third intersection of the line `PQ` (the tangent when `P = Q`).
    pub fn third_point(&self, p: &P2, q: &P2) -> Result<P2> {
        let (p, q) = (self.checked(p)?, self.checked(q)?);
        Ok(from_ip(&self.ithird(&p, &q)?))
    }

    // Inputs are primitive points on the curve.
    fn ithird(&self, p: &IP, q: &IP) -> Result<IP> {
        if iproportional(p, q) {
            return self.itangent_third(p);
        }
        // F(sP + tQ) = st (c2 s + c1 t), up to the factor 2 dropped here
        let one = BigInt::one();
        let gp = ieval(&self.iform, &ilin(&one, p, &one, q));
        let gm = ieval(&self.iform, &ilin(&one, p, &-&one, q));
        let c1 = &gp + &gm;
        let c2 = &gp - &gm;
        if c1.is_zero() && c2.is_zero() {
            return Err(Error::DegenerateCubic);
        }
        Ok(iprimitive(ilin(&c1, p, &-c2, q)))
    }

    fn itangent_third(&self, p: &IP) -> Result<IP> {
        let t: IP = [0, 1, 2].map(|i| ieval(&self.igrad[i], p));
        if t.iter().all(|x| x.is_zero()) {
            return Err(Error::SingularPoint);
        }
        let r = (0..3)
            .map(|i| {
                let mut e: IP = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                e[i] = BigInt::one();
                icross(&t, &e)
            })
            .find(|r| r.iter().any(|x| !x.is_zero()) && !iproportional(r, p))
            .expect("a line has at least two coordinate intersections");
        // F(sP + tR) = t^2 (c1 s + c0 t)
        let one = BigInt::one();
        let c0 = ieval(&self.iform, &r);
        let c1 = ieval(&self.iform, &ilin(&one, p, &one, &r)) - &c0;
        if c1.is_zero() && c0.is_zero() {
            return Err(Error::DegenerateCubic);
        }
        Ok(iprimitive(ilin(&-c0, p, &c1, &r)))
    }

    fn iadd(&self, p: &IP, q: &IP) -> Result<IP> {
        let r = self.ithird(p, q)?;
        self.ithird(&self.iorigin, &r)
    }

    fn ineg(&self, p: &IP) -> Result<IP> {
        let oo = self.ithird(&self.iorigin, &self.iorigin)?;
        self.ithird(p, &oo)
    }

    pub fn add(&self, p: &P2, q: &P2) -> Result<P2> {
        let (p, q) = (self.checked(p)?, self.checked(q)?);
        Ok(from_ip(&self.iadd(&p, &q)?))
    }

    pub fn neg(&self, p: &P2) -> Result<P2> {
        let p = self.checked(p)?;
        Ok(from_ip(&self.ineg(&p)?))
    }

    pub fn mul(&self, n: i64, p: &P2) -> Result<P2> {
        let p = self.checked(p)?;
        let mut base = if n < 0 { self.ineg(&p)? } else { p };
        let mut k = n.unsigned_abs();
        let mut acc = self.iorigin.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.iadd(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.iadd(&base, &base)?;
            }
        }
        Ok(from_ip(&acc))
    }

    /// `[0, P, 2P, ..., nP]` by repeated addition.
    pub fn multiples(&self, n: usize, p: &P2) -> Result<Vec<P2>> {
        let p = self.checked(p)?;
        let mut acc = self.iorigin.clone();
        let mut out = vec![from_ip(&acc)];
        for _ in 0..n {
            acc = self.iadd(&acc, &p)?;
            out.push(from_ip(&acc));
        }
        Ok(out)
    }

    /// True iff the tangent at `p` meets the cubic only at `p`.
    pub fn is_flex(&self, p: &P2) -> Result<bool> {
        let ip = self.checked(p)?;
        Ok(iproportional(&self.itangent_third(&ip)?, &ip))
    }
}

/// A point on the line `l` different from `p` (which lies on `l`).
pub fn second_point_on_line(l: &[Rational], p: &[Rational]) -> P2 {
    for i in 0..3 {
        let mut e = [Rational::zero(), Rational::zero(), Rational::zero()];
        e[i] = Rational::one();
        let r = cross(l, &e);
        if r.iter().any(|x| !x.is_zero()) && !proportional(&r, p) {
            return r;
        }
    }
    unreachable!("a line has at least two coordinate intersections")
}

/// Group law of a plane cubic with marked point `origin`.
pub fn cubic_group_add(form: &Poly, origin: &P2, p: &P2, q: &P2) -> Result<P2> {
    PlaneCubic::new(form.clone(), origin.clone())?.add(p, q)
}
