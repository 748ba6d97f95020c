//! Genus-one models `y^2 = d f(x)`, short Weierstrass curves and the maps between them.
//!
//! Invariants `I`, `J` are always taken on the full right-hand side `d f`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::arith::{rational_nth_root, rational_sqrt, serde_rational};
use crate::poly::{PolyError, QPoly};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model polynomial must have degree 3 or 4")]
    BadDegree,
    #[error("model polynomial has repeated roots")]
    Singular,
    #[error("scalar factor d must be nonzero")]
    ZeroScalar,
    #[error("curve y^2 = x^3 + Ax + B is singular")]
    SingularCurve,
    #[error("Jacobian of the model is singular")]
    SingularJacobian,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("model is neither even nor of the reciprocal shape")]
    CaseOther,
    #[error("u0 is not a root of U^3 + A'U + B'")]
    NotARoot,
    #[error("u0 is not the x-coordinate of a 2-torsion point")]
    NotTwoTorsion,
    #[error("matrix is not invertible")]
    DegenerateMatrix,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Short Weierstrass curve `y^2 = x^3 + A x + B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EllipticCurve {
    #[serde(rename = "A", with = "serde_rational")]
    pub a: Rational,
    #[serde(rename = "B", with = "serde_rational")]
    pub b: Rational,
}

/// Affine point or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Rational, Rational),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointWire {
    Infinity(String),
    Affine(#[serde(with = "serde_rational")] Rational, #[serde(with = "serde_rational")] Rational),
}

/// Written as `["x", "y"]`, or `"inf"` for the point at infinity.
impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => PointWire::Infinity("inf".into()),
            CurvePoint::Affine(x, y) => PointWire::Affine(x.clone(), y.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PointWire::deserialize(d)? {
            PointWire::Infinity(t) if t == "inf" => Ok(CurvePoint::Infinity),
            PointWire::Infinity(t) => Err(serde::de::Error::custom(format!("unknown point {t}"))),
            PointWire::Affine(x, y) => Ok(CurvePoint::Affine(x, y)),
        }
    }
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine(x, y)
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        CurvePoint::Affine(q(x), q(y))
    }
}

impl EllipticCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self, ModelError> {
        let e = EllipticCurve { a, b };
        if e.discriminant().is_zero() {
            return Err(ModelError::SingularCurve);
        }
        Ok(e)
    }

    /// `-4A^3 - 27B^2`.
    pub fn discriminant(&self) -> Rational {
        -q(4) * &self.a * &self.a * &self.a - q(27) * &self.b * &self.b
    }

    pub fn cubic(&self) -> QPoly {
        QPoly::new(vec![self.b.clone(), self.a.clone(), Rational::zero(), Rational::one()])
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y * y == self.cubic().eval(x),
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), -y),
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &CurvePoint, r: &CurvePoint) -> CurvePoint {
        let (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) = (p, r) else {
            return if matches!(p, CurvePoint::Infinity) { r.clone() } else { p.clone() };
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return CurvePoint::Infinity;
            }
            (q(3) * x1 * x1 + &self.a) / (q(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = &slope * (x1 - &x3) - y1;
        CurvePoint::Affine(x3, y3)
    }

    pub fn mul(&self, k: i64, p: &CurvePoint) -> CurvePoint {
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut pow = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            pow = self.add(&pow, &pow);
            n >>= 1;
        }
        acc
    }

    /// `sum k_i G_i`.
    pub fn combine(&self, gens: &[CurvePoint], coeffs: &[i64]) -> CurvePoint {
        gens.iter().zip(coeffs).fold(CurvePoint::Infinity, |acc, (g, &k)| self.add(&acc, &self.mul(k, g)))
    }

    /// Quadratic twist `(A d^2, B d^3)`.
    pub fn twist(&self, d: &Rational) -> EllipticCurve {
        EllipticCurve { a: &self.a * d * d, b: &self.b * d * d * d }
    }

    /// Positive `u` with `A_2 = u^4 A_1` and `B_2 = u^6 B_1`.
    pub fn is_isomorphic(&self, other: &EllipticCurve) -> Option<Rational> {
        weighted_ratio((&self.a, &self.b), (&other.a, &other.b))
    }

    /// Quotient by the subgroup generated by `(u0, 0)`, returned in short form.
    pub fn two_isogeny_quotient(&self, u0: &Rational) -> Result<EllipticCurve, ModelError> {
        if !self.cubic().eval(u0).is_zero() {
            return Err(ModelError::NotTwoTorsion);
        }
        // Translate to y^2 = x(x^2 + a x + bh), then use the classical 2-isogeny.
        let a = q(3) * u0;
        let bh = q(3) * u0 * u0 + &self.a;
        let a2 = -q(2) * &a;
        let a4 = &a * &a - q(4) * &bh;
        Ok(short_form(&a2, &a4, &Rational::zero()))
    }

    /// `x`-coordinates of the rational 2-torsion points.
    pub fn two_torsion(&self) -> Vec<Rational> {
        let mut r = self.cubic().rational_roots();
        r.dedup();
        r
    }
}

/// Short form of `y^2 = x^3 + a2 x^2 + a4 x + a6`.
pub fn short_form(a2: &Rational, a4: &Rational, a6: &Rational) -> EllipticCurve {
    let s = a2 / q(3);
    EllipticCurve { a: a4 - a2 * &s, b: q(2) * &s * &s * &s - a4 * &s + a6 }
}

/// Positive `u` with `x_2 = u^4 x_1` and `y_2 = u^6 y_1`, if one exists.
pub fn weighted_ratio(p1: (&Rational, &Rational), p2: (&Rational, &Rational)) -> Option<Rational> {
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    if x1.is_zero() != x2.is_zero() || y1.is_zero() != y2.is_zero() {
        return None;
    }
    let u = match (x1.is_zero(), y1.is_zero()) {
        (true, true) => return None,
        (true, false) => rational_nth_root(&(y2 / y1), 6)?,
        (false, true) => rational_nth_root(&(x2 / x1), 4)?,
        (false, false) => rational_sqrt(&((y2 * x1) / (y1 * x2)))?,
    };
    let u = u.abs();
    let u2 = &u * &u;
    let u4 = &u2 * &u2;
    (&u4 * x1 == *x2 && &u4 * &u2 * y1 == *y2).then_some(u)
}

/// Model `y^2 = d f(x)` with `deg f` in {3, 4} and `f` squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenusOneModel {
    d: Rational,
    f: QPoly,
}

#[derive(Serialize, Deserialize)]
struct ModelWire {
    #[serde(with = "serde_rational")]
    d: Rational,
    #[serde(with = "serde_rational::vec")]
    f: Vec<Rational>,
}

impl Serialize for GenusOneModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModelWire { d: self.d.clone(), f: self.f.coeffs().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenusOneModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ModelWire::deserialize(d)?;
        GenusOneModel::new(w.d, QPoly::new(w.f)).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GenusOneModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.rhs())
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({}) x + ({})", self.a, self.b)
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl GenusOneModel {
    pub fn new(d: Rational, f: QPoly) -> Result<Self, ModelError> {
        if d.is_zero() {
            return Err(ModelError::ZeroScalar);
        }
        match f.degree() {
            Some(3 | 4) => {}
            _ => return Err(ModelError::BadDegree),
        }
        if f.discriminant()?.is_zero() {
            return Err(ModelError::Singular);
        }
        Ok(GenusOneModel { d, f })
    }

    /// Model `y^2 = g(x)` with `d = 1`.
    pub fn from_rhs(g: QPoly) -> Result<Self, ModelError> {
        Self::new(Rational::one(), g)
    }

    /// Model from integer coefficients `a0..a4` of the right-hand side.
    pub fn from_i64(coeffs: &[i64]) -> Result<Self, ModelError> {
        Self::from_rhs(QPoly::from_i64(coeffs))
    }

    /// Splits off the leading coefficient so that `f` is monic.
    pub fn normalized(&self) -> GenusOneModel {
        let g = self.rhs();
        let lead = g.leading();
        GenusOneModel { d: lead, f: g.monic() }
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn f(&self) -> &QPoly {
        &self.f
    }

    /// `d f(x)`.
    pub fn rhs(&self) -> QPoly {
        self.f.scale(&self.d)
    }

    /// Coefficients `a0..a4` of `d f` as a binary quartic.
    pub fn quartic_coeffs(&self) -> [Rational; 5] {
        let g = self.rhs();
        [g.coeff(0), g.coeff(1), g.coeff(2), g.coeff(3), g.coeff(4)]
    }

    pub fn invariants(&self) -> (Rational, Rational) {
        invariants_of(&self.rhs())
    }

    /// `y^2 = x^3 - 27 I x - 27 J`.
    pub fn jacobian(&self) -> Result<EllipticCurve, ModelError> {
        let (i, j) = self.invariants();
        EllipticCurve::new(-q(27) * i, -q(27) * j).map_err(|_| ModelError::SingularJacobian)
    }

    /// `y^2 = x^3 - (I/3) x - J/27`, isomorphic to [`Self::jacobian`] with `u = 1/3`.
    pub fn jacobian_normalized(&self) -> Result<EllipticCurve, ModelError> {
        let (i, j) = self.invariants();
        EllipticCurve::new(-i / q(3), -j / q(27)).map_err(|_| ModelError::SingularJacobian)
    }

    /// Model `y^2 = λ^2 g(Mx) (γx+δ)^4`, the image of this model under the inverse of `t`.
    pub fn transformed(&self, t: &MoebiusMap, lambda: &Rational) -> Result<GenusOneModel, ModelError> {
        GenusOneModel::from_rhs(apply_transform(&self.rhs(), t, lambda)?)
    }
}

/// `(I, J)` of a binary quartic given by coefficients `a0..a4`.
pub fn invariants_of(g: &QPoly) -> (Rational, Rational) {
    let a: Vec<Rational> = (0..5).map(|i| g.coeff(i)).collect();
    let (a0, a1, a2, a3, a4) = (&a[0], &a[1], &a[2], &a[3], &a[4]);
    let i = q(12) * a4 * a0 - q(3) * a3 * a1 + a2 * a2;
    let j =
        q(72) * a4 * a2 * a0 + q(9) * a3 * a2 * a1 - q(27) * a4 * a1 * a1 - q(27) * a3 * a3 * a0 - q(2) * a2 * a2 * a2;
    (i, j)
}

/// Map `(x, y) -> ((αx+β)/(γx+δ), e y / (γx+δ)^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoebiusMap {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    #[serde(with = "serde_rational")]
    pub e: Rational,
}

impl MoebiusMap {
    pub fn new(
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
        e: Rational,
    ) -> Result<Self, ModelError> {
        if (&alpha * &delta - &beta * &gamma).is_zero() {
            return Err(ModelError::DegenerateMatrix);
        }
        Ok(MoebiusMap { alpha, beta, gamma, delta, e })
    }

    pub fn from_i64(alpha: i64, beta: i64, gamma: i64, delta: i64, e: Rational) -> Result<Self, ModelError> {
        Self::new(q(alpha), q(beta), q(gamma), q(delta), e)
    }

    pub fn identity() -> Self {
        MoebiusMap { alpha: q(1), beta: q(0), gamma: q(0), delta: q(1), e: q(1) }
    }

    /// `(x, y) -> (x, -y)`.
    pub fn hyperelliptic() -> Self {
        MoebiusMap { e: q(-1), ..Self::identity() }
    }

    pub fn det(&self) -> Rational {
        &self.alpha * &self.delta - &self.beta * &self.gamma
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            alpha: &next.alpha * &self.alpha + &next.beta * &self.gamma,
            beta: &next.alpha * &self.beta + &next.beta * &self.delta,
            gamma: &next.gamma * &self.alpha + &next.delta * &self.gamma,
            delta: &next.gamma * &self.beta + &next.delta * &self.delta,
            e: &self.e * &next.e,
        }
    }

    /// Equality as maps: entries agree up to `t` on the matrix and `t^2` on `e`.
    pub fn same_map(&self, other: &MoebiusMap) -> bool {
        let a = [&self.alpha, &self.beta, &self.gamma, &self.delta];
        let b = [&other.alpha, &other.beta, &other.gamma, &other.delta];
        let Some(k) = (0..4).find(|&k| !a[k].is_zero()) else {
            return false;
        };
        let t = b[k] / a[k];
        (0..4).all(|i| &(a[i] * &t) == b[i]) && &self.e * &t * &t == other.e
    }

    /// `k` with `M^2 = k I`, if the matrix squares to a scalar.
    pub fn square_scalar(&self) -> Option<Rational> {
        let sq = self.then(self);
        (sq.beta.is_zero() && sq.gamma.is_zero() && sq.alpha == sq.delta).then_some(sq.alpha)
    }

    pub fn is_involution(&self) -> bool {
        match self.square_scalar() {
            Some(k) => &self.e * &self.e == &k * &k,
            None => false,
        }
    }

    pub fn is_scalar_matrix(&self) -> bool {
        self.beta.is_zero() && self.gamma.is_zero() && self.alpha == self.delta
    }

    /// Image of an affine point with `γx + δ ≠ 0`.
    pub fn apply(&self, x: &Rational, y: &Rational) -> Option<(Rational, Rational)> {
        let den = &self.gamma * x + &self.delta;
        if den.is_zero() {
            return None;
        }
        Some(((&self.alpha * x + &self.beta) / &den, &self.e * y / (&den * &den)))
    }
}

/// `λ^2 f((αx+β)/(γx+δ)) (γx+δ)^4`, treating `f` as a binary quartic.
pub fn apply_transform(f: &QPoly, t: &MoebiusMap, lambda: &Rational) -> Result<QPoly, ModelError> {
    if t.det().is_zero() {
        return Err(ModelError::DegenerateMatrix);
    }
    match f.degree() {
        Some(3 | 4) => {}
        _ => return Err(ModelError::BadDegree),
    }
    let g = f.homogeneous_substitute(4, &t.alpha, &t.beta, &t.gamma, &t.delta);
    Ok(g.scale(&(lambda * lambda)))
}

/// True when `t` maps the model to itself and is an involution.
pub fn verify_involution(m: &GenusOneModel, t: &MoebiusMap) -> bool {
    if !t.is_involution() {
        return false;
    }
    let g = m.rhs();
    match apply_transform(&g, t, &Rational::one()) {
        Ok(h) => h == g.scale(&(&t.e * &t.e)),
        Err(_) => false,
    }
}

/// True when `t` maps points of `source` onto points of `target`.
pub fn maps_onto(source: &GenusOneModel, target: &GenusOneModel, t: &MoebiusMap) -> bool {
    match apply_transform(&target.rhs(), t, &Rational::one()) {
        Ok(h) => h == source.rhs().scale(&(&t.e * &t.e)),
        Err(_) => false,
    }
}

/// Positive `μ` with `I_2 = μ^4 I_1` and `J_2 = μ^6 J_1`.
pub fn same_jacobian(m1: &GenusOneModel, m2: &GenusOneModel) -> Option<Rational> {
    let (i1, j1) = m1.invariants();
    let (i2, j2) = m2.invariants();
    weighted_ratio((&i1, &j1), (&i2, &j2))
}

/// Shape of a quartic model relative to a distinguished involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelCase {
    /// `y^2 = d (x^4 + b x^2 + c)`.
    Even {
        d: Rational,
        b: Rational,
        c: Rational,
    },
    /// `y^2 = d (x^4 + b x^3 + c x^2 + b ε x + ε^2)`.
    Reciprocal {
        d: Rational,
        b: Rational,
        c: Rational,
        eps: Rational,
    },
    Other,
}

pub fn detect_case(m: &GenusOneModel) -> ModelCase {
    let g = m.rhs();
    if g.degree() != Some(4) {
        return ModelCase::Other;
    }
    let n = m.normalized();
    let f = n.f();
    let (b, c, d1, e) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
    if b.is_zero() && d1.is_zero() {
        return ModelCase::Even { d: n.d().clone(), b: c, c: e };
    }
    if b.is_zero() {
        return ModelCase::Other;
    }
    let eps = &d1 / &b;
    if &eps * &eps != e {
        return ModelCase::Other;
    }
    ModelCase::Reciprocal { d: n.d().clone(), b, c, eps }
}

/// The quotient of the model by the involution attached to its case.
pub fn quotient_curve(m: &GenusOneModel) -> Result<GenusOneModel, ModelError> {
    match detect_case(m) {
        ModelCase::Even { d, b, c } => GenusOneModel::new(d, QPoly::new(vec![q(0), c, b, q(1)])),
        ModelCase::Reciprocal { d, b, c, eps } => {
            let left = QPoly::new(vec![-q(4) * &eps, q(0), q(1)]);
            let right = QPoly::new(vec![&c - q(2) * &eps, b, q(1)]);
            GenusOneModel::new(d, &left * &right)
        }
        ModelCase::Other => Err(ModelError::CaseOther),
    }
}

/// The model `y^2 = d x^4 + 3 u0 x^2 + (A' + 3 u0^2) / d`.
pub fn criterion_model(a1: &Rational, b1: &Rational, u0: &Rational, d: &Rational) -> Result<GenusOneModel, ModelError> {
    if d.is_zero() {
        return Err(ModelError::ZeroScalar);
    }
    let cubic = QPoly::new(vec![b1.clone(), a1.clone(), q(0), q(1)]);
    if !cubic.eval(u0).is_zero() {
        return Err(ModelError::NotARoot);
    }
    let f = QPoly::new(vec![(a1 + q(3) * u0 * u0) / (d * d), q(0), q(3) * u0 / d, q(0), q(1)]);
    GenusOneModel::new(d.clone(), f)
}

/// One candidate of the criterion construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionCandidate {
    pub u0: Rational,
    pub model: Result<GenusOneModel, ModelError>,
    /// Whether the 2-isogeny quotient at `u0` is isomorphic to the target.
    pub matches_target: Option<bool>,
}

/// Runs [`criterion_model`] on every rational 2-torsion point of `E' = (A', B')`.
pub fn criterion_candidates(
    a1: &Rational,
    b1: &Rational,
    d: &Rational,
    target: Option<&EllipticCurve>,
) -> Result<Vec<CriterionCandidate>, ModelError> {
    let e = EllipticCurve::new(a1.clone(), b1.clone())?;
    let mut out = Vec::new();
    for u0 in e.two_torsion() {
        let matches_target = match target {
            Some(t) => Some(e.two_isogeny_quotient(&u0)?.is_isomorphic(t).is_some()),
            None => None,
        };
        out.push(CriterionCandidate { model: criterion_model(a1, b1, &u0, d), u0, matches_target });
    }
    Ok(out)
}

/// `x^4 - 6 x_P x^2 + 8 y_P x - 3 x_P^2 - 4 A'`, or the cubic of `E'` when `P = ∞`.
pub fn descent_quartic(e: &EllipticCurve, p: &CurvePoint) -> Result<QPoly, ModelError> {
    if !e.contains(p) {
        return Err(ModelError::PointNotOnCurve);
    }
    Ok(match p {
        CurvePoint::Infinity => e.cubic(),
        CurvePoint::Affine(x, y) => QPoly::new(vec![-q(3) * x * x - q(4) * &e.a, q(8) * y, -q(6) * x, q(0), q(1)]),
    })
}

/// Model attached to one representative of `E_d / 2 E_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentModel {
    pub point: CurvePoint,
    pub model: GenusOneModel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentEnumeration {
    /// The twist the representatives live on.
    pub twist: EllipticCurve,
    /// True when `∞` was among the representatives; its class is the elliptic one and is excluded.
    pub elliptic_class_present: bool,
    pub models: Vec<DescentModel>,
}

/// One model `y^2 = d f_P(x)` per non-trivial representative `P` on `E_d`.
pub fn enumerate_descent_models(
    e: &EllipticCurve,
    d: &Rational,
    reps: &[CurvePoint],
) -> Result<DescentEnumeration, ModelError> {
    let twist = e.twist(d);
    let mut models = Vec::new();
    let mut elliptic_class_present = false;
    for p in reps {
        if !twist.contains(p) {
            return Err(ModelError::PointNotOnCurve);
        }
        if *p == CurvePoint::Infinity {
            elliptic_class_present = true;
            continue;
        }
        let f = descent_quartic(&twist, p)?;
        models.push(DescentModel { point: p.clone(), model: GenusOneModel::new(d.clone(), f)? });
    }
    Ok(DescentEnumeration { twist, elliptic_class_present, models })
}
