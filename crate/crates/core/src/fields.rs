//! Galois-closure fingerprints of small number fields.
//!
//! A [`FieldFingerprint`] records the degree and group of a Galois closure together with
//! all of its quadratic subfields. Splitting fields of polynomials of degree at most four
//! and the fields written as [`FieldSpec`] are reduced to fingerprints and compared.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use crate::arith::{self, rational_sqrt, serde_rational, ArithError};
use crate::models::{GenusOneModel, MoebiusMap};
use crate::poly::{PolyError, QPoly};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("polynomial has repeated roots")]
    RepeatedRoots,
    #[error("polynomial degree must be between 1 and 4")]
    Degree,
    #[error("field spec is malformed: {0}")]
    BadSpec(String),
    #[error("nested radical collapses to a field of degree at most 2")]
    DegenerateSpec,
    #[error("compositum of {0} and {1} is not supported")]
    UnsupportedCompositum(String, String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Isomorphism type of a Galois group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    /// Abelian group by invariant factors; empty for the trivial group.
    Abelian(Vec<u64>),
    /// `A ⋊ C2` with inversion, `A` given by invariant factors; `[3]` is S3 and `[4]` is D4.
    Dihedral(Vec<u64>),
    A4,
    S4,
}

/// Invariant factors of a product of cyclic groups of the given orders.
pub fn invariant_factors(cyclic: &[u64]) -> Vec<u64> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &n in cyclic {
        for (p, e) in arith::factor_u64(n) {
            by_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in powers.iter().enumerate() {
            out[i] *= q;
        }
    }
    out.reverse();
    out
}

impl GroupLabel {
    pub fn trivial() -> Self {
        GroupLabel::Abelian(vec![])
    }

    pub fn c2() -> Self {
        GroupLabel::Abelian(vec![2])
    }

    pub fn v4() -> Self {
        GroupLabel::Abelian(vec![2, 2])
    }

    pub fn c4() -> Self {
        GroupLabel::Abelian(vec![4])
    }

    pub fn d4() -> Self {
        GroupLabel::Dihedral(vec![4])
    }

    pub fn s3() -> Self {
        GroupLabel::Dihedral(vec![3])
    }

    pub fn elementary(rank: u32) -> Self {
        GroupLabel::Abelian(vec![2; rank as usize])
    }

    pub fn order(&self) -> u64 {
        match self {
            GroupLabel::Abelian(f) => f.iter().product(),
            GroupLabel::Dihedral(f) => 2 * f.iter().product::<u64>(),
            GroupLabel::A4 => 12,
            GroupLabel::S4 => 24,
        }
    }

    pub fn is_elementary_two(&self) -> bool {
        matches!(self, GroupLabel::Abelian(f) if f.iter().all(|&n| n == 2))
    }

    /// The label of `G × C2`.
    pub fn times_c2(&self) -> Option<GroupLabel> {
        let push = |f: &[u64]| {
            let mut v = f.to_vec();
            v.push(2);
            invariant_factors(&v)
        };
        match self {
            GroupLabel::Abelian(f) => Some(GroupLabel::Abelian(push(f))),
            GroupLabel::Dihedral(f) => Some(GroupLabel::Dihedral(push(f))),
            _ => None,
        }
    }

    fn fmt_factors(f: &[u64]) -> String {
        if f.iter().all(|&n| n == 2) && f.len() >= 2 {
            return if f.len() == 2 { "V4".into() } else { format!("C2^{}", f.len()) };
        }
        f.iter().map(|n| format!("C{n}")).collect::<Vec<_>>().join("xC").replace("xCC", "xC")
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Abelian(v) if v.is_empty() => write!(f, "1"),
            GroupLabel::Abelian(v) => write!(f, "{}", Self::fmt_factors(v)),
            GroupLabel::Dihedral(v) if v == &[3] => write!(f, "S3"),
            GroupLabel::Dihedral(v) if v == &[4] => write!(f, "D4"),
            GroupLabel::Dihedral(v) if v.len() == 1 => write!(f, "D{}", v[0]),
            GroupLabel::Dihedral(v) => write!(f, "Dih({})", Self::fmt_factors(v)),
            GroupLabel::A4 => write!(f, "A4"),
            GroupLabel::S4 => write!(f, "S4"),
        }
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Degree, group and quadratic subfields of a Galois closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldFingerprint {
    #[serde(rename = "degree")]
    pub closure_degree: u64,
    pub group: GroupLabel,
    #[serde(rename = "subfields")]
    pub quadratic_subfields: BTreeSet<i64>,
}

impl fmt::Display for FieldFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subs: Vec<String> = self.quadratic_subfields.iter().map(|m| m.to_string()).collect();
        write!(f, "degree {} {} subfields {{{}}}", self.closure_degree, self.group, subs.join(", "))
    }
}

/// Product closure of a set of squarefree integers, without 1.
pub fn product_closure(gens: impl IntoIterator<Item = i64>) -> Result<BTreeSet<i64>, FieldError> {
    let mut set: BTreeSet<i64> = BTreeSet::new();
    for g in gens {
        if g == 1 || set.contains(&g) {
            continue;
        }
        let mut next: Vec<i64> = vec![g];
        for &m in &set {
            next.push(sf_product(m, g)?);
        }
        set.extend(next.into_iter().filter(|&m| m != 1));
    }
    Ok(set)
}

fn sf_product(a: i64, b: i64) -> Result<i64, FieldError> {
    let p = BigInt::from(a) * BigInt::from(b);
    Ok(arith::to_i64(&arith::squarefree_part(&p)?.0)?)
}

fn sf(r: &Rational) -> Result<i64, FieldError> {
    Ok(arith::sf_i64(r)?)
}

impl FieldFingerprint {
    pub fn rationals() -> Self {
        FieldFingerprint { closure_degree: 1, group: GroupLabel::trivial(), quadratic_subfields: BTreeSet::new() }
    }

    /// Fingerprint of the multiquadratic field generated by the given square roots.
    pub fn multiquadratic(gens: impl IntoIterator<Item = i64>) -> Result<Self, FieldError> {
        let subs = product_closure(gens)?;
        let rank = (subs.len() as u64 + 1).trailing_zeros();
        Ok(FieldFingerprint {
            closure_degree: 1 << rank,
            group: GroupLabel::elementary(rank),
            quadratic_subfields: subs,
        })
    }

    /// Adjoins `√m` to the closure.
    fn adjoin_sqrt(&self, m: i64) -> Result<Self, FieldError> {
        if m == 1 || self.quadratic_subfields.contains(&m) {
            return Ok(self.clone());
        }
        let group = self
            .group
            .times_c2()
            .ok_or_else(|| FieldError::UnsupportedCompositum(self.to_string(), format!("Q(sqrt({m}))")))?;
        let mut gens: Vec<i64> = self.quadratic_subfields.iter().copied().collect();
        gens.push(m);
        Ok(FieldFingerprint {
            closure_degree: self.closure_degree * 2,
            group,
            quadratic_subfields: product_closure(gens)?,
        })
    }

    /// Fingerprint of the compositum of two Galois closures.
    ///
    /// Exact when one side is multiquadratic; other pairs are rejected unless equal.
    pub fn join(&self, other: &FieldFingerprint) -> Result<Self, FieldError> {
        let (small, big) = if self.group.is_elementary_two() { (self, other) } else { (other, self) };
        if small.group.is_elementary_two() {
            let mut acc = big.clone();
            for &m in &small.quadratic_subfields {
                acc = acc.adjoin_sqrt(m)?;
            }
            return Ok(acc);
        }
        if self == other {
            return Ok(self.clone());
        }
        Err(FieldError::UnsupportedCompositum(self.to_string(), other.to_string()))
    }
}

/// Number fields presented by radicals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    Quadratic {
        m: i64,
    },
    Biquadratic {
        m: [i64; 2],
    },
    /// `Q(√(a ± √b))`.
    NestedRadical {
        #[serde(with = "serde_rational")]
        a: Rational,
        #[serde(with = "serde_rational")]
        b: Rational,
    },
    Compositum {
        fields: Vec<FieldSpec>,
    },
}

impl FieldSpec {
    pub fn quadratic(m: i64) -> Self {
        FieldSpec::Quadratic { m }
    }

    pub fn biquadratic(m1: i64, m2: i64) -> Self {
        FieldSpec::Biquadratic { m: [m1, m2] }
    }

    pub fn nested(a: i64, b: i64) -> Self {
        FieldSpec::NestedRadical { a: Rational::from_integer(a.into()), b: Rational::from_integer(b.into()) }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Quadratic { m } => write!(f, "Q(sqrt({m}))"),
            FieldSpec::Biquadratic { m } => write!(f, "Q(sqrt({}), sqrt({}))", m[0], m[1]),
            FieldSpec::NestedRadical { a, b } => write!(f, "Q(sqrt({a} +- sqrt({b})))"),
            FieldSpec::Compositum { fields } => {
                let parts: Vec<String> = fields.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", parts.join(" . "))
            }
        }
    }
}

fn check_squarefree(m: i64) -> Result<(), FieldError> {
    let (s, _) = arith::squarefree_part(&BigInt::from(m))?;
    if m == 1 || s != BigInt::from(m) {
        return Err(FieldError::BadSpec(format!("{m} is not a squarefree integer other than 1")));
    }
    Ok(())
}

/// Closure of `Q(√(a + √b))`, allowing degenerate inputs.
fn nested_radical_fingerprint(a: &Rational, b: &Rational) -> Result<FieldFingerprint, FieldError> {
    if b.is_zero() || rational_sqrt(b).is_some() {
        return Err(FieldError::BadSpec(format!("{b} is a rational square")));
    }
    let r = a * a - b;
    if r.is_zero() {
        // a + √b with b = a^2 would make b a square.
        unreachable!("a^2 = b contradicts b non-square");
    }
    if let Some(c) = rational_sqrt(&r) {
        // √(a + √b) = √p + √q with p + q = a and 4pq = b.
        let two = Rational::from_integer(2.into());
        let p = (a + &c) / &two;
        let qq = (a - &c) / &two;
        return FieldFingerprint::multiquadratic([sf(&p)?, sf(&qq)?]);
    }
    let sb = sf(b)?;
    let sr = sf(&r)?;
    if sf_product(sb, sr)? == 1 {
        return Ok(FieldFingerprint {
            closure_degree: 4,
            group: GroupLabel::c4(),
            quadratic_subfields: BTreeSet::from([sb]),
        });
    }
    Ok(FieldFingerprint { closure_degree: 8, group: GroupLabel::d4(), quadratic_subfields: product_closure([sb, sr])? })
}

pub fn fingerprint_of_spec(spec: &FieldSpec) -> Result<FieldFingerprint, FieldError> {
    match spec {
        FieldSpec::Rationals => Ok(FieldFingerprint::rationals()),
        FieldSpec::Quadratic { m } => {
            check_squarefree(*m)?;
            FieldFingerprint::multiquadratic([*m])
        }
        FieldSpec::Biquadratic { m } => {
            check_squarefree(m[0])?;
            check_squarefree(m[1])?;
            if m[0] == m[1] {
                return Err(FieldError::BadSpec("biquadratic generators must differ".into()));
            }
            FieldFingerprint::multiquadratic(*m)
        }
        FieldSpec::NestedRadical { a, b } => {
            let fp = nested_radical_fingerprint(a, b)?;
            if fp.closure_degree <= 2 {
                return Err(FieldError::DegenerateSpec);
            }
            Ok(fp)
        }
        FieldSpec::Compositum { fields } => {
            fields.iter().try_fold(FieldFingerprint::rationals(), |acc, s| acc.join(&fingerprint_of_spec(s)?))
        }
    }
}

/// Closure of a field spec that may collapse to degree two or less.
pub fn fingerprint_of_spec_lenient(spec: &FieldSpec) -> Result<FieldFingerprint, FieldError> {
    match spec {
        FieldSpec::NestedRadical { a, b } => nested_radical_fingerprint(a, b),
        FieldSpec::Compositum { fields } => {
            fields.iter().try_fold(FieldFingerprint::rationals(), |acc, s| acc.join(&fingerprint_of_spec_lenient(s)?))
        }
        other => fingerprint_of_spec(other),
    }
}

/// `y^3 - c y^2 + (bd - 4e) y - (b^2 e + d^2 - 4ce)` for the monic form of `f`.
pub fn resolvent_cubic(f: &QPoly) -> Result<QPoly, FieldError> {
    if f.degree() != Some(4) {
        return Err(FieldError::Degree);
    }
    let g = f.monic();
    let (b, c, d, e) = (g.coeff(3), g.coeff(2), g.coeff(1), g.coeff(0));
    let four = Rational::from_integer(4.into());
    Ok(QPoly::new(vec![-(&b * &b * &e + &d * &d - &four * &c * &e), &b * &d - &four * &e, -c, Rational::one()]))
}

/// Fingerprint of an irreducible quartic.
fn irreducible_quartic_fingerprint(f: &QPoly) -> Result<FieldFingerprint, FieldError> {
    let g = f.monic();
    let (b, c, e) = (g.coeff(3), g.coeff(2), g.coeff(0));
    let disc = g.discriminant()?;
    let sd = sf(&disc)?;
    let mut roots = resolvent_cubic(&g)?.rational_roots();
    roots.dedup();
    let four = Rational::from_integer(4.into());
    // Generator of the quadratic field fixed by the stabilizer of the pairing attached to t.
    let pairing_square = |t: &Rational| -> Rational {
        let u = t * t - &four * &e;
        if u.is_zero() {
            &b * &b - &four * (&c - t)
        } else {
            u
        }
    };
    match roots.len() {
        0 if sd == 1 => {
            Ok(FieldFingerprint { closure_degree: 12, group: GroupLabel::A4, quadratic_subfields: BTreeSet::new() })
        }
        0 => Ok(FieldFingerprint {
            closure_degree: 24,
            group: GroupLabel::S4,
            quadratic_subfields: BTreeSet::from([sd]),
        }),
        1 => {
            let su = sf(&pairing_square(&roots[0]))?;
            if sf_product(su, sd)? == 1 {
                Ok(FieldFingerprint {
                    closure_degree: 4,
                    group: GroupLabel::c4(),
                    quadratic_subfields: BTreeSet::from([sd]),
                })
            } else {
                Ok(FieldFingerprint {
                    closure_degree: 8,
                    group: GroupLabel::d4(),
                    quadratic_subfields: product_closure([sd, su])?,
                })
            }
        }
        _ => {
            let gens: Vec<i64> = roots.iter().map(|t| sf(&pairing_square(t))).collect::<Result<_, _>>()?;
            FieldFingerprint::multiquadratic(gens)
        }
    }
}

/// Fingerprint of the splitting field of a squarefree polynomial of degree 1 to 4.
pub fn splitting_fingerprint(f: &QPoly) -> Result<FieldFingerprint, FieldError> {
    match f.degree() {
        Some(1..=4) => {}
        _ => return Err(FieldError::Degree),
    }
    if !f.is_squarefree() {
        return Err(FieldError::RepeatedRoots);
    }
    let fac = f.factor_low_degree()?;
    let mut acc = FieldFingerprint::rationals();
    for p in &fac.factors {
        let fp = match p.degree() {
            Some(1) => FieldFingerprint::rationals(),
            Some(2) => FieldFingerprint::multiquadratic([sf(&p.discriminant()?)?])?,
            Some(3) => {
                let sd = sf(&p.discriminant()?)?;
                if sd == 1 {
                    FieldFingerprint {
                        closure_degree: 3,
                        group: GroupLabel::Abelian(vec![3]),
                        quadratic_subfields: BTreeSet::new(),
                    }
                } else {
                    FieldFingerprint {
                        closure_degree: 6,
                        group: GroupLabel::s3(),
                        quadratic_subfields: BTreeSet::from([sd]),
                    }
                }
            }
            _ => irreducible_quartic_fingerprint(p)?,
        };
        acc = acc.join(&fp)?;
    }
    Ok(acc)
}

pub fn quartic_galois_group(f: &QPoly) -> Result<GroupLabel, FieldError> {
    if f.degree() != Some(4) {
        return Err(FieldError::Degree);
    }
    Ok(splitting_fingerprint(f)?.group)
}

/// Fixed points of an involution on a quartic model and the field they generate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointField {
    pub count: usize,
    /// Radical presentation when the fixed points are not simply the roots of the model.
    pub spec: Option<FieldSpec>,
    pub fingerprint: FieldFingerprint,
}

/// `Q(√v)` for rational `v`, as a spec.
fn sqrt_spec(v: &Rational) -> Result<FieldSpec, FieldError> {
    let s = sf(v)?;
    Ok(if s == 1 { FieldSpec::Rationals } else { FieldSpec::quadratic(s) })
}

/// Fixed points of `w` on `y^2 = g(x)` and the Galois closure of their field of definition.
///
/// Returns `None` when `w` has no fixed points off the branch locus.
pub fn fixed_point_field(m: &GenusOneModel, w: &MoebiusMap) -> Result<Option<FixedPointField>, FieldError> {
    let g = m.rhs();
    if g.degree() != Some(4) {
        return Err(FieldError::Degree);
    }
    let k = w.square_scalar().ok_or_else(|| FieldError::BadSpec("map is not an involution".into()))?;
    if w.is_scalar_matrix() {
        // y -> (e / α^2) y on every fibre: either identity or the hyperelliptic involution.
        if w.e == &w.alpha * &w.alpha {
            return Err(FieldError::BadSpec("identity map".into()));
        }
        return Ok(Some(FixedPointField { count: 4, spec: None, fingerprint: splitting_fingerprint(&g)? }));
    }
    // Non-scalar involutions have trace zero, every fixed x has (γx+δ)^2 = k and y -> (e/k) y.
    if w.e != k {
        return Ok(None);
    }
    let (alpha, beta, gamma) = (&w.alpha, &w.beta, &w.gamma);
    let mut parts = Vec::new();
    if gamma.is_zero() {
        let x0 = -beta / (Rational::from_integer(2.into()) * alpha);
        parts.push(sqrt_spec(&g.eval(&x0))?);
        parts.push(sqrt_spec(&g.leading())?);
    } else if let Some(r) = rational_sqrt(&k) {
        for x0 in [(alpha + &r) / gamma, (alpha - &r) / gamma] {
            parts.push(sqrt_spec(&g.eval(&x0))?);
        }
    } else {
        // x0 = (α + √k)/γ; evaluate g there as u + v √k.
        let (u, v) = eval_in_quadratic(&g, &(alpha / gamma), &(Rational::one() / gamma), &k);
        if v.is_zero() {
            parts.push(sqrt_spec(&k)?);
            parts.push(sqrt_spec(&u)?);
        } else {
            parts.push(FieldSpec::NestedRadical { a: u, b: &v * &v * &k });
        }
    }
    let spec = match parts.len() {
        1 => parts.pop().unwrap(),
        _ => FieldSpec::Compositum { fields: parts },
    };
    let fingerprint = fingerprint_of_spec_lenient(&spec)?;
    Ok(Some(FixedPointField { count: 4, spec: Some(spec), fingerprint }))
}

/// Evaluates `g(p + q √k)` as `u + v √k`.
fn eval_in_quadratic(g: &QPoly, p: &Rational, q: &Rational, k: &Rational) -> (Rational, Rational) {
    let mut u = Rational::zero();
    let mut v = Rational::zero();
    for c in g.coeffs().iter().rev() {
        let nu = &u * p + &v * q * k + c;
        let nv = &u * q + &v * p;
        u = nu;
        v = nv;
    }
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn resolvent_examples() {
        assert_eq!(resolvent_cubic(&QPoly::from_i64(&[-1, 0, 0, 0, 1])).unwrap(), QPoly::from_i64(&[0, 4, 0, 1]));
        // x^4 + p x^2 + r -> y^3 - p y^2 - 4 r y + 4 p r
        let (p, r) = (7i64, -3i64);
        assert_eq!(
            resolvent_cubic(&QPoly::from_i64(&[r, 0, p, 0, 1])).unwrap(),
            QPoly::from_i64(&[4 * p * r, -4 * r, -p, 1])
        );
        let f = QPoly::from_i64(&[47433, 832, -378, 0, 1]);
        let res = resolvent_cubic(&f).unwrap();
        assert_eq!(res, QPoly::from_i64(&[-(832 * 832 - 4 * (-378) * 47433), -4 * 47433, 378, 1]));
    }

    #[test]
    fn galois_groups() {
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[1, 0, 0, 0, 1])).unwrap(), GroupLabel::v4());
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[47433, 832, -378, 0, 1])).unwrap(), GroupLabel::d4());
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[-2, 0, 0, 0, 1])).unwrap(), GroupLabel::d4());
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap(), GroupLabel::c4());
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[5, 0, 5, 0, 1])).unwrap(), GroupLabel::c4());
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[-1, -1, 0, 0, 1])).unwrap(), GroupLabel::S4);
        // x^4 + 8x + 12 has group A4.
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[12, 8, 0, 0, 1])).unwrap(), GroupLabel::A4);
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[1, 0, -10, 0, 1])).unwrap(), GroupLabel::v4());
        assert_eq!(quartic_galois_group(&QPoly::from_i64(&[1, 0, 0, 0, 0, 2])), Err(FieldError::Degree));
    }

    #[test]
    fn splitting_examples() {
        let fp = splitting_fingerprint(&QPoly::from_i64(&[47433, 832, -378, 0, 1])).unwrap();
        assert_eq!((fp.closure_degree, fp.quadratic_subfields.clone()), (8, set(&[-34, -2, 17])));
        let fp = splitting_fingerprint(&QPoly::from_i64(&[1, 0, 1])).unwrap();
        assert_eq!(
            fp,
            FieldFingerprint { closure_degree: 2, group: GroupLabel::c2(), quadratic_subfields: set(&[-1]) }
        );
        let fp = splitting_fingerprint(&QPoly::from_i64(&[9321, 2240, 102, 0, 1])).unwrap();
        assert_eq!(fp, fingerprint_of_spec(&FieldSpec::biquadratic(-14, 10)).unwrap());
        let fp = splitting_fingerprint(&QPoly::from_i64(&[-2, 0, 0, 0, 1])).unwrap();
        assert_eq!(fp.quadratic_subfields, set(&[-2, -1, 2]));
        assert_eq!(splitting_fingerprint(&QPoly::from_i64(&[1, 2, 1])), Err(FieldError::RepeatedRoots));
        // Reducible: (x^2 - x - 1)(3x^2 - 7x - 3).
        let f = &QPoly::from_i64(&[-1, -1, 1]) * &QPoly::from_i64(&[-3, -7, 3]);
        assert_eq!(splitting_fingerprint(&f).unwrap(), FieldFingerprint::multiquadratic([5, 85]).unwrap());
        // Cubic factors.
        let s3 = splitting_fingerprint(&QPoly::from_i64(&[-2, 0, 0, 1])).unwrap();
        assert_eq!((s3.closure_degree, s3.group, s3.quadratic_subfields), (6, GroupLabel::s3(), set(&[-3])));
        let c3 = splitting_fingerprint(&QPoly::from_i64(&[1, -3, 0, 1])).unwrap();
        assert_eq!(c3.closure_degree, 3);
    }

    #[test]
    fn spec_examples() {
        let k34 = fingerprint_of_spec(&FieldSpec::nested(3, -8)).unwrap();
        assert_eq!(
            k34,
            FieldFingerprint { closure_degree: 8, group: GroupLabel::d4(), quadratic_subfields: set(&[-34, -2, 17]) }
        );
        let k21 = fingerprint_of_spec(&FieldSpec::biquadratic(-3, -7)).unwrap();
        assert_eq!(
            k21,
            FieldFingerprint { closure_degree: 4, group: GroupLabel::v4(), quadratic_subfields: set(&[-7, -3, 21]) }
        );
        let k15 = fingerprint_of_spec(&FieldSpec::quadratic(-3)).unwrap();
        assert_eq!((k15.closure_degree, k15.quadratic_subfields), (2, set(&[-3])));
        let k17 = fingerprint_of_spec(&FieldSpec::nested(-1, -16)).unwrap();
        assert_eq!(k17.quadratic_subfields, set(&[-17, -1, 17]));
        // Q(√(2 + √2)) is cyclic of degree 4.
        let c4 = fingerprint_of_spec(&FieldSpec::nested(2, 2)).unwrap();
        assert_eq!((c4.closure_degree, c4.group), (4, GroupLabel::c4()));
        // Q(√(3 + √8)) = Q(√2).
        assert_eq!(fingerprint_of_spec(&FieldSpec::nested(3, 8)), Err(FieldError::DegenerateSpec));
        // Q(√(5 + √24)) = Q(√2, √3) is biquadratic.
        assert_eq!(
            fingerprint_of_spec(&FieldSpec::nested(5, 24)).unwrap(),
            FieldFingerprint::multiquadratic([2, 3]).unwrap()
        );
        assert!(fingerprint_of_spec(&FieldSpec::quadratic(12)).is_err());
        assert!(fingerprint_of_spec(&FieldSpec::nested(1, 4)).is_err());
    }

    #[test]
    fn compositum_joins() {
        let a = fingerprint_of_spec(&FieldSpec::nested(3, -8)).unwrap();
        let j = a.join(&FieldFingerprint::multiquadratic([-1]).unwrap()).unwrap();
        assert_eq!((j.closure_degree, j.group.to_string()), (16, "Dih(C2xC4)".to_string()));
        assert_eq!(j.quadratic_subfields.len(), 7);
        let same = a.join(&FieldFingerprint::multiquadratic([17]).unwrap()).unwrap();
        assert_eq!(same, a);
        let c = FieldSpec::Compositum { fields: vec![FieldSpec::quadratic(-1), FieldSpec::quadratic(-2)] };
        assert_eq!(fingerprint_of_spec(&c).unwrap(), fingerprint_of_spec(&FieldSpec::biquadratic(-1, -2)).unwrap());
        let s4 = splitting_fingerprint(&QPoly::from_i64(&[-1, -1, 0, 0, 1])).unwrap();
        assert!(s4.join(&FieldFingerprint::multiquadratic([5]).unwrap()).is_err());
    }

    #[test]
    fn invariant_factor_normal_form() {
        assert_eq!(invariant_factors(&[2, 4]), vec![2, 4]);
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[4, 2, 2]), vec![2, 2, 4]);
        assert_eq!(invariant_factors(&[]), Vec::<u64>::new());
        assert_eq!(GroupLabel::Abelian(vec![2, 2, 2]).to_string(), "C2^3");
        assert_eq!(GroupLabel::Abelian(vec![2, 4]).to_string(), "C2xC4");
    }

    #[test]
    fn spec_json() {
        let s = serde_json::to_string(&FieldSpec::biquadratic(-3, -7)).unwrap();
        assert_eq!(s, r#"{"type":"biquadratic","m":[-3,-7]}"#);
        let n: FieldSpec = serde_json::from_str(r#"{"type":"nested_radical","a":"3","b":"-8/1"}"#).unwrap();
        assert_eq!(n, FieldSpec::NestedRadical { a: rat_int(3), b: rat_int(-8) });
        let fp = serde_json::to_string(&fingerprint_of_spec(&FieldSpec::quadratic(-3)).unwrap()).unwrap();
        assert_eq!(fp, r#"{"degree":2,"group":"C2","subfields":[-3]}"#);
        let _ = rat(1, 2);
    }

    #[test]
    fn fixed_point_fields_on_a_reciprocal_model() {
        let m = GenusOneModel::from_i64(&[-3, -26, -53, 26, -3]).unwrap();
        let w17 = MoebiusMap::from_i64(0, -1, 1, 0, rat_int(-1)).unwrap();
        let fp = fixed_point_field(&m, &w17).unwrap().unwrap();
        assert_eq!(fp.fingerprint, fingerprint_of_spec(&FieldSpec::nested(-1, -16)).unwrap());
        let w34 = fixed_point_field(&m, &MoebiusMap::hyperelliptic()).unwrap().unwrap();
        assert_eq!(w34.fingerprint, fingerprint_of_spec(&FieldSpec::nested(3, -8)).unwrap());
        // The companion involution -1/x composed with the hyperelliptic one has no fixed points.
        let w2 = w17.then(&MoebiusMap::hyperelliptic());
        assert_eq!(fixed_point_field(&m, &w2).unwrap(), None);
    }
}
