//! Genus, Atkin-Lehner involutions and CM points of the Shimura curves `X_0(D, N)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::arith;
use crate::classfield::{ClassFieldError, ClassGroup, DihedralGaloisModel, GaloisElement, QuadOrder, BQF};
use crate::fields::{FieldError, FieldFingerprint};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShimuraError {
    #[error("D = 1 describes a classical modular curve")]
    DIsOne,
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error("genus formula gave the non-integer {0}")]
    NonIntegralGenus(String),
    #[error("N must be squarefree")]
    NSquarefreeRequired,
    #[error("the identity has no isolated fixed points")]
    MEqualsOne,
    #[error("{0} is not an Atkin-Lehner index of the level")]
    MNotInGroup(u64),
    #[error("the CM locus of discriminant {0} is empty")]
    EmptyLocus(i64),
    #[error(transparent)]
    ClassField(#[from] ClassFieldError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

type Result<T> = std::result::Result<T, ShimuraError>;

/// Level `(D, N)` of `X_0(D, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Level {
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

impl Level {
    pub fn new(d: u64, n: u64) -> Result<Self> {
        if d == 1 {
            return Err(ShimuraError::DIsOne);
        }
        if d == 0 || n == 0 {
            return Err(ShimuraError::InvalidLevel("D and N must be positive".into()));
        }
        let primes = arith::prime_divisors(d);
        if !arith::is_squarefree_u64(d) || primes.len() % 2 == 1 {
            return Err(ShimuraError::InvalidLevel(format!(
                "{d} is not a product of an even number of distinct primes"
            )));
        }
        if d.gcd(&n) != 1 {
            return Err(ShimuraError::InvalidLevel(format!("gcd({d}, {n}) != 1")));
        }
        Ok(Level { d, n })
    }

    pub fn dn(&self) -> u64 {
        self.d * self.n
    }

    fn require_squarefree(&self) -> Result<()> {
        if arith::is_squarefree_u64(self.n) {
            Ok(())
        } else {
            Err(ShimuraError::NSquarefreeRequired)
        }
    }
}

#[derive(Deserialize)]
struct LevelWire {
    #[serde(rename = "D")]
    d: u64,
    #[serde(rename = "N")]
    n: u64,
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = LevelWire::deserialize(de)?;
        Level::new(w.d, w.n).map_err(serde::de::Error::custom)
    }
}

fn kron(a: i64, p: u64) -> i64 {
    arith::kronecker(a, p as i64) as i64
}

/// Genus of `X_0(D, N)`.
pub fn genus(level: &Level) -> Result<u64> {
    let (d, n) = (level.d, level.n);
    let mut g = Rational::from_integer((d * n).into()) / Rational::from_integer(12.into());
    for p in arith::prime_divisors(d) {
        g *= Rational::new((p - 1).into(), p.into());
    }
    for p in arith::prime_divisors(n) {
        g *= Rational::new((p + 1).into(), p.into());
    }
    let e = |k: i64| -> i64 {
        let mut e = 1;
        for p in arith::prime_divisors(d) {
            e *= 1 - kron(-k, p);
        }
        for (p, a) in arith::factor_u64(n) {
            e *= if a == 1 {
                1 + kron(-k, p)
            } else if kron(-k, p) == 1 {
                2
            } else {
                0
            };
        }
        e
    };
    g += Rational::from_integer(1.into());
    g -= Rational::new(e(3).into(), 3.into());
    g -= Rational::new(e(4).into(), 4.into());
    if !g.is_integer() || g < Rational::from_integer(0.into()) {
        return Err(ShimuraError::NonIntegralGenus(g.to_string()));
    }
    arith::to_i64(g.numer()).map(|v| v as u64).map_err(|_| ShimuraError::NonIntegralGenus(g.to_string()))
}

/// All levels with `D N <= max_dn` and genus one, ordered by `(D, N)`.
pub fn scan_genus_one(max_dn: u64) -> Vec<Level> {
    let mut out = Vec::new();
    for d in 2..=max_dn {
        for n in 1..=max_dn / d {
            if let Ok(level) = Level::new(d, n) {
                if genus(&level) == Ok(1) {
                    out.push(level);
                }
            }
        }
    }
    out
}

/// Indices `m` of the Atkin-Lehner involutions `ω_m`, sorted.
pub fn atkin_lehner_group(level: &Level) -> Result<Vec<u64>> {
    level.require_squarefree()?;
    let dn = level.dn();
    Ok((1..=dn).filter(|m| dn.is_multiple_of(*m)).collect())
}

/// Index of `ω_m ω_n`.
pub fn atkin_lehner_product(m: u64, n: u64) -> u64 {
    let g = m.gcd(&n);
    m * n / (g * g)
}

fn check_in_group(level: &Level, m: u64) -> Result<()> {
    level.require_squarefree()?;
    if m == 0 || !level.dn().is_multiple_of(m) {
        return Err(ShimuraError::MNotInGroup(m));
    }
    Ok(())
}

/// `(R/p)`: the Kronecker symbol of `K` at `p`, or 1 when `p` divides the conductor.
pub fn eichler_symbol(r: &QuadOrder, p: u64) -> i8 {
    if r.conductor.is_multiple_of(p) {
        1
    } else {
        arith::kronecker(r.fundamental_disc, p as i64)
    }
}

/// `D(R)`, `N(R)` and `N*(R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CmInvariants {
    pub dr: u64,
    pub nr: u64,
    pub nstar_r: u64,
}

pub fn cm_invariants(level: &Level, r: &QuadOrder) -> CmInvariants {
    let dr = arith::prime_divisors(level.d).into_iter().filter(|&p| eichler_symbol(r, p) == -1).product();
    let split: Vec<u64> = arith::prime_divisors(level.n).into_iter().filter(|&p| eichler_symbol(r, p) == 1).collect();
    let nr = split.iter().product();
    let nstar_r = split.iter().filter(|&&p| !r.conductor.is_multiple_of(p)).product();
    CmInvariants { dr, nr, nstar_r }
}

/// The set `CM(R)` on `X_0(D, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CMLocus {
    #[serde(flatten)]
    pub level: Level,
    pub disc: i64,
    pub h: u64,
    pub nonempty: bool,
    pub count: u64,
    #[serde(rename = "branches")]
    pub branch_count: u64,
    #[serde(flatten)]
    pub invariants: CmInvariants,
}

/// Whether `CM(R)` is nonempty.
///
/// Besides `DN / (D(R) N*(R)) | disc(R)`, a prime of `D` dividing the conductor rules out
/// optimal embeddings locally.
fn locus_nonempty(level: &Level, r: &QuadOrder, inv: &CmInvariants) -> bool {
    let q = level.dn() / (inv.dr * inv.nstar_r);
    let divides = (r.disc.unsigned_abs()).is_multiple_of(q);
    divides && level.d.gcd(&r.conductor) == 1
}

pub fn cm_locus(level: &Level, r: &QuadOrder) -> Result<CMLocus> {
    level.require_squarefree()?;
    let inv = cm_invariants(level, r);
    let h = crate::classfield::reduced_forms(r.disc)?.len() as u64;
    let branch_count = 1u64 << arith::prime_divisors(inv.dr * inv.nr).len();
    let nonempty = locus_nonempty(level, r, &inv);
    Ok(CMLocus {
        level: *level,
        disc: r.disc,
        h,
        nonempty,
        count: if nonempty { branch_count * h } else { 0 },
        branch_count,
        invariants: inv,
    })
}

/// Orders `R` with `F_{ω_m}` the union of the `CM(R)`.
pub fn fixed_point_orders(m: u64) -> Result<Vec<QuadOrder>> {
    let m = m as i64;
    let discs = match m {
        0 | 1 => return Err(ShimuraError::MEqualsOne),
        2 => vec![-4, -8],
        _ if m % 4 == 3 => vec![-4 * m, -m],
        _ => vec![-4 * m],
    };
    discs.into_iter().map(|d| QuadOrder::new(d).map_err(Into::into)).collect()
}

pub fn fixed_point_count(level: &Level, m: u64) -> Result<u64> {
    check_in_group(level, m)?;
    let mut total = 0;
    for r in fixed_point_orders(m)? {
        total += cm_locus(level, &r)?.count;
    }
    Ok(total)
}

/// Class `[b]` with `ω_m(P) = P^{σ_b}` when `ω_m` acts through `Gal(H_R/K)` on `CM(R)`.
pub fn galois_vs_atkin_lehner(level: &Level, r: &QuadOrder, m: u64) -> Result<Option<BQF>> {
    check_in_group(level, m)?;
    let g = ClassGroup::new(r.disc)?;
    Ok(galois_class(level, r, &g, m)?.map(|i| g.form(i)))
}

fn galois_class(level: &Level, r: &QuadOrder, g: &ClassGroup, m: u64) -> Result<Option<usize>> {
    let inv = cm_invariants(level, r);
    let q = level.dn() / (inv.dr * inv.nr);
    if !q.is_multiple_of(m) {
        return Ok(None);
    }
    g.class_of_norm(m).map(Some).ok_or(ShimuraError::ClassField(ClassFieldError::NoClassFound))
}

/// `m = D(R) N*(R)` and the admissible classes `[a]` modulo squares.
pub fn conjugation_pairing(level: &Level, r: &QuadOrder) -> Result<(u64, Vec<BQF>)> {
    let inv = cm_invariants(level, r);
    let m = inv.dr * inv.nstar_r;
    Ok((m, crate::classfield::conjugation_ideal_class(r, level.d, m)?))
}

/// Generator of a fixing subgroup: `σ_a`, optionally followed by complex conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupGenerator {
    pub form: BQF,
    #[serde(rename = "c")]
    pub with_conjugation: bool,
}

/// Field generated by a CM point, or by its image on a quotient curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldOfDefinition {
    #[serde(rename = "degree")]
    pub degree_over_q: u64,
    pub is_full_ring_class_field: bool,
    pub fixing_subgroup: Vec<SubgroupGenerator>,
    pub conjugation_class: Option<BQF>,
    pub quadratic_subfields: BTreeSet<i64>,
    /// Galois closure of the field.
    pub fingerprint: FieldFingerprint,
}

struct Pipeline {
    level: Level,
    inv: CmInvariants,
    model: DihedralGaloisModel,
}

impl Pipeline {
    fn new(level: &Level, r: &QuadOrder) -> Result<Self> {
        level.require_squarefree()?;
        let inv = cm_invariants(level, r);
        if !locus_nonempty(level, r, &inv) {
            return Err(ShimuraError::EmptyLocus(r.disc));
        }
        let model = DihedralGaloisModel::new(ClassGroup::new(r.disc)?)?;
        Ok(Pipeline { level: *level, inv, model })
    }

    fn group(&self) -> &ClassGroup {
        &self.model.base
    }

    fn dnstar(&self) -> u64 {
        self.inv.dr * self.inv.nstar_r
    }

    /// Admissible classes for `(-s, t N(a) / Q) ≅ B_D`.
    fn admissible(&self, t: u64) -> Result<Vec<usize>> {
        Ok(self.group().conjugation_classes(self.level.d, t)?)
    }

    fn field(&self, gens: &[GaloisElement], conjugation_class: Option<usize>) -> Result<FieldOfDefinition> {
        let fixed = self.model.fixed_field(gens)?;
        let h = self.group().h() as u64;
        let subgroup_order = 2 * h / fixed.degree;
        debug_assert_eq!(fixed.degree * subgroup_order, 2 * h);
        Ok(FieldOfDefinition {
            degree_over_q: fixed.degree,
            is_full_ring_class_field: fixed.degree == 2 * h,
            fixing_subgroup: gens
                .iter()
                .map(|g| SubgroupGenerator { form: self.group().form(g.class), with_conjugation: g.conj })
                .collect(),
            conjugation_class: conjugation_class.map(|i| self.group().form(i)),
            quadratic_subfields: fixed.quadratic_subfields,
            fingerprint: fixed.closure,
        })
    }

    fn c_times(&self, a: usize) -> GaloisElement {
        self.model.mul(GaloisElement::c(), GaloisElement::sigma(a))
    }
}

/// `Q(P)` for `P ∈ CM(R)`, one entry per admissible conjugation class.
pub fn cm_field_of_definition(level: &Level, r: &QuadOrder) -> Result<Vec<FieldOfDefinition>> {
    let p = Pipeline::new(level, r)?;
    if p.dnstar() != 1 {
        return Ok(vec![p.field(&[], None)?]);
    }
    p.admissible(1)?.into_iter().map(|a| p.field(&[p.c_times(a)], Some(a))).collect()
}

/// `Q(π_m(P))` for `P ∈ CM(R)`, one entry per admissible conjugation class.
pub fn quotient_cm_field(level: &Level, r: &QuadOrder, m: u64) -> Result<Vec<FieldOfDefinition>> {
    check_in_group(level, m)?;
    let p = Pipeline::new(level, r)?;
    let q = level.dn() / (p.inv.dr * p.inv.nr);
    let m_r = m.gcd(&q);
    let b = p.group().class_of_norm(m_r).ok_or(ClassFieldError::NoClassFound)?;
    let sigma_b = GaloisElement::sigma(b);
    let ratio = m / m_r;
    if p.dnstar() != 1 {
        if ratio == 1 {
            return Ok(vec![p.field(&[sigma_b], None)?]);
        }
        if ratio == p.dnstar() {
            return p
                .admissible(p.dnstar())?
                .into_iter()
                .map(|a| {
                    let ba = p.group().mul(b, a);
                    p.field(&[p.model.mul(GaloisElement::sigma(ba), GaloisElement::c())], Some(a))
                })
                .collect();
        }
        return Ok(vec![p.field(&[], None)?]);
    }
    p.admissible(1)?
        .into_iter()
        .map(
            |a| {
                if ratio == 1 {
                    p.field(&[p.c_times(a), sigma_b], Some(a))
                } else {
                    p.field(&[p.c_times(a)], Some(a))
                }
            },
        )
        .collect()
}

/// `gcd(m, disc(R) / gcd(N, f))`, the second expression for `m_r`.
pub fn m_r_from_discriminant(level: &Level, r: &QuadOrder, m: u64) -> u64 {
    let g = level.n.gcd(&r.conductor);
    m.gcd(&(r.disc.unsigned_abs() / g))
}

/// One constituent `CM(R)` of a fixed-point set and the fields of its points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedLocus {
    /// Index of the involution whose fixed points contain this locus.
    pub involution: u64,
    pub locus: CMLocus,
    pub fields: Vec<FieldOfDefinition>,
}

/// Fixed points of an involution with the possible Galois closures of the field they generate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    #[serde(flatten)]
    pub level: Level,
    pub m: u64,
    /// Index of the involution on the quotient by `ω_quotient`, when present.
    pub quotient: Option<u64>,
    pub count: u64,
    pub loci: Vec<FixedLocus>,
    /// One compositum per choice of conjugation class in each locus.
    pub candidates: Vec<FieldFingerprint>,
}

fn composita(loci: &[FixedLocus]) -> Result<Vec<FieldFingerprint>> {
    let mut acc = vec![FieldFingerprint::rationals()];
    for l in loci.iter().filter(|l| l.locus.nonempty) {
        let mut next = Vec::new();
        for a in &acc {
            for f in &l.fields {
                let j = a.join(&f.fingerprint)?;
                if !next.contains(&j) {
                    next.push(j);
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn loci_for(level: &Level, m: u64, quotient: Option<u64>) -> Result<Vec<FixedLocus>> {
    let mut loci = Vec::new();
    for r in fixed_point_orders(m)? {
        let locus = cm_locus(level, &r)?;
        let fields = match (locus.nonempty, quotient) {
            (false, _) => vec![],
            (true, None) => cm_field_of_definition(level, &r)?,
            (true, Some(q)) => quotient_cm_field(level, &r, q)?,
        };
        loci.push(FixedLocus { involution: m, locus, fields });
    }
    Ok(loci)
}

/// Fixed points of `ω_m` on `X_0(D, N)`.
pub fn fixed_points(level: &Level, m: u64) -> Result<FixedPointReport> {
    check_in_group(level, m)?;
    let loci = loci_for(level, m, None)?;
    let count = loci.iter().map(|l| l.locus.count).sum();
    Ok(FixedPointReport { level: *level, m, quotient: None, count, candidates: composita(&loci)?, loci })
}

/// Fixed points of the involution induced by `ω_m` on `X_0(D, N) / <ω_q>`.
///
/// They are the images of the fixed points of `ω_m` and of `ω_m ω_q`.
pub fn quotient_fixed_points(level: &Level, q: u64, m: u64) -> Result<FixedPointReport> {
    check_in_group(level, q)?;
    check_in_group(level, m)?;
    if q == 1 || m == q {
        return Err(ShimuraError::MEqualsOne);
    }
    let mut loci = loci_for(level, m, Some(q))?;
    loci.extend(loci_for(level, atkin_lehner_product(m, q), Some(q))?);
    let count = loci.iter().map(|l| l.locus.count).sum::<u64>() / 2;
    Ok(FixedPointReport { level: *level, m, quotient: Some(q), count, candidates: composita(&loci)?, loci })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(d: u64, n: u64) -> Level {
        Level::new(d, n).unwrap()
    }

    fn order(disc: i64) -> QuadOrder {
        QuadOrder::new(disc).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&lv(14, 1)), Ok(1));
        assert_eq!(genus(&lv(6, 1)), Ok(0));
        assert_eq!(genus(&lv(10, 7)), Ok(1));
        assert_eq!(Level::new(1, 5), Err(ShimuraError::DIsOne));
        assert!(Level::new(30, 1).is_err());
        assert!(Level::new(6, 3).is_err());
    }

    #[test]
    fn scan_examples() {
        assert_eq!(scan_genus_one(14), vec![lv(14, 1)]);
        assert!(scan_genus_one(13).is_empty());
    }

    #[test]
    fn atkin_lehner() {
        assert_eq!(atkin_lehner_group(&lv(6, 5)).unwrap(), vec![1, 2, 3, 5, 6, 10, 15, 30]);
        assert_eq!(atkin_lehner_group(&lv(14, 1)).unwrap(), vec![1, 2, 7, 14]);
        assert_eq!(atkin_lehner_product(6, 10), 15);
        assert_eq!(atkin_lehner_group(&lv(6, 25)), Err(ShimuraError::NSquarefreeRequired));
    }

    #[test]
    fn eichler_and_invariants() {
        assert_eq!(eichler_symbol(&order(-4), 7), -1);
        assert_eq!(eichler_symbol(&order(-36), 3), 1);
        assert_eq!(eichler_symbol(&order(-56), 2), 0);
        let z = |dr, nr, nstar_r| CmInvariants { dr, nr, nstar_r };
        assert_eq!(cm_invariants(&lv(14, 1), &order(-56)), z(1, 1, 1));
        assert_eq!(cm_invariants(&lv(14, 1), &order(-4)), z(7, 1, 1));
        assert_eq!(cm_invariants(&lv(6, 5), &order(-120)), z(1, 1, 1));
    }

    #[test]
    fn loci() {
        let l = cm_locus(&lv(14, 1), &order(-56)).unwrap();
        assert_eq!((l.nonempty, l.count, l.branch_count), (true, 4, 1));
        let l = cm_locus(&lv(14, 1), &order(-4)).unwrap();
        assert_eq!((l.nonempty, l.count, l.branch_count), (true, 2, 2));
        assert!(!cm_locus(&lv(15, 1), &order(-4)).unwrap().nonempty);
        // 31 | disc but 2 divides both D and the conductor.
        assert!(!cm_locus(&lv(62, 1), &order(-124)).unwrap().nonempty);
    }

    #[test]
    fn fixed_point_orders_and_counts() {
        let discs = |m| fixed_point_orders(m).unwrap().iter().map(|r| r.disc).collect::<Vec<_>>();
        assert_eq!(discs(2), vec![-4, -8]);
        assert_eq!(discs(7), vec![-28, -7]);
        assert_eq!(discs(34), vec![-136]);
        assert_eq!(fixed_point_orders(1).unwrap_err(), ShimuraError::MEqualsOne);
        assert_eq!(fixed_point_count(&lv(14, 1), 2), Ok(4));
        assert_eq!(fixed_point_count(&lv(14, 1), 14), Ok(4));
        assert_eq!(fixed_point_count(&lv(15, 1), 15), Ok(4));
        assert_eq!(fixed_point_count(&lv(14, 1), 3), Err(ShimuraError::MNotInGroup(3)));
    }

    #[test]
    fn galois_action() {
        let l = lv(14, 1);
        let r = order(-56);
        assert_eq!(galois_vs_atkin_lehner(&l, &r, 2).unwrap(), Some(BQF::new(2, 0, 7)));
        assert_eq!(galois_vs_atkin_lehner(&l, &r, 14).unwrap(), Some(BQF::new(1, 0, 14)));
        assert_eq!(galois_vs_atkin_lehner(&l, &order(-4), 7).unwrap(), None);
    }

    #[test]
    fn conjugation() {
        assert_eq!(conjugation_pairing(&lv(14, 1), &order(-56)).unwrap(), (1, vec![BQF::new(3, 2, 5)]));
        assert_eq!(conjugation_pairing(&lv(14, 1), &order(-4)).unwrap(), (7, vec![BQF::new(1, 0, 1)]));
    }

    #[test]
    fn fields_of_definition() {
        let f = cm_field_of_definition(&lv(14, 1), &order(-56)).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].degree_over_q, 4);
        assert_eq!(f[0].fingerprint.quadratic_subfields, BTreeSet::from([-14, -7, 2]));
        let f = cm_field_of_definition(&lv(6, 7), &order(-168)).unwrap();
        assert_eq!(f[0].fingerprint.quadratic_subfields, BTreeSet::from([-3, -2, 6]));
        assert_eq!(cm_field_of_definition(&lv(15, 1), &order(-4)).unwrap_err(), ShimuraError::EmptyLocus(-4));
        // Points fixed by ω_14 keep their degree on the quotient.
        let q = quotient_cm_field(&lv(14, 1), &order(-56), 14).unwrap();
        assert_eq!(q[0].degree_over_q, 4);
        let q = quotient_cm_field(&lv(14, 1), &order(-4), 14).unwrap();
        assert!(q.iter().all(|f| f.degree_over_q <= 2));
    }
}
