//! Imaginary quadratic orders, form class groups, genus theory, the generalized dihedral
//! Galois group of a ring class field, and Hilbert symbols.

use num_bigint::BigInt;
use num_integer::{Integer as _, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::fields::{invariant_factors, product_closure, FieldError, FieldFingerprint, GroupLabel};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassFieldError {
    #[error("{0} is not a negative discriminant")]
    BadDiscriminant(i64),
    #[error("forms have different discriminants")]
    DiscMismatch,
    #[error("form {0} is not primitive and positive definite")]
    BadForm(BQF),
    #[error("{0} is not coprime to the discriminant")]
    NotCoprime(i64),
    #[error("generators do not lie in the Galois group")]
    NotASubgroup,
    #[error("no class satisfies the quaternion algebra condition")]
    NoClassFound,
    #[error("no represented value coprime to {modulus} found for {form}")]
    NoRepresentedValue { form: BQF, modulus: BigInt },
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

type Result<T> = std::result::Result<T, ClassFieldError>;

/// The order of discriminant `disc` in `K = Q(√-s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadOrder {
    pub disc: i64,
    pub fundamental_disc: i64,
    pub conductor: u64,
    pub s: u64,
}

impl QuadOrder {
    pub fn new(disc: i64) -> Result<Self> {
        if disc >= 0 || disc.rem_euclid(4) > 1 {
            return Err(ClassFieldError::BadDiscriminant(disc));
        }
        let sf = arith::to_i64(&arith::squarefree_part(&BigInt::from(disc))?.0)?;
        let fundamental_disc = if sf.rem_euclid(4) == 1 { sf } else { 4 * sf };
        let conductor = (disc / fundamental_disc).sqrt() as u64;
        if disc % fundamental_disc != 0 || (conductor * conductor) as i64 * fundamental_disc != disc {
            return Err(ClassFieldError::BadDiscriminant(disc));
        }
        Ok(QuadOrder { disc, fundamental_disc, conductor, s: (-sf) as u64 })
    }

    pub fn is_maximal(&self) -> bool {
        self.conductor == 1
    }
}

impl fmt::Display for QuadOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order of discriminant {}", self.disc)
    }
}

/// Positive definite binary quadratic form `ax^2 + bxy + cy^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BQF {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Serialize for BQF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b, self.c].serialize(s)
    }
}

impl fmt::Display for BQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl BQF {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BQF { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Principal form of discriminant `disc`.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        BQF { a: 1, b, c: (b * b - disc) / 4 }
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    pub fn inverse(&self) -> Self {
        BQF { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Reduced form in the same proper equivalence class.
    pub fn reduce(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let normalize = |a: i128, b: i128, c: i128| -> (i128, i128, i128) {
            // b -> b + 2ak with -a < b + 2ak <= a
            let k = num_integer::Integer::div_floor(&(a - b), &(2 * a));
            let nb = b + 2 * a * k;
            let nc = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
            (a, nb, nc)
        };
        (a, b, c) = normalize(a, b, c);
        while a > c {
            (a, b, c) = normalize(c, -b, a);
        }
        if a == c && b < 0 {
            b = -b;
        }
        BQF { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// Smallest positive value `F(x, y)` coprime to `modulus`, searched over growing boxes.
    pub fn represented_coprime(&self, modulus: &BigInt) -> Result<i64> {
        let limit = 4 * self.disc().unsigned_abs().max(4) as i128;
        let mut box_size: i128 = 2;
        loop {
            let mut best: Option<i128> = None;
            for y in 0..=box_size {
                for x in -box_size..=box_size {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let v = self.eval(x, y);
                    if best.is_none_or(|b| v < b) && BigInt::from(v).gcd(modulus).is_one() {
                        best = Some(v);
                    }
                }
            }
            if let Some(v) = best {
                return v.to_i64().ok_or(ClassFieldError::Overflow);
            }
            if box_size > limit {
                return Err(ClassFieldError::NoRepresentedValue { form: *self, modulus: modulus.clone() });
            }
            box_size *= 2;
        }
    }
}

fn sort_key(f: &BQF) -> (i64, i64, i64) {
    (f.a, f.b.abs(), -f.b)
}

fn check_disc(disc: i64) -> Result<()> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        Err(ClassFieldError::BadDiscriminant(disc))
    } else {
        Ok(())
    }
}

/// All primitive reduced forms of discriminant `disc`, principal form first.
pub fn reduced_forms(disc: i64) -> Result<Vec<BQF>> {
    check_disc(disc)?;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = BQF { a, b, c: num / (4 * a) };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(sort_key);
    Ok(out)
}

/// Composition of two primitive forms of the same discriminant, reduced.
pub fn compose(f1: &BQF, f2: &BQF) -> Result<BQF> {
    let disc = f1.disc();
    if disc != f2.disc() {
        return Err(ClassFieldError::DiscMismatch);
    }
    for f in [f1, f2] {
        if f.a <= 0 || !f.is_primitive() || disc >= 0 {
            return Err(ClassFieldError::BadForm(*f));
        }
    }
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (d, u, _) = arith::ext_gcd(a2, a1);
        (u, d)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let (d1, x, y) = arith::ext_gcd(s, d);
        (x, -y, d1)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 % v1 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - disc as i128) / (4 * a3);
    let to = |v: i128| v.to_i64().ok_or(ClassFieldError::Overflow);
    Ok(BQF { a: to(a3)?, b: to(b3)?, c: to(c3)? }.reduce())
}

/// A character of the discriminant used to separate genera.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AssignedCharacter {
    /// `n -> (n/p)` for an odd prime `p`.
    Odd(u64),
    /// `n -> (-4/n)`.
    Delta,
    /// `n -> (8/n)`.
    Epsilon,
    /// `n -> (-8/n)`.
    DeltaEpsilon,
}

impl AssignedCharacter {
    /// Value at a positive integer coprime to the discriminant.
    pub fn eval(&self, n: i64) -> i8 {
        match *self {
            AssignedCharacter::Odd(p) => arith::kronecker(n, p as i64),
            AssignedCharacter::Delta => arith::kronecker(-4, n),
            AssignedCharacter::Epsilon => arith::kronecker(8, n),
            AssignedCharacter::DeltaEpsilon => arith::kronecker(-8, n),
        }
    }

    /// Squarefree `m` with `Q(√m)` cut out by this character.
    pub fn field(&self) -> i64 {
        match *self {
            AssignedCharacter::Odd(p) if p % 4 == 1 => p as i64,
            AssignedCharacter::Odd(p) => -(p as i64),
            AssignedCharacter::Delta => -1,
            AssignedCharacter::Epsilon => 2,
            AssignedCharacter::DeltaEpsilon => -2,
        }
    }
}

/// The assigned characters of a negative discriminant.
pub fn assigned_characters(disc: i64) -> Result<Vec<AssignedCharacter>> {
    check_disc(disc)?;
    let mut out: Vec<AssignedCharacter> = arith::prime_divisors(disc.unsigned_abs())
        .into_iter()
        .filter(|&p| p != 2)
        .map(AssignedCharacter::Odd)
        .collect();
    if disc % 4 == 0 {
        let n = -disc / 4;
        match (n % 4, n % 8) {
            (3, _) => {}
            (1, _) => out.push(AssignedCharacter::Delta),
            (_, 2) => out.push(AssignedCharacter::DeltaEpsilon),
            (_, 6) => out.push(AssignedCharacter::Epsilon),
            (_, 4) => out.push(AssignedCharacter::Delta),
            _ => {
                out.push(AssignedCharacter::Delta);
                out.push(AssignedCharacter::Epsilon);
            }
        }
    }
    Ok(out)
}

/// Product of a nonempty set of assigned characters, with its quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusCharacter {
    pub components: Vec<AssignedCharacter>,
    pub field: i64,
}

impl GenusCharacter {
    pub fn eval(&self, n: i64) -> i8 {
        self.components.iter().map(|c| c.eval(n)).product()
    }
}

/// Every nonempty product of assigned characters with its squarefree field integer.
///
/// One product is trivial on the class group: the one whose field is `K` itself.
pub fn genus_characters(disc: i64) -> Result<Vec<GenusCharacter>> {
    let assigned = assigned_characters(disc)?;
    let mut out = Vec::new();
    for mask in 1u32..(1 << assigned.len()) {
        let components: Vec<AssignedCharacter> =
            assigned.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| *c).collect();
        let prod: BigInt = components.iter().map(|c| BigInt::from(c.field())).product();
        let field = arith::to_i64(&arith::squarefree_part(&prod)?.0)?;
        out.push(GenusCharacter { components, field });
    }
    Ok(out)
}

/// Whether `v` lies in the principal genus, judged by all assigned characters.
pub fn principal_genus_represents(disc: i64, v: i64) -> Result<bool> {
    check_disc(disc)?;
    if v.gcd(&disc) != 1 || v <= 0 {
        return Err(ClassFieldError::NotCoprime(v));
    }
    Ok(assigned_characters(disc)?.iter().all(|c| c.eval(v) == 1))
}

/// The form class group of an imaginary quadratic order.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub order: QuadOrder,
    pub elements: Vec<BQF>,
    pub structure: Vec<u64>,
    pub two_torsion_rank: u32,
    index: HashMap<BQF, usize>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// A positive value coprime to `2 disc` represented by each class.
    values: Vec<i64>,
    assigned: Vec<AssignedCharacter>,
}

impl Serialize for ClassGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ClassGroup", 4)?;
        st.serialize_field("disc", &self.order.disc)?;
        st.serialize_field("h", &self.elements.len())?;
        st.serialize_field("structure", &self.structure)?;
        st.serialize_field("elements", &self.elements)?;
        st.end()
    }
}

/// Invariant factors of `G / M` from the counts `|{x : x^(p^k) in M}|`.
fn quotient_invariants(n: usize, pow: impl Fn(usize, u64) -> usize, in_m: &[bool]) -> Vec<u64> {
    let m_size = in_m.iter().filter(|&&b| b).count();
    let q = (n / m_size) as u64;
    let mut cyclic = Vec::new();
    for (p, e) in arith::factor_u64(q) {
        let full = p.pow(e);
        let mut prev = 1u64;
        let mut k = 1u32;
        let mut counts = Vec::new();
        loop {
            let pk = p.pow(k);
            let c = ((0..n).filter(|&x| in_m[pow(x, pk)]).count() / m_size) as u64;
            let mut r = 0;
            let mut t = c / prev;
            while t > 1 {
                t /= p;
                r += 1;
            }
            counts.push(r);
            prev = c;
            if c == full {
                break;
            }
            k += 1;
        }
        // counts[k-1] = number of cyclic factors of order >= p^k.
        for (i, &r) in counts.iter().enumerate() {
            let next = counts.get(i + 1).copied().unwrap_or(0);
            for _ in 0..(r - next) {
                cyclic.push(p.pow(i as u32 + 1));
            }
        }
    }
    invariant_factors(&cyclic)
}

impl ClassGroup {
    pub fn new(disc: i64) -> Result<Self> {
        let order = QuadOrder::new(disc)?;
        let elements = reduced_forms(disc)?;
        let h = elements.len();
        let index: HashMap<BQF, usize> = elements.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in i..h {
                let k = index[&compose(&elements[i], &elements[j])?];
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        let inverse = elements.iter().map(|f| index[&f.inverse()]).collect();
        let modulus = BigInt::from(2 * disc);
        let values = elements.iter().map(|f| f.represented_coprime(&modulus)).collect::<Result<_>>()?;
        let mut g = ClassGroup {
            order,
            elements,
            structure: vec![],
            two_torsion_rank: 0,
            index,
            table,
            inverse,
            values,
            assigned: assigned_characters(disc)?,
        };
        let trivial: Vec<bool> = (0..h).map(|i| i == 0).collect();
        g.structure = quotient_invariants(h, |x, k| g.pow(x, k), &trivial);
        g.two_torsion_rank = g.structure.iter().filter(|&&n| n % 2 == 0).count() as u32;
        Ok(g)
    }

    pub fn h(&self) -> usize {
        self.elements.len()
    }

    pub fn disc(&self) -> i64 {
        self.order.disc
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the class containing `f`.
    pub fn class_of(&self, f: &BQF) -> Result<usize> {
        if f.disc() != self.disc() {
            return Err(ClassFieldError::DiscMismatch);
        }
        if f.a <= 0 || !f.is_primitive() {
            return Err(ClassFieldError::BadForm(*f));
        }
        Ok(self.index[&f.reduce()])
    }

    pub fn form(&self, i: usize) -> BQF {
        self.elements[i]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn pow(&self, i: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.table[acc][i];
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut acc = i;
        let mut k = 1;
        while acc != 0 {
            acc = self.table[acc][i];
            k += 1;
        }
        k
    }

    /// A positive value coprime to `2 disc` represented by class `i`.
    pub fn represented_value(&self, i: usize) -> i64 {
        self.values[i]
    }

    /// Values of the assigned characters on class `i`; equal vectors mean equal cosets of the squares.
    pub fn genus_of(&self, i: usize) -> Vec<i8> {
        self.assigned.iter().map(|c| c.eval(self.values[i])).collect()
    }

    pub fn genus_character_value(&self, chi: &GenusCharacter, i: usize) -> i8 {
        chi.eval(self.values[i])
    }

    /// Classes whose form represents the ideal norm `n`, for `n` dividing the discriminant.
    pub fn class_of_norm(&self, n: u64) -> Option<usize> {
        let disc = self.disc();
        let n = n as i64;
        if n == 1 {
            return Some(0);
        }
        (0..2 * n)
            .filter_map(|b| {
                let num = b * b - disc;
                (num % (4 * n) == 0).then(|| BQF { a: n, b, c: num / (4 * n) })
            })
            .find(|f| f.is_primitive())
            .map(|f| self.index[&f.reduce()])
    }

    /// Invariant factors of the quotient by the subgroup flagged in `sub`.
    pub fn quotient_structure(&self, sub: &[bool]) -> Vec<u64> {
        quotient_invariants(self.h(), |x, k| self.pow(x, k), sub)
    }
}

pub fn class_group(disc: i64) -> Result<ClassGroup> {
    ClassGroup::new(disc)
}

/// Element `(σ, ε)` of `Pic(R) ⋊ <c>` standing for `σ c^ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisElement {
    pub class: usize,
    pub conj: bool,
}

impl GaloisElement {
    pub fn sigma(class: usize) -> Self {
        GaloisElement { class, conj: false }
    }

    pub fn c() -> Self {
        GaloisElement { class: 0, conj: true }
    }
}

/// `Gal(H_R/Q)` as `Pic(R) ⋊ <c>` with `c` acting by inversion.
#[derive(Clone, Debug)]
pub struct DihedralGaloisModel {
    pub base: ClassGroup,
    characters: Vec<GenusCharacter>,
}

/// Fixed field of a subgroup of `Gal(H_R/Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedField {
    pub degree: u64,
    pub quadratic_subfields: BTreeSet<i64>,
    pub closure: FieldFingerprint,
}

impl DihedralGaloisModel {
    pub fn new(base: ClassGroup) -> Result<Self> {
        let characters = genus_characters(base.disc())?;
        let g = DihedralGaloisModel { base, characters };
        for i in 0..g.base.h() {
            let t = g.mul(GaloisElement::c(), GaloisElement::sigma(i));
            debug_assert_eq!(g.mul(t, t), g.identity());
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        2 * self.base.h()
    }

    pub fn identity(&self) -> GaloisElement {
        GaloisElement::sigma(0)
    }

    pub fn elements(&self) -> Vec<GaloisElement> {
        (0..self.base.h()).flat_map(|i| [GaloisElement::sigma(i), GaloisElement { class: i, conj: true }]).collect()
    }

    pub fn mul(&self, x: GaloisElement, y: GaloisElement) -> GaloisElement {
        let yc = if x.conj { self.base.inv(y.class) } else { y.class };
        GaloisElement { class: self.base.mul(x.class, yc), conj: x.conj ^ y.conj }
    }

    pub fn inv(&self, x: GaloisElement) -> GaloisElement {
        if x.conj {
            x
        } else {
            GaloisElement::sigma(self.base.inv(x.class))
        }
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[GaloisElement]) -> Result<Vec<GaloisElement>> {
        if gens.iter().any(|g| g.class >= self.base.h()) {
            return Err(ClassFieldError::NotASubgroup);
        }
        let mut set: BTreeSet<GaloisElement> = BTreeSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(set.into_iter().collect())
    }

    /// Largest normal subgroup contained in `h`.
    pub fn core(&self, h: &[GaloisElement]) -> Vec<GaloisElement> {
        let set: BTreeSet<GaloisElement> = h.iter().copied().collect();
        let all = self.elements();
        h.iter()
            .copied()
            .filter(|&x| all.iter().all(|&g| set.contains(&self.mul(self.mul(g, x), self.inv(g)))))
            .collect()
    }

    /// Value of the character of `Q(√m_S)` on `x`.
    pub fn character_value(&self, chi: &GenusCharacter, x: GaloisElement) -> i8 {
        let v = self.base.genus_character_value(chi, x.class);
        if x.conj && chi.field < 0 {
            -v
        } else {
            v
        }
    }

    /// Squarefree `m` with `Q(√m)` inside the fixed field of the subgroup generated by `gens`.
    pub fn fixed_field_quadratic_subfields(&self, gens: &[GaloisElement]) -> Result<BTreeSet<i64>> {
        let h = self.subgroup(gens)?;
        Ok(self.subfields_fixed_by(&h))
    }

    fn subfields_fixed_by(&self, h: &[GaloisElement]) -> BTreeSet<i64> {
        self.characters
            .iter()
            .filter(|chi| h.iter().all(|&x| self.character_value(chi, x) == 1))
            .map(|chi| chi.field)
            .collect()
    }

    /// Degree, quadratic subfields and Galois closure of the fixed field of `<gens>`.
    pub fn fixed_field(&self, gens: &[GaloisElement]) -> Result<FixedField> {
        let h = self.subgroup(gens)?;
        let n = self.core(&h);
        let closure_degree = (self.order() / n.len()) as u64;
        let in_pic: Vec<bool> = (0..self.base.h()).map(|i| n.contains(&GaloisElement::sigma(i))).collect();
        let a = self.base.quotient_structure(&in_pic);
        let group = if n.iter().any(|x| x.conj) {
            GroupLabel::Abelian(a)
        } else if a.iter().all(|&k| k == 2) {
            let mut v = a;
            v.push(2);
            GroupLabel::Abelian(invariant_factors(&v))
        } else {
            GroupLabel::Dihedral(a)
        };
        debug_assert_eq!(group.order(), closure_degree);
        let closure_subfields = product_closure(self.subfields_fixed_by(&n))?;
        Ok(FixedField {
            degree: (self.order() / h.len()) as u64,
            quadratic_subfields: self.subfields_fixed_by(&h),
            closure: FieldFingerprint { closure_degree, group, quadratic_subfields: closure_subfields },
        })
    }
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

/// Integer in the square class of a nonzero rational.
fn square_class_integer(r: &Rational) -> BigInt {
    r.numer() * r.denom()
}

fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    (k, n)
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
///
/// # Panics
/// If `a` or `b` is zero.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let a = square_class_integer(a);
    let b = square_class_integer(b);
    match v {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = split_valuation(&a, 2);
            let (be, w) = split_valuation(&b, 2);
            let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u64().unwrap();
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let (u, w) = (m8(&u), m8(&w));
            let e = eps(u) * eps(w) + al as u64 * omega(w) + be as u64 * omega(u);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = split_valuation(&a, p);
            let (be, w) = split_valuation(&b, p);
            let pb = BigInt::from(p);
            let mut s: i8 = if (al as u64 * be as u64 * ((p - 1) / 2)) % 2 == 1 { -1 } else { 1 };
            if be % 2 == 1 {
                s *= arith::kronecker_big(&u, &pb);
            }
            if al % 2 == 1 {
                s *= arith::kronecker_big(&w, &pb);
            }
            s
        }
    }
}

/// Ramification of the quaternion algebra `(a, b / Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuaternionDiscriminant {
    pub disc: u64,
    pub ramified_primes: Vec<u64>,
    pub infinite_ramified: bool,
}

pub fn quaternion_discriminant(a: &Rational, b: &Rational) -> Result<QuaternionDiscriminant> {
    let n = square_class_integer(a) * square_class_integer(b) * BigInt::from(2);
    let mut primes = Vec::new();
    for (p, _) in arith::factor(&n)? {
        primes.push(p.to_u64().ok_or(ClassFieldError::Overflow)?);
    }
    let ramified_primes: Vec<u64> =
        primes.into_iter().filter(|&p| hilbert_symbol(a, b, Place::Prime(p)) == -1).collect();
    let disc = ramified_primes.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p)).ok_or(ClassFieldError::Overflow)?;
    Ok(QuaternionDiscriminant { disc, ramified_primes, infinite_ramified: hilbert_symbol(a, b, Place::Infinity) == -1 })
}

impl ClassGroup {
    /// Classes `[a]`, one per coset of the squares, with `(-s, m N(a) / Q)` of discriminant `d`.
    pub fn conjugation_classes(&self, d: u64, m: u64) -> Result<Vec<usize>> {
        let disc = self.disc();
        let modulus = BigInt::from(2) * BigInt::from(d) * BigInt::from(disc) * BigInt::from(m);
        let minus_s = Rational::from_integer(-BigInt::from(self.order.s));
        let mut seen: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
        for i in 0..self.h() {
            let genus = self.genus_of(i);
            if seen.contains_key(&genus) {
                continue;
            }
            let n = self.elements[i].represented_coprime(&modulus)?;
            let q = quaternion_discriminant(&minus_s, &Rational::from_integer(BigInt::from(m) * BigInt::from(n)))?;
            if q.disc == d && !q.infinite_ramified {
                seen.insert(genus, i);
            }
        }
        if seen.is_empty() {
            return Err(ClassFieldError::NoClassFound);
        }
        let mut out: Vec<usize> = seen.into_values().collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// Classes of `R`, up to squares, whose norms make `(-s, m N(a) / Q)` have discriminant `d`.
pub fn conjugation_ideal_class(r: &QuadOrder, d: u64, m: u64) -> Result<Vec<BQF>> {
    let g = ClassGroup::new(r.disc)?;
    Ok(g.conjugation_classes(d, m)?.into_iter().map(|i| g.form(i)).collect())
}
