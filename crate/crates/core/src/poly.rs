//! Dense univariate polynomials.
//!
//! [`Poly`] is generic over any exact ring scalar; root finding, factorization
//! and discriminants are provided for rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

use crate::Rational;

/// Ring scalars usable as polynomial coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug + num_traits::Num + Neg<Output = Self> {}
impl<T> Scalar for T where T: Clone + PartialEq + fmt::Debug + num_traits::Num + Neg<Output = T> {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("degree {0} is above the supported bound of 4")]
    DegreeTooHigh(usize),
    #[error("discriminant is only implemented for degrees 2, 3 and 4, got {0:?}")]
    DegreeUnsupported(Option<usize>),
}

/// Coefficient `i` multiplies `x^i`; trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `a x + b`.
    pub fn linear(a: T, b: T) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::new();
        let mut k = T::zero();
        for c in self.coeffs.iter().skip(1) {
            k = k + T::one();
            out.push(c.clone() * k.clone());
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Homogeneous substitution `sum a_i (αx+β)^i (γx+δ)^(n-i)` for a form of degree `n`.
    pub fn homogeneous_substitute(&self, n: usize, alpha: &T, beta: &T, gamma: &T, delta: &T) -> Self {
        let num = Self::linear(alpha.clone(), beta.clone());
        let den = Self::linear(gamma.clone(), delta.clone());
        let mut acc = Self::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = &num.pow(i) * &den.pow(n - i);
            acc = &acc + &term.scale(c);
        }
        acc
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect(),
        )
    }
}

impl<T: Scalar + num_traits::Num> Poly<T>
where
    T: std::ops::Div<Output = T>,
{
    /// Euclidean division; requires a field of coefficients.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: Poly<T>) -> Poly<T> {
        &self + &o
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: Poly<T>) -> Poly<T> {
        &self - &o
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: Poly<T>) -> Poly<T> {
        &self * &o
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

/// Polynomial with rational coefficients.
pub type QPoly = Poly<Rational>;

/// Result of [`QPoly::factor_low_degree`]: `f = unit * prod(factors)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: Rational,
    /// Monic irreducible factors, repeated according to multiplicity, sorted by degree.
    pub factors: Vec<QPoly>,
}

impl Factorization {
    pub fn expand(&self) -> QPoly {
        self.factors.iter().fold(QPoly::constant(self.unit.clone()), |acc, f| &acc * f)
    }
}

impl QPoly {
    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    /// Scales by a positive rational so that coefficients are coprime integers.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }

    fn sign_changes(seq: &[QPoly], x: &Rational) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for p in seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    /// Integer roots of a monic squarefree integer polynomial, isolated by Sturm bisection
    /// on half-integer endpoints (which are never roots).
    fn integer_roots_monic(g: &QPoly) -> Vec<BigInt> {
        let bound = g.coeffs.iter().map(|c| c.abs().to_integer()).max().unwrap_or_default() + BigInt::one();
        let seq = g.sturm_sequence();
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            // Interval (lo - 1/2, hi + 1/2) with integer lo <= hi.
            let a = Rational::from_integer(lo.clone()) - &half;
            let b = Rational::from_integer(hi.clone()) + &half;
            let count = Self::sign_changes(&seq, &a) - Self::sign_changes(&seq, &b);
            if count == 0 {
                continue;
            }
            if lo == hi {
                if g.eval(&Rational::from_integer(lo.clone())).is_zero() {
                    out.push(lo);
                }
                continue;
            }
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            stack.push((&mid + BigInt::one(), hi));
            stack.push((lo, mid));
        }
        out.sort();
        out
    }

    /// All rational roots, repeated by multiplicity, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        assert!(!self.is_zero(), "rational_roots of the zero polynomial");
        if self.degree() == Some(0) {
            return Vec::new();
        }
        let sqf = self.div_rem(&self.gcd(&self.derivative())).0;
        let ints = QPoly::new(sqf.primitive_integer().into_iter().map(Rational::from_integer).collect());
        let n = ints.degree().unwrap();
        let lead = ints.leading();
        // g(X) = lead^(n-1) f(X / lead) is monic with integer coefficients.
        let g =
            QPoly::new((0..=n).map(|i| ints.coeff(i) * num_traits::pow(lead.clone(), n - i) / lead.clone()).collect());
        let mut roots = Vec::new();
        for r in Self::integer_roots_monic(&g) {
            let root = Rational::from_integer(r) / &lead;
            let lin = QPoly::linear(Rational::one(), -root.clone());
            let mut rest = self.clone();
            loop {
                let (q, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                roots.push(root.clone());
                rest = q;
            }
        }
        roots.sort();
        roots
    }

    /// Factors a polynomial of degree at most 4 into monic irreducibles over the rationals.
    pub fn factor_low_degree(&self) -> Result<Factorization, PolyError> {
        let deg = self.degree().unwrap_or(0);
        if deg > 4 {
            return Err(PolyError::DegreeTooHigh(deg));
        }
        let unit = self.leading();
        if deg == 0 {
            return Ok(Factorization { unit, factors: vec![] });
        }
        let mut rest = self.monic();
        let mut factors = Vec::new();
        for r in self.rational_roots() {
            let lin = QPoly::linear(Rational::one(), -r);
            rest = rest.div_rem(&lin).0;
            factors.push(lin);
        }
        match rest.degree() {
            Some(4) => match split_quartic_into_quadratics(&rest) {
                Some((p, q)) => {
                    factors.push(p);
                    factors.push(q);
                }
                None => factors.push(rest),
            },
            Some(0) => {}
            _ => factors.push(rest),
        }
        factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| format!("{a:?}").cmp(&format!("{b:?}"))));
        Ok(Factorization { unit, factors })
    }

    /// Discriminant via the Sylvester resultant of `f` and `f'`.
    pub fn discriminant(&self) -> Result<Rational, PolyError> {
        let n = match self.degree() {
            Some(n @ 2..=4) => n,
            d => return Err(PolyError::DegreeUnsupported(d)),
        };
        let res = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { Rational::one() } else { -Rational::one() };
        Ok(sign * res / self.leading())
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Splits a monic quartic without rational roots into two rational quadratics, if possible.
///
/// A split `(x^2 + p x + q)(x^2 + r x + s)` makes `q + s` a root of the cubic resolvent
/// `y^3 - c y^2 + (bd - 4e) y - (b^2 e + d^2 - 4ce)`; each rational root is tried.
fn split_quartic_into_quadratics(f: &QPoly) -> Option<(QPoly, QPoly)> {
    let (b, c, d, e) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
    let resolvent = QPoly::new(vec![
        -(&b * &b * &e + &d * &d - Rational::from_integer(4.into()) * &c * &e),
        &b * &d - Rational::from_integer(4.into()) * &e,
        -c.clone(),
        Rational::one(),
    ]);
    for t in resolvent.rational_roots() {
        // q + s = t, q s = e  and  p + r = b, p r = c - t.
        let four = Rational::from_integer(4.into());
        let two = Rational::from_integer(2.into());
        let disc_qs = &t * &t - &four * &e;
        let disc_pr = &b * &b - &four * (&c - &t);
        let (Some(sq), Some(sp)) = (crate::arith::rational_sqrt(&disc_qs), crate::arith::rational_sqrt(&disc_pr))
        else {
            continue;
        };
        let q = (&t + &sq) / &two;
        let s = (&t - &sq) / &two;
        for sp in [sp.clone(), -sp] {
            let p = (&b + &sp) / &two;
            let r = (&b - &sp) / &two;
            let f1 = QPoly::new(vec![q.clone(), p, Rational::one()]);
            let f2 = QPoly::new(vec![s.clone(), r, Rational::one()]);
            if &f1 * &f2 == *f {
                return Some((f1, f2));
            }
        }
    }
    None
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let (top, bottom) = m.split_at_mut(col + 1);
        let pivot = &top[col];
        for row in bottom.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &p;
            for (x, y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &QPoly, g: &QPoly) -> Rational {
    let (m, n) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rational::zero(); size];
        for j in 0..=m {
            row[i + j] = f.coeff(m - j);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rational::zero(); size];
        for j in 0..=n {
            row[i + j] = g.coeff(n - j);
        }
        rows.push(row);
    }
    determinant(rows)
}

impl From<Vec<BigRational>> for QPoly {
    fn from(v: Vec<BigRational>) -> Self {
        QPoly::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, rat_int};

    fn q(cs: &[i64]) -> QPoly {
        QPoly::from_i64(cs)
    }

    #[test]
    fn arithmetic_and_trim() {
        let a = q(&[1, 1]);
        let b = q(&[-1, 1]);
        assert_eq!(&a * &b, q(&[-1, 0, 1]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(q(&[3, 0, 0]).degree(), Some(0));
        let (quo, rem) = q(&[-1, 0, 0, 1]).div_rem(&q(&[-1, 1]));
        assert_eq!(quo, q(&[1, 1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn generic_over_integers() {
        let p: Poly<i64> = Poly::new(vec![1, 2, 1]);
        assert_eq!(p.eval(&3), 16);
        assert_eq!((&p * &Poly::new(vec![1, 1])).coeffs(), &[1, 3, 3, 1]);
        assert_eq!(p.derivative().coeffs(), &[2, 2]);
    }

    #[test]
    fn rational_root_examples() {
        assert_eq!(q(&[0, -1, 0, 1]).rational_roots(), vec![rat_int(-1), rat_int(0), rat_int(1)]);
        assert!(q(&[40534, -2235, 0, 1]).rational_roots().contains(&rat_int(26)));
        assert!(q(&[1, 0, 1]).rational_roots().is_empty());
        // (2x - 3)^2 (3x + 1)
        let f = &(&q(&[-3, 2]) * &q(&[-3, 2])) * &q(&[1, 3]);
        assert_eq!(f.rational_roots(), vec![rat(-1, 3), rat(3, 2), rat(3, 2)]);
        let g = QPoly::new(vec![rat(-1, 4), rat_int(0), rat_int(1)]);
        assert_eq!(g.rational_roots(), vec![rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn factor_examples() {
        let f = q(&[-1, 0, 0, 0, 1]).factor_low_degree().unwrap();
        assert_eq!(f.factors, vec![q(&[-1, 1]), q(&[1, 1]), q(&[1, 0, 1])]);
        let g = q(&[47433, 832, -378, 0, 1]).factor_low_degree().unwrap();
        assert_eq!(g.factors.len(), 1);
        let h = q(&[-4, 0, 1]).factor_low_degree().unwrap();
        assert_eq!(h.factors, vec![q(&[-2, 1]), q(&[2, 1])]);
        // (x^2 - x - 1)(3x^2 - 7x - 3)
        let k = q(&[-3, 10, -1, -10, -3]).reflect().factor_low_degree().unwrap();
        assert_eq!(k.factors.len(), 2);
        assert_eq!(k.expand(), q(&[-3, 10, -1, -10, -3]).reflect());
        assert!(matches!(q(&[1, 0, 0, 0, 0, 1]).factor_low_degree(), Err(PolyError::DegreeTooHigh(5))));
    }

    /// Degree pattern of a monic quartic modulo `p`, coarse enough for an irreducibility check.
    fn factor_degrees_mod_p(f: &[i64], p: i64) -> Vec<usize> {
        let roots: Vec<i64> =
            (0..p).filter(|&x| f.iter().rev().fold(0i64, |acc, &c| (acc * x + c).rem_euclid(p)) == 0).collect();
        let mut degs = vec![1; roots.len()];
        if roots.is_empty() {
            let mut has_quad = false;
            for a in 0..p {
                for b in 0..p {
                    // divide by x^2 + a x + b
                    let mut r: Vec<i64> = f.iter().map(|c| c.rem_euclid(p)).collect();
                    for k in (2..r.len()).rev() {
                        let c = r[k];
                        r[k] = 0;
                        r[k - 1] = (r[k - 1] - c * a).rem_euclid(p);
                        r[k - 2] = (r[k - 2] - c * b).rem_euclid(p);
                    }
                    if r.iter().all(|&c| c == 0) {
                        has_quad = true;
                    }
                }
            }
            degs = if has_quad { vec![2, 2] } else { vec![4] };
        }
        degs
    }

    #[test]
    fn irreducibility_by_modular_oracle() {
        let f = [47433i64, 832, -378, 0, 1];
        // Irreducible modulo some prime of good reduction implies irreducible.
        assert!([5i64, 7, 11, 13, 19, 23, 29, 31, 37, 41, 43, 47]
            .iter()
            .any(|&p| factor_degrees_mod_p(&f, p) == vec![4]));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(q(&[0, -1, 0, 1]).discriminant().unwrap(), rat_int(4));
        assert_eq!(q(&[-2, 0, 1]).discriminant().unwrap(), rat_int(8));
        // Quartic oracle through the binary-quartic invariants: 27 disc = 4 I^3 - J^2.
        let f = q(&[47433, 832, -378, 0, 1]);
        let a: Vec<BigInt> = (0..5).map(|i| f.coeff(i).to_integer()).collect();
        let (a0, a1, a2, a3, a4) = (&a[0], &a[1], &a[2], &a[3], &a[4]);
        let i = int(12) * a4 * a0 - int(3) * a3 * a1 + a2 * a2;
        let j = int(72) * a4 * a2 * a0 + int(9) * a3 * a2 * a1
            - int(27) * a4 * a1 * a1
            - int(27) * a3 * a3 * a0
            - int(2) * a2 * a2 * a2;
        let lhs = int(4) * &i * &i * &i - &j * &j;
        assert_eq!(f.discriminant().unwrap() * rat_int(27), Rational::from_integer(lhs));
        assert!(q(&[1, 1, 1, 1, 1, 1]).discriminant().is_err());
    }

    #[test]
    fn moebius_substitution_of_form() {
        // f(x) = x^2 - 2 as a binary quadratic under x -> (x + 1) / (x - 1).
        let f = q(&[-2, 0, 1]);
        let g = f.homogeneous_substitute(2, &rat_int(1), &rat_int(1), &rat_int(1), &rat_int(-1));
        assert_eq!(g, &q(&[1, 1]).pow(2) - &q(&[-1, 1]).pow(2).scale(&rat_int(2)));
    }
}
