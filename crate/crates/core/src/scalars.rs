//! Exact numbers: big rationals, elements `a + b√d` of a real quadratic
//! field, and dense rational matrices.
//!
//! Nothing in here touches floating point except [`ExactScalar::to_f64`],
//! which exists for rendering only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

fn sign_of(r: &Rational) -> Ordering {
    r.cmp(&Rational::zero())
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Splits `n > 0` as `s² · f`. `f` is squarefree unless `n` carries a
/// repeated prime factor above the trial-division limit whose cofactor is
/// not itself a square.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &pb;
        }
        if e % 2 == 1 {
            f *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        f *= rest;
    }
    (s, f)
}

/// An exact real number: either rational or `a + b√d` with `d` a squarefree
/// integer greater than one and `b ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(Rational),
    QuadExt { a: Rational, b: Rational, d: BigInt },
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::Rational(r)
    }
}

impl From<&Rational> for ExactScalar {
    fn from(r: &Rational) -> Self {
        ExactScalar::Rational(r.clone())
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::Rational(int(n))
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rational(Rational::one())
    }

    /// Builds `a + b√d` in normal form. `d` must be non-negative.
    pub fn quad(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::NoRealRoot);
        }
        if b.is_zero() || d.is_zero() {
            return Ok(ExactScalar::Rational(a));
        }
        // √(n/m) = √(n·m) / m
        let m = d.denom().clone();
        let k = d.numer() * &m;
        let (s, f) = square_split(&k);
        let b = b * Rational::new(s, m);
        if f.is_one() {
            Ok(ExactScalar::Rational(a + b))
        } else {
            Ok(ExactScalar::QuadExt { a, b, d: f })
        }
    }

    pub fn sqrt(r: &Rational) -> Result<Self> {
        Self::quad(Rational::zero(), Rational::one(), r.clone())
    }

    /// Re-normalizes; a no-op on values built through the public constructors.
    pub fn normalize(&self) -> Self {
        match self {
            ExactScalar::Rational(_) => self.clone(),
            ExactScalar::QuadExt { a, b, d } => {
                Self::quad(a.clone(), b.clone(), Rational::from_integer(d.clone()))
                    .expect("radicand is positive")
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactScalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        match self {
            ExactScalar::QuadExt { d, .. } => Some(d),
            _ => None,
        }
    }

    fn parts(&self) -> (Rational, Rational) {
        match self {
            ExactScalar::Rational(r) => (r.clone(), Rational::zero()),
            ExactScalar::QuadExt { a, b, .. } => (a.clone(), b.clone()),
        }
    }

    fn assemble(a: Rational, b: Rational, d: Option<BigInt>) -> Self {
        match d {
            Some(d) if !b.is_zero() => ExactScalar::QuadExt { a, b, d },
            _ => ExactScalar::Rational(a),
        }
    }

    fn common_radicand(&self, other: &Self) -> Result<Option<BigInt>> {
        match (self.radicand(), other.radicand()) {
            (None, None) => Ok(None),
            (Some(d), None) | (None, Some(d)) => Ok(Some(d.clone())),
            (Some(d1), Some(d2)) if d1 == d2 => Ok(Some(d1.clone())),
            (Some(d1), Some(d2)) => Err(Error::MixedRadicands(d1.to_string(), d2.to_string())),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        Ok(Self::assemble(a1 + a2, b1 + b2, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        let dr = d.clone().map(Rational::from_integer).unwrap_or_else(Rational::zero);
        let a = &a1 * &a2 + &b1 * &b2 * dr;
        let b = a1 * b2 + a2 * b1;
        Ok(Self::assemble(a, b, d))
    }

    pub fn recip(&self) -> Result<Self> {
        match self {
            ExactScalar::Rational(r) => {
                if r.is_zero() {
                    Err(Error::OutOfRange("division by zero".into()))
                } else {
                    Ok(ExactScalar::Rational(r.recip()))
                }
            }
            ExactScalar::QuadExt { a, b, d } => {
                // (a + b√d)⁻¹ = (a − b√d) / (a² − b²d); the norm is non-zero for squarefree d > 1.
                let norm = a * a - b * b * Rational::from_integer(d.clone());
                Ok(Self::assemble(a / &norm, -b / &norm, Some(d.clone())))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.recip()?)
    }

    /// Sign relative to zero, decided in rational arithmetic.
    pub fn signum(&self) -> Ordering {
        match self {
            ExactScalar::Rational(r) => sign_of(r),
            ExactScalar::QuadExt { a, b, d } => quad_sign(a, b, d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Floating point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactScalar::QuadExt { a, b, d } => {
                a.to_f64().unwrap_or(f64::NAN)
                    + b.to_f64().unwrap_or(f64::NAN) * d.to_f64().unwrap_or(f64::NAN).sqrt()
            }
        }
    }
}

fn quad_sign(a: &Rational, b: &Rational, d: &BigInt) -> Ordering {
    let sa = sign_of(a);
    let sb = sign_of(b);
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * Rational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Compares `x` and `y` living in two different quadratic fields.
fn mixed_cmp(x: &ExactScalar, y: &ExactScalar) -> Ordering {
    let (a1, b1) = x.parts();
    let (a2, b2) = y.parts();
    let d1 = x.radicand().cloned().expect("mixed comparison of quadratic values");
    let d2 = y.radicand().cloned().expect("mixed comparison of quadratic values");
    // x − y = u − v with u = (a1 − a2) + b1√d1 and v = b2√d2
    let u = ExactScalar::assemble(a1 - a2, b1, Some(d1));
    let su = u.signum();
    let sv = sign_of(&b2);
    use Ordering::*;
    match (su, sv) {
        (Equal, Equal) => Equal,
        (Greater, Less) | (Greater, Equal) | (Equal, Less) => Greater,
        (Less, Greater) | (Less, Equal) | (Equal, Greater) => Less,
        (Greater, Greater) | (Less, Less) => {
            let v2 = ExactScalar::Rational(&b2 * &b2 * Rational::from_integer(d2));
            let diff = u.try_mul(&u).expect("same radicand").try_sub(&v2).expect("same radicand");
            if su == Greater {
                diff.signum()
            } else {
                diff.signum().reverse()
            }
        }
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.try_sub(other) {
            Ok(diff) => diff.signum(),
            Err(_) => mixed_cmp(self, other),
        }
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{}", format_rational(r)),
            ExactScalar::QuadExt { a, b, d } => {
                let mut out = String::new();
                if !a.is_zero() {
                    out.push_str(&format_rational(a));
                    out.push_str(if b.is_negative() { " - " } else { " + " });
                } else if b.is_negative() {
                    out.push('-');
                }
                let mag = b.abs();
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(&format!("sqrt({d})"));
                f.write_str(&out)
            }
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::QuadExt { a, b, d } => ExactScalar::QuadExt {
                a: -a,
                b: -b,
                d: d.clone(),
            },
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

// The operator forms panic when two different radicands meet; within one
// polygon computation only one radicand ever occurs. Use the `try_*`
// methods where that is not guaranteed.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).expect("exact arithmetic failed")
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$checked(&rhs).expect("exact arithmetic failed")
            }
        }
        impl $trait<&Rational> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &Rational) -> ExactScalar {
                self.$checked(&ExactScalar::from(rhs)).expect("exact arithmetic failed")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

/// Smallest root `≥ lower` of `c2·t² + c1·t + c0`, rational when the
/// discriminant is a rational square.
pub fn positive_quadratic_root(
    c2: &Rational,
    c1: &Rational,
    c0: &Rational,
    lower: &ExactScalar,
) -> Result<ExactScalar> {
    if c2.is_zero() {
        if c1.is_zero() {
            return Err(Error::NoRealRoot);
        }
        let root = ExactScalar::Rational(-c0 / c1);
        return if &root >= lower { Ok(root) } else { Err(Error::NoRealRoot) };
    }
    let disc = c1 * c1 - int(4) * c2 * c0;
    if disc.is_negative() {
        return Err(Error::NoRealRoot);
    }
    let two_c2 = int(2) * c2;
    let centre = -c1 / &two_c2;
    let half_width = two_c2.recip();
    let r1 = ExactScalar::quad(centre.clone(), half_width.clone(), disc.clone())?;
    let r2 = ExactScalar::quad(centre, -half_width, disc)?;
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if &lo >= lower {
        Ok(lo)
    } else if &hi >= lower {
        Ok(hi)
    } else {
        Err(Error::NoRealRoot)
    }
}

/// Signature data of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Principal submatrix on the given indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Row-reduces in place; returns the pivot columns.
    fn row_reduce(&mut self, limit_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(i, j) - &factor * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce(self.cols).len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            for i in c + 1..n {
                let factor = m.get(i, c) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &factor * m.get(c, j);
                    m.set(i, j, v);
                }
            }
            det *= pivot;
        }
        Ok(det)
    }

    /// Solves `self · X = B` for every right-hand side column in `rhs`.
    pub fn solve_columns(&self, rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        for b in rhs {
            if b.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.len(),
                });
            }
        }
        let k = rhs.len();
        let mut aug = Self::zeros(n, n + k);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for (c, b) in rhs.iter().enumerate() {
                aug.set(i, n + c, b[i].clone());
            }
        }
        if aug.row_reduce(n).len() < n {
            return Err(Error::SingularMatrix);
        }
        Ok((0..k)
            .map(|c| (0..n).map(|i| aug.get(i, n + c).clone()).collect())
            .collect())
    }

    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.solve_columns(&[rhs.to_vec()])?.remove(0))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        let cols: Vec<Vec<Rational>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let sol = self.solve_columns(&cols)?;
        let mut inv = Self::zeros(n, n);
        for (j, col) in sol.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        Ok(inv)
    }

    /// Negative definiteness through symmetric elimination without pivoting:
    /// the k-th pivot is `det(G_k)/det(G_{k−1})`, so alternating leading
    /// minors starting negative means every pivot is negative.
    pub fn is_negative_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut m = self.clone();
        for c in 0..n {
            let pivot = m.get(c, c).clone();
            if !pivot.is_negative() {
                return Ok(false);
            }
            for i in c + 1..n {
                let factor = m.get(i, c) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &factor * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(true)
    }

    /// Counts signs of the form by congruence diagonalization with rational
    /// pivots; a zero diagonal pivot is repaired by a basis permutation or,
    /// failing that, by adding a partner basis vector.
    pub fn inertia(&self) -> Result<Inertia> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut out = Inertia {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for k in 0..n {
            if m.get(k, k).is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !m.get(j, j).is_zero()) {
                    m.swap_rows(k, j);
                    m.swap_cols(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !m.get(k, j).is_zero()) {
                    // e_k ← e_k + e_j gives diagonal 2·m[k][j] ≠ 0
                    for c in 0..n {
                        let v = m.get(k, c) + m.get(j, c);
                        m.set(k, c, v);
                    }
                    for r in 0..n {
                        let v = m.get(r, k) + m.get(r, j);
                        m.set(r, k, v);
                    }
                } else {
                    out.zero += 1;
                    continue;
                }
            }
            let pivot = m.get(k, k).clone();
            if pivot.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            for i in k + 1..n {
                let factor = m.get(i, k) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m.get(i, c) - &factor * m.get(k, c);
                    m.set(i, c, v);
                }
                for r in 0..n {
                    let v = m.get(r, i) - &factor * m.get(r, k);
                    m.set(r, i, v);
                }
            }
        }
        Ok(out)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Exact solution of `g · x = rhs`.
pub fn solve_linear(g: &RationalMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    g.solve(rhs)
}

pub fn is_negative_definite(g: &RationalMatrix) -> Result<bool> {
    g.is_negative_definite()
}
