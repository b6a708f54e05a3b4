//! Scalars: exact complex rationals and tolerance-compared complex floats.
//!
//! The exact rational keeps an `i64` fast path and promotes to a big
//! rational when an intermediate overflows, so results never round.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations shared by the exact and float scalar types.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Complex scalar from a real and imaginary rational `num/den`.
    fn from_parts(re: (i64, i64), im: (i64, i64)) -> Option<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for (numerically) zero input.
    fn inv(&self) -> Option<Self>;
    /// Exact zero test; in float mode only literal zeros qualify.
    fn is_zero(&self) -> bool;
    /// Max of the absolute real and imaginary parts.
    fn magnitude(&self) -> f64;
    /// Zero within `tol` in float mode, exactly zero in exact mode.
    fn is_negligible(&self, tol: f64) -> bool;
    fn is_exact() -> bool;

    fn add_assign(&mut self, o: &Self) {
        *self = Scalar::add(self, o);
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Rational number with a machine-word fast path.
#[derive(Clone)]
pub enum Rational {
    /// Reduced, denominator positive.
    Small(i64, i64),
    /// Only used for values that do not fit `Small`.
    Big(BigRational),
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_int(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    /// `None` when `den == 0`.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Self::from_i128(num as i128, den as i128))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalize_big(BigRational::new(num, den)))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Rational::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Rational::Small(a, b),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn normalize_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Rational::Small(a, b),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Rational::Small(0, _), _) => o.clone(),
            (_, Rational::Small(0, _)) => self.clone(),
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if b == d {
                    return Self::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                Self::from_i128(
                    *a as i128 * *d as i128 + *c as i128 * *b as i128,
                    *b as i128 * *d as i128,
                )
            }
            _ => Self::normalize_big(self.to_big() + o.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(a, b) => match a.checked_neg() {
                Some(n) => Rational::Small(n, *b),
                None => Self::from_i128(-(*a as i128), *b as i128),
            },
            Rational::Big(r) => Self::normalize_big(-r.clone()),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Rational::Small(0, _), _) | (_, Rational::Small(0, _)) => Self::zero(),
            (Rational::Small(1, 1), _) => o.clone(),
            (_, Rational::Small(1, 1)) => self.clone(),
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::normalize_big(self.to_big() * o.to_big()),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(a, b) => Some(Self::from_i128(*b as i128, *a as i128)),
            Rational::Big(r) => Some(Self::normalize_big(r.recip())),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Rational::Small(a, b) if *a < 0 => Self::from_i128(-(*a as i128), *b as i128),
            Rational::Small(..) => self.clone(),
            Rational::Big(r) => Rational::Big(r.abs()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(a, b) => *a as f64 / *b as f64,
            Rational::Big(r) => {
                let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
                let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
                if n.is_finite() && d.is_finite() {
                    n / d
                } else if r.is_positive() {
                    f64::MAX
                } else {
                    f64::MIN
                }
            }
        }
    }

    /// Parses `"a"` or `"a/b"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        Self::from_big(n, d)
    }
}

impl PartialEq for Rational {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rational {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(a, 1) => write!(f, "{a}"),
            Rational::Small(a, b) => write!(f, "{a}/{b}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Exact complex rational `re + im·i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Exact {
    pub re: Rational,
    pub im: Rational,
}

impl Exact {
    pub fn new(re: Rational, im: Rational) -> Self {
        Exact { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Exact { re, im: Rational::zero() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Exact::real(Rational::new(num, den).expect("nonzero denominator"))
    }

    /// Parses `"3"`, `"-2/3"`, `"1/2+3/4i"`, `"(1/2+3/4i)"`, `"2i"`.
    pub fn parse(s: &str) -> Option<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = match t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            Some(inner) => String::from(inner),
            None => t,
        };
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let cut = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(i, _)| i)
                .last();
            let (re, im) = match cut {
                Some(i) => (&body[..i], &body[i..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => "1",
                "-" => "-1",
                x => x.strip_prefix('+').unwrap_or(x),
            };
            return Some(Exact::new(Rational::parse(re)?, Rational::parse(im)?));
        }
        Some(Exact::real(Rational::parse(&t)?))
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        let im = self.im.to_string();
        if im.starts_with('-') {
            write!(f, "({}{}i)", self.re, im)
        } else {
            write!(f, "({}+{}i)", self.re, im)
        }
    }
}

impl Scalar for Exact {
    fn zero() -> Self {
        Exact::real(Rational::zero())
    }
    fn one() -> Self {
        Exact::real(Rational::one())
    }
    fn from_i64(v: i64) -> Self {
        Exact::real(Rational::from_int(v))
    }
    fn from_parts(re: (i64, i64), im: (i64, i64)) -> Option<Self> {
        Some(Exact::new(Rational::new(re.0, re.1)?, Rational::new(im.0, im.1)?))
    }
    fn add(&self, o: &Self) -> Self {
        Exact::new(self.re.add(&o.re), self.im.add(&o.im))
    }
    fn sub(&self, o: &Self) -> Self {
        Exact::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Exact::real(self.re.mul(&o.re));
        }
        Exact::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }
    fn neg(&self) -> Self {
        Exact::new(self.re.neg(), self.im.neg())
    }
    fn inv(&self) -> Option<Self> {
        if self.im.is_zero() {
            return self.re.inv().map(Exact::real);
        }
        let d = self.re.mul(&self.re).add(&self.im.mul(&self.im)).inv()?;
        Some(Exact::new(self.re.mul(&d), self.im.neg().mul(&d)))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        let a = self.re.abs().to_f64();
        let b = self.im.abs().to_f64();
        if a > b {
            a
        } else {
            b
        }
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Scalar::is_zero(self)
    }
    fn is_exact() -> bool {
        true
    }
}

/// Complex float `re + im·i`; equality checks go through a tolerance.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Approx {
    pub re: f64,
    pub im: f64,
}

impl Approx {
    pub fn new(re: f64, im: f64) -> Self {
        Approx { re, im }
    }
}

impl fmt::Debug for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "({}{}i)", self.re, self.im)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

fn fabs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

impl Scalar for Approx {
    fn zero() -> Self {
        Approx::new(0.0, 0.0)
    }
    fn one() -> Self {
        Approx::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Approx::new(v as f64, 0.0)
    }
    fn from_parts(re: (i64, i64), im: (i64, i64)) -> Option<Self> {
        if re.1 == 0 || im.1 == 0 {
            return None;
        }
        Some(Approx::new(re.0 as f64 / re.1 as f64, im.0 as f64 / im.1 as f64))
    }
    fn add(&self, o: &Self) -> Self {
        Approx::new(self.re + o.re, self.im + o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        Approx::new(self.re - o.re, self.im - o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        Approx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn neg(&self) -> Self {
        Approx::new(-self.re, -self.im)
    }
    fn inv(&self) -> Option<Self> {
        let d = self.re * self.re + self.im * self.im;
        if d == 0.0 {
            return None;
        }
        Some(Approx::new(self.re / d, -self.im / d))
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        let (a, b) = (fabs(self.re), fabs(self.im));
        if a > b {
            a
        } else {
            b
        }
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.magnitude() <= tol
    }
    fn is_exact() -> bool {
        false
    }
}

impl From<&Exact> for Approx {
    fn from(x: &Exact) -> Self {
        Approx::new(x.re.to_f64(), x.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_path_promotes_on_overflow() {
        let big = Rational::from_int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq.mul(&big.inv().unwrap());
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
    }

    #[test]
    fn min_value_negation() {
        let m = Rational::from_int(i64::MIN);
        assert_eq!(m.neg().neg(), m);
        assert_eq!(m.add(&m.neg()), Rational::zero());
    }

    #[test]
    fn complex_inverse() {
        let z = Exact::parse("1+2i").unwrap();
        let w = z.inv().unwrap();
        assert_eq!(z.mul(&w), Exact::one());
        assert_eq!(w, Exact::parse("1/5-2/5i").unwrap());
    }

    #[test]
    fn parse_and_display() {
        for s in ["3", "-2/3", "(1/2+3/4i)", "2i", "(1-1i)"] {
            let x = Exact::parse(s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!(Exact::parse("4/6").unwrap(), Exact::ratio(2, 3));
        assert!(Exact::parse("1/0").is_none());
    }

    #[test]
    fn float_tolerance() {
        let a = Approx::new(1e-12, 0.0);
        assert!(a.is_negligible(1e-9));
        assert!(!Scalar::is_zero(&a));
    }
}
