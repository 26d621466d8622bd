//! The rings Z[√2] and Z[ω] (ω = e^{iπ/4}), generic over the integer type so
//! the same code serves the fast i128 paths and the BigInt number theory.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

pub trait Int: Clone + Debug + Integer + Signed + ToPrimitive + From<i64> {}
impl Int for i128 {}
impl Int for BigInt {}

fn two<T: Int>() -> T {
    T::from(2)
}

/// `a + b√2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZRoot2<T> {
    pub a: T,
    pub b: T,
}

impl<T: Int> ZRoot2<T> {
    pub fn new(a: T, b: T) -> Self {
        ZRoot2 { a, b }
    }

    pub fn from_int(a: T) -> Self {
        ZRoot2 { a, b: T::zero() }
    }

    pub fn zero() -> Self {
        Self::from_int(T::zero())
    }

    pub fn one() -> Self {
        Self::from_int(T::one())
    }

    /// The fundamental unit `1 + √2`.
    pub fn lambda() -> Self {
        ZRoot2::new(T::one(), T::one())
    }

    /// `λ^{-1} = √2 - 1`.
    pub fn lambda_inv() -> Self {
        ZRoot2::new(-T::one(), T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The √2 → -√2 automorphism.
    pub fn bullet(&self) -> Self {
        ZRoot2::new(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - 2 b^2`.
    pub fn norm(&self) -> T {
        self.a.clone() * self.a.clone() - two::<T>() * self.b.clone() * self.b.clone()
    }

    /// Exact sign test for `a + b√2 >= 0`.
    pub fn is_nonneg(&self) -> bool {
        let (a, b) = (&self.a, &self.b);
        match (a.is_negative(), b.is_negative()) {
            (false, false) => true,
            (true, true) => false,
            (false, true) => a.clone() * a.clone() >= two::<T>() * b.clone() * b.clone(),
            (true, false) => two::<T>() * b.clone() * b.clone() >= a.clone() * a.clone(),
        }
    }

    /// Both the value and its conjugate are non-negative.
    pub fn is_doubly_nonneg(&self) -> bool {
        self.is_nonneg() && self.bullet().is_nonneg()
    }

    /// Value as f64, avoiding cancellation when `a` and `b√2` nearly cancel.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.a.is_negative() == self.b.is_negative() || self.a.is_zero() || self.b.is_zero() {
            return a + b * SQRT_2;
        }
        let n = self.norm().to_f64().unwrap_or(f64::NAN);
        n / (a - b * SQRT_2)
    }

    pub fn divisible_by_sqrt2(&self) -> bool {
        self.a.is_even()
    }

    pub fn div_sqrt2(&self) -> Self {
        debug_assert!(self.divisible_by_sqrt2());
        ZRoot2::new(self.b.clone(), self.a.clone() / two::<T>())
    }

    /// Power of √2 dividing a nonzero element.
    pub fn sqrt2_valuation(&self) -> u32 {
        let mut x = self.clone();
        let mut v = 0;
        while !x.is_zero() && x.divisible_by_sqrt2() {
            x = x.div_sqrt2();
            v += 1;
        }
        v
    }

    /// `self / other` when the quotient lies in Z[√2].
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let n = other.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.clone() * other.bullet();
        if (num.a.clone() % n.clone()).is_zero() && (num.b.clone() % n.clone()).is_zero() {
            Some(ZRoot2::new(num.a / n.clone(), num.b / n))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T: Int> Add for ZRoot2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ZRoot2::new(self.a + o.a, self.b + o.b)
    }
}

impl<T: Int> Sub for ZRoot2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ZRoot2::new(self.a - o.a, self.b - o.b)
    }
}

impl<T: Int> Neg for ZRoot2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        ZRoot2::new(-self.a, -self.b)
    }
}

impl<T: Int> Mul for ZRoot2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = self.a.clone() * o.a.clone() + two::<T>() * self.b.clone() * o.b.clone();
        let b = self.a * o.b + self.b * o.a;
        ZRoot2::new(a, b)
    }
}

/// `a + bω + cω² + dω³`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZOmega<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Int> ZOmega<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        ZOmega { a, b, c, d }
    }

    pub fn from_int(a: T) -> Self {
        ZOmega::new(a, T::zero(), T::zero(), T::zero())
    }

    pub fn zero() -> Self {
        Self::from_int(T::zero())
    }

    pub fn one() -> Self {
        Self::from_int(T::one())
    }

    pub fn omega() -> Self {
        ZOmega::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn from_root2(x: &ZRoot2<T>) -> Self {
        ZOmega::new(x.a.clone(), x.b.clone(), T::zero(), -x.b.clone())
    }

    pub fn coords(&self) -> [T; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn from_coords(c: [T; 4]) -> Self {
        let [a, b, c, d] = c;
        ZOmega::new(a, b, c, d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        ZOmega::new(self.a.clone(), -self.d.clone(), -self.c.clone(), -self.b.clone())
    }

    /// The √2 → -√2 automorphism (ω → -ω).
    pub fn bullet(&self) -> Self {
        ZOmega::new(self.a.clone(), -self.b.clone(), self.c.clone(), -self.d.clone())
    }

    /// Multiplication by `ω^k`.
    pub fn mul_omega(&self, k: i32) -> Self {
        let mut c = self.coords();
        for _ in 0..k.rem_euclid(8) {
            let [a, b, cc, d] = c;
            c = [-d, a, b, cc];
        }
        Self::from_coords(c)
    }

    /// `|self|^2` as an element of Z[√2].
    pub fn norm_sqr(&self) -> ZRoot2<T> {
        let p = self.clone() * self.conj();
        ZRoot2::new(p.a, p.b)
    }

    /// Absolute norm `|x|^2 |x•|^2`, a non-negative integer.
    pub fn norm(&self) -> T {
        self.norm_sqr().norm()
    }

    pub fn to_complex(&self) -> Complex64 {
        let f = |x: &T| x.to_f64().unwrap_or(f64::NAN);
        let (a, b, c, d) = (f(&self.a), f(&self.b), f(&self.c), f(&self.d));
        Complex64::new(a + (b - d) * FRAC_1_SQRT_2, c + (b + d) * FRAC_1_SQRT_2)
    }

    pub fn divisible_by_sqrt2(&self) -> bool {
        (self.a.clone() - self.c.clone()).is_even() && (self.b.clone() - self.d.clone()).is_even()
    }

    pub fn div_sqrt2(&self) -> Self {
        debug_assert!(self.divisible_by_sqrt2());
        let t = two::<T>();
        ZOmega::new(
            (self.b.clone() - self.d.clone()) / t.clone(),
            (self.a.clone() + self.c.clone()) / t.clone(),
            (self.b.clone() + self.d.clone()) / t.clone(),
            (self.c.clone() - self.a.clone()) / t,
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T: Int> Add for ZOmega<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ZOmega::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl<T: Int> Sub for ZOmega<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ZOmega::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl<T: Int> Neg for ZOmega<T> {
    type Output = Self;
    fn neg(self) -> Self {
        ZOmega::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl<T: Int> Mul for ZOmega<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let x = self.coords();
        let y = o.coords();
        let mut out: [T; 4] = [T::zero(), T::zero(), T::zero(), T::zero()];
        for i in 0..4 {
            for j in 0..4 {
                let p = x[i].clone() * y[j].clone();
                if i + j < 4 {
                    out[i + j] = out[i + j].clone() + p;
                } else {
                    out[i + j - 4] = out[i + j - 4].clone() - p;
                }
            }
        }
        Self::from_coords(out)
    }
}

pub fn to_big(x: &ZOmega<i128>) -> ZOmega<BigInt> {
    ZOmega::new(x.a.into(), x.b.into(), x.c.into(), x.d.into())
}

pub fn from_big(x: &ZOmega<BigInt>) -> Option<ZOmega<i128>> {
    Some(ZOmega::new(x.a.to_i128()?, x.b.to_i128()?, x.c.to_i128()?, x.d.to_i128()?))
}
