//! Euclidean coefficient rings used after specialization.

mod snf;

pub use snf::{combine_torsion, smith_normal_form, SmithForm, SparseMatrix};

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

/// A Euclidean domain with a canonical choice of associates.
pub trait EuclideanRing: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn add_r(&self, rhs: &Self) -> Self;
    fn sub_r(&self, rhs: &Self) -> Self;
    fn mul_r(&self, rhs: &Self) -> Self;
    fn neg_r(&self) -> Self;
    /// Quotient and remainder with `norm(rem) < norm(d)`.
    fn div_rem_r(&self, d: &Self) -> (Self, Self);
    /// Euclidean size; zero only for the zero element.
    fn norm(&self) -> u64;
    /// Unit `u` such that `u * self` is the canonical associate.
    fn normalizing_unit(&self) -> Self;

    fn canonical(&self) -> Self {
        self.mul_r(&self.normalizing_unit())
    }

    fn gcd_r(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem_r(&b);
            a = b;
            b = r;
        }
        a.canonical()
    }

    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem_r(self).1.is_zero()
    }
}

impl EuclideanRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn add_r(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_r(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_r(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_r(&self) -> Self {
        -self
    }
    fn div_rem_r(&self, d: &Self) -> (Self, Self) {
        Integer::div_rem(self, d)
    }
    fn norm(&self) -> u64 {
        // saturates for huge entries, which only affects pivot preference
        let m = self.magnitude();
        if m.bits() <= 64 {
            m.iter_u64_digits().next().unwrap_or(0)
        } else {
            u64::MAX
        }
    }
    fn normalizing_unit(&self) -> Self {
        if self.sign() == Sign::Minus {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf2(pub bool);

impl Add for Gf2 {
    type Output = Gf2;
    // characteristic two: addition is xor, multiplication is and
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 ^ rhs.0)
    }
}

impl Mul for Gf2 {
    type Output = Gf2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 & rhs.0)
    }
}

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

impl EuclideanRing for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn one() -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn is_unit(&self) -> bool {
        self.0
    }
    fn add_r(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub_r(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn mul_r(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg_r(&self) -> Self {
        *self
    }
    fn div_rem_r(&self, d: &Self) -> (Self, Self) {
        assert!(d.0, "division by zero in Z/2");
        (*self, Gf2(false))
    }
    fn norm(&self) -> u64 {
        self.0 as u64
    }
    fn normalizing_unit(&self) -> Self {
        Gf2(true)
    }
}

/// Polynomial in `s` over ℤ/2, stored as a bit vector (bit k = coefficient of s^k).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf2Poly(pub BigUint);

impl Gf2Poly {
    pub fn monomial(k: usize) -> Self {
        Gf2Poly(BigUint::one() << k)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        let b = self.0.bits();
        (b > 0).then(|| b - 1)
    }

    fn clmul(a: &BigUint, b: &BigUint) -> BigUint {
        let mut out = BigUint::zero();
        for k in 0..b.bits() {
            if b.bit(k) {
                out ^= a << k;
            }
        }
        out
    }
}

impl Add for Gf2Poly {
    type Output = Gf2Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf2Poly) -> Gf2Poly {
        Gf2Poly(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = (0..self.0.bits())
            .filter(|&k| self.0.bit(k))
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "s".to_string(),
                _ => format!("s^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl EuclideanRing for Gf2Poly {
    fn zero() -> Self {
        Gf2Poly(BigUint::zero())
    }
    fn one() -> Self {
        Gf2Poly(BigUint::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.0.is_one()
    }
    fn add_r(&self, rhs: &Self) -> Self {
        Gf2Poly(&self.0 ^ &rhs.0)
    }
    fn sub_r(&self, rhs: &Self) -> Self {
        self.add_r(rhs)
    }
    fn mul_r(&self, rhs: &Self) -> Self {
        Gf2Poly(Self::clmul(&self.0, &rhs.0))
    }
    fn neg_r(&self) -> Self {
        self.clone()
    }
    fn div_rem_r(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = BigUint::zero();
        while r.bits() > dd {
            let shift = r.bits() - 1 - dd;
            q.set_bit(shift, true);
            r ^= &d.0 << shift;
        }
        (Gf2Poly(q), Gf2Poly(r))
    }
    fn norm(&self) -> u64 {
        self.0.bits()
    }
    fn normalizing_unit(&self) -> Self {
        Self::one()
    }
}
