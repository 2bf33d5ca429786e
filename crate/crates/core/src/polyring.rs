//! Exact arithmetic in ℤ[s,t] and its evaluation homomorphisms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Gf2, Gf2Poly};

/// Monomial `s^s t^t`, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono {
    pub s: u32,
    pub t: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { s: 0, t: 0 };

    pub fn new(s: u32, t: u32) -> Self {
        Mono { s, t }
    }

    pub fn degree(&self) -> u32 {
        self.s + self.t
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.s.cmp(&other.s))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Mono {
    type Output = Mono;
    fn mul(self, rhs: Mono) -> Mono {
        Mono::new(self.s + rhs.s, self.t + rhs.t)
    }
}

/// Element of ℤ[s,t]. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Mono, BigInt>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<I: Into<BigInt>>(c: I) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn s() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial<I: Into<BigInt>>(c: I, s: u32, t: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::new(s, t), c.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (s, t, c) in terms {
            p.add_term(Mono::new(s, t), c.into());
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::ONE).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: u32, t: u32) -> BigInt {
        self.terms.get(&Mono::new(s, t)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Evaluation at a specialization into the integers.
    pub fn eval_int(&self, s: &BigInt, t: &BigInt) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |acc, (m, c)| {
            acc + c * num_traits::pow(s.clone(), m.s as usize) * num_traits::pow(t.clone(), m.t as usize)
        })
    }

    pub fn eval_gf2(&self, s: Gf2, t: Gf2) -> Gf2 {
        let mut acc = Gf2(false);
        for (m, c) in &self.terms {
            let mut v = Gf2(c.is_odd_int());
            if m.s > 0 {
                v = v * s;
            }
            if m.t > 0 {
                v = v * t;
            }
            acc = acc + v;
        }
        acc
    }

    /// Reduction mod 2 with `t = 0`, keeping `s` symbolic.
    pub fn to_gf2_poly(&self) -> Gf2Poly {
        let mut acc = Gf2Poly::default();
        for (m, c) in &self.terms {
            if m.t == 0 && c.is_odd_int() {
                acc = acc + Gf2Poly::monomial(m.s as usize);
            }
        }
        acc
    }

    pub fn specialize(&self, sp: &Specialization) -> SpecValue {
        match sp {
            Specialization::Integers { s, t } => SpecValue::Int(self.eval_int(s, t)),
            Specialization::Mod2 { s, t } => SpecValue::Mod2(self.eval_gf2(Gf2(*s), Gf2(*t))),
            Specialization::Mod2Poly => SpecValue::Mod2Poly(self.to_gf2_poly()),
        }
    }

    /// Serialization as a list of `[a, b, "coeff"]` in graded-lex order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.terms.iter().map(|(m, c)| serde_json::json!([m.s, m.t, c.to_string()])).collect())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let terms: Vec<PolyTerm> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Format(format!("malformed polynomial: {e}")))?;
        let mut p = Self::zero();
        for PolyTerm(s, t, c) in terms {
            let c: BigInt = c.as_str().parse().map_err(|_| Error::Format(format!("malformed coefficient {c:?}")))?;
            p.add_term(Mono::new(s, t), c);
        }
        Ok(p)
    }
}

#[derive(Deserialize, Serialize)]
struct PolyTerm(u32, u32, CoeffRepr);

/// Coefficients are written as decimal strings but plain integers are accepted.
#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum CoeffRepr {
    Str(String),
    Int(i64),
}

impl CoeffRepr {
    fn as_str(&self) -> String {
        match self {
            CoeffRepr::Str(s) => s.clone(),
            CoeffRepr::Int(i) => i.to_string(),
        }
    }
}

impl fmt::Debug for CoeffRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for BigInt {
    fn is_odd_int(&self) -> bool {
        self.magnitude().bit(0)
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match (m.s, m.t) {
                (0, 0) => String::new(),
                _ => {
                    let mut out = Vec::new();
                    for (name, e) in [("s", m.s), ("t", m.t)] {
                        match e {
                            0 => {}
                            1 => out.push(name.to_string()),
                            _ => out.push(format!("{name}^{e}")),
                        }
                    }
                    out.join("*")
                }
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl AddAssign<&BivariatePoly> for BivariatePoly {
    fn add_assign(&mut self, rhs: &BivariatePoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl Add<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BivariatePoly {
    type Output = BivariatePoly;
    fn add(mut self, rhs: BivariatePoly) -> BivariatePoly {
        self += &rhs;
        self
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        -&self
    }
}

impl Sub<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Sub for BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: BivariatePoly) -> BivariatePoly {
        &self - &rhs
    }
}

impl Mul<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(*m1 * *m2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: BivariatePoly) -> BivariatePoly {
        &self * &rhs
    }
}

/// Target of an evaluation homomorphism ℤ[s,t] → R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialization {
    /// ℤ with the given integer values of s and t.
    Integers { s: BigInt, t: BigInt },
    /// ℤ/2 with s, t ∈ {0, 1}.
    Mod2 { s: bool, t: bool },
    /// ℤ/2[s] with t = 0.
    Mod2Poly,
}

impl Specialization {
    pub fn khovanov() -> Self {
        Specialization::Integers { s: BigInt::zero(), t: BigInt::zero() }
    }

    pub fn lee() -> Self {
        Specialization::Integers { s: BigInt::zero(), t: BigInt::one() }
    }

    pub fn khovanov_mod2() -> Self {
        Specialization::Mod2 { s: false, t: false }
    }

    pub fn bar_natan() -> Self {
        Specialization::Mod2Poly
    }

    /// True when both s and t are sent to zero, so the quantum grading is preserved.
    pub fn kills_st(&self) -> bool {
        match self {
            Specialization::Integers { s, t } => s.is_zero() && t.is_zero(),
            Specialization::Mod2 { s, t } => !*s && !*t,
            Specialization::Mod2Poly => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Specialization::Integers { s, t } => format!("Z(s={s},t={t})"),
            Specialization::Mod2 { s, t } => format!("Z/2(s={},t={})", *s as u8, *t as u8),
            Specialization::Mod2Poly => "Z/2[s](t=0)".to_string(),
        }
    }
}

/// Value of a polynomial under a specialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecValue {
    Int(BigInt),
    Mod2(Gf2),
    Mod2Poly(Gf2Poly),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(u32, u32, i64)]) -> BivariatePoly {
        BivariatePoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn arithmetic_examples() {
        let st = &BivariatePoly::s() * &BivariatePoly::t();
        assert_eq!(&st + &BivariatePoly::zero(), st);
        let s = BivariatePoly::s();
        let t = BivariatePoly::t();
        assert_eq!(&(&s + &t) * &(&s - &t), p(&[(2, 0, 1), (0, 2, -1)]));
        assert_eq!(&p(&[(1, 0, 2)]) * &p(&[(0, 1, 3)]), p(&[(1, 1, 6)]));
    }

    #[test]
    fn specialize_examples() {
        let s = BivariatePoly::s();
        let t = BivariatePoly::t();
        assert_eq!((&s + &t).specialize(&Specialization::khovanov()), SpecValue::Int(0.into()));
        let s2t = &s + &t.scale(&BigInt::from(2));
        assert_eq!(s2t.specialize(&Specialization::lee()), SpecValue::Int(2.into()));
        let q = &(&s * &s) + &t;
        assert_eq!(q.specialize(&Specialization::bar_natan()), SpecValue::Mod2Poly(Gf2Poly::monomial(2)));
    }

    #[test]
    fn display_and_json() {
        let q = p(&[(0, 0, -1), (1, 1, 6), (2, 0, 1)]);
        assert_eq!(q.to_string(), "-1 + 6*s*t + s^2");
        let back = BivariatePoly::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
        assert!(BivariatePoly::from_json(&serde_json::json!([[0, 0, "x"]])).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = BivariatePoly> {
        prop::collection::vec((0u32..3, 0u32..3, -5i64..5), 0..5).prop_map(BivariatePoly::from_terms)
    }

    fn arb_spec() -> impl Strategy<Value = Specialization> {
        prop_oneof![
            (-3i64..4, -3i64..4).prop_map(|(s, t)| Specialization::Integers { s: s.into(), t: t.into() }),
            (any::<bool>(), any::<bool>()).prop_map(|(s, t)| Specialization::Mod2 { s, t }),
            Just(Specialization::Mod2Poly),
        ]
    }

    fn combine(a: SpecValue, b: SpecValue, mul: bool) -> SpecValue {
        use crate::ring::EuclideanRing;
        match (a, b) {
            (SpecValue::Int(x), SpecValue::Int(y)) => SpecValue::Int(if mul { x * y } else { x + y }),
            (SpecValue::Mod2(x), SpecValue::Mod2(y)) => SpecValue::Mod2(if mul { x * y } else { x + y }),
            (SpecValue::Mod2Poly(x), SpecValue::Mod2Poly(y)) => {
                SpecValue::Mod2Poly(if mul { x.mul_r(&y) } else { x.add_r(&y) })
            }
            _ => unreachable!(),
        }
    }

    proptest! {
        #[test]
        fn specialize_is_ring_hom(a in arb_poly(), b in arb_poly(), sp in arb_spec()) {
            let prod = (&a * &b).specialize(&sp);
            prop_assert_eq!(prod, combine(a.specialize(&sp), b.specialize(&sp), true));
            let sum = (&a + &b).specialize(&sp);
            prop_assert_eq!(sum, combine(a.specialize(&sp), b.specialize(&sp), false));
        }

        #[test]
        fn canonical_form(a in arb_poly(), b in arb_poly()) {
            let x = &(&a + &b) - &b;
            prop_assert_eq!(x.to_json().to_string(), a.to_json().to_string());
        }
    }
}
