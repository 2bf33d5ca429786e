//! Merge and split tables of a rank-two Frobenius calculus of signed circles.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polyring::BivariatePoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn from_bit(negative: bool) -> Sign {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn parse(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' | '−' => Some(Sign::Minus),
            _ => None,
        }
    }
}

pub fn signs_str(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

/// Formal linear combination of sign tuples with coefficients in ℤ[s,t].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignCombo(BTreeMap<Vec<Sign>, BivariatePoly>);

impl SignCombo {
    pub fn zero() -> Self {
        SignCombo(BTreeMap::new())
    }

    pub fn single(signs: &[Sign]) -> Self {
        let mut c = Self::zero();
        c.add(signs.to_vec(), &BivariatePoly::one());
        c
    }

    pub fn from_terms(terms: Vec<(&str, BivariatePoly)>) -> Self {
        let mut c = Self::zero();
        for (s, p) in terms {
            c.add(s.chars().map(|ch| Sign::parse(ch).expect("sign")).collect(), &p);
        }
        c
    }

    pub fn add(&mut self, signs: Vec<Sign>, coeff: &BivariatePoly) {
        let e = self.0.entry(signs.clone()).or_insert_with(BivariatePoly::zero);
        *e += coeff;
        if e.is_zero() {
            self.0.remove(&signs);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Sign>, &BivariatePoly)> {
        self.0.iter()
    }

    pub fn coeff(&self, signs: &[Sign]) -> BivariatePoly {
        self.0.get(signs).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, k: &BivariatePoly) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.0 {
            out.add(s.clone(), &(c * k));
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.0 {
            out.add(s.clone(), c);
        }
        out
    }

    /// Evaluates coefficients at integer values of `s` and `t`.
    pub fn specialize_int(&self, s: i64, t: i64) -> Self {
        let mut out = Self::zero();
        for (sg, c) in &self.0 {
            out.add(sg.clone(), &BivariatePoly::constant(c.eval_int(&s.into(), &t.into())));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|(s, c)| json!({"signs": signs_str(s), "coeff": c.to_json()})).collect())
    }

    fn from_json(v: &Value, arity: usize, what: &str) -> Result<Self> {
        let items = v.as_array().ok_or_else(|| Error::Format(format!("{what}: expected a list")))?;
        let mut out = Self::zero();
        for it in items {
            let s = it
                .get("signs")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Format(format!("{what}: term without signs")))?;
            let signs: Option<Vec<Sign>> = s.chars().map(Sign::parse).collect();
            let signs = signs.ok_or_else(|| Error::Format(format!("{what}: bad sign string {s:?}")))?;
            if signs.len() != arity {
                return Err(Error::Format(format!("{what}: expected {arity} signs, got {s:?}")));
            }
            let coeff = match it.get("coeff") {
                Some(c) => BivariatePoly::from_json(c)?,
                None => BivariatePoly::one(),
            };
            out.add(signs, &coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for SignCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(s, c)| format!("({c})({})", signs_str(s))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `merge[p][q]` is m(p,q); `split[p]` is Δ(p). Indices follow [`Sign::idx`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCalculus {
    pub merge: [[SignCombo; 2]; 2],
    pub split: [SignCombo; 2],
}

fn p(s: &str) -> BivariatePoly {
    match s {
        "1" => BivariatePoly::one(),
        "s" => BivariatePoly::s(),
        "t" => BivariatePoly::t(),
        "-s" => -BivariatePoly::s(),
        _ => unreachable!(),
    }
}

impl FrobeniusCalculus {
    pub fn universal() -> Self {
        FrobeniusCalculus {
            merge: [
                [SignCombo::from_terms(vec![("+", p("s")), ("-", p("t"))]), SignCombo::from_terms(vec![("+", p("1"))])],
                [SignCombo::from_terms(vec![("+", p("1"))]), SignCombo::from_terms(vec![("-", p("1"))])],
            ],
            split: [
                SignCombo::from_terms(vec![("++", p("1")), ("--", p("t"))]),
                SignCombo::from_terms(vec![("+-", p("1")), ("-+", p("1")), ("--", p("-s"))]),
            ],
        }
    }

    /// The universal calculus with `s` and `t` fixed to integers.
    pub fn at(s: i64, t: i64) -> Self {
        Self::universal().specialize_int(s, t)
    }

    pub fn specialize_int(&self, s: i64, t: i64) -> Self {
        let m = |a: usize, b: usize| self.merge[a][b].specialize_int(s, t);
        FrobeniusCalculus {
            merge: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
            split: [self.split[0].specialize_int(s, t), self.split[1].specialize_int(s, t)],
        }
    }

    pub fn multiply(&self, p: Sign, q: Sign) -> &SignCombo {
        &self.merge[p.idx()][q.idx()]
    }

    pub fn comultiply(&self, p: Sign) -> &SignCombo {
        &self.split[p.idx()]
    }

    /// Δ∘m, expanded linearly.
    pub fn composite_split_of_merge(&self, p: Sign, q: Sign) -> SignCombo {
        let mut out = SignCombo::zero();
        for (r, c) in self.multiply(p, q).terms() {
            out = out.plus(&self.comultiply(r[0]).scale(c));
        }
        out
    }

    /// True when every coefficient is a constant.
    pub fn is_constant(&self) -> bool {
        self.merge
            .iter()
            .flatten()
            .chain(self.split.iter())
            .all(|c| c.terms().all(|(_, k)| k.terms().all(|(m, _)| m.degree() == 0)))
    }

    /// Every term `s^a t^b` raises the quantum degree by `2a + 4b`, counting `+` as −1, `−` as +1
    /// and the homological shift as +1.
    pub fn is_graded(&self) -> bool {
        let deg = |signs: &[Sign]| signs.iter().map(|x| if x.is_minus() { 1 } else { -1 }).sum::<i64>();
        let mut entries: Vec<(i64, &SignCombo)> = Vec::new();
        for p in Sign::BOTH {
            for q in Sign::BOTH {
                entries.push((deg(&[p, q]), self.multiply(p, q)));
            }
            entries.push((deg(&[p]), self.comultiply(p)));
        }
        entries.iter().all(|(from, combo)| {
            combo.terms().all(|(to, c)| {
                let shift = 1 + deg(to) - from;
                c.terms().all(|(m, _)| shift == 2 * m.s as i64 + 4 * m.t as i64)
            })
        })
    }

    pub fn coefficients(&self) -> Vec<&BivariatePoly> {
        self.merge.iter().flatten().chain(self.split.iter()).flat_map(|c| c.terms().map(|(_, k)| k)).collect()
    }

    pub fn to_json(&self) -> Value {
        let keys = ["+", "-"];
        let mut m = serde_json::Map::new();
        for a in 0..2 {
            for b in 0..2 {
                m.insert(format!("{}{}", keys[a], keys[b]), self.merge[a][b].to_json());
            }
        }
        json!({"m": m, "delta": {"+": self.split[0].to_json(), "-": self.split[1].to_json()}})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let m = v.get("m").ok_or_else(|| Error::Format("calculus: missing \"m\"".into()))?;
        let d = v.get("delta").ok_or_else(|| Error::Format("calculus: missing \"delta\"".into()))?;
        let entry = |obj: &Value, keys: &[&str], arity: usize, table: &str| -> Result<SignCombo> {
            let found = keys.iter().find_map(|k| obj.get(*k));
            let e = found.ok_or_else(|| Error::Format(format!("calculus: missing {table}({})", keys[0])))?;
            SignCombo::from_json(e, arity, &format!("{table}({})", keys[0]))
        };
        Ok(FrobeniusCalculus {
            merge: [
                [entry(m, &["++"], 1, "m")?, entry(m, &["+-", "+−"], 1, "m")?],
                [entry(m, &["-+", "−+"], 1, "m")?, entry(m, &["--", "−−"], 1, "m")?],
            ],
            split: [entry(d, &["+"], 2, "delta")?, entry(d, &["-", "−"], 2, "delta")?],
        })
    }

    pub fn load(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(format!("calculus JSON: {e}")))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    #[test]
    fn universal_table() {
        let u = FrobeniusCalculus::universal();
        assert_eq!(u.multiply(Plus, Plus), &SignCombo::from_terms(vec![("+", p("s")), ("-", p("t"))]));
        assert_eq!(u.multiply(Minus, Minus), &SignCombo::single(&[Minus]));
        assert_eq!(u.comultiply(Minus).to_string(), "(1)(+-) + (1)(-+) + (-s)(--)");
        let k = FrobeniusCalculus::at(0, 0);
        assert!(k.multiply(Plus, Plus).is_zero());
        assert!(u.is_graded() && k.is_graded());
        assert!(!FrobeniusCalculus::at(0, 1).is_graded());
        assert_eq!(k.comultiply(Plus), &SignCombo::single(&[Plus, Plus]));
        assert_eq!(FrobeniusCalculus::at(0, 1).multiply(Plus, Plus), &SignCombo::single(&[Minus]));
    }

    #[test]
    fn composite() {
        let u = FrobeniusCalculus::universal();
        let pp = u.composite_split_of_merge(Plus, Plus);
        let want = SignCombo::from_terms(vec![("++", p("s")), ("+-", p("t")), ("-+", p("t"))]);
        assert_eq!(pp, want);
        assert_eq!(&u.composite_split_of_merge(Minus, Minus), u.comultiply(Minus));
        assert_eq!(&u.composite_split_of_merge(Plus, Minus), u.comultiply(Plus));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let u = FrobeniusCalculus::universal();
        assert_eq!(FrobeniusCalculus::from_json(&u.to_json()).unwrap(), u);
        let mut v = u.to_json();
        v["delta"].as_object_mut().unwrap().remove("-");
        assert!(FrobeniusCalculus::from_json(&v).is_err());
        let lee = r#"{"m":{"++":[{"signs":"-","coeff":[[0,0,"1"]]}],"+-":[{"signs":"+"}],"-+":[{"signs":"+"}],
            "--":[{"signs":"-"}]},"delta":{"+":[{"signs":"++"},{"signs":"--","coeff":[[0,0,1]]}],
            "-":[{"signs":"+-"},{"signs":"-+"}]}}"#;
        assert_eq!(FrobeniusCalculus::load(lee).unwrap(), FrobeniusCalculus::at(0, 1));
    }
}
