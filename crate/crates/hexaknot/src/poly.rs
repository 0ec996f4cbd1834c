use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use crate::error::{Error, Result};

/// Integer Laurent polynomial in one variable. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
    var: char,
}

impl LaurentPoly {
    pub fn zero(var: char) -> Self {
        LaurentPoly { terms: BTreeMap::new(), var }
    }

    pub fn one(var: char) -> Self {
        Self::monomial(var, 0, 1)
    }

    pub fn monomial(var: char, exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero(var);
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(var: char, terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0) == 1
    }

    /// Substitutes `var → var⁻¹`.
    pub fn mirror(&self) -> Self {
        Self::from_terms(self.var, self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn scale_exponents(&self, k: i32) -> Self {
        Self::from_terms(self.var, self.terms().map(|(e, c)| (e * k, c)))
    }

    pub fn shift(&self, k: i32) -> Self {
        Self::from_terms(self.var, self.terms().map(|(e, c)| (e + k, c)))
    }

    /// `{"exponent": coefficient}` with exponents as JSON object keys.
    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, i64> = self.terms().map(|(e, c)| (e.to_string(), c)).collect();
        serde_json::to_string(&map).expect("poly serializes")
    }

    pub fn from_json(var: char, text: &str) -> Result<Self> {
        let map: BTreeMap<String, i64> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut p = Self::zero(var);
        for (k, c) in map {
            let e: i32 = k.trim().parse().map_err(|_| Error::Parse(format!("bad exponent `{k}`")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.var);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e, -c)))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (*e, mag) {
                (0, m) => write!(f, "{m}")?,
                (e, 1) => write!(f, "{}^{e}", self.var)?,
                (e, m) => write!(f, "{m}{}^{e}", self.var)?,
            }
        }
        Ok(())
    }
}
