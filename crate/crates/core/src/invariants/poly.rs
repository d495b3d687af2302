use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::InvariantError;

/// Exact Laurent polynomial with integer coefficients. Zero terms are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    A,
    /// Exponents count powers of t^(1/2).
    SqrtT,
}

#[derive(Clone, Serialize, Deserialize)]
struct Term {
    exp: i32,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    variable: Variable,
    terms: Vec<Term>,
}

impl From<Vec<Term>> for LaurentPoly {
    fn from(v: Vec<Term>) -> Self {
        LaurentPoly::from_terms(v.into_iter().map(|t| (t.exp, t.coeff)))
    }
}

impl From<LaurentPoly> for Vec<Term> {
    fn from(p: LaurentPoly) -> Self {
        p.terms().map(|(exp, coeff)| Term { exp, coeff }).collect()
    }
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c = c.checked_add(coeff).expect("coefficient overflow");
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes x ↦ x^k.
    pub fn substitute_power(&self, k: i32) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// x ↦ x⁻¹.
    pub fn invert_variable(&self) -> LaurentPoly {
        self.substitute_power(-1)
    }

    pub fn shift(&self, by: i32) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e + by, c)))
    }

    /// Divides every exponent by `k`, or `None` if some exponent is not a multiple.
    pub fn compress(&self, k: i32) -> Option<LaurentPoly> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(LaurentPoly::from_terms(self.terms().map(|(e, c)| (e / k, c))))
    }

    /// Σ cₖ xᵏ in double precision.
    pub fn evaluate(&self, x: f64) -> Result<f64, InvariantError> {
        if x == 0.0 && self.terms.keys().any(|&e| e < 0) {
            return Err(InvariantError::PoleAtZero);
        }
        Ok(self.terms().map(|(e, c)| c as f64 * x.powi(e)).sum())
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.invert_variable()
    }

    pub fn to_json(&self, variable: Variable) -> String {
        let j = PolyJson {
            variable,
            terms: self.terms().map(|(exp, coeff)| Term { exp, coeff }).collect(),
        };
        serde_json::to_string(&j).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<(Variable, LaurentPoly), InvariantError> {
        let j: PolyJson =
            serde_json::from_str(text).map_err(|e| InvariantError::Parse(e.to_string()))?;
        Ok((j.variable, LaurentPoly::from_terms(j.terms.into_iter().map(|t| (t.exp, t.coeff)))))
    }

    /// Human-readable form in the named variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.unsigned_abs();
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}{mono}"));
            }
        }
        out
    }

    /// Jones polynomial display: half-integer exponents of t shown as fractions.
    pub fn display_sqrt_t(&self) -> String {
        match self.compress(2) {
            Some(p) => p.display_in("t"),
            None => self.display_in("t^(1/2)"),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1.checked_mul(c2).expect("coefficient overflow"), e1 + e2);
            }
        }
        out
    }
}

impl Mul<i64> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }
}
