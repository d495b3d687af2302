use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ClassifyError;

pub const DEFAULT_PHASE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FieldKind {
    /// f = z
    Unknot,
    /// f = z^p + w^q
    Milnor { p: u32, q: u32 },
    /// f = w³ − 3zz̄(1 + z + z̄)w − 2(z + z̄)
    #[serde(rename = "rudolph_F")]
    RudolphF,
    /// F(z², w)
    #[serde(rename = "rudolph_G")]
    RudolphG,
}

/// An evaluable map C² → C together with the radius of the sphere
/// |z|² + |w|² = r² on which its zero set is studied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexField {
    pub kind: FieldKind,
    pub radius: f64,
}

impl ComplexField {
    pub fn new(kind: FieldKind) -> ComplexField {
        ComplexField { kind, radius: 1.0 }
    }

    pub fn with_radius(self, radius: f64) -> Result<ComplexField, ClassifyError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ClassifyError::BadParameters(format!("radius must be positive, got {radius}")));
        }
        Ok(ComplexField { radius, ..self })
    }

    pub fn milnor(p: u32, q: u32) -> Result<ComplexField, ClassifyError> {
        if p == 0 || q == 0 {
            return Err(ClassifyError::BadParameters(format!(
                "milnor exponents must be positive, got ({p}, {q})"
            )));
        }
        Ok(ComplexField::new(FieldKind::Milnor { p, q }))
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        match self.kind {
            FieldKind::Unknot => z,
            FieldKind::Milnor { p, q } => z.powu(p) + w.powu(q),
            FieldKind::RudolphF => rudolph_f(z, w),
            FieldKind::RudolphG => rudolph_f(z * z, w),
        }
    }

    /// Evaluates at a point of R⁴ = C² given as (Re z, Im z, Re w, Im w).
    pub fn eval_real(&self, x: [f64; 4]) -> Complex64 {
        self.eval(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }

    /// True when the zero set is expected to have several components
    /// (a torus link rather than a torus knot).
    pub fn is_link(&self) -> bool {
        match self.kind {
            FieldKind::Milnor { p, q } => gcd(p, q) > 1,
            _ => false,
        }
    }

    /// Expected number of link components on the sphere, where known in closed form.
    pub fn expected_components(&self) -> Option<usize> {
        match self.kind {
            FieldKind::Unknot => Some(1),
            FieldKind::Milnor { p, q } => Some(gcd(p, q) as usize),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            FieldKind::Unknot => "unknot".into(),
            FieldKind::Milnor { p, q } => format!("milnor:{p},{q}"),
            FieldKind::RudolphF => "rudolph_F".into(),
            FieldKind::RudolphG => "rudolph_G".into(),
        }
    }
}

fn rudolph_f(z: Complex64, w: Complex64) -> Complex64 {
    let zb = z.conj();
    let s = z + zb;
    w * w * w - 3.0 * z * zb * (1.0 + s) * w - 2.0 * s
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for ComplexField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Parses `unknot`, `milnor:p,q` (also `milnor(p,q)`), `rudolph_F`, `rudolph_G`.
impl FromStr for ComplexField {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, params) = match s.find([':', '(']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let no_params = |f: ComplexField| match params {
            None => Ok(f),
            Some(p) => Err(ClassifyError::BadParameters(format!("{name} takes no parameters, got {p:?}"))),
        };
        match name {
            "unknot" => no_params(ComplexField::new(FieldKind::Unknot)),
            "rudolph_F" => no_params(ComplexField::new(FieldKind::RudolphF)),
            "rudolph_G" => no_params(ComplexField::new(FieldKind::RudolphG)),
            "milnor" => {
                let p = params.ok_or_else(|| ClassifyError::BadParameters("milnor needs p,q".into()))?;
                let nums: Result<Vec<u32>, _> = p.split(',').map(|x| x.trim().parse()).collect();
                match nums.as_deref() {
                    Ok([p, q]) => ComplexField::milnor(*p, *q),
                    _ => Err(ClassifyError::BadParameters(format!("milnor needs two positive integers, got {p:?}"))),
                }
            }
            _ => Err(ClassifyError::UnknownField(s.to_string())),
        }
    }
}

/// Argument of f at (z, w), in [0, 2π).
pub fn phase(f: &ComplexField, z: Complex64, w: Complex64, tol: f64) -> Result<f64, ClassifyError> {
    let v = f.eval(z, w);
    let modulus = v.norm();
    if !(modulus > tol) {
        return Err(ClassifyError::UndefinedPhase { modulus, tol });
    }
    let a = v.arg();
    Ok(if a < 0.0 { a + TAU } else { a })
}
