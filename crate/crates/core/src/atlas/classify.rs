//! Rule-based family labels for generators.
//!
//! A generator is first checked for behavioral constancy over the standard
//! probe set. Otherwise its AST is reduced to a kernel by stripping constant
//! factors and terms; generators with affinity are first rewritten into a
//! single top-level affinity whose branches are then inspected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::expr::{
    behavioral_signature, coefficient_of_variation, evaluate, standard_probes, BinaryOp,
    EvalContext, Expr, UnaryOp, Var,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "ER")]
    Er,
    #[serde(rename = "ID")]
    Id,
    #[serde(rename = "ID′")]
    IdPrime,
    #[serde(rename = "PA")]
    Pa,
    #[serde(rename = "PA′")]
    PaPrime,
    #[serde(rename = "SC-α")]
    ScAlpha,
    #[serde(rename = "SC-β")]
    ScBeta,
    #[serde(rename = "SC-γ")]
    ScGamma,
    #[serde(rename = "SC-δ")]
    ScDelta,
    #[serde(rename = "SC-ε")]
    ScEpsilon,
    #[serde(rename = "SC-ζ")]
    ScZeta,
    #[serde(rename = "SC-η")]
    ScEta,
    #[serde(rename = "SC-θ")]
    ScTheta,
    #[serde(rename = "UNCLASSIFIED")]
    Unclassified,
}

impl Family {
    pub const ALL: [Family; 14] = [
        Family::Er,
        Family::Id,
        Family::IdPrime,
        Family::Pa,
        Family::PaPrime,
        Family::ScAlpha,
        Family::ScBeta,
        Family::ScGamma,
        Family::ScDelta,
        Family::ScEpsilon,
        Family::ScZeta,
        Family::ScEta,
        Family::ScTheta,
        Family::Unclassified,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::Er => "ER",
            Family::Id => "ID",
            Family::IdPrime => "ID′",
            Family::Pa => "PA",
            Family::PaPrime => "PA′",
            Family::ScAlpha => "SC-α",
            Family::ScBeta => "SC-β",
            Family::ScGamma => "SC-γ",
            Family::ScDelta => "SC-δ",
            Family::ScEpsilon => "SC-ε",
            Family::ScZeta => "SC-ζ",
            Family::ScEta => "SC-η",
            Family::ScTheta => "SC-θ",
            Family::Unclassified => "UNCLASSIFIED",
        }
    }

    /// ASCII spelling, also accepted by `FromStr`.
    pub fn ascii(self) -> &'static str {
        match self {
            Family::IdPrime => "ID'",
            Family::PaPrime => "PA'",
            Family::ScAlpha => "SC-alpha",
            Family::ScBeta => "SC-beta",
            Family::ScGamma => "SC-gamma",
            Family::ScDelta => "SC-delta",
            Family::ScEpsilon => "SC-epsilon",
            Family::ScZeta => "SC-zeta",
            Family::ScEta => "SC-eta",
            Family::ScTheta => "SC-theta",
            other => other.label(),
        }
    }

    /// The defining pattern of the family.
    pub fn pattern(self) -> &'static str {
        match self {
            Family::Er => "c",
            Family::Id => "i",
            Family::IdPrime => "e^i",
            Family::Pa => "k",
            Family::PaPrime => "k_i^k_j",
            Family::ScAlpha => "ψ_g(k^s, c)",
            Family::ScBeta => "ψ_g(e^k, > 1/2)",
            Family::ScGamma => "ψ_g(k^B, ∼0)",
            Family::ScDelta => "ψ_g(e^i, *)",
            Family::ScEpsilon => "ψ_g(i k, *)",
            Family::ScZeta => "ψ_g(i^k, *)",
            Family::ScEta => "ψ_g(i k², *)",
            Family::ScTheta => "ψ_g(k, 0) − 1",
            Family::Unclassified => "no pattern",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Family::ALL
            .into_iter()
            .find(|f| f.label() == t || f.ascii().eq_ignore_ascii_case(t))
            .ok_or_else(|| format!("unknown family `{t}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLabel {
    pub family: Family,
    /// Which rule matched.
    pub pattern: String,
}

impl FamilyLabel {
    fn new(family: Family, detail: &str) -> Self {
        FamilyLabel {
            family,
            pattern: format!("{} ({detail})", family.pattern()),
        }
    }
}

/// Numeric readings of the informal symbols of the family patterns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierThresholds {
    /// Signature coefficient of variation below which a generator is ER.
    pub constant_cv: f64,
    /// An else-branch constant below this is "∼0".
    pub near_zero: f64,
    /// An else-branch constant at or above this is "> 1/2".
    pub above_half: f64,
    /// Largest "small" exponent s.
    pub small_exponent: f64,
    /// Smallest "big" exponent B.
    pub big_exponent: f64,
    /// Range of the constant subtracted in the shifted-affinity pattern.
    pub shift_min: f64,
    pub shift_max: f64,
}

impl Default for ClassifierThresholds {
    fn default() -> Self {
        ClassifierThresholds {
            constant_cv: 0.01,
            near_zero: 0.1,
            above_half: 0.4,
            small_exponent: 3.0,
            big_exponent: 5.0,
            shift_min: 0.9,
            shift_max: 1.0,
        }
    }
}

fn uses_id(e: &Expr) -> bool {
    e.uses_var(Var::I) || e.uses_var(Var::J)
}

fn uses_degree(e: &Expr) -> bool {
    e.uses_var(Var::Ki) || e.uses_var(Var::Kj)
}

fn has_affinity(e: &Expr) -> bool {
    matches!(e, Expr::Affinity { .. }) || e.children().iter().any(|c| has_affinity(c))
}

fn degree_only(e: &Expr) -> bool {
    uses_degree(e) && !uses_id(e)
}

fn id_only(e: &Expr) -> bool {
    uses_id(e) && !uses_degree(e)
}

fn inert(e: &Expr) -> bool {
    !uses_id(e) && !uses_degree(e)
}

const DUMMY: EvalContext = EvalContext {
    k_i: 1,
    k_j: 1,
    d: 1.0,
    i: 1,
    j: 2,
};

fn constant_value(e: &Expr) -> Option<f64> {
    e.is_constant().then(|| evaluate(e, &DUMMY))
}

fn is_id_var(e: &Expr) -> bool {
    matches!(e, Expr::Var(v) if v.is_identifier())
}

fn is_degree_var(e: &Expr) -> bool {
    matches!(e, Expr::Var(v) if v.is_degree())
}

/// Removes constant multiplicative factors and additive terms at the root.
fn strip_constants(mut e: &Expr) -> &Expr {
    loop {
        e = match e {
            Expr::Binary(BinaryOp::Mul | BinaryOp::Add, a, b) if a.is_constant() => b,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Add | BinaryOp::Div | BinaryOp::Sub, a, b)
                if b.is_constant() =>
            {
                a
            }
            _ => return e,
        };
    }
}

/// Like [`strip_constants`], also dropping factors free of degree and
/// identifier variables and degree-only denominators.
fn kernel(mut e: &Expr) -> &Expr {
    loop {
        let next = match strip_constants(e) {
            Expr::Binary(BinaryOp::Mul, a, b) if inert(a) => b,
            Expr::Binary(BinaryOp::Mul, a, b) if inert(b) => a,
            Expr::Binary(BinaryOp::Div, a, b) if inert(b) || degree_only(b) => a,
            other => other,
        };
        if std::ptr::eq(next, e) {
            return e;
        }
        e = next;
    }
}

/// Rewrites `e` as one affinity `(then, otherwise)` by pushing enclosing
/// products, quotients and powers into both branches and dropping additive
/// terms without affinity.
fn single_affinity(e: &Expr) -> Option<(Expr, Expr)> {
    match e {
        Expr::Affinity {
            then, otherwise, ..
        } => Some(((**then).clone(), (**otherwise).clone())),
        Expr::Binary(op @ (BinaryOp::Mul | BinaryOp::Div | BinaryOp::Pow), a, b) => {
            match (has_affinity(a), has_affinity(b)) {
                (true, false) => {
                    let (t, o) = single_affinity(a)?;
                    Some((
                        Expr::binary(*op, t, (**b).clone()),
                        Expr::binary(*op, o, (**b).clone()),
                    ))
                }
                (false, true) if *op == BinaryOp::Mul => {
                    let (t, o) = single_affinity(b)?;
                    Some((
                        Expr::binary(*op, (**a).clone(), t),
                        Expr::binary(*op, (**a).clone(), o),
                    ))
                }
                _ => None,
            }
        }
        Expr::Binary(BinaryOp::Add, a, b) => match (has_affinity(a), has_affinity(b)) {
            (true, false) => single_affinity(a),
            (false, true) => single_affinity(b),
            _ => None,
        },
        Expr::Binary(BinaryOp::Sub, a, b) if has_affinity(a) && !has_affinity(b) => {
            single_affinity(a)
        }
        _ => None,
    }
}

fn is_steep_degree(e: &Expr, t: &ClassifierThresholds) -> bool {
    match e {
        Expr::Unary(UnaryOp::Exp, arg) => degree_only(arg),
        Expr::Binary(BinaryOp::Pow, base, exp) => {
            if let Some(c) = constant_value(base) {
                return c > 1.0 && degree_only(exp);
            }
            if !degree_only(base) {
                return false;
            }
            match constant_value(exp) {
                Some(b) => b >= t.big_exponent,
                None => degree_only(exp),
            }
        }
        Expr::Binary(BinaryOp::Mul, a, b) => {
            (is_steep_degree(a, t) && (degree_only(b) || inert(b)))
                || (is_steep_degree(b, t) && (degree_only(a) || inert(a)))
        }
        Expr::Binary(BinaryOp::Div, a, b) => is_steep_degree(a, t) && (degree_only(b) || inert(b)),
        _ => false,
    }
}

fn small_power_of_degree(e: &Expr, t: &ClassifierThresholds) -> bool {
    if is_degree_var(e) {
        return true;
    }
    match e {
        Expr::Binary(BinaryOp::Pow, base, exp) if degree_only(base) => {
            constant_value(exp).is_some_and(|s| s > 0.0 && s <= t.small_exponent)
        }
        _ => false,
    }
}

fn is_degree_square(e: &Expr) -> bool {
    matches!(e, Expr::Binary(BinaryOp::Pow, base, exp)
        if degree_only(base) && constant_value(exp).is_some_and(|s| (s - 2.0).abs() < 1e-9))
}

fn classify_affinity(
    then: &Expr,
    otherwise: &Expr,
    t: &ClassifierThresholds,
) -> Option<FamilyLabel> {
    let a = kernel(then);
    let else_const = constant_value(otherwise);
    if let Expr::Binary(BinaryOp::Pow, base, exp) = a {
        if id_only(base) && degree_only(exp) {
            return Some(FamilyLabel::new(
                Family::ScZeta,
                "identifier raised to a degree",
            ));
        }
        if uses_id(exp) {
            return Some(FamilyLabel::new(
                Family::ScDelta,
                "power with identifier exponent",
            ));
        }
    }
    if let Expr::Unary(UnaryOp::Exp, arg) = a {
        if uses_id(arg) {
            return Some(FamilyLabel::new(
                Family::ScDelta,
                "exponential of identifier",
            ));
        }
    }
    if let Expr::Binary(BinaryOp::Mul, x, y) = a {
        if (id_only(x) && is_degree_square(y)) || (id_only(y) && is_degree_square(x)) {
            return Some(FamilyLabel::new(
                Family::ScEta,
                "identifier times squared degree",
            ));
        }
    }
    if let Expr::Binary(BinaryOp::Pow, base, exp) = a {
        if let Expr::Binary(BinaryOp::Mul, x, y) = &**base {
            let mixed = (id_only(x) && degree_only(y)) || (id_only(y) && degree_only(x));
            if mixed && constant_value(exp).is_some_and(|s| (s - 2.0).abs() < 1e-9) {
                return Some(FamilyLabel::new(
                    Family::ScEta,
                    "squared identifier-degree product",
                ));
            }
        }
    }
    if let Expr::Binary(BinaryOp::Mul, x, y) = a {
        if (id_only(x) && degree_only(y)) || (id_only(y) && degree_only(x)) {
            return Some(FamilyLabel::new(
                Family::ScEpsilon,
                "identifier times degree",
            ));
        }
    }
    if is_steep_degree(a, t) {
        return match else_const {
            Some(c) if c.abs() < t.near_zero => Some(FamilyLabel::new(
                Family::ScGamma,
                "steep degree, near-zero else",
            )),
            Some(c) if c >= t.above_half => Some(FamilyLabel::new(
                Family::ScBeta,
                "steep degree, else above one half",
            )),
            None => Some(FamilyLabel::new(
                Family::ScBeta,
                "steep degree, variable else",
            )),
            Some(_) => None,
        };
    }
    if small_power_of_degree(a, t) && else_const.is_some() {
        return Some(FamilyLabel::new(
            Family::ScAlpha,
            "small power of degree, constant else",
        ));
    }
    None
}

fn classify_plain(e: &Expr) -> Option<FamilyLabel> {
    let k = strip_constants(e);
    if is_id_var(k) {
        return Some(FamilyLabel::new(Family::Id, "identifier"));
    }
    if is_degree_var(k) {
        return Some(FamilyLabel::new(Family::Pa, "degree"));
    }
    match k {
        Expr::Unary(UnaryOp::Exp, x) if is_id_var(x) => Some(FamilyLabel::new(
            Family::IdPrime,
            "exponential of identifier",
        )),
        Expr::Binary(BinaryOp::Pow, b, x)
            if is_id_var(x) && constant_value(b).is_some_and(|c| c > 1.0) =>
        {
            Some(FamilyLabel::new(
                Family::IdPrime,
                "constant raised to identifier",
            ))
        }
        Expr::Binary(BinaryOp::Pow, b, x) if is_degree_var(b) && is_degree_var(x) => {
            Some(FamilyLabel::new(Family::PaPrime, "degree raised to degree"))
        }
        _ => None,
    }
}

fn is_shifted_affinity(e: &Expr, t: &ClassifierThresholds) -> bool {
    let Expr::Binary(BinaryOp::Sub, a, c) = e else {
        return false;
    };
    let Some(shift) = constant_value(c) else {
        return false;
    };
    let Expr::Affinity {
        then, otherwise, ..
    } = &**a
    else {
        return false;
    };
    (t.shift_min..=t.shift_max).contains(&shift)
        && is_degree_var(then)
        && constant_value(otherwise).is_some_and(|b| b.abs() < t.near_zero)
}

pub fn classify_with(expr: &Expr, t: &ClassifierThresholds) -> FamilyLabel {
    let sig = behavioral_signature(expr, &standard_probes());
    if coefficient_of_variation(&sig) < t.constant_cv {
        return FamilyLabel::new(Family::Er, "behaviorally constant");
    }
    if is_shifted_affinity(expr, t) {
        return FamilyLabel::new(Family::ScTheta, "degree affinity minus a constant near 1");
    }
    let found = if has_affinity(expr) {
        single_affinity(expr).and_then(|(then, otherwise)| classify_affinity(&then, &otherwise, t))
    } else {
        classify_plain(expr)
    };
    found.unwrap_or_else(|| FamilyLabel::new(Family::Unclassified, "no rule matched"))
}

pub fn classify_family(expr: &Expr) -> FamilyLabel {
    classify_with(expr, &ClassifierThresholds::default())
}
