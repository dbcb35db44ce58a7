//! Exact-or-float representation of real numbers.
//!
//! The Diophantine and toroidal deciders need to distinguish three tiers of
//! knowledge about a real input: exact rational, exact quadratic irrational
//! `a + b*sqrt(d)`, or plain floating point. Exact tiers support decisions
//! (integrality witnesses, continued-fraction bounds) that floats cannot.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum RealNumber {
    Rational(BigRational),
    /// `a + b*sqrt(d)` with `b != 0` and `d >= 2` square-free.
    Quadratic {
        a: BigRational,
        b: BigRational,
        d: u64,
    },
    Float(f64),
}

/// Continued-fraction summary of a real number.
#[derive(Debug, Clone, Serialize)]
pub struct CfReport {
    /// Partial quotients a_0, a_1, ... (decimal strings; they can be large).
    pub quotients: Vec<String>,
    /// True when the expansion terminated (rational input).
    pub terminated: bool,
    /// True when a full period of the quadratic-surd expansion was detected.
    pub periodic: bool,
    /// Supremum of the partial quotients a_1, a_2, ...; only meaningful when
    /// `terminated` or `periodic` is set (otherwise it is a running max).
    pub sup_quotient: Option<u64>,
}

impl RealNumber {
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(RealNumber::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::Parse("quadratic part b must be nonzero".into()));
        }
        if d < 2 {
            return Err(Error::Parse("radicand d must be >= 2".into()));
        }
        if !is_square_free(d) {
            return Err(Error::Parse(format!("radicand {d} is not square-free")));
        }
        Ok(RealNumber::Quadratic { a, b, d })
    }

    pub fn float(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::Parse("float value must be finite".into()));
        }
        Ok(RealNumber::Float(v))
    }

    /// Parses `a/b` (rational), `a+b*sqrt(d)` / `sqrt(d)` (quadratic), or a
    /// decimal float.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty real-number literal".into()));
        }
        if t.contains("sqrt(") {
            return parse_quadratic(&t);
        }
        if let Some((n, d)) = t.split_once('/') {
            let num: BigInt = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
            let den: BigInt = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(RealNumber::Rational(BigRational::new(num, den)));
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad real-number literal {s:?}")))?;
        RealNumber::float(v)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealNumber::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealNumber::Quadratic { a, b, d } => {
                a.to_f64().unwrap_or(f64::NAN)
                    + b.to_f64().unwrap_or(f64::NAN) * (*d as f64).sqrt()
            }
            RealNumber::Float(v) => *v,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, RealNumber::Rational(_))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RealNumber::Float(_))
    }

    /// Denominator of the reduced fraction, for the rational variant.
    pub fn denominator(&self) -> Option<BigInt> {
        match self {
            RealNumber::Rational(r) => Some(r.denom().clone()),
            _ => None,
        }
    }

    /// Distance from `n * self` to the nearest integer. The boolean is true
    /// when the distance is exactly zero (decidable only in the exact tiers;
    /// a quadratic irrational never lands on an integer).
    pub fn scaled_dist_to_int(&self, n: u64) -> (f64, bool) {
        match self {
            RealNumber::Rational(r) => {
                let num = r.numer() * BigInt::from(n);
                let den = r.denom();
                let frac = num.mod_floor(den);
                if frac.is_zero() {
                    return (0.0, true);
                }
                let frac_r = BigRational::new(frac.clone(), den.clone());
                let dist = frac_r
                    .to_f64()
                    .unwrap_or(f64::NAN)
                    .min(BigRational::new(den - &frac, den.clone()).to_f64().unwrap_or(f64::NAN));
                (dist, false)
            }
            _ => {
                let x = self.to_f64() * n as f64;
                ((x - x.round()).abs(), false)
            }
        }
    }

    pub fn shifted_by_int(&self, k: i64) -> RealNumber {
        let kk = BigRational::from_integer(BigInt::from(k));
        match self {
            RealNumber::Rational(r) => RealNumber::Rational(r + kk),
            RealNumber::Quadratic { a, b, d } => RealNumber::Quadratic {
                a: a + kk,
                b: b.clone(),
                d: *d,
            },
            RealNumber::Float(v) => RealNumber::Float(v + k as f64),
        }
    }

    pub fn negated(&self) -> RealNumber {
        match self {
            RealNumber::Rational(r) => RealNumber::Rational(-r),
            RealNumber::Quadratic { a, b, d } => RealNumber::Quadratic {
                a: -a,
                b: -b,
                d: *d,
            },
            RealNumber::Float(v) => RealNumber::Float(-v),
        }
    }

    /// Continued-fraction expansion, at most `max_terms` partial quotients.
    ///
    /// Rational inputs terminate; quadratic inputs run the exact integer
    /// recurrence and stop early once a full period is detected, in which
    /// case `sup_quotient` is the true supremum over the whole expansion.
    pub fn partial_quotients(&self, max_terms: usize) -> CfReport {
        match self {
            RealNumber::Rational(r) => cf_rational(r, max_terms),
            RealNumber::Quadratic { a, b, d } => cf_quadratic(a, b, *d, max_terms),
            RealNumber::Float(v) => cf_float(*v, max_terms.min(24)),
        }
    }
}

impl fmt::Display for RealNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealNumber::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            RealNumber::Quadratic { a, b, d } => write!(f, "{a}+{b}*sqrt({d})"),
            RealNumber::Float(v) => write!(f, "{v}"),
        }
    }
}

fn parse_rational_part(s: &str) -> Result<BigRational> {
    if s.is_empty() || s == "+" {
        return Ok(BigRational::from_integer(1.into()));
    }
    if s == "-" {
        return Ok(BigRational::from_integer(BigInt::from(-1)));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(BigRational::new(num, den));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
    Ok(BigRational::from_integer(n))
}

fn parse_quadratic(t: &str) -> Result<RealNumber> {
    // Forms: [a +|-] [b*]sqrt(d)
    let idx = t.find("sqrt(").unwrap();
    let tail = &t[idx + 5..];
    let close = tail
        .find(')')
        .ok_or_else(|| Error::Parse("missing ')' in sqrt".into()))?;
    if !tail[close + 1..].is_empty() {
        return Err(Error::Parse("trailing characters after sqrt(...)".into()));
    }
    let d: u64 = tail[..close]
        .parse()
        .map_err(|_| Error::Parse(format!("bad radicand {:?}", &tail[..close])))?;

    let head = &t[..idx];
    // Split head into "a<op>b*" where the final sign before the coefficient
    // belongs to b. The coefficient may be absent ("sqrt(2)", "1-sqrt(2)").
    let coeff_str = head.strip_suffix('*').unwrap_or(head);
    // Find the split between a and the signed coefficient: last '+'/'-' that
    // is not the leading sign and not inside the coefficient's fraction.
    let bytes = coeff_str.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if bytes[i] == b'+' || bytes[i] == b'-' {
            split = Some(i);
            break;
        }
    }
    let (a, b) = match split {
        Some(i) => {
            let a = parse_rational_part(&coeff_str[..i])?;
            let sign_and_b = &coeff_str[i..];
            let b = parse_rational_part(sign_and_b)?;
            (a, b)
        }
        None => (
            BigRational::from_integer(0.into()),
            parse_rational_part(coeff_str)?,
        ),
    };
    RealNumber::quadratic(a, b, d)
}

fn is_square_free(d: u64) -> bool {
    if d % 4 == 0 {
        return false;
    }
    let mut m = d;
    let mut p = 3u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        while m % p == 0 {
            m /= p;
        }
        p += 2;
    }
    true
}

fn cf_rational(r: &BigRational, max_terms: usize) -> CfReport {
    let mut quotients = Vec::new();
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let mut sup: Option<u64> = None;
    let mut terminated = false;
    for i in 0..max_terms {
        let a = num.div_floor(&den);
        let rem = &num - &a * &den;
        if i > 0 {
            sup = Some(sup.unwrap_or(0).max(a.to_u64().unwrap_or(u64::MAX)));
        }
        quotients.push(a.to_string());
        if rem.is_zero() {
            terminated = true;
            break;
        }
        num = den;
        den = rem;
    }
    CfReport {
        quotients,
        terminated,
        periodic: false,
        sup_quotient: sup,
    }
}

/// Exact continued fraction of `(p + q*sqrt(d))/r`.
///
/// The state is normalized to `(P + sqrt(D))/Q` with `Q | D - P^2`, after
/// which the classical integer recurrence applies and the orbit of `(P, Q)`
/// is finite; revisiting a state proves periodicity.
fn cf_quadratic(a: &BigRational, b: &BigRational, d: u64, max_terms: usize) -> CfReport {
    // x = a + b*sqrt(d) = (p + q*sqrt(d)) / r with integer p, q, r.
    let r_den = a.denom().lcm(b.denom());
    let p = a.numer() * (&r_den / a.denom());
    let q = b.numer() * (&r_den / b.denom());
    let mut r = r_den;

    // Fold q into the radicand: q*sqrt(d) = sign(q)*sqrt(q^2 d).
    let mut big_d = &q * &q * BigInt::from(d);
    let mut big_p = p;
    if q.is_negative() {
        // (p - |q| sqrt(d)) / r = (-p + |q| sqrt(d)) / (-r)
        big_p = -big_p;
        r = -r;
    }
    // Enforce Q | D - P^2 by scaling with |Q|.
    let diff = &big_d - &big_p * &big_p;
    if !(&diff % &r).is_zero() {
        let abs_r = r.abs();
        big_p *= &abs_r;
        big_d *= &abs_r * &abs_r;
        r *= abs_r;
    }

    let sqrt_d = big_d.sqrt(); // floor of the exact square root
    let mut quotients = Vec::new();
    let mut qvals: Vec<BigInt> = Vec::new();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut sup: Option<u64> = None;
    let mut periodic = false;

    let mut pp = big_p;
    let mut qq = r;
    for i in 0..max_terms {
        if qq.is_zero() {
            break;
        }
        if let Some(first) = seen.insert((pp.clone(), qq.clone()), i) {
            periodic = true;
            // The quotients from `first` onwards repeat forever; fold the
            // repeating block into the supremum (it may include a_0).
            for a in &qvals[first..] {
                let v = a.to_u64().unwrap_or(u64::MAX);
                sup = Some(sup.unwrap_or(0).max(v));
            }
            break;
        }
        // floor((P + sqrt(D))/Q), exact for irrational sqrt(D)
        let a_i = if qq.is_positive() {
            (&pp + &sqrt_d).div_floor(&qq)
        } else {
            (-&pp - &sqrt_d - BigInt::from(1)).div_floor(&-&qq)
        };
        if i > 0 {
            sup = Some(sup.unwrap_or(0).max(a_i.to_u64().unwrap_or(u64::MAX)));
        }
        quotients.push(a_i.to_string());
        qvals.push(a_i.clone());
        let p_next = &a_i * &qq - &pp;
        let q_next = (&big_d - &p_next * &p_next) / &qq;
        pp = p_next;
        qq = q_next;
    }
    CfReport {
        quotients,
        terminated: false,
        periodic,
        sup_quotient: sup,
    }
}

fn cf_float(v: f64, max_terms: usize) -> CfReport {
    let mut quotients = Vec::new();
    let mut x = v;
    let mut sup: Option<u64> = None;
    for i in 0..max_terms {
        let a = x.floor();
        quotients.push(format!("{}", a as i64));
        if i > 0 {
            sup = Some(sup.unwrap_or(0).max(a as u64));
        }
        let frac = x - a;
        if frac.abs() < 1e-12 {
            break;
        }
        x = 1.0 / frac;
        if !x.is_finite() || x.abs() > 1e15 {
            break;
        }
    }
    CfReport {
        quotients,
        terminated: false,
        periodic: false,
        sup_quotient: sup,
    }
}
