use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rat;
use crate::error::{Error, Result};

/// A commutative ring with identity, held as a context value.
///
/// Elements carry no reference to their ring; every operation goes through
/// the ring so that runtime parameters (a prime, a variable list) live in one
/// place.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Inverse of a unit, `None` for non-units.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// `a / b` when `b` divides `a` exactly.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Total degree of a nonzero homogeneous element; constants have degree 0.
    fn homogeneous_degree(&self, a: &Self::Elem) -> Option<i64>;

    fn is_field(&self) -> bool;

    /// True when the ring is a polynomial ring in at least one variable.
    fn is_multivariate(&self) -> bool {
        false
    }

    /// Number of polynomial variables; zero for fields and the integers.
    fn nvars(&self) -> usize {
        0
    }

    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn descriptor(&self) -> RingDescriptor;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// A coefficient field for polynomial rings.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    /// Whether the printed form starts with a minus sign.
    fn is_negative(&self, a: &Self::Elem) -> bool;
    fn format(&self, a: &Self::Elem) -> String;
    fn base(&self) -> BaseField;
}

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseField {
    Rationals,
    PrimeField(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    GrLex,
    #[default]
    GRevLex,
}

impl MonomialOrder {
    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::GrLex => "grlex",
            MonomialOrder::GRevLex => "grevlex",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "lex" => Some(MonomialOrder::Lex),
            "grlex" => Some(MonomialOrder::GrLex),
            "grevlex" => Some(MonomialOrder::GRevLex),
            _ => None,
        }
    }
}

/// Serializable description of a supported coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingDescriptor {
    Integers,
    Rationals,
    PrimeField {
        p: u64,
    },
    PolynomialRing {
        base: BaseField,
        variables: Vec<String>,
        order: MonomialOrder,
    },
}

impl RingDescriptor {
    pub fn validate(&self) -> Result<()> {
        let check_p = |p: u64| {
            if !is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
            if p >= (1 << 31) {
                return Err(Error::Unsupported(format!("prime {p} exceeds 2^31")));
            }
            Ok(())
        };
        match self {
            RingDescriptor::PrimeField { p } => check_p(*p),
            RingDescriptor::PolynomialRing {
                base, variables, ..
            } => {
                if let BaseField::PrimeField(p) = base {
                    check_p(*p)?;
                }
                for (i, v) in variables.iter().enumerate() {
                    if !is_identifier(v) {
                        return Err(Error::Invalid(format!("bad variable name `{v}`")));
                    }
                    if variables[..i].contains(v) {
                        return Err(Error::Invalid(format!("duplicate variable `{v}`")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Canonical one-line form used by documents, e.g. `polynomial Q x,y grevlex`.
    pub fn to_text(&self) -> String {
        match self {
            RingDescriptor::Integers => "integers".into(),
            RingDescriptor::Rationals => "rationals".into(),
            RingDescriptor::PrimeField { p } => format!("prime-field {p}"),
            RingDescriptor::PolynomialRing {
                base,
                variables,
                order,
            } => {
                let b = match base {
                    BaseField::Rationals => "Q".to_string(),
                    BaseField::PrimeField(p) => format!("F{p}"),
                };
                format!("polynomial {b} {} {}", variables.join(","), order.name())
            }
        }
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::Invalid(format!("bad ring descriptor `{s}`"));
        let d = match words.as_slice() {
            ["integers"] => RingDescriptor::Integers,
            ["rationals"] => RingDescriptor::Rationals,
            ["prime-field", p] => RingDescriptor::PrimeField {
                p: p.parse().map_err(|_| bad())?,
            },
            ["polynomial", base, vars, rest @ ..] => {
                let base = if *base == "Q" {
                    BaseField::Rationals
                } else if let Some(p) = base.strip_prefix('F') {
                    BaseField::PrimeField(p.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                };
                let order = match rest {
                    [] => MonomialOrder::default(),
                    [o] => MonomialOrder::from_name(o).ok_or_else(bad)?,
                    _ => return Err(bad()),
                };
                RingDescriptor::PolynomialRing {
                    base,
                    variables: vars.split(',').map(str::to_string).collect(),
                    order,
                }
            }
            _ => return Err(bad()),
        };
        d.validate()?;
        Ok(d)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Fields

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from_i64(n)
    }
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<Rat> {
        Rat::from_ratio(n.clone(), d.clone())
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(b)
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a.sub(b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg()
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(b)
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.inv()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rat) -> bool {
        a.is_one()
    }
    fn is_negative(&self, a: &Rat) -> bool {
        a.is_negative()
    }
    fn format(&self, a: &Rat) -> String {
        a.to_string()
    }
    fn base(&self) -> BaseField {
        BaseField::Rationals
    }
}

/// The prime field F_p, p < 2^31, elements stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        RingDescriptor::PrimeField { p }.validate()?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_ratio(&self, n: &BigInt, d: &BigInt) -> Option<u64> {
        let d = self.reduce_big(d);
        if d == 0 {
            return None;
        }
        Some(self.reduce_big(n) * self.inv(&d) % self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn is_negative(&self, _a: &u64) -> bool {
        false
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn base(&self) -> BaseField {
        BaseField::PrimeField(self.p)
    }
}

// ---------------------------------------------------------------------------
// The integers

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return if a.is_zero() { Some(BigInt::zero()) } else { None };
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn homogeneous_degree(&self, a: &BigInt) -> Option<i64> {
        (!a.is_zero()).then_some(0)
    }
    fn is_field(&self) -> bool {
        false
    }
    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        let t = s.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        t.replace(' ', "")
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("`{s}` is not an integer")))
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Integers
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_text_round_trip() {
        for s in [
            "integers",
            "rationals",
            "prime-field 7",
            "polynomial Q x,y,z grevlex",
            "polynomial F32003 a,b lex",
        ] {
            let d = RingDescriptor::from_text(s).unwrap();
            assert_eq!(d.to_text(), s);
        }
        assert!(RingDescriptor::from_text("prime-field 8").is_err());
        assert!(RingDescriptor::from_text("polynomial Q x,x grevlex").is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_ratio(&BigInt::from(1), &BigInt::from(2)), Some(4));
    }
}
