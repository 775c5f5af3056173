//! A runtime choice of coefficient ring.

use crate::arith::{Integers, PolyRing, PrimeField, Rationals, RingDescriptor};
use crate::arith::ring::BaseField;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum AnyRing {
    Integers(Integers),
    Rational(PolyRing<Rationals>),
    Modular(PolyRing<PrimeField>),
}

impl AnyRing {
    pub fn from_descriptor(d: &RingDescriptor) -> Result<Self> {
        d.validate()?;
        Ok(match d {
            RingDescriptor::Integers => AnyRing::Integers(Integers),
            RingDescriptor::Rationals => AnyRing::Rational(PolyRing::constants(Rationals)),
            RingDescriptor::PrimeField { p } => AnyRing::Modular(PolyRing::constants(PrimeField::new(*p)?)),
            RingDescriptor::PolynomialRing { base, variables, order } => match base {
                BaseField::Rationals => AnyRing::Rational(PolyRing::new(Rationals, variables.clone(), *order)?),
                BaseField::PrimeField(p) => {
                    AnyRing::Modular(PolyRing::new(PrimeField::new(*p)?, variables.clone(), *order)?)
                }
            },
        })
    }

    pub fn unsupported(what: &str) -> Error {
        Error::Unsupported(format!("{what} needs a field or a polynomial ring, not the integers"))
    }
}

/// Run `$body` with `$r` bound to the concrete ring.
macro_rules! dispatch {
    ($ring:expr, $r:ident => $body:expr) => {
        match $ring {
            $crate::cli::ring::AnyRing::Integers($r) => $body,
            $crate::cli::ring::AnyRing::Rational($r) => $body,
            $crate::cli::ring::AnyRing::Modular($r) => $body,
        }
    };
}

/// Like `dispatch!` for operations that need a polynomial ring over a field.
macro_rules! dispatch_poly {
    ($ring:expr, $what:expr, $r:ident => $body:expr) => {
        match $ring {
            $crate::cli::ring::AnyRing::Integers(_) => Err($crate::cli::ring::AnyRing::unsupported($what)),
            $crate::cli::ring::AnyRing::Rational($r) => $body,
            $crate::cli::ring::AnyRing::Modular($r) => $body,
        }
    };
}

pub(crate) use dispatch;
pub(crate) use dispatch_poly;
