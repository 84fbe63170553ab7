//! Exact field elements: residues modulo a machine-word prime, or rationals
//! of arbitrary precision. All arithmetic is exact; there is no floating point
//! anywhere in this crate.

use crate::error::LinalgError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Descriptor of the base field shared by all entries of a matrix or module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// Prime field F_p with p < 2^31.
    Prime(u32),
    /// The rational numbers.
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec, LinalgError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(LinalgError::BadPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A single exact field element. Residues are kept in `[0, p)`; rationals are
/// kept in lowest terms with positive denominator (the `num` normal form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactScalar {
    Fp { p: u32, val: u64 },
    Rat(BigRational),
}

impl ExactScalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            ExactScalar::Fp { p, .. } => FieldSpec::Prime(*p),
            ExactScalar::Rat(_) => FieldSpec::Rational,
        }
    }

    pub fn zero(field: FieldSpec) -> ExactScalar {
        ExactScalar::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> ExactScalar {
        ExactScalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, n: i64) -> ExactScalar {
        match field {
            FieldSpec::Prime(p) => {
                let m = n.rem_euclid(p as i64) as u64;
                ExactScalar::Fp { p, val: m }
            }
            FieldSpec::Rational => ExactScalar::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Fp { val, .. } => *val == 0,
            ExactScalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactScalar::Fp { val, .. } => *val == 1,
            ExactScalar::Rat(r) => r.is_one(),
        }
    }

    fn same_field(&self, other: &ExactScalar) -> bool {
        self.field() == other.field()
    }

    pub fn add(&self, other: &ExactScalar) -> ExactScalar {
        assert!(self.same_field(other), "scalar field mismatch");
        match (self, other) {
            (ExactScalar::Fp { p, val: a }, ExactScalar::Fp { val: b, .. }) => ExactScalar::Fp {
                p: *p,
                val: (a + b) % (*p as u64),
            },
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a + b),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &ExactScalar) -> ExactScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Fp { p, val } => ExactScalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { *p as u64 - *val },
            },
            ExactScalar::Rat(r) => ExactScalar::Rat(-r),
        }
    }

    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        assert!(self.same_field(other), "scalar field mismatch");
        match (self, other) {
            (ExactScalar::Fp { p, val: a }, ExactScalar::Fp { val: b, .. }) => ExactScalar::Fp {
                p: *p,
                val: (a * b) % (*p as u64),
            },
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => ExactScalar::Rat(a * b),
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> ExactScalar {
        match self {
            ExactScalar::Fp { p, val } => {
                assert!(*val != 0, "inverse of zero");
                ExactScalar::Fp {
                    p: *p,
                    val: mod_inverse(*val, *p as u64),
                }
            }
            ExactScalar::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                ExactScalar::Rat(r.recip())
            }
        }
    }

    pub fn div(&self, other: &ExactScalar) -> ExactScalar {
        self.mul(&other.inv())
    }

    /// Parse the report/file syntax: decimal residues for prime fields,
    /// `a` or `a/b` for rationals.
    pub fn parse(field: FieldSpec, text: &str) -> Result<ExactScalar, LinalgError> {
        let bad = |reason: &str| LinalgError::BadScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        match field {
            FieldSpec::Prime(p) => {
                let n = BigInt::from_str(text.trim()).map_err(|e| bad(&e.to_string()))?;
                let m = n.mod_floor_u64(p as u64);
                Ok(ExactScalar::Fp { p, val: m })
            }
            FieldSpec::Rational => {
                let t = text.trim();
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (t, "1"),
                };
                let n = BigInt::from_str(num.trim()).map_err(|e| bad(&e.to_string()))?;
                let d = BigInt::from_str(den.trim()).map_err(|e| bad(&e.to_string()))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(ExactScalar::Rat(BigRational::new(n, d)))
            }
        }
    }

    /// Render as the report/file syntax: decimal residue, or `a/b` with b > 0
    /// (plain `a` when the denominator is 1).
    pub fn render(&self) -> String {
        match self {
            ExactScalar::Fp { val, .. } => val.to_string(),
            ExactScalar::Rat(r) => {
                debug_assert!(r.denom().is_positive() || r.is_zero());
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(&BigInt::from(m));
        let (_, digits) = r.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

/// Inverse of `a` modulo the prime `p`, via extended Euclid.
pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "not invertible mod p");
    t.rem_euclid(p as i128) as u64
}
