//! Exact arithmetic over the two coefficient fields: the rationals (standing
//! in for the reals) and the prime fields `Z_p`.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 31;

/// Which field list colors, multipliers and shifts live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// An exact field element. Rationals are kept reduced with a positive
/// denominator (guaranteed by `BigRational`); residues lie in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rational(BigRational),
    Residue(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::BadSign(format!("{v} is not +1 or -1"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// `phi = sign * magnitude` with a positive integer magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub sign: Sign,
    pub magnitude: u64,
}

impl Factorization {
    /// The integer `sign * magnitude`.
    pub fn signed(&self) -> i64 {
        self.sign.value() * self.magnitude as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => FieldElement::Residue(bigint_mod(n, *p)),
        }
    }

    /// Maps an exact rational into the field; over `Z_p` the denominator must
    /// be invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        match self {
            FieldSpec::Rationals => Ok(FieldElement::Rational(q.clone())),
            FieldSpec::Prime(p) => {
                let den = bigint_mod(q.denom(), *p);
                if den == 0 {
                    return Err(Error::NotInField(format!("{q} mod {p}")));
                }
                let num = bigint_mod(q.numer(), *p);
                Ok(FieldElement::Residue(num * inverse_mod(den, *p) % p))
            }
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        match (self, x) {
            (FieldSpec::Rationals, FieldElement::Rational(_)) => true,
            (FieldSpec::Prime(p), FieldElement::Residue(r)) => r < p,
            _ => false,
        }
    }

    pub fn check(&self, x: &FieldElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInField(x.to_string()))
        }
    }

    /// Parses `"p/q"`, `"-3"` and the like. Over `Z_p` integers are reduced;
    /// fractions are reduced through the modular inverse of the denominator.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not an integer or fraction"));
        let q = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
        };
        self.from_rational(&q)
    }

    pub fn arith(&self, op: ArithOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Neg => self.neg(a),
        })
    }

    // The infallible operations below assume both arguments belong to this
    // field; mixing kinds is a programming error.

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldSpec::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x + y)
            }
            (FieldSpec::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue((x + y) % p)
            }
            _ => panic!("field element kind does not match {self:?}"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (FieldSpec::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(-x),
            (FieldSpec::Prime(p), FieldElement::Residue(x)) => FieldElement::Residue((p - x) % p),
            _ => panic!("field element kind does not match {self:?}"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldSpec::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            (FieldSpec::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(x * y % p)
            }
            _ => panic!("field element kind does not match {self:?}"),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (FieldSpec::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(x.recip()),
            (FieldSpec::Prime(p), FieldElement::Residue(x)) => {
                FieldElement::Residue(inverse_mod(*x, *p))
            }
            _ => panic!("field element kind does not match {self:?}"),
        })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Membership in the additive subgroup generated by 1: the integers over
    /// the rationals, everything over `Z_p`.
    pub fn in_unit_subgroup(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Rational(q) => q.is_integer(),
            FieldElement::Residue(_) => true,
        }
    }

    /// `n ≡ 0` in this field: `n == 0` over the rationals, `p | n` over `Z_p`.
    pub fn is_zero_residue(&self, n: &BigInt) -> bool {
        match self {
            FieldSpec::Rationals => n.is_zero(),
            FieldSpec::Prime(p) => bigint_mod(n, *p) == 0,
        }
    }

    /// Splits `phi` into a sign and a positive integer magnitude.
    ///
    /// Over the rationals the sign is forced by `phi` and an override that
    /// disagrees is rejected. Over `Z_p` any sign works: the magnitude is the
    /// least positive representative of `sign * phi`, and without an override
    /// the sign giving the smaller magnitude is chosen.
    pub fn positive_factorization(
        &self,
        phi: &FieldElement,
        override_sign: Option<Sign>,
    ) -> Result<Factorization> {
        self.check(phi)?;
        if phi.is_zero() {
            return Err(Error::NotInUnitSubgroup("0".into()));
        }
        match (self, phi) {
            (FieldSpec::Rationals, FieldElement::Rational(q)) => {
                if !q.is_integer() {
                    return Err(Error::NotInUnitSubgroup(phi.to_string()));
                }
                let sign = if q.is_negative() { Sign::Minus } else { Sign::Plus };
                if let Some(s) = override_sign {
                    if s != sign {
                        return Err(Error::BadSign(format!(
                            "sign {s} contradicts the sign of {phi} over the rationals"
                        )));
                    }
                }
                let magnitude = q.numer().abs().to_u64().ok_or(Error::CapExceeded {
                    what: "multiplier magnitude",
                    size: usize::MAX,
                    cap: u64::MAX as usize,
                })?;
                Ok(Factorization { sign, magnitude })
            }
            (FieldSpec::Prime(p), FieldElement::Residue(r)) => {
                let sign = override_sign.unwrap_or(if *r <= p - r { Sign::Plus } else { Sign::Minus });
                let magnitude = match sign {
                    Sign::Plus => *r,
                    Sign::Minus => p - r,
                };
                Ok(Factorization { sign, magnitude })
            }
            _ => unreachable!("checked above"),
        }
    }

    /// The field element `sign * magnitude`.
    pub fn from_factorization(&self, f: &Factorization) -> FieldElement {
        self.from_i64(f.signed())
    }
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue(r) => *r == 1,
        }
    }

    /// The exact rational this element denotes; residues map to their
    /// representative in `0..p`.
    pub fn to_rational(&self) -> BigRational {
        match self {
            FieldElement::Rational(q) => q.clone(),
            FieldElement::Residue(r) => BigRational::from_integer(BigInt::from(*r)),
        }
    }

    /// Integer value when the element is an integer (always for residues).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            FieldElement::Rational(q) if q.is_integer() => Some(q.numer().clone()),
            FieldElement::Rational(_) => None,
            FieldElement::Residue(r) => Some(BigInt::from(*r)),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}
