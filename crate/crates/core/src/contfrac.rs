//! Negative (Hirzebruch–Jung) continued fractions.
//!
//! A coefficient list `[t1; t2; ...; tp]` denotes the nested fraction
//! `t1 - 1/(t2 - 1/(... - 1/tp))`. With every coefficient at most `-2` the
//! value is a rational strictly less than `-1`, and every such rational has
//! exactly one expansion of this shape.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rationals. `BigRational` keeps values reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds the reduced rational `num/den`.
///
/// Panics if `den` is zero.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContFracError {
    #[error("continued fraction needs at least one coefficient")]
    Empty,
    #[error("coefficient {value} at position {index} is greater than -2")]
    NonCanonical { index: usize, value: i64 },
    #[error("value {0} is not less than -1")]
    OutOfRange(String),
    #[error("literal evaluation of {0:?} divides by zero")]
    DegenerateFraction(Vec<i64>),
    #[error("value does not fit in a machine integer")]
    Overflow,
}

/// A canonical negative continued fraction: nonempty, all coefficients `<= -2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NegContinuedFraction {
    coeffs: Vec<i64>,
}

impl NegContinuedFraction {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, ContFracError> {
        if coeffs.is_empty() {
            return Err(ContFracError::Empty);
        }
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, &c)| c > -2) {
            return Err(ContFracError::NonCanonical { index, value });
        }
        Ok(NegContinuedFraction { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exact value of the nested fraction.
    pub fn value(&self) -> Rational {
        // Canonical coefficients never produce a zero inner denominator.
        eval_literal(&self.coeffs).expect("canonical fraction cannot degenerate")
    }

    /// Expands a rational `x < -1` into its unique canonical coefficient list.
    pub fn expand(x: &Rational) -> Result<Self, ContFracError> {
        let minus_one = -Rational::one();
        if *x >= minus_one {
            return Err(ContFracError::OutOfRange(x.to_string()));
        }
        let mut coeffs = Vec::new();
        let mut x = x.clone();
        loop {
            let t = x.floor();
            let t_int = t.to_integer().to_i64().ok_or(ContFracError::Overflow)?;
            coeffs.push(t_int);
            let rest = &x - &t;
            if rest.is_zero() {
                break;
            }
            // rest lies in (0, 1), so the next value is below -1 and its
            // numerator is strictly smaller than the current one.
            x = -rest.recip();
        }
        Ok(NegContinuedFraction { coeffs })
    }

    /// Tail convergents `A_i / B_i = [t_i; ...; t_p]`, normalized so that
    /// `A_i > 0 > B_i`.
    pub fn convergents(&self) -> ConvergentTable {
        let p = self.coeffs.len();
        let mut rows = vec![(0i64, 0i64); p];
        let (mut next_a, mut next_b) = (1i64, 0i64);
        for l in (0..p).rev() {
            let a = -self.coeffs[l] * next_a + next_b;
            let b = -next_a;
            rows[l] = (a, b);
            next_a = a;
            next_b = b;
        }
        ConvergentTable { rows }
    }

    /// Numerator `a > 0` and denominator `b < 0` with `a/b` the value.
    pub fn as_pair(&self) -> (i64, i64) {
        self.convergents().rows[0]
    }
}

/// Evaluates `[m1; ...; mp]` exactly as written, without requiring canonical
/// coefficients. Fails if some inner tail evaluates to zero.
pub fn eval_literal(coeffs: &[i64]) -> Result<Rational, ContFracError> {
    let (&last, head) = coeffs.split_last().ok_or(ContFracError::Empty)?;
    let mut x = Rational::from_integer(BigInt::from(last));
    for &c in head.iter().rev() {
        if x.is_zero() {
            return Err(ContFracError::DegenerateFraction(coeffs.to_vec()));
        }
        x = Rational::from_integer(BigInt::from(c)) - x.recip();
    }
    Ok(x)
}

/// Table of tail convergents `(A_i, B_i)` for `i = 1..p`; the sentinel
/// `(A_{p+1}, B_{p+1}) = (1, 0)` is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTable {
    rows: Vec<(i64, i64)>,
}

impl ConvergentTable {
    pub const SENTINEL: (i64, i64) = (1, 0);

    pub fn rows(&self) -> &[(i64, i64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// 1-based access with the sentinel at index `p + 1`.
    pub fn get(&self, i: usize) -> (i64, i64) {
        assert!(
            i >= 1 && i <= self.rows.len() + 1,
            "convergent index {i} out of range"
        );
        if i == self.rows.len() + 1 {
            Self::SENTINEL
        } else {
            self.rows[i - 1]
        }
    }

    pub fn a(&self, i: usize) -> i64 {
        self.get(i).0
    }

    pub fn b(&self, i: usize) -> i64 {
        self.get(i).1
    }
}

/// Checks the two inequalities
///
/// ```text
/// 1/[t1; ...; t_{p-1}; t_p + 1] + 1/[s1; ...; s_q]     <= -1
/// 1/[t1; ...; t_p]             + 1/[s1; ...; s_{q-1}; s_q + 1] <= -1
/// ```
///
/// The bumped fractions are evaluated literally even when the last
/// coefficient becomes `-1`.
pub fn lemma1_check(
    t: &NegContinuedFraction,
    s: &NegContinuedFraction,
) -> Result<(bool, bool), ContFracError> {
    let bumped = |cf: &NegContinuedFraction| {
        let mut c = cf.coeffs.clone();
        *c.last_mut().unwrap() += 1;
        c
    };
    let minus_one = -Rational::one();
    let side = |lhs: &[i64], rhs: &[i64]| -> Result<bool, ContFracError> {
        let x = eval_literal(lhs)?;
        let y = eval_literal(rhs)?;
        if x.is_zero() {
            return Err(ContFracError::DegenerateFraction(lhs.to_vec()));
        }
        if y.is_zero() {
            return Err(ContFracError::DegenerateFraction(rhs.to_vec()));
        }
        Ok(x.recip() + y.recip() <= minus_one)
    };
    Ok((side(&bumped(t), &s.coeffs)?, side(&t.coeffs, &bumped(s))?))
}

/// Numerator and denominator of a rational as machine integers.
pub fn to_pair(x: &Rational) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}
