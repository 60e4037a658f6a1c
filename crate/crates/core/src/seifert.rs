//! Star-shaped plumbings from Seifert data, Brieskorn spheres, and the
//! two-ray diagrams of `S^3`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::contfrac::{rational, NegContinuedFraction};
use crate::graph::PlumbingGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("ray ({a}, {b}) is not normalized: need gcd(a, b) = 1 and -a < b < 0")]
    BadRay { a: i64, b: i64 },
    #[error("center weight {0} must be negative")]
    BadCenter(i64),
    #[error("invariants do not satisfy a1...ak(-m + sum b_i/a_i) = 1")]
    NotHomologySphere,
    #[error("multiplicities must be at least 2, got {0}")]
    BadMultiplicity(i64),
    #[error("multiplicities {0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("need at least one multiplicity")]
    NoRays,
    #[error("star graph for these invariants is not negative definite")]
    NonNegDefinite,
    #[error("quadruple {0} does not satisfy 1 + b1/a1 + b2/a2 = 1/(a1 a2)")]
    NotSphere(String),
    #[error("quadruple {0} is a base case with a ray equal to -2")]
    BaseCase(String),
    #[error("product of multiplicities overflows")]
    Overflow,
}

/// One exceptional fiber `(a, b)` with `a > 0 > b > -a`, i.e. `a/b < -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ray {
    pub a: i64,
    pub b: i64,
}

impl Ray {
    pub fn new(a: i64, b: i64) -> Result<Self, SeifertError> {
        if a <= 0 || b >= 0 || b <= -a || a.gcd(&b) != 1 {
            return Err(SeifertError::BadRay { a, b });
        }
        Ok(Ray { a, b })
    }

    /// Weights along the ray, from the center outward.
    pub fn continued_fraction(&self) -> NegContinuedFraction {
        NegContinuedFraction::expand(&rational(self.a, self.b)).expect("a/b < -1 by construction")
    }

    /// Compares `a/b` values.
    fn cmp_ratio(&self, other: &Ray) -> Ordering {
        // a1/b1 vs a2/b2 with b's negative: cross-multiply by b1*b2 > 0.
        (self.a as i128 * other.b as i128).cmp(&(other.a as i128 * self.b as i128))
    }
}

/// Center weight and normalized rays, sorted so `a_1/b_1 > a_2/b_2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertInvariants {
    center: i64,
    rays: Vec<Ray>,
}

impl SeifertInvariants {
    pub fn new(center: i64, rays: &[(i64, i64)]) -> Result<Self, SeifertError> {
        if center >= 0 {
            return Err(SeifertError::BadCenter(center));
        }
        let mut rays = rays
            .iter()
            .map(|&(a, b)| Ray::new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        if !plumbing_condition(center, &rays)? {
            return Err(SeifertError::NotHomologySphere);
        }
        rays.sort_by(|x, y| y.cmp_ratio(x));
        Ok(SeifertInvariants { center, rays })
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// `b` paired with multiplicity `a`, if present.
    pub fn b_for(&self, a: i64) -> Option<i64> {
        self.rays.iter().find(|r| r.a == a).map(|r| r.b)
    }

    /// Star with the center first, then each ray outward in ray order.
    pub fn star_graph(&self) -> PlumbingGraph {
        let rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| r.continued_fraction().coeffs().to_vec())
            .collect();
        PlumbingGraph::star(self.center, &rays)
    }

    pub fn ray_lengths(&self) -> Vec<usize> {
        self.rays
            .iter()
            .map(|r| r.continued_fraction().len())
            .collect()
    }
}

impl fmt::Display for SeifertInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.center)?;
        for r in &self.rays {
            write!(f, " ({},{})", r.a, r.b)?;
        }
        Ok(())
    }
}

/// `a1...ak (-m + sum b_i/a_i) = 1`, checked in integers.
fn plumbing_condition(center: i64, rays: &[Ray]) -> Result<bool, SeifertError> {
    let product = rays
        .iter()
        .try_fold(1i128, |p, r| p.checked_mul(r.a as i128))
        .ok_or(SeifertError::Overflow)?;
    let mut total = -(center as i128) * product;
    for r in rays {
        total += r.b as i128 * (product / r.a as i128);
    }
    Ok(total == 1)
}

/// Seifert invariants of `Sigma(a_1, ..., a_k)` with `-a_i < b_i < 0`.
pub fn brieskorn(multiplicities: &[i64]) -> Result<SeifertInvariants, SeifertError> {
    if multiplicities.is_empty() {
        return Err(SeifertError::NoRays);
    }
    if let Some(&a) = multiplicities.iter().find(|&&a| a < 2) {
        return Err(SeifertError::BadMultiplicity(a));
    }
    for (i, &x) in multiplicities.iter().enumerate() {
        for &y in &multiplicities[i + 1..] {
            if x.gcd(&y) != 1 {
                return Err(SeifertError::NotCoprime(x, y));
            }
        }
    }
    let product = multiplicities
        .iter()
        .try_fold(1i128, |p, &a| p.checked_mul(a as i128))
        .ok_or(SeifertError::Overflow)?;
    let mut rays = Vec::with_capacity(multiplicities.len());
    let mut sum = 0i128;
    for &a in multiplicities {
        let a = a as i128;
        let cofactor = product / a;
        // b * cofactor = 1 (mod a), taken in (-a, 0)
        let inv = mod_inverse(cofactor.rem_euclid(a), a);
        let b = inv - a;
        // a >= 2 and inv in [1, a) so b in (-a, 0)
        debug_assert!(-a < b && b < 0);
        sum += b * cofactor;
        rays.push((a as i64, b as i64));
    }
    // product * (-m) + sum = 1
    let numerator = sum - 1;
    assert_eq!(
        numerator.rem_euclid(product),
        0,
        "center weight must be an integer"
    );
    let center = numerator / product;
    assert!(center < 0, "center weight {center} is not negative");
    let inv = SeifertInvariants::new(center as i64, &rays)?;
    if !inv.star_graph().is_negative_definite() {
        return Err(SeifertError::NonNegDefinite);
    }
    Ok(inv)
}

/// Inverse of `x` modulo `m` for coprime `x`, `m >= 2`, in `[0, m)`.
fn mod_inverse(x: i128, m: i128) -> i128 {
    let e = x.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// `a1 a2 + a2 b1 + a1 b2 = 1`, which is `1 + b1/a1 + b2/a2 = 1/(a1 a2)`.
pub fn check_quadruple(a1: i64, b1: i64, a2: i64, b2: i64) -> bool {
    let (a1, b1, a2, b2) = (a1 as i128, b1 as i128, a2 as i128, b2 as i128);
    a1 * a2 + a2 * b1 + a1 * b2 == 1
}

/// A two-ray star with center `-1` bounding `S^3`, stored with the ray whose
/// ratio is at least `-2` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphereQuadruple {
    pub a1: i64,
    pub b1: i64,
    pub a2: i64,
    pub b2: i64,
}

impl SphereQuadruple {
    /// Validates and puts the quadruple in canonical order.
    pub fn new(a1: i64, b1: i64, a2: i64, b2: i64) -> Result<Self, SeifertError> {
        let label = format!("({a1},{b1},{a2},{b2})");
        if a1 <= 0 || a2 <= 0 || b1 >= 0 || b2 >= 0 || !check_quadruple(a1, b1, a2, b2) {
            return Err(SeifertError::NotSphere(label));
        }
        // a/b >= -2 with b < 0 is a <= -2b
        let first_small = a1 <= -2 * b1;
        let second_small = a2 <= -2 * b2;
        match (first_small, second_small) {
            (true, false) => Ok(SphereQuadruple { a1, b1, a2, b2 }),
            (false, true) => Ok(SphereQuadruple {
                a1: a2,
                b1: b2,
                a2: a1,
                b2: b1,
            }),
            // Excluded by the equation; kept as an explicit rejection.
            _ => Err(SeifertError::NotSphere(label)),
        }
    }

    pub fn rays(&self) -> (Ray, Ray) {
        (
            Ray {
                a: self.a1,
                b: self.b1,
            },
            Ray {
                a: self.a2,
                b: self.b2,
            },
        )
    }

    pub fn invariants(&self) -> SeifertInvariants {
        SeifertInvariants::new(-1, &[(self.a1, self.b1), (self.a2, self.b2)])
            .expect("sphere quadruple satisfies the plumbing condition")
    }

    /// Center `-1`; first ray then second ray, outward.
    pub fn star_graph(&self) -> PlumbingGraph {
        let (r1, r2) = self.rays();
        PlumbingGraph::star(
            -1,
            &[
                r1.continued_fraction().coeffs().to_vec(),
                r2.continued_fraction().coeffs().to_vec(),
            ],
        )
    }

    pub fn is_base_case(&self) -> bool {
        self.a1 == -2 * self.b1
    }

    /// Reduces by the move `(a1, b1, a2, b2) -> (-b1, 2 b1 + a1, a2 + b2, b2)`
    /// applied with the ray of ratio `> -2` in the first slot. The result is
    /// returned in canonical order.
    pub fn reduce(&self) -> Result<SphereQuadruple, SeifertError> {
        if self.is_base_case() {
            return Err(SeifertError::BaseCase(self.to_string()));
        }
        let (a1, b1, a2, b2) = (self.a1, self.b1, self.a2, self.b2);
        let next = SphereQuadruple::new(-b1, 2 * b1 + a1, a2 + b2, b2)?;
        debug_assert!(next.a1 + next.a2 < a1 + a2);
        Ok(next)
    }

    /// The two quadruples that reduce to `self`.
    pub fn parents(&self) -> [SphereQuadruple; 2] {
        let lift = |(a1p, b1p): (i64, i64), (a2p, b2p): (i64, i64)| {
            SphereQuadruple::new(b1p + 2 * a1p, -a1p, a2p - b2p, b2p)
                .expect("inverse move preserves the equation")
        };
        [
            lift((self.a1, self.b1), (self.a2, self.b2)),
            lift((self.a2, self.b2), (self.a1, self.b1)),
        ]
    }

    pub fn sum(&self) -> i64 {
        self.a1 + self.a2
    }
}

impl fmt::Display for SphereQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a1, self.b1, self.a2, self.b2)
    }
}

/// All sphere quadruples with `a1 + a2 <= bound`, sorted, obtained by closing
/// the base family `(2, -1, 2k+1, -k)` under the inverse move.
pub fn enumerate_quadruples(bound: i64) -> Vec<SphereQuadruple> {
    let mut found = BTreeSet::new();
    let mut stack: Vec<SphereQuadruple> = (1..)
        .map(|k| SphereQuadruple::new(2, -1, 2 * k + 1, -k).expect("base family"))
        .take_while(|q| q.sum() <= bound)
        .collect();
    while let Some(q) = stack.pop() {
        if !found.insert(q) {
            continue;
        }
        stack.extend(q.parents().into_iter().filter(|p| p.sum() <= bound));
    }
    found.into_iter().collect()
}
