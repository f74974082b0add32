use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{horner, Field, ToleranceConfig};
use crate::error::{Error, Result};

impl Field for BigRational {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn approx_eq(&self, rhs: &Self) -> bool {
        self == rhs
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn canonical_cmp(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }

    fn roots(coeffs: &[Self], _cfg: &ToleranceConfig) -> Result<Vec<Self>> {
        rational_roots(coeffs)
    }
}

// Beyond this bound an unfactored cofactor is treated as prime.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// All rational roots of `Σ coeffs[i] y^i` with multiplicity, ascending.
///
/// Candidates come from the rational root theorem applied to the
/// integer-normalized polynomial; each candidate is confirmed by exact
/// evaluation and deflated out as often as it divides.
pub fn rational_roots(coeffs: &[BigRational]) -> Result<Vec<BigRational>> {
    let Some(degree) = coeffs.iter().rposition(|c| !Zero::is_zero(c)) else {
        return Err(Error::ZeroPolynomial);
    };
    let mut poly: Vec<BigRational> = coeffs[..=degree].to_vec();
    let mut roots = Vec::new();

    let zeros = poly.iter().position(|c| !Zero::is_zero(c)).unwrap_or(0);
    roots.extend(std::iter::repeat_n(<BigRational as Zero>::zero(), zeros));
    poly.drain(..zeros);
    if poly.len() <= 1 {
        return Ok(roots);
    }

    let ints = integer_normalize(&poly);
    let lead = ints.last().unwrap().abs();
    let constant = ints[0].abs();
    let numerators = divisors(&constant);
    let denominators = divisors(&lead);

    let mut candidates: Vec<BigRational> = Vec::new();
    for p in &numerators {
        for q in &denominators {
            if !p.gcd(q).is_one() {
                continue;
            }
            let c = BigRational::new(p.clone(), q.clone());
            candidates.push(-c.clone());
            candidates.push(c);
        }
    }
    candidates.sort();
    candidates.dedup();

    for c in candidates {
        while poly.len() > 1 && Zero::is_zero(&horner(&poly, &c)) {
            poly = deflate(&poly, &c);
            roots.push(c.clone());
        }
        if poly.len() <= 1 {
            break;
        }
    }
    roots.sort();
    Ok(roots)
}

/// Clears denominators and removes the content.
fn integer_normalize(poly: &[BigRational]) -> Vec<BigInt> {
    let lcm = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

/// Synthetic division by `(y - c)`; the caller guarantees `c` is a root.
fn deflate(poly: &[BigRational], c: &BigRational) -> Vec<BigRational> {
    let n = poly.len() - 1;
    let mut quotient = vec![<BigRational as Zero>::zero(); n];
    let mut carry = <BigRational as Zero>::zero();
    for i in (0..n).rev() {
        carry = &poly[i + 1] + &carry * c;
        quotient[i] = carry.clone();
    }
    quotient
}

/// Positive divisors of a nonzero integer.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut k = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            k += 1;
        }
        if k > 0 {
            factors.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (prime, k) in factors {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pow = d.clone();
            next.push(pow.clone());
            for _ in 0..k {
                pow = &pow * &prime;
                next.push(pow.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}
