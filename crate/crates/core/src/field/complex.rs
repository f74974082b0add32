use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Field, ToleranceConfig};
use crate::error::{Error, Result};

static ZERO_TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3DDB_7CDF_D9D7_BDBB); // 1e-10

/// Magnitude below which a [`ComplexApprox`] counts as zero.
pub fn zero_tolerance() -> f64 {
    f64::from_bits(ZERO_TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets the process-wide zero tolerance of the complex backend.
pub fn set_zero_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "zero tolerance must be positive");
    ZERO_TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

/// A double-precision complex number with tolerance-based zero test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexApprox(pub Complex64);

impl ComplexApprox {
    pub fn new(re: f64, im: f64) -> Self {
        assert!(re.is_finite() && im.is_finite(), "complex value must be finite");
        ComplexApprox(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            if re < 0.0 {
                write!(f, "({re})")
            } else {
                write!(f, "{re}")
            }
        } else if im < 0.0 {
            write!(f, "({re}-{}i)", -im)
        } else {
            write!(f, "({re}+{im}i)")
        }
    }
}

impl Field for ComplexApprox {
    const NAME: &'static str = "complex";

    fn zero() -> Self {
        ComplexApprox(Complex64::new(0.0, 0.0))
    }

    fn one() -> Self {
        ComplexApprox(Complex64::new(1.0, 0.0))
    }

    fn from_rational(q: &BigRational) -> Self {
        ComplexApprox(Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
    }

    fn is_zero(&self) -> bool {
        self.0.norm() <= zero_tolerance()
    }

    fn add(&self, rhs: &Self) -> Self {
        ComplexApprox(self.0 + rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        ComplexApprox(self.0 * rhs.0)
    }

    fn neg(&self) -> Self {
        ComplexApprox(-self.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        ComplexApprox(self.0 - rhs.0)
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(ComplexApprox(self.0.inv()))
        }
    }

    fn is_negative(&self) -> bool {
        self.0.im == 0.0 && self.0.re < 0.0
    }

    fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    fn canonical_cmp(&self, rhs: &Self) -> Ordering {
        self.0.re.total_cmp(&rhs.0.re).then(self.0.im.total_cmp(&rhs.0.im))
    }

    fn roots(coeffs: &[Self], cfg: &ToleranceConfig) -> Result<Vec<Self>> {
        let raw: Vec<Complex64> = coeffs.iter().map(|c| c.0).collect();
        let mut roots: Vec<ComplexApprox> = aberth_roots(&raw, cfg)?.into_iter().map(ComplexApprox).collect();
        roots.sort_by(|a, b| a.canonical_cmp(b));
        Ok(roots)
    }
}

/// All `deg` roots of `Σ coeffs[i] y^i` by Aberth–Ehrlich simultaneous
/// iteration.
pub(crate) fn aberth_roots(coeffs: &[Complex64], cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    let zero_tol = cfg.zero_tolerance;
    let Some(degree) = coeffs.iter().rposition(|c| c.norm() > zero_tol) else {
        return Err(Error::ZeroPolynomial);
    };
    let poly = &coeffs[..=degree];
    let zeros = poly.iter().position(|c| c.norm() > zero_tol).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let poly = &poly[zeros..];
    let n = poly.len() - 1;
    if n == 0 {
        return Ok(roots);
    }

    let lead = poly[n];
    let monic: Vec<Complex64> = poly.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|i| monic[i] * i as f64).collect();
    let scale = poly.iter().map(|c| c.norm()).fold(0.0, f64::max);

    // Initial guesses on a circle bounding all roots (Cauchy bound).
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let start = radius.min(2.0 * monic[0].norm().powf(1.0 / n as f64).max(1e-3));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(start, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();

    let residual_ok = |z: &[Complex64]| {
        z.iter().all(|r| eval(poly, *r).norm() <= cfg.root_residual_tolerance * scale)
    };

    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let p = eval(&monic, z[k]);
            let dp = eval(&deriv, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step <= 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && !residual_ok(&z) {
        return Err(Error::NonConvergence(cfg.max_iterations));
    }
    roots.extend(z);
    Ok(roots)
}

fn eval(coeffs: &[Complex64], y: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
}
