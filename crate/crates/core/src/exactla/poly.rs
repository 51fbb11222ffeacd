//! Univariate polynomials over the rationals, characteristic polynomials and
//! rational root extraction.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{Matrix, MatrixError};
use super::rational::{format_rational, Rational};

/// Coefficients in ascending degree; no trailing zeros. The zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// `t - r`
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Result<Matrix, MatrixError> {
        if !m.is_square() {
            return Err(MatrixError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?.add(&Matrix::scalar(n, c.clone()))?;
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some(lc) => {
                let inv = lc.recip();
                Polynomial::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Divides by `t - r`, returning the quotient if the remainder is zero.
    pub fn div_linear_exact(&self, r: &Rational) -> Option<Polynomial> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        // synthetic division from the top coefficient down
        let mut quotient = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (1..n).rev() {
            carry = carry * r + &self.coeffs[i];
            quotient[i - 1] = carry.clone();
        }
        let remainder = carry * r + &self.coeffs[0];
        remainder.is_zero().then(|| Polynomial::new(quotient))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coeff = (!abs.is_one() || deg == 0).then(|| format_rational(&abs));
            match (coeff, deg) {
                (Some(c), 0) => write!(f, "{c}")?,
                (Some(c), 1) => write!(f, "{c}*t")?,
                (Some(c), d) => write!(f, "{c}*t^{d}")?,
                (None, 1) => write!(f, "t")?,
                (None, d) => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

/// `det(tI - m)` by the Faddeev-LeVerrier recurrence. Every division is by a
/// small positive integer, which is exact over the rationals.
pub fn char_poly(m: &Matrix) -> Result<Polynomial, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        aux = m
            .mul(&aux)?
            .add(&Matrix::scalar(n, coeffs[n - k + 1].clone()))?;
        let t = m.mul(&aux)?.trace();
        coeffs[n - k] = -t / Rational::from_integer(BigInt::from(k));
    }
    Ok(Polynomial::new(coeffs))
}

/// Rational roots with multiplicities, and what is left after removing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRoots {
    pub roots: BTreeMap<Rational, usize>,
    /// Monic cofactor free of rational linear factors; `1` iff the input
    /// splits over the rationals.
    pub residual: Polynomial,
}

impl RationalRoots {
    pub fn splits(&self) -> bool {
        self.residual == Polynomial::one()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.values().sum()
    }
}

/// Finds every rational root of a nonzero polynomial via the rational root
/// theorem. Panics on the zero polynomial.
pub fn rational_roots(p: &Polynomial) -> RationalRoots {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut rest = p.monic();
    let mut roots = BTreeMap::new();

    let zero = Rational::zero();
    let mut zero_mult = 0;
    while let Some(q) = rest.div_linear_exact(&zero) {
        rest = q;
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.insert(zero.clone(), zero_mult);
    }

    if rest.degree().unwrap_or(0) > 0 {
        let ints = integer_coefficients(&rest);
        let lead = ints.last().unwrap().magnitude().clone();
        let constant = ints[0].magnitude().clone();
        let mut candidates: Vec<Rational> = Vec::new();
        let den_divs = divisors(&lead);
        for num in divisors(&constant) {
            for den in &den_divs {
                let c = Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            let mut mult = 0;
            while let Some(q) = rest.div_linear_exact(&c) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                roots.insert(c, mult);
            }
            if rest.degree() == Some(0) {
                break;
            }
        }
    }
    RationalRoots {
        roots,
        residual: rest.monic(),
    }
}

/// Scales to primitive integer coefficients.
fn integer_coefficients(p: &Polynomial) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    scaled.into_iter().map(|c| c / &content).collect()
}

/// All positive divisors, ascending. Trial division; fine for the
/// coefficient sizes that arise from small structure-constant algebras.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    assert!(!n.is_zero());
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = BigUint::from(2u32);
    while &d * &d <= rest {
        let mut e = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += if d.to_u32() == Some(2) { 1u32 } else { 2u32 };
    }
    if !rest.is_one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (prime, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pw = d.clone();
            next.push(pw.clone());
            for _ in 0..e {
                pw *= &prime;
                next.push(pw.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Basis of `ker (m - lambda I)^n` in rref-induced form; empty when `lambda`
/// is not an eigenvalue.
pub fn generalized_eigenspace(
    m: &Matrix,
    lambda: &Rational,
) -> Result<Vec<Vec<Rational>>, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let shifted = m.sub(&Matrix::scalar(n, lambda.clone()))?;
    Ok(shifted.pow(n as u32)?.nullspace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::{rat, ratio};

    #[test]
    fn char_poly_nilpotent() {
        let m = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(char_poly(&m).unwrap(), Polynomial::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn char_poly_diagonal() {
        let m = Matrix::diagonal(&[rat(0), rat(1), rat(-1)]);
        assert_eq!(char_poly(&m).unwrap(), Polynomial::from_i64(&[0, -1, 0, 1]));
    }

    #[test]
    fn char_poly_rejects_non_square() {
        assert!(char_poly(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn char_poly_of_empty_matrix_is_one() {
        assert_eq!(char_poly(&Matrix::zeros(0, 0)).unwrap(), Polynomial::one());
    }

    #[test]
    fn roots_of_t2_minus_1() {
        let r = rational_roots(&Polynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(r.roots, BTreeMap::from([(rat(-1), 1), (rat(1), 1)]));
        assert!(r.splits());
    }

    #[test]
    fn roots_of_t2_plus_1() {
        let p = Polynomial::from_i64(&[1, 0, 1]);
        let r = rational_roots(&p);
        assert!(r.roots.is_empty());
        assert_eq!(r.residual, p);
        assert!(!r.splits());
    }

    #[test]
    fn roots_with_multiplicity() {
        // t^2 (t-1)^2 (t+1)^2 = t^6 - 2t^4 + t^2
        let p = Polynomial::from_i64(&[0, 0, 1, 0, -2, 0, 1]);
        let r = rational_roots(&p);
        assert_eq!(
            r.roots,
            BTreeMap::from([(rat(-1), 2), (rat(0), 2), (rat(1), 2)])
        );
        assert!(r.splits());
    }

    #[test]
    fn fractional_roots_and_residual() {
        // (2t - 1)(3t + 2)(t^2 + 2), leading coefficient 6
        let p = Polynomial::linear(&ratio(1, 2))
            .mul(&Polynomial::linear(&ratio(-2, 3)))
            .mul(&Polynomial::from_i64(&[2, 0, 1]))
            .mul(&Polynomial::from_i64(&[6]));
        let r = rational_roots(&p);
        assert_eq!(
            r.roots,
            BTreeMap::from([(ratio(-2, 3), 1), (ratio(1, 2), 1)])
        );
        assert_eq!(r.residual, Polynomial::from_i64(&[2, 0, 1]));
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let r = rational_roots(&Polynomial::from_i64(&[5]));
        assert!(r.roots.is_empty());
        assert!(r.splits());
    }

    #[test]
    fn divisors_of_small_numbers() {
        let d: Vec<u32> = divisors(&BigUint::from(36u32))
            .iter()
            .map(|x| x.to_u32().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(&BigUint::one()), vec![BigUint::one()]);
    }

    #[test]
    fn generalized_eigenspaces_of_jordan_block() {
        let m = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(generalized_eigenspace(&m, &rat(0)).unwrap().len(), 2);
        assert!(generalized_eigenspace(&m, &rat(1)).unwrap().is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(
            Polynomial::from_i64(&[1, 0, -1, 1]).to_string(),
            "t^3 - t^2 + 1"
        );
        assert_eq!(
            Polynomial::new(vec![ratio(1, 2), rat(2)]).to_string(),
            "2*t + 1/2"
        );
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
