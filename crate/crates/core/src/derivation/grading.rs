//! Root space decompositions and the gradings they induce.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{DerivationProblem, LinearMap};
use crate::algebra::{subspace_product, Algebra, Subspace};
use crate::exactla::{
    char_poly, format_rational, generalized_eigenspace, magnitude_key, rational_roots, Polynomial,
    Rational,
};
use crate::magma::PartialMagma;

/// Generalized eigenspaces keyed by eigenvalue (ascending).
pub type Decomposition = BTreeMap<Rational, Subspace>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("non-rational spectrum: characteristic polynomial keeps the factor {residual}")]
    NonRationalSpectrum { residual: Polynomial },
    #[error("map of size {got} on an algebra of dimension {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// Splits the algebra into generalized eigenspaces of `d`. Fails unless the
/// characteristic polynomial splits over the rationals.
pub fn root_space_decomposition(
    alg: &Algebra,
    d: &LinearMap,
) -> Result<Decomposition, DecompositionError> {
    if d.size() != alg.dim() {
        return Err(DecompositionError::SizeMismatch {
            expected: alg.dim(),
            got: d.size(),
        });
    }
    let poly = char_poly(d.matrix()).expect("square");
    let roots = rational_roots(&poly);
    if !roots.splits() {
        return Err(DecompositionError::NonRationalSpectrum {
            residual: roots.residual,
        });
    }
    let n = alg.dim();
    Ok(roots
        .roots
        .keys()
        .map(|lambda| {
            let basis = generalized_eigenspace(d.matrix(), lambda).expect("square");
            (lambda.clone(), Subspace::span(n, &basis))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("component of weight {} is zero", format_rational(.0))]
    EmptyComponent(Rational),
    #[error("components do not form a direct sum decomposition of the whole algebra")]
    NotDirectSum,
    #[error("product of components {} and {} is not contained in a single component", format_rational(.0), format_rational(.1))]
    NotAGrading(Rational, Rational),
}

/// A grading `A = sum_g A_g` together with the partial operation it induces
/// on the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    weights: Vec<Rational>,
    components: BTreeMap<Rational, Subspace>,
    products: BTreeMap<(Rational, Rational), Rational>,
}

impl Grading {
    /// Weights in enumeration order: by absolute value, negative first.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn component(&self, w: &Rational) -> Option<&Subspace> {
        self.components.get(w)
    }

    pub fn components(&self) -> &BTreeMap<Rational, Subspace> {
        &self.components
    }

    /// `lambda * mu`, when `A_lambda A_mu != 0`.
    pub fn product(&self, lambda: &Rational, mu: &Rational) -> Option<&Rational> {
        self.products.get(&(lambda.clone(), mu.clone()))
    }

    /// Defined entries, in weight enumeration order.
    pub fn table(&self) -> Vec<(Rational, Rational, Rational)> {
        let mut out = Vec::with_capacity(self.products.len());
        for l in &self.weights {
            for r in &self.weights {
                if let Some(p) = self.product(l, r) {
                    out.push((l.clone(), r.clone(), p.clone()));
                }
            }
        }
        out
    }

    /// The grading set as a partial magma, labels in weight order.
    pub fn to_partial_magma(&self) -> PartialMagma {
        let labels: Vec<String> = self.weights.iter().map(format_rational).collect();
        let index = |w: &Rational| self.weights.iter().position(|x| x == w).unwrap();
        let mut m = PartialMagma::new(labels).expect("weights are distinct");
        for (l, r, p) in self.table() {
            m.define(index(&l), index(&r), index(&p))
                .expect("indices in range");
        }
        m
    }
}

/// Reads off the partial operation: `lambda * mu = nu` whenever
/// `A_lambda A_mu` is nonzero and contained in `A_nu`.
#[allow(clippy::result_large_err)]
pub fn grading_from_decomposition(
    alg: &Algebra,
    decomp: &Decomposition,
) -> Result<Grading, GradingError> {
    let n = alg.dim();
    let mut total = Subspace::zero(n);
    let mut dim_sum = 0;
    for (w, c) in decomp {
        if c.is_zero() {
            return Err(GradingError::EmptyComponent(w.clone()));
        }
        assert_eq!(c.ambient_dim(), n, "component ambient dimension");
        dim_sum += c.dim();
        total = total.sum(c);
    }
    if dim_sum != n || total.dim() != n {
        return Err(GradingError::NotDirectSum);
    }

    let mut weights: Vec<Rational> = decomp.keys().cloned().collect();
    weights.sort_by_key(magnitude_key);
    let mut products = BTreeMap::new();
    for (l, cl) in decomp {
        for (r, cr) in decomp {
            let prod = subspace_product(alg, cl, cr).expect("matching dimensions");
            if prod.is_zero() {
                continue;
            }
            let target = decomp
                .iter()
                .find(|(_, c)| c.contains(&prod))
                .map(|(w, _)| w.clone());
            match target {
                Some(t) => {
                    products.insert((l.clone(), r.clone()), t);
                }
                None => return Err(GradingError::NotAGrading(l.clone(), r.clone())),
            }
        }
    }
    Ok(Grading {
        weights,
        components: decomp.clone(),
        products,
    })
}

/// A pair on which the weight formula `lambda * mu = delta lambda + gamma mu`
/// fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightFormulaViolation {
    /// Defined entry differs from the formula.
    WrongWeight {
        lambda: Rational,
        mu: Rational,
        actual: Rational,
        expected: Rational,
    },
    /// Formula value is not a weight, yet the component product is nonzero.
    NonzeroOutsideWeights { lambda: Rational, mu: Rational },
}

/// Exhaustive check of the weight formula over all ordered pairs of weights.
/// The zero-product half recomputes component products from the algebra.
pub fn weight_formula_violations(
    alg: &Algebra,
    grading: &Grading,
    prob: &DerivationProblem,
) -> Vec<WeightFormulaViolation> {
    let mut out = Vec::new();
    for l in grading.weights() {
        for r in grading.weights() {
            let expected = prob.weight(l, r);
            if let Some(actual) = grading.product(l, r) {
                if *actual != expected {
                    out.push(WeightFormulaViolation::WrongWeight {
                        lambda: l.clone(),
                        mu: r.clone(),
                        actual: actual.clone(),
                        expected: expected.clone(),
                    });
                }
            }
            if grading.component(&expected).is_none() {
                let prod = subspace_product(alg, &grading.components[l], &grading.components[r])
                    .expect("matching dimensions");
                if !prod.is_zero() {
                    out.push(WeightFormulaViolation::NonzeroOutsideWeights {
                        lambda: l.clone(),
                        mu: r.clone(),
                    });
                }
            }
        }
    }
    out
}
