//! `(delta, gamma)`-derivations: linear maps `D` with
//! `D(xy) = delta * D(x) y + gamma * x D(y)`.

mod grading;
mod lemma2;
mod witness;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, Subspace};
use crate::exactla::{Matrix, Rational};

pub use grading::{
    grading_from_decomposition, root_space_decomposition, weight_formula_violations, Decomposition,
    DecompositionError, Grading, GradingError, WeightFormulaViolation,
};
pub use lemma2::{assemble, lemma2_solution_space, Lemma2Error, Lemma2Solution};
pub use witness::{corollary_check, find_nonassoc_witness, CorollaryCase, NonAssocWitness};

/// The pair of scalars `(delta, gamma)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivationProblem {
    #[serde(with = "crate::exactla::rational::as_string")]
    pub delta: Rational,
    #[serde(with = "crate::exactla::rational::as_string")]
    pub gamma: Rational,
}

impl DerivationProblem {
    pub fn new(delta: Rational, gamma: Rational) -> Self {
        DerivationProblem { delta, gamma }
    }

    /// `delta * lambda + gamma * mu`, the weight of `A_lambda A_mu`.
    pub fn weight(&self, lambda: &Rational, mu: &Rational) -> Rational {
        &self.delta * lambda + &self.gamma * mu
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearMapError {
    #[error("linear map must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("linear map of size {got} on an algebra of dimension {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// An endomorphism in algebra coordinates: column `j` is the image of basis
/// element `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<Self, LinearMapError> {
        if !matrix.is_square() {
            return Err(LinearMapError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(LinearMap { matrix })
    }

    pub fn zero(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix
            .mul_vec(v)
            .expect("vector length matches map size")
    }

    /// Row-major flattening, the coordinates used for the derivation system.
    pub fn flatten(&self) -> Vec<Rational> {
        self.matrix.entries().to_vec()
    }

    fn check_size(&self, alg: &Algebra) -> Result<(), LinearMapError> {
        if self.size() != alg.dim() {
            return Err(LinearMapError::SizeMismatch {
                expected: alg.dim(),
                got: self.size(),
            });
        }
        Ok(())
    }
}

/// Basis of all `(delta, gamma)`-derivations of `alg`, computed as the
/// nullspace of the `n^3 x n^2` system in the entries of `D`.
///
/// Unknown `r * n + c` is `D[r][c]`. For a basis pair `(i, j)` and output
/// coordinate `r` the equation reads
/// `sum_k c_ijk D[r][k] - delta sum_k D[k][i] c_kjr - gamma sum_k D[k][j] c_ikr = 0`.
pub fn derivation_space(alg: &Algebra, prob: &DerivationProblem) -> Vec<LinearMap> {
    let n = alg.dim();
    let unknowns = n * n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                let mut row = vec![Rational::zero(); unknowns];
                for k in 0..n {
                    let c = alg.structure_constant(i, j, k);
                    if !c.is_zero() {
                        row[r * n + k] += c;
                    }
                    let c = alg.structure_constant(k, j, r);
                    if !c.is_zero() {
                        row[k * n + i] -= &prob.delta * c;
                    }
                    let c = alg.structure_constant(i, k, r);
                    if !c.is_zero() {
                        row[k * n + j] -= &prob.gamma * c;
                    }
                }
                if !row.iter().all(Zero::is_zero) {
                    rows.push(row);
                }
            }
        }
    }
    Matrix::from_rows(&rows, unknowns)
        .nullspace()
        .into_iter()
        .map(|v| LinearMap {
            matrix: Matrix::from_entries(n, n, v).expect("n^2 entries"),
        })
        .collect()
}

/// Checks the defining equation on every basis pair by direct substitution.
/// Returns the first failing pair.
pub fn derivation_defect(
    alg: &Algebra,
    d: &LinearMap,
    prob: &DerivationProblem,
) -> Result<Option<(usize, usize)>, LinearMapError> {
    d.check_size(alg)?;
    let n = alg.dim();
    let images: Vec<Vec<Rational>> = (0..n).map(|i| d.matrix().column(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(&alg.basis_product(i, j));
            let left = alg.product(&images[i], &alg.basis_vector(j)).unwrap();
            let right = alg.product(&alg.basis_vector(i), &images[j]).unwrap();
            let rhs: Vec<Rational> = left
                .iter()
                .zip(&right)
                .map(|(x, y)| &prob.delta * x + &prob.gamma * y)
                .collect();
            if lhs != rhs {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_derivation(alg: &Algebra, d: &LinearMap, prob: &DerivationProblem) -> bool {
    matches!(derivation_defect(alg, d, prob), Ok(None))
}

/// The span of a set of maps inside the `n^2`-dimensional space of matrices,
/// in canonical form.
pub fn map_span(n: usize, maps: &[LinearMap]) -> Subspace {
    let gens: Vec<Vec<Rational>> = maps.iter().map(LinearMap::flatten).collect();
    Subspace::span(n * n, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests_support::matrix_algebra_2x2;
    use crate::algebra::FamilySpec;
    use crate::exactla::{rat, ratio};

    fn example_d() -> LinearMap {
        LinearMap::new(Matrix::diagonal(&[
            rat(0),
            rat(0),
            rat(1),
            rat(1),
            rat(-1),
            rat(-1),
        ]))
        .unwrap()
    }

    #[test]
    fn identity_is_derivation_when_delta_plus_gamma_is_one() {
        let alg = matrix_algebra_2x2();
        for prob in [
            DerivationProblem::new(rat(1), rat(0)),
            DerivationProblem::new(ratio(2, 3), ratio(1, 3)),
            DerivationProblem::new(rat(3), rat(-2)),
        ] {
            let space = derivation_space(&alg, &prob);
            assert!(map_span(4, &space).contains_vector(&LinearMap::identity(4).flatten()));
        }
    }

    #[test]
    fn example_antiderivation_in_space() {
        let alg = FamilySpec::uniform(Matrix::from_i64(&[&[0, 1], &[0, 0]]))
            .unwrap()
            .build();
        let prob = DerivationProblem::new(rat(-1), rat(-1));
        assert!(is_derivation(&alg, &example_d(), &prob));
        let space = derivation_space(&alg, &prob);
        assert!(map_span(6, &space).contains_vector(&example_d().flatten()));
        for d in &space {
            assert!(is_derivation(&alg, d, &prob));
        }
    }

    #[test]
    fn matrix_algebra_derivations_are_inner() {
        let alg = matrix_algebra_2x2();
        let space = derivation_space(&alg, &DerivationProblem::new(rat(1), rat(1)));
        assert_eq!(space.len(), 3);
        // x -> ax - xa for each matrix unit a
        let inner: Vec<LinearMap> = (0..4)
            .map(|a| {
                let mut m = Matrix::zeros(4, 4);
                for j in 0..4 {
                    let ax = alg
                        .product(&alg.basis_vector(a), &alg.basis_vector(j))
                        .unwrap();
                    let xa = alg
                        .product(&alg.basis_vector(j), &alg.basis_vector(a))
                        .unwrap();
                    for r in 0..4 {
                        m[(r, j)] = &ax[r] - &xa[r];
                    }
                }
                LinearMap::new(m).unwrap()
            })
            .collect();
        assert_eq!(map_span(4, &inner), map_span(4, &space));
    }

    #[test]
    fn matrix_algebra_has_no_antiderivations() {
        let alg = matrix_algebra_2x2();
        assert!(derivation_space(&alg, &DerivationProblem::new(rat(-1), rat(-1))).is_empty());
    }

    #[test]
    fn zero_product_algebra_everything_is_a_derivation() {
        let alg = Algebra::with_dim(2);
        assert_eq!(
            derivation_space(&alg, &DerivationProblem::new(rat(5), rat(7))).len(),
            4
        );
    }

    #[test]
    fn defect_reports_size_mismatch() {
        let alg = Algebra::with_dim(2);
        assert!(derivation_defect(
            &alg,
            &LinearMap::zero(3),
            &DerivationProblem::new(rat(1), rat(1))
        )
        .is_err());
        assert!(LinearMap::new(Matrix::zeros(2, 3)).is_err());
    }
}
