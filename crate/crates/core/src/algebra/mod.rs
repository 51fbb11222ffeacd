//! Finite-dimensional algebras given by structure constants.

mod family;
mod subspace;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{Rational, Vector};

pub use family::{
    build_family, family_associativity_conditions, FamilyCondition, FamilySpec, FamilySpecError,
};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("basis name `{0}` appears more than once")]
    DuplicateName(String),
    #[error("structure table has {got} entries, expected {expected}")]
    TableShape { expected: usize, got: usize },
    #[error("vector of length {got} in an algebra of dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// An algebra over the rationals. The product of basis elements `i` and `j`
/// is `sum_k c[i][j][k] * e_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    basis_names: Vec<String>,
    table: Vec<Rational>,
}

impl Algebra {
    /// The algebra with all products zero.
    pub fn zero_product(basis_names: Vec<String>) -> Result<Self, AlgebraError> {
        let n = basis_names.len();
        Self::from_table(basis_names, vec![Rational::zero(); n * n * n])
    }

    /// `table` is indexed `(i * dim + j) * dim + k`.
    pub fn from_table(
        basis_names: Vec<String>,
        table: Vec<Rational>,
    ) -> Result<Self, AlgebraError> {
        let n = basis_names.len();
        let mut seen = BTreeSet::new();
        for name in &basis_names {
            if !seen.insert(name.as_str()) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        if table.len() != n * n * n {
            return Err(AlgebraError::TableShape {
                expected: n * n * n,
                got: table.len(),
            });
        }
        Ok(Algebra { basis_names, table })
    }

    /// Basis named `e0, e1, ...`.
    pub fn with_dim(dim: usize) -> Self {
        Self::zero_product((0..dim).map(|i| format!("e{i}")).collect()).expect("distinct names")
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim();
        &self.table[(i * n + j) * n + k]
    }

    pub fn set_structure_constant(
        &mut self,
        i: usize,
        j: usize,
        k: usize,
        c: Rational,
    ) -> Result<(), AlgebraError> {
        let n = self.dim();
        for index in [i, j, k] {
            if index >= n {
                return Err(AlgebraError::IndexOutOfRange { index, dim: n });
            }
        }
        self.table[(i * n + j) * n + k] = c;
        Ok(())
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::from_integer(1.into());
        v
    }

    /// `e_i * e_j` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let n = self.dim();
        self.table[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    /// Nonzero structure constants as `(i, j, k, c)`, in index order.
    pub fn nonzero_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let n = self.dim();
        self.table
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / (n * n), (idx / n) % n, idx % n, c))
    }

    pub fn is_zero_product(&self) -> bool {
        self.table.iter().all(Zero::is_zero)
    }

    /// The bilinear extension of the structure table.
    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Result<Vector, AlgebraError> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let coeff = xi * yj;
                let base = (i * n + j) * n;
                for (k, c) in self.table[base..base + n].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &coeff * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks a multilinear identity on all basis tuples, which suffices by
    /// multilinearity. The witness is the lexicographically smallest failing
    /// index tuple.
    #[allow(clippy::needless_range_loop)]
    pub fn check_identity(&self, which: Identity) -> IdentityCheck {
        let n = self.dim();
        let products: Vec<Vec<Vector>> = (0..n)
            .map(|i| (0..n).map(|j| self.basis_product(i, j)).collect())
            .collect();
        // (sum_l v_l e_l) * e_k
        let right_mul = |v: &Vector, k: usize| -> Vector {
            let mut out = vec![Rational::zero(); n];
            for (l, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (m, p) in products[l][k].iter().enumerate() {
                    if !p.is_zero() {
                        out[m] += c * p;
                    }
                }
            }
            out
        };
        let left_mul = |k: usize, v: &Vector| -> Vector {
            let mut out = vec![Rational::zero(); n];
            for (l, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (m, p) in products[k][l].iter().enumerate() {
                    if !p.is_zero() {
                        out[m] += c * p;
                    }
                }
            }
            out
        };
        let fail = |indices: Vec<usize>| {
            IdentityCheck::Fail(IdentityWitness {
                identity: which,
                indices,
            })
        };

        match which {
            Identity::Associative => {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            if right_mul(&products[i][j], k) != left_mul(i, &products[j][k]) {
                                return fail(vec![i, j, k]);
                            }
                        }
                    }
                }
            }
            Identity::Commutative => {
                for i in 0..n {
                    for j in i + 1..n {
                        if products[i][j] != products[j][i] {
                            return fail(vec![i, j]);
                        }
                    }
                }
            }
            Identity::Anticommutative => {
                for i in 0..n {
                    for j in i..n {
                        let neg: Vector = products[j][i].iter().map(|c| -c).collect();
                        if products[i][j] != neg {
                            return fail(vec![i, j]);
                        }
                    }
                }
            }
            Identity::Jacobi(mode) => {
                let raw = match mode {
                    JacobiProduct::Raw => true,
                    JacobiProduct::Commutator => false,
                    JacobiProduct::Auto => self.check_identity(Identity::Anticommutative).is_pass(),
                };
                let bracket_basis = |i: usize, j: usize| -> Vector {
                    if raw {
                        products[i][j].clone()
                    } else {
                        sub(&products[i][j], &products[j][i])
                    }
                };
                // [v, e_k] for v in coordinates
                let bracket_right = |v: &Vector, k: usize| -> Vector {
                    if raw {
                        right_mul(v, k)
                    } else {
                        sub(&right_mul(v, k), &left_mul(k, v))
                    }
                };
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let a = bracket_right(&bracket_basis(i, j), k);
                            let b = bracket_right(&bracket_basis(j, k), i);
                            let c = bracket_right(&bracket_basis(k, i), j);
                            let sum: Vector = a
                                .iter()
                                .zip(&b)
                                .zip(&c)
                                .map(|((x, y), z)| x + y + z)
                                .collect();
                            if !sum.iter().all(Zero::is_zero) {
                                return fail(vec![i, j, k]);
                            }
                        }
                    }
                }
            }
        }
        IdentityCheck::Pass
    }
}

fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("basis", &self.basis_names)
            .field("nonzero_constants", &self.nonzero_constants().count())
            .finish()
    }
}

/// Which product the Jacobi check brackets with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum JacobiProduct {
    /// Raw product if the algebra is anticommutative, commutator otherwise.
    #[default]
    Auto,
    Raw,
    Commutator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    Associative,
    Commutative,
    Anticommutative,
    Jacobi(JacobiProduct),
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::Associative => "associative",
            Identity::Commutative => "commutative",
            Identity::Anticommutative => "anticommutative",
            Identity::Jacobi(_) => "jacobi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityWitness {
    pub identity: Identity,
    /// Basis indices: a pair for (anti)commutativity, a triple otherwise.
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityCheck {
    Pass,
    Fail(IdentityWitness),
}

impl IdentityCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, IdentityCheck::Pass)
    }
}

/// Span of all products `u_i * w_j` of basis vectors.
pub fn subspace_product(
    alg: &Algebra,
    u: &Subspace,
    w: &Subspace,
) -> Result<Subspace, AlgebraError> {
    let n = alg.dim();
    for s in [u, w] {
        if s.ambient_dim() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                got: s.ambient_dim(),
            });
        }
    }
    let mut generators = Vec::with_capacity(u.dim() * w.dim());
    for x in u.basis_vectors() {
        for y in w.basis_vectors() {
            generators.push(alg.product(&x, &y)?);
        }
    }
    Ok(Subspace::span(n, &generators))
}
