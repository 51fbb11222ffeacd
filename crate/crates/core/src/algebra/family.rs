//! The algebra `A(f_L, f_R, g_L, g_R)` on `Ke + Ka + V + V'`.
//!
//! Basis order is fixed: `e, a, v1..vn, v1'..vn'`. A map `f: V -> V` is a
//! matrix acting on column vectors, so column `j` of `f` is `f(v_j)`.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use super::Algebra;
use crate::exactla::{Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilySpecError {
    #[error("map {name} is {rows}x{cols}, expected {v_dim}x{v_dim}")]
    BadShape {
        name: &'static str,
        rows: usize,
        cols: usize,
        v_dim: usize,
    },
}

/// The four linear maps on `V` that define the family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    f_l: Matrix,
    f_r: Matrix,
    g_l: Matrix,
    g_r: Matrix,
}

impl FamilySpec {
    pub fn new(
        f_l: Matrix,
        f_r: Matrix,
        g_l: Matrix,
        g_r: Matrix,
    ) -> Result<Self, FamilySpecError> {
        let v_dim = f_l.rows();
        for (name, m) in [("f_L", &f_l), ("f_R", &f_r), ("g_L", &g_l), ("g_R", &g_r)] {
            if m.rows() != v_dim || m.cols() != v_dim {
                return Err(FamilySpecError::BadShape {
                    name,
                    rows: m.rows(),
                    cols: m.cols(),
                    v_dim,
                });
            }
        }
        Ok(FamilySpec { f_l, f_r, g_l, g_r })
    }

    /// All four maps equal to `f`.
    pub fn uniform(f: Matrix) -> Result<Self, FamilySpecError> {
        Self::new(f.clone(), f.clone(), f.clone(), f)
    }

    pub fn v_dim(&self) -> usize {
        self.f_l.rows()
    }

    pub fn f_l(&self) -> &Matrix {
        &self.f_l
    }

    pub fn f_r(&self) -> &Matrix {
        &self.f_r
    }

    pub fn g_l(&self) -> &Matrix {
        &self.g_l
    }

    pub fn g_r(&self) -> &Matrix {
        &self.g_r
    }

    pub fn maps(&self) -> [(&'static str, &Matrix); 4] {
        [
            ("f_L", &self.f_l),
            ("f_R", &self.f_r),
            ("g_L", &self.g_l),
            ("g_R", &self.g_r),
        ]
    }

    pub fn index_e(&self) -> usize {
        0
    }

    pub fn index_a(&self) -> usize {
        1
    }

    pub fn index_v(&self, i: usize) -> usize {
        2 + i
    }

    pub fn index_v_prime(&self, i: usize) -> usize {
        2 + self.v_dim() + i
    }

    /// Builds the algebra: `e^2 = e`, `a v = f_L(v)'`, `v a = f_R(v)'`,
    /// `a v' = g_L(v)`, `v' a = g_R(v)`, every other basis product zero.
    pub fn build(&self) -> Algebra {
        let n = self.v_dim();
        let mut names = vec!["e".to_string(), "a".to_string()];
        names.extend((1..=n).map(|i| format!("v{i}")));
        names.extend((1..=n).map(|i| format!("v{i}'")));
        let mut alg = Algebra::zero_product(names).expect("family basis names are distinct");
        let (e, a) = (self.index_e(), self.index_a());
        alg.set_structure_constant(e, e, e, Rational::one())
            .unwrap();
        for j in 0..n {
            for i in 0..n {
                let set = |alg: &mut Algebra, l: usize, r: usize, out: usize, c: &Rational| {
                    alg.set_structure_constant(l, r, out, c.clone()).unwrap();
                };
                set(
                    &mut alg,
                    a,
                    self.index_v(j),
                    self.index_v_prime(i),
                    &self.f_l[(i, j)],
                );
                set(
                    &mut alg,
                    self.index_v(j),
                    a,
                    self.index_v_prime(i),
                    &self.f_r[(i, j)],
                );
                set(
                    &mut alg,
                    a,
                    self.index_v_prime(j),
                    self.index_v(i),
                    &self.g_l[(i, j)],
                );
                set(
                    &mut alg,
                    self.index_v_prime(j),
                    a,
                    self.index_v(i),
                    &self.g_r[(i, j)],
                );
            }
        }
        alg
    }

    /// The six composition equations equivalent to associativity of
    /// [`FamilySpec::build`]. Returns the violated ones; empty means
    /// associative.
    pub fn associativity_conditions(&self) -> Vec<FamilyCondition> {
        let mul = |x: &Matrix, y: &Matrix| x.mul(y).expect("square maps of equal size");
        let zero = Matrix::zeros(self.v_dim(), self.v_dim());
        let checks = [
            (FamilyCondition::FlGlZero, mul(&self.f_l, &self.g_l) == zero),
            (FamilyCondition::GlFlZero, mul(&self.g_l, &self.f_l) == zero),
            (FamilyCondition::FrGrZero, mul(&self.f_r, &self.g_r) == zero),
            (FamilyCondition::GrFrZero, mul(&self.g_r, &self.f_r) == zero),
            (
                FamilyCondition::GrFlEqGlFr,
                mul(&self.g_r, &self.f_l) == mul(&self.g_l, &self.f_r),
            ),
            (
                FamilyCondition::FrGlEqFlGr,
                mul(&self.f_r, &self.g_l) == mul(&self.f_l, &self.g_r),
            ),
        ];
        checks
            .into_iter()
            .filter(|(_, holds)| !holds)
            .map(|(c, _)| c)
            .collect()
    }
}

/// Free-function form of [`FamilySpec::build`].
pub fn build_family(spec: &FamilySpec) -> Algebra {
    spec.build()
}

/// Free-function form of [`FamilySpec::associativity_conditions`].
pub fn family_associativity_conditions(spec: &FamilySpec) -> Vec<FamilyCondition> {
    spec.associativity_conditions()
}

/// One of the six composition equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyCondition {
    FlGlZero,
    GlFlZero,
    FrGrZero,
    GrFrZero,
    GrFlEqGlFr,
    FrGlEqFlGr,
}

impl fmt::Display for FamilyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyCondition::FlGlZero => "f_L∘g_L = 0",
            FamilyCondition::GlFlZero => "g_L∘f_L = 0",
            FamilyCondition::FrGrZero => "f_R∘g_R = 0",
            FamilyCondition::GrFrZero => "g_R∘f_R = 0",
            FamilyCondition::GrFlEqGlFr => "g_R∘f_L = g_L∘f_R",
            FamilyCondition::FrGlEqFlGr => "f_R∘g_L = f_L∘g_R",
        })
    }
}
