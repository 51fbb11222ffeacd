//! Closed-form parametrization of the `(delta, gamma)`-derivations of the
//! family `A(f_L, f_R, g_L, g_R)` when all four maps are nonzero and
//! `(delta, gamma) != (0, 0)`:
//!
//! ```text
//! D(e)  = beta e            (beta = 0 unless delta + gamma = 1)
//! D(a)  = alpha a + v_a + w_a'
//! D(v)  = phi(v) + psi(v)'
//! D(v') = phi~(v) + psi~(v)'
//! ```
//!
//! subject to two kernel conditions on `v_a`, `w_a` and eight composition
//! conditions linking `phi, psi, phi~, psi~` with `alpha`.

use num_traits::{One, Zero};
use thiserror::Error;

use super::{DerivationProblem, LinearMap};
use crate::algebra::FamilySpec;
use crate::exactla::{Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Lemma2Error {
    #[error("map {0} is zero; the closed form requires all four maps nonzero")]
    ZeroMap(&'static str),
    #[error("(delta, gamma) = (0, 0) is excluded from the closed form")]
    TrivialProblem,
    #[error("solution blocks do not match v_dim = {0}")]
    DimensionMismatch(usize),
}

/// Parameters of one derivation in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Solution {
    pub alpha: Rational,
    pub beta: Rational,
    pub v_a: Vec<Rational>,
    pub w_a: Vec<Rational>,
    pub phi: Matrix,
    pub psi: Matrix,
    pub phi_tilde: Matrix,
    pub psi_tilde: Matrix,
}

impl Lemma2Solution {
    pub fn zero(v_dim: usize) -> Self {
        Lemma2Solution {
            alpha: Rational::zero(),
            beta: Rational::zero(),
            v_a: vec![Rational::zero(); v_dim],
            w_a: vec![Rational::zero(); v_dim],
            phi: Matrix::zeros(v_dim, v_dim),
            psi: Matrix::zeros(v_dim, v_dim),
            phi_tilde: Matrix::zeros(v_dim, v_dim),
            psi_tilde: Matrix::zeros(v_dim, v_dim),
        }
    }
}

/// Positions of the unknowns in the flat system.
struct Layout {
    n: usize,
    beta_free: bool,
}

#[derive(Clone, Copy)]
enum Block {
    Phi,
    Psi,
    PhiTilde,
    PsiTilde,
}

impl Layout {
    fn alpha(&self) -> usize {
        0
    }

    fn beta(&self) -> Option<usize> {
        self.beta_free.then_some(1)
    }

    fn base(&self) -> usize {
        1 + usize::from(self.beta_free)
    }

    fn v_a(&self, i: usize) -> usize {
        self.base() + i
    }

    fn w_a(&self, i: usize) -> usize {
        self.base() + self.n + i
    }

    fn block(&self, b: Block, i: usize, j: usize) -> usize {
        let n = self.n;
        let offset = match b {
            Block::Phi => 0,
            Block::Psi => 1,
            Block::PhiTilde => 2,
            Block::PsiTilde => 3,
        };
        self.base() + 2 * n + offset * n * n + i * n + j
    }

    fn len(&self) -> usize {
        self.base() + 2 * self.n + 4 * self.n * self.n
    }
}

/// One term of a matrix equation `sum of terms = 0`.
enum Term<'a> {
    /// `s * X∘F`
    UnknownThenKnown(Rational, Block, &'a Matrix),
    /// `s * F∘X`
    KnownThenUnknown(Rational, &'a Matrix, Block),
    /// `s * alpha * F`
    Alpha(Rational, &'a Matrix),
}

fn push_matrix_equation(layout: &Layout, terms: &[Term<'_>], rows: &mut Vec<Vec<Rational>>) {
    let n = layout.n;
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Rational::zero(); layout.len()];
            for term in terms {
                match term {
                    Term::UnknownThenKnown(s, x, f) => {
                        for k in 0..n {
                            row[layout.block(*x, i, k)] += s * &f[(k, j)];
                        }
                    }
                    Term::KnownThenUnknown(s, f, x) => {
                        for k in 0..n {
                            row[layout.block(*x, k, j)] += s * &f[(i, k)];
                        }
                    }
                    Term::Alpha(s, f) => row[layout.alpha()] += s * &f[(i, j)],
                }
            }
            if !row.iter().all(Zero::is_zero) {
                rows.push(row);
            }
        }
    }
}

fn check_hypotheses(spec: &FamilySpec, prob: &DerivationProblem) -> Result<(), Lemma2Error> {
    for (name, m) in spec.maps() {
        if m.is_zero() {
            return Err(Lemma2Error::ZeroMap(name));
        }
    }
    if prob.delta.is_zero() && prob.gamma.is_zero() {
        return Err(Lemma2Error::TrivialProblem);
    }
    Ok(())
}

/// Basis of the solution space of the closed-form conditions, solved as one
/// homogeneous system in `alpha, [beta], v_a, w_a, phi, psi, phi~, psi~`.
pub fn lemma2_solution_space(
    spec: &FamilySpec,
    prob: &DerivationProblem,
) -> Result<Vec<Lemma2Solution>, Lemma2Error> {
    check_hypotheses(spec, prob)?;
    let n = spec.v_dim();
    let layout = Layout {
        n,
        beta_free: (&prob.delta + &prob.gamma).is_one(),
    };
    let (d, g) = (prob.delta.clone(), prob.gamma.clone());
    let one = Rational::one();
    let (fl, fr, gl, gr) = (spec.f_l(), spec.f_r(), spec.g_l(), spec.g_r());
    let mut rows = Vec::new();

    // (delta f_R + gamma f_L)(v_a) = 0 and (delta g_R + gamma g_L)(w_a) = 0
    let kernel_f = fr.scale(&d).add(&fl.scale(&g)).expect("same shape");
    let kernel_g = gr.scale(&d).add(&gl.scale(&g)).expect("same shape");
    for i in 0..n {
        let mut row_v = vec![Rational::zero(); layout.len()];
        let mut row_w = vec![Rational::zero(); layout.len()];
        for k in 0..n {
            row_v[layout.v_a(k)] = kernel_f[(i, k)].clone();
            row_w[layout.w_a(k)] = kernel_g[(i, k)].clone();
        }
        for row in [row_v, row_w] {
            if !row.iter().all(Zero::is_zero) {
                rows.push(row);
            }
        }
    }

    use Block::*;
    use Term::*;
    let equations: [Vec<Term<'_>>; 8] = [
        // phi~ f_L = gamma g_L psi
        vec![
            UnknownThenKnown(one.clone(), PhiTilde, fl),
            KnownThenUnknown(-g.clone(), gl, Psi),
        ],
        // psi~ f_L = delta alpha f_L + gamma f_L phi
        vec![
            UnknownThenKnown(one.clone(), PsiTilde, fl),
            Alpha(-d.clone(), fl),
            KnownThenUnknown(-g.clone(), fl, Phi),
        ],
        // phi~ f_R = delta g_R psi
        vec![
            UnknownThenKnown(one.clone(), PhiTilde, fr),
            KnownThenUnknown(-d.clone(), gr, Psi),
        ],
        // psi~ f_R = gamma alpha f_R + delta f_R phi
        vec![
            UnknownThenKnown(one.clone(), PsiTilde, fr),
            Alpha(-g.clone(), fr),
            KnownThenUnknown(-d.clone(), fr, Phi),
        ],
        // phi g_L = delta alpha g_L + gamma g_L psi~
        vec![
            UnknownThenKnown(one.clone(), Phi, gl),
            Alpha(-d.clone(), gl),
            KnownThenUnknown(-g.clone(), gl, PsiTilde),
        ],
        // psi g_L = gamma f_L phi~
        vec![
            UnknownThenKnown(one.clone(), Psi, gl),
            KnownThenUnknown(-g.clone(), fl, PhiTilde),
        ],
        // phi g_R = gamma alpha g_R + delta g_R psi~
        vec![
            UnknownThenKnown(one.clone(), Phi, gr),
            Alpha(-g.clone(), gr),
            KnownThenUnknown(-d.clone(), gr, PsiTilde),
        ],
        // psi g_R = delta f_R phi~
        vec![
            UnknownThenKnown(one.clone(), Psi, gr),
            KnownThenUnknown(-d.clone(), fr, PhiTilde),
        ],
    ];
    for eq in &equations {
        push_matrix_equation(&layout, eq, &mut rows);
    }

    let solutions = Matrix::from_rows(&rows, layout.len()).nullspace();
    Ok(solutions
        .into_iter()
        .map(|x| {
            let block = |b: Block| {
                let mut m = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = x[layout.block(b, i, j)].clone();
                    }
                }
                m
            };
            Lemma2Solution {
                alpha: x[layout.alpha()].clone(),
                beta: layout.beta().map_or_else(Rational::zero, |b| x[b].clone()),
                v_a: (0..n).map(|i| x[layout.v_a(i)].clone()).collect(),
                w_a: (0..n).map(|i| x[layout.w_a(i)].clone()).collect(),
                phi: block(Phi),
                psi: block(Psi),
                phi_tilde: block(PhiTilde),
                psi_tilde: block(PsiTilde),
            }
        })
        .collect())
}

/// Realizes a closed-form solution as a matrix in the family basis
/// `e, a, v1..vn, v1'..vn'`. `beta` is dropped unless `delta + gamma = 1`.
pub fn assemble(
    sol: &Lemma2Solution,
    spec: &FamilySpec,
    prob: &DerivationProblem,
) -> Result<LinearMap, Lemma2Error> {
    let n = spec.v_dim();
    let square_ok = [&sol.phi, &sol.psi, &sol.phi_tilde, &sol.psi_tilde]
        .iter()
        .all(|m| m.rows() == n && m.cols() == n);
    if !square_ok || sol.v_a.len() != n || sol.w_a.len() != n {
        return Err(Lemma2Error::DimensionMismatch(n));
    }
    let mut m = Matrix::zeros(2 + 2 * n, 2 + 2 * n);
    let (e, a) = (spec.index_e(), spec.index_a());
    if (&prob.delta + &prob.gamma).is_one() {
        m[(e, e)] = sol.beta.clone();
    }
    m[(a, a)] = sol.alpha.clone();
    for i in 0..n {
        m[(spec.index_v(i), a)] = sol.v_a[i].clone();
        m[(spec.index_v_prime(i), a)] = sol.w_a[i].clone();
        for j in 0..n {
            m[(spec.index_v(i), spec.index_v(j))] = sol.phi[(i, j)].clone();
            m[(spec.index_v_prime(i), spec.index_v(j))] = sol.psi[(i, j)].clone();
            m[(spec.index_v(i), spec.index_v_prime(j))] = sol.phi_tilde[(i, j)].clone();
            m[(spec.index_v_prime(i), spec.index_v_prime(j))] = sol.psi_tilde[(i, j)].clone();
        }
    }
    Ok(LinearMap::new(m).expect("square by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{derivation_space, is_derivation, map_span};
    use crate::exactla::rat;

    fn nilpotent_spec() -> FamilySpec {
        FamilySpec::uniform(Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap()
    }

    fn anti() -> DerivationProblem {
        DerivationProblem::new(rat(-1), rat(-1))
    }

    fn example_solution() -> Lemma2Solution {
        let mut s = Lemma2Solution::zero(2);
        s.phi = Matrix::identity(2);
        s.psi_tilde = Matrix::scalar(2, rat(-1));
        s
    }

    #[test]
    fn example_specialization_assembles_to_diagonal() {
        let d = assemble(&example_solution(), &nilpotent_spec(), &anti()).unwrap();
        assert_eq!(
            d.matrix(),
            &Matrix::diagonal(&[rat(0), rat(0), rat(1), rat(1), rat(-1), rat(-1)])
        );
    }

    #[test]
    fn example_specialization_in_solution_space() {
        let spec = nilpotent_spec();
        let sols = lemma2_solution_space(&spec, &anti()).unwrap();
        let maps: Vec<LinearMap> = sols
            .iter()
            .map(|s| assemble(s, &spec, &anti()).unwrap())
            .collect();
        let target = assemble(&example_solution(), &spec, &anti()).unwrap();
        assert!(map_span(6, &maps).contains_vector(&target.flatten()));
    }

    #[test]
    fn zero_solution_assembles_to_zero_map() {
        let d = assemble(&Lemma2Solution::zero(2), &nilpotent_spec(), &anti()).unwrap();
        assert!(d.matrix().is_zero());
    }

    #[test]
    fn matches_generic_solver_on_example_spec() {
        let spec = nilpotent_spec();
        for prob in [
            anti(),
            DerivationProblem::new(rat(1), rat(0)),
            DerivationProblem::new(rat(2), rat(-1)),
        ] {
            let sols = lemma2_solution_space(&spec, &prob).unwrap();
            let maps: Vec<LinearMap> = sols
                .iter()
                .map(|s| assemble(s, &spec, &prob).unwrap())
                .collect();
            for m in &maps {
                assert!(is_derivation(&spec.build(), m, &prob));
            }
            assert_eq!(
                map_span(6, &maps),
                map_span(6, &derivation_space(&spec.build(), &prob))
            );
        }
    }

    #[test]
    fn hypotheses_enforced() {
        let z = Matrix::zeros(2, 2);
        let f = Matrix::identity(2);
        let spec = FamilySpec::new(f.clone(), f.clone(), z, f).unwrap();
        assert_eq!(
            lemma2_solution_space(&spec, &anti()).unwrap_err(),
            Lemma2Error::ZeroMap("g_L")
        );
        let trivial = DerivationProblem::new(rat(0), rat(0));
        assert_eq!(
            lemma2_solution_space(&nilpotent_spec(), &trivial).unwrap_err(),
            Lemma2Error::TrivialProblem
        );
    }

    #[test]
    fn assemble_rejects_mismatched_blocks() {
        assert!(assemble(&Lemma2Solution::zero(3), &nilpotent_spec(), &anti()).is_err());
    }
}
