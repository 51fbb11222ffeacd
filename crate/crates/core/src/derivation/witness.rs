//! Non-associativity witnesses in gradings induced by `(delta, gamma)`-derivations.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{DerivationProblem, Grading};
use crate::exactla::Rational;

/// Weights `lambda, eta, mu` with `theta = lambda * eta` and `xi = eta * mu`
/// such that both `theta * mu` and `lambda * xi` are defined and differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonAssocWitness {
    pub lambda: Rational,
    pub eta: Rational,
    pub mu: Rational,
    pub theta: Rational,
    pub xi: Rational,
    /// `(lambda * eta) * mu`
    pub left: Rational,
    /// `lambda * (eta * mu)`
    pub right: Rational,
}

/// `(delta^2 - delta) lambda != (gamma^2 - gamma) mu`
fn inequality_holds(prob: &DerivationProblem, lambda: &Rational, mu: &Rational) -> bool {
    let d = &prob.delta;
    let g = &prob.gamma;
    (d * d - d) * lambda != (g * g - g) * mu
}

/// First triple in weight enumeration order (lexicographic on
/// `(lambda, eta, mu)`) for which both bracketings are defined, the
/// inequality `(delta^2 - delta) lambda != (gamma^2 - gamma) mu` holds, and
/// the bracketings read from the table really differ.
pub fn find_nonassoc_witness(
    grading: &Grading,
    prob: &DerivationProblem,
) -> Option<NonAssocWitness> {
    let ws = grading.weights();
    for lambda in ws {
        for eta in ws {
            let Some(theta) = grading.product(lambda, eta) else {
                continue;
            };
            for mu in ws {
                let Some(left) = grading.product(theta, mu) else {
                    continue;
                };
                let Some(xi) = grading.product(eta, mu) else {
                    continue;
                };
                let Some(right) = grading.product(lambda, xi) else {
                    continue;
                };
                if inequality_holds(prob, lambda, mu) && left != right {
                    return Some(NonAssocWitness {
                        lambda: lambda.clone(),
                        eta: eta.clone(),
                        mu: mu.clone(),
                        theta: theta.clone(),
                        xi: xi.clone(),
                        left: left.clone(),
                        right: right.clone(),
                    });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryCase {
    /// `delta = gamma` not in `{0, 1}` and `lambda != mu`.
    HeadingI,
    /// `delta != gamma`, `delta + gamma != 1` and `lambda = mu != 0`.
    HeadingII,
    Neither,
}

pub fn corollary_check(
    prob: &DerivationProblem,
    lambda: &Rational,
    mu: &Rational,
) -> CorollaryCase {
    let (d, g) = (&prob.delta, &prob.gamma);
    if d == g && !d.is_zero() && !d.is_one() && lambda != mu {
        CorollaryCase::HeadingI
    } else if d != g && !(d + g).is_one() && lambda == mu && !lambda.is_zero() {
        CorollaryCase::HeadingII
    } else {
        CorollaryCase::Neither
    }
}
