//! Workload builders shared by the criterion benches.

use nsgrade::algebra::Algebra;
use nsgrade::exactla::{rat, Matrix};
use nsgrade::{FamilySpec, PartialMagma};

/// The family algebra with every map equal to the `k x k` nilpotent shift.
pub fn shift_family(k: usize) -> Algebra {
    let mut f = Matrix::zeros(k, k);
    for i in 0..k.saturating_sub(1) {
        f[(i, i + 1)] = rat(1);
    }
    FamilySpec::uniform(f).expect("square").build()
}

/// A dense integer matrix with a known rational spectrum: upper triangular
/// with diagonal `1, -1, 2, -2, ...`.
pub fn triangular(n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let k = (i / 2 + 1) as i64;
        m[(i, i)] = rat(if i % 2 == 0 { k } else { -k });
        for j in i + 1..n {
            m[(i, j)] = rat(((i * 7 + j * 3) % 5) as i64 - 2);
        }
    }
    m
}

/// The cyclic group of order `n` with the products `0*g` removed.
pub fn punctured_cyclic(n: usize) -> PartialMagma {
    let cells: Vec<Option<usize>> = (0..n * n)
        .map(|i| {
            if i < n {
                None
            } else {
                Some((i / n + i % n) % n)
            }
        })
        .collect();
    PartialMagma::from_cells(n, &cells).expect("valid cells")
}
