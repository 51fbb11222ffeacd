use num_traits::Zero;

use crate::exactla::{Matrix, Rational, Vector};

/// A linear subspace of `Q^n`, stored as the rref of a basis-rows matrix.
/// Two subspaces are equal iff their stored bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    /// Canonical span of arbitrary (possibly dependent) generators.
    pub fn span(ambient_dim: usize, generators: &[Vector]) -> Self {
        let rows: Vec<Vector> = generators
            .iter()
            .filter(|v| !v.iter().all(Zero::is_zero))
            .cloned()
            .collect();
        Subspace {
            ambient_dim,
            basis: Matrix::from_rows(&rows, ambient_dim).row_space_basis(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The canonical basis, one row per generator.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut gens = self.basis_vectors();
        gens.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, &gens)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim() == 0 || self.sum(other).dim() == self.dim()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.contains(&Subspace::span(self.ambient_dim, &[v.to_vec()]))
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn span_is_canonical() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[2, 0, 0]), v(&[0, 0, 0]), v(&[3, 5, 0])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains_vector(&v(&[7, -2, 0])));
        assert!(!a.contains_vector(&v(&[0, 0, 1])));
    }

    #[test]
    fn intersections() {
        let xy = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let yz = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(xy.intersection_dim(&yz), 1);
        assert_eq!(xy.sum(&yz), Subspace::whole(3));
        assert!(Subspace::whole(3).contains(&xy));
        assert!(xy.contains(&Subspace::zero(3)));
    }
}
