//! Dense operators on a register of equal-dimension sites.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::subset::{Bipartition, PartySubset};

/// A square matrix acting on `parties.len()` sites of dimension `local_dim`.
///
/// `parties` records which parties of the parent state the sites stand for;
/// site `s` of the operator is party `parties[s]` (zero-based). Operators
/// produced by partial traces are Hermitian with unit trace, but general
/// superoperator outputs need not be positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    parties: Vec<usize>,
    local_dim: usize,
    matrix: DMatrix<Complex64>,
}

/// A Hermitian, unit-trace operator obtained from a pure state.
pub type DensityOperator = Operator;

impl Operator {
    pub fn new(parties: Vec<usize>, local_dim: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = local_dim.pow(parties.len() as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return domain(format!(
                "operator on {} sites of dimension {} must be {dim}x{dim}, got {}x{}",
                parties.len(),
                local_dim,
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        Ok(Operator {
            parties,
            local_dim,
            matrix,
        })
    }

    /// Operator on sites labelled `0..n`.
    pub fn on_sites(n: usize, local_dim: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::new((0..n).collect(), local_dim, matrix)
    }

    pub fn identity(n: usize, local_dim: usize) -> Self {
        let dim = local_dim.pow(n as u32);
        Operator {
            parties: (0..n).collect(),
            local_dim,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn n_sites(&self) -> usize {
        self.parties.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Hilbert-Schmidt inner product Tr(self† other).
    pub fn hs_inner(&self, other: &Operator) -> Complex64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol))
    }

    pub fn scaled(&self, factor: f64) -> Operator {
        Operator {
            matrix: self.matrix.map(|z| z * factor),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix + &other.matrix,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        Operator {
            matrix: &self.matrix * &other.matrix,
            ..self.clone()
        }
    }

    /// `(Tr_T op) ⊗ 1_T` with the identity re-embedded at the traced sites,
    /// where `traced` is a mask over the operator's own site positions.
    pub fn trace_out_reembed(&self, traced: PartySubset) -> Operator {
        let n = self.n_sites();
        let d = self.local_dim;
        let bp = Bipartition::new(n, d, traced);
        let compose = bp.compose();
        let (dt, dr) = (bp.dim_in, bp.dim_out);
        // reduced operator on the untraced sites
        let mut reduced = DMatrix::<Complex64>::zeros(dr, dr);
        for r1 in 0..dr {
            for r2 in 0..dr {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..dt {
                    acc += self.matrix[(compose[t * dr + r1], compose[t * dr + r2])];
                }
                reduced[(r1, r2)] = acc;
            }
        }
        let dim = self.dim();
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                if bp.inner[i] == bp.inner[j] {
                    out[(i, j)] = reduced[(bp.outer[i], bp.outer[j])];
                }
            }
        }
        Operator {
            matrix: out,
            ..self.clone()
        }
    }
}
