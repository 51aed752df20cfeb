//! Dense complex operators on small Hilbert spaces.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::PureState;
use crate::tol;

/// A dense complex square matrix on a 2^n-dimensional spin Hilbert space.
///
/// Used for Hamiltonians (Hermitian to [`tol::HERMITICITY`]) and propagators
/// (unitary to [`tol::UNITARITY`]); the tolerances are enforced at the points
/// of use, not at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: Array2<C64>,
}

impl Operator {
    /// Wrap a square matrix.
    pub fn from_matrix(m: Array2<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: Array2::eye(dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.m
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<C64> {
        &mut self.m
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.m
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Array2::zeros((self.dim(), self.dim()));
        for ((i, j), v) in self.m.indexed_iter() {
            out[[j, i]] = v.conj();
        }
        Self { m: out }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self { m: self.m.dot(&rhs.m) })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self { m: &self.m + &rhs.m })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self { m: &self.m - &rhs.m })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { m: self.m.mapv(|v| v * c) }
    }

    pub fn trace(&self) -> C64 {
        self.m.diag().sum()
    }

    /// Apply to a state vector.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch(self.dim(), psi.dim()));
        }
        PureState::from_amplitudes_unchecked(self.m.dot(psi.amplitudes()))
    }

    /// Max elementwise |self - rhs|.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.m
            .iter()
            .zip(rhs.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Max elementwise |H - H†|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                worst = worst.max((self.m[[i, j]] - self.m[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Max elementwise |U†U - I|.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.dagger().m.dot(&self.m);
        let mut worst = 0.0f64;
        for ((i, j), v) in prod.indexed_iter() {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((v - target).norm());
        }
        worst
    }

    /// Eigendecomposition of a Hermitian operator: ascending eigenvalues and
    /// the unitary of column eigenvectors.
    ///
    /// The backing LAPACK route can hand back the elementwise-conjugated
    /// eigenvector matrix for complex Hermitian input (row-major/column-major
    /// mismatch); both candidates are checked against the eigen-residual and
    /// the correct one is returned.
    pub fn eigh(&self) -> Result<(Array1<f64>, Array2<C64>)> {
        let herm = self.hermiticity_error();
        if herm > tol::HERMITICITY {
            return Err(Error::NotHermitian(herm));
        }
        let (evals, vecs) = self
            .m
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigen(e.to_string()))?;
        let residual = |v: &Array2<C64>| -> f64 {
            let hv = self.m.dot(v);
            let mut worst = 0.0f64;
            for (j, lam) in evals.iter().enumerate() {
                for i in 0..v.nrows() {
                    worst = worst.max((hv[[i, j]] - v[[i, j]] * lam).norm());
                }
            }
            worst
        };
        let conjugated = vecs.mapv(|v| v.conj());
        let (r_plain, r_conj) = (residual(&vecs), residual(&conjugated));
        let (vecs, best) = if r_conj < r_plain { (conjugated, r_conj) } else { (vecs, r_plain) };
        let scale = self.max_abs().max(1.0);
        if best > 1e-8 * scale {
            return Err(Error::Eigen(format!("eigen residual {best:.3e} for scale {scale:.3e}")));
        }
        Ok((evals, vecs))
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        Ok(())
    }
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    ab.sub(&ba)
}

/// Gate fidelity |Tr(u†v)| / d, invariant under a global phase on either
/// argument. Both inputs must be unitary to [`tol::GATE_FIDELITY_UNITARITY`].
pub fn gate_fidelity(u: &Operator, v: &Operator) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    for op in [u, v] {
        let err = op.unitarity_error();
        if err > tol::GATE_FIDELITY_UNITARITY {
            return Err(Error::NotUnitary(err));
        }
    }
    let tr = u.dagger().mul(v)?.trace();
    Ok(tr.norm() / u.dim() as f64)
}
