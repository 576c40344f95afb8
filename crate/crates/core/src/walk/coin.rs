use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `‖U†U − I‖_max` for matrices built by this module.
pub const CONSTRUCTED_UNITARITY_TOL: f64 = 1e-12;
/// Tolerance on `‖U†U − I‖_max` accepted for user-supplied matrices.
pub const EXPLICIT_UNITARITY_TOL: f64 = 1e-9;

/// The coupler unitary acting on the cavity (coin) index.
///
/// For a `D`-dimensional lattice there are `2D` cavities and the coin is a
/// `2D × 2D` unitary. Row index is the outgoing cavity, column the incoming one.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpec {
    dims: usize,
    matrix: DMatrix<Complex64>,
    bias: Option<f64>,
}

/// Construction rule for [`multiport_coin`].
#[derive(Debug, Clone)]
pub enum CoinRule {
    Explicit(DMatrix<Complex64>),
    Fourier,
}

impl CoinSpec {
    /// Symmetric beam-splitter coin `[[√η, i√(1−η)], [i√(1−η), √η]]`.
    ///
    /// `eta` is the coupler reflectivity, i.e. the probability of staying in
    /// the current cavity.
    pub fn from_bias(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
            return Err(Error::Domain(format!("coin bias {eta} outside [0, 1]")));
        }
        let stay = Complex64::new(eta.sqrt(), 0.0);
        let hop = Complex64::new(0.0, (1.0 - eta).sqrt());
        let matrix = DMatrix::from_row_slice(2, 2, &[stay, hop, hop, stay]);
        Ok(CoinSpec {
            dims: 1,
            matrix,
            bias: Some(eta),
        })
    }

    /// Discrete Fourier unitary `F_jk = exp(2πi·jk/2D)/√(2D)`.
    pub fn fourier(dims: usize) -> Result<Self> {
        if dims == 0 {
            return Err(Error::Domain("lattice dimension must be >= 1".into()));
        }
        let n = 2 * dims;
        let scale = 1.0 / (n as f64).sqrt();
        let matrix = DMatrix::from_fn(n, n, |j, k| {
            let phase = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
            Complex64::from_polar(scale, phase)
        });
        Ok(CoinSpec {
            dims,
            matrix,
            bias: None,
        })
    }

    pub fn from_matrix(dims: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::Domain("lattice dimension must be >= 1".into()));
        }
        let n = 2 * dims;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Validation(format!(
                "coin for D={dims} must be {n}x{n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let err = unitarity_error(&matrix);
        if !(err <= EXPLICIT_UNITARITY_TOL) {
            return Err(Error::Validation(format!(
                "coin matrix is not unitary: max |U†U - I| = {err:.3e}"
            )));
        }
        Ok(CoinSpec {
            dims,
            matrix,
            bias: None,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Number of cavities, `2D`.
    pub fn cavities(&self) -> usize {
        2 * self.dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn bias(&self) -> Option<f64> {
        self.bias
    }

    /// `U[to, from]`.
    pub fn element(&self, to: usize, from: usize) -> Complex64 {
        self.matrix[(to, from)]
    }

    /// Probability that a pulse in `cavity` remains there at a coupler pass.
    pub fn stay_probability(&self, cavity: usize) -> f64 {
        self.matrix[(cavity, cavity)].norm_sqr()
    }

    /// `|U[to, from]|²`, the transition matrix of the incoherent walk.
    pub fn transition_probabilities(&self) -> DMatrix<f64> {
        self.matrix.map(|z| z.norm_sqr())
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.matrix)
    }
}

/// `max |(U†U − I)_ij|`.
pub fn unitarity_error(matrix: &DMatrix<Complex64>) -> f64 {
    if matrix.nrows() != matrix.ncols() {
        return f64::INFINITY;
    }
    let product = matrix.adjoint() * matrix;
    let mut worst = 0.0f64;
    for i in 0..product.nrows() {
        for j in 0..product.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (product[(i, j)] - Complex64::new(target, 0.0)).norm();
            worst = worst.max(if dev.is_nan() { f64::INFINITY } else { dev });
        }
    }
    worst
}

pub fn coin_from_bias(eta: f64) -> Result<CoinSpec> {
    CoinSpec::from_bias(eta)
}

pub fn multiport_coin(dims: usize, rule: CoinRule) -> Result<CoinSpec> {
    match rule {
        CoinRule::Fourier => CoinSpec::fourier(dims),
        CoinRule::Explicit(m) => CoinSpec::from_matrix(dims, m),
    }
}
