//! Truncated Toeplitz matrices, shift operators, and unitary propagators on
//! the truncated Hardy space span{1, q, ..., q^K}.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{fourier_coeffs, HardyCoeffs, TorusFunction};

const HERMITIAN_TOL: f64 = 1e-10;

/// Compression of the Toeplitz operator T_u to the first K+1 Fourier modes;
/// entry (j, l) is û(j - l).
#[derive(Clone, Debug)]
pub struct ToeplitzMatrix {
    mat: DMatrix<Complex64>,
    order: usize,
}

impl ToeplitzMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }
}

pub fn toeplitz_matrix(u: &TorusFunction, order: usize) -> Result<ToeplitzMatrix> {
    let f = fourier_coeffs(u, order)?;
    let n = order + 1;
    let mat = DMatrix::from_fn(n, n, |j, l| f.get(j as i64 - l as i64));
    let dev = hermitian_deviation(&mat);
    if dev > HERMITIAN_TOL * (1.0 + u.sup_abs_bound()) {
        return Err(Error::NonHermitian(dev));
    }
    Ok(ToeplitzMatrix { mat, order })
}

fn hermitian_deviation(a: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for j in 0..a.nrows() {
        for l in j..a.ncols() {
            dev = dev.max((a[(j, l)] - a[(l, j)].conj()).norm());
        }
    }
    dev
}

/// Truncated shift S_r = T_{q^r}. Right shifts (r > 0) silently drop the top
/// r modes; left shifts annihilate the modes below index 0.
pub fn shift_apply(h: &HardyCoeffs, r: i64) -> HardyCoeffs {
    let n = h.c.len() as i64;
    let c = (0..n)
        .map(|k| {
            let src = k - r;
            if src >= 0 && src < n {
                h.c[src as usize]
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    HardyCoeffs { c }
}

/// Eigendecomposition of a Hermitian generator, reused to apply e^{iθA} for
/// many θ.
#[derive(Clone, Debug)]
pub struct HermitianPropagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
    label: String,
}

impl HermitianPropagator {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Dense matrix of e^{iθA}.
    pub fn exponential(&self, theta: f64) -> DMatrix<Complex64> {
        let phases = DVector::from_iterator(
            self.dim(),
            self.eigenvalues
                .iter()
                .map(|&l| Complex64::from_polar(1.0, theta * l)),
        );
        let mut scaled = self.eigenvectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        &scaled * self.eigenvectors.adjoint()
    }
}

/// Full eigendecomposition with ascending eigenvalues and deterministic
/// eigenvector phases.
pub fn build_propagator(a: &DMatrix<Complex64>, label: &str) -> Result<HermitianPropagator> {
    let dev = hermitian_deviation(a);
    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian(dev));
    }
    // symmetrize to wash out representational round-off before decomposing
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap()
            .then_with(|| {
                phase_key(&eig.eigenvectors.column(i).into_owned())
                    .partial_cmp(&phase_key(&eig.eigenvectors.column(j).into_owned()))
                    .unwrap()
            })
    });
    let eigenvalues = DVector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (j, &i) in idx.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).into_owned();
        // rotate so the first significant component is positive real
        if let Some(p) = col.iter().find(|z| z.norm() > 1e-12) {
            let phase = p / p.norm();
            col /= phase;
        }
        eigenvectors.set_column(j, &col);
    }
    Ok(HermitianPropagator {
        eigenvalues,
        eigenvectors,
        label: label.to_string(),
    })
}

fn phase_key(col: &DVector<Complex64>) -> f64 {
    col.iter()
        .find(|z| z.norm() > 1e-12)
        .map(|z| z.arg())
        .unwrap_or(0.0)
}

/// e^{iθA} h via the stored eigendecomposition.
pub fn propagate(p: &HermitianPropagator, theta: f64, h: &HardyCoeffs) -> HardyCoeffs {
    assert_eq!(p.dim(), h.c.len(), "propagator/vector dimension mismatch");
    let v = DVector::from_column_slice(&h.c);
    let mut w = p.eigenvectors.adjoint() * v;
    for (j, val) in w.iter_mut().enumerate() {
        *val *= Complex64::from_polar(1.0, theta * p.eigenvalues[j]);
    }
    let out = &p.eigenvectors * w;
    HardyCoeffs {
        c: out.iter().copied().collect(),
    }
}

/// The truncated generator 2εD - 2T_{u}; ε = 0 gives -2T_u.
pub fn bo_generator(u: &TorusFunction, epsilon: f64, order: usize) -> Result<DMatrix<Complex64>> {
    assert!(epsilon >= 0.0, "epsilon must be nonnegative");
    let t = toeplitz_matrix(u, order)?;
    let mut g = t.mat * Complex64::new(-2.0, 0.0);
    for k in 0..=order {
        g[(k, k)] += Complex64::new(2.0 * epsilon * k as f64, 0.0);
    }
    Ok(g)
}
