//! The zero-dispersion limit and the small-dispersion solution evaluated
//! through the explicit spectral formulas on the truncated Hardy space.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{
    fourier_coeffs, reconstruct_real, szego_project, HardyCoeffs, TorusFunction,
};
use crate::toeplitz::{bo_generator, build_propagator, propagate, shift_apply, HermitianPropagator};

/// Highest mode trusted for a given truncation order. Each left shift
/// consumes one mode and the compression pollutes the top band; the K/8
/// margin is validated empirically by the acceptance suite.
pub fn k_trust(order: usize) -> usize {
    order / 8
}

/// One eigendecomposition per (u0, ε, K), reused across all t, k and z.
pub struct ZdEvaluator {
    propagator: HermitianPropagator,
    hardy_u0: HardyCoeffs,
    epsilon: f64,
    order: usize,
}

impl ZdEvaluator {
    pub fn new(u0: &TorusFunction, epsilon: f64, order: usize) -> Result<Self> {
        let g = bo_generator(u0, epsilon, order)?;
        let label = if epsilon == 0.0 {
            "-2T".to_string()
        } else {
            format!("2eD-2T (e={epsilon})")
        };
        let propagator = build_propagator(&g, &label)?;
        let hardy_u0 = szego_project(&fourier_coeffs(u0, order)?);
        Ok(ZdEvaluator {
            propagator,
            hardy_u0,
            epsilon,
            order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn k_trust(&self) -> usize {
        k_trust(self.order)
    }

    /// Fourier coefficients c_k = e^{iεkt} <(e^{it(2εD-2T)} S*)^k Πu0, 1> for
    /// k = 0..=k_max, computed by chaining the k applications.
    pub fn coefficients(&self, t: f64, k_max: usize) -> Result<Vec<Complex64>> {
        if k_max > self.k_trust() {
            return Err(Error::UntrustedMode {
                k: k_max,
                k_trust: self.k_trust(),
                order: self.order,
            });
        }
        let mut out = Vec::with_capacity(k_max + 1);
        let mut h = self.hardy_u0.clone();
        out.push(h.c[0]);
        for k in 1..=k_max {
            h = propagate(&self.propagator, t, &shift_apply(&h, -1));
            let phase = Complex64::from_polar(1.0, self.epsilon * k as f64 * t);
            out.push(phase * h.c[0]);
        }
        Ok(out)
    }

    pub fn coefficient(&self, t: f64, k: usize) -> Result<Complex64> {
        Ok(*self.coefficients(t, k)?.last().unwrap())
    }

    /// F(t, z) = <(id - z e^{itA} S*)^{-1} Πu0, 1> by dense linear solve.
    pub fn resolvent(&self, t: f64, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisc(z.norm()));
        }
        let n = self.order + 1;
        let u = self.propagator.exponential(t);
        // columns of U S*: (U S* h)_j = Σ_l U_{j,l} h_{l+1}
        let mut m = DMatrix::identity(n, n);
        for j in 0..n {
            for l in 1..n {
                m[(j, l)] -= z * u[(j, l - 1)];
            }
        }
        let rhs = DVector::from_column_slice(&self.hardy_u0.c);
        let lu = m.lu();
        let f = lu
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidArgument("resolvent solve failed".into()))?;
        Ok(f[0])
    }
}

/// <(e^{-2itT}S*)^k Πu0, 1>, the k-th Fourier coefficient of the
/// zero-dispersion limit.
pub fn zd_coefficient(u0: &TorusFunction, t: f64, k: usize, order: usize) -> Result<Complex64> {
    ZdEvaluator::new(u0, 0.0, order)?.coefficient(t, k)
}

/// e^{iεkt} <(e^{2it(εD-T)}S*)^k Πu0, 1>, the k-th coefficient of the
/// small-dispersion solution.
pub fn bo_epsilon_coefficient(
    u0: &TorusFunction,
    epsilon: f64,
    t: f64,
    k: usize,
    order: usize,
) -> Result<Complex64> {
    assert!(epsilon > 0.0, "epsilon must be positive; use zd_coefficient at 0");
    ZdEvaluator::new(u0, epsilon, order)?.coefficient(t, k)
}

/// Physical-space profile of the zero-dispersion limit assembled from the
/// spectral coefficients up to k_max.
pub fn zd_profile(
    u0: &TorusFunction,
    t: f64,
    order: usize,
    k_max: usize,
) -> Result<TorusFunction> {
    let ev = ZdEvaluator::new(u0, 0.0, order)?;
    let coeffs = ev.coefficients(t, k_max)?;
    reconstruct_real(&HardyCoeffs { c: coeffs })
}

/// F_ZD(t, z) through the resolvent form.
pub fn resolvent_hardy(
    u0: &TorusFunction,
    t: f64,
    z: Complex64,
    order: usize,
) -> Result<Complex64> {
    ZdEvaluator::new(u0, 0.0, order)?.resolvent(t, z)
}

/// Coefficient table (epsilon, k, Re, Im) for the dispersive solutions at a
/// fixed time; one eigendecomposition per epsilon.
pub fn bo_coeff_rows(
    u0: &TorusFunction,
    t: f64,
    epsilons: &[f64],
    k_max: usize,
    order: usize,
) -> Result<Vec<(f64, usize, f64, f64)>> {
    let mut rows = Vec::with_capacity(epsilons.len() * (k_max + 1));
    for &eps in epsilons {
        if eps <= 0.0 {
            return Err(Error::BadEpsilons);
        }
        let coeffs = ZdEvaluator::new(u0, eps, order)?.coefficients(t, k_max)?;
        for (k, c) in coeffs.iter().enumerate() {
            rows.push((eps, k, c.re, c.im));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub k_max: usize,
    pub max_abs_error: f64,
}

/// Coefficientwise distance between the BO-ε solution and the
/// zero-dispersion limit for each ε. With `datum_slope` = Some(w) the datum
/// for the ε-run is u0 + ε·w.
pub fn epsilon_sweep(
    u0: &TorusFunction,
    t: f64,
    k_max: usize,
    epsilons: &[f64],
    order: usize,
    datum_slope: Option<&TorusFunction>,
) -> Result<Vec<SweepRow>> {
    if epsilons.is_empty()
        || epsilons.iter().any(|&e| e <= 0.0)
        || epsilons.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::BadEpsilons);
    }
    let limit = ZdEvaluator::new(u0, 0.0, order)?.coefficients(t, k_max)?;
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let datum = match datum_slope {
            Some(w) => u0.add_scaled(w, eps)?,
            None => u0.clone(),
        };
        let coeffs = ZdEvaluator::new(&datum, eps, order)?.coefficients(t, k_max)?;
        let err = coeffs
            .iter()
            .zip(&limit)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        rows.push(SweepRow {
            epsilon: eps,
            k_max,
            max_abs_error: err,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::as_coefficient;
    use approx::assert_abs_diff_eq;

    fn two_cos() -> TorusFunction {
        TorusFunction::trig(0.0, vec![2.0], vec![])
    }

    #[test]
    fn constant_datum_coefficients() {
        let ev = ZdEvaluator::new(&TorusFunction::constant(1.3), 0.0, 32).unwrap();
        let c = ev.coefficients(0.8, 4).unwrap();
        assert_abs_diff_eq!(c[0].re, 1.3, epsilon = 1e-12);
        for k in 1..=4 {
            assert!(c[k].norm() < 1e-12);
        }
        let ev = ZdEvaluator::new(&TorusFunction::constant(1.3), 0.2, 32).unwrap();
        let c = ev.coefficients(0.8, 4).unwrap();
        for k in 1..=4 {
            assert!(c[k].norm() < 1e-12);
        }
    }

    #[test]
    fn t_zero_recovers_datum_coefficients() {
        let u0 = TorusFunction::trig(0.3, vec![1.0, 0.5], vec![-0.2]);
        let f = fourier_coeffs(&u0, 64).unwrap();
        for eps in [0.0, 0.25] {
            let ev = ZdEvaluator::new(&u0, eps, 64).unwrap();
            let c = ev.coefficients(0.0, 8).unwrap();
            for k in 0..=8 {
                assert!((c[k] - f.get(k as i64)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn mean_is_conserved_exactly() {
        let u0 = TorusFunction::trig(0.45, vec![1.0], vec![0.7]);
        for t in [-3.0, 0.2, 7.0] {
            let c = zd_coefficient(&u0, t, 0, 16).unwrap();
            assert_abs_diff_eq!(c.re, 0.45, epsilon = 1e-12);
            assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn untrusted_mode_rejected() {
        let u0 = two_cos();
        assert!(matches!(
            zd_coefficient(&u0, 0.1, 5, 32),
            Err(Error::UntrustedMode { .. })
        ));
    }

    #[test]
    fn zd_matches_kinetic_coefficient() {
        // independent oracle: quadrature of the explicit coefficient formula
        let u0 = two_cos();
        let want = as_coefficient(&u0, 0.3, 1);
        let got = zd_coefficient(&u0, 0.3, 1, 256).unwrap();
        assert!((want - got).norm() < 1e-6, "|Δ| = {}", (want - got).norm());
    }

    #[test]
    fn bo_epsilon_approaches_zd() {
        let u0 = two_cos();
        let limit = zd_coefficient(&u0, 0.5, 1, 256).unwrap();
        let mut prev = f64::INFINITY;
        for eps in [0.4, 0.2, 0.1] {
            let c = bo_epsilon_coefficient(&u0, eps, 0.5, 1, 256).unwrap();
            let err = (c - limit).norm();
            assert!(err < prev, "eps={eps}: {err} !< {prev}");
            prev = err;
        }
    }

    #[test]
    fn zd_profile_trivials() {
        let u0 = TorusFunction::constant(2.0);
        let p = zd_profile(&u0, 5.0, 16, 2).unwrap();
        assert_abs_diff_eq!(p.eval(1.0), 2.0, epsilon = 1e-10);

        let u0 = TorusFunction::trig(0.1, vec![0.8], vec![0.4]);
        let p = zd_profile(&u0, 0.0, 64, 8).unwrap();
        for j in 0..32 {
            let x = std::f64::consts::TAU * j as f64 / 32.0;
            assert_abs_diff_eq!(p.eval(x), u0.eval(x), epsilon = 1e-8);
        }
    }

    #[test]
    fn resolvent_trivials() {
        let u0 = TorusFunction::trig(0.6, vec![1.0], vec![]);
        // z = 0 gives the mean
        let f = resolvent_hardy(&u0, 0.7, Complex64::ZERO, 32).unwrap();
        assert_abs_diff_eq!(f.re, 0.6, epsilon = 1e-10);
        assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-10);
        // constant datum gives the constant for all z, t
        let c = TorusFunction::constant(-0.9);
        for (re, im) in [(0.5, 0.0), (0.0, 0.7), (-0.3, 0.2)] {
            let f = resolvent_hardy(&c, 1.3, Complex64::new(re, im), 32).unwrap();
            assert!((f - Complex64::new(-0.9, 0.0)).norm() < 1e-10);
        }
        // |z| >= 1 rejected
        assert!(matches!(
            resolvent_hardy(&u0, 0.1, Complex64::new(1.0, 0.0), 32),
            Err(Error::OutsideDisc(_))
        ));
    }

    #[test]
    fn resolvent_matches_coefficient_series() {
        let u0 = TorusFunction::trig(0.0, vec![1.5], vec![0.5]);
        let order = 128;
        let ev = ZdEvaluator::new(&u0, 0.0, order).unwrap();
        let t = 0.4;
        let kt = ev.k_trust();
        let coeffs = ev.coefficients(t, kt).unwrap();
        let l2 = {
            let h = &ev.hardy_u0;
            (h.c[0].norm_sqr() + 2.0 * h.c[1..].iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
        };
        for z in [Complex64::new(0.5, 0.0), Complex64::new(0.1, -0.4)] {
            let f = ev.resolvent(t, z).unwrap();
            let mut series = Complex64::ZERO;
            let mut zp = Complex64::new(1.0, 0.0);
            for c in &coeffs {
                series += c * zp;
                zp *= z;
            }
            let remainder_bound = z.norm().powi(kt as i32 + 1) * l2 / (1.0 - z.norm());
            assert!(
                (f - series).norm() <= remainder_bound + 1e-9,
                "|Δ|={} bound={}",
                (f - series).norm(),
                remainder_bound
            );
        }
    }

    #[test]
    fn conjugate_time_symmetry_for_even_datum() {
        let u0 = two_cos();
        let ev = ZdEvaluator::new(&u0, 0.0, 64).unwrap();
        let fwd = ev.coefficients(0.7, 8).unwrap();
        let bwd = ev.coefficients(-0.7, 8).unwrap();
        for k in 0..=8 {
            assert!((bwd[k] - fwd[k].conj()).norm() < 1e-9);
        }
    }

    #[test]
    fn bessel_bound_on_coefficients() {
        let u0 = TorusFunction::trig(0.2, vec![1.0, -0.4], vec![0.6]);
        let l2 = {
            let h = szego_project(&fourier_coeffs(&u0, 16).unwrap());
            (h.c[0].norm_sqr() + 2.0 * h.c[1..].iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
        };
        let ev = ZdEvaluator::new(&u0, 0.0, 128).unwrap();
        for t in [-2.0, 0.3, 5.0] {
            for c in ev.coefficients(t, 16).unwrap() {
                assert!(c.norm() <= l2 + 1e-9);
            }
        }
    }

    #[test]
    fn sweep_trivials_and_validation() {
        let c = TorusFunction::constant(0.8);
        let rows = epsilon_sweep(&c, 1.0, 4, &[0.4, 0.2, 0.1], 32, None).unwrap();
        for r in &rows {
            assert!(r.max_abs_error < 1e-12);
        }
        let u0 = two_cos();
        let rows = epsilon_sweep(&u0, 0.0, 4, &[0.4, 0.2], 32, None).unwrap();
        for r in &rows {
            assert!(r.max_abs_error < 1e-9);
        }
        assert!(matches!(
            epsilon_sweep(&u0, 1.0, 4, &[], 32, None),
            Err(Error::BadEpsilons)
        ));
        assert!(matches!(
            epsilon_sweep(&u0, 1.0, 4, &[0.1, 0.2], 32, None),
            Err(Error::BadEpsilons)
        ));
    }

    #[test]
    fn sweep_with_epsilon_dependent_datum() {
        let u0 = two_cos();
        let w = TorusFunction::trig(0.0, vec![0.0, 1.0], vec![]);
        let rows = epsilon_sweep(&u0, 0.5, 4, &[0.4, 0.2, 0.1], 64, Some(&w)).unwrap();
        assert!(rows[2].max_abs_error < rows[0].max_abs_error);
    }
}
