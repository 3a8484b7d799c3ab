//! Real functions on the torus, their Fourier coefficients, the Szegő
//! projector, and reconstruction of real functions from Hardy coefficients.
//!
//! All inner products and norms use the normalized measure dx/2π.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on the imaginary part of the mean coefficient when
/// reconstructing a real function.
pub const DEFAULT_IM_TOL: f64 = 1e-8;

/// Interpolation rule for grid-sampled functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Trig,
    Linear,
}

/// Finite trigonometric polynomial mean + Σ a_j cos(jx) + b_j sin(jx).
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    pub mean: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn eval(&self, x: f64) -> f64 {
        // rotation recurrence: one sin/cos call regardless of degree
        let (s1, c1) = x.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut acc = self.mean;
        for j in 0..self.degree() {
            let (cn, sn) = (c * c1 - s * s1, s * c1 + c * s1);
            c = cn;
            s = sn;
            if j < self.cos.len() {
                acc += self.cos[j] * c;
            }
            if j < self.sin.len() {
                acc += self.sin[j] * s;
            }
        }
        acc
    }

    fn deriv(&self, x: f64) -> f64 {
        let (s1, c1) = x.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut acc = 0.0;
        for j in 0..self.degree() {
            let (cn, sn) = (c * c1 - s * s1, s * c1 + c * s1);
            c = cn;
            s = sn;
            let w = (j + 1) as f64;
            if j < self.cos.len() {
                acc -= w * self.cos[j] * s;
            }
            if j < self.sin.len() {
                acc += w * self.sin[j] * c;
            }
        }
        acc
    }

    fn second_deriv(&self, x: f64) -> f64 {
        let (s1, c1) = x.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut acc = 0.0;
        for j in 0..self.degree() {
            let (cn, sn) = (c * c1 - s * s1, s * c1 + c * s1);
            c = cn;
            s = sn;
            let w = ((j + 1) as f64).powi(2);
            if j < self.cos.len() {
                acc -= w * self.cos[j] * c;
            }
            if j < self.sin.len() {
                acc -= w * self.sin[j] * s;
            }
        }
        acc
    }

    /// Rigorous bound on sup |u| via the ℓ¹ norm of the coefficients.
    fn sup_abs_bound(&self) -> f64 {
        let mut b = self.mean.abs();
        for a in &self.cos {
            b += a.abs();
        }
        for a in &self.sin {
            b += a.abs();
        }
        b
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Trig(TrigPoly),
    Grid {
        values: Vec<f64>,
        interp: Interp,
        // trig-coefficient form of the interpolant; present iff interp == Trig
        poly: Option<TrigPoly>,
    },
}

/// A real-valued 2π-periodic function, either an exact trigonometric
/// polynomial or grid samples with trigonometric or linear interpolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TorusFnRepr", into = "TorusFnRepr")]
pub struct TorusFunction {
    repr: Repr,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum TorusFnRepr {
    Trig {
        mean: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Grid {
        values: Vec<f64>,
        interp: Interp,
    },
}

impl TryFrom<TorusFnRepr> for TorusFunction {
    type Error = Error;
    fn try_from(r: TorusFnRepr) -> Result<Self> {
        match r {
            TorusFnRepr::Trig { mean, cos, sin } => Ok(TorusFunction::trig(mean, cos, sin)),
            TorusFnRepr::Grid { values, interp } => TorusFunction::grid(values, interp),
        }
    }
}

impl From<TorusFunction> for TorusFnRepr {
    fn from(u: TorusFunction) -> Self {
        match u.repr {
            Repr::Trig(p) => TorusFnRepr::Trig {
                mean: p.mean,
                cos: p.cos,
                sin: p.sin,
            },
            Repr::Grid { values, interp, .. } => TorusFnRepr::Grid { values, interp },
        }
    }
}

fn wrap(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let y = x.rem_euclid(two_pi);
    if y == two_pi {
        0.0
    } else {
        y
    }
}

impl TorusFunction {
    pub fn trig(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        TorusFunction {
            repr: Repr::Trig(TrigPoly { mean, cos, sin }),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::trig(c, vec![], vec![])
    }

    /// `values` sampled at x_j = 2πj/N; N must be a power of two, N >= 4.
    pub fn grid(values: Vec<f64>, interp: Interp) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::BadGrid(n));
        }
        let poly = match interp {
            Interp::Trig => Some(dft_to_trig(&values)),
            Interp::Linear => None,
        };
        Ok(TorusFunction {
            repr: Repr::Grid {
                values,
                interp,
                poly,
            },
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Trig(p) => p.eval(x),
            Repr::Grid {
                values,
                interp,
                poly,
            } => match interp {
                Interp::Trig => poly.as_ref().unwrap().eval(x),
                Interp::Linear => {
                    let n = values.len();
                    let s = wrap(x) / std::f64::consts::TAU * n as f64;
                    let i = (s as usize).min(n - 1);
                    let f = s - i as f64;
                    (1.0 - f) * values[i] + f * values[(i + 1) % n]
                }
            },
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Trig(p) => p.deriv(x),
            Repr::Grid {
                values,
                interp,
                poly,
            } => match interp {
                Interp::Trig => poly.as_ref().unwrap().deriv(x),
                Interp::Linear => {
                    let n = values.len();
                    let h = std::f64::consts::TAU / n as f64;
                    let s = wrap(x) / h;
                    let i = (s as usize).min(n - 1);
                    (values[(i + 1) % n] - values[i]) / h
                }
            },
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Trig(p) => p.second_deriv(x),
            Repr::Grid {
                interp,
                poly,
                ..
            } => match interp {
                Interp::Trig => poly.as_ref().unwrap().second_deriv(x),
                Interp::Linear => 0.0,
            },
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.repr {
            Repr::Trig(p) => p.mean,
            Repr::Grid { values, .. } => values.iter().sum::<f64>() / values.len() as f64,
        }
    }

    /// An upper bound on sup |u|.
    pub fn sup_abs_bound(&self) -> f64 {
        match &self.repr {
            Repr::Trig(p) => p.sup_abs_bound(),
            Repr::Grid {
                values,
                interp,
                poly,
            } => match interp {
                Interp::Trig => poly.as_ref().unwrap().sup_abs_bound(),
                Interp::Linear => values.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            },
        }
    }

    /// An upper bound on sup |u′| (a Lipschitz constant for u).
    pub fn deriv_sup_bound(&self) -> f64 {
        fn trig_bound(p: &TrigPoly) -> f64 {
            let mut b = 0.0;
            for (i, a) in p.cos.iter().enumerate() {
                b += (i + 1) as f64 * a.abs();
            }
            for (i, s) in p.sin.iter().enumerate() {
                b += (i + 1) as f64 * s.abs();
            }
            b
        }
        match &self.repr {
            Repr::Trig(p) => trig_bound(p),
            Repr::Grid {
                values,
                interp,
                poly,
            } => match interp {
                Interp::Trig => trig_bound(poly.as_ref().unwrap()),
                Interp::Linear => {
                    let n = values.len();
                    let h = std::f64::consts::TAU / n as f64;
                    (0..n).fold(0.0_f64, |m, i| {
                        m.max((values[(i + 1) % n] - values[i]).abs() / h)
                    })
                }
            },
        }
    }

    /// An upper bound on sup |u′| over the arc [lo, hi] (wrapped to the
    /// circle). Exact for linear interpolants; falls back to the global
    /// bound for trigonometric representations.
    pub fn deriv_sup_bound_on(&self, lo: f64, hi: f64) -> f64 {
        if hi - lo >= std::f64::consts::TAU {
            return self.deriv_sup_bound();
        }
        match &self.repr {
            Repr::Grid {
                values,
                interp: Interp::Linear,
                ..
            } => {
                let n = values.len();
                let h = std::f64::consts::TAU / n as f64;
                let first = (lo / h).floor() as i64;
                let last = (hi / h).ceil() as i64;
                let mut m = 0.0_f64;
                for k in first..last {
                    let i = k.rem_euclid(n as i64) as usize;
                    m = m.max((values[(i + 1) % n] - values[i]).abs() / h);
                }
                m
            }
            _ => self.deriv_sup_bound(),
        }
    }

    /// Sampled (min, max) over `n` uniform points.
    pub fn sampled_range(&self, n: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..n {
            let v = self.eval(std::f64::consts::TAU * j as f64 / n as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval(std::f64::consts::TAU * j as f64 / n as f64))
            .collect()
    }

    pub fn is_trig(&self) -> bool {
        matches!(self.repr, Repr::Trig(_))
    }

    /// Highest mode carried by the representation (exact for trig variants).
    pub fn degree(&self) -> usize {
        match &self.repr {
            Repr::Trig(p) => p.degree(),
            Repr::Grid { values, interp, .. } => match interp {
                Interp::Trig => values.len() / 2,
                Interp::Linear => values.len() / 2,
            },
        }
    }

    /// self + s * other; both operands must be trig polynomials or grids of
    /// equal length and interpolation.
    pub fn add_scaled(&self, other: &TorusFunction, s: f64) -> Result<TorusFunction> {
        match (&self.repr, &other.repr) {
            (Repr::Trig(a), Repr::Trig(b)) => {
                let nc = a.cos.len().max(b.cos.len());
                let ns = a.sin.len().max(b.sin.len());
                let get = |v: &Vec<f64>, j: usize| v.get(j).copied().unwrap_or(0.0);
                Ok(TorusFunction::trig(
                    a.mean + s * b.mean,
                    (0..nc).map(|j| get(&a.cos, j) + s * get(&b.cos, j)).collect(),
                    (0..ns).map(|j| get(&a.sin, j) + s * get(&b.sin, j)).collect(),
                ))
            }
            (
                Repr::Grid {
                    values: va,
                    interp: ia,
                    ..
                },
                Repr::Grid {
                    values: vb,
                    interp: ib,
                    ..
                },
            ) if va.len() == vb.len() && ia == ib => TorusFunction::grid(
                va.iter().zip(vb).map(|(a, b)| a + s * b).collect(),
                *ia,
            ),
            _ => Err(Error::Incompatible(
                "add_scaled needs matching representations",
            )),
        }
    }
}

/// Real DFT of grid samples expressed as a trig polynomial; the Nyquist mode
/// is folded into a pure cosine so the interpolant is real.
fn dft_to_trig(values: &[f64]) -> TrigPoly {
    let n = values.len();
    let half = n / 2;
    let mut cos = vec![0.0; half];
    let mut sin = vec![0.0; half];
    let mean = values.iter().sum::<f64>() / n as f64;
    for k in 1..=half {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, v) in values.iter().enumerate() {
            let ang = std::f64::consts::TAU * (k * j) as f64 / n as f64;
            re += v * ang.cos();
            im -= v * ang.sin();
        }
        re /= n as f64;
        im /= n as f64;
        if k == half {
            cos[k - 1] = re; // Nyquist: coefficient is real, counted once
            sin[k - 1] = 0.0;
        } else {
            cos[k - 1] = 2.0 * re;
            sin[k - 1] = -2.0 * im;
        }
    }
    TrigPoly { mean, cos, sin }
}

/// Two-sided Fourier coefficients over k ∈ [-K, K].
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries {
    order: usize,
    coeffs: Vec<Complex64>, // index i maps to k = i - order
}

impl FourierSeries {
    pub fn zeros(order: usize) -> Self {
        FourierSeries {
            order,
            coeffs: vec![Complex64::ZERO; 2 * order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let o = self.order as i64;
        if k < -o || k > o {
            Complex64::ZERO
        } else {
            self.coeffs[(k + o) as usize]
        }
    }

    pub fn set(&mut self, k: i64, v: Complex64) {
        let o = self.order as i64;
        assert!(k >= -o && k <= o, "mode out of range");
        self.coeffs[(k + o) as usize] = v;
    }
}

/// Truncated Hardy-space element: coefficients c_0..c_K.
#[derive(Clone, Debug, PartialEq)]
pub struct HardyCoeffs {
    pub c: Vec<Complex64>,
}

impl HardyCoeffs {
    pub fn zeros(order: usize) -> Self {
        HardyCoeffs {
            c: vec![Complex64::ZERO; order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// û(k) = (1/2π) ∫ u e^{-ikx} dx for |k| <= K. Exact for trig variants,
/// discrete-transform approximation for grids.
pub fn fourier_coeffs(u: &TorusFunction, order: usize) -> Result<FourierSeries> {
    assert!(order >= 1, "truncation order must be at least 1");
    let mut f = FourierSeries::zeros(order);
    match &u.repr {
        Repr::Trig(p) => {
            f.set(0, Complex64::new(p.mean, 0.0));
            for k in 1..=order {
                let a = p.cos.get(k - 1).copied().unwrap_or(0.0);
                let b = p.sin.get(k - 1).copied().unwrap_or(0.0);
                let c = Complex64::new(a / 2.0, -b / 2.0);
                f.set(k as i64, c);
                f.set(-(k as i64), c.conj());
            }
        }
        Repr::Grid { values, .. } => {
            let n = values.len();
            if n < 2 * order + 1 {
                return Err(Error::Aliasing { n, k: order });
            }
            for k in 0..=order {
                let mut acc = Complex64::ZERO;
                for (j, v) in values.iter().enumerate() {
                    let ang = std::f64::consts::TAU * (k * j) as f64 / n as f64;
                    acc += Complex64::new(v * ang.cos(), -v * ang.sin());
                }
                acc /= n as f64;
                f.set(k as i64, acc);
                if k > 0 {
                    f.set(-(k as i64), acc.conj());
                }
            }
        }
    }
    Ok(f)
}

/// Szegő projection: keep the modes k >= 0.
pub fn szego_project(f: &FourierSeries) -> HardyCoeffs {
    HardyCoeffs {
        c: (0..=f.order() as i64).map(|k| f.get(k)).collect(),
    }
}

/// Rebuild the real function g = Πg + conj(Πg) - <Πg,1> from its Hardy
/// coefficients.
pub fn reconstruct_real(h: &HardyCoeffs) -> Result<TorusFunction> {
    reconstruct_real_with_tol(h, DEFAULT_IM_TOL)
}

pub fn reconstruct_real_with_tol(h: &HardyCoeffs, im_tol: f64) -> Result<TorusFunction> {
    let c0 = h.c[0];
    if c0.im.abs() > im_tol {
        return Err(Error::ImaginaryMean(c0.im.abs()));
    }
    let cos = h.c[1..].iter().map(|z| 2.0 * z.re).collect();
    let sin = h.c[1..].iter().map(|z| -2.0 * z.im).collect();
    Ok(TorusFunction::trig(c0.re, cos, sin))
}

/// <f, g> = Σ f_k conj(g_k), the normalized L² pairing in coefficient space.
pub fn inner_product(f: &HardyCoeffs, g: &HardyCoeffs) -> Result<Complex64> {
    if f.order() != g.order() {
        return Err(Error::OrderMismatch(f.order(), g.order()));
    }
    Ok(f.c.iter().zip(&g.c).map(|(a, b)| a * b.conj()).sum())
}
