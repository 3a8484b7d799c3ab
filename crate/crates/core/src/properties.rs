//! Executable checks of the structural properties of the limiting
//! evolution: maximum principle, norm control, L¹ contraction, the Oleinik
//! estimate, norm preservation on the breaking window, and the weighted
//! interpolation inequality for step functions.

use std::cell::RefCell;

use serde::Serialize;

use crate::burgers::breaking_times;
use crate::error::{Error, Result};
use crate::fourier::TorusFunction;
use crate::kinetic::as_profile_quadrature;

/// Outcome of a single property check; pass ⟺ slack ≥ −tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub inputs: String,
    pub measured: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub seed: Option<u64>,
}

impl PropertyReport {
    fn new(property: &str, inputs: String, measured: f64, bound: f64, tol: f64) -> Self {
        let slack = bound - measured;
        PropertyReport {
            property: property.to_string(),
            inputs,
            measured,
            bound,
            slack,
            pass: slack >= -tol,
            seed: None,
        }
    }
}

fn profile_samples(u0: &TorusFunction, t: f64, n: usize) -> Result<Vec<f64>> {
    let h = std::f64::consts::TAU / n as f64;
    (0..n)
        .map(|j| as_profile_quadrature(u0, t, h * j as f64, 128))
        .collect()
}

/// inf u₀ − τ ≤ AS[u₀](t,·) ≤ sup u₀ + τ on grid_n points, τ = 10⁻⁶.
pub fn check_max_principle(u0: &TorusFunction, t: f64, grid_n: usize) -> Result<PropertyReport> {
    let (lo, hi) = u0.sampled_range(4096);
    let samples = profile_samples(u0, t, grid_n)?;
    // measured excess over the initial range, from either side
    let mut excess = 0.0_f64;
    for v in samples {
        excess = excess.max(v - hi).max(lo - v);
    }
    Ok(PropertyReport::new(
        "max_principle",
        format!("t={t}, grid_n={grid_n}"),
        excess,
        0.0,
        1e-6,
    ))
}

/// L^p exponent for the norm-control check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PNorm {
    One,
    Two,
    Inf,
}

impl std::fmt::Display for PNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PNorm::One => write!(f, "1"),
            PNorm::Two => write!(f, "2"),
            PNorm::Inf => write!(f, "inf"),
        }
    }
}

fn lp_norm(values: &[f64], p: PNorm) -> f64 {
    let n = values.len() as f64;
    match p {
        PNorm::One => values.iter().map(|v| v.abs()).sum::<f64>() / n,
        PNorm::Two => (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt(),
        PNorm::Inf => values.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
    }
}

/// ‖AS[u₀](t)‖_{L^p} ≤ ‖u₀‖_{L^p} + 10⁻⁴ in normalized measure.
pub fn check_norm_control(u0: &TorusFunction, t: f64, p: PNorm) -> Result<PropertyReport> {
    let n = 4096;
    let initial: Vec<f64> = (0..n)
        .map(|j| u0.eval(std::f64::consts::TAU * j as f64 / n as f64))
        .collect();
    let evolved = profile_samples(u0, t, n)?;
    Ok(PropertyReport::new(
        "norm_control",
        format!("t={t}, p={p}"),
        lp_norm(&evolved, p),
        lp_norm(&initial, p),
        1e-4,
    ))
}

/// ‖AS[u₀](t) − AS[v₀](t)‖_{L¹} ≤ ‖u₀ − v₀‖_{L¹} + 10⁻⁴.
pub fn check_l1_contraction(
    u0: &TorusFunction,
    v0: &TorusFunction,
    t: f64,
) -> Result<PropertyReport> {
    let n = 4096;
    let initial: Vec<f64> = (0..n)
        .map(|j| {
            let x = std::f64::consts::TAU * j as f64 / n as f64;
            u0.eval(x) - v0.eval(x)
        })
        .collect();
    let au = profile_samples(u0, t, n)?;
    let av = profile_samples(v0, t, n)?;
    let evolved: Vec<f64> = au.iter().zip(&av).map(|(a, b)| a - b).collect();
    Ok(PropertyReport::new(
        "l1_contraction",
        format!("t={t}"),
        lp_norm(&evolved, PNorm::One),
        lp_norm(&initial, PNorm::One),
        1e-4,
    ))
}

/// Oleinik estimate: 2t·(AS(t,x) − AS(t,y))/(x−y) ≤ 1 + 10⁻⁶ over distinct
/// grid pairs, with x−y reduced to its representative in (−π, π].
pub fn check_oleinik(u0: &TorusFunction, t: f64, grid_n: usize) -> Result<PropertyReport> {
    if t == 0.0 {
        return Err(Error::TimeIsZero);
    }
    let samples = profile_samples(u0, t, grid_n)?;
    let h = std::f64::consts::TAU / grid_n as f64;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..grid_n {
        for j in 0..grid_n {
            if i == j {
                continue;
            }
            let mut dx = (i as f64 - j as f64) * h;
            // representative of x−y in (−π, π]
            dx -= std::f64::consts::TAU * (dx / std::f64::consts::TAU).round();
            if dx <= -std::f64::consts::PI {
                dx += std::f64::consts::TAU;
            }
            worst = worst.max(2.0 * t * (samples[i] - samples[j]) / dx);
        }
    }
    Ok(PropertyReport::new(
        "oleinik",
        format!("t={t}, grid_n={grid_n}"),
        worst,
        1.0,
        1e-6,
    ))
}

// adaptive Simpson with the usual 1/15 error estimate
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the width floor keeps evaluation noise (an integrand computed by its
    // own inner quadrature never settles below its tolerance) from forcing
    // a full-depth tree; sub-floor panels contribute O(noise·width) ≪ tol
    if depth == 0 || b - a <= 1e-6 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    // seed with a handful of panels so periodic integrands are not mistaken
    // for constants
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let pa = a + h * j as f64;
        let pb = a + h * (j + 1) as f64;
        let (fa, fm, fb) = (f(pa), f(0.5 * (pa + pb)), f(pb));
        let whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, pa, pb, fa, fm, fb, whole, tol / panels as f64, 40);
    }
    total
}

// ‖AS[u₀](t)‖²_{L²} by adaptive quadrature (the profile develops vertical
// tangents at the window endpoints, so a fixed grid is not enough)
fn as_norm_sq(u0: &TorusFunction, t: f64) -> Result<f64> {
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let f = |x: f64| match as_profile_quadrature(u0, t, x, 128) {
        Ok(v) => v * v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let val = adaptive_simpson(&f, 0.0, std::f64::consts::TAU, 1e-8) / std::f64::consts::TAU;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(val),
    }
}

/// Norm preservation on the breaking window: |‖AS(t)‖²_{L²} − ‖u₀‖²_{L²}|
/// ≤ 10⁻⁶ for each sampled t ∈ [T₋, T₊].
pub fn check_strong_window(u0: &TorusFunction, samples: &[f64]) -> Result<PropertyReport> {
    let (t_minus, t_plus) = breaking_times(u0);
    for &t in samples {
        if t < t_minus || t > t_plus {
            return Err(Error::OutsideWindow(t, t_minus, t_plus));
        }
    }
    let n = 4096;
    let initial_sq = {
        let mut acc = 0.0;
        for j in 0..n {
            let v = u0.eval(std::f64::consts::TAU * j as f64 / n as f64);
            acc += v * v;
        }
        acc / n as f64
    };
    let mut worst = 0.0_f64;
    for &t in samples {
        worst = worst.max((as_norm_sq(u0, t)? - initial_sq).abs());
    }
    Ok(PropertyReport::new(
        "strong_window",
        format!("samples={samples:?}"),
        worst,
        0.0,
        1e-6,
    ))
}

/// Finite step function on ℝ₊: value `v` on each interval (a, b).
#[derive(Clone, Debug)]
pub struct StepFunction(pub Vec<(f64, f64, f64)>);

impl StepFunction {
    fn l1(&self) -> f64 {
        self.0.iter().map(|&(a, b, v)| v.abs() * (b - a)).sum()
    }

    fn linf(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, &(_, _, v)| m.max(v.abs()))
    }

    // ∫ x^{p−1} |f(x)| dx = Σ |v| (b^p − a^p)/p, exactly
    fn weighted_l1(&self, p: f64) -> f64 {
        self.0
            .iter()
            .map(|&(a, b, v)| v.abs() * (b.powf(p) - a.powf(p)) / p)
            .sum()
    }
}

/// Weighted inequality ‖f‖₁ ≤ p^{1/p} ‖f‖_∞^{1−1/p} ‖|·|^{p−1}f‖₁^{1/p}
/// for step functions, via closed-form integrals.
pub fn check_weighted_inequality(f: &StepFunction, p: f64) -> Result<PropertyReport> {
    if p < 1.0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let lhs = f.l1();
    let rhs = p.powf(1.0 / p) * f.linf().powf(1.0 - 1.0 / p) * f.weighted_l1(p).powf(1.0 / p);
    Ok(PropertyReport::new(
        "weighted_inequality",
        format!("p={p}, pieces={}", f.0.len()),
        lhs,
        rhs,
        1e-10,
    ))
}

/// Random real trig polynomial of degree 2 with coefficients in [−1, 1].
pub fn random_trig(rng: &mut impl rand::Rng) -> TorusFunction {
    let mean = rng.gen_range(-0.5..0.5);
    let cos: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sin: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TorusFunction::trig(mean, cos, sin)
}

/// The full deterministic suite: fixed-data checks for every property plus
/// a seeded random-contraction campaign (20 pairs, t ∈ {0.3, 1, 3}).
pub fn run_default_suite(seed: u64) -> Result<Vec<PropertyReport>> {
    use rand::SeedableRng;
    let mut reports = Vec::new();

    let two_cos = TorusFunction::trig(0.0, vec![2.0], vec![]);
    let cos = TorusFunction::trig(0.0, vec![1.0], vec![]);
    let mixed = TorusFunction::trig(0.0, vec![1.0, 0.0, 0.5], vec![]);

    reports.push(check_max_principle(&two_cos, 1.0, 256)?);
    reports.push(check_max_principle(&mixed, 0.8, 256)?);
    for p in [PNorm::One, PNorm::Two, PNorm::Inf] {
        reports.push(check_norm_control(&cos, 1.0, p)?);
    }
    reports.push(check_oleinik(&cos, 1.0, 256)?);
    reports.push(check_strong_window(&cos, &[-0.5, -0.25, 0.0, 0.25, 0.5])?);
    let small = TorusFunction::trig(0.0, vec![0.3], vec![]);
    reports.push(check_strong_window(&small, &[1.0])?);
    reports.push(check_weighted_inequality(
        &StepFunction(vec![(0.0, 1.0, 1.0)]),
        2.0,
    )?);
    reports.push(check_weighted_inequality(
        &StepFunction(vec![(0.0, 3.0, 2.0)]),
        3.0,
    )?);
    reports.push(check_weighted_inequality(
        &StepFunction(vec![(0.0, 1.0, 1.0), (2.0, 3.0, 1.0)]),
        2.0,
    )?);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for pair in 0..20 {
        let u0 = random_trig(&mut rng);
        let v0 = random_trig(&mut rng);
        for t in [0.3, 1.0, 3.0] {
            let mut r = check_l1_contraction(&u0, &v0, t)?;
            r.inputs = format!("pair={pair}, t={t}");
            r.seed = Some(seed);
            reports.push(r);
        }
    }
    Ok(reports)
}
