//! Multivalued Burgers solutions by characteristics: branch enumeration,
//! alternating sums, breaking times, and pointwise caustic detection.

use crate::error::{Error, Result};
use crate::fourier::TorusFunction;

/// |h'| threshold below which an accepted root flags the point as a caustic.
pub const TAU_CAUSTIC: f64 = 1e-6;

const ROOT_TOL: f64 = 1e-13;
const SEPARATION_TOL: f64 = 1e-9;
const MAX_SCAN: usize = 1 << 22;

/// All roots y of y = u0(x - 2ty) at one (t, x).
#[derive(Clone, Debug)]
pub struct BranchSet {
    pub t: f64,
    pub x: f64,
    /// sorted ascending
    pub roots: Vec<f64>,
    /// |h(y_i)| at acceptance
    pub residuals: Vec<f64>,
    pub caustic: bool,
}

fn bisect<F: Fn(f64) -> f64>(h: &F, mut a: f64, mut b: f64) -> f64 {
    let mut ha = h(a);
    if ha == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a < ROOT_TOL * (1.0 + mid.abs()) {
            return mid;
        }
        let hm = h(mid);
        if hm == 0.0 {
            return mid;
        }
        if (hm > 0.0) == (ha > 0.0) {
            a = mid;
            ha = hm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn scan_roots<F: Fn(f64) -> f64>(h: &F, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    let mut prev = h(lo);
    let mut prev_y = lo;
    let mut roots = Vec::new();
    for j in 1..=n {
        let y = lo + step * j as f64;
        let cur = h(y);
        if prev == 0.0 {
            roots.push(prev_y);
        } else if (cur > 0.0) != (prev > 0.0) && cur != 0.0 {
            roots.push(bisect(h, prev_y, y));
        }
        prev = cur;
        prev_y = y;
    }
    if prev == 0.0 {
        roots.push(prev_y);
    }
    roots
}

/// All simple roots of h(y) = y - u0(x - 2ty), found by a uniform bracket
/// scan (adaptively doubled until the root count stabilizes twice) plus
/// bisection.
pub fn branches(u0: &TorusFunction, t: f64, x: f64, scan_points: usize) -> Result<BranchSet> {
    assert!(scan_points >= 64, "scan_points must be at least 64");
    let (min_u, max_u) = u0.sampled_range(4096);
    let delta = 1e-6 * (1.0 + u0.sup_abs_bound());
    let lo = min_u - delta;
    let hi = max_u + delta;
    let h = |y: f64| y - u0.eval(x - 2.0 * t * y);

    let mut n = scan_points;
    let mut roots = scan_roots(&h, lo, hi, n);
    let mut stable = 0;
    while stable < 2 {
        if n >= MAX_SCAN {
            break;
        }
        n *= 2;
        let next = scan_roots(&h, lo, hi, n);
        if next.len() == roots.len() {
            stable += 1;
        } else {
            stable = 0;
        }
        roots = next;
    }

    let residuals: Vec<f64> = roots.iter().map(|&y| h(y).abs()).collect();
    let caustic = roots
        .iter()
        .any(|&y| (1.0 + 2.0 * t * u0.deriv(x - 2.0 * t * y)).abs() < TAU_CAUSTIC);
    if !caustic {
        if roots.windows(2).any(|w| w[1] - w[0] < SEPARATION_TOL) {
            return Err(Error::ScanResolution(n));
        }
    }
    Ok(BranchSet {
        t,
        x,
        roots,
        residuals,
        caustic,
    })
}

/// Σ (-1)^n y_n over the ascending branches; undefined at caustics.
pub fn alternating_sum(b: &BranchSet) -> Result<f64> {
    if b.caustic {
        return Err(Error::CausticPoint { t: b.t, x: b.x });
    }
    Ok(b
        .roots
        .iter()
        .enumerate()
        .map(|(n, y)| if n % 2 == 0 { *y } else { -*y })
        .sum())
}

fn refine_extremum<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, maximize: bool) -> f64 {
    // golden-section search on the bracketing cell
    let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        let pick_c = if maximize { fc > fd } else { fc < fd };
        if pick_c {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
        if b - a < 1e-14 {
            break;
        }
    }
    f(0.5 * (a + b))
}

fn extremum_of_derivative(u0: &TorusFunction, maximize: bool) -> f64 {
    let n = 8192;
    let h = std::f64::consts::TAU / n as f64;
    let d: Vec<f64> = (0..n).map(|j| u0.deriv(h * j as f64)).collect();
    let f = |x: f64| u0.deriv(x);
    let mut best = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    for j in 0..n {
        let prev = d[(j + n - 1) % n];
        let next = d[(j + 1) % n];
        let local = if maximize {
            d[j] >= prev && d[j] >= next
        } else {
            d[j] <= prev && d[j] <= next
        };
        if local {
            let x = h * j as f64;
            let v = refine_extremum(&f, x - h, x + h, maximize);
            if maximize {
                best = best.max(v).max(d[j]);
            } else {
                best = best.min(v).min(d[j]);
            }
        }
    }
    best
}

/// Breaking times (T-, T+) from the extrema of 2u0'; ±∞ when the
/// corresponding extremum is of the wrong sign.
pub fn breaking_times(u0: &TorusFunction) -> (f64, f64) {
    let sup = extremum_of_derivative(u0, true);
    let inf = extremum_of_derivative(u0, false);
    let t_minus = if sup > 1e-12 {
        -1.0 / (2.0 * sup)
    } else {
        f64::NEG_INFINITY
    };
    let t_plus = if inf < -1e-12 {
        -1.0 / (2.0 * inf)
    } else {
        f64::INFINITY
    };
    (t_minus, t_plus)
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// True iff some z solves |g_t(z) - x| <= tol and |g_t'(z)| <= tol with
/// g_t(z) = z + 2t u0(z). Candidates are the zeros of g' (by sign change)
/// plus the critical points of g' (tangential zeros).
pub fn is_caustic(u0: &TorusFunction, t: f64, x: f64, tol: f64) -> bool {
    let g = |z: f64| z + 2.0 * t * u0.eval(z);
    let gp = |z: f64| 1.0 + 2.0 * t * u0.deriv(z);
    let gpp = |z: f64| 2.0 * t * u0.second_deriv(z);

    let n = 4096;
    let h = std::f64::consts::TAU / n as f64;
    let mut candidates = Vec::new();
    let mut prev_gp = gp(0.0);
    let mut prev_gpp = gpp(0.0);
    for j in 1..=n {
        let z = h * j as f64;
        let cur_gp = gp(z);
        let cur_gpp = gpp(z);
        if prev_gp == 0.0 || (cur_gp > 0.0) != (prev_gp > 0.0) {
            candidates.push(bisect(&gp, z - h, z));
        }
        if prev_gpp == 0.0 || (cur_gpp > 0.0) != (prev_gpp > 0.0) {
            candidates.push(bisect(&gpp, z - h, z));
        }
        prev_gp = cur_gp;
        prev_gpp = cur_gpp;
    }
    candidates
        .into_iter()
        .any(|z| gp(z).abs() <= tol && circ_dist(g(z), x) <= tol)
}
