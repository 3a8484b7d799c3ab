//! Exact combinatorics of shift words: weights of composed shifts, signed
//! sums with cyclic indexing, Raney rotations, and the two series
//! expansions of the Fourier coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{fourier_coeffs, TorusFunction};

/// Default cap on enumerated words for the expansion coefficients.
pub const WORD_BUDGET: u64 = 10_000_000;

/// A pair (m, n) with Σm = k ≥ 1 (m has d+1 entries) and Σn = d ≥ 0
/// (n has k nonnegative entries); both indexed cyclically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftWord {
    pub m: Vec<i64>,
    pub n: Vec<i64>,
}

impl ShiftWord {
    pub fn new(m: Vec<i64>, n: Vec<i64>) -> Result<Self> {
        if m.is_empty() || n.is_empty() {
            return Err(Error::InvalidArgument("m and n must be nonempty".into()));
        }
        let k = n.len() as i64;
        let d = m.len() as i64 - 1;
        if m.iter().sum::<i64>() != k {
            return Err(Error::InvalidArgument(format!(
                "entries of m must sum to k = {k}"
            )));
        }
        if n.iter().any(|&v| v < 0) || n.iter().sum::<i64>() != d {
            return Err(Error::InvalidArgument(format!(
                "entries of n must be nonnegative and sum to d = {d}"
            )));
        }
        Ok(ShiftWord { m, n })
    }

    pub fn k(&self) -> usize {
        self.n.len()
    }

    pub fn d(&self) -> usize {
        self.m.len() - 1
    }
}

/// Integer vector with cyclic 1-based indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicVector(pub Vec<i64>);

impl std::ops::Deref for CyclicVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

// y_i for any integer i, with y_{i + len} = y_i and slots labeled 1..len.
fn entry(y: &[i64], i: i64) -> i64 {
    y[(i - 1).rem_euclid(y.len() as i64) as usize]
}

// (T^r y)_j = y_{j+r}
fn rotate(y: &[i64], r: i64) -> Vec<i64> {
    (1..=y.len() as i64).map(|j| entry(y, j + r)).collect()
}

/// Signed sum Σ(y, j): forward sum for j > 0, negated backward sum for
/// j < 0, zero at j = 0.
pub fn signed_sum(y: &[i64], j: i64) -> i64 {
    if j > 0 {
        (1..=j).map(|i| entry(y, i)).sum()
    } else if j < 0 {
        -(j + 1..=0).map(|i| entry(y, i)).sum::<i64>()
    } else {
        0
    }
}

/// Weight ⟨S(m,n)1,1⟩ ∈ {0,1}, evaluated by tracking the exponent of the
/// monomial through the shift composition, rightmost factor first. S_r
/// sends e to e+r (annihilating when e+r < 0) and each S* lowers by one.
pub fn shift_word_weight(w: &ShiftWord) -> i64 {
    let k = w.k();
    let d = w.d();
    // block boundaries N_ℓ = n_1 + … + n_ℓ
    let mut big_n = vec![0_i64; k + 1];
    for l in 1..=k {
        big_n[l] = big_n[l - 1] + w.n[l - 1];
    }
    let mut e: i64 = w.m[d];
    if e < 0 {
        return 0;
    }
    for l in (1..=k).rev() {
        e -= 1; // the S* closing block ℓ
        if e < 0 {
            return 0;
        }
        for j in (big_n[l - 1] + 1..=big_n[l]).rev() {
            e += w.m[j as usize - 1];
            if e < 0 {
                return 0;
            }
        }
    }
    if e == 0 {
        1
    } else {
        0
    }
}

/// The unique r ∈ {1,…,d+1} for which T^r y has strictly positive proper
/// partial sums (Raney's lemma); input must sum to one.
pub fn raney_rotation(y: &CyclicVector) -> Result<usize> {
    let len = y.len();
    if signed_sum(y, len as i64) != 1 {
        return Err(Error::InvalidArgument(
            "Raney rotation needs a vector summing to one".into(),
        ));
    }
    let d = len - 1;
    let mut found = None;
    for r in 1..=len {
        let rot = rotate(y, r as i64);
        if (1..=d as i64).all(|j| signed_sum(&rot, j) > 0) {
            assert!(found.is_none(), "multiple Raney rotations for {:?}", y.0);
            found = Some(r);
        }
    }
    Ok(found.expect("no Raney rotation found"))
}

/// Signed-sum characterization of the weight:
/// ⟨S(m,n)1,1⟩ = 1 ⟺ Σ(n, Σ(m,j)) < j for all j ∈ {1,…,d}.
pub fn weight_characterization(w: &ShiftWord) -> bool {
    (1..=w.d() as i64).all(|j| signed_sum(&w.n, signed_sum(&w.m, j)) < j)
}

/// Associated vector y_j = 1 + Σ(n, Σ(m, j−1)) − Σ(n, Σ(m, j)).
pub fn associated_vector(w: &ShiftWord) -> CyclicVector {
    let y = (1..=w.d() as i64 + 1)
        .map(|j| 1 + signed_sum(&w.n, signed_sum(&w.m, j - 1)) - signed_sum(&w.n, signed_sum(&w.m, j)))
        .collect();
    CyclicVector(y)
}

/// Σ_{j=1}^{d+1} Σ_{ℓ=1}^{k} ⟨S(T^j m, T^ℓ n)1,1⟩; equals k for every word.
pub fn raney_type_sum(w: &ShiftWord) -> i64 {
    let mut total = 0;
    for j in 1..=w.d() as i64 + 1 {
        let m = rotate(&w.m, j);
        for l in 1..=w.k() as i64 {
            let n = rotate(&w.n, l);
            total += shift_word_weight(&ShiftWord {
                m: m.clone(),
                n,
            });
        }
    }
    total
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

// nonzero Fourier modes of a trig polynomial, as (mode, coefficient) pairs
fn support(u0: &TorusFunction) -> Result<Vec<(i64, Complex64)>> {
    if !u0.is_trig() {
        return Err(Error::InvalidArgument(
            "expansion coefficients need a trig-polynomial datum".into(),
        ));
    }
    let deg = u0.degree().max(1);
    let coeffs = fourier_coeffs(u0, deg)?;
    let mut out = Vec::new();
    for r in -(deg as i64)..=deg as i64 {
        let c = coeffs.get(r);
        if c.norm() > 0.0 {
            out.push((r, c));
        }
    }
    Ok(out)
}

// all m over the given support with d+1 slots summing to k, as
// (m, Π û₀(m_j)) pairs
fn enumerate_m(
    supp: &[(i64, Complex64)],
    slots: usize,
    target: i64,
) -> Vec<(Vec<i64>, Complex64)> {
    let mut out = Vec::new();
    let mut m = Vec::with_capacity(slots);
    fn rec(
        supp: &[(i64, Complex64)],
        slots: usize,
        target: i64,
        m: &mut Vec<i64>,
        prod: Complex64,
        sum: i64,
        out: &mut Vec<(Vec<i64>, Complex64)>,
    ) {
        if m.len() == slots {
            if sum == target {
                out.push((m.clone(), prod));
            }
            return;
        }
        for &(r, c) in supp {
            m.push(r);
            rec(supp, slots, target, m, prod * c, sum + r, out);
            m.pop();
        }
    }
    rec(supp, slots, target, &mut m, Complex64::new(1.0, 0.0), 0, &mut out);
    out
}

// compositions of d into k nonnegative parts
fn enumerate_n(k: usize, d: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut n = Vec::with_capacity(k);
    fn rec(k: usize, left: i64, n: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n.len() == k - 1 {
            n.push(left);
            out.push(n.clone());
            n.pop();
            return;
        }
        for v in 0..=left {
            n.push(v);
            rec(k, left - v, n, out);
            n.pop();
        }
    }
    rec(k, d, &mut n, &mut out);
    out
}

fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let mut r = 1_u64;
    for i in 0..b.min(a - b) {
        r = r * (a - i) / (i + 1);
    }
    r
}

fn check_budget(support_size: u64, k: usize, d: usize, with_n: bool) -> Result<()> {
    let m_count = support_size.checked_pow(d as u32 + 1).unwrap_or(u64::MAX);
    let n_count = if with_n {
        binomial(d as u64 + k as u64 - 1, k as u64 - 1)
    } else {
        1
    };
    let words = m_count.saturating_mul(n_count);
    if words > WORD_BUDGET {
        return Err(Error::BudgetExceeded(words, WORD_BUDGET));
    }
    Ok(())
}

/// Coefficient of (−2it)^d in the hard expansion:
/// Σ_{m,n} ⟨S(m,n)1,1⟩ û₀(m)/n!, with m restricted to the support of û₀.
pub fn hard_expansion_coeff(u0: &TorusFunction, k: usize, d: usize) -> Result<Complex64> {
    assert!(k >= 1, "k must be at least 1");
    let supp = support(u0)?;
    check_budget(supp.len() as u64, k, d, true)?;
    let ns = enumerate_n(k, d as i64);
    let mut total = Complex64::new(0.0, 0.0);
    for (m, prod) in enumerate_m(&supp, d + 1, k as i64) {
        for n in &ns {
            let w = ShiftWord {
                m: m.clone(),
                n: n.clone(),
            };
            if shift_word_weight(&w) == 1 {
                let nfact: f64 = n.iter().map(|&v| factorial(v)).product();
                total += prod / nfact;
            }
        }
    }
    Ok(total)
}

/// Coefficient of (−2it)^d in the easy expansion:
/// (k^d/(d+1)!) Σ_m û₀(m) over the same restricted m-set.
pub fn easy_expansion_coeff(u0: &TorusFunction, k: usize, d: usize) -> Result<Complex64> {
    assert!(k >= 1, "k must be at least 1");
    let supp = support(u0)?;
    check_budget(supp.len() as u64, k, d, false)?;
    let sum: Complex64 = enumerate_m(&supp, d + 1, k as i64)
        .into_iter()
        .map(|(_, prod)| prod)
        .sum();
    Ok(sum * (k as f64).powi(d as i32) / factorial(d as i64 + 1))
}

/// One row of the exhaustive lemma verification.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LemmaRow {
    pub k: usize,
    pub d: usize,
    pub m_bound: i64,
    pub words_checked: u64,
    pub failures: u64,
}

// all m ∈ [−bound, bound]^{d+1} with Σ m = k
fn enumerate_bounded_m(bound: i64, slots: usize, target: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut m = Vec::with_capacity(slots);
    fn rec(bound: i64, slots: usize, target: i64, sum: i64, m: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let left = (slots - m.len()) as i64;
        if left == 0 {
            if sum == target {
                out.push(m.clone());
            }
            return;
        }
        // prune: remaining entries span [−bound·left, bound·left]
        if (target - sum).abs() > bound * left {
            return;
        }
        for v in -bound..=bound {
            m.push(v);
            rec(bound, slots, target, sum + v, m, out);
            m.pop();
        }
    }
    rec(bound, slots, target, 0, &mut m, &mut out);
    out
}

/// Exhaustively checks Lemmas 3.2, 3.4 and 3.5(i)–(iii) over all words with
/// the given k, d and |m_j| ≤ m_bound; one summary row per (k, d).
pub fn verify_lemmas(k_max: usize, d_max: usize, m_bound: i64) -> Result<Vec<LemmaRow>> {
    let mut estimate = 0_u64;
    for k in 1..=k_max {
        for d in 0..=d_max {
            let m_count = (2 * m_bound as u64 + 1)
                .checked_pow(d as u32 + 1)
                .unwrap_or(u64::MAX);
            let n_count = binomial(d as u64 + k as u64 - 1, k as u64 - 1);
            estimate = estimate.saturating_add(m_count.saturating_mul(n_count));
        }
    }
    if estimate > WORD_BUDGET {
        return Err(Error::BudgetExceeded(estimate, WORD_BUDGET));
    }
    let mut rows = Vec::new();
    for k in 1..=k_max {
        for d in 0..=d_max {
            let mut checked = 0_u64;
            let mut failures = 0_u64;
            let ms = enumerate_bounded_m(m_bound, d + 1, k as i64);
            let ns = enumerate_n(k, d as i64);
            for m in &ms {
                for n in &ns {
                    let w = ShiftWord {
                        m: m.clone(),
                        n: n.clone(),
                    };
                    checked += 1;
                    if !word_satisfies_lemmas(&w) {
                        failures += 1;
                    }
                }
            }
            rows.push(LemmaRow {
                k,
                d,
                m_bound,
                words_checked: checked,
                failures,
            });
        }
    }
    Ok(rows)
}

fn word_satisfies_lemmas(w: &ShiftWord) -> bool {
    let k = w.k() as i64;
    let d = w.d();
    // Lemma 3.2: rotation sum equals k
    if raney_type_sum(w) != k {
        return false;
    }
    let weight = shift_word_weight(w);
    // Lemma 3.4: signed-sum characterization
    if (weight == 1) != weight_characterization(w) {
        return false;
    }
    let y = associated_vector(w);
    // Lemma 3.5(i): y sums to one
    if signed_sum(&y, y.len() as i64) != 1 {
        return false;
    }
    // Lemma 3.5(ii): weight 1 ⟺ strictly positive proper partial sums
    let positive = (1..=d as i64).all(|j| signed_sum(&y, j) > 0);
    if (weight == 1) != positive {
        return false;
    }
    // Lemma 3.5(iii): T(y(m,n)) = y(Tm, T^{m₁}n)
    let shifted = ShiftWord {
        m: rotate(&w.m, 1),
        n: rotate(&w.n, w.m[0]),
    };
    if rotate(&y, 1) != associated_vector(&shifted).0 {
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn word(m: &[i64], n: &[i64]) -> ShiftWord {
        ShiftWord::new(m.to_vec(), n.to_vec()).unwrap()
    }

    #[test]
    fn word_validation() {
        assert!(ShiftWord::new(vec![1], vec![0]).is_ok());
        assert!(ShiftWord::new(vec![1], vec![1]).is_err()); // Σn ≠ d
        assert!(ShiftWord::new(vec![2], vec![0]).is_err()); // Σm ≠ k
        assert!(ShiftWord::new(vec![0, 1], vec![-1]).is_err());
    }

    #[test]
    fn weights_by_exponent_trace() {
        assert_eq!(shift_word_weight(&word(&[1], &[0])), 1);
        assert_eq!(shift_word_weight(&word(&[1, 0], &[1])), 0);
        assert_eq!(shift_word_weight(&word(&[0, 1], &[1])), 1);
    }

    #[test]
    fn signed_sum_cases() {
        let y = [1, 2, 3];
        assert_eq!(signed_sum(&y, 0), 0);
        assert_eq!(signed_sum(&y, 2), 3);
        assert_eq!(signed_sum(&y, -1), -3); // cyclic: y₀ = y₃
        assert_eq!(signed_sum(&y, 3), 6);
        assert_eq!(signed_sum(&y, -3), -6);
    }

    #[test]
    fn cocycle_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let len = rng.gen_range(1..6);
            let y: Vec<i64> = (0..len).map(|_| rng.gen_range(-4..5)).collect();
            let j1 = rng.gen_range(-6..7);
            let j2 = rng.gen_range(-6..7);
            let lhs = signed_sum(&y, j1 + j2);
            let rhs = signed_sum(&y, j1) + signed_sum(&rotate(&y, j1), j2);
            assert_eq!(lhs, rhs, "y={y:?} j1={j1} j2={j2}");
        }
    }

    #[test]
    fn raney_rotation_examples() {
        assert_eq!(raney_rotation(&CyclicVector(vec![1])).unwrap(), 1);
        assert_eq!(raney_rotation(&CyclicVector(vec![-1, 1, 1])).unwrap(), 1);
        assert_eq!(raney_rotation(&CyclicVector(vec![1, 0, 0])).unwrap(), 3);
        assert!(raney_rotation(&CyclicVector(vec![1, 1])).is_err());
    }

    #[test]
    fn characterization_examples() {
        assert!(weight_characterization(&word(&[1], &[0])));
        assert!(weight_characterization(&word(&[0, 1], &[1])));
        assert!(!weight_characterization(&word(&[1, 0], &[1])));
    }

    #[test]
    fn associated_vector_examples() {
        assert_eq!(associated_vector(&word(&[1], &[0])).0, vec![1]);
        assert_eq!(associated_vector(&word(&[0, 1], &[1])).0, vec![1, 0]);
    }

    #[test]
    fn raney_type_sum_examples() {
        assert_eq!(raney_type_sum(&word(&[1], &[0])), 1);
        assert_eq!(raney_type_sum(&word(&[0, 1], &[1])), 1);
        assert_eq!(raney_type_sum(&word(&[2, -1, 1], &[1, 1])), 2);
    }

    #[test]
    fn lemmas_hold_on_small_words() {
        for row in verify_lemmas(2, 2, 2).unwrap() {
            assert!(row.words_checked > 0);
            assert_eq!(row.failures, 0, "failures at k={} d={}", row.k, row.d);
        }
    }

    fn two_cos() -> TorusFunction {
        TorusFunction::trig(0.0, vec![2.0], vec![])
    }

    #[test]
    fn expansion_coefficient_values() {
        let u0 = two_cos();
        let h = |k, d| hard_expansion_coeff(&u0, k, d).unwrap();
        let e = |k, d| easy_expansion_coeff(&u0, k, d).unwrap();
        assert!((h(1, 0) - 1.0).norm() < 1e-15);
        assert!((e(1, 0) - 1.0).norm() < 1e-15);
        assert!(h(2, 0).norm() < 1e-15);
        assert!(e(1, 1).norm() < 1e-15);
        assert!((h(1, 2) - 0.5).norm() < 1e-15);
        assert!((e(1, 2) - 0.5).norm() < 1e-15);
    }

    #[test]
    fn hard_equals_easy() {
        let data = [
            TorusFunction::trig(0.0, vec![2.0], vec![]),
            TorusFunction::trig(0.0, vec![2.0, 1.0], vec![]),
        ];
        for u0 in &data {
            for k in 1..=3 {
                for d in 0..=4 {
                    let h = hard_expansion_coeff(u0, k, d).unwrap();
                    let e = easy_expansion_coeff(u0, k, d).unwrap();
                    assert!(
                        (h - e).norm() < 1e-12,
                        "k={k} d={d}: hard {h} vs easy {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn taylor_partial_sums_track_coefficient() {
        // degree-2 partial sum against the quadrature coefficient at small t
        let u0 = two_cos();
        let k = 1;
        let coeffs: Vec<Complex64> = (0..=2)
            .map(|d| easy_expansion_coeff(&u0, k, d).unwrap())
            .collect();
        for &t in &[1e-2, 1e-3] {
            let z = Complex64::new(0.0, -2.0 * t); // (−2it)
            let mut partial = Complex64::new(0.0, 0.0);
            let mut zp = Complex64::new(1.0, 0.0);
            for c in &coeffs {
                partial += c * zp;
                zp *= z;
            }
            let want = crate::kinetic::as_coefficient(&u0, t, k as i64);
            let rem = (partial - want).norm();
            assert!(rem < 10.0 * t.powi(3), "t={t}: remainder {rem}");
        }
    }

    #[test]
    fn budget_guard() {
        // degree-8 datum: support 17, 17^8 · |Y| words blows the budget
        let u0 = TorusFunction::trig(
            0.1,
            vec![1.0; 8],
            vec![0.5; 8],
        );
        assert!(matches!(
            hard_expansion_coeff(&u0, 2, 7),
            Err(Error::BudgetExceeded(..))
        ));
    }

    #[test]
    fn grid_datum_rejected() {
        let g = TorusFunction::grid(vec![0.0, 1.0, 0.0, -1.0], crate::fourier::Interp::Linear)
            .unwrap();
        assert!(hard_expansion_coeff(&g, 1, 0).is_err());
    }
}
