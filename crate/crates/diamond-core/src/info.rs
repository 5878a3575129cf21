//! Scalar and Gaussian information-theoretic primitives shared by all other
//! modules.
//!
//! All logarithms are base 2 and all rates are in bits per channel use. The
//! convention 0·log 0 = 0 is applied throughout.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fp;

/// Condition-number proxy above which a covariance block is treated as
/// singular rather than merely ill-conditioned.
const CONDITION_LIMIT: f64 = 1e12;

/// A probability value in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Prob(f64);

impl Prob {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain(alloc::format!(
                "probability {value} outside [0, 1]"
            )));
        }
        Ok(Prob(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// A nonnegative rate or capacity in bits per channel use.
///
/// Negative intermediate bound values are allowed inside max-min objectives
/// (as plain `f64`); the final rate of a computation is clamped at zero
/// before it is wrapped in `Bits`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) {
            return Err(Error::Domain(alloc::format!(
                "rate {value} is negative or NaN"
            )));
        }
        Ok(Bits(value))
    }

    /// Clamp small negative values (max-min slack, rounding) to zero.
    #[inline]
    pub(crate) fn clamped(value: f64) -> Self {
        Bits(value.max(0.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

// ---------------------------------------------------------------------------
// Scalar kernels
// ---------------------------------------------------------------------------

/// Raw binary entropy kernel, caller guarantees p in [0, 1].
#[inline]
pub(crate) fn h_b(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * fp::log2(x) } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Raw binary convolution kernel a(1-b) + (1-a)b.
#[inline]
pub(crate) fn conv(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + (1.0 - a) * b
}

/// Raw Gaussian capacity kernel ½·log2(1+x).
#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * fp::log2(1.0 + x)
}

/// Binary entropy H_b(p) = −p·log2(p) − (1−p)·log2(1−p) in bits.
pub fn binary_entropy(p: f64) -> Result<Bits> {
    let p = Prob::new(p)?;
    Ok(Bits(h_b(p.value())))
}

/// Binary convolution a ∗ b = a(1−b) + (1−a)b.
pub fn binary_convolve(a: f64, b: f64) -> Result<Prob> {
    let a = Prob::new(a)?;
    let b = Prob::new(b)?;
    Prob::new(conv(a.value(), b.value()))
}

/// Gaussian capacity function C(x) = ½·log2(1+x) for x ≥ 0.
pub fn cap_fn(x: f64) -> Result<Bits> {
    if !(x >= 0.0) {
        return Err(Error::Domain(alloc::format!(
            "cap_fn argument {x} is negative or NaN"
        )));
    }
    Ok(Bits(cap(x)))
}

// ---------------------------------------------------------------------------
// Jointly Gaussian vectors
// ---------------------------------------------------------------------------

/// A zero-mean jointly Gaussian vector described by variable labels and a
/// covariance matrix (row-major).
#[derive(Debug, Clone)]
pub struct GaussianJoint {
    labels: Vec<String>,
    cov: Vec<f64>,
}

impl GaussianJoint {
    /// Build from labels and a row-major covariance matrix.
    ///
    /// The matrix must be square with dimension equal to the label count,
    /// symmetric, and have a nonnegative diagonal.
    pub fn new(labels: Vec<String>, cov: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if cov.len() != n * n {
            return Err(Error::Domain(alloc::format!(
                "covariance has {} entries, expected {}",
                cov.len(),
                n * n
            )));
        }
        for i in 0..n {
            if cov[i * n + i] < 0.0 {
                return Err(Error::Domain(alloc::format!(
                    "negative variance for {}",
                    labels[i]
                )));
            }
            for j in (i + 1)..n {
                let a = cov[i * n + j];
                let b = cov[j * n + i];
                let scale = fp::abs(a).max(fp::abs(b)).max(1.0);
                if fp::abs(a - b) > 1e-9 * scale {
                    return Err(Error::Domain(alloc::format!(
                        "covariance asymmetric between {} and {}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(GaussianJoint { labels, cov })
    }

    /// Build from independent zero-mean components: variable `i` is
    /// `Σ_k combos[i].1[k] · B_k` where `B_k` has variance `base_vars[k]`.
    pub(crate) fn from_combos(base_vars: &[f64], combos: &[(&str, Vec<f64>)]) -> Self {
        let n = combos.len();
        let mut cov = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut c = 0.0;
                for (k, &v) in base_vars.iter().enumerate() {
                    c += combos[i].1[k] * combos[j].1[k] * v;
                }
                cov[i * n + j] = c;
                cov[j * n + i] = c;
            }
        }
        let labels = combos.iter().map(|(l, _)| String::from(*l)).collect();
        GaussianJoint { labels, cov }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.cov[i * self.dim() + j]
    }

    pub fn variance_of(&self, label: &str) -> Result<f64> {
        let i = self.index_of(label)?;
        Ok(self.covariance(i, i))
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Domain(alloc::format!("unknown label {label}")))
    }

    fn indices_of(&self, group: &[&str]) -> Result<Vec<usize>> {
        group.iter().map(|l| self.index_of(l)).collect()
    }

    /// Extract the covariance block over `idx`, normalized to a correlation
    /// matrix so the determinant is scale-free. A zero-variance variable
    /// makes the block singular.
    fn correlation_block(&self, idx: &[usize]) -> Result<Vec<f64>> {
        let n = self.dim();
        let m = idx.len();
        let mut scale = Vec::with_capacity(m);
        for &i in idx {
            let v = self.cov[i * n + i];
            if v <= 0.0 {
                return Err(Error::Singular(alloc::format!(
                    "variable {} has zero variance",
                    self.labels[i]
                )));
            }
            scale.push(1.0 / fp::sqrt(v));
        }
        let mut block = vec![0.0; m * m];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                block[r * m + c] = self.cov[i * n + j] * scale[r] * scale[c];
            }
        }
        Ok(block)
    }
}

/// Determinant of a square matrix via partially pivoted Gaussian
/// elimination. Pivot ratios above [`CONDITION_LIMIT`] and nonpositive
/// determinants are reported as singular.
fn det_positive(mut m: Vec<f64>, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let mut det = 1.0;
    let mut max_pivot = 0.0_f64;
    let mut min_pivot = f64::INFINITY;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = fp::abs(m[col * n + col]);
        for r in (col + 1)..n {
            let a = fp::abs(m[r * n + col]);
            if a > pivot_abs {
                pivot_abs = a;
                pivot_row = r;
            }
        }
        if pivot_abs == 0.0 {
            return Err(Error::Singular(String::from("zero pivot")));
        }
        if pivot_row != col {
            for c in 0..n {
                m.swap(col * n + c, pivot_row * n + c);
            }
            det = -det;
        }
        let pivot = m[col * n + col];
        det *= pivot;
        max_pivot = max_pivot.max(pivot_abs);
        min_pivot = min_pivot.min(pivot_abs);
        for r in (col + 1)..n {
            let f = m[r * n + col] / pivot;
            if f != 0.0 {
                for c in col..n {
                    m[r * n + c] -= f * m[col * n + c];
                }
            }
        }
    }
    if max_pivot / min_pivot > CONDITION_LIMIT {
        return Err(Error::Singular(String::from(
            "pivot ratio exceeds condition limit",
        )));
    }
    if det <= 0.0 {
        return Err(Error::Singular(String::from("nonpositive determinant")));
    }
    Ok(det)
}

/// Mutual information I(A; B) in bits between two groups of variables of a
/// jointly Gaussian vector:
///
/// I(A; B) = ½·log2( det Σ_A · det Σ_B / det Σ_{A∪B} )
///
/// evaluated on correlation-normalized blocks (the variance scales cancel
/// between numerator and denominator). Singular required blocks are
/// reported as [`Error::Singular`], signalling an infinite mutual
/// information or a degenerate construction.
pub fn gaussian_mi(joint: &GaussianJoint, group_a: &[&str], group_b: &[&str]) -> Result<Bits> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::Domain(String::from("empty variable group")));
    }
    let idx_a = joint.indices_of(group_a)?;
    let idx_b = joint.indices_of(group_b)?;
    let mut idx_ab = idx_a.clone();
    idx_ab.extend_from_slice(&idx_b);

    let det_a = det_positive(joint.correlation_block(&idx_a)?, idx_a.len())?;
    let det_b = det_positive(joint.correlation_block(&idx_b)?, idx_b.len())?;
    let det_ab = det_positive(joint.correlation_block(&idx_ab)?, idx_ab.len())?;

    let mi = 0.5 * (fp::log2(det_a) + fp::log2(det_b) - fp::log2(det_ab));
    Ok(Bits::clamped(mi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn joint2(var_a: f64, var_b: f64, cov: f64) -> GaussianJoint {
        GaussianJoint::new(
            vec![String::from("A"), String::from("B")],
            vec![var_a, cov, cov, var_b],
        )
        .unwrap()
    }

    #[test]
    fn entropy_matches_known_values() {
        assert_eq!(binary_entropy(0.0).unwrap().value(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap().value(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap().value(), 1.0);
        let h = binary_entropy(0.25).unwrap().value();
        assert!((h - 0.8112781244591328).abs() < 1e-12, "H_b(0.25) = {h}");
    }

    #[test]
    fn entropy_rejects_out_of_range() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn convolve_matches_known_values() {
        assert_eq!(binary_convolve(0.3, 0.0).unwrap().value(), 0.3);
        assert_eq!(binary_convolve(0.3, 0.5).unwrap().value(), 0.5);
        let c = binary_convolve(0.1, 0.2).unwrap().value();
        assert!((c - 0.26).abs() < 1e-15);
        assert!(binary_convolve(1.2, 0.1).is_err());
    }

    #[test]
    fn cap_fn_matches_known_values() {
        assert_eq!(cap_fn(0.0).unwrap().value(), 0.0);
        assert_eq!(cap_fn(1.0).unwrap().value(), 0.5);
        assert_eq!(cap_fn(3.0).unwrap().value(), 1.0);
        assert!(cap_fn(-0.5).is_err());
    }

    #[test]
    fn gaussian_mi_independent_is_zero() {
        let j = joint2(2.0, 3.0, 0.0);
        assert_eq!(gaussian_mi(&j, &["A"], &["B"]).unwrap().value(), 0.0);
    }

    #[test]
    fn gaussian_mi_correlated_scalars() {
        // correlation coefficient sqrt(0.5): MI = -1/2 log2(1 - 0.5) = 0.5
        let rho = 0.5_f64.sqrt();
        let j = joint2(1.0, 1.0, rho);
        let mi = gaussian_mi(&j, &["A"], &["B"]).unwrap().value();
        assert!((mi - 0.5).abs() < 1e-12, "MI = {mi}");
    }

    #[test]
    fn gaussian_mi_self_information_is_singular() {
        let j = joint2(1.0, 1.0, 0.3);
        match gaussian_mi(&j, &["A"], &["A"]) {
            Err(Error::Singular(_)) => {}
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_mi_zero_variance_is_singular() {
        let j = joint2(0.0, 1.0, 0.0);
        assert!(matches!(
            gaussian_mi(&j, &["A"], &["B"]),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn gaussian_joint_validates_shape() {
        assert!(GaussianJoint::new(vec![String::from("A")], vec![1.0, 2.0]).is_err());
        // asymmetric
        assert!(GaussianJoint::new(
            vec![String::from("A"), String::from("B")],
            vec![1.0, 0.2, 0.5, 1.0]
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn entropy_is_symmetric(p in 0.0..=1.0f64) {
            let a = binary_entropy(p).unwrap().value();
            let b = binary_entropy(1.0 - p).unwrap().value();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn convolve_bias_identity(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
            // 1 - 2(a*b) = (1 - 2a)(1 - 2b)
            let c = binary_convolve(a, b).unwrap().value();
            prop_assert!(((1.0 - 2.0 * c) - (1.0 - 2.0 * a) * (1.0 - 2.0 * b)).abs() < 1e-12);
        }

        #[test]
        fn convolve_commutes(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
            let ab = binary_convolve(a, b).unwrap().value();
            let ba = binary_convolve(b, a).unwrap().value();
            prop_assert!((ab - ba).abs() < 1e-15);
        }

        #[test]
        fn cap_fn_telescopes(a in 1e-3..10.0f64, b in 1e-3..10.0f64, n in 1e-3..10.0f64) {
            // C(a/(b+N)) + C(b/N) = C((a+b)/N)
            let lhs = cap_fn(a / (b + n)).unwrap().value() + cap_fn(b / n).unwrap().value();
            let rhs = cap_fn((a + b) / n).unwrap().value();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn cap_fn_is_increasing(x in 0.0..100.0f64, dx in 1e-6..1.0f64) {
            let lo = cap_fn(x).unwrap().value();
            let hi = cap_fn(x + dx).unwrap().value();
            prop_assert!(hi > lo);
        }

        #[test]
        fn gaussian_mi_is_symmetric(rho in -0.95..0.95f64) {
            let j = joint2(2.0, 0.5, rho);
            let ab = gaussian_mi(&j, &["A"], &["B"]).unwrap().value();
            let ba = gaussian_mi(&j, &["B"], &["A"]).unwrap().value();
            prop_assert!((ab - ba).abs() < 1e-12);
        }

        #[test]
        fn gaussian_mi_ignores_independent_variable(rho in -0.9..0.9f64, vc in 0.1..5.0f64) {
            let j2 = joint2(1.0, 1.0, rho);
            let base = gaussian_mi(&j2, &["A"], &["B"]).unwrap().value();
            // append independent C to group A
            let j3 = GaussianJoint::new(
                vec![String::from("A"), String::from("B"), String::from("C")],
                vec![
                    1.0, rho, 0.0,
                    rho, 1.0, 0.0,
                    0.0, 0.0, vc,
                ],
            ).unwrap();
            let augmented = gaussian_mi(&j3, &["A", "C"], &["B"]).unwrap().value();
            prop_assert!((augmented - base).abs() < 1e-10);
        }
    }
}
