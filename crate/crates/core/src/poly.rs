//! Dense complex polynomials and simultaneous root finding.
//!
//! Roots come from the Aberth–Ehrlich iteration started on a circle sized by
//! the Fujiwara bound, followed by Newton polishing on the original
//! coefficients. Exact zero roots are factored out first so they come back
//! as exact zeros.

use std::ops::{Add, Mul, Sub};

use crate::ext::{cdiv, C64};

const MAX_ABERTH_ITERS: usize = 1000;

/// Polynomial with coefficients in ascending order of degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// Nominal degree (index of the last stored coefficient).
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degree after dropping leading coefficients whose modulus is at most
    /// `rel_tol` times the largest coefficient modulus. `None` for the zero
    /// polynomial (all coefficients negligible).
    pub fn effective_degree(&self, rel_tol: f64) -> Option<usize> {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return None;
        }
        self.degree_above(rel_tol * max)
    }

    /// Index of the last coefficient with modulus above `abs_tol`.
    pub fn degree_above(&self, abs_tol: f64) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() > abs_tol)
    }

    pub fn scaled(&self, c: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn truncated(&self, degree: usize) -> Poly {
        Poly::new(self.coeffs[..=degree.min(self.nominal_degree())].to_vec())
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Sum of |coeff|·|z|^k, the natural scale for judging |p(z)|.
    pub fn magnitude_at(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Horner deflation by a known root; the remainder is discarded.
    pub fn deflate(&self, root: C64) -> Poly {
        let n = self.nominal_degree();
        if n == 0 {
            return Poly::new(vec![]);
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        let mut acc = C64::new(0.0, 0.0);
        for k in (1..=n).rev() {
            acc = acc * root + self.coeffs[k];
            out[k - 1] = acc;
        }
        Poly::new(out)
    }

    /// All roots of the polynomial, with the leading coefficient taken as
    /// nonzero. Exact zero roots are returned first.
    pub fn roots(&self) -> Vec<C64> {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        let mut roots = Vec::new();
        let mut start = 0;
        while start < coeffs.len().saturating_sub(1) && coeffs[start] == C64::new(0.0, 0.0) {
            roots.push(C64::new(0.0, 0.0));
            start += 1;
        }
        let reduced = Poly::new(coeffs[start..].to_vec());
        let found = match reduced.nominal_degree() {
            0 => vec![],
            1 => vec![cdiv(-reduced.coeffs[0], reduced.coeffs[1]).expect("leading nonzero")],
            _ => reduced.aberth(),
        };
        for z in found {
            roots.push(reduced.polish(z, 3));
        }
        roots
    }

    /// Newton steps that are kept only while they reduce |p|.
    pub fn polish(&self, mut z: C64, steps: usize) -> C64 {
        let mut best = self.eval(z).norm();
        for _ in 0..steps.max(1) * 4 {
            let (p, dp) = self.eval_with_derivative(z);
            let Some(step) = cdiv(p, dp) else { break };
            let cand = z - step;
            let val = self.eval(cand).norm();
            if val < best || (val == best && step.norm() == 0.0) {
                best = val;
                z = cand;
                if best == 0.0 {
                    break;
                }
            } else {
                break;
            }
        }
        z
    }

    fn aberth(&self) -> Vec<C64> {
        let n = self.nominal_degree();
        let lead = self.coeffs[n];
        // Fujiwara bound on root moduli
        let mut bound: f64 = 0.0;
        for k in 1..=n {
            let ratio = (self.coeffs[n - k] / lead).norm();
            let term = if k == n { (ratio / 2.0).powf(1.0 / k as f64) } else { ratio.powf(1.0 / k as f64) };
            bound = bound.max(term);
        }
        let radius = if bound > 0.0 { bound } else { 1.0 };
        // Offset angle breaks symmetry with real-coefficient polynomials.
        let mut z: Vec<C64> = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
                C64::from_polar(radius, theta)
            })
            .collect();
        let mut done = vec![false; n];
        for _ in 0..MAX_ABERTH_ITERS {
            let mut all_done = true;
            for k in 0..n {
                if done[k] {
                    continue;
                }
                let (p, dp) = self.eval_with_derivative(z[k]);
                if p.norm() == 0.0 {
                    done[k] = true;
                    continue;
                }
                let Some(ratio) = cdiv(p, dp) else {
                    // stationary point: nudge
                    let nudge = C64::new(1e-8 * (1.0 + z[k].norm()), 1e-8);
                    z[k] += nudge;
                    all_done = false;
                    continue;
                };
                let mut repulsion = C64::new(0.0, 0.0);
                for j in 0..n {
                    if j != k {
                        if let Some(inv) = cdiv(C64::new(1.0, 0.0), z[k] - z[j]) {
                            repulsion += inv;
                        }
                    }
                }
                let denom = C64::new(1.0, 0.0) - ratio * repulsion;
                let step = cdiv(ratio, denom).unwrap_or(ratio);
                z[k] -= step;
                if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                    done[k] = true;
                } else {
                    all_done = false;
                }
            }
            if all_done {
                break;
            }
        }
        z
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::new(vec![]);
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self - &rhs.scaled(C64::new(-1.0, 0.0))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|k| *self.coeffs.get(k).unwrap_or(&zero) - *rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

/// Discriminant of `a z³ + b z² + c z + d`.
pub fn cubic_discriminant(a: C64, b: C64, c: C64, d: C64) -> C64 {
    a * b * c * d * 18.0 - b * b * b * d * 4.0 + b * b * c * c - a * c * c * c * 4.0
        - a * a * d * d * 27.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::match_sets;

    #[test]
    fn roots_of_unity() {
        let p = Poly::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let roots = p.roots();
        let expected: Vec<C64> = (0..3)
            .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
            .collect();
        assert!(match_sets(&roots, &expected) < 1e-14);
    }

    #[test]
    fn exact_zero_roots_factor_out() {
        // z^2 (z - 2)(z + 3)
        let p = Poly::from_real(&[0.0, 0.0, -6.0, 1.0, 1.0]);
        let roots = p.roots();
        assert_eq!(roots[0], C64::new(0.0, 0.0));
        assert_eq!(roots[1], C64::new(0.0, 0.0));
        let rest = [C64::new(2.0, 0.0), C64::new(-3.0, 0.0)];
        assert!(match_sets(&roots[2..], &rest) < 1e-14);
    }

    #[test]
    fn widely_spread_roots() {
        // (z - 3e6)(z - 0.5)(z + 0.5i)
        let r = [C64::new(3e6, 1e6), C64::new(0.5, 0.0), C64::new(0.0, -0.5)];
        let mut p = Poly::new(vec![C64::new(1.0, 0.0)]);
        for root in r {
            p = &p * &Poly::new(vec![-root, C64::new(1.0, 0.0)]);
        }
        let found = p.roots();
        let worst = r
            .iter()
            .map(|t| found.iter().map(|f| (f - t).norm() / (1.0 + t.norm())).fold(f64::MAX, f64::min))
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn deflation_and_effective_degree() {
        let p = Poly::from_real(&[-6.0, 1.0, 1.0]); // (z-2)(z+3)
        let q = p.deflate(C64::new(2.0, 0.0));
        assert!((q.coeffs[0] - C64::new(3.0, 0.0)).norm() < 1e-15);
        assert!((q.coeffs[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
        let padded = Poly::from_real(&[1.0, 2.0, 1e-20, 0.0]);
        assert_eq!(padded.effective_degree(1e-14), Some(1));
        assert_eq!(Poly::from_real(&[0.0, 0.0]).effective_degree(1e-14), None);
    }

    #[test]
    fn discriminant_vanishes_on_double_root() {
        // (z - 1)^2 (z + 2) = z^3 - 3z + 2
        let d = cubic_discriminant(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-3.0, 0.0),
            C64::new(2.0, 0.0),
        );
        assert_eq!(d.norm(), 0.0);
    }
}
