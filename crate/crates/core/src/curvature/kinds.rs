//! Elementary curvature models: bump sums, trigonometric polynomials and
//! Hermite-interpolated samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Returns `(1/(1+e^u), e^u/(1+e^u)^2)` without overflow.
fn logistic(u: f64) -> (f64, f64) {
    if u > 0.0 {
        let e = (-u).exp();
        let d = 1.0 + e;
        (e / d, e / (d * d))
    } else {
        let e = u.exp();
        let d = 1.0 + e;
        (1.0 / d, e / (d * d))
    }
}

/// Monotone transition from 1 (at `s <= r1`) to 0 (at `s >= r2`), with derivative.
pub fn step_down(s: f64, r1: f64, r2: f64) -> (f64, f64) {
    if s <= r1 {
        return (1.0, 0.0);
    }
    if s >= r2 {
        return (0.0, 0.0);
    }
    let x = s - r1;
    let y = r2 - s;
    let (v, p) = logistic(1.0 / y - 1.0 / x);
    let d = if p == 0.0 { 0.0 } else { -p * (1.0 / (x * x) + 1.0 / (y * y)) };
    (v, d)
}

/// Monotone transition from 0 (at `s <= r1`) to 1 (at `s >= r2`), with derivative.
pub fn step_up(s: f64, r1: f64, r2: f64) -> (f64, f64) {
    if s <= r1 {
        return (0.0, 0.0);
    }
    if s >= r2 {
        return (1.0, 0.0);
    }
    let x = s - r1;
    let y = r2 - s;
    let (v, p) = logistic(1.0 / x - 1.0 / y);
    let d = if p == 0.0 { 0.0 } else { p * (1.0 / (x * x) + 1.0 / (y * y)) };
    (v, d)
}

/// Compactly supported bump on `(r1, r2)` peaking at 1 in the middle.
pub fn bump(s: f64, r1: f64, r2: f64) -> (f64, f64) {
    if s <= r1 || s >= r2 {
        return (0.0, 0.0);
    }
    let mid = 0.5 * (r1 + r2);
    if s == mid {
        (1.0, 0.0)
    } else if s < mid {
        step_up(s, r1, mid)
    } else {
        step_down(s, mid, r2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpTerm {
    pub coef: f64,
    pub r1: f64,
    pub r2: f64,
}

/// `sum coef * f_{r1,r2}(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpSum {
    pub terms: Vec<BumpTerm>,
}

impl BumpSum {
    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if !(t.r1.is_finite() && t.r2.is_finite() && t.coef.is_finite()) || t.r1 >= t.r2 {
                return Err(Error::InvalidInterval(format!("bump support ({}, {})", t.r1, t.r2)));
            }
        }
        Ok(())
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let mut k = 0.0;
        let mut kd = 0.0;
        for t in &self.terms {
            let (v, d) = bump(s, t.r1, t.r2);
            k += t.coef * v;
            kd += t.coef * d;
        }
        (k, kd)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.terms
            .iter()
            .flat_map(|t| [t.r1, 0.5 * (t.r1 + t.r2), t.r2])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq: f64,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// `constant + sum cos*cos(freq s) + sin*sin(freq s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    #[serde(default)]
    pub constant: f64,
    pub terms: Vec<TrigTerm>,
}

impl TrigPoly {
    pub fn validate(&self) -> Result<()> {
        let ok = self.constant.is_finite()
            && self
                .terms
                .iter()
                .all(|t| t.freq.is_finite() && t.cos.is_finite() && t.sin.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec("non-finite trigonometric coefficient".into()))
        }
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let mut k = self.constant;
        let mut kd = 0.0;
        for t in &self.terms {
            let (sn, cs) = (t.freq * s).sin_cos();
            k += t.cos * cs + t.sin * sn;
            kd += t.freq * (t.sin * cs - t.cos * sn);
        }
        (k, kd)
    }
}

/// Curvature samples with slopes, interpolated by cubic Hermite splines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledKappa {
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    pub kappa_dot: Vec<f64>,
}

impl SampledKappa {
    pub fn validate(&self) -> Result<()> {
        let n = self.s.len();
        if n < 2 || self.kappa.len() != n || self.kappa_dot.len() != n {
            return Err(Error::InvalidSpec("sampled piece needs matching arrays of length >= 2".into()));
        }
        if self.s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSpec("sample abscissae must increase strictly".into()));
        }
        if self.kappa.iter().chain(&self.kappa_dot).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("non-finite sample".into()));
        }
        Ok(())
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let n = self.s.len();
        let x = s.clamp(self.s[0], self.s[n - 1]);
        let i = self.s.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        let h = self.s[i + 1] - self.s[i];
        let t = (x - self.s[i]) / h;
        let (y0, y1) = (self.kappa[i], self.kappa[i + 1]);
        let (m0, m1) = (self.kappa_dot[i] * h, self.kappa_dot[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let k = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let kd = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        (k, kd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_cutoffs_and_peak() {
        assert_eq!(bump(0.0, 0.0, 2.0), (0.0, 0.0));
        assert_eq!(bump(2.0, 0.0, 2.0), (0.0, 0.0));
        assert_eq!(bump(1.0, 0.0, 2.0), (1.0, 0.0));
        assert_eq!(bump(-3.0, 0.0, 2.0), (0.0, 0.0));
    }

    #[test]
    fn bump_matches_defining_exponential_form() {
        // Direct evaluation of the ratio of exponentials where it does not overflow.
        for &s in &[0.3, 0.5, 0.77, 0.95, 1.2, 1.5, 1.8] {
            let (r1, r2) = (0.0f64, 2.0f64);
            let s: f64 = s;
            let mid = 1.0f64;
            let want = if s <= mid {
                let a = (1.0 / (s - r1)).exp();
                let b = (1.0 / (mid - s)).exp();
                b / (a + b)
            } else {
                let a = (1.0 / (s - mid)).exp();
                let b = (1.0 / (r2 - s)).exp();
                a / (a + b)
            };
            let got = bump(s, r1, r2).0;
            assert!((got - want).abs() < 1e-14, "s={s}: {got} vs {want}");
        }
    }

    #[test]
    fn bump_derivative_matches_central_difference() {
        let h = 1e-6;
        for i in 1..200 {
            let s = -0.5 + 3.0 * i as f64 / 200.0;
            let fd = (bump(s + h, -0.5, 2.5).0 - bump(s - h, -0.5, 2.5).0) / (2.0 * h);
            let d = bump(s, -0.5, 2.5).1;
            assert!((fd - d).abs() < 1e-7, "s={s}: {d} vs {fd}");
        }
    }

    #[test]
    fn bump_never_overflows_near_cutoffs() {
        for k in 1..60 {
            let e = 10f64.powi(-k / 4) * 1e-3;
            for s in [e, 1.0 - e, 1.0 + e, 2.0 - e] {
                let (v, d) = bump(s, 0.0, 2.0);
                assert!(v.is_finite() && d.is_finite(), "s={s}");
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let s: Vec<f64> = (0..7).map(|i| i as f64 * 0.37).collect();
        let p = SampledKappa {
            kappa: s.iter().map(|&x| f(x)).collect(),
            kappa_dot: s.iter().map(|&x| df(x)).collect(),
            s,
        };
        for i in 0..50 {
            let x = i as f64 * 2.22 / 50.0;
            let (k, kd) = p.eval(x);
            assert!((k - f(x)).abs() < 1e-12);
            assert!((kd - df(x)).abs() < 1e-11);
        }
    }
}
