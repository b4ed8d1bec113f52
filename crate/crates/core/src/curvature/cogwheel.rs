//! Polar "cogwheel" curves: a circle of radius `r0` with `n` cogs, cog `j`
//! carrying `a[j]` teeth.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CogwheelSpec {
    pub n: u32,
    pub r0: f64,
    pub a: Vec<u32>,
}

/// Radius and its first three derivatives in the polar angle.
#[derive(Clone, Copy, Debug)]
pub struct Radius {
    pub rho: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl CogwheelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.a.len() != self.n as usize {
            return Err(Error::InvalidSpec(format!(
                "cogwheel needs n >= 1 and exactly n tooth counts (n={}, got {})",
                self.n,
                self.a.len()
            )));
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) || self.a.contains(&0) {
            return Err(Error::InvalidSpec("cogwheel needs r0 > 0 and positive tooth counts".into()));
        }
        Ok(())
    }

    /// Angular width of one cog.
    pub fn cog_width(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn cog_of(&self, t: f64) -> usize {
        let j = (t / self.cog_width()).floor();
        (j.max(0.0) as usize).min(self.n as usize - 1)
    }

    pub fn radius(&self, t: f64) -> Radius {
        let j = self.cog_of(t);
        let a = self.a[j] as f64;
        let n = self.n as f64;
        let (sn, c) = (n * a * t).sin_cos();
        Radius {
            rho: self.r0 + (1.0 - c) / (a * a),
            d1: n / a * sn,
            d2: n * n * c,
            d3: -n * n * n * a * sn,
        }
    }

    pub fn speed(&self, t: f64) -> f64 {
        let r = self.radius(t);
        r.rho.hypot(r.d1)
    }

    /// Curvature and its derivative in the polar angle.
    pub fn kappa_t(&self, t: f64) -> (f64, f64) {
        let Radius { rho, d1, d2, d3 } = self.radius(t);
        let num = rho * rho + 2.0 * d1 * d1 - rho * d2;
        let den = rho * rho + d1 * d1;
        let num_t = 2.0 * rho * d1 + 3.0 * d1 * d2 - rho * d3;
        let den_t = 2.0 * rho * d1 + 2.0 * d1 * d2;
        let k = num / den.powf(1.5);
        let k_t = num_t / den.powf(1.5) - 1.5 * num * den_t / den.powf(2.5);
        (k, k_t)
    }

    /// Tooth boundaries in the polar angle, including 0 and 2π.
    pub fn tooth_boundaries(&self) -> Vec<f64> {
        let w = self.cog_width();
        let mut out = vec![0.0];
        for (j, &a) in self.a.iter().enumerate() {
            let t0 = j as f64 * w;
            for k in 1..=a {
                out.push(t0 + w * k as f64 / a as f64);
            }
        }
        let last = out.len() - 1;
        out[last] = 2.0 * PI;
        out
    }
}

const KNOTS_PER_TOOTH: usize = 32;

/// Cogwheel curvature as a function of arc length, backed by an angle/arc-length table.
#[derive(Clone, Debug)]
pub struct CogwheelKappa {
    pub spec: CogwheelSpec,
    knots_t: Vec<f64>,
    knots_s: Vec<f64>,
    teeth_s: Vec<f64>,
}

impl CogwheelKappa {
    pub fn new(spec: CogwheelSpec) -> Result<Self> {
        spec.validate()?;
        let teeth = spec.tooth_boundaries();
        let mut knots_t = vec![0.0];
        let mut knots_s = vec![0.0];
        let mut teeth_s = vec![0.0];
        for w in teeth.windows(2) {
            for k in 1..=KNOTS_PER_TOOTH {
                let t0 = *knots_t.last().unwrap();
                let t1 = if k == KNOTS_PER_TOOTH {
                    w[1]
                } else {
                    w[0] + (w[1] - w[0]) * k as f64 / KNOTS_PER_TOOTH as f64
                };
                let ds = quadrature::gl5(|t| spec.speed(t), t0, t1);
                knots_t.push(t1);
                knots_s.push(knots_s.last().unwrap() + ds);
            }
            teeth_s.push(*knots_s.last().unwrap());
        }
        Ok(Self { spec, knots_t, knots_s, teeth_s })
    }

    pub fn length(&self) -> f64 {
        *self.knots_s.last().unwrap()
    }

    /// Arc length at tooth boundaries.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.teeth_s.clone()
    }

    /// Polar angle at arc length `s`.
    pub fn angle_at(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.length());
        let n = self.knots_s.len();
        let i = self.knots_s.partition_point(|&v| v <= s).clamp(1, n - 1) - 1;
        let (t0, t1) = (self.knots_t[i], self.knots_t[i + 1]);
        let (s0, s1) = (self.knots_s[i], self.knots_s[i + 1]);
        let mut t = t0 + (s - s0) / (s1 - s0) * (t1 - t0);
        for _ in 0..8 {
            let f = s0 + quadrature::gl5(|x| self.spec.speed(x), t0, t) - s;
            let step = f / self.spec.speed(t);
            t = (t - step).clamp(t0, t1);
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let t = self.angle_at(s);
        let (k, k_t) = self.spec.kappa_t(t);
        (k, k_t / self.spec.speed(t))
    }
}
