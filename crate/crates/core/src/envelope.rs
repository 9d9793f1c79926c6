//! The band-limited envelope: a Schwartz-class function whose Fourier
//! transform is a smooth radial profile supported in |xi| <= 1/8.
//!
//! Spatial values are synthesized once on a dense grid over [-W, W] and
//! served through cubic interpolation. Sampling the hat profile on the
//! lattice m/(2W) periodizes the envelope with period 2W (Poisson
//! summation); the tail beyond the window is below 1e-12, so the cached
//! values agree with the true envelope to that accuracy.

use crate::parallel;
use crate::profile::SmoothProfile;
use num_complex::Complex64;
use std::sync::{Arc, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum EnvelopeError {
    #[error("point {x} outside the cached spatial window")]
    OutOfWindow { x: f64 },
}

#[derive(Debug)]
pub struct Envelope {
    pub name: &'static str,
    hat: SmoothProfile,
    /// Half-width of the cached spatial window.
    pub window: f64,
    step: f64,
    samples: Vec<f64>,
    /// Hat-profile samples c_m = hat(m/(2W)) / (2W) for m = 0..=m_max.
    modes: Vec<f64>,
}

const CACHE_LOG2_POINTS: u32 = 18;
const WINDOW: f64 = 64.0;

impl Envelope {
    /// The default envelope at the default cache resolution, built once.
    pub fn standard() -> Arc<Envelope> {
        static CACHE: OnceLock<Arc<Envelope>> = OnceLock::new();
        CACHE
            .get_or_init(|| Arc::new(Envelope::with_resolution(CACHE_LOG2_POINTS)))
            .clone()
    }

    /// Build the standard envelope with 2^log2_points cached samples.
    /// Exposed so tests can compare resolutions.
    pub fn with_resolution(log2_points: u32) -> Envelope {
        let hat = SmoothProfile::envelope_hat();
        let n = 1usize << log2_points;
        let w = WINDOW;
        let df = 1.0 / (2.0 * w);
        let m_max = (hat.support.1 / df).ceil() as usize;
        let modes: Vec<f64> = (0..=m_max).map(|m| hat.eval(m as f64 * df) * df).collect();
        let step = 2.0 * w / n as f64;
        let samples = parallel::map_range(n, |i| {
            let x = -w + i as f64 * step;
            eval_modes(&modes, df, x)
        });
        Envelope { name: "psi-standard", hat, window: w, step, samples, modes }
    }

    pub fn hat_profile(&self) -> &SmoothProfile {
        &self.hat
    }

    /// Spatial value by cubic interpolation on the cache.
    pub fn eval(&self, x: f64) -> Result<f64, EnvelopeError> {
        let u = (x + self.window) / self.step;
        let i = u.floor() as isize;
        if i < 1 || (i + 2) as usize >= self.samples.len() {
            return Err(EnvelopeError::OutOfWindow { x });
        }
        let t = u - i as f64;
        let i = i as usize;
        let (p0, p1, p2, p3) =
            (self.samples[i - 1], self.samples[i], self.samples[i + 1], self.samples[i + 2]);
        // Catmull-Rom
        let v = 0.5
            * (2.0 * p1
                + (p2 - p0) * t
                + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
                + (3.0 * p1 - p0 - 3.0 * p2 + p3) * t * t * t);
        Ok(v)
    }

    /// Direct trigonometric synthesis from the hat samples; exact up to the
    /// periodization tail, defined for every x. Used as the interpolation
    /// oracle and for building the cache itself.
    pub fn eval_direct(&self, x: f64) -> f64 {
        eval_modes(&self.modes, 1.0 / (2.0 * self.window), x)
    }

    /// Value of the Fourier transform at frequency xi.
    pub fn hat(&self, xi: f64) -> f64 {
        self.hat.eval(xi.abs())
    }

    /// L^p norm by Riemann quadrature on the cache grid (p = inf: max).
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_of_samples(&self.samples, self.step, p)
    }

    pub fn value_at_origin(&self) -> f64 {
        self.eval_direct(0.0)
    }

    pub fn sample_step(&self) -> f64 {
        self.step
    }
}

fn eval_modes(modes: &[f64], df: f64, x: f64) -> f64 {
    let mut acc = modes[0];
    for (m, &c) in modes.iter().enumerate().skip(1) {
        acc += 2.0 * c * (std::f64::consts::TAU * x * m as f64 * df).cos();
    }
    acc
}

pub(crate) fn lp_of_samples(samples: &[f64], step: f64, p: f64) -> f64 {
    if p.is_infinite() {
        samples.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    } else {
        let sum: f64 = samples.iter().map(|&v| v.abs().powf(p)).sum();
        (step * sum).powf(1.0 / p)
    }
}

/// exp(2 pi i t).
pub fn unit_phase(t: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex64::new(c, s)
}
