//! Smooth compactly supported radial profiles.
//!
//! Every profile is built from the C^inf transition ramp
//! `tau(t) = eta(t) / (eta(t) + eta(1-t))` with `eta(t) = exp(-1/t)`,
//! so values, all derivatives up to order 4, and the support/flat
//! endpoints (dyadic rationals) are available exactly.

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::jet::Jet;

/// eta(t) = exp(-1/t) for t > 0, else 0.
fn eta(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Monotone C^inf ramp from 0 at t<=0 to 1 at t>=1.
pub fn transition(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = eta(t);
        a / (a + eta(1.0 - t))
    }
}

/// Jet of the transition ramp at `t`, for an input with the given slope
/// (the chain rule for an affine reparametrization).
pub fn transition_jet(t: f64, slope: f64) -> Jet {
    if t <= 0.0 {
        Jet::constant(0.0)
    } else if t >= 1.0 {
        Jet::constant(1.0)
    } else {
        let tj = Jet::affine(t, slope);
        let one_minus = Jet::constant(1.0).sub(tj);
        let num = Jet::constant(0.0).sub(tj.recip()).exp();
        let den_b = Jet::constant(0.0).sub(one_minus.recip()).exp();
        // Denominator is bounded below by eta(1/2) on (0,1); no singularity.
        num.div(num.add(den_b))
    }
}

/// Rising ramp equal to 0 for r <= lo and 1 for r >= hi.
pub fn ramp_up(r: f64, lo: f64, hi: f64) -> f64 {
    transition((r - lo) / (hi - lo))
}

/// A smooth radial profile: 0 outside (a, b), 1 on [c, d], monotone ramps
/// in between. The flat region may touch the left endpoint (a == c), in
/// which case there is no left ramp.
#[derive(Debug, Clone)]
pub struct SmoothProfile {
    pub name: &'static str,
    pub support: (f64, f64),
    pub flat: (f64, f64),
    support_dyadic: DyadicInterval,
    flat_dyadic: DyadicInterval,
}

impl SmoothProfile {
    /// The unit-scale bump: support [3/4, 5/4], flat on [7/8, 9/8].
    pub fn standard_bump() -> Self {
        SmoothProfile {
            name: "phi-standard",
            support: (0.75, 1.25),
            flat: (0.875, 1.125),
            support_dyadic: DyadicInterval::new(Dyadic::new(3, -2), Dyadic::new(5, -2)),
            flat_dyadic: DyadicInterval::new(Dyadic::new(7, -3), Dyadic::new(9, -3)),
        }
    }

    /// Frequency profile of the band-limited envelope: support [0, 1/8],
    /// flat on [0, 1/16].
    pub fn envelope_hat() -> Self {
        SmoothProfile {
            name: "envelope-hat",
            support: (0.0, 0.125),
            flat: (0.0, 0.0625),
            support_dyadic: DyadicInterval::new(Dyadic::zero(), Dyadic::new(1, -3)),
            flat_dyadic: DyadicInterval::new(Dyadic::zero(), Dyadic::new(1, -4)),
        }
    }

    /// Octave cutoff: support [1/2, 3/2], flat on [3/4, 1]. Its dyadic
    /// dilates telescope to a partition of unity away from the origin.
    pub fn octave_cutoff() -> Self {
        SmoothProfile {
            name: "octave-cutoff",
            support: (0.5, 1.5),
            flat: (0.75, 1.0),
            support_dyadic: DyadicInterval::new(Dyadic::new(1, -1), Dyadic::new(3, -1)),
            flat_dyadic: DyadicInterval::new(Dyadic::new(3, -2), Dyadic::new(1, 0)),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "phi-standard" => Some(Self::standard_bump()),
            "envelope-hat" => Some(Self::envelope_hat()),
            "octave-cutoff" => Some(Self::octave_cutoff()),
            _ => None,
        }
    }

    pub fn support_interval(&self) -> DyadicInterval {
        self.support_dyadic
    }

    pub fn flat_interval(&self) -> DyadicInterval {
        self.flat_dyadic
    }

    pub fn eval(&self, r: f64) -> f64 {
        let (a, b) = self.support;
        let (c, d) = self.flat;
        if r >= b || r < a {
            0.0
        } else if r >= c && r <= d {
            1.0
        } else if r < c {
            transition((r - a) / (c - a))
        } else {
            transition((b - r) / (b - d))
        }
    }

    /// The order-th derivative, order <= 4. Order 0 is the value.
    pub fn derivative(&self, r: f64, order: usize) -> f64 {
        self.jet(r).derivative(order)
    }

    /// Jet of the profile at radius r.
    pub fn jet(&self, r: f64) -> Jet {
        let (a, b) = self.support;
        let (c, d) = self.flat;
        if r >= b || r < a {
            Jet::constant(0.0)
        } else if r >= c && r <= d {
            Jet::constant(1.0)
        } else if r < c {
            transition_jet((r - a) / (c - a), 1.0 / (c - a))
        } else {
            transition_jet((b - r) / (b - d), -1.0 / (b - d))
        }
    }
}
