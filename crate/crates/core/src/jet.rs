//! Truncated Taylor arithmetic up to order 4.
//!
//! A [`Jet`] carries the value of a function together with its first four
//! derivatives at a point, stored as Taylor coefficients `c[k] = f^(k)/k!`.
//! Composing jets through `exp`, reciprocals and products yields exact
//! derivatives of the smooth transition ramps used by the bump profiles,
//! with no finite differencing.

pub const ORDER: usize = 4;

/// Taylor coefficients c[0..=4] of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub c: [f64; ORDER + 1],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        Jet { c }
    }

    /// The identity function evaluated at `v`: value `v`, slope 1.
    pub fn variable(v: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        c[1] = 1.0;
        Jet { c }
    }

    /// Affine reparametrization: the jet of `s*t + off` as a function of `t`.
    pub fn affine(v: f64, slope: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        c[1] = slope;
        Jet { c }
    }

    pub fn add(self, rhs: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for k in 0..=ORDER {
            c[k] = self.c[k] + rhs.c[k];
        }
        Jet { c }
    }

    pub fn sub(self, rhs: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for k in 0..=ORDER {
            c[k] = self.c[k] - rhs.c[k];
        }
        Jet { c }
    }

    pub fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for i in 0..=ORDER {
            for j in 0..=ORDER - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }

    pub fn scale(self, s: f64) -> Jet {
        let mut c = self.c;
        for v in &mut c {
            *v *= s;
        }
        Jet { c }
    }

    /// Multiplicative inverse; requires a nonzero value coefficient.
    pub fn recip(self) -> Jet {
        // Power series inversion: (a0 + r)^{-1}, solved coefficient by coefficient.
        let a0 = self.c[0];
        debug_assert!(a0 != 0.0);
        let mut c = [0.0; ORDER + 1];
        c[0] = 1.0 / a0;
        for k in 1..=ORDER {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * c[k - j];
            }
            c[k] = -s / a0;
        }
        Jet { c }
    }

    pub fn div(self, rhs: Jet) -> Jet {
        self.mul(rhs.recip())
    }

    /// exp of the jet.
    pub fn exp(self) -> Jet {
        // e^{a0} * exp(series without constant term), via the ODE y' = u' y.
        let mut c = [0.0; ORDER + 1];
        c[0] = self.c[0].exp();
        for k in 1..=ORDER {
            let mut s = 0.0;
            for j in 1..=k {
                s += (j as f64) * self.c[j] * c[k - j];
            }
            c[k] = s / k as f64;
        }
        Jet { c }
    }

    /// The k-th derivative encoded by this jet.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }
}
