//! Exact calculus for multipliers that are sums of dyadic dilates of a
//! smooth bump, acting on sums of modulated band-limited envelopes.
//!
//! Every frequency-support question is decided by exact dyadic-rational
//! interval arithmetic, so an application either resolves symbolically
//! (each bump dilate is flat or disjoint on each modulation's spectrum)
//! or aborts with `PartialOverlap`; nothing is silently approximated.

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::envelope::{unit_phase, Envelope, EnvelopeError};
use crate::parallel;
use crate::profile::SmoothProfile;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum BumpError {
    #[error("partial overlap: bump scale {scale} dilated by 2^{k} on modulation frequency 2^{freq}")]
    PartialOverlap { scale: i64, k: i64, freq: i64 },
    #[error(transparent)]
    OutOfWindow(#[from] EnvelopeError),
    #[error("dilation exponent {exp} cannot be materialized in double precision")]
    DilationOverflow { exp: i64 },
    #[error("bad serialized form: {0}")]
    BadFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapClass {
    /// The dilated flat region covers the whole modulation spectrum.
    Flat,
    /// The dilated support misses the modulation spectrum entirely.
    Disjoint,
    /// Anything in between; the exact calculus refuses these.
    Partial,
}

/// Spectrum of the modulation e^{2 pi i 2^j x} Psi(x): [2^j - rho, 2^j + rho]
/// with rho the envelope's hat-support radius.
fn modulation_spectrum(envelope: &Envelope, freq: i64) -> DyadicInterval {
    let rho = envelope.hat_profile().support_interval().hi;
    let center = Dyadic::pow2(freq);
    DyadicInterval::new(center.add(rho.neg()), center.add(rho))
}

/// Classify how the bump at scale `scale`, dilated by 2^k (i.e. evaluated as
/// profile(2^{k-scale} |xi|)), sits relative to the spectrum of the
/// modulation at frequency exponent `freq`. Exact.
pub fn overlap_class(
    scale: i64,
    k: i64,
    freq: i64,
    profile: &SmoothProfile,
    envelope: &Envelope,
) -> OverlapClass {
    debug_assert!(freq >= 1);
    let spectrum = modulation_spectrum(envelope, freq);
    let d = scale - k;
    let flat = profile.flat_interval().mul_pow2(d);
    if flat.contains_interval(&spectrum) {
        return OverlapClass::Flat;
    }
    let support = profile.support_interval().mul_pow2(d);
    if !support.intersects(&spectrum) {
        return OverlapClass::Disjoint;
    }
    OverlapClass::Partial
}

/// One dilate of the profile: coeff * profile(2^{-scale} |xi|).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpTerm {
    pub scale: i64,
    pub coeff: Complex64,
}

/// A multiplier m(xi) = sum_i coeff_i * profile(2^{-scale_i} |xi|).
#[derive(Debug, Clone)]
pub struct BumpSumMultiplier {
    terms: Vec<BumpTerm>,
    profile: SmoothProfile,
}

impl BumpSumMultiplier {
    /// Terms are sorted by scale; duplicate scales merge by coefficient
    /// addition and exact-zero coefficients are dropped.
    pub fn new(mut terms: Vec<BumpTerm>, profile: SmoothProfile) -> Self {
        assert!(profile.support.0 > 0.0, "multiplier profile must vanish near the origin");
        terms.sort_by_key(|t| t.scale);
        let mut merged: Vec<BumpTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.scale == t.scale => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        BumpSumMultiplier { terms: merged, profile }
    }

    pub fn terms(&self) -> &[BumpTerm] {
        &self.terms
    }

    pub fn profile(&self) -> &SmoothProfile {
        &self.profile
    }

    pub fn coeff_at_scale(&self, scale: i64) -> Option<Complex64> {
        self.terms
            .binary_search_by_key(&scale, |t| t.scale)
            .ok()
            .map(|i| self.terms[i].coeff)
    }

    /// All scales shifted by `s`; the multiplier xi -> m(2^{-s} xi).
    pub fn shift_scales(&self, s: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| BumpTerm { scale: t.scale + s, coeff: t.coeff })
            .collect();
        BumpSumMultiplier { terms, profile: self.profile.clone() }
    }

    /// m(2^k xi) for xi of moderate size. Only the few scales near
    /// k + log2|xi| can contribute, so arbitrarily large scale exponents
    /// never materialize as floats.
    pub fn eval_dilated(&self, k: i64, xi: f64) -> Complex64 {
        let r = xi.abs();
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let e = r.log2().floor() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for scale in (k + e - 2)..=(k + e + 2) {
            if let Some(c) = self.coeff_at_scale(scale) {
                let u = r * 2f64.powi((k - scale) as i32);
                acc += c * self.profile.eval(u);
            }
        }
        acc
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        self.eval_dilated(0, xi)
    }

    /// order-th derivative of xi -> m(2^k xi), for xi > 0, order <= 4.
    pub fn derivative_dilated(&self, k: i64, xi: f64, order: usize) -> Complex64 {
        debug_assert!(xi > 0.0);
        let e = xi.log2().floor() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for scale in (k + e - 2)..=(k + e + 2) {
            if let Some(c) = self.coeff_at_scale(scale) {
                let s = 2f64.powi((k - scale) as i32);
                acc += c * (self.profile.derivative(xi * s, order) * s.powi(order as i32));
            }
        }
        acc
    }

    /// Contiguous range of dilation offsets d = scale - k for which the
    /// dilated support can intersect the spectrum at frequency 2^freq.
    fn offset_range(&self, envelope: &Envelope, freq: i64) -> (i64, i64) {
        let spectrum = modulation_spectrum(envelope, freq);
        let support = self.profile.support_interval();
        let mut lo = freq;
        while support.mul_pow2(lo - 1).intersects(&spectrum) {
            lo -= 1;
        }
        let mut hi = freq;
        while support.mul_pow2(hi + 1).intersects(&spectrum) {
            hi += 1;
        }
        if !support.mul_pow2(freq).intersects(&spectrum) {
            // Degenerate profiles may miss the center offset; widen by scan.
            for d in (freq - 70)..=(freq + 70) {
                if support.mul_pow2(d).intersects(&spectrum) {
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
        }
        (lo, hi)
    }

    /// Apply m(2^k .) to f, exactly. Each (bump term, modulation term) pair
    /// must be flat or disjoint; a flat pair multiplies coefficients.
    pub fn apply_dilated(
        &self,
        k: i64,
        f: &ModulatedFunction,
    ) -> Result<ModulatedFunction, BumpError> {
        // A nonzero ambient dilation of f rescales its spectrum; fold it
        // into the dilation exponent of the multiplier.
        let k_eff = k + f.dilation_exp;
        let mut out_terms = Vec::with_capacity(f.terms.len());
        for t in &f.terms {
            let (dlo, dhi) = self.offset_range(&f.envelope, t.freq);
            let mut coeff = Complex64::new(0.0, 0.0);
            for d in dlo..=dhi {
                let scale = k_eff + d;
                if let Some(c) = self.coeff_at_scale(scale) {
                    match overlap_class(scale, k_eff, t.freq, &self.profile, &f.envelope) {
                        OverlapClass::Flat => coeff += c,
                        OverlapClass::Disjoint => {}
                        OverlapClass::Partial => {
                            return Err(BumpError::PartialOverlap { scale, k, freq: t.freq });
                        }
                    }
                }
            }
            let coeff = coeff * t.coeff;
            if coeff != Complex64::new(0.0, 0.0) {
                out_terms.push(ModTerm { freq: t.freq, coeff });
            }
        }
        Ok(ModulatedFunction {
            terms: out_terms,
            envelope: f.envelope.clone(),
            scalar: f.scalar,
            dilation_exp: f.dilation_exp,
            dilation_norm_p: f.dilation_norm_p,
        })
    }

    /// sup over k in `ks` of |(m(2^k .) applied to f)(x)| at each point.
    pub fn maximal_pointwise(
        &self,
        ks: &[i64],
        f: &ModulatedFunction,
        points: &[f64],
    ) -> Result<Vec<f64>, BumpError> {
        let freqs: Vec<i64> = f.terms.iter().map(|t| t.freq).collect();
        let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(ks.len());
        for &k in ks {
            let applied = self.apply_dilated(k, f)?;
            let mut row = vec![Complex64::new(0.0, 0.0); freqs.len()];
            for t in &applied.terms {
                let idx = freqs.iter().position(|&j| j == t.freq).expect("support soundness");
                row[idx] = t.coeff;
            }
            rows.push(row);
        }
        let dil = f.materialized_dilation()?;
        let pref = f.materialized_prefactor()?;
        // Envelope values first so window errors surface before the sweep.
        let psi: Vec<f64> = points
            .iter()
            .map(|&x| f.envelope.eval(x * dil))
            .collect::<Result<_, _>>()?;
        let two_pow: Vec<f64> = freqs.iter().map(|&j| 2f64.powi(j as i32)).collect();
        Ok(parallel::map_range(points.len(), |i| {
            let y = points[i] * dil;
            let phases: Vec<Complex64> = two_pow.iter().map(|&w| unit_phase(w * y)).collect();
            let mut best = 0.0f64;
            for row in &rows {
                let mut s = Complex64::new(0.0, 0.0);
                for (c, ph) in row.iter().zip(&phases) {
                    s += c * ph;
                }
                best = best.max(s.norm());
            }
            best * psi[i].abs() * (f.scalar * pref).abs()
        }))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BumpJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, BumpError> {
        let parsed: BumpJson = serde_json::from_value(v.clone())
            .map_err(|e| BumpError::BadFormat(e.to_string()))?;
        parsed.try_into()
    }
}

/// One modulation: coeff * e^{2 pi i 2^freq x}, freq >= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModTerm {
    pub freq: i64,
    pub coeff: Complex64,
}

/// scalar * 2^{d*e/p} * sum_j coeff_j e^{2 pi i 2^j (2^e x)} Psi(2^e x),
/// where e is the (symbolic) global dilation exponent and the power-of-two
/// prefactor is present only when the function is L^p-normalized for some p.
#[derive(Debug, Clone)]
pub struct ModulatedFunction {
    terms: Vec<ModTerm>,
    envelope: Arc<Envelope>,
    scalar: f64,
    dilation_exp: i64,
    dilation_norm_p: Option<f64>,
}

impl ModulatedFunction {
    pub fn new(mut terms: Vec<ModTerm>, envelope: Arc<Envelope>) -> Self {
        assert!(terms.iter().all(|t| t.freq >= 1));
        terms.sort_by_key(|t| t.freq);
        for pair in terms.windows(2) {
            assert!(pair[0].freq != pair[1].freq, "modulation frequencies must be distinct");
        }
        ModulatedFunction { terms, envelope, scalar: 1.0, dilation_exp: 0, dilation_norm_p: None }
    }

    pub fn zero(envelope: Arc<Envelope>) -> Self {
        Self::new(Vec::new(), envelope)
    }

    pub fn with_scalar(mut self, scalar: f64) -> Self {
        self.scalar = scalar;
        self
    }

    /// Compose with x -> 2^e x; when `norm_p` is given, attach the exact
    /// L^p-normalizing prefactor 2^{e/p} symbolically.
    pub fn with_dilation(mut self, e: i64, norm_p: Option<f64>) -> Self {
        self.dilation_exp = e;
        self.dilation_norm_p = norm_p;
        self
    }

    pub fn terms(&self) -> &[ModTerm] {
        &self.terms
    }

    pub fn envelope(&self) -> &Arc<Envelope> {
        &self.envelope
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn dilation_exp(&self) -> i64 {
        self.dilation_exp
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.scalar == 0.0
    }

    fn materialized_dilation(&self) -> Result<f64, BumpError> {
        if self.dilation_exp.abs() > 900 {
            return Err(BumpError::DilationOverflow { exp: self.dilation_exp });
        }
        Ok(2f64.powi(self.dilation_exp as i32))
    }

    fn materialized_prefactor(&self) -> Result<f64, BumpError> {
        match self.dilation_norm_p {
            None => Ok(1.0),
            Some(p) => {
                let e = self.dilation_exp as f64 / p;
                if e.abs() > 900.0 {
                    return Err(BumpError::DilationOverflow { exp: self.dilation_exp });
                }
                Ok(e.exp2())
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, BumpError> {
        let dil = self.materialized_dilation()?;
        let pref = self.materialized_prefactor()?;
        let y = x * dil;
        let psi = self.envelope.eval(y)?;
        let mut s = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            s += t.coeff * unit_phase(2f64.powi(t.freq as i32) * y);
        }
        Ok(s * (psi * self.scalar * pref))
    }

    /// Term-wise sum; requires equal scalar/dilation decoration.
    pub fn add(&self, other: &ModulatedFunction) -> ModulatedFunction {
        assert!(Arc::ptr_eq(&self.envelope, &other.envelope));
        assert_eq!(self.scalar, other.scalar);
        assert_eq!(self.dilation_exp, other.dilation_exp);
        let mut terms = self.terms.clone();
        for t in &other.terms {
            match terms.iter_mut().find(|u| u.freq == t.freq) {
                Some(u) => u.coeff += t.coeff,
                None => terms.push(*t),
            }
        }
        terms.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        let mut out = ModulatedFunction::new(terms, self.envelope.clone());
        out.scalar = self.scalar;
        out.dilation_exp = self.dilation_exp;
        out.dilation_norm_p = self.dilation_norm_p;
        out
    }

    /// L^p norm. The global dilation is removed by the exact change of
    /// variables ||2^{e/p0} g(2^e .)||_p = 2^{e(1/p0 - 1/p)} ||g||_p, so the
    /// quadrature always runs on the undilated core.
    pub fn lp_norm(&self, p: f64, log2_points: u32) -> Result<f64, BumpError> {
        let core = self.core_lp_norm(p, log2_points)?;
        let e = self.dilation_exp as f64;
        let exponent = match self.dilation_norm_p {
            Some(p0) => e * (1.0 / p0 - 1.0 / p),
            None => -e / p,
        };
        if exponent.abs() > 900.0 {
            return Err(BumpError::DilationOverflow { exp: self.dilation_exp });
        }
        Ok(core * exponent.exp2())
    }

    /// Quadrature L^p norm of scalar * sum_j c_j e^{2 pi i 2^j x} Psi(x).
    fn core_lp_norm(&self, p: f64, log2_points: u32) -> Result<f64, BumpError> {
        let n = 1usize << log2_points;
        let w = self.envelope.window - 1.0;
        let step = 2.0 * w / n as f64;
        let vals = parallel::map_range(n, |i| {
            let x = -w + i as f64 * step;
            let psi = self.envelope.eval(x).expect("inside window");
            let mut s = Complex64::new(0.0, 0.0);
            for t in &self.terms {
                s += t.coeff * unit_phase(2f64.powi(t.freq as i32) * x);
            }
            (s.norm() * psi.abs() * self.scalar.abs()).powf(p)
        });
        Ok((step * vals.iter().sum::<f64>()).powf(1.0 / p))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ModJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, BumpError> {
        let parsed: ModJson = serde_json::from_value(v.clone())
            .map_err(|e| BumpError::BadFormat(e.to_string()))?;
        parsed.try_into()
    }
}

// --- serialized forms ---

#[derive(Serialize, Deserialize)]
struct BumpTermJson {
    scale: i64,
    coeff: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct BumpJson {
    terms: Vec<BumpTermJson>,
    profile: String,
}

impl From<&BumpSumMultiplier> for BumpJson {
    fn from(m: &BumpSumMultiplier) -> Self {
        BumpJson {
            terms: m
                .terms
                .iter()
                .map(|t| BumpTermJson { scale: t.scale, coeff: [t.coeff.re, t.coeff.im] })
                .collect(),
            profile: m.profile.name.to_string(),
        }
    }
}

impl TryFrom<BumpJson> for BumpSumMultiplier {
    type Error = BumpError;
    fn try_from(j: BumpJson) -> Result<Self, BumpError> {
        let profile = SmoothProfile::by_name(&j.profile)
            .ok_or_else(|| BumpError::BadFormat(format!("unknown profile {:?}", j.profile)))?;
        let terms = j
            .terms
            .into_iter()
            .map(|t| BumpTerm { scale: t.scale, coeff: Complex64::new(t.coeff[0], t.coeff[1]) })
            .collect();
        Ok(BumpSumMultiplier::new(terms, profile))
    }
}

#[derive(Serialize, Deserialize)]
struct ModTermJson {
    freq: i64,
    coeff: [f64; 2],
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}
fn is_zero_i64(v: &i64) -> bool {
    *v == 0
}
fn one() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
struct ModJson {
    terms: Vec<ModTermJson>,
    envelope: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    scalar: f64,
    #[serde(default, skip_serializing_if = "is_zero_i64")]
    dilation_exp: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dilation_norm_p: Option<f64>,
}

impl From<&ModulatedFunction> for ModJson {
    fn from(f: &ModulatedFunction) -> Self {
        ModJson {
            terms: f
                .terms
                .iter()
                .map(|t| ModTermJson { freq: t.freq, coeff: [t.coeff.re, t.coeff.im] })
                .collect(),
            envelope: f.envelope.name.to_string(),
            scalar: f.scalar,
            dilation_exp: f.dilation_exp,
            dilation_norm_p: f.dilation_norm_p,
        }
    }
}

impl TryFrom<ModJson> for ModulatedFunction {
    type Error = BumpError;
    fn try_from(j: ModJson) -> Result<Self, BumpError> {
        if j.envelope != "psi-standard" {
            return Err(BumpError::BadFormat(format!("unknown envelope {:?}", j.envelope)));
        }
        let terms = j
            .terms
            .into_iter()
            .map(|t| ModTerm { freq: t.freq, coeff: Complex64::new(t.coeff[0], t.coeff[1]) })
            .collect();
        let mut f = ModulatedFunction::new(terms, Envelope::standard());
        f.scalar = j.scalar;
        f.dilation_exp = j.dilation_exp;
        f.dilation_norm_p = j.dilation_norm_p;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_bump(scale: i64) -> BumpSumMultiplier {
        BumpSumMultiplier::new(
            vec![BumpTerm { scale, coeff: Complex64::new(1.0, 0.0) }],
            SmoothProfile::standard_bump(),
        )
    }

    fn single_mod(freq: i64, coeff: Complex64) -> ModulatedFunction {
        ModulatedFunction::new(vec![ModTerm { freq, coeff }], Envelope::standard())
    }

    #[test]
    fn overlap_matched_scale_is_flat() {
        let profile = SmoothProfile::standard_bump();
        let env = Envelope::standard();
        for j in 1..40 {
            for k in [-3i64, 0, 7, 2000] {
                assert_eq!(overlap_class(k + j, k, j, &profile, &env), OverlapClass::Flat);
                assert_eq!(overlap_class(k + j + 1, k, j, &profile, &env), OverlapClass::Disjoint);
                assert_eq!(overlap_class(k + j - 1, k, j, &profile, &env), OverlapClass::Disjoint);
            }
        }
    }

    #[test]
    fn neighbor_offsets_disjoint_by_dense_sampling() {
        // numerical counterpart of the exact interval decision
        let profile = SmoothProfile::standard_bump();
        let env = Envelope::standard();
        for j in 1..6i64 {
            for dd in [-1i64, 1] {
                let d = j + dd;
                let mut max_prod = 0.0f64;
                for i in 0..20000 {
                    let xi = (1 << j) as f64 - 0.125 + 0.25 * i as f64 / 20000.0;
                    let bump = profile.eval(xi * 2f64.powi(-d as i32));
                    let hat = env.hat(xi - (1 << j) as f64);
                    max_prod = max_prod.max(bump * hat);
                }
                assert_eq!(max_prod, 0.0, "j={j} offset={dd}");
            }
        }
    }

    #[test]
    fn apply_matched_scale_returns_f() {
        let env = Envelope::standard();
        let c = Complex64::new(0.3, -0.7);
        let f = single_mod(3, c);
        let m = single_bump(9);
        let out = m.apply_dilated(6, &f).unwrap();
        assert_eq!(out.terms().len(), 1);
        assert_eq!(out.terms()[0].freq, 3);
        assert_eq!(out.terms()[0].coeff, c);
        drop(env);
    }

    #[test]
    fn apply_zero_multiplier_gives_zero() {
        let m = BumpSumMultiplier::new(
            vec![BumpTerm { scale: 4, coeff: Complex64::new(0.0, 0.0) }],
            SmoothProfile::standard_bump(),
        );
        let f = single_mod(2, Complex64::new(1.0, 0.0));
        let out = m.apply_dilated(2, &f).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn linearity_of_application() {
        let m = BumpSumMultiplier::new(
            vec![
                BumpTerm { scale: 4, coeff: Complex64::new(1.0, 2.0) },
                BumpTerm { scale: 5, coeff: Complex64::new(0.0, -1.0) },
            ],
            SmoothProfile::standard_bump(),
        );
        let f1 = single_mod(2, Complex64::new(1.0, 0.5));
        let f2 = single_mod(3, Complex64::new(-2.0, 0.0));
        let sum = f1.add(&f2);
        let k = 2;
        let lhs = m.apply_dilated(k, &sum).unwrap();
        let rhs = m.apply_dilated(k, &f1).unwrap().add(&m.apply_dilated(k, &f2).unwrap());
        assert_eq!(lhs.terms(), rhs.terms());
    }

    #[test]
    fn scaling_covariance() {
        let m = single_bump(7);
        let f = single_mod(4, Complex64::new(0.2, 0.9));
        let base = m.apply_dilated(3, &f).unwrap();
        for s in [-5i64, 1, 40, 3000] {
            let shifted = m.shift_scales(s).apply_dilated(3 + s, &f).unwrap();
            assert_eq!(base.terms(), shifted.terms());
        }
    }

    #[test]
    fn support_soundness() {
        let m = BumpSumMultiplier::new(
            (0..12)
                .map(|i| BumpTerm { scale: i, coeff: Complex64::new(1.0, (i % 3) as f64) })
                .collect(),
            SmoothProfile::standard_bump(),
        );
        let f = ModulatedFunction::new(
            vec![
                ModTerm { freq: 2, coeff: Complex64::new(1.0, 0.0) },
                ModTerm { freq: 5, coeff: Complex64::new(0.0, 1.0) },
            ],
            Envelope::standard(),
        );
        for k in -4..8 {
            let out = m.apply_dilated(k, &f).unwrap();
            for t in out.terms() {
                assert!(f.terms().iter().any(|u| u.freq == t.freq));
            }
        }
    }

    #[test]
    fn pointwise_eval_basics() {
        let env = Envelope::standard();
        let zero = ModulatedFunction::zero(env.clone());
        assert_eq!(zero.eval(0.37).unwrap(), Complex64::new(0.0, 0.0));
        let f = single_mod(5, Complex64::new(1.0, 0.0));
        let at0 = f.eval(0.0).unwrap();
        assert!((at0.re - env.value_at_origin()).abs() < 1e-10);
        assert!(at0.im.abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let m = BumpSumMultiplier::new(
            vec![
                BumpTerm { scale: 2, coeff: Complex64::new(1.0, 0.0) },
                BumpTerm { scale: 3, coeff: Complex64::new(0.0, -1.0) },
            ],
            SmoothProfile::standard_bump(),
        );
        let v = m.to_json();
        assert_eq!(v["profile"], "phi-standard");
        let back = BumpSumMultiplier::from_json(&v).unwrap();
        assert_eq!(back.terms(), m.terms());

        let f = single_mod(2, Complex64::new(0.5, 0.5));
        let v = f.to_json();
        assert_eq!(v["envelope"], "psi-standard");
        let back = ModulatedFunction::from_json(&v).unwrap();
        assert_eq!(back.terms(), f.terms());
    }
}
