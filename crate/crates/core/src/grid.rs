//! Periodic-grid spectral engine: sampled functions and symbols on a
//! uniform torus grid, multiplier application by FFT, quadrature norms,
//! maximal functions over finite dilation sets, weighted kernel norms and
//! Sobolev norms, and Mikhlin-type seminorm estimates.
//!
//! Conventions: spatial points x_j = -L/2 + jL/n per axis, frequency
//! lattice {q/L : q in [-n/2, n/2)} per axis, transforms normalized so that
//! dft approximates the continuum Fourier integral.

use crate::bump::BumpSumMultiplier;
use crate::parallel;
use crate::profile::SmoothProfile;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("grid specs do not match")]
    SpecMismatch,
    #[error("empty dilation set")]
    EmptyDilationSet,
    #[error("sampled symbol cannot be evaluated at dilation t={t}")]
    NotEvaluable { t: f64 },
    #[error("kernel mass near the period boundary is {fraction:.3e} of total; period too short")]
    AliasWarning { fraction: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad serialized form: {0}")]
    BadFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    pub length: f64,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, length: f64) -> Self {
        assert!(dim == 1 || dim == 2);
        assert!(n >= 16 && n.is_power_of_two());
        assert!(length > 0.0);
        GridSpec { dim, n, length }
    }

    pub fn points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn cell(&self) -> f64 {
        self.length / self.n as f64
    }

    fn axis_x(&self, j: usize) -> f64 {
        (j as f64 / self.n as f64 - 0.5) * self.length
    }

    fn axis_freq(&self, q: usize) -> f64 {
        let s = if q < self.n / 2 { q as i64 } else { q as i64 - self.n as i64 };
        s as f64 / self.length
    }

    /// Flat index -> per-axis indices (row-major, axis 0 slowest).
    fn unravel(&self, idx: usize) -> [usize; 2] {
        match self.dim {
            1 => [idx, 0],
            _ => [idx / self.n, idx % self.n],
        }
    }

    pub fn point(&self, idx: usize) -> [f64; 2] {
        let ij = self.unravel(idx);
        match self.dim {
            1 => [self.axis_x(ij[0]), 0.0],
            _ => [self.axis_x(ij[0]), self.axis_x(ij[1])],
        }
    }

    pub fn freq(&self, idx: usize) -> [f64; 2] {
        let ij = self.unravel(idx);
        match self.dim {
            1 => [self.axis_freq(ij[0]), 0.0],
            _ => [self.axis_freq(ij[0]), self.axis_freq(ij[1])],
        }
    }

    /// Distance to the origin in the torus metric.
    pub fn torus_dist(&self, x: &[f64; 2]) -> f64 {
        let per_axis = |v: f64| {
            let a = v.abs();
            a.min(self.length - a)
        };
        match self.dim {
            1 => per_axis(x[0]),
            _ => per_axis(x[0]).hypot(per_axis(x[1])),
        }
    }

    /// Parity of the index sum, the sign flip that recenters transforms.
    fn parity(&self, idx: usize) -> f64 {
        let ij = self.unravel(idx);
        let s = match self.dim {
            1 => ij[0],
            _ => ij[0] + ij[1],
        };
        if s % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), spec.points());
        GridFunction { spec, values }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64; 2]) -> Complex64 + Sync + Send) -> Self {
        let values = parallel::map_range(spec.points(), |i| f(&spec.point(i)));
        GridFunction { spec, values }
    }

    pub fn zero(spec: GridSpec) -> Self {
        GridFunction { spec, values: vec![Complex64::new(0.0, 0.0); spec.points()] }
    }

    /// Unit-mass grid delta at the origin.
    pub fn delta(spec: GridSpec) -> Self {
        let mut f = Self::zero(spec);
        let mid = match spec.dim {
            1 => spec.n / 2,
            _ => (spec.n / 2) * spec.n + spec.n / 2,
        };
        f.values[mid] = Complex64::new(spec.cell().powi(-(spec.dim as i32)), 0.0);
        f
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm_values(&self.values, self.spec, p)
    }

    /// Cyclic translation by whole cells along axis 0.
    pub fn translate_cells(&self, shift: usize) -> GridFunction {
        let n = self.spec.n;
        let row = if self.spec.dim == 1 { 1 } else { n };
        let values = parallel::map_range(self.values.len(), |i| {
            let (a, b) = (i / row, i % row);
            self.values[((a + n - shift % n) % n) * row + b]
        });
        GridFunction { spec: self.spec, values }
    }
}

pub fn lp_norm_values(values: &[Complex64], spec: GridSpec, p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    }
    let sums = parallel::map_range(values.len(), |i| values[i].norm().powf(p));
    (spec.cell().powi(spec.dim as i32) * sums.iter().sum::<f64>()).powf(1.0 / p)
}

/// A symbol that can be evaluated at 2^k xi without materializing 2^k.
pub trait DilatableSymbol: Send + Sync {
    fn eval_dilated(&self, k: i64, xi: &[f64]) -> Complex64;
}

impl DilatableSymbol for BumpSumMultiplier {
    fn eval_dilated(&self, k: i64, xi: &[f64]) -> Complex64 {
        let r = match xi.len() {
            1 => xi[0].abs(),
            _ => xi[0].hypot(xi[1]),
        };
        BumpSumMultiplier::eval_dilated(self, k, r)
    }
}

/// Wrap a closure (k, xi) -> value as a symbol.
pub struct FnSymbol<F>(pub F);

impl<F: Fn(i64, &[f64]) -> Complex64 + Send + Sync> DilatableSymbol for FnSymbol<F> {
    fn eval_dilated(&self, k: i64, xi: &[f64]) -> Complex64 {
        (self.0)(k, xi)
    }
}

#[derive(Clone)]
enum SymbolData {
    Sampled(Vec<Complex64>),
    Lazy(Arc<dyn DilatableSymbol>),
}

#[derive(Clone)]
pub struct GridSymbol {
    pub spec: GridSpec,
    data: SymbolData,
}

impl GridSymbol {
    pub fn sampled(spec: GridSpec, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), spec.points());
        GridSymbol { spec, data: SymbolData::Sampled(values) }
    }

    pub fn lazy(spec: GridSpec, sym: Arc<dyn DilatableSymbol>) -> Self {
        GridSymbol { spec, data: SymbolData::Lazy(sym) }
    }

    pub fn constant(spec: GridSpec, c: Complex64) -> Self {
        GridSymbol::lazy(spec, Arc::new(FnSymbol(move |_, _: &[f64]| c)))
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.data, SymbolData::Sampled(_))
    }

    pub fn sample_values(&self) -> Vec<Complex64> {
        match &self.data {
            SymbolData::Sampled(v) => v.clone(),
            SymbolData::Lazy(_) => self.values_dilated(0, 1.0),
        }
    }

    /// Symbol sampled at 2^k s xi over the lattice.
    fn values_dilated(&self, k: i64, s: f64) -> Vec<Complex64> {
        match &self.data {
            SymbolData::Sampled(v) => {
                debug_assert!(k == 0 && s == 1.0);
                v.clone()
            }
            SymbolData::Lazy(sym) => parallel::map_range(self.spec.points(), |i| {
                let xi = self.spec.freq(i);
                let scaled = [xi[0] * s, xi[1] * s];
                sym.eval_dilated(k, &scaled[..self.spec.dim])
            }),
        }
    }
}

// --- transforms ---

static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();

fn plan(n: usize, inverse: bool) -> Arc<dyn rustfft::Fft<f64>> {
    let mut planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new())).lock().unwrap();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Raw per-axis FFT without normalization or recentering.
fn fft_nd(values: &mut [Complex64], spec: GridSpec, inverse: bool) {
    let n = spec.n;
    let fft = plan(n, inverse);
    parallel::for_each_chunk_mut(values, n, |row| fft.process(row));
    if spec.dim == 2 {
        // Columns: transpose, batch, transpose back.
        let mut t = vec![Complex64::new(0.0, 0.0); values.len()];
        for i in 0..n {
            for j in 0..n {
                t[j * n + i] = values[i * n + j];
            }
        }
        parallel::for_each_chunk_mut(&mut t, n, |row| fft.process(row));
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = t[j * n + i];
            }
        }
    }
}

/// Continuum-normalized transform: dft(f)(xi_q) approximates the Fourier
/// integral of f. Satisfies Parseval with lattice measure L^{-d}.
pub fn dft(f: &GridFunction) -> GridSymbol {
    let spec = f.spec;
    let scale = spec.cell().powi(spec.dim as i32);
    let mut buf = f.values.clone();
    fft_nd(&mut buf, spec, false);
    // e^{-2 pi i x_j xi_q} = e^{-2 pi i jq/n} (-1)^q for x_j centered at -L/2.
    for (q, v) in buf.iter_mut().enumerate() {
        *v *= scale * spec.parity(q);
    }
    GridSymbol::sampled(spec, buf)
}

pub fn idft(s: &GridSymbol) -> GridFunction {
    let spec = s.spec;
    let mut buf: Vec<Complex64> = s.sample_values();
    for (q, v) in buf.iter_mut().enumerate() {
        *v *= spec.parity(q);
    }
    fft_nd(&mut buf, spec, true);
    let scale = spec.length.powi(-(spec.dim as i32));
    for v in buf.iter_mut() {
        *v *= scale;
    }
    GridFunction::new(spec, buf)
}

fn apply_spectrum(spectrum: &[Complex64], sym_vals: &[Complex64], spec: GridSpec) -> GridFunction {
    let inv_n = (spec.n as f64).powi(-(spec.dim as i32));
    let mut buf: Vec<Complex64> =
        spectrum.iter().zip(sym_vals).map(|(a, b)| a * b).collect();
    fft_nd(&mut buf, spec, true);
    for v in &mut buf {
        *v *= inv_n;
    }
    GridFunction::new(spec, buf)
}

/// Raw forward FFT of the samples; recentre phases cancel against the
/// inverse in `apply_spectrum`, so diagonal multiplication is exact.
fn raw_spectrum(f: &GridFunction) -> Vec<Complex64> {
    let mut buf = f.values.clone();
    fft_nd(&mut buf, f.spec, false);
    buf
}

/// f -> F^{-1}[m(t xi) f^(xi)]. Sampled symbols only admit t = 1.
pub fn apply_symbol(m: &GridSymbol, t: f64, f: &GridFunction) -> Result<GridFunction, GridError> {
    if m.spec != f.spec {
        return Err(GridError::SpecMismatch);
    }
    let (k, s) = split_dilation(t);
    if m.is_sampled() && t != 1.0 {
        return Err(GridError::NotEvaluable { t });
    }
    let sym_vals = m.values_dilated(k, s);
    Ok(apply_spectrum(&raw_spectrum(f), &sym_vals, f.spec))
}

/// f -> F^{-1}[m(2^k xi) f^(xi)] for arbitrary integer k.
pub fn apply_symbol_dyadic(
    m: &GridSymbol,
    k: i64,
    f: &GridFunction,
) -> Result<GridFunction, GridError> {
    if m.spec != f.spec {
        return Err(GridError::SpecMismatch);
    }
    if m.is_sampled() {
        if k == 0 {
            return apply_symbol(m, 1.0, f);
        }
        return Err(GridError::NotEvaluable { t: f64::INFINITY });
    }
    let sym_vals = m.values_dilated(k, 1.0);
    Ok(apply_spectrum(&raw_spectrum(f), &sym_vals, f.spec))
}

/// t = 2^k s with s in [1, 2).
fn split_dilation(t: f64) -> (i64, f64) {
    assert!(t > 0.0 && t.is_finite());
    let k = t.log2().floor() as i64;
    (k, t * 2f64.powi(-k as i32))
}

fn sup_fold(acc: &mut Vec<f64>, g: &GridFunction) {
    for (a, v) in acc.iter_mut().zip(&g.values) {
        *a = a.max(v.norm());
    }
}

fn realify(spec: GridSpec, acc: Vec<f64>) -> GridFunction {
    GridFunction::new(spec, acc.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
}

/// Pointwise sup over t in `ts` of |apply_symbol(m, t, f)|.
pub fn maximal(m: &GridSymbol, ts: &[f64], f: &GridFunction) -> Result<GridFunction, GridError> {
    if ts.is_empty() {
        return Err(GridError::EmptyDilationSet);
    }
    if m.spec != f.spec {
        return Err(GridError::SpecMismatch);
    }
    let spectrum = raw_spectrum(f);
    let mut acc = vec![0.0f64; f.values.len()];
    for &t in ts {
        let (k, s) = split_dilation(t);
        if m.is_sampled() && t != 1.0 {
            return Err(GridError::NotEvaluable { t });
        }
        let g = apply_spectrum(&spectrum, &m.values_dilated(k, s), f.spec);
        sup_fold(&mut acc, &g);
    }
    Ok(realify(f.spec, acc))
}

/// Dyadic maximal function: sup over k in `ks` of |F^{-1}[m(2^k xi) f^]|.
pub fn maximal_dyadic(
    m: &GridSymbol,
    ks: &[i64],
    f: &GridFunction,
) -> Result<GridFunction, GridError> {
    if ks.is_empty() {
        return Err(GridError::EmptyDilationSet);
    }
    if m.spec != f.spec {
        return Err(GridError::SpecMismatch);
    }
    if m.is_sampled() && ks.iter().any(|&k| k != 0) {
        return Err(GridError::NotEvaluable { t: f64::INFINITY });
    }
    let spectrum = raw_spectrum(f);
    let mut acc = vec![0.0f64; f.values.len()];
    for &k in ks {
        let g = apply_spectrum(&spectrum, &m.values_dilated(k, 1.0), f.spec);
        sup_fold(&mut acc, &g);
    }
    Ok(realify(f.spec, acc))
}

/// Pointwise sup over a finite family of symbols at t = 1.
pub fn finite_family_maximal(
    ms: &[GridSymbol],
    f: &GridFunction,
) -> Result<GridFunction, GridError> {
    if ms.is_empty() {
        return Err(GridError::EmptyDilationSet);
    }
    let spectrum = raw_spectrum(f);
    let mut acc = vec![0.0f64; f.values.len()];
    for m in ms {
        if m.spec != f.spec {
            return Err(GridError::SpecMismatch);
        }
        let g = apply_spectrum(&spectrum, &m.values_dilated(0, 1.0), f.spec);
        sup_fold(&mut acc, &g);
    }
    Ok(realify(f.spec, acc))
}

// --- localized kernels and weighted norms ---

/// The fixed octave cutoff used to localize symbols to one frequency band.
pub fn localizer() -> SmoothProfile {
    SmoothProfile::octave_cutoff()
}

/// K = F^{-1}[phi(|xi|) m(2^k xi)] materialized on the grid.
pub fn localized_kernel(m: &dyn DilatableSymbol, k: i64, spec: GridSpec) -> GridFunction {
    let phi = localizer();
    let vals = parallel::map_range(spec.points(), |i| {
        let xi = spec.freq(i);
        let r = match spec.dim {
            1 => xi[0].abs(),
            _ => xi[0].hypot(xi[1]),
        };
        let w = phi.eval(r);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            m.eval_dilated(k, &xi[..spec.dim]) * w
        }
    });
    idft(&GridSymbol::sampled(spec, vals))
}

/// Fraction of |K| mass living within L/4 of the period boundary.
fn boundary_fraction(kernel: &GridFunction) -> f64 {
    let spec = kernel.spec;
    let mut near = 0.0;
    let mut total = 0.0;
    for (i, v) in kernel.values.iter().enumerate() {
        let d = spec.torus_dist(&spec.point(i));
        let a = v.norm();
        total += a;
        if d > spec.length / 4.0 {
            near += a;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        near / total
    }
}

fn alias_check(kernel: &GridFunction) -> Result<(), GridError> {
    let fraction = boundary_fraction(kernel);
    if fraction > 1e-6 {
        return Err(GridError::AliasWarning { fraction });
    }
    Ok(())
}

/// (int |K(x)|^pp (1+|x|)^{alpha pp} dx)^{1/pp} with K the phi-localized
/// kernel of m(2^k .); |x| is the torus distance to the origin.
pub fn weighted_kernel_norm(
    m: &dyn DilatableSymbol,
    k: i64,
    spec: GridSpec,
    pp: f64,
    alpha: f64,
) -> Result<f64, GridError> {
    let kernel = localized_kernel(m, k, spec);
    alias_check(&kernel)?;
    let sums = parallel::map_range(kernel.values.len(), |i| {
        let d = spec.torus_dist(&spec.point(i));
        (kernel.values[i].norm() * (1.0 + d).powf(alpha)).powf(pp)
    });
    Ok((spec.cell().powi(spec.dim as i32) * sums.iter().sum::<f64>()).powf(1.0 / pp))
}

/// sup_x (1+|x|)^{d+eps} |K(x)| for the phi-localized kernel of m(2^k .).
pub fn weighted_kernel_sup(
    m: &dyn DilatableSymbol,
    k: i64,
    spec: GridSpec,
    eps: f64,
) -> Result<f64, GridError> {
    let kernel = localized_kernel(m, k, spec);
    alias_check(&kernel)?;
    let e = spec.dim as f64 + eps;
    let vals = parallel::map_range(kernel.values.len(), |i| {
        let d = spec.torus_dist(&spec.point(i));
        kernel.values[i].norm() * (1.0 + d).powf(e)
    });
    Ok(vals.iter().fold(0.0f64, |m, &v| m.max(v)))
}

/// Sobolev norm ||(I-Delta)^{gamma/2} u||_r of a sampled symbol viewed as a
/// function on its frequency lattice (extent n/L per axis).
pub fn sobolev_norm(u: &GridSymbol, r: f64, gamma: f64) -> Result<f64, GridError> {
    let spec = u.spec;
    let dual = GridSpec::new(spec.dim, spec.n, spec.n as f64 / spec.length);
    // Reindex so lattice point q/L lands at coordinate q/L in [-n/2L, n/2L).
    let src = u.sample_values();
    let vals = parallel::map_range(spec.points(), |i| {
        let ij = dual.unravel(i);
        let wrap = |j: usize| (j + spec.n / 2) % spec.n;
        let idx = match spec.dim {
            1 => wrap(ij[0]),
            _ => wrap(ij[0]) * spec.n + wrap(ij[1]),
        };
        src[idx]
    });
    let v = GridFunction::new(dual, vals);
    let mut hat = dft(&v);
    if let SymbolData::Sampled(vals) = &mut hat.data {
        for (q, c) in vals.iter_mut().enumerate() {
            let x = dual.freq(q);
            let r2 = x[0] * x[0] + x[1] * x[1];
            *c *= (1.0 + 4.0 * std::f64::consts::PI.powi(2) * r2).powf(gamma / 2.0);
        }
    }
    let weighted = idft(&hat);
    alias_check(&v).and(Ok(weighted.lp_norm(r)))
}

// --- Mikhlin-type seminorms ---

/// sup over dyadic blocks e in [-octaves, octaves], per-octave sample
/// points, and derivative orders a <= order of |xi|^a |d^a m(xi)|.
/// Derivatives by central differences with step |xi| * 1e-4; reports a
/// lower estimate of the true sup.
pub fn mikhlin_seminorm_symbol(
    m: &dyn DilatableSymbol,
    order: usize,
    octaves: i64,
    per_octave: usize,
) -> f64 {
    assert!(order <= 2);
    let sups = parallel::map_range((2 * octaves + 1) as usize, |ei| {
        let e = ei as i64 - octaves;
        let mut best = 0.0f64;
        for i in 0..per_octave {
            let u = 2f64.powf(i as f64 / per_octave as f64);
            let eval = |v: f64| m.eval_dilated(e, &[v]);
            best = best.max(eval(u).norm());
            if order >= 1 {
                let h = u * 1e-4;
                let d1 = (eval(u + h) - eval(u - h)) / (2.0 * h);
                best = best.max(u * d1.norm());
                if order >= 2 {
                    let d2 = (eval(u + h) - eval(u) * 2.0 + eval(u - h)) / (h * h);
                    best = best.max(u * u * d2.norm());
                }
            }
        }
        best
    });
    sups.into_iter().fold(0.0, f64::max)
}

/// Exact-derivative Mikhlin seminorm for a bump-sum multiplier: scale-free
/// sweep of u in [1, 2) against every active scale window.
pub fn mikhlin_seminorm_bump(m: &BumpSumMultiplier, order: usize, per_octave: usize) -> f64 {
    assert!(order <= 4);
    let scales: Vec<i64> = m.terms().iter().map(|t| t.scale).collect();
    if scales.is_empty() {
        return 0.0;
    }
    // |xi|^a d^a m at xi = 2^e u depends only on the coefficients at scales
    // e-2..e+2, so each candidate octave is checked in O(1).
    let mut octs: Vec<i64> = scales.iter().flat_map(|&s| (s - 2)..=(s + 2)).collect();
    octs.sort_unstable();
    octs.dedup();
    let sups = parallel::map_slice(&octs, |&e| {
        let mut best = 0.0f64;
        for i in 0..per_octave {
            let u = 2f64.powf(i as f64 / per_octave as f64);
            for a in 0..=order {
                let mut acc = Complex64::new(0.0, 0.0);
                for d in -2..=2i64 {
                    if let Some(c) = m.coeff_at_scale(e + d) {
                        let s = 2f64.powi(-d as i32);
                        acc += c * (m.profile().derivative(u * s, a) * s.powi(a as i32));
                    }
                }
                best = best.max(u.powi(a as i32) * acc.norm());
            }
        }
        best
    });
    sups.into_iter().fold(0.0, f64::max)
}

/// sup over xi in [1/2, 2] and a <= order of |d^a (phi(xi) m(2^k xi))|,
/// with phi the octave localizer. Exact derivatives via the Leibniz rule.
pub fn localized_seminorm(m: &BumpSumMultiplier, k: i64, order: usize, samples: usize) -> f64 {
    assert!(order <= 4);
    let phi = localizer();
    let binom: [[f64; 5]; 5] = {
        let mut b = [[0.0; 5]; 5];
        for i in 0..5 {
            b[i][0] = 1.0;
            for j in 1..=i {
                b[i][j] = b[i - 1][j - 1] + if j <= i - 1 { b[i - 1][j] } else { 0.0 };
            }
        }
        b
    };
    let sups = parallel::map_range(samples, |i| {
        let xi = 0.5 + 1.5 * (i as f64 + 0.5) / samples as f64;
        let mut best = 0.0f64;
        for a in 0..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..=a {
                // b-th derivative of xi -> m(2^k xi), scale-free.
                let mut mb = Complex64::new(0.0, 0.0);
                for d in -2..=2i64 {
                    if let Some(c) = m.coeff_at_scale(k + d) {
                        let s = 2f64.powi(-d as i32);
                        mb += c * (m.profile().derivative(xi * s, b) * s.powi(b as i32));
                    }
                }
                acc += mb * (binom[a][b] * phi.derivative(xi, a - b));
            }
            best = best.max(acc.norm());
        }
        best
    });
    sups.into_iter().fold(0.0, f64::max)
}

// --- serialization: JSON header + raw little-endian f64 sidecar ---

#[derive(Serialize, Deserialize)]
struct GridHeader {
    d: usize,
    n: usize,
    #[serde(rename = "L")]
    length: f64,
    kind: String,
    sidecar: String,
}

fn write_sidecar(path: &Path, values: &[Complex64]) -> Result<(), GridError> {
    let mut buf = Vec::with_capacity(values.len() * 16);
    for v in values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    std::fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

fn read_sidecar(path: &Path, count: usize) -> Result<Vec<Complex64>, GridError> {
    let mut buf = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() != count * 16 {
        return Err(GridError::BadFormat(format!(
            "sidecar holds {} bytes, expected {}",
            buf.len(),
            count * 16
        )));
    }
    Ok((0..count)
        .map(|i| {
            let re = f64::from_le_bytes(buf[16 * i..16 * i + 8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[16 * i + 8..16 * i + 16].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

fn save_pair(
    base: &Path,
    spec: GridSpec,
    kind: &str,
    values: &[Complex64],
) -> Result<(), GridError> {
    let sidecar_name = format!(
        "{}.f64",
        base.file_name().and_then(|s| s.to_str()).unwrap_or("data")
    );
    let header = GridHeader {
        d: spec.dim,
        n: spec.n,
        length: spec.length,
        kind: kind.to_string(),
        sidecar: sidecar_name.clone(),
    };
    let json = serde_json::to_string_pretty(&header).expect("serializable");
    std::fs::write(base.with_extension("json"), json)?;
    write_sidecar(&base.with_extension("f64"), values)
}

fn load_pair(base: &Path, expect_kind: &str) -> Result<(GridSpec, Vec<Complex64>), GridError> {
    let text = std::fs::read_to_string(base.with_extension("json"))?;
    let header: GridHeader =
        serde_json::from_str(&text).map_err(|e| GridError::BadFormat(e.to_string()))?;
    if header.kind != expect_kind {
        return Err(GridError::BadFormat(format!(
            "kind {:?}, expected {:?}",
            header.kind, expect_kind
        )));
    }
    let spec = GridSpec::new(header.d, header.n, header.length);
    let values = read_sidecar(&base.with_extension("f64"), spec.points())?;
    Ok((spec, values))
}

impl GridFunction {
    pub fn save(&self, base: &Path) -> Result<(), GridError> {
        save_pair(base, self.spec, "function", &self.values)
    }

    pub fn load(base: &Path) -> Result<GridFunction, GridError> {
        let (spec, values) = load_pair(base, "function")?;
        Ok(GridFunction::new(spec, values))
    }
}

impl GridSymbol {
    pub fn save(&self, base: &Path) -> Result<(), GridError> {
        save_pair(base, self.spec, "symbol", &self.sample_values())
    }

    pub fn load(base: &Path) -> Result<GridSymbol, GridError> {
        let (spec, values) = load_pair(base, "symbol")?;
        Ok(GridSymbol::sampled(spec, values))
    }
}
