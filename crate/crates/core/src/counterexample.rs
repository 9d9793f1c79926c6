//! The unbounded-growth construction: sign sequences over {1,-1,i,-i},
//! the block multipliers m_N built from them, the modulated test functions
//! g_N and their rescaled L^p-normalized versions, and numerical
//! verification of the maximal-function lower bound.

use crate::bump::{BumpError, BumpSumMultiplier, BumpTerm, ModTerm, ModulatedFunction};
use crate::dyadic::Dyadic;
use crate::envelope::{unit_phase, Envelope};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// Practical cap: m_N has N 4^N terms and g-side verification sweeps
/// N 4^N dilations.
pub const MAX_N: u32 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CounterexampleError {
    #[error("N = {n} exceeds the configured capacity {MAX_N}")]
    CapacityExceeded { n: u32 },
    #[error("growth weight must be positive, nondecreasing and grow on the sampled range")]
    WeightNotIncreasing,
    #[error("assembled blocks have overlapping supports")]
    BlocksOverlap,
    #[error(transparent)]
    Bump(#[from] BumpError),
}

/// The sign alphabet, in enumeration order.
pub const ALPHABET: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.0, -1.0),
];

/// kappa-th sequence of length N over the alphabet, kappa in [1, 4^N],
/// via little-endian base-4 digits of kappa - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSequence {
    pub n: u32,
    pub kappa: u64,
}

impl SignSequence {
    pub fn new(n: u32, kappa: u64) -> Self {
        assert!(n >= 1 && kappa >= 1 && kappa <= 1u64 << (2 * n));
        SignSequence { n, kappa }
    }

    /// Alphabet index of digit j, j in [1, N].
    pub fn digit_index(&self, j: u32) -> usize {
        debug_assert!(j >= 1 && j <= self.n);
        (((self.kappa - 1) >> (2 * (j - 1))) & 3) as usize
    }

    pub fn digit(&self, j: u32) -> Complex64 {
        ALPHABET[self.digit_index(j)]
    }

    pub fn digit_indices(&self) -> Vec<usize> {
        (1..=self.n).map(|j| self.digit_index(j)).collect()
    }

    /// Inverse of `digit_indices`.
    pub fn from_digit_indices(indices: &[usize]) -> Self {
        assert!(!indices.is_empty());
        let mut kappa = 0u64;
        for (j, &d) in indices.iter().enumerate() {
            assert!(d < 4);
            kappa |= (d as u64) << (2 * j);
        }
        SignSequence::new(indices.len() as u32, kappa + 1)
    }
}

/// Slowly growing weight l -> v(l); positive, nondecreasing, and actually
/// growing over the sampled range (constants are rejected).
pub struct GrowthWeight {
    pub name: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl GrowthWeight {
    pub fn new(
        name: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, CounterexampleError> {
        // Sampled at the realized arguments 4^N plus a coarse log range.
        let mut samples: Vec<f64> = (1..=16).map(|n| 4f64.powi(n)).collect();
        samples.extend((0..=20).map(|e| 2f64.powi(e)));
        samples.sort_by(f64::total_cmp);
        let vals: Vec<f64> = samples.iter().map(|&l| eval(l)).collect();
        let ok = vals.iter().all(|&v| v > 0.0 && v.is_finite())
            && vals.windows(2).all(|w| w[1] >= w[0])
            && vals.last().unwrap() > vals.first().unwrap();
        if !ok {
            return Err(CounterexampleError::WeightNotIncreasing);
        }
        Ok(GrowthWeight { name: name.to_string(), eval: Arc::new(eval) })
    }

    pub fn sqrt_log() -> Self {
        GrowthWeight::new("sqrt-log", |l| (l + 2.0).ln().sqrt()).expect("valid weight")
    }

    pub fn eval(&self, l: f64) -> f64 {
        (self.eval)(l)
    }
}

fn check_capacity(n: u32) -> Result<(), CounterexampleError> {
    if n == 0 || n > MAX_N {
        return Err(CounterexampleError::CapacityExceeded { n });
    }
    Ok(())
}

/// m_N: one bump at scale N kappa + j with coefficient digit j of sequence
/// kappa, over all kappa in [1, 4^N], j in [1, N].
pub fn build_m_n(n: u32) -> Result<BumpSumMultiplier, CounterexampleError> {
    check_capacity(n)?;
    let mut terms = Vec::with_capacity((n as usize) << (2 * n));
    for kappa in 1..=(1u64 << (2 * n)) {
        let s = SignSequence::new(n, kappa);
        for j in 1..=n {
            terms.push(BumpTerm {
                scale: (n as i64) * kappa as i64 + j as i64,
                coeff: s.digit(j),
            });
        }
    }
    Ok(BumpSumMultiplier::new(terms, crate::profile::SmoothProfile::standard_bump()))
}

/// g_N: unit coefficients on frequencies 2^j, j = 1..N.
pub fn build_g_n(n: u32) -> ModulatedFunction {
    assert!(n >= 1);
    let terms = (1..=n)
        .map(|j| ModTerm { freq: j as i64, coeff: Complex64::new(1.0, 0.0) })
        .collect();
    ModulatedFunction::new(terms, Envelope::standard())
}

/// f_{N,p}: N^{-1/2} g_N composed with x -> 2^{N 8^N} x, carrying the
/// L^p-normalizing prefactor symbolically.
pub fn build_f_np(n: u32, p: f64) -> ModulatedFunction {
    let e = (n as i64) << (3 * n);
    build_g_n(n).with_scalar(1.0 / (n as f64).sqrt()).with_dilation(e, Some(p))
}

/// Best alphabet letter for z: argmax over c of Re(c z), ties broken by
/// alphabet order. The winning value is at least |z|/sqrt(2).
pub fn best_sign(z: Complex64) -> (usize, f64) {
    let mut best = (0usize, (ALPHABET[0] * z).re);
    for (i, c) in ALPHABET.iter().enumerate().skip(1) {
        let v = (c * z).re;
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct KappaChoice {
    pub kappa: u64,
    pub choices: Vec<usize>,
    /// False when |Psi(x)| is below 1e-12 and the argmax is meaningless.
    pub defined: bool,
}

/// Per-frequency argmax selection at the point x, and the index kappa whose
/// digit sequence realizes it.
pub fn choose_kappa(x: f64, n: u32) -> Result<KappaChoice, CounterexampleError> {
    let env = Envelope::standard();
    let psi = env.eval(x).map_err(BumpError::from)?;
    if psi.abs() < 1e-12 {
        return Ok(KappaChoice { kappa: 1, choices: vec![0; n as usize], defined: false });
    }
    let choices: Vec<usize> = (1..=n)
        .map(|j| best_sign(unit_phase(2f64.powi(j as i32) * x) * psi).0)
        .collect();
    let kappa = SignSequence::from_digit_indices(&choices).kappa;
    Ok(KappaChoice { kappa, choices, defined: true })
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub n: u32,
    pub p: f64,
    /// Quadrature norm of the dyadic maximal function, normalized so that
    /// the envelope has unit L^p norm.
    pub norm_value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Quadrature grid spanning the envelope window, minus the interpolation
/// margin at the edges.
fn quadrature_points(log2_points: u32) -> (Vec<f64>, f64) {
    let w = Envelope::standard().window - 1.0;
    let npts = 1usize << log2_points;
    let step = 2.0 * w / npts as f64;
    ((0..npts).map(|i| -w + i as f64 * step).collect(), step)
}

/// || sup over k in [1, N 4^N] of |m_N(2^k .) applied to g_N| ||_p, checked
/// against the bound N / sqrt(2) (unit-envelope normalization).
pub fn verify_lower_bound(n: u32, p: f64) -> Result<LowerBoundReport, CounterexampleError> {
    check_capacity(n)?;
    let m = build_m_n(n)?;
    let g = build_g_n(n);
    let ks: Vec<i64> = (1..=(n as i64) << (2 * n)).collect();
    let (points, step) = quadrature_points(15);
    let sup = m.maximal_pointwise(&ks, &g, &points)?;
    let raw = (step * sup.iter().map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p);
    let norm_value = raw / Envelope::standard().lp_norm(p);
    let bound = n as f64 / 2f64.sqrt();
    Ok(LowerBoundReport { n, p, norm_value, bound, pass: norm_value >= bound * (1.0 - 1e-2) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConclusionReport {
    pub n: u32,
    pub p: f64,
    /// Realized constant: lower-bound norm divided by N.
    pub c_n: f64,
    /// Growth of the assembled multiplier's maximal operator on the
    /// unit-norm test function: c_n * v(4^N).
    pub growth_bound: f64,
    pub weight: String,
    /// ||f_{N,p}||_p computed through the exact scaling identity.
    pub f_norm: f64,
}

/// Chain the block lower bound through the symbolic rescaling of f_{N,p}.
pub fn verify_conclusion(
    n: u32,
    p: f64,
    weight: &GrowthWeight,
) -> Result<ConclusionReport, CounterexampleError> {
    let lb = verify_lower_bound(n, p)?;
    let c_n = lb.norm_value / n as f64;
    let growth_bound = c_n * weight.eval(4f64.powi(n as i32));
    let f_norm = build_f_np(n, p).lp_norm(p, 18)? / Envelope::standard().lp_norm(p);
    Ok(ConclusionReport { n, p, c_n, growth_bound, weight: weight.name.clone(), f_norm })
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockInfo {
    pub n: u32,
    pub coeff: f64,
    pub scale_lo: i64,
    pub scale_hi: i64,
}

pub struct AssembledCounterexample {
    pub multiplier: BumpSumMultiplier,
    pub blocks: Vec<BlockInfo>,
}

/// The full multiplier: block N is m_N scaled by N^{-1/2} v(4^N) and
/// dilated by 2^{N 8^N}. Pairwise disjointness of the dilated block
/// supports is certified by exact dyadic interval comparison.
pub fn assemble(
    n_max: u32,
    weight: &GrowthWeight,
) -> Result<AssembledCounterexample, CounterexampleError> {
    check_capacity(n_max)?;
    let mut terms = Vec::new();
    let mut blocks = Vec::new();
    for n in 1..=n_max {
        let a = weight.eval(4f64.powi(n as i32)) / (n as f64).sqrt();
        let shift = (n as i64) << (3 * n);
        let block = build_m_n(n)?;
        let scales: Vec<i64> = block.terms().iter().map(|t| t.scale + shift).collect();
        blocks.push(BlockInfo {
            n,
            coeff: a,
            scale_lo: *scales.first().unwrap(),
            scale_hi: *scales.last().unwrap(),
        });
        for (t, &scale) in block.terms().iter().zip(&scales) {
            terms.push(BumpTerm { scale, coeff: t.coeff * a });
        }
    }
    // Support of block [lo, hi] is [3/4 2^lo, 5/4 2^hi]: compare 5 2^{hi-2}
    // against 3 2^{lo'-2} for consecutive blocks.
    for pair in blocks.windows(2) {
        let hi = Dyadic::new(5, pair[0].scale_hi - 2);
        let lo = Dyadic::new(3, pair[1].scale_lo - 2);
        if hi >= lo {
            return Err(CounterexampleError::BlocksOverlap);
        }
    }
    let multiplier =
        BumpSumMultiplier::new(terms, crate::profile::SmoothProfile::standard_bump());
    Ok(AssembledCounterexample { multiplier, blocks })
}

/// Quadrature ||g_N||_p; the sampling rate resolves |g_N|^4 alias-free up
/// to N = 12.
pub fn g_n_norm(n: u32, p: f64) -> f64 {
    let log2_points = if n <= 8 { 19 } else { 21 };
    build_g_n(n).lp_norm(p, log2_points).expect("static quadrature window")
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}
