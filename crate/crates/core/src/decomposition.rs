//! Rearrangement-based decomposition pipeline: weight sequences omega(k)
//! measured from localized kernels, their nonincreasing rearrangement and
//! summability criterion, doubly-exponential frequency blocks, the
//! reproducing partition pair (phi, psi), telescoping spatial cutoffs
//! chi_l, annulus kernel pieces, and the block operators that reassemble
//! the multiplier action.

use crate::grid::{
    self, localized_kernel, DilatableSymbol, GridError, GridFunction, GridSpec, GridSymbol,
};
use crate::parallel;
use crate::profile::{ramp_up, SmoothProfile};
use num_complex::Complex64;
use serde::Serialize;

// --- weight sequences and rearrangement ---

#[derive(Debug, Clone, Serialize)]
pub struct WeightSequence {
    pub k_lo: i64,
    pub values: Vec<f64>,
}

impl WeightSequence {
    pub fn new(k_lo: i64, values: Vec<f64>) -> Self {
        assert!(values.iter().all(|&v| v >= 0.0));
        WeightSequence { k_lo, values }
    }

    pub fn get(&self, k: i64) -> f64 {
        let i = k - self.k_lo;
        if i < 0 || i as usize >= self.values.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn support(&self) -> Vec<i64> {
        (0..self.values.len())
            .filter(|&i| self.values[i] > 0.0)
            .map(|i| self.k_lo + i as i64)
            .collect()
    }
}

/// Nonincreasing rearrangement, stored as the descending value list.
#[derive(Debug, Clone, Serialize)]
pub struct Rearrangement {
    pub sorted: Vec<f64>,
}

impl Rearrangement {
    /// omega*(t) for integer t; zero past the support.
    pub fn at(&self, t: usize) -> f64 {
        self.sorted.get(t).copied().unwrap_or(0.0)
    }
}

pub fn rearrange(omega: &WeightSequence) -> Rearrangement {
    let mut sorted = omega.values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Rearrangement { sorted }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriterionSum {
    pub value: f64,
    /// Zero for finitely supported omega: the truncated tail vanishes.
    pub tail_bound: f64,
}

/// omega*(0) + sum_{l=1}^{tail_l} omega*(l)/l.
pub fn criterion_sum(omega: &WeightSequence, tail_l: usize) -> CriterionSum {
    let star = rearrange(omega);
    let mut value = star.at(0);
    for l in 1..=tail_l {
        value += star.at(l) / l as f64;
    }
    let tail_bound = if tail_l >= star.sorted.len() { 0.0 } else { f64::INFINITY };
    CriterionSum { value, tail_bound }
}

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub j: u32,
    pub ks: Vec<i64>,
}

/// 2^{2^j} saturating to usize::MAX.
fn block_threshold_index(j: u32) -> usize {
    if j >= 6 {
        usize::MAX
    } else {
        1usize << (1u32 << j)
    }
}

/// Frequency blocks: block 0 holds {k: omega*(2) < omega(k) <= omega*(0)},
/// block j holds {k: omega*(2^{2^j}) < omega(k) <= omega*(2^{2^{j-1}})}.
/// Together they partition the support of omega.
pub fn build_blocks(omega: &WeightSequence) -> Vec<Block> {
    let star = rearrange(omega);
    let star_at = |idx: usize| if idx == usize::MAX { 0.0 } else { star.at(idx) };
    let mut blocks = Vec::new();
    let mut j = 0u32;
    loop {
        let upper = if j == 0 { star.at(0) } else { star_at(block_threshold_index(j - 1)) };
        let lower = star_at(block_threshold_index(j));
        let ks: Vec<i64> = (0..omega.values.len())
            .filter(|&i| omega.values[i] > lower && omega.values[i] <= upper)
            .map(|i| omega.k_lo + i as i64)
            .collect();
        if !ks.is_empty() {
            blocks.push(Block { j, ks });
        }
        if lower == 0.0 {
            break;
        }
        j += 1;
    }
    blocks
}

// --- partition pair and spatial cutoffs ---

/// The frequency localizer phi: the octave cutoff, supported in (1/2, 3/2),
/// identically 1 on [3/4, 1].
pub fn phi(r: f64) -> f64 {
    thread_local! {
        static PHI: SmoothProfile = SmoothProfile::octave_cutoff();
    }
    PHI.with(|p| p.eval(r))
}

/// Dilation-invariant denominator sum_j phi(2^{-j} r)^2; at most two dyadic
/// scales contribute at any r > 0.
fn phi_square_sum(r: f64) -> f64 {
    let e = r.log2().floor() as i32;
    let mut d = 0.0;
    for j in (e - 1)..=(e + 1) {
        let v = phi(r * 2f64.powi(-j));
        d += v * v;
    }
    d
}

/// psi = phi / sum_j phi(2^{-j} .)^2, so that sum_k (psi phi)(2^{-k} r) = 1
/// for every r > 0.
pub fn psi(r: f64) -> f64 {
    let p = phi(r);
    if p == 0.0 {
        0.0
    } else {
        p / phi_square_sum(r)
    }
}

/// Radial ramp theta: 0 below 1/2, 1 above 3/4.
fn theta(r: f64) -> f64 {
    ramp_up(r, 0.5, 0.75)
}

/// Spatial cutoffs: chi_0 = 1 - theta(|x|/2); chi_l(x) = chi(2^{-l}|x|)
/// with chi = theta(r) - theta(r/2) for l >= 1. Telescopes so that
/// sum_{l=0}^{L} chi_l(r) = 1 - theta(2^{-L-1} r), exactly 1 for
/// r <= 2^L.
pub fn chi(l: usize, r: f64) -> f64 {
    if l == 0 {
        1.0 - theta(r / 2.0)
    } else {
        let s = r * 2f64.powi(-(l as i32));
        theta(s) - theta(s / 2.0)
    }
}

// --- kernel pieces ---

pub struct PieceEntry {
    pub k: i64,
    /// pieces[l] = interpolable Fourier transform of chi_l times the
    /// localized kernel of m(2^k .).
    pieces: Vec<PaddedTransform>,
}

pub struct PieceBlock {
    pub j: u32,
    pub entries: Vec<PieceEntry>,
}

pub struct KernelPieces {
    pub spec: GridSpec,
    pub lmax: usize,
    pub blocks: Vec<PieceBlock>,
}

/// Split the phi-localized kernel of m(2^k .) for each block member into
/// dyadic spatial pieces and precompute their transforms. The kernel grid
/// must be wide enough that the cutoffs up to lmax telescope to 1 across
/// the whole torus (length >= 2^{lmax+1}) and that the kernel tail has
/// decayed at the boundary.
pub fn build_pieces(
    m: &dyn DilatableSymbol,
    blocks: &[Block],
    spec: GridSpec,
    lmax: usize,
) -> Result<KernelPieces, GridError> {
    assert_eq!(spec.dim, 1);
    assert!(spec.length >= 2f64.powi(lmax as i32 + 1));
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let mut entries = Vec::with_capacity(b.ks.len());
        for &k in &b.ks {
            let h = localized_kernel(m, k, spec);
            let pieces = (0..=lmax)
                .map(|l| {
                    let values = parallel::map_range(h.values.len(), |i| {
                        let r = spec.torus_dist(&spec.point(i));
                        h.values[i] * chi(l, r)
                    });
                    PaddedTransform::new(&GridFunction::new(spec, values), pad_for(l, spec))
                })
                .collect();
            entries.push(PieceEntry { k, pieces });
        }
        out.push(PieceBlock { j: b.j, entries });
    }
    Ok(KernelPieces { spec, lmax, blocks: out })
}

/// Trigonometric interpolation of the Fourier transform of a compactly
/// supported grid function: zero-pad the spatial samples to extend the
/// period, transform, and cubic-interpolate between the fine lattice
/// points.
struct PaddedTransform {
    centered: Vec<Complex64>,
    length: f64,
}

impl PaddedTransform {
    fn new(g: &GridFunction, pad: usize) -> Self {
        let spec = g.spec;
        let n_pad = spec.n * pad;
        let mut values = vec![Complex64::new(0.0, 0.0); n_pad];
        let offset = (n_pad - spec.n) / 2;
        values[offset..offset + spec.n].copy_from_slice(&g.values);
        let padded = GridFunction::new(
            GridSpec::new(1, n_pad, spec.length * pad as f64),
            values,
        );
        let sampled = grid::dft(&padded).sample_values();
        // reorder to centered layout: index i holds frequency (i - n/2)/L
        let centered: Vec<Complex64> = (0..n_pad)
            .map(|i| sampled[(i + n_pad / 2) % n_pad])
            .collect();
        PaddedTransform { centered, length: spec.length * pad as f64 }
    }

    fn eval(&self, eta: f64) -> Complex64 {
        let n = self.centered.len();
        let u = eta * self.length + n as f64 / 2.0;
        let i = u.floor() as isize;
        if i < 1 || (i as usize) + 2 >= n {
            return Complex64::new(0.0, 0.0);
        }
        let s = u - i as f64;
        let idx = i as usize;
        let (p0, p1, p2, p3) = (
            self.centered[idx - 1],
            self.centered[idx],
            self.centered[idx + 1],
            self.centered[idx + 2],
        );
        // Catmull-Rom
        let a = (p3 - p0 + (p1 - p2) * 3.0) * 0.5;
        let b = p0 - p1 * 2.5 + p2 * 2.0 - p3 * 0.5;
        let c = (p2 - p0) * 0.5;
        ((a * s + b) * s + c) * s + p1
    }
}

/// Padding factor resolving the oscillation of the transform of a function
/// supported at radius ~2^{l+4}.
fn pad_for(l: usize, spec: GridSpec) -> usize {
    let needed = 2f64.powi(l as i32 + 6) / spec.length;
    (needed.ceil() as usize).next_power_of_two().max(4)
}

/// The block operator at spatial scale l: sum over k in the block of the
/// L^1-dilated smoothed piece convolved with f, realized on the frequency
/// side as f^ (xi) * sum_k psi(2^{-k} t xi) F[chi_l h_k](2^{-k} t xi).
pub fn apply_t_el(
    pieces: &KernelPieces,
    block: usize,
    l: usize,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction, GridError> {
    let spec = f.spec;
    if spec.dim != 1 || pieces.spec.dim != 1 {
        return Err(GridError::SpecMismatch);
    }
    assert!(l <= pieces.lmax && t > 0.0);
    let entries = &pieces.blocks[block].entries;
    let mut symbol = vec![Complex64::new(0.0, 0.0); spec.points()];
    for entry in entries {
        let transform = &entry.pieces[l];
        let scale = 2f64.powi(-entry.k as i32) * t;
        let contributions = parallel::map_range(spec.points(), |q| {
            let eta = spec.freq(q)[0] * scale;
            let w = psi(eta.abs());
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                transform.eval(eta) * w
            }
        });
        for (s, c) in symbol.iter_mut().zip(&contributions) {
            *s += c;
        }
    }
    grid::apply_symbol(&GridSymbol::sampled(spec, symbol), 1.0, f)
}

/// Full reassembly: sum over blocks j and spatial scales l <= lmax.
pub fn reconstruct(
    pieces: &KernelPieces,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction, GridError> {
    let mut acc = GridFunction::zero(f.spec);
    for b in 0..pieces.blocks.len() {
        for l in 0..=pieces.lmax {
            let g = apply_t_el(pieces, b, l, t, f)?;
            for (a, v) in acc.values.iter_mut().zip(&g.values) {
                *a += v;
            }
        }
    }
    Ok(acc)
}

// --- criterion evaluation ---

#[derive(Debug, Clone, Copy, Serialize)]
pub enum OmegaKind {
    /// Weighted L^{p'} norm of the localized kernel with weight (1+|x|)^alpha.
    WeightedNorm { pp: f64, alpha: f64 },
    /// sup (1+|x|)^{d+eps} |kernel|.
    WeightedSup { eps: f64 },
    /// Sobolev norm of the localized symbol.
    Sobolev { r: f64, gamma: f64 },
}

/// omega(k) over an explicit k list; k's outside the list are taken to be
/// exactly zero (the caller derives the list from support arithmetic).
pub fn measure_omega(
    m: &dyn DilatableSymbol,
    ks: &[i64],
    spec: GridSpec,
    kind: OmegaKind,
) -> Result<WeightSequence, GridError> {
    assert!(!ks.is_empty());
    let k_lo = *ks.iter().min().unwrap();
    let k_hi = *ks.iter().max().unwrap();
    let mut values = vec![0.0; (k_hi - k_lo + 1) as usize];
    for &k in ks {
        let v = match kind {
            OmegaKind::WeightedNorm { pp, alpha } => {
                grid::weighted_kernel_norm(m, k, spec, pp, alpha)?
            }
            OmegaKind::WeightedSup { eps } => grid::weighted_kernel_sup(m, k, spec, eps)?,
            OmegaKind::Sobolev { r, gamma } => {
                let phi_profile = grid::localizer();
                let vals = parallel::map_range(spec.points(), |i| {
                    let xi = spec.freq(i);
                    let w = phi_profile.eval(xi[0].abs());
                    if w == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        m.eval_dilated(k, &xi[..spec.dim]) * w
                    }
                });
                grid::sobolev_norm(&GridSymbol::sampled(spec, vals), r, gamma)?
            }
        };
        values[(k - k_lo) as usize] = v;
    }
    Ok(WeightSequence::new(k_lo, values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    ViolatedAtHorizon,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub kind: OmegaKind,
    pub support_size: usize,
    /// Criterion partial sums at tail_l / 4, tail_l / 2, tail_l.
    pub windowed_sums: [f64; 3],
    pub value: f64,
    pub verdict: Verdict,
}

/// Evaluate the summability criterion with a divergence probe: the partial
/// sum is compared across two doublings of the tail horizon.
pub fn evaluate_criterion(omega: &WeightSequence, tail_l: usize) -> CriterionReport {
    assert!(tail_l >= 4);
    let sums = [
        criterion_sum(omega, tail_l / 4).value,
        criterion_sum(omega, tail_l / 2).value,
        criterion_sum(omega, tail_l).value,
    ];
    let growth1 = sums[1] / sums[0].max(f64::MIN_POSITIVE);
    let growth2 = sums[2] / sums[1].max(f64::MIN_POSITIVE);
    let verdict = if sums[2] == 0.0 || (growth1 < 1.01 && growth2 < 1.01) {
        Verdict::Satisfied
    } else if growth2 > 1.01 && growth1 > 1.01 {
        Verdict::ViolatedAtHorizon
    } else {
        Verdict::Inconclusive
    };
    CriterionReport {
        kind: OmegaKind::WeightedNorm { pp: 0.0, alpha: 0.0 },
        support_size: omega.support().len(),
        windowed_sums: sums,
        value: sums[2],
        verdict,
    }
}
