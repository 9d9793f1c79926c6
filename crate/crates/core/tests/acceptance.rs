//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single pass/fail line (visible with --nocapture) and asserts it.

use dyadic_maximal::bump::ModulatedFunction;
use dyadic_maximal::counterexample::{
    assemble, build_g_n, build_m_n, g_n_norm, log_log_slope, verify_conclusion,
    verify_lower_bound, GrowthWeight,
};
use dyadic_maximal::decomposition::{
    build_blocks, chi, criterion_sum, evaluate_criterion, measure_omega, phi, psi, rearrange,
    reconstruct, build_pieces, OmegaKind, Verdict, WeightSequence,
};
use dyadic_maximal::envelope::Envelope;
use dyadic_maximal::grid::{
    self, localized_seminorm, mikhlin_seminorm_symbol, FnSymbol, GridFunction, GridSpec,
    GridSymbol,
};
use dyadic_maximal::bump::{BumpSumMultiplier, BumpTerm};
use dyadic_maximal::profile::SmoothProfile;
use dyadic_maximal::tiling::{build_tiling, verify_cover, verify_disjoint, TilingInstance};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

fn report(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_maximal_lower_bound() {
    let start = Instant::now();
    let mut ok = true;
    let mut norms2 = Vec::new();
    let mut detail = String::new();
    let mut t5 = 0.0;
    for n in 1..=5u32 {
        for &p in &[2.0, 4.0] {
            let t = Instant::now();
            let r = verify_lower_bound(n, p).unwrap();
            if n == 5 {
                t5 += t.elapsed().as_secs_f64();
            }
            ok &= r.norm_value >= r.bound * 0.99;
            if p == 2.0 {
                norms2.push(r.norm_value);
            }
            detail.push_str(&format!("N={n},p={p}:{:.3}>={:.3} ", r.norm_value, r.bound * 0.99));
        }
    }
    let ns: Vec<f64> = (1..=5).map(f64::from).collect();
    let slope = log_log_slope(&ns, &norms2);
    ok &= slope >= 0.70;
    ok &= t5 <= 60.0;
    report(
        1,
        ok,
        &format!("{detail}slope={slope:.3} t(N=5)={t5:.1}s total={:.1}s", start.elapsed().as_secs_f64()),
    );
}

#[test]
fn criterion_02_conclusion_growth() {
    let weight = GrowthWeight::sqrt_log();
    let mut bounds = Vec::new();
    let mut cs = Vec::new();
    for n in 1..=4u32 {
        let r = verify_conclusion(n, 2.0, &weight).unwrap();
        bounds.push(r.growth_bound);
        cs.push(r.c_n);
    }
    let increasing = bounds.windows(2).all(|w| w[1] > w[0]);
    let cmin = cs.iter().cloned().fold(f64::INFINITY, f64::min);
    let cmax = cs.iter().cloned().fold(0.0, f64::max);
    let ok = increasing && cmax <= 2.0 * cmin;
    report(
        2,
        ok,
        &format!("bounds={bounds:.3?} c_range=[{cmin:.3},{cmax:.3}] ratio={:.2}", cmax / cmin),
    );
}

#[test]
fn criterion_03_test_function_growth() {
    let env = Envelope::standard();
    let ns: Vec<f64> = (2..=12).map(f64::from).collect();
    let norms4: Vec<f64> = (2..=12).map(|n| g_n_norm(n, 4.0)).collect();
    let exponent = log_log_slope(&ns, &norms4);
    let mut l2_ok = true;
    let mut worst = 0.0f64;
    for n in 2..=12u32 {
        let l2 = g_n_norm(n, 2.0);
        let expected = (n as f64).sqrt() * env.lp_norm(2.0);
        let rel = (l2 - expected).abs() / expected;
        worst = worst.max(rel);
        l2_ok &= rel <= 1e-6;
    }
    let ok = (0.4..=0.6).contains(&exponent) && l2_ok;
    report(3, ok, &format!("p=4 fit exponent={exponent:.3} worst L2 rel err={worst:.2e}"));
}

/// Synthesize a modulated function on the grid through the exactly
/// periodized envelope (period 128 matches the torus).
fn synthesize(f: &ModulatedFunction, spec: GridSpec) -> GridFunction {
    let env = f.envelope().clone();
    // term frequency field is the dyadic exponent j of the modulation 2^j
    let terms: Vec<(f64, Complex64)> =
        f.terms().iter().map(|t| (2f64.powi(t.freq as i32), t.coeff)).collect();
    GridFunction::from_fn(spec, move |x| {
        let e = env.eval_direct(x[0]);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(freq, c) in &terms {
            acc += c * Complex64::from_polar(1.0, std::f64::consts::TAU * freq * x[0]);
        }
        acc * e
    })
}

#[test]
fn criterion_04_bump_grid_oracle_equivalence() {
    let spec = GridSpec::new(1, 8192, 128.0);
    let mut ok = true;
    let mut worst = 0.0f64;
    for n in 1..=4u32 {
        let m = build_m_n(n).unwrap();
        let g = build_g_n(n);
        let f_grid = synthesize(&g, spec);
        let sym = GridSymbol::lazy(spec, Arc::new(m.clone()));
        for k in 1..=((n as i64) << (2 * n)) {
            let grid_result = grid::apply_symbol_dyadic(&sym, k, &f_grid).unwrap();
            let bump_result = synthesize(&m.apply_dilated(k, &g).unwrap(), spec);
            let diff = GridFunction::new(
                spec,
                grid_result
                    .values
                    .iter()
                    .zip(&bump_result.values)
                    .map(|(a, b)| a - b)
                    .collect(),
            );
            let denom = f_grid.lp_norm(2.0);
            let rel = diff.lp_norm(2.0) / denom;
            worst = worst.max(rel);
            ok &= rel <= 1e-6;
        }
    }
    report(4, ok, &format!("worst relative L2 over all (N<=4, k): {worst:.2e}"));
}

#[test]
fn criterion_05_tiling_random_instances() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut ok = true;
    let mut worst_forbidden = 0usize;
    for i in 0..200 {
        let n = 1 + (i % 8) as u32;
        let card = rng.gen_range(1..=1usize << n.min(6));
        let bound = 1i64 << (2 * n + 1);
        let mut set: Vec<i64> = (0..card).map(|_| rng.gen_range(0..bound)).collect();
        set.sort_unstable();
        set.dedup();
        let inst = TilingInstance::new(set.clone(), n, 32).unwrap();
        let width = inst.slot_width();
        let t = build_tiling(&inst).unwrap();
        // slot localization
        for j in -32i64..=32 {
            ok &= t.center(j).div_euclid(width) == j;
        }
        ok &= verify_disjoint(&t, &set);
        ok &= verify_cover(&t, 4i64.pow(n + 1)).unwrap();
        ok &= t.max_forbidden <= 1usize << (2 * n + 1);
        worst_forbidden = worst_forbidden.max(t.max_forbidden);
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 5.0;
    report(5, ok, &format!("200 instances in {secs:.2}s, worst forbidden count {worst_forbidden}"));
}

#[test]
fn criterion_06_partition_identities() {
    let mut worst_freq = 0.0f64;
    for i in 0..4000 {
        let r = 2f64.powf(-20.0 + 40.0 * i as f64 / 4000.0);
        let e = r.log2().floor() as i64;
        let sum: f64 = ((e - 2)..=(e + 2))
            .map(|k| {
                let s = r * 2f64.powi(-k as i32);
                psi(s) * phi(s)
            })
            .sum();
        worst_freq = worst_freq.max((sum - 1.0).abs());
    }
    let mut worst_spatial = 0.0f64;
    for i in 0..4000 {
        let r = 256.0 * i as f64 / 4000.0;
        let sum: f64 = (0..=8).map(|l| chi(l, r)).sum();
        worst_spatial = worst_spatial.max((sum - 1.0).abs());
    }
    let ok = worst_freq <= 1e-8 && worst_spatial <= 1e-8;
    report(6, ok, &format!("frequency defect {worst_freq:.2e}, spatial defect {worst_spatial:.2e}"));
}

#[test]
fn criterion_07_rearrangement_and_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    for _ in 0..1000 {
        let len = rng.gen_range(1..60);
        let values: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() * 10.0).collect();
        let w = WeightSequence::new(rng.gen_range(-50..50), values.clone());
        let star = rearrange(&w);
        let mut oracle = values;
        oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ok &= star.sorted == oracle;
        let blocks = build_blocks(&w);
        let mut members: Vec<i64> = blocks.iter().flat_map(|b| b.ks.clone()).collect();
        members.sort_unstable();
        ok &= members == w.support();
        for b in &blocks {
            let cap = if b.j >= 6 { usize::MAX } else { 1usize << (1u32 << b.j) };
            ok &= b.ks.len() <= cap;
        }
    }
    report(7, ok, "1000 random sequences: sort oracle + block partition + cardinality");
}

fn eight_scale_multiplier() -> BumpSumMultiplier {
    let coeffs = [1.0, 0.4, -0.9, 0.7, 1.0, -0.3, 0.5, 0.8];
    BumpSumMultiplier::new(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| BumpTerm { scale: k as i64, coeff: Complex64::new(c, 0.1 * c) })
            .collect(),
        SmoothProfile::standard_bump(),
    )
}

fn band_limited(spec: GridSpec, band: f64, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<Complex64> = (0..spec.points())
        .map(|q| {
            if spec.freq(q)[0].abs() <= band {
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    grid::idft(&GridSymbol::sampled(spec, vals))
}

#[test]
fn criterion_08_reconstruction() {
    let m = eight_scale_multiplier();
    let omega_spec = GridSpec::new(1, 32768, 2048.0);
    let ks: Vec<i64> = (-3..=10).collect();
    let omega = measure_omega(&m, &ks, omega_spec, OmegaKind::WeightedNorm { pp: 2.0, alpha: 1.0 })
        .unwrap();
    let active = WeightSequence::new(
        omega.k_lo,
        omega.values.iter().map(|&v| if v > 1e-9 { v } else { 0.0 }).collect(),
    );
    let blocks = build_blocks(&active);
    let spec = GridSpec::new(1, 4096, 64.0);
    let kernel_spec = GridSpec::new(1, 8192, 512.0);
    let pieces = build_pieces(&m, &blocks, kernel_spec, 8).unwrap();
    let f = band_limited(spec, 16.0, 0x8eed);
    let sym = GridSymbol::lazy(spec, Arc::new(m));
    let mut ok = true;
    let mut worst = 0.0f64;
    for t in [1.0, 1.37, 2.0] {
        let direct = grid::apply_symbol(&sym, t, &f).unwrap();
        let recon = reconstruct(&pieces, t, &f).unwrap();
        let diff = GridFunction::new(
            spec,
            direct.values.iter().zip(&recon.values).map(|(a, b)| a - b).collect(),
        );
        let rel = diff.lp_norm(2.0) / direct.lp_norm(2.0);
        worst = worst.max(rel);
        ok &= rel <= 1e-3;
    }
    report(8, ok, &format!("worst relative L2 over t in {{1, 1.37, 2}}: {worst:.2e}"));
}

fn assembled_active_ks(m: &BumpSumMultiplier) -> Vec<i64> {
    let mut ks: Vec<i64> = m
        .terms()
        .iter()
        .flat_map(|t| (t.scale - 2)..=(t.scale + 2))
        .collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

#[test]
fn criterion_09_criterion_evaluator() {
    let spec = GridSpec::new(1, 32768, 2048.0);
    let kind = OmegaKind::WeightedNorm { pp: 2.0, alpha: 1.0 };

    // single bump: finitely many nonzero weights, sum stabilizes
    let single = BumpSumMultiplier::new(
        vec![BumpTerm { scale: 0, coeff: Complex64::new(1.0, 0.0) }],
        SmoothProfile::standard_bump(),
    );
    let omega_s = measure_omega(&single, &(-4..=4).collect::<Vec<_>>(), spec, kind).unwrap();
    let verdict_single = evaluate_criterion(&omega_s, 1024).verdict;

    // assembled counterexample with v = sqrt log: the rearranged weights
    // stay near a constant over a long range, so the windowed sum grows
    // with the horizon
    let weight = GrowthWeight::sqrt_log();
    let assembled = assemble(4, &weight).unwrap();
    let ks = assembled_active_ks(&assembled.multiplier);
    let omega_a = measure_omega(&assembled.multiplier, &ks, spec, kind).unwrap();
    let sums: Vec<f64> =
        [128, 256, 512, 1024].iter().map(|&l| criterion_sum(&omega_a, l).value).collect();
    let diverging = sums.windows(2).all(|w| w[1] > w[0] * 1.01);
    let verdict_assembled = evaluate_criterion(&omega_a, 1024).verdict;

    let ok = verdict_single == Verdict::Satisfied
        && diverging
        && verdict_assembled == Verdict::ViolatedAtHorizon;
    report(
        9,
        ok,
        &format!(
            "single: {verdict_single:?}; assembled windowed sums {sums:.3?} -> {verdict_assembled:?}"
        ),
    );
}

#[test]
fn criterion_10_seminorm_sanity() {
    let one = FnSymbol(|_k: i64, _xi: &[f64]| Complex64::new(1.0, 0.0));
    let mut exact = true;
    for order in 0..=2usize {
        exact &= mikhlin_seminorm_symbol(&one, order, 8, 64) == 1.0;
    }

    // the constructed multiplier: per-scale localized seminorms, divided
    // by the designed block amplitude N^{-1/2} v(4^N), stay within a fixed
    // band around the profile constant
    let weight = GrowthWeight::sqrt_log();
    let assembled = assemble(4, &weight).unwrap();
    let mut ratio_lo = f64::INFINITY;
    let mut ratio_hi = 0.0f64;
    for block in &assembled.blocks {
        let amp = block.coeff;
        for k in [block.scale_lo, (block.scale_lo + block.scale_hi) / 2, block.scale_hi] {
            let v = localized_seminorm(&assembled.multiplier, k, 2, 256);
            let ratio = v / amp;
            ratio_lo = ratio_lo.min(ratio);
            ratio_hi = ratio_hi.max(ratio);
        }
    }
    // the ratio concentrates near the profile's own order-2 seminorm
    // (recorded ~700 for the standard ramp); bounded and uniform over
    // blocks is what matters
    let bounded = ratio_hi.is_finite() && ratio_hi <= 1024.0 && ratio_hi <= 2.0 * ratio_lo;
    let ok = exact && bounded;
    report(
        10,
        ok,
        &format!("identity seminorms exact: {exact}; localized ratio in [{ratio_lo:.3}, {ratio_hi:.3}]"),
    );
}
