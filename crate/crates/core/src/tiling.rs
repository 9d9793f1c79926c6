//! Translate tiling for finite integer sets: given E with card(E) <= 2^N,
//! place centers b_i, one per slot [i 4^{N+1}, (i+1) 4^{N+1}), so that the
//! translates b_i + E are pairwise disjoint while bounded shifts of the
//! center family cover the integers. Includes brute-force verifiers.

use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

#[derive(Debug, thiserror::Error)]
pub enum TilingError {
    #[error("cardinality {card} exceeds 2^{n}")]
    TooLarge { card: usize, n: u32 },
    #[error("forbidden set fills slot {slot}; the counting bound is violated")]
    InfeasibleSlot { slot: i64 },
    #[error("coverage window reaches past the constructed centers")]
    WindowTooWide,
}

#[derive(Debug, Clone)]
pub struct TilingInstance {
    /// Sorted, deduplicated.
    pub set: Vec<i64>,
    pub n: u32,
    /// Centers are built for slot indices |i| <= radius.
    pub radius: i64,
}

impl TilingInstance {
    pub fn new(mut set: Vec<i64>, n: u32, radius: i64) -> Result<Self, TilingError> {
        set.sort_unstable();
        set.dedup();
        assert!(!set.is_empty() && radius >= 0);
        if set.len() as u64 > 1u64 << n {
            return Err(TilingError::TooLarge { card: set.len(), n });
        }
        Ok(TilingInstance { set, n, radius })
    }

    pub fn slot_width(&self) -> i64 {
        4i64.pow(self.n + 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TilingResult {
    /// centers[(i + radius) as usize] = b_i.
    pub centers: Vec<i64>,
    pub radius: i64,
    pub slot_width: i64,
    /// Largest forbidden-set cardinality seen in any slot.
    pub max_forbidden: usize,
}

impl TilingResult {
    pub fn center(&self, i: i64) -> i64 {
        self.centers[(i + self.radius) as usize]
    }
}

/// Inductive construction: b_0 = 0, then for j = 1, 2, ... place b_j and
/// b_{-j} as the smallest value in the slot whose translate avoids every
/// previously occupied integer.
pub fn build_tiling(instance: &TilingInstance) -> Result<TilingResult, TilingError> {
    let width = instance.slot_width();
    let e_min = *instance.set.first().unwrap();
    let e_max = *instance.set.last().unwrap();
    let mut occupied: BTreeSet<i64> = instance.set.iter().copied().collect();
    let mut centers = vec![0i64; (2 * instance.radius + 1) as usize];
    let mut max_forbidden = 0usize;
    let mut forbidden = vec![false; width as usize];

    let mut place = |slot: i64,
                     occupied: &mut BTreeSet<i64>,
                     max_forbidden: &mut usize|
     -> Result<i64, TilingError> {
        let lo = slot * width;
        forbidden.iter_mut().for_each(|v| *v = false);
        let mut count = 0usize;
        // c in the slot is forbidden iff c + e is occupied for some e in E,
        // i.e. c = o - e for an occupied o in [lo + e_min, lo + width - 1 +
        // e_max]; occupancy is localized, so the range stays small.
        let relevant: Vec<i64> = occupied
            .range(lo + e_min..=lo + width - 1 + e_max)
            .copied()
            .collect();
        for &o in &relevant {
            for &e in &instance.set {
                let c = o - e;
                if c >= lo && c < lo + width && !forbidden[(c - lo) as usize] {
                    forbidden[(c - lo) as usize] = true;
                    count += 1;
                }
            }
        }
        *max_forbidden = (*max_forbidden).max(count);
        let offset = forbidden
            .iter()
            .position(|&v| !v)
            .ok_or(TilingError::InfeasibleSlot { slot })?;
        let b = lo + offset as i64;
        for &e in &instance.set {
            occupied.insert(b + e);
        }
        Ok(b)
    };

    // b_0 = 0; E itself seeds the occupancy.
    for j in 1..=instance.radius {
        let bj = place(j, &mut occupied, &mut max_forbidden)?;
        centers[(j + instance.radius) as usize] = bj;
        let bmj = place(-j, &mut occupied, &mut max_forbidden)?;
        centers[(-j + instance.radius) as usize] = bmj;
    }
    Ok(TilingResult { centers, radius: instance.radius, slot_width: width, max_forbidden })
}

/// Brute force: the multiset union of all translates has no repeats.
pub fn verify_disjoint(result: &TilingResult, set: &[i64]) -> bool {
    let mut seen = HashSet::with_capacity(result.centers.len() * set.len());
    for &b in &result.centers {
        for &e in set {
            if !seen.insert(b + e) {
                return false;
            }
        }
    }
    true
}

/// Every integer z with |z| <= window is within slot_width of some center.
pub fn verify_cover(result: &TilingResult, window: i64) -> Result<bool, TilingError> {
    let shift = result.slot_width;
    let lo = result.center(-result.radius) + shift;
    let hi = result.center(result.radius) - shift;
    if -window < lo || window > hi {
        return Err(TilingError::WindowTooWide);
    }
    for z in -window..=window {
        let covered = result.centers.iter().any(|&b| (z - b).abs() <= shift);
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn singleton_set_tiles_every_slot_start() {
        let inst = TilingInstance::new(vec![0], 0, 8).unwrap();
        let r = build_tiling(&inst).unwrap();
        for i in -8..=8i64 {
            assert_eq!(r.center(i), 4 * i);
        }
        assert!(verify_disjoint(&r, &inst.set));
        assert!(verify_cover(&r, 20).unwrap());
    }

    #[test]
    fn two_element_set_by_hand() {
        // E = {0, 5}, slot width 16: the smallest-allowed rule keeps each
        // slot start since the translates never meet.
        let inst = TilingInstance::new(vec![0, 5], 1, 2).unwrap();
        let r = build_tiling(&inst).unwrap();
        assert_eq!(r.center(0), 0);
        assert_eq!(r.center(1), 16);
        assert_eq!(r.center(-1), -16);
        assert!(verify_disjoint(&r, &inst.set));
        let all: Vec<i64> = [-16i64, 0, 16]
            .iter()
            .flat_map(|b| [b + 0, b + 5])
            .collect();
        let uniq: std::collections::HashSet<i64> = all.iter().copied().collect();
        assert_eq!(uniq.len(), all.len());
    }

    #[test]
    fn corrupted_centers_fail_disjointness() {
        let inst = TilingInstance::new(vec![0], 0, 2).unwrap();
        let mut r = build_tiling(&inst).unwrap();
        assert!(verify_disjoint(&r, &inst.set));
        let b0 = r.center(0);
        r.centers[(1 + r.radius) as usize] = b0;
        assert!(!verify_disjoint(&r, &inst.set));
    }

    #[test]
    fn cardinality_gate() {
        assert!(matches!(
            TilingInstance::new((0..5).collect(), 2, 4),
            Err(TilingError::TooLarge { .. })
        ));
        assert!(TilingInstance::new((0..4).collect(), 2, 4).is_ok());
    }

    #[test]
    fn window_past_centers_is_rejected() {
        let inst = TilingInstance::new(vec![0], 0, 2).unwrap();
        let r = build_tiling(&inst).unwrap();
        assert!(matches!(verify_cover(&r, 1000), Err(TilingError::WindowTooWide)));
    }

    fn arb_instance() -> impl Strategy<Value = TilingInstance> {
        (1u32..=5).prop_flat_map(|n| {
            let card = 1usize << n;
            // diameter < 2^{2N+1} keeps the counting bound in force
            (proptest::collection::btree_set(0i64..(1i64 << (2 * n + 1)), 1..=card))
                .prop_map(move |s| {
                    TilingInstance::new(s.into_iter().collect(), n, 8).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn constructed_tilings_satisfy_all_clauses(inst in arb_instance()) {
            let r = build_tiling(&inst).unwrap();
            let width = inst.slot_width();
            // slot localization and the induced gap property
            for i in -inst.radius..=inst.radius {
                prop_assert_eq!(r.center(i).div_euclid(width), i);
            }
            for i in -inst.radius..=(inst.radius - 2) {
                prop_assert!(r.center(i + 2) - r.center(i) > width);
            }
            prop_assert!(verify_disjoint(&r, &inst.set));
            prop_assert!(verify_cover(&r, 3 * width).unwrap());
            prop_assert!(r.max_forbidden <= 1usize << (2 * inst.n + 1));
            // determinism
            let again = build_tiling(&inst).unwrap();
            prop_assert_eq!(again.centers, r.centers);
        }
    }
}
