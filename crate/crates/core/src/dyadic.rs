//! Exact dyadic rationals `mant * 2^exp` with arbitrary binary exponent.
//!
//! Support endpoints of dilated bumps are small rationals times a power of
//! two whose exponent can reach several thousand, far beyond `f64` range.
//! Comparisons here are exact for any exponent.

use std::cmp::Ordering;

/// `mant * 2^exp`, with `mant` a (possibly negative) 64-bit integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: i64,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: i64, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic { mant: 0, exp: 0 }
    }

    /// 2^e.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: 1, exp: e }
    }

    fn normalized(mut self) -> Self {
        if self.mant == 0 {
            self.exp = 0;
            return self;
        }
        while self.mant % 2 == 0 {
            self.mant /= 2;
            self.exp += 1;
        }
        self
    }

    /// Exact sum. Panics if the aligned mantissa exceeds 64 bits; callers
    /// only combine values whose exponents are within a small range.
    pub fn add(self, other: Self) -> Self {
        if self.mant == 0 {
            return other;
        }
        if other.mant == 0 {
            return self;
        }
        let exp = self.exp.min(other.exp);
        let sa = (self.exp - exp) as u32;
        let sb = (other.exp - exp) as u32;
        assert!(sa < 64 && sb < 64, "dyadic add: exponent gap too large");
        let sum = ((self.mant as i128) << sa) + ((other.mant as i128) << sb);
        assert!(i64::try_from(sum).is_ok(), "dyadic add: mantissa overflow");
        Dyadic::new(sum as i64, exp)
    }

    pub fn neg(self) -> Self {
        Dyadic { mant: -self.mant, exp: self.exp }
    }

    pub fn mul_pow2(self, e: i64) -> Self {
        if self.mant == 0 {
            return self;
        }
        Dyadic { mant: self.mant, exp: self.exp + e }
    }

    pub fn is_positive(&self) -> bool {
        self.mant > 0
    }

    /// floor(log2(|x|)) for nonzero x.
    fn floor_log2(&self) -> i64 {
        debug_assert!(self.mant != 0);
        let bits = 63 - self.mant.unsigned_abs().leading_zeros() as i64;
        self.exp + bits
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.signum(), other.mant.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            (sign, _) => {
                // Same nonzero sign: compare magnitudes by binary length first,
                // falling back to an exact shifted comparison in i128.
                let la = self.floor_log2();
                let lb = other.floor_log2();
                let mag = if la != lb {
                    la.cmp(&lb)
                } else {
                    // Exponent gap is at most the mantissa bit width here.
                    let shift = (self.exp - other.exp).unsigned_abs() as u32;
                    let (a, b) = if self.exp >= other.exp {
                        ((self.mant as i128) << shift, other.mant as i128)
                    } else {
                        (self.mant as i128, (other.mant as i128) << shift)
                    };
                    a.unsigned_abs().cmp(&b.unsigned_abs())
                };
                if sign > 0 {
                    mag
                } else {
                    mag.reverse()
                }
            }
        }
    }
}

/// Closed interval [lo, hi] of dyadic rationals.
#[derive(Debug, Clone, Copy)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        DyadicInterval { lo, hi }
    }

    pub fn mul_pow2(self, e: i64) -> Self {
        DyadicInterval { lo: self.lo.mul_pow2(e), hi: self.hi.mul_pow2(e) }
    }

    pub fn contains_interval(&self, inner: &DyadicInterval) -> bool {
        self.lo <= inner.lo && inner.hi <= self.hi
    }

    pub fn intersects(&self, other: &DyadicInterval) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compares_across_huge_exponents() {
        let a = Dyadic::new(3, 5000); // 3 * 2^5000
        let b = Dyadic::new(5, 4999); // 2.5 * 2^5000
        assert!(a > b);
        assert!(Dyadic::new(-3, 5000) < Dyadic::new(1, -5000));
        assert_eq!(Dyadic::new(4, 0), Dyadic::new(1, 2));
    }

    #[test]
    fn compares_same_magnitude_class() {
        // 9/8 vs 17/16 (both in [1,2))
        assert!(Dyadic::new(9, -3) > Dyadic::new(17, -4));
        assert!(Dyadic::new(9, -3) < Dyadic::new(19, -4));
    }

    #[test]
    fn interval_relations() {
        // 2^3*[7/8,9/8] = [7,9] contains [2^3-1/8, 2^3+1/8]
        let flat = DyadicInterval::new(Dyadic::new(7, -3), Dyadic::new(9, -3)).mul_pow2(3);
        let spec = DyadicInterval::new(Dyadic::new(63, -3), Dyadic::new(65, -3));
        assert!(flat.contains_interval(&spec));
        let outer = DyadicInterval::new(Dyadic::new(3, -2), Dyadic::new(5, -2)).mul_pow2(4);
        assert!(!outer.intersects(&spec));
    }
}
