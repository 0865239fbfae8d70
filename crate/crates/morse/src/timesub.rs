//! The time substitution between the odometer and the Morse map, and
//! the re-ordering of odometer orbits it induces.
//!
//! For a point `x` the trace `t(k)` is the integer with
//! `M^k x = T^{t(k)} x` (`T` the odometer `y -> y + 1`). The trace of a
//! generic point is total and injective, and its local structure is
//! captured by a tower of ordered integer intervals: scanning the
//! digits of `x` for repeats `x_r = x_{r+1}` yields nested intervals
//! `I_n = [-v_n, -v_n + 2^{r_n} - 1]` (`v_n` the value of digits
//! `1..r_n`), each carrying one of the two broken-cycle orders of level
//! `r_n` — the left-anchored one when the repeated digit is `0`, the
//! right-anchored one when it is `1`. Consecutive trace values are
//! successor pairs in every interval large enough to contain them.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::dyadic::{Dyadic, ExceptionalClass};
use crate::morse_map::{morse_inverse, morse_step};
use crate::perms::{self, OrderKind};
use crate::{Error, Result};

/// The displacements `t(k)` for `|k| <= window`, keyed by `k`.
///
/// For the four exceptional cofinality classes the glued orbit leaves
/// the translation coset of the base point on one side; the trace is
/// then clipped at the first non-integer displacement instead of
/// failing.
#[derive(Debug, Clone)]
pub struct OrbitTrace {
    base: Dyadic,
    window: u32,
    values: BTreeMap<i64, BigInt>,
}

impl OrbitTrace {
    pub fn base(&self) -> &Dyadic {
        &self.base
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn value(&self, k: i64) -> Option<&BigInt> {
        self.values.get(&k)
    }

    pub fn values(&self) -> &BTreeMap<i64, BigInt> {
        &self.values
    }

    pub fn min_k(&self) -> i64 {
        *self.values.keys().next().unwrap()
    }

    pub fn max_k(&self) -> i64 {
        *self.values.keys().next_back().unwrap()
    }

    /// True when neither side was clipped.
    pub fn is_complete(&self) -> bool {
        self.values.len() == 2 * self.window as usize + 1
    }

    /// Largest `m` with every integer of `[-m, m]` among the values.
    pub fn coverage_radius(&self) -> u64 {
        let set: HashSet<&BigInt> = self.values.values().collect();
        let mut m = 0u64;
        while set.contains(&BigInt::from(m + 1)) && set.contains(&-BigInt::from(m + 1)) {
            m += 1;
        }
        m
    }

    /// The trace of `M(base)`: `t'(k) = t(k + 1) - t(1)`, the modified
    /// shift of the trace. Its window shrinks by one.
    pub fn modified_shift(&self) -> Result<OrbitTrace> {
        assert!(self.window >= 2, "modified shift needs window >= 2");
        let t1 = self
            .values
            .get(&1)
            .ok_or_else(|| Error::NonIntegerDisplacement(format!("t(1) of {}", self.base)))?
            .clone();
        let window = self.window - 1;
        let mut values = BTreeMap::new();
        for k in -(window as i64)..=window as i64 {
            if let Some(v) = self.values.get(&(k + 1)) {
                values.insert(k, v - &t1);
            }
        }
        Ok(OrbitTrace {
            base: morse_step(&self.base)?,
            window,
            values,
        })
    }
}

/// Trace the Morse orbit of a rational point through the odometer:
/// iterate `M` and `M^{-1}` up to `window` steps each way and record
/// the integer displacement from `x` at every step.
pub fn orbit_trace(x: &Dyadic, window: u32) -> Result<OrbitTrace> {
    let class = x.classify()?;
    let mut values = BTreeMap::new();
    values.insert(0i64, BigInt::zero());
    for dir in [1i64, -1] {
        let mut y = x.clone();
        for k in 1..=window as i64 {
            y = if dir == 1 {
                morse_step(&y)?
            } else {
                morse_inverse(&y)?
            };
            match x.cofinal_difference(&y)? {
                Some(d) => {
                    values.insert(dir * k, d);
                }
                None => {
                    if class == ExceptionalClass::Generic {
                        return Err(Error::NonIntegerDisplacement(format!(
                            "M^{}({x})",
                            dir * k
                        )));
                    }
                    // glued orbit left the coset; once gone it stays gone
                    break;
                }
            }
        }
    }
    let distinct: HashSet<&BigInt> = values.values().collect();
    assert_eq!(
        distinct.len(),
        values.len(),
        "orbit trace must be injective"
    );
    Ok(OrbitTrace {
        base: x.clone(),
        window,
        values,
    })
}

/// `trace(M x)` equals the modified shift of `trace(x)`.
pub fn shift_identity_check(x: &Dyadic, window: u32) -> Result<bool> {
    assert!(window >= 2);
    let shifted = orbit_trace(x, window)?.modified_shift()?;
    let direct = orbit_trace(&morse_step(x)?, window - 1)?;
    Ok(shifted.values == direct.values)
}

/// One level of the interval tower of a generic point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelParams {
    /// Digit position of the repeat; the interval has `2^r` elements.
    pub r: u32,
    /// The repeated digit, which picks the order type.
    pub eps: u8,
    /// Interval is `[lo, hi]` with `hi = lo + 2^r - 1`.
    pub lo: BigInt,
    pub hi: BigInt,
}

impl LevelParams {
    pub fn kind(&self) -> OrderKind {
        if self.eps == 0 {
            OrderKind::TauBar
        } else {
            OrderKind::Tau
        }
    }

    pub fn contains(&self, e: &BigInt) -> bool {
        self.lo <= *e && *e <= self.hi
    }
}

/// The interval tower of a generic point.
#[derive(Debug, Clone)]
pub struct OrderConstruction {
    base: Dyadic,
    levels: Vec<LevelParams>,
}

/// An integer interval written in visit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub sequence: Vec<BigInt>,
}

impl OrderedInterval {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn position_of(&self, e: &BigInt) -> Option<usize> {
        self.sequence.iter().position(|v| v == e)
    }
}

/// Scan the digits of a generic rational for repeats, emitting one
/// level per repeat until `stop` accepts the newest level.
fn scan_levels(
    x: &Dyadic,
    mut stop: impl FnMut(&LevelParams) -> bool,
) -> Result<Vec<LevelParams>> {
    let class = x.classify()?;
    if class != ExceptionalClass::Generic {
        return Err(Error::ExceptionalPoint(class));
    }
    let mut it = x.digit_iter()?;
    let mut levels = Vec::new();
    let mut v = BigInt::zero();
    let mut prev = it.next_digit();
    if prev == 1 {
        v.set_bit(0, true);
    }
    let mut k: u64 = 1; // position of `prev`; `v` holds digits 1..k
    loop {
        let cur = it.next_digit();
        if cur == prev {
            if k > perms::LEVEL_MAX as u64 {
                return Err(Error::LevelOutOfRange(k.min(u32::MAX as u64) as u32));
            }
            let lo = -&v;
            let hi = &lo + (BigInt::one() << k) - 1;
            let level = LevelParams {
                r: k as u32,
                eps: cur,
                lo,
                hi,
            };
            let done = stop(&level);
            levels.push(level);
            if done {
                return Ok(levels);
            }
        }
        if cur == 1 {
            v.set_bit(k, true);
        }
        prev = cur;
        k += 1;
        assert!(k < (1 << 22), "repeat scan did not terminate; bug");
    }
}

/// The first `depth` levels of the tower of `x`.
pub fn build_order(x: &Dyadic, depth: u32) -> Result<OrderConstruction> {
    assert!(depth >= 1);
    let mut count = 0u32;
    let levels = scan_levels(x, |_| {
        count += 1;
        count >= depth
    })?;
    Ok(OrderConstruction {
        base: x.clone(),
        levels,
    })
}

/// Grow the tower of `x` until the top level contains `[lo, hi]`.
pub fn build_order_covering(x: &Dyadic, lo: &BigInt, hi: &BigInt) -> Result<OrderConstruction> {
    let levels = scan_levels(x, |level| level.lo <= *lo && level.hi >= *hi)?;
    Ok(OrderConstruction {
        base: x.clone(),
        levels,
    })
}

impl OrderConstruction {
    pub fn base(&self) -> &Dyadic {
        &self.base
    }

    pub fn levels(&self) -> &[LevelParams] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> &LevelParams {
        self.levels.last().unwrap()
    }

    /// Materialize level `j` (0-based) in visit order.
    pub fn level_order(&self, j: usize, cap: u64) -> Result<OrderedInterval> {
        let level = &self.levels[j];
        let order = perms::order_capped(level.r, level.kind(), cap)?;
        Ok(OrderedInterval {
            lo: level.lo.clone(),
            hi: level.hi.clone(),
            sequence: order.shifted(&level.lo),
        })
    }

    /// Successor of `e` in the order of level `j`, computed point-wise
    /// (no materialization). `None` at the final element.
    pub fn level_succ(&self, j: usize, e: &BigInt) -> Result<Option<BigInt>> {
        let level = &self.levels[j];
        if !level.contains(e) {
            return Err(Error::OutOfInterval {
                level: level.r,
                element: e.clone(),
            });
        }
        let offset = (e - &level.lo).to_u128().expect("offset fits by construction");
        let p = offset + (1u128 << level.r);
        let g = perms::apply(level.r, p)?;
        Ok(if g == perms::order_start(level.r, level.kind()) {
            None
        } else {
            Some(&level.lo + BigInt::from(g - (1u128 << level.r)))
        })
    }
}

/// The smallest tower interval of `x` containing `[-radius, radius]`,
/// materialized in visit order.
pub fn window_order(x: &Dyadic, radius: u64, cap: u64) -> Result<OrderedInterval> {
    let lo = -BigInt::from(radius);
    let hi = BigInt::from(radius);
    let cons = build_order_covering(x, &lo, &hi)?;
    cons.level_order(cons.depth() - 1, cap)
}

/// Check that consecutive trace values are successor pairs of the top
/// level of `cons`. Pairs with a member outside the top interval are
/// skipped; a trace value that is final in the order must be followed
/// by a value outside the interval.
pub fn trace_matches_top_level(cons: &OrderConstruction, trace: &OrbitTrace) -> Result<bool> {
    let top = cons.depth() - 1;
    let level = cons.top();
    for k in trace.min_k()..trace.max_k() {
        let (Some(e), Some(f)) = (trace.value(k), trace.value(k + 1)) else {
            continue;
        };
        if !level.contains(e) {
            continue;
        }
        match cons.level_succ(top, e)? {
            Some(s) => {
                if s != *f {
                    return Ok(false);
                }
            }
            None => {
                if level.contains(f) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Comparison of one pair of tower levels.
#[derive(Debug, Clone)]
pub struct PairReport {
    /// 0-based indices of the coarse and fine level.
    pub coarse: usize,
    pub fine: usize,
    /// Positions where the fine order restricted to the coarse interval
    /// disagrees with the coarse order.
    pub restriction_mismatches: u64,
    /// Symmetric difference between the coarse interval and its image
    /// under the fine level's position map through 0.
    pub sym_diff: u64,
    pub sym_diff_ratio: f64,
}

/// Local finiteness evidence for a tower: every pair of levels agrees
/// on all but boundedly many positions.
#[derive(Debug, Clone)]
pub struct AlliedReport {
    pub pairs: Vec<PairReport>,
    /// Level pairs skipped because the fine level exceeds the cap.
    pub skipped: u64,
    pub max_restriction_mismatches: u64,
}

pub fn check_locally_finite(cons: &OrderConstruction, cap: u64) -> Result<AlliedReport> {
    let mut pairs = Vec::new();
    let mut skipped = 0u64;
    for n in 1..cons.depth() {
        let level_n = &cons.levels[n];
        if level_n.r >= 64 || (1u64 << level_n.r) > cap {
            skipped += n as u64;
            continue;
        }
        let order_n = cons.level_order(n, cap)?;
        let pos0 = order_n
            .position_of(&BigInt::zero())
            .expect("0 lies in every tower interval");
        for m in 0..n {
            let level_m = &cons.levels[m];
            let order_m = cons.level_order(m, cap)?;
            let induced: Vec<&BigInt> = order_n
                .sequence
                .iter()
                .filter(|e| level_m.contains(e))
                .collect();
            debug_assert_eq!(induced.len(), order_m.len());
            let restriction_mismatches = induced
                .iter()
                .zip(order_m.sequence.iter())
                .filter(|(a, b)| **a != *b)
                .count() as u64;
            // image of the coarse interval under the fine position map
            let total = order_m.len() as i64;
            let (m_lo, m_hi) = (
                level_m.lo.to_i64().expect("bounds fit: level passed the cap"),
                level_m.hi.to_i64().unwrap(),
            );
            let mut in_count = 0i64;
            for j in m_lo..=m_hi {
                let idx = pos0 as i64 + j;
                if idx >= 0 && (idx as usize) < order_n.len()
                    && level_m.contains(&order_n.sequence[idx as usize])
                {
                    in_count += 1;
                }
            }
            let sym_diff = (2 * (total - in_count)) as u64;
            pairs.push(PairReport {
                coarse: m,
                fine: n,
                restriction_mismatches,
                sym_diff,
                sym_diff_ratio: sym_diff as f64 / total as f64,
            });
        }
    }
    let max_restriction_mismatches = pairs
        .iter()
        .map(|p| p.restriction_mismatches)
        .max()
        .unwrap_or(0);
    Ok(AlliedReport {
        pairs,
        skipped,
        max_restriction_mismatches,
    })
}

/// Values of `trace` falling in `[lo, hi]`, listed in orbit order.
pub fn trace_induced_order(trace: &OrbitTrace, lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    trace
        .values()
        .values()
        .filter(|v| lo <= *v && *v <= hi)
        .cloned()
        .collect()
}

fn canonical_pattern(r: u32, kind: OrderKind) -> Result<Vec<u64>> {
    let order = perms::order_capped(r, kind, 1 << 24)?;
    Ok(order
        .sequence
        .iter()
        .map(|&e| (e - (1u128 << r)) as u64)
        .collect())
}

fn matches_canonical(r: u32, kind: OrderKind, normalized: &[u64]) -> Result<bool> {
    Ok(canonical_pattern(r, kind)? == normalized)
}

#[derive(Debug, Clone)]
pub struct UlftsReport {
    pub levels_checked: u64,
    /// Levels skipped because their size exceeds the trace budget.
    pub levels_skipped: u64,
    /// Distinct `(r, eps)` classes encountered.
    pub classes: Vec<(u32, u8)>,
    pub pass: bool,
}

/// Uniform local finiteness of the time substitution: the tower
/// interval orders of every generic point, read off independently from
/// its orbit trace, form the same pattern for every point and level
/// with the same repeat parameters — the canonical broken-cycle order
/// of that level.
///
/// The first `depth` levels of each point are checked; levels with
/// `r > max_r` are skipped (their trace window is exponential in `r`).
pub fn ulfts_check<'a, I>(points: I, depth: u32, max_r: u32) -> Result<UlftsReport>
where
    I: IntoIterator<Item = &'a Dyadic>,
{
    let mut seen: HashMap<(u32, u8), Vec<u64>> = HashMap::new();
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut pass = true;
    for x in points {
        let cons = build_order(x, depth)?;
        let widest = cons
            .levels()
            .iter()
            .map(|l| l.r)
            .filter(|&r| r <= max_r)
            .max();
        let Some(widest) = widest else {
            skipped += depth as u64;
            continue;
        };
        let trace = orbit_trace(x, 1 << widest)?;
        for level in cons.levels() {
            if level.r > max_r {
                skipped += 1;
                continue;
            }
            checked += 1;
            let induced = trace_induced_order(&trace, &level.lo, &level.hi);
            if induced.len() != 1 << level.r {
                pass = false;
                continue;
            }
            let normalized: Vec<u64> = induced
                .iter()
                .map(|v| (v - &level.lo).to_u64().unwrap())
                .collect();
            if !matches_canonical(level.r, level.kind(), &normalized)? {
                pass = false;
            }
            match seen.entry((level.r, level.eps)) {
                std::collections::hash_map::Entry::Occupied(slot) => {
                    if *slot.get() != normalized {
                        pass = false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(normalized);
                }
            }
        }
    }
    let mut classes: Vec<(u32, u8)> = seen.keys().copied().collect();
    classes.sort_unstable();
    Ok(UlftsReport {
        levels_checked: checked,
        levels_skipped: skipped,
        classes,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Dyadic {
        Dyadic::from_rational(p, q).unwrap()
    }

    fn seq_i64(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&e| BigInt::from(e)).collect()
    }

    #[test]
    fn trace_of_zero() {
        let t = orbit_trace(&Dyadic::from_int(0), 3).unwrap();
        assert_eq!(t.value(0), Some(&BigInt::zero()));
        assert_eq!(t.value(1), Some(&BigInt::one()));
        assert_eq!(t.value(2), Some(&BigInt::from(3)));
        assert_eq!(t.value(3), Some(&BigInt::from(2)));
        // backward step lands on -1/3, outside the integer coset
        assert_eq!(t.value(-1), None);
        assert_eq!(t.min_k(), 0);
        assert!(!t.is_complete());
    }

    #[test]
    fn trace_of_minus_one() {
        let t = orbit_trace(&Dyadic::from_int(-1), 3).unwrap();
        assert_eq!(t.value(1), Some(&BigInt::from(-1)));
        assert_eq!(t.value(2), Some(&BigInt::from(-3)));
        assert_eq!(t.value(-1), None);
    }

    #[test]
    fn trace_of_minus_one_seventh() {
        let t = orbit_trace(&rat(-1, 7), 3).unwrap();
        assert!(t.is_complete());
        let got: Vec<i64> = (-1..=3)
            .map(|k| t.value(k).unwrap().to_i64().unwrap())
            .collect();
        assert_eq!(got, vec![-1, 0, 2, 1, 22]);
    }

    #[test]
    fn modified_shift_fixed_points() {
        for sign in [1i64, -1] {
            let values: BTreeMap<i64, BigInt> =
                (-5..=5).map(|k| (k, BigInt::from(sign * k))).collect();
            let t = OrbitTrace {
                base: Dyadic::from_int(0),
                window: 5,
                values,
            };
            let shifted = t.modified_shift().unwrap();
            for k in -4..=4i64 {
                assert_eq!(shifted.value(k), Some(&BigInt::from(sign * k)));
            }
        }
    }

    #[test]
    fn shift_identity_examples() {
        for x in [rat(-1, 7), rat(5, 9), rat(-13, 11), rat(22, 7)] {
            assert!(shift_identity_check(&x, 24).unwrap(), "x = {x}");
        }
        // t(1, Mx) = t(2, x) - t(1, x) = 1 - 2 = -1 for x = -1/7
        let mx = morse_step(&rat(-1, 7)).unwrap();
        let t = orbit_trace(&mx, 1).unwrap();
        assert_eq!(t.value(1), Some(&BigInt::from(-1)));
    }

    #[test]
    fn builder_rejects_exceptional() {
        for x in [Dyadic::from_int(0), Dyadic::from_int(-4), rat(-1, 3), rat(5, 3)] {
            assert!(matches!(
                build_order(&x, 2),
                Err(Error::ExceptionalPoint(_))
            ));
        }
    }

    #[test]
    fn tower_of_minus_one_seventh() {
        let cons = build_order(&rat(-1, 7), 3).unwrap();
        let rs: Vec<u32> = cons.levels().iter().map(|l| l.r).collect();
        assert_eq!(rs, vec![2, 5, 8]);
        assert!(cons.levels().iter().all(|l| l.eps == 0));
        let bounds: Vec<(i64, i64)> = cons
            .levels()
            .iter()
            .map(|l| (l.lo.to_i64().unwrap(), l.hi.to_i64().unwrap()))
            .collect();
        assert_eq!(bounds, vec![(-1, 2), (-9, 22), (-73, 182)]);
        let o1 = cons.level_order(0, 1 << 20).unwrap();
        assert_eq!(o1.sequence, seq_i64(&[-1, 0, 2, 1]));
    }

    #[test]
    fn example_intervals_both_types() {
        // digits 0100... : repeat 00 at r = 3, interval [-2, 5], min first
        let x = Dyadic::from_bits(&[0, 1, 0, 0], &[1, 0, 0]).unwrap();
        let cons = build_order(&x, 1).unwrap();
        let o = cons.level_order(0, 1 << 20).unwrap();
        assert_eq!(o.sequence, seq_i64(&[-2, -1, 1, 0, 5, 4, 2, 3]));
        // digits 1011... : repeat 11 at r = 3, interval [-5, 2], min last
        let y = Dyadic::from_bits(&[1, 0, 1, 1], &[1, 0, 0]).unwrap();
        let cons = build_order(&y, 1).unwrap();
        let o = cons.level_order(0, 1 << 20).unwrap();
        assert_eq!(o.sequence, seq_i64(&[2, 1, -1, 0, -5, -4, -2, -3]));
    }

    #[test]
    fn min_side_rule() {
        // repeated digit 0 puts the first-visited element at the left
        // end of the interval, repeated digit 1 at the right end
        for (p, q) in [(-1, 7), (5, 9), (-13, 11), (22, 7), (3, 7), (-3, 5)] {
            let x = rat(p, q);
            let cons = build_order(&x, 3).unwrap();
            for (j, level) in cons.levels().iter().enumerate() {
                let o = cons.level_order(j, 1 << 20).unwrap();
                let first = &o.sequence[0];
                if level.eps == 0 {
                    assert_eq!(first, &level.lo, "x = {x}, level {j}");
                } else {
                    assert_eq!(first, &level.hi, "x = {x}, level {j}");
                }
            }
        }
    }

    #[test]
    fn window_order_minus_one_seventh() {
        let o = window_order(&rat(-1, 7), 9, 1 << 20).unwrap();
        let expected = seq_i64(&[
            -9, -8, -6, -7, -2, -3, -5, -4, 6, 5, 3, 4, -1, 0, 2, 1, 22, 21, 19, 20, 15,
            16, 18, 17, 7, 8, 10, 9, 14, 13, 11, 12,
        ]);
        assert_eq!(o.sequence, expected);
        // the orbit trace reads the same order off the dynamics
        let t = orbit_trace(&rat(-1, 7), 18).unwrap();
        let pos0 = o.position_of(&BigInt::zero()).unwrap();
        assert_eq!(pos0, 13);
        for k in -13..=18i64 {
            let idx = (pos0 as i64 + k) as usize;
            assert_eq!(t.value(k), Some(&o.sequence[idx]), "k = {k}");
        }
    }

    #[test]
    fn level_succ_matches_materialized() {
        for (p, q) in [(-1, 7), (5, 9), (-13, 11)] {
            let cons = build_order(&rat(p, q), 2).unwrap();
            for j in 0..cons.depth() {
                let o = cons.level_order(j, 1 << 20).unwrap();
                for w in o.sequence.windows(2) {
                    assert_eq!(cons.level_succ(j, &w[0]).unwrap(), Some(w[1].clone()));
                }
                let last = o.sequence.last().unwrap();
                assert_eq!(cons.level_succ(j, last).unwrap(), None);
            }
        }
    }

    #[test]
    fn trace_matches_builder() {
        for (p, q) in [(-1, 7), (5, 9), (-13, 11), (22, 7), (-3, 5)] {
            let x = rat(p, q);
            let t = orbit_trace(&x, 40).unwrap();
            let lo = t.values().values().min().unwrap().clone();
            let hi = t.values().values().max().unwrap().clone();
            let cons = build_order_covering(&x, &lo, &hi).unwrap();
            assert!(trace_matches_top_level(&cons, &t).unwrap(), "x = {x}");
        }
    }

    #[test]
    fn locally_finite_minus_one_seventh() {
        let cons = build_order(&rat(-1, 7), 5).unwrap();
        let report = check_locally_finite(&cons, 1 << 20).unwrap();
        assert_eq!(report.skipped, 0);
        assert_eq!(report.pairs.len(), 10);
        assert!(report.max_restriction_mismatches <= 2, "{report:?}");
        for p in &report.pairs {
            assert!(p.sym_diff_ratio <= 1.0);
        }
    }

    #[test]
    fn ulfts_on_rationals() {
        let points: Vec<Dyadic> = [
            (-1, 7),
            (5, 9),
            (-13, 11),
            (22, 7),
            (3, 7),
            (-3, 5),
            (17, 23),
            (-9, 13),
        ]
        .iter()
        .map(|&(p, q)| rat(p, q))
        .collect();
        let report = ulfts_check(points.iter(), 2, 12).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.levels_checked >= 12, "{report:?}");
    }

    #[test]
    fn corrupted_order_is_detected() {
        let mut pattern = canonical_pattern(5, OrderKind::TauBar).unwrap();
        assert!(matches_canonical(5, OrderKind::TauBar, &pattern).unwrap());
        pattern.swap(3, 17);
        assert!(!matches_canonical(5, OrderKind::TauBar, &pattern).unwrap());
    }

    #[test]
    fn coverage_radius_grows() {
        let t = orbit_trace(&rat(-1, 7), 64).unwrap();
        assert!(t.coverage_radius() >= 8, "radius {}", t.coverage_radius());
        let small = orbit_trace(&rat(-1, 7), 2).unwrap();
        assert!(small.coverage_radius() <= 2);
    }
}
