//! Morse permutations `g_n` of `{2^n, ..., 2^{n+1}-1}` and their two
//! broken-cycle linear orders.
//!
//! `g_1 = (2, 3)`; for `n >= 2` each half of the interval carries a
//! shifted copy of `g_{n-1}` with one exception per half
//! (`g_n(a_{n+1}) = 2^{n+1}-1` and `g_n(2^n + a_n) = 2^n`), which makes
//! `g_n` a single cycle whose halves are almost invariant. Breaking the
//! cycle at `2^{n+1}-1` gives the order `tau_n`; breaking it at `2^n`
//! gives `taubar_n`, the image of `tau_n` under the reflection
//! `i <-> 2^{n+1} + 2^n - i - 1`.

use num_bigint::BigInt;

use crate::{Error, Result};

/// Levels up to this size keep a materialized lookup table; larger
/// levels are evaluated point-wise by unfolding the induction.
pub const MATERIALIZE_MAX: u32 = 20;

/// Largest supported level (elements must fit in a `u128`).
pub const LEVEL_MAX: u32 = 126;

/// `a_n` in machine words, `n <= 126`.
fn a_small(r: u32) -> u128 {
    debug_assert!(r <= LEVEL_MAX);
    if r == 0 {
        return 0;
    }
    let top = (1u128 << (r + 1)) - if r % 2 == 1 { 1 } else { 2 };
    debug_assert!(top.is_multiple_of(3));
    top / 3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    /// Cycle broken at `2^{n+1} - 1` (minimal element on the right end).
    Tau,
    /// Cycle broken at `2^n` (minimal element on the left end).
    TauBar,
}

impl OrderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderKind::Tau => "tau",
            OrderKind::TauBar => "taubar",
        }
    }
}

/// The cyclic Morse permutation of `{2^n, ..., 2^{n+1}-1}`.
#[derive(Debug, Clone)]
pub struct MorsePerm {
    n: u32,
    /// `table[j] = g_n(2^n + j)` when materialized.
    table: Option<Vec<u128>>,
}

fn check_level(n: u32) -> Result<()> {
    if !(1..=LEVEL_MAX).contains(&n) {
        return Err(Error::LevelOutOfRange(n));
    }
    Ok(())
}

fn eval_rec(n: u32, i: u128) -> u128 {
    debug_assert!((1 << n) <= i && i < (2 << n));
    if i == a_small(n + 1) {
        return (2 << n) - 1;
    }
    if i == (1 << n) + a_small(n) {
        return 1 << n;
    }
    // n = 1 has only the two exceptional elements, so we never get here.
    let half = 1u128 << (n - 1);
    if i < (1 << n) + half {
        eval_rec(n - 1, i - half) + half
    } else {
        eval_rec(n - 1, i - (1 << n)) + (1 << n)
    }
}

impl MorsePerm {
    pub fn new(n: u32) -> Result<Self> {
        check_level(n)?;
        let table = if n <= MATERIALIZE_MAX {
            let mut cur: Vec<u128> = vec![3, 2];
            for m in 2..=n {
                let half = 1usize << (m - 1);
                let size = 1usize << m;
                let mut next = vec![0u128; size];
                for (j, slot) in next.iter_mut().enumerate() {
                    *slot = if j < half {
                        cur[j] + half as u128
                    } else {
                        cur[j - half] + (size as u128)
                    };
                }
                next[(a_small(m + 1) - (1 << m)) as usize] = (2 << m) - 1;
                next[a_small(m) as usize] = 1 << m;
                cur = next;
            }
            Some(cur)
        } else {
            None
        };
        Ok(MorsePerm { n, table })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn domain(&self) -> std::ops::Range<u128> {
        (1 << self.n)..(2 << self.n)
    }

    pub fn apply(&self, i: u128) -> Result<u128> {
        if !self.domain().contains(&i) {
            return Err(Error::OutOfInterval {
                level: self.n,
                element: BigInt::from(i),
            });
        }
        Ok(match &self.table {
            Some(t) => t[(i - (1 << self.n)) as usize],
            None => eval_rec(self.n, i),
        })
    }
}

/// Stateless point evaluation `g_n(i)`.
pub fn apply(n: u32, i: u128) -> Result<u128> {
    check_level(n)?;
    if i < (1 << n) || i >= (2 << n) {
        return Err(Error::OutOfInterval {
            level: n,
            element: BigInt::from(i),
        });
    }
    Ok(eval_rec(n, i))
}

/// First element of the order of `kind` at level `n`.
pub fn order_start(n: u32, kind: OrderKind) -> u128 {
    match kind {
        OrderKind::Tau => (2 << n) - 1,
        OrderKind::TauBar => 1 << n,
    }
}

/// Last element: `a_{n+1}` for `tau_n`, its reflection for `taubar_n`.
pub fn order_last(n: u32, kind: OrderKind) -> u128 {
    match kind {
        OrderKind::Tau => a_small(n + 1),
        OrderKind::TauBar => (2 << n) + (1 << n) - a_small(n + 1) - 1,
    }
}

/// Successor of `i` in the broken-cycle order, `None` at the last element.
pub fn order_succ(perm: &MorsePerm, kind: OrderKind, i: u128) -> Result<Option<u128>> {
    let next = perm.apply(i)?;
    Ok(if next == order_start(perm.level(), kind) {
        None
    } else {
        Some(next)
    })
}

/// A level's interval written in visit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenCycleOrder {
    pub n: u32,
    pub kind: OrderKind,
    pub sequence: Vec<u128>,
}

/// Materialize the full order; `cap` bounds the element count.
pub fn order_capped(n: u32, kind: OrderKind, cap: u64) -> Result<BrokenCycleOrder> {
    check_level(n)?;
    if n >= 64 || (1u64 << n) > cap {
        return Err(Error::CapExceeded { cap, needed: n });
    }
    let perm = MorsePerm::new(n)?;
    let start = order_start(n, kind);
    let mut sequence = Vec::with_capacity(1 << n);
    let mut cur = start;
    loop {
        sequence.push(cur);
        match order_succ(&perm, kind, cur)? {
            Some(next) => cur = next,
            None => break,
        }
    }
    Ok(BrokenCycleOrder { n, kind, sequence })
}

/// Materialize the full order with the default cap of `2^24` elements.
pub fn order(n: u32, kind: OrderKind) -> Result<BrokenCycleOrder> {
    order_capped(n, kind, 1 << 24)
}

impl BrokenCycleOrder {
    pub fn first(&self) -> u128 {
        self.sequence[0]
    }

    pub fn last(&self) -> u128 {
        *self.sequence.last().unwrap()
    }

    /// The same order carried to `[b, b + 2^n - 1]` by `i -> i - 2^n + b`.
    pub fn shifted(&self, b: &BigInt) -> Vec<BigInt> {
        let base = BigInt::from(1u128 << self.n);
        self.sequence
            .iter()
            .map(|&e| b + BigInt::from(e) - &base)
            .collect()
    }
}

/// The reflection `i <-> 2^{n+1} + 2^n - i - 1` of the level-`n` interval.
pub fn reflect(n: u32, i: u128) -> Result<u128> {
    check_level(n)?;
    if i < (1 << n) || i >= (2 << n) {
        return Err(Error::OutOfInterval {
            level: n,
            element: BigInt::from(i),
        });
    }
    Ok((2 << n) + (1 << n) - i - 1)
}
