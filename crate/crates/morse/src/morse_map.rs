//! The Morse transformation in adic realization.
//!
//! `M` advances a digit sequence to the next one in the Morse adic
//! order: find the first repeated pair `x_r = x_{r+1}`, flip it
//! (`00 -> 10`, `11 -> 01`) and reset all earlier digits (to ones when
//! the repeat was `00`, to zeros when it was `11`). Equivalently
//! `M(x) = x + (-1)^{x_r} a_r` with the jump magnitudes
//! `a_r = 0, 1, 2, 5, 10, 21, ...`.
//!
//! The two points `-1/3 = (10)^inf` and `-2/3 = (01)^inf` have no
//! repeat; the map is completed by gluing `M(-1/3) = 0` and
//! `M(-2/3) = -1`, which also makes the inverse total.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::dyadic::Dyadic;
use crate::{Error, Result};

/// First repeated digit position and its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpParams {
    /// Minimal `r >= 1` with `x_r = x_{r+1}`; digits strictly alternate before it.
    pub r: u64,
    /// The common value `x_r`.
    pub eps: u8,
}

/// The displacement `t(x) = (-1)^{x_r} a_r` with `M(x) = x + t(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpValue {
    pub value: BigInt,
}

/// Jump magnitude sequence: `a_r = (2^{r+1}-1)/3` for odd `r`,
/// `(2^{r+1}-2)/3` for even `r`; equivalently `a_0 = 0`, `a_1 = 1`,
/// `a_{r+1} = 2^r + a_{r-1}`. The closed form is the implementation and
/// the recurrence is kept as a test oracle.
pub fn a_seq(r: u64) -> BigInt {
    let top = (BigInt::one() << (r + 1)) - if r.is_odd() { 1u32 } else { 2 };
    let (q, rem) = top.div_rem(&BigInt::from(3));
    assert!(rem.is_zero(), "2^{{r+1}} - (1|2) must be divisible by 3");
    q
}

/// `a_r` in machine words, for the permutation layer (`r <= 62`).
pub fn a_u64(r: u32) -> u64 {
    assert!(r <= 62);
    if r == 0 {
        return 0;
    }
    let top = (1u64 << (r + 1)) - if r % 2 == 1 { 1 } else { 2 };
    debug_assert!(top.is_multiple_of(3));
    top / 3
}

/// Scan the digits of a rational point for the first repeat, also
/// accumulating the value of the digits up to and including position r.
/// Callers must have excluded -1/3 and -2/3, the only rationals whose
/// digits alternate forever.
fn scan_rational(x: &Dyadic) -> (JumpParams, BigInt) {
    let mut it = x.digit_iter().expect("rational input");
    let mut low = BigInt::zero();
    let mut prev = it.next_digit();
    if prev == 1 {
        low.set_bit(0, true);
    }
    let mut k: u64 = 1;
    loop {
        let cur = it.next_digit();
        if cur == prev {
            return (JumpParams { r: k, eps: cur }, low);
        }
        if cur == 1 {
            low.set_bit(k, true);
        }
        prev = cur;
        k += 1;
        assert!(k < (1 << 22), "repeat scan did not terminate; bug");
    }
}

fn is_max_point(x: &Dyadic) -> bool {
    x == &Dyadic::from_rational(-1, 3).unwrap() || x == &Dyadic::from_rational(-2, 3).unwrap()
}

/// Minimal `r` with `bit(x, r) = bit(x, r+1)` and that common value.
///
/// Fails with [`Error::NoRepeat`] exactly for the two points of `MAX`;
/// a streamed scan that exhausts its digit budget reports
/// [`Error::StreamedUnderdetermined`].
pub fn first_repeat(x: &Dyadic) -> Result<JumpParams> {
    match x {
        Dyadic::Rational { .. } => {
            if is_max_point(x) {
                return Err(Error::NoRepeat);
            }
            Ok(scan_rational(x).0)
        }
        Dyadic::Streamed(_) => {
            let mut prev = x.bit(1);
            for k in 1..crate::dyadic::STREAM_DIGIT_BUDGET {
                let cur = x.bit(k + 1);
                if cur == prev {
                    return Ok(JumpParams { r: k, eps: cur });
                }
                prev = cur;
            }
            Err(Error::StreamedUnderdetermined)
        }
    }
}

/// `t(x) = (-1)^{eps} a_r`.
pub fn jump(x: &Dyadic) -> Result<JumpValue> {
    let p = first_repeat(x)?;
    let a = a_seq(p.r);
    Ok(JumpValue {
        value: if p.eps == 1 { -a } else { a },
    })
}

/// One step of the Morse map, by the prefix rewrite (not the jump
/// formula): flip the repeated pair and reset digits `1..r-1`. Total on
/// the rationals thanks to the gluing at `MAX`.
pub fn morse_step(x: &Dyadic) -> Result<Dyadic> {
    match x {
        Dyadic::Rational { .. } => {
            if x == &Dyadic::from_rational(-1, 3).unwrap() {
                return Ok(Dyadic::from_int(0));
            }
            if x == &Dyadic::from_rational(-2, 3).unwrap() {
                return Ok(Dyadic::from_int(-1));
            }
            let (p, low_old) = scan_rational(x);
            // New first r digits: 1...1 1 (repeat 00 -> 10) or 0...0 0 (11 -> 01).
            let low_new = if p.eps == 0 {
                (BigInt::one() << p.r) - 1
            } else {
                BigInt::zero()
            };
            let delta = low_new - low_old;
            x.add_int(&delta)
        }
        Dyadic::Streamed(s) => {
            let p = first_repeat(x)?;
            let keep = (s.prefix_len() as u64).max(p.r + 1);
            let full = x.digits(keep);
            let mut bits: Vec<u8> = if p.eps == 0 {
                vec![1; p.r as usize]
            } else {
                vec![0; p.r as usize]
            };
            bits.extend_from_slice(&full[p.r as usize..]); // r+1 and beyond unchanged
            Ok(Dyadic::streamed(bits, s.seed()))
        }
    }
}

/// The unique `x` with `morse_step(x) = z`, using the glued map:
/// `0 -> -1/3` and `-1 -> -2/3`; otherwise the leading run of equal
/// digits of `z` recovers `(r, eps)` and `x = z - (-1)^{eps} a_r`.
pub fn morse_inverse(z: &Dyadic) -> Result<Dyadic> {
    if !z.is_rational() {
        return Err(Error::StreamedUnsupported);
    }
    if z == &Dyadic::from_int(0) {
        return Ok(Dyadic::from_rational(-1, 3).unwrap());
    }
    if z == &Dyadic::from_int(-1) {
        return Ok(Dyadic::from_rational(-2, 3).unwrap());
    }
    let mut it = z.digit_iter()?;
    let first = it.next_digit();
    let mut run: u64 = 1;
    loop {
        let cur = it.next_digit();
        if cur != first {
            break;
        }
        run += 1;
        assert!(run < (1 << 22), "leading-run scan did not terminate; bug");
    }
    let a = a_seq(run);
    let delta = if first == 1 { -a } else { a };
    z.add_int(&delta)
}

/// `(r(n), eps(n))` by the congruence formulas: the least `k` with
/// `n = a_{k-1} (mod 2^{k+1})` (then `eps = 0`) or
/// `n = -a_{k-1} - 1 (mod 2^{k+1})` (then `eps = 1`).
pub fn integer_params(n: &BigInt) -> JumpParams {
    let mut k: u64 = 1;
    loop {
        let modulus = BigInt::one() << (k + 1);
        let rem = n.mod_floor(&modulus);
        let a = a_seq(k - 1);
        if rem == a {
            return JumpParams { r: k, eps: 0 };
        }
        if rem == (&modulus - &a - 1u32) {
            return JumpParams { r: k, eps: 1 };
        }
        k += 1;
        assert!(
            k <= n.bits() + 4,
            "congruence search exceeded its bound for n = {n}; bug"
        );
    }
}

/// `M(n) = n + (-1)^{eps(n)} a_{r(n)}` on the integers, via the
/// congruence route. The digit-scan route is its test oracle.
pub fn morse_on_int(n: &BigInt) -> BigInt {
    let p = integer_params(n);
    let a = a_seq(p.r);
    if p.eps == 1 {
        n - a
    } else {
        n + a
    }
}
