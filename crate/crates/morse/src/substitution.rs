//! The Morse substitution, the Thue-Morse word, and digit differentiation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::dyadic::Dyadic;
use crate::{Error, Result};

/// A finite word over the alphabet {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&b| b <= 1));
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letterwise complement.
    pub fn complement(&self) -> Word {
        Word(self.0.iter().map(|&b| 1 - b).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::ParsePoint(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// The substitution `0 -> 01`, `1 -> 10`, applied letterwise.
pub fn zeta(w: &Word) -> Word {
    let mut out = Vec::with_capacity(2 * w.len());
    for &b in w.letters() {
        out.push(b);
        out.push(1 - b);
    }
    Word(out)
}

/// First `n` letters of the Thue-Morse word `0110100110010110...`,
/// generated by the doubling rule: each block of length `2^k` is
/// followed by its complement.
pub fn thue_morse(n: usize) -> Word {
    let mut letters = vec![0u8];
    while letters.len() < n.max(1) {
        let flip: Vec<u8> = letters.iter().map(|&b| 1 - b).collect();
        letters.extend(flip);
    }
    letters.truncate(n);
    Word(letters)
}

/// Digit differentiation: output digit `k` is `x_k XOR x_{k+1}`
/// (1-based; the source indexes from 0, which re-indexes to this).
/// Maps rationals to rationals with period dividing the input period,
/// and conjugates the Morse map to the odometer: `T(D(x)) = D(M(x))`.
pub fn derivative(x: &Dyadic) -> Result<Dyadic> {
    let (prefix, period) = x.to_bits()?;
    let l = prefix.len();
    let m = period.len();
    let digit = |j: usize| -> u8 {
        // 0-based position into prefix then repeating period
        if j < l {
            prefix[j]
        } else {
            period[(j - l) % m]
        }
    };
    let total = l + m;
    let out: Vec<u8> = (0..total).map(|j| digit(j) ^ digit(j + 1)).collect();
    Dyadic::from_bits(&out[..l], &out[l..])
}

/// True iff `w` contains no factor `vvv` with `v` nonempty.
///
/// Direct per-period scan: for each candidate period `p` a cube exists
/// iff `w[i] == w[i+p]` holds on a run of length `2p`. This is a test
/// oracle, not a hot path.
pub fn cube_free(w: &Word) -> bool {
    let s = w.letters();
    let n = s.len();
    for p in 1..=n / 3 {
        let mut run = 0usize;
        for i in 0..n - p {
            if s[i] == s[i + p] {
                run += 1;
                if run >= 2 * p {
                    return false;
                }
            } else {
                run = 0;
            }
        }
    }
    true
}

/// The conjugacy check `T(D(x)) = D(M(x))` at a single rational point.
pub fn conjugacy_holds(x: &Dyadic) -> Result<bool> {
    let lhs = derivative(x)?.add_int(&BigInt::one())?;
    let rhs = derivative(&crate::morse_map::morse_step(x)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Dyadic {
        Dyadic::from_rational(p, q).unwrap()
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta(&"0".parse().unwrap()), "01".parse().unwrap());
        assert_eq!(zeta(&Word::new(vec![])), Word::new(vec![]));
        assert_eq!(zeta(&"01".parse().unwrap()), "0110".parse().unwrap());
    }

    #[test]
    fn thue_morse_prefix() {
        assert_eq!(thue_morse(16).to_string(), "0110100110010110");
        assert_eq!(thue_morse(1).to_string(), "0");
        let w32 = thue_morse(32);
        let w16 = thue_morse(16);
        assert_eq!(&w32.letters()[..16], w16.letters());
        assert_eq!(&w32.letters()[16..], w16.complement().letters());
    }

    #[test]
    fn fixed_point_and_prefix_chain() {
        for k in 0..=12 {
            let wk = thue_morse(1 << k);
            let img = zeta(&wk);
            assert_eq!(img, thue_morse(1 << (k + 1)), "zeta of 2^{k} prefix");
            // zeta^k(0) is a prefix of zeta^{k+1}(0)
            assert_eq!(&img.letters()[..wk.len()], wk.letters());
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative(&Dyadic::from_int(0)).unwrap(), Dyadic::from_int(0));
        assert_eq!(derivative(&rat(-1, 3)).unwrap(), Dyadic::from_int(-1));
        assert_eq!(derivative(&Dyadic::from_int(1)).unwrap(), Dyadic::from_int(1));
    }

    #[test]
    fn cube_free_examples() {
        assert!(!cube_free(&"010101".parse().unwrap()));
        assert!(cube_free(&"0110".parse().unwrap()));
        assert!(cube_free(&Word::new(vec![])));
        assert!(!cube_free(&"000".parse().unwrap()));
        assert!(cube_free(&thue_morse(1 << 10)));
    }

    #[test]
    fn conjugacy_small() {
        for (p, q) in [(-1, 7), (5, 9), (22, 7), (3, 1), (-13, 11), (0, 1)] {
            assert!(conjugacy_holds(&rat(p, q)).unwrap(), "x = {p}/{q}");
        }
    }
}
