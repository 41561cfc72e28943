use std::fmt;
use std::str::FromStr;

use crate::error::{out_of_range, Error, Result};

/// A particle configuration on `⟦1,N⟧` with at most one particle per site,
/// stored bit-packed. Site `i` (1-based) lives in bit `(i-1) % 64` of word
/// `(i-1) / 64`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExclusionConfig {
    n: usize,
    k: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl ExclusionConfig {
    /// Builds a configuration from one occupation flag per site.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() {
            return Err(out_of_range("N", "empty configuration"));
        }
        let n = bits.len();
        let mut words = vec![0u64; word_count(n)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let k = bits.iter().filter(|&&b| b).count();
        Ok(Self { n, k, words })
    }

    /// Configuration with particles exactly at the given 1-based sites.
    pub fn from_sites(n: usize, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = vec![false; n];
        for s in sites {
            if s == 0 || s > n {
                return Err(out_of_range("site", format!("{s} not in 1..={n}")));
            }
            if bits[s - 1] {
                return Err(Error::InvalidState(format!("site {s} listed twice")));
            }
            bits[s - 1] = true;
        }
        Self::from_bits(&bits)
    }

    /// `1_{⟦N-k+1,N⟧}`: all particles packed to the right.
    pub fn packed_right(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(out_of_range("k", format!("k = {k} > N = {n}")));
        }
        Self::from_sites(n, n - k + 1..=n)
    }

    /// `1_{⟦1,k⟧}`: all particles packed to the left.
    pub fn packed_left(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(out_of_range("k", format!("k = {k} > N = {n}")));
        }
        Self::from_sites(n, 1..=k)
    }

    /// Decodes a bitmask (bit `i-1` is site `i`); requires `N <= 64`.
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(out_of_range("N", format!("bitmask codes need 1 <= N <= 64, got {n}")));
        }
        if n < 64 && code >> n != 0 {
            return Err(Error::InvalidState(format!("code {code:#x} has bits beyond N = {n}")));
        }
        Ok(Self {
            n,
            k: code.count_ones() as usize,
            words: vec![code],
        })
    }

    /// Bitmask encoding (bit `i-1` is site `i`), for `N <= 64`.
    pub fn code(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Particle count `k`.
    pub fn particles(&self) -> usize {
        self.k
    }

    /// Occupation of 1-based site `i`.
    #[inline]
    pub fn occupied(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.n);
        let j = i - 1;
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    fn toggle(&mut self, i: usize) {
        let j = i - 1;
        self.words[j / 64] ^= 1 << (j % 64);
    }

    /// Exchanges the contents of sites `i` and `i+1`.
    #[inline]
    pub fn swap_sites(&mut self, i: usize) {
        if self.occupied(i) != self.occupied(i + 1) {
            self.toggle(i);
            self.toggle(i + 1);
        }
    }

    /// Occupation flags in site order.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.n).map(move |i| self.occupied(i))
    }

    /// Occupied sites, 1-based, increasing.
    pub fn sites(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.occupied(i)).collect()
    }

    /// Checks the popcount against the cached particle count.
    pub fn validate(&self) -> Result<()> {
        let pop: u32 = self.words.iter().map(|w| w.count_ones()).sum();
        if pop as usize != self.k {
            return Err(Error::InvalidState(format!(
                "popcount {pop} disagrees with k = {}",
                self.k
            )));
        }
        let tail = self.n % 64;
        if tail != 0 && self.words[self.words.len() - 1] >> tail != 0 {
            return Err(Error::InvalidState("bits set beyond N".into()));
        }
        Ok(())
    }
}

impl fmt::Display for ExclusionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ExclusionConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected `{other}` in 0/1 string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}
