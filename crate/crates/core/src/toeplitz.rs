//! Toeplitz words: words built by filling the holes of a periodically
//! repeated pattern with the word itself.
//!
//! A pattern is a word over A plus a hole symbol `?`, first letter not a
//! hole. Repeating the pattern leaves holes; filling them, in order, with
//! the limit word reproduces the limit word, which pins down every symbol:
//! position i = p*m + r is the pattern letter at r, unless r is the c-th
//! hole, in which case it equals position q*m + c. With q < p that index
//! recursion strictly decreases, so random access never materializes a
//! layer.

use crate::error::{Error, Result};
use crate::substitution::{Symbol, SymbolStream};
use num_rational::Ratio;

/// Hole marker used in materialized layers.
pub const HOLE: u8 = u8::MAX;

/// A hole pattern with its (p, q) parameters: p = length, q = hole count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzPattern {
    letters: Vec<u8>, // HOLE marks a hole
    hole_positions: Vec<usize>,
    alphabet_size: u8,
}

impl ToeplitzPattern {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        if letters[0] == HOLE {
            return Err(Error::InvalidPattern("first letter is a hole".into()));
        }
        let hole_positions: Vec<usize> = letters
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a == HOLE).then_some(i))
            .collect();
        let alphabet_size = letters
            .iter()
            .filter(|&&a| a != HOLE)
            .map(|&a| a + 1)
            .max()
            .unwrap_or(0);
        Ok(ToeplitzPattern { letters, hole_positions, alphabet_size })
    }

    /// Parses a pattern literal such as `01?0?10??`.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '?' => Ok(HOLE),
                _ => c
                    .to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidPattern(format!("bad char {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        ToeplitzPattern::new(letters)
    }

    /// Pattern length p.
    pub fn p(&self) -> usize {
        self.letters.len()
    }

    /// Hole count q.
    pub fn q(&self) -> usize {
        self.hole_positions.len()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Symbol at position i of the limit word.
    pub fn symbol_at(&self, i: u64) -> Symbol {
        let p = self.p() as u64;
        let q = self.q() as u64;
        let mut i = i;
        loop {
            let (m, r) = (i / p, (i % p) as usize);
            match self.letters[r] {
                HOLE => {
                    let c = self.hole_positions.binary_search(&r).expect("r is a hole") as u64;
                    debug_assert!(q * m + c < i);
                    i = q * m + c;
                }
                a => return a,
            }
        }
    }

    /// The limit word as a stream.
    pub fn stream(&self) -> SymbolStream {
        let pat = self.clone();
        SymbolStream::from_fn(self.alphabet_size, move |i| pat.symbol_at(i as u64))
    }

    /// The i-th approximation layer restricted to [0, len): starts from all
    /// holes, then `rounds` passes of "fill every hole, in order, with the
    /// pattern repeated". Unresolved positions remain [`HOLE`].
    pub fn layer(&self, rounds: u32, len: usize) -> Vec<u8> {
        let mut word = vec![HOLE; len];
        for _ in 0..rounds {
            let mut fill = 0usize; // index into the repeated pattern
            for slot in word.iter_mut() {
                if *slot == HOLE {
                    *slot = self.letters[fill % self.letters.len()];
                    fill += 1;
                }
            }
        }
        word
    }

    /// Exact frequency of `a` in the limit word: (occurrences of `a` in the
    /// pattern) / (p - q).
    pub fn letter_frequency(&self, a: Symbol) -> Ratio<u64> {
        let count = self.letters.iter().filter(|&&x| x == a).count() as u64;
        Ratio::new(count, (self.p() - self.q()) as u64)
    }

    /// Same frequency obtained from the replacement matrix: one filling
    /// round sends the period counts (n_a, holes) to (p n_a + |w|_a holes,
    /// q holes). Iterated from a single hole and normalized by p^rounds the
    /// hole mass shrinks like (q/p)^rounds; distributing the remainder in
    /// pattern proportion gives the limit exactly in rational arithmetic.
    pub fn letter_frequency_by_matrix(&self, a: Symbol, rounds: u32) -> Ratio<u64> {
        use num_bigint::BigInt;
        use num_traits::ToPrimitive;
        let big = |n: u64| num_rational::BigRational::from(BigInt::from(n));
        let p = self.p() as u64;
        let q = self.q() as u64;
        let in_pattern = self.letters.iter().filter(|&&x| x == a).count() as u64;
        let mut count = big(0);
        let mut holes = big(1);
        for _ in 0..rounds {
            count += &holes * big(in_pattern) / big(p);
            holes *= big(q) / big(p);
        }
        let exact = count + holes * big(in_pattern) / big(p - q);
        Ratio::new(
            exact.numer().to_u64().expect("reduced frequency fits"),
            exact.denom().to_u64().expect("reduced frequency fits"),
        )
    }

    /// Complexity growth exponent of a (p, q)-pattern word: with d =
    /// gcd(p, q), p' = p/d and q' = q/d, the number of length-n factors
    /// grows like n^(log p' / log (p'/q')). Undefined when q = 0 (the word
    /// is periodic).
    pub fn complexity_exponent(&self) -> Result<f64> {
        let q = self.q() as u64;
        if q == 0 {
            return Err(Error::DegeneratePattern);
        }
        let p = self.p() as u64;
        let d = gcd(p, q);
        let (pp, qq) = ((p / d) as f64, (q / d) as f64);
        Ok(pp.ln() / (pp / qq).ln())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// The (9,4) pattern whose word is the first difference of t32.
pub fn delta_t32_pattern() -> ToeplitzPattern {
    ToeplitzPattern::parse("01?0?10??").unwrap()
}
