//! Factor-set analytics and filtered frequency counters.
//!
//! A [`FactorSet`] records every distinct length-n factor of a scanned
//! prefix together with its occurrence positions, supporting closure
//! checks (complement, reversal), occurrence-parity queries, and
//! recurrence gaps. A [`FilteredCounter`] tabulates C_n(c, k, N): the
//! occurrences of symbol c before position N at positions congruent to k
//! mod 2^n. One desubstitution step of t32 (three image symbols from two
//! preimage symbols) refines these counts exactly at aligned lengths
//! N = 3m, which is checked as an integer identity with no tolerance.

use crate::error::{Error, Result};
use crate::substitution::{word_to_string, Symbol, SymbolStream};
use crate::words::{complement_word, reverse};
use num_rational::Ratio;
use std::collections::HashMap;

/// All distinct length-n factors of a scanned prefix, with their
/// occurrence positions.
#[derive(Debug, Clone)]
pub struct FactorSet {
    n: usize,
    scanned: usize,
    alphabet_size: u8,
    /// factor word -> ascending occurrence positions
    occurrences: HashMap<Vec<Symbol>, Vec<u32>>,
    saturated: bool,
}

/// Result of a closure check: either closed, or a list of factors whose
/// image is missing from the set.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub closed: bool,
    pub witnesses: Vec<Vec<Symbol>>,
    /// Set false when the factor set was not saturated; the verdict then
    /// reflects the scanned prefix only.
    pub saturated: bool,
}

/// Maps a factor set can be checked for closure under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMap {
    Complement,
    Reversal,
}

impl FactorSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scanned(&self) -> usize {
        self.scanned
    }

    /// Number of distinct factors, i.e. the complexity value p_x(n) when the
    /// set is saturated.
    pub fn count(&self) -> usize {
        self.occurrences.len()
    }

    /// Heuristic saturation flag: set when scanning only the first half of
    /// the prefix already finds every factor.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn contains(&self, factor: &[Symbol]) -> bool {
        self.occurrences.contains_key(factor)
    }

    pub fn factors(&self) -> impl Iterator<Item = &[Symbol]> {
        self.occurrences.keys().map(|f| f.as_slice())
    }

    pub fn positions(&self, factor: &[Symbol]) -> Result<&[u32]> {
        self.occurrences
            .get(factor)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::FactorNotFound(word_to_string(factor)))
    }

    /// Checks that the image of every factor under `map` is again a factor.
    pub fn closed_under(&self, map: FactorMap) -> Result<ClosureReport> {
        let mut witnesses = Vec::new();
        for f in self.occurrences.keys() {
            let image = match map {
                FactorMap::Complement => {
                    if self.alphabet_size != 2 {
                        return Err(Error::UnsupportedAlphabet { size: self.alphabet_size });
                    }
                    complement_word(f)?
                }
                FactorMap::Reversal => reverse(f),
            };
            if !self.occurrences.contains_key(&image) {
                witnesses.push(f.clone());
            }
        }
        witnesses.sort();
        Ok(ClosureReport { closed: witnesses.is_empty(), witnesses, saturated: self.saturated })
    }

    /// Occurrence counts of a factor split by position parity
    /// (even count, odd count).
    pub fn parity_occurrences(&self, factor: &[Symbol]) -> Result<(usize, usize)> {
        let pos = self.positions(factor)?;
        let even = pos.iter().filter(|&&p| p % 2 == 0).count();
        Ok((even, pos.len() - even))
    }

    /// Largest distance between consecutive occurrences of a factor within
    /// the scanned prefix.
    pub fn recurrence_gap(&self, factor: &[Symbol]) -> Result<u32> {
        let pos = self.positions(factor)?;
        if pos.len() < 2 {
            return Err(Error::InsufficientOccurrences {
                factor: word_to_string(factor),
                found: pos.len(),
            });
        }
        Ok(pos.windows(2).map(|w| w[1] - w[0]).max().unwrap())
    }
}

/// Scans x[0, N) for its length-n factors.
pub fn factor_set(x: &mut SymbolStream, n: usize, prefix_len: usize) -> Result<FactorSet> {
    if n == 0 || prefix_len < n {
        return Err(Error::EmptyWindow { prefix: prefix_len, factor: n });
    }
    let alphabet_size = x.alphabet_size();
    let p = x.prefix(prefix_len)?;
    let mut occurrences: HashMap<Vec<Symbol>, Vec<u32>> = HashMap::new();
    for (i, w) in p.windows(n).enumerate() {
        occurrences.entry(w.to_vec()).or_default().push(i as u32);
    }
    // saturated when the first half of the scan already saw every factor
    let half = prefix_len / 2;
    let count_at_half = occurrences
        .values()
        .filter(|pos| (pos[0] as usize) + n <= half)
        .count();
    let saturated = count_at_half == occurrences.len();
    Ok(FactorSet { n, scanned: prefix_len, alphabet_size, occurrences, saturated })
}

/// The table C_n(c, k, N) for one stream: occurrences of each symbol c
/// before position N at positions congruent to k mod 2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredCounter {
    mod_exp: u32,
    scanned: usize,
    alphabet_size: u8,
    /// counts[c][k]
    counts: Vec<Vec<u64>>,
}

impl FilteredCounter {
    pub fn mod_exp(&self) -> u32 {
        self.mod_exp
    }

    pub fn modulus(&self) -> u64 {
        1 << self.mod_exp
    }

    pub fn scanned(&self) -> usize {
        self.scanned
    }

    /// C_n(c, k, N); k may be any integer and is reduced mod 2^n. Symbols
    /// outside the scanned alphabet have count 0.
    pub fn count(&self, c: Symbol, k: i64) -> u64 {
        let m = self.modulus() as i64;
        match self.counts.get(c as usize) {
            Some(row) => row[k.rem_euclid(m) as usize],
            None => 0,
        }
    }

    /// Row of counts for symbol c, indexed by residue.
    pub fn row(&self, c: Symbol) -> &[u64] {
        &self.counts[c as usize]
    }

    /// Number of indices i < N with i congruent to k, independent of
    /// symbols. Meaningful for tables over a full prefix (or a merged
    /// partition of one), not for a bare range slice.
    pub fn class_size(&self, k: i64) -> u64 {
        let m = self.modulus();
        let k = (k.rem_euclid(m as i64)) as u64;
        let n = self.scanned as u64;
        n / m + u64::from(n % m > k)
    }

    /// Adds the counts of a table built over a disjoint slice of the same
    /// stream (partitioned scans merge by summation).
    pub fn merge(&mut self, other: &FilteredCounter) -> Result<()> {
        if other.mod_exp != self.mod_exp || other.alphabet_size != self.alphabet_size {
            return Err(Error::InvalidParameter("merging incompatible counter tables".into()));
        }
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            for (m, t) in mine.iter_mut().zip(theirs) {
                *m += t;
            }
        }
        self.scanned += other.scanned;
        Ok(())
    }

    /// Empirical densities C_n(c, k, N) / N with their deviation from the
    /// equidistribution target 2^-(n+1) (meaningful for binary streams).
    pub fn densities(&self) -> Vec<MuEstimate> {
        let target = 0.5f64.powi(self.mod_exp as i32 + 1);
        let mut out = Vec::new();
        for (c, row) in self.counts.iter().enumerate() {
            for (k, &count) in row.iter().enumerate() {
                let density = count as f64 / self.scanned as f64;
                out.push(MuEstimate {
                    symbol: c as Symbol,
                    residue: k as u64,
                    count,
                    density,
                    target,
                    deviation: density - target,
                });
            }
        }
        out
    }
}

/// One filtered density estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuEstimate {
    pub symbol: Symbol,
    pub residue: u64,
    pub count: u64,
    pub density: f64,
    pub target: f64,
    pub deviation: f64,
}

/// Builds the full table C_n(c, k, N) by one pass over the prefix.
pub fn filtered_counter(x: &mut SymbolStream, mod_exp: u32, prefix_len: usize) -> Result<FilteredCounter> {
    filtered_counter_range(x, mod_exp, 0, prefix_len)
}

/// The table at a real-valued length: C_n(c, k, alpha) counts positions
/// below floor(alpha), so it differs from the value at ceil(alpha) by at
/// most 1 per class. Aligned identities avoid the slack by using integer
/// lengths of the form 3m.
pub fn filtered_counter_real(
    x: &mut SymbolStream,
    mod_exp: u32,
    alpha: f64,
) -> Result<FilteredCounter> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("length {alpha} must be finite and >= 0")));
    }
    filtered_counter(x, mod_exp, alpha.floor() as usize)
}

/// Counts only the positions in [start, end), with residues taken from the
/// absolute position; a partition of [0, N) scanned this way merges back
/// into the full table.
pub fn filtered_counter_range(
    x: &mut SymbolStream,
    mod_exp: u32,
    start: usize,
    end: usize,
) -> Result<FilteredCounter> {
    let alphabet_size = x.alphabet_size();
    let m = 1usize << mod_exp;
    let p = x.prefix(end)?;
    let mut counts = vec![vec![0u64; m]; alphabet_size as usize];
    for (i, &c) in p.iter().enumerate().take(end).skip(start) {
        counts[c as usize][i & (m - 1)] += 1;
    }
    Ok(FilteredCounter { mod_exp, scanned: end - start, alphabet_size, counts })
}

/// Exact densities C_n(c, k, N) / N as rationals.
pub fn mu_estimates(x: &mut SymbolStream, mod_exp: u32, prefix_len: usize) -> Result<Vec<(Symbol, u64, Ratio<u64>)>> {
    if prefix_len == 0 {
        return Err(Error::InvalidParameter("prefix length must be >= 1".into()));
    }
    let table = filtered_counter(x, mod_exp, prefix_len)?;
    let mut out = Vec::new();
    for c in 0..table.alphabet_size {
        for k in 0..table.modulus() {
            out.push((c, k, Ratio::new(table.count(c, k as i64), prefix_len as u64)));
        }
    }
    Ok(out)
}

/// Multiplicative inverse of 3 mod 2^(n+1), an odd number in [1, 2^(n+1)).
pub fn q_inverse(n: u32) -> u64 {
    let m = 1u64 << (n + 1);
    // Newton lifting: if 3q == 1 mod 2^k then q(2 - 3q) inverts mod 2^2k;
    // wrapping arithmetic is exact mod 2^64 and reduced at the end
    let mut q = 1u64; // inverse mod 2
    for _ in 0..n {
        q = q.wrapping_mul(2u64.wrapping_sub(3u64.wrapping_mul(q))) & (m - 1);
    }
    debug_assert_eq!(3u64.wrapping_mul(q) & (m - 1), 1);
    q & (m - 1)
}

/// Residual table of the exact desubstitution identity at level n and
/// aligned length N = 3m: for every symbol c and residue k mod 2^n,
///
/// residual(c, k) = C_n(c, k, 3m)
///   - C_{n+1}(c,    2 q_n k,         2m)
///   - C_{n+1}(c,    2 q_n k - 2 q_n, 2m)
///   - C_{n+1}(c-bar, 2 q_n k - q_n,  2m)
///
/// with q_n the inverse of 3 mod 2^(n+1). Positions 3m'+r map to preimage
/// positions 2m' (r = 0, 1) and 2m'+1 (r = 2, with the symbol complemented),
/// and the congruence i = k (mod 2^n) pins the preimage residue mod 2^(n+1)
/// per r; the identity is exact, so every residual must be 0.
pub fn desubstitution_residuals(
    x: &mut SymbolStream,
    mod_exp: u32,
    prefix_len: usize,
) -> Result<Vec<Vec<i64>>> {
    if x.alphabet_size() != 2 {
        return Err(Error::UnsupportedAlphabet { size: x.alphabet_size() });
    }
    desubstitution_residuals_mod(x, 2, mod_exp, prefix_len)
}

/// The same residual table for the digit-sum word mod m, whose fixed-point
/// relations are x_{3n} = x_{2n}, x_{3n+1} = x_{2n} + 2 and
/// x_{3n+2} = x_{2n+1} + 1 (mod m): the r = 1 positions count symbol c - 2
/// and the r = 2 positions symbol c - 1 in the preimage.
pub fn desubstitution_residuals_mod(
    x: &mut SymbolStream,
    modulus: u8,
    mod_exp: u32,
    prefix_len: usize,
) -> Result<Vec<Vec<i64>>> {
    if prefix_len % 3 != 0 {
        return Err(Error::Misaligned(prefix_len));
    }
    let blocks = prefix_len / 3;
    let coarse = filtered_counter(x, mod_exp, prefix_len)?;
    let fine = filtered_counter(x, mod_exp + 1, 2 * blocks)?;
    let q = q_inverse(mod_exp) as i64;
    let m = modulus as i64;
    let mut residuals = vec![vec![0i64; 1 << mod_exp]; modulus as usize];
    for c in 0..modulus {
        for k in 0..(1i64 << mod_exp) {
            let lhs = coarse.count(c, k) as i64;
            let rhs = fine.count(c, 2 * q * k) as i64
                + fine.count(((c as i64 - 2).rem_euclid(m)) as u8, 2 * q * k - 2 * q) as i64
                + fine.count(((c as i64 - 1).rem_euclid(m)) as u8, 2 * q * k - q) as i64;
            residuals[c as usize][k as usize] = lhs - rhs;
        }
    }
    Ok(residuals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{self, T32Backend, TPrimeBackend};
    use proptest::prelude::*;

    fn t32_stream() -> SymbolStream {
        words::t32(T32Backend::Block)
    }

    #[test]
    fn factor_sets_of_t32() {
        let mut t = t32_stream();
        let fs1 = factor_set(&mut t, 1, 30).unwrap();
        assert_eq!(fs1.count(), 2);
        assert!(fs1.contains(&[0]) && fs1.contains(&[1]));

        let fs2 = factor_set(&mut t, 2, 10_000).unwrap();
        assert_eq!(fs2.count(), 4);

        assert!(matches!(
            factor_set(&mut t, 5, 3),
            Err(Error::EmptyWindow { .. })
        ));
    }

    #[test]
    fn factor_positions_are_real_occurrences() {
        let mut t = t32_stream();
        let fs = factor_set(&mut t, 3, 5_000).unwrap();
        let p = t.prefix(5_000).unwrap();
        for f in fs.factors() {
            for &pos in fs.positions(f).unwrap() {
                assert_eq!(&p[pos as usize..pos as usize + 3], f);
            }
        }
    }

    #[test]
    fn complexity_doubling_between_t32_and_its_difference() {
        let n_max = 10;
        let big_n = 200_000;
        let mut t = t32_stream();
        let mut d = words::delta(t32_stream()).unwrap();
        for n in 1..=n_max {
            let pt = factor_set(&mut t, n + 1, big_n).unwrap().count();
            let pd = factor_set(&mut d, n, big_n).unwrap().count();
            assert_eq!(pt, 2 * pd, "n = {n}");
        }
    }

    #[test]
    fn closure_checks_on_t32_and_tprime() {
        for (name, mut stream) in [
            ("t32", t32_stream()),
            ("tprime", words::t_prime(TPrimeBackend::Block)),
        ] {
            for n in 1..=8 {
                let fs = factor_set(&mut stream, n, 200_000).unwrap();
                assert!(fs.is_saturated(), "{name} n={n}");
                let c = fs.closed_under(FactorMap::Complement).unwrap();
                assert!(c.closed, "{name} complement n={n}: {:?}", c.witnesses);
                let r = fs.closed_under(FactorMap::Reversal).unwrap();
                assert!(r.closed, "{name} reversal n={n}: {:?}", r.witnesses);
            }
        }
    }

    #[test]
    fn closure_fails_with_witnesses_on_a_broken_word() {
        // 0 followed by ones only: 01 occurs, 10 never does
        let mut w = SymbolStream::from_fn(2, |i| u8::from(i > 0));
        let fs = factor_set(&mut w, 2, 10_000).unwrap();
        let c = fs.closed_under(FactorMap::Complement).unwrap();
        assert!(!c.closed);
        assert_eq!(c.witnesses, vec![vec![0, 1], vec![1, 1]]); // 10 and 00 missing
        let r = fs.closed_under(FactorMap::Reversal).unwrap();
        assert!(!r.closed);
        assert_eq!(r.witnesses, vec![vec![0, 1]]); // 10 missing, 11 is a palindrome
    }

    #[test]
    fn closure_complement_needs_binary() {
        let mut k = words::kolakoski();
        let fs = factor_set(&mut k, 2, 1000).unwrap();
        assert!(matches!(
            fs.closed_under(FactorMap::Complement),
            Err(Error::UnsupportedAlphabet { .. })
        ));
        assert!(fs.closed_under(FactorMap::Reversal).is_ok());
    }

    #[test]
    fn parity_of_occurrences() {
        let mut t = t32_stream();
        let fs = factor_set(&mut t, 1, 30).unwrap();
        assert_eq!(fs.parity_occurrences(&[0]).unwrap(), (5, 6));

        // every short factor of t32 occurs at both parities
        let mut t = t32_stream();
        for n in 1..=8 {
            let fs = factor_set(&mut t, n, 100_000).unwrap();
            for f in fs.factors() {
                let (e, o) = fs.parity_occurrences(f).unwrap();
                assert!(e >= 1 && o >= 1, "factor {} n={n}", word_to_string(f));
            }
        }

        let mut zeros = SymbolStream::from_fn(2, |_| 0);
        let fs = factor_set(&mut zeros, 1, 101).unwrap();
        assert_eq!(fs.parity_occurrences(&[0]).unwrap(), (51, 50));
        assert!(fs.parity_occurrences(&[1]).is_err());
    }

    #[test]
    fn recurrence_gaps() {
        let mut t = t32_stream();
        let fs = factor_set(&mut t, 1, 10_000).unwrap();
        let gap0 = fs.recurrence_gap(&[0]).unwrap();
        assert!((1..100).contains(&gap0));

        // gaps computed from raw position lists must agree
        let p = t.prefix(10_000).unwrap();
        let zero_pos: Vec<u32> = (0..p.len()).filter(|&i| p[i] == 0).map(|i| i as u32).collect();
        let oracle = zero_pos.windows(2).map(|w| w[1] - w[0]).max().unwrap();
        assert_eq!(gap0, oracle);

        // periodic word 010101...
        let mut alt = SymbolStream::from_fn(2, |i| (i % 2) as u8);
        let fs = factor_set(&mut alt, 2, 1000).unwrap();
        assert_eq!(fs.recurrence_gap(&[0, 1]).unwrap(), 2);

        // doubling the scan may reveal a slightly larger gap but never a
        // smaller one, and far slower than the window grows (a word with a
        // factor that dies out would double its worst gap here)
        let mut t1 = t32_stream();
        let mut t2 = t32_stream();
        for n in 1..=8 {
            let a = factor_set(&mut t1, n, 100_000).unwrap();
            let b = factor_set(&mut t2, n, 200_000).unwrap();
            for f in a.factors() {
                let g1 = a.recurrence_gap(f).unwrap();
                let g2 = b.recurrence_gap(f).unwrap();
                assert!(g2 >= g1, "n={n} factor {}", word_to_string(f));
                assert!(
                    (g2 as f64) < 2.0 * g1 as f64,
                    "n={n} factor {} gaps {g1} -> {g2}",
                    word_to_string(f)
                );
            }
        }

        // worst gap over all factors of one length, pinned (deterministic word)
        let mut t = t32_stream();
        let fs = factor_set(&mut t, 8, 800_000).unwrap();
        let worst = fs.factors().map(|f| fs.recurrence_gap(f).unwrap()).max().unwrap();
        assert_eq!(worst, 1944);

        let mut w = SymbolStream::from_fn(2, |i| u8::from(i == 0));
        let fs = factor_set(&mut w, 1, 100).unwrap();
        assert!(matches!(
            fs.recurrence_gap(&[1]),
            Err(Error::InsufficientOccurrences { .. })
        ));
    }

    #[test]
    fn real_valued_lengths_floor_with_unit_slack() {
        let mut t = t32_stream();
        for alpha in [0.0, 29.25, 29.75, 30.0] {
            let at_alpha = filtered_counter_real(&mut t, 1, alpha).unwrap();
            let below = filtered_counter(&mut t, 1, alpha.floor() as usize).unwrap();
            assert_eq!(at_alpha, below);
            let above = filtered_counter(&mut t, 1, alpha.ceil() as usize).unwrap();
            for c in 0..2u8 {
                for k in 0..2i64 {
                    let diff = above.count(c, k) - at_alpha.count(c, k);
                    assert!(diff <= 1, "alpha={alpha} c={c} k={k}");
                }
            }
        }
        assert!(filtered_counter_real(&mut t, 1, -1.0).is_err());
        assert!(filtered_counter_real(&mut t, 1, f64::NAN).is_err());
    }

    #[test]
    fn partitioned_scans_merge_into_the_full_table() {
        let mut t = t32_stream();
        let full = filtered_counter(&mut t, 3, 10_000).unwrap();
        let mut merged = filtered_counter_range(&mut t, 3, 0, 2_500).unwrap();
        for (start, end) in [(2_500, 5_000), (5_000, 9_999), (9_999, 10_000)] {
            merged
                .merge(&filtered_counter_range(&mut t, 3, start, end).unwrap())
                .unwrap();
        }
        assert_eq!(merged, full);

        let incompatible = filtered_counter(&mut t, 2, 100).unwrap();
        assert!(merged.merge(&incompatible).is_err());
    }

    #[test]
    fn complexity_growth_trends_to_the_toeplitz_exponent() {
        // least-squares slope of log p(n) against log n over n = 2..14,
        // compared with the exponent log 3 / log (3/2) of the difference
        // word's pattern (a loose check; the complexity is only pinned up
        // to Theta constants)
        let mut t = t32_stream();
        let mut points = Vec::new();
        for n in 2..=14usize {
            let p = factor_set(&mut t, n, 1_000_000).unwrap().count();
            points.push(((n as f64).ln(), (p as f64).ln()));
        }
        let len = points.len() as f64;
        let (sx, sy): (f64, f64) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
        let slope = (len * sxy - sx * sy) / (len * sxx - sx * sx);
        let target = 3f64.ln() / 1.5f64.ln();
        assert!(
            (slope - target).abs() <= 0.8,
            "regression slope {slope} vs exponent {target}"
        );
    }

    #[test]
    fn counter_tables_on_the_short_prefix() {
        let mut t = t32_stream();
        let c1 = filtered_counter(&mut t, 1, 30).unwrap();
        assert_eq!(c1.row(0), &[5, 6]);
        let c2 = filtered_counter(&mut t, 2, 30).unwrap();
        assert_eq!(c2.row(0), &[2, 4, 3, 2]);
        let c0 = filtered_counter(&mut t, 0, 30).unwrap();
        assert_eq!(c0.count(0, 0), 11);
    }

    #[test]
    fn counter_normalization_and_refinement() {
        let mut t = t32_stream();
        for n in 0..=6u32 {
            let table = filtered_counter(&mut t, n, 100_000).unwrap();
            for k in 0..table.modulus() as i64 {
                assert_eq!(
                    table.count(0, k) + table.count(1, k),
                    table.class_size(k),
                    "n={n} k={k}"
                );
            }
            // refinement into the two finer classes
            let fine = filtered_counter(&mut t, n + 1, 100_000).unwrap();
            for c in 0..2u8 {
                for k in 0..table.modulus() as i64 {
                    assert_eq!(
                        table.count(c, k),
                        fine.count(c, k) + fine.count(c, k + table.modulus() as i64),
                    );
                }
            }
        }
    }

    #[test]
    fn q_inverse_values() {
        assert_eq!(q_inverse(0), 1);
        assert_eq!(q_inverse(1), 3);
        assert_eq!(q_inverse(3), 11);
        for n in 0..=20 {
            let m = 1u64 << (n + 1);
            let q = q_inverse(n);
            assert_eq!(3 * q % m, 1);
            assert!(q % 2 == 1 && q < m);
        }
    }

    #[test]
    fn desubstitution_residuals_vanish() {
        let mut t = t32_stream();
        for (n, m) in [(0u32, 10usize), (0, 1000), (3, 10_000), (6, 10_000)] {
            let res = desubstitution_residuals(&mut t, n, 3 * m).unwrap();
            assert!(
                res.iter().flatten().all(|&r| r == 0),
                "n={n} m={m}: {res:?}"
            );
        }
        // empty prefix is trivially exact
        let res = desubstitution_residuals(&mut t, 2, 0).unwrap();
        assert!(res.iter().flatten().all(|&r| r == 0));
        // prefix length not of the form 3m
        assert!(matches!(
            desubstitution_residuals(&mut t, 2, 100),
            Err(Error::Misaligned(100))
        ));
    }

    #[test]
    fn desubstitution_against_brute_force() {
        // recompute both sides by direct counting on the raw prefix
        let mut t = t32_stream();
        let m = 500usize;
        let p = t.prefix(3 * m).unwrap().to_vec();
        for n in 0..=3u32 {
            let q = q_inverse(n) as i64;
            let modulus = 1i64 << (n + 1);
            let count = |c: u8, k: i64, len: usize| -> i64 {
                p[..len]
                    .iter()
                    .enumerate()
                    .filter(|&(i, &s)| s == c && (i as i64 - k).rem_euclid(modulus >> 1) == 0)
                    .count() as i64
            };
            let count_fine = |c: u8, k: i64, len: usize| -> i64 {
                p[..len]
                    .iter()
                    .enumerate()
                    .filter(|&(i, &s)| s == c && (i as i64 - k).rem_euclid(modulus) == 0)
                    .count() as i64
            };
            for c in 0..2u8 {
                for k in 0..(modulus >> 1) {
                    let lhs = count(c, k, 3 * m);
                    let rhs = count_fine(c, 2 * q * k, 2 * m)
                        + count_fine(c, 2 * q * k - 2 * q, 2 * m)
                        + count_fine(1 - c, 2 * q * k - q, 2 * m);
                    assert_eq!(lhs, rhs, "n={n} c={c} k={k}");
                }
            }
        }
    }

    #[test]
    fn desubstitution_mod_m_vanishes() {
        for modulus in 2..=5u8 {
            let mut w = words::t32_mod(modulus).unwrap();
            for (n, m) in [(0u32, 1000usize), (2, 5000), (4, 5000)] {
                let res = desubstitution_residuals_mod(&mut w, modulus, n, 3 * m).unwrap();
                assert!(
                    res.iter().flatten().all(|&r| r == 0),
                    "modulus={modulus} n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn mu_estimate_values() {
        let mut t = t32_stream();
        let est = mu_estimates(&mut t, 0, 30).unwrap();
        assert_eq!(est[0], (0, 0, Ratio::new(11, 30)));

        let mut alt = SymbolStream::from_fn(2, |i| (i % 2) as u8);
        let est = mu_estimates(&mut alt, 1, 100).unwrap();
        let lookup = |c: u8, k: u64| est.iter().find(|e| e.0 == c && e.1 == k).unwrap().2;
        assert_eq!(lookup(0, 0), Ratio::new(1, 2));
        assert_eq!(lookup(0, 1), Ratio::new(0, 1));

        assert!(mu_estimates(&mut t, 0, 0).is_err());
    }

    #[test]
    fn saturation_flag_behaviour() {
        // a word that reveals a new factor late: 0^500 then a 1
        let mut late = SymbolStream::from_fn(2, |i| u8::from(i == 500));
        let fs = factor_set(&mut late, 1, 501).unwrap();
        assert!(!fs.is_saturated());
        let mut t = t32_stream();
        let fs = factor_set(&mut t, 4, 100_000).unwrap();
        assert!(fs.is_saturated());
    }

    proptest! {
        #[test]
        fn counter_rows_sum_to_class_sizes(
            word in proptest::collection::vec(0u8..2, 1..400),
            n in 0u32..5,
        ) {
            let len = word.len();
            let mut s = SymbolStream::from_word(2, word);
            let table = filtered_counter(&mut s, n, len).unwrap();
            for k in 0..table.modulus() as i64 {
                prop_assert_eq!(table.count(0, k) + table.count(1, k), table.class_size(k));
            }
        }
    }
}
