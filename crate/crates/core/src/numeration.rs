//! Base-3/2 digit expansions and the associated numeration tree.
//!
//! A nonnegative integer n is written as a sum of digits d_i in {0,1,2}
//! weighted by (1/2)(3/2)^i. Expansions are computed least-significant
//! digit first by d = 2n mod 3 with parent (2n - d)/3, which inverts the
//! tree rhythm: even vertices have two children (edge digits 0 and 2),
//! odd vertices one child (edge digit 1), breadth-first rank = value.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// A base-3/2 digit string, most-significant digit first.
///
/// The empty string represents 0; non-empty strings never start with 0 and
/// every digit is in {0,1,2}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString(Vec<u8>);

impl DigitString {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::InvalidDigit { digit: d, max: 2 });
        }
        if digits.first() == Some(&0) {
            return Err(Error::LeadingZero);
        }
        Ok(DigitString(digits))
    }

    pub fn empty() -> Self {
        DigitString(Vec::new())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad digit char {c:?}")))?;
            digits.push(d as u8);
        }
        DigitString::new(digits)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            // printable stand-in for the empty expansion of 0
            return write!(f, "ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// The base-3/2 expansion of n.
pub fn expand(n: u64) -> DigitString {
    // widened so 2n cannot overflow for any u64 input
    let mut n = n as u128;
    let mut digits = Vec::new();
    while n > 0 {
        let d = (2 * n % 3) as u8;
        digits.push(d);
        n = (2 * n - d as u128) / 3;
    }
    digits.reverse();
    DigitString(digits)
}

/// Exact value of a digit string: sum of d_i (1/2)(3/2)^i over the digits,
/// i counted from the least-significant end.
///
/// Horner form over the digits msd-first: v -> (3v + d)/2, so the value is
/// an integer divided by a power of two.
pub fn value_of(d: &DigitString) -> BigRational {
    let mut num = BigInt::from(0);
    for (k, &digit) in d.digits().iter().enumerate() {
        num = num * 3 + (BigInt::from(digit) << k);
    }
    let den = BigInt::from(1) << d.len();
    BigRational::new(num, den)
}

/// Digit sum of the base-3/2 expansion of n.
pub fn sum_of_digits(n: u64) -> u64 {
    let mut n = n as u128;
    let mut s = 0;
    while n > 0 {
        let d = 2 * n % 3;
        s += d as u64;
        n = (2 * n - d) / 3;
    }
    s
}

/// One outgoing edge of the numeration tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChildEdge {
    pub index: u64,
    pub digit: u8,
    /// The root carries a hidden digit-0 loop onto itself so that no
    /// expansion starts with 0; that edge is flagged here.
    pub is_root_loop: bool,
}

/// Children of vertex n in breadth-first order.
///
/// Even n has two children 3n/2 (digit 0) and 3n/2 + 1 (digit 2); odd n has
/// the single child (3n+1)/2 (digit 1). Panics if a child index exceeds
/// u64 (n around 2^63.4 and up).
pub fn children(n: u64) -> Vec<ChildEdge> {
    let child = |x: u128| u64::try_from(x).expect("child index exceeds u64");
    let n = n as u128;
    if n % 2 == 0 {
        vec![
            ChildEdge {
                index: child(3 * n / 2),
                digit: 0,
                is_root_loop: n == 0,
            },
            ChildEdge {
                index: child(3 * n / 2 + 1),
                digit: 2,
                is_root_loop: false,
            },
        ]
    } else {
        vec![ChildEdge {
            index: child((3 * n + 1) / 2),
            digit: 1,
            is_root_loop: false,
        }]
    }
}

/// A vertex of the numeration tree, identified by its breadth-first rank
/// (which equals the integer it represents).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeNode(pub u64);

impl TreeNode {
    pub fn expansion(&self) -> DigitString {
        expand(self.0)
    }

    pub fn children(&self) -> Vec<ChildEdge> {
        children(self.0)
    }

    /// Parent vertex and the edge digit leading here; `None` for the root.
    pub fn parent(&self) -> Option<(TreeNode, u8)> {
        if self.0 == 0 {
            return None;
        }
        let n = self.0 as u128;
        let d = (2 * n % 3) as u8;
        Some((TreeNode(((2 * n - d as u128) / 3) as u64), d))
    }
}

/// Leftmost descendant of j at depth k: n_0(j) = j and n_{i+1} is the
/// leftmost child of n_i (3n/2 when even, (3n+1)/2 when odd). Panics if a
/// descendant index exceeds u64 (they grow like (3/2)^k j).
pub fn n_k(j: u64, k: u32) -> u64 {
    let mut n = j as u128;
    for _ in 0..k {
        n = if n % 2 == 0 { 3 * n / 2 } else { (3 * n + 1) / 2 };
    }
    u64::try_from(n).expect("descendant index exceeds u64")
}

/// The vector (n_0(j) mod 2, ..., n_k(j) mod 2) of length k + 1.
/// Computed in 128-bit arithmetic, which holds (3/2)^k j for every u64 j
/// up to depth k = 64 and far beyond for small j.
pub fn parity_vector(j: u64, k: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut n = j as u128;
    out.push((n % 2) as u8);
    for _ in 0..k {
        n = if n % 2 == 0 { 3 * n / 2 } else { (3 * n + 1) / 2 };
        out.push((n % 2) as u8);
    }
    out
}
