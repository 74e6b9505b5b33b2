//! Dyadic-rational characters, the desubstitution multipliers, and the
//! finite-level averaging operator.
//!
//! Filtered densities of t32 live naturally on the 2-adic integers; their
//! characters are indexed by dyadic rationals a/2^n mod 1. Desubstitution
//! becomes the averaging operator
//!
//!   (L delta)(x) = (1/3) [delta(2qx) - delta(2qx - q) + delta(2qx - 2q)]
//!
//! (q the 2-adic inverse of 3) which acts on a character chi_r by scaling
//! with the multiplier M(r) and shifting the index to 2q r. Summing the
//! squared k-step multipliers over the 2^k preimages of an index gives
//! zeta_k; a supremum bound below 1 for zeta_2 forces the filtered
//! densities to equidistribute. Everything here is realized at finite
//! levels Z/2^n Z where every identity is checkable.

use crate::analysis::q_inverse;
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use std::f64::consts::TAU;

/// A dyadic rational a/2^n mod 1 in canonical form: 0 <= a < 2^n and a odd,
/// except for zero which is 0/2^0. Canonical form makes equality plain
/// field equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicRational {
    numerator: u64,
    level: u32,
}

impl DyadicRational {
    pub const ZERO: DyadicRational = DyadicRational { numerator: 0, level: 0 };

    /// Reduces a/2^level mod 1 to canonical form.
    pub fn new(numerator: i64, level: u32) -> Self {
        let m = 1u64 << level;
        let mut a = numerator.rem_euclid(m as i64) as u64;
        let mut level = level;
        while a != 0 && a % 2 == 0 {
            a /= 2;
            level -= 1;
        }
        if a == 0 {
            return DyadicRational::ZERO;
        }
        DyadicRational { numerator: a, level }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Value in [0, 1).
    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / (1u64 << self.level) as f64
    }

    /// Numerator when written over the denominator 2^level (level must be at
    /// least the canonical one).
    pub fn numerator_at_level(&self, level: u32) -> Result<u64> {
        if level < self.level {
            return Err(Error::LevelMismatch { expected: self.level, got: level });
        }
        Ok(self.numerator << (level - self.level))
    }

    /// All 2^n dyadic rationals with level at most n, i.e. the duals of
    /// Z/2^n Z.
    pub fn all_at_level(n: u32) -> Vec<DyadicRational> {
        (0..1i64 << n).map(|a| DyadicRational::new(a, n)).collect()
    }
}

impl std::fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, 1u64 << self.level)
    }
}

/// The three index maps used by the multiplier calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PMul {
    Two,
    Three,
    /// Multiplication by the 2-adic inverse of 3.
    QInv,
}

/// P_x(a/2^n) = (x mod 2^n) a / 2^n for x in {2, 3, q}: the index maps are
/// multiplication by the level-n reduction of x. P_3 and P_q are inverse
/// bijections on each level; P_2 is 2-to-1 with kernel {0, 1/2}.
pub fn p_mul(x: PMul, r: DyadicRational) -> DyadicRational {
    let n = r.level;
    let factor: u64 = match x {
        PMul::Two => 2,
        PMul::Three => 3 % (1u64 << n).max(1),
        // inverse of 3 mod 2^n; q_inverse(k) inverts mod 2^(k+1)
        PMul::QInv => {
            if n == 0 {
                0
            } else {
                q_inverse(n - 1)
            }
        }
    };
    let m = 1u128 << n;
    let a = (factor as u128 * r.numerator as u128 % m) as i64;
    DyadicRational::new(a, n)
}

/// e(t) = exp(2 pi i t).
pub fn unit(t: f64) -> Complex64 {
    Complex64::new((TAU * t).cos(), (TAU * t).sin())
}

/// Character chi_r evaluated at the residue x mod 2^level(r):
/// exp(2 pi i x a / 2^n).
pub fn character(r: DyadicRational, x: u64) -> Complex64 {
    let m = 1u64 << r.level;
    unit(((x % m) as f64) * r.numerator as f64 / m as f64)
}

/// chi_r at a residue given mod 2^level; errors if the character needs more
/// resolution than the residue carries.
pub fn character_at_level(r: DyadicRational, x: u64, level: u32) -> Result<Complex64> {
    if level < r.level {
        return Err(Error::LevelMismatch { expected: r.level, got: level });
    }
    Ok(character(r, x % (1u64 << r.level).max(1)))
}

/// The one-step multiplier M(r) = (1/3) (1 - e(-s) + e(-2s)) with
/// s = P_q(r).
pub fn multiplier_m(r: DyadicRational) -> Complex64 {
    let s = p_mul(PMul::QInv, r).as_f64();
    (Complex64::new(1.0, 0.0) - unit(-s) + unit(-2.0 * s)) / 3.0
}

/// The k-step multiplier: product of M along the orbit of r under the index
/// map 2q.
pub fn multiplier_m_k(r: DyadicRational, k: u32) -> Complex64 {
    let mut product = Complex64::new(1.0, 0.0);
    let mut current = r;
    for _ in 0..k {
        product *= multiplier_m(current);
        current = p_mul(PMul::Two, p_mul(PMul::QInv, current));
    }
    product
}

/// The k-step multiplier with the inverse-of-3 factors cleared by a 3^k
/// reindexing, as a trigonometric polynomial valid for every real r:
///
///   (1/3^k) prod_{0 <= l < k} (1 - e(-2^l 3^(k-l-1) r) + e(-2^(l+1) 3^(k-l-1) r)).
pub fn multiplier_m_tilde(k: u32, r: f64) -> Complex64 {
    let mut product = Complex64::new(1.0, 0.0);
    for l in 0..k {
        let a = 2f64.powi(l as i32) * 3f64.powi((k - l - 1) as i32);
        product *= Complex64::new(1.0, 0.0) - unit(-a * r) + unit(-2.0 * a * r);
    }
    product / 3f64.powi(k as i32)
}

/// Coefficients (over the common denominator 3^k) of the expansion of the
/// k-step trigonometric multiplier as sum_l g_l e(-l r): the product of the
/// integer polynomials 1 - z^a + z^(2a) with a = 2^l 3^(k-l-1).
pub fn m_tilde_coefficients(k: u32) -> Vec<Ratio<i64>> {
    let mut coeffs: Vec<i64> = vec![1];
    for l in 0..k {
        let a = (1usize << l) * 3usize.pow(k - l - 1);
        let mut next = vec![0i64; coeffs.len() + 2 * a];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + a] -= c;
            next[i + 2 * a] += c;
        }
        coeffs = next;
    }
    let den = 3i64.pow(k);
    coeffs.into_iter().map(|c| Ratio::new(c, den)).collect()
}

/// zeta_k(s) = sum over the 2^k preimages j of |M-tilde_k((s+j)/2^k)|^2.
pub fn zeta_k_at(k: u32, s: f64) -> f64 {
    let count = 1u64 << k;
    (0..count)
        .map(|j| multiplier_m_tilde(k, (s + j as f64) / count as f64).norm_sqr())
        .sum()
}

/// zeta_2 in closed form: (4/81) (9 + 2 cos 2 pi s - 4 cos 4 pi s).
pub fn zeta_2_closed_form(s: f64) -> f64 {
    4.0 / 81.0 * (9.0 + 2.0 * (TAU * s).cos() - 4.0 * (2.0 * TAU * s).cos())
}

/// The exact supremum of zeta_2 over the reals, 35/54: substituting
/// c = cos(2 pi s) turns the closed form into (4/81)(13 + 2c - 8c^2),
/// maximal at c = 1/8.
pub fn zeta_2_exact_sup() -> Ratio<u64> {
    Ratio::new(35, 54)
}

/// The coefficient (triangle-inequality) bound for zeta_2:
/// (4/81)(9 + 2 + 4) = 20/27.
pub fn zeta_2_coefficient_bound() -> Ratio<u64> {
    Ratio::new(20, 27)
}

/// Result of a grid supremum scan of zeta_k.
#[derive(Debug, Clone, Copy)]
pub struct SupEstimate {
    /// Largest sampled value (a lower bound for the supremum).
    pub grid_max: f64,
    /// Location of the grid maximum in [0, 1).
    pub argmax: f64,
    /// grid_max + (Lipschitz constant) * step / 2: a rigorous upper bound.
    pub certified_upper_bound: f64,
    pub grid: usize,
}

/// Term-wise Lipschitz constant of zeta_k on the line: each factor
/// 1 - e(-a r) + e(-2a r) has modulus at most 3 and derivative at most
/// 6 pi a, so |d zeta_k / ds| <= 4 pi (3^k - 2^k).
pub fn zeta_k_lipschitz(k: u32) -> f64 {
    4.0 * std::f64::consts::PI * (3f64.powi(k as i32) - 2f64.powi(k as i32))
}

/// Scans zeta_k over `grid` equispaced points of its period [0, 1) and
/// returns the maximum together with a Lipschitz-certified upper bound.
pub fn zeta_k_sup(k: u32, grid: usize) -> Result<SupEstimate> {
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must have at least 2 points".into()));
    }
    let step = 1.0 / grid as f64;
    let mut grid_max = f64::NEG_INFINITY;
    let mut argmax = 0.0;
    for i in 0..grid {
        let s = i as f64 * step;
        let v = zeta_k_at(k, s);
        if v > grid_max {
            grid_max = v;
            argmax = s;
        }
    }
    Ok(SupEstimate {
        grid_max,
        argmax,
        certified_upper_bound: grid_max + zeta_k_lipschitz(k) * step / 2.0,
        grid,
    })
}

/// A real-valued function on Z/2^n Z.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLevelFunction {
    level: u32,
    values: Vec<f64>,
}

impl FiniteLevelFunction {
    pub fn new(level: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << level {
            return Err(Error::InvalidParameter(format!(
                "level {level} needs {} values, got {}",
                1u64 << level,
                values.len()
            )));
        }
        Ok(FiniteLevelFunction { level, values })
    }

    pub fn constant(level: u32, value: f64) -> Self {
        FiniteLevelFunction { level, values: vec![value; 1 << level] }
    }

    /// Random values uniform in [-1, 1], so the sup norm is at most 1.
    pub fn random(level: u32, rng: &mut impl Rng) -> Self {
        let values = (0..1usize << level).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        FiniteLevelFunction { level, values }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: i64) -> f64 {
        let m = 1i64 << self.level;
        self.values[x.rem_euclid(m) as usize]
    }

    /// Normalized quadratic mean: (1/2^n) sum |delta(x)|^2.
    pub fn norm2_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }

    /// Normalized Fourier coefficient at the dual index a/2^n (any a):
    /// (1/2^n) sum_x delta(x) e(-a x / 2^n).
    pub fn fourier_coefficient(&self, r: DyadicRational) -> Result<Complex64> {
        let a = r.numerator_at_level(self.level)?;
        let m = self.values.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, &v) in self.values.iter().enumerate() {
            acc += v * unit(-((a as f64) * x as f64 / m as f64));
        }
        Ok(acc / m as f64)
    }

    /// All 2^n normalized Fourier coefficients; entry a corresponds to the
    /// dual a/2^n. Computed by a radix-2 transform; agreement with the
    /// definitional sum in [`Self::fourier_coefficient`] is covered by
    /// tests.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let n = self.values.len();
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft_in_place(&mut buf);
        for c in &mut buf {
            *c /= n as f64;
        }
        buf
    }
}

/// In-place radix-2 transform: buf[k] <- sum_x buf[x] e(-k x / N).
fn fft_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let step = unit(-1.0 / len as f64);
        for chunk in buf.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(len / 2);
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = lo[k];
                let v = hi[k] * w;
                lo[k] = u + v;
                hi[k] = u - v;
                w *= step;
            }
        }
        len <<= 1;
    }
}

/// One step of the averaging operator: maps a level-(n+1) function to the
/// level-n function
///
///   (L delta)(x) = (1/3) [delta(2 q x) - delta(2 q x - q) + delta(2 q x - 2 q)]
///
/// with q the inverse of 3 mod 2^(n+1) and all arguments mod 2^(n+1).
pub fn finite_operator_l(delta: &FiniteLevelFunction) -> Result<FiniteLevelFunction> {
    let level = delta.level();
    if level == 0 {
        return Err(Error::LevelMismatch { expected: 1, got: 0 });
    }
    let n = level - 1;
    let q = q_inverse(n) as i64;
    let values = (0..1i64 << n)
        .map(|x| {
            (delta.get(2 * q * x) - delta.get(2 * q * x - q) + delta.get(2 * q * x - 2 * q)) / 3.0
        })
        .collect();
    FiniteLevelFunction::new(n, values)
}

/// Outcome of the random contraction experiment for L applied twice.
#[derive(Debug, Clone, Copy)]
pub struct ContractionReport {
    pub level: u32,
    pub trials: usize,
    /// Worst observed ||L^2 delta||_2^2 / ||delta||_2^2.
    pub worst_ratio: f64,
    /// 20/27, the coefficient bound every ratio must respect.
    pub bound: f64,
}

/// Applies L twice to random bounded functions at the given level and
/// reports the worst quadratic-mean contraction ratio. Every ratio is
/// bounded by sup zeta_2 and in particular by 20/27 < 1.
pub fn contraction_demo(level: u32, trials: usize, rng: &mut impl Rng) -> Result<ContractionReport> {
    if level < 4 {
        return Err(Error::InvalidParameter("need level >= 4 (two operator steps)".into()));
    }
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let delta = FiniteLevelFunction::random(level, rng);
        let norm_in = delta.norm2_sq();
        if norm_in == 0.0 {
            continue;
        }
        let out = finite_operator_l(&finite_operator_l(&delta)?)?;
        worst = worst.max(out.norm2_sq() / norm_in);
    }
    Ok(ContractionReport {
        level,
        trials,
        worst_ratio: worst,
        bound: 20.0 / 27.0,
    })
}

/// The two preimages of a level-n dual under the index map 2q, written at
/// level n+1: solving 2 q a = b 2 (mod 2^(n+1)) gives a = 3b and
/// a = 3b + 2^n (mod 2^(n+1)).
pub fn p2q_preimages(s: DyadicRational, fine_level: u32) -> Result<[DyadicRational; 2]> {
    if fine_level == 0 || s.level() > fine_level - 1 {
        return Err(Error::LevelMismatch { expected: fine_level.saturating_sub(1), got: s.level() });
    }
    let n = fine_level - 1;
    let b = s.numerator_at_level(n)?;
    let half = 1i64 << n;
    let a = (3 * b as i64) % half;
    Ok([
        DyadicRational::new(a, fine_level),
        DyadicRational::new(a + half, fine_level),
    ])
}
