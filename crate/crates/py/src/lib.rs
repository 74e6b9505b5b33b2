//! Python module `t32py`: the base-3/2 numeration system, the word t32 and
//! its relatives, factor and counter scans, and the dyadic spectral bound.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Mutex;
use t32::analysis::{self, FactorMap};
use t32::numeration::{self, DigitString};
use t32::padic;
use t32::substitution::{
    block_fixed_point, word_from_str, word_to_string, BlockSubstitution, SymbolStream,
};
use t32::toeplitz::ToeplitzPattern;
use t32::verify::{self, VerifyConfig};
use t32::words::{self, T32Backend};

fn err(e: t32::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A lazily materialized infinite word.
#[pyclass]
struct Word {
    stream: Mutex<SymbolStream>,
    description: String,
}

impl Word {
    fn wrap(stream: SymbolStream, description: impl Into<String>) -> Self {
        Word { stream: Mutex::new(stream), description: description.into() }
    }

    fn build(name: &str, m: Option<u8>, ops: Vec<String>) -> PyResult<Self> {
        let mut stream = words::by_name(name, m).map_err(err)?;
        for op in &ops {
            stream = match op.as_str() {
                "delta" => words::delta(stream).map_err(err)?,
                "complement" => words::complement(stream).map_err(err)?,
                "slide2" => words::slide2(stream).map_err(err)?,
                other => return Err(PyValueError::new_err(format!("unknown op {other:?}"))),
            };
        }
        let description = if ops.is_empty() {
            name.to_string()
        } else {
            format!("{}({name})", ops.join("("))
        };
        Ok(Word::wrap(stream, description))
    }
}

#[pymethods]
impl Word {
    /// Word from the catalog: t32, t32bar, tprime, delta-t32, kolakoski,
    /// thue-morse-base2, slide2-t32, t32-mod (with m), optionally piped
    /// through the ops delta / complement / slide2.
    #[staticmethod]
    #[pyo3(signature = (name, m=None, ops=vec![]))]
    fn named(name: &str, m: Option<u8>, ops: Vec<String>) -> PyResult<Self> {
        Word::build(name, m, ops)
    }

    /// t32 from a chosen backend: "dfao", "block", or "relations".
    #[staticmethod]
    fn t32(backend: &str) -> PyResult<Self> {
        let via = match backend {
            "dfao" => T32Backend::Dfao,
            "block" => T32Backend::Block,
            "relations" => T32Backend::Relations,
            other => return Err(PyValueError::new_err(format!("unknown backend {other:?}"))),
        };
        Ok(Word::wrap(words::t32(via), format!("t32[{backend}]")))
    }

    /// Toeplitz word of a hole pattern such as "01?0?10??".
    #[staticmethod]
    fn toeplitz(pattern: &str) -> PyResult<Self> {
        let pat = ToeplitzPattern::parse(pattern).map_err(err)?;
        Ok(Word::wrap(pat.stream(), format!("toeplitz({pattern})")))
    }

    /// Fixed point of block-substitution rules given as "block -> image"
    /// lines, starting from the seed symbol.
    #[staticmethod]
    fn from_rules(rules: &str, seed: u8) -> PyResult<Self> {
        let beta = BlockSubstitution::parse(rules).map_err(err)?;
        Ok(Word::wrap(block_fixed_point(beta, seed), "fixed point".to_string()))
    }

    /// The first n symbols as a string of digits.
    fn prefix(&self, n: usize) -> PyResult<String> {
        self.stream.lock().unwrap().prefix_string(n).map_err(err)
    }

    /// The first n symbols as a list of ints.
    fn symbols(&self, n: usize) -> PyResult<Vec<u32>> {
        Ok(self
            .stream
            .lock()
            .unwrap()
            .prefix(n)
            .map_err(err)?
            .iter()
            .map(|&a| a as u32)
            .collect())
    }

    /// The symbol at index i.
    fn get(&self, i: usize) -> PyResult<u8> {
        self.stream.lock().unwrap().get(i).map_err(err)
    }

    fn alphabet_size(&self) -> u8 {
        self.stream.lock().unwrap().alphabet_size()
    }

    fn __repr__(&self) -> String {
        format!("Word({})", self.description)
    }
}

/// Base-3/2 expansion of n as a digit string ("" for 0).
#[pyfunction]
fn expand(n: u64) -> String {
    word_to_string(numeration::expand(n).digits())
}

/// Digit sum of the base-3/2 expansion of n.
#[pyfunction]
fn sum_of_digits(n: u64) -> u64 {
    numeration::sum_of_digits(n)
}

/// Exact value of a base-3/2 digit string as (numerator, denominator).
#[pyfunction]
fn value_of(digits: &str) -> PyResult<(BigInt, BigInt)> {
    let d = DigitString::parse(digits).map_err(err)?;
    let v = numeration::value_of(&d);
    Ok((v.numer().clone(), v.denom().clone()))
}

/// Children of n in the numeration tree: (index, edge digit, is_root_loop).
#[pyfunction]
fn children(n: u64) -> Vec<(u64, u8, bool)> {
    numeration::children(n)
        .into_iter()
        .map(|e| (e.index, e.digit, e.is_root_loop))
        .collect()
}

/// Leftmost descendant of j at depth k in the numeration tree.
#[pyfunction]
fn n_k(j: u64, k: u32) -> u64 {
    numeration::n_k(j, k)
}

/// Parities (n_0(j) mod 2, ..., n_k(j) mod 2).
#[pyfunction]
fn parity_vector(j: u64, k: u32) -> Vec<u32> {
    numeration::parity_vector(j, k).iter().map(|&b| b as u32).collect()
}

/// Multiplicative inverse of 3 mod 2^(n+1).
#[pyfunction]
fn q_inverse(n: u32) -> u64 {
    analysis::q_inverse(n)
}

/// Complement of a finite binary word.
#[pyfunction]
fn complement(word: &str) -> PyResult<String> {
    let w = word_from_str(word).map_err(err)?;
    Ok(word_to_string(&words::complement_word(&w).map_err(err)?))
}

/// Reversal of a finite word.
#[pyfunction]
fn reverse(word: &str) -> PyResult<String> {
    let w = word_from_str(word).map_err(err)?;
    Ok(word_to_string(&words::reverse(&w)))
}

/// Counter table C_n(c, k, N) for a named word: rows indexed by symbol,
/// columns by residue class mod 2^mod_exp.
#[pyfunction]
#[pyo3(signature = (name, mod_exp, length, m=None))]
fn counter_table(name: &str, mod_exp: u32, length: usize, m: Option<u8>) -> PyResult<Vec<Vec<u64>>> {
    let mut stream = words::by_name(name, m).map_err(err)?;
    let table = analysis::filtered_counter(&mut stream, mod_exp, length).map_err(err)?;
    Ok((0..stream.alphabet_size()).map(|c| table.row(c).to_vec()).collect())
}

/// Largest absolute residual of the three-term desubstitution identity for
/// t32 at level mod_exp and aligned prefix length (must be 3m); exactness
/// means this is 0.
#[pyfunction]
fn desubstitution_max_residual(mod_exp: u32, prefix_len: usize) -> PyResult<i64> {
    let mut t = words::t32(T32Backend::Block);
    let residuals = analysis::desubstitution_residuals(&mut t, mod_exp, prefix_len).map_err(err)?;
    Ok(residuals.into_iter().flatten().map(i64::abs).max().unwrap_or(0))
}

/// Factor statistics of a named word: count, saturation, closure under
/// complement and reversal, and whether every factor occurs at both
/// parities.
#[pyfunction]
#[pyo3(signature = (name, factor_len, prefix_len, m=None))]
fn factor_report<'py>(
    py: Python<'py>,
    name: &str,
    factor_len: usize,
    prefix_len: usize,
    m: Option<u8>,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let mut stream = words::by_name(name, m).map_err(err)?;
    let fs = analysis::factor_set(&mut stream, factor_len, prefix_len).map_err(err)?;
    let complement_closed = match fs.closed_under(FactorMap::Complement) {
        Ok(report) => Some(report.closed),
        Err(_) => None, // non-binary alphabet
    };
    let reversal = fs.closed_under(FactorMap::Reversal).map_err(err)?;
    let both_parities = fs
        .factors()
        .all(|f| matches!(fs.parity_occurrences(f), Ok((e, o)) if e > 0 && o > 0));
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("count", fs.count())?;
    dict.set_item("saturated", fs.is_saturated())?;
    dict.set_item("closed_complement", complement_closed)?;
    dict.set_item("closed_reversal", reversal.closed)?;
    dict.set_item("both_parities", both_parities)?;
    Ok(dict)
}

/// Exact letter frequency of a Toeplitz pattern as (numerator, denominator).
#[pyfunction]
fn toeplitz_frequency(pattern: &str, letter: u8) -> PyResult<(u64, u64)> {
    let pat = ToeplitzPattern::parse(pattern).map_err(err)?;
    let f = pat.letter_frequency(letter);
    Ok((*f.numer(), *f.denom()))
}

/// Complexity growth exponent of a Toeplitz pattern.
#[pyfunction]
fn complexity_exponent(pattern: &str) -> PyResult<f64> {
    let pat = ToeplitzPattern::parse(pattern).map_err(err)?;
    pat.complexity_exponent().map_err(err)
}

/// The multiplier M(a/2^level) of the averaging operator.
#[pyfunction]
fn multiplier_m(numerator: i64, level: u32) -> Complex64 {
    padic::multiplier_m(padic::DyadicRational::new(numerator, level))
}

/// zeta_k evaluated at s.
#[pyfunction]
fn zeta_k(k: u32, s: f64) -> f64 {
    padic::zeta_k_at(k, s)
}

/// The closed form (4/81)(9 + 2 cos 2 pi s - 4 cos 4 pi s) of zeta_2.
#[pyfunction]
fn zeta2_closed_form(s: f64) -> f64 {
    padic::zeta_2_closed_form(s)
}

/// Grid supremum of zeta_k: (grid maximum, certified upper bound).
#[pyfunction]
fn zeta_sup(k: u32, grid: usize) -> PyResult<(f64, f64)> {
    let sup = padic::zeta_k_sup(k, grid).map_err(err)?;
    Ok((sup.grid_max, sup.certified_upper_bound))
}

/// Coefficients of the k-step trigonometric multiplier over the common
/// denominator 3^k, as (numerator, denominator) pairs.
#[pyfunction]
fn mtilde_coefficients(k: u32) -> Vec<(i64, i64)> {
    padic::m_tilde_coefficients(k)
        .into_iter()
        .map(|c| (*c.numer(), *c.denom()))
        .collect()
}

/// Worst quadratic-mean ratio of the twice-applied averaging operator over
/// random bounded functions; always under 20/27.
#[pyfunction]
#[pyo3(signature = (level=12, trials=100, seed=0))]
fn contraction_worst_ratio(level: u32, trials: usize, seed: u64) -> PyResult<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = padic::contraction_demo(level, trials, &mut rng).map_err(err)?;
    Ok(report.worst_ratio)
}

/// Runs the named check suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (length=100_000, checks=vec![], experimental=false, seed=0))]
fn verify_json(length: usize, checks: Vec<String>, experimental: bool, seed: u64) -> PyResult<String> {
    let config = VerifyConfig {
        length,
        monitor_length: length.max(1_000_000),
        seed,
        experimental,
        ..VerifyConfig::default()
    };
    let report = verify::run(&config, &checks).map_err(err)?;
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn t32py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Word>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(sum_of_digits, m)?)?;
    m.add_function(wrap_pyfunction!(value_of, m)?)?;
    m.add_function(wrap_pyfunction!(children, m)?)?;
    m.add_function(wrap_pyfunction!(n_k, m)?)?;
    m.add_function(wrap_pyfunction!(parity_vector, m)?)?;
    m.add_function(wrap_pyfunction!(q_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(complement, m)?)?;
    m.add_function(wrap_pyfunction!(reverse, m)?)?;
    m.add_function(wrap_pyfunction!(counter_table, m)?)?;
    m.add_function(wrap_pyfunction!(desubstitution_max_residual, m)?)?;
    m.add_function(wrap_pyfunction!(factor_report, m)?)?;
    m.add_function(wrap_pyfunction!(toeplitz_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(multiplier_m, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_k, m)?)?;
    m.add_function(wrap_pyfunction!(zeta2_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_sup, m)?)?;
    m.add_function(wrap_pyfunction!(mtilde_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_worst_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    Ok(())
}
