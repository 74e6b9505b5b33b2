//! Words over small alphabets generated by the base-3/2 numeration system.
//!
//! The crate centers on the binary word `t32`, whose n-th symbol is the
//! parity of the digit sum of n written in base 3/2, together with the
//! machinery needed to study it:
//!
//! * [`numeration`]: base-3/2 digit expansions, the numeration tree, and
//!   the leftmost-descendant quantities `n_k(j)` with their parity vectors;
//! * [`substitution`]: morphisms, periodically iterated morphism families,
//!   r-block substitutions, DFAOs, and lazily materialized symbol streams;
//! * [`words`]: the named words (`t32`, its complement, Dekking's variant,
//!   the Kolakoski word, ...) and word-level operators (first difference,
//!   integration, complement, sliding 2-block code, digit sums mod m);
//! * [`toeplitz`]: hole-pattern words, exact letter frequencies, and the
//!   complexity exponent of (p,q)-patterns;
//! * [`analysis`]: factor sets with closure/recurrence/parity checks and
//!   the filtered counters C_n(c,k,N) with their exact desubstitution
//!   identity;
//! * [`padic`]: dyadic-rational character arithmetic, the multipliers
//!   M, M^(k) and their trigonometric form, the zeta_k supremum bound, and
//!   the finite-level averaging operator with its Fourier identity;
//! * [`verify`]: the named check suite behind `t32 verify`.
//!
//! ```
//! use t32::{numeration, toeplitz, words};
//!
//! assert_eq!(numeration::expand(8).to_string(), "21011");
//! assert_eq!(numeration::sum_of_digits(8), 5);
//!
//! let mut word = words::t32(words::T32Backend::Block);
//! assert_eq!(word.prefix_string(8).unwrap(), "00111011");
//!
//! // the first difference of t32 is the word of the hole pattern 01?0?10??
//! let mut diff = words::delta(words::t32(words::T32Backend::Block)).unwrap();
//! let pattern = toeplitz::delta_t32_pattern();
//! assert_eq!(diff.get(1000).unwrap(), pattern.symbol_at(1000));
//! ```

pub mod analysis;
pub mod error;
pub mod numeration;
pub mod padic;
pub mod substitution;
pub mod toeplitz;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use substitution::{Symbol, SymbolStream};
