//! The named words of the base-3/2 family and the operators connecting
//! them.
//!
//! `t32` is the word whose n-th symbol is the base-3/2 digit sum of n
//! reduced mod 2. It has three independent generators (a DFAO fed the
//! expansion of n, a 2-block substitution, and the index recurrences
//! t_{3n} = t_{3n+1} = t_{2n}, t_{3n+2} = 1 - t_{2n+1}) which must agree
//! symbol-wise. All named fixed points are seeded with 0 except the
//! Kolakoski word, which starts with 2.

use crate::error::{Error, Result};
use crate::numeration::{expand, sum_of_digits};
use crate::substitution::{
    alternating_fixed_point, block_fixed_point, to_block_substitution, BlockSubstitution, Dfao,
    Morphism, MorphismFamily, Symbol, SymbolStream,
};

/// Backend selector for [`t32`]; all three must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T32Backend {
    Dfao,
    Block,
    Relations,
}

/// Backend selector for [`t_prime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TPrimeBackend {
    Block,
    Phi,
}

/// The family (f0: 0->00, 1->11; f1: 0->1, 1->0) whose alternating fixed
/// point is t32.
pub fn t32_family() -> MorphismFamily {
    MorphismFamily::new(vec![
        Morphism::new(&[(0, &[0, 0]), (1, &[1, 1])]).unwrap(),
        Morphism::new(&[(0, &[1]), (1, &[0])]).unwrap(),
    ])
    .unwrap()
}

/// The 2-block substitution tau: 00->001, 01->000, 10->111, 11->110.
pub fn t32_block_substitution() -> BlockSubstitution {
    to_block_substitution(&t32_family())
}

/// The family (k0: 1->2, 2->22; k1: 1->1, 2->11) generating the Kolakoski
/// word.
pub fn kolakoski_family() -> MorphismFamily {
    MorphismFamily::new(vec![
        Morphism::new(&[(0, &[]), (1, &[2]), (2, &[2, 2])]).unwrap(),
        Morphism::new(&[(0, &[]), (1, &[1]), (2, &[1, 1])]).unwrap(),
    ])
    .unwrap()
}

/// The family (f0: 0->01, 1->00; f1: exchange) whose alternating fixed
/// point is the first difference of t32.
pub fn delta_t32_family() -> MorphismFamily {
    MorphismFamily::new(vec![
        Morphism::new(&[(0, &[0, 1]), (1, &[0, 0])]).unwrap(),
        Morphism::new(&[(0, &[1]), (1, &[0])]).unwrap(),
    ])
    .unwrap()
}

/// DFAO over digits {0,1,2} computing the parity of the digit sum: digit 1
/// toggles the state, digits 0 and 2 keep it.
pub fn t32_dfao() -> Dfao {
    Dfao::new(vec![vec![0, 1, 0], vec![1, 0, 1]], 0, vec![0, 1], 3).unwrap()
}

/// DFAO over digits {0,1,2} computing the parity of the number of digits
/// after the last 0 of the expansion: digit 0 resets to the even state,
/// digits 1 and 2 toggle out of it, and every digit leaves the odd state.
/// Fed the expansion of n it outputs the first difference of t32 at n.
pub fn delta_t32_dfao() -> Dfao {
    Dfao::new(vec![vec![0, 1, 1], vec![0, 0, 0]], 0, vec![0, 1], 3).unwrap()
}

/// The base-3/2 Thue-Morse word, prefix 001110111110110111110000110110...
pub fn t32(via: T32Backend) -> SymbolStream {
    match via {
        T32Backend::Block => block_fixed_point(t32_block_substitution(), 0),
        T32Backend::Dfao => {
            let dfao = t32_dfao();
            SymbolStream::from_fn(2, move |n| {
                dfao.eval(expand(n as u64).digits()).expect("digits are valid")
            })
        }
        T32Backend::Relations => SymbolStream::new(
            2,
            Box::new(|buf, target| {
                if buf.is_empty() && target > 0 {
                    buf.push(0);
                }
                while buf.len() < target {
                    let i = buf.len();
                    let (n, r) = (i / 3, i % 3);
                    let s = match r {
                        0 | 1 => buf[2 * n],
                        _ => 1 - buf[2 * n + 1],
                    };
                    buf.push(s);
                }
                Ok(())
            }),
        ),
    }
}

/// Bit-wise complement of t32 (the tau fixed point seeded with 1).
pub fn t32_bar() -> SymbolStream {
    block_fixed_point(t32_block_substitution(), 1)
}

/// Dekking's variant, prefix 0100101011011010101011011...
///
/// Either the fixed point of the 2-block rules 00,01 -> 010 and
/// 10,11 -> 101, or the image of t32 under 0 -> 010, 1 -> 101.
pub fn t_prime(via: TPrimeBackend) -> SymbolStream {
    match via {
        TPrimeBackend::Block => {
            let beta = BlockSubstitution::new(
                2,
                &[
                    (&[0, 0], &[0, 1, 0]),
                    (&[0, 1], &[0, 1, 0]),
                    (&[1, 0], &[1, 0, 1]),
                    (&[1, 1], &[1, 0, 1]),
                ],
            )
            .unwrap();
            block_fixed_point(beta, 0)
        }
        TPrimeBackend::Phi => {
            let phi = Morphism::new(&[(0, &[0, 1, 0]), (1, &[1, 0, 1])]).unwrap();
            morphism_image(phi, t32(T32Backend::Block))
        }
    }
}

/// Image of a stream under a morphism, materialized one source symbol at a
/// time. An erasing morphism may consume many source symbols per output
/// symbol; if 2^20 consecutive source symbols erase to nothing the image
/// is treated as stalled.
pub fn morphism_image(phi: Morphism, source: SymbolStream) -> SymbolStream {
    const ERASED_RUN_LIMIT: usize = 1 << 20;
    let size = phi.alphabet_size().max(source.alphabet_size());
    let mut src = source;
    let mut consumed = 0usize;
    let mut erased_run = 0usize;
    SymbolStream::new(
        size,
        Box::new(move |buf, target| {
            while buf.len() < target {
                let a = src.get(consumed)?;
                let image = phi.image(a)?;
                if image.is_empty() {
                    erased_run += 1;
                    if erased_run > ERASED_RUN_LIMIT {
                        return Err(Error::GenerationStalled { produced: buf.len() });
                    }
                } else {
                    erased_run = 0;
                    buf.extend_from_slice(image);
                }
                consumed += 1;
            }
            Ok(())
        }),
    )
}

/// First difference y[n] = x[n] + x[n+1] mod 2 of a binary stream.
pub fn delta(x: SymbolStream) -> Result<SymbolStream> {
    if x.alphabet_size() != 2 {
        return Err(Error::UnsupportedAlphabet { size: x.alphabet_size() });
    }
    let mut src = x;
    Ok(SymbolStream::new(
        2,
        Box::new(move |buf, target| {
            src.ensure(target + 1)?;
            let s = src.materialized();
            while buf.len() < target {
                let i = buf.len();
                buf.push((s[i] + s[i + 1]) % 2);
            }
            Ok(())
        }),
    ))
}

/// The antiderivative of a binary stream: x[0] = first and x[n+1] =
/// x[n] + y[n] mod 2, so that delta(x) = y.
pub fn integrate(y: SymbolStream, first: Symbol) -> Result<SymbolStream> {
    if y.alphabet_size() != 2 {
        return Err(Error::UnsupportedAlphabet { size: y.alphabet_size() });
    }
    if first > 1 {
        return Err(Error::InvalidParameter(format!("first symbol {first} not binary")));
    }
    let mut src = y;
    Ok(SymbolStream::new(
        2,
        Box::new(move |buf, target| {
            if buf.is_empty() && target > 0 {
                buf.push(first);
            }
            while buf.len() < target {
                let i = buf.len();
                let d = src.get(i - 1)?;
                buf.push((buf[i - 1] + d) % 2);
            }
            Ok(())
        }),
    ))
}

/// Symbol-wise complement of a finite binary word.
pub fn complement_word(w: &[Symbol]) -> Result<Vec<Symbol>> {
    if let Some(&a) = w.iter().find(|&&a| a > 1) {
        return Err(Error::UnsupportedAlphabet { size: a + 1 });
    }
    Ok(w.iter().map(|&a| 1 - a).collect())
}

/// Symbol-wise complement of a binary stream.
pub fn complement(x: SymbolStream) -> Result<SymbolStream> {
    if x.alphabet_size() != 2 {
        return Err(Error::UnsupportedAlphabet { size: x.alphabet_size() });
    }
    let mut src = x;
    Ok(SymbolStream::new(
        2,
        Box::new(move |buf, target| {
            src.ensure(target)?;
            let s = src.materialized();
            while buf.len() < target {
                buf.push(1 - s[buf.len()]);
            }
            Ok(())
        }),
    ))
}

/// Reversal of a finite word.
pub fn reverse(w: &[Symbol]) -> Vec<Symbol> {
    w.iter().rev().copied().collect()
}

/// Sliding 2-block code c[n] = 2 x[n] + x[n+1] of a binary stream, over
/// {0,1,2,3}.
pub fn slide2(x: SymbolStream) -> Result<SymbolStream> {
    if x.alphabet_size() != 2 {
        return Err(Error::UnsupportedAlphabet { size: x.alphabet_size() });
    }
    let mut src = x;
    Ok(SymbolStream::new(
        4,
        Box::new(move |buf, target| {
            src.ensure(target + 1)?;
            let s = src.materialized();
            while buf.len() < target {
                let i = buf.len();
                buf.push(2 * s[i] + s[i + 1]);
            }
            Ok(())
        }),
    ))
}

/// The eight 2-block rules satisfied by the sliding block code of t32.
pub fn slide2_block_substitution() -> BlockSubstitution {
    BlockSubstitution::new(
        2,
        &[
            (&[0, 0], &[0, 1, 2]),
            (&[0, 1], &[0, 1, 3]),
            (&[1, 2], &[0, 0, 0]),
            (&[1, 3], &[0, 0, 1]),
            (&[2, 0], &[3, 3, 2]),
            (&[2, 1], &[3, 3, 3]),
            (&[3, 2], &[3, 2, 0]),
            (&[3, 3], &[3, 2, 1]),
        ],
    )
    .unwrap()
}

/// Digit-sum word mod m: the fixed point (seed 0) of the 2-block
/// substitution ab -> a, a+2, b+1 taken mod m. Its n-th symbol is the
/// base-3/2 digit sum of n reduced mod m; m = 2 gives t32.
pub fn t32_mod(m: u8) -> Result<SymbolStream> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("modulus {m} must be >= 2")));
    }
    let mut rules: Vec<(Vec<Symbol>, Vec<Symbol>)> = Vec::new();
    for a in 0..m {
        for b in 0..m {
            rules.push((vec![a, b], vec![a, (a + 2) % m, (b + 1) % m]));
        }
    }
    let borrowed: Vec<(&[Symbol], &[Symbol])> =
        rules.iter().map(|(b, i)| (b.as_slice(), i.as_slice())).collect();
    let beta = BlockSubstitution::new(2, &borrowed)?;
    Ok(block_fixed_point(beta, 0))
}

/// The Kolakoski word 2211212212211..., seeded with 2.
pub fn kolakoski() -> SymbolStream {
    alternating_fixed_point(kolakoski_family(), 2)
}

/// The classical Thue-Morse word 0110100110010110... (digit-sum parity in
/// base 2).
pub fn thue_morse_base2() -> SymbolStream {
    let f = MorphismFamily::new(vec![Morphism::new(&[(0, &[0, 1]), (1, &[1, 0])]).unwrap()]).unwrap();
    alternating_fixed_point(f, 0)
}

/// Run-length encoding of a finite word: the lengths of its maximal runs,
/// including the final (possibly truncated) one.
pub fn run_lengths(w: &[Symbol]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut iter = w.iter();
    let Some(&first) = iter.next() else { return out };
    let mut current = first;
    let mut len = 1u64;
    for &a in iter {
        if a == current {
            len += 1;
        } else {
            out.push(len);
            current = a;
            len = 1;
        }
    }
    out.push(len);
    out
}

/// Names accepted by [`by_name`] (t32-mod additionally takes the modulus).
pub const CATALOG: &[&str] = &[
    "t32",
    "t32bar",
    "tprime",
    "delta-t32",
    "period-doubling-analogue",
    "kolakoski",
    "thue-morse-base2",
    "slide2-t32",
    "t32-mod",
];

/// Looks up a named stream; `m` is only consulted for `t32-mod`.
pub fn by_name(name: &str, m: Option<u8>) -> Result<SymbolStream> {
    match name {
        "t32" => Ok(t32(T32Backend::Block)),
        "t32bar" => Ok(t32_bar()),
        "tprime" | "t-prime" => Ok(t_prime(TPrimeBackend::Block)),
        // the first difference of t32 doubles as the period-doubling
        // analogue for base 3/2
        "delta-t32" | "period-doubling-analogue" => delta(t32(T32Backend::Block)),
        "kolakoski" => Ok(kolakoski()),
        "thue-morse-base2" | "tm2" => Ok(thue_morse_base2()),
        "slide2-t32" => slide2(t32(T32Backend::Block)),
        "t32-mod" => t32_mod(m.ok_or_else(|| {
            Error::InvalidParameter("t32-mod needs a modulus (--m)".into())
        })?),
        other => Err(Error::UnknownWord(other.to_string())),
    }
}

/// Oracle form of t32: digit-sum parity computed through the numeration
/// module, one index at a time.
pub fn t32_by_digit_sum(n: u64) -> Symbol {
    (sum_of_digits(n) % 2) as Symbol
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const T32_PREFIX: &str = "001110111110110111110000110110";
    const TPRIME_PREFIX: &str = "0100101011011010101011011";
    const DELTA_PREFIX: &str = "010011000011011000010001011010";
    const SLIDE2_PREFIX: &str = "013321333321321333320001321320";
    const MOD4_PREFIX: &str = "023310131130132311130200132130";

    #[test]
    fn t32_prefix_all_backends() {
        for via in [T32Backend::Dfao, T32Backend::Block, T32Backend::Relations] {
            let mut s = t32(via);
            assert_eq!(s.prefix_string(30).unwrap(), T32_PREFIX, "{via:?}");
        }
    }

    #[test]
    fn t32_backends_agree_on_long_prefix() {
        let n = 100_000;
        let mut a = t32(T32Backend::Dfao);
        let mut b = t32(T32Backend::Block);
        let mut c = t32(T32Backend::Relations);
        let pa = a.prefix(n).unwrap().to_vec();
        assert_eq!(pa, b.prefix(n).unwrap());
        assert_eq!(pa, c.prefix(n).unwrap());
    }

    #[test]
    fn t32_matches_digit_sums() {
        let mut s = t32(T32Backend::Block);
        for n in 0..=26 {
            assert_eq!(s.get(n as usize).unwrap(), t32_by_digit_sum(n));
        }
    }

    #[test]
    fn t32_relations_hold() {
        let mut s = t32(T32Backend::Relations);
        let p = s.prefix(3 * 100_000 + 3).unwrap().to_vec();
        for n in 0..100_000 {
            assert_eq!(p[3 * n], p[2 * n]);
            assert_eq!(p[3 * n + 1], p[2 * n]);
            assert_eq!(p[3 * n + 2], 1 - p[2 * n + 1]);
        }
    }

    #[test]
    fn tprime_prefix_both_backends() {
        for via in [TPrimeBackend::Block, TPrimeBackend::Phi] {
            let mut s = t_prime(via);
            assert_eq!(s.prefix_string(25).unwrap(), TPRIME_PREFIX, "{via:?}");
        }
    }

    #[test]
    fn tprime_backends_agree() {
        let n = 100_000;
        let mut a = t_prime(TPrimeBackend::Block);
        let mut b = t_prime(TPrimeBackend::Phi);
        assert_eq!(a.prefix(n).unwrap(), b.prefix(n).unwrap());
    }

    #[test]
    fn delta_prefix() {
        let mut d = delta(t32(T32Backend::Block)).unwrap();
        assert_eq!(d.prefix_string(30).unwrap(), DELTA_PREFIX);
    }

    #[test]
    fn delta_matches_alternating_family() {
        let mut d = delta(t32(T32Backend::Block)).unwrap();
        let mut alt = alternating_fixed_point(delta_t32_family(), 0);
        let n = 50_000;
        assert_eq!(d.prefix(n).unwrap(), alt.prefix(n).unwrap());
    }

    #[test]
    fn delta_of_constant_is_zero() {
        let mut d = delta(SymbolStream::from_fn(2, |_| 1)).unwrap();
        assert!(d.prefix(100).unwrap().iter().all(|&a| a == 0));
    }

    #[test]
    fn delta_rejects_wide_alphabets() {
        assert!(matches!(
            delta(SymbolStream::from_fn(3, |_| 0)),
            Err(Error::UnsupportedAlphabet { size: 3 })
        ));
    }

    #[test]
    fn delta_dfao_generates_delta_t32() {
        let dfao = delta_t32_dfao();
        let mut d = delta(t32(T32Backend::Block)).unwrap();
        for n in 0..10_000u64 {
            let got = dfao.eval(expand(n).digits()).unwrap();
            // oracle: difference of consecutive digit-sum parities
            let oracle = ((sum_of_digits(n) + sum_of_digits(n + 1)) % 2) as u8;
            assert_eq!(got, oracle, "n = {n}");
            assert_eq!(got, d.get(n as usize).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn delta_of_classical_thue_morse_is_complement_of_period_doubling() {
        // period doubling word: fixed point of 0 -> 01, 1 -> 00
        let pd_family = MorphismFamily::new(vec![
            Morphism::new(&[(0, &[0, 1]), (1, &[0, 0])]).unwrap(),
        ])
        .unwrap();
        let mut pd = alternating_fixed_point(pd_family, 0);
        let mut d = delta(thue_morse_base2()).unwrap();
        let n = 10_000;
        let dp = d.prefix(n).unwrap().to_vec();
        let pp = pd.prefix(n).unwrap();
        for i in 0..n {
            assert_eq!(dp[i], (1 + pp[i]) % 2);
        }
    }

    #[test]
    fn integrate_roundtrips() {
        let n = 1_000_000;
        let mut d = delta(t32(T32Backend::Block)).unwrap();
        let y = SymbolStream::from_word(2, d.prefix(n + 1).unwrap().to_vec());
        let mut x = integrate(y, 0).unwrap();
        let mut t = t32(T32Backend::Block);
        assert_eq!(x.prefix(n).unwrap(), t.prefix(n).unwrap());

        // integrating from the other first symbol gives the complement
        let mut d = delta(t32(T32Backend::Block)).unwrap();
        let y = SymbolStream::from_word(2, d.prefix(n + 1).unwrap().to_vec());
        let mut xbar = integrate(y, 1).unwrap();
        let mut bar = t32_bar();
        assert_eq!(xbar.prefix(n).unwrap(), bar.prefix(n).unwrap());

        let mut zeros = integrate(SymbolStream::from_fn(2, |_| 0), 0).unwrap();
        assert!(zeros.prefix(100).unwrap().iter().all(|&a| a == 0));

        assert!(integrate(SymbolStream::from_fn(2, |_| 0), 2).is_err());
    }

    #[test]
    fn erasing_morphisms_in_images() {
        // erasing one letter keeps the image going
        let phi = Morphism::new(&[(0, &[]), (1, &[1, 1])]).unwrap();
        let mut img = morphism_image(phi, t32(T32Backend::Block));
        assert!(img.prefix(1000).unwrap().iter().all(|&a| a == 1));

        // erasing every letter stalls instead of spinning
        let phi = Morphism::new(&[(0, &[]), (1, &[])]).unwrap();
        let mut img = morphism_image(phi, t32(T32Backend::Block));
        assert!(matches!(img.ensure(1), Err(Error::GenerationStalled { .. })));
    }

    #[test]
    fn complement_is_involutive_and_matches_seeded_fixed_point() {
        assert_eq!(complement_word(&[0, 0, 1]).unwrap(), vec![1, 1, 0]);
        assert!(complement_word(&[0, 2]).is_err());

        let mut c = complement(t32(T32Backend::Block)).unwrap();
        let mut bar = t32_bar();
        assert_eq!(c.prefix(20_000).unwrap(), bar.prefix(20_000).unwrap());

        let mut cc = complement(complement(t32(T32Backend::Block)).unwrap()).unwrap();
        let mut t = t32(T32Backend::Block);
        assert_eq!(cc.prefix(20_000).unwrap(), t.prefix(20_000).unwrap());
    }

    #[test]
    fn reverse_basics() {
        assert_eq!(reverse(&[]), Vec::<Symbol>::new());
        assert_eq!(reverse(&[0, 0, 1]), vec![1, 0, 0]);
    }

    #[test]
    fn slide2_prefix_and_substitution() {
        let mut c = slide2(t32(T32Backend::Block)).unwrap();
        assert_eq!(c.prefix_string(30).unwrap(), SLIDE2_PREFIX);

        let mut zeros = slide2(SymbolStream::from_fn(2, |_| 0)).unwrap();
        assert!(zeros.prefix(50).unwrap().iter().all(|&a| a == 0));

        // the sliding code is itself the fixed point of the eight 2-block rules
        let mut fixed = block_fixed_point(slide2_block_substitution(), 0);
        let n = 100_000;
        let mut c = slide2(t32(T32Backend::Block)).unwrap();
        assert_eq!(c.prefix(n).unwrap(), fixed.prefix(n).unwrap());
    }

    #[test]
    fn t32_mod_prefixes() {
        let mut w4 = t32_mod(4).unwrap();
        assert_eq!(w4.prefix_string(30).unwrap(), MOD4_PREFIX);

        let mut w2 = t32_mod(2).unwrap();
        assert_eq!(w2.prefix_string(30).unwrap(), T32_PREFIX);

        assert!(t32_mod(1).is_err());
    }

    #[test]
    fn t32_mod_matches_digit_sums() {
        for m in 2..=5u8 {
            let mut w = t32_mod(m).unwrap();
            let p = w.prefix(10_000).unwrap();
            for n in 0..10_000u64 {
                assert_eq!(p[n as usize], (sum_of_digits(n) % m as u64) as u8, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn kolakoski_equals_its_run_lengths() {
        let mut k = kolakoski();
        let p = k.prefix(100_000).unwrap().to_vec();
        let mut rl = run_lengths(&p);
        rl.pop(); // last run may be cut off by the prefix boundary
        assert!(rl.len() > 60_000);
        for (i, &len) in rl.iter().enumerate() {
            assert_eq!(len, p[i] as u64, "run {i}");
        }
    }

    #[test]
    fn catalog_names_resolve() {
        for name in CATALOG {
            let m = (*name == "t32-mod").then_some(3);
            let mut s = by_name(name, m).unwrap();
            assert!(s.prefix(100).is_ok(), "{name}");
        }
        assert!(matches!(by_name("nope", None), Err(Error::UnknownWord(_))));
        assert!(by_name("t32-mod", None).is_err());
    }

    proptest! {
        #[test]
        fn delta_then_integrate_is_identity(word in proptest::collection::vec(0u8..2, 2..200)) {
            let first = word[0];
            let src = SymbolStream::from_word(2, word.clone());
            let mut d = delta(src).unwrap();
            let n = word.len() - 1;
            let dw = d.prefix(n).unwrap().to_vec();
            let mut x = integrate(SymbolStream::from_word(2, dw), first).unwrap();
            prop_assert_eq!(x.prefix(word.len()).unwrap(), &word[..]);
        }

        #[test]
        fn reverse_antidistributes_over_concat(
            u in proptest::collection::vec(0u8..4, 0..30),
            v in proptest::collection::vec(0u8..4, 0..30),
        ) {
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let mut rv = reverse(&v);
            rv.extend_from_slice(&reverse(&u));
            prop_assert_eq!(reverse(&uv), rv);
        }
    }
}
