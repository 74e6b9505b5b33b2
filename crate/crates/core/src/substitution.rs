//! Morphisms, periodically iterated morphism families, r-block
//! substitutions, DFAOs, and lazily materialized symbol streams.
//!
//! Symbols are small integers; words print as digit characters. Fixed
//! points are grown incrementally: the known prefix is mapped through the
//! rules and appended, and every symbol demanded before it is produced must
//! match once produced. A stalled or contradictory generation surfaces as
//! an error instead of looping.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub type Symbol = u8;

pub fn word_to_string(word: &[Symbol]) -> String {
    let mut s = String::with_capacity(word.len());
    for &a in word {
        let _ = write!(s, "{a}");
    }
    s
}

pub fn word_from_str(s: &str) -> Result<Vec<Symbol>> {
    s.chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as Symbol)
                .ok_or_else(|| Error::Parse(format!("bad symbol char {c:?}")))
        })
        .collect()
}

/// A morphism: one image word per symbol of the alphabet {0, ..., size-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Vec<Symbol>>,
}

impl Morphism {
    /// Builds a morphism from (symbol, image) pairs. The alphabet is
    /// 0..=max symbol mentioned; every symbol needs exactly one image and
    /// images may only use alphabet symbols.
    pub fn new(rules: &[(Symbol, &[Symbol])]) -> Result<Self> {
        let size = rules
            .iter()
            .flat_map(|(a, img)| std::iter::once(*a).chain(img.iter().copied()))
            .max()
            .map_or(0, |m| m as usize + 1);
        let mut images: Vec<Option<Vec<Symbol>>> = vec![None; size];
        for (a, img) in rules {
            let slot = &mut images[*a as usize];
            if slot.is_some() {
                return Err(Error::Parse(format!("duplicate rule for symbol {a}")));
            }
            *slot = Some(img.to_vec());
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(a, img)| img.ok_or(Error::InvalidDigit { digit: a as u8, max: (size - 1) as u8 }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism { images })
    }

    pub fn alphabet_size(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn image(&self, a: Symbol) -> Result<&[Symbol]> {
        self.images
            .get(a as usize)
            .map(|v| v.as_slice())
            .ok_or(Error::InvalidDigit { digit: a, max: self.alphabet_size().saturating_sub(1) })
    }

    /// Image of a finite word.
    pub fn apply(&self, word: &[Symbol]) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &a in word {
            out.extend_from_slice(self.image(a)?);
        }
        Ok(out)
    }
}

/// An ordered tuple (f_0, ..., f_{r-1}) of morphisms over one alphabet,
/// applied periodically: position i of the generated word is mapped by
/// f_{i mod r}.
#[derive(Debug, Clone)]
pub struct MorphismFamily {
    members: Vec<Morphism>,
}

impl MorphismFamily {
    pub fn new(members: Vec<Morphism>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("family needs at least one morphism".into()));
        }
        let size = members[0].alphabet_size();
        if members.iter().any(|m| m.alphabet_size() != size) {
            return Err(Error::InvalidParameter("family members use different alphabets".into()));
        }
        Ok(MorphismFamily { members })
    }

    pub fn period(&self) -> usize {
        self.members.len()
    }

    pub fn member(&self, i: usize) -> &Morphism {
        &self.members[i % self.members.len()]
    }

    pub fn alphabet_size(&self) -> u8 {
        self.members[0].alphabet_size()
    }
}

/// An r-block substitution: a map from length-r blocks to words. The map
/// may be partial; generation fails with `MissingRule` if the fixed point
/// ever needs an absent block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSubstitution {
    block_len: usize,
    rules: BTreeMap<Vec<Symbol>, Vec<Symbol>>,
    alphabet_size: u8,
}

impl BlockSubstitution {
    pub fn new(block_len: usize, rules: &[(&[Symbol], &[Symbol])]) -> Result<Self> {
        if block_len == 0 {
            return Err(Error::InvalidParameter("block length must be >= 1".into()));
        }
        let mut map = BTreeMap::new();
        let mut alphabet_size = 0u8;
        for (block, image) in rules {
            if block.len() != block_len {
                return Err(Error::InvalidParameter(format!(
                    "block {} has length {}, expected {block_len}",
                    word_to_string(block),
                    block.len()
                )));
            }
            for &a in block.iter().chain(image.iter()) {
                alphabet_size = alphabet_size.max(a + 1);
            }
            if map.insert(block.to_vec(), image.to_vec()).is_some() {
                return Err(Error::Parse(format!("duplicate rule for block {}", word_to_string(block))));
            }
        }
        Ok(BlockSubstitution { block_len, rules: map, alphabet_size })
    }

    /// Parses the one-rule-per-line text format `block -> image`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules: Vec<(Vec<Symbol>, Vec<Symbol>)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("rule line without '->': {line:?}")))?;
            rules.push((word_from_str(lhs.trim())?, word_from_str(rhs.trim())?));
        }
        if rules.is_empty() {
            return Err(Error::Parse("no rules found".into()));
        }
        let block_len = rules[0].0.len();
        let borrowed: Vec<(&[Symbol], &[Symbol])> = rules
            .iter()
            .map(|(b, i)| (b.as_slice(), i.as_slice()))
            .collect();
        BlockSubstitution::new(block_len, &borrowed)
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn image(&self, block: &[Symbol]) -> Option<&[Symbol]> {
        self.rules.get(block).map(|v| v.as_slice())
    }

    pub fn rules(&self) -> impl Iterator<Item = (&[Symbol], &[Symbol])> {
        self.rules.iter().map(|(b, i)| (b.as_slice(), i.as_slice()))
    }

    /// Applies the substitution to a finite word, block by block; a trailing
    /// partial block is dropped.
    pub fn apply(&self, word: &[Symbol]) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for block in word.chunks_exact(self.block_len) {
            let image = self
                .image(block)
                .ok_or_else(|| Error::MissingRule { block: word_to_string(block) })?;
            out.extend_from_slice(image);
        }
        Ok(out)
    }
}

/// The r-block substitution w_0...w_{r-1} -> f_0(w_0) f_1(w_1) ... f_{r-1}(w_{r-1})
/// induced by a morphism family; its fixed points coincide with the
/// family's alternating fixed points.
pub fn to_block_substitution(fam: &MorphismFamily) -> BlockSubstitution {
    let r = fam.period();
    let size = fam.alphabet_size();
    let mut rules: Vec<(Vec<Symbol>, Vec<Symbol>)> = Vec::new();
    let mut block = vec![0u8; r];
    loop {
        let mut image = Vec::new();
        for (i, &a) in block.iter().enumerate() {
            image.extend_from_slice(fam.member(i).image(a).expect("alphabet checked"));
        }
        rules.push((block.clone(), image));
        // next block in lexicographic order
        let mut pos = r;
        loop {
            if pos == 0 {
                let borrowed: Vec<(&[Symbol], &[Symbol])> =
                    rules.iter().map(|(b, i)| (b.as_slice(), i.as_slice())).collect();
                return BlockSubstitution::new(r, &borrowed).expect("generated rules are valid");
            }
            pos -= 1;
            block[pos] += 1;
            if block[pos] < size {
                break;
            }
            block[pos] = 0;
        }
    }
}

/// A deterministic finite automaton with output: fed a digit string, it
/// emits the symbol attached to the reached state.
#[derive(Debug, Clone)]
pub struct Dfao {
    /// transitions[state][digit]
    transitions: Vec<Vec<usize>>,
    initial: usize,
    output: Vec<Symbol>,
    digit_alphabet: u8,
}

impl Dfao {
    pub fn new(
        transitions: Vec<Vec<usize>>,
        initial: usize,
        output: Vec<Symbol>,
        digit_alphabet: u8,
    ) -> Result<Self> {
        let n = transitions.len();
        if output.len() != n || initial >= n {
            return Err(Error::InvalidParameter("inconsistent DFAO tables".into()));
        }
        for row in &transitions {
            if row.len() != digit_alphabet as usize || row.iter().any(|&s| s >= n) {
                return Err(Error::InvalidParameter("transition table not total".into()));
            }
        }
        Ok(Dfao { transitions, initial, output, digit_alphabet })
    }

    /// Runs the automaton on digits read left to right and returns the
    /// output of the reached state.
    pub fn eval(&self, digits: &[u8]) -> Result<Symbol> {
        let mut state = self.initial;
        for &d in digits {
            if d >= self.digit_alphabet {
                return Err(Error::InvalidDigit { digit: d, max: self.digit_alphabet - 1 });
            }
            state = self.transitions[state][d as usize];
        }
        Ok(self.output[state])
    }
}

/// Output of `dfao` on a digit string.
pub fn dfao_eval(dfao: &Dfao, input: &crate::numeration::DigitString) -> Result<Symbol> {
    dfao.eval(input.digits())
}

/// A lazily extended infinite word.
///
/// Reading an index materializes the prefix up to it; the buffer only
/// grows, so a position always re-reads to the same symbol. Growth takes
/// `&mut self` while reads of the already materialized prefix borrow
/// shared, which serializes the single grower against any readers.
pub struct SymbolStream {
    buf: Vec<Symbol>,
    alphabet_size: u8,
    grower: Grower,
}

/// Extends the buffer to at least the requested length, or reports why the
/// word cannot be continued.
pub type Grower = Box<dyn FnMut(&mut Vec<Symbol>, usize) -> Result<()> + Send>;

impl SymbolStream {
    pub fn new(alphabet_size: u8, grower: Grower) -> Self {
        SymbolStream { buf: Vec::new(), alphabet_size, grower }
    }

    /// Stream whose n-th symbol is `f(n)`.
    pub fn from_fn(alphabet_size: u8, mut f: impl FnMut(usize) -> Symbol + Send + 'static) -> Self {
        SymbolStream::new(
            alphabet_size,
            Box::new(move |buf, target| {
                while buf.len() < target {
                    buf.push(f(buf.len()));
                }
                Ok(())
            }),
        )
    }

    /// Eventually-failing stream backed by a finite word (handy in tests).
    pub fn from_word(alphabet_size: u8, word: Vec<Symbol>) -> Self {
        SymbolStream::new(
            alphabet_size,
            Box::new(move |buf, target| {
                while buf.len() < target {
                    match word.get(buf.len()) {
                        Some(&a) => buf.push(a),
                        None => return Err(Error::GenerationStalled { produced: buf.len() }),
                    }
                }
                Ok(())
            }),
        )
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    /// Materializes at least `n` symbols.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if self.buf.len() < n {
            (self.grower)(&mut self.buf, n)?;
            debug_assert!(self.buf.len() >= n);
        }
        Ok(())
    }

    pub fn prefix(&mut self, n: usize) -> Result<&[Symbol]> {
        self.ensure(n)?;
        Ok(&self.buf[..n])
    }

    pub fn get(&mut self, i: usize) -> Result<Symbol> {
        self.ensure(i + 1)?;
        Ok(self.buf[i])
    }

    /// The prefix materialized so far, without growing.
    pub fn materialized(&self) -> &[Symbol] {
        &self.buf
    }

    pub fn prefix_string(&mut self, n: usize) -> Result<String> {
        Ok(word_to_string(self.prefix(n)?))
    }
}

impl std::fmt::Debug for SymbolStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolStream")
            .field("alphabet_size", &self.alphabet_size)
            .field("materialized", &self.buf.len())
            .finish()
    }
}

struct AlternatingState {
    fam: MorphismFamily,
    seed: Symbol,
    consumed: usize,
}

impl AlternatingState {
    fn grow(&mut self, buf: &mut Vec<Symbol>, target: usize) -> Result<()> {
        while buf.len() < target {
            let a = if self.consumed == 0 {
                self.seed
            } else if self.consumed < buf.len() {
                buf[self.consumed]
            } else {
                return Err(Error::GenerationStalled { produced: buf.len() });
            };
            let image = self.fam.member(self.consumed).image(a)?;
            buf.extend_from_slice(image);
            if self.consumed == 0 {
                match buf.first() {
                    Some(&first) if first != self.seed => {
                        return Err(Error::Inconsistent {
                            position: 0,
                            produced: first,
                            demanded: self.seed,
                        })
                    }
                    None => return Err(Error::GenerationStalled { produced: 0 }),
                    _ => {}
                }
            }
            self.consumed += 1;
        }
        Ok(())
    }
}

/// The alternating fixed point x = f_0(x_0) f_1(x_1) ... f_{i mod r}(x_i) ...
/// starting with `seed`.
///
/// Symbols are consumed in order and each image is appended; the first
/// appended symbol must reproduce the seed. Generation fails if the prefix
/// stops growing before the next symbol to consume exists.
pub fn alternating_fixed_point(fam: MorphismFamily, seed: Symbol) -> SymbolStream {
    let size = fam.alphabet_size();
    let mut state = AlternatingState { fam, seed, consumed: 0 };
    SymbolStream::new(size, Box::new(move |buf, target| state.grow(buf, target)))
}

struct BlockState {
    beta: BlockSubstitution,
    consumed_blocks: usize,
    /// Symbols fixed at positions not yet produced: the seed at position 0
    /// initially, later any speculation the images have not yet covered.
    demanded: BTreeMap<usize, Symbol>,
}

impl BlockState {
    fn fixed_at(&self, buf: &[Symbol], i: usize) -> Option<Symbol> {
        if i < buf.len() {
            Some(buf[i])
        } else {
            self.demanded.get(&i).copied()
        }
    }

    /// Consumes one block. Unknown positions inside the block are resolved
    /// by speculation: a candidate block survives only if it has a rule and
    /// its image, written at the current end of the word, agrees with every
    /// position already fixed (including those the candidate itself fixes).
    /// No surviving candidate means the demanded symbols admit no fixed
    /// point; more than one means a single block of lookahead cannot decide
    /// and we refuse to guess.
    fn step(&mut self, buf: &mut Vec<Symbol>) -> Result<()> {
        let r = self.beta.block_len();
        let start = self.consumed_blocks * r;
        if start >= buf.len() + r {
            // a whole unknown block lies between production and consumption
            return Err(Error::GenerationStalled { produced: buf.len() });
        }

        let mut survivor: Option<(Vec<Symbol>, Vec<Symbol>)> = None;
        let mut saw_rule = false;
        let mut block = vec![0u8; r];
        'cand: loop {
            let matches_known = block
                .iter()
                .enumerate()
                .all(|(off, &b)| self.fixed_at(buf, start + off).is_none_or(|f| f == b));
            if matches_known {
                if let Some(image) = self.beta.image(&block) {
                    saw_rule = true;
                    let consistent = image.iter().enumerate().all(|(off, &a)| {
                        let i = buf.len() + off;
                        let fixed = self.fixed_at(buf, i).or_else(|| {
                            (start..start + r).contains(&i).then(|| block[i - start])
                        });
                        fixed.is_none_or(|f| f == a)
                    });
                    if consistent {
                        if survivor.is_some() {
                            return Err(Error::Ambiguous { block: self.consumed_blocks });
                        }
                        survivor = Some((block.clone(), image.to_vec()));
                    }
                }
            }
            // next candidate block in lexicographic order
            let mut pos = r;
            loop {
                if pos == 0 {
                    break 'cand;
                }
                pos -= 1;
                block[pos] += 1;
                if block[pos] < self.beta.alphabet_size() {
                    break;
                }
                block[pos] = 0;
            }
        }

        let Some((block, image)) = survivor else {
            let shown: String = (0..r)
                .map(|off| match self.fixed_at(buf, start + off) {
                    Some(a) => char::from(b'0' + a),
                    None => '?',
                })
                .collect();
            return if saw_rule {
                let demanded = self.fixed_at(buf, start).unwrap_or(0);
                Err(Error::Inconsistent { position: start, produced: demanded, demanded })
            } else {
                Err(Error::MissingRule { block: shown })
            };
        };

        // record what the block fixes beyond the produced prefix, then append
        // the image, consuming demands as they are produced
        for (off, &b) in block.iter().enumerate() {
            let i = start + off;
            if i >= buf.len() {
                self.demanded.insert(i, b);
            }
        }
        for &a in &image {
            let i = buf.len();
            if let Some(d) = self.demanded.remove(&i) {
                if d != a {
                    return Err(Error::Inconsistent { position: i, produced: a, demanded: d });
                }
            }
            buf.push(a);
        }
        self.consumed_blocks += 1;
        Ok(())
    }
}

/// The fixed point x = beta(x_0...x_{r-1}) beta(x_r...x_{2r-1}) ... with
/// x_0 = seed.
pub fn block_fixed_point(beta: BlockSubstitution, seed: Symbol) -> SymbolStream {
    let size = beta.alphabet_size();
    let mut state = BlockState {
        beta,
        consumed_blocks: 0,
        demanded: BTreeMap::from([(0, seed)]),
    };
    SymbolStream::new(
        size,
        Box::new(move |buf, target| {
            while buf.len() < target {
                state.step(buf)?;
            }
            Ok(())
        }),
    )
}
