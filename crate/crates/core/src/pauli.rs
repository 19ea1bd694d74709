//! Signed n-qubit Pauli words with exact phase tracking.
//!
//! A word is a phase from the unit group `{+1, +i, -1, -i}` times a tensor
//! product of single-qubit letters. Qubit 0 is the leftmost letter.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("product of an empty list of words")]
    EmptyProduct,
    #[error("cannot parse Pauli word {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("duplicate qubit tag {0:?}")]
    DuplicateTag(String),
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// Product of two letters as `(i^k, letter)`, with `k` returned as the
    /// phase exponent.
    pub fn times(self, rhs: Letter) -> (Phase, Letter) {
        use Letter::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
        }
    }

    pub fn is_identity(self) -> bool {
        self == Letter::I
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Element of the cyclic group `{+1, +i, -1, -i}`, stored as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `Some(+1)` or `Some(-1)` for real phases.
    pub fn sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn from_sign(sign: i8) -> Phase {
        if sign < 0 {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        }
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        use num_complex::Complex64;
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Signed tensor product of single-qubit Pauli letters.
///
/// Words are immutable values; every operation returns a new word. Equality
/// compares letters and phase, which is the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    letters: Vec<Letter>,
    phase: Phase,
}

impl PauliWord {
    pub fn new(letters: Vec<Letter>, phase: Phase) -> PauliWord {
        assert!(!letters.is_empty(), "a Pauli word needs at least one qubit");
        PauliWord { letters, phase }
    }

    pub fn identity(n: usize) -> PauliWord {
        PauliWord::new(vec![Letter::I; n], Phase::ONE)
    }

    /// `letter` on qubit `index`, identity elsewhere.
    pub fn single(n: usize, index: usize, letter: Letter) -> PauliWord {
        let mut letters = vec![Letter::I; n];
        letters[index] = letter;
        PauliWord::new(letters, Phase::ONE)
    }

    /// Builds a word from `(qubit, letter)` pairs. Later entries on the same
    /// qubit overwrite earlier ones.
    pub fn from_sparse(n: usize, entries: &[(usize, Letter)]) -> PauliWord {
        let mut letters = vec![Letter::I; n];
        for &(q, l) in entries {
            letters[q] = l;
        }
        PauliWord::new(letters, Phase::ONE)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        self.letters[qubit]
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(&self, phase: Phase) -> PauliWord {
        PauliWord { letters: self.letters.clone(), phase }
    }

    /// Same letters, phase `+1`.
    pub fn unsigned(&self) -> PauliWord {
        self.with_phase(Phase::ONE)
    }

    pub fn negated(&self) -> PauliWord {
        self.with_phase(self.phase * Phase::MINUS_ONE)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.letters.iter().all(|l| l.is_identity())
    }

    /// `Some(±1)` when the word is `±I`.
    pub fn identity_sign(&self) -> Option<i8> {
        if self.is_identity_letters() {
            self.phase.sign()
        } else {
            None
        }
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_identity()).count()
    }

    /// Qubit indices carrying a non-identity letter.
    pub fn support(&self) -> BTreeSet<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_identity())
            .map(|(i, _)| i)
            .collect()
    }

    fn check_dims(&self, other: &PauliWord) -> Result<(), PauliError> {
        if self.n() != other.n() {
            return Err(PauliError::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    pub fn multiply(&self, rhs: &PauliWord) -> Result<PauliWord, PauliError> {
        self.check_dims(rhs)?;
        let mut phase = self.phase * rhs.phase;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(&a, &b)| {
                let (p, l) = a.times(b);
                phase = phase * p;
                l
            })
            .collect();
        Ok(PauliWord { letters, phase })
    }

    /// True iff the number of positions where both letters are non-identity
    /// and different is even.
    pub fn commutes(&self, rhs: &PauliWord) -> Result<bool, PauliError> {
        self.check_dims(rhs)?;
        Ok(self.anticommuting_positions(rhs).is_multiple_of(2))
    }

    fn anticommuting_positions(&self, rhs: &PauliWord) -> usize {
        self.letters
            .iter()
            .zip(&rhs.letters)
            .filter(|(a, b)| !a.is_identity() && !b.is_identity() && a != b)
            .count()
    }

    /// Bit mask of qubits carrying X or Y, with qubit 0 as the most
    /// significant of `n` bits. This is the bit-flip pattern the word
    /// applies to a computational basis index.
    pub fn flip_mask(&self) -> usize {
        let n = self.n();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, Letter::X | Letter::Y))
            .fold(0, |m, (q, _)| m | 1 << (n - 1 - q))
    }

    pub fn to_plain_string(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }
}

/// Left-to-right product of `words`.
pub fn product_of<'a, I>(words: I) -> Result<PauliWord, PauliError>
where
    I: IntoIterator<Item = &'a PauliWord>,
{
    let mut iter = words.into_iter();
    let first = iter.next().ok_or(PauliError::EmptyProduct)?.clone();
    iter.try_fold(first, |acc, w| acc.multiply(w))
}

pub fn multiply(a: &PauliWord, b: &PauliWord) -> Result<PauliWord, PauliError> {
    a.multiply(b)
}

pub fn commutes(a: &PauliWord, b: &PauliWord) -> Result<bool, PauliError> {
    a.commutes(b)
}

/// First pair of indices `(i, j)`, `i < j`, whose words do not commute.
pub fn first_noncommuting_pair(words: &[PauliWord]) -> Result<Option<(usize, usize)>, PauliError> {
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if !words[i].commutes(&words[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.to_plain_string())
    }
}

impl FromStr for PauliWord {
    type Err = PauliError;

    /// Optional `+`/`-` sign, optional `i`, then letters from `IXYZ`.
    fn from_str(s: &str) -> Result<PauliWord, PauliError> {
        let err = |reason: &str| PauliError::Parse { text: s.to_string(), reason: reason.to_string() };
        let trimmed = s.trim();
        let (mut phase, rest) = match trimmed.as_bytes().first() {
            Some(b'+') => (Phase::ONE, &trimmed[1..]),
            Some(b'-') => (Phase::MINUS_ONE, &trimmed[1..]),
            _ => (Phase::ONE, trimmed),
        };
        let rest = match rest.strip_prefix('i') {
            Some(r) => {
                phase = phase * Phase::I;
                r
            }
            None => rest,
        };
        if rest.is_empty() {
            return Err(err("no letters"));
        }
        let letters = rest
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| err(&format!("unexpected character {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PauliWord { letters, phase })
    }
}

impl Serialize for PauliWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<PauliWord, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Maps a 0-based qubit slot to a free-form tag such as `o`, `s` or `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLabel {
    pub index: usize,
    pub tag: String,
}

/// Ordered qubit tags for one model; tags are unique.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QubitLabels(Vec<QubitLabel>);

impl QubitLabels {
    pub fn new<S: AsRef<str>>(tags: &[S]) -> Result<QubitLabels, PauliError> {
        let mut seen = BTreeSet::new();
        let mut labels = Vec::with_capacity(tags.len());
        for (index, tag) in tags.iter().enumerate() {
            let tag = tag.as_ref().to_string();
            if !seen.insert(tag.clone()) {
                return Err(PauliError::DuplicateTag(tag));
            }
            labels.push(QubitLabel { index, tag });
        }
        Ok(QubitLabels(labels))
    }

    /// Tags `0..n` as decimal strings.
    pub fn numbered(n: usize) -> QubitLabels {
        QubitLabels((0..n).map(|index| QubitLabel { index, tag: index.to_string() }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|l| l.tag.as_str())
    }

    pub fn tag(&self, index: usize) -> Option<&str> {
        self.0.get(index).map(|l| l.tag.as_str())
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.0.iter().find(|l| l.tag == tag).map(|l| l.index)
    }

    /// Human-readable rendering such as `-X^oY^sY^p`; identity renders as `I`.
    pub fn describe(&self, word: &PauliWord) -> String {
        let mut out = match word.phase().exponent() {
            0 => String::new(),
            1 => "i".to_string(),
            2 => "-".to_string(),
            _ => "-i".to_string(),
        };
        let mut any = false;
        for (q, l) in word.letters().iter().enumerate() {
            if l.is_identity() {
                continue;
            }
            any = true;
            match self.tag(q) {
                Some(tag) => out.push_str(&format!("{l}^{tag}")),
                None => out.push_str(&format!("{l}_{q}")),
            }
        }
        if !any {
            out.push('I');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_table() {
        assert_eq!(w("X").multiply(&w("X")).unwrap(), w("I"));
        assert_eq!(w("X").multiply(&w("Y")).unwrap(), w("+iZ"));
        assert_eq!(w("Y").multiply(&w("X")).unwrap(), w("-iZ"));
        assert_eq!(w("Y").multiply(&w("Z")).unwrap(), w("+iX"));
        assert_eq!(w("Z").multiply(&w("X")).unwrap(), w("+iY"));
        assert_eq!(w("X").multiply(&w("Z")).unwrap(), w("-iY"));
    }

    #[test]
    fn red_line_product_is_minus_identity() {
        let words = [w("XYY"), w("YXY"), w("YYX"), w("XXX")];
        assert_eq!(product_of(&words).unwrap(), w("-III"));
    }

    #[test]
    fn disjoint_supports_multiply_letterwise() {
        assert_eq!(w("XII").multiply(&w("IYY")).unwrap(), w("XYY"));
    }

    #[test]
    fn commutation_examples() {
        assert!(!w("X").commutes(&w("Y")).unwrap());
        assert!(w("XYY").commutes(&w("YXY")).unwrap());
        assert!(w("XII").commutes(&w("IYY")).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            w("XX").multiply(&w("XXX")),
            Err(PauliError::DimensionMismatch { left: 2, right: 3 })
        );
        assert!(w("X").commutes(&w("XX")).is_err());
    }

    #[test]
    fn products_of_lists() {
        assert_eq!(product_of(&[w("XYY")]).unwrap(), w("XYY"));
        assert_eq!(product_of(&[w("IYY"), w("YIY"), w("YYI")]).unwrap(), w("III"));
        assert_eq!(product_of(&[w("XII"), w("IXI"), w("IIX"), w("XXX")]).unwrap(), w("III"));
        assert_eq!(product_of(std::iter::empty()), Err(PauliError::EmptyProduct));
    }

    #[test]
    fn supports() {
        assert!(w("III").support().is_empty());
        assert_eq!(w("YYI").support(), BTreeSet::from([0, 1]));
        assert_eq!(w("XYY").support(), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("-XYY").to_string(), "-XYY");
        assert_eq!(w("+XYY").to_string(), "XYY");
        assert_eq!(w("-iZ").phase(), Phase::MINUS_I);
        assert!("".parse::<PauliWord>().is_err());
        assert!("-".parse::<PauliWord>().is_err());
        assert!("XQ".parse::<PauliWord>().is_err());
    }

    #[test]
    fn flip_mask_uses_leftmost_as_msb() {
        assert_eq!(w("XII").flip_mask(), 0b100);
        assert_eq!(w("IZY").flip_mask(), 0b001);
    }

    #[test]
    fn labels() {
        let labels = QubitLabels::new(&["o", "s", "p"]).unwrap();
        assert_eq!(labels.describe(&w("-XYY")), "-X^oY^sY^p");
        assert_eq!(labels.describe(&w("III")), "I");
        assert_eq!(labels.index_of("p"), Some(2));
        assert!(QubitLabels::new(&["a", "a"]).is_err());
    }
}
