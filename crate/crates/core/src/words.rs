//! Operator words, their Motzkin levels, the bijection with non-crossing
//! partitions, and card arrangements.
//!
//! A word `z_n ⋯ z_2 z_1` is stored and written with **`z₁` first**: the
//! string `"CMCKAA"` means `z₁ = C`, `z₂ = M`, …, `z₆ = A`, i.e. the operator
//! product `(√λ a)(√λ a)(λ k_s)(√λ a†)(m_t)(√λ a†)` applied to the vacuum
//! from the right.
//!
//! | char | letter | operator   |
//! |------|--------|------------|
//! | `C`  | [`Letter::Cre`] | `√λ a†` |
//! | `A`  | [`Letter::Ann`] | `√λ a`  |
//! | `M`  | [`Letter::Mid`] | `m_t`   |
//! | `K`  | [`Letter::Sca`] | `λ k_s` |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::partitions::{NCPartition, SetPartition};
use crate::poly::{Monomial, MultiPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word {0} is not admissible")]
    NotAdmissible(String),
    #[error("unknown letter {0:?} (expected one of C, A, M, K)")]
    UnknownLetter(char),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Creation `√λ a†`.
    Cre,
    /// Annihilation `√λ a`.
    Ann,
    /// Intermediate `m_t`.
    Mid,
    /// Scalar `λ k_s`.
    Sca,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Cre, Letter::Ann, Letter::Mid, Letter::Sca];

    pub fn as_char(self) -> char {
        match self {
            Letter::Cre => 'C',
            Letter::Ann => 'A',
            Letter::Mid => 'M',
            Letter::Sca => 'K',
        }
    }

    /// Level step `χ`.
    pub fn step(self) -> i64 {
        match self {
            Letter::Cre => 1,
            Letter::Ann => -1,
            Letter::Mid | Letter::Sca => 0,
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = WordError;
    fn try_from(c: char) -> Result<Self, WordError> {
        match c.to_ascii_uppercase() {
            'C' => Ok(Letter::Cre),
            'A' => Ok(Letter::Ann),
            'M' => Ok(Letter::Mid),
            'K' => Ok(Letter::Sca),
            _ => Err(WordError::UnknownLetter(c)),
        }
    }
}

/// Letters `z₁, z₂, …, z_n`, rightmost operator factor first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorWord(Vec<Letter>);

impl OperatorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ℓ(1) = 0`, `ℓ(k) = Σ_{j<k} χ(j)`. Entries may go negative for
    /// non-admissible words.
    pub fn levels(&self) -> Vec<i64> {
        self.0
            .iter()
            .scan(0i64, |level, l| {
                let here = *level;
                *level += l.step();
                Some(here)
            })
            .collect()
    }

    /// Nonzero vacuum expectation: the level path stays nonnegative and ends
    /// at 0, and no `m_t` or `a` acts on the vacuum.
    pub fn is_admissible(&self) -> bool {
        let levels = self.levels();
        let total: i64 = self.0.iter().map(|l| l.step()).sum();
        total == 0
            && self.0.iter().zip(&levels).all(|(l, &lv)| match l {
                Letter::Mid | Letter::Ann => lv >= 1,
                Letter::Cre | Letter::Sca => lv >= 0,
            })
    }

    fn require_admissible(&self) -> Result<(), WordError> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(WordError::NotAdmissible(self.to_string()))
        }
    }

    /// `π(y)`: `K` positions are singletons, matched `C…A` pairs open and
    /// close a block, and an `M` joins the innermost open block.
    pub fn to_partition(&self) -> Result<NCPartition, WordError> {
        self.require_admissible()?;
        let mut labels = vec![0usize; self.len()];
        let mut open: Vec<usize> = Vec::new();
        let mut next = 0;
        for (k, l) in self.0.iter().enumerate() {
            let label = match l {
                Letter::Sca => {
                    next += 1;
                    next - 1
                }
                Letter::Cre => {
                    open.push(next);
                    next += 1;
                    next - 1
                }
                Letter::Mid => *open.last().expect("admissible"),
                Letter::Ann => open.pop().expect("admissible"),
            };
            labels[k] = label;
        }
        Ok(NCPartition::new(SetPartition::from_labels(&labels)).expect("parenthesized words are non-crossing"))
    }

    /// `y(π)`: singleton ↦ `K`, block minimum ↦ `C`, block maximum ↦ `A`,
    /// anything else ↦ `M`.
    pub fn from_partition(p: &NCPartition) -> Self {
        let mut letters = vec![Letter::Sca; p.n()];
        for b in p.blocks() {
            if b.len() == 1 {
                continue;
            }
            letters[b[0] - 1] = Letter::Cre;
            letters[b[b.len() - 1] - 1] = Letter::Ann;
            for &x in &b[1..b.len() - 1] {
                letters[x - 1] = Letter::Mid;
            }
        }
        Self(letters)
    }

    /// All words of length `n` over the four letters that are admissible,
    /// in lexicographic order of the letter sequence `C < A < M < K`.
    pub fn admissible_words(n: usize) -> Vec<OperatorWord> {
        fn rec(n: usize, level: i64, cur: &mut Vec<Letter>, out: &mut Vec<OperatorWord>) {
            let remaining = (n - cur.len()) as i64;
            if remaining == 0 {
                if level == 0 {
                    out.push(OperatorWord(cur.clone()));
                }
                return;
            }
            if level > remaining {
                return;
            }
            for l in Letter::ALL {
                let ok = match l {
                    Letter::Mid | Letter::Ann => level >= 1,
                    _ => true,
                };
                if ok {
                    cur.push(l);
                    rec(n, level + l.step(), cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(n, 0, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Lays the cards for an admissible word. With `degenerate_t`, `m_t` is
    /// drawn with `N` cards of weight 1.
    pub fn arrangement(&self, degenerate_t: bool) -> Result<CardArrangement, WordError> {
        self.require_admissible()?;
        let cards = self
            .0
            .iter()
            .zip(self.levels())
            .map(|(l, lv)| {
                let kind = match l {
                    Letter::Cre => CardKind::C,
                    Letter::Ann => CardKind::A,
                    Letter::Sca => CardKind::K,
                    Letter::Mid if degenerate_t => CardKind::N,
                    Letter::Mid => CardKind::M,
                };
                Card::new(kind, lv as u32)
            })
            .collect();
        Ok(CardArrangement { cards })
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl FromStr for OperatorWord {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, WordError> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map(OperatorWord)
    }
}

impl Serialize for OperatorWord {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OperatorWord {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        String::deserialize(de)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CardKind {
    /// Creation, weight `√λ`.
    C,
    /// Annihilation, weight `√λ s^{i−1}`.
    A,
    /// Scalar, weight `λ s^i`.
    K,
    /// Intermediate, weight `t^{i−1}`.
    M,
    /// Degenerate intermediate (`t = 1`), weight 1.
    N,
}

/// One card: its kind, its level `i` (the number of lines flowing in from
/// the left), and its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Card {
    pub kind: CardKind,
    pub level: u32,
    pub weight: MultiPoly,
}

impl Card {
    /// # Panics
    /// If an `A`, `M` or `N` card is requested at level 0.
    pub fn new(kind: CardKind, level: u32) -> Self {
        let weight = match kind {
            CardKind::C => MultiPoly::sqrt_lambda(),
            CardKind::A => MultiPoly::term(Monomial::new(1, level.checked_sub(1).expect("A₀ does not exist"), 0), 1),
            CardKind::K => MultiPoly::term(Monomial::new(2, level, 0), 1),
            CardKind::M => MultiPoly::t_pow(level.checked_sub(1).expect("M₀ does not exist")),
            CardKind::N => {
                assert!(level >= 1, "N₀ does not exist");
                MultiPoly::one()
            }
        };
        Self { kind, level, weight }
    }

    /// Lines passing over the ground point without touching it.
    pub fn through_lines(&self) -> u32 {
        match self.kind {
            CardKind::C | CardKind::K => self.level,
            CardKind::A | CardKind::M | CardKind::N => self.level - 1,
        }
    }

    pub fn label(&self) -> String {
        format!("{:?}{}", self.kind, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CardArrangement {
    pub cards: Vec<Card>,
}

impl CardArrangement {
    /// Product of the card weights.
    pub fn total_weight(&self) -> MultiPoly {
        self.cards.iter().fold(MultiPoly::one(), |acc, c| &acc * &c.weight)
    }

    /// Fixed-width drawing, one five-character column per card. Rows from
    /// the top show the lines passing over each card (highest level first),
    /// then the ground event (`/` create, `\` annihilate, `*` scalar, `|`
    /// intermediate, `:` degenerate intermediate), then the card labels.
    pub fn render_ascii(&self) -> String {
        const W: usize = 5;
        if self.cards.is_empty() {
            return String::new();
        }
        let top = self.cards.iter().map(Card::through_lines).max().unwrap_or(0);
        let mut rows: Vec<String> = Vec::new();
        for level in (1..=top).rev() {
            let row: String = self
                .cards
                .iter()
                .map(|c| if c.through_lines() >= level { "-----" } else { "     " })
                .collect();
            rows.push(row);
        }
        let ground: String = self
            .cards
            .iter()
            .map(|c| {
                let sym = match c.kind {
                    CardKind::C => '/',
                    CardKind::A => '\\',
                    CardKind::K => '*',
                    CardKind::M => '|',
                    CardKind::N => ':',
                };
                format!("{:^W$}", sym)
            })
            .collect();
        rows.push(ground);
        rows.push(self.cards.iter().map(|c| format!("{:^W$}", c.label())).collect());
        let mut out: String = rows.iter().map(|r| format!("{}\n", r.trim_end())).collect();
        out.truncate(out.trim_end_matches('\n').len());
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_nc, stats, EnumLimit};

    fn w(s: &str) -> OperatorWord {
        s.parse().unwrap()
    }

    fn weight(l: u32, s: u32, t: u32) -> MultiPoly {
        MultiPoly::term(Monomial::new(2 * l, s, t), 1)
    }

    const EX_A: &str = "CMCKAA";
    const EX_B: &str = "CCCAMAA";

    #[test]
    fn level_examples() {
        assert_eq!(w(EX_A).levels(), vec![0, 1, 1, 2, 2, 1]);
        assert!(w("").levels().is_empty());
        assert_eq!(w(EX_B).levels(), vec![0, 1, 2, 3, 2, 2, 1]);
    }

    #[test]
    fn admissibility_examples() {
        assert!(w(EX_A).is_admissible());
        assert!(w(EX_B).is_admissible());
        assert!(!w("M").is_admissible());
        assert!(!w("AC").is_admissible());
        assert!(!w("CC").is_admissible());
        assert!(w("").is_admissible());
        assert!(w("K").is_admissible());
    }

    #[test]
    fn annihilation_condition_is_implied_by_path_conditions() {
        // ℓ ≥ 0 everywhere, M at level ≥ 1 and zero total already force A at
        // level ≥ 1; the explicit check never changes the verdict.
        fn path_only(word: &OperatorWord) -> bool {
            let lv = word.levels();
            let total: i64 = word.letters().iter().map(|l| l.step()).sum();
            total == 0
                && lv.iter().all(|&x| x >= 0)
                && word
                    .letters()
                    .iter()
                    .zip(&lv)
                    .all(|(l, &x)| *l != Letter::Mid || x >= 1)
        }
        for n in 0..=7u32 {
            for code in 0..4usize.pow(n) {
                let letters = (0..n).map(|i| Letter::ALL[(code >> (2 * i)) & 3]).collect();
                let word = OperatorWord::new(letters);
                assert_eq!(word.is_admissible(), path_only(&word), "{word}");
            }
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(w(EX_A).to_partition().unwrap().to_string(), "[[1,2,6],[3,5],[4]]");
        assert_eq!(w(EX_B).to_partition().unwrap().to_string(), "[[1,7],[2,5,6],[3,4]]");
        assert_eq!(w("CA").to_partition().unwrap().to_string(), "[[1,2]]");
        assert_eq!(w("M").to_partition(), Err(WordError::NotAdmissible("M".into())));
    }

    #[test]
    fn word_examples() {
        let a = NCPartition::from_blocks(vec![vec![1, 2, 6], vec![3, 5], vec![4]]).unwrap();
        assert_eq!(OperatorWord::from_partition(&a), w(EX_A));
        let single = NCPartition::from_blocks(vec![vec![1]]).unwrap();
        assert_eq!(OperatorWord::from_partition(&single).to_string(), "K");
        let pair = NCPartition::from_blocks(vec![vec![1, 2]]).unwrap();
        assert_eq!(OperatorWord::from_partition(&pair).to_string(), "CA");
    }

    #[test]
    fn arrangement_weights() {
        let a = w(EX_A).arrangement(false).unwrap();
        let labels: Vec<String> = a.cards.iter().map(Card::label).collect();
        assert_eq!(labels, ["C0", "M1", "C1", "K2", "A2", "A1"]);
        assert_eq!(a.total_weight(), weight(3, 3, 0));
        let b1 = w(EX_B).arrangement(false).unwrap();
        let labels: Vec<String> = b1.cards.iter().map(Card::label).collect();
        assert_eq!(labels, ["C0", "C1", "C2", "A3", "M2", "A2", "A1"]);
        assert_eq!(b1.total_weight(), weight(3, 3, 1));
        let b2 = w(EX_B).arrangement(true).unwrap();
        assert_eq!(b2.cards[4].label(), "N2");
        assert_eq!(b2.total_weight(), weight(3, 3, 0));
        assert!(w("AC").arrangement(false).is_err());
    }

    #[test]
    fn parse_and_serde() {
        assert_eq!(w("cmckaa"), w(EX_A));
        assert_eq!("CX".parse::<OperatorWord>(), Err(WordError::UnknownLetter('X')));
        let js = serde_json::to_string(&w(EX_B)).unwrap();
        assert_eq!(js, "\"CCCAMAA\"");
        assert_eq!(serde_json::from_str::<OperatorWord>(&js).unwrap(), w(EX_B));
    }

    #[test]
    fn bijection_and_weight_coherence() {
        for n in 1..=10 {
            let parts = enumerate_nc(n, EnumLimit::default()).unwrap();
            let words = OperatorWord::admissible_words(n);
            assert_eq!(words.len(), parts.len(), "n={n}");
            for p in &parts {
                let y = OperatorWord::from_partition(p);
                assert!(y.is_admissible());
                assert_eq!(&y.to_partition().unwrap(), p);
            }
            for y in &words {
                let p = y.to_partition().unwrap();
                assert_eq!(&OperatorWord::from_partition(&p), y);
                let st = stats(&p);
                let wt = y.arrangement(false).unwrap().total_weight();
                assert!(wt.has_integral_lambda());
                assert_eq!(wt, weight(p.num_blocks() as u32, st.td1 as u32, st.td2 as u32), "{y}");
            }
        }
    }

    #[test]
    fn ascii_rendering() {
        assert_eq!(CardArrangement { cards: vec![] }.render_ascii(), "");
        let pair = w("CA").arrangement(false).unwrap().render_ascii();
        assert_eq!(pair, "  /    \\\n C0   A1\n");
        let golden = concat!(
            "               -----\n",
            "          ---------------\n",
            "  /    |    /    *    \\    \\\n",
            " C0   M1   C1   K2   A2   A1\n",
        );
        assert_eq!(w(EX_A).arrangement(false).unwrap().render_ascii(), golden);
    }
}
