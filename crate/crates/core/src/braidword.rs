//! Classical braid words, the Artin action on the free group, and strand
//! traces.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * A word is read left to right, which stacks braids top to bottom.
//! * `σ_i` acts by the substitution `t_i ↦ t_i t_{i+1} t_i⁻¹`,
//!   `t_{i+1} ↦ t_i`. The action is on the right: the endomorphism of
//!   `w₁·w₂` is the one of `w₁` followed by the one of `w₂`. The mirrored
//!   chirality gives an isomorphic theory; only consistency matters.
//! * `B_{ij} = σ_{j-1} ⋯ σ_{i+1} σ_i² σ_{i+1}⁻¹ ⋯ σ_{j-1}⁻¹`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{exponent_suffix, tokenize};

/// A freely reduced word over `t_1 … t_N`, stored as signed 1-based
/// generator indices (`-3` is `t_3⁻¹`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeWord {
    letters: Vec<i32>,
}

fn push_letter(out: &mut Vec<i32>, x: i32) {
    if out.last() == Some(&-x) {
        out.pop();
    } else {
        out.push(x);
    }
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(j: usize) -> Self {
        Self {
            letters: vec![j as i32],
        }
    }

    /// Freely reduces an arbitrary sequence of signed letters.
    pub fn from_letters<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        let mut out = Vec::new();
        for x in letters {
            debug_assert!(x != 0);
            push_letter(&mut out, x);
        }
        Self { letters: out }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.letters.clone();
        for &x in &other.letters {
            push_letter(&mut out, x);
        }
        Self { letters: out }
    }

    /// Applies the homomorphism `t_j ↦ images[j-1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut out = Vec::with_capacity(self.letters.len());
        for &x in &self.letters {
            let img = &images[x.unsigned_abs() as usize - 1].letters;
            if x > 0 {
                for &y in img {
                    push_letter(&mut out, y);
                }
            } else {
                for &y in img.iter().rev() {
                    push_letter(&mut out, -y);
                }
            }
        }
        Self { letters: out }
    }

    /// Deletes every occurrence of `t_j^{±1}` and freely reduces.
    pub fn kill(&self, j: usize) -> Self {
        Self::from_letters(self.letters.iter().copied().filter(|x| x.unsigned_abs() as usize != j))
    }

    pub fn mentions(&self, j: usize) -> bool {
        self.letters.iter().any(|x| x.unsigned_abs() as usize == j)
    }

    /// Largest generator index that occurs, 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// If the word is `u t_j u⁻¹` (freely reduced), returns `u`.
    pub fn conjugator_of(&self, j: usize) -> Option<FreeWord> {
        let n = self.letters.len();
        if n % 2 == 0 {
            return None;
        }
        let mid = n / 2;
        if self.letters[mid] != j as i32 {
            return None;
        }
        let (head, tail) = (&self.letters[..mid], &self.letters[mid + 1..]);
        if head.iter().rev().map(|x| -x).eq(tail.iter().copied()) {
            Some(Self {
                letters: head.to_vec(),
            })
        } else {
            None
        }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for run in self.letters.chunk_by(|a, b| a == b) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let e = run.len() as i64 * run[0].signum() as i64;
            write!(f, "t{}{}", run[0].unsigned_abs(), exponent_suffix(e))?;
        }
        Ok(())
    }
}

/// Endomorphism of the free group `F_N`, stored by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeGroupEndo {
    images: Vec<FreeWord>,
}

impl FreeGroupEndo {
    pub fn identity(rank: usize) -> Self {
        Self {
            images: (1..=rank).map(FreeWord::generator).collect(),
        }
    }

    pub fn from_images(images: Vec<FreeWord>) -> Self {
        Self { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Image of `t_j` (1-based).
    pub fn image(&self, j: usize) -> &FreeWord {
        &self.images[j - 1]
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// `self` followed by `other`, i.e. `t ↦ other(self(t))`.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            images: self.images.iter().map(|w| other.apply(w)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(idx, w)| w.letters == [idx as i32 + 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    pub inverse: bool,
}

impl BraidLetter {
    pub fn sigma(index: usize) -> Self {
        Self {
            index,
            inverse: false,
        }
    }

    pub fn sigma_inv(index: usize) -> Self {
        Self {
            index,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Self {
        Self {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// Applies this letter's substitution to `w`.
    fn act(self, w: &FreeWord) -> FreeWord {
        let i = self.index as i32;
        let mut out = Vec::with_capacity(w.letters.len() + 4);
        for &x in &w.letters {
            let g = x.abs();
            let img: &[i32] = match (g - i, self.inverse) {
                (0, false) => &[i, i + 1, -i],
                (1, false) => &[i],
                (0, true) => &[i + 1],
                (1, true) => &[-(i + 1), i, i + 1],
                _ => {
                    push_letter(&mut out, x);
                    continue;
                }
            };
            if x > 0 {
                for &y in img {
                    push_letter(&mut out, y);
                }
            } else {
                for &y in img.iter().rev() {
                    push_letter(&mut out, -y);
                }
            }
        }
        FreeWord { letters: out }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::input("a braid needs at least one strand"));
        }
        if let Some(l) = letters.iter().find(|l| l.index == 0 || l.index >= strands) {
            return Err(Error::input(format!(
                "σ_{} out of range for {strands} strands",
                l.index
            )));
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self {
            strands,
            letters: Vec::new(),
        }
    }

    /// `B^{(N)}_{ij}` of length `2(j - i)`.
    pub fn pure_generator(i: usize, j: usize, strands: usize) -> Result<Self> {
        if i == 0 || i >= j || j > strands {
            return Err(Error::input(format!(
                "B[{i},{j}] needs 1 <= i < j <= {strands}"
            )));
        }
        let mut letters = Vec::with_capacity(2 * (j - i));
        letters.extend((i + 1..j).rev().map(BraidLetter::sigma));
        letters.push(BraidLetter::sigma(i));
        letters.push(BraidLetter::sigma(i));
        letters.extend((i + 1..j).map(BraidLetter::sigma_inv));
        Ok(Self { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Juxtaposition `self · other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::input(format!(
                "strand counts differ: {} vs {}",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self {
            strands: self.strands,
            letters,
        })
    }

    pub(crate) fn extend(&mut self, other: &Self) {
        debug_assert_eq!(self.strands, other.strands);
        self.letters.extend_from_slice(&other.letters);
    }

    /// `perm[p-1]` is the bottom position of the strand that starts at top
    /// position `p`.
    pub fn permutation(&self) -> Vec<usize> {
        // position -> starting strand
        let mut at: Vec<usize> = (1..=self.strands).collect();
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand - 1] = pos + 1;
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    /// Image of a single free word under the action of this braid.
    pub fn act_on(&self, w: &FreeWord) -> FreeWord {
        self.letters.iter().fold(w.clone(), |acc, l| l.act(&acc))
    }

    pub fn artin_action(&self) -> FreeGroupEndo {
        let images = (1..=self.strands)
            .map(|j| self.act_on(&FreeWord::generator(j)))
            .collect();
        FreeGroupEndo { images }
    }

    /// Word problem via faithfulness of the Artin representation.
    pub fn is_trivial(&self) -> bool {
        self.artin_action().is_identity()
    }

    /// The loop traced by strand `tau` in the complement of the others.
    ///
    /// For a pure braid whose other strands are trivially braided, the Artin
    /// image of `t_τ` is `u t_τ u⁻¹`. The trace is `u` with trailing `t_τ`
    /// powers stripped and all remaining `t_τ` letters projected away; the
    /// result is a word over `{t_j : j ≠ τ}` (indices kept as in `F_N`).
    /// The map is a homomorphism from the kernel of forgetting strand `τ`
    /// onto `F_{N-1}` and sends `B_{iτ}` (or `B_{τi}`) to `t_i`.
    pub fn strand_trace(&self, tau: usize) -> Result<FreeWord> {
        if tau == 0 || tau > self.strands {
            return Err(Error::input(format!("strand {tau} out of range")));
        }
        if !self.is_pure() {
            return Err(Error::NotInKernel("braid is not pure".into()));
        }
        let endo = self.artin_action();
        for j in (1..=self.strands).filter(|&j| j != tau) {
            if endo.image(j).kill(tau).letters != [j as i32] {
                return Err(Error::NotInKernel(format!(
                    "forgetting strand {tau} leaves a nontrivial braid (t{j} moves)"
                )));
            }
        }
        let mut u = endo
            .image(tau)
            .conjugator_of(tau)
            .ok_or_else(|| Error::NotInKernel(format!("image of t{tau} is not conjugate to t{tau}")))?;
        while u.letters.last().map(|x| x.unsigned_abs() as usize) == Some(tau) {
            u.letters.pop();
        }
        Ok(u.kill(tau))
    }

    pub fn parse(src: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in tokenize(src)? {
            if tok.head != 's' || tok.bracketed || tok.indices.len() != 1 {
                return Err(Error::parse(tok.offset, "expected s<i>"));
            }
            let i = tok.indices[0];
            if i == 0 || i >= strands {
                return Err(Error::parse(tok.offset, format!("s{i} out of range for {strands} strands")));
            }
            let l = if tok.exponent < 0 {
                BraidLetter::sigma_inv(i)
            } else {
                BraidLetter::sigma(i)
            };
            letters.extend(std::iter::repeat(l).take(tok.exponent.unsigned_abs() as usize));
        }
        Self::new(strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (idx, l) in self.letters.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{}{}", l.index, if l.inverse { "^-1" } else { "" })?;
        }
        Ok(())
    }
}
