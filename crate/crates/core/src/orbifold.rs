//! Pure orbifold braid groups of `ℂ(k, m; q)`: the plane with `k` punctures
//! and `m` cone points of orders `q_1 … q_m`.
//!
//! Words use the generators `B[i,j]` (strand `j` around strand `i`),
//! `P[i,s]` (strand `i` around puncture `s`) and `X[i,r]` (strand `i` around
//! cone point `r`). Each word lifts letterwise to a classical pure braid on
//! `N = n + k + m` strands, with punctures at positions `n+1 … n+k` and cone
//! points at `n+k+1 … n+k+m`.
//!
//! `delta` forgets the last strand and `section` re-adds it, going over
//! everything. Combing peels off one kernel coordinate per level; each
//! coordinate is computed by tracing the top strand through the Artin action
//! of the lift and reading the loop in the kernel basis
//! `{X[ℓ,r], B[i,ℓ], P[ℓ,s]}` of `C_{q_1} * … * C_{q_m} * F_{k+ℓ-1}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braidword::BraidWord;
use crate::error::{Error, Result};
use crate::kernel::KernelAction;
use crate::freeprod::{FreeProductWord, Generator, ProductSignature, Syllable};
use crate::text::{exponent_suffix, tokenize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    punctures: usize,
    cone_orders: Vec<u32>,
}

impl Surface {
    pub fn new(punctures: usize, cone_orders: Vec<u32>) -> Result<Self> {
        if let Some(q) = cone_orders.iter().find(|&&q| q < 2) {
            return Err(Error::input(format!("cone order {q} must be at least 2")));
        }
        Ok(Self {
            punctures,
            cone_orders,
        })
    }

    /// The plane itself, `ℂ(0, 0; ∅)`.
    pub fn plane() -> Self {
        Self {
            punctures: 0,
            cone_orders: Vec::new(),
        }
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn cone_points(&self) -> usize {
        self.cone_orders.len()
    }

    pub fn cone_orders(&self) -> &[u32] {
        &self.cone_orders
    }

    /// Parses `(k=2, q=[2,3])`; either field may be omitted.
    pub fn parse(src: &str) -> Result<Self> {
        let t = src.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "surface must look like (k=<int>, q=[...])"))?;
        let base = src.find('(').unwrap_or(0) + 1;
        let mut punctures = 0;
        let mut cone_orders = Vec::new();
        let mut rest = inner;
        let mut offset = base;
        while !rest.trim().is_empty() {
            let lead = rest.len() - rest.trim_start().len();
            rest = rest.trim_start();
            offset += lead;
            if let Some(after) = rest.strip_prefix("k=") {
                let end = after.find(',').unwrap_or(after.len());
                punctures = after[..end]
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(offset + 2, "expected puncture count"))?;
                let consumed = 2 + end + usize::from(end < after.len());
                rest = &rest[consumed..];
                offset += consumed;
            } else if let Some(after) = rest.strip_prefix("q=[") {
                let end = after
                    .find(']')
                    .ok_or_else(|| Error::parse(offset + 3, "unterminated cone order list"))?;
                for part in after[..end].split(',').filter(|p| !p.trim().is_empty()) {
                    let q: u32 = part
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(offset + 3, format!("bad cone order '{}'", part.trim())))?;
                    cone_orders.push(q);
                }
                let mut consumed = 3 + end + 1;
                let tail = &rest[consumed..];
                let comma = tail.trim_start();
                if let Some(stripped) = comma.strip_prefix(',') {
                    consumed += tail.len() - stripped.len();
                }
                rest = &rest[consumed..];
                offset += consumed;
            } else {
                return Err(Error::parse(offset, "expected 'k=' or 'q=['"));
            }
        }
        Self::new(punctures, cone_orders)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.cone_orders.iter().map(u32::to_string).collect();
        write!(f, "(k={}, q=[{}])", self.punctures, q.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbGenerator {
    /// Strand `j` around strand `i`, `i < j`.
    B(usize, usize),
    /// Strand `i` around puncture `s`.
    P(usize, usize),
    /// Strand `i` around cone point `r`.
    X(usize, usize),
}

impl OrbGenerator {
    pub fn validate(self, surface: &Surface, strands: usize) -> Result<()> {
        let ok = match self {
            OrbGenerator::B(i, j) => 1 <= i && i < j && j <= strands,
            OrbGenerator::P(i, s) => (1..=strands).contains(&i) && (1..=surface.punctures).contains(&s),
            OrbGenerator::X(i, r) => (1..=strands).contains(&i) && (1..=surface.cone_points()).contains(&r),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input(format!(
                "{self} is not a generator for {strands} strands over {surface}"
            )))
        }
    }

    pub fn mentions_strand(self, strand: usize) -> bool {
        match self {
            OrbGenerator::B(i, j) => i == strand || j == strand,
            OrbGenerator::P(i, _) | OrbGenerator::X(i, _) => i == strand,
        }
    }

    /// Positions `(a, b)` of the classical generator `B^{(N)}_{ab}` this lifts to.
    pub fn lift_indices(self, surface: &Surface, strands: usize) -> (usize, usize) {
        match self {
            OrbGenerator::B(i, j) => (i, j),
            OrbGenerator::P(i, s) => (i, strands + s),
            OrbGenerator::X(i, r) => (i, strands + surface.punctures + r),
        }
    }

    /// Inverse of [`OrbGenerator::lift_indices`]; `None` when neither
    /// position is a strand.
    pub fn from_lift(surface: &Surface, strands: usize, a: usize, b: usize) -> Option<Self> {
        let (a, b) = (a.min(b), a.max(b));
        let total = strands + surface.punctures + surface.cone_points();
        if a == 0 || a == b || b > total || a > strands {
            return None;
        }
        Some(if b <= strands {
            OrbGenerator::B(a, b)
        } else if b <= strands + surface.punctures {
            OrbGenerator::P(a, b - strands)
        } else {
            OrbGenerator::X(a, b - strands - surface.punctures)
        })
    }

    /// Tag used in text and JSON renderings, e.g. `B[1,3]`.
    pub fn tag(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for OrbGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbGenerator::B(i, j) => write!(f, "B[{i},{j}]"),
            OrbGenerator::P(i, s) => write!(f, "P[{i},{s}]"),
            OrbGenerator::X(i, r) => write!(f, "X[{i},{r}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbLetter {
    pub generator: OrbGenerator,
    pub inverse: bool,
}

impl OrbLetter {
    pub fn new(generator: OrbGenerator, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for OrbLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.generator, if self.inverse { "^-1" } else { "" })
    }
}

/// The generating set `{B[i,j], P[i,s], X[i,r]}` for `n` strands.
pub fn generators(surface: &Surface, strands: usize) -> Vec<OrbGenerator> {
    let mut out = Vec::new();
    for j in 1..=strands {
        for i in 1..j {
            out.push(OrbGenerator::B(i, j));
        }
    }
    for i in 1..=strands {
        out.extend((1..=surface.punctures).map(|s| OrbGenerator::P(i, s)));
    }
    for i in 1..=strands {
        out.extend((1..=surface.cone_points()).map(|r| OrbGenerator::X(i, r)));
    }
    out
}

/// Signature of the kernel coordinate at `level`: torsion `q`, free rank `k + level - 1`.
pub fn kernel_signature(surface: &Surface, level: usize) -> ProductSignature {
    ProductSignature::new(surface.cone_orders.clone(), surface.punctures + level - 1)
        .expect("surface cone orders are validated")
}

/// Orbifold generator standing for a kernel generator at `level`.
///
/// Torsion `r` is `X[ℓ,r]`; free `f ≤ ℓ-1` is `B[f,ℓ]`; free `ℓ-1+s` is `P[ℓ,s]`.
pub fn kernel_basis_element(level: usize, g: Generator) -> OrbGenerator {
    match g {
        Generator::Torsion(r) => OrbGenerator::X(level, r),
        Generator::Free(f) if f < level => OrbGenerator::B(f, level),
        Generator::Free(f) => OrbGenerator::P(level, f + 1 - level),
    }
}

/// Inverse of [`kernel_basis_element`]; `None` for generators outside the basis.
pub fn kernel_generator(level: usize, g: OrbGenerator) -> Option<Generator> {
    match g {
        OrbGenerator::X(i, r) if i == level => Some(Generator::Torsion(r)),
        OrbGenerator::B(i, j) if j == level => Some(Generator::Free(i)),
        OrbGenerator::P(i, s) if i == level => Some(Generator::Free(level - 1 + s)),
        _ => None,
    }
}

/// Kernel basis `{X[n,r], P[n,s], B[i,n]}` at level `n`, in signature order.
pub fn kernel_basis(surface: &Surface, level: usize) -> Vec<OrbGenerator> {
    kernel_signature(surface, level)
        .generators()
        .map(|g| kernel_basis_element(level, g))
        .collect()
}

/// A kernel coordinate at `level` spelled as a word on `strands` strands.
pub fn kernel_word(surface: &Surface, strands: usize, level: usize, w: &FreeProductWord) -> OrbWord {
    let letters = w
        .letters()
        .map(|(g, e)| OrbLetter::new(kernel_basis_element(level, g), e < 0))
        .collect();
    OrbWord {
        surface: surface.clone(),
        strands,
        letters,
    }
}

/// Signatures of the successive kernels, levels `n, n-1, …, 1`.
pub fn polyvf_series(surface: &Surface, strands: usize) -> Vec<ProductSignature> {
    (1..=strands)
        .rev()
        .map(|level| kernel_signature(surface, level))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbWord {
    surface: Surface,
    strands: usize,
    letters: Vec<OrbLetter>,
}

impl OrbWord {
    pub fn new(surface: Surface, strands: usize, letters: Vec<OrbLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::input("need at least one strand"));
        }
        for l in &letters {
            l.generator.validate(&surface, strands)?;
        }
        Ok(Self {
            surface,
            strands,
            letters,
        })
    }

    pub fn identity(surface: Surface, strands: usize) -> Self {
        Self {
            surface,
            strands,
            letters: Vec::new(),
        }
    }

    /// `g^d` for a single generator.
    pub fn power(surface: Surface, strands: usize, g: OrbGenerator, d: i64) -> Result<Self> {
        let l = OrbLetter::new(g, d < 0);
        Self::new(surface, strands, vec![l; d.unsigned_abs() as usize])
    }

    pub fn parse(src: &str, surface: &Surface, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in tokenize(src)? {
            if !tok.bracketed || tok.indices.len() != 2 {
                return Err(Error::parse(tok.offset, "expected B[i,j], P[i,s] or X[i,r]"));
            }
            let (a, b) = (tok.indices[0], tok.indices[1]);
            let g = match tok.head {
                'B' => OrbGenerator::B(a, b),
                'P' => OrbGenerator::P(a, b),
                'X' => OrbGenerator::X(a, b),
                other => {
                    return Err(Error::parse(tok.offset, format!("unknown generator family '{other}'")))
                }
            };
            g.validate(surface, strands)
                .map_err(|e| Error::parse(tok.offset, e.to_string()))?;
            let l = OrbLetter::new(g, tok.exponent < 0);
            letters.extend(std::iter::repeat(l).take(tok.exponent.unsigned_abs() as usize));
        }
        Ok(Self {
            surface: surface.clone(),
            strands,
            letters,
        })
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[OrbLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.surface != other.surface || self.strands != other.strands {
            return Err(Error::input(format!(
                "words live in different groups: {} strands over {} vs {} strands over {}",
                self.strands, self.surface, other.strands, other.surface
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        Self {
            surface: self.surface.clone(),
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self {
            surface: self.surface.clone(),
            strands: self.strands,
            letters,
        })
    }

    /// Cancels adjacent `g g⁻¹` pairs.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<OrbLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self {
            surface: self.surface.clone(),
            strands: self.strands,
            letters: out,
        }
    }

    pub fn is_freely_trivial(&self) -> bool {
        self.free_reduce().is_empty()
    }

    /// Letterwise lift to the classical pure braid group on `n + k + m` strands.
    pub fn lift(&self) -> BraidWord {
        let total = self.strands + self.surface.punctures + self.surface.cone_points();
        let mut out = BraidWord::identity(total);
        for l in &self.letters {
            let (a, b) = l.generator.lift_indices(&self.surface, self.strands);
            let g = BraidWord::pure_generator(a, b, total).expect("validated generator");
            if l.inverse {
                out.extend(&g.inverse());
            } else {
                out.extend(&g);
            }
        }
        out
    }

    /// Forgets the last strand by deleting every letter that mentions it.
    pub fn delta(&self) -> Result<Self> {
        if self.strands < 2 {
            return Err(Error::input("delta needs at least two strands"));
        }
        let n = self.strands;
        Ok(Self {
            surface: self.surface.clone(),
            strands: n - 1,
            letters: self
                .letters
                .iter()
                .copied()
                .filter(|l| !l.generator.mentions_strand(n))
                .collect(),
        })
    }

    /// Same letters, read with one more strand that passes over everything.
    pub fn section(&self) -> Self {
        Self {
            surface: self.surface.clone(),
            strands: self.strands + 1,
            letters: self.letters.clone(),
        }
    }

    /// Rewrites a kernel element of `delta` in the kernel basis at level `n`.
    ///
    /// Requires `delta(self)` to cancel freely to the empty word. On one
    /// strand there is no `delta` and the whole word is reduced directly.
    pub fn stretch(&self) -> Result<FreeProductWord> {
        let n = self.strands;
        let sig = kernel_signature(&self.surface, n);
        if n == 1 {
            return self.reduce_level_one();
        }
        let reduced = self.free_reduce();
        if !reduced.delta()?.is_freely_trivial() {
            return Err(Error::NotDeltaKernel(format!(
                "delta of {reduced} does not cancel freely"
            )));
        }
        let k = self.surface.punctures;
        let trace = reduced.lift().strand_trace(n).map_err(|e| match e {
            Error::NotInKernel(msg) => Error::NotDeltaKernel(msg),
            other => other,
        })?;
        let raw = trace.letters().iter().map(|&x| {
            let j = x.unsigned_abs() as usize;
            let g = if j < n {
                Generator::Free(j)
            } else if j <= n + k {
                Generator::Free(n - 1 + (j - n))
            } else {
                Generator::Torsion(j - n - k)
            };
            (g, i64::from(x.signum()))
        });
        FreeProductWord::reduce(raw, &sig)
    }

    fn reduce_level_one(&self) -> Result<FreeProductWord> {
        let sig = kernel_signature(&self.surface, 1);
        let raw = self.letters.iter().map(|l| {
            let g = kernel_generator(1, l.generator).expect("level-one words use P and X only");
            (g, l.sign())
        });
        FreeProductWord::reduce(raw, &sig)
    }

    /// Combing normal form: one kernel coordinate per level, `n` down to 1.
    ///
    /// Coordinates are computed with the tabulated kernel action, which
    /// agrees with [`OrbWord::stretch`] on every kernel word.
    pub fn comb(&self) -> Result<CombedForm> {
        let mut coordinates = Vec::with_capacity(self.strands);
        let mut current = self.free_reduce();
        while current.strands > 1 {
            let base = current.delta()?;
            let kernel = current.concat(&base.section().inverse())?;
            let action = KernelAction::cached(&self.surface, current.strands)?;
            coordinates.push(action.stretch(&kernel)?);
            current = base;
        }
        coordinates.push(current.reduce_level_one()?);
        Ok(CombedForm {
            surface: self.surface.clone(),
            strands: self.strands,
            coordinates,
        })
    }

    pub fn is_identity(&self) -> Result<bool> {
        Ok(self.comb()?.is_identity())
    }

    pub fn equal(&self, other: &Self) -> Result<bool> {
        self.same_group(other)?;
        self.concat(&other.inverse())?.is_identity()
    }
}

impl fmt::Display for OrbWord {
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
            let e = run.len() as i64 * run[0].sign();
            write!(f, "{}{}", run[0].generator, exponent_suffix(e))?;
        }
        Ok(())
    }
}

/// Kernel coordinates `(u_n, …, u_1)` of a combed word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombedForm {
    surface: Surface,
    strands: usize,
    coordinates: Vec<FreeProductWord>,
}

impl CombedForm {
    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Coordinates ordered from level `n` down to level 1.
    pub fn coordinates(&self) -> &[FreeProductWord] {
        &self.coordinates
    }

    /// Coordinate `u_level`, 1-based.
    pub fn coordinate(&self, level: usize) -> &FreeProductWord {
        &self.coordinates[self.strands - level]
    }

    pub fn is_identity(&self) -> bool {
        self.coordinates.iter().all(FreeProductWord::is_identity)
    }

    /// Kernel coordinate at `level` spelled in orbifold generators.
    pub fn coordinate_word(&self, level: usize) -> OrbWord {
        kernel_word(&self.surface, self.strands, level, self.coordinate(level))
    }

    /// The word `u_n · u_{n-1} ⋯ u_1` on `n` strands.
    pub fn recombine(&self) -> OrbWord {
        let mut letters = Vec::new();
        for level in (1..=self.strands).rev() {
            letters.extend(self.coordinate_word(level).letters);
        }
        OrbWord {
            surface: self.surface.clone(),
            strands: self.strands,
            letters,
        }
    }

    /// Levels as lists of `(tag, exponent)` pairs, top level first.
    pub fn levels(&self) -> Vec<Vec<(String, i64)>> {
        (1..=self.strands)
            .rev()
            .map(|level| {
                self.coordinate(level)
                    .syllables()
                    .iter()
                    .map(|s: &Syllable| (kernel_basis_element(level, s.generator).tag(), s.exponent))
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.levels()).expect("plain data")
    }
}

impl fmt::Display for CombedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, level) in (1..=self.strands).rev().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "u{level} = {}", self.coordinate_word(level))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugationEntry {
    pub conjugator: OrbLetter,
    pub basis: OrbGenerator,
    pub value: FreeProductWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableViolation {
    pub conjugator: OrbLetter,
    pub basis: OrbGenerator,
    pub message: String,
}

/// `stretch(g·y·g⁻¹)` for every generator `g^{±1}` and kernel basis element `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugationTable {
    pub strands: usize,
    pub entries: Vec<ConjugationEntry>,
    pub violations: Vec<TableViolation>,
}

impl ConjugationTable {
    pub fn get(&self, conjugator: OrbLetter, basis: OrbGenerator) -> Option<&FreeProductWord> {
        self.entries
            .iter()
            .find(|e| e.conjugator == conjugator && e.basis == basis)
            .map(|e| &e.value)
    }

    pub fn is_complete(&self) -> bool {
        self.violations.is_empty()
    }

    /// Entries keyed by their text tags, for rendering.
    pub fn as_map(&self) -> BTreeMap<(String, String), String> {
        self.entries
            .iter()
            .map(|e| {
                (
                    (e.conjugator.to_string(), e.basis.to_string()),
                    e.value.to_string(),
                )
            })
            .collect()
    }
}

pub fn conjugation_table(surface: &Surface, strands: usize) -> Result<ConjugationTable> {
    if strands < 2 {
        return Err(Error::input("conjugation table needs at least two strands"));
    }
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    let basis = kernel_basis(surface, strands);
    for g in generators(surface, strands) {
        for inverse in [false, true] {
            let conj = OrbLetter::new(g, inverse);
            for &y in &basis {
                let word = OrbWord {
                    surface: surface.clone(),
                    strands,
                    letters: vec![conj, OrbLetter::new(y, false), conj.inverted()],
                };
                match word.stretch() {
                    Ok(value) => entries.push(ConjugationEntry {
                        conjugator: conj,
                        basis: y,
                        value,
                    }),
                    Err(e) => violations.push(TableViolation {
                        conjugator: conj,
                        basis: y,
                        message: e.to_string(),
                    }),
                }
            }
        }
    }
    Ok(ConjugationTable {
        strands,
        entries,
        violations,
    })
}
