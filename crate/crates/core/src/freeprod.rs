//! Free products of finite cyclic groups with a free group,
//! `C_{q_1} * ... * C_{q_m} * F_rho`, in alternating-syllable normal form.
//!
//! Torsion generators print as `x<r>` and free generators as `p<s>`, both
//! 1-based. Torsion exponents are stored as residues in `[1, q_r - 1]`, so
//! two words are equal in the group iff their syllable lists are equal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{exponent_suffix, tokenize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductSignature {
    cone_orders: Vec<u32>,
    free_rank: usize,
}

impl ProductSignature {
    pub fn new(cone_orders: Vec<u32>, free_rank: usize) -> Result<Self> {
        if let Some(q) = cone_orders.iter().find(|&&q| q < 2) {
            return Err(Error::input(format!("cone order {q} must be at least 2")));
        }
        Ok(Self {
            cone_orders,
            free_rank,
        })
    }

    pub fn cone_orders(&self) -> &[u32] {
        &self.cone_orders
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Order of a generator, `None` for infinite order.
    pub fn order(&self, g: Generator) -> Option<u32> {
        match g {
            Generator::Torsion(r) => Some(self.cone_orders[r - 1]),
            Generator::Free(_) => None,
        }
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::Torsion(r) => (1..=self.cone_orders.len()).contains(&r),
            Generator::Free(s) => (1..=self.free_rank).contains(&s),
        }
    }

    /// All generators, torsion first.
    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (1..=self.cone_orders.len())
            .map(Generator::Torsion)
            .chain((1..=self.free_rank).map(Generator::Free))
    }

    fn check(&self, g: Generator) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::input(format!("generator {g} is not in signature {self}")))
        }
    }
}

impl fmt::Display for ProductSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={:?}, free={})", self.cone_orders, self.free_rank)
    }
}

/// A generator of the free product, 1-based within its family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Torsion(usize),
    Free(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Torsion(r) => write!(f, "x{r}"),
            Generator::Free(s) => write!(f, "p{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub generator: Generator,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: Generator, exponent: i64) -> Self {
        Self {
            generator,
            exponent,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeProductWord {
    syllables: Vec<Syllable>,
}

/// Appends `g^e` to a word already in normal form, merging with the last
/// syllable. A merge can only ever touch the final syllable because the one
/// before it carries a different generator.
fn push_syllable(stack: &mut Vec<Syllable>, g: Generator, e: i64, order: Option<u32>) {
    let mut e = e;
    if let Some(top) = stack.last() {
        if top.generator == g {
            e = e.checked_add(top.exponent).expect("exponent overflow");
            stack.pop();
        }
    }
    if let Some(q) = order {
        e = e.rem_euclid(i64::from(q));
    }
    if e != 0 {
        stack.push(Syllable::new(g, e));
    }
}

impl FreeProductWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Normal form of a raw product of generator powers.
    pub fn reduce<I>(raw: I, sig: &ProductSignature) -> Result<Self>
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        let mut stack = Vec::new();
        for (g, e) in raw {
            sig.check(g)?;
            push_syllable(&mut stack, g, e, sig.order(g));
        }
        Ok(Self { syllables: stack })
    }

    /// Single generator power, reduced.
    pub fn power(g: Generator, e: i64, sig: &ProductSignature) -> Result<Self> {
        Self::reduce([(g, e)], sig)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Checks the normal-form invariants against `sig`.
    pub fn validate(&self, sig: &ProductSignature) -> Result<()> {
        for (idx, s) in self.syllables.iter().enumerate() {
            if !sig.contains(s.generator) {
                return Err(Error::SignatureMismatch(format!(
                    "generator {} not in {sig}",
                    s.generator
                )));
            }
            let ok = match sig.order(s.generator) {
                Some(q) => s.exponent > 0 && s.exponent < i64::from(q),
                None => s.exponent != 0,
            };
            if !ok {
                return Err(Error::SignatureMismatch(format!(
                    "exponent {} of {} not reduced for {sig}",
                    s.exponent, s.generator
                )));
            }
            if idx > 0 && self.syllables[idx - 1].generator == s.generator {
                return Err(Error::SignatureMismatch(format!(
                    "adjacent syllables share generator {}",
                    s.generator
                )));
            }
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self, sig: &ProductSignature) -> Result<Self> {
        self.validate(sig)?;
        other.validate(sig)?;
        let mut stack = self.syllables.clone();
        for s in &other.syllables {
            push_syllable(&mut stack, s.generator, s.exponent, sig.order(s.generator));
        }
        Ok(Self { syllables: stack })
    }

    pub fn invert(&self, sig: &ProductSignature) -> Self {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| {
                let e = match sig.order(s.generator) {
                    Some(q) => i64::from(q) - s.exponent,
                    None => -s.exponent,
                };
                Syllable::new(s.generator, e)
            })
            .collect();
        Self { syllables }
    }

    pub fn parse(src: &str, sig: &ProductSignature) -> Result<Self> {
        let mut raw = Vec::new();
        for tok in tokenize(src)? {
            if tok.bracketed || tok.indices.len() != 1 {
                return Err(Error::parse(tok.offset, "expected x<r> or p<s>"));
            }
            let g = match tok.head {
                'x' => Generator::Torsion(tok.indices[0]),
                'p' => Generator::Free(tok.indices[0]),
                other => {
                    return Err(Error::parse(tok.offset, format!("unknown generator family '{other}'")))
                }
            };
            if !sig.contains(g) {
                return Err(Error::parse(tok.offset, format!("generator {g} is not in signature {sig}")));
            }
            raw.push((g, tok.exponent));
        }
        Self::reduce(raw, sig)
    }

    /// Letter-by-letter expansion, each exponent in `{+1, -1}`.
    pub fn letters(&self) -> impl Iterator<Item = (Generator, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = s.exponent.signum();
            std::iter::repeat((s.generator, sign)).take(s.exponent.unsigned_abs() as usize)
        })
    }
}

impl fmt::Display for FreeProductWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (idx, s) in self.syllables.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", s.generator, exponent_suffix(s.exponent))?;
        }
        Ok(())
    }
}
