//! Table-driven stretching.
//!
//! Write a kernel word as `g_1 ⋯ g_L`. Letters mentioning the top strand are
//! kernel basis letters `κ`; the others are section letters `s`. Then
//!
//! ```text
//! g_1 ⋯ g_L = κ_1 · c_{s_1}(κ_2 · c_{s_2}(κ_3 ⋯))
//! ```
//!
//! where `c_s` is conjugation by `s` restricted to the kernel. Each `c_s` is
//! an automorphism of the free product, tabulated once per level from the
//! strand trace of `s · y · s⁻¹` for every basis element `y`. Evaluating
//! right to left keeps every intermediate word a reduced kernel element,
//! avoiding the blow-up of the full Artin action on the lifted braid.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::freeprod::{FreeProductWord, Generator, ProductSignature};
use crate::orbifold::{
    generators, kernel_basis, kernel_generator, kernel_signature, OrbLetter, OrbWord, Surface,
};

/// Largest kernel coordinate `stretch` will build.
pub const MAX_COORDINATE_SYLLABLES: usize = 2_000_000;

#[derive(Debug)]
pub struct KernelAction {
    level: usize,
    signature: ProductSignature,
    /// For each section letter, images of the basis in signature order.
    images: HashMap<OrbLetter, Vec<FreeProductWord>>,
}

impl KernelAction {
    /// Builds the conjugation tables at `level` (at least 2).
    pub fn new(surface: &Surface, level: usize) -> Result<Self> {
        if level < 2 {
            return Err(Error::input("kernel action needs at least two strands"));
        }
        let signature = kernel_signature(surface, level);
        let basis = kernel_basis(surface, level);
        let mut images = HashMap::new();
        for g in generators(surface, level - 1) {
            for inverse in [false, true] {
                let s = OrbLetter::new(g, inverse);
                let row = basis
                    .iter()
                    .map(|&y| {
                        let w = OrbWord::new(
                            surface.clone(),
                            level,
                            vec![s, OrbLetter::new(y, false), s.inverted()],
                        )?;
                        w.stretch()
                    })
                    .collect::<Result<Vec<_>>>()?;
                images.insert(s, row);
            }
        }
        Ok(Self {
            level,
            signature,
            images,
        })
    }

    /// Shared, lazily built instance for `(surface, level)`.
    pub fn cached(surface: &Surface, level: usize) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(Surface, usize), Arc<KernelAction>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("cache poisoned").get(&(surface.clone(), level)) {
            return Ok(Arc::clone(hit));
        }
        let built = Arc::new(Self::new(surface, level)?);
        cache
            .lock()
            .expect("cache poisoned")
            .insert((surface.clone(), level), Arc::clone(&built));
        Ok(built)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn signature(&self) -> &ProductSignature {
        &self.signature
    }

    fn index_of(&self, g: Generator) -> usize {
        let torsion = self.signature.cone_orders().len();
        match g {
            Generator::Torsion(r) => r - 1,
            Generator::Free(f) => torsion + f - 1,
        }
    }

    /// Image of `w` under conjugation by the section letter `s`.
    pub fn conjugate(&self, s: OrbLetter, w: &FreeProductWord) -> FreeProductWord {
        let row = &self.images[&s];
        let sig = &self.signature;
        let mut raw = Vec::new();
        for syl in w.syllables() {
            let img = &row[self.index_of(syl.generator)];
            let reps = syl.exponent.unsigned_abs();
            for _ in 0..reps {
                if syl.exponent > 0 {
                    raw.extend(img.syllables().iter().map(|t| (t.generator, t.exponent)));
                } else {
                    raw.extend(img.syllables().iter().rev().map(|t| (t.generator, -t.exponent)));
                }
            }
        }
        FreeProductWord::reduce(raw, sig).expect("images lie in the kernel signature")
    }

    /// Kernel coordinate of `w`, whose `delta` must cancel freely.
    ///
    /// Coordinates can grow exponentially with the length of `w`; past
    /// [`MAX_COORDINATE_SYLLABLES`] this fails with [`Error::SizeGuard`].
    pub fn stretch(&self, w: &OrbWord) -> Result<FreeProductWord> {
        if w.strands() != self.level {
            return Err(Error::input(format!(
                "word has {} strands, table is for level {}",
                w.strands(),
                self.level
            )));
        }
        let reduced = w.free_reduce();
        if !reduced.delta()?.is_freely_trivial() {
            return Err(Error::NotDeltaKernel(format!(
                "delta of {reduced} does not cancel freely"
            )));
        }
        let sig = &self.signature;
        let mut acc = FreeProductWord::identity();
        for &l in reduced.letters().iter().rev() {
            match kernel_generator(self.level, l.generator) {
                Some(g) => {
                    let head = FreeProductWord::power(g, l.sign(), sig)?;
                    acc = head.multiply(&acc, sig)?;
                }
                None => acc = self.conjugate(l, &acc),
            }
            if acc.syllables().len() > MAX_COORDINATE_SYLLABLES {
                return Err(Error::SizeGuard(format!(
                    "level-{} coordinate exceeds {MAX_COORDINATE_SYLLABLES} syllables",
                    self.level
                )));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_artin_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (k, q, n) in [(0, vec![], 3), (1, vec![2], 2), (1, vec![3, 2], 3), (2, vec![4], 3)] {
            let s = Surface::new(k, q).unwrap();
            let table = KernelAction::new(&s, n).unwrap();
            for _ in 0..60 {
                let w = sample::orb_word(&mut rng, &s, n, 5);
                let kernel = w.concat(&w.delta().unwrap().section().inverse()).unwrap();
                assert_eq!(table.stretch(&kernel).unwrap(), kernel.stretch().unwrap(), "{kernel}");
            }
        }
    }

    #[test]
    fn runaway_coordinates_hit_the_size_guard() {
        let s = Surface::new(1, vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let hit = (0..8).any(|_| {
            let w = sample::orb_word(&mut rng, &s, 3, 40);
            matches!(w.comb(), Err(Error::SizeGuard(_)))
        });
        assert!(hit);
    }

    #[test]
    fn rejects_non_kernel_words() {
        let s = Surface::new(0, vec![2]).unwrap();
        let table = KernelAction::cached(&s, 2).unwrap();
        let w = OrbWord::parse("X[1,1]", &s, 2).unwrap();
        assert!(matches!(table.stretch(&w), Err(Error::NotDeltaKernel(_))));
        assert!(KernelAction::new(&s, 1).is_err());
    }
}
