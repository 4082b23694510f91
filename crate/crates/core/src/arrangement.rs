//! The `D^k_n` hyperplane arrangements `z_i = ξ^r z_j` in `ℂⁿ`.
//!
//! Ranks are computed exactly over `ℚ(ξ)`, `ξ` a primitive `2k`-th root of
//! unity. Only the combinatorial side is certified here: presence of Falk's
//! five-hyperplane configuration and failure of supersolvability. Neither
//! is a proof that the projection is not a fibration; they are the
//! computable shadows of that statement.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

/// `z_i = ξ^r z_j` with `i < j` (1-based) and `0 ≤ r < 2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hyperplane {
    pub i: usize,
    pub j: usize,
    pub r: u32,
}

impl Hyperplane {
    /// `z_a = ξ^r z_b` for any distinct `a`, `b`, normalized to `a < b`.
    pub fn between(a: usize, b: usize, r: i64, k: u32) -> Self {
        assert_ne!(a, b, "a hyperplane needs two distinct coordinates");
        let m = 2 * k as i64;
        if a < b {
            Self { i: a, j: b, r: r.rem_euclid(m) as u32 }
        } else {
            // z_a = ξ^r z_b  ⇔  z_b = ξ^{-r} z_a
            Self { i: b, j: a, r: (-r).rem_euclid(m) as u32 }
        }
    }

    /// Normal vector `e_i − ξ^r e_j`.
    fn normal(&self, n: usize, k: u32) -> Vec<CycloNumber> {
        let order = 2 * k;
        let mut v = vec![CycloNumber::zero(order); n];
        v[self.i - 1] = CycloNumber::one(order);
        v[self.j - 1] = -&CycloNumber::xi_pow(order, self.r as i64);
        v
    }

    pub fn render(&self, k: u32) -> String {
        let coeff = if self.r == 0 {
            String::new()
        } else if self.r == k {
            "-".to_string()
        } else if self.r == 1 {
            "ξ ".to_string()
        } else {
            format!("ξ^{} ", self.r)
        };
        format!("z{} = {}z{}", self.i, coeff, self.j)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{} = ξ^{} z{}", self.i, self.r, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    pub n: usize,
    pub k: u32,
    pub hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(n: usize, k: u32, mut hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        for h in &hyperplanes {
            if !(1 <= h.i && h.i < h.j && h.j <= n && h.r < 2 * k) {
                return Err(Error::input(format!("hyperplane {h} is out of range for n={n}, k={k}")));
            }
        }
        hyperplanes.sort_unstable();
        hyperplanes.dedup();
        if hyperplanes.len() > 128 {
            return Err(Error::SizeGuard("flats are bitsets of at most 128 hyperplanes".into()));
        }
        Ok(Self { n, k, hyperplanes })
    }

    /// `D^k_n`: all `z_i = ξ^r z_j`, `i < j`, `r` mod `2k`.
    pub fn dnk(n: usize, k: u32) -> Result<Self> {
        if n < 2 || k < 1 {
            return Err(Error::input("D^k_n needs n >= 2 and k >= 1"));
        }
        let mut hs = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for r in 0..2 * k {
                    hs.push(Hyperplane { i, j, r });
                }
            }
        }
        Self::new(n, k, hs)
    }

    /// The braid arrangement `z_i = z_j`, used as a control.
    pub fn braid(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("braid arrangement needs n >= 2"));
        }
        let hs = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Hyperplane { i, j, r: 0 }))
            .collect();
        Self::new(n, 1, hs)
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    fn mask_members(&self, mask: u128) -> impl Iterator<Item = usize> + '_ {
        (0..self.hyperplanes.len()).filter(move |&h| mask >> h & 1 == 1)
    }

    /// Rank of the normals of a hyperplane subset.
    pub fn rank(&self, subset: &[Hyperplane]) -> usize {
        let mut e = Echelon::default();
        for h in subset {
            e.insert(h.normal(self.n, self.k));
        }
        e.rank()
    }

    /// All hyperplanes containing the intersection of `mask`.
    fn closure(&self, basis: &Echelon) -> u128 {
        let mut out = 0u128;
        for (idx, h) in self.hyperplanes.iter().enumerate() {
            if basis.contains(&h.normal(self.n, self.k)) {
                out |= 1 << idx;
            }
        }
        out
    }
}

/// Row echelon basis over `ℚ(ξ)`; rows are normalized at their pivots.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<CycloNumber>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<CycloNumber>) -> Vec<CycloNumber> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = &*x - &(&c * y);
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent.
    fn insert(&mut self, v: Vec<CycloNumber>) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("pivot is nonzero");
        let v: Vec<CycloNumber> = v.iter().map(|x| x * &inv).collect();
        // keep earlier rows reduced at the new pivot
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = &*x - &(&c * y);
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    fn contains(&self, v: &[CycloNumber]) -> bool {
        self.reduce(v.to_vec()).iter().all(CycloNumber::is_zero)
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// A closed hyperplane subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    pub hyperplanes: Vec<Hyperplane>,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    arrangement: Arrangement,
    /// Bitsets, sorted by rank then value.
    masks: Vec<u128>,
    ranks: Vec<usize>,
    index: HashMap<u128, usize>,
    bases: Vec<Echelon>,
}

/// Default cap on the number of flats.
pub const DEFAULT_MAX_FLATS: usize = 200_000;

/// Intersection lattice by closure: the flats of rank `r+1` are the closures
/// of a rank-`r` flat plus one hyperplane.
pub fn intersection_lattice(a: &Arrangement, max_flats: usize) -> Result<Lattice> {
    if a.n > 6 {
        return Err(Error::SizeGuard(format!("intersection lattice is capped at n <= 6, got {}", a.n)));
    }
    let mut masks = vec![0u128];
    let mut ranks = vec![0];
    let mut bases = vec![Echelon::default()];
    let mut index = HashMap::from([(0u128, 0usize)]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &f in &frontier {
            let mut covered = masks[f];
            for h in 0..a.len() {
                if covered >> h & 1 == 1 {
                    continue;
                }
                let mut basis = bases[f].clone();
                basis.insert(a.hyperplanes[h].normal(a.n, a.k));
                let closed = a.closure(&basis);
                // every hyperplane of this closure yields the same cover
                covered |= closed;
                if index.contains_key(&closed) {
                    continue;
                }
                if masks.len() >= max_flats {
                    return Err(Error::SizeGuard(format!("more than {max_flats} flats")));
                }
                index.insert(closed, masks.len());
                next.push(masks.len());
                masks.push(closed);
                ranks.push(ranks[f] + 1);
                bases.push(basis);
            }
        }
        frontier = next;
    }
    Ok(Lattice {
        arrangement: a.clone(),
        masks,
        ranks,
        index,
        bases,
    })
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    pub fn flats(&self) -> Vec<Flat> {
        (0..self.len()).map(|f| self.flat(f)).collect()
    }

    fn flat(&self, f: usize) -> Flat {
        Flat {
            hyperplanes: self
                .arrangement
                .mask_members(self.masks[f])
                .map(|h| self.arrangement.hyperplanes[h])
                .collect(),
            rank: self.ranks[f],
        }
    }

    /// Number of flats of each rank.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.rank() + 1];
        for &r in &self.ranks {
            out[r] += 1;
        }
        out
    }

    /// `x ≤ y` in reverse inclusion of intersections, i.e. `x ⊆ y` as
    /// hyperplane sets.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.masks[x] & !self.masks[y] == 0
    }

    fn join_rank(&self, x: usize, y: usize) -> usize {
        let mut e = self.bases[x].clone();
        for (_, row) in &self.bases[y].rows {
            e.insert(row.clone());
        }
        e.rank()
    }

    fn meet(&self, x: usize, y: usize) -> usize {
        // intersections of closed sets are closed
        self.index[&(self.masks[x] & self.masks[y])]
    }

    /// `rank(x) + rank(y) = rank(x ∨ y) + rank(x ∧ y)` against every flat `y`.
    pub fn is_modular(&self, x: usize) -> bool {
        (0..self.len()).all(|y| {
            self.ranks[x] + self.ranks[y] == self.join_rank(x, y) + self.ranks[self.meet(x, y)]
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Supersolvability {
    pub supersolvable: bool,
    /// A maximal chain of modular flats from the empty flat to the top.
    pub chain: Option<Vec<Flat>>,
}

/// Depth-first search for a maximal chain of modular flats.
pub fn supersolvable(a: &Arrangement, max_flats: usize) -> Result<Supersolvability> {
    let lat = intersection_lattice(a, max_flats)?;
    let modular: BTreeSet<usize> = (0..lat.len()).filter(|&x| lat.is_modular(x)).collect();
    let top = lat.rank();
    fn dfs(lat: &Lattice, modular: &BTreeSet<usize>, top: usize, chain: &mut Vec<usize>) -> bool {
        let cur = *chain.last().expect("chain starts at the bottom");
        if lat.ranks[cur] == top {
            return true;
        }
        for &y in modular {
            if lat.ranks[y] == lat.ranks[cur] + 1 && lat.le(cur, y) {
                chain.push(y);
                if dfs(lat, modular, top, chain) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    let mut chain = vec![0];
    let found = modular.contains(&0) && dfs(&lat, &modular, top, &mut chain);
    Ok(Supersolvability {
        supersolvable: found,
        chain: found.then(|| chain.into_iter().map(|f| lat.flat(f)).collect()),
    })
}

/// Five hyperplanes `z_a=ξ^{r₁}z_b`, `z_a=ξ^{r₂}z_b`, `z_c=ξ^{s₁}z_d`,
/// `z_c=ξ^{s₂}z_d`, `z_a=ξ^t z_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FalkWitness {
    /// `(a, b, c, d)`.
    pub indices: [usize; 4],
    pub hyperplanes: [Hyperplane; 5],
    pub rendered: Vec<String>,
}

/// First witness in lexicographic order of `(a,b,c,d,r₁,r₂,s₁,s₂,t)`,
/// with `a<b`, `c<d`, all distinct, `r₁<r₂`, `s₁<s₂`.
pub fn falk_pattern(a: &Arrangement) -> Option<FalkWitness> {
    let (n, k) = (a.n, a.k);
    let present: BTreeSet<Hyperplane> = a.hyperplanes.iter().copied().collect();
    let residues = |i: usize, j: usize| -> Vec<u32> {
        (0..2 * k).filter(|&r| present.contains(&Hyperplane { i, j, r })).collect()
    };
    for pa in 1..=n {
        for pb in pa + 1..=n {
            for pc in 1..=n {
                for pd in pc + 1..=n {
                    if [pc, pd].iter().any(|x| *x == pa || *x == pb) {
                        continue;
                    }
                    let rs = residues(pa, pb);
                    let ss = residues(pc, pd);
                    if rs.len() < 2 || ss.len() < 2 {
                        continue;
                    }
                    let t = (0..2 * k as i64).find(|&t| present.contains(&Hyperplane::between(pa, pd, t, k)));
                    if let Some(t) = t {
                        let hs = [
                            Hyperplane { i: pa, j: pb, r: rs[0] },
                            Hyperplane { i: pa, j: pb, r: rs[1] },
                            Hyperplane { i: pc, j: pd, r: ss[0] },
                            Hyperplane { i: pc, j: pd, r: ss[1] },
                            Hyperplane::between(pa, pd, t, k),
                        ];
                        return Some(FalkWitness {
                            indices: [pa, pb, pc, pd],
                            hyperplanes: hs,
                            rendered: hs.iter().map(|h| h.render(k)).collect(),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Summary emitted by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct ArrangementReport {
    pub n: usize,
    pub k: u32,
    pub hyperplane_count: usize,
    pub falk_witness: Option<FalkWitness>,
    pub supersolvable: bool,
    pub chain: Option<Vec<Flat>>,
}

pub fn analyse(a: &Arrangement, max_flats: usize) -> Result<ArrangementReport> {
    let ss = supersolvable(a, max_flats)?;
    Ok(ArrangementReport {
        n: a.n,
        k: a.k,
        hyperplane_count: a.len(),
        falk_witness: falk_pattern(a),
        supersolvable: ss.supersolvable,
        chain: ss.chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(i: usize, j: usize, r: u32) -> Hyperplane {
        Hyperplane { i, j, r }
    }

    #[test]
    fn build_dnk_examples() {
        assert_eq!(Arrangement::dnk(4, 1).unwrap().len(), 12);
        assert_eq!(Arrangement::dnk(2, 1).unwrap().len(), 2);
        assert_eq!(Arrangement::dnk(4, 2).unwrap().len(), 24);
        for n in 2..=6 {
            for k in 1..=3 {
                assert_eq!(Arrangement::dnk(n, k).unwrap().len(), (2 * k as usize) * n * (n - 1) / 2);
            }
        }
        assert!(Arrangement::dnk(1, 1).is_err());
    }

    #[test]
    fn rank_examples() {
        let a = Arrangement::dnk(3, 2).unwrap();
        assert_eq!(a.rank(&[]), 0);
        assert_eq!(a.rank(&[h(1, 2, 0)]), 1);
        let d = Arrangement::dnk(2, 1).unwrap();
        assert_eq!(d.rank(&[h(1, 2, 0), h(1, 2, 1)]), 2);
        // z1 = z2 = z3 is rank 2; adding z1 = z3 keeps it there
        assert_eq!(a.rank(&[h(1, 2, 0), h(2, 3, 0), h(1, 3, 0)]), 2);
        // z1 = ξz2, z2 = ξz3 force z1 = ξ²z3
        assert_eq!(a.rank(&[h(1, 2, 1), h(2, 3, 1), h(1, 3, 2)]), 2);
        assert_eq!(a.rank(&[h(1, 2, 1), h(2, 3, 1), h(1, 3, 1)]), 3);
    }

    #[test]
    fn lattice_examples() {
        let lat = intersection_lattice(&Arrangement::dnk(2, 1).unwrap(), DEFAULT_MAX_FLATS).unwrap();
        let flats = lat.flats();
        assert_eq!(flats.len(), 4);
        assert_eq!(lat.rank_counts(), vec![1, 2, 1]);
        assert_eq!(flats[0].hyperplanes, vec![]);
        assert_eq!(flats[3].hyperplanes.len(), 2);

        for (n, k) in [(3, 1), (4, 1), (3, 3)] {
            let a = Arrangement::dnk(n, k).unwrap();
            let lat = intersection_lattice(&a, DEFAULT_MAX_FLATS).unwrap();
            let singles: Vec<_> = lat.flats().into_iter().filter(|f| f.rank == 1).collect();
            assert_eq!(singles.len(), a.len());
            assert!(singles.iter().all(|f| f.hyperplanes.len() == 1));
        }
    }

    /// Oracle: closed subsets by brute force over all subsets.
    fn brute_flats(a: &Arrangement) -> Vec<usize> {
        let m = a.len();
        let mut counts = vec![0; a.n + 1];
        for mask in 0u32..(1 << m) {
            let subset: Vec<_> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| a.hyperplanes[i]).collect();
            let r = a.rank(&subset);
            let closed = (0..m).all(|i| {
                mask >> i & 1 == 1 || {
                    let mut s = subset.clone();
                    s.push(a.hyperplanes[i]);
                    a.rank(&s) > r
                }
            });
            if closed {
                counts[r] += 1;
            }
        }
        while counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    #[test]
    fn lattice_matches_brute_force() {
        for a in [
            Arrangement::dnk(3, 1).unwrap(),
            Arrangement::dnk(3, 2).unwrap(),
            Arrangement::braid(4).unwrap(),
        ] {
            let lat = intersection_lattice(&a, DEFAULT_MAX_FLATS).unwrap();
            assert_eq!(lat.rank_counts(), brute_flats(&a), "n={} k={}", a.n, a.k);
        }
        // partitions of {1..4} by block count: 1, 6, 7, 1
        let lat = intersection_lattice(&Arrangement::braid(4).unwrap(), DEFAULT_MAX_FLATS).unwrap();
        assert_eq!(lat.rank_counts(), vec![1, 6, 7, 1]);
    }

    #[test]
    fn size_guard() {
        let a = Arrangement::dnk(4, 1).unwrap();
        assert!(matches!(intersection_lattice(&a, 5), Err(Error::SizeGuard(_))));
        let big = Arrangement::braid(7).unwrap();
        assert!(matches!(intersection_lattice(&big, DEFAULT_MAX_FLATS), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn falk_examples() {
        let w = falk_pattern(&Arrangement::dnk(4, 1).unwrap()).unwrap();
        assert_eq!(w.indices, [1, 2, 3, 4]);
        assert_eq!(w.rendered, vec!["z1 = z2", "z1 = -z2", "z3 = z4", "z3 = -z4", "z1 = z4"]);
        assert!(falk_pattern(&Arrangement::dnk(3, 1).unwrap()).is_none());
        assert!(falk_pattern(&Arrangement::braid(5).unwrap()).is_none());
        for n in 2..=6 {
            for k in 1..=3 {
                assert_eq!(falk_pattern(&Arrangement::dnk(n, k).unwrap()).is_some(), n >= 4);
            }
        }
    }

    #[test]
    fn supersolvable_examples() {
        let ss = supersolvable(&Arrangement::braid(4).unwrap(), DEFAULT_MAX_FLATS).unwrap();
        assert!(ss.supersolvable);
        let chain = ss.chain.unwrap();
        assert_eq!(chain.iter().map(|f| f.rank).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(!supersolvable(&Arrangement::dnk(4, 1).unwrap(), DEFAULT_MAX_FLATS).unwrap().supersolvable);
        assert!(supersolvable(&Arrangement::dnk(2, 1).unwrap(), DEFAULT_MAX_FLATS).unwrap().supersolvable);
    }

    #[test]
    fn between_normalizes() {
        assert_eq!(Hyperplane::between(4, 1, 1, 2), h(1, 4, 3));
        assert_eq!(Hyperplane::between(1, 4, -1, 2), h(1, 4, 3));
        assert_eq!(Hyperplane::between(1, 4, 4, 2), h(1, 4, 0));
    }

    proptest! {
        #[test]
        fn rank_is_submodular(x in any::<u32>(), y in any::<u32>(), k in 1u32..=3) {
            let a = Arrangement::dnk(4, k).unwrap();
            let pick = |m: u32| -> Vec<Hyperplane> {
                a.hyperplanes.iter().enumerate().filter(|(i, _)| m >> (i % 32) & 1 == 1 && *i < 32).map(|(_, h)| *h).collect()
            };
            let (sx, sy) = (pick(x), pick(y));
            let union: Vec<_> = sx.iter().chain(&sy).copied().collect::<BTreeSet<_>>().into_iter().collect();
            let inter: Vec<_> = sx.iter().filter(|h| sy.contains(h)).copied().collect();
            let (rx, ry) = (a.rank(&sx), a.rank(&sy));
            prop_assert!(a.rank(&union) + a.rank(&inter) <= rx + ry);
            prop_assert!(a.rank(&inter) <= rx.min(ry));
            prop_assert!(a.rank(&union) >= rx.max(ry));
            prop_assert!(a.rank(&union) <= a.n);
        }
    }
}
