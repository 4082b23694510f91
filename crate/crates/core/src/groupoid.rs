//! Finite groupoids and their configuration groupoids.
//!
//! Everything here is discrete and checked exhaustively. The smooth notions
//! have finite shadows only: a c-groupoid is approximated by a translation
//! groupoid of a free action, and a b-fibration by surjectivity of
//! `α ↦ (f₁(α), s(α))` onto the fiber product.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Object or morphism name. Configuration groupoids use nested tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Atom(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Tuple(parts) => {
                write!(f, "(")?;
                for (idx, p) in parts.iter().enumerate() {
                    if idx > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, axiom: &str, detail: String) {
        // keep reports readable on badly broken tables
        if self.violations.len() < 64 {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                detail,
            });
        }
    }
}

/// Flat table description, the JSON interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidTables {
    pub objects: Vec<Label>,
    pub morphisms: Vec<Label>,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub unit: Vec<usize>,
    pub inverse: Vec<usize>,
    /// `(β, α, β∘α)` for every composable pair `t(α) = s(β)`.
    pub compose: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<Label>,
    morphisms: Vec<Label>,
    source: Vec<usize>,
    target: Vec<usize>,
    unit: Vec<usize>,
    inverse: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables without checking the axioms;
    /// only index ranges are validated.
    pub fn from_tables(t: GroupoidTables) -> Result<Self> {
        let (no, nm) = (t.objects.len(), t.morphisms.len());
        if t.source.len() != nm || t.target.len() != nm || t.inverse.len() != nm || t.unit.len() != no {
            return Err(Error::input("table lengths do not match object/morphism counts"));
        }
        let obj_ok = t.source.iter().chain(&t.target).all(|&x| x < no);
        let mor_ok = t
            .unit
            .iter()
            .chain(&t.inverse)
            .chain(t.compose.iter().flat_map(|(a, b, c)| [a, b, c]))
            .all(|&a| a < nm);
        if !obj_ok || !mor_ok {
            return Err(Error::input("table entry out of range"));
        }
        let compose = t.compose.iter().map(|&(b, a, c)| ((b, a), c)).collect();
        Ok(Self {
            objects: t.objects,
            morphisms: t.morphisms,
            source: t.source,
            target: t.target,
            unit: t.unit,
            inverse: t.inverse,
            compose,
        })
    }

    pub fn to_tables(&self) -> GroupoidTables {
        let mut compose: Vec<_> = self.compose.iter().map(|(&(b, a), &c)| (b, a, c)).collect();
        compose.sort_unstable();
        GroupoidTables {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            unit: self.unit.clone(),
            inverse: self.inverse.clone(),
            compose,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[Label] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Label] {
        &self.morphisms
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.target[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `β ∘ α`, defined when `t(α) = s(β)`.
    pub fn compose(&self, beta: usize, alpha: usize) -> Option<usize> {
        self.compose.get(&(beta, alpha)).copied()
    }

    /// Morphisms out of each object (the stars `s⁻¹(x)`).
    pub fn stars(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (a, &x) in self.source.iter().enumerate() {
            out[x].push(a);
        }
        out
    }

    /// Isotropy group `mor(x, x)`.
    pub fn isotropy(&self, x: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&a| self.source[a] == x && self.target[a] == x)
            .collect()
    }

    pub fn object_index(&self, label: &Label) -> Option<usize> {
        self.objects.iter().position(|l| l == label)
    }

    pub fn morphism_index(&self, label: &Label) -> Option<usize> {
        self.morphisms.iter().position(|l| l == label)
    }
}

/// Exhaustive check of the groupoid axioms.
///
/// Axiom tags: `ST` (structure maps well typed), `M` (composition defined
/// exactly on composable pairs, with the right endpoints), `U` (two-sided
/// units), `I` (two-sided inverses), `C` (associativity).
pub fn check_axioms(g: &FiniteGroupoid) -> Report {
    let mut rep = Report::default();
    let label = |a: usize| g.morphisms[a].to_string();
    for (x, &u) in g.unit.iter().enumerate() {
        if g.source[u] != x || g.target[u] != x {
            rep.push("ST", format!("unit of {} is not a loop at it", g.objects[x]));
        }
    }
    for a in 0..g.morphisms.len() {
        let ia = g.inverse[a];
        if g.source[ia] != g.target[a] || g.target[ia] != g.source[a] {
            rep.push("ST", format!("inverse of {} has the wrong endpoints", label(a)));
        }
    }
    let stars = g.stars();
    let mut defined = 0usize;
    for a in 0..g.morphisms.len() {
        for &b in &stars[g.target[a]] {
            defined += 1;
            match g.compose(b, a) {
                None => rep.push("M", format!("{} ∘ {} is not defined", label(b), label(a))),
                Some(c) => {
                    if g.source[c] != g.source[a] || g.target[c] != g.target[b] {
                        rep.push("M", format!("{} ∘ {} has the wrong endpoints", label(b), label(a)));
                    }
                }
            }
        }
    }
    if g.compose.len() != defined {
        rep.push(
            "M",
            format!(
                "composition has {} entries but there are {defined} composable pairs",
                g.compose.len()
            ),
        );
    }
    for a in 0..g.morphisms.len() {
        let (x, y) = (g.source[a], g.target[a]);
        if g.compose(a, g.unit[x]) != Some(a) || g.compose(g.unit[y], a) != Some(a) {
            rep.push("U", format!("units do not fix {}", label(a)));
        }
        let ia = g.inverse[a];
        if g.compose(a, ia) != Some(g.unit[y]) || g.compose(ia, a) != Some(g.unit[x]) {
            rep.push("I", format!("inverse of {} is not two-sided", label(a)));
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    // dense rows: row[β][pos(α)] = β∘α, pos(α) = index of α among the
    // morphisms ending at t(α)
    let mut pos = vec![0; g.morphisms.len()];
    let mut costar_len = vec![0; g.objects.len()];
    for a in 0..g.morphisms.len() {
        pos[a] = costar_len[g.target[a]];
        costar_len[g.target[a]] += 1;
    }
    let mut row: Vec<Vec<usize>> = (0..g.morphisms.len())
        .map(|b| vec![0; costar_len[g.source[b]]])
        .collect();
    for (&(b, a), &c) in &g.compose {
        row[b][pos[a]] = c;
    }
    for a in 0..g.morphisms.len() {
        for &b in &stars[g.target[a]] {
            let ba = row[b][pos[a]];
            for &c in &stars[g.target[b]] {
                let left = row[c][pos[ba]];
                let right = row[row[c][pos[b]]][pos[a]];
                if left != right {
                    rep.push(
                        "C",
                        format!("({}∘{})∘{} differs from {}∘({}∘{})", label(c), label(b), label(a), label(c), label(b), label(a)),
                    );
                }
            }
        }
    }
    rep
}

/// The orbit `t(s⁻¹(x))` of an object.
pub fn orbit(g: &FiniteGroupoid, x: usize) -> BTreeSet<usize> {
    (0..g.morphisms.len())
        .filter(|&a| g.source[a] == x)
        .map(|a| g.target[a])
        .collect()
}

/// Orbit id per object; ids are numbered by first appearance.
fn orbit_ids(g: &FiniteGroupoid) -> Vec<usize> {
    let mut id = vec![usize::MAX; g.objects.len()];
    let mut next = 0;
    for x in 0..g.objects.len() {
        if id[x] == usize::MAX {
            for y in orbit(g, x) {
                id[y] = next;
            }
            id[x] = next;
            next += 1;
        }
    }
    id
}

/// Ordered `n`-tuples of objects lying in pairwise distinct orbits.
pub fn pb_objects(g: &FiniteGroupoid, n: usize) -> Vec<Vec<usize>> {
    let ids = orbit_ids(g);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(ids: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..ids.len() {
            if cur.iter().all(|&y| ids[y] != ids[x]) {
                cur.push(x);
                rec(ids, n, cur, out);
                cur.pop();
            }
        }
    }
    if n >= 1 {
        rec(&ids, n, &mut cur, &mut out);
    }
    out
}

fn tuple_label(g: &FiniteGroupoid, xs: &[usize]) -> Label {
    if xs.len() == 1 {
        g.objects[xs[0]].clone()
    } else {
        Label::Tuple(xs.iter().map(|&x| g.objects[x].clone()).collect())
    }
}

/// A configuration groupoid together with how it sits over `G`.
struct Config {
    groupoid: FiniteGroupoid,
    /// Object index → tuple of base objects.
    tuples: Vec<Vec<usize>>,
    /// Morphism index → projection to the previous level (a-type) or to the
    /// first `n-1` coordinates (b-type); empty at level one.
    parent: Vec<usize>,
    /// Morphism index → the first base morphism `α₁`.
    first: Vec<usize>,
    /// Morphism index → base components (b-type and level one only).
    components: Vec<Vec<usize>>,
}

fn level_one(g: &FiniteGroupoid) -> Config {
    Config {
        groupoid: g.clone(),
        tuples: (0..g.objects.len()).map(|x| vec![x]).collect(),
        parent: Vec::new(),
        first: (0..g.morphisms.len()).collect(),
        components: (0..g.morphisms.len()).map(|a| vec![a]).collect(),
    }
}

fn index_tuples(tuples: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()
}

/// One step of the a-configuration tower:
/// `PB^a_n(G)₁ = PB^a_{n-1}(G)₁ ×_{PB_{n-1}(G)₀} PB_n(G)₀`.
fn pb_a_step(g: &FiniteGroupoid, prev: &Config, n: usize) -> Result<Config> {
    let p = &prev.groupoid;
    let tuples = pb_objects(g, n);
    let obj_of = index_tuples(&tuples);
    let prev_obj = index_tuples(&prev.tuples);
    let prev_stars = p.stars();

    let mut morphisms = Vec::new();
    let mut labels = Vec::new();
    let mut source = Vec::new();
    let mut target = Vec::new();
    let mut parent = Vec::new();
    let mut first = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();

    for (xi, x) in tuples.iter().enumerate() {
        let base = prev_obj[&x[..n - 1]];
        for &a in &prev_stars[base] {
            let mut t = prev.tuples[p.target[a]].clone();
            t.push(x[n - 1]);
            let ti = *obj_of.get(&t).ok_or_else(|| {
                Error::input(format!("target {t:?} leaves the configuration space"))
            })?;
            let label = if n == 2 {
                Label::Tuple(vec![p.morphisms[a].clone(), tuple_label(g, x)])
            } else {
                let Label::Tuple(mut parts) = p.morphisms[a].clone() else {
                    unreachable!("level >= 2 labels are tuples")
                };
                parts.push(tuple_label(g, x));
                Label::Tuple(parts)
            };
            index.insert((a, xi), morphisms.len());
            morphisms.push((a, xi));
            labels.push(label);
            source.push(xi);
            target.push(ti);
            parent.push(a);
            first.push(prev.first[a]);
        }
    }
    let unit = tuples
        .iter()
        .enumerate()
        .map(|(xi, x)| index[&(p.unit[prev_obj[&x[..n - 1]]], xi)])
        .collect();
    let inverse = morphisms
        .iter()
        .enumerate()
        .map(|(m, &(a, _))| index[&(p.inverse[a], target[m])])
        .collect();
    let mut compose = HashMap::new();
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); tuples.len()];
    for (m, &s) in source.iter().enumerate() {
        by_source[s].push(m);
    }
    for (m, &(a, xi)) in morphisms.iter().enumerate() {
        for &m2 in &by_source[target[m]] {
            let (b, _) = morphisms[m2];
            let ba = p.compose(b, a).ok_or_else(|| Error::input("base groupoid composition is partial"))?;
            compose.insert((m2, m), index[&(ba, xi)]);
        }
    }
    Ok(Config {
        groupoid: FiniteGroupoid {
            objects: tuples.iter().map(|t| tuple_label(g, t)).collect(),
            morphisms: labels,
            source,
            target,
            unit,
            inverse,
            compose,
        },
        tuples,
        parent,
        first,
        components: Vec::new(),
    })
}

fn pb_a_tower(g: &FiniteGroupoid, n: usize) -> Result<Vec<Config>> {
    if n == 0 {
        return Err(Error::input("configuration groupoids need n >= 1"));
    }
    let mut tower = vec![level_one(g)];
    for level in 2..=n {
        let next = pb_a_step(g, tower.last().expect("nonempty"), level)?;
        tower.push(next);
    }
    Ok(tower)
}

/// a-configuration groupoid `PB^a_n(G)`; morphisms are labelled
/// `(α₁, (x₁,x₂), …, (x₁,…,x_n))`.
pub fn pb_a(g: &FiniteGroupoid, n: usize) -> Result<FiniteGroupoid> {
    Ok(pb_a_tower(g, n)?.pop().expect("nonempty").groupoid)
}

fn pb_b_config(g: &FiniteGroupoid, n: usize) -> Result<Config> {
    if n == 0 {
        return Err(Error::input("configuration groupoids need n >= 1"));
    }
    if n == 1 {
        return Ok(level_one(g));
    }
    let tuples = pb_objects(g, n);
    let obj_of = index_tuples(&tuples);
    let stars = g.stars();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for x in &tuples {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for &xi in x {
            acc = acc
                .into_iter()
                .flat_map(|pre| {
                    stars[xi].iter().map(move |&a| {
                        let mut v = pre.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        for c in acc {
            let t: Vec<usize> = c.iter().map(|&a| g.target[a]).collect();
            if obj_of.contains_key(&t) {
                comps.push(c);
            }
        }
    }
    let mor_of = index_tuples(&comps);
    let source = comps
        .iter()
        .map(|c| obj_of[&c.iter().map(|&a| g.source[a]).collect::<Vec<_>>()])
        .collect::<Vec<_>>();
    let target = comps
        .iter()
        .map(|c| obj_of[&c.iter().map(|&a| g.target[a]).collect::<Vec<_>>()])
        .collect::<Vec<_>>();
    let unit = tuples
        .iter()
        .map(|x| mor_of[&x.iter().map(|&xi| g.unit[xi]).collect::<Vec<_>>()])
        .collect();
    let inverse = comps
        .iter()
        .map(|c| mor_of[&c.iter().map(|&a| g.inverse[a]).collect::<Vec<_>>()])
        .collect();
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); tuples.len()];
    for (m, &s) in source.iter().enumerate() {
        by_source[s].push(m);
    }
    let mut compose = HashMap::new();
    for (m, c) in comps.iter().enumerate() {
        for &m2 in &by_source[target[m]] {
            let prod: Option<Vec<usize>> = comps[m2]
                .iter()
                .zip(c)
                .map(|(&b, &a)| g.compose(b, a))
                .collect();
            let prod = prod.ok_or_else(|| Error::input("base groupoid composition is partial"))?;
            compose.insert((m2, m), mor_of[&prod]);
        }
    }
    let prev = pb_b_config(g, n - 1)?;
    let prev_of = index_tuples(&prev.components);
    let parent = comps.iter().map(|c| prev_of[&c[..n - 1]]).collect();
    Ok(Config {
        groupoid: FiniteGroupoid {
            objects: tuples.iter().map(|t| tuple_label(g, t)).collect(),
            morphisms: comps
                .iter()
                .map(|c| Label::Tuple(c.iter().map(|&a| g.morphisms[a].clone()).collect()))
                .collect(),
            source,
            target,
            unit,
            inverse,
            compose,
        },
        tuples,
        parent,
        first: comps.iter().map(|c| c[0]).collect(),
        components: comps,
    })
}

/// b-configuration groupoid `PB^b_n(G)`; morphisms are labelled by their
/// coordinate tuples `(α₁, …, α_n)`.
pub fn pb_b(g: &FiniteGroupoid, n: usize) -> Result<FiniteGroupoid> {
    Ok(pb_b_config(g, n)?.groupoid)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidHom {
    pub domain: FiniteGroupoid,
    pub codomain: FiniteGroupoid,
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
}

impl GroupoidHom {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        Self {
            domain: g.clone(),
            codomain: g.clone(),
            f0: (0..g.objects.len()).collect(),
            f1: (0..g.morphisms.len()).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        fn bij(map: &[usize], n: usize) -> bool {
            map.len() == n && map.iter().collect::<BTreeSet<_>>().len() == n && map.iter().all(|&x| x < n)
        }
        bij(&self.f0, self.codomain.objects.len()) && bij(&self.f1, self.codomain.morphisms.len())
    }
}

/// Exhaustive check of the homomorphism axioms (a)–(e):
/// `s∘f₁ = f₀∘s`, `t∘f₁ = f₀∘t`, `f₁∘u = u∘f₀`, `f₁∘i = i∘f₁`,
/// `f₁∘m = m∘(f₁×f₁)`.
pub fn check_hom(h: &GroupoidHom) -> Report {
    let (d, c) = (&h.domain, &h.codomain);
    let mut rep = Report::default();
    if h.f0.len() != d.objects.len() || h.f1.len() != d.morphisms.len() {
        rep.push("tables", "object or morphism map is not total".into());
        return rep;
    }
    if h.f0.iter().any(|&x| x >= c.objects.len()) || h.f1.iter().any(|&a| a >= c.morphisms.len()) {
        rep.push("tables", "map lands outside the codomain".into());
        return rep;
    }
    let name = |a: usize| d.morphisms[a].to_string();
    for a in 0..d.morphisms.len() {
        let fa = h.f1[a];
        if c.source[fa] != h.f0[d.source[a]] {
            rep.push("(a)", format!("s∘f₁ ≠ f₀∘s at {}", name(a)));
        }
        if c.target[fa] != h.f0[d.target[a]] {
            rep.push("(b)", format!("t∘f₁ ≠ f₀∘t at {}", name(a)));
        }
        if h.f1[d.inverse[a]] != c.inverse[fa] {
            rep.push("(d)", format!("f₁∘i ≠ i∘f₁ at {}", name(a)));
        }
    }
    for x in 0..d.objects.len() {
        if h.f1[d.unit[x]] != c.unit[h.f0[x]] {
            rep.push("(c)", format!("f₁∘u ≠ u∘f₀ at {}", d.objects[x]));
        }
    }
    for (&(b, a), &ba) in &d.compose {
        if c.compose(h.f1[b], h.f1[a]) != Some(h.f1[ba]) {
            rep.push("(e)", format!("f₁(β∘α) ≠ f₁(β)∘f₁(α) at β={}, α={}", name(b), name(a)));
        }
    }
    rep.violations.sort_by(|x, y| x.axiom.cmp(&y.axiom));
    rep
}

fn forget(tower_top: &Config, below: &Config) -> (Vec<usize>, Vec<usize>) {
    let below_obj = index_tuples(&below.tuples);
    let f0 = tower_top
        .tuples
        .iter()
        .map(|t| below_obj[&t[..t.len() - 1]])
        .collect();
    (f0, tower_top.parent.clone())
}

/// `F^a : PB^a_n(G) → PB^a_{n-1}(G)`, dropping the last coordinate.
pub fn forget_hom_a(g: &FiniteGroupoid, n: usize) -> Result<GroupoidHom> {
    if n < 2 {
        return Err(Error::input("forgetful homomorphism needs n >= 2"));
    }
    let mut tower = pb_a_tower(g, n)?;
    let top = tower.pop().expect("n >= 2");
    let below = tower.pop().expect("n >= 2");
    let (f0, f1) = forget(&top, &below);
    Ok(GroupoidHom {
        domain: top.groupoid,
        codomain: below.groupoid,
        f0,
        f1,
    })
}

/// `F^b : PB^b_n(G) → PB^b_{n-1}(G)`, projecting to the first `n-1` coordinates.
pub fn forget_hom_b(g: &FiniteGroupoid, n: usize) -> Result<GroupoidHom> {
    if n < 2 {
        return Err(Error::input("forgetful homomorphism needs n >= 2"));
    }
    let top = pb_b_config(g, n)?;
    let below = pb_b_config(g, n - 1)?;
    let (f0, f1) = forget(&top, &below);
    Ok(GroupoidHom {
        domain: top.groupoid,
        codomain: below.groupoid,
        f0,
        f1,
    })
}

/// `PB^a_n(G) → PB^b_n(G)`: identity on objects,
/// `(α, (x₁,x₂), …, (x₁,…,x_n)) ↦ (α, id_{x₂}, …, id_{x_n})`.
pub fn a_to_b(g: &FiniteGroupoid, n: usize) -> Result<GroupoidHom> {
    let a = pb_a_tower(g, n)?.pop().expect("n >= 1");
    let b = pb_b_config(g, n)?;
    if n == 1 {
        return Ok(GroupoidHom::identity(&a.groupoid));
    }
    let b_obj = index_tuples(&b.tuples);
    let b_mor = index_tuples(&b.components);
    let f0 = a.tuples.iter().map(|t| b_obj[t]).collect();
    let f1 = (0..a.groupoid.morphisms.len())
        .map(|m| {
            let x = &a.tuples[a.groupoid.source[m]];
            let mut comp = vec![a.first[m]];
            comp.extend(x[1..].iter().map(|&xi| g.unit[xi]));
            b_mor[&comp]
        })
        .collect();
    Ok(GroupoidHom {
        domain: a.groupoid,
        codomain: b.groupoid,
        f0,
        f1,
    })
}

/// Result of the discrete b-fibration test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationReport {
    pub surjective: bool,
    /// A pair `(β, y)` with `s(β) = f₀(y)` not of the form `(f₁(α), s(α))`.
    pub witness: Option<(Label, Label)>,
}

/// Surjectivity of `α ↦ (f₁(α), s(α))` onto `G₁ ×_{G₀} H₀`.
pub fn is_b_fibration_discrete(h: &GroupoidHom) -> FibrationReport {
    let (d, c) = (&h.domain, &h.codomain);
    let hit: BTreeSet<(usize, usize)> = (0..d.morphisms.len())
        .map(|a| (h.f1[a], d.source[a]))
        .collect();
    for y in 0..d.objects.len() {
        for beta in 0..c.morphisms.len() {
            if c.source[beta] == h.f0[y] && !hit.contains(&(beta, y)) {
                return FibrationReport {
                    surjective: false,
                    witness: Some((c.morphisms[beta].clone(), d.objects[y].clone())),
                };
            }
        }
    }
    FibrationReport {
        surjective: true,
        witness: None,
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub elements: Vec<Label>,
    /// `table[a][b]` is the product `ab`.
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn new(elements: Vec<Label>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::input("group table must be square over the element list"));
        }
        let g = Self { elements, table };
        let e = g.identity_index().ok_or_else(|| Error::input("group table has no identity"))?;
        for a in 0..n {
            if !(0..n).any(|b| g.table[a][b] == e && g.table[b][a] == e) {
                return Err(Error::input(format!("{} has no inverse", g.elements[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if g.table[g.table[a][b]][c] != g.table[a][g.table[b][c]] {
                        return Err(Error::input("group table is not associative"));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn cyclic(order: usize) -> Self {
        let elements = (0..order).map(|i| Label::atom(format!("g{i}"))).collect();
        let table = (0..order)
            .map(|a| (0..order).map(|b| (a + b) % order).collect())
            .collect();
        Self { elements, table }
    }

    pub fn trivial() -> Self {
        Self {
            elements: vec![Label::atom("e")],
            table: vec![vec![0]],
        }
    }

    pub fn klein() -> Self {
        let elements = ["e", "a", "b", "ab"].into_iter().map(Label::atom).collect();
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self { elements, table }
    }

    /// Direct power `Hⁿ` with tuple labels.
    pub fn power(&self, n: usize) -> Self {
        let k = self.order();
        let count = k.pow(n as u32);
        let digits = |mut idx: usize| -> Vec<usize> {
            let mut d = vec![0; n];
            for slot in d.iter_mut().rev() {
                *slot = idx % k;
                idx /= k;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().fold(0, |acc, &x| acc * k + x);
        let elements = (0..count)
            .map(|i| Label::Tuple(digits(i).into_iter().map(|x| self.elements[x].clone()).collect()))
            .collect();
        let table = (0..count)
            .map(|a| {
                let da = digits(a);
                (0..count)
                    .map(|b| {
                        let db = digits(b);
                        let prod: Vec<usize> = da.iter().zip(&db).map(|(&x, &y)| self.table[x][y]).collect();
                        encode(&prod)
                    })
                    .collect()
            })
            .collect();
        Self { elements, table }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn identity_index(&self) -> Option<usize> {
        let n = self.order();
        (0..n).find(|&e| (0..n).all(|a| self.table[e][a] == a && self.table[a][e] == a))
    }

    pub fn identity(&self) -> usize {
        self.identity_index().expect("validated group")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let e = self.identity();
        (0..self.order()).find(|&b| self.table[a][b] == e).expect("validated group")
    }

    /// All subgroups, as sorted element lists.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        assert!(n <= 16, "subgroup enumeration is exhaustive over subsets");
        let e = self.identity();
        (0u32..(1 << n))
            .filter(|mask| mask & (1 << e) != 0)
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.table[a][b]))))
            .collect()
    }
}

/// A left action of a finite group on a finite set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    pub points: Vec<Label>,
    pub group: FiniteGroup,
    /// `action[h][x]` is `h(x)`.
    pub action: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(points: Vec<Label>, group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let (np, ng) = (points.len(), group.order());
        if action.len() != ng || action.iter().any(|r| r.len() != np || r.iter().any(|&x| x >= np)) {
            return Err(Error::input("action table must be |H| x |M| over the points"));
        }
        let e = group.identity();
        if (0..np).any(|x| action[e][x] != x) {
            return Err(Error::input("identity does not act trivially"));
        }
        for g in 0..ng {
            for h in 0..ng {
                for x in 0..np {
                    if action[group.table[g][h]][x] != action[g][action[h][x]] {
                        return Err(Error::input(format!(
                            "not an action: ({} {})(x) ≠ {}({}(x)) at x = {}",
                            group.elements[g], group.elements[h], group.elements[g], group.elements[h], points[x]
                        )));
                    }
                }
            }
        }
        Ok(Self { points, group, action })
    }

    /// `H` acting trivially on `points`.
    pub fn trivial_on(points: Vec<Label>, group: FiniteGroup) -> Self {
        let action = vec![(0..points.len()).collect(); group.order()];
        Self { points, group, action }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(src).map_err(|e| Error::input(format!("bad action JSON: {e}")))?;
        let group = FiniteGroup::new(raw.group.elements, raw.group.table)?;
        Self::new(raw.points, group, raw.action)
    }

    /// Coordinatewise action of `Hⁿ` on `PB_n(M)`, the distinct-orbit tuples.
    pub fn configuration_action(&self, n: usize) -> Self {
        let g = translation_groupoid(self);
        let tuples = pb_objects(&g, n);
        let of = index_tuples(&tuples);
        let group = self.group.power(n);
        let k = self.group.order();
        let action = (0..group.order())
            .map(|h| {
                let mut digits = vec![0; n];
                let mut idx = h;
                for slot in digits.iter_mut().rev() {
                    *slot = idx % k;
                    idx /= k;
                }
                tuples
                    .iter()
                    .map(|t| {
                        let moved: Vec<usize> = t.iter().zip(&digits).map(|(&x, &hi)| self.action[hi][x]).collect();
                        of[&moved]
                    })
                    .collect()
            })
            .collect();
        Self {
            points: tuples.iter().map(|t| tuple_label(&g, t)).collect(),
            group,
            action,
        }
    }
}

/// Translation groupoid `G(M, H)`: morphisms `(h, x)` with `s = x`,
/// `t = h(x)`, `(h', h(x)) ∘ (h, x) = (h'h, x)`.
pub fn translation_groupoid(act: &GroupAction) -> FiniteGroupoid {
    let (np, ng) = (act.points.len(), act.group.order());
    let idx = |h: usize, x: usize| h * np + x;
    let e = act.group.identity();
    let mut morphisms = Vec::with_capacity(np * ng);
    let mut source = Vec::with_capacity(np * ng);
    let mut target = Vec::with_capacity(np * ng);
    let mut inverse = Vec::with_capacity(np * ng);
    for h in 0..ng {
        for x in 0..np {
            morphisms.push(Label::Tuple(vec![act.group.elements[h].clone(), act.points[x].clone()]));
            source.push(x);
            target.push(act.action[h][x]);
            inverse.push(idx(act.group.inverse(h), act.action[h][x]));
        }
    }
    let mut compose = HashMap::new();
    for h in 0..ng {
        for x in 0..np {
            let y = act.action[h][x];
            for h2 in 0..ng {
                compose.insert((idx(h2, y), idx(h, x)), idx(act.group.table[h2][h], x));
            }
        }
    }
    FiniteGroupoid {
        objects: act.points.clone(),
        morphisms,
        source,
        target,
        unit: (0..np).map(|x| idx(e, x)).collect(),
        inverse,
        compose,
    }
}

/// No non-identity element fixes a point.
pub fn is_free_action(act: &GroupAction) -> bool {
    let e = act.group.identity();
    (0..act.group.order())
        .filter(|&h| h != e)
        .all(|h| (0..act.points.len()).all(|x| act.action[h][x] != x))
}

/// The comparison `G(PB_n(M), Hⁿ) → PB^b_n(G(M, H))`,
/// `((h₁,…,h_n), x) ↦ ((h₁,x₁), …, (h_n,x_n))`.
pub fn translation_to_pb_b(act: &GroupAction, n: usize) -> Result<GroupoidHom> {
    let base = translation_groupoid(act);
    let conf = act.configuration_action(n);
    let domain = translation_groupoid(&conf);
    let b = pb_b_config(&base, n)?;
    let tuples = pb_objects(&base, n);
    let b_obj = index_tuples(&b.tuples);
    let b_mor = index_tuples(&b.components);
    let (np, k) = (act.points.len(), act.group.order());
    let f0 = tuples.iter().map(|t| b_obj[t]).collect();
    let f1 = (0..domain.morphisms.len())
        .map(|m| {
            let (h, xi) = (m / conf.points.len(), m % conf.points.len());
            let mut digits = vec![0; n];
            let mut idx = h;
            for slot in digits.iter_mut().rev() {
                *slot = idx % k;
                idx /= k;
            }
            let comp: Vec<usize> = digits
                .iter()
                .zip(&tuples[xi])
                .map(|(&hi, &x)| hi * np + x)
                .collect();
            b_mor[&comp]
        })
        .collect();
    Ok(GroupoidHom {
        domain,
        codomain: b.groupoid,
        f0,
        f1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: usize) -> Vec<Label> {
        (1..=n).map(|i| Label::atom(i.to_string())).collect()
    }

    fn swap_on(n: usize, swapped: &[(usize, usize)]) -> GroupAction {
        let mut g = (0..n).collect::<Vec<_>>();
        for &(a, b) in swapped {
            g.swap(a, b);
        }
        GroupAction::new(pts(n), FiniteGroup::cyclic(2), vec![(0..n).collect(), g]).unwrap()
    }

    fn unit_groupoid(n: usize) -> FiniteGroupoid {
        translation_groupoid(&GroupAction::trivial_on(pts(n), FiniteGroup::trivial()))
    }

    #[test]
    fn check_axioms_examples() {
        assert!(check_axioms(&unit_groupoid(3)).is_ok());
        let z2 = translation_groupoid(&swap_on(2, &[(0, 1)]));
        assert!(check_axioms(&z2).is_ok());

        let mut broken = z2.to_tables();
        // point the inverse of (g1,1) at the unit of 2
        broken.inverse[3] = broken.unit[1];
        let g = FiniteGroupoid::from_tables(broken).unwrap();
        let rep = check_axioms(&g);
        assert!(!rep.is_ok());
        assert!(rep.violations.iter().any(|v| v.detail.contains("(g1,2)")), "{rep:?}");
    }

    #[test]
    fn translation_groupoid_examples() {
        let act = swap_on(2, &[(0, 1)]);
        let g = translation_groupoid(&act);
        assert_eq!(g.morphism_count(), 4);
        assert_eq!(orbit(&g, 0), BTreeSet::from([0, 1]));

        let unit = unit_groupoid(3);
        assert_eq!(unit.morphism_count(), 3);
        assert!((0..3).all(|x| unit.isotropy(x) == vec![unit.unit(x)]));

        let fixing = translation_groupoid(&swap_on(3, &[(0, 1)]));
        assert_eq!(fixing.isotropy(2).len(), 2);
    }

    #[test]
    fn non_action_is_rejected() {
        // the "swap" on {1,2,3} that cycles instead has order 3, not 2
        let bad = GroupAction::new(pts(3), FiniteGroup::cyclic(2), vec![vec![0, 1, 2], vec![1, 2, 0]]);
        assert!(matches!(bad, Err(Error::Input(_))));
        assert!(FiniteGroup::new(vec![Label::atom("a"), Label::atom("b")], vec![vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn orbit_examples() {
        let unit = unit_groupoid(3);
        assert_eq!(orbit(&unit, 1), BTreeSet::from([1]));
        let g = translation_groupoid(&swap_on(3, &[(0, 1)]));
        assert_eq!(orbit(&g, 0), BTreeSet::from([0, 1]));
        assert_eq!(orbit(&g, 2), BTreeSet::from([2]));
    }

    #[test]
    fn pb_objects_examples() {
        assert_eq!(pb_objects(&unit_groupoid(3), 2).len(), 6);
        let free4 = translation_groupoid(&swap_on(4, &[(0, 1), (2, 3)]));
        // oracle: 2 ordered orbit choices, 2 representatives each
        let mut brute = 0;
        for a in 0..4 {
            for b in 0..4 {
                if orbit(&free4, a) != orbit(&free4, b) {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 8);
        assert_eq!(pb_objects(&free4, 2).len(), 8);
        assert!(pb_objects(&free4, 3).is_empty());
    }

    #[test]
    fn pb_a_examples() {
        let free4 = translation_groupoid(&swap_on(4, &[(0, 1), (2, 3)]));
        assert_eq!(pb_a(&free4, 1).unwrap(), free4);

        let unit = unit_groupoid(3);
        for n in 1..=3 {
            let g = pb_a(&unit, n).unwrap();
            assert_eq!(g.object_count(), pb_objects(&unit, n).len());
            assert_eq!(g.morphism_count(), g.object_count());
            assert!(check_axioms(&g).is_ok());
        }

        let g = pb_a(&free4, 2).unwrap();
        assert!(check_axioms(&g).is_ok());
        // one morphism per (x, α) with s(α) = x₁: 8 objects × |H| = 16
        let brute: usize = pb_objects(&free4, 2)
            .iter()
            .map(|x| (0..free4.morphism_count()).filter(|&a| free4.source(a) == x[0]).count())
            .sum();
        assert_eq!(brute, 16);
        assert_eq!(g.morphism_count(), brute);
        let lbl = g.morphisms()[0].to_string();
        assert!(lbl.starts_with("((g0,1),(1,3))"), "{lbl}");
    }

    #[test]
    fn pb_b_examples() {
        let free4 = translation_groupoid(&swap_on(4, &[(0, 1), (2, 3)]));
        assert_eq!(pb_b(&free4, 1).unwrap(), free4);
        let g = pb_b(&free4, 2).unwrap();
        assert!(check_axioms(&g).is_ok());
        assert_eq!(g.morphism_count(), 8 * 4);
        let iso = translation_to_pb_b(&swap_on(4, &[(0, 1), (2, 3)]), 2).unwrap();
        assert!(iso.is_bijective());
        assert!(check_hom(&iso).is_ok());

        let unit = unit_groupoid(3);
        let g = pb_b(&unit, 2).unwrap();
        assert_eq!(g.morphism_count(), g.object_count());
    }

    #[test]
    fn forget_hom_examples() {
        let unit = unit_groupoid(3);
        let h = forget_hom_a(&unit, 2).unwrap();
        assert!(check_hom(&h).is_ok());
        for (x, &fx) in h.f0.iter().enumerate() {
            let Label::Tuple(parts) = &h.domain.objects()[x] else { panic!() };
            assert_eq!(&parts[0], &h.codomain.objects()[fx]);
        }

        let free4 = translation_groupoid(&swap_on(4, &[(0, 1), (2, 3)]));
        let hb = forget_hom_b(&free4, 2).unwrap();
        assert!(check_hom(&hb).is_ok());
        for (a, &fa) in hb.f1.iter().enumerate() {
            let Label::Tuple(parts) = &hb.domain.morphisms()[a] else { panic!() };
            assert_eq!(&parts[0], &hb.codomain.morphisms()[fa]);
        }
        let ha = forget_hom_a(&free4, 2).unwrap();
        assert!(check_hom(&ha).is_ok());
        for (a, &fa) in ha.f1.iter().enumerate() {
            let Label::Tuple(parts) = &ha.domain.morphisms()[a] else { panic!() };
            assert_eq!(&parts[0], &ha.codomain.morphisms()[fa]);
        }
        assert!(forget_hom_a(&free4, 1).is_err());
        assert!(forget_hom_b(&free4, 1).is_err());
    }

    #[test]
    fn check_hom_examples() {
        let g = translation_groupoid(&swap_on(3, &[(0, 1)]));
        assert!(check_hom(&GroupoidHom::identity(&g)).is_ok());
        let mut bad = GroupoidHom::identity(&g);
        // send the swap at 1 to the identity at 1
        let swap1 = g.morphism_index(&Label::Tuple(vec![Label::atom("g1"), Label::atom("1")])).unwrap();
        bad.f1[swap1] = g.unit(0);
        let rep = check_hom(&bad);
        assert!(rep.violations.iter().any(|v| v.axiom == "(b)"), "{rep:?}");
    }

    #[test]
    fn b_fibration_examples() {
        let g = translation_groupoid(&swap_on(2, &[(0, 1)]));
        assert!(is_b_fibration_discrete(&GroupoidHom::identity(&g)).surjective);

        let free4 = translation_groupoid(&swap_on(4, &[(0, 1), (2, 3)]));
        assert!(is_b_fibration_discrete(&forget_hom_b(&free4, 2).unwrap()).surjective);

        // the unit groupoid on {1,2} mapped onto the pair groupoid on {1,2}:
        // the swap 1 -> 2 has no preimage out of 1
        let unit = unit_groupoid(2);
        let h = GroupoidHom {
            domain: unit.clone(),
            codomain: g.clone(),
            f0: vec![0, 1],
            f1: vec![g.unit(0), g.unit(1)],
        };
        assert!(check_hom(&h).is_ok());
        let rep = is_b_fibration_discrete(&h);
        assert!(!rep.surjective);
        let (beta, y) = rep.witness.unwrap();
        assert_eq!(beta.to_string(), "(g1,1)");
        assert_eq!(y.to_string(), "1");
    }

    #[test]
    fn a_to_b_examples() {
        let free4 = translation_groupoid(&swap_on(4, &[(0, 1), (2, 3)]));
        let h1 = a_to_b(&free4, 1).unwrap();
        assert_eq!(h1, GroupoidHom::identity(&free4));

        let h = a_to_b(&free4, 2).unwrap();
        assert!(check_hom(&h).is_ok());
        for (a, &fa) in h.f1.iter().enumerate() {
            let Label::Tuple(src) = &h.domain.morphisms()[a] else { panic!() };
            let Label::Tuple(dst) = &h.codomain.morphisms()[fa] else { panic!() };
            assert_eq!(src[0], dst[0]);
            let Label::Tuple(x) = &src[1] else { panic!() };
            assert_eq!(dst[1], Label::Tuple(vec![Label::atom("g0"), x[1].clone()]));
        }

        let unit = unit_groupoid(3);
        let h = a_to_b(&unit, 3).unwrap();
        assert!(check_hom(&h).is_ok());
        assert!(h.is_bijective());
    }

    #[test]
    fn free_action_examples() {
        assert!(is_free_action(&swap_on(2, &[(0, 1)])));
        assert!(!is_free_action(&swap_on(3, &[(0, 1)])));
        assert!(is_free_action(&GroupAction::trivial_on(pts(3), FiniteGroup::trivial())));
    }

    #[test]
    fn json_round_trip() {
        let act = swap_on(3, &[(0, 1)]);
        let text = serde_json::to_string(&act).unwrap();
        assert_eq!(GroupAction::from_json(&text).unwrap(), act);
        let g = translation_groupoid(&act);
        let tables = serde_json::to_string(&g.to_tables()).unwrap();
        let back: GroupoidTables = serde_json::from_str(&tables).unwrap();
        assert_eq!(FiniteGroupoid::from_tables(back).unwrap(), g);
    }
}
