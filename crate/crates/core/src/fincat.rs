//! Explicit finite categories, choices of trivial isomorphisms, quotients by
//! them, and brute-force enumeration of phased coproducts. `G-Set` for a
//! finite abelian group is built by enumerating action tables and
//! equivariant maps.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::phased::{CheckVerdict, Mode, PhasedCategory, PhasedError, PhasedStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("size limit exceeded: {what} (limit {limit})")]
    SizeLimit { what: String, limit: usize },
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("ill-formed category: {0}")]
    IllFormed(String),
    #[error("ill-formed choice of trivial isomorphisms: {0}")]
    IllFormedChoice(String),
    #[error("cannot parse category description: {0}")]
    Parse(String),
}

/// Largest underlying set accepted when enumerating `G`-sets.
pub const MAX_GSET_SIZE: usize = 4;
/// Largest number of morphisms a finite category may have.
pub const MAX_MORPHISMS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorInfo {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

#[derive(Debug, Clone)]
enum Composition {
    Table(HashMap<(usize, usize), usize>),
    /// Morphisms are functions between finite sets; `lookup` finds the id of
    /// a function given its domain, codomain and values.
    Functions { maps: Vec<Vec<u8>>, lookup: HashMap<(usize, usize, Vec<u8>), usize> },
}

/// A category with finitely many objects and morphisms.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<MorInfo>,
    homs: Vec<Vec<Vec<usize>>>,
    identities: Vec<usize>,
    composition: Composition,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteCategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, g∘f]` by morphism name.
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

fn hom_table(n: usize, morphisms: &[MorInfo]) -> Vec<Vec<Vec<usize>>> {
    let mut homs = vec![vec![Vec::new(); n]; n];
    for (id, m) in morphisms.iter().enumerate() {
        homs[m.dom][m.cod].push(id);
    }
    homs
}

impl FiniteCategory {
    /// Builds and validates a category from its JSON description: identity
    /// laws and associativity are checked exhaustively.
    pub fn from_json(text: &str) -> Result<Self, FinCatError> {
        let desc: FiniteCategoryJson = serde_json::from_str(text).map_err(|e| FinCatError::Parse(e.to_string()))?;
        Self::from_description(&desc)
    }

    pub fn from_description(desc: &FiniteCategoryJson) -> Result<Self, FinCatError> {
        let obj_index: HashMap<&str, usize> = desc.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        if obj_index.len() != desc.objects.len() {
            return Err(FinCatError::IllFormed("duplicate object name".into()));
        }
        if desc.morphisms.len() > MAX_MORPHISMS {
            return Err(FinCatError::SizeLimit { what: "morphisms".into(), limit: MAX_MORPHISMS });
        }
        let obj = |name: &str| {
            obj_index.get(name).copied().ok_or_else(|| FinCatError::IllFormed(format!("unknown object {name}")))
        };
        let mut morphisms = Vec::new();
        let mut mor_index = HashMap::new();
        for m in &desc.morphisms {
            if mor_index.insert(m.name.clone(), morphisms.len()).is_some() {
                return Err(FinCatError::IllFormed(format!("duplicate morphism {}", m.name)));
            }
            morphisms.push(MorInfo { name: m.name.clone(), dom: obj(&m.dom)?, cod: obj(&m.cod)? });
        }
        let mor = |name: &str| {
            mor_index.get(name).copied().ok_or_else(|| FinCatError::IllFormed(format!("unknown morphism {name}")))
        };
        let mut identities = vec![usize::MAX; desc.objects.len()];
        for (o, m) in &desc.identities {
            let (o, m) = (obj(o)?, mor(m)?);
            if morphisms[m].dom != o || morphisms[m].cod != o {
                return Err(FinCatError::IllFormed(format!("identity {} is not an endomorphism", morphisms[m].name)));
            }
            identities[o] = m;
        }
        if let Some(o) = identities.iter().position(|&m| m == usize::MAX) {
            return Err(FinCatError::IllFormed(format!("object {} has no identity", desc.objects[o])));
        }
        let mut table = HashMap::new();
        for [g, f, gf] in &desc.compose {
            let (g, f, gf) = (mor(g)?, mor(f)?, mor(gf)?);
            if morphisms[f].cod != morphisms[g].dom
                || morphisms[gf].dom != morphisms[f].dom
                || morphisms[gf].cod != morphisms[g].cod
            {
                return Err(FinCatError::IllFormed(format!(
                    "composite {} ∘ {} = {} has the wrong type",
                    morphisms[g].name, morphisms[f].name, morphisms[gf].name
                )));
            }
            if table.insert((g, f), gf).is_some_and(|prev| prev != gf) {
                return Err(FinCatError::IllFormed("conflicting composites".into()));
            }
        }
        // identities compose trivially even if the table leaves them out
        for (f, m) in morphisms.iter().enumerate() {
            table.entry((identities[m.cod], f)).or_insert(f);
            table.entry((f, identities[m.dom])).or_insert(f);
        }
        let homs = hom_table(desc.objects.len(), &morphisms);
        let cat = FiniteCategory {
            objects: desc.objects.clone(),
            morphisms,
            homs,
            identities,
            composition: Composition::Table(table),
        };
        cat.validate()?;
        Ok(cat)
    }

    /// Exhaustive check of totality, identity laws and associativity.
    pub fn validate(&self) -> Result<(), FinCatError> {
        for f in 0..self.morphisms.len() {
            let (a, b) = (self.dom(f), self.cod(f));
            if self.compose(self.identities[b], f) != Some(f) || self.compose(f, self.identities[a]) != Some(f) {
                return Err(FinCatError::IllFormed(format!("identity law fails at {}", self.morphisms[f].name)));
            }
            for c in 0..self.objects.len() {
                for &g in &self.homs[b][c] {
                    let gf = self
                        .compose(g, f)
                        .ok_or_else(|| FinCatError::IllFormed(format!("missing composite of {} and {}", g, f)))?;
                    for d in 0..self.objects.len() {
                        for &h in &self.homs[c][d] {
                            let left = self.compose(h, gf);
                            let right = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                            if left.is_none() || left != right {
                                return Err(FinCatError::IllFormed(format!(
                                    "associativity fails at ({}, {}, {})",
                                    self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn morphism(&self, f: usize) -> &MorInfo {
        &self.morphisms[f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a][b]
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    /// `g ∘ f`, or `None` when the types do not match.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        match &self.composition {
            Composition::Table(t) => t.get(&(g, f)).copied(),
            Composition::Functions { maps, lookup } => {
                let values: Vec<u8> = maps[f].iter().map(|&x| maps[g][x as usize]).collect();
                lookup.get(&(self.dom(f), self.cod(g), values)).copied()
            }
        }
    }

    /// The underlying function of a morphism of a concrete category.
    pub fn function(&self, f: usize) -> Option<&[u8]> {
        match &self.composition {
            Composition::Functions { maps, .. } => Some(&maps[f]),
            Composition::Table(_) => None,
        }
    }

    /// Morphism id of the function `values : a → b`, if it is a morphism.
    pub fn lookup_function(&self, a: usize, b: usize, values: &[u8]) -> Option<usize> {
        match &self.composition {
            Composition::Functions { lookup, .. } => lookup.get(&(a, b, values.to_vec())).copied(),
            Composition::Table(_) => None,
        }
    }

    pub fn is_iso(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.homs[b][a]
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == Some(self.identities[a]) && self.compose(f, g) == Some(self.identities[b]))
    }

    pub fn automorphisms(&self, a: usize) -> Vec<usize> {
        self.homs[a][a].iter().copied().filter(|&f| self.is_iso(f).is_some()).collect()
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    name: String,
}

impl FiniteGroup {
    /// Validates a Cayley table: closure, identity, inverses, associativity,
    /// commutativity.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self, FinCatError> {
        let n = table.len();
        if n == 0 {
            return Err(FinCatError::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(FinCatError::InvalidGroup("table is not a closed square".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| FinCatError::InvalidGroup("no identity".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == identity) {
                return Err(FinCatError::InvalidGroup(format!("element {x} has no inverse")));
            }
            for y in 0..n {
                if table[x][y] != table[y][x] {
                    return Err(FinCatError::InvalidGroup("group is not abelian".into()));
                }
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(FinCatError::InvalidGroup("not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, name: name.to_string() })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let name = if n == 1 { "trivial".to_string() } else { format!("Z{n}") };
        FiniteGroup::from_table(&name, table).expect("cyclic groups are abelian")
    }

    /// Parses `trivial`, `Z<n>`.
    pub fn by_name(name: &str) -> Result<Self, FinCatError> {
        match name {
            "trivial" | "Z1" => Ok(Self::cyclic(1)),
            other => {
                let n: usize = other
                    .strip_prefix('Z')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| FinCatError::InvalidGroup(format!("unknown group {other}")))?;
                if n == 0 || n > 8 {
                    return Err(FinCatError::InvalidGroup(format!("cyclic order {n} outside 1..=8")));
                }
                Ok(Self::cyclic(n))
            }
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A subgroup `T_A ⊆ Aut(A)` for each object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialIsoChoice {
    pub sets: Vec<Vec<usize>>,
}

impl TrivialIsoChoice {
    pub fn trivial(cat: &FiniteCategory) -> Self {
        TrivialIsoChoice { sets: (0..cat.num_objects()).map(|a| vec![cat.identity(a)]).collect() }
    }

    /// Subgroup conditions and the transport condition
    /// `∀ f : A → B, p_B ∈ T_B. ∃ p_A ∈ T_A. p_B ∘ f = f ∘ p_A`.
    pub fn validate(&self, cat: &FiniteCategory) -> Result<(), FinCatError> {
        if self.sets.len() != cat.num_objects() {
            return Err(FinCatError::IllFormedChoice("one subset per object required".into()));
        }
        for (a, set) in self.sets.iter().enumerate() {
            if !set.contains(&cat.identity(a)) {
                return Err(FinCatError::IllFormedChoice(format!("T of {} lacks the identity", cat.object_name(a))));
            }
            for &p in set {
                if cat.dom(p) != a || cat.cod(p) != a {
                    return Err(FinCatError::IllFormedChoice(format!("{} is not an endomorphism", cat.morphism(p).name)));
                }
                let inv = cat
                    .is_iso(p)
                    .ok_or_else(|| FinCatError::IllFormedChoice(format!("{} is not invertible", cat.morphism(p).name)))?;
                if !set.contains(&inv) {
                    return Err(FinCatError::IllFormedChoice("not closed under inverses".into()));
                }
                for &q in set {
                    if !set.contains(&cat.compose(p, q).expect("endomorphisms compose")) {
                        return Err(FinCatError::IllFormedChoice("not closed under composition".into()));
                    }
                }
            }
        }
        for f in 0..cat.num_morphisms() {
            let (a, b) = (cat.dom(f), cat.cod(f));
            for &pb in &self.sets[b] {
                let left = cat.compose(pb, f);
                if !self.sets[a].iter().any(|&pa| cat.compose(f, pa) == left) {
                    return Err(FinCatError::IllFormedChoice(format!(
                        "transport fails for {} and {}",
                        cat.morphism(f).name,
                        cat.morphism(pb).name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `G-Set` restricted to underlying sets `{0, …, k-1}` with `k ≤ max_set_size`.
#[derive(Debug, Clone)]
pub struct GSetCategory {
    pub group: FiniteGroup,
    pub category: Arc<FiniteCategory>,
    /// `actions[object][g][x] = g·x`.
    pub actions: Vec<Vec<Vec<u8>>>,
    pub choice: TrivialIsoChoice,
}

/// Enumerates all `G`-sets of size at most `max_set_size` (as action tables,
/// not up to isomorphism) and all equivariant maps between them. The trivial
/// isomorphisms on `A` are the translations `a ↦ g·a`.
pub fn build_gset_category(group: &FiniteGroup, max_set_size: usize) -> Result<GSetCategory, FinCatError> {
    if max_set_size > MAX_GSET_SIZE {
        return Err(FinCatError::SizeLimit { what: format!("G-sets of size {max_set_size}"), limit: MAX_GSET_SIZE });
    }
    let n = group.order();
    let mut actions: Vec<Vec<Vec<u8>>> = Vec::new();
    for k in 0..=max_set_size {
        let total = (k as u64).pow((k * n) as u32);
        if total > 1_000_000 {
            return Err(FinCatError::SizeLimit { what: format!("{total} candidate actions"), limit: 1_000_000 });
        }
        for code in 0..total.max(1) {
            if k == 0 && code > 0 {
                break;
            }
            let mut c = code;
            let mut act = vec![vec![0u8; k]; n];
            for row in act.iter_mut() {
                for v in row.iter_mut() {
                    *v = (c % k as u64) as u8;
                    c /= k as u64;
                }
            }
            let unit_ok = (0..k).all(|x| act[group.identity()][x] as usize == x);
            let compat = (0..n).all(|g| {
                (0..n).all(|h| (0..k).all(|x| act[g][act[h][x] as usize] == act[group.mul(g, h)][x]))
            });
            if unit_ok && compat {
                actions.push(act);
            }
        }
    }
    let sizes: Vec<usize> = actions.iter().map(|a| a[0].len()).collect();
    let mut morphisms = Vec::new();
    let mut maps: Vec<Vec<u8>> = Vec::new();
    let mut lookup = HashMap::new();
    for a in 0..actions.len() {
        for b in 0..actions.len() {
            let (ka, kb) = (sizes[a], sizes[b]);
            let total = (kb as u64).pow(ka as u32);
            for code in 0..total {
                let mut c = code;
                let f: Vec<u8> = (0..ka)
                    .map(|_| {
                        let v = (c % kb as u64) as u8;
                        c /= kb as u64;
                        v
                    })
                    .collect();
                let equivariant = (0..n).all(|g| {
                    (0..ka).all(|x| f[actions[a][g][x] as usize] == actions[b][g][f[x] as usize])
                });
                if equivariant {
                    if morphisms.len() >= MAX_MORPHISMS {
                        return Err(FinCatError::SizeLimit { what: "equivariant maps".into(), limit: MAX_MORPHISMS });
                    }
                    lookup.insert((a, b, f.clone()), morphisms.len());
                    morphisms.push(MorInfo { name: format!("{a}->{b}:{f:?}"), dom: a, cod: b });
                    maps.push(f);
                }
            }
        }
    }
    let objects: Vec<String> = actions.iter().map(|act| gset_name(act, group)).collect();
    let identities = (0..actions.len())
        .map(|a| lookup[&(a, a, (0..sizes[a] as u8).collect::<Vec<u8>>())])
        .collect();
    let homs = hom_table(actions.len(), &morphisms);
    let category = FiniteCategory { objects, morphisms, homs, identities, composition: Composition::Functions { maps, lookup } };
    let sets = (0..actions.len())
        .map(|a| {
            let mut set: Vec<usize> = (0..n)
                .map(|g| category.lookup_function(a, a, &actions[a][g]).expect("translations are equivariant"))
                .collect();
            set.sort();
            set.dedup();
            set
        })
        .collect();
    let choice = TrivialIsoChoice { sets };
    Ok(GSetCategory { group: group.clone(), category: Arc::new(category), actions, choice })
}

fn gset_name(act: &[Vec<u8>], group: &FiniteGroup) -> String {
    let k = act[0].len();
    let gens: Vec<String> = (0..group.order())
        .filter(|&g| g != group.identity())
        .map(|g| act[g].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    if gens.is_empty() {
        format!("{k}")
    } else {
        format!("{k}<{}>", gens.join(","))
    }
}

impl GSetCategory {
    pub fn size(&self, a: usize) -> usize {
        self.actions[a][0].len()
    }

    /// The object whose action table is the given one.
    pub fn find_object(&self, act: &[Vec<u8>]) -> Option<usize> {
        self.actions.iter().position(|a| a.as_slice() == act)
    }

    /// `A ⊔ B` with `A`'s points first, and the two inclusions, if the union
    /// fits within the size bound.
    pub fn disjoint_union(&self, a: usize, b: usize) -> Option<(usize, usize, usize)> {
        let (ka, kb) = (self.size(a), self.size(b));
        let act: Vec<Vec<u8>> = (0..self.group.order())
            .map(|g| {
                let mut row = self.actions[a][g].clone();
                row.extend(self.actions[b][g].iter().map(|&x| x + ka as u8));
                row
            })
            .collect();
        let u = self.find_object(&act)?;
        let ia: Vec<u8> = (0..ka as u8).collect();
        let ib: Vec<u8> = (ka as u8..(ka + kb) as u8).collect();
        Some((u, self.category.lookup_function(a, u, &ia)?, self.category.lookup_function(b, u, &ib)?))
    }

    /// The group acting on itself by translation.
    pub fn regular_orbit(&self) -> Option<usize> {
        let n = self.group.order();
        let act: Vec<Vec<u8>> = (0..n).map(|g| (0..n).map(|x| self.group.mul(g, x) as u8).collect()).collect();
        self.find_object(&act)
    }

    pub fn empty(&self) -> usize {
        self.find_object(&vec![vec![]; self.group.order()]).expect("the empty G-set is always present")
    }

    pub fn point(&self) -> Option<usize> {
        self.find_object(&vec![vec![0]; self.group.order()])
    }

    /// The quotient by translations, with well-definedness of composition
    /// checked exhaustively when `check_classes` is set.
    pub fn quotient(&self, check_classes: bool) -> Result<FiniteQuotient, FinCatError> {
        let mut q = quotient_finite(self.category.clone(), &self.choice, check_classes)?;
        let mut hints = HashMap::new();
        for a in 0..self.actions.len() {
            for b in 0..self.actions.len() {
                if let Some((u, ka, kb)) = self.disjoint_union(a, b) {
                    hints.insert((a, b), (u, q.class_of(ka), q.class_of(kb)));
                }
            }
        }
        q.coproduct_hints = hints;
        Ok(q)
    }

    /// Predicted phases of a witness whose coprojections jointly cover the
    /// apex: classes of the maps acting by `g_i` on the image of summand `i`.
    pub fn predicted_phases(&self, q: &FiniteQuotient, w: &PhasedCoproductWitness) -> Option<Vec<usize>> {
        let cat = &self.category;
        let apex_size = self.size(w.apex);
        let mut owner: Vec<Option<(usize, usize)>> = vec![None; apex_size];
        for (i, &k) in w.coprojections.iter().enumerate() {
            let f = cat.function(q.rep(k))?;
            for (a, &x) in f.iter().enumerate() {
                if owner[x as usize].is_some() {
                    return None;
                }
                owner[x as usize] = Some((i, a));
            }
        }
        if owner.iter().any(Option::is_none) {
            return None;
        }
        let n = self.group.order();
        let mut out = Vec::new();
        let mut choice = vec![0usize; w.summands.len()];
        loop {
            let values: Vec<u8> = owner
                .iter()
                .map(|o| {
                    let (i, a) = o.expect("covered");
                    let kf = cat.function(q.rep(w.coprojections[i])).expect("concrete");
                    kf[self.actions[w.summands[i]][choice[i]][a] as usize]
                })
                .collect();
            let u = cat.lookup_function(w.apex, w.apex, &values)?;
            let c = q.class_of(u);
            if !out.contains(&c) {
                out.push(c);
            }
            let mut pos = choice.len();
            loop {
                if pos == 0 {
                    out.sort();
                    return Some(out);
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < n {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }
}

/// A quotient `C/∼` by a choice of trivial isomorphisms: `f ∼ g` iff
/// `f = g ∘ p` for some `p ∈ T_dom`.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    base: Arc<FiniteCategory>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_dom: Vec<usize>,
    class_cod: Vec<usize>,
    homs: Vec<Vec<Vec<usize>>>,
    /// Known binary phased coproducts `(A, B) ↦ (apex, [κ_A], [κ_B])`.
    coproduct_hints: HashMap<(usize, usize), (usize, usize, usize)>,
}

/// Forms the quotient, validating the choice first. With `check_classes`, the
/// independence of class composition from representatives is verified over
/// every composable pair of classes and every pair of members.
pub fn quotient_finite(
    base: Arc<FiniteCategory>,
    choice: &TrivialIsoChoice,
    check_classes: bool,
) -> Result<FiniteQuotient, FinCatError> {
    choice.validate(&base)?;
    let mut class_of = vec![usize::MAX; base.num_morphisms()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for f in 0..base.num_morphisms() {
        if class_of[f] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members: Vec<usize> = choice.sets[base.dom(f)]
            .iter()
            .map(|&p| base.compose(f, p).expect("trivial isos are endomorphisms"))
            .collect();
        members.sort();
        members.dedup();
        for &m in &members {
            if class_of[m] != usize::MAX {
                return Err(FinCatError::IllFormedChoice("classes overlap".into()));
            }
            class_of[m] = id;
        }
        classes.push(members);
    }
    let class_dom: Vec<usize> = classes.iter().map(|c| base.dom(c[0])).collect();
    let class_cod: Vec<usize> = classes.iter().map(|c| base.cod(c[0])).collect();
    let n = base.num_objects();
    let mut homs = vec![vec![Vec::new(); n]; n];
    for (c, members) in classes.iter().enumerate() {
        homs[base.dom(members[0])][base.cod(members[0])].push(c);
    }
    let q = FiniteQuotient { base, class_of, classes, class_dom, class_cod, homs, coproduct_hints: HashMap::new() };
    if check_classes {
        for f in 0..q.classes.len() {
            for &g in &q.homs[q.class_cod[f]].concat() {
                let expected = q.compose(g, f).expect("composable");
                for &fm in &q.classes[f] {
                    for &gm in &q.classes[g] {
                        if q.class_of[q.base.compose(gm, fm).expect("composable")] != expected {
                            return Err(FinCatError::IllFormedChoice(format!(
                                "composite class depends on representatives ({gm}, {fm})"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(q)
}

impl FiniteQuotient {
    pub fn base(&self) -> &FiniteCategory {
        &self.base
    }

    pub fn num_objects(&self) -> usize {
        self.base.num_objects()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, f: usize) -> usize {
        self.class_of[f]
    }

    /// The least member of a class.
    pub fn rep(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a][b]
    }

    pub fn dom(&self, c: usize) -> usize {
        self.class_dom[c]
    }

    pub fn cod(&self, c: usize) -> usize {
        self.class_cod[c]
    }

    pub fn identity(&self, a: usize) -> usize {
        self.class_of[self.base.identity(a)]
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.base.compose(self.rep(g), self.rep(f)).map(|m| self.class_of[m])
    }

    fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).expect("composable classes")
    }

    /// Endomorphism classes of `apex` fixing every coprojection.
    pub fn coprojection_preserving(&self, apex: usize, coprojections: &[usize]) -> Vec<usize> {
        self.homs[apex][apex]
            .iter()
            .copied()
            .filter(|&u| coprojections.iter().all(|&k| self.comp(u, k) == k))
            .collect()
    }
}

/// A verified phased coproduct in a finite quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhasedCoproductWitness {
    pub summands: Vec<usize>,
    pub apex: usize,
    pub coprojections: Vec<usize>,
    pub phases: Vec<usize>,
}

/// Why a candidate apex failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// No mediating map for these legs into `target`.
    NoMediator { target: usize, legs: Vec<usize> },
    /// Two mediating maps not related by any phase.
    Unrelated { h: usize, h_prime: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedCandidate {
    pub apex: usize,
    pub coprojections: Vec<usize>,
    pub reason: Rejection,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub witnesses: Vec<PhasedCoproductWitness>,
    pub rejected: Vec<RejectedCandidate>,
    pub candidates: usize,
}

fn tuples(choices: &[&[usize]]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::new();
        for t in &out {
            for &x in c.iter() {
                let mut t2 = t.clone();
                t2.push(x);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Checks both clauses for one candidate. `Ok` carries the phases.
fn check_candidate(q: &FiniteQuotient, summands: &[usize], apex: usize, ks: &[usize]) -> Result<Vec<usize>, Rejection> {
    let phases = q.coprojection_preserving(apex, ks);
    for y in 0..q.num_objects() {
        let mut fibers: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for &h in q.hom(apex, y) {
            let key: Vec<usize> = ks.iter().map(|&k| q.comp(h, k)).collect();
            fibers.entry(key).or_default().push(h);
        }
        let legs: Vec<&[usize]> = summands.iter().map(|&a| q.hom(a, y)).collect();
        for t in tuples(&legs) {
            if !fibers.contains_key(&t) {
                return Err(Rejection::NoMediator { target: y, legs: t });
            }
        }
        for fiber in fibers.values() {
            for &h in fiber {
                for &h2 in fiber {
                    if !phases.iter().any(|&u| q.comp(h, u) == h2) {
                        return Err(Rejection::Unrelated { h, h_prime: h2 });
                    }
                }
            }
        }
    }
    Ok(phases)
}

/// Every apex and coprojection tuple satisfying both clauses under full
/// quantification, plus a log of rejected candidates.
pub fn enumerate_phased_coproducts(q: &FiniteQuotient, summands: &[usize]) -> EnumerationReport {
    let mut report = EnumerationReport::default();
    for apex in 0..q.num_objects() {
        let choices: Vec<&[usize]> = summands.iter().map(|&a| q.hom(a, apex)).collect();
        for ks in tuples(&choices) {
            report.candidates += 1;
            match check_candidate(q, summands, apex, &ks) {
                Ok(phases) => report.witnesses.push(PhasedCoproductWitness {
                    summands: summands.to_vec(),
                    apex,
                    coprojections: ks,
                    phases,
                }),
                Err(reason) => report.rejected.push(RejectedCandidate { apex, coprojections: ks, reason }),
            }
        }
    }
    report
}

/// The first witness over `summands`, searching apexes in order.
pub fn first_phased_coproduct(q: &FiniteQuotient, summands: &[usize]) -> Option<PhasedCoproductWitness> {
    for apex in 0..q.num_objects() {
        let choices: Vec<&[usize]> = summands.iter().map(|&a| q.hom(a, apex)).collect();
        for ks in tuples(&choices) {
            if let Ok(phases) = check_candidate(q, summands, apex, &ks) {
                return Some(PhasedCoproductWitness { summands: summands.to_vec(), apex, coprojections: ks, phases });
            }
        }
    }
    None
}

/// Re-verifies a witness with plain nested loops over the hom-sets, sharing
/// no code with the enumerator.
pub fn naive_verify(q: &FiniteQuotient, w: &PhasedCoproductWitness) -> bool {
    let n = q.num_objects();
    let ks = &w.coprojections;
    for y in 0..n {
        let legs: Vec<&[usize]> = w.summands.iter().map(|&a| q.hom(a, y)).collect();
        for t in tuples(&legs) {
            let exists = q.hom(w.apex, y).iter().any(|&h| ks.iter().zip(&t).all(|(&k, &f)| q.compose(h, k) == Some(f)));
            if !exists {
                return false;
            }
        }
        for &h in q.hom(w.apex, y) {
            for &h2 in q.hom(w.apex, y) {
                let same = ks.iter().all(|&k| q.compose(h, k) == q.compose(h2, k));
                if !same {
                    continue;
                }
                let related = q.hom(w.apex, w.apex).iter().any(|&u| {
                    ks.iter().all(|&k| q.compose(u, k) == Some(k)) && q.compose(h, u) == Some(h2)
                });
                if !related {
                    return false;
                }
            }
        }
    }
    let mut listed = w.phases.clone();
    listed.sort();
    let mut actual: Vec<usize> = q
        .hom(w.apex, w.apex)
        .iter()
        .copied()
        .filter(|&u| ks.iter().all(|&k| q.compose(u, k) == Some(k)))
        .collect();
    actual.sort();
    listed == actual
}

/// Transitivity for two witnesses over summands of the same length: every
/// diagonal `f` and phase `U` of `w1` admit a phase `V` of `w2` with
/// `f ∘ U = V ∘ f`.
pub fn check_transitive_phases(
    q: &FiniteQuotient,
    w1: &PhasedCoproductWitness,
    w2: &PhasedCoproductWitness,
) -> CheckVerdict {
    if w1.summands.len() != w2.summands.len() {
        return CheckVerdict::Unknown("witnesses have different arity".into());
    }
    for &f in q.hom(w1.apex, w2.apex) {
        let diagonal = w1.coprojections.iter().zip(&w2.coprojections).enumerate().all(|(i, (&k, &mu))| {
            let fk = q.comp(f, k);
            q.hom(w1.summands[i], w2.summands[i]).iter().any(|&g| q.comp(mu, g) == fk)
        });
        if !diagonal {
            continue;
        }
        for &u in &w1.phases {
            let fu = q.comp(f, u);
            if !w2.phases.iter().any(|&v| q.comp(v, f) == fu) {
                return CheckVerdict::Refuted(json!({ "diagonal": f, "phase": u }));
            }
        }
    }
    CheckVerdict::Holds(Mode::Exhaustive)
}

impl PhasedCategory for FiniteQuotient {
    type Obj = usize;
    type Mor = usize;

    fn dom(&self, f: &usize) -> usize {
        FiniteQuotient::dom(self, *f)
    }

    fn cod(&self, f: &usize) -> usize {
        FiniteQuotient::cod(self, *f)
    }

    fn identity(&self, a: &usize) -> usize {
        FiniteQuotient::identity(self, *a)
    }

    fn compose(&self, g: &usize, f: &usize) -> Result<usize, PhasedError> {
        FiniteQuotient::compose(self, *g, *f).ok_or_else(|| PhasedError::DimMismatch(format!("{g} after {f}")))
    }

    fn phased_coproduct(&self, summands: &[usize]) -> Result<PhasedStructure<usize, usize>, PhasedError> {
        if let [a, b] = summands {
            if let Some(&(apex, ka, kb)) = self.coproduct_hints.get(&(*a, *b)) {
                let ks = vec![ka, kb];
                let phases = self.coprojection_preserving(apex, &ks);
                return Ok(PhasedStructure { summands: summands.to_vec(), apex, coprojections: ks, projections: None, phases });
            }
        }
        let w = first_phased_coproduct(self, summands)
            .ok_or_else(|| PhasedError::Backend(format!("no phased coproduct of {summands:?} within the size bound")))?;
        Ok(PhasedStructure {
            summands: w.summands,
            apex: w.apex,
            coprojections: w.coprojections,
            projections: None,
            phases: w.phases,
        })
    }

    fn copair(&self, s: &PhasedStructure<usize, usize>, legs: &[usize]) -> Result<usize, PhasedError> {
        let y = legs.first().map(|&l| FiniteQuotient::cod(self, l)).ok_or_else(|| PhasedError::DimMismatch("no legs".into()))?;
        self.hom(s.apex, y)
            .iter()
            .copied()
            .find(|&h| s.coprojections.iter().zip(legs).all(|(&k, &l)| self.compose(h, k) == Some(l)))
            .ok_or_else(|| PhasedError::NoMediatingMap(format!("legs {legs:?}")))
    }

    fn copair_alt(&self, s: &PhasedStructure<usize, usize>, legs: &[usize]) -> Result<usize, PhasedError> {
        let y = legs.first().map(|&l| FiniteQuotient::cod(self, l)).ok_or_else(|| PhasedError::DimMismatch("no legs".into()))?;
        self.hom(s.apex, y)
            .iter()
            .rev()
            .copied()
            .find(|&h| s.coprojections.iter().zip(legs).all(|(&k, &l)| self.compose(h, k) == Some(l)))
            .ok_or_else(|| PhasedError::NoMediatingMap(format!("legs {legs:?}")))
    }
}

impl fmt::Display for PhasedCoproductWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "apex {} via {:?}, {} phase(s)", self.apex, self.coprojections, self.phases.len())
    }
}

/// Objects with a unique morphism to every object.
pub fn initial_objects(q: &FiniteQuotient) -> Vec<usize> {
    (0..q.num_objects()).filter(|&a| (0..q.num_objects()).all(|b| q.hom(a, b).len() == 1)).collect()
}

/// Summary counts for reports.
pub fn hom_counts(q: &FiniteQuotient) -> Vec<Vec<usize>> {
    (0..q.num_objects()).map(|a| (0..q.num_objects()).map(|b| q.hom(a, b).len()).collect()).collect()
}

/// Distinct classes reachable as composites, used to sanity-check tables.
pub fn reachable_classes(q: &FiniteQuotient) -> usize {
    let mut seen = HashSet::new();
    for f in 0..q.num_classes() {
        for a in 0..q.num_objects() {
            for &g in q.hom(q.cod(f), a) {
                seen.insert(q.comp(g, f));
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(size: usize) -> GSetCategory {
        build_gset_category(&FiniteGroup::cyclic(2), size).unwrap()
    }

    #[test]
    fn z2_small_objects_and_homs() {
        let g = z2(2);
        assert_eq!(g.category.num_objects(), 4);
        let free = g.regular_orbit().unwrap();
        let point = g.point().unwrap();
        assert_eq!(g.category.hom(free, free).len(), 2);
        assert_eq!(g.category.hom(point, free).len(), 0);
        assert_eq!(g.category.hom(free, point).len(), 1);
    }

    #[test]
    fn z2_up_to_four_counts_actions() {
        // involutions on k points: 1, 1, 2, 4, 10
        assert_eq!(z2(4).category.num_objects(), 18);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(build_gset_category(&FiniteGroup::cyclic(2), 5), Err(FinCatError::SizeLimit { .. })));
    }

    #[test]
    fn trivial_group_gives_plain_sets() {
        let g = build_gset_category(&FiniteGroup::cyclic(1), 2).unwrap();
        assert_eq!(g.category.num_objects(), 3);
        assert!(g.choice.sets.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn z3_transport_condition() {
        let g = build_gset_category(&FiniteGroup::cyclic(3), 3).unwrap();
        assert!(g.choice.validate(&g.category).is_ok());
        assert_eq!(g.category.num_objects(), 6);
    }

    #[test]
    fn quotient_collapses_free_orbit() {
        let g = z2(2);
        let q = g.quotient(true).unwrap();
        let free = g.regular_orbit().unwrap();
        assert_eq!(q.hom(free, free).len(), 1);
    }

    #[test]
    fn trivial_choice_is_isomorphic() {
        let g = z2(2);
        let q = quotient_finite(g.category.clone(), &TrivialIsoChoice::trivial(&g.category), true).unwrap();
        assert_eq!(q.num_classes(), g.category.num_morphisms());
    }

    #[test]
    fn ill_formed_choice_is_rejected() {
        let g = z2(2);
        let mut bad = TrivialIsoChoice::trivial(&g.category);
        let free = g.regular_orbit().unwrap();
        bad.sets[free] = vec![];
        assert!(matches!(bad.validate(&g.category), Err(FinCatError::IllFormedChoice(_))));
    }

    #[test]
    fn non_abelian_or_broken_tables_are_rejected() {
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::by_name("Q8").is_err());
    }

    #[test]
    fn json_category_roundtrip() {
        let text = r#"{
            "objects": ["A", "B"],
            "morphisms": [
                {"name": "1A", "dom": "A", "cod": "A"},
                {"name": "1B", "dom": "B", "cod": "B"},
                {"name": "f", "dom": "A", "cod": "B"}
            ],
            "identities": {"A": "1A", "B": "1B"},
            "compose": []
        }"#;
        let c = FiniteCategory::from_json(text).unwrap();
        assert_eq!(c.num_morphisms(), 3);
        assert_eq!(c.compose(2, 0), Some(2));
        let broken = text.replace("\"B\": \"1B\"", "\"B\": \"f\"");
        assert!(FiniteCategory::from_json(&broken).is_err());
    }

    #[test]
    fn free_plus_free_has_two_phases() {
        let g = z2(4);
        let q = g.quotient(false).unwrap();
        let free = g.regular_orbit().unwrap();
        let (apex, ka, kb) = g.disjoint_union(free, free).unwrap();
        let w = PhasedCoproductWitness {
            summands: vec![free, free],
            apex,
            coprojections: vec![q.class_of(ka), q.class_of(kb)],
            phases: q.coprojection_preserving(apex, &[q.class_of(ka), q.class_of(kb)]),
        };
        assert_eq!(w.phases.len(), 2);
        assert!(naive_verify(&q, &w));
        assert_eq!(g.predicted_phases(&q, &w).unwrap(), {
            let mut p = w.phases.clone();
            p.sort();
            p
        });
    }
}
