//! Phased coproducts over an abstract backend, and the constructions that only
//! use their two defining clauses: copairing, phase solving, canonical
//! isomorphisms between apexes, bracketed n-ary structures, projections of
//! phased biproducts, and the phase-generator and transitivity checks.

use std::fmt::{self, Debug};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::matcat::Matrix;
use crate::quotient::QuotCategory;
use crate::scalars::{bounded_positive_witness, PositivityVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhasedError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("no phase relates the two mediating maps")]
    NoPhase,
    #[error("solved phase {0} is missing from the structure's phase list")]
    PhaseNotEnumerated(String),
    #[error("no mediating map exists: {0}")]
    NoMediatingMap(String),
    #[error("the ambient category has no zero morphisms")]
    NoZeroArrows,
    #[error("expected an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("projections are not unique: {0}")]
    NotUnique(String),
    #[error("{0}")]
    Backend(String),
}

/// How a universally quantified law was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exhaustive,
    Sampled(usize),
    Bounded(u32),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled(n) => write!(f, "sampled({n})"),
            Mode::Bounded(h) => write!(f, "bounded({h})"),
        }
    }
}

/// Three-valued outcome of a law check.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckVerdict {
    Holds(Mode),
    Refuted(Value),
    Unknown(String),
}

impl CheckVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CheckVerdict::Holds(_))
    }

    pub fn refuted(&self) -> bool {
        matches!(self, CheckVerdict::Refuted(_))
    }
}

/// An apex with coprojections from each summand (and projections onto them,
/// for phased biproducts), together with its list of phases.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedStructure<O, M> {
    pub summands: Vec<O>,
    pub apex: O,
    pub coprojections: Vec<M>,
    pub projections: Option<Vec<M>>,
    pub phases: Vec<M>,
}

/// A category with chosen phased coproducts.
pub trait PhasedCategory {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + PartialEq + Debug;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, PhasedError>;

    /// The chosen phased coproduct of `summands` (with its phase list).
    fn phased_coproduct(&self, summands: &[Self::Obj]) -> Result<PhasedStructure<Self::Obj, Self::Mor>, PhasedError>;

    /// Some `h` out of the apex of `s` with `h ∘ κ_i = legs[i]`.
    ///
    /// Must work for any structure whose coprojections form a phased coproduct,
    /// not only the chosen ones.
    fn copair(&self, s: &PhasedStructure<Self::Obj, Self::Mor>, legs: &[Self::Mor]) -> Result<Self::Mor, PhasedError>;

    /// A second, independently computed mediating map. Backends that search
    /// override this with the opposite search order.
    fn copair_alt(&self, s: &PhasedStructure<Self::Obj, Self::Mor>, legs: &[Self::Mor]) -> Result<Self::Mor, PhasedError> {
        self.copair(s, legs)
    }

    /// A phase `U` of `s` with `h' = h ∘ U`. The default scans the phase list.
    fn find_phase(
        &self,
        s: &PhasedStructure<Self::Obj, Self::Mor>,
        h: &Self::Mor,
        h_prime: &Self::Mor,
    ) -> Result<Self::Mor, PhasedError> {
        for u in &s.phases {
            if self.compose(h, u)? == *h_prime {
                return Ok(u.clone());
            }
        }
        Err(PhasedError::NoPhase)
    }

    fn zero(&self, _from: &Self::Obj, _to: &Self::Obj) -> Option<Self::Mor> {
        None
    }
}

/// Mediating map out of `s`, checked against its defining equations.
pub fn copair<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
    legs: &[C::Mor],
) -> Result<C::Mor, PhasedError> {
    if legs.len() != s.coprojections.len() {
        return Err(PhasedError::DimMismatch(format!("{} legs for {} summands", legs.len(), s.coprojections.len())));
    }
    let h = cat.copair(s, legs)?;
    for (k, leg) in s.coprojections.iter().zip(legs) {
        if cat.compose(&h, k)? != *leg {
            return Err(PhasedError::NoMediatingMap(format!("{h:?} does not restrict to {leg:?}")));
        }
    }
    Ok(h)
}

/// Whether `u` preserves every coprojection of `s`.
pub fn preserves_coprojections<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
    u: &C::Mor,
) -> Result<bool, PhasedError> {
    for k in &s.coprojections {
        if cat.compose(u, k)? != *k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `find_phase` with its post-conditions checked.
pub fn find_phase<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
    h: &C::Mor,
    h_prime: &C::Mor,
) -> Result<C::Mor, PhasedError> {
    let u = cat.find_phase(s, h, h_prime)?;
    if cat.compose(h, &u)? != *h_prime || !preserves_coprojections(cat, s, &u)? {
        return Err(PhasedError::NoPhase);
    }
    Ok(u)
}

/// A two-sided inverse found among the phases of `s`.
pub fn phase_inverse<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
    u: &C::Mor,
) -> Result<C::Mor, PhasedError> {
    let id = cat.identity(&s.apex);
    for v in &s.phases {
        if cat.compose(u, v)? == id && cat.compose(v, u)? == id {
            return Ok(v.clone());
        }
    }
    Err(PhasedError::NotIsomorphism(format!("phase {u:?} has no inverse among the phases")))
}

/// The comparison map between two phased coproducts of the same summands,
/// with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct MediatingIso<M> {
    pub forward: M,
    pub inverse: M,
}

/// `f : S1 → S2` with `f ∘ κ_i = μ_i`, and its inverse built from the
/// reverse comparison `g` and the phase `U` with `f ∘ g ∘ U = id`.
pub fn mediating_iso<C: PhasedCategory>(
    cat: &C,
    s1: &PhasedStructure<C::Obj, C::Mor>,
    s2: &PhasedStructure<C::Obj, C::Mor>,
) -> Result<MediatingIso<C::Mor>, PhasedError> {
    let f = copair(cat, s1, &s2.coprojections)?;
    let g = copair(cat, s2, &s1.coprojections)?;
    let fg = cat.compose(&f, &g)?;
    let id2 = cat.identity(&s2.apex);
    let u = find_phase(cat, s2, &fg, &id2)?;
    let inverse = cat.compose(&g, &u)?;
    let id1 = cat.identity(&s1.apex);
    if cat.compose(&f, &inverse)? != id2 || cat.compose(&inverse, &f)? != id1 {
        return Err(PhasedError::NotIsomorphism(format!("{f:?}")));
    }
    Ok(MediatingIso { forward: f, inverse })
}

/// A way of nesting binary phased coproducts over summands `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Leaf(usize),
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Bracketing::Leaf(i) => vec![*i],
            Bracketing::Node(l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    /// `((0 ∔ 1) ∔ 2) ∔ …`.
    pub fn left_nested(n: usize) -> Bracketing {
        assert!(n > 0, "bracketing needs a summand");
        (1..n).fold(Bracketing::Leaf(0), |acc, i| Bracketing::Node(Box::new(acc), Box::new(Bracketing::Leaf(i))))
    }

    /// Every binary tree whose leaves, read left to right, are `order`.
    pub fn all_over(order: &[usize]) -> Vec<Bracketing> {
        if order.len() == 1 {
            return vec![Bracketing::Leaf(order[0])];
        }
        let mut out = Vec::new();
        for split in 1..order.len() {
            for l in Self::all_over(&order[..split]) {
                for r in Self::all_over(&order[split..]) {
                    out.push(Bracketing::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }

    /// Every bracketing of every ordering of `0..n`.
    pub fn all_with_permutations(n: usize) -> Vec<Bracketing> {
        let mut out = Vec::new();
        for perm in permutations(n) {
            out.extend(Self::all_over(&perm));
        }
        out
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::Leaf(i) => write!(f, "A{i}"),
            Bracketing::Node(l, r) => write!(f, "({l} + {r})"),
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The n-ary phased coproduct obtained by nesting chosen binary ones.
///
/// Coprojections are listed in summand order regardless of the tree shape.
/// Phases are the composites `U ∘ (V_l ∔ V_r)` of a phase of the outer
/// apex with the copairing of the inner phases, deduplicated.
pub fn bracketed_structure<C: PhasedCategory>(
    cat: &C,
    summands: &[C::Obj],
    tree: &Bracketing,
) -> Result<PhasedStructure<C::Obj, C::Mor>, PhasedError> {
    let mut leaves = tree.leaves();
    leaves.sort();
    if leaves != (0..summands.len()).collect::<Vec<_>>() {
        return Err(PhasedError::DimMismatch(format!("bracketing {tree} does not cover {} summands", summands.len())));
    }
    let (apex, coproj, phases) = build_bracketed(cat, summands, tree)?;
    let coprojections = (0..summands.len())
        .map(|i| coproj.iter().find(|(j, _)| *j == i).map(|(_, k)| k.clone()).expect("every leaf present"))
        .collect();
    Ok(PhasedStructure { summands: summands.to_vec(), apex, coprojections, projections: None, phases })
}

type Built<C> = (
    <C as PhasedCategory>::Obj,
    Vec<(usize, <C as PhasedCategory>::Mor)>,
    Vec<<C as PhasedCategory>::Mor>,
);

fn build_bracketed<C: PhasedCategory>(cat: &C, summands: &[C::Obj], tree: &Bracketing) -> Result<Built<C>, PhasedError> {
    match tree {
        Bracketing::Leaf(i) => {
            let a = summands[*i].clone();
            let id = cat.identity(&a);
            Ok((a, vec![(*i, id.clone())], vec![id]))
        }
        Bracketing::Node(l, r) => {
            let (la, lk, lp) = build_bracketed(cat, summands, l)?;
            let (ra, rk, rp) = build_bracketed(cat, summands, r)?;
            let top = cat.phased_coproduct(&[la, ra])?;
            let mut coproj = Vec::new();
            for (i, k) in lk {
                coproj.push((i, cat.compose(&top.coprojections[0], &k)?));
            }
            for (i, k) in rk {
                coproj.push((i, cat.compose(&top.coprojections[1], &k)?));
            }
            let mut phases: Vec<C::Mor> = Vec::new();
            for vl in &lp {
                for vr in &rp {
                    let legs = [cat.compose(&top.coprojections[0], vl)?, cat.compose(&top.coprojections[1], vr)?];
                    let inner = copair(cat, &top, &legs)?;
                    for u in &top.phases {
                        let p = cat.compose(u, &inner)?;
                        if !phases.contains(&p) {
                            phases.push(p);
                        }
                    }
                }
            }
            Ok((top.apex, coproj, phases))
        }
    }
}

/// Coprojection-preserving isomorphism between two bracketings of the same
/// summands.
pub fn assoc_iso<C: PhasedCategory>(
    cat: &C,
    summands: &[C::Obj],
    from: &Bracketing,
    to: &Bracketing,
) -> Result<MediatingIso<C::Mor>, PhasedError> {
    let s1 = bracketed_structure(cat, summands, from)?;
    let s2 = bracketed_structure(cat, summands, to)?;
    let iso = mediating_iso(cat, &s1, &s2)?;
    for (k1, k2) in s1.coprojections.iter().zip(&s2.coprojections) {
        if cat.compose(&iso.forward, k1)? != *k2 {
            return Err(PhasedError::NotIsomorphism("coprojections not preserved".into()));
        }
    }
    Ok(iso)
}

/// Mediating map out of a bracketed structure computed by recursion on the
/// tree, copairing at each node.
pub fn copair_bracketed<C: PhasedCategory>(
    cat: &C,
    summands: &[C::Obj],
    tree: &Bracketing,
    legs: &[C::Mor],
) -> Result<C::Mor, PhasedError> {
    match tree {
        Bracketing::Leaf(i) => Ok(legs[*i].clone()),
        Bracketing::Node(l, r) => {
            let hl = copair_bracketed(cat, summands, l, legs)?;
            let hr = copair_bracketed(cat, summands, r, legs)?;
            let la = cat.dom(&hl);
            let ra = cat.dom(&hr);
            let top = cat.phased_coproduct(&[la, ra])?;
            copair(cat, &top, &[hl, hr])
        }
    }
}

/// The projections of the phased biproduct on `s`: `π_i` is the mediating
/// map of `(0, …, id, …, 0)`. Uniqueness is checked by comparing with the
/// independently computed mediating map and with every phase-shifted variant
/// `π_i ∘ U`, which by the second clause are all the other candidates.
pub fn biproduct_from_coproduct<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
) -> Result<PhasedStructure<C::Obj, C::Mor>, PhasedError> {
    let n = s.summands.len();
    let mut projections = Vec::with_capacity(n);
    for i in 0..n {
        let mut legs = Vec::with_capacity(n);
        for j in 0..n {
            legs.push(if i == j {
                cat.identity(&s.summands[i])
            } else {
                cat.zero(&s.summands[j], &s.summands[i]).ok_or(PhasedError::NoZeroArrows)?
            });
        }
        let pi = copair(cat, s, &legs)?;
        let alt = cat.copair_alt(s, &legs)?;
        if alt != pi {
            return Err(PhasedError::NotUnique(format!("{pi:?} vs {alt:?}")));
        }
        for u in &s.phases {
            let shifted = cat.compose(&pi, u)?;
            if shifted != pi {
                return Err(PhasedError::NotUnique(format!("{pi:?} vs {shifted:?}")));
            }
        }
        projections.push(pi);
    }
    Ok(PhasedStructure { projections: Some(projections), ..s.clone() })
}

/// Phases of the coproduct side that also preserve every projection.
pub fn phases_preserve_projections<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
) -> Result<bool, PhasedError> {
    let Some(ps) = &s.projections else {
        return Ok(false);
    };
    for u in &s.phases {
        for p in ps {
            if cat.compose(p, u)? != *p {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `f` is diagonal from `s1` to `s2`: each `f ∘ κ_i` factors as
/// `μ_i ∘ g_i`. Returns the factors when it is.
pub fn diagonal_factors<C: PhasedCategory>(
    cat: &C,
    s1: &PhasedStructure<C::Obj, C::Mor>,
    s2: &PhasedStructure<C::Obj, C::Mor>,
    f: &C::Mor,
    candidates: impl Fn(&C::Obj, &C::Obj) -> Vec<C::Mor>,
) -> Result<Option<Vec<C::Mor>>, PhasedError> {
    let mut out = Vec::new();
    for (i, k) in s1.coprojections.iter().enumerate() {
        let fk = cat.compose(f, k)?;
        let mut found = None;
        for g in candidates(&s1.summands[i], &s2.summands[i]) {
            if cat.compose(&s2.coprojections[i], &g)? == fk {
                found = Some(g);
                break;
            }
        }
        match found {
            Some(g) => out.push(g),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// For a diagonal `f : s1 → s2`, every phase `U` of `s1` has a phase `V` of
/// `s2` with `f ∘ U = V ∘ f`.
pub fn check_transitive<C: PhasedCategory>(
    cat: &C,
    s1: &PhasedStructure<C::Obj, C::Mor>,
    s2: &PhasedStructure<C::Obj, C::Mor>,
    f: &C::Mor,
) -> Result<CheckVerdict, PhasedError> {
    for (ui, u) in s1.phases.iter().enumerate() {
        let fu = cat.compose(f, u)?;
        let mut found = false;
        for v in &s2.phases {
            if cat.compose(v, f)? == fu {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(CheckVerdict::Refuted(json!({
                "diagonal": format!("{f:?}"),
                "phase_index": ui,
                "phase": format!("{u:?}"),
            })));
        }
    }
    Ok(CheckVerdict::Holds(Mode::Exhaustive))
}

/// Phase-monic clause of a phase generator: every fold `∇ ∘ W` of `I ∔ I`
/// separates the listed phases. Two distinct list entries with equal
/// composites refute the clause.
pub fn check_fold_phase_monic<C: PhasedCategory>(
    cat: &C,
    ii: &PhasedStructure<C::Obj, C::Mor>,
) -> Result<CheckVerdict, PhasedError> {
    let i = ii.summands[0].clone();
    let id = cat.identity(&i);
    let fold = copair(cat, ii, &[id.clone(), id])?;
    for w in &ii.phases {
        let folded = cat.compose(&fold, w)?;
        let images = ii.phases.iter().map(|u| cat.compose(&folded, u)).collect::<Result<Vec<_>, _>>()?;
        for a in 0..images.len() {
            for b in (a + 1)..images.len() {
                if images[a] == images[b] {
                    return Ok(CheckVerdict::Refuted(json!({
                        "clause": "fold is phase monic",
                        "fold": format!("{folded:?}"),
                        "phases": [format!("{:?}", ii.phases[a]), format!("{:?}", ii.phases[b])],
                    })));
                }
            }
        }
    }
    Ok(CheckVerdict::Holds(Mode::Exhaustive))
}

/// Phase-epic clause for a given diagonal monomorphism `m : I ∔ I → s`.
pub fn check_phase_epic<C: PhasedCategory>(
    cat: &C,
    s: &PhasedStructure<C::Obj, C::Mor>,
    m: &C::Mor,
) -> Result<CheckVerdict, PhasedError> {
    let images = s.phases.iter().map(|u| cat.compose(u, m)).collect::<Result<Vec<_>, _>>()?;
    for a in 0..images.len() {
        for b in (a + 1)..images.len() {
            if images[a] == images[b] {
                return Ok(CheckVerdict::Refuted(json!({
                    "clause": "diagonal mono is phase epic",
                    "mono": format!("{m:?}"),
                    "phases": [format!("{:?}", s.phases[a]), format!("{:?}", s.phases[b])],
                })));
            }
        }
    }
    Ok(CheckVerdict::Holds(Mode::Exhaustive))
}

/// Combined verdict: the first refutation wins, then the first unknown; a
/// conjunction of holds is reported with `mode`.
pub fn combine(verdicts: impl IntoIterator<Item = CheckVerdict>, mode: Mode) -> CheckVerdict {
    let mut unknown = None;
    for v in verdicts {
        match v {
            CheckVerdict::Refuted(_) => return v,
            CheckVerdict::Unknown(_) if unknown.is_none() => unknown = Some(v),
            _ => {}
        }
    }
    unknown.unwrap_or(CheckVerdict::Holds(mode))
}

/// The representatives `q·m` for `q ∈ ℙ`, those with leading entry `1` first.
fn scaled_representatives(cat: &QuotCategory, m: &Matrix) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = cat.phases().elements().iter().map(|q| m.scale(q)).collect();
    out.sort_by_key(|t| !t.first_nonzero().is_some_and(|k| t.entries()[k].is_one()));
    out.dedup();
    out
}

fn block_diagonal(m: &Matrix, dims: &[usize]) -> bool {
    let mut block_of = Vec::new();
    for (b, &d) in dims.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, d));
    }
    if m.rows() != block_of.len() || m.cols() != block_of.len() {
        return false;
    }
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| block_of[i] == block_of[j] || m.get(i, j).is_zero()))
}

/// Positive-freeness of the induced phased biproduct on `dims`: no phase
/// outside the identity class has a representative `q·U` equal to some
/// `G† ∘ G` with entries of height at most `bound`.
pub fn check_positive_free(cat: &QuotCategory, dims: &[usize], bound: u32) -> CheckVerdict {
    let ring = cat.ring();
    let id = cat.id(dims.iter().sum());
    let mut unknown = None;
    for u in cat.block_phases(dims) {
        if u == id {
            continue;
        }
        for target in scaled_representatives(cat, u.rep()) {
            match bounded_positive_witness(ring, &target, bound) {
                PositivityVerdict::Holds => {}
                PositivityVerdict::Refuted { witness } => {
                    return CheckVerdict::Refuted(json!({
                        "law": "positive-free",
                        "phase": u.rep(),
                        "positive_representative": target,
                        "witness": witness,
                    }));
                }
                PositivityVerdict::Unknown { bound } => {
                    unknown.get_or_insert_with(|| {
                        CheckVerdict::Unknown(format!("no witness or obstruction for {target} at height {bound}"))
                    });
                }
            }
        }
    }
    unknown.unwrap_or(CheckVerdict::Holds(Mode::Exhaustive))
}

/// Positive cancellation on sampled positive diagonal endomorphisms
/// `p = G† ∘ G` of the induced biproduct on `dims`: whenever `p ∘ U` is again
/// positive for a phase `U`, it must be the class of `p`. Samples whose
/// product is not block diagonal are skipped.
pub fn check_positive_cancellation(cat: &QuotCategory, dims: &[usize], samples: &[Matrix], bound: u32) -> CheckVerdict {
    let ring = cat.ring();
    let id = cat.id(dims.iter().sum());
    let phases = cat.block_phases(dims);
    let mut trials = 0;
    let mut unknown = None;
    for g in samples {
        let Ok(p) = g.dagger().compose(g) else {
            continue;
        };
        if !block_diagonal(&p, dims) {
            continue;
        }
        trials += 1;
        let pc = cat.class(&p);
        for u in &phases {
            if *u == id {
                continue;
            }
            let Ok(pu) = p.compose(u.rep()) else {
                continue;
            };
            if cat.class(&pu) == pc {
                continue;
            }
            for target in scaled_representatives(cat, &pu) {
                match bounded_positive_witness(ring, &target, bound) {
                    PositivityVerdict::Holds => {}
                    PositivityVerdict::Refuted { witness } => {
                        return CheckVerdict::Refuted(json!({
                            "law": "positive-cancellation",
                            "positive": p,
                            "phase": u.rep(),
                            "other_positive": target,
                            "witness": witness,
                        }));
                    }
                    PositivityVerdict::Unknown { bound } => {
                        unknown.get_or_insert_with(|| {
                            CheckVerdict::Unknown(format!("positivity of {target} undecided at height {bound}"))
                        });
                    }
                }
            }
        }
    }
    unknown.unwrap_or(CheckVerdict::Holds(Mode::Sampled(trials)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| Bracketing::all_over(&(0..n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14]);
        assert_eq!(Bracketing::all_with_permutations(3).len(), 12);
    }

    #[test]
    fn left_nested_shape() {
        assert_eq!(Bracketing::left_nested(3).to_string(), "((A0 + A1) + A2)");
        assert_eq!(Bracketing::left_nested(1), Bracketing::Leaf(0));
    }

    #[test]
    fn combine_prefers_refutation() {
        let v = combine(
            vec![CheckVerdict::Unknown("x".into()), CheckVerdict::Refuted(json!(1)), CheckVerdict::Holds(Mode::Exhaustive)],
            Mode::Exhaustive,
        );
        assert!(v.refuted());
        assert_eq!(combine(vec![], Mode::Sampled(3)), CheckVerdict::Holds(Mode::Sampled(3)));
    }

    #[test]
    fn mode_display() {
        assert_eq!(Mode::Sampled(500).to_string(), "sampled(500)");
        assert_eq!(Mode::Bounded(2).to_string(), "bounded(2)");
    }
}
