//! Structure-preserving functors between matrix categories, and their
//! transport through the quotient by global phases and through `GP`.
//!
//! Every functor in the registry is entrywise on matrices (except the
//! doubling fixture, `f ↦ f ⊕ f`), so functoriality reduces to checks on
//! sampled morphisms and on the chosen structure maps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::gp::{GpCategory, GpError, GpMorphism, GpObject};
use crate::matcat::{braiding, coprojections, MatError, Matrix};
use crate::quotient::{QuotCategory, QuotMorphism};
use crate::scalars::{PhaseGroup, Ring, RingKind, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("global phase {phase} is sent to {image}, which is not a global phase of the target")]
    PhaseNotPreserved { phase: String, image: String },
    #[error("chosen structure not preserved: {0}")]
    ChoiceNotPreserved(String),
    #[error("functor law fails: {0}")]
    NotFunctorial(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Gp(#[from] GpError),
}

/// The entry map (or block map) defining a functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FunctorKind {
    Identity,
    /// The ring involution applied entrywise.
    Conjugation,
    /// `x ↦ x^p` on `F_p`.
    Frobenius,
    /// `Q[i] → F_p` sending `i` to a square root of `-1`.
    GaussianReduction { modulus: u64, image_of_i: u64 },
    /// `n ↦ 2n`, `f ↦ f ⊕ f`.
    Doubling,
}

/// Names accepted by [`functor_by_name`].
pub const REGISTRY: &[&str] = &["identity", "conjugation", "frobenius", "gaussian-reduction-5", "doubling"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuredFunctor {
    pub name: String,
    pub kind: FunctorKind,
    #[serde(skip)]
    pub source: Ring,
    #[serde(skip)]
    pub target: Ring,
    pub strict_monoidal: bool,
    pub preserves_coproducts: bool,
}

/// Builds a registry functor on `source`, computing its preservation flags
/// on the standard structure up to dimension 3.
pub fn functor_by_name(name: &str, source: Ring) -> Result<StructuredFunctor, TransportError> {
    let (kind, target) = match name {
        "identity" => (FunctorKind::Identity, source),
        "conjugation" | "ring-involution" => (FunctorKind::Conjugation, source),
        "frobenius" => match source.kind() {
            RingKind::PrimeField(_) => (FunctorKind::Frobenius, source),
            _ => return Err(TransportError::Unsupported(format!("frobenius on {source}"))),
        },
        "gaussian-reduction-5" => {
            if source.kind() != RingKind::GaussianRational {
                return Err(TransportError::Unsupported(format!("gaussian reduction from {source}")));
            }
            (FunctorKind::GaussianReduction { modulus: 5, image_of_i: 2 }, Ring::prime_field(5)?)
        }
        "doubling" => (FunctorKind::Doubling, source),
        other => return Err(TransportError::Unsupported(format!("unknown functor {other:?}; known: {REGISTRY:?}"))),
    };
    let mut f = StructuredFunctor {
        name: name.to_string(),
        kind,
        source,
        target,
        strict_monoidal: false,
        preserves_coproducts: false,
    };
    f.strict_monoidal = f.check_strict_monoidal()?;
    f.preserves_coproducts = f.check_preserves_coproducts()?;
    Ok(f)
}

fn residue(modulus: u64, n: &BigInt) -> u64 {
    let m = BigInt::from(modulus);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

impl StructuredFunctor {
    pub fn map_obj(&self, n: usize) -> usize {
        match self.kind {
            FunctorKind::Doubling => 2 * n,
            _ => n,
        }
    }

    pub fn map_scalar(&self, s: &Scalar) -> Result<Scalar, TransportError> {
        match self.kind {
            FunctorKind::Identity | FunctorKind::Doubling => Ok(s.clone()),
            FunctorKind::Conjugation => Ok(self.source.involute(s)?),
            FunctorKind::Frobenius => {
                let RingKind::PrimeField(p) = self.source.kind() else {
                    unreachable!("frobenius is only built over prime fields")
                };
                let mut acc = self.source.one();
                for _ in 0..p {
                    acc = self.source.mul(&acc, s)?;
                }
                Ok(acc)
            }
            FunctorKind::GaussianReduction { modulus, image_of_i } => {
                let (re, im) = s
                    .as_gaussian()
                    .ok_or_else(|| TransportError::Unsupported(format!("{s} is not a gaussian rational")))?;
                let t = self.target;
                let reduce = |r: &BigRational| -> Result<Scalar, TransportError> {
                    let den = residue(modulus, r.denom());
                    if den == 0 {
                        return Err(TransportError::Unsupported(format!("{r} has no reduction mod {modulus}")));
                    }
                    let num = residue(modulus, &r.numer().abs());
                    let num = if r.is_negative() { (modulus - num) % modulus } else { num };
                    Ok(t.mul(&t.from_int(num as i64), &t.inv(&t.from_int(den as i64))?)?)
                };
                let i = t.from_int(image_of_i as i64);
                Ok(t.add(&reduce(re)?, &t.mul(&i, &reduce(im)?)?)?)
            }
        }
    }

    pub fn map_mor(&self, f: &Matrix) -> Result<Matrix, TransportError> {
        match self.kind {
            FunctorKind::Doubling => Ok(f.direct_sum(f)?),
            _ => {
                let mut data = Vec::with_capacity(f.rows() * f.cols());
                for x in f.entries() {
                    data.push(self.map_scalar(x)?);
                }
                Ok(Matrix::from_entries(self.target, f.rows(), f.cols(), data)?)
            }
        }
    }

    fn check_strict_monoidal(&self) -> Result<bool, TransportError> {
        if self.map_obj(1) != 1 {
            return Ok(false);
        }
        for n in 0..=3 {
            for m in 0..=3 {
                if self.map_obj(n * m) != self.map_obj(n) * self.map_obj(m) {
                    return Ok(false);
                }
                let s = braiding(self.source, n, m);
                if self.map_mor(&s)? != braiding(self.target, self.map_obj(n), self.map_obj(m)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_preserves_coproducts(&self) -> Result<bool, TransportError> {
        for n in 0..=3 {
            for m in 0..=3 {
                let src = coprojections(self.source, &[n, m]);
                let dst = coprojections(self.target, &[self.map_obj(n), self.map_obj(m)]);
                for i in 0..2 {
                    if self.map_mor(&src[i])? != dst[i] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Functor laws and strict monoidality on the given morphisms, using
    /// consecutive pairs for composites and tensors.
    pub fn check_laws(&self, samples: &[Matrix]) -> Result<(), TransportError> {
        for n in 0..=3 {
            let id = self.map_mor(&Matrix::identity(self.source, n))?;
            if id != Matrix::identity(self.target, self.map_obj(n)) {
                return Err(TransportError::NotFunctorial(format!("F(id_{n}) = {id}")));
            }
        }
        for w in samples.windows(2) {
            let (f, g) = (&w[0], &w[1]);
            if g.cols() == f.rows() {
                let lhs = self.map_mor(&g.compose(f)?)?;
                let rhs = self.map_mor(g)?.compose(&self.map_mor(f)?)?;
                if lhs != rhs {
                    return Err(TransportError::NotFunctorial(format!("F({g} ∘ {f})")));
                }
            }
            if self.strict_monoidal {
                let lhs = self.map_mor(&f.kron(g)?)?;
                let rhs = self.map_mor(f)?.kron(&self.map_mor(g)?)?;
                if lhs != rhs {
                    return Err(TransportError::NotFunctorial(format!("F({f} ⊗ {g})")));
                }
            }
        }
        Ok(())
    }
}

/// `F_ℙ : C/ℙ_src → D/ℙ_dst`, `[f] ↦ [F(f)]`.
#[derive(Debug, Clone)]
pub struct QuotFunctor {
    pub functor: StructuredFunctor,
    pub source: QuotCategory,
    pub target: QuotCategory,
}

/// Requires `F(u) ∈ ℙ_dst` for each `u ∈ ℙ_src`.
pub fn quotient_of_functor(
    functor: &StructuredFunctor,
    src: &PhaseGroup,
    dst: &PhaseGroup,
) -> Result<QuotFunctor, TransportError> {
    if src.ring() != functor.source || dst.ring() != functor.target {
        return Err(TransportError::Unsupported(format!(
            "{} runs {} → {}, phases given over {} and {}",
            functor.name,
            functor.source,
            functor.target,
            src.ring(),
            dst.ring()
        )));
    }
    for u in src.elements() {
        let image = functor.map_scalar(u)?;
        if !dst.contains(&image) {
            return Err(TransportError::PhaseNotPreserved { phase: u.to_string(), image: image.to_string() });
        }
    }
    Ok(QuotFunctor { functor: functor.clone(), source: QuotCategory::new(src.clone()), target: QuotCategory::new(dst.clone()) })
}

impl QuotFunctor {
    pub fn map(&self, f: &QuotMorphism) -> Result<QuotMorphism, TransportError> {
        Ok(self.target.class(&self.functor.map_mor(f.rep())?))
    }

    /// Image classes do not depend on the representative: `F(u·f) ∼ F(f)`.
    pub fn check_well_defined(&self, samples: &[Matrix]) -> Result<(), TransportError> {
        for f in samples {
            let expected = self.target.class(&self.functor.map_mor(f)?);
            for u in self.source.phases().elements() {
                let got = self.target.class(&self.functor.map_mor(&f.scale(u))?);
                if got != expected {
                    return Err(TransportError::NotFunctorial(format!("image of {u}·{f} leaves the class")));
                }
            }
        }
        Ok(())
    }
}

/// `GP(F) : GP(C) → GP(D)`, `diag(h, 1) ↦ diag(F(h), 1)`.
#[derive(Debug, Clone)]
pub struct GpFunctor {
    pub quotient: QuotFunctor,
    pub source: GpCategory,
    pub target: GpCategory,
}

/// Requires `F(Â) = F(A) ∔ I` with both coprojections, the corner maps and
/// `β` preserved on the nose, for base dimensions up to 3.
pub fn gp_of_functor(q: &QuotFunctor) -> Result<GpFunctor, TransportError> {
    let f = &q.functor;
    let source = GpCategory::new(q.source.clone());
    let target = GpCategory::new(q.target.clone());
    if !f.strict_monoidal {
        return Err(TransportError::ChoiceNotPreserved(format!("{} is not strict monoidal", f.name)));
    }
    for n in 0..=3 {
        let a = GpObject::new(n);
        if f.map_obj(a.apex_dim()) != f.map_obj(n) + 1 {
            return Err(TransportError::ChoiceNotPreserved(format!(
                "F({}) has dimension {}, not F({n}) + 1",
                a.apex_dim(),
                f.map_obj(a.apex_dim())
            )));
        }
        let src = coprojections(f.source, &[n, 1]);
        let dst = coprojections(f.target, &[f.map_obj(n), 1]);
        for i in 0..2 {
            if f.map_mor(&src[i])? != dst[i] {
                return Err(TransportError::ChoiceNotPreserved(format!("coprojection {i} of {a}")));
            }
        }
        for m in 0..=3 {
            let b = GpObject::new(m);
            let c = source.corner_map(a, b)?;
            let fc = f.map_mor(&c)?;
            let c_dst = target.corner_map(GpObject::new(f.map_obj(n)), GpObject::new(f.map_obj(m)))?;
            if fc != c_dst {
                return Err(TransportError::ChoiceNotPreserved(format!("corner map at ({n}, {m})")));
            }
        }
    }
    let beta = f.map_mor(source.gp_beta()?.rep())?;
    if beta != *target.gp_beta()?.rep() {
        return Err(TransportError::ChoiceNotPreserved(format!("β is sent to {beta}")));
    }
    Ok(GpFunctor { quotient: q.clone(), source, target })
}

impl GpFunctor {
    pub fn map(&self, f: &GpMorphism) -> Result<GpMorphism, TransportError> {
        Ok(self.target.gp_normalize(&self.quotient.functor.map_mor(f.rep())?)?)
    }

    /// Functor laws, strict monoidality, and `[GP(F)(f)] = F_ℙ([f])` on
    /// consecutive pairs of the samples.
    pub fn check_laws(&self, samples: &[GpMorphism]) -> Result<usize, TransportError> {
        let mut checks = 0;
        for f in samples {
            let image = self.map(f)?;
            let lhs = self.target.bracket(&image);
            let rhs = self.quotient.map(&self.source.bracket(f))?;
            if lhs != rhs {
                return Err(TransportError::NotFunctorial(format!("bracket does not commute at {f:?}")));
            }
            let id = self.map(&self.source.identity(f.dom()))?;
            if id != self.target.identity(image.dom()) {
                return Err(TransportError::NotFunctorial(format!("identity at {}", f.dom())));
            }
            checks += 2;
        }
        for w in samples.windows(2) {
            let (f, g) = (&w[0], &w[1]);
            if g.dom() == f.cod() {
                let lhs = self.map(&self.source.compose(g, f)?)?;
                let rhs = self.target.compose(&self.map(g)?, &self.map(f)?)?;
                if lhs != rhs {
                    return Err(TransportError::NotFunctorial(format!("composite of {g:?} and {f:?}")));
                }
                checks += 1;
            }
            let lhs = self.map(&self.source.gp_tensor(f, g)?)?;
            let rhs = self.target.gp_tensor(&self.map(f)?, &self.map(g)?)?;
            if lhs != rhs {
                return Err(TransportError::NotFunctorial(format!("tensor of {f:?} and {g:?}")));
            }
            checks += 1;
        }
        Ok(checks)
    }
}

/// Hom-set comparison for one pair of dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomComparison {
    pub dims: (usize, usize),
    pub base_homs: usize,
    pub gp_homs: usize,
    pub quotient_homs: usize,
    pub gp_quotient_homs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjunctionReport {
    pub instance: String,
    /// Whether `ℙ` is the whole unit group (the reflection instance).
    pub phases_are_all_units: bool,
    pub homs: Vec<HomComparison>,
    pub invertible_classes_2x2: usize,
    pub falsifications: Vec<String>,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.falsifications.is_empty()
    }
}

/// Every element of a finite ring.
pub fn finite_elements(ring: Ring) -> Option<Vec<Scalar>> {
    match ring.kind() {
        RingKind::PrimeField(_) => Some(ring.elements_up_to_height(0)),
        _ => None,
    }
}

/// Every `rows × cols` matrix over a finite ring.
pub fn all_matrices(ring: Ring, rows: usize, cols: usize) -> Option<Vec<Matrix>> {
    let elems = finite_elements(ring)?;
    let len = rows * cols;
    let total = elems.len().checked_pow(len as u32)?;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let data = (0..len)
            .map(|_| {
                let s = elems[c % elems.len()].clone();
                c /= elems.len();
                s
            })
            .collect();
        out.push(Matrix::from_entries(ring, rows, cols, data).expect("sized to fit"));
    }
    Some(out)
}

/// Number of classes of invertible `n × n` matrices modulo `ℙ`.
pub fn invertible_classes(phases: &PhaseGroup, n: usize) -> Option<usize> {
    let q = QuotCategory::new(phases.clone());
    let mut classes = std::collections::HashSet::new();
    for m in all_matrices(phases.ring(), n, n)? {
        if m.is_invertible() {
            classes.insert(q.class(&m));
        }
    }
    Some(classes.len())
}

/// Unit of the comparison `D ≅ GP(D_ℙ)` and its quotient `D_ℙ ≅ GP(D_ℙ)_ℙ`,
/// verified as bijections of hom-sets for all dimensions up to `dims_max`
/// over a finite ring. Every diagonal unit-preserving apex matrix is
/// enumerated, so surjectivity is exhaustive.
pub fn adjunction_checks(phases: &PhaseGroup, dims_max: usize) -> Result<AdjunctionReport, TransportError> {
    let ring = phases.ring();
    let gp = GpCategory::from_phases(phases.clone());
    let q = gp.quot().clone();
    let units = ring
        .units()
        .ok_or_else(|| TransportError::Unsupported(format!("hom-set enumeration over infinite ring {ring}")))?;
    let mut report = AdjunctionReport {
        instance: format!("{ring} with phases {}", phases.label()),
        phases_are_all_units: units.iter().all(|u| phases.contains(u)),
        homs: Vec::new(),
        invertible_classes_2x2: invertible_classes(phases, 2).unwrap_or(0),
        falsifications: Vec::new(),
    };
    let gp_phases = gp.global_phases()?;
    for n in 0..=dims_max {
        for m in 0..=dims_max {
            let base = all_matrices(ring, m, n).expect("finite ring");
            let mut images = std::collections::HashSet::new();
            let mut base_classes = std::collections::HashSet::new();
            let mut image_orbits = std::collections::HashSet::new();
            for h in &base {
                let fh = gp.embed(h)?;
                if fh.block() != *h {
                    report.falsifications.push(format!("F({h}) loses its block"));
                }
                images.insert(fh.clone());
                base_classes.insert(q.class(h));
                // the ℙ_GP-orbit of F(h), keyed by its least member
                let mut orbit: Vec<GpMorphism> =
                    gp_phases.iter().map(|u| gp.scalar_action(u, &fh)).collect::<Result<_, _>>()?;
                orbit.sort_by_key(|g| g.rep().to_string());
                image_orbits.insert(orbit[0].clone());
                if gp.bracket(&fh) != q.class(h) {
                    report.falsifications.push(format!("[F({h})] is not the class of {h}"));
                }
            }
            let mut gp_homs = std::collections::HashSet::new();
            for h in &base {
                for p in &units {
                    match gp.gp_hom(h, p) {
                        Ok(g) => {
                            gp_homs.insert(g);
                        }
                        Err(GpError::NotUnitPreserving(_)) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            if images.len() != base.len() {
                report.falsifications.push(format!("F is not injective on {n} → {m}"));
            }
            if gp_homs != images {
                report.falsifications.push(format!("F is not surjective on {n} → {m}"));
            }
            if image_orbits.len() != base_classes.len() {
                report.falsifications.push(format!(
                    "{n} → {m}: {} quotient classes but {} GP orbits",
                    base_classes.len(),
                    image_orbits.len()
                ));
            }
            report.homs.push(HomComparison {
                dims: (n, m),
                base_homs: base.len(),
                gp_homs: gp_homs.len(),
                quotient_homs: base_classes.len(),
                gp_quotient_homs: image_orbits.len(),
            });
        }
    }
    if phases.len() == 1 {
        for c in &report.homs {
            if c.base_homs != c.quotient_homs {
                report.falsifications.push(format!("trivial phases identify morphisms at {:?}", c.dims));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_counts() {
        let f2 = Ring::prime_field(2).unwrap();
        let f3 = Ring::prime_field(3).unwrap();
        assert_eq!(invertible_classes(&PhaseGroup::all_units(f2).unwrap(), 2), Some(6));
        assert_eq!(invertible_classes(&PhaseGroup::all_units(f3).unwrap(), 2), Some(24));
    }

    #[test]
    fn reduction_sends_i_outside_plus_minus_one() {
        let g = Ring::gaussian();
        let f = functor_by_name("gaussian-reduction-5", g).unwrap();
        let src = PhaseGroup::gaussian_units(g);
        let dst = PhaseGroup::parse(Ring::prime_field(5).unwrap(), &["1", "4"]).unwrap();
        assert!(matches!(quotient_of_functor(&f, &src, &dst), Err(TransportError::PhaseNotPreserved { .. })));
        let all = PhaseGroup::all_units(Ring::prime_field(5).unwrap()).unwrap();
        assert!(quotient_of_functor(&f, &src, &all).is_ok());
    }

    #[test]
    fn doubling_breaks_the_chosen_structure() {
        let g = Ring::gaussian();
        let f = functor_by_name("doubling", g).unwrap();
        assert!(!f.preserves_coproducts);
        let p = PhaseGroup::gaussian_units(g);
        let q = quotient_of_functor(&f, &p, &p).unwrap();
        assert!(matches!(gp_of_functor(&q), Err(TransportError::ChoiceNotPreserved(_))));
    }

    #[test]
    fn conjugation_transports() {
        let g = Ring::gaussian();
        let f = functor_by_name("conjugation", g).unwrap();
        assert!(f.strict_monoidal && f.preserves_coproducts);
        let p = PhaseGroup::gaussian_units(g);
        let gpf = gp_of_functor(&quotient_of_functor(&f, &p, &p).unwrap()).unwrap();
        let h = gpf.source.embed(&Matrix::from_strs(g, 1, 2, &["i", "1+i"]).unwrap()).unwrap();
        assert_eq!(gpf.map(&h).unwrap().block(), Matrix::from_strs(g, 1, 2, &["-i", "1-i"]).unwrap());
        assert!(gpf.check_laws(&[h.clone(), gpf.source.identity(h.cod())]).unwrap() > 0);
    }

    #[test]
    fn f3_reflection_instance() {
        let f3 = Ring::prime_field(3).unwrap();
        let report = adjunction_checks(&PhaseGroup::all_units(f3).unwrap(), 2).unwrap();
        assert!(report.passed(), "{:?}", report.falsifications);
        assert!(report.phases_are_all_units);
        assert_eq!(report.invertible_classes_2x2, 24);
        let trivial = adjunction_checks(&PhaseGroup::trivial(f3), 1).unwrap();
        assert!(trivial.passed());
    }
}
