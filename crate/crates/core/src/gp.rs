//! `GP(C)` for `C = Mat_S / ℙ`.
//!
//! An object `Â = A ∔ I` is recorded by its base dimension `n`; its apex has
//! dimension `n + 1` with the unit summand last. A morphism is a class of
//! `C` that is diagonal and fixes the unit coprojection; it is stored as the
//! unique representative `diag(h, 1)`.

pub mod finite;

use std::fmt;
use std::sync::OnceLock;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::matcat::{braiding, compact, coprojections, MatError, Matrix};
use crate::phased::{
    self, check_fold_phase_monic, check_phase_epic, check_positive_free, check_transitive, combine, CheckVerdict,
    Mode, PhasedError, PhasedStructure,
};
use crate::quotient::{QuotCategory, QuotError, QuotMorphism};
use crate::scalars::{PhaseGroup, Ring, Scalar};

/// Height bound for positivity searches made on behalf of preconditions.
pub const POSITIVITY_BOUND: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpError {
    #[error("not diagonal: {0}")]
    NotDiagonal(String),
    #[error("unit coprojection not preserved: {0}")]
    NotUnitPreserving(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no global phase acts as {0}")]
    NoSuchScalar(String),
    #[error("no isometric state on base dimension {0}")]
    NoState(usize),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("falsified: {0}")]
    Falsified(String),
    #[error(transparent)]
    Phased(#[from] PhasedError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Quot(#[from] QuotError),
}

/// `Â = A ∔ I` with `dim A = base_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GpObject {
    pub base_dim: usize,
}

impl GpObject {
    pub fn new(base_dim: usize) -> Self {
        GpObject { base_dim }
    }

    pub fn apex_dim(&self) -> usize {
        self.base_dim + 1
    }
}

impl fmt::Display for GpObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^", self.base_dim)
    }
}

/// A normalized morphism `diag(h, 1) : Â → B̂`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GpMorphism {
    dom: GpObject,
    cod: GpObject,
    rep: Matrix,
}

impl GpMorphism {
    pub fn dom(&self) -> GpObject {
        self.dom
    }

    pub fn cod(&self) -> GpObject {
        self.cod
    }

    /// The full apex matrix `diag(h, 1)`.
    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    /// The block `h`.
    pub fn block(&self) -> Matrix {
        self.rep.submatrix(0, 0, self.cod.base_dim, self.dom.base_dim)
    }
}

impl fmt::Debug for GpMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {:?}", self.dom, self.cod, self.rep)
    }
}

impl Serialize for GpMorphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GpMorphism", 4)?;
        s.serialize_field("base_dim", &[self.dom.base_dim, self.cod.base_dim])?;
        s.serialize_field("block", &self.block())?;
        s.serialize_field("corner", "1")?;
        s.end()
    }
}

/// Binary coproduct `(A ∔ B)^` in `GP`, with the split retractions that make
/// its coprojections monic.
#[derive(Debug, Clone, PartialEq)]
pub struct GpCoproduct {
    pub summands: [GpObject; 2],
    pub apex: GpObject,
    pub coprojections: [GpMorphism; 2],
    pub retractions: [GpMorphism; 2],
}

/// Biproduct structure in `GP`, with the zero maps between the summands.
#[derive(Debug, Clone, PartialEq)]
pub struct GpBiproduct {
    pub coproduct: GpCoproduct,
    pub projections: [GpMorphism; 2],
    /// `0 : Â → B̂` and `0 : B̂ → Â`.
    pub zeros: [GpMorphism; 2],
}

/// A dual pair `(η̂, ε̂')` for `Â` (self-dual), with the phases removed from
/// the first choice of lifts.
#[derive(Debug, Clone, PartialEq)]
pub struct GpDualPair {
    pub object: GpObject,
    pub eta: GpMorphism,
    pub epsilon: GpMorphism,
    /// Phase `U` with left snake `= U` before correction.
    pub left_defect: QuotMorphism,
    /// Phase `V` with right snake `= V` before correction.
    pub right_defect: QuotMorphism,
}

/// A dagger dual `ε̂ = η̂† ∘ σ̂`, with the snake scalar detected directly and,
/// when a state was supplied, through that state.
#[derive(Debug, Clone, PartialEq)]
pub struct GpDaggerDual {
    pub object: GpObject,
    pub eta: GpMorphism,
    pub epsilon: GpMorphism,
    pub snake_scalar: GpMorphism,
    pub state: Option<GpMorphism>,
}

/// Outcome of comparing `Mat_S` with `GP(Mat_S / ℙ)` on samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub samples: usize,
    pub checks: usize,
    pub falsifications: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.falsifications.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.falsifications.push(what());
        }
    }
}

/// `GP(Mat_S / ℙ)` with cached precondition verdicts.
#[derive(Debug, Clone)]
pub struct GpCategory {
    quot: QuotCategory,
    generator: OnceLock<CheckVerdict>,
    positive_free: OnceLock<CheckVerdict>,
}

impl GpCategory {
    pub fn new(quot: QuotCategory) -> Self {
        GpCategory { quot, generator: OnceLock::new(), positive_free: OnceLock::new() }
    }

    pub fn from_phases(phases: PhaseGroup) -> Self {
        GpCategory::new(QuotCategory::new(phases))
    }

    pub fn quot(&self) -> &QuotCategory {
        &self.quot
    }

    pub fn ring(&self) -> Ring {
        self.quot.ring()
    }

    fn one(&self) -> Scalar {
        self.ring().one()
    }

    fn inv(&self, s: &Scalar) -> Result<Scalar, GpError> {
        self.ring().inv(s).map_err(|e| GpError::Mat(MatError::Scalar(e)))
    }

    // ---- morphisms and normalization ----

    /// Normal form of an apex matrix: rejects nonzero off-diagonal blocks and
    /// corners outside `ℙ`, then divides by the corner.
    pub fn gp_normalize(&self, m: &Matrix) -> Result<GpMorphism, GpError> {
        if m.ring() != self.ring() {
            return Err(GpError::Mat(MatError::RingMismatch { left: m.ring().to_string(), right: self.ring().to_string() }));
        }
        if m.rows() == 0 || m.cols() == 0 {
            return Err(GpError::DimMismatch(format!("{m} has no unit summand")));
        }
        let (n, k) = (m.cols() - 1, m.rows() - 1);
        let off_row = (0..n).any(|j| !m.get(k, j).is_zero());
        let off_col = (0..k).any(|i| !m.get(i, n).is_zero());
        if off_row || off_col {
            return Err(GpError::NotDiagonal(m.to_string()));
        }
        let corner = m.get(k, n).clone();
        if !self.quot.phases().contains(&corner) {
            return Err(GpError::NotUnitPreserving(format!("corner {corner} of {m} is not a global phase")));
        }
        let rep = if corner.is_one() { m.clone() } else { m.scale(&self.inv(&corner)?) };
        Ok(GpMorphism { dom: GpObject::new(n), cod: GpObject::new(k), rep })
    }

    /// Normal form of `diag(h, corner)`.
    pub fn gp_hom(&self, h: &Matrix, corner: &Scalar) -> Result<GpMorphism, GpError> {
        let c = Matrix::scalar(self.ring(), corner.clone());
        self.gp_normalize(&h.direct_sum(&c)?)
    }

    /// `F(h) = diag(h, 1)`.
    pub fn embed(&self, h: &Matrix) -> Result<GpMorphism, GpError> {
        self.gp_hom(h, &self.one())
    }

    pub fn from_class(&self, q: &QuotMorphism) -> Result<GpMorphism, GpError> {
        self.gp_normalize(q.rep())
    }

    /// The underlying morphism of `C`.
    pub fn class_of(&self, f: &GpMorphism) -> QuotMorphism {
        self.quot.class(&f.rep)
    }

    /// `[f]`, the class of the block.
    pub fn bracket(&self, f: &GpMorphism) -> QuotMorphism {
        self.quot.class(&f.block())
    }

    pub fn identity(&self, a: GpObject) -> GpMorphism {
        GpMorphism { dom: a, cod: a, rep: Matrix::identity(self.ring(), a.apex_dim()) }
    }

    /// `g ∘ f`, composed as classes of `C` and renormalized.
    pub fn compose(&self, g: &GpMorphism, f: &GpMorphism) -> Result<GpMorphism, GpError> {
        if g.dom != f.cod {
            return Err(GpError::DimMismatch(format!("{g:?} after {f:?}")));
        }
        self.from_class(&self.quot.compose(&self.class_of(g), &self.class_of(f))?)
    }

    pub fn compose_all(&self, fs: &[&GpMorphism]) -> Result<GpMorphism, GpError> {
        let (last, rest) = fs.split_last().ok_or_else(|| GpError::DimMismatch("empty composite".into()))?;
        let mut acc = (*last).clone();
        for g in rest.iter().rev() {
            acc = self.compose(g, &acc)?;
        }
        Ok(acc)
    }

    pub fn dagger(&self, f: &GpMorphism) -> Result<GpMorphism, GpError> {
        self.from_class(&self.quot.dagger(&self.class_of(f))?)
    }

    pub fn inverse(&self, f: &GpMorphism) -> Result<GpMorphism, GpError> {
        self.gp_normalize(&f.rep.inverse()?)
    }

    // ---- preconditions ----

    /// Phase-generator verdict for `I`: the fold of `I ∔ I` is phase monic
    /// (exhaustive) and sampled diagonal monos are phase epic; transitivity of
    /// the phases along those monos is checked alongside.
    pub fn generator_verdict(&self) -> &CheckVerdict {
        self.generator.get_or_init(|| {
            let ii = self.quot.induced_phased_structure(&[1, 1]);
            let mut verdicts = vec![check_fold_phase_monic(&self.quot, &ii).unwrap_or_else(err_unknown)];
            let ring = self.ring();
            let nonzero: Vec<Scalar> = ring.elements_up_to_height(1).into_iter().filter(|s| !s.is_zero()).collect();
            let mut trials = 0;
            for a in &nonzero {
                for b in &nonzero {
                    let m = self.quot.class(&Matrix::diagonal(ring, &[a.clone(), b.clone()]));
                    verdicts.push(check_phase_epic(&self.quot, &ii, &m).unwrap_or_else(err_unknown));
                    verdicts.push(check_transitive(&self.quot, &ii, &ii, &m).unwrap_or_else(err_unknown));
                    trials += 1;
                }
            }
            combine(verdicts, Mode::Sampled(trials))
        })
    }

    /// Positive-freeness of the phases of `I ∔ I`, which carry every scalar of
    /// `ℙ` that occurs in a phase of any induced biproduct.
    pub fn positive_free_verdict(&self) -> &CheckVerdict {
        self.positive_free.get_or_init(|| check_positive_free(&self.quot, &[1, 1], POSITIVITY_BOUND))
    }

    // ---- coproducts ----

    fn hat_structure(&self, a: GpObject) -> PhasedStructure<usize, QuotMorphism> {
        self.quot.induced_phased_structure(&[a.base_dim, 1])
    }

    /// Coprojections and retractions of `(A ∔ B)^`.
    pub fn gp_coproduct(&self, a: GpObject, b: GpObject) -> Result<GpCoproduct, GpError> {
        let verdict = self.generator_verdict();
        if !verdict.holds() {
            return Err(GpError::PreconditionFailed(format!("I is not a phase generator: {verdict:?}")));
        }
        let ks = coprojections(self.ring(), &[a.base_dim, b.base_dim]);
        let coprojections = [self.embed(&ks[0])?, self.embed(&ks[1])?];
        let retractions = [self.embed(&ks[0].transpose())?, self.embed(&ks[1].transpose())?];
        for i in 0..2 {
            if self.compose(&retractions[i], &coprojections[i])? != self.identity([a, b][i]) {
                return Err(GpError::Falsified(format!("coprojection {i} is not split by its retraction")));
            }
        }
        Ok(GpCoproduct { summands: [a, b], apex: GpObject::new(a.base_dim + b.base_dim), coprojections, retractions })
    }

    /// The mediating map, computed from phased copairing and phase correction
    /// and checked equal to the block row `diag([f | g], 1)`.
    pub fn gp_copair(&self, s: &GpCoproduct, f: &GpMorphism, g: &GpMorphism) -> Result<GpMorphism, GpError> {
        let via_phases = self.copair_via_phases(s, f, g)?;
        let direct = self.copair_direct(s, f, g)?;
        if via_phases != direct {
            return Err(GpError::Falsified(format!("mediating maps differ: {via_phases:?} vs {direct:?}")));
        }
        Ok(direct)
    }

    pub fn copair_direct(&self, s: &GpCoproduct, f: &GpMorphism, g: &GpMorphism) -> Result<GpMorphism, GpError> {
        self.check_legs(s, f, g)?;
        let c = f.cod;
        self.embed(&Matrix::hstack(self.ring(), c.base_dim, &[f.block(), g.block()])?)
    }

    fn check_legs(&self, s: &GpCoproduct, f: &GpMorphism, g: &GpMorphism) -> Result<(), GpError> {
        if f.dom != s.summands[0] || g.dom != s.summands[1] || f.cod != g.cod {
            return Err(GpError::DimMismatch(format!("legs {f:?} and {g:?}")));
        }
        Ok(())
    }

    /// Copairs `f` and `g ∘ κ_B` over `Â` and `B` inside `(A ∔ B) ∔ I`, finds
    /// the phase `U` relating the result on `B̂` to `g`, lifts it to a phase
    /// `V` of the apex, and returns `k ∘ V⁻¹`.
    pub fn copair_via_phases(&self, s: &GpCoproduct, f: &GpMorphism, g: &GpMorphism) -> Result<GpMorphism, GpError> {
        self.check_legs(s, f, g)?;
        let ring = self.ring();
        let (n, m) = (s.summands[0].base_dim, s.summands[1].base_dim);
        let apex = n + m + 1;
        let unit_row = apex - 1;
        let mut k_ahat = Matrix::zeros(ring, apex, n + 1);
        for j in 0..n {
            k_ahat.set(j, j, ring.one());
        }
        k_ahat.set(unit_row, n, ring.one());
        let mut k_b = Matrix::zeros(ring, apex, m);
        for j in 0..m {
            k_b.set(n + j, j, ring.one());
        }
        let mut k_bhat = k_b.clone().direct_sum(&Matrix::zeros(ring, 0, 1))?;
        k_bhat.set(unit_row, m, ring.one());
        let mut phases: Vec<QuotMorphism> = Vec::new();
        for q in self.quot.phases().elements() {
            let mut diag = vec![ring.one(); n];
            diag.extend(std::iter::repeat_n(q.clone(), m));
            diag.push(ring.one());
            let u = self.quot.class(&Matrix::diagonal(ring, &diag));
            if !phases.contains(&u) {
                phases.push(u);
            }
        }
        let s_prime = PhasedStructure {
            summands: vec![n + 1, m],
            apex,
            coprojections: vec![self.quot.class(&k_ahat), self.quot.class(&k_b)],
            projections: None,
            phases,
        };
        let b_in_bhat = coprojections(ring, &[m, 1])[0].clone();
        let g_leg = self.quot.compose(&self.class_of(g), &self.quot.class(&b_in_bhat))?;
        let k = phased::copair(&self.quot, &s_prime, &[self.class_of(f), g_leg])?;
        let k_on_bhat = self.quot.compose(&k, &self.quot.class(&k_bhat))?;
        let s_b = self.hat_structure(s.summands[1]);
        let u = phased::find_phase(&self.quot, &s_b, &self.class_of(g), &k_on_bhat)?;
        let k_bhat_class = self.quot.class(&k_bhat);
        let target = self.quot.compose(&k_bhat_class, &u)?;
        let mut lifts = Vec::new();
        for v in &s_prime.phases {
            if self.quot.compose(v, &k_bhat_class)? == target {
                lifts.push(v.clone());
            }
        }
        // searching forward and backward must give the same answer
        let mut answers = Vec::new();
        for v in [lifts.first(), lifts.last()].into_iter().flatten() {
            let v_inv = phased::phase_inverse(&self.quot, &s_prime, v)?;
            answers.push(self.from_class(&self.quot.compose(&k, &v_inv)?)?);
        }
        let h = answers.first().cloned().ok_or_else(|| GpError::Falsified(format!("phase {u:?} of B^ does not extend to the apex")))?;
        if answers.iter().any(|x| *x != h) {
            return Err(GpError::Falsified(format!("lifts of {u:?} give different mediating maps")));
        }
        if self.compose(&h, &s.coprojections[0])? != *f || self.compose(&h, &s.coprojections[1])? != *g {
            return Err(GpError::Falsified(format!("{h:?} does not mediate")));
        }
        Ok(h)
    }

    /// Every phase-shifted `h ∘ W` (over the three blocks of the apex) that
    /// still mediates `(f, g)` must equal `h`.
    pub fn check_copair_unique(
        &self,
        s: &GpCoproduct,
        f: &GpMorphism,
        g: &GpMorphism,
        h: &GpMorphism,
    ) -> Result<CheckVerdict, GpError> {
        let dims = [s.summands[0].base_dim, s.summands[1].base_dim, 1];
        for w in self.quot.block_phases(&dims) {
            let hw = self.from_class(&self.quot.compose(&self.class_of(h), &w)?)?;
            let mediates =
                self.compose(&hw, &s.coprojections[0])? == *f && self.compose(&hw, &s.coprojections[1])? == *g;
            if mediates && hw != *h {
                return Ok(CheckVerdict::Refuted(serde_json::json!({
                    "law": "gp-coproduct-unique",
                    "mediating": h,
                    "other": hw,
                })));
            }
        }
        Ok(CheckVerdict::Holds(Mode::Exhaustive))
    }

    /// `0̂ = 0 ∔ I`.
    pub fn initial_object(&self) -> GpObject {
        GpObject::new(0)
    }

    /// The map `0̂ → B̂`; every choice of corner phase normalizes to it.
    pub fn initial_map(&self, b: GpObject) -> Result<GpMorphism, GpError> {
        let h = Matrix::zeros(self.ring(), b.base_dim, 0);
        let out = self.embed(&h)?;
        for p in self.quot.phases().elements() {
            if self.gp_hom(&h, p)? != out {
                return Err(GpError::Falsified(format!("two maps out of the initial object into {b}")));
            }
        }
        Ok(out)
    }

    /// `κ_I : I → 0 ∔ I` is an isomorphism of `C`.
    pub fn initial_unit_is_iso(&self) -> bool {
        let k = coprojections(self.ring(), &[0, 1])[1].clone();
        k.is_invertible()
    }

    // ---- monoidal structure ----

    pub fn tensor_obj(&self, a: GpObject, b: GpObject) -> GpObject {
        GpObject::new(a.base_dim * b.base_dim)
    }

    /// `c_{A,B} : A⊗B ∔ I → (A ∔ I) ⊗ (B ∔ I)`, given by
    /// `c ∘ κ_{A⊗B} = κ_A ⊗ κ_B` and `c ∘ κ_I = κ_I ⊗ κ_I`.
    pub fn corner_map(&self, a: GpObject, b: GpObject) -> Result<Matrix, GpError> {
        let ring = self.ring();
        let ka = coprojections(ring, &[a.base_dim, 1]);
        let kb = coprojections(ring, &[b.base_dim, 1]);
        let left = ka[0].kron(&kb[0])?;
        let right = ka[1].kron(&kb[1])?;
        let c = Matrix::hstack(ring, a.apex_dim() * b.apex_dim(), &[left.clone(), right.clone()])?;
        let kab = coprojections(ring, &[a.base_dim * b.base_dim, 1]);
        if c.compose(&kab[0])? != left || c.compose(&kab[1])? != right {
            return Err(GpError::Falsified("corner equations".into()));
        }
        if !c.transpose().compose(&c)?.is_identity() {
            return Err(GpError::Falsified("corner map is not split monic".into()));
        }
        Ok(c)
    }

    /// `f ⊗̂ g`: the unique `x` with `(f ⊗ g) ∘ c = c ∘ x`, solved through
    /// the transpose of `c` and then checked.
    pub fn gp_tensor(&self, f: &GpMorphism, g: &GpMorphism) -> Result<GpMorphism, GpError> {
        let c_dom = self.corner_map(f.dom, g.dom)?;
        let c_cod = self.corner_map(f.cod, g.cod)?;
        let fg = f.rep.kron(&g.rep)?;
        let lhs = fg.compose(&c_dom)?;
        let x = c_cod.transpose().compose(&lhs)?;
        if c_cod.compose(&x)? != lhs {
            return Err(GpError::Falsified(format!("no solution of the corner equation for {f:?} ⊗ {g:?}")));
        }
        self.gp_normalize(&x)
    }

    /// `diag(h ⊗ k, 1)`, the block form used to cross-check [`Self::gp_tensor`].
    pub fn gp_tensor_blockwise(&self, f: &GpMorphism, g: &GpMorphism) -> Result<GpMorphism, GpError> {
        self.embed(&f.block().kron(&g.block())?)
    }

    /// `α̂ : (Â ⊗̂ B̂) ⊗̂ Ĉ → Â ⊗̂ (B̂ ⊗̂ Ĉ)`, solved from
    /// `(c_{A,B} ⊗ id) ∘ c_{AB,C} = (id ⊗ c_{B,C}) ∘ c_{A,BC} ∘ α̂`
    /// (the base associator being the identity).
    pub fn gp_associator(&self, a: GpObject, b: GpObject, c: GpObject) -> Result<GpMorphism, GpError> {
        let (lhs, rhs) = self.associator_legs(a, b, c)?;
        let x = rhs.transpose().compose(&lhs)?;
        if rhs.compose(&x)? != lhs {
            return Err(GpError::Falsified(format!("associator equation unsolvable at {a}, {b}, {c}")));
        }
        self.gp_normalize(&x)
    }

    pub fn gp_associator_inverse(&self, a: GpObject, b: GpObject, c: GpObject) -> Result<GpMorphism, GpError> {
        let (lhs, rhs) = self.associator_legs(a, b, c)?;
        let y = lhs.transpose().compose(&rhs)?;
        if lhs.compose(&y)? != rhs {
            return Err(GpError::Falsified(format!("inverse associator equation unsolvable at {a}, {b}, {c}")));
        }
        let inv = self.gp_normalize(&y)?;
        let fwd = self.gp_associator(a, b, c)?;
        let ab_c = self.tensor_obj(self.tensor_obj(a, b), c);
        let a_bc = self.tensor_obj(a, self.tensor_obj(b, c));
        if self.compose(&fwd, &inv)? != self.identity(a_bc) || self.compose(&inv, &fwd)? != self.identity(ab_c) {
            return Err(GpError::Falsified("associator is not invertible".into()));
        }
        Ok(inv)
    }

    fn associator_legs(&self, a: GpObject, b: GpObject, c: GpObject) -> Result<(Matrix, Matrix), GpError> {
        let ring = self.ring();
        let ab = self.tensor_obj(a, b);
        let bc = self.tensor_obj(b, c);
        let lhs = self
            .corner_map(a, b)?
            .kron(&Matrix::identity(ring, c.apex_dim()))?
            .compose(&self.corner_map(ab, c)?)?;
        let rhs = Matrix::identity(ring, a.apex_dim())
            .kron(&self.corner_map(b, c)?)?
            .compose(&self.corner_map(a, bc)?)?;
        Ok((lhs, rhs))
    }

    /// `Î = I ∔ I`.
    pub fn unit(&self) -> GpObject {
        GpObject::new(1)
    }

    /// `β : Î ⊗̂ Î → Î` with `β ∘ κ_{I⊗I} = κ_I ∘ ρ_I` and `β ∘ κ_I = κ_I`.
    pub fn gp_beta(&self) -> Result<GpMorphism, GpError> {
        let ring = self.ring();
        let ks = coprojections(ring, &[1, 1]);
        let rho = Matrix::identity(ring, 1);
        let beta = Matrix::hstack(ring, 2, &[ks[0].compose(&rho)?, ks[1].clone()])?;
        self.gp_normalize(&beta)
    }

    /// `ρ̂_A`: the unique `g` with `g ⊗̂ id_Î = (id_Â ⊗̂ β) ∘ α̂_{A,I,I}`.
    pub fn gp_right_unitor(&self, a: GpObject) -> Result<GpMorphism, GpError> {
        let i = self.unit();
        let rhs = self.compose(
            &self.gp_tensor(&self.identity(a), &self.gp_beta()?)?,
            &self.gp_associator(a, i, i)?,
        )?;
        self.solve_tensor_with_unit(&rhs, false)
    }

    /// `λ̂_A`: the unique `g` with `id_Î ⊗̂ g = (β ⊗̂ id_Â) ∘ α̂⁻¹_{I,I,A}`.
    pub fn gp_left_unitor(&self, a: GpObject) -> Result<GpMorphism, GpError> {
        let i = self.unit();
        let rhs = self.compose(
            &self.gp_tensor(&self.gp_beta()?, &self.identity(a))?,
            &self.gp_associator_inverse(i, i, a)?,
        )?;
        self.solve_tensor_with_unit(&rhs, true)
    }

    /// Solves `g ⊗̂ id_Î = rhs` (or `id_Î ⊗̂ g = rhs`). Since `Î` has base
    /// dimension one, the block of `g` is read off and the equation checked.
    fn solve_tensor_with_unit(&self, rhs: &GpMorphism, unit_left: bool) -> Result<GpMorphism, GpError> {
        let g = self.embed(&rhs.block())?;
        let id = self.identity(self.unit());
        let back = if unit_left { self.gp_tensor(&id, &g)? } else { self.gp_tensor(&g, &id)? };
        if back != *rhs {
            return Err(GpError::Falsified(format!("{rhs:?} is not of the form g ⊗ id")));
        }
        Ok(g)
    }

    /// `σ̂_{A,B} = c_{B,A}ᵀ ∘ σ ∘ c_{A,B}`, checked against `σ ∘ c = c ∘ σ̂`.
    pub fn gp_braiding(&self, a: GpObject, b: GpObject) -> Result<GpMorphism, GpError> {
        let sigma = braiding(self.ring(), a.apex_dim(), b.apex_dim());
        let c_ab = self.corner_map(a, b)?;
        let c_ba = self.corner_map(b, a)?;
        let lhs = sigma.compose(&c_ab)?;
        let x = c_ba.transpose().compose(&lhs)?;
        if c_ba.compose(&x)? != lhs {
            return Err(GpError::Falsified(format!("braiding does not restrict along corners at {a}, {b}")));
        }
        self.gp_normalize(&x)
    }

    // ---- global phases ----

    /// `ℙ_GP`: the phases `diag(q, 1)` of `Î`, in the order of `ℙ`.
    pub fn global_phases(&self) -> Result<Vec<GpMorphism>, GpError> {
        let ring = self.ring();
        self.quot.phases().elements().iter().map(|q| self.embed(&Matrix::scalar(ring, q.clone()))).collect()
    }

    /// `u · f = λ̂_B ∘ (u ⊗̂ f) ∘ λ̂_A⁻¹`.
    pub fn scalar_action(&self, u: &GpMorphism, f: &GpMorphism) -> Result<GpMorphism, GpError> {
        let l_cod = self.gp_left_unitor(f.cod)?;
        let l_dom = self.gp_left_unitor(f.dom)?;
        self.compose_all(&[&l_cod, &self.gp_tensor(u, f)?, &self.inverse(&l_dom)?])
    }

    /// The global phase `u` with `U = u · id_Â` for a phase `U` of `Â` in `C`.
    pub fn phase_as_global(&self, u: &QuotMorphism) -> Result<GpMorphism, GpError> {
        if u.dom() != u.cod() || u.dom() == 0 {
            return Err(GpError::DimMismatch(format!("{u:?} is not an endomorphism of an apex")));
        }
        let target = self.from_class(u)?;
        let id = self.identity(target.dom);
        for p in self.global_phases()? {
            if self.scalar_action(&p, &id)? == target {
                return Ok(p);
            }
        }
        Err(GpError::NoSuchScalar(format!("{u:?}")))
    }

    /// `ℙ → ℙ_GP` is a bijective homomorphism, and every phase of `Â` acts as
    /// the identity scaled by a global phase.
    pub fn check_global_phase_correspondence(&self, a: GpObject) -> Result<CheckVerdict, GpError> {
        let ring = self.ring();
        let elems = self.quot.phases().elements();
        let gp = self.global_phases()?;
        for i in 0..gp.len() {
            for j in 0..gp.len() {
                if i != j && gp[i] == gp[j] {
                    return Ok(refuted("global-phase-bijection", &gp[i], &gp[j]));
                }
                let prod = ring.mul(&elems[i], &elems[j]).map_err(|e| GpError::Mat(e.into()))?;
                let expected = self.embed(&Matrix::scalar(ring, prod))?;
                if self.compose(&gp[i], &gp[j])? != expected {
                    return Ok(refuted("global-phase-homomorphism", &gp[i], &gp[j]));
                }
            }
        }
        let mut images = Vec::new();
        for u in self.quot.block_phases(&[a.base_dim, 1]) {
            let p = self.phase_as_global(&u)?;
            if self.scalar_action(&p, &self.identity(a))? != self.from_class(&u)? {
                return Ok(refuted("phase-is-scalar", &self.from_class(&u)?, &p));
            }
            images.push(p);
        }
        if a.base_dim > 0 {
            let mut distinct = images.clone();
            distinct.dedup();
            if distinct.len() != images.len() || images.len() != gp.len() {
                return Ok(CheckVerdict::Refuted(serde_json::json!({
                    "law": "phase-scalar-bijection",
                    "object": a,
                    "phases": images.len(),
                    "global_phases": gp.len(),
                })));
            }
        }
        Ok(CheckVerdict::Holds(Mode::Exhaustive))
    }

    // ---- biproducts ----

    /// `κ`, `π` and zero maps for `(A ∔ B)^`. The projections come from the
    /// phased biproduct on the three blocks of the apex, corrected by the
    /// phase they induce on `Â`. With `dagger`, positive-freeness is required
    /// and `κ† = π` is checked.
    pub fn gp_biproduct(&self, a: GpObject, b: GpObject, dagger: bool) -> Result<GpBiproduct, GpError> {
        if dagger {
            let v = self.positive_free_verdict();
            if !v.holds() {
                return Err(GpError::PreconditionFailed(format!("phases are not positive-free: {v:?}")));
            }
        }
        let coproduct = self.gp_coproduct(a, b)?;
        let ring = self.ring();
        let dims = [a.base_dim, b.base_dim, 1];
        let s = phased::biproduct_from_coproduct(&self.quot, &self.quot.induced_phased_structure(&dims))?;
        let ps = s.projections.as_ref().expect("biproduct_from_coproduct attaches projections");
        let mut projections = Vec::new();
        for (i, obj) in [a, b].into_iter().enumerate() {
            let raw_rep = Matrix::vstack(ring, coproduct.apex.apex_dim(), &[ps[i].rep().clone(), ps[2].rep().clone()])?;
            let raw = self.quot.class(&raw_rep);
            let on_summand = self.quot.compose(&raw, &self.class_of(&coproduct.coprojections[i]))?;
            let s_obj = self.hat_structure(obj);
            let u = phased::find_phase(&self.quot, &s_obj, &self.quot.id(obj.apex_dim()), &on_summand)?;
            let u_inv = phased::phase_inverse(&self.quot, &s_obj, &u)?;
            projections.push(self.from_class(&self.quot.compose(&u_inv, &raw)?)?);
        }
        let zeros = [self.zero(a, b)?, self.zero(b, a)?];
        let projections: [GpMorphism; 2] = [projections[0].clone(), projections[1].clone()];
        for i in 0..2 {
            for j in 0..2 {
                let got = self.compose(&projections[i], &coproduct.coprojections[j])?;
                let want = if i == j { self.identity(coproduct.summands[i]) } else { zeros[j].clone() };
                if got != want {
                    return Err(GpError::Falsified(format!("π_{i} ∘ κ_{j} = {got:?}")));
                }
            }
        }
        if dagger {
            for i in 0..2 {
                let kd = self.dagger(&coproduct.coprojections[i])?;
                if kd != projections[i] {
                    return Err(GpError::Falsified(format!("κ_{i}† = {kd:?} differs from π_{i}")));
                }
            }
        }
        Ok(GpBiproduct { coproduct, projections, zeros })
    }

    /// `0_{Â,B̂} = κ_I ∘ π_I`.
    pub fn zero(&self, a: GpObject, b: GpObject) -> Result<GpMorphism, GpError> {
        let ring = self.ring();
        let pi = coprojections(ring, &[a.base_dim, 1])[1].transpose();
        let k = coprojections(ring, &[b.base_dim, 1])[1].clone();
        self.gp_normalize(&k.compose(&pi)?)
    }

    // ---- compact closure ----

    /// `(ε̂ ⊗̂ id) ∘ α̂⁻¹ ∘ (id ⊗̂ η̂) ∘ ρ̂⁻¹` followed by `λ̂`.
    pub fn snake_left(&self, a: GpObject, eta: &GpMorphism, eps: &GpMorphism) -> Result<GpMorphism, GpError> {
        let id = self.identity(a);
        self.compose_all(&[
            &self.gp_left_unitor(a)?,
            &self.gp_tensor(eps, &id)?,
            &self.gp_associator_inverse(a, a, a)?,
            &self.gp_tensor(&id, eta)?,
            &self.inverse(&self.gp_right_unitor(a)?)?,
        ])
    }

    /// `ρ̂ ∘ (id ⊗̂ ε̂) ∘ α̂ ∘ (η̂ ⊗̂ id) ∘ λ̂⁻¹`.
    pub fn snake_right(&self, a: GpObject, eta: &GpMorphism, eps: &GpMorphism) -> Result<GpMorphism, GpError> {
        let id = self.identity(a);
        self.compose_all(&[
            &self.gp_right_unitor(a)?,
            &self.gp_tensor(&id, eps)?,
            &self.gp_associator(a, a, a)?,
            &self.gp_tensor(eta, &id)?,
            &self.inverse(&self.gp_left_unitor(a)?)?,
        ])
    }

    /// Lifts `η̂ = diag(p·cup, 1)` and `ε̂ = diag(q·cap, 1)`, extracts the
    /// phases `U`, `V` by which the snakes fail, and replaces `ε̂` by
    /// `ε̂ ∘ (U⁻¹ ⊗̂ id)`. Both snakes are then checked to be identities.
    pub fn gp_duals(&self, a: GpObject, eta_phase: &Scalar, eps_phase: &Scalar) -> Result<GpDualPair, GpError> {
        let base = compact(self.ring(), a.base_dim);
        if !base.snakes_hold()? {
            return Err(GpError::Falsified(format!("base snakes fail at dimension {}", a.base_dim)));
        }
        let eta = self.embed(&base.cup.scale(eta_phase))?;
        let eps = self.embed(&base.cap.scale(eps_phase))?;
        let s_a = self.hat_structure(a);
        let id_class = self.quot.id(a.apex_dim());
        let left = self.snake_left(a, &eta, &eps)?;
        let u = phased::find_phase(&self.quot, &s_a, &id_class, &self.class_of(&left))?;
        let right = self.snake_right(a, &eta, &eps)?;
        let v = phased::find_phase(&self.quot, &s_a, &id_class, &self.class_of(&right))?;
        let u_inv = self.from_class(&phased::phase_inverse(&self.quot, &s_a, &u)?)?;
        let epsilon = self.compose(&eps, &self.gp_tensor(&u_inv, &self.identity(a))?)?;
        let id = self.identity(a);
        if self.snake_left(a, &eta, &epsilon)? != id || self.snake_right(a, &eta, &epsilon)? != id {
            return Err(GpError::Falsified(format!("corrected snakes fail at {a}")));
        }
        Ok(GpDualPair { object: a, eta, epsilon, left_defect: u, right_defect: v })
    }

    /// A basis state `e_i : Î → Â` with `ψ† ∘ ψ = id_Î`.
    pub fn find_isometric_state(&self, a: GpObject) -> Result<GpMorphism, GpError> {
        let ring = self.ring();
        let one = self.identity(self.unit());
        for i in 0..a.base_dim {
            let mut e = Matrix::zeros(ring, a.base_dim, 1);
            e.set(i, 0, ring.one());
            let psi = self.embed(&e)?;
            if self.compose(&self.dagger(&psi)?, &psi)? == one {
                return Ok(psi);
            }
        }
        Err(GpError::NoState(a.base_dim))
    }

    /// Dagger dual with `ε̂ = η̂† ∘ σ̂` for the lift `η̂ = diag(p·cup, 1)`.
    ///
    /// The left snake equals `u · id` for a global phase `u`. With a state
    /// `ψ` the same `u` is recovered as `ψ† ∘ snake ∘ ψ`. A nontrivial `u`
    /// is reported as a precondition failure when the phases are not
    /// positive-free, and as a falsification otherwise.
    pub fn gp_dagger_compact(
        &self,
        a: GpObject,
        eta_phase: &Scalar,
        state: Option<&GpMorphism>,
    ) -> Result<GpDaggerDual, GpError> {
        let base = compact(self.ring(), a.base_dim);
        let eta = self.embed(&base.cup.scale(eta_phase))?;
        let epsilon = self.compose(&self.dagger(&eta)?, &self.gp_braiding(a, a)?)?;
        let left = self.snake_left(a, &eta, &epsilon)?;
        let snake_scalar = if a.base_dim == 0 {
            self.identity(self.unit())
        } else {
            let u = phased::find_phase(&self.quot, &self.hat_structure(a), &self.quot.id(a.apex_dim()), &self.class_of(&left))?;
            self.phase_as_global(&u)?
        };
        if let Some(psi) = state {
            let one = self.identity(self.unit());
            if psi.dom != self.unit() || psi.cod != a || self.compose(&self.dagger(psi)?, psi)? != one {
                return Err(GpError::NoState(a.base_dim));
            }
            let through_state = self.compose_all(&[&self.dagger(psi)?, &left, psi])?;
            if through_state != snake_scalar {
                return Err(GpError::Falsified(format!(
                    "snake scalar {snake_scalar:?} differs from its value {through_state:?} on the state"
                )));
            }
        }
        let id = self.identity(a);
        if snake_scalar != self.identity(self.unit()) {
            let v = self.positive_free_verdict();
            if !v.holds() {
                return Err(GpError::PreconditionFailed(format!("snake scalar {snake_scalar:?}; positivity: {v:?}")));
            }
            return Err(GpError::Falsified(format!("snake scalar {snake_scalar:?} despite positive-freeness")));
        }
        if left != id || self.snake_right(a, &eta, &epsilon)? != id {
            return Err(GpError::Falsified(format!("dagger snakes fail at {a}")));
        }
        Ok(GpDaggerDual { object: a, eta, epsilon, snake_scalar, state: state.cloned() })
    }

    // ---- comparison with the unquotiented category ----

    /// Checks `F : Mat_S → GP(Mat_S / ℙ)`, `F(h) = diag(h, 1)`, on samples:
    /// fullness (the block of `F(h)` is a preimage), faithfulness against
    /// every other sample and every phase multiple, strong monoidality on
    /// consecutive pairs, and the reverse comparison through `[−]`, whose
    /// fibres are exactly the global-phase orbits.
    pub fn equivalence_roundtrip(&self, samples: &[Matrix]) -> Result<EquivalenceReport, GpError> {
        let mut report = EquivalenceReport { samples: samples.len(), ..Default::default() };
        let gp_phases = self.global_phases()?;
        let images: Vec<GpMorphism> = samples.iter().map(|h| self.embed(h)).collect::<Result<_, _>>()?;
        for (idx, (h, fh)) in samples.iter().zip(&images).enumerate() {
            report.expect(fh.block() == *h, || format!("sample {idx}: block of F(h) is not h"));
            report.expect(self.embed(&fh.block())? == *fh, || format!("sample {idx}: F(block) differs"));
            for q in self.quot.phases().elements() {
                if q.is_one() || h.is_zero() {
                    continue;
                }
                let other = self.embed(&h.scale(q))?;
                report.expect(other != *fh, || format!("sample {idx}: F identifies h and {q}·h"));
            }
            for (jdx, (h2, fh2)) in samples.iter().zip(&images).enumerate().skip(idx + 1) {
                if h2.rows() == h.rows() && h2.cols() == h.cols() {
                    report.expect((h == h2) == (fh == fh2), || format!("samples {idx}, {jdx}: F not faithful"));
                }
            }
            if let Some(next) = samples.get(idx + 1) {
                let lhs = self.embed(&h.kron(next)?)?;
                let rhs = self.gp_tensor(fh, &images[idx + 1])?;
                report.expect(lhs == rhs, || format!("samples {idx}, {}: F(h ⊗ k) ≠ F(h) ⊗ F(k)", idx + 1));
            }
            let bracket = self.bracket(fh);
            report.expect(bracket == self.quot.class(h), || format!("sample {idx}: [F(h)] ≠ class of h"));
            for u in &gp_phases {
                let scaled = self.scalar_action(u, fh)?;
                report.expect(self.bracket(&scaled) == bracket, || format!("sample {idx}: [u·F(h)] ≠ [F(h)]"));
            }
            for q in self.quot.phases().elements() {
                let other = self.embed(&h.scale(q))?;
                let mut hit = false;
                for u in &gp_phases {
                    if self.scalar_action(u, fh)? == other {
                        hit = true;
                        break;
                    }
                }
                report.expect(hit, || format!("sample {idx}: F({q}·h) is not a phase multiple of F(h)"));
            }
        }
        Ok(report)
    }
}

fn err_unknown(e: PhasedError) -> CheckVerdict {
    CheckVerdict::Unknown(e.to_string())
}

fn refuted(law: &str, a: &GpMorphism, b: &GpMorphism) -> CheckVerdict {
    CheckVerdict::Refuted(serde_json::json!({ "law": law, "left": a, "right": b }))
}

/// Laws checked for one triple of objects: pentagon (with the fourth object
/// `Î`), triangle, both hexagons, `σ̂ ∘ σ̂ = id`, and `λ̂_Î = ρ̂_Î = β`.
pub fn check_coherence(cat: &GpCategory, a: GpObject, b: GpObject, c: GpObject) -> Result<CheckVerdict, GpError> {
    let t = |x: GpObject, y: GpObject| cat.tensor_obj(x, y);
    let id = |x: GpObject| cat.identity(x);
    let alpha = |x, y, z| cat.gp_associator(x, y, z);
    let i = cat.unit();

    for d in [i, c] {
        let lhs = cat.compose(&alpha(a, b, t(c, d))?, &alpha(t(a, b), c, d)?)?;
        let rhs = cat.compose_all(&[
            &cat.gp_tensor(&id(a), &alpha(b, c, d)?)?,
            &alpha(a, t(b, c), d)?,
            &cat.gp_tensor(&alpha(a, b, c)?, &id(d))?,
        ])?;
        if lhs != rhs {
            return Ok(refuted("pentagon", &lhs, &rhs));
        }
    }

    let lhs = cat.compose(&cat.gp_tensor(&id(a), &cat.gp_left_unitor(b)?)?, &alpha(a, i, b)?)?;
    let rhs = cat.gp_tensor(&cat.gp_right_unitor(a)?, &id(b))?;
    if lhs != rhs {
        return Ok(refuted("triangle", &lhs, &rhs));
    }

    let beta = cat.gp_beta()?;
    for (name, u) in [("left-unitor-at-unit", cat.gp_left_unitor(i)?), ("right-unitor-at-unit", cat.gp_right_unitor(i)?)] {
        if u != beta {
            return Ok(refuted(name, &u, &beta));
        }
    }

    let sigma = |x, y| cat.gp_braiding(x, y);
    let lhs = cat.compose_all(&[&alpha(b, c, a)?, &sigma(a, t(b, c))?, &alpha(a, b, c)?])?;
    let rhs = cat.compose_all(&[
        &cat.gp_tensor(&id(b), &sigma(a, c)?)?,
        &alpha(b, a, c)?,
        &cat.gp_tensor(&sigma(a, b)?, &id(c))?,
    ])?;
    if lhs != rhs {
        return Ok(refuted("hexagon", &lhs, &rhs));
    }
    let ainv = |x, y, z| cat.gp_associator_inverse(x, y, z);
    let lhs = cat.compose_all(&[&ainv(c, a, b)?, &sigma(t(a, b), c)?, &ainv(a, b, c)?])?;
    let rhs = cat.compose_all(&[
        &cat.gp_tensor(&sigma(a, c)?, &id(b))?,
        &ainv(a, c, b)?,
        &cat.gp_tensor(&id(a), &sigma(b, c)?)?,
    ])?;
    if lhs != rhs {
        return Ok(refuted("inverse-hexagon", &lhs, &rhs));
    }
    let twice = cat.compose(&sigma(b, a)?, &sigma(a, b)?)?;
    if twice != id(t(a, b)) {
        return Ok(refuted("symmetry", &twice, &id(t(a, b))));
    }
    Ok(CheckVerdict::Holds(Mode::Exhaustive))
}

/// Naturality of `α̂` and `σ̂` for morphisms `f : Â → Â'`, `g`, `h`.
pub fn check_naturality(
    cat: &GpCategory,
    f: &GpMorphism,
    g: &GpMorphism,
    h: &GpMorphism,
) -> Result<CheckVerdict, GpError> {
    let alpha_dom = cat.gp_associator(f.dom(), g.dom(), h.dom())?;
    let alpha_cod = cat.gp_associator(f.cod(), g.cod(), h.cod())?;
    let lhs = cat.compose(&alpha_cod, &cat.gp_tensor(&cat.gp_tensor(f, g)?, h)?)?;
    let rhs = cat.compose(&cat.gp_tensor(f, &cat.gp_tensor(g, h)?)?, &alpha_dom)?;
    if lhs != rhs {
        return Ok(refuted("associator-naturality", &lhs, &rhs));
    }
    let lhs = cat.compose(&cat.gp_braiding(f.cod(), g.cod())?, &cat.gp_tensor(f, g)?)?;
    let rhs = cat.compose(&cat.gp_tensor(g, f)?, &cat.gp_braiding(f.dom(), g.dom())?)?;
    if lhs != rhs {
        return Ok(refuted("braiding-naturality", &lhs, &rhs));
    }
    Ok(CheckVerdict::Holds(Mode::Exhaustive))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> GpCategory {
        let ring = Ring::gaussian();
        GpCategory::from_phases(PhaseGroup::gaussian_units(ring))
    }

    fn m(rows: usize, cols: usize, e: &[&str]) -> Matrix {
        Matrix::from_strs(Ring::gaussian(), rows, cols, e).unwrap()
    }

    #[test]
    fn normalizes_by_the_corner() {
        let c = cat();
        let f = c.gp_normalize(&m(3, 3, &["1", "2", "0", "0", "i", "0", "0", "0", "i"])).unwrap();
        assert_eq!(f.block(), m(2, 2, &["-i", "-2i", "0", "1"]));
        assert_eq!(f.rep().get(2, 2), &Ring::gaussian().one());
        assert_eq!(c.gp_normalize(f.rep()).unwrap(), f);
    }

    #[test]
    fn normalization_rejects_bad_shapes() {
        let c = cat();
        let off = m(2, 2, &["1", "1", "0", "1"]);
        assert!(matches!(c.gp_normalize(&off), Err(GpError::NotDiagonal(_))));
        let corner = m(2, 2, &["1", "0", "0", "2"]);
        assert!(matches!(c.gp_normalize(&corner), Err(GpError::NotUnitPreserving(_))));
    }

    #[test]
    fn corner_shape() {
        let c = cat();
        let k = c.corner_map(GpObject::new(2), GpObject::new(2)).unwrap();
        assert_eq!((k.rows(), k.cols()), (9, 5));
        assert_eq!(c.tensor_obj(GpObject::new(2), GpObject::new(2)).apex_dim(), 5);
    }

    #[test]
    fn coproduct_copair_agrees_on_both_paths() {
        let c = cat();
        let (a, b, x) = (GpObject::new(1), GpObject::new(1), GpObject::new(2));
        let s = c.gp_coproduct(a, b).unwrap();
        assert_eq!(s.apex.apex_dim(), 3);
        let f = c.gp_hom(&m(2, 1, &["1", "i"]), &Ring::gaussian().from_int(-1)).unwrap();
        let g = c.embed(&m(2, 1, &["2", "0"])).unwrap();
        let h = c.gp_copair(&s, &f, &g).unwrap();
        assert!(c.check_copair_unique(&s, &f, &g, &h).unwrap().holds());
        let id = c.gp_copair(&s, &s.coprojections[0], &s.coprojections[1]).unwrap();
        assert_eq!(id, c.identity(s.apex));
        let _ = x;
    }

    #[test]
    fn beta_and_unitors_at_unit() {
        let c = cat();
        let i = c.unit();
        assert_eq!(c.gp_beta().unwrap(), c.identity(i));
        assert_eq!(c.gp_left_unitor(i).unwrap(), c.gp_beta().unwrap());
        assert!(check_coherence(&c, GpObject::new(1), GpObject::new(1), GpObject::new(1)).unwrap().holds());
    }

    #[test]
    fn phase_as_global_example() {
        let c = cat();
        let ring = Ring::gaussian();
        let i = ring.imaginary_unit().unwrap();
        let u = c.quot().class(&Matrix::diagonal(ring, &[ring.one(), i.clone()]));
        let p = c.phase_as_global(&u).unwrap();
        assert_eq!(p.block(), Matrix::scalar(ring, ring.inv(&i).unwrap()));
        assert!(c.check_global_phase_correspondence(GpObject::new(2)).unwrap().holds());
    }

    #[test]
    fn duals_correct_a_nontrivial_defect() {
        let c = cat();
        let ring = Ring::gaussian();
        let i = ring.imaginary_unit().unwrap();
        let pair = c.gp_duals(GpObject::new(2), &i, &ring.one()).unwrap();
        assert_ne!(pair.left_defect, c.quot().id(3));
        let dd = c.gp_dagger_compact(GpObject::new(2), &i, Some(&c.find_isometric_state(GpObject::new(2)).unwrap()));
        assert!(dd.is_ok());
        assert_eq!(c.find_isometric_state(GpObject::new(0)), Err(GpError::NoState(0)));
    }

    #[test]
    fn biproduct_over_conjugation() {
        let c = cat();
        let bp = c.gp_biproduct(GpObject::new(1), GpObject::new(2), true).unwrap();
        assert_eq!(bp.projections[0].block(), m(1, 3, &["1", "0", "0"]));
        let zero = c.initial_object();
        assert_eq!(c.zero(zero, zero).unwrap(), c.identity(zero));
    }

    #[test]
    fn dagger_biproduct_needs_positive_freeness() {
        let ring = Ring::gaussian_trivial();
        let c = GpCategory::from_phases(PhaseGroup::parse(ring, &["1", "-1"]).unwrap());
        assert!(matches!(
            c.gp_biproduct(GpObject::new(1), GpObject::new(1), true),
            Err(GpError::PreconditionFailed(_))
        ));
        assert!(c.gp_biproduct(GpObject::new(1), GpObject::new(1), false).is_ok());
    }
}
