//! The quotient `Mat_S / ℙ` identifying matrices that differ by a global
//! phase `p ∈ ℙ`. Classes are stored by their canonical representative, the
//! lexicographically least element of the orbit `{p·f}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcat::{coprojections, MatError, Matrix, MatrixJson};
use crate::phased::{PhasedCategory, PhasedError, PhasedStructure};
use crate::scalars::{PhaseGroup, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("phase group is not closed under the dagger: {0}")]
    DaggerNotClosed(String),
    #[error("morphism belongs to phase group {found:016x}, expected {expected:016x}")]
    GroupMismatch { expected: u64, found: u64 },
}

impl From<QuotError> for PhasedError {
    fn from(e: QuotError) -> Self {
        match e {
            QuotError::Mat(MatError::DimMismatch(s)) => PhasedError::DimMismatch(s),
            other => PhasedError::Backend(other.to_string()),
        }
    }
}

impl From<MatError> for PhasedError {
    fn from(e: MatError) -> Self {
        QuotError::from(e).into()
    }
}

/// The least element of `{p·f : p ∈ ℙ}` in row-major lexicographic order.
///
/// Only the first nonzero entry needs comparing: every multiple shares the
/// zero pattern, and `p ↦ p·x` is injective for `x ≠ 0`.
pub fn canonical_rep(f: &Matrix, phases: &PhaseGroup) -> Matrix {
    let Some(k) = f.first_nonzero() else {
        return f.clone();
    };
    let lead = &f.entries()[k];
    let best = phases.elements().iter().min_by(|p, q| p.mul_raw(lead).cmp(&q.mul_raw(lead))).expect("group is nonempty");
    f.scale(best)
}

/// `f ∼ g` iff `f = u·g` for some `u ∈ ℙ`.
pub fn eq_mod_phase(f: &Matrix, g: &Matrix, phases: &PhaseGroup) -> Result<bool, MatError> {
    if f.rows() != g.rows() || f.cols() != g.cols() {
        return Err(MatError::DimMismatch(format!(
            "{}x{} vs {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    if f.ring() != g.ring() {
        return Err(MatError::RingMismatch { left: f.ring().to_string(), right: g.ring().to_string() });
    }
    Ok(canonical_rep(f, phases) == canonical_rep(g, phases))
}

/// A morphism of `Mat_S / ℙ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuotMorphism {
    rep: Matrix,
    group: u64,
}

impl QuotMorphism {
    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn group(&self) -> u64 {
        self.group
    }

    pub fn dom(&self) -> usize {
        self.rep.cols()
    }

    pub fn cod(&self) -> usize {
        self.rep.rows()
    }
}

impl fmt::Debug for QuotMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

#[derive(Serialize, Deserialize)]
struct QuotMorphismJson {
    rep: MatrixJson,
    phase_group: String,
}

impl Serialize for QuotMorphism {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuotMorphismJson { rep: self.rep.to_json(), phase_group: format!("{:016x}", self.group) }.serialize(serializer)
    }
}

/// `Mat_S / ℙ` for a validated phase group.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotCategory {
    phases: PhaseGroup,
    group: u64,
}

impl QuotCategory {
    pub fn new(phases: PhaseGroup) -> Self {
        let group = phases.fingerprint();
        QuotCategory { phases, group }
    }

    pub fn ring(&self) -> Ring {
        self.phases.ring()
    }

    pub fn phases(&self) -> &PhaseGroup {
        &self.phases
    }

    pub fn group_id(&self) -> u64 {
        self.group
    }

    /// The class `[f]`.
    pub fn class(&self, f: &Matrix) -> QuotMorphism {
        QuotMorphism { rep: canonical_rep(f, &self.phases), group: self.group }
    }

    pub fn id(&self, n: usize) -> QuotMorphism {
        self.class(&Matrix::identity(self.ring(), n))
    }

    fn check(&self, a: &QuotMorphism) -> Result<(), QuotError> {
        if a.group != self.group {
            return Err(QuotError::GroupMismatch { expected: self.group, found: a.group });
        }
        Ok(())
    }

    /// `[g] ∘ [f] = [g ∘ f]`.
    pub fn compose(&self, g: &QuotMorphism, f: &QuotMorphism) -> Result<QuotMorphism, QuotError> {
        self.check(g)?;
        self.check(f)?;
        Ok(self.class(&g.rep.compose(&f.rep)?))
    }

    pub fn tensor(&self, a: &QuotMorphism, b: &QuotMorphism) -> Result<QuotMorphism, QuotError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.class(&a.rep.kron(&b.rep)?))
    }

    pub fn direct_sum(&self, a: &QuotMorphism, b: &QuotMorphism) -> Result<QuotMorphism, QuotError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.class(&a.rep.direct_sum(&b.rep)?))
    }

    /// `[f]† = [f†]`, defined when `ℙ† ⊆ ℙ`.
    pub fn dagger(&self, a: &QuotMorphism) -> Result<QuotMorphism, QuotError> {
        self.check(a)?;
        self.phases.check_dagger_closed().map_err(|e| QuotError::DaggerNotClosed(e.to_string()))?;
        Ok(self.class(&a.rep.dagger()))
    }

    /// Classes of `diag(p_1·id, …, p_k·id)` over the blocks of `dims`, one
    /// per class, identity first.
    pub fn block_phases(&self, dims: &[usize]) -> Vec<QuotMorphism> {
        let ring = self.ring();
        let mut out: Vec<QuotMorphism> = Vec::new();
        let mut choice = vec![0usize; dims.len()];
        let g = self.phases.elements();
        loop {
            let mut entries = Vec::new();
            for (block, &d) in dims.iter().enumerate() {
                for _ in 0..d {
                    entries.push(g[choice[block]].clone());
                }
            }
            let u = self.class(&Matrix::diagonal(ring, &entries));
            if !out.contains(&u) {
                out.push(u);
            }
            // odometer over all choices
            let mut pos = dims.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < g.len() {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }

    /// Image of the standard coproduct `d_1 + … + d_k` under `[−]`, with
    /// phases `[diag(id, p·id, …)]`; each listed phase is checked to preserve
    /// the coprojections.
    pub fn induced_phased_structure(&self, dims: &[usize]) -> PhasedStructure<usize, QuotMorphism> {
        let ks: Vec<QuotMorphism> = coprojections(self.ring(), dims).iter().map(|k| self.class(k)).collect();
        let phases = self.block_phases(dims);
        for u in &phases {
            for k in &ks {
                debug_assert_eq!(self.compose(u, k).as_ref(), Ok(k));
            }
        }
        PhasedStructure {
            summands: dims.to_vec(),
            apex: dims.iter().sum(),
            coprojections: ks,
            projections: None,
            phases,
        }
    }

    /// Induced structure with the standard projections attached.
    pub fn induced_biproduct(&self, dims: &[usize]) -> PhasedStructure<usize, QuotMorphism> {
        let mut s = self.induced_phased_structure(dims);
        s.projections = Some(s.coprojections.iter().map(|k| self.class(&k.rep.transpose())).collect());
        s
    }

    fn coprojection_matrix(&self, s: &PhasedStructure<usize, QuotMorphism>) -> Result<Matrix, PhasedError> {
        let reps: Vec<Matrix> = s.coprojections.iter().map(|k| k.rep.clone()).collect();
        let k = Matrix::hstack(self.ring(), s.apex, &reps)?;
        if !k.is_square() {
            return Err(PhasedError::DimMismatch(format!(
                "coprojections into {} cover {} columns",
                s.apex,
                k.cols()
            )));
        }
        Ok(k)
    }
}

impl PhasedCategory for QuotCategory {
    type Obj = usize;
    type Mor = QuotMorphism;

    fn dom(&self, f: &QuotMorphism) -> usize {
        f.dom()
    }

    fn cod(&self, f: &QuotMorphism) -> usize {
        f.cod()
    }

    fn identity(&self, a: &usize) -> QuotMorphism {
        self.id(*a)
    }

    fn compose(&self, g: &QuotMorphism, f: &QuotMorphism) -> Result<QuotMorphism, PhasedError> {
        Ok(QuotCategory::compose(self, g, f)?)
    }

    fn phased_coproduct(&self, summands: &[usize]) -> Result<PhasedStructure<usize, QuotMorphism>, PhasedError> {
        Ok(self.induced_phased_structure(summands))
    }

    /// `h = [f_1 | … | f_k] ∘ K⁻¹` where `K = [κ_1 | … | κ_k]`.
    fn copair(&self, s: &PhasedStructure<usize, QuotMorphism>, legs: &[QuotMorphism]) -> Result<QuotMorphism, PhasedError> {
        let Some(first) = legs.first() else {
            return Err(PhasedError::DimMismatch("copair of no legs needs a codomain".into()));
        };
        let cod = first.cod();
        let k = self.coprojection_matrix(s)?;
        let reps: Vec<Matrix> = legs.iter().map(|l| l.rep.clone()).collect();
        let row = Matrix::hstack(self.ring(), cod, &reps)?;
        let kinv = k.inverse().map_err(|_| PhasedError::NoMediatingMap("coprojections are not jointly invertible".into()))?;
        Ok(self.class(&row.compose(&kinv)?))
    }

    /// Solves `h'∘κ_i = p_i·(h∘κ_i)` block by block and sets
    /// `U = [p_1 κ_1 | … | p_k κ_k] ∘ K⁻¹`. The result must appear in the
    /// structure's phase list.
    fn find_phase(
        &self,
        s: &PhasedStructure<usize, QuotMorphism>,
        h: &QuotMorphism,
        h_prime: &QuotMorphism,
    ) -> Result<QuotMorphism, PhasedError> {
        let ring = self.ring();
        let mut scaled = Vec::with_capacity(s.coprojections.len());
        for k in &s.coprojections {
            let a = h.rep.compose(&k.rep)?;
            let b = h_prime.rep.compose(&k.rep)?;
            let p = if a.is_zero() {
                if !b.is_zero() {
                    return Err(PhasedError::NoPhase);
                }
                ring.one()
            } else {
                b.scalar_ratio(&a).ok_or(PhasedError::NoPhase)?
            };
            if !self.phases.contains(&p) {
                return Err(PhasedError::NoPhase);
            }
            scaled.push(k.rep.scale(&p));
        }
        let kmat = self.coprojection_matrix(s)?;
        let kinv = kmat.inverse().map_err(|_| PhasedError::NoPhase)?;
        let u = self.class(&Matrix::hstack(ring, s.apex, &scaled)?.compose(&kinv)?);
        if !s.phases.contains(&u) {
            return Err(PhasedError::PhaseNotEnumerated(format!("{u:?}")));
        }
        Ok(u)
    }

    fn zero(&self, from: &usize, to: &usize) -> Option<QuotMorphism> {
        Some(self.class(&Matrix::zeros(self.ring(), *to, *from)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phased::{copair, find_phase};

    fn cat() -> QuotCategory {
        QuotCategory::new(PhaseGroup::gaussian_units(Ring::gaussian()))
    }

    fn m(rows: usize, cols: usize, e: &[&str]) -> Matrix {
        Matrix::from_strs(Ring::gaussian(), rows, cols, e).unwrap()
    }

    #[test]
    fn canonical_rep_of_diag_i_1() {
        let c = cat();
        let f = m(2, 2, &["i", "0", "0", "1"]);
        assert_eq!(canonical_rep(&f, c.phases()), m(2, 2, &["-1", "0", "0", "i"]));
    }

    #[test]
    fn canonical_rep_of_zero_and_idempotence() {
        let c = cat();
        let z = Matrix::zeros(Ring::gaussian(), 2, 3);
        assert_eq!(canonical_rep(&z, c.phases()), z);
        let f = m(2, 2, &["0", "3-i", "1/2", "i"]);
        let r = canonical_rep(&f, c.phases());
        assert_eq!(canonical_rep(&r, c.phases()), r);
    }

    #[test]
    fn eq_mod_phase_examples() {
        let c = cat();
        assert!(eq_mod_phase(&m(1, 1, &["i"]), &m(1, 1, &["1"]), c.phases()).unwrap());
        assert!(!eq_mod_phase(&m(1, 1, &["2"]), &m(1, 1, &["1"]), c.phases()).unwrap());
        assert!(matches!(
            eq_mod_phase(&m(1, 1, &["2"]), &m(1, 2, &["1", "0"]), c.phases()),
            Err(MatError::DimMismatch(_))
        ));
    }

    #[test]
    fn dagger_of_phase_multiple() {
        let c = cat();
        let f = m(2, 2, &["1", "2", "i", "0"]);
        let a = c.class(&f.scale(&Ring::gaussian().parse_scalar("i").unwrap()));
        assert_eq!(c.dagger(&a).unwrap(), c.class(&f.dagger()));
    }

    #[test]
    fn dagger_over_trivial_involution() {
        let t = Ring::gaussian_trivial();
        let c = QuotCategory::new(PhaseGroup::parse(t, &["1", "-1"]).unwrap());
        let f = Matrix::from_strs(t, 1, 2, &["i", "1"]).unwrap();
        assert_eq!(c.dagger(&c.class(&f)).unwrap(), c.class(&f.transpose()));
    }

    #[test]
    fn induced_structure_on_1_1() {
        let c = cat();
        let s = c.induced_phased_structure(&[1, 1]);
        assert_eq!(s.apex, 2);
        assert_eq!(s.phases.len(), 4);
        let trivial = QuotCategory::new(PhaseGroup::trivial(Ring::gaussian()));
        assert_eq!(trivial.induced_phased_structure(&[1, 1]).phases, vec![trivial.id(2)]);
    }

    #[test]
    fn induced_phases_form_a_group() {
        let c = cat();
        let s = c.induced_phased_structure(&[1, 2]);
        for u in &s.phases {
            for v in &s.phases {
                assert!(s.phases.contains(&c.compose(u, v).unwrap()));
            }
        }
    }

    #[test]
    fn copair_of_identities() {
        let c = cat();
        let s = c.induced_phased_structure(&[1, 1]);
        let h = copair(&c, &s, &[c.id(1), c.id(1)]).unwrap();
        assert_eq!(h, c.class(&m(1, 2, &["1", "1"])));
    }

    #[test]
    fn find_phase_per_block() {
        let c = cat();
        let s = c.induced_phased_structure(&[1, 1]);
        let h = c.class(&m(1, 2, &["1", "1"]));
        let h2 = c.class(&m(1, 2, &["1", "i"]));
        let u = find_phase(&c, &s, &h, &h2).unwrap();
        assert_eq!(u, c.class(&m(2, 2, &["1", "0", "0", "i"])));
        assert_eq!(find_phase(&c, &s, &h, &h).unwrap(), c.id(2));
        let h3 = c.class(&m(1, 2, &["1", "2"]));
        assert_eq!(find_phase(&c, &s, &h, &h3), Err(PhasedError::NoPhase));
    }

    #[test]
    fn group_mismatch_is_rejected() {
        let a = cat();
        let b = QuotCategory::new(PhaseGroup::trivial(Ring::gaussian()));
        assert!(matches!(a.compose(&a.id(1), &b.id(1)), Err(QuotError::GroupMismatch { .. })));
    }
}
