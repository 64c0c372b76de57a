//! `GP` over the quotient of a finite `G-Set` category by translations, with
//! the regular orbit `G` as unit summand: `Â = A ⊔ G`.
//!
//! Everything here is exhaustive over the enumerated objects.

use serde::Serialize;
use serde_json::json;

use crate::fincat::{FinCatError, FiniteQuotient, GSetCategory};
use crate::phased::{CheckVerdict, Mode};

/// `Â = A ⊔ G` with its two inclusions (as morphisms of the base category).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HatObject {
    pub base: usize,
    pub apex: usize,
    pub kappa_base: usize,
    pub kappa_unit: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FiniteEquivalenceReport {
    pub object_pairs: usize,
    pub base_morphisms: usize,
    pub gp_morphisms: usize,
    pub falsifications: Vec<String>,
}

impl FiniteEquivalenceReport {
    pub fn passed(&self) -> bool {
        self.falsifications.is_empty()
    }
}

pub struct FiniteGp<'a> {
    gsets: &'a GSetCategory,
    quotient: FiniteQuotient,
    generator: usize,
}

impl<'a> FiniteGp<'a> {
    pub fn new(gsets: &'a GSetCategory) -> Result<Self, FinCatError> {
        let generator = gsets
            .regular_orbit()
            .ok_or_else(|| FinCatError::SizeLimit { what: "the regular orbit".into(), limit: gsets.group.order() })?;
        Ok(FiniteGp { gsets, quotient: gsets.quotient(false)?, generator })
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.quotient
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn hat(&self, a: usize) -> Option<HatObject> {
        let (apex, kappa_base, kappa_unit) = self.gsets.disjoint_union(a, self.generator)?;
        Some(HatObject { base: a, apex, kappa_base, kappa_unit })
    }

    /// All objects whose hat fits within the size bound.
    pub fn hats(&self) -> Vec<HatObject> {
        (0..self.quotient.num_objects()).filter_map(|a| self.hat(a)).collect()
    }

    /// Classes `Â → B̂` that are diagonal and fix the unit inclusion.
    pub fn gp_homs(&self, a: &HatObject, b: &HatObject) -> Vec<usize> {
        let q = &self.quotient;
        let (ka, kb) = (q.class_of(a.kappa_base), q.class_of(b.kappa_base));
        let (ua, ub) = (q.class_of(a.kappa_unit), q.class_of(b.kappa_unit));
        let diagonal_images: Vec<usize> =
            q.hom(a.base, b.base).iter().filter_map(|&g| q.compose(kb, g)).collect();
        q.hom(a.apex, b.apex)
            .iter()
            .copied()
            .filter(|&c| {
                q.compose(c, ua) == Some(ub) && q.compose(c, ka).is_some_and(|x| diagonal_images.contains(&x))
            })
            .collect()
    }

    /// `F(f) = [f ⊔ id_G]` for a base morphism `f : A → B`.
    pub fn embed(&self, a: &HatObject, b: &HatObject, f: usize) -> Option<usize> {
        let cat = self.gsets.category.as_ref();
        let values = cat.function(f)?;
        let (na, nb) = (self.gsets.size(a.base), self.gsets.size(b.base));
        let g = self.gsets.size(self.generator);
        let mut out: Vec<u8> = values.to_vec();
        out.extend((0..g).map(|x| (nb + x) as u8));
        debug_assert_eq!(out.len(), na + g);
        cat.lookup_function(a.apex, b.apex, &out).map(|m| self.quotient.class_of(m))
    }

    /// `[c]`: the class `g` with `c ∘ [κ_A] = [κ_B] ∘ g`.
    pub fn bracket(&self, a: &HatObject, b: &HatObject, c: usize) -> Option<usize> {
        let q = &self.quotient;
        let target = q.compose(c, q.class_of(a.kappa_base))?;
        let kb = q.class_of(b.kappa_base);
        q.hom(a.base, b.base).iter().copied().find(|&g| q.compose(kb, g) == Some(target))
    }

    /// Phases of `B̂` as a phased coproduct `B ∔ G`.
    pub fn hat_phases(&self, b: &HatObject) -> Vec<usize> {
        let q = &self.quotient;
        q.coprojection_preserving(b.apex, &[q.class_of(b.kappa_base), q.class_of(b.kappa_unit)])
    }

    /// `F` is full and faithful on every pair of hats, and `[−]` is full with
    /// fibres given by phases of the codomain.
    pub fn check_equivalence(&self) -> FiniteEquivalenceReport {
        let mut report = FiniteEquivalenceReport::default();
        let cat = self.gsets.category.as_ref();
        let hats = self.hats();
        for a in &hats {
            for b in &hats {
                report.object_pairs += 1;
                let homs = self.gp_homs(a, b);
                report.gp_morphisms += homs.len();
                let base = cat.hom(a.base, b.base);
                report.base_morphisms += base.len();
                let mut images = Vec::new();
                for &f in base {
                    match self.embed(a, b, f) {
                        Some(c) if homs.contains(&c) => {
                            if images.contains(&c) {
                                report.falsifications.push(format!("F not faithful at {f} ({}→{})", a.base, b.base));
                            }
                            images.push(c);
                            if self.bracket(a, b, c) != Some(self.quotient.class_of(f)) {
                                report.falsifications.push(format!("[F({f})] is not the class of {f}"));
                            }
                        }
                        other => report.falsifications.push(format!("F({f}) = {other:?} is not a GP morphism")),
                    }
                }
                for &c in &homs {
                    if !images.contains(&c) {
                        report.falsifications.push(format!("GP morphism {c} ({}→{}) has no preimage", a.base, b.base));
                    }
                }
                for &g in self.quotient.hom(a.base, b.base) {
                    if !homs.iter().any(|&c| self.bracket(a, b, c) == Some(g)) {
                        report.falsifications.push(format!("class {g} is not a bracket"));
                    }
                }
                let phases = self.hat_phases(b);
                for &c in &homs {
                    for &d in &homs {
                        if self.bracket(a, b, c) == self.bracket(a, b, d)
                            && !phases.iter().any(|&w| self.quotient.compose(w, c) == Some(d))
                        {
                            report.falsifications.push(format!("{c} and {d} share a bracket but differ by no phase"));
                        }
                    }
                }
            }
        }
        report
    }

    /// Coproducts `(A ⊔ B)^` of hats have exactly one mediating map for every
    /// pair of legs into every hat.
    pub fn check_coproduct_uniqueness(&self) -> CheckVerdict {
        let q = &self.quotient;
        let hats = self.hats();
        let mut cases = 0;
        for a in &hats {
            for b in &hats {
                let Some((ab, ka, kb)) = self.gsets.disjoint_union(a.base, b.base) else {
                    continue;
                };
                let Some(abh) = self.hat(ab) else {
                    continue;
                };
                let (Some(ka_hat), Some(kb_hat)) = (self.embed(a, &abh, ka), self.embed(b, &abh, kb)) else {
                    return CheckVerdict::Unknown(format!("inclusions of {} ⊔ {} have no hat", a.base, b.base));
                };
                for c in &hats {
                    let out = self.gp_homs(&abh, c);
                    for &f in &self.gp_homs(a, c) {
                        for &g in &self.gp_homs(b, c) {
                            cases += 1;
                            let mediating: Vec<usize> = out
                                .iter()
                                .copied()
                                .filter(|&h| q.compose(h, ka_hat) == Some(f) && q.compose(h, kb_hat) == Some(g))
                                .collect();
                            if mediating.len() != 1 {
                                return CheckVerdict::Refuted(json!({
                                    "law": "finite-gp-coproduct-unique",
                                    "summands": [a.base, b.base],
                                    "target": c.base,
                                    "legs": [f, g],
                                    "mediating": mediating,
                                }));
                            }
                        }
                    }
                }
            }
        }
        if cases == 0 {
            return CheckVerdict::Unknown("no coproduct of hats fits the size bound".into());
        }
        CheckVerdict::Holds(Mode::Exhaustive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{build_gset_category, FiniteGroup};

    #[test]
    fn z2_equivalence_and_uniqueness() {
        let gsets = build_gset_category(&FiniteGroup::cyclic(2), 4).unwrap();
        let gp = FiniteGp::new(&gsets).unwrap();
        assert!(gp.hats().len() >= 4);
        let report = gp.check_equivalence();
        assert!(report.passed(), "{:?}", report.falsifications);
        assert!(gp.check_coproduct_uniqueness().holds());
    }

    #[test]
    fn trivial_group_generator_is_a_point() {
        let gsets = build_gset_category(&FiniteGroup::by_name("trivial").unwrap(), 3).unwrap();
        let gp = FiniteGp::new(&gsets).unwrap();
        assert_eq!(gsets.size(gp.generator()), 1);
        assert!(gp.check_equivalence().passed());
    }
}
