//! The main constructions: σ_can as a trace, the Frobenius-class
//! membership checks, the Hecke operator T_p = σ_can ∘ P_p/I, the Adams
//! summands ψ^H, the mod-p congruence suite, and the θ-operation with
//! its torsion obstruction.
//!
//! Everything here returns either an exact base-ring element or a
//! [`FrobeniusReport`] — a list of named pass/fail checks whose failing
//! entries carry the offending value, so a red report is directly
//! actionable.

use serde::Serialize;
use std::sync::Arc;

use crate::freealg::{submodule_index, AlgElt, MonicPoly, QuotAlgebra, RingMap};
use crate::models::TheoryModel;
use crate::padic::PAdicInt;
use crate::ring::{RingElt, TowerElt};
use crate::series::BaseElt;
use crate::{Error, Result};

/// One named verification with its witness value. `detail` states what
/// was checked in words; `witness` is the exact computed element.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    pub witness: String,
    pub detail: String,
}

/// A batch of named checks against one model.
#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusReport {
    pub model: String,
    pub checks: Vec<CheckResult>,
}

impl FrobeniusReport {
    fn new(model: &str) -> Self {
        FrobeniusReport {
            model: model.to_string(),
            checks: Vec::new(),
        }
    }

    fn push(
        &mut self,
        check: impl Into<String>,
        pass: bool,
        witness: String,
        detail: impl Into<String>,
    ) {
        self.checks.push(CheckResult {
            check: check.into(),
            pass,
            witness,
            detail: detail.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// σ_can(a): the trace of multiplication-by-a on the sigma algebra.
/// With `normalized`, scaled by the inverse of m = |Sub_p(Λ)| (a p-adic
/// unit since m ≡ 1 mod p) so that scalars are fixed on the nose.
pub fn sigma_can<Root: TowerElt>(
    model: &TheoryModel<Root>,
    a: &AlgElt<BaseElt>,
    normalized: bool,
) -> BaseElt {
    assert!(
        a.parent().same_structure(model.sigma_algebra()),
        "element is not in the model's sigma algebra"
    );
    let tr = a.trace();
    if !normalized {
        return tr;
    }
    let m = PAdicInt::new(model.prime(), model.base().prec(), model.rank() as i128)
        .expect("model parameters are valid");
    tr.mul_scalar(&m.inv().expect("subgroup count is 1 mod p"))
}

/// T_p(g) = σ_can(P_p/I(g)): trace of the power operation's value.
pub fn hecke_tp<Root: TowerElt>(model: &TheoryModel<Root>, g: &BaseElt) -> Result<BaseElt> {
    Ok(model.power_op(g)?.trace())
}

/// ψ^H(g): the power operation's value pushed into the splitting ring
/// along the character map of the root indexed by `root_index`.
pub fn adams_psi<Root: TowerElt>(
    model: &TheoryModel<Root>,
    g: &BaseElt,
    root_index: usize,
) -> Result<Root> {
    let roots = model.roots();
    if root_index >= roots.len() {
        return Err(Error::BadElement(format!(
            "root index {root_index} out of range for {} roots",
            roots.len()
        )));
    }
    let pg = model.power_op(g)?;
    let chi = RingMap::new(Arc::clone(model.sigma_algebra()), roots[root_index].clone())?;
    Ok(chi.apply(&pg))
}

/// θ(g) = (T_p(g) − g^p)/p, exact. The difference must be divisible by
/// p coefficientwise — a unit coefficient is a torsion obstruction and
/// is reported as an error with the offending monomial. The result is
/// carried at one digit less precision.
pub fn theta<Root: TowerElt>(model: &TheoryModel<Root>, g: &BaseElt) -> Result<BaseElt> {
    let p = model.prime() as u32;
    let diff = hecke_tp(model, g)?.sub(&g.pow(p));
    if let Some((exps, c)) = diff.terms().find(|(_, c)| c.is_unit()) {
        return Err(Error::TorsionObstruction {
            monomial: monomial_str(exps, diff.ring().vars()),
            value: c.to_string(),
        });
    }
    diff.div_exact(1)
}

fn monomial_str(exps: &[u32], vars: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(vars)
        .filter(|(k, _)| **k > 0)
        .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Membership of σ_can in the Frobenius class: mod p it must agree with
/// the quotient-by-(y) map, i.e. σ_can(x^i) ≡ 0 mod p for 1 ≤ i < m,
/// σ_can(1) = m, and m ≡ 1 mod p.
pub fn frobenius_class_check<Root: TowerElt>(model: &TheoryModel<Root>) -> FrobeniusReport {
    let mut report = FrobeniusReport::new(&model.describe());
    let m = model.rank();
    let p = model.prime();

    let tr_one = model.sigma_algebra().one().trace();
    report.push(
        "sigma_can(1) = m",
        tr_one == model.base().constant(m as i128),
        tr_one.to_string(),
        format!("trace of the identity must be the rank m = {m}"),
    );
    report.push(
        "m = 1 mod p",
        m as u64 % p == 1,
        m.to_string(),
        "the subgroup count is congruent to 1 mod p",
    );

    let x = model.sigma_algebra().generator();
    let mut xi = x.clone();
    for i in 1..m {
        let tr = xi.trace();
        report.push(
            format!("sigma_can(x^{i}) = 0 mod p"),
            tr.truncate_prec(1).is_zero(),
            tr.to_string(),
            "traces of the positive basis powers vanish mod p, so sigma_can lifts the quotient-by-(y) map",
        );
        xi = xi.mul(&x);
    }
    report
}

/// The congruence T_p(g) ≡ g^p mod p over `samples` pseudo-random base
/// elements drawn from a seeded stream. The single report entry carries
/// either the verified count or the first counterexample.
pub fn congruence_check<Root: TowerElt>(
    model: &TheoryModel<Root>,
    samples: u32,
    seed: u64,
) -> Result<FrobeniusReport> {
    use rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = model.prime() as u32;
    let mut failures = 0u32;
    let mut first_failure = None;
    for s in 0..samples {
        let g = model.base().random(&mut rng, model.base().degcap());
        let lhs = hecke_tp(model, &g)?.truncate_prec(1);
        let rhs = g.pow(p).truncate_prec(1);
        if lhs != rhs {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(format!(
                    "sample {s}: g = {g}, T_p(g) mod p = {lhs}, g^p mod p = {rhs}"
                ));
            }
        }
    }
    let mut report = FrobeniusReport::new(&model.describe());
    report.push(
        format!("T_p(g) = g^p mod p ({samples} samples, seed {seed})"),
        failures == 0,
        first_failure.unwrap_or_else(|| format!("{samples}/{samples} samples verified")),
        "the Hecke operator reduces to the p-th power map mod p",
    );
    Ok(report)
}

/// The index of E(BΣ_p) inside E × E(BΣ_p)/I under (restriction,
/// quotient) is p: the inclusion determinant must be p times a unit.
pub fn index_lemma_report<Root: TowerElt>(model: &TheoryModel<Root>) -> Result<FrobeniusReport> {
    let full_alg = QuotAlgebra::new("y", model.full_modulus().clone());
    let restrict = RingMap::new(Arc::clone(&full_alg), model.base().zero())?;
    let quot = RingMap::new(Arc::clone(&full_alg), model.sigma_algebra().generator())?;
    let mut vectors = Vec::new();
    for yi in full_alg.basis() {
        let mut row = vec![restrict.apply(&yi)];
        row.extend(quot.apply(&yi).coords().iter().cloned());
        vectors.push(row);
    }
    let idx = submodule_index(&vectors)?;
    let mut report = FrobeniusReport::new(&model.describe());
    report.push(
        "index determinant has valuation 1",
        idx.valuation == crate::padic::Valuation::Finite(1),
        format!("det = {}", idx.det),
        "the basis 1, y, …, y^m maps with determinant of p-adic valuation exactly 1",
    );
    report.push(
        "det / p is a unit",
        idx.cofactor_is_unit,
        format!("valuation {}", idx.valuation),
        "after dividing by p the determinant is invertible, so the index is exactly p",
    );
    Ok(report)
}

/// The recorded roots must factor the modulus completely over the
/// splitting ring: Π (x − rᵢ) = f on the nose.
pub fn factorization_report<Root: TowerElt>(model: &TheoryModel<Root>) -> FrobeniusReport {
    let roots = model.roots();
    let lifted = model.sigma_algebra().modulus().lift_coeffs(&roots[0]);
    let mut product = MonicPoly::linear_root(&roots[0]);
    for r in &roots[1..] {
        product = product.mul_linear(r);
    }
    let mut report = FrobeniusReport::new(&model.describe());
    report.push(
        "modulus splits over D1",
        product == lifted,
        format!("f = {}", model.sigma_algebra().modulus()),
        format!(
            "the product of {} linear factors over the splitting ring reproduces the modulus",
            roots.len()
        ),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{height1_model, height2_model, TheoryModel};
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    #[test]
    fn sigma_can_values_in_the_height2_model() {
        let m = height2_model(16, 8).unwrap();
        let x = m.sigma_algebra().generator();
        assert!(sigma_can(&m, &x, false).is_zero());
        assert_eq!(sigma_can(&m, &m.sigma_algebra().one(), false), m.base().constant(3));
        assert_eq!(sigma_can(&m, &m.sigma_algebra().one(), true), m.base().one());
        assert_eq!(
            sigma_can(&m, &x.mul(&x), false),
            m.base().monomial(&[1], 2).unwrap()
        );
    }

    #[test]
    fn normalized_sigma_fixes_scalars() {
        let m = height2_model(16, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20 {
            let e = m.base().random(&mut rng, 6);
            let scalar = m.sigma_algebra().scalar(e.clone());
            assert_eq!(sigma_can(&m, &scalar, true), e);
        }
    }

    #[test]
    fn frobenius_class_reports() {
        let h2 = height2_model(16, 8).unwrap();
        let rep = frobenius_class_check(&h2);
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.checks.len(), 4); // 1 = m, m odd, x^1, x^2
        for p in [2u64, 3, 5] {
            let h1 = height1_model(p, 8, 4).unwrap();
            assert!(frobenius_class_check(&h1).all_pass());
        }
    }

    #[test]
    fn hecke_values() {
        let m = height2_model(16, 8).unwrap();
        let u1 = m.base().var("u1").unwrap();
        // the headline value: T₂(u₁) = u₁²
        assert_eq!(hecke_tp(&m, &u1).unwrap(), u1.mul(&u1));
        // constants are multiplied by the subgroup count
        let z = m.base().constant(7);
        assert_eq!(hecke_tp(&m, &z).unwrap(), m.base().constant(21));
        assert_eq!(hecke_tp(&m, &m.base().one()).unwrap(), m.base().constant(3));
        // height 1: the Hecke operator is the identity on constants
        let h1 = height1_model(3, 16, 8).unwrap();
        let w = h1.base().constant(11);
        assert_eq!(hecke_tp(&h1, &w).unwrap(), w);
    }

    #[test]
    fn hecke_is_additive() {
        let m = height2_model(12, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..30 {
            let g = m.base().random(&mut rng, 8);
            let h = m.base().random(&mut rng, 8);
            assert_eq!(
                hecke_tp(&m, &g.add(&h)).unwrap(),
                hecke_tp(&m, &g).unwrap().add(&hecke_tp(&m, &h).unwrap())
            );
        }
    }

    #[test]
    fn adams_summands() {
        let m = height2_model(16, 8).unwrap();
        let u1 = m.base().var("u1").unwrap();
        // ψ at the first root: u₁² + 3y − u₁y², assembled by hand in D₁
        let y = &m.roots()[0];
        let expect = y
            .embed_base(&u1.mul(&u1))
            .add(&y.mul(&y.int_like(3)))
            .sub(&y.mul(y).mul(&y.embed_base(&u1)));
        assert_eq!(adams_psi(&m, &u1, 0).unwrap(), expect);
        // constants pass through every summand
        assert_eq!(adams_psi(&m, &m.base().one(), 2).unwrap(), y.one_like());
        // the three summands add up to the Hecke value
        let total = adams_psi(&m, &u1, 0)
            .unwrap()
            .add(&adams_psi(&m, &u1, 1).unwrap())
            .add(&adams_psi(&m, &u1, 2).unwrap());
        assert_eq!(total, y.embed_base(&hecke_tp(&m, &u1).unwrap()));
        assert!(matches!(
            adams_psi(&m, &u1, 3),
            Err(Error::BadElement(_))
        ));
    }

    #[test]
    fn hecke_as_sum_on_random_elements() {
        let m = height2_model(12, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let sample = &m.roots()[0];
        for _ in 0..20 {
            let g = m.base().random(&mut rng, 8);
            let mut total = sample.zero_like();
            for i in 0..3 {
                total = total.add(&adams_psi(&m, &g, i).unwrap());
            }
            assert_eq!(total, sample.embed_base(&hecke_tp(&m, &g).unwrap()));
        }
    }

    #[test]
    fn congruence_suite_passes_and_is_deterministic() {
        let m = height2_model(12, 8).unwrap();
        let rep = congruence_check(&m, 50, 1).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        let rep2 = congruence_check(&m, 50, 1).unwrap();
        assert_eq!(
            serde_json::to_string(&rep).unwrap(),
            serde_json::to_string(&rep2).unwrap()
        );
        let h1 = height1_model(3, 8, 4).unwrap();
        assert!(congruence_check(&h1, 25, 7).unwrap().all_pass());
    }

    #[test]
    fn theta_values_and_reconstruction() {
        let m = height2_model(16, 8).unwrap();
        let u1 = m.base().var("u1").unwrap();
        // T₂(u₁) − u₁² = 0, so θ(u₁) = 0
        assert!(theta(&m, &u1).unwrap().is_zero());
        // θ(1) = (3 − 1)/2 = 1, carried at one digit less
        let t1 = theta(&m, &m.base().one()).unwrap();
        assert_eq!(t1.prec(), 15);
        assert!(t1.is_unit());
        assert_eq!(t1, m.base().one());
        // reconstruction: g^p + p·θ(g) = T_p(g) at precision N−1
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..25 {
            let g = m.base().random(&mut rng, 8);
            let th = theta(&m, &g).unwrap();
            let p_scalar = PAdicInt::new(2, 15, 2).unwrap();
            let recon = g.pow(2).add(&th.mul_scalar(&p_scalar));
            assert_eq!(recon, hecke_tp(&m, &g).unwrap().truncate_prec(15));
        }
        // height-1 closed form: θ(z) = (z − z^p)/p
        let h1 = height1_model(5, 8, 4).unwrap();
        let z = h1.base().constant(2);
        let tz = theta(&h1, &z).unwrap();
        // (2 − 32)/5 = −6
        assert_eq!(tz, h1.base().constant(-6).truncate_prec(7));
    }

    #[test]
    fn torsion_obstruction_is_detected() {
        let m = height2_model(16, 8).unwrap();
        let u1 = m.base().var("u1").unwrap();
        // corrupt the power image by +u₁: T(u₁) picks up an odd 3u₁ term
        let bad_img = m.power_image().unwrap().add(&m.sigma_algebra().scalar(u1.clone()));
        let bad = TheoryModel::assemble(
            2,
            2,
            Arc::clone(m.sigma_algebra()),
            m.full_modulus().clone(),
            Some(bad_img),
            m.roots().to_vec(),
        )
        .unwrap();
        match theta(&bad, &u1) {
            Err(Error::TorsionObstruction { monomial, value }) => {
                assert_eq!(monomial, "u1");
                assert!(value.starts_with('3'));
            }
            other => panic!("expected a torsion obstruction, got {other:?}"),
        }
    }

    #[test]
    fn index_lemma_across_models() {
        let h2 = height2_model(16, 8).unwrap();
        let rep = index_lemma_report(&h2).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert!(rep.checks[0].witness.contains("det = "));
        for p in [2u64, 3, 5] {
            let h1 = height1_model(p, 8, 4).unwrap();
            assert!(index_lemma_report(&h1).unwrap().all_pass(), "p={p}");
        }
    }

    #[test]
    fn factorization_reports_pass() {
        let h2 = height2_model(16, 8).unwrap();
        assert!(factorization_report(&h2).all_pass());
        let h1 = height1_model(2, 8, 4).unwrap();
        assert!(factorization_report(&h1).all_pass());
    }
}
