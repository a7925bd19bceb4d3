//! The bundled theory models: height 1 from the multiplicative formal
//! group law at p ∈ {2, 3, 5}, height 2 at p = 2 from the published
//! presentation Z₂[[u₁]][x]/(x³ − u₁x − 2) with u₁ ↦ u₁² + 3x − u₁x².
//!
//! A [`TheoryModel`] packages the ring tower the operators act on: the
//! coefficient base E, the rank-m quotient algebra modeling E(BΣ_p)/I,
//! the degree-(m+1) modulus y·f(y) of E(BΣ_p), the value of the power
//! operation on the base generator (height 2), and a splitting ring D₁
//! in which f factors into the recorded root list. `assemble` re-derives
//! and enforces every structural invariant, so a model that constructs
//! at all has already verified its constants.

use std::sync::{Arc, OnceLock};

use crate::charfun::enum_subgroups;
use crate::freealg::{AlgElt, MonicPoly, QuotAlgebra};
use crate::padic::Valuation;
use crate::ring::{RingElt, TowerElt};
use crate::series::{BaseElt, SeriesRing};
use crate::{Error, Result};

/// Element of the two-stage splitting tower Z₂[[u₁]][y]/(f)[z]/(f/(z−y)).
pub type D1Elt = AlgElt<AlgElt<BaseElt>>;

pub type Height1Model = TheoryModel<BaseElt>;
pub type Height2Model = TheoryModel<D1Elt>;

/// [p](x) = (1 + x)^p − 1 for the multiplicative formal group law, as a
/// monic degree-p polynomial over the given coefficient ring. The
/// constant term is always 0, so the transfer-ideal generator
/// [p](x)/x is synthetic division by the root 0.
pub fn p_series_multiplicative(base: &SeriesRing) -> MonicPoly<BaseElt> {
    let p = base.prime();
    let mut coeffs = Vec::with_capacity(p as usize + 1);
    coeffs.push(base.zero()); // binom(p,0) − 1
    for i in 1..=p {
        coeffs.push(base.constant(binom(p, i) as i128));
    }
    MonicPoly::new(coeffs).expect("binom(p,p) = 1")
}

fn binom(n: u64, k: u64) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// A concrete model of the tower E → E(BΣ_p) → E(BΣ_p)/I → D₁.
#[derive(Debug)]
pub struct TheoryModel<Root: TowerElt> {
    prime: u64,
    height: u32,
    base: SeriesRing,
    sigma_algebra: Arc<QuotAlgebra<BaseElt>>,
    full_modulus: MonicPoly<BaseElt>,
    power_image: Option<AlgElt<BaseElt>>,
    roots: Vec<Root>,
    // smallest certified exponent with power_image^t = 0, None if the
    // safety bound was exhausted; computed on first use
    nilpotence: OnceLock<Option<u32>>,
}

impl<Root: TowerElt> TheoryModel<Root> {
    /// Builds a model and checks every structural invariant: the rank of
    /// the sigma algebra is the subgroup count |Sub_p(Λ)|, f(0) is p
    /// times a unit, the full modulus is y·f(y), and the recorded roots
    /// factor f completely in the splitting ring.
    pub fn assemble(
        prime: u64,
        height: u32,
        sigma_algebra: Arc<QuotAlgebra<BaseElt>>,
        full_modulus: MonicPoly<BaseElt>,
        power_image: Option<AlgElt<BaseElt>>,
        roots: Vec<Root>,
    ) -> Result<Self> {
        let f = sigma_algebra.modulus();
        let base = f.coeff(0).ring().clone();
        let m = sigma_algebra.rank();

        let expected = enum_subgroups(prime, height, 1)?.count();
        if m != expected {
            return Err(Error::ModelConstruction(format!(
                "sigma algebra has rank {m}, but the subgroup count is {expected}"
            )));
        }

        let f0 = f.coeff(0);
        let clean_p = f0.min_val() == Valuation::Finite(1)
            && f0.div_exact(1).map(|c| c.is_unit()).unwrap_or(false);
        if !clean_p {
            return Err(Error::ModelConstruction(format!(
                "f(0) = {f0} is not p times a unit"
            )));
        }

        if full_modulus.degree() != m + 1
            || !full_modulus.coeff(0).is_zero()
            || (0..=m).any(|i| full_modulus.coeff(i + 1) != f.coeff(i))
        {
            return Err(Error::ModelConstruction(
                "full modulus is not y times the sigma modulus".into(),
            ));
        }

        if let Some(img) = &power_image {
            assert!(
                img.parent().same_structure(&sigma_algebra),
                "power image lives in a foreign algebra"
            );
        }

        if roots.len() != m {
            return Err(Error::RootCount {
                expected: m,
                got: roots.len(),
            });
        }
        // f must factor as Π (x − rᵢ) over the splitting ring, on the nose
        let lifted = f.lift_coeffs(&roots[0]);
        let mut product = MonicPoly::linear_root(&roots[0]);
        for r in &roots[1..] {
            product = product.mul_linear(r);
        }
        if product != lifted {
            return Err(Error::ModelConstruction(
                "recorded roots do not factor the modulus".into(),
            ));
        }

        Ok(TheoryModel {
            prime,
            height,
            base,
            sigma_algebra,
            full_modulus,
            power_image,
            roots,
            nilpotence: OnceLock::new(),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn base(&self) -> &SeriesRing {
        &self.base
    }

    pub fn sigma_algebra(&self) -> &Arc<QuotAlgebra<BaseElt>> {
        &self.sigma_algebra
    }

    /// Rank of the sigma algebra = |Sub_p(Λ)|.
    pub fn rank(&self) -> usize {
        self.sigma_algebra.rank()
    }

    pub fn full_modulus(&self) -> &MonicPoly<BaseElt> {
        &self.full_modulus
    }

    pub fn power_image(&self) -> Option<&AlgElt<BaseElt>> {
        self.power_image.as_ref()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn describe(&self) -> String {
        format!(
            "height{}(p={}, N={}, D={})",
            self.height,
            self.prime,
            self.base.prec(),
            self.base.degcap()
        )
    }

    /// The power operation P_p/I : E → E(BΣ_p)/I applied to g. Height 1
    /// has rank 1 and the map is the identity inclusion; otherwise g is
    /// evaluated at the recorded image of the base generator, after a
    /// one-time certification that the image is topologically nilpotent
    /// (its powers reach exact zero within the safety bound).
    pub fn power_op(&self, g: &BaseElt) -> Result<AlgElt<BaseElt>> {
        assert_eq!(g.prime(), self.base.prime(), "mixed primes");
        assert_eq!(g.ring().vars(), self.base.vars(), "foreign base element");
        let Some(img) = &self.power_image else {
            assert_eq!(self.rank(), 1, "models of rank > 1 need a power image");
            return Ok(self.sigma_algebra.scalar(g.clone()));
        };
        let bound = 3 * (self.base.prec() + self.base.degcap() + 2);
        let cert = self.nilpotence.get_or_init(|| {
            let mut power = img.clone();
            for t in 1..=bound {
                if power.is_zero() {
                    return Some(t);
                }
                power = power.mul(img);
            }
            None
        });
        if cert.is_none() {
            return Err(Error::PowerOpDiverged { tried: bound });
        }
        // Horner in the base generator: g = Σ c_k u₁^k ↦ Σ c_k img^k
        let d = self.base.degcap();
        let coeff = |k: u32| {
            let c = g.coeff(&[k]);
            self.sigma_algebra
                .scalar(g.ring().constant(c.residue() as i128).truncate_prec(c.prec()))
        };
        let mut acc = coeff(d);
        for k in (0..d).rev() {
            acc = acc.mul(img).add(&coeff(k));
        }
        Ok(acc)
    }
}

/// Height-1 model over Z_p for p ∈ {2, 3, 5}: the transfer quotient is
/// Z_p[x]/([p](x)/x), the invariant norm class Π_u [u](x) reduces to a
/// constant c = unit·p, and the sigma algebra is the rank-1 Z_p[y]/(y−c).
pub fn height1_model(p: u64, prec: u32, degcap: u32) -> Result<Height1Model> {
    if ![2, 5, 3].contains(&p) {
        return Err(Error::ModelConstruction(format!(
            "height 1 is instantiated for p in {{2, 3, 5}}, not {p}"
        )));
    }
    let base = SeriesRing::new(p, prec, Vec::<String>::new(), degcap)?;
    let pser = p_series_multiplicative(&base);
    let g = pser.divide_linear(&base.zero())?; // [p](x)/x, monic of degree p−1
    let ap = QuotAlgebra::new("x", g);
    let x = ap.generator();

    // norm class: product of the [u]-series over the units mod p
    let u_series = |s: &AlgElt<BaseElt>, u: u64| s.one_like().add(s).pow(u as u32).sub(&s.one_like());
    let mut norm = ap.one();
    for u in 1..p {
        norm = norm.mul(&u_series(&x, u));
    }
    if !norm.coords().iter().skip(1).all(|c| c.is_zero()) {
        return Err(Error::ModelConstruction(format!(
            "norm class did not reduce to a constant: {norm}"
        )));
    }
    let c = norm.coord(0).clone();
    if !(c.min_val() == Valuation::Finite(1) && c.div_exact(1)?.is_unit()) {
        return Err(Error::ModelConstruction(format!(
            "norm class constant {c} is not p times a unit"
        )));
    }

    let f = MonicPoly::linear_root(&c);
    let sigma = QuotAlgebra::new("y", f.clone());
    let full = MonicPoly::new(vec![base.zero(), c.neg(), base.one()]).expect("monic");
    TheoryModel::assemble(p, 1, sigma, full, None, vec![c])
}

/// Height-2 model at p = 2: f = x³ − u₁x − 2 over Z₂[[u₁]], power image
/// u₁² + 3x − u₁x², and the two-stage splitting tower with roots
/// (y, z, −y−z).
pub fn height2_model(prec: u32, degcap: u32) -> Result<Height2Model> {
    let base = SeriesRing::new(2, prec, vec!["u1"], degcap)?;
    let u1 = base.var("u1")?;
    let f = MonicPoly::new(vec![base.constant(-2), u1.neg(), base.zero(), base.one()])?;
    let sigma = QuotAlgebra::new("x", f.clone());
    let power_image = sigma.element(vec![u1.mul(&u1), base.constant(3), u1.neg()]);

    let mid = QuotAlgebra::new("y", f.clone());
    let y = mid.generator();
    let quad = f.lift_coeffs(&y).divide_linear(&y)?;
    let top = QuotAlgebra::new("z", quad);
    let z = top.generator();
    let y_top = top.scalar(y);
    let roots = vec![y_top.clone(), z.clone(), y_top.add(&z).neg()];

    let mut full_coeffs = vec![base.zero()];
    full_coeffs.extend(f.coeffs().iter().cloned());
    let full = MonicPoly::new(full_coeffs)?;
    TheoryModel::assemble(2, 2, sigma, full, Some(power_image), roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    #[test]
    fn multiplicative_p_series() {
        let z2 = SeriesRing::new(2, 16, Vec::<String>::new(), 8).unwrap();
        let s2 = p_series_multiplicative(&z2);
        assert_eq!(s2.coeffs(), &[z2.zero(), z2.constant(2), z2.one()]);
        let z3 = SeriesRing::new(3, 16, Vec::<String>::new(), 8).unwrap();
        let s3 = p_series_multiplicative(&z3);
        assert_eq!(
            s3.coeffs(),
            &[z3.zero(), z3.constant(3), z3.constant(3), z3.one()]
        );
        let z5 = SeriesRing::new(5, 16, Vec::<String>::new(), 8).unwrap();
        assert!(p_series_multiplicative(&z5).coeff(0).is_zero());
    }

    #[test]
    fn height1_models_across_primes() {
        // p = 2: g = x + 2, norm = x ≡ −2, f = y + 2
        let m2 = height1_model(2, 16, 8).unwrap();
        assert_eq!(m2.rank(), 1);
        assert_eq!(m2.roots(), &[m2.base().constant(-2)]);
        // p = 3: norm x·[2](x) reduces to 3 via x² = −3x−3
        let m3 = height1_model(3, 16, 8).unwrap();
        assert_eq!(m3.roots(), &[m3.base().constant(3)]);
        // p = 5: constant verified structurally at construction
        let m5 = height1_model(5, 8, 8).unwrap();
        assert_eq!(m5.rank(), 1);
        assert!(m5.roots()[0].min_val() == Valuation::Finite(1));
        // the trace of 1 is the height-1 subgroup count
        assert_eq!(m2.sigma_algebra().one().trace(), m2.base().one());
        assert!(matches!(
            height1_model(7, 16, 8),
            Err(Error::ModelConstruction(_))
        ));
    }

    #[test]
    fn norm_class_is_fixed_by_unit_substitutions() {
        for p in [2u64, 3, 5] {
            let base = SeriesRing::new(p, 8, Vec::<String>::new(), 8).unwrap();
            let g = p_series_multiplicative(&base)
                .divide_linear(&base.zero())
                .unwrap();
            let ap = QuotAlgebra::new("x", g);
            let x = ap.generator();
            let u_series =
                |s: &AlgElt<BaseElt>, u: u64| s.one_like().add(s).pow(u as u32).sub(&s.one_like());
            let norm = (1..p).fold(ap.one(), |acc, u| acc.mul(&u_series(&x, u)));
            for u in 1..p {
                let xu = u_series(&x, u);
                let substituted = (1..p).fold(ap.one(), |acc, v| acc.mul(&u_series(&xu, v)));
                assert_eq!(substituted, norm, "p={p} u={u}");
            }
        }
    }

    #[test]
    fn height2_presentation() {
        let m = height2_model(16, 8).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.prime(), 2);
        let base = m.base().clone();
        let u1 = base.var("u1").unwrap();
        // modulus coefficients are (−2, −u₁, 0, 1)
        let f = m.sigma_algebra().modulus();
        assert_eq!(f.coeff(0), &base.constant(-2));
        assert_eq!(f.coeff(1), &u1.neg());
        assert!(f.coeff(2).is_zero());
        // power image evaluated at x = 0 is u₁² mod 2
        let img = m.power_image().unwrap();
        assert_eq!(
            img.coord(0).truncate_prec(1),
            u1.mul(&u1).truncate_prec(1)
        );
        assert_eq!(m.describe(), "height2(p=2, N=16, D=8)");
    }

    #[test]
    fn roots_factor_the_modulus() {
        let m = height2_model(16, 8).unwrap();
        let roots = m.roots();
        // elementary symmetric functions: e₁ = 0, e₂ = −u₁, e₃ = 2
        let e1 = roots[0].add(&roots[1]).add(&roots[2]);
        assert!(e1.is_zero());
        let e2 = roots[0]
            .mul(&roots[1])
            .add(&roots[0].mul(&roots[2]))
            .add(&roots[1].mul(&roots[2]));
        let u1 = m.base().var("u1").unwrap();
        assert_eq!(e2, roots[0].embed_base(&u1.neg()));
        let e3 = roots[0].mul(&roots[1]).mul(&roots[2]);
        assert_eq!(e3, roots[0].embed_base(&m.base().constant(2)));
    }

    #[test]
    fn assemble_rejects_broken_input() {
        let m = height2_model(16, 8).unwrap();
        let base = m.base().clone();
        // wrong root list: swap a root for 1 so the factorization fails
        let mut roots = m.roots().to_vec();
        roots[2] = roots[0].one_like();
        assert!(matches!(
            TheoryModel::assemble(
                2,
                2,
                Arc::clone(m.sigma_algebra()),
                m.full_modulus().clone(),
                None,
                roots
            ),
            Err(Error::ModelConstruction(_))
        ));
        // wrong rank: a quadratic modulus cannot model |Sub₂(Λ)| = 3
        let bad = MonicPoly::new(vec![base.constant(-2), base.zero(), base.one()]).unwrap();
        let alg = QuotAlgebra::new("x", bad.clone());
        let mut full = vec![base.zero()];
        full.extend(bad.coeffs().iter().cloned());
        assert!(matches!(
            TheoryModel::assemble(
                2,
                2,
                alg,
                MonicPoly::new(full).unwrap(),
                None,
                vec![m.roots()[0].clone(), m.roots()[1].clone()]
            ),
            Err(Error::ModelConstruction(_))
        ));
    }

    #[test]
    fn power_op_examples() {
        let m = height2_model(16, 8).unwrap();
        let base = m.base().clone();
        let u1 = base.var("u1").unwrap();
        assert_eq!(&m.power_op(&u1).unwrap(), m.power_image().unwrap());
        assert_eq!(m.power_op(&base.one()).unwrap(), m.sigma_algebra().one());
        let img = m.power_image().unwrap();
        assert_eq!(m.power_op(&u1.mul(&u1)).unwrap(), img.mul(img));
    }

    #[test]
    fn power_op_is_additive_and_multiplicative_at_low_degree() {
        let m = height2_model(12, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..25 {
            let g = m.base().random(&mut rng, 8);
            let h = m.base().random(&mut rng, 8);
            assert_eq!(
                m.power_op(&g.add(&h)).unwrap(),
                m.power_op(&g).unwrap().add(&m.power_op(&h).unwrap())
            );
            // products stay exact while deg g + deg h fits under the cap
            let gl = m.base().random(&mut rng, 4);
            let hl = m.base().random(&mut rng, 4);
            assert_eq!(
                m.power_op(&gl.mul(&hl)).unwrap(),
                m.power_op(&gl).unwrap().mul(&m.power_op(&hl).unwrap())
            );
        }
    }

    #[test]
    fn height1_power_op_is_the_inclusion() {
        let m = height1_model(3, 16, 8).unwrap();
        let g = m.base().constant(7);
        assert_eq!(m.power_op(&g).unwrap(), m.sigma_algebra().scalar(g));
    }

    #[test]
    fn divergent_power_image_is_refused() {
        let m = height2_model(6, 4).unwrap();
        // replace the power image by a unit: 1 is not topologically nilpotent
        let bad = TheoryModel::assemble(
            2,
            2,
            Arc::clone(m.sigma_algebra()),
            m.full_modulus().clone(),
            Some(m.sigma_algebra().one()),
            m.roots().to_vec(),
        )
        .unwrap();
        assert!(matches!(
            bad.power_op(&bad.base().var("u1").unwrap()),
            Err(Error::PowerOpDiverged { .. })
        ));
    }

    #[test]
    fn constructed_models_have_clean_f0() {
        for m in [
            height1_model(2, 16, 8).unwrap(),
            height1_model(3, 16, 8).unwrap(),
            height1_model(5, 8, 8).unwrap(),
        ] {
            let f0 = m.sigma_algebra().modulus().coeff(0);
            assert_eq!(f0.min_val(), Valuation::Finite(1));
            assert!(f0.div_exact(1).unwrap().is_unit());
        }
        let h2 = height2_model(16, 8).unwrap();
        let f0 = h2.sigma_algebra().modulus().coeff(0);
        assert_eq!(f0.min_val(), Valuation::Finite(1));
        assert!(f0.div_exact(1).unwrap().is_unit());
    }
}
