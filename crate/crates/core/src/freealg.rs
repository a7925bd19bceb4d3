//! Finite free quotient algebras R[x]/(f) and their linear algebra.
//!
//! A [`QuotAlgebra`] is a commutative ring R together with one monic
//! modulus f; elements ([`AlgElt`]) are coordinate vectors in the basis
//! 1, x, …, x^{m−1}. The coefficient ring R can itself be a quotient
//! algebra, so towers like R[y]/(g)[z]/(h) come for free and ranks
//! multiply along the way.
//!
//! The module also carries the tools built on that structure:
//! multiplication matrices and traces, Newton power sums (an independent
//! oracle for traces of generator powers), synthetic division by linear
//! factors, the determinant-valuation report for submodule indices, and
//! [`RingMap`]s that send the generator to a chosen root elsewhere.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

use crate::matrix::Matrix;
use crate::padic::Valuation;
use crate::ring::{RingElt, TowerElt};
use crate::series::{BaseElt, SeriesRing};
use crate::{Error, Result};

/// Monic polynomial with coefficients in R, stored lowest degree first.
/// Degree 0 (the constant 1) is allowed so that dividing a linear factor
/// by its root has a result; algebra moduli must have degree ≥ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPoly<R: RingElt> {
    coeffs: Vec<R>,
}

impl<R: RingElt> MonicPoly<R> {
    pub fn new(coeffs: Vec<R>) -> Result<Self> {
        match coeffs.last() {
            Some(top) if *top == top.one_like() => Ok(MonicPoly { coeffs }),
            _ => Err(Error::NonMonic),
        }
    }

    /// x − r.
    pub fn linear_root(r: &R) -> Self {
        MonicPoly {
            coeffs: vec![r.neg(), r.one_like()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.coeffs[i]
    }

    /// Horner evaluation inside the coefficient ring.
    pub fn eval(&self, x: &R) -> R {
        self.eval_with(x, |c| c.clone())
    }

    /// Horner evaluation at a point of another ring, lifting each
    /// coefficient through `lift`.
    pub fn eval_with<T: RingElt>(&self, x: &T, lift: impl Fn(&R) -> T) -> T {
        let mut acc = lift(self.coeffs.last().expect("nonempty"));
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(&lift(c));
        }
        acc
    }

    /// Synthetic division by (x − r). Errors unless r is a root on the
    /// nose; the quotient q satisfies (x − r)·q = self exactly.
    pub fn divide_linear(&self, r: &R) -> Result<Self> {
        assert!(self.degree() >= 1, "cannot divide a constant");
        let m = self.degree();
        let mut q = vec![self.coeffs[m].clone()]; // leading 1
        for i in (1..m).rev() {
            let next = self.coeffs[i].add(&r.mul(&q[q.len() - 1]));
            q.push(next);
        }
        let remainder = self.coeffs[0].add(&r.mul(&q[q.len() - 1]));
        if !remainder.is_zero() {
            return Err(Error::NotARoot {
                remainder: remainder.to_string(),
            });
        }
        q.reverse();
        Ok(MonicPoly { coeffs: q })
    }

    /// (x − r)·self; stays monic.
    pub fn mul_linear(&self, r: &R) -> Self {
        let m = self.coeffs.len();
        let mut out = Vec::with_capacity(m + 1);
        out.push(self.coeffs[0].mul(&r.neg()));
        for i in 1..m {
            out.push(self.coeffs[i - 1].sub(&r.mul(&self.coeffs[i])));
        }
        out.push(self.coeffs[m - 1].clone());
        MonicPoly { coeffs: out }
    }
}

impl MonicPoly<BaseElt> {
    /// The same polynomial with coefficients pushed up a tower, e.g. to
    /// divide f by a root living in an extension. `sample` fixes the
    /// target ring.
    pub fn lift_coeffs<T: TowerElt>(&self, sample: &T) -> MonicPoly<T> {
        MonicPoly {
            coeffs: self.coeffs.iter().map(|c| sample.embed_base(c)).collect(),
        }
    }
}

impl<R: RingElt> fmt::Display for MonicPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        if m == 0 {
            return write!(f, "1");
        }
        if m == 1 {
            write!(f, "x")?;
        } else {
            write!(f, "x^{m}")?;
        }
        for i in (0..m).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            match i {
                0 => write!(f, " + ({c})")?,
                1 => write!(f, " + ({c})*x")?,
                _ => write!(f, " + ({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<R: RingElt + Serialize> Serialize for MonicPoly<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de, R: RingElt + Deserialize<'de>> Deserialize<'de> for MonicPoly<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<R>::deserialize(d)?;
        MonicPoly::new(coeffs).map_err(D::Error::custom)
    }
}

/// R[x]/(f) for monic f of degree m ≥ 1, free of rank m over R.
/// Shared behind an [`Arc`]; elements hold a handle to their parent.
#[derive(Debug)]
pub struct QuotAlgebra<R: RingElt> {
    gen_name: String,
    modulus: MonicPoly<R>,
}

impl<R: RingElt> QuotAlgebra<R> {
    /// Adjoins a root of `modulus` to its coefficient ring.
    pub fn new(gen_name: &str, modulus: MonicPoly<R>) -> Arc<Self> {
        assert!(modulus.degree() >= 1, "modulus must have degree >= 1");
        Arc::new(QuotAlgebra {
            gen_name: gen_name.to_string(),
            modulus,
        })
    }

    pub fn rank(&self) -> usize {
        self.modulus.degree()
    }

    pub fn gen_name(&self) -> &str {
        &self.gen_name
    }

    pub fn modulus(&self) -> &MonicPoly<R> {
        &self.modulus
    }

    /// Structural identity: same generator name and modulus. `Arc`
    /// pointer equality is sufficient but not required.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.gen_name == other.gen_name && self.modulus == other.modulus
    }

    fn sample(&self) -> &R {
        self.modulus.coeff(0)
    }

    /// Reduces an arbitrary coefficient list mod the modulus and pads to
    /// rank m.
    fn reduce(&self, mut coeffs: Vec<R>) -> Vec<R> {
        let m = self.rank();
        while coeffs.len() > m {
            let top = coeffs.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - m;
            for i in 0..m {
                coeffs[shift + i] = coeffs[shift + i].sub(&top.mul(self.modulus.coeff(i)));
            }
        }
        while coeffs.len() < m {
            coeffs.push(self.sample().zero_like());
        }
        coeffs
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<R>) -> AlgElt<R> {
        AlgElt {
            parent: Arc::clone(self),
            vec: self.reduce(coeffs),
        }
    }

    pub fn zero(self: &Arc<Self>) -> AlgElt<R> {
        self.element(vec![])
    }

    pub fn one(self: &Arc<Self>) -> AlgElt<R> {
        self.scalar(self.sample().one_like())
    }

    pub fn scalar(self: &Arc<Self>, c: R) -> AlgElt<R> {
        self.element(vec![c])
    }

    /// The class of x. In a rank-1 algebra this already reduces to the
    /// scalar −f(0).
    pub fn generator(self: &Arc<Self>) -> AlgElt<R> {
        self.element(vec![self.sample().zero_like(), self.sample().one_like()])
    }

    /// Images of 1, x, …, x^{m−1}.
    pub fn basis(self: &Arc<Self>) -> Vec<AlgElt<R>> {
        let z = self.sample().zero_like();
        (0..self.rank())
            .map(|i| {
                let mut v = vec![z.clone(); i];
                v.push(self.sample().one_like());
                self.element(v)
            })
            .collect()
    }
}

/// Element of a [`QuotAlgebra`]: coordinates in the basis 1, x, …, x^{m−1}.
#[derive(Clone, Debug)]
pub struct AlgElt<R: RingElt> {
    parent: Arc<QuotAlgebra<R>>,
    vec: Vec<R>,
}

impl<R: RingElt> AlgElt<R> {
    pub fn parent(&self) -> &Arc<QuotAlgebra<R>> {
        &self.parent
    }

    pub fn coords(&self) -> &[R] {
        &self.vec
    }

    pub fn coord(&self, i: usize) -> &R {
        &self.vec[i]
    }

    fn check_parent(&self, rhs: &Self) {
        assert!(
            Arc::ptr_eq(&self.parent, &rhs.parent) || self.parent.same_structure(&rhs.parent),
            "elements of different algebras: {}[{}] vs {}[{}]",
            self.parent.gen_name,
            self.parent.modulus,
            rhs.parent.gen_name,
            rhs.parent.modulus
        );
    }

    /// Multiplication by the generator: shift coordinates and reduce.
    pub fn mul_by_gen(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.vec.len() + 1);
        coeffs.push(self.vec[0].zero_like());
        coeffs.extend(self.vec.iter().cloned());
        self.parent.element(coeffs)
    }

    /// Matrix of multiplication-by-self on the free module; column j
    /// holds the coordinates of self·x^j.
    pub fn mult_matrix(&self) -> Matrix<R> {
        let m = self.parent.rank();
        let mut out = Matrix::zero_like(m, &self.vec[0]);
        let mut col = self.clone();
        for j in 0..m {
            for i in 0..m {
                out.set(i, j, col.vec[i].clone());
            }
            if j + 1 < m {
                col = col.mul_by_gen();
            }
        }
        out
    }

    /// Trace of multiplication-by-self; R-linear in self.
    pub fn trace(&self) -> R {
        self.mult_matrix().trace()
    }
}

impl<R: RingElt> PartialEq for AlgElt<R> {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_structure(&other.parent) && self.vec == other.vec
    }
}

impl<R: RingElt> RingElt for AlgElt<R> {
    fn zero_like(&self) -> Self {
        self.parent.zero()
    }

    fn one_like(&self) -> Self {
        self.parent.one()
    }

    fn int_like(&self, v: i64) -> Self {
        self.parent.scalar(self.vec[0].int_like(v))
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check_parent(rhs);
        AlgElt {
            parent: Arc::clone(&self.parent),
            vec: self
                .vec
                .iter()
                .zip(&rhs.vec)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    fn neg(&self) -> Self {
        AlgElt {
            parent: Arc::clone(&self.parent),
            vec: self.vec.iter().map(|a| a.neg()).collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check_parent(rhs);
        let m = self.parent.rank();
        let z = self.vec[0].zero_like();
        let mut prod = vec![z; 2 * m - 1];
        for (i, a) in self.vec.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.vec.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        self.parent.element(prod)
    }

    fn is_zero(&self) -> bool {
        self.vec.iter().all(|a| a.is_zero())
    }
}

impl<R: TowerElt> TowerElt for AlgElt<R> {
    fn base_ring(&self) -> &SeriesRing {
        self.vec[0].base_ring()
    }

    fn embed_base(&self, b: &BaseElt) -> Self {
        self.parent.scalar(self.vec[0].embed_base(b))
    }

    fn rank_over_base(&self) -> usize {
        self.parent.rank() * self.vec[0].rank_over_base()
    }
}

impl<R: RingElt> fmt::Display for AlgElt<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.parent.gen_name();
        let mut wrote = false;
        for (i, c) in self.vec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{g}")?,
                _ => write!(f, "({c})*{g}^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<R: RingElt + Serialize> Serialize for AlgElt<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vec.serialize(s)
    }
}

/// Power sums p₁…p_kmax of the roots of f, from Newton's identities on
/// the coefficients — no root-finding and no divisions. Independent of
/// the trace machinery, which is the point: `trace(x^k)` must agree.
pub fn newton_power_sums<R: RingElt>(f: &MonicPoly<R>, kmax: usize) -> Vec<R> {
    let m = f.degree();
    assert!(m >= 1 && kmax >= 1);
    let zero = f.coeff(0).zero_like();
    let mut p: Vec<R> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut acc = zero.clone();
        if k <= m {
            // −k·a_{m−k}
            acc = acc.sub(&f.coeff(m - k).mul(&zero.int_like(k as i64)));
        }
        let top = if k <= m { k - 1 } else { m };
        for i in 1..=top {
            acc = acc.sub(&f.coeff(m - i).mul(&p[k - i - 1]));
        }
        p.push(acc);
    }
    p
}

/// Cayley–Hamilton sanity for the companion structure: substituting the
/// multiplication matrix of x into the modulus must give the zero matrix.
pub fn charpoly_check<R: RingElt>(alg: &Arc<QuotAlgebra<R>>) -> bool {
    let mx = alg.generator().mult_matrix();
    let n = alg.rank();
    let id = Matrix::identity_like(n, alg.modulus().coeff(0));
    let mut acc = id.clone();
    for i in (0..n).rev() {
        acc = acc.mul(&mx).add(&id.scale(alg.modulus().coeff(i)));
    }
    acc.is_zero()
}

/// Verdict on a square system of vectors inside a free module: the
/// determinant of the inclusion matrix, the smallest p-adic valuation
/// among its coefficients, and whether det/p^val is a unit series. The
/// index-p statement "det = unit · p" is exactly (Finite(1), true).
#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub det: BaseElt,
    pub valuation: Valuation,
    pub cofactor_is_unit: bool,
}

/// Index of the span of `vectors` inside the ambient free module, read
/// off the determinant. Requires as many vectors as the ambient rank.
pub fn submodule_index(vectors: &[Vec<BaseElt>]) -> Result<IndexReport> {
    let n = vectors.len();
    assert!(n > 0, "no vectors given");
    for v in vectors {
        if v.len() != n {
            return Err(Error::NonSquare {
                rows: n,
                cols: v.len(),
            });
        }
    }
    let det = Matrix::from_rows(vectors.to_vec()).det()?;
    if det.is_zero() {
        return Ok(IndexReport {
            valuation: Valuation::AtLeast(det.prec()),
            cofactor_is_unit: false,
            det,
        });
    }
    let val = det.min_val();
    let k = match val {
        Valuation::Finite(k) => k,
        Valuation::AtLeast(_) => unreachable!("nonzero series has finite min_val"),
    };
    let cofactor_is_unit = det.div_exact(k)?.is_unit();
    Ok(IndexReport {
        det,
        valuation: val,
        cofactor_is_unit,
    })
}

/// Ring map out of a quotient algebra over the series base, determined
/// by a root of the modulus in the target ring. Construction verifies
/// the root exactly at full precision.
#[derive(Clone, Debug)]
pub struct RingMap<T: TowerElt> {
    source: Arc<QuotAlgebra<BaseElt>>,
    genimage: T,
}

impl<T: TowerElt> RingMap<T> {
    pub fn new(source: Arc<QuotAlgebra<BaseElt>>, genimage: T) -> Result<Self> {
        let value = source
            .modulus()
            .eval_with(&genimage, |c| genimage.embed_base(c));
        if !value.is_zero() {
            return Err(Error::NotARoot {
                remainder: value.to_string(),
            });
        }
        Ok(RingMap { source, genimage })
    }

    pub fn genimage(&self) -> &T {
        &self.genimage
    }

    /// Horner evaluation of the coordinates at the generator image.
    pub fn apply(&self, a: &AlgElt<BaseElt>) -> T {
        assert!(
            a.parent().same_structure(&self.source),
            "element is not in the source algebra"
        );
        let embed = |c: &BaseElt| self.genimage.embed_base(c);
        let mut acc = embed(a.coord(a.coords().len() - 1));
        for i in (0..a.coords().len() - 1).rev() {
            acc = acc.mul(&self.genimage).add(&embed(a.coord(i)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn base() -> SeriesRing {
        SeriesRing::new(2, 16, vec!["u1"], 8).unwrap()
    }

    fn u1() -> BaseElt {
        base().var("u1").unwrap()
    }

    /// x³ − u₁x − 2 over Z₂[[u₁]].
    fn cubic() -> Arc<QuotAlgebra<BaseElt>> {
        let r = base();
        let f = MonicPoly::new(vec![r.constant(-2), u1().neg(), r.zero(), r.one()]).unwrap();
        QuotAlgebra::new("x", f)
    }

    #[test]
    fn algebra_ranks() {
        assert_eq!(cubic().rank(), 3);
        let z2 = SeriesRing::new(2, 16, Vec::<String>::new(), 8).unwrap();
        let lin = QuotAlgebra::new("y", MonicPoly::new(vec![z2.constant(2), z2.one()]).unwrap());
        assert_eq!(lin.rank(), 1);
    }

    #[test]
    fn non_monic_rejected() {
        let r = base();
        assert!(matches!(
            MonicPoly::new(vec![r.one(), r.constant(2)]),
            Err(Error::NonMonic)
        ));
        assert!(matches!(
            MonicPoly::<BaseElt>::new(vec![]),
            Err(Error::NonMonic)
        ));
    }

    #[test]
    fn rank_one_generator_is_a_scalar() {
        let r = base();
        let c = r.constant(7);
        let a = QuotAlgebra::new("x", MonicPoly::linear_root(&c));
        assert_eq!(a.generator(), a.scalar(c));
    }

    #[test]
    fn reduction_rule() {
        let a = cubic();
        let x = a.generator();
        let r = base();
        // x·x² = x³ = u₁x + 2
        let x3 = x.mul(&x.mul(&x));
        assert_eq!(x3, a.element(vec![r.constant(2), u1(), r.zero()]));
        // (x²)·(x²) = u₁x² + 2x
        let x2 = x.mul(&x);
        assert_eq!(
            x2.mul(&x2),
            a.element(vec![r.zero(), r.constant(2), u1()])
        );
        let g = a.element(vec![r.constant(3), u1(), r.constant(-1)]);
        assert_eq!(g.mul(&a.one()), g);
    }

    #[test]
    fn companion_matrix_of_generator() {
        let a = cubic();
        let m = a.generator().mult_matrix();
        let r = base();
        // columns: x·1 = x, x·x = x², x·x² = u₁x + 2
        let want = Matrix::from_rows(vec![
            vec![r.zero(), r.zero(), r.constant(2)],
            vec![r.one(), r.zero(), u1()],
            vec![r.zero(), r.one(), r.zero()],
        ]);
        assert_eq!(m, want);
        assert_eq!(
            a.one().mult_matrix(),
            Matrix::identity_like(3, &r.zero())
        );
        assert_eq!(
            a.scalar(r.constant(5)).mult_matrix(),
            Matrix::identity_like(3, &r.zero()).scale(&r.constant(5))
        );
    }

    #[test]
    fn traces_in_the_cubic_algebra() {
        let a = cubic();
        let x = a.generator();
        assert_eq!(a.one().trace(), base().constant(3));
        assert!(x.trace().is_zero());
        assert_eq!(x.mul(&x).trace(), base().monomial(&[1], 2).unwrap());
    }

    #[test]
    fn newton_power_sums_of_the_cubic() {
        let a = cubic();
        let p = newton_power_sums(a.modulus(), 4);
        let r = base();
        assert!(p[0].is_zero());
        assert_eq!(p[1], r.monomial(&[1], 2).unwrap());
        assert_eq!(p[2], r.constant(6));
        assert_eq!(p[3], r.monomial(&[2], 2).unwrap());
    }

    #[test]
    fn newton_matches_traces_on_random_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let r = base();
        for _ in 0..50 {
            let deg = 2 + (rng.next_u64() % 5) as usize; // 2..=6
            let mut coeffs: Vec<BaseElt> = (0..deg).map(|_| r.random(&mut rng, 2)).collect();
            coeffs.push(r.one());
            let alg = QuotAlgebra::new("x", MonicPoly::new(coeffs).unwrap());
            let sums = newton_power_sums(alg.modulus(), 8);
            let mut xk = alg.generator();
            for k in 1..=8 {
                assert_eq!(xk.trace(), sums[k - 1], "k={k} deg={deg}");
                xk = xk.mul(&alg.generator());
            }
        }
    }

    #[test]
    fn trace_is_base_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let alg = cubic();
        let r = base();
        for _ in 0..50 {
            let a = alg.element((0..3).map(|_| r.random(&mut rng, 4)).collect());
            let b = alg.element((0..3).map(|_| r.random(&mut rng, 4)).collect());
            let alpha = r.random(&mut rng, 2);
            let beta = r.random(&mut rng, 2);
            let lhs = a
                .mul(&alg.scalar(alpha.clone()))
                .add(&b.mul(&alg.scalar(beta.clone())))
                .trace();
            let rhs = alpha.mul(&a.trace()).add(&beta.mul(&b.trace()));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn charpoly_holds_for_constructed_algebras() {
        assert!(charpoly_check(&cubic()));
        let r = base();
        let lin = QuotAlgebra::new("x", MonicPoly::linear_root(&r.constant(-2)));
        assert!(charpoly_check(&lin));
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..25 {
            let deg = 1 + (rng.next_u64() % 6) as usize;
            let mut coeffs: Vec<BaseElt> = (0..deg).map(|_| r.random(&mut rng, 2)).collect();
            coeffs.push(r.one());
            assert!(charpoly_check(&QuotAlgebra::new(
                "x",
                MonicPoly::new(coeffs).unwrap()
            )));
        }
    }

    /// Z₂[[u₁]][y]/(y³−u₁y−2), the first stage of the root tower.
    fn mid() -> Arc<QuotAlgebra<BaseElt>> {
        let a = cubic();
        QuotAlgebra::new("y", a.modulus().clone())
    }

    #[test]
    fn synthetic_division_peels_off_a_root() {
        let mid = mid();
        let y = mid.generator();
        // (z³ − u₁z − 2)/(z − y) = z² + yz + (y² − u₁)
        let f_up = mid.modulus().lift_coeffs(&y);
        let q = f_up.divide_linear(&y).unwrap();
        let want = MonicPoly::new(vec![
            y.mul(&y).sub(&y.embed_base(&u1())),
            y.clone(),
            mid.one(),
        ])
        .unwrap();
        assert_eq!(q, want);
        // division invariant: (z − y)·q reconstructs f
        assert_eq!(q.mul_linear(&y), f_up);
        // not-a-root is rejected with the remainder attached
        assert!(matches!(
            f_up.divide_linear(&mid.one()),
            Err(Error::NotARoot { .. })
        ));
    }

    #[test]
    fn dividing_a_linear_by_its_root_leaves_one() {
        let r = base();
        let c = r.constant(-2);
        let lin = MonicPoly::linear_root(&c);
        let q = lin.divide_linear(&c).unwrap();
        assert_eq!(q.degree(), 0);
        assert_eq!(q, MonicPoly::new(vec![r.one()]).unwrap());
    }

    #[test]
    fn tower_ranks_multiply() {
        let mid = mid();
        let y = mid.generator();
        let q = mid.modulus().lift_coeffs(&y).divide_linear(&y).unwrap();
        let top = QuotAlgebra::new("z", q);
        let z = top.generator();
        assert_eq!(y.rank_over_base(), 3);
        assert_eq!(z.rank_over_base(), 6);
        // dividing the quadratic by its adjoined root leaves the linear
        // factor of the remaining root −y−z
        let quad_top = MonicPoly::new(
            top.modulus()
                .coeffs()
                .iter()
                .map(|c| top.scalar(c.clone()))
                .collect(),
        )
        .unwrap();
        let rem = quad_top.divide_linear(&z).unwrap();
        let minus_y_minus_z = top.scalar(y.clone()).add(&z).neg();
        assert_eq!(rem, MonicPoly::linear_root(&minus_y_minus_z));
    }

    #[test]
    fn index_reports() {
        let r = base();
        // identity basis: det 1, valuation 0, unit cofactor
        let id = submodule_index(&[vec![r.one(), r.zero()], vec![r.zero(), r.one()]]).unwrap();
        assert_eq!(id.valuation, Valuation::Finite(0));
        assert!(id.cofactor_is_unit);
        assert_eq!(id.det, r.one());

        // images of 1, y, y², y³ under (restriction, quotient) for the cubic
        let rows = vec![
            vec![r.one(), r.one(), r.zero(), r.zero()],
            vec![r.zero(), r.zero(), r.one(), r.zero()],
            vec![r.zero(), r.zero(), r.zero(), r.one()],
            vec![r.zero(), r.constant(2), u1(), r.zero()],
        ];
        let rep = submodule_index(&rows).unwrap();
        assert_eq!(rep.valuation, Valuation::Finite(1));
        assert!(rep.cofactor_is_unit);
        assert_eq!(rep.det, r.constant(2));

        // unimodular change of basis keeps valuation 0
        let sheared =
            submodule_index(&[vec![r.one(), u1()], vec![r.zero(), r.one()]]).unwrap();
        assert_eq!(sheared.valuation, Valuation::Finite(0));
        assert!(sheared.cofactor_is_unit);

        // non-square input
        assert!(matches!(
            submodule_index(&[vec![r.one()], vec![r.zero()]]).unwrap_err(),
            Error::NonSquare { rows: 2, cols: 1 }
        ));
    }

    #[test]
    fn ring_maps_send_generator_to_roots() {
        let a = cubic();
        let mid = mid();
        let y = mid.generator();
        // χ with genimage y: x² ↦ y²
        let chi = RingMap::new(Arc::clone(&a), y.clone()).unwrap();
        let x2 = a.generator().mul(&a.generator());
        assert_eq!(chi.apply(&x2), y.mul(&y));
        // a non-root is refused
        assert!(matches!(
            RingMap::new(Arc::clone(&a), mid.one()),
            Err(Error::NotARoot { .. })
        ));
    }

    #[test]
    fn restriction_map_kills_the_generator() {
        // E(BΣ₂) = E[y]/(y·f): restriction sends y to 0
        let r = base();
        let a = cubic();
        let yf = {
            let mut coeffs = vec![r.zero()];
            coeffs.extend(a.modulus().coeffs().iter().cloned());
            MonicPoly::new(coeffs).unwrap()
        };
        let big = QuotAlgebra::new("y", yf);
        let restrict = RingMap::new(Arc::clone(&big), r.zero()).unwrap();
        assert!(restrict.apply(&big.generator()).is_zero());
        assert_eq!(restrict.apply(&big.one()), r.one());
    }

    #[test]
    fn third_root_via_ring_map() {
        let a = cubic();
        let mid = mid();
        let y = mid.generator();
        let q = mid.modulus().lift_coeffs(&y).divide_linear(&y).unwrap();
        let top = QuotAlgebra::new("z", q);
        let z = top.generator();
        let minus_y_minus_z = top.scalar(y.clone()).add(&z).neg();
        let chi = RingMap::new(Arc::clone(&a), minus_y_minus_z.clone()).unwrap();
        assert_eq!(chi.apply(&a.generator()), minus_y_minus_z);
        assert_eq!(
            chi.apply(&a.generator().mul(&a.generator())),
            minus_y_minus_z.mul(&minus_y_minus_z)
        );
    }

    #[test]
    fn display_and_serde() {
        let a = cubic();
        let r = base();
        let g = a.element(vec![r.constant(2), u1(), r.zero()]);
        assert_eq!(
            g.to_string(),
            "(2 + O(deg 9, 2^16)) + (u1 + O(deg 9, 2^16))*x"
        );
        let js = serde_json::to_string(&g).unwrap();
        assert!(js.starts_with('['));
        let back: Vec<BaseElt> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, g.coords());
        // MonicPoly round-trips and rejects non-monic input
        let fjs = serde_json::to_string(a.modulus()).unwrap();
        let f2: MonicPoly<BaseElt> = serde_json::from_str(&fjs).unwrap();
        assert_eq!(&f2, a.modulus());
        let bad = fjs.replace("[[0],1]", "[[0],3]");
        assert!(serde_json::from_str::<MonicPoly<BaseElt>>(&bad).is_err());
    }
}
