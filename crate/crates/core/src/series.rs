//! Truncated multivariate power series over truncated p-adic integers.
//!
//! A [`BaseElt`] models an element of Z_p[[u₁,…,u_r]] cut off at a total
//! degree cap D and at p-adic precision N. With an empty variable list the
//! ring is plain Z_p, which is how the height-1 coefficient ring appears.
//! Terms past the cap are discarded by every operation, so products are
//! exact representatives of the quotient Z_p[[u]]/(deg > D).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::padic::{PAdicInt, Valuation};
use crate::{Error, Result};

/// Ring descriptor: prime, precision, ordered variable names, degree cap.
///
/// Cheap to clone; every element carries one so that operations can check
/// the operands actually live in the same ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRing {
    #[serde(rename = "p")]
    prime: u64,
    prec: u32,
    vars: Vec<String>,
    degcap: u32,
}

impl SeriesRing {
    pub fn new<S: Into<String>>(prime: u64, prec: u32, vars: Vec<S>, degcap: u32) -> Result<Self> {
        // reuse the scalar constructor's prime/precision validation
        PAdicInt::new(prime, prec, 0)?;
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::BadElement("empty variable name".into()));
            }
            if vars[..i].contains(v) {
                return Err(Error::BadElement(format!("duplicate variable {v}")));
            }
        }
        Ok(SeriesRing {
            prime,
            prec,
            vars,
            degcap,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn degcap(&self) -> u32 {
        self.degcap
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn zero(&self) -> BaseElt {
        BaseElt {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> BaseElt {
        self.constant(1)
    }

    pub fn constant(&self, v: i128) -> BaseElt {
        let c = PAdicInt::new(self.prime, self.prec, v).expect("ring already validated");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; self.vars.len()], c);
        }
        BaseElt {
            ring: self.clone(),
            terms,
        }
    }

    pub fn var(&self, name: &str) -> Result<BaseElt> {
        let i = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::BadElement(format!("no variable named {name}")))?;
        let mut exps = vec![0u32; self.vars.len()];
        exps[i] = 1;
        self.monomial(&exps, 1)
    }

    /// c · u^exps, validated against the variable list and the cap.
    pub fn monomial(&self, exps: &[u32], c: i128) -> Result<BaseElt> {
        self.from_pairs(&[(exps.to_vec(), c)])
    }

    pub fn from_pairs(&self, pairs: &[(Vec<u32>, i128)]) -> Result<BaseElt> {
        let mut terms: BTreeMap<Vec<u32>, PAdicInt> = BTreeMap::new();
        for (exps, v) in pairs {
            if exps.len() != self.vars.len() {
                return Err(Error::BadElement(format!(
                    "exponent vector {:?} does not match {} variables",
                    exps,
                    self.vars.len()
                )));
            }
            let total: u32 = exps.iter().sum();
            if total > self.degcap {
                return Err(Error::BadElement(format!(
                    "total degree {} exceeds cap {}",
                    total, self.degcap
                )));
            }
            let c = PAdicInt::new(self.prime, self.prec, *v)?;
            let entry = terms
                .entry(exps.clone())
                .or_insert_with(|| c.with_value(0));
            *entry = entry.add(&c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(BaseElt {
            ring: self.clone(),
            terms,
        })
    }

    /// Uniformly random coefficients on every monomial of total degree
    /// ≤ min(max_deg, degcap). Deterministic for a fixed rng stream.
    pub fn random(&self, rng: &mut impl rand_core::RngCore, max_deg: u32) -> BaseElt {
        let m = pow_u64(self.prime, self.prec);
        let mut terms = BTreeMap::new();
        for exps in exponents_up_to(self.vars.len(), max_deg.min(self.degcap)) {
            let r = rng.next_u64() % m;
            if r != 0 {
                terms.insert(
                    exps,
                    PAdicInt::new(self.prime, self.prec, r as i128).unwrap(),
                );
            }
        }
        BaseElt {
            ring: self.clone(),
            terms,
        }
    }
}

fn pow_u64(base: u64, e: u32) -> u64 {
    (0..e).fold(1u64, |acc, _| acc * base)
}

/// All exponent vectors of length n with total degree ≤ d, in lex order.
fn exponents_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in 0..=d {
        for mut tail in exponents_up_to(n - 1, d - head) {
            let mut v = vec![head];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out.sort();
    out
}

/// A truncated power series: a sparse map from exponent vectors to
/// nonzero coefficients, plus the [`SeriesRing`] it lives in.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "BaseEltRepr", into = "BaseEltRepr")]
pub struct BaseElt {
    ring: SeriesRing,
    terms: BTreeMap<Vec<u32>, PAdicInt>,
}

impl BaseElt {
    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime
    }

    pub fn prec(&self) -> u32 {
        self.ring.prec
    }

    pub fn degcap(&self) -> u32 {
        self.ring.degcap
    }

    /// Coefficient of u^exps; zero for absent terms.
    pub fn coeff(&self, exps: &[u32]) -> PAdicInt {
        self.terms
            .get(exps)
            .copied()
            .unwrap_or_else(|| PAdicInt::new(self.ring.prime, self.ring.prec, 0).unwrap())
    }

    pub fn constant_term(&self) -> PAdicInt {
        self.coeff(&vec![0; self.ring.vars.len()])
    }

    /// Nonzero terms in lex order on exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PAdicInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A truncated series is a unit iff its constant term is a p-adic unit.
    pub fn is_unit(&self) -> bool {
        self.constant_term().is_unit()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    fn check_same_ring(&self, rhs: &Self) {
        assert_eq!(
            self.ring.prime, rhs.ring.prime,
            "mixed primes: {} vs {}",
            self.ring.prime, rhs.ring.prime
        );
        assert_eq!(
            self.ring.vars, rhs.ring.vars,
            "mismatched variable sets: {:?} vs {:?}",
            self.ring.vars, rhs.ring.vars
        );
        assert_eq!(
            self.ring.degcap, rhs.ring.degcap,
            "mismatched degree caps: {} vs {}",
            self.ring.degcap, rhs.ring.degcap
        );
    }

    fn result_ring(&self, rhs: &Self) -> SeriesRing {
        self.check_same_ring(rhs);
        let mut ring = self.ring.clone();
        ring.prec = self.ring.prec.min(rhs.ring.prec);
        ring
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let ring = self.result_ring(rhs);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            let c = c.truncate(ring.prec);
            let entry = terms.entry(e.clone()).or_insert_with(|| c.with_value(0));
            *entry = entry.add(&c);
        }
        terms.retain(|_, c: &mut PAdicInt| !c.is_zero());
        BaseElt { ring, terms }
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let ring = self.result_ring(rhs);
        let mut terms: BTreeMap<Vec<u32>, PAdicInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let total: u32 = ea.iter().sum::<u32>() + eb.iter().sum::<u32>();
                if total > ring.degcap {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca.mul(cb);
                let entry = terms.entry(e).or_insert_with(|| c.with_value(0));
                *entry = entry.add(&c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        BaseElt { ring, terms }
    }

    pub fn mul_scalar(&self, s: &PAdicInt) -> Self {
        assert_eq!(self.ring.prime, s.prime(), "mixed primes");
        let mut ring = self.ring.clone();
        ring.prec = ring.prec.min(s.prec());
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c = c.mul(s);
            if !c.is_zero() {
                terms.insert(e.clone(), c);
            }
        }
        BaseElt { ring, terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Drops p-adic digits down to `prec` on the ring and every coefficient.
    pub fn truncate_prec(&self, prec: u32) -> Self {
        assert!(
            prec >= 1 && prec <= self.ring.prec,
            "cannot truncate prec {} to {}",
            self.ring.prec,
            prec
        );
        let mut ring = self.ring.clone();
        ring.prec = prec;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c = c.truncate(prec);
            if !c.is_zero() {
                terms.insert(e.clone(), c);
            }
        }
        BaseElt { ring, terms }
    }

    /// a^p with precision clamped to one digit: the Frobenius on E/p.
    pub fn frobenius_mod_p(&self) -> Self {
        self.pow(self.ring.prime as u32).truncate_prec(1)
    }

    /// Smallest p-adic valuation among the coefficients; `AtLeast(prec)`
    /// for the zero series. Nonzero stored coefficients always have finite
    /// valuation, so the minimum is exact.
    pub fn min_val(&self) -> Valuation {
        let mut best: Option<u32> = None;
        for c in self.terms.values() {
            if let Valuation::Finite(v) = c.val() {
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        match best {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(self.ring.prec),
        }
    }

    /// Coefficientwise exact division by p^k; the result is carried at
    /// prec − k digits. Errors if any coefficient has valuation < k.
    pub fn div_exact(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if !self.min_val().at_least(k) {
            return Err(Error::NotDivisible {
                needed: k,
                found: self.min_val(),
            });
        }
        if self.ring.prec <= k {
            return Err(Error::InvalidPrecision {
                prec: self.ring.prec as i64 - k as i64,
            });
        }
        let mut ring = self.ring.clone();
        ring.prec -= k;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c = c.div_exact(k)?;
            if !c.is_zero() {
                terms.insert(e.clone(), c);
            }
        }
        Ok(BaseElt { ring, terms })
    }
}

/// Coefficientwise equality at the shared precision. Elements of
/// structurally different rings are never equal.
impl PartialEq for BaseElt {
    fn eq(&self, other: &Self) -> bool {
        if self.ring.prime != other.ring.prime
            || self.ring.vars != other.ring.vars
            || self.ring.degcap != other.ring.degcap
        {
            return false;
        }
        let prec = self.ring.prec.min(other.ring.prec);
        self.truncate_prec(prec).terms == other.truncate_prec(prec).terms
    }
}

impl fmt::Display for BaseElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = pow_u64(self.ring.prime, self.ring.prec) as i128;
        let mut ordered: Vec<(&Vec<u32>, &PAdicInt)> = self.terms.iter().collect();
        ordered.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));
        let mut first = true;
        for (exps, c) in ordered {
            // balanced representative: 65535 mod 2^16 prints as -1
            let mut signed = c.residue() as i128;
            if signed > m / 2 {
                signed -= m;
            }
            let negative = signed < 0;
            let mag = signed.unsigned_abs();
            let mono: Vec<String> = exps
                .iter()
                .zip(&self.ring.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let body = if mono.is_empty() {
                format!("{mag}")
            } else if mag == 1 {
                mono.join("*")
            } else {
                format!("{}*{}", mag, mono.join("*"))
            };
            if first {
                write!(f, "{}{}", if negative { "-" } else { "" }, body)?;
                first = false;
            } else {
                write!(f, " {} {}", if negative { "-" } else { "+" }, body)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(
            f,
            " + O(deg {}, {}^{})",
            self.ring.degcap + 1,
            self.ring.prime,
            self.ring.prec
        )
    }
}

/// Wire form: `{"p":2,"prec":16,"vars":["u1"],"degcap":8,"terms":[[[1],1]]}`.
#[derive(Serialize, Deserialize)]
struct BaseEltRepr {
    p: u64,
    prec: u32,
    vars: Vec<String>,
    degcap: u32,
    terms: Vec<(Vec<u32>, u64)>,
}

impl From<BaseElt> for BaseEltRepr {
    fn from(a: BaseElt) -> Self {
        BaseEltRepr {
            p: a.ring.prime,
            prec: a.ring.prec,
            vars: a.ring.vars.clone(),
            degcap: a.ring.degcap,
            terms: a
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.residue()))
                .collect(),
        }
    }
}

impl TryFrom<BaseEltRepr> for BaseElt {
    type Error = Error;

    fn try_from(r: BaseEltRepr) -> Result<Self> {
        let ring = SeriesRing::new(r.p, r.prec, r.vars, r.degcap)?;
        let pairs: Vec<(Vec<u32>, i128)> = r
            .terms
            .into_iter()
            .map(|(e, c)| (e, c as i128))
            .collect();
        ring.from_pairs(&pairs)
    }
}
