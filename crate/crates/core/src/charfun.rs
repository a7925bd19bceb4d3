//! Subgroups of (Z/p^k)^n and class functions on them.
//!
//! Conjugacy classes of nontrivial maps Z_p^n → Σ_p biject with order-p
//! subgroups of (Q_p/Z_p)^n, which at finite level are the order-p^k
//! subgroups of (Z/p^k)^n. [`enum_subgroups`] lists them exhaustively,
//! one canonical generator matrix each (Howell normal form over Z/p^k,
//! so equality of tables is equality of matrices). A [`ClassFun`] assigns
//! a target-ring value to the trivial class and to each subgroup class;
//! its scaled transfer is the plain sum over all classes, which is how
//! the p!·Tr form of the trace appears downstream.

use serde::{Deserialize, Serialize};

use crate::freealg::{AlgElt, RingMap};
use crate::padic::{is_prime, PAdicInt};
use crate::ring::{RingElt, TowerElt};
use crate::series::BaseElt;
use crate::{Error, Result};

/// Exhaustive table of the order-p^k subgroups of (Z/p^k)^n. Each entry
/// is a canonical generator matrix: rows are generators, entries mod p^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupTable {
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub subgroups: Vec<Vec<Vec<u64>>>,
}

impl SubgroupTable {
    pub fn count(&self) -> usize {
        self.subgroups.len()
    }
}

fn ipow_sat(base: u64, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// All order-p^k subgroups of (Z/p^k)^n, duplicate-free, in lexicographic
/// order of their canonical generator matrices.
pub fn enum_subgroups(p: u64, n: u32, k: u32) -> Result<SubgroupTable> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(n >= 1, "need at least one cyclic factor");
    if k == 0 {
        // the trivial subgroup, generated by nothing
        return Ok(SubgroupTable {
            p,
            n,
            k,
            subgroups: vec![vec![]],
        });
    }
    // ≤ min(n,k) generators suffice for a subgroup of order p^k, so the
    // general path visits |G|^min(n,k) generator tuples
    let gmax = n.min(k);
    if ipow_sat(p, k * n * gmax) > 2_000_000 {
        return Err(Error::EnumerationTooLarge { p, n, k });
    }
    let mut subgroups = if k == 1 {
        enum_order_p(p, n)
    } else {
        enum_general(p, n, k, gmax)
    };
    subgroups.sort();
    Ok(SubgroupTable { p, n, k, subgroups })
}

/// k = 1 fast path: order-p subgroups of (Z/p)^n are lines, one per
/// nonzero vector with first nonzero coordinate 1.
fn enum_order_p(p: u64, n: u32) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let total = ipow_sat(p, n) as u64;
    for code in 1..total {
        let v = decode(code, p, n);
        if v.iter().find(|&&c| c != 0) == Some(&1) {
            out.push(vec![v]);
        }
    }
    out
}

/// General path: close every generator tuple, keep the subgroups of the
/// right order, dedupe by element set, then canonicalize the generators.
fn enum_general(p: u64, n: u32, k: u32, gmax: u32) -> Vec<Vec<Vec<u64>>> {
    let m = ipow_sat(p, k) as u64;
    let total = ipow_sat(p, k * n) as u64;
    let target = ipow_sat(p, k) as usize;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut tuple = vec![0u64; gmax as usize];
    loop {
        let gens: Vec<Vec<u64>> = tuple.iter().map(|&c| decode(c, m, n)).collect();
        let elems = close(&gens, m, n);
        if elems.len() == target && seen.insert(elems.clone()) {
            let rows: Vec<Vec<u64>> = elems.iter().map(|&c| decode(c, m, n)).collect();
            out.push(howell(rows, p, k, n));
        }
        // odometer over all generator tuples
        let mut i = 0;
        loop {
            if i == tuple.len() {
                return out;
            }
            tuple[i] += 1;
            if tuple[i] < total {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

fn decode(mut code: u64, m: u64, n: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(n as usize);
    for _ in 0..n {
        v.push(code % m);
        code /= m;
    }
    v
}

fn encode(v: &[u64], m: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &c| acc * m + c)
}

/// Subgroup generated by `gens` inside (Z/m)^n, as a sorted element set.
fn close(gens: &[Vec<u64>], m: u64, n: u32) -> Vec<u64> {
    let mut elems = std::collections::BTreeSet::new();
    elems.insert(0u64);
    let mut frontier = vec![vec![0u64; n as usize]];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let s: Vec<u64> = e.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
            if elems.insert(encode(&s, m)) {
                frontier.push(s);
            }
        }
    }
    elems.into_iter().collect()
}

fn val_p(mut e: u64, p: u64, k: u32) -> u32 {
    if e == 0 {
        return k;
    }
    let mut v = 0;
    while e.is_multiple_of(p) {
        e /= p;
        v += 1;
    }
    v
}

/// Howell normal form of the span of `rows` over Z/p^k — the canonical
/// generator matrix. Pivots are p-powers, entries above a pivot are
/// reduced mod that pivot, and saturation rows keep the span closed
/// under leading-zero projections.
fn howell(rows: Vec<Vec<u64>>, p: u64, k: u32, n: u32) -> Vec<Vec<u64>> {
    let m = ipow_sat(p, k) as u64;
    let mut pool: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.iter().any(|&c| c != 0)).collect();
    let mut result: Vec<Vec<u64>> = Vec::new();
    for col in 0..n as usize {
        let Some(best) = pool
            .iter()
            .enumerate()
            .filter(|(_, r)| r[col] != 0)
            .min_by_key(|(_, r)| val_p(r[col], p, k))
            .map(|(i, _)| i)
        else {
            continue;
        };
        let mut piv = pool.swap_remove(best);
        let v = val_p(piv[col], p, k);
        // normalize the pivot entry to exactly p^v
        let unit = piv[col] / ipow_sat(p, v) as u64;
        let uinv = PAdicInt::new(p, k, unit as i128)
            .expect("k, p validated")
            .inv()
            .expect("unit by construction")
            .residue();
        for c in piv.iter_mut() {
            *c = ((*c as u128 * uinv as u128) % m as u128) as u64;
        }
        let pv = ipow_sat(p, v) as u64;
        for r in pool.iter_mut() {
            let q = r[col] / pv; // valuation ≥ v, so this clears the column exactly
            if q == 0 {
                continue;
            }
            for (a, b) in r.iter_mut().zip(&piv) {
                let sub = (q as u128 * *b as u128) % m as u128;
                *a = ((*a as u128 + m as u128 - sub) % m as u128) as u64;
            }
        }
        if v > 0 {
            let sat: Vec<u64> = piv
                .iter()
                .map(|&c| ((c as u128 * ipow_sat(p, k - v)) % m as u128) as u64)
                .collect();
            if sat.iter().any(|&c| c != 0) {
                pool.push(sat);
            }
        }
        result.push(piv);
        pool.retain(|r| r.iter().any(|&c| c != 0));
    }
    // reduce entries above each pivot modulo the pivot value
    for j in 0..result.len() {
        let col = result[j].iter().position(|&c| c != 0).expect("pivot row");
        let pv = result[j][col];
        let pivot_row = result[j].clone();
        for row in result.iter_mut().take(j) {
            let q = row[col] / pv;
            if q == 0 {
                continue;
            }
            for (a, &b) in row.iter_mut().zip(&pivot_row) {
                let sub = (q as u128 * b as u128) % m as u128;
                *a = ((*a as u128 + m as u128 - sub) % m as u128) as u64;
            }
        }
    }
    result
}

/// True iff the enumerated count of order-p subgroups equals
/// 1 + p + … + p^{n−1} and that count is ≡ 1 mod p.
pub fn count_formula_check(p: u64, n: u32) -> Result<bool> {
    let table = enum_subgroups(p, n, 1)?;
    let formula: u128 = (0..n).map(|i| ipow_sat(p, i)).sum();
    Ok(table.count() as u128 == formula && formula % p as u128 == 1)
}

/// A function on the conjugacy classes: one value for the trivial class
/// and one per order-p subgroup class.
#[derive(Clone, Debug)]
pub struct ClassFun<T: RingElt> {
    pub table: SubgroupTable,
    pub trivial_value: T,
    pub values: Vec<T>,
}

impl<T: RingElt> ClassFun<T> {
    pub fn new(table: SubgroupTable, trivial_value: T, values: Vec<T>) -> Result<Self> {
        assert_eq!(table.k, 1, "class functions live on the k = 1 table");
        if values.len() != table.count() {
            return Err(Error::RootCount {
                expected: table.count(),
                got: values.len(),
            });
        }
        Ok(ClassFun {
            table,
            trivial_value,
            values,
        })
    }

    /// Sum over the nontrivial classes only.
    pub fn sum_values(&self) -> T {
        let mut acc = self.trivial_value.zero_like();
        for v in &self.values {
            acc = acc.add(v);
        }
        acc
    }

    /// p!·Tr: the plain sum over all 1 + |Sub_p| classes.
    pub fn transfer_scaled(&self) -> T {
        self.trivial_value.add(&self.sum_values())
    }
}

/// The class function of an algebra element: evaluate at each root of
/// the modulus (one root per order-p subgroup); the trivial class takes
/// the constant coordinate, i.e. the evaluation at generator 0.
pub fn classfun_of_element<T: TowerElt>(
    a: &AlgElt<BaseElt>,
    roots: &[T],
    table: SubgroupTable,
) -> Result<ClassFun<T>> {
    let m = a.parent().rank();
    if roots.len() != m {
        return Err(Error::RootCount {
            expected: m,
            got: roots.len(),
        });
    }
    let mut values = Vec::with_capacity(roots.len());
    for r in roots {
        let chi = RingMap::new(std::sync::Arc::clone(a.parent()), r.clone())?;
        values.push(chi.apply(a));
    }
    let trivial = roots[0].embed_base(a.coord(0));
    ClassFun::new(table, trivial, values)
}
