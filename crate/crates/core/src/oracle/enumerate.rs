//! Exhaustive enumeration of classical matrix groups and of `I(p)`.
//!
//! Matrices are built column by column. Every defining condition used here
//! (symplectic, unitary similitude) is linear in the newest column once the
//! earlier columns are fixed, so each column ranges over an affine subspace
//! rather than over all of `F^n`.

use std::sync::Arc;

use rayon::prelude::*;

use super::field::SmallField;
use super::group::{Block, Coefficients, Element, FqMatrixGroup};
use super::linalg::{determinant, rank, solve, AffineSpace};
use super::OracleError;
use crate::numberfield::ShimuraSetting;

/// Upper limit on candidate matrices examined by one enumeration.
pub const MAX_CANDIDATES: u128 = 10_000_000;
/// Upper limit on elements materialized by [`enumerate_group`].
pub const MAX_ELEMENTS: u64 = 2_000_000;

/// Parameters of `I(p)` as an explicit group: `GL_m(F_{q_v})` for each place
/// over `p` outside `Delta'`, the `r`-similitude unitary matrices in
/// `GL_m(F_{q_v^2})` for each place over `p` in `Delta'`, and `r in F_p^x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeviInstance {
    pub p: u64,
    pub m: u32,
    pub general: Vec<u64>,
    pub unitary: Vec<u64>,
}

impl LeviInstance {
    pub fn from_setting(setting: &ShimuraSetting) -> Self {
        LeviInstance {
            p: setting.p,
            m: setting.m(),
            general: setting.split_at_p().map(|v| v.q()).collect(),
            unitary: setting.delta_prime_at_p.iter().map(|v| v.q()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    /// `GL_m(F_q)`
    General { m: u32, q: u64 },
    /// `SL_m(F_q)`
    Special { m: u32, q: u64 },
    /// `Sp_{2m}(F_q)` for the form `[[0, I], [-I, 0]]`
    Symplectic { m: u32, q: u64 },
    /// `U_m(F_q) = {A in GL_m(F_{q^2}) : A^t conj(A) = I}`
    Unitary { m: u32, q: u64 },
    /// `GSp_{2m}(Z/nZ)`
    SymplecticSimilitudeMod { m: u32, n: u64 },
    /// The finite group `I(p)`.
    Levi(LeviInstance),
}

#[derive(Debug, Clone, Copy)]
enum Condition {
    /// invertible
    Any,
    /// `A^t J A = J`
    Symplectic,
    /// `A^t conj(A) = r I`
    UnitarySimilitude(u8),
}

fn pow128(base: u64, exp: u32) -> u128 {
    (base as u128).saturating_pow(exp)
}

/// A priori number of candidate matrices the search will examine.
pub fn candidate_count(descriptor: &GroupDescriptor) -> u128 {
    match descriptor {
        GroupDescriptor::General { m, q } | GroupDescriptor::Special { m, q } => pow128(*q, m * m),
        GroupDescriptor::Symplectic { m, q } => pow128(*q, m * (2 * m + 1)),
        GroupDescriptor::Unitary { m, q } => pow128(q * q, m * (m + 1) / 2),
        GroupDescriptor::SymplecticSimilitudeMod { m, n } => pow128(*n, 4 * m * m),
        GroupDescriptor::Levi(inst) => {
            let m = inst.m;
            let general: u128 = inst.general.iter().map(|&q| pow128(q, m * m)).sum();
            let unitary: u128 = inst.unitary.iter().map(|&q| pow128(q * q, m * (m + 1) / 2)).sum();
            general.saturating_add((inst.p as u128 - 1).saturating_mul(unitary))
        }
    }
}

fn check_budget(descriptor: &GroupDescriptor) -> Result<(), OracleError> {
    let candidates = candidate_count(descriptor);
    if candidates > MAX_CANDIDATES {
        return Err(OracleError::StateSpaceTooLarge { candidates, cap: MAX_CANDIDATES });
    }
    Ok(())
}

fn column_space(field: &SmallField, n: usize, cond: Condition, cols: &[Vec<u8>]) -> Option<AffineSpace> {
    let j = cols.len();
    match cond {
        Condition::Any => solve(field, &[], &[], n),
        Condition::Symplectic => {
            let m = n / 2;
            // omega(c, x) = sum_{k<m} c_k x_{k+m} - sum_{k>=m} c_k x_{k-m}
            let rows: Vec<Vec<u8>> = cols
                .iter()
                .map(|c| {
                    let mut row = vec![0u8; n];
                    for k in 0..m {
                        row[k + m] = c[k];
                        row[k] = field.neg(c[k + m]);
                    }
                    row
                })
                .collect();
            let rhs: Vec<u8> = (0..j).map(|i| u8::from(i < m && j == i + m)).collect();
            solve(field, &rows, &rhs, n)
        }
        Condition::UnitarySimilitude(_) => {
            let rows: Vec<Vec<u8>> = cols.iter().map(|c| c.iter().map(|&x| field.conj(x)).collect()).collect();
            solve(field, &rows, &vec![0; j], n)
        }
    }
}

fn accept(field: &SmallField, cond: Condition, cols: &[Vec<u8>], x: &[u8]) -> bool {
    match cond {
        Condition::Any => {
            if cols.is_empty() {
                return x.iter().any(|&v| v != 0);
            }
            let mut all = cols.to_vec();
            all.push(x.to_vec());
            rank(field, &all) == all.len()
        }
        Condition::Symplectic => true,
        Condition::UnitarySimilitude(r) => {
            x.iter().fold(0u8, |acc, &v| field.add(acc, field.mul(v, field.conj(v)))) == r
        }
    }
}

fn search(
    field: &SmallField,
    n: usize,
    cond: Condition,
    cols: &mut Vec<Vec<u8>>,
    entries: &mut Vec<u8>,
    leaf: &mut dyn FnMut(&[u8]),
) {
    if cols.len() == n {
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = cols[j][i];
            }
        }
        leaf(entries);
        return;
    }
    let Some(space) = column_space(field, n, cond, cols) else {
        return;
    };
    space.for_each(field, |x| {
        if accept(field, cond, cols, x) {
            cols.push(x.to_vec());
            search(field, n, cond, cols, entries, leaf);
            cols.pop();
        }
    });
}

/// Runs the column search, sharded over the first column.
fn drive<A, I, L, M>(field: &SmallField, n: usize, cond: Condition, init: I, leaf: L, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    L: Fn(&mut A, &[u8]) + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    let mut first: Vec<Vec<u8>> = Vec::new();
    if let Some(space) = column_space(field, n, cond, &[]) {
        space.for_each(field, |x| {
            if accept(field, cond, &[], x) {
                first.push(x.to_vec());
            }
        });
    }
    first
        .into_par_iter()
        .map(|c0| {
            let mut acc = init();
            let mut cols = vec![c0];
            let mut entries = vec![0u8; n * n];
            search(field, n, cond, &mut cols, &mut entries, &mut |e| leaf(&mut acc, e));
            acc
        })
        .reduce(&init, &merge)
}

fn collect(field: &SmallField, n: usize, cond: Condition, keep: &(dyn Fn(&[u8]) -> bool + Sync)) -> Vec<Element> {
    drive(
        field,
        n,
        cond,
        Vec::new,
        |acc: &mut Vec<Element>, e| {
            if keep(e) {
                acc.push(e.into());
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )
}

fn count(field: &SmallField, n: usize, cond: Condition, keep: &(dyn Fn(&[u8]) -> bool + Sync)) -> u64 {
    drive(field, n, cond, || 0u64, |acc, e| *acc += u64::from(keep(e)), |a, b| a + b)
}

fn field_of(q: u64) -> Result<Arc<SmallField>, OracleError> {
    Ok(Arc::new(SmallField::of_order(q)?))
}

fn unitary_field(q: u64) -> Result<Arc<SmallField>, OracleError> {
    let f = field_of(q.checked_mul(q).ok_or(OracleError::UnsupportedField(q))?)?;
    if !f.has_involution() {
        return Err(OracleError::UnsupportedField(q * q));
    }
    Ok(f)
}

fn check_rank(m: u32) -> Result<(), OracleError> {
    if m == 0 {
        return Err(OracleError::InvalidParameters("matrix size must be positive".into()));
    }
    Ok(())
}

/// `A^t J A = c J` for a unit `c` of `Z/nZ`, with `J = [[0, I], [-I, 0]]`.
fn is_symplectic_similitude_mod(a: &[u8], side: usize, n: u16) -> bool {
    let m = side / 2;
    let at = |i: usize, j: usize| a[i * side + j] as u16;
    // omega(col_i, col_j)
    let omega = |i: usize, j: usize| -> u16 {
        let mut s = 0u16;
        for k in 0..m {
            s = (s + at(k, i) * at(k + m, j)) % n;
            s = (s + (n - at(k + m, i)) * at(k, j)) % n;
        }
        s
    };
    let c = omega(0, m);
    if num_integer::gcd(c, n) != 1 {
        return false;
    }
    for i in 0..side {
        for j in i + 1..side {
            let expected = if i < m && j == i + m { c } else { 0 };
            if omega(i, j) != expected {
                return false;
            }
        }
    }
    true
}

fn brute_force_mod(m: u32, n: u64, mut leaf: impl FnMut(&[u8])) {
    let side = 2 * m as usize;
    let len = side * side;
    let mut a = vec![0u8; len];
    loop {
        if is_symplectic_similitude_mod(&a, side, n as u16) {
            leaf(&a);
        }
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            a[i] += 1;
            if (a[i] as u64) < n {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

struct LeviParts {
    blocks: Vec<Block>,
    general: Vec<Vec<Element>>,
    /// per `r = 1..p`, the similitude-`r` matrices of each unitary factor
    unitary: Vec<Vec<Vec<Element>>>,
}

fn levi_parts(inst: &LeviInstance) -> Result<LeviParts, OracleError> {
    check_rank(inst.m)?;
    let n = inst.m as usize;
    let prime_field = field_of(inst.p)?;
    let mut blocks = Vec::new();
    let mut general = Vec::new();
    for &q in &inst.general {
        let f = field_of(q)?;
        general.push(collect(&f, n, Condition::Any, &|_| true));
        blocks.push(Block { coefficients: Coefficients::Field(f), dim: n });
    }
    let unitary_fields =
        inst.unitary.iter().map(|&q| unitary_field(q)).collect::<Result<Vec<_>, _>>()?;
    let mut unitary = Vec::new();
    for r in 1..inst.p as u8 {
        unitary.push(
            unitary_fields
                .iter()
                .map(|f| collect(f, n, Condition::UnitarySimilitude(r), &|_| true))
                .collect(),
        );
    }
    for f in unitary_fields {
        blocks.push(Block { coefficients: Coefficients::Field(f), dim: n });
    }
    blocks.push(Block { coefficients: Coefficients::Field(prime_field), dim: 1 });
    Ok(LeviParts { blocks, general, unitary })
}

fn levi_size(parts: &LeviParts) -> u64 {
    let general: u64 = parts.general.iter().map(|l| l.len() as u64).product();
    parts
        .unitary
        .iter()
        .map(|per_r| general * per_r.iter().map(|l| l.len() as u64).product::<u64>())
        .sum()
}

/// Number of elements of the group, without materializing them.
pub fn count_group(descriptor: &GroupDescriptor) -> Result<u64, OracleError> {
    check_budget(descriptor)?;
    Ok(match descriptor {
        GroupDescriptor::General { m, q } => {
            check_rank(*m)?;
            count(&*field_of(*q)?, *m as usize, Condition::Any, &|_| true)
        }
        GroupDescriptor::Special { m, q } => {
            check_rank(*m)?;
            let f = field_of(*q)?;
            let n = *m as usize;
            count(&f, n, Condition::Any, &|e| determinant(&f, e, n) == 1)
        }
        GroupDescriptor::Symplectic { m, q } => {
            check_rank(*m)?;
            count(&*field_of(*q)?, 2 * *m as usize, Condition::Symplectic, &|_| true)
        }
        GroupDescriptor::Unitary { m, q } => {
            check_rank(*m)?;
            count(&*unitary_field(*q)?, *m as usize, Condition::UnitarySimilitude(1), &|_| true)
        }
        GroupDescriptor::SymplecticSimilitudeMod { m, n } => {
            check_modulus(*m, *n)?;
            let mut k = 0u64;
            brute_force_mod(*m, *n, |_| k += 1);
            k
        }
        GroupDescriptor::Levi(inst) => levi_size(&levi_parts(inst)?),
    })
}

fn check_modulus(m: u32, n: u64) -> Result<(), OracleError> {
    check_rank(m)?;
    if !(2..=255).contains(&n) {
        return Err(OracleError::InvalidParameters(format!("modulus {n} out of range")));
    }
    Ok(())
}

/// The full element list of the group.
pub fn enumerate_group(descriptor: &GroupDescriptor) -> Result<FqMatrixGroup, OracleError> {
    check_budget(descriptor)?;
    let single = |coefficients: Coefficients, dim: usize| vec![Block { coefficients, dim }];
    let (blocks, elements) = match descriptor {
        GroupDescriptor::General { m, q } => {
            check_rank(*m)?;
            let f = field_of(*q)?;
            let els = collect(&f, *m as usize, Condition::Any, &|_| true);
            (single(Coefficients::Field(f), *m as usize), els)
        }
        GroupDescriptor::Special { m, q } => {
            check_rank(*m)?;
            let f = field_of(*q)?;
            let n = *m as usize;
            let els = collect(&f, n, Condition::Any, &|e| determinant(&f, e, n) == 1);
            (single(Coefficients::Field(f), n), els)
        }
        GroupDescriptor::Symplectic { m, q } => {
            check_rank(*m)?;
            let f = field_of(*q)?;
            let n = 2 * *m as usize;
            let els = collect(&f, n, Condition::Symplectic, &|_| true);
            (single(Coefficients::Field(f), n), els)
        }
        GroupDescriptor::Unitary { m, q } => {
            check_rank(*m)?;
            let f = unitary_field(*q)?;
            let els = collect(&f, *m as usize, Condition::UnitarySimilitude(1), &|_| true);
            (single(Coefficients::Field(f), *m as usize), els)
        }
        GroupDescriptor::SymplecticSimilitudeMod { m, n } => {
            check_modulus(*m, *n)?;
            let mut els = Vec::new();
            brute_force_mod(*m, *n, |a| els.push(Element::from(a)));
            (single(Coefficients::Integers(*n as u8), 2 * *m as usize), els)
        }
        GroupDescriptor::Levi(inst) => {
            let parts = levi_parts(inst)?;
            let size = levi_size(&parts);
            if size > MAX_ELEMENTS {
                return Err(OracleError::TooManyElements { elements: size, cap: MAX_ELEMENTS });
            }
            let mut els = Vec::with_capacity(size as usize);
            for (r_index, per_r) in parts.unitary.iter().enumerate() {
                let r = (r_index + 1) as u8;
                let factors: Vec<&Vec<Element>> = parts.general.iter().chain(per_r.iter()).collect();
                cartesian(&factors, &mut Vec::new(), &mut |tuple| {
                    let mut e: Vec<u8> = tuple.iter().flat_map(|x| x.iter().copied()).collect();
                    e.push(r);
                    els.push(e.into_boxed_slice());
                });
            }
            (parts.blocks, els)
        }
    };
    if elements.len() as u64 > MAX_ELEMENTS {
        return Err(OracleError::TooManyElements { elements: elements.len() as u64, cap: MAX_ELEMENTS });
    }
    Ok(FqMatrixGroup::new(descriptor.clone(), blocks, elements))
}

fn cartesian<'a>(factors: &[&'a Vec<Element>], prefix: &mut Vec<&'a Element>, visit: &mut dyn FnMut(&[&Element])) {
    match factors.split_first() {
        None => visit(prefix),
        Some((head, rest)) => {
            for x in head.iter() {
                prefix.push(x);
                cartesian(rest, prefix, visit);
                prefix.pop();
            }
        }
    }
}
