//! Bernoulli numbers and polynomials.
//!
//! Uses the convention `B_1 = -1/2`, i.e. the numbers defined by
//! `sum_{k=0}^{n} C(n+1, k) B_k = 0` with `B_0 = 1`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn cache() -> &'static RwLock<Vec<BigRational>> {
    static CACHE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

/// Binomial coefficients `C(n, 0..=n)`.
pub(crate) fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigInt::from(n + 1 - k) / BigInt::from(k);
        row.push(c.clone());
    }
    row
}

/// The `n`-th Bernoulli number, `B_1 = -1/2`.
///
/// Values are memoized process-wide; extending the table takes a write lock.
pub fn bernoulli(n: usize) -> BigRational {
    if n >= 3 && n % 2 == 1 {
        return BigRational::zero();
    }
    {
        let table = cache().read().expect("bernoulli cache poisoned");
        if let Some(b) = table.get(n) {
            return b.clone();
        }
    }
    let mut table = cache().write().expect("bernoulli cache poisoned");
    while table.len() <= n {
        let k = table.len();
        // B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
        let row = binomial_row(k + 1);
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(row[j].clone());
            }
        }
        let next = -acc / BigRational::from_integer(BigInt::from(k + 1));
        table.push(next);
    }
    table[n].clone()
}

/// Evaluates the Bernoulli polynomial `B_n(x) = sum_k C(n, k) B_k x^{n-k}`.
pub fn bernoulli_polynomial(n: usize, x: &BigRational) -> BigRational {
    let row = binomial_row(n);
    // Horner over descending powers of x: coefficient of x^{n-k} is C(n,k) B_k.
    let mut acc = BigRational::zero();
    for (k, c) in row.iter().enumerate() {
        acc = acc * x + BigRational::from_integer(c.clone()) * bernoulli(k);
    }
    acc
}
