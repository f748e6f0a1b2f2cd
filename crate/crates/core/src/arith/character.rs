//! Real quadratic Dirichlet characters and generalized Bernoulli numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::bernoulli::bernoulli_polynomial;
use super::kronecker::kronecker;
use super::ArithError;

fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        if n % d == 0 {
            n /= d;
        }
        d += 1;
    }
    true
}

/// Whether `d` is a positive fundamental discriminant other than 1.
pub fn is_fundamental_discriminant(d: u64) -> bool {
    if d <= 1 {
        return false;
    }
    match d % 4 {
        1 => is_squarefree(d),
        0 => {
            let k = d / 4;
            matches!(k % 4, 2 | 3) && is_squarefree(k)
        }
        _ => false,
    }
}

/// The Kronecker character `n -> (D/n)` of a real quadratic field, or the
/// trivial character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticCharacter {
    discriminant: Option<u64>,
}

impl QuadraticCharacter {
    pub fn trivial() -> Self {
        Self { discriminant: None }
    }

    pub fn new(discriminant: u64) -> Result<Self, ArithError> {
        if !is_fundamental_discriminant(discriminant) {
            return Err(ArithError::NotFundamental(discriminant));
        }
        Ok(Self { discriminant: Some(discriminant) })
    }

    pub fn is_trivial(&self) -> bool {
        self.discriminant.is_none()
    }

    /// The conductor: `D`, or 1 for the trivial character.
    pub fn modulus(&self) -> u64 {
        self.discriminant.unwrap_or(1)
    }

    pub fn value(&self, n: i64) -> i8 {
        match self.discriminant {
            None => 1,
            Some(d) => kronecker(d as i64, n),
        }
    }
}

/// `B_{n,chi} = D^{n-1} sum_{a=1}^{D} chi(a) B_n(a/D)`.
pub fn generalized_bernoulli(n: usize, chi: &QuadraticCharacter) -> Result<BigRational, ArithError> {
    if chi.is_trivial() {
        return Err(ArithError::TrivialCharacter);
    }
    if n == 0 {
        return Err(ArithError::ZeroIndex);
    }
    let d = chi.modulus();
    let den = BigInt::from(d);
    let mut sum = BigRational::zero();
    for a in 1..=d {
        match chi.value(a as i64) {
            0 => {}
            s => {
                let x = BigRational::new(BigInt::from(a), den.clone());
                let term = bernoulli_polynomial(n, &x);
                if s > 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
        }
    }
    Ok(sum * BigRational::from_integer(num_traits::pow(den, n - 1)))
}
