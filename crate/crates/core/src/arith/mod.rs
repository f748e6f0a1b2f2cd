//! Exact arithmetic: Bernoulli numbers, quadratic characters and the special
//! values `zeta_F(1 - 2j)` for `F` the rationals or a real quadratic field.
//!
//! Everything here is exact; rationals are `num_rational::BigRational`, which
//! is always normalized to lowest terms with a positive denominator.

mod bernoulli;
mod character;
mod kronecker;

use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use bernoulli::{bernoulli, bernoulli_polynomial};
pub use character::{generalized_bernoulli, is_fundamental_discriminant, QuadraticCharacter};
pub use kronecker::kronecker;

use crate::numberfield::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("generalized Bernoulli numbers need a non-trivial character")]
    TrivialCharacter,
    #[error("{0} is not a positive fundamental discriminant")]
    NotFundamental(u64),
    #[error("index must be positive")]
    ZeroIndex,
}

/// `zeta(1 - 2j) = -B_{2j} / 2j`.
pub fn zeta_rational(j: usize) -> Result<BigRational, ArithError> {
    if j == 0 {
        return Err(ArithError::ZeroIndex);
    }
    Ok(-bernoulli(2 * j) / BigRational::from_integer(BigInt::from(2 * j)))
}

/// `L(1 - n, chi) = -B_{n,chi} / n`.
pub fn dirichlet_l_negative(n: usize, chi: &QuadraticCharacter) -> Result<BigRational, ArithError> {
    Ok(-generalized_bernoulli(n, chi)? / BigRational::from_integer(BigInt::from(n)))
}

/// `zeta_F(1 - 2j)` for the Dedekind zeta function of `F`.
///
/// For real quadratic `F` of discriminant `D` this is
/// `zeta(1 - 2j) * L(1 - 2j, chi_D)`. The sign is always `(-1)^{dj}`.
pub fn zeta_f_special(field: &FieldSpec, j: usize) -> Result<BigRational, ArithError> {
    let z = zeta_rational(j)?;
    let value = match field {
        FieldSpec::Rational => z,
        FieldSpec::RealQuadratic { disc } => {
            let chi = QuadraticCharacter::new(*disc)?;
            z * dirichlet_l_negative(2 * j, &chi)?
        }
    };
    let negative = (field.degree() * j) % 2 == 1;
    assert!(
        !value.is_zero() && value.is_negative() == negative,
        "zeta_F(1-2j) has the wrong sign for {field:?}, j = {j}"
    );
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::One;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        for n in (2..=40usize).step_by(2) {
            let expected: BigInt = (2..=(n as u64 + 1))
                .filter(|&p| is_prime(p) && n as u64 % (p - 1) == 0)
                .map(BigInt::from)
                .product();
            assert_eq!(bernoulli(n).denom(), &expected, "B_{n}");
        }
    }

    #[test]
    fn rational_zeta_values() {
        assert_eq!(zeta_rational(1).unwrap(), r(-1, 12));
        assert_eq!(zeta_rational(2).unwrap(), r(1, 120));
        assert_eq!(zeta_rational(3).unwrap(), r(-1, 252));
        assert_eq!(zeta_rational(6).unwrap(), r(691, 32760));
        assert_eq!(zeta_rational(0), Err(ArithError::ZeroIndex));
    }

    #[test]
    fn real_quadratic_zeta_values() {
        let f = FieldSpec::RealQuadratic { disc: 5 };
        assert_eq!(zeta_f_special(&f, 1).unwrap(), r(1, 30));
        assert_eq!(zeta_f_special(&f, 2).unwrap(), r(1, 60));
        let f = FieldSpec::RealQuadratic { disc: 8 };
        assert_eq!(zeta_f_special(&f, 1).unwrap(), r(1, 12));
    }

    #[test]
    fn sign_law() {
        let fields = [
            FieldSpec::Rational,
            FieldSpec::RealQuadratic { disc: 5 },
            FieldSpec::RealQuadratic { disc: 8 },
            FieldSpec::RealQuadratic { disc: 12 },
            FieldSpec::RealQuadratic { disc: 13 },
        ];
        for f in &fields {
            for j in 1..=6 {
                let v = zeta_f_special(f, j).unwrap();
                let expect_negative = (f.degree() * j).is_odd();
                assert_eq!(v.is_negative(), expect_negative, "{f:?} j={j}");
                assert!(v.denom() >= &BigInt::one());
            }
        }
    }
}
