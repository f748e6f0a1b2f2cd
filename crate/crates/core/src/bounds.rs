//! The superspecial mass, the constant `C_B`, and the final upper bound on
//! the number of Hecke eigensystems, with the Siegel-case formula as an
//! independent second route.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::arith::{zeta_f_special, zeta_rational, ArithError};
use crate::groups::{dim_bound, irr_count, level_group_order};
use crate::numberfield::{factorize, is_prime, ShimuraSetting, SettingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Setting(#[from] SettingError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    /// A closed-form identity failed; this is a bug, not an input error.
    #[error("implementation fault: {0}")]
    ImplementationFault(String),
    #[error("asymptotic check needs at least 3 settings, got {0}")]
    InsufficientSample(usize),
    #[error("asymptotic check needs strictly increasing p and a common (F, B, m, N)")]
    IncompatibleSample,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub setting: ShimuraSetting,
    /// `zeta_F(1 - 2j)` for `j = 1..=m`.
    pub zeta_values: Vec<BigRational>,
    pub c_b: BigRational,
    pub level_group_order: BigUint,
    pub mass: BigUint,
    pub irr_count: BigUint,
    pub dim_bound: BigUint,
    pub final_bound: BigUint,
    /// `dm^2 + dm + 1`.
    pub asymptotic_exponent: u32,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sign_power_of_two(d: usize, m: u32) -> BigRational {
    let m = m as usize;
    let sign = if (d * m * (m + 1) / 2) % 2 == 0 { 1 } else { -1 };
    BigRational::new(BigInt::from(sign), Pow::pow(&BigInt::from(2), m * d))
}

/// `q^j + (-1)^j`
fn alternating(q: u64, j: u32) -> BigInt {
    let qj = Pow::pow(&BigInt::from(q), j);
    if j % 2 == 0 {
        qj + 1
    } else {
        qj - 1
    }
}

fn to_positive_integer(value: &BigRational, what: &str) -> Result<BigUint, BoundError> {
    if !value.is_integer() || !value.is_positive() {
        return Err(BoundError::ImplementationFault(format!("{what} = {value} is not a positive integer")));
    }
    Ok(value.to_integer().to_biguint().expect("positive"))
}

pub fn asymptotic_exponent(setting: &ShimuraSetting) -> u32 {
    let d = setting.degree() as u32;
    let m = setting.m();
    d * m * m + d * m + 1
}

/// `zeta_F(1 - 2j)` for `j = 1..=m`.
pub fn zeta_values(setting: &ShimuraSetting) -> Result<Vec<BigRational>, BoundError> {
    (1..=setting.m() as usize).map(|j| Ok(zeta_f_special(setting.field(), j)?)).collect()
}

/// `C_B = (-1)^{dm(m+1)/2} / 2^{md} * prod_i zeta_F(1-2i) prod_{v in Delta', v not over p} (q_v^i + (-1)^i)`.
pub fn c_b(setting: &ShimuraSetting) -> Result<BigRational, BoundError> {
    let mut c = sign_power_of_two(setting.degree(), setting.m());
    for (i, z) in (1..=setting.m()).zip(zeta_values(setting)?) {
        c *= z;
        for v in &setting.delta_prime_away {
            c *= rat(alternating(v.q(), i));
        }
    }
    if !c.is_positive() {
        return Err(BoundError::ImplementationFault(format!("C_B = {c} is not positive")));
    }
    Ok(c)
}

/// Number of superspecial points at level `N`.
///
/// Evaluates `|G(Z/NZ)| (-1)^{dm(m+1)/2} / 2^{md} prod_j [zeta_F(1-2j)
/// prod_{v | Delta'} (q_v^j + (-1)^j) prod_{v | p, v not in Delta'} (q_v^j + 1)]`,
/// where `Delta'` includes its places over `p`.
pub fn superspecial_mass(setting: &ShimuraSetting) -> Result<BigUint, BoundError> {
    let mut mass = rat(level_group_order(setting)) * sign_power_of_two(setting.degree(), setting.m());
    for (j, z) in (1..=setting.m()).zip(zeta_values(setting)?) {
        mass *= z;
        for v in setting.delta_prime() {
            mass *= rat(alternating(v.q(), j));
        }
        for v in setting.split_at_p() {
            mass *= rat(Pow::pow(&BigInt::from(v.q()), j) + 1);
        }
    }
    to_positive_integer(&mass, "superspecial mass")
}

/// The full bound, evaluated directly from its closed form and checked
/// against `mass * irr_count * dim_bound`.
pub fn final_bound(setting: &ShimuraSetting) -> Result<BoundReport, BoundError> {
    let d = setting.degree() as u32;
    let m = setting.m();
    let p = setting.p;
    let zeta_values = zeta_values(setting)?;
    let c_b = c_b(setting)?;
    let level_group_order = level_group_order(setting);

    let mut bound = &c_b * rat(level_group_order.clone());
    bound *= rat(Pow::pow(&BigInt::from(p), d * (m + 2) * (m - 1) / 2));
    bound *= rat(p - 1);
    for v in setting.split_at_p() {
        bound *= rat(v.q() - 1);
    }
    for v in &setting.delta_prime_at_p {
        bound *= rat(v.q() + 1);
    }
    for j in 1..=m {
        for v in setting.split_at_p() {
            bound *= rat(Pow::pow(&BigInt::from(v.q()), j) + 1);
        }
        for v in &setting.delta_prime_at_p {
            bound *= rat(alternating(v.q(), j));
        }
    }
    let final_bound = to_positive_integer(&bound, "final bound")?;

    let mass = superspecial_mass(setting)?;
    let irr_count = irr_count(setting);
    let dim_bound = dim_bound(setting);
    if final_bound != &mass * &irr_count * &dim_bound {
        return Err(BoundError::ImplementationFault(format!(
            "final bound {final_bound} != mass {mass} * irr {irr_count} * dim {dim_bound}"
        )));
    }
    Ok(BoundReport {
        setting: setting.clone(),
        zeta_values,
        c_b,
        level_group_order,
        mass,
        irr_count,
        dim_bound,
        final_bound,
        asymptotic_exponent: asymptotic_exponent(setting),
    })
}

/// The Siegel-case bound for genus `m`, level `N` (`F = Q`, `B = M_2(Q)`):
/// `C_B |GSp_{2m}(Z/NZ)| p^{(m+2)(m-1)/2} (p-1)(p+1) prod_j (p^j + (-1)^j)`.
///
/// Written independently of [`final_bound`].
pub fn ghitza_bound(m: u32, level: u64, p: u64) -> Result<BigUint, BoundError> {
    if m == 0 {
        return Err(SettingError::ZeroRank.into());
    }
    if !is_prime(p) {
        return Err(SettingError::NotPrime(p).into());
    }
    if level < 3 {
        return Err(SettingError::LevelTooSmall(level).into());
    }
    if level % p == 0 {
        return Err(SettingError::PDividesLevel { p, level }.into());
    }

    // |GSp_{2m}(Z/ell^a)| = ell^{(a-1)(2m^2+m+1)} (ell - 1) ell^{m^2} prod (ell^{2i} - 1)
    let mut gsp = BigInt::one();
    for (ell, a) in factorize(level) {
        let l = BigInt::from(ell);
        gsp *= Pow::pow(&l, (a - 1) * (2 * m * m + m + 1));
        gsp *= &l - 1;
        gsp *= Pow::pow(&l, m * m);
        for i in 1..=m {
            gsp *= Pow::pow(&l, 2 * i) - 1;
        }
    }

    let sign = if (m * (m + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let mut c = BigRational::new(BigInt::from(sign), Pow::pow(&BigInt::from(2), m));
    for i in 1..=m as usize {
        c *= zeta_rational(i)?;
    }

    let pb = BigInt::from(p);
    let mut tail = Pow::pow(&pb, (m + 2) * (m - 1) / 2) * (&pb - 1) * (&pb + 1);
    for j in 1..=m {
        let pj = Pow::pow(&pb, j);
        tail *= if j % 2 == 0 { pj + 1 } else { pj - 1 };
    }
    to_positive_integer(&(c * rat(gsp * tail)), "Siegel bound")
}

/// Degree of the polynomial interpolating `points` (distinct abscissae),
/// via exact Newton divided differences. `None` for the zero polynomial.
pub fn polynomial_degree(points: &[(BigInt, BigInt)]) -> Option<usize> {
    let xs: Vec<BigRational> = points.iter().map(|(x, _)| rat(x.clone())).collect();
    let mut column: Vec<BigRational> = points.iter().map(|(_, y)| rat(y.clone())).collect();
    let mut degree = if column[0].is_zero() { None } else { Some(0) };
    for k in 1..points.len() {
        column = (0..column.len() - 1)
            .map(|i| (&column[i + 1] - &column[i]) / (&xs[i + k] - &xs[i]))
            .collect();
        if !column[0].is_zero() {
            degree = Some(k);
        }
    }
    degree
}

/// `final_bound` as a function of `p`, its degree read off by interpolation.
pub fn p_degree(settings: &[ShimuraSetting]) -> Result<Option<usize>, BoundError> {
    let points = settings
        .iter()
        .map(|s| Ok((BigInt::from(s.p), BigInt::from(final_bound(s)?.final_bound))))
        .collect::<Result<Vec<_>, BoundError>>()?;
    Ok(polynomial_degree(&points))
}

/// Checks `final_bound(p) = O(p^e)`, `e = dm^2 + dm + 1`, over a sweep in `p`.
///
/// Every sample must satisfy `K_lo p^e <= final_bound(p) <= K_hi p^e` with the
/// `p`-independent constants `K_hi = C_B |G(Z/NZ)| 2^{d(m+1)}` and
/// `K_lo = C_B |G(Z/NZ)| / 2^{d(m+1)+1}`. These come from bounding each factor
/// `q^j +- 1` of the closed form between `q^j / 2` and `2 q^j`.
pub fn asymptotic_check(settings: &[ShimuraSetting]) -> Result<bool, BoundError> {
    if settings.len() < 3 {
        return Err(BoundError::InsufficientSample(settings.len()));
    }
    let first = &settings[0];
    for pair in settings.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.p <= a.p || b.quaternion != first.quaternion || b.level != first.level {
            return Err(BoundError::IncompatibleSample);
        }
    }
    let e = asymptotic_exponent(first);
    let d = first.degree() as u32;
    let m = first.m();
    let base = c_b(first)? * rat(level_group_order(first));
    let spread = Pow::pow(&BigInt::from(2), d * (m + 1));
    let k_hi = &base * rat(spread.clone());
    let k_lo = &base / rat(spread * 2);
    for s in settings {
        let b = rat(final_bound(s)?.final_bound);
        let pe = rat(Pow::pow(&BigInt::from(s.p), e));
        if b > &k_hi * &pe || b < &k_lo * &pe {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{validate_setting, FieldSpec, QuaternionData, RamifiedPrime};

    fn setting(field: FieldSpec, ram: &[(u64, u32)], m: u32, n: u64, p: u64) -> ShimuraSetting {
        let ram: Vec<RamifiedPrime> =
            ram.iter().map(|&(prime, residue_degree)| RamifiedPrime { prime, residue_degree }).collect();
        validate_setting(QuaternionData::new(field, &ram, m).unwrap(), n, p).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const Q: FieldSpec = FieldSpec::Rational;
    const Q5: FieldSpec = FieldSpec::RealQuadratic { disc: 5 };

    #[test]
    fn mass_examples() {
        assert_eq!(superspecial_mass(&setting(Q, &[], 1, 3, 5)).unwrap(), BigUint::from(8u32));
        assert_eq!(superspecial_mass(&setting(Q, &[], 1, 3, 2)).unwrap(), BigUint::from(2u32));
        // |GSp_4(Z/3)| (2-1)(2^2+1) / 5760
        let s = setting(Q, &[], 2, 3, 2);
        let expect = level_group_order(&s) * 5u32 / 5760u32;
        assert_eq!(superspecial_mass(&s).unwrap(), expect);
        assert_eq!(expect, BigUint::from(90u32));
    }

    #[test]
    fn c_b_examples() {
        assert_eq!(c_b(&setting(Q, &[], 1, 3, 5)).unwrap(), r(1, 24));
        assert_eq!(c_b(&setting(Q, &[], 2, 3, 5)).unwrap(), r(1, 5760));
        assert_eq!(c_b(&setting(Q5, &[], 1, 3, 2)).unwrap(), r(1, 120));
        // away-from-p ramification enters C_B: (2-1)(3-1) for j = 1
        assert_eq!(c_b(&setting(Q, &[(2, 1), (3, 1)], 1, 5, 7)).unwrap(), r(2, 24));
    }

    #[test]
    fn final_bound_examples() {
        let rep = final_bound(&setting(Q, &[], 1, 3, 5)).unwrap();
        assert_eq!(rep.final_bound, BigUint::from(192u32));
        assert_eq!(rep.mass, BigUint::from(8u32));
        assert_eq!(rep.irr_count, BigUint::from(24u32));
        assert_eq!(rep.dim_bound, BigUint::from(1u32));
        assert_eq!(rep.asymptotic_exponent, 3);
        let rep = final_bound(&setting(Q, &[], 1, 3, 2)).unwrap();
        assert_eq!(rep.final_bound, BigUint::from(6u32));
    }

    #[test]
    fn ghitza_examples() {
        assert_eq!(ghitza_bound(1, 3, 5).unwrap(), BigUint::from(192u32));
        assert_eq!(ghitza_bound(1, 3, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(ghitza_bound(2, 3, 3), Err(BoundError::Setting(SettingError::PDividesLevel { p: 3, level: 3 })));
        assert_eq!(ghitza_bound(2, 4, 3).unwrap(), final_bound(&setting(Q, &[], 2, 4, 3)).unwrap().final_bound);
        assert_eq!(ghitza_bound(1, 2, 5), Err(BoundError::Setting(SettingError::LevelTooSmall(2))));
    }

    #[test]
    fn degree_detection_on_known_polynomials() {
        let pts = |f: &dyn Fn(i64) -> i64| -> Vec<(BigInt, BigInt)> {
            [2i64, 3, 5, 7, 11, 13].iter().map(|&x| (BigInt::from(x), BigInt::from(f(x)))).collect()
        };
        assert_eq!(polynomial_degree(&pts(&|_| 0)), None);
        assert_eq!(polynomial_degree(&pts(&|_| 4)), Some(0));
        assert_eq!(polynomial_degree(&pts(&|x| 3 * x * x - x + 1)), Some(2));
        assert_eq!(polynomial_degree(&pts(&|x| x.pow(4) - 7)), Some(4));
    }

    #[test]
    fn asymptotic_examples() {
        let primes: Vec<u64> = (5..=97).filter(|&n| is_prime(n)).collect();
        for m in [1, 2] {
            let sweep: Vec<_> = primes.iter().map(|&p| setting(Q, &[], m, 3, p)).collect();
            assert!(asymptotic_check(&sweep).unwrap());
        }
        assert_eq!(asymptotic_exponent(&setting(Q, &[], 2, 3, 5)), 7);
        assert_eq!(
            asymptotic_check(&[setting(Q, &[], 1, 3, 5)]),
            Err(BoundError::InsufficientSample(1))
        );
        let unordered = [setting(Q, &[], 1, 3, 7), setting(Q, &[], 1, 3, 5), setting(Q, &[], 1, 3, 11)];
        assert_eq!(asymptotic_check(&unordered), Err(BoundError::IncompatibleSample));
    }

    #[test]
    fn consecutive_log_slope_can_exceed_the_exponent() {
        // 192 -> 576 between p = 5 and p = 7: 576 * 5^3 > 192 * 7^3, so the
        // growth rate between neighbours is above 3 even though the bound is O(p^3).
        let b5 = final_bound(&setting(Q, &[], 1, 3, 5)).unwrap().final_bound;
        let b7 = final_bound(&setting(Q, &[], 1, 3, 7)).unwrap().final_bound;
        assert_eq!(b7, BigUint::from(576u32));
        assert!(&b7 * 125u32 > &b5 * 343u32);
    }
}
