//! The totally real base field, its places over rational primes, the
//! ramification data of the quaternion algebra and validated settings.
//!
//! Places are modelled only through their residue characteristic, residue
//! degree and an ordinal distinguishing the two places over a split prime;
//! every downstream formula consumes nothing beyond `q_v = ell^{f_v}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, QuadraticCharacter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SettingError {
    #[error("level must be >= 3 (got {0})")]
    LevelTooSmall(u64),
    #[error("p = {p} divides the level N = {level}")]
    PDividesLevel { p: u64, level: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("m must be positive")]
    ZeroRank,
    #[error("p = {0} is ramified in F")]
    PRamifiedInField(u64),
    #[error("p = {0} lies under a place ramified in B")]
    PInRamification(u64),
    #[error("B must ramify at an even number of finite places (got {0})")]
    OddRamificationCount(usize),
    #[error("level N = {level} shares the factor {common} with disc(F) or the ramification of B")]
    LevelNotCoprime { level: u64, common: u64 },
    #[error("no place of residue degree {given} lies over {prime} (residue degrees there: {expected:?})")]
    ResidueDegreeInconsistent { prime: u64, given: u32, expected: Vec<u32> },
    #[error("ramification lists more places over {prime} of residue degree {residue_degree} than exist")]
    DuplicatePlace { prime: u64, residue_degree: u32 },
    #[error("totally real fields of degree {0} are not supported: zeta_F(1-2j) needs Siegel-Klingen machinery beyond degree 2")]
    UnsupportedFieldDegree(u32),
    #[error(transparent)]
    Field(#[from] ArithError),
}

/// `F = Q` or `F = Q(sqrt D)` with `D` a positive fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rational,
    RealQuadratic { disc: u64 },
}

impl FieldSpec {
    pub fn real_quadratic(disc: u64) -> Result<Self, SettingError> {
        QuadraticCharacter::new(disc)?;
        Ok(FieldSpec::RealQuadratic { disc })
    }

    pub fn degree(&self) -> usize {
        match self {
            FieldSpec::Rational => 1,
            FieldSpec::RealQuadratic { .. } => 2,
        }
    }

    /// Absolute discriminant; 1 for `Q`.
    pub fn discriminant(&self) -> u64 {
        match self {
            FieldSpec::Rational => 1,
            FieldSpec::RealQuadratic { disc } => *disc,
        }
    }

    pub fn character(&self) -> Result<QuadraticCharacter, ArithError> {
        match self {
            FieldSpec::Rational => Ok(QuadraticCharacter::trivial()),
            FieldSpec::RealQuadratic { disc } => QuadraticCharacter::new(*disc),
        }
    }

    fn check(&self) -> Result<(), SettingError> {
        self.character()?;
        Ok(())
    }
}

/// A finite place of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Place {
    pub residue_prime: u64,
    pub residue_degree: u32,
    pub ramified_in_f: bool,
    pub index: u32,
}

impl Place {
    /// Residue field cardinality `q_v`.
    pub fn q(&self) -> u64 {
        self.residue_prime.pow(self.residue_degree)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order, with multiplicities.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The places of `F` above the rational prime `ell`.
pub fn split_prime(field: &FieldSpec, ell: u64) -> Vec<Place> {
    let place = |f, ramified, index| Place { residue_prime: ell, residue_degree: f, ramified_in_f: ramified, index };
    match field {
        FieldSpec::Rational => vec![place(1, false, 0)],
        FieldSpec::RealQuadratic { disc } => match crate::arith::kronecker(*disc as i64, ell as i64) {
            1 => vec![place(1, false, 0), place(1, false, 1)],
            -1 => vec![place(2, false, 0)],
            _ => vec![place(1, true, 0)],
        },
    }
}

/// One entry of the user-facing ramification list of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamifiedPrime {
    pub prime: u64,
    pub residue_degree: u32,
}

/// `B` over `F`, described by its finite ramification set, together with
/// `m = dim_B V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuaternionData {
    pub field: FieldSpec,
    pub ramified_places: Vec<Place>,
    pub m: u32,
}

impl QuaternionData {
    /// Resolves `(ell, f)` pairs to places of `F`. Repeating a pair picks the
    /// next unused place over `ell` with that residue degree.
    pub fn new(field: FieldSpec, ramification: &[RamifiedPrime], m: u32) -> Result<Self, SettingError> {
        field.check()?;
        let mut places: Vec<Place> = Vec::with_capacity(ramification.len());
        for r in ramification {
            if !is_prime(r.prime) {
                return Err(SettingError::NotPrime(r.prime));
            }
            let candidates = split_prime(&field, r.prime);
            let matching: Vec<&Place> = candidates.iter().filter(|v| v.residue_degree == r.residue_degree).collect();
            if matching.is_empty() {
                return Err(SettingError::ResidueDegreeInconsistent {
                    prime: r.prime,
                    given: r.residue_degree,
                    expected: candidates.iter().map(|v| v.residue_degree).collect(),
                });
            }
            let next = matching.into_iter().find(|v| !places.contains(v)).ok_or(SettingError::DuplicatePlace {
                prime: r.prime,
                residue_degree: r.residue_degree,
            })?;
            places.push(*next);
        }
        let q = QuaternionData { field, ramified_places: places, m };
        q.check()?;
        Ok(q)
    }

    /// The `(ell, f)` pairs this data was built from.
    pub fn ramification(&self) -> Vec<RamifiedPrime> {
        self.ramified_places
            .iter()
            .map(|v| RamifiedPrime { prime: v.residue_prime, residue_degree: v.residue_degree })
            .collect()
    }

    fn check(&self) -> Result<(), SettingError> {
        self.field.check()?;
        if self.m == 0 {
            return Err(SettingError::ZeroRank);
        }
        for (i, v) in self.ramified_places.iter().enumerate() {
            if !is_prime(v.residue_prime) {
                return Err(SettingError::NotPrime(v.residue_prime));
            }
            let candidates = split_prime(&self.field, v.residue_prime);
            if !candidates.contains(v) {
                return Err(SettingError::ResidueDegreeInconsistent {
                    prime: v.residue_prime,
                    given: v.residue_degree,
                    expected: candidates.iter().map(|w| w.residue_degree).collect(),
                });
            }
            if self.ramified_places[..i].contains(v) {
                return Err(SettingError::DuplicatePlace {
                    prime: v.residue_prime,
                    residue_degree: v.residue_degree,
                });
            }
        }
        if self.ramified_places.len() % 2 == 1 {
            return Err(SettingError::OddRamificationCount(self.ramified_places.len()));
        }
        Ok(())
    }
}

/// A validated tuple `(F, Delta_B, m, N, p)` with the derived discriminant
/// `Delta'` split into its part over `p` and its part away from `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShimuraSetting {
    pub quaternion: QuaternionData,
    pub level: u64,
    pub p: u64,
    pub places_over_p: Vec<Place>,
    /// Places over `p` with odd residue degree.
    pub delta_prime_at_p: Vec<Place>,
    /// The ramified places of `B`, none of which lies over `p`.
    pub delta_prime_away: Vec<Place>,
}

impl ShimuraSetting {
    pub fn field(&self) -> &FieldSpec {
        &self.quaternion.field
    }

    pub fn degree(&self) -> usize {
        self.quaternion.field.degree()
    }

    pub fn m(&self) -> u32 {
        self.quaternion.m
    }

    /// Places over `p` outside `Delta'` (even residue degree).
    pub fn split_at_p(&self) -> impl Iterator<Item = &Place> {
        self.places_over_p.iter().filter(|v| !self.delta_prime_at_p.contains(v))
    }

    /// Every finite place of `Delta'`, over `p` first.
    pub fn delta_prime(&self) -> impl Iterator<Item = &Place> {
        self.delta_prime_at_p.iter().chain(self.delta_prime_away.iter())
    }

    pub fn revalidate(&self) -> Result<ShimuraSetting, SettingError> {
        validate_setting(self.quaternion.clone(), self.level, self.p)
    }
}

pub fn validate_setting(quaternion: QuaternionData, level: u64, p: u64) -> Result<ShimuraSetting, SettingError> {
    quaternion.check()?;
    if !is_prime(p) {
        return Err(SettingError::NotPrime(p));
    }
    if level < 3 {
        return Err(SettingError::LevelTooSmall(level));
    }
    if level % p == 0 {
        return Err(SettingError::PDividesLevel { p, level });
    }
    let field = quaternion.field;
    if field.discriminant() % p == 0 {
        return Err(SettingError::PRamifiedInField(p));
    }
    if quaternion.ramified_places.iter().any(|v| v.residue_prime == p) {
        return Err(SettingError::PInRamification(p));
    }
    let mut bad = field.discriminant();
    for v in &quaternion.ramified_places {
        bad = num_integer::lcm(bad, v.residue_prime);
    }
    let common = num_integer::gcd(level, bad);
    if common > 1 {
        return Err(SettingError::LevelNotCoprime { level, common });
    }

    let places_over_p = split_prime(&field, p);
    let delta_prime_at_p = places_over_p.iter().filter(|v| v.residue_degree % 2 == 1).copied().collect();
    let delta_prime_away = quaternion.ramified_places.clone();
    Ok(ShimuraSetting { quaternion, level, p, places_over_p, delta_prime_at_p, delta_prime_away })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd(field: FieldSpec, ram: &[(u64, u32)], m: u32) -> Result<QuaternionData, SettingError> {
        let ram: Vec<RamifiedPrime> =
            ram.iter().map(|&(prime, residue_degree)| RamifiedPrime { prime, residue_degree }).collect();
        QuaternionData::new(field, &ram, m)
    }

    const Q5: FieldSpec = FieldSpec::RealQuadratic { disc: 5 };

    #[test]
    fn split_prime_examples() {
        let v = split_prime(&FieldSpec::Rational, 7);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].residue_degree, v[0].q()), (1, 7));

        let v = split_prime(&Q5, 2);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].residue_degree, v[0].q()), (2, 4));

        let v = split_prime(&Q5, 11);
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|w| w.residue_degree == 1 && w.q() == 11));

        let v = split_prime(&Q5, 5);
        assert_eq!(v.len(), 1);
        assert!(v[0].ramified_in_f);
    }

    #[test]
    fn splitting_degree_sum_and_kronecker_consistency() {
        for field in [FieldSpec::Rational, Q5, FieldSpec::RealQuadratic { disc: 8 }, FieldSpec::RealQuadratic { disc: 13 }] {
            for ell in (2..200).filter(|&n| is_prime(n)) {
                let places = split_prime(&field, ell);
                let total: u32 = places.iter().map(|v| if v.ramified_in_f { 2 } else { 1 } * v.residue_degree).sum();
                assert_eq!(total as usize, field.degree());
                if let FieldSpec::RealQuadratic { disc } = field {
                    let chi = crate::arith::kronecker(disc as i64, ell as i64);
                    match chi {
                        1 => assert_eq!(places.len(), 2),
                        -1 => assert_eq!(places[0].residue_degree, 2),
                        _ => assert!(places[0].ramified_in_f),
                    }
                }
            }
        }
    }

    #[test]
    fn validate_examples() {
        let s = validate_setting(qd(FieldSpec::Rational, &[], 2).unwrap(), 3, 5).unwrap();
        assert_eq!(s.places_over_p.len(), 1);
        assert_eq!(s.delta_prime_at_p, s.places_over_p);

        let s = validate_setting(qd(Q5, &[], 1).unwrap(), 3, 2).unwrap();
        assert_eq!(s.places_over_p.len(), 1);
        assert_eq!(s.places_over_p[0].residue_degree, 2);
        assert!(s.delta_prime_at_p.is_empty());

        let e = validate_setting(qd(FieldSpec::Rational, &[], 1).unwrap(), 2, 5).unwrap_err();
        assert_eq!(e, SettingError::LevelTooSmall(2));
        assert!(e.to_string().contains("level must be >= 3"));
    }

    #[test]
    fn each_violation_has_its_own_error() {
        let q = || qd(FieldSpec::Rational, &[], 1).unwrap();
        assert_eq!(validate_setting(q(), 6, 3), Err(SettingError::PDividesLevel { p: 3, level: 6 }));
        assert_eq!(validate_setting(q(), 3, 4), Err(SettingError::NotPrime(4)));
        assert_eq!(validate_setting(qd(Q5, &[], 1).unwrap(), 3, 5), Err(SettingError::PRamifiedInField(5)));
        let ram = qd(FieldSpec::Rational, &[(2, 1), (3, 1)], 1).unwrap();
        assert_eq!(validate_setting(ram.clone(), 5, 3), Err(SettingError::PInRamification(3)));
        assert_eq!(
            validate_setting(ram, 9, 5),
            Err(SettingError::LevelNotCoprime { level: 9, common: 3 })
        );
        assert_eq!(
            validate_setting(qd(Q5, &[], 1).unwrap(), 10, 3),
            Err(SettingError::LevelNotCoprime { level: 10, common: 5 })
        );
        assert_eq!(qd(FieldSpec::Rational, &[(2, 1)], 1), Err(SettingError::OddRamificationCount(1)));
        assert!(matches!(qd(Q5, &[(2, 1), (3, 2)], 1), Err(SettingError::ResidueDegreeInconsistent { prime: 2, .. })));
        assert_eq!(
            qd(FieldSpec::Rational, &[(7, 1), (7, 1)], 1),
            Err(SettingError::DuplicatePlace { prime: 7, residue_degree: 1 })
        );
        assert_eq!(qd(FieldSpec::Rational, &[], 0), Err(SettingError::ZeroRank));
        assert!(matches!(
            qd(FieldSpec::RealQuadratic { disc: 20 }, &[], 1),
            Err(SettingError::Field(ArithError::NotFundamental(20)))
        ));
    }

    #[test]
    fn split_prime_ramification_uses_both_places() {
        let q = qd(Q5, &[(11, 1), (11, 1)], 1).unwrap();
        assert_eq!(q.ramified_places[0].index, 0);
        assert_eq!(q.ramified_places[1].index, 1);
        assert_eq!(qd(Q5, &[(11, 1), (11, 1), (19, 1), (19, 1), (11, 1), (2, 2)], 1).unwrap_err(),
            SettingError::DuplicatePlace { prime: 11, residue_degree: 1 });
    }

    #[test]
    fn revalidation_is_idempotent() {
        for (field, ram, m, n, p) in [
            (FieldSpec::Rational, vec![], 1, 3, 5),
            (FieldSpec::Rational, vec![(7, 1), (11, 1)], 2, 4, 3),
            (Q5, vec![(11, 1), (11, 1)], 1, 3, 2),
            (Q5, vec![(2, 2), (7, 2)], 2, 3, 19),
        ] {
            let s = validate_setting(qd(field, &ram, m).unwrap(), n, p).unwrap();
            assert_eq!(s.revalidate().unwrap(), s);
            for v in &s.delta_prime_at_p {
                assert_eq!(v.residue_degree % 2, 1);
            }
            for v in s.split_at_p() {
                assert_eq!(v.residue_degree % 2, 0);
            }
        }
    }
}
