//! Orders of finite classical groups, the level group `|G(Z/NZ)|`, and the
//! two invariants of the finite group `I(p)` the bound needs: the number of
//! its simple modules in characteristic `p` and the order of a `p`-Sylow.

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::numberfield::{factorize, split_prime, ShimuraSetting};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn triangular(m: u32) -> u32 {
    m * (m.saturating_sub(1)) / 2
}

/// `|GL_m(F_q)| = q^{m(m-1)/2} prod_{j=1}^m (q^j - 1)`.
pub fn gl_order(m: u32, q: u64) -> BigUint {
    let q = big(q);
    let mut n = Pow::pow(&q, triangular(m));
    for j in 1..=m {
        n *= Pow::pow(&q, j) - 1u32;
    }
    n
}

/// Order of `U_m(F_q) = {A in GL_m(F_{q^2}) : A^t conj(A) = 1}`:
/// `q^{m(m-1)/2} prod_{j=1}^m (q^j - (-1)^j)`.
pub fn unitary_order(m: u32, q: u64) -> BigUint {
    let q = big(q);
    let mut n = Pow::pow(&q, triangular(m));
    for j in 1..=m {
        let qj = Pow::pow(&q, j);
        n *= if j % 2 == 0 { qj - 1u32 } else { qj + 1u32 };
    }
    n
}

/// `|Sp_{2m}(F_q)| = q^{m^2} prod_{j=1}^m (q^{2j} - 1)`.
pub fn sp_order(m: u32, q: u64) -> BigUint {
    let q = big(q);
    let mut n = Pow::pow(&q, m * m);
    for j in 1..=m {
        n *= Pow::pow(&q, 2 * j) - 1u32;
    }
    n
}

fn euler_phi_prime_power(ell: u64, a: u32) -> BigUint {
    Pow::pow(&big(ell), a - 1) * (ell - 1)
}

/// `|G(Z/NZ)|` for the similitude group of an `O_B`-lattice of rank `m`.
///
/// At each `ell^a || N` this is `phi(ell^a)` for the similitude times, for
/// every place `w | ell` of `F`, `|Sp_{2m}(F_{q_w})|` lifted through the
/// `(a-1)(2m^2+m)`-dimensional smooth fibres.
pub fn level_group_order(setting: &ShimuraSetting) -> BigUint {
    let m = setting.m();
    let dim = 2 * m * m + m;
    let mut total = BigUint::one();
    for (ell, a) in factorize(setting.level) {
        total *= euler_phi_prime_power(ell, a);
        for w in split_prime(setting.field(), ell) {
            let q = w.q();
            total *= sp_order(m, q) * Pow::pow(&big(q), (a - 1) * dim);
        }
    }
    total
}

/// Structure constants of the Levi quotient `L_I` with `L_I(F_p) = I(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviData {
    pub semisimple_rank: u32,
    pub center_order: BigUint,
    pub sylow_exponent: u32,
}

impl LeviData {
    pub fn new(setting: &ShimuraSetting) -> Self {
        let m = setting.m();
        let semisimple_rank = setting.places_over_p.iter().map(|v| v.residue_degree * (m - 1)).sum();
        let mut center_order = big(setting.p - 1);
        for v in setting.split_at_p() {
            center_order *= v.q() - 1;
        }
        for v in &setting.delta_prime_at_p {
            center_order *= v.q() + 1;
        }
        let sylow_exponent = setting.degree() as u32 * triangular(m);
        LeviData { semisimple_rank, center_order, sylow_exponent }
    }
}

/// Number of simple `k[I(p)]`-modules, i.e. of `p`-regular classes of `I(p)`:
/// `p^{d(m-1)} (p-1) prod_{v not in Delta'} (q_v - 1) prod_{v in Delta'} (q_v + 1)`.
pub fn irr_count(setting: &ShimuraSetting) -> BigUint {
    let levi = LeviData::new(setting);
    Pow::pow(&big(setting.p), levi.semisimple_rank) * levi.center_order
}

/// `p^{dm(m-1)/2}`, the order of a `p`-Sylow subgroup of `I(p)`.
pub fn dim_bound(setting: &ShimuraSetting) -> BigUint {
    Pow::pow(&big(setting.p), LeviData::new(setting).sylow_exponent)
}

/// `|I(p)| = (p-1) prod_{v not in Delta'} |GL_m(F_{q_v})| prod_{v in Delta'} |U_m(F_{q_v})|`.
pub fn levi_order(setting: &ShimuraSetting) -> BigUint {
    let m = setting.m();
    let mut n = big(setting.p - 1);
    for v in setting.split_at_p() {
        n *= gl_order(m, v.q());
    }
    for v in &setting.delta_prime_at_p {
        n *= unitary_order(m, v.q());
    }
    n
}
