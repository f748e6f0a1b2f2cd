//! Finite fields with at most 64 elements, as exhaustive tables.
//!
//! Element `i` stands for the residue of `sum_k c_k x^k` with
//! `i = sum_k c_k p^k`, so `0` and `1` are the additive and multiplicative
//! identities and `0..p` is the prime field.

use super::OracleError;

pub const MAX_FIELD_SIZE: usize = 64;
pub const MAX_CHARACTERISTIC: u8 = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallField {
    characteristic: u8,
    degree: u8,
    size: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// `x -> x^{p^{e/2}}` for even degree `e`.
    frobenius: Option<Vec<u8>>,
}

fn digits(mut i: usize, p: usize, e: usize) -> Vec<usize> {
    let mut d = vec![0; e];
    for c in d.iter_mut() {
        *c = i % p;
        i /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two polynomials of degree `< e`, reduced modulo the monic
/// `modulus` (low coefficients first, leading 1 omitted).
fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let e = modulus.len();
    let mut prod = vec![0usize; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c != 0 {
            prod[k] = 0;
            // x^k = x^{k-e} * x^e = -x^{k-e} * sum modulus_i x^i
            for (i, &mc) in modulus.iter().enumerate() {
                prod[k - e + i] = (prod[k - e + i] + (p - c) * mc) % p;
            }
        }
    }
    prod.truncate(e);
    prod
}

/// Whether the monic polynomial with low coefficients `modulus` has no
/// factor of degree `1..=e/2`, by trial division by every monic polynomial.
fn is_irreducible(modulus: &[usize], p: usize) -> bool {
    let e = modulus.len();
    for k in 1..=e / 2 {
        for low in 0..p.pow(k as u32) {
            let divisor = digits(low, p, k);
            // remainder of x^e + sum modulus_i x^i modulo x^k + sum divisor_i x^i
            let mut rem: Vec<usize> = modulus.to_vec();
            rem.push(1);
            for top in (k..=e).rev() {
                let c = rem[top];
                if c != 0 {
                    rem[top] = 0;
                    for (i, &dc) in divisor.iter().enumerate() {
                        rem[top - k + i] = (rem[top - k + i] + (p - c) * dc) % p;
                    }
                }
            }
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl SmallField {
    /// `F_q` for a prime power `q <= 64` with characteristic at most 7.
    pub fn of_order(q: u64) -> Result<Self, OracleError> {
        let (p, e) = prime_power(q).ok_or(OracleError::UnsupportedField(q))?;
        if p > MAX_CHARACTERISTIC as u64 || q as usize > MAX_FIELD_SIZE {
            return Err(OracleError::UnsupportedField(q));
        }
        Ok(Self::build(p as usize, e as usize))
    }

    fn build(p: usize, e: usize) -> Self {
        let size = p.pow(e as u32);
        let modulus = (0..p.pow(e as u32))
            .map(|low| digits(low, p, e))
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        let mut add = vec![0u8; size * size];
        let mut mul = vec![0u8; size * size];
        for a in 0..size {
            let da = digits(a, p, e);
            for b in 0..size {
                let db = digits(b, p, e);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * size + b] = undigits(&sum, p) as u8;
                mul[a * size + b] = undigits(&poly_mul_mod(&da, &db, &modulus, p), p) as u8;
            }
        }
        let neg = (0..size).map(|a| (0..size).find(|&b| add[a * size + b] == 0).unwrap() as u8).collect();
        let inv = (0..size)
            .map(|a| if a == 0 { 0 } else { (1..size).find(|&b| mul[a * size + b] == 1).unwrap() as u8 })
            .collect();
        let mut field = SmallField {
            characteristic: p as u8,
            degree: e as u8,
            size,
            add,
            mul,
            neg,
            inv,
            frobenius: None,
        };
        if e % 2 == 0 {
            let exponent = p.pow(e as u32 / 2);
            field.frobenius = Some((0..size).map(|a| field.pow(a as u8, exponent)).collect());
        }
        field
    }

    pub fn characteristic(&self) -> u8 {
        self.characteristic
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u8, mut n: usize) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The involution `x -> conj(x)` of `F_{q^2}` over `F_q`, when the degree is even.
    pub fn conj(&self, a: u8) -> u8 {
        match &self.frobenius {
            Some(table) => table[a as usize],
            None => panic!("F_{} has odd degree over its prime field; no involution", self.size),
        }
    }

    pub fn has_involution(&self) -> bool {
        self.frobenius.is_some()
    }

    /// Exhaustively checks the field axioms and the involution.
    pub fn self_test(&self) -> Result<(), String> {
        let n = self.size as u8;
        let all = || 0..n;
        for a in all() {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("negation fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv[a as usize]) != 1 {
                return Err(format!("inverse fails at {a}"));
            }
            for b in all() {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at {a},{b}"));
                }
                for c in all() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("additive associativity fails at {a},{b},{c}"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplicative associativity fails at {a},{b},{c}"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at {a},{b},{c}"));
                    }
                }
            }
        }
        if let Some(frob) = &self.frobenius {
            let sub = (self.characteristic as usize).pow(self.degree as u32 / 2);
            let mut fixed = 0;
            for a in all() {
                if frob[frob[a as usize] as usize] != a {
                    return Err(format!("involution is not of order 2 at {a}"));
                }
                if frob[a as usize] == a {
                    fixed += 1;
                }
                for b in all() {
                    if self.conj(self.add(a, b)) != self.add(self.conj(a), self.conj(b))
                        || self.conj(self.mul(a, b)) != self.mul(self.conj(a), self.conj(b))
                    {
                        return Err(format!("involution is not a field map at {a},{b}"));
                    }
                }
            }
            if fixed != sub {
                return Err(format!("involution fixes {fixed} elements, expected {sub}"));
            }
        }
        Ok(())
    }
}

/// `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = q;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_supported_fields_pass_self_test() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49] {
            let f = SmallField::of_order(q).unwrap();
            assert_eq!(f.size() as u64, q);
            f.self_test().unwrap_or_else(|e| panic!("F_{q}: {e}"));
            assert_eq!(f.has_involution(), f.degree() % 2 == 0);
        }
    }

    #[test]
    fn unsupported_orders() {
        assert_eq!(SmallField::of_order(6), Err(OracleError::UnsupportedField(6)));
        assert_eq!(SmallField::of_order(11), Err(OracleError::UnsupportedField(11)));
        assert_eq!(SmallField::of_order(81), Err(OracleError::UnsupportedField(81)));
        assert_eq!(SmallField::of_order(1), Err(OracleError::UnsupportedField(1)));
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in [4u64, 9, 16, 25, 49] {
            let f = SmallField::of_order(q).unwrap();
            let has_generator = (1..q as u8).any(|g| (1..q as usize - 1).all(|k| f.pow(g, k) != 1));
            assert!(has_generator, "F_{q}");
        }
    }

    #[test]
    fn prime_subfield_is_the_first_p_indices() {
        let f = SmallField::of_order(49).unwrap();
        for a in 0..7u8 {
            for b in 0..7u8 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
            }
            assert_eq!(f.conj(a), a);
        }
    }
}
