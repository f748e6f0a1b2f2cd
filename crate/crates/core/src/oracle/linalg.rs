//! Small dense linear algebra over a [`SmallField`].

use super::field::SmallField;

/// Solution set `particular + span(basis)` of a linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSpace {
    pub particular: Vec<u8>,
    pub basis: Vec<Vec<u8>>,
}

impl AffineSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Calls `visit` on every point of the space.
    pub fn for_each(&self, field: &SmallField, mut visit: impl FnMut(&[u8])) {
        let q = field.size();
        let k = self.basis.len();
        let mut coeffs = vec![0usize; k];
        let mut point = self.particular.clone();
        loop {
            point.copy_from_slice(&self.particular);
            for (c, b) in coeffs.iter().zip(&self.basis) {
                if *c != 0 {
                    for (x, &bi) in point.iter_mut().zip(b) {
                        *x = field.add(*x, field.mul(*c as u8, bi));
                    }
                }
            }
            visit(&point);
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}

/// Solves `rows * x = rhs` for `x` of length `n`. `None` if inconsistent.
pub fn solve(field: &SmallField, rows: &[Vec<u8>], rhs: &[u8], n: usize) -> Option<AffineSpace> {
    let mut aug: Vec<Vec<u8>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = r.clone();
            row.push(b);
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next_row = 0;
    for col in 0..n {
        let Some(found) = (next_row..aug.len()).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(next_row, found);
        let scale = field.inv(aug[next_row][col]).expect("nonzero pivot");
        for x in aug[next_row].iter_mut() {
            *x = field.mul(*x, scale);
        }
        let pivot_row = aug[next_row].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != next_row && row[col] != 0 {
                let factor = row[col];
                for (x, &px) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, px));
                }
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    if aug[next_row..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut particular = vec![0u8; n];
    for (r, &col) in pivots.iter().enumerate() {
        particular[col] = aug[r][n];
    }
    let basis = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u8; n];
            v[free] = 1;
            for (r, &col) in pivots.iter().enumerate() {
                v[col] = field.neg(aug[r][free]);
            }
            v
        })
        .collect();
    Some(AffineSpace { particular, basis })
}

/// Rank of a list of vectors.
pub fn rank(field: &SmallField, vectors: &[Vec<u8>]) -> usize {
    let Some(n) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<u8>> = vectors.to_vec();
    let mut r = 0;
    for col in 0..n {
        let Some(found) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, found);
        let scale = field.inv(m[r][col]).expect("nonzero pivot");
        let pivot: Vec<u8> = m[r].iter().map(|&x| field.mul(x, scale)).collect();
        for row in m.iter_mut().skip(r + 1) {
            let factor = row[col];
            if factor != 0 {
                for (x, &px) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, px));
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

/// Determinant of a square row-major matrix of side `n`.
pub fn determinant(field: &SmallField, entries: &[u8], n: usize) -> u8 {
    let mut m: Vec<Vec<u8>> = entries.chunks(n).map(<[u8]>::to_vec).collect();
    let mut det = 1u8;
    for col in 0..n {
        let Some(found) = (col..n).find(|&i| m[i][col] != 0) else {
            return 0;
        };
        if found != col {
            m.swap(col, found);
            det = field.neg(det);
        }
        det = field.mul(det, m[col][col]);
        let scale = field.inv(m[col][col]).expect("nonzero pivot");
        let pivot = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let factor = field.mul(row[col], scale);
            if factor != 0 {
                for (x, &px) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, px));
                }
            }
        }
    }
    det
}
