//! Explicit finite matrix groups: element lists, products, element orders
//! and conjugacy classes.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::enumerate::GroupDescriptor;
use super::field::SmallField;

/// Coefficient ring of one diagonal block.
#[derive(Debug, Clone)]
pub enum Coefficients {
    Field(Arc<SmallField>),
    /// `Z/nZ`
    Integers(u8),
}

impl Coefficients {
    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        match self {
            Coefficients::Field(f) => f.add(a, b),
            Coefficients::Integers(n) => ((a as u16 + b as u16) % *n as u16) as u8,
        }
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        match self {
            Coefficients::Field(f) => f.mul(a, b),
            Coefficients::Integers(n) => ((a as u16 * b as u16) % *n as u16) as u8,
        }
    }
}

/// A square block of side `dim`; a group element is the concatenation of
/// its blocks, each stored row-major.
#[derive(Debug, Clone)]
pub struct Block {
    pub coefficients: Coefficients,
    pub dim: usize,
}

impl Block {
    fn len(&self) -> usize {
        self.dim * self.dim
    }

    fn multiply_into(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u8;
                for k in 0..n {
                    acc = self.coefficients.add(acc, self.coefficients.mul(a[i * n + k], b[k * n + j]));
                }
                out[i * n + j] = acc;
            }
        }
    }
}

pub type Element = Box<[u8]>;

/// A finite group of block-diagonal matrices, given by its full element list.
#[derive(Clone)]
pub struct FqMatrixGroup {
    descriptor: GroupDescriptor,
    blocks: Vec<Block>,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl fmt::Debug for FqMatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqMatrixGroup")
            .field("descriptor", &self.descriptor)
            .field("order", &self.elements.len())
            .finish()
    }
}

impl FqMatrixGroup {
    /// Elements are sorted so that indices do not depend on discovery order.
    pub fn new(descriptor: GroupDescriptor, blocks: Vec<Block>, mut elements: Vec<Element>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let width: usize = blocks.iter().map(Block::len).sum();
        assert!(elements.iter().all(|e| e.len() == width), "element width does not match blocks");
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        FqMatrixGroup { descriptor, blocks, elements, index }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn index_of(&self, g: &[u8]) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn identity(&self) -> Element {
        let mut out = Vec::new();
        for b in &self.blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    out.push(u8::from(i == j));
                }
            }
        }
        out.into_boxed_slice()
    }

    pub fn multiply(&self, a: &[u8], b: &[u8]) -> Element {
        let mut out = vec![0u8; a.len()];
        let mut offset = 0;
        for block in &self.blocks {
            let len = block.len();
            let r = offset..offset + len;
            block.multiply_into(&a[r.clone()], &b[r.clone()], &mut out[r]);
            offset += len;
        }
        out.into_boxed_slice()
    }

    fn product_index(&self, i: usize, j: usize) -> usize {
        let prod = self.multiply(&self.elements[i], &self.elements[j]);
        self.index_of(&prod).expect("element list is not closed under multiplication")
    }

    /// Order of the element with index `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let id = self.index_of(&self.identity()).expect("identity missing");
        let mut k = 1;
        let mut x = i;
        while x != id {
            x = self.product_index(x, i);
            k += 1;
        }
        k
    }

    fn inverse_index(&self, i: usize) -> usize {
        let ord = self.element_order(i);
        let mut x = self.index_of(&self.identity()).expect("identity missing");
        for _ in 0..ord - 1 {
            x = self.product_index(x, i);
        }
        x
    }

    /// A generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let n = self.order();
        let id = self.index_of(&self.identity()).expect("identity missing");
        let mut gens: Vec<usize> = Vec::new();
        let mut in_subgroup = vec![false; n];
        in_subgroup[id] = true;
        let mut covered = 1;
        for candidate in 0..n {
            if covered == n {
                break;
            }
            if in_subgroup[candidate] {
                continue;
            }
            gens.push(candidate);
            let mut queue: VecDeque<usize> = (0..n).filter(|&x| in_subgroup[x]).collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.product_index(x, g);
                    if !in_subgroup[y] {
                        in_subgroup[y] = true;
                        covered += 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// Conjugacy classes as sorted index lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let gens: Vec<(usize, usize)> =
            self.generators().into_iter().map(|g| (g, self.inverse_index(g))).collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &(g, g_inv) in &gens {
                    let y = self.product_index(self.product_index(g_inv, x), g);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Number of conjugacy classes of elements of order prime to `p`.
    pub fn p_regular_class_count(&self, p: u64) -> usize {
        self.conjugacy_classes()
            .iter()
            .filter(|class| self.element_order(class[0]) as u64 % p != 0)
            .count()
    }

    /// The largest power of `p` dividing the group order.
    pub fn sylow_p_order(&self, p: u64) -> u64 {
        p_part(self.order() as u64, p)
    }

    /// Exhaustively checks identity, closure and inverses. Quadratic in the order.
    pub fn is_group(&self) -> bool {
        let Some(_) = self.index_of(&self.identity()) else {
            return false;
        };
        let n = self.order();
        let id = self.identity();
        for a in &self.elements {
            let mut has_inverse = false;
            for b in &self.elements {
                let ab = self.multiply(a, b);
                if self.index_of(&ab).is_none() {
                    return false;
                }
                has_inverse |= ab == id;
            }
            if !has_inverse {
                return false;
            }
        }
        n > 0
    }
}

/// The largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n > 0 && n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}
