//! Compensated accumulation and a deterministic pairwise reduction.

use crate::complex::C64;
use crate::dd::{two_sum, Dd};

/// Neumaier's variant of Kahan summation: the running compensation also
/// captures the error when the addend is larger than the partial sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// The sum carried as a double-double, keeping the compensation word.
    pub fn value_dd(&self) -> Dd {
        Dd::new(self.sum, self.comp)
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexCompensatedSum {
    pub re: CompensatedSum,
    pub im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexCompensatedSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

/// Block length of the leaves in [`pairwise_sum`].
pub const PAIRWISE_BLOCK: usize = 256;

/// Sum `terms` by compensated summation within fixed-size blocks and a
/// balanced binary tree across blocks. The association order depends only
/// on `terms.len()`, so any evaluation order of the blocks (serial or
/// parallel) gives bit-identical results.
pub fn pairwise_sum(terms: &[C64]) -> C64 {
    fn leaf(block: &[C64]) -> ComplexCompensatedSum {
        let mut s = ComplexCompensatedSum::new();
        for &z in block {
            s.add(z);
        }
        s
    }
    fn tree(leaves: &[ComplexCompensatedSum]) -> ComplexCompensatedSum {
        match leaves.len() {
            0 => ComplexCompensatedSum::new(),
            1 => leaves[0],
            n => {
                let mut a = tree(&leaves[..n / 2]);
                a.merge(&tree(&leaves[n / 2..]));
                a
            }
        }
    }
    let leaves: Vec<_> = terms.chunks(PAIRWISE_BLOCK).map(leaf).collect();
    tree(&leaves).value()
}
