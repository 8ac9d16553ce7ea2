//! Dense bit vectors and incremental Gaussian elimination over F₂.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

// Untagged callers pass empty tags.
fn xor_tag(tag: &mut BitVec, row_tag: &BitVec) {
    if !tag.is_empty() {
        tag.xor_assign(row_tag);
    }
}

/// A row-echelon basis of a subspace of F₂ⁿ, keyed by pivot (lowest set bit).
///
/// Each stored row may carry a companion vector recording which inputs were
/// combined to produce it, which is how kernels are extracted.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Option<(BitVec, BitVec)>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: vec![None; dim], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis, applying the same row operations to
    /// `tag`. Returns the residual.
    pub fn reduce_tagged(&self, mut v: BitVec, mut tag: BitVec) -> (BitVec, BitVec) {
        while let Some(p) = v.lowest_set() {
            match &self.rows[p] {
                Some((row, row_tag)) => {
                    v.xor_assign(row);
                    xor_tag(&mut tag, row_tag);
                }
                None => break,
            }
        }
        // Finish reducing above the leading pivot so the residual is canonical.
        let mut i = v.lowest_set().map_or(self.dim, |p| p + 1);
        while i < self.dim {
            if v.get(i) {
                if let Some((row, row_tag)) = &self.rows[i] {
                    v.xor_assign(row);
                    xor_tag(&mut tag, row_tag);
                }
            }
            i += 1;
        }
        (v, tag)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let (r, _) = self.reduce_tagged(v.clone(), BitVec::zeros(0));
        r.is_zero()
    }

    /// Inserts `v` with companion `tag`. Returns `None` if `v` was independent,
    /// otherwise the reduced companion of the dependency (a combination of
    /// earlier tags plus `tag` whose vector sums to zero).
    pub fn insert_tagged(&mut self, v: BitVec, tag: BitVec) -> Option<BitVec> {
        let (r, t) = self.reduce_tagged(v, tag);
        match r.lowest_set() {
            None => Some(t),
            Some(p) => {
                self.rows[p] = Some((r, t));
                self.rank += 1;
                None
            }
        }
    }

    pub fn insert(&mut self, v: BitVec) -> bool {
        self.insert_tagged(v, BitVec::zeros(0)).is_none()
    }
}

/// A linear map F₂ᵐ → F₂ⁿ stored by columns.
#[derive(Clone, Debug)]
pub struct Gf2Map {
    pub rows: usize,
    pub columns: Vec<BitVec>,
}

impl Gf2Map {
    pub fn new(rows: usize, columns: Vec<BitVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.len() == rows));
        Gf2Map { rows, columns }
    }

    pub fn domain_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for i in v.ones() {
            out.xor_assign(&self.columns[i]);
        }
        out
    }

    /// A basis of the image.
    pub fn image_basis(&self) -> Vec<BitVec> {
        let mut basis = EchelonBasis::new(self.rows);
        self.columns.iter().filter(|c| basis.insert((*c).clone())).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.image_basis().len()
    }

    /// A basis of the kernel.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let m = self.domain_dim();
        let mut basis = EchelonBasis::new(self.rows);
        let mut kernel = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            if let Some(k) = basis.insert_tagged(c.clone(), BitVec::unit(m, i)) {
                kernel.push(k);
            }
        }
        kernel
    }
}
