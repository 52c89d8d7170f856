//! Dense bit rows and Gaussian elimination over the two-element field.

/// A row vector over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut row = BitRow::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                row.set(i, true);
            }
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Outcome of eliminating an augmented system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    Inconsistent,
    Consistent { rank: usize },
}

/// An augmented linear system `A x = b` over GF(2).
#[derive(Clone, Debug, Default)]
pub struct Gf2System {
    cols: usize,
    rows: Vec<(BitRow, bool)>,
}

impl Gf2System {
    pub fn new(cols: usize) -> Self {
        Gf2System { cols, rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push(&mut self, row: BitRow, rhs: bool) {
        assert_eq!(row.len(), self.cols, "row width must match system width");
        self.rows.push((row, rhs));
    }

    /// Reduces the system in place to row echelon form.
    pub fn eliminate(&mut self) -> Elimination {
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows.len()).find(|&r| self.rows[r].0.get(col)) else {
                continue;
            };
            self.rows.swap(rank, p);
            let (pivot, prhs) = self.rows[rank].clone();
            for r in 0..self.rows.len() {
                if r != rank && self.rows[r].0.get(col) {
                    self.rows[r].0.xor_assign(&pivot);
                    self.rows[r].1 ^= prhs;
                }
            }
            rank += 1;
        }
        if self.rows[rank..].iter().any(|(_, rhs)| *rhs) {
            Elimination::Inconsistent
        } else {
            self.rows.truncate(rank);
            Elimination::Consistent { rank }
        }
    }
}

/// Reduced row echelon basis of the span of `rows` (all of width `cols`).
pub fn row_basis(rows: &[BitRow], cols: usize) -> Vec<BitRow> {
    let mut sys = Gf2System::new(cols);
    for r in rows {
        sys.push(r.clone(), false);
    }
    sys.eliminate();
    sys.rows.into_iter().map(|(r, _)| r).collect()
}

/// Basis of `{ h : h . d = 0 for every d in rows }`.
pub fn orthogonal_complement(rows: &[BitRow], cols: usize) -> Vec<BitRow> {
    let basis = row_basis(rows, cols);
    let pivots: Vec<usize> = basis.iter().map(|r| r.first_one().expect("nonzero row")).collect();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut h = BitRow::zeros(cols);
        h.set(free, true);
        for (row, &p) in basis.iter().zip(&pivots) {
            if row.get(free) {
                h.set(p, true);
            }
        }
        out.push(h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inconsistent_system() {
        let mut s = Gf2System::new(2);
        s.push(BitRow::from_bits(&[true, true]), false);
        s.push(BitRow::from_bits(&[true, true]), true);
        assert_eq!(s.eliminate(), Elimination::Inconsistent);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let mut s = Gf2System::new(3);
        s.push(BitRow::from_bits(&[true, true, false]), true);
        s.push(BitRow::from_bits(&[false, true, true]), false);
        s.push(BitRow::from_bits(&[true, false, true]), true);
        assert_eq!(s.eliminate(), Elimination::Consistent { rank: 2 });
    }

    #[test]
    fn complement_is_orthogonal() {
        let rows = vec![
            BitRow::from_bits(&[true, true, false, true]),
            BitRow::from_bits(&[false, true, true, true]),
        ];
        let comp = orthogonal_complement(&rows, 4);
        assert_eq!(comp.len(), 2);
        for h in &comp {
            for d in &rows {
                assert!(!h.dot(d));
            }
        }
    }

    #[test]
    fn wide_rows() {
        let mut r = BitRow::zeros(130);
        r.set(129, true);
        assert_eq!(r.first_one(), Some(129));
        r.flip(129);
        assert!(r.is_zero());
    }
}
