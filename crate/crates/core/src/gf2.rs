//! Bit-packed GF(2) vectors and small linear solvers.
//!
//! Every Pauli operator stores its X- and Z-support as a [`BitVec`]; the
//! symplectic form, row reductions and witness solves below all reduce to
//! word-wise AND/XOR plus popcount parity, which is what keeps the symbolic
//! side of the engine fast.

const WORD_BITS: usize = 64;

/// Fixed-length bit vector packed into `u64` words.
///
/// Unused high bits of the last word are kept at zero so that equality,
/// hashing and parity can work directly on the words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Parity of `popcount(self & other)`, i.e. the GF(2) inner product.
    pub fn and_parity(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// New vector with bit `i` of the result taken from bit `positions[i]`.
    pub fn gather(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (i, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(i, true);
            }
        }
        out
    }

    /// New vector of length `len` with bit `positions[i]` set from bit `i`.
    pub fn scatter(&self, len: usize, positions: &[usize]) -> BitVec {
        debug_assert_eq!(self.len, positions.len());
        let mut out = BitVec::zeros(len);
        for (i, &p) in positions.iter().enumerate() {
            if self.get(i) {
                out.set(p, true);
            }
        }
        out
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Solve the GF(2) system `rows[i] . v = rhs[i]` for one particular solution.
///
/// Returns `None` when the system is inconsistent.
pub fn solve_gf2(rows: &[BitVec], rhs: &[bool], num_vars: usize) -> Option<BitVec> {
    assert_eq!(rows.len(), rhs.len());
    let mut mat: Vec<BitVec> = rows.to_vec();
    let mut b: Vec<bool> = rhs.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_row = 0;
    for col in 0..num_vars {
        let Some(r) = (next_row..mat.len()).find(|&r| mat[r].get(col)) else {
            continue;
        };
        mat.swap(next_row, r);
        b.swap(next_row, r);
        for r2 in 0..mat.len() {
            if r2 != next_row && mat[r2].get(col) {
                let (head, tail) = if r2 < next_row {
                    let (a, c) = mat.split_at_mut(next_row);
                    (&mut a[r2], &c[0])
                } else {
                    let (a, c) = mat.split_at_mut(r2);
                    (&mut c[0], &a[next_row])
                };
                head.xor_with(tail);
                b[r2] ^= b[next_row];
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    // Zero rows must have zero rhs.
    if b[next_row..mat.len()].iter().any(|&x| x) {
        return None;
    }
    let mut solution = BitVec::zeros(num_vars);
    for &(r, c) in &pivots {
        if b[r] {
            solution.set(c, true);
        }
    }
    Some(solution)
}

/// Basis of the nullspace `{v : rows[i] . v = 0}`.
pub fn nullspace_gf2(rows: &[BitVec], num_vars: usize) -> Vec<BitVec> {
    let mut mat: Vec<BitVec> = rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0;
    for col in 0..num_vars {
        let Some(r) = (next_row..mat.len()).find(|&r| mat[r].get(col)) else {
            continue;
        };
        mat.swap(next_row, r);
        for r2 in 0..mat.len() {
            if r2 != next_row && mat[r2].get(col) {
                let (head, tail) = if r2 < next_row {
                    let (a, c) = mat.split_at_mut(next_row);
                    (&mut a[r2], &c[0])
                } else {
                    let (a, c) = mat.split_at_mut(r2);
                    (&mut c[0], &a[next_row])
                };
                head.xor_with(tail);
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..num_vars).filter(|c| !pivot_cols.contains(c)) {
        let mut v = BitVec::zeros(num_vars);
        v.set(free, true);
        for (row, &pc) in pivot_cols.iter().enumerate() {
            if mat[row].get(free) {
                v.set(pc, true);
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_and_xor() {
        let a = BitVec::from_bools(&[true, true, false, true]);
        let b = BitVec::from_bools(&[true, false, false, true]);
        assert!(!a.and_parity(&b)); // two overlaps
        let mut c = a.clone();
        c.xor_with(&b);
        assert_eq!(c, BitVec::from_bools(&[false, true, false, false]));
    }

    #[test]
    fn wide_vectors_mask_correctly() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
        let mut w = BitVec::zeros(130);
        w.set(129, true);
        assert!(v.and_parity(&w));
    }

    #[test]
    fn solve_simple_system() {
        // v0 + v1 = 1, v1 = 1  =>  v = (0, 1)
        let rows = vec![
            BitVec::from_bools(&[true, true]),
            BitVec::from_bools(&[false, true]),
        ];
        let sol = solve_gf2(&rows, &[true, true], 2).unwrap();
        assert_eq!(sol, BitVec::from_bools(&[false, true]));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let rows = vec![
            BitVec::from_bools(&[true, false]),
            BitVec::from_bools(&[true, false]),
        ];
        assert!(solve_gf2(&rows, &[true, false], 2).is_none());
    }

    #[test]
    fn nullspace_of_single_constraint() {
        // v0 + v1 = 0 over 3 vars: basis {(1,1,0), (0,0,1)}
        let rows = vec![BitVec::from_bools(&[true, true, false])];
        let basis = nullspace_gf2(&rows, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(!rows[0].and_parity(v));
        }
    }
}
