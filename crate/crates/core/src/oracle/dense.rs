//! Dense complex matrices sized for brute-force checks on a handful of
//! qubits. Nothing here is clever; the point is to be obviously correct.

use crate::clifford::Gate;
use num_complex::Complex64;

pub type C64 = Complex64;

const FRAC: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// log2 of the dimension for square qubit-system matrices.
    pub fn num_qubits(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> DenseMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.set(
                            r1 * other.rows + r2,
                            c1 * other.cols + c2,
                            a * other.get(r2, c2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_distance(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in r..self.cols {
                if (self.get(r, c) - self.get(c, r).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Equality up to a global phase, for comparing unitaries.
    pub fn equal_up_to_phase(&self, other: &DenseMatrix, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        // find the largest entry of self and align phases there
        let mut best = 0usize;
        let mut best_abs = 0.0;
        for (i, a) in self.data.iter().enumerate() {
            if a.norm() > best_abs {
                best_abs = a.norm();
                best = i;
            }
        }
        if best_abs < tol {
            return other.max_abs() < tol;
        }
        let b = other.data[best];
        if b.norm() < tol {
            return false;
        }
        let phase = self.data[best] / b;
        self.frobenius_distance(&other.scale(phase)) <= tol * (self.rows as f64)
    }

    /// Partial trace keeping the listed qubits (in the given order);
    /// qubit 0 is the most significant index bit.
    pub fn partial_trace(&self, keep: &[usize]) -> DenseMatrix {
        let n = self.num_qubits();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let kd = 1usize << keep.len();
        let td = 1usize << traced.len();
        let compose = |kept_bits: usize, traced_bits: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let bit = (kept_bits >> (keep.len() - 1 - pos)) & 1;
                idx |= bit << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let bit = (traced_bits >> (traced.len() - 1 - pos)) & 1;
                idx |= bit << (n - 1 - q);
            }
            idx
        };
        let mut out = DenseMatrix::zeros(kd, kd);
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..td {
                    acc += self.get(compose(i, t), compose(j, t));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Insert a fresh wire in state `m2` (a 1-qubit density or projector) at
    /// qubit position `pos`.
    pub fn insert_wire(&self, pos: usize, m2: &DenseMatrix) -> DenseMatrix {
        let n = self.num_qubits();
        assert!(pos <= n);
        let out_n = n + 1;
        let dim = 1usize << out_n;
        let split = |idx: usize| -> (usize, usize) {
            // bits above pos, bit at pos, bits below pos
            let bit = (idx >> (out_n - 1 - pos)) & 1;
            let high = idx >> (out_n - pos);
            let low = idx & ((1 << (out_n - 1 - pos)) - 1);
            ((high << (n - pos)) | low, bit)
        };
        let mut out = DenseMatrix::zeros(dim, dim);
        for i in 0..dim {
            let (si, bi) = split(i);
            for j in 0..dim {
                let (sj, bj) = split(j);
                out.set(i, j, self.get(si, sj) * m2.get(bi, bj));
            }
        }
        out
    }

    /// Cholesky-style positive-semidefiniteness test with tolerance.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let n = self.rows;
        let mut a = self.clone();
        for k in 0..n {
            let pivot = a.get(k, k).re;
            if pivot < -tol {
                return false;
            }
            if pivot <= tol {
                // the whole row/column must vanish for PSD
                for j in k + 1..n {
                    if a.get(k, j).norm() > 10.0 * tol {
                        return false;
                    }
                }
                continue;
            }
            for i in k + 1..n {
                let f = a.get(i, k) / pivot;
                for j in k + 1..n {
                    let v = a.get(i, j) - f * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        true
    }

    /// In-place left multiplication by a gate (`M <- G M`), O(rows x cols).
    /// The gate acts on the row index space; qubit 0 is the most significant
    /// bit.
    pub fn apply_gate_left(&mut self, g: Gate) {
        let n = self.rows.trailing_zeros() as usize;
        let dim = self.rows;
        let cols = self.cols;
        let bit = |q: usize| 1usize << (n - 1 - q);
        let i = C64::new(0.0, 1.0);
        match g {
            Gate::H(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b != 0 {
                        continue;
                    }
                    for c in 0..cols {
                        let r0 = self.get(j, c);
                        let r1 = self.get(j | b, c);
                        self.set(j, c, (r0 + r1) * FRAC);
                        self.set(j | b, c, (r0 - r1) * FRAC);
                    }
                }
            }
            Gate::S(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b != 0 {
                        for c in 0..cols {
                            let v = self.get(j, c);
                            self.set(j, c, v * i);
                        }
                    }
                }
            }
            Gate::X(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b == 0 {
                        for c in 0..cols {
                            let r0 = self.get(j, c);
                            let r1 = self.get(j | b, c);
                            self.set(j, c, r1);
                            self.set(j | b, c, r0);
                        }
                    }
                }
            }
            Gate::Y(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b == 0 {
                        for c in 0..cols {
                            let r0 = self.get(j, c);
                            let r1 = self.get(j | b, c);
                            self.set(j, c, -i * r1);
                            self.set(j | b, c, i * r0);
                        }
                    }
                }
            }
            Gate::Z(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b != 0 {
                        for c in 0..cols {
                            let v = self.get(j, c);
                            self.set(j, c, -v);
                        }
                    }
                }
            }
            Gate::Cz(a, bq) => {
                let (ba, bb) = (bit(a), bit(bq));
                for j in 0..dim {
                    if j & ba != 0 && j & bb != 0 {
                        for c in 0..cols {
                            let v = self.get(j, c);
                            self.set(j, c, -v);
                        }
                    }
                }
            }
            Gate::Cnot(cq, t) => {
                let (bc, bt) = (bit(cq), bit(t));
                for j in 0..dim {
                    if j & bc != 0 && j & bt == 0 {
                        for c in 0..cols {
                            let r0 = self.get(j, c);
                            let r1 = self.get(j | bt, c);
                            self.set(j, c, r1);
                            self.set(j | bt, c, r0);
                        }
                    }
                }
            }
        }
    }

    /// In-place right multiplication by the adjoint (`M <- M G†`), acting on
    /// the column index space.
    pub fn apply_gate_right_dagger(&mut self, g: Gate) {
        let n = self.cols.trailing_zeros() as usize;
        let dim = self.cols;
        let rows = self.rows;
        let bit = |q: usize| 1usize << (n - 1 - q);
        let i = C64::new(0.0, 1.0);
        match g {
            Gate::H(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b != 0 {
                        continue;
                    }
                    for r in 0..rows {
                        let c0 = self.get(r, j);
                        let c1 = self.get(r, j | b);
                        self.set(r, j, (c0 + c1) * FRAC);
                        self.set(r, j | b, (c0 - c1) * FRAC);
                    }
                }
            }
            Gate::S(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b != 0 {
                        for r in 0..rows {
                            let v = self.get(r, j);
                            self.set(r, j, v * (-i));
                        }
                    }
                }
            }
            Gate::X(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b == 0 {
                        for r in 0..rows {
                            let c0 = self.get(r, j);
                            let c1 = self.get(r, j | b);
                            self.set(r, j, c1);
                            self.set(r, j | b, c0);
                        }
                    }
                }
            }
            Gate::Y(q) => {
                // (M Y†)[., j0] = i * col(j1); [., j1] = -i * col(j0)
                let b = bit(q);
                for j in 0..dim {
                    if j & b == 0 {
                        for r in 0..rows {
                            let c0 = self.get(r, j);
                            let c1 = self.get(r, j | b);
                            self.set(r, j, i * c1);
                            self.set(r, j | b, -i * c0);
                        }
                    }
                }
            }
            Gate::Z(q) => {
                let b = bit(q);
                for j in 0..dim {
                    if j & b != 0 {
                        for r in 0..rows {
                            let v = self.get(r, j);
                            self.set(r, j, -v);
                        }
                    }
                }
            }
            Gate::Cz(a, bq) => {
                let (ba, bb) = (bit(a), bit(bq));
                for j in 0..dim {
                    if j & ba != 0 && j & bb != 0 {
                        for r in 0..rows {
                            let v = self.get(r, j);
                            self.set(r, j, -v);
                        }
                    }
                }
            }
            Gate::Cnot(cq, t) => {
                let (bc, bt) = (bit(cq), bit(t));
                for j in 0..dim {
                    if j & bc != 0 && j & bt == 0 {
                        for r in 0..rows {
                            let c0 = self.get(r, j);
                            let c1 = self.get(r, j | bt);
                            self.set(r, j, c1);
                            self.set(r, j | bt, c0);
                        }
                    }
                }
            }
        }
    }

    /// `M <- G M G†` for square matrices.
    pub fn conjugate_by_gate(&mut self, g: Gate) {
        self.apply_gate_left(g);
        self.apply_gate_right_dagger(g);
    }

    /// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_hermitian(1e-8), "eigenvalues need a hermitian input");
        let n = self.rows;
        let mut a = self.clone();
        for _sweep in 0..200 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if off < 1e-24 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    let beta = apq.norm();
                    if beta < 1e-14 {
                        continue;
                    }
                    let phase = apq / beta;
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let tau = (aqq - app) / (2.0 * beta);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // columns: [p q] <- [p q] * [[c, s*phase], [-s*conj(phase), c]]
                    for r in 0..n {
                        let arp = a.get(r, p);
                        let arq = a.get(r, q);
                        a.set(r, p, arp * c - arq * s * phase.conj());
                        a.set(r, q, arp * s * phase + arq * c);
                    }
                    // rows: conjugate transform
                    for col in 0..n {
                        let apc = a.get(p, col);
                        let aqc = a.get(q, col);
                        a.set(p, col, apc * c - aqc * s * phase);
                        a.set(q, col, apc * s * phase.conj() + aqc * c);
                    }
                }
            }
        }
        (0..n).map(|i| a.get(i, i).re).collect()
    }
}

impl std::fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix {}x{}:", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let v = self.get(r, c);
                write!(f, "{:+.3}{:+.3}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn multiply_and_kron() {
        let x = {
            let mut m = DenseMatrix::zeros(2, 2);
            m.set(0, 1, c(1.0, 0.0));
            m.set(1, 0, c(1.0, 0.0));
            m
        };
        let z = {
            let mut m = DenseMatrix::zeros(2, 2);
            m.set(0, 0, c(1.0, 0.0));
            m.set(1, 1, c(-1.0, 0.0));
            m
        };
        let xz = x.mul(&z);
        // XZ = -iY
        assert!((xz.get(0, 1) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((xz.get(1, 0) - c(1.0, 0.0)).norm() < 1e-12);
        let xx = x.kron(&x);
        assert_eq!(xx.rows(), 4);
        assert!((xx.get(0, 3) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        // |0><0| (x) I/2: tracing qubit 1 gives |0><0|
        let zero = {
            let mut m = DenseMatrix::zeros(2, 2);
            m.set(0, 0, c(1.0, 0.0));
            m
        };
        let chi = DenseMatrix::identity(2).scale(c(0.5, 0.0));
        let prod = zero.kron(&chi);
        let back = prod.partial_trace(&[0]);
        assert!(back.frobenius_distance(&zero) < 1e-12);
        let other = prod.partial_trace(&[1]);
        assert!(other.frobenius_distance(&chi) < 1e-12);
    }

    #[test]
    fn psd_and_eigenvalues() {
        let mut m = DenseMatrix::zeros(2, 2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(0.0, -0.5));
        m.set(1, 0, c(0.0, 0.5));
        m.set(1, 1, c(1.0, 0.0));
        assert!(m.is_psd(1e-12));
        let mut eigs = m.hermitian_eigenvalues();
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 0.5).abs() < 1e-9 && (eigs[1] - 1.5).abs() < 1e-9);

        let mut neg = DenseMatrix::identity(2);
        neg.set(1, 1, c(-0.2, 0.0));
        assert!(!neg.is_psd(1e-12));
    }

    #[test]
    fn insert_wire_places_qubit() {
        let zero = {
            let mut m = DenseMatrix::zeros(2, 2);
            m.set(0, 0, c(1.0, 0.0));
            m
        };
        let one = {
            let mut m = DenseMatrix::zeros(2, 2);
            m.set(1, 1, c(1.0, 0.0));
            m
        };
        let s = zero.insert_wire(0, &one); // |1> (x) |0>
        let direct = one.kron(&zero);
        assert!(s.frobenius_distance(&direct) < 1e-12);
        let s = zero.insert_wire(1, &one); // |0> (x) |1>
        assert!(s.frobenius_distance(&zero.kron(&one)) < 1e-12);
    }
}
