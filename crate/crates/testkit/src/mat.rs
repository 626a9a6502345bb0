//! Dense square complex matrices with just enough algebra for oracle
//! construction: products, Kronecker products, adjoints, and
//! comparisons up to a global phase.

use num_complex::Complex64;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> CMat {
        CMat { dim, data: vec![Complex64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> CMat {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major slice of `dim * dim` `(re, im)` pairs.
    pub fn from_rows(dim: usize, entries: &[(f64, f64)]) -> CMat {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        CMat { dim, data: entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect() }
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `self + scale * rhs`.
    pub fn add_scaled(&self, scale: Complex64, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += scale * r;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Kronecker product; `self` supplies the more significant block.
    pub fn kron(&self, rhs: &CMat) -> CMat {
        let (a, b) = (self.dim, rhs.dim);
        let mut out = CMat::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let v = self[(i, j)];
                if v == Complex64::ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = v * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match dimension");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in comparison");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest deviation of `self * self.dagger()` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.dagger()).max_abs_diff(&CMat::identity(self.dim))
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Largest element-wise deviation between `a` and `b` after aligning
/// them by the global phase that matches their largest entries.
/// Returns the plain deviation when `a` is numerically zero.
pub fn phase_aligned_distance(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim, b.dim, "dimension mismatch in comparison");
    let (mut best, mut best_norm) = (0usize, 0.0f64);
    for (i, v) in a.data.iter().enumerate() {
        if v.norm() > best_norm {
            best_norm = v.norm();
            best = i;
        }
    }
    if best_norm < 1e-12 {
        return a.max_abs_diff(b);
    }
    let lambda = b.data[best] / a.data[best];
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x * lambda - y).norm())
        .fold(0.0, f64::max)
}

/// Discrete Fourier transform on `n_qubits` qubits:
/// `F[j][k] = exp(+2πi·jk/N)/√N` with `N = 2^n_qubits`.
pub fn dft_matrix(n_qubits: usize) -> CMat {
    let n = 1usize << n_qubits;
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = CMat::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let angle = 2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / (n as f64);
            m[(j, k)] = Complex64::new(angle.cos(), angle.sin()) * scale;
        }
    }
    m
}

/// Unitary relabeling qubits: the state bit held by qubit `q` moves to
/// qubit `perm[q]`. `perm` must be a permutation of `0..n_qubits`.
pub fn permutation_matrix(n_qubits: usize, perm: &[usize]) -> CMat {
    assert_eq!(perm.len(), n_qubits, "permutation length must match qubit count");
    let mut seen = vec![false; n_qubits];
    for &p in perm {
        assert!(p < n_qubits && !seen[p], "not a permutation of 0..n_qubits");
        seen[p] = true;
    }
    let n = 1usize << n_qubits;
    let mut m = CMat::zeros(n);
    for col in 0..n {
        let mut row = 0usize;
        for q in 0..n_qubits {
            let bit = (col >> (n_qubits - 1 - q)) & 1;
            row |= bit << (n_qubits - 1 - perm[q]);
        }
        m[(row, col)] = Complex64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_adjoint_behave() {
        let x = CMat::from_rows(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let y = CMat::from_rows(2, &[(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]);
        // XY = iZ
        let xy = x.mul(&y);
        let iz = CMat::from_rows(2, &[(0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, -1.0)]);
        assert!(xy.max_abs_diff(&iz) < 1e-15);
        assert!(y.dagger().max_abs_diff(&y) < 1e-15, "Y is Hermitian");
        assert!(x.unitarity_defect() < 1e-15);
    }

    #[test]
    fn kron_orders_blocks_most_significant_first(){
        let z = CMat::from_rows(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]);
        let i2 = CMat::identity(2);
        // Z on qubit 0 of two qubits: diag(1, 1, -1, -1).
        let zi = z.kron(&i2);
        for (k, want) in [1.0, 1.0, -1.0, -1.0].iter().enumerate() {
            assert!((zi[(k, k)].re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn dft_is_unitary_and_dim_two_is_hadamard() {
        for n in 1..=4 {
            assert!(dft_matrix(n).unitarity_defect() < 1e-12);
        }
        let f = dft_matrix(1);
        let h = 1.0 / 2.0f64.sqrt();
        let had = CMat::from_rows(2, &[(h, 0.0), (h, 0.0), (h, 0.0), (-h, 0.0)]);
        assert!(f.max_abs_diff(&had) < 1e-15);
    }

    #[test]
    fn phase_alignment_ignores_global_phase_only() {
        let f = dft_matrix(2);
        let rotated = f.scale(Complex64::from_polar(1.0, 1.234));
        assert!(phase_aligned_distance(&f, &rotated) < 1e-12);
        let different = CMat::identity(4);
        assert!(phase_aligned_distance(&f, &different) > 0.1);
    }

    #[test]
    fn permutation_moves_bits() {
        // Swap qubits 0 and 1 of two: |01> (index 1) -> |10> (index 2).
        let p = permutation_matrix(2, &[1, 0]);
        assert_eq!(p[(2, 1)].re, 1.0);
        assert_eq!(p[(1, 2)].re, 1.0);
        assert_eq!(p[(0, 0)].re, 1.0);
        assert_eq!(p[(3, 3)].re, 1.0);
        assert!(p.unitarity_defect() < 1e-15);
        // Identity permutation is the identity matrix.
        let id = permutation_matrix(3, &[0, 1, 2]);
        assert!(id.max_abs_diff(&CMat::identity(8)) < 1e-15);
    }
}
