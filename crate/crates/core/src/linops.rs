//! Dense complex matrix arithmetic: adjoints, traces, Kronecker products,
//! partial traces, and Hermitian/PSD checks.
//!
//! Matrices are square, value-semantic, and immutable once constructed.
//! Tensor products use a fixed factor order: the S system is always the
//! LEFT factor, P the RIGHT, so a product-space index is `i_s * dim_p + i_p`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QmError, Result};

/// Default numeric tolerance for validity checks. Overridable per call.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dimensions of a bipartite tensor-product space, S-left / P-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductDims {
    pub dim_s: usize,
    pub dim_p: usize,
}

impl ProductDims {
    pub fn new(dim_s: usize, dim_p: usize) -> Self {
        assert!(dim_s >= 1 && dim_p >= 1, "factor dimensions must be >= 1");
        Self { dim_s, dim_p }
    }

    /// Total dimension of the product space.
    pub fn total(&self) -> usize {
        self.dim_s * self.dim_p
    }
}

/// Dense square matrix of complex entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major data. Rejects non-square lengths and non-finite entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        if data.len() != dim * dim {
            return Err(QmError::DimensionMismatch {
                context: "matrix data length",
                got: data.len(),
                expected: dim * dim,
            });
        }
        for (idx, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(QmError::NonFiniteEntry {
                    row: idx / dim,
                    col: idx % dim,
                });
            }
        }
        Ok(Self { dim, data })
    }

    /// Build from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(QmError::DimensionMismatch {
                    context: "matrix row length",
                    got: row.len(),
                    expected: dim,
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Build from nested rows of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let converted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * dim + i] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    fn require_same_dim(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.dim != other.dim {
            return Err(QmError::DimensionMismatch {
                context,
                got: other.dim,
                expected: self.dim,
            });
        }
        Ok(())
    }

    /// Conjugate transpose A†.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[j * self.dim + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other, "matrix addition")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other, "matrix subtraction")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other, "matrix multiplication")?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product A·v.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(QmError::DimensionMismatch {
                context: "matrix-vector product",
                got: v.len(),
                expected: self.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![Complex64::ZERO; n];
        for i in 0..n {
            for j in 0..n {
                out[i] += self.get(i, j) * v[j];
            }
        }
        Ok(out)
    }

    /// Kronecker product A ⊗ B with the S-left convention:
    /// (A ⊗ B)[a·db + b, c·db + d] = A[a,c]·B[b,d].
    pub fn kron(&self, other: &Self) -> Self {
        let da = self.dim;
        let db = other.dim;
        let n = da * db;
        let mut out = Self::zeros(n);
        for a in 0..da {
            for c in 0..da {
                let ac = self.get(a, c);
                if ac == Complex64::ZERO {
                    continue;
                }
                for b in 0..db {
                    for d in 0..db {
                        out.data[(a * db + b) * n + (c * db + d)] = ac * other.get(b, d);
                    }
                }
            }
        }
        out
    }

    /// Partial trace over the right (P) factor:
    /// result[a,b] = Σ_k A[a·dim_p + k, b·dim_p + k].
    pub fn partial_trace_p(&self, dims: ProductDims) -> Result<Self> {
        if self.dim != dims.total() {
            return Err(QmError::DimensionMismatch {
                context: "partial trace over P",
                got: self.dim,
                expected: dims.total(),
            });
        }
        let (ds, dp) = (dims.dim_s, dims.dim_p);
        let mut out = Self::zeros(ds);
        for a in 0..ds {
            for b in 0..ds {
                let mut sum = Complex64::ZERO;
                for k in 0..dp {
                    sum += self.get(a * dp + k, b * dp + k);
                }
                out.data[a * ds + b] = sum;
            }
        }
        Ok(out)
    }

    /// Partial trace over the left (S) factor:
    /// result[a,b] = Σ_k A[k·dim_p + a, k·dim_p + b].
    pub fn partial_trace_s(&self, dims: ProductDims) -> Result<Self> {
        if self.dim != dims.total() {
            return Err(QmError::DimensionMismatch {
                context: "partial trace over S",
                got: self.dim,
                expected: dims.total(),
            });
        }
        let (ds, dp) = (dims.dim_s, dims.dim_p);
        let mut out = Self::zeros(dp);
        for a in 0..dp {
            for b in 0..dp {
                let mut sum = Complex64::ZERO;
                for k in 0..ds {
                    sum += self.get(k * dp + a, k * dp + b);
                }
                out.data[a * dp + b] = sum;
            }
        }
        Ok(out)
    }

    /// Tr(A·B) without forming the full product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.require_same_dim(other, "trace of product")?;
        let n = self.dim;
        let mut sum = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                sum += self.get(i, j) * other.get(j, i);
            }
        }
        Ok(sum)
    }

    /// Largest absolute entry of A - B.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// True iff max-entry |A - A†| ≤ tol.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Max-entry deviation from A = A†.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..=i {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// True iff the min eigenvalue of the Hermitian part is ≥ -tol.
    /// Errors when the matrix is not Hermitian within tol to begin with.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let dev = self.hermitian_deviation();
        if dev > tol {
            return Err(QmError::NotHermitian {
                deviation: dev,
                tol,
            });
        }
        let eigs = self.hermitian_eigenvalues();
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(min >= -tol)
    }

    /// Eigenvalues of the Hermitian part (A + A†)/2, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut vals = self.hermitian_eigen().0;
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Eigendecomposition of the Hermitian part: (eigenvalues, eigenvector columns).
    /// Column k of the returned matrix is the eigenvector for eigenvalue k.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, ComplexMatrix) {
        let n = self.dim;
        // Symmetrize so tiny anti-Hermitian noise cannot leak into the solver.
        let herm = self.add(&self.adjoint()).unwrap().scale(0.5.into());
        let m = DMatrix::from_row_slice(n, n, &herm.data);
        let eig = m.symmetric_eigen();
        let vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        let mut vecs = ComplexMatrix::zeros(n);
        for j in 0..n {
            for i in 0..n {
                vecs.data[i * n + j] = eig.eigenvectors[(i, j)];
            }
        }
        (vals, vecs)
    }

    /// f(A) for Hermitian A, applying f to each eigenvalue.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim;
        let (vals, vecs) = self.hermitian_eigen();
        // V · diag(f(λ)) · V†
        let mut scaled = ComplexMatrix::zeros(n);
        for j in 0..n {
            let fj = Complex64::new(f(vals[j]), 0.0);
            for i in 0..n {
                scaled.data[i * n + j] = vecs.get(i, j) * fj;
            }
        }
        scaled.matmul(&vecs.adjoint()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::test_support::{random_matrix, singlet_vector};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_identity_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.adjoint(), i2);
    }

    #[test]
    fn adjoint_conjugates_diagonal() {
        let m = ComplexMatrix::diagonal(&[c(0.0, 1.0), c(1.0, 0.0)]);
        let expected = ComplexMatrix::diagonal(&[c(0.0, -1.0), c(1.0, 0.0)]);
        assert_eq!(m.adjoint(), expected);
    }

    #[test]
    fn adjoint_matches_entrywise_oracle() {
        let a = random_matrix(3, 11);
        let b = a.adjoint();
        // independent oracle: B[j][k] = conj(A[k][j]) entrywise
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(b.get(j, k), a.get(k, j).conj());
            }
        }
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn trace_of_identity_is_dim() {
        for d in 1..=5 {
            let t = ComplexMatrix::identity(d).trace();
            assert!((t - c(d as f64, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn trace_of_nilpotent_is_zero() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(3.0, -2.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(m.trace(), Complex64::ZERO);
    }

    #[test]
    fn trace_is_cyclic() {
        let a = random_matrix(4, 1);
        let b = random_matrix(4, 2);
        let ab = a.matmul(&b).unwrap().trace();
        let ba = b.matmul(&a).unwrap().trace();
        assert!((ab - ba).norm() <= 1e-12 * ab.norm().max(1.0));
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_factors_as_left_times_right() {
        // X ⊗ Y = (X ⊗ I)(I ⊗ Y)
        let a = random_matrix(2, 5);
        let b = random_matrix(2, 6);
        let i2 = ComplexMatrix::identity(2);
        let lhs = a.kron(&b);
        let rhs = a.kron(&i2).matmul(&i2.kron(&b)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_of_diagonals_expands_by_hand() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = ComplexMatrix::diagonal(&[c(3.0, 0.0), c(4.0, 0.0)]);
        let expected =
            ComplexMatrix::diagonal(&[c(3.0, 0.0), c(4.0, 0.0), c(6.0, 0.0), c(8.0, 0.0)]);
        assert_eq!(a.kron(&b), expected);
    }

    /// Outer product |v⟩⟨v| built by direct index loops, for oracle use.
    fn outer(v: &[Complex64]) -> ComplexMatrix {
        let n = v.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j].conj());
            }
        }
        m
    }

    #[test]
    fn partial_trace_p_of_product_recovers_left_factor() {
        let sigma = random_matrix(2, 7);
        let mut pi = random_matrix(3, 8);
        // normalize pi to unit trace
        let t = pi.trace();
        pi = pi.scale(1.0 / t);
        let got = sigma
            .kron(&pi)
            .partial_trace_p(ProductDims::new(2, 3))
            .unwrap();
        assert!(got.max_abs_diff(&sigma) < 1e-12);
    }

    #[test]
    fn partial_trace_p_of_identity_scales() {
        let got = ComplexMatrix::identity(4)
            .partial_trace_p(ProductDims::new(2, 2))
            .unwrap();
        let expected = ComplexMatrix::identity(2).scale(2.0.into());
        assert!(got.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_p_of_singlet_is_maximally_mixed() {
        let proj = outer(&singlet_vector());
        // oracle: direct index summation over the projector
        let dims = ProductDims::new(2, 2);
        let mut oracle = ComplexMatrix::zeros(2);
        for a in 0..2 {
            for b in 0..2 {
                let mut s = Complex64::ZERO;
                for k in 0..2 {
                    s += proj.get(a * 2 + k, b * 2 + k);
                }
                oracle.set(a, b, s);
            }
        }
        let got = proj.partial_trace_p(dims).unwrap();
        let half_i = ComplexMatrix::identity(2).scale(0.5.into());
        assert!(got.max_abs_diff(&oracle) < 1e-15);
        assert!(got.max_abs_diff(&half_i) < 1e-15);
    }

    #[test]
    fn partial_trace_s_mirrors_p() {
        let mut sigma = random_matrix(2, 9);
        let t = sigma.trace();
        sigma = sigma.scale(1.0 / t);
        let pi = random_matrix(3, 10);
        let got = sigma
            .kron(&pi)
            .partial_trace_s(ProductDims::new(2, 3))
            .unwrap();
        assert!(got.max_abs_diff(&pi) < 1e-12);

        let i4 = ComplexMatrix::identity(4)
            .partial_trace_s(ProductDims::new(2, 2))
            .unwrap();
        assert!(i4.max_abs_diff(&ComplexMatrix::identity(2).scale(2.0.into())) < 1e-15);

        let singlet_reduced = outer(&singlet_vector())
            .partial_trace_s(ProductDims::new(2, 2))
            .unwrap();
        assert!(
            singlet_reduced.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5.into())) < 1e-15
        );
    }

    #[test]
    fn partial_trace_dimension_mismatch_is_rejected() {
        let err = ComplexMatrix::identity(4)
            .partial_trace_p(ProductDims::new(2, 3))
            .unwrap_err();
        assert!(matches!(err, QmError::DimensionMismatch { .. }));
    }

    #[test]
    fn hermitian_checks() {
        assert!(ComplexMatrix::identity(3).is_hermitian(1e-12));
        let anti = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(!anti.is_hermitian(1e-12));

        // perturbation below tolerance still counts as Hermitian
        let mut m = ComplexMatrix::identity(2).scale(0.5.into());
        m.set(0, 1, c(0.0, 1e-9));
        assert!(m.is_hermitian(1e-8));
        assert!(!m.is_hermitian(1e-10));
    }

    #[test]
    fn psd_checks() {
        assert!(ComplexMatrix::identity(2).is_psd(1e-10).unwrap());
        let neg = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-0.5, 0.0)]);
        assert!(!neg.is_psd(1e-10).unwrap());

        // Gram construction G·G† is PSD by definition
        let g = random_matrix(4, 3);
        let gram = g.matmul(&g.adjoint()).unwrap();
        assert!(gram.is_psd(1e-10).unwrap());

        let anti = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            anti.is_psd(1e-10),
            Err(QmError::NotHermitian { .. })
        ));
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let g = random_matrix(5, 21);
        let h = g.add(&g.adjoint()).unwrap().scale(0.5.into());
        let (vals, vecs) = h.hermitian_eigen();
        let diag =
            ComplexMatrix::diagonal(&vals.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>());
        let rebuilt = vecs
            .matmul(&diag)
            .unwrap()
            .matmul(&vecs.adjoint())
            .unwrap();
        assert!(rebuilt.max_abs_diff(&h) < 1e-10);
        // eigenvector columns are orthonormal
        let vv = vecs.adjoint().matmul(&vecs).unwrap();
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-10);
    }

    #[test]
    fn hermitian_map_inverse_sqrt() {
        let g = random_matrix(3, 22);
        let s = g.matmul(&g.adjoint()).unwrap();
        let inv_sqrt = s.hermitian_map(|x| 1.0 / x.sqrt());
        let should_be_identity = inv_sqrt
            .matmul(&s)
            .unwrap()
            .matmul(&inv_sqrt)
            .unwrap();
        assert!(should_be_identity.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-9);
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, QmError::NonFiniteEntry { row: 0, col: 0 }));
    }

    proptest! {
        #[test]
        fn prop_trace_of_kron_is_product_of_traces(seed_a in 0u64..1000, seed_b in 0u64..1000) {
            let a = random_matrix(3, seed_a);
            let b = random_matrix(2, seed_b);
            let lhs = a.kron(&b).trace();
            let rhs = a.trace() * b.trace();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }

        #[test]
        fn prop_trace_survives_partial_trace(seed in 0u64..1000) {
            let x = random_matrix(6, seed);
            let dims = ProductDims::new(2, 3);
            let lhs = x.trace();
            let rhs = x.partial_trace_p(dims).unwrap().trace();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }

        #[test]
        fn prop_partial_trace_pulls_left_factor_out(seed_x in 0u64..1000, seed_y in 0u64..1000) {
            // Tr_P[(X ⊗ I)Y] = X · Tr_P(Y)
            let dims = ProductDims::new(2, 3);
            let x = random_matrix(2, seed_x);
            let y = random_matrix(6, seed_y.wrapping_add(1));
            let lhs = x
                .kron(&ComplexMatrix::identity(3))
                .matmul(&y)
                .unwrap()
                .partial_trace_p(dims)
                .unwrap();
            let rhs = x.matmul(&y.partial_trace_p(dims).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn prop_partial_trace_cycles_right_factor(seed_x in 0u64..1000, seed_y in 0u64..1000) {
            // Tr_P[(I ⊗ X)Y] = Tr_P[Y(I ⊗ X)]
            let dims = ProductDims::new(2, 3);
            let x = random_matrix(3, seed_x.wrapping_add(7));
            let y = random_matrix(6, seed_y.wrapping_add(13));
            let ix = ComplexMatrix::identity(2).kron(&x);
            let lhs = ix.matmul(&y).unwrap().partial_trace_p(dims).unwrap();
            let rhs = y.matmul(&ix).unwrap().partial_trace_p(dims).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn prop_kron_is_associative(sa in 0u64..500, sb in 0u64..500, sc in 0u64..500) {
            let a = random_matrix(2, sa);
            let b = random_matrix(2, sb.wrapping_add(3));
            let d = random_matrix(2, sc.wrapping_add(5));
            let lhs = a.kron(&b).kron(&d);
            let rhs = a.kron(&b.kron(&d));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
