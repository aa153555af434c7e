//! Dense complex-matrix kernel: Hermitian eigendecomposition via cyclic
//! Jacobi, SVD, PSD square root, PSD certification and operator norm.
//!
//! Everything here is plain `Vec<Complex64>` row-major storage. The solver is
//! tuned for desk dimensions (n <= 64); no blocking, no sparsity.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Thresholds shared by every approximate comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Relative matrix-equality threshold.
    pub eps_eq: f64,
    /// Eigenvalue negativity threshold for PSD certification.
    pub eps_psd: f64,
    /// Jacobi convergence threshold on off-diagonal Frobenius mass.
    pub eps_offdiag: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eps_eq: 1e-9,
            eps_psd: 1e-8,
            eps_offdiag: 1e-12,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_eq > 0.0 && self.eps_psd > 0.0 && self.eps_offdiag > 0.0) {
            return Err(Error::BadTolerance(
                "all thresholds must be strictly positive".into(),
            ));
        }
        if self.eps_offdiag > self.eps_eq {
            return Err(Error::BadTolerance(format!(
                "eps_offdiag ({:e}) must not exceed eps_eq ({:e})",
                self.eps_offdiag, self.eps_eq
            )));
        }
        Ok(())
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::ShapeError("non-finite matrix entry".into()));
        }
        Ok(CMat {
            rows,
            cols,
            data: entries,
        })
    }

    /// Build from real row slices; test and fixture helper.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = CMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, Complex64::new(x, 0.0));
            }
        }
        m
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let mut m = CMat::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.shape(), other.shape(), "add: shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.shape(), other.shape(), "sub: shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, k: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn scale_re(&self, k: f64) -> CMat {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to the adjoint; zero for Hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.get(i, j) - self.get(j, i).conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// (a + a*)/2; callers must pass a square matrix.
    pub fn hermitize(&self) -> CMat {
        assert!(self.is_square(), "hermitize: square matrix required");
        let mut out = CMat::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                let z = (self.get(i, j) + self.get(j, i).conj()).scale(0.5);
                out.set(i, j, z);
            }
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    /// Copy `block` into self with top-left corner at (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, block: &CMat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Extract the (rows x cols) submatrix with top-left corner at (r0, c0).
    pub fn slice(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    /// Kronecker product self (x) I_d, the scalar amplification.
    pub fn kron_identity(&self, d: usize) -> CMat {
        let mut out = CMat::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self.get(i, j);
                if z.re == 0.0 && z.im == 0.0 {
                    continue;
                }
                for s in 0..d {
                    out.set(i * d + s, j * d + s, z);
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Complex64>]) -> CMat {
        let mut out = CMat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &z) in col.iter().enumerate() {
                out.set(i, j, z);
            }
        }
        out
    }
}

/// Result of a Hermitian eigendecomposition: `a == vectors * diag(values) * vectors^*`.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMat,
}

const JACOBI_SWEEP_CAP: usize = 100;

fn off_diagonal_mass(a: &CMat) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi with complex
/// 2x2 rotations. Eigenvalues come back ascending; each eigenvector column is
/// phase-normalized so its largest-modulus entry is positive real.
pub fn herm_eig(a: &CMat, tol: &TolerancePolicy) -> Result<EigDecomp> {
    let defect = a.hermitian_defect();
    if !a.is_square() || defect > tol.eps_eq * a.fro_norm().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.rows();
    let mut m = a.hermitize();
    let mut v = CMat::identity(n);

    let fro = m.fro_norm();
    let stop = tol.eps_offdiag * fro;
    // Skipped pairs must stay far below the stop threshold in aggregate,
    // or the final off-mass would sit right at the reconstruction bound.
    let pair_skip = if n > 1 {
        stop * 1e-4 / ((n * n) as f64)
    } else {
        0.0
    };

    // One polishing sweep runs after the threshold is reached; quadratic
    // convergence turns the ~stop-sized off-mass into roundoff, so the
    // reconstruction bound holds with orders of margin instead of barely.
    let mut polished = false;
    let mut converged = n <= 1 || off_diagonal_mass(&m) == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= JACOBI_SWEEP_CAP {
            return Err(Error::NoConvergence {
                sweeps,
                off_mass: off_diagonal_mass(&m),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let r = apq.norm();
                if r <= pair_skip {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let phase = apq / r;
                let theta = (app - aqq) / (2.0 * r);
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();

                // Row update: m <- J^* m.
                for j in 0..n {
                    let mp = m.get(p, j);
                    let mq = m.get(q, j);
                    m.set(p, j, mp * c - mq * (phase * s));
                    m.set(q, j, mp * s + mq * (phase * c));
                }
                // Column update: m <- m J, and accumulate v <- v J.
                for i in 0..n {
                    let mp = m.get(i, p);
                    let mq = m.get(i, q);
                    m.set(i, p, mp * c - mq * (ph_conj * s));
                    m.set(i, q, mp * s + mq * (ph_conj * c));

                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, vp * c - vq * (ph_conj * s));
                    v.set(i, q, vp * s + vq * (ph_conj * c));
                }
                m.set(p, q, Complex64::new(0.0, 0.0));
                m.set(q, p, Complex64::new(0.0, 0.0));
            }
        }
        sweeps += 1;
        if off_diagonal_mass(&m) <= stop {
            if polished {
                converged = true;
            }
            polished = true;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut cols: Vec<Vec<Complex64>> = order.iter().map(|&i| v.column(i)).collect();
    for col in cols.iter_mut() {
        normalize_phase(col);
    }
    Ok(EigDecomp {
        values,
        vectors: CMat::from_columns(n, &cols),
    })
}

/// Rotate a vector's global phase so its largest-modulus entry is positive real.
fn normalize_phase(col: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = 0.0;
    for (i, z) in col.iter().enumerate() {
        let nz = z.norm_sqr();
        if nz > best_norm + 1e-300 {
            best_norm = nz;
            best = i;
        }
    }
    let pivot = col[best];
    let r = pivot.norm();
    if r == 0.0 {
        return;
    }
    let ph = pivot.conj() / r;
    for z in col.iter_mut() {
        *z *= ph;
    }
}

/// Singular value decomposition `a == left * diag(singulars) * right^*`
/// with `left` m x m unitary, `right` n x n unitary and min(m, n) singular
/// values sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: CMat,
    pub singulars: Vec<f64>,
    pub right: CMat,
}

impl Svd {
    /// Rebuild the decomposed matrix; the reconstruction oracle for tests.
    pub fn reconstruct(&self) -> CMat {
        let m = self.left.rows();
        let n = self.right.rows();
        let mut sigma = CMat::zeros(m, n);
        for (i, &s) in self.singulars.iter().enumerate() {
            sigma.set(i, i, Complex64::new(s, 0.0));
        }
        self.left.mul(&sigma).mul(&self.right.adjoint())
    }
}

/// SVD via the eigendecomposition of v^* v; left factors come from
/// v * right / sigma with zero singular directions completed by Gram-Schmidt.
pub fn svd(v: &CMat, tol: &TolerancePolicy) -> Result<Svd> {
    let (m, n) = v.shape();
    let gram = v.adjoint().mul(v).hermitize();
    let eig = herm_eig(&gram, tol)?;

    // Descending order.
    let mut pairs: Vec<(f64, Vec<Complex64>)> = eig
        .values
        .iter()
        .rev()
        .zip((0..n).rev().map(|j| eig.vectors.column(j)))
        .map(|(&l, c)| (l.max(0.0), c))
        .collect();
    for (_, col) in pairs.iter_mut() {
        normalize_phase(col);
    }

    let right = CMat::from_columns(n, &pairs.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    let singulars: Vec<f64> = pairs.iter().take(m.min(n)).map(|(l, _)| l.sqrt()).collect();

    let sig_max = singulars.first().copied().unwrap_or(0.0);
    let cutoff = sig_max * 1e-12;
    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for (i, &s) in singulars.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let rcol = CMat::from_columns(n, &[right.column(i)]);
            let ucol = v.mul(&rcol).scale_re(1.0 / s);
            left_cols.push(ucol.column(0));
        } else {
            break;
        }
    }
    let left = complete_orthonormal(m, left_cols);
    Ok(Svd {
        left,
        singulars,
        right,
    })
}

/// Extend a (possibly empty) list of orthonormal columns in C^m to a full
/// m x m unitary by Gram-Schmidt over the standard basis.
pub fn complete_orthonormal(m: usize, mut cols: Vec<Vec<Complex64>>) -> CMat {
    let mut basis = 0usize;
    while cols.len() < m && basis < m {
        let mut cand = vec![Complex64::new(0.0, 0.0); m];
        cand[basis] = Complex64::new(1.0, 0.0);
        basis += 1;
        // Two Gram-Schmidt passes keep the result orthonormal to roundoff.
        for _ in 0..2 {
            for col in &cols {
                let inner: Complex64 = col.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                for (c, a) in cand.iter_mut().zip(col) {
                    *c -= inner * a;
                }
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            for z in cand.iter_mut() {
                *z /= norm;
            }
            cols.push(cand);
        }
    }
    assert_eq!(cols.len(), m, "failed to complete an orthonormal basis");
    CMat::from_columns(m, &cols)
}

/// Orthonormalize the columns of `a` by modified Gram-Schmidt, dropping
/// dependent columns. Returns the kept columns.
pub fn orthonormalize_columns(a: &CMat) -> Vec<Vec<Complex64>> {
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..a.cols() {
        let mut col = a.column(j);
        for _ in 0..2 {
            for u in &kept {
                let inner: Complex64 = u.iter().zip(&col).map(|(x, y)| x.conj() * y).sum();
                for (c, x) in col.iter_mut().zip(u) {
                    *c -= inner * x;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-10 {
            for z in col.iter_mut() {
                *z /= norm;
            }
            kept.push(col);
        }
    }
    kept
}

/// Dead-band below which eigenvalues count as zero in `psd_sqrt`, relative
/// to max(1, ||a||). Kernel eigenvalues of computed Gramians and positive
/// parts carry noise up to ~eps_offdiag * ||.||_F from the Jacobi stopping
/// criterion; the square root would amplify that to ~1e-6 mass, far above
/// eps_eq, so everything under the band is dropped rather than rooted. The
/// band sits two orders above that noise and one order under eps_eq.
const SQRT_DEAD_BAND: f64 = 1e-10;

/// PSD square root. Eigenvalues in [-eps_psd * max(1, ||a||), 0) are clamped
/// to zero; anything below that bound is a hard `NotPsd` failure. The floor
/// matches `is_psd`, so the square root is total on everything the predicate
/// accepts; a purely relative floor would reject numerically-zero matrices
/// whose noise eigenvalues sit at -1e-16.
pub fn psd_sqrt(a: &CMat, tol: &TolerancePolicy) -> Result<CMat> {
    let eig = herm_eig(a, tol)?;
    let scale = eig.values.iter().fold(0.0f64, |s, &l| s.max(l.abs()));
    let floor = -tol.eps_psd * scale.max(1.0);
    if let Some(&min) = eig.values.first().filter(|&&min| min < floor) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let n = a.rows();
    let mut out = CMat::zeros(n, n);
    for (k, &l) in eig.values.iter().enumerate() {
        let s = if l > SQRT_DEAD_BAND * scale.max(1.0) {
            l.sqrt()
        } else {
            0.0
        };
        if s == 0.0 {
            continue;
        }
        let col = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                let z = out.get(i, j) + col[i] * col[j].conj() * s;
                out.set(i, j, z);
            }
        }
    }
    Ok(out.hermitize())
}

/// PSD predicate at an explicit negativity threshold relative to
/// max(1, operator norm). Non-square and non-Hermitian inputs are `false`.
pub fn is_psd_with(a: &CMat, tol: &TolerancePolicy, neg_eps: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    if a.hermitian_defect() > tol.eps_eq * a.fro_norm().max(1.0) {
        return false;
    }
    let eig = match herm_eig(&a.hermitize(), tol) {
        Ok(e) => e,
        Err(_) => return false,
    };
    let op = eig.values.iter().fold(0.0f64, |s, &l| s.max(l.abs()));
    match eig.values.first() {
        Some(&min) => min >= -neg_eps * op.max(1.0),
        None => true,
    }
}

/// Membership in the positive cone, at the policy's eps_psd.
pub fn is_psd(a: &CMat, tol: &TolerancePolicy) -> bool {
    is_psd_with(a, tol, tol.eps_psd)
}

/// Largest singular value; 0 for the zero matrix. Computed from the smaller
/// Gramian so that op_norm(v) == op_norm(v^*) exactly.
pub fn op_norm(v: &CMat, tol: &TolerancePolicy) -> f64 {
    if v.fro_norm() == 0.0 {
        return 0.0;
    }
    let gram = if v.rows() <= v.cols() {
        v.mul(&v.adjoint())
    } else {
        v.adjoint().mul(v)
    };
    let eig = herm_eig(&gram.hermitize(), tol)
        .expect("Gramian eigendecomposition must converge on finite input");
    eig.values.last().map(|&l| l.max(0.0).sqrt()).unwrap_or(0.0)
}

/// Relative Frobenius equality at eps_eq.
pub fn mat_eq(a: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(mat_defect(a, b) <= tol.eps_eq)
}

/// Relative Frobenius distance used by `mat_eq`; reported as a residual.
pub fn mat_defect(a: &CMat, b: &CMat) -> f64 {
    a.sub(b).fro_norm() / a.fro_norm().max(b.fro_norm()).max(1.0)
}
