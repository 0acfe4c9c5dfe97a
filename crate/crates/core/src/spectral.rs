//! Eigenproblems on finite cubes: full spectra with multiplicity, eigenvalue
//! counting by triangular-factorization inertia, rank-one interlacing,
//! Temple's inequality, and resolvent-norm identities.

use crate::error::{Error, Result};
use crate::operator::HamMatrix;
use nalgebra::DMatrix;
use num_complex::Complex;

/// Full spectrum, ascending with multiplicity; eigenvectors as columns when requested.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DMatrix<f64>>,
}

impl Spectrum {
    /// `dist(E, σ(H))` for real E.
    pub fn dist_to(&self, e: f64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (l - e).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// `dist(z, σ(H))` for complex z.
    pub fn dist_to_complex(&self, z: Complex<f64>) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (Complex::new(*l, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Full sorted spectrum of a dense-regime matrix.
pub fn eigen(h: &HamMatrix, want_vectors: bool) -> Result<Spectrum> {
    let m = h.dense().map_err(|_| {
        Error::Capability("eigen needs the dense regime (site count above cap)".into())
    })?;
    Ok(eigen_dense(m, want_vectors))
}

/// Eigensolve of an explicit symmetric matrix (also used by test harnesses).
pub fn eigen_dense(m: &DMatrix<f64>, want_vectors: bool) -> Spectrum {
    if !want_vectors {
        let mut eigenvalues: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return Spectrum {
            eigenvalues,
            eigenvectors: None,
        };
    }
    let se = m.clone().symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut v = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        v.set_column(col, &se.eigenvectors.column(i));
    }
    Spectrum {
        eigenvalues,
        eigenvectors: Some(v),
    }
}

/// Result of the strict counting function `N(H, E) = |{n : E_n < E}|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountResult {
    pub count: usize,
    /// Set when E sits on (or within ~1e-12 of) an eigenvalue; ties are
    /// reported, never silently resolved.
    pub boundary: bool,
}

/// Inertia of a symmetric matrix from a Bunch-Kaufman factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
}

enum FactorOutcome {
    Done(Inertia),
    NearZeroPivot,
}

/// Symmetric-indefinite factorization with Bunch-Kaufman partial pivoting,
/// tracking only the inertia of the block-diagonal factor (Sylvester's law).
fn bk_inertia_attempt(mut a: DMatrix<f64>, zero_tol: f64) -> FactorOutcome {
    let n = a.nrows();
    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let (mut neg, mut zero, mut pos) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while k < n {
        let absakk = a[(k, k)].abs();
        let mut colmax = 0.0;
        let mut imax = k;
        for i in (k + 1)..n {
            let v = a[(i, k)].abs();
            if v > colmax {
                colmax = v;
                imax = i;
            }
        }
        if absakk.max(colmax) <= zero_tol {
            // whole pivot column is numerically zero
            zero += 1;
            k += 1;
            continue;
        }
        let mut one_by_one = true;
        let mut swap_with = k;
        if absakk < alpha * colmax {
            let mut rowmax = 0.0f64;
            for j in k..n {
                if j != imax {
                    rowmax = rowmax.max(a[(imax, j)].abs());
                }
            }
            if absakk * rowmax >= alpha * colmax * colmax {
                // keep A(k,k)
            } else if a[(imax, imax)].abs() >= alpha * rowmax {
                swap_with = imax;
            } else {
                one_by_one = false;
                swap_with = imax;
            }
        }
        if one_by_one {
            if swap_with != k {
                a.swap_rows(k, swap_with);
                a.swap_columns(k, swap_with);
            }
            let d = a[(k, k)];
            if d.abs() <= zero_tol {
                return FactorOutcome::NearZeroPivot;
            }
            if d > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
            // product-first Schur update keeps exact symmetry in fp
            for i in (k + 1)..n {
                let aik = a[(i, k)];
                if aik != 0.0 {
                    for j in (k + 1)..n {
                        a[(i, j)] -= aik * a[(k, j)] / d;
                    }
                }
            }
            k += 1;
        } else {
            if swap_with != k + 1 {
                a.swap_rows(k + 1, swap_with);
                a.swap_columns(k + 1, swap_with);
            }
            let (pa, pb, pc) = (a[(k, k)], a[(k + 1, k)], a[(k + 1, k + 1)]);
            let det = pa * pc - pb * pb;
            let scale = pa.abs().max(pb.abs()).max(pc.abs());
            if det.abs() <= zero_tol * scale.max(1.0) {
                return FactorOutcome::NearZeroPivot;
            }
            // eigenvalues of the 2x2 block
            let tr = pa + pc;
            let disc = ((pa - pc).powi(2) + 4.0 * pb * pb).sqrt();
            for lam in [(tr + disc) / 2.0, (tr - disc) / 2.0] {
                if lam > 0.0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            for i in (k + 2)..n {
                let (p, q) = (a[(i, k)], a[(i, k + 1)]);
                let x = (p * pc - q * pb) / det;
                let y = (q * pa - p * pb) / det;
                if x != 0.0 || y != 0.0 {
                    for j in (k + 2)..n {
                        a[(i, j)] -= x * a[(k, j)] + y * a[(k + 1, j)];
                    }
                }
            }
            for i in (k + 2)..n {
                for j in (k + 2)..i {
                    let s = 0.5 * (a[(i, j)] + a[(j, i)]);
                    a[(i, j)] = s;
                    a[(j, i)] = s;
                }
            }
            k += 2;
        }
    }
    FactorOutcome::Done(Inertia { neg, zero, pos })
}

/// Inertia of `M - shift` (negatives count eigenvalues strictly below the shift).
pub fn inertia_at_shift(m: &DMatrix<f64>, shift: f64) -> CountResult {
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let zero_tol = 1e-12 * scale;
    match bk_inertia_attempt(a.clone(), zero_tol) {
        FactorOutcome::Done(inertia) if inertia.zero == 0 => CountResult {
            count: inertia.neg,
            boundary: false,
        },
        _ => {
            // shift sits on an eigenvalue; step just below it and flag
            let delta = 1e3 * zero_tol;
            for i in 0..n {
                a[(i, i)] += delta;
            }
            match bk_inertia_attempt(a, zero_tol) {
                FactorOutcome::Done(inertia) => CountResult {
                    count: inertia.neg,
                    boundary: true,
                },
                FactorOutcome::NearZeroPivot => CountResult {
                    count: 0,
                    boundary: true,
                },
            }
        }
    }
}

/// Strict eigenvalue counting `N(H, E)` by factorization inertia; works in
/// both the dense and the sparse regime without a full diagonalization.
pub fn counting(h: &HamMatrix, e: f64) -> CountResult {
    inertia_at_shift(&h.to_dense(), e)
}

#[derive(Debug, Clone)]
pub struct InterlaceReport {
    pub base: Vec<f64>,
    pub perturbed: Vec<f64>,
    /// Largest violation of `E_n <= Ẽ_n <= E_{n+1}` (negative when slack).
    pub max_violation: f64,
    pub ok: bool,
}

/// Spectra of `A` and `A + c |v><v|` with the interlacing audit.
pub fn interlace_rank_one(h: &HamMatrix, vector: &[f64], c: f64) -> Result<InterlaceReport> {
    if c < 0.0 {
        return Err(Error::Domain(format!("rank-one coupling c={c} < 0")));
    }
    let norm: f64 = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Domain(format!("vector norm {norm} != 1")));
    }
    let a = h.to_dense();
    let n = a.nrows();
    if vector.len() != n {
        return Err(Error::Domain("vector length mismatch".into()));
    }
    let mut ap = a.clone();
    for i in 0..n {
        for j in 0..n {
            ap[(i, j)] += c * vector[i] * vector[j];
        }
    }
    let base = eigen_dense(&a, false).eigenvalues;
    let perturbed = eigen_dense(&ap, false).eigenvalues;
    let mut max_violation = f64::NEG_INFINITY;
    for k in 0..n {
        max_violation = max_violation.max(base[k] - perturbed[k]);
        if k + 1 < n {
            max_violation = max_violation.max(perturbed[k] - base[k + 1]);
        }
    }
    let scale = base.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    Ok(InterlaceReport {
        ok: max_violation <= 1e-10 * scale,
        base,
        perturbed,
        max_violation,
    })
}

/// Temple's inequality: a lower bound on the ground-state energy from one
/// trial vector and a surrogate second eigenvalue.
pub fn temple_bound(h: &HamMatrix, psi: &[f64], e1: f64) -> Result<f64> {
    let n = h.n();
    if psi.len() != n {
        return Err(Error::Domain("trial vector length mismatch".into()));
    }
    let norm: f64 = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Domain(format!("trial vector norm {norm} != 1")));
    }
    let mut hpsi = vec![0.0; n];
    h.matvec(psi, &mut hpsi);
    let mean: f64 = psi.iter().zip(&hpsi).map(|(a, b)| a * b).sum();
    if mean >= e1 {
        return Err(Error::Domain(format!(
            "Temple hypothesis <psi,Apsi> = {mean} < E1 = {e1} fails"
        )));
    }
    let second_moment: f64 = hpsi.iter().map(|x| x * x).sum();
    Ok(mean - (second_moment - mean * mean) / (e1 - mean))
}

#[derive(Debug, Clone, Copy)]
pub struct ResolventNorm {
    /// Largest singular value of `(H - z)^{-1}`, from an explicit complex
    /// inverse and power iteration (independent of the eigensolver).
    pub norm: f64,
    /// `1 / dist(z, σ(H))` from the eigenvalues.
    pub inv_dist: f64,
}

/// Checks the identity `|(H - z)^{-1}| = 1/dist(z, σ(H))` by two routes.
pub fn resolvent_norm_check(h: &HamMatrix, z: Complex<f64>) -> Result<ResolventNorm> {
    let spec = eigen(h, false)?;
    let dist = spec.dist_to_complex(z);
    if dist <= 1e-12 {
        return Err(Error::NearSingular { dist });
    }
    let inv = complex_shifted_inverse(&h.to_dense(), z)?;
    let norm = largest_singular_value(&inv);
    Ok(ResolventNorm {
        norm,
        inv_dist: 1.0 / dist,
    })
}

/// Dense complex matrix in row-major storage.
pub(crate) struct CMat {
    pub n: usize,
    pub data: Vec<Complex<f64>>,
}

impl CMat {
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn at(&self, i: usize, j: usize) -> Complex<f64> {
        self.data[i * self.n + j]
    }

}

/// `(H - z)^{-1}` by complex Gaussian elimination with partial pivoting.
pub(crate) fn complex_shifted_inverse(h: &DMatrix<f64>, z: Complex<f64>) -> Result<CMat> {
    let n = h.nrows();
    // augmented [A | I]
    let mut a: Vec<Complex<f64>> = Vec::with_capacity(n * 2 * n);
    for i in 0..n {
        for j in 0..n {
            let mut v = Complex::new(h[(i, j)], 0.0);
            if i == j {
                v -= z;
            }
            a.push(v);
        }
        for j in 0..n {
            a.push(Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        }
    }
    let w = 2 * n;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * w + col].norm();
        for r in (col + 1)..n {
            let v = a[r * w + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Err(Error::NearSingular { dist: 0.0 });
        }
        if piv != col {
            for j in 0..w {
                a.swap(col * w + j, piv * w + j);
            }
        }
        let d = a[col * w + col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * w + col] / d;
            if f.norm() != 0.0 {
                for j in col..w {
                    let t = a[col * w + j];
                    a[r * w + j] -= f * t;
                }
            }
        }
    }
    let mut inv = Vec::with_capacity(n * n);
    for i in 0..n {
        let d = a[i * w + i];
        for j in 0..n {
            inv.push(a[i * w + n + j] / d);
        }
    }
    Ok(CMat { n, data: inv })
}

/// Largest singular value of a complex matrix: `sqrt(λ_max(M^H M))`, with
/// the Hermitian Gram matrix diagonalized through its real symmetric
/// embedding `[[X, -Y], [Y, X]]` (power iteration stalls when the top two
/// singular values nearly tie).
pub(crate) fn largest_singular_value(m: &CMat) -> f64 {
    let n = m.n;
    // B = M^H M (Hermitian positive semidefinite)
    let mut b = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..n {
                acc += m.data[k * n + i].conj() * m.data[k * n + j];
            }
            b[i * n + j] = acc;
        }
    }
    let mut emb = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = b[i * n + j];
            emb[(i, j)] = v.re;
            emb[(n + i, n + j)] = v.re;
            emb[(i, n + j)] = -v.im;
            emb[(n + i, j)] = v.im;
        }
    }
    let top = emb
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    top.sqrt()
}
