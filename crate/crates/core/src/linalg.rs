//! Small dense helpers shared by the public modules.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::C64;

/// Eigenvalues and eigenvectors of a Hermitian matrix, eigenvalues descending.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    // Symmetrize before handing to the solver; it only reads one triangle.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed `rows x cols` isometry: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub(crate) fn haar_isometry(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    assert!(rows >= cols);
    let g = gaussian_matrix(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..cols {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..rows {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Eigenvalues of the reduced matrix (smaller side) of an unnormalized bipartite vector,
/// sorted descending and clamped at zero. They sum to the squared norm of `amps`, so for
/// a normalized vector they are its Schmidt probabilities.
pub(crate) fn weighted_schmidt(amps: &[C64], da: usize, db: usize, out: &mut Vec<f64>) {
    out.clear();
    let small = da.min(db);
    let large = da.max(db);
    // entry (s, l) of the reshaped matrix with the smaller side as rows
    let at = |s: usize, l: usize| -> C64 {
        if da <= db {
            amps[s * db + l]
        } else {
            amps[l * db + s]
        }
    };
    match small {
        1 => out.push(amps.iter().map(|z| z.norm_sqr()).sum()),
        2 => {
            let mut a = 0.0;
            let mut c = 0.0;
            let mut b = C64::new(0.0, 0.0);
            for l in 0..large {
                let x = at(0, l);
                let y = at(1, l);
                a += x.norm_sqr();
                c += y.norm_sqr();
                b += x * y.conj();
            }
            // Cauchy-Binet keeps the determinant accurate for nearly product vectors.
            let mut det = 0.0;
            for j in 0..large {
                for k in (j + 1)..large {
                    det += (at(0, j) * at(1, k) - at(0, k) * at(1, j)).norm_sqr();
                }
            }
            let half = 0.5 * (a - c);
            let l1 = 0.5 * (a + c) + (half * half + b.norm_sqr()).sqrt();
            let l2 = if l1 > 0.0 { det / l1 } else { 0.0 };
            out.push(l1);
            out.push(l2.max(0.0));
        }
        3 => {
            let r = Matrix3::from_fn(|i, k| (0..large).map(|l| at(i, l) * at(k, l).conj()).sum::<C64>());
            let eig = SymmetricEigen::new(r);
            out.extend(eig.eigenvalues.iter().map(|&x| x.max(0.0)));
            out.sort_by(|x, y| y.total_cmp(x));
        }
        _ => {
            let r = DMatrix::from_fn(small, small, |i, k| {
                (0..large).map(|l| at(i, l) * at(k, l).conj()).sum::<C64>()
            });
            let eig = SymmetricEigen::new(r);
            out.extend(eig.eigenvalues.iter().map(|&x| x.max(0.0)));
            out.sort_by(|x, y| y.total_cmp(x));
        }
    }
}
