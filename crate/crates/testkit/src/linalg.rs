//! Classical dense linear algebra: matrix exponential by scaling and
//! squaring, and a cyclic Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex64;

use crate::mat::CMat;

/// Matrix exponential `exp(A)` via scaling-and-squaring over a Taylor
/// series. Intended for the small dense matrices used in tests.
pub fn expm(a: &CMat) -> CMat {
    let n = a.dim;
    // Infinity norm (max row sum) decides the scaling power.
    let norm = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings), 0.0));

    let mut sum = CMat::identity(n);
    let mut term = CMat::identity(n);
    for k in 1..=40u32 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / f64::from(k), 0.0));
        sum = sum.add_scaled(Complex64::new(1.0, 0.0), &term);
        if term.frobenius() < 1e-18 * sum.frobenius() {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = out.mul(&out);
    }
    out
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, vectors)` with eigenvalues sorted ascending
/// and `vectors` holding the matching eigenvectors as columns.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.dim;
    assert!(m.max_abs_diff(&m.dagger()) < 1e-10, "matrix must be Hermitian");
    let mut a = m.clone();
    let mut v = CMat::identity(n);
    let scale = a.frobenius().max(1.0);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate_out(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = v[(row, old_col)];
        }
    }
    (values, vectors)
}

/// One complex Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate_out(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let b = a[(p, q)];
    let h = b.norm();
    if h < 1e-300 {
        return;
    }
    // Factor out the phase of the off-diagonal element, then solve the
    // real 2x2 problem [[app, h], [h, aqq]].
    let phase = b / h;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (app - aqq) / (2.0 * h);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Plane rotation G: identity except in the (p, q) block, where it
    // is diag(phase, 1) * [[c, -s], [s, c]].
    let gpp = phase * c;
    let gpq = phase * -s;
    let gqp = Complex64::new(s, 0.0);
    let gqq = Complex64::new(c, 0.0);

    let n = a.dim;
    // Right-multiply A and V by G (touches columns p and q).
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
    // Left-multiply A by G† (touches rows p and q).
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli_word_matrix;

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMat::zeros(4);
        assert!(expm(&z).max_abs_diff(&CMat::identity(4)) < 1e-15);
    }

    #[test]
    fn expm_rotation_matches_closed_form() {
        // exp(-i θ/2 X) = cos(θ/2) I - i sin(θ/2) X.
        let theta = 1.3;
        let x = pauli_word_matrix(1, &[(0, 'X')]);
        let a = x.scale(Complex64::new(0.0, -theta / 2.0));
        let got = expm(&a);
        let want = CMat::identity(2)
            .scale(Complex64::new((theta / 2.0).cos(), 0.0))
            .add_scaled(Complex64::new(0.0, -(theta / 2.0).sin()), &x);
        assert!(got.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn expm_handles_norms_requiring_scaling() {
        // exp(i a Z) for a large angle stays exactly diagonal.
        let a = 37.7;
        let z = pauli_word_matrix(1, &[(0, 'Z')]);
        let got = expm(&z.scale(Complex64::new(0.0, a)));
        let want = CMat::from_rows(
            2,
            &[(a.cos(), a.sin()), (0.0, 0.0), (0.0, 0.0), (a.cos(), -a.sin())],
        );
        assert!(got.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn eigensolver_reproduces_pauli_spectra() {
        // X ⊗ X has eigenvalues {-1, -1, 1, 1}.
        let xx = pauli_word_matrix(2, &[(0, 'X'), (1, 'X')]);
        let (vals, vecs) = hermitian_eigen(&xx);
        let want = [-1.0, -1.0, 1.0, 1.0];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).abs() < 1e-12);
        }
        // Columns are genuine eigenvectors: A v = λ v.
        for col in 0..4 {
            let v: Vec<Complex64> = (0..4).map(|row| vecs[(row, col)]).collect();
            let av = xx.apply(&v);
            for row in 0..4 {
                assert!((av[row] - v[row] * vals[col]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigensolver_handles_complex_off_diagonals() {
        // Y has spectrum {-1, 1} with complex eigenvectors.
        let y = pauli_word_matrix(1, &[(0, 'Y')]);
        let (vals, vecs) = hermitian_eigen(&y);
        assert!((vals[0] + 1.0).abs() < 1e-13 && (vals[1] - 1.0).abs() < 1e-13);
        for col in 0..2 {
            let v: Vec<Complex64> = (0..2).map(|row| vecs[(row, col)]).collect();
            let av = y.apply(&v);
            for row in 0..2 {
                assert!((av[row] - v[row] * vals[col]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigensolver_on_random_hermitian_matrix() {
        // Deterministic pseudo-random Hermitian matrix; check the full
        // reconstruction A = V Λ V†.
        let n = 6;
        let mut a = CMat::zeros(n);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    Complex64::new(next(), 0.0)
                } else {
                    Complex64::new(next(), next())
                };
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
        let (vals, vecs) = hermitian_eigen(&a);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]), "sorted ascending");
        let mut reconstructed = CMat::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reconstructed[(i, j)] +=
                        vecs[(i, k)] * vals[k] * vecs[(j, k)].conj();
                }
            }
        }
        assert!(reconstructed.max_abs_diff(&a) < 1e-11);
    }
}
