//! Orthonormal frames and best approximation in `l_{q,σ}`.

use alloc::vec::Vec;

use crate::norms::{mixed_norm_f64, Matrix};

/// Euclidean-orthonormal basis vectors of one subspace, each of length `mk`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Frame {
    pub(crate) basis: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Frame {
    /// Gram-Schmidt (applied twice) on `vectors`; nearly dependent vectors
    /// are dropped.
    pub(crate) fn orthonormalize(vectors: Vec<Vec<f64>>) -> Self {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
        for mut v in vectors {
            let before = libm::sqrt(dot(&v, &v));
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&v, b);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = libm::sqrt(dot(&v, &v));
            if norm > 1e-10 * before.max(1e-300) {
                v.iter_mut().for_each(|x| *x /= norm);
                basis.push(v);
            }
        }
        Self { basis }
    }

    pub(crate) fn dim(&self) -> usize {
        self.basis.len()
    }

    fn combine(&self, coeffs: &[f64], len: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; len];
        for (b, c) in self.basis.iter().zip(coeffs) {
            out.iter_mut().zip(b).for_each(|(o, y)| *o += c * y);
        }
        out
    }
}

/// Result of `inf_{y ∈ L} ‖x − y‖_{q,σ}`.
#[derive(Debug, Clone)]
pub(crate) struct Approximation {
    pub(crate) distance: f64,
    /// `x − y*`.
    pub(crate) residual: Matrix,
}

const MAX_STEPS: usize = 50;

/// Solves the symmetric positive definite system `a·x = b` in place
/// (Cholesky); `None` if `a` is numerically singular.
fn solve_spd(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for j in 0..n {
        let mut d = a[j][j];
        for s in 0..j {
            d -= a[j][s] * a[j][s];
        }
        if !(d > 1e-300) {
            return None;
        }
        let d = libm::sqrt(d);
        a[j][j] = d;
        for i in j + 1..n {
            let mut x = a[i][j];
            for s in 0..j {
                x -= a[i][s] * a[j][s];
            }
            a[i][j] = x / d;
        }
    }
    for i in 0..n {
        for s in 0..i {
            b[i] -= a[i][s] * b[s];
        }
        b[i] /= a[i][i];
    }
    for i in (0..n).rev() {
        for s in i + 1..n {
            b[i] -= a[s][i] * b[s];
        }
        b[i] /= a[i][i];
    }
    Some(b)
}

/// Distance from `x` to `span(frame)` in `l_{q,σ}` (`u = 1/q`, `v = 1/σ`,
/// both finite exponents `≥ 2`).
///
/// Exact Euclidean projection for `q = σ = 2`; otherwise the projection
/// seeds a damped Newton iteration on `F(c) = ‖x − Bc‖^σ = Σ_j S_j^{σ/q}`,
/// `S_j = Σ_i |r_ij|^q`, computed on `x` rescaled to unit norm.
pub(crate) fn distance_to_subspace(x: &Matrix, frame: &Frame, u: f64, v: f64) -> Approximation {
    let (m, k) = (x.rows(), x.cols());
    let len = m * k;
    let mut coeffs: Vec<f64> = frame.basis.iter().map(|b| dot(x.as_slice(), b)).collect();
    let residual_of = |c: &[f64]| {
        let y = frame.combine(c, len);
        let data = x.as_slice().iter().zip(&y).map(|(a, b)| a - b).collect();
        Matrix::from_column_major(m, k, data).expect("length matches")
    };
    let mut residual = residual_of(&coeffs);
    let mut distance = mixed_norm_f64(&residual, u, v);
    let dim = frame.dim();
    if dim == 0 || (u == 0.5 && v == 0.5) || distance == 0.0 {
        return Approximation { distance, residual };
    }
    let (q, sigma) = (1.0 / u, 1.0 / v);
    let scale = distance;
    for _ in 0..MAX_STEPS {
        if distance == 0.0 {
            break;
        }
        // Gradient and Hessian of F in r, at r / scale.
        let mut grad_r = alloc::vec![0.0; len];
        let mut gram = alloc::vec![alloc::vec![0.0; dim]; dim];
        let mut rank_one = alloc::vec![0.0; dim];
        for j in 0..k {
            let col: Vec<f64> = residual.column(j).iter().map(|e| e / scale).collect();
            let sj: f64 = col.iter().map(|e| libm::pow(e.abs(), q)).sum();
            if sj == 0.0 {
                continue;
            }
            let a = sigma * libm::pow(sj, sigma / q - 1.0);
            let b = sigma * (sigma - q) * libm::pow(sj, sigma / q - 2.0);
            let h: Vec<f64> = col.iter().map(|e| libm::pow(e.abs(), q - 1.0) * e.signum()).collect();
            let diag: Vec<f64> = col.iter().map(|e| a * (q - 1.0) * libm::pow(e.abs(), q - 2.0)).collect();
            for i in 0..m {
                grad_r[j * m + i] = a * h[i];
            }
            for (s, ba) in frame.basis.iter().enumerate() {
                rank_one[s] = (0..m).map(|i| ba[j * m + i] * h[i]).sum();
            }
            for s in 0..dim {
                let bs = &frame.basis[s][j * m..(j + 1) * m];
                for t in 0..=s {
                    let bt = &frame.basis[t][j * m..(j + 1) * m];
                    let d: f64 = (0..m).map(|i| bs[i] * diag[i] * bt[i]).sum();
                    gram[s][t] += d + b * rank_one[s] * rank_one[t];
                }
            }
        }
        for s in 0..dim {
            for t in 0..s {
                gram[t][s] = gram[s][t];
            }
        }
        // dF/dc = −Bᵀ∇F; Newton step Δc = (BᵀHB)⁻¹ Bᵀ∇F.
        let rhs: Vec<f64> = frame.basis.iter().map(|b| dot(b, &grad_r)).collect();
        let trace: f64 = (0..dim).map(|a| gram[a][a]).sum();
        for (a, row) in gram.iter_mut().enumerate() {
            row[a] += 1e-10 * trace.max(1e-300);
        }
        let step = match solve_spd(gram, rhs.clone()) {
            Some(step) => step,
            None => rhs.clone(),
        };
        let f_now = libm::pow(distance / scale, sigma);
        if dot(&rhs, &step) < 1e-15 * f_now {
            break;
        }
        let mut eta = 1.0;
        let mut accepted = false;
        while eta > 1e-8 {
            let trial: Vec<f64> = coeffs.iter().zip(&step).map(|(c, d)| c + eta * scale * d).collect();
            let r = residual_of(&trial);
            let d = mixed_norm_f64(&r, u, v);
            if d < distance {
                accepted = distance - d > 1e-14 * distance;
                coeffs = trial;
                residual = r;
                distance = d;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Approximation { distance, residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(len: usize, i: usize) -> Vec<f64> {
        let mut v = alloc::vec![0.0; len];
        v[i] = 1.0;
        v
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let f = Frame::orthonormalize(alloc::vec![
            alloc::vec![1.0, 1.0, 0.0],
            alloc::vec![2.0, 2.0, 0.0],
            alloc::vec![0.0, 1.0, 1.0],
        ]);
        assert_eq!(f.dim(), 2);
        for a in &f.basis {
            assert!((dot(a, a) - 1.0).abs() < 1e-14);
        }
        assert!(dot(&f.basis[0], &f.basis[1]).abs() < 1e-14);
    }

    #[test]
    fn coordinate_subspace_distance() {
        let x = Matrix::from_column_major(2, 2, alloc::vec![1.0, -2.0, 3.0, 0.5]).unwrap();
        let f = Frame::orthonormalize(alloc::vec![unit(4, 2)]);
        let a = distance_to_subspace(&x, &f, 0.5, 0.5);
        assert!((a.distance - libm::sqrt(1.0 + 4.0 + 0.25)).abs() < 1e-14);
        // Removing a coordinate is also optimal in l_4.
        let a = distance_to_subspace(&x, &f, 0.25, 0.25);
        let expected = libm::pow(1.0 + 16.0 + 0.0625, 0.25);
        assert!((a.distance - expected).abs() < 1e-10);
    }

    #[test]
    fn descent_beats_projection_in_l4() {
        // x = (1, 0), L = span(1, 1)/√2 in l_4^2: optimum y = (1/2, 1/2).
        let x = Matrix::from_column_major(2, 1, alloc::vec![1.0, 0.0]).unwrap();
        let f = Frame::orthonormalize(alloc::vec![alloc::vec![1.0, 1.0]]);
        let a = distance_to_subspace(&x, &f, 0.25, 1.0 / 3.0);
        let expected = libm::pow(2.0 * 0.0625, 0.25);
        assert!((a.distance - expected).abs() < 1e-8, "{}", a.distance);
        // Asymmetric case compared against a dense scan over the coefficient.
        let x = Matrix::from_column_major(3, 1, alloc::vec![1.0, -0.3, 0.2]).unwrap();
        let f = Frame::orthonormalize(alloc::vec![alloc::vec![0.5, 1.0, -0.2]]);
        let a = distance_to_subspace(&x, &f, 1.0 / 3.0, 1.0 / 3.0);
        let b = &f.basis[0];
        let best = (-40000..40000)
            .map(|i| {
                let c = i as f64 * 1e-4;
                let r = Matrix::from_fn(3, 1, |j, _| x.get(j, 0) - c * b[j]);
                mixed_norm_f64(&r, 1.0 / 3.0, 1.0 / 3.0)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(a.distance <= best + 1e-9 && a.distance > best - 1e-6);
    }
}
