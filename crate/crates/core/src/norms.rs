//! Size functionals: weighted L^p norms on grids, sequence l^alpha norms,
//! weighted superposition densities, and Schatten norms of the weighted
//! projector operator discretized on a submanifold grid.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::geometry::SubmanifoldGrid;
use crate::specfun::{HarmonicDegree, ZonalKernel};
use crate::systems::SystemMatrix;

/// Weighted L^p norm of node values on a grid: (sum_i w_i |v_i|^p)^(1/p).
/// For p = infinity the quadrature weights are ignored and the maximum
/// modulus is returned. Exponents in (0, 1) are accepted and give the usual
/// quasi-norm (densities are measured in L^{p/2}, which drops below 1 for
/// p < 2 only — never for the exponent ranges here, but the quasi-norm case
/// costs nothing to support).
pub fn lp_norm(values: &[f64], grid: &SubmanifoldGrid, p: &Exponent) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::config(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    Ok(lp_norm_weighted(values, grid.weights(), p))
}

/// Weighted L^p norm against an explicit weight vector (lengths must match).
pub fn lp_norm_weighted(values: &[f64], weights: &[f64], p: &Exponent) -> f64 {
    assert_eq!(values.len(), weights.len(), "values and weights must align");
    match p {
        Exponent::Infinity => sup_norm(values),
        Exponent::Finite(_) => {
            let pf = p.to_f64();
            assert!(pf > 0.0, "lp_norm needs a positive exponent");
            let acc: f64 = values.iter().zip(weights).map(|(v, w)| w * v.abs().powf(pf)).sum();
            acc.powf(1.0 / pf)
        }
    }
}

/// Maximum modulus of the values.
pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Sequence norm ||t||_alpha = (sum |t_j|^alpha)^(1/alpha) for alpha >= 1;
/// alpha = infinity gives the maximum modulus.
pub fn lalpha_norm(t: &[f64], alpha: &Exponent) -> Result<f64> {
    match alpha {
        Exponent::Infinity => Ok(sup_norm(t)),
        Exponent::Finite(a) => {
            if *a < num_rational::Rational64::new(1, 1) {
                return Err(Error::domain(format!(
                    "sequence norm index alpha = {a} must be >= 1"
                )));
            }
            let af = alpha.to_f64();
            Ok(t.iter().map(|s| s.abs().powf(af)).sum::<f64>().powf(1.0 / af))
        }
    }
}

/// Weighted superposition density of a system at every grid node:
/// D(x_i) = sum_j t_j |f_j(x_i)|^2.
pub fn density(system: &SystemMatrix) -> Vec<f64> {
    let v = system.values();
    let t = system.t();
    (0..v.ncols())
        .map(|col| (0..v.nrows()).map(|row| t[row] * v[(row, col)].norm_sqr()).sum())
        .collect()
}

/// Dense Nystrom discretization of the weighted projector W P_l W* on the
/// submanifold carried by `grid`:
///
/// ```text
/// M_ij = sqrt(w_i) W(x_i) Z_l(x_i . x_j) conj(W(x_j)) sqrt(w_j)
/// ```
///
/// Hermitian by construction; its singular values approximate those of the
/// continuous operator.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    matrix: DMatrix<Complex<f64>>,
    degree: HarmonicDegree,
}

impl KernelOperator {
    pub fn matrix(&self) -> &DMatrix<Complex<f64>> {
        &self.matrix
    }

    pub fn degree(&self) -> HarmonicDegree {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex<f64> {
        self.matrix.diagonal().iter().sum()
    }
}

/// Assemble the weighted projector operator at degree l on S^d from per-node
/// complex weight values W(x_i).
pub fn assemble_projector_operator(
    d: u32,
    l: u32,
    grid: &SubmanifoldGrid,
    weight_values: &[Complex<f64>],
) -> Result<KernelOperator> {
    let kernel = ZonalKernel::new(d, l)?;
    assemble_projector_with_kernel(&kernel, grid, weight_values)
}

/// Same as [`assemble_projector_operator`] with a pre-built kernel (reused
/// across draws at a fixed degree).
pub fn assemble_projector_with_kernel(
    kernel: &ZonalKernel,
    grid: &SubmanifoldGrid,
    weight_values: &[Complex<f64>],
) -> Result<KernelOperator> {
    let n = grid.len();
    if weight_values.len() != n {
        return Err(Error::config(format!(
            "{} weight values for a grid of {} nodes",
            weight_values.len(),
            n
        )));
    }
    if grid.chart().d() != kernel.degree().d {
        return Err(Error::domain(format!(
            "grid lives on S^{} but the kernel on S^{}",
            grid.chart().d(),
            kernel.degree().d
        )));
    }
    let points = grid.points();
    let sqw: Vec<f64> = grid.weights().iter().map(|w| w.max(0.0).sqrt()).collect();
    let zii = kernel.eval(1.0)?;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex::new(sqw[i] * sqw[i] * weight_values[i].norm_sqr() * zii, 0.0);
        for j in (i + 1)..n {
            let z = kernel.eval(points[i].dot(&points[j]))?;
            let v = weight_values[i] * weight_values[j].conj() * (sqw[i] * sqw[j] * z);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    Ok(KernelOperator { matrix: m, degree: kernel.degree() })
}

/// Whether a matrix is Hermitian to within `tol` times its largest entry.
fn is_hermitian(m: &DMatrix<Complex<f64>>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.norm())).max(1.0);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > tol * scale {
                return false;
            }
        }
    }
    true
}

/// Singular values of a matrix in descending order. Hermitian matrices go
/// through the symmetric eigensolver (absolute eigenvalues); anything else
/// through dense SVD.
pub fn matrix_singular_values(m: &DMatrix<Complex<f64>>) -> Vec<f64> {
    let mut s: Vec<f64> = if is_hermitian(m, 1e-12) {
        m.clone().symmetric_eigen().eigenvalues.iter().map(|l| l.abs()).collect()
    } else {
        m.clone().svd(false, false).singular_values.iter().cloned().collect()
    };
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Singular values of a kernel operator in descending order.
pub fn singular_values(op: &KernelOperator) -> Vec<f64> {
    matrix_singular_values(op.matrix())
}

/// Schatten norm of a kernel operator: the l^s norm of its singular values
/// (s = infinity gives the operator norm). Errors on s < 1.
pub fn schatten_norm(op: &KernelOperator, s: &Exponent) -> Result<f64> {
    schatten_norm_matrix(op.matrix(), s)
}

/// Schatten norm of an arbitrary dense matrix.
pub fn schatten_norm_matrix(m: &DMatrix<Complex<f64>>, s: &Exponent) -> Result<f64> {
    if let Exponent::Finite(v) = s {
        if *v < num_rational::Rational64::new(1, 1) {
            return Err(Error::domain(format!("Schatten index s = {v} must be >= 1")));
        }
    }
    lalpha_norm(&matrix_singular_values(m), s)
}
