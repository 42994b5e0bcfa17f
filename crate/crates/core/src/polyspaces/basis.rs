//! Scaled-monomial bases on elements and faces.
//!
//! A basis is a set of linear combinations of raw scaled monomials,
//! described by an invertible `transform` matrix C (column i holds the raw
//! coefficients of basis function i). Freshly constructed bases are raw
//! (C = I); [`ElemBasis::orthonormalize`] replaces C so the basis becomes
//! L2-orthonormal with respect to a quadrature rule exact for the products,
//! which keeps local solves well conditioned at higher degrees.

use super::monomial::{
    diff_matrix_2, diff_matrix_3, dim_scalar_2, dim_scalar_3, indices_2, indices_3, position_map_2,
    position_map_3,
};
use crate::quadrature::{ElemRule, FaceRule};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, Point3};
use std::collections::HashMap;

/// Scalar polynomial basis on an element, in coordinates `(x - center)/scale`.
#[derive(Clone, Debug)]
pub struct ElemBasis {
    pub degree: usize,
    pub center: Point3<f64>,
    pub scale: f64,
    pub exps: Vec<[u8; 3]>,
    pub transform: DMatrix<f64>,
    pub transform_inv: DMatrix<f64>,
}

/// Scalar polynomial basis on a face, in the scaled frame coordinates
/// `(s, t) = ((x - x_F).t1, (x - x_F).t2) / h_F`.
#[derive(Clone, Debug)]
pub struct FaceBasis {
    pub degree: usize,
    pub scale: f64,
    pub exps: Vec<[u8; 2]>,
    pub transform: DMatrix<f64>,
    pub transform_inv: DMatrix<f64>,
}

impl ElemBasis {
    pub fn raw(degree: usize, center: Point3<f64>, scale: f64) -> Self {
        let exps = indices_3(degree);
        let n = exps.len();
        ElemBasis { degree, center, scale, exps, transform: DMatrix::identity(n, n), transform_inv: DMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    /// Values of the raw monomials at the given points: (dim x n_pts).
    pub fn raw_tab(&self, points: &[Point3<f64>]) -> DMatrix<f64> {
        let n = self.dim();
        let mut tab = DMatrix::zeros(n, points.len());
        let mut powers = [vec![1.0; self.degree + 1], vec![1.0; self.degree + 1], vec![1.0; self.degree + 1]];
        for (p, pt) in points.iter().enumerate() {
            let xi = (pt - self.center) / self.scale;
            for a in 0..3 {
                for d in 1..=self.degree {
                    powers[a][d] = powers[a][d - 1] * xi[a];
                }
            }
            for (j, e) in self.exps.iter().enumerate() {
                tab[(j, p)] = powers[0][e[0] as usize] * powers[1][e[1] as usize] * powers[2][e[2] as usize];
            }
        }
        tab
    }

    /// Values of the basis functions at the given points: (dim x n_pts).
    pub fn tab(&self, points: &[Point3<f64>]) -> DMatrix<f64> {
        self.transform.transpose() * self.raw_tab(points)
    }

    /// Values of the physical partial derivatives of the basis functions.
    pub fn tab_grad(&self, points: &[Point3<f64>]) -> [DMatrix<f64>; 3] {
        let raw = self.raw_tab(points);
        let pos = position_map_3(&self.exps);
        std::array::from_fn(|axis| {
            let d = diff_matrix_3(&self.exps, &pos, axis);
            (d * &self.transform).transpose() * &raw / self.scale
        })
    }

    /// Raw-coefficient vector -> basis coordinates.
    pub fn raw_to_basis(&self, raw: &DVector<f64>) -> DVector<f64> {
        &self.transform_inv * raw
    }

    /// Replace the transform so the basis is orthonormal for the rule.
    pub fn orthonormalize(&mut self, rule: &ElemRule) -> Result<()> {
        let m = mass_from_tab(&self.tab(&rule.points), &rule.weights);
        let chol = m
            .cholesky()
            .ok_or_else(|| Error::Conditioning("element mass matrix is not positive definite".into()))?;
        let l = chol.l();
        let l_inv_t = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Conditioning("singular Cholesky factor".into()))?
            .transpose();
        self.transform = &self.transform * &l_inv_t;
        self.transform_inv = l.transpose() * &self.transform_inv;
        Ok(())
    }
}

impl FaceBasis {
    pub fn raw(degree: usize, scale: f64) -> Self {
        let exps = indices_2(degree);
        let n = exps.len();
        FaceBasis { degree, scale, exps, transform: DMatrix::identity(n, n), transform_inv: DMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn raw_tab(&self, uv: &[[f64; 2]]) -> DMatrix<f64> {
        let n = self.dim();
        let mut tab = DMatrix::zeros(n, uv.len());
        let mut powers = [vec![1.0; self.degree + 1], vec![1.0; self.degree + 1]];
        for (p, q) in uv.iter().enumerate() {
            for a in 0..2 {
                for d in 1..=self.degree {
                    powers[a][d] = powers[a][d - 1] * q[a];
                }
            }
            for (j, e) in self.exps.iter().enumerate() {
                tab[(j, p)] = powers[0][e[0] as usize] * powers[1][e[1] as usize];
            }
        }
        tab
    }

    pub fn tab(&self, uv: &[[f64; 2]]) -> DMatrix<f64> {
        self.transform.transpose() * self.raw_tab(uv)
    }

    /// Physical in-plane derivatives (d/d s_phys, d/d t_phys).
    pub fn tab_grad(&self, uv: &[[f64; 2]]) -> [DMatrix<f64>; 2] {
        let raw = self.raw_tab(uv);
        let pos = position_map_2(&self.exps);
        std::array::from_fn(|axis| {
            let d = diff_matrix_2(&self.exps, &pos, axis);
            (d * &self.transform).transpose() * &raw / self.scale
        })
    }

    pub fn raw_to_basis(&self, raw: &DVector<f64>) -> DVector<f64> {
        &self.transform_inv * raw
    }

    pub fn orthonormalize(&mut self, rule: &FaceRule) -> Result<()> {
        let m = mass_from_tab(&self.tab(&rule.uv), &rule.weights);
        let chol = m
            .cholesky()
            .ok_or_else(|| Error::Conditioning("face mass matrix is not positive definite".into()))?;
        let l = chol.l();
        let l_inv_t = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Conditioning("singular Cholesky factor".into()))?
            .transpose();
        self.transform = &self.transform * &l_inv_t;
        self.transform_inv = l.transpose() * &self.transform_inv;
        Ok(())
    }
}

/// Gram matrix of the rows of `tab` under the quadrature weights.
pub fn mass_from_tab(tab: &DMatrix<f64>, weights: &[f64]) -> DMatrix<f64> {
    weighted_inner(tab, tab, weights)
}

/// `A diag(w) B^T` for tabulated values (n_a x n_pts) x (n_b x n_pts).
pub fn weighted_inner(a: &DMatrix<f64>, b: &DMatrix<f64>, weights: &[f64]) -> DMatrix<f64> {
    let mut bw = b.clone();
    for (p, &w) in weights.iter().enumerate() {
        bw.column_mut(p).scale_mut(w);
    }
    a * bw.transpose()
}

/// L2 projection of point values onto a (scalar) element basis.
pub fn project_values_elem(basis: &ElemBasis, rule: &ElemRule, values: &[f64]) -> Result<DVector<f64>> {
    let tab = basis.tab(&rule.points);
    project_values(&tab, &rule.weights, values)
}

/// L2 projection of point values onto a (scalar) face basis.
pub fn project_values_face(basis: &FaceBasis, rule: &FaceRule, values: &[f64]) -> Result<DVector<f64>> {
    let tab = basis.tab(&rule.uv);
    project_values(&tab, &rule.weights, values)
}

fn project_values(tab: &DMatrix<f64>, weights: &[f64], values: &[f64]) -> Result<DVector<f64>> {
    let mass = mass_from_tab(tab, weights);
    let mut rhs = DVector::zeros(tab.nrows());
    for (p, &w) in weights.iter().enumerate() {
        let wv = w * values[p];
        for j in 0..tab.nrows() {
            rhs[j] += tab[(j, p)] * wv;
        }
    }
    mass.cholesky()
        .ok_or_else(|| Error::Conditioning("singular mass matrix in projection".into()))?
        .solve(&rhs)
        .pipe_ok()
}

trait PipeOk: Sized {
    fn pipe_ok(self) -> Result<Self> {
        Ok(self)
    }
}
impl<T> PipeOk for T {}

/// Raw coefficient columns of a component-major vector polynomial expressed
/// in the coordinates of the vector basis built over `scalar`: applies the
/// inverse transform blockwise. `raw` is (comp_count*dim x m).
pub fn vec_raw_to_basis_cols(inv: &DMatrix<f64>, comp_count: usize, raw: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = inv.nrows();
    assert_eq!(raw.nrows(), comp_count * dim);
    let mut out = DMatrix::zeros(raw.nrows(), raw.ncols());
    for c in 0..comp_count {
        let block = raw.rows(c * dim, dim);
        out.rows_mut(c * dim, dim).copy_from(&(inv * block));
    }
    out
}

/// Dimensions of the scalar/vector polynomial spaces used in layouts.
pub fn dims(q_elem: usize, q_face: usize) -> (usize, usize) {
    (dim_scalar_3(q_elem), dim_scalar_2(q_face))
}

/// Position maps are needed by a few callers; re-export thin helpers.
pub fn pos_map_3(exps: &[[u8; 3]]) -> HashMap<[u8; 3], usize> {
    position_map_3(exps)
}
pub fn pos_map_2(exps: &[[u8; 2]]) -> HashMap<[u8; 2], usize> {
    position_map_2(exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_cubic;
    use crate::quadrature::{element_rule, face_rule};
    use approx::assert_relative_eq;

    #[test]
    fn basis_dims() {
        let mesh = generate_cubic(1).unwrap();
        let elem = &mesh.elements[0];
        let b = ElemBasis::raw(2, elem.star, elem.diameter);
        assert_eq!(b.dim(), 10);
        let f = FaceBasis::raw(1, mesh.faces[0].diameter);
        assert_eq!(f.dim(), 3);
        // vector dims are 3x / 2x the scalar ones
        assert_eq!(3 * b.dim(), 30);
        assert_eq!(2 * f.dim(), 6);
    }

    #[test]
    fn orthonormalized_mass_is_identity() {
        let mesh = generate_cubic(1).unwrap();
        let elem = &mesh.elements[0];
        let rule = element_rule(&mesh, 0, 8).unwrap();
        let mut b = ElemBasis::raw(4, elem.star, elem.diameter);
        b.orthonormalize(&rule).unwrap();
        let m = mass_from_tab(&b.tab(&rule.points), &rule.weights);
        let err = (&m - DMatrix::identity(m.nrows(), m.ncols())).abs().max();
        assert!(err < 1e-10, "mass deviates from identity by {err}");

        let frule = face_rule(&mesh, 0, 8).unwrap();
        let mut fb = FaceBasis::raw(4, mesh.faces[0].diameter);
        fb.orthonormalize(&frule).unwrap();
        let m = mass_from_tab(&fb.tab(&frule.uv), &frule.weights);
        let err = (&m - DMatrix::identity(m.nrows(), m.ncols())).abs().max();
        assert!(err < 1e-10);
    }

    #[test]
    fn projection_is_idempotent_on_members() {
        let mesh = generate_cubic(1).unwrap();
        let elem = &mesh.elements[0];
        let rule = element_rule(&mesh, 0, 6).unwrap();
        let mut b = ElemBasis::raw(2, elem.star, elem.diameter);
        b.orthonormalize(&rule).unwrap();
        // a polynomial already in the space projects to itself
        let f = |p: &Point3<f64>| 1.0 + 2.0 * p.x - p.y * p.z;
        let values: Vec<f64> = rule.points.iter().map(f).collect();
        let coeffs = project_values_elem(&b, &rule, &values).unwrap();
        let tab = b.tab(&rule.points);
        for (p, pt) in rule.points.iter().enumerate() {
            let recon: f64 = (0..b.dim()).map(|j| coeffs[j] * tab[(j, p)]).sum();
            assert_relative_eq!(recon, f(pt), epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_residual_is_orthogonal() {
        // project x^3 onto P^1: the residual must be L2-orthogonal to P^1
        let mesh = generate_cubic(1).unwrap();
        let elem = &mesh.elements[0];
        let rule = element_rule(&mesh, 0, 8).unwrap();
        let mut b = ElemBasis::raw(1, elem.star, elem.diameter);
        b.orthonormalize(&rule).unwrap();
        let f = |p: &Point3<f64>| p.x * p.x * p.x;
        let values: Vec<f64> = rule.points.iter().map(f).collect();
        let coeffs = project_values_elem(&b, &rule, &values).unwrap();
        let tab = b.tab(&rule.points);
        for j in 0..b.dim() {
            let mut inner = 0.0;
            for (p, &w) in rule.weights.iter().enumerate() {
                let recon: f64 = (0..b.dim()).map(|i| coeffs[i] * tab[(i, p)]).sum();
                inner += w * (values[p] - recon) * tab[(j, p)];
            }
            assert!(inner.abs() < 1e-11, "residual not orthogonal: {inner}");
        }
    }
}
