//! Multi-index tables and symbolic calculus on (scaled) monomials.
//!
//! All polynomial spaces in the library are spanned by scaled monomials
//! `((x - x_c)/h)^alpha` on elements and `(s, t)^alpha` in the 2D orthonormal
//! frame of a face. Multi-indices are ordered graded-lexicographically, so
//! the table of degree `q` is a prefix of the table of degree `q + 1`; this
//! lets lower-degree coefficient vectors embed by zero-padding.

use std::collections::HashMap;

/// Dimension of the scalar polynomial space of total degree <= q in 3 variables.
pub fn dim_scalar_3(q: usize) -> usize {
    (q + 1) * (q + 2) * (q + 3) / 6
}

/// Dimension of the scalar polynomial space of total degree <= q in 2 variables.
pub fn dim_scalar_2(q: usize) -> usize {
    (q + 1) * (q + 2) / 2
}

/// Graded-lexicographic multi-index table for 3 variables, degrees 0..=q.
pub fn indices_3(q: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::with_capacity(dim_scalar_3(q));
    for total in 0..=q {
        for a in (0..=total).rev() {
            for b in (0..=(total - a)).rev() {
                let c = total - a - b;
                out.push([a as u8, b as u8, c as u8]);
            }
        }
    }
    out
}

/// Graded-lexicographic multi-index table for 2 variables, degrees 0..=q.
pub fn indices_2(q: usize) -> Vec<[u8; 2]> {
    let mut out = Vec::with_capacity(dim_scalar_2(q));
    for total in 0..=q {
        for a in (0..=total).rev() {
            let b = total - a;
            out.push([a as u8, b as u8]);
        }
    }
    out
}

/// Position lookup for a 3-variable multi-index table.
pub fn position_map_3(table: &[[u8; 3]]) -> HashMap<[u8; 3], usize> {
    table.iter().enumerate().map(|(i, &e)| (e, i)).collect()
}

/// Position lookup for a 2-variable multi-index table.
pub fn position_map_2(table: &[[u8; 2]]) -> HashMap<[u8; 2], usize> {
    table.iter().enumerate().map(|(i, &e)| (e, i)).collect()
}

/// Dense polynomial in 3 scaled variables, coefficients over `indices_3(degree)`.
#[derive(Clone, Debug)]
pub struct Poly3 {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl Poly3 {
    pub fn zero(degree: usize) -> Self {
        Poly3 { degree, coeffs: vec![0.0; dim_scalar_3(degree)] }
    }

    pub fn one(degree: usize) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[0] = 1.0;
        p
    }

    /// Multiply in place by the affine form `c + g[0] x + g[1] y + g[2] z`.
    /// The receiving table must be large enough for the raised degree.
    pub fn mul_affine(&self, c: f64, g: [f64; 3], table: &[[u8; 3]], pos: &HashMap<[u8; 3], usize>) -> Poly3 {
        let mut out = Poly3::zero(self.degree);
        debug_assert_eq!(table.len(), self.coeffs.len());
        for (i, &e) in table.iter().enumerate() {
            let v = self.coeffs[i];
            if v == 0.0 {
                continue;
            }
            out.coeffs[i] += c * v;
            for k in 0..3 {
                if g[k] != 0.0 {
                    let mut f = e;
                    f[k] += 1;
                    out.coeffs[pos[&f]] += g[k] * v;
                }
            }
        }
        out
    }
}

/// Dense polynomial in 2 scaled variables, coefficients over `indices_2(degree)`.
#[derive(Clone, Debug)]
pub struct Poly2 {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Poly2 { degree, coeffs: vec![0.0; dim_scalar_2(degree)] }
    }

    pub fn one(degree: usize) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[0] = 1.0;
        p
    }

    /// Multiply in place by the affine form `c + g[0] s + g[1] t`.
    pub fn mul_affine(&self, c: f64, g: [f64; 2], table: &[[u8; 2]], pos: &HashMap<[u8; 2], usize>) -> Poly2 {
        let mut out = Poly2::zero(self.degree);
        for (i, &e) in table.iter().enumerate() {
            let v = self.coeffs[i];
            if v == 0.0 {
                continue;
            }
            out.coeffs[i] += c * v;
            for k in 0..2 {
                if g[k] != 0.0 {
                    let mut f = e;
                    f[k] += 1;
                    out.coeffs[pos[&f]] += g[k] * v;
                }
            }
        }
        out
    }
}

/// Coefficient matrix of `d/dx_axis` acting on raw scaled monomials of the
/// given table: column `j` holds the coefficients of the derivative of
/// monomial `j` in the same table (degree drops, so the prefix property
/// guarantees the entries fit). The physical `1/h` factor is NOT included.
pub fn diff_matrix_3(table: &[[u8; 3]], pos: &HashMap<[u8; 3], usize>, axis: usize) -> nalgebra::DMatrix<f64> {
    let n = table.len();
    let mut d = nalgebra::DMatrix::zeros(n, n);
    for (j, &e) in table.iter().enumerate() {
        if e[axis] > 0 {
            let mut f = e;
            f[axis] -= 1;
            d[(pos[&f], j)] = e[axis] as f64;
        }
    }
    d
}

/// 2D analogue of [`diff_matrix_3`].
pub fn diff_matrix_2(table: &[[u8; 2]], pos: &HashMap<[u8; 2], usize>, axis: usize) -> nalgebra::DMatrix<f64> {
    let n = table.len();
    let mut d = nalgebra::DMatrix::zeros(n, n);
    for (j, &e) in table.iter().enumerate() {
        if e[axis] > 0 {
            let mut f = e;
            f[axis] -= 1;
            d[(pos[&f], j)] = e[axis] as f64;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sizes_match_binomial_counts() {
        for q in 0..=6 {
            assert_eq!(indices_3(q).len(), dim_scalar_3(q));
            assert_eq!(indices_2(q).len(), dim_scalar_2(q));
        }
        assert_eq!(dim_scalar_3(2), 10);
        assert_eq!(dim_scalar_2(1), 3);
    }

    #[test]
    fn lower_degree_table_is_prefix() {
        let t4 = indices_3(4);
        let t2 = indices_3(2);
        assert_eq!(&t4[..t2.len()], &t2[..]);
        let s3 = indices_2(3);
        let s1 = indices_2(1);
        assert_eq!(&s3[..s1.len()], &s1[..]);
    }

    #[test]
    fn diff_matrix_differentiates_x_squared() {
        let table = indices_3(2);
        let pos = position_map_3(&table);
        let d = diff_matrix_3(&table, &pos, 0);
        // x^2 is [2,0,0]; derivative 2x
        let j = pos[&[2, 0, 0]];
        let i = pos[&[1, 0, 0]];
        assert_eq!(d[(i, j)], 2.0);
        assert_eq!(d.column(j).iter().filter(|&&v| v != 0.0).count(), 1);
    }
}
