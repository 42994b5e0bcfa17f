//! Raw symbolic differential operators on scaled-monomial coefficient
//! vectors. Vector polynomials are stored component-major: coefficients of
//! component c of a degree-q field occupy rows `c*dim..(c+1)*dim` of a
//! `3*dim_scalar_3(q)`-row vector (2 components on faces).
//!
//! All operators are physical: the element scale `h` enters as `1/h` per
//! derivative, and `(x - x_T) = h * xi` for the cross operator.

use super::monomial::{
    diff_matrix_2, diff_matrix_3, dim_scalar_2, dim_scalar_3, indices_2, indices_3, position_map_2,
    position_map_3,
};
use nalgebra::DMatrix;

// graded order: table(dst) has table(src) as prefix, so re-sizing a
// coefficient block is a row copy (truncated rows must be zero).
fn embed_3(dst_deg: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
    let rows = dim_scalar_3(dst_deg);
    let mut out = DMatrix::zeros(rows, m.ncols());
    let copy = rows.min(m.nrows());
    out.rows_mut(0, copy).copy_from(&m.rows(0, copy));
    if m.nrows() > rows {
        debug_assert!(m.rows(rows, m.nrows() - rows).amax() == 0.0);
    }
    out
}

/// Physical gradient: scalar deg <= src -> vector deg <= dst (needs dst >= src-1).
/// Returns (3*dim(dst) x dim(src)).
pub fn grad_raw_3(src_deg: usize, dst_deg: usize, h: f64) -> DMatrix<f64> {
    let src = indices_3(src_deg);
    let pos = position_map_3(&src);
    let n_src = src.len();
    let n_dst = dim_scalar_3(dst_deg);
    let mut out = DMatrix::zeros(3 * n_dst, n_src);
    for axis in 0..3 {
        let d = diff_matrix_3(&src, &pos, axis) / h;
        let dd = embed_3(src_deg, dst_deg, &d);
        out.rows_mut(axis * n_dst, n_dst).copy_from(&dd);
    }
    out
}

/// Physical curl: vector deg <= src -> vector deg <= dst (needs dst >= src-1).
/// Returns (3*dim(dst) x 3*dim(src)).
pub fn curl_raw_3(src_deg: usize, dst_deg: usize, h: f64) -> DMatrix<f64> {
    let src = indices_3(src_deg);
    let pos = position_map_3(&src);
    let n_src = src.len();
    let n_dst = dim_scalar_3(dst_deg);
    let d: Vec<DMatrix<f64>> =
        (0..3).map(|axis| embed_3(src_deg, dst_deg, &(diff_matrix_3(&src, &pos, axis) / h))).collect();
    let mut out = DMatrix::zeros(3 * n_dst, 3 * n_src);
    // curl v = (dy vz - dz vy, dz vx - dx vz, dx vy - dy vx)
    let terms: [(usize, usize, f64); 6] = [
        (0, 2, 1.0),  // row x: +dy applied to comp z
        (0, 1, -1.0), // row x: -dz applied to comp y  (axis encoded below)
        (1, 0, 1.0),
        (1, 2, -1.0),
        (2, 1, 1.0),
        (2, 0, -1.0),
    ];
    let axes: [usize; 6] = [1, 2, 2, 0, 0, 1];
    for (k, &(row, comp, sign)) in terms.iter().enumerate() {
        let block = &d[axes[k]] * sign;
        let mut dst = out.view_mut((row * n_dst, comp * n_src), (n_dst, n_src));
        dst += block;
    }
    out
}

/// Physical divergence: vector deg <= src -> scalar deg <= dst.
/// Returns (dim(dst) x 3*dim(src)).
pub fn div_raw_3(src_deg: usize, dst_deg: usize, h: f64) -> DMatrix<f64> {
    let src = indices_3(src_deg);
    let pos = position_map_3(&src);
    let n_src = src.len();
    let n_dst = dim_scalar_3(dst_deg);
    let mut out = DMatrix::zeros(n_dst, 3 * n_src);
    for axis in 0..3 {
        let d = embed_3(src_deg, dst_deg, &(diff_matrix_3(&src, &pos, axis) / h));
        out.view_mut((0, axis * n_src), (n_dst, n_src)).copy_from(&d);
    }
    out
}

/// Multiplication by `(x - x_T) x .` on raw vector coefficients:
/// vector deg <= src -> vector deg <= dst (needs dst >= src+1).
/// Returns (3*dim(dst) x 3*dim(src)).
pub fn cross_xt_raw_3(src_deg: usize, dst_deg: usize, h: f64) -> DMatrix<f64> {
    assert!(dst_deg >= src_deg + 1);
    let src = indices_3(src_deg);
    let dst = indices_3(dst_deg);
    let pos_dst = position_map_3(&dst);
    let n_src = src.len();
    let n_dst = dst.len();
    // shift matrix: multiply monomial by xi_axis
    let shift = |axis: usize| -> DMatrix<f64> {
        let mut s = DMatrix::zeros(n_dst, n_src);
        for (j, e) in src.iter().enumerate() {
            let mut f = *e;
            f[axis] += 1;
            s[(pos_dst[&f], j)] = 1.0;
        }
        s
    };
    let sx = shift(0);
    let sy = shift(1);
    let sz = shift(2);
    let mut out = DMatrix::zeros(3 * n_dst, 3 * n_src);
    // (a x v) with a = h*xi: rows (a_y v_z - a_z v_y, a_z v_x - a_x v_z, a_x v_y - a_y v_x)
    let put = |out: &mut DMatrix<f64>, row: usize, comp: usize, m: &DMatrix<f64>, sign: f64| {
        let mut v = out.view_mut((row * n_dst, comp * n_src), (n_dst, n_src));
        v += m * (sign * h);
    };
    put(&mut out, 0, 2, &sy, 1.0);
    put(&mut out, 0, 1, &sz, -1.0);
    put(&mut out, 1, 0, &sz, 1.0);
    put(&mut out, 1, 2, &sx, -1.0);
    put(&mut out, 2, 1, &sx, 1.0);
    put(&mut out, 2, 0, &sy, -1.0);
    out
}

/// Physical tangential gradient on a face: scalar deg <= src -> tangential
/// vector deg <= dst in frame components. Returns (2*dim2(dst) x dim2(src)).
pub fn grad_raw_2(src_deg: usize, dst_deg: usize, h: f64) -> DMatrix<f64> {
    let src = indices_2(src_deg);
    let pos = position_map_2(&src);
    let n_src = src.len();
    let n_dst = dim_scalar_2(dst_deg);
    let mut out = DMatrix::zeros(2 * n_dst, n_src);
    for axis in 0..2 {
        let d = diff_matrix_2(&src, &pos, axis) / h;
        let rows = n_dst.min(d.nrows());
        out.view_mut((axis * n_dst, 0), (rows, n_src)).copy_from(&d.rows(0, rows));
    }
    out
}
