//! Structured mesh families on the unit cube: n^3 axis-aligned cubes, and
//! the matching tetrahedral mesh obtained by the 6-tet Kuhn split of each
//! cube (all tetrahedra share the cube's main diagonal, and face diagonals
//! agree between neighbouring cubes).

use super::{Mesh, PartsBuilder};
use crate::{Error, Result};
use nalgebra::Point3;

fn grid_vertices(n: usize) -> Vec<Point3<f64>> {
    let mut vertices = Vec::with_capacity((n + 1).pow(3));
    let step = 1.0 / n as f64;
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                vertices.push(Point3::new(i as f64 * step, j as f64 * step, k as f64 * step));
            }
        }
    }
    vertices
}

fn vid(n: usize, i: usize, j: usize, k: usize) -> usize {
    i + (n + 1) * (j + (n + 1) * k)
}

/// Uniform n x n x n partition of the unit cube into axis-aligned cubes.
pub fn generate_cubic(n: usize) -> Result<Mesh> {
    if n < 1 {
        return Err(Error::Config("cubic mesh needs n >= 1".into()));
    }
    let mut builder = PartsBuilder::new(grid_vertices(n));
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let v = |di: usize, dj: usize, dk: usize| vid(n, i + di, j + dj, k + dk);
                let loops = vec![
                    vec![v(0, 0, 0), v(0, 1, 0), v(0, 1, 1), v(0, 0, 1)], // x-
                    vec![v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)], // x+
                    vec![v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)], // y-
                    vec![v(0, 1, 0), v(1, 1, 0), v(1, 1, 1), v(0, 1, 1)], // y+
                    vec![v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(0, 1, 0)], // z-
                    vec![v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)], // z+
                ];
                builder.add_element(loops);
            }
        }
    }
    builder.build()
}

/// Matching tetrahedral mesh: each cube of the n^3 grid is split into the 6
/// Kuhn tetrahedra spanned by the monotone vertex paths from the low corner
/// to the high corner of the cube.
pub fn generate_tetrahedral(n: usize) -> Result<Mesh> {
    if n < 1 {
        return Err(Error::Config("tetrahedral mesh needs n >= 1".into()));
    }
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut builder = PartsBuilder::new(grid_vertices(n));
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMS {
                    let mut corner = [i, j, k];
                    let mut tet = [vid(n, corner[0], corner[1], corner[2]); 4];
                    for (step, &axis) in perm.iter().enumerate() {
                        corner[axis] += 1;
                        tet[step + 1] = vid(n, corner[0], corner[1], corner[2]);
                    }
                    let loops = vec![
                        vec![tet[1], tet[2], tet[3]],
                        vec![tet[0], tet[2], tet[3]],
                        vec![tet[0], tet[1], tet[3]],
                        vec![tet[0], tet[1], tet[2]],
                    ];
                    builder.add_element(loops);
                }
            }
        }
    }
    builder.build()
}
