//! Analytic integration oracles for the verification suite.
//!
//! Monomials are integrated over tessellations of mesh cells by expanding
//! the affine simplex maps symbolically and applying the closed-form simplex
//! integrals `a! b! c! / (a+b+c+3)!` (tetrahedron) and `a! b! / (a+b+2)!`
//! (triangle). This path shares no code with the quadrature rules it checks.

use crate::mesh::Mesh;
use crate::polyspaces::monomial::{indices_2, indices_3, position_map_2, position_map_3, Poly2, Poly3};
use nalgebra::Point3;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product::<f64>().max(1.0)
}

/// Integral of the scaled monomial `((x - center)/scale)^exp` over the
/// tetrahedron with the given vertices.
pub fn monomial_integral_tet(
    verts: [Point3<f64>; 4],
    center: Point3<f64>,
    scale: f64,
    exp: [u8; 3],
) -> f64 {
    let degree = (exp[0] + exp[1] + exp[2]) as usize;
    let table = indices_3(degree);
    let pos = position_map_3(&table);

    let e1 = verts[1] - verts[0];
    let e2 = verts[2] - verts[0];
    let e3 = verts[3] - verts[0];
    let det = e1.cross(&e2).dot(&e3).abs();

    // Expand prod_i ((v0 - center + J xi)_i / scale)^exp_i over the
    // reference coordinates xi.
    let mut poly = Poly3::one(degree);
    for i in 0..3 {
        let c = (verts[0][i] - center[i]) / scale;
        let g = [e1[i] / scale, e2[i] / scale, e3[i] / scale];
        for _ in 0..exp[i] {
            poly = poly.mul_affine(c, g, &table, &pos);
        }
    }

    let mut total = 0.0;
    for (j, &e) in table.iter().enumerate() {
        if poly.coeffs[j] != 0.0 {
            let (a, b, c) = (e[0] as usize, e[1] as usize, e[2] as usize);
            total += poly.coeffs[j] * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
        }
    }
    total * det
}

/// Integral of the scaled frame monomial `((q - origin_uv)/scale)^exp` over
/// a triangle given by its (unscaled) frame coordinates.
pub fn monomial_integral_tri(verts: [[f64; 2]; 3], scale: f64, exp: [u8; 2]) -> f64 {
    let degree = (exp[0] + exp[1]) as usize;
    let table = indices_2(degree);
    let pos = position_map_2(&table);

    let e1 = [verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]];
    let e2 = [verts[2][0] - verts[0][0], verts[2][1] - verts[0][1]];
    let det = (e1[0] * e2[1] - e1[1] * e2[0]).abs();

    let mut poly = Poly2::one(degree);
    for i in 0..2 {
        let c = verts[0][i] / scale;
        let g = [e1[i] / scale, e2[i] / scale];
        for _ in 0..exp[i] {
            poly = poly.mul_affine(c, g, &table, &pos);
        }
    }

    let mut total = 0.0;
    for (j, &e) in table.iter().enumerate() {
        if poly.coeffs[j] != 0.0 {
            let (a, b) = (e[0] as usize, e[1] as usize);
            total += poly.coeffs[j] * factorial(a) * factorial(b) / factorial(a + b + 2);
        }
    }
    total * det
}

/// Integral of the scaled monomial `((x - x_T)/h_T)^exp` over element `t`,
/// via the sub-tetrahedron tessellation and closed-form simplex integrals.
pub fn integrate_monomial_element(mesh: &Mesh, t: usize, exp: [u8; 3]) -> f64 {
    let elem = &mesh.elements[t];
    let mut total = 0.0;
    for &f in &elem.faces {
        let face = &mesh.faces[f];
        let m = face.vertices.len();
        let tris: Vec<[Point3<f64>; 3]> = if m == 3 {
            vec![[
                mesh.vertices[face.vertices[0]],
                mesh.vertices[face.vertices[1]],
                mesh.vertices[face.vertices[2]],
            ]]
        } else {
            (0..m)
                .map(|i| {
                    [face.centroid, mesh.vertices[face.vertices[i]], mesh.vertices[face.vertices[(i + 1) % m]]]
                })
                .collect()
        };
        for tri in tris {
            total += monomial_integral_tet([elem.star, tri[0], tri[1], tri[2]], elem.star, elem.diameter, exp);
        }
    }
    total
}

/// Integral of the scaled frame monomial `(s, t)^exp` over face `f`.
pub fn integrate_monomial_face(mesh: &Mesh, f: usize, exp: [u8; 2]) -> f64 {
    let face = &mesh.faces[f];
    let to_frame = |p: &Point3<f64>| [(p - face.centroid).dot(&face.tangent1), (p - face.centroid).dot(&face.tangent2)];
    let m = face.vertices.len();
    let tris: Vec<[[f64; 2]; 3]> = if m == 3 {
        vec![[
            to_frame(&mesh.vertices[face.vertices[0]]),
            to_frame(&mesh.vertices[face.vertices[1]]),
            to_frame(&mesh.vertices[face.vertices[2]]),
        ]]
    } else {
        (0..m)
            .map(|i| {
                [
                    [0.0, 0.0],
                    to_frame(&mesh.vertices[face.vertices[i]]),
                    to_frame(&mesh.vertices[face.vertices[(i + 1) % m]]),
                ]
            })
            .collect()
    };
    tris.iter().map(|tri| monomial_integral_tri(*tri, face.diameter, exp)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_cubic;
    use approx::assert_relative_eq;

    #[test]
    fn unit_tet_closed_form() {
        let verts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        // unscaled monomials: center 0, scale 1
        let origin = Point3::origin();
        assert_relative_eq!(monomial_integral_tet(verts, origin, 1.0, [0, 0, 0]), 1.0 / 6.0, epsilon = 1e-16);
        assert_relative_eq!(monomial_integral_tet(verts, origin, 1.0, [1, 1, 1]), 1.0 / 720.0, epsilon = 1e-17);
        assert_relative_eq!(monomial_integral_tet(verts, origin, 1.0, [2, 0, 0]), 1.0 / 60.0, epsilon = 1e-16);
    }

    #[test]
    fn cube_volume_by_oracle() {
        let mesh = generate_cubic(1).unwrap();
        assert_relative_eq!(integrate_monomial_element(&mesh, 0, [0, 0, 0]), 1.0, epsilon = 1e-14);
        // centered monomial of odd degree vanishes on the symmetric cube
        assert_relative_eq!(integrate_monomial_element(&mesh, 0, [1, 0, 0]), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn square_face_by_oracle() {
        let mesh = generate_cubic(1).unwrap();
        assert_relative_eq!(integrate_monomial_face(&mesh, 0, [0, 0]), 1.0, epsilon = 1e-14);
        assert_relative_eq!(integrate_monomial_face(&mesh, 0, [1, 0]), 0.0, epsilon = 1e-15);
    }
}
