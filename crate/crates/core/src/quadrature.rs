//! Quadrature rules exact to a requested polynomial degree on star-shaped
//! polyhedral elements and polygonal faces.
//!
//! Elements are tessellated into tetrahedra (apex `x_T`, bases from the face
//! triangle fans) and faces into triangles; conical-product (collapsed
//! Gauss-Legendre) rules on the reference simplices provide exactness at any
//! requested degree.

use crate::mesh::Mesh;
use crate::{Error, Result};
use nalgebra::{Point3, Vector3};

/// Volumetric rule on one element. Weights are physical (they sum to `|T|`).
#[derive(Clone, Debug)]
pub struct ElemRule {
    pub points: Vec<Point3<f64>>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

/// Surface rule on one face. Points are carried both as 3D positions and as
/// scaled in-frame coordinates `(s, t) = ((x - x_F).t1, (x - x_F).t2) / h_F`;
/// weights are physical (they sum to `|F|`).
#[derive(Clone, Debug)]
pub struct FaceRule {
    pub uv: Vec<[f64; 2]>,
    pub points: Vec<Point3<f64>>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl ElemRule {
    pub fn integrate(&self, f: impl Fn(&Point3<f64>) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

impl FaceRule {
    pub fn integrate(&self, f: impl Fn(&Point3<f64>) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Gauss-Legendre nodes and weights on [0, 1], exact for degree 2n - 1.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton iteration on P_n from a Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = d;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Collapsed rule on the reference tetrahedron {x,y,z >= 0, x+y+z <= 1},
/// exact for total degree `d`. Weights sum to 1/6.
pub fn reference_tet(d: usize) -> (Vec<[f64; 3]>, Vec<f64>) {
    let n = (d + 3).div_ceil(2);
    let (g, w) = gauss_legendre_01(n);
    let mut pts = Vec::with_capacity(n * n * n);
    let mut wts = Vec::with_capacity(n * n * n);
    for (iu, &u) in g.iter().enumerate() {
        for (iv, &v) in g.iter().enumerate() {
            for (iw, &t) in g.iter().enumerate() {
                let x = u;
                let y = v * (1.0 - u);
                let z = t * (1.0 - u) * (1.0 - v);
                pts.push([x, y, z]);
                wts.push(w[iu] * w[iv] * w[iw] * (1.0 - u) * (1.0 - u) * (1.0 - v));
            }
        }
    }
    (pts, wts)
}

/// Collapsed rule on the reference triangle {x,y >= 0, x+y <= 1}, exact for
/// total degree `d`. Weights sum to 1/2.
pub fn reference_triangle(d: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    let n = (d + 2).div_ceil(2);
    let (g, w) = gauss_legendre_01(n);
    let mut pts = Vec::with_capacity(n * n);
    let mut wts = Vec::with_capacity(n * n);
    for (iu, &u) in g.iter().enumerate() {
        for (iv, &v) in g.iter().enumerate() {
            pts.push([u, v * (1.0 - u)]);
            wts.push(w[iu] * w[iv] * (1.0 - u));
        }
    }
    (pts, wts)
}

/// Triangle fan of a face: the face itself if triangular, otherwise the fan
/// around the face centroid.
fn face_triangles(mesh: &Mesh, f: usize) -> Vec<[Point3<f64>; 3]> {
    let face = &mesh.faces[f];
    let m = face.vertices.len();
    if m == 3 {
        return vec![[
            mesh.vertices[face.vertices[0]],
            mesh.vertices[face.vertices[1]],
            mesh.vertices[face.vertices[2]],
        ]];
    }
    (0..m)
        .map(|i| {
            [
                face.centroid,
                mesh.vertices[face.vertices[i]],
                mesh.vertices[face.vertices[(i + 1) % m]],
            ]
        })
        .collect()
}

/// Rule exact for 3-variate polynomials of total degree <= `d` on element `t`.
pub fn element_rule(mesh: &Mesh, t: usize, d: usize) -> Result<ElemRule> {
    let elem = &mesh.elements[t];
    let apex = elem.star;
    let (ref_pts, ref_wts) = reference_tet(d);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for &f in &elem.faces {
        for tri in face_triangles(mesh, f) {
            let e1 = tri[1] - tri[0];
            let e2 = tri[2] - tri[0];
            let e3 = apex - tri[0];
            let det = e1.cross(&e2).dot(&e3);
            let vol = det.abs();
            if vol <= f64::EPSILON * elem.diameter.powi(3) {
                return Err(Error::Geometry(format!(
                    "degenerate sub-tetrahedron while tessellating element {t} (face {f})"
                )));
            }
            for (p, w) in ref_pts.iter().zip(&ref_wts) {
                points.push(tri[0] + e1 * p[0] + e2 * p[1] + e3 * p[2]);
                weights.push(w * vol);
            }
        }
    }
    Ok(ElemRule { points, weights, degree: d })
}

/// Rule exact for 2-variate polynomials of total degree <= `d` in the frame
/// of face `f`.
pub fn face_rule(mesh: &Mesh, f: usize, d: usize) -> Result<FaceRule> {
    let face = &mesh.faces[f];
    face_rule_from_frame(mesh, f, d, face.centroid, face.tangent1, face.tangent2)
}

/// Same as [`face_rule`] but with an explicit frame; used to check frame
/// invariance of face integrals.
pub fn face_rule_from_frame(
    mesh: &Mesh,
    f: usize,
    d: usize,
    origin: Point3<f64>,
    t1: Vector3<f64>,
    t2: Vector3<f64>,
) -> Result<FaceRule> {
    let face = &mesh.faces[f];
    let (ref_pts, ref_wts) = reference_triangle(d);
    let mut uv = Vec::new();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let to_frame = |p: &Point3<f64>| [(p - origin).dot(&t1), (p - origin).dot(&t2)];
    for tri in face_triangles(mesh, f) {
        let q: Vec<[f64; 2]> = tri.iter().map(&to_frame).collect();
        let det = (q[1][0] - q[0][0]) * (q[2][1] - q[0][1]) - (q[1][1] - q[0][1]) * (q[2][0] - q[0][0]);
        let area2 = det.abs();
        if area2 <= f64::EPSILON * face.diameter * face.diameter {
            return Err(Error::Geometry(format!("degenerate sub-triangle while tessellating face {f}")));
        }
        for (p, w) in ref_pts.iter().zip(&ref_wts) {
            let s = q[0][0] + (q[1][0] - q[0][0]) * p[0] + (q[2][0] - q[0][0]) * p[1];
            let t = q[0][1] + (q[1][1] - q[0][1]) * p[0] + (q[2][1] - q[0][1]) * p[1];
            uv.push([s / face.diameter, t / face.diameter]);
            points.push(origin + t1 * s + t2 * t);
            weights.push(w * area2);
        }
    }
    Ok(FaceRule { uv, points, weights, degree: d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_cubic, generate_tetrahedral};
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_monomials() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre_01(n);
            for d in 0..=(2 * n - 1) {
                let val: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(d as i32)).sum();
                assert_relative_eq!(val, 1.0 / (d as f64 + 1.0), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn reference_tet_volume_and_monomials() {
        let (pts, wts) = reference_tet(0);
        let vol: f64 = wts.iter().sum();
        assert_relative_eq!(vol, 1.0 / 6.0, epsilon = 1e-15);

        // closed-form simplex integral: a! b! c! / (a+b+c+3)!
        let fact = |m: usize| (1..=m).map(|v| v as f64).product::<f64>().max(1.0);
        for d in 0..=8usize {
            let (pts, wts) = reference_tet(d);
            for a in 0..=d {
                for b in 0..=(d - a) {
                    for c in 0..=(d - a - b) {
                        let num: f64 = pts
                            .iter()
                            .zip(&wts)
                            .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32))
                            .sum();
                        let exact = fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
                        assert_relative_eq!(num, exact, epsilon = 1e-15, max_relative = 1e-13);
                    }
                }
            }
        }
        let _ = pts;
    }

    #[test]
    fn reference_triangle_monomials() {
        let fact = |m: usize| (1..=m).map(|v| v as f64).product::<f64>().max(1.0);
        for d in 0..=8usize {
            let (pts, wts) = reference_triangle(d);
            for a in 0..=d {
                for b in 0..=(d - a) {
                    let num: f64 =
                        pts.iter().zip(&wts).map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum();
                    let exact = fact(a) * fact(b) / fact(a + b + 2);
                    assert_relative_eq!(num, exact, epsilon = 1e-15, max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn cube_element_rule_weight_sum_and_x2y2() {
        let mesh = generate_cubic(1).unwrap();
        let rule = element_rule(&mesh, 0, 4).unwrap();
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
        // analytic product integral over the unit cube
        let val = rule.integrate(|p| p.x * p.x * p.y * p.y);
        assert_relative_eq!(val, 1.0 / 9.0, epsilon = 1e-13);
    }

    #[test]
    fn unit_square_face_rule() {
        let mesh = generate_cubic(1).unwrap();
        // z- face of the unit cube has area 1
        let f = mesh.elements[0]
            .faces
            .iter()
            .copied()
            .find(|&f| mesh.faces[f].normal.z.abs() > 0.99 && mesh.faces[f].centroid.z < 0.5)
            .unwrap();
        let rule = face_rule(&mesh, f, 0).unwrap();
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn face_integral_is_frame_invariant() {
        let mesh = generate_cubic(2).unwrap();
        let f = mesh.faces.iter().position(|f| !f.boundary).unwrap();
        let face = &mesh.faces[f];
        let g = |p: &Point3<f64>| (p.x + 0.3 * p.y).powi(3) - p.z * p.y + 1.0;
        let r1 = face_rule(&mesh, f, 6).unwrap();
        // admissible alternative frame: (t2, -t1)
        let r2 = face_rule_from_frame(&mesh, f, 6, face.centroid, face.tangent2, -face.tangent1).unwrap();
        assert_relative_eq!(r1.integrate(g), r2.integrate(g), epsilon = 1e-13);
    }

    #[test]
    fn tet_mesh_rules_sum_to_volumes() {
        let mesh = generate_tetrahedral(1).unwrap();
        for t in 0..mesh.elements.len() {
            let rule = element_rule(&mesh, t, 2).unwrap();
            assert_relative_eq!(rule.weights.iter().sum::<f64>(), mesh.elements[t].volume, epsilon = 1e-14);
        }
    }
}
