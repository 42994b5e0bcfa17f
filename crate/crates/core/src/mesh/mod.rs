//! Immutable 3D polyhedral meshes with precomputed geometry.
//!
//! A mesh is built once from vertices, planar face loops, and signed face
//! lists per element, then validated: faces must be planar, every element
//! boundary must close (`sum_F |F| n_TF = 0`), interfaces must be shared by
//! exactly two elements with opposite orientation signs, and every element
//! must be star-shaped with respect to its centroid. After construction the
//! mesh is read-only and safe to share across threads.

mod generate;
mod io;

pub use generate::{generate_cubic, generate_tetrahedral};
pub use io::{read_mesh, write_mesh};

use crate::{Error, Result};
use nalgebra::{Point3, Vector3};
use std::collections::HashMap;

/// Planar polygonal face with canonical loop orientation and a deterministic
/// orthonormal tangent frame `(t1, t2, normal)`.
#[derive(Clone, Debug)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub area: f64,
    pub centroid: Point3<f64>,
    /// Face diameter `h_F` (max pairwise vertex distance).
    pub diameter: f64,
    pub normal: Vector3<f64>,
    pub tangent1: Vector3<f64>,
    pub tangent2: Vector3<f64>,
    pub boundary: bool,
}

/// Polyhedral element described by its faces and orientation signs
/// `sigma_TF` (+1 if the face normal points out of the element).
#[derive(Clone, Debug)]
pub struct Element {
    pub faces: Vec<usize>,
    pub signs: Vec<f64>,
    pub volume: f64,
    /// Star point `x_T` (the element centroid; star-shapedness is validated).
    pub star: Point3<f64>,
    /// Element diameter `h_T`.
    pub diameter: f64,
    /// Vertex ids of the element (deduplicated, sorted).
    pub vertices: Vec<usize>,
}

impl Element {
    /// Outward unit normal `n_TF` of local face `i`.
    pub fn outward_normal(&self, faces: &[Face], i: usize) -> Vector3<f64> {
        faces[self.faces[i]].normal * self.signs[i]
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<Point3<f64>>,
    pub faces: Vec<Face>,
    pub elements: Vec<Element>,
    /// Global meshsize `h = max_T h_T`.
    pub h: f64,
}

/// Regularity metrics reported by [`Mesh::report`]. The mesh-regularity
/// parameter of the underlying theory has no numeric threshold, so these are
/// reported, never asserted.
#[derive(Clone, Debug)]
pub struct MeshReport {
    pub n_vertices: usize,
    pub n_faces: usize,
    pub n_interior_faces: usize,
    pub n_elements: usize,
    pub h: f64,
    /// min over T of (3 |T| / sum_F |F|) / h_T  (inradius proxy).
    pub min_inradius_ratio: f64,
    pub max_faces_per_element: usize,
    /// min over T, F, x in {centroid, vertices of F} of (x - x_T).n_TF / h_T.
    pub min_star_margin: f64,
    /// min over T, F of h_F / h_T.
    pub min_face_diameter_ratio: f64,
}

const SIGN_TOL: f64 = 1e-12;

impl Mesh {
    /// Build and validate a mesh from raw parts. `elements` lists, per
    /// element, `(face_id, sign)` pairs with `sign` in {+1, -1} declaring
    /// that `sign * normal(face)` points out of the element (normals are
    /// recomputed from the canonicalized loops, and the declared signs are
    /// re-derived against them through the closure check).
    pub fn from_parts(
        vertices: Vec<Point3<f64>>,
        face_loops: Vec<Vec<usize>>,
        elements: Vec<Vec<(usize, f64)>>,
    ) -> Result<Mesh> {
        let nv = vertices.len();
        for (fi, loop_) in face_loops.iter().enumerate() {
            if loop_.len() < 3 {
                return Err(Error::Validation(format!("face {fi} has fewer than 3 vertices")));
            }
            for &v in loop_ {
                if v >= nv {
                    return Err(Error::Validation(format!("face {fi} references vertex {v} out of range")));
                }
            }
        }

        let mut faces: Vec<Face> = face_loops
            .into_iter()
            .enumerate()
            .map(|(fi, loop_)| build_face(fi, canonical_loop(loop_), &vertices))
            .collect::<Result<_>>()?;

        // Face/element incidence with orientation signs.
        let mut incidence: Vec<Vec<(usize, f64)>> = vec![Vec::new(); faces.len()];
        for (ti, elem) in elements.iter().enumerate() {
            for &(fi, s) in elem {
                if fi >= faces.len() {
                    return Err(Error::Validation(format!("element {ti} references face {fi} out of range")));
                }
                if s != 1.0 && s != -1.0 {
                    return Err(Error::Validation(format!("element {ti}: face sign must be +1 or -1")));
                }
                incidence[fi].push((ti, s));
            }
        }
        for (fi, inc) in incidence.iter().enumerate() {
            match inc.len() {
                1 => faces[fi].boundary = true,
                2 => {
                    if inc[0].1 * inc[1].1 != -1.0 {
                        return Err(Error::Validation(format!(
                            "interface {fi} is not oriented oppositely by its two elements"
                        )));
                    }
                }
                n => {
                    return Err(Error::Validation(format!("face {fi} is shared by {n} elements (expected 1 or 2)")));
                }
            }
        }

        let built: Vec<Element> = elements
            .into_iter()
            .enumerate()
            .map(|(ti, signed)| build_element(ti, signed, &faces, &vertices))
            .collect::<Result<_>>()?;

        let h = built.iter().map(|e| e.diameter).fold(0.0, f64::max);
        Ok(Mesh { vertices, faces, elements: built, h })
    }

    pub fn n_interior_faces(&self) -> usize {
        self.faces.iter().filter(|f| !f.boundary).count()
    }

    /// True if every element is a tetrahedron (4 triangular faces). Matching
    /// (conforming) incidence is already enforced by construction, so this is
    /// the gate for the stabilization-free scheme variants.
    pub fn is_tetrahedral(&self) -> bool {
        self.elements.iter().all(|e| e.faces.len() == 4)
            && self.faces.iter().all(|f| f.vertices.len() == 3)
    }

    /// Total mesh volume.
    pub fn volume(&self) -> f64 {
        self.elements.iter().map(|e| e.volume).sum()
    }

    /// Regularity metrics (reported, not asserted).
    pub fn report(&self) -> MeshReport {
        let mut min_inradius = f64::INFINITY;
        let mut max_card = 0;
        let mut min_margin = f64::INFINITY;
        let mut min_hf_ratio = f64::INFINITY;
        for elem in &self.elements {
            let total_area: f64 = elem.faces.iter().map(|&f| self.faces[f].area).sum();
            min_inradius = min_inradius.min(3.0 * elem.volume / total_area / elem.diameter);
            max_card = max_card.max(elem.faces.len());
            for (i, &fi) in elem.faces.iter().enumerate() {
                let face = &self.faces[fi];
                let n_tf = elem.outward_normal(&self.faces, i);
                let mut probe = vec![face.centroid];
                probe.extend(face.vertices.iter().map(|&v| self.vertices[v]));
                for x in probe {
                    min_margin = min_margin.min((x - elem.star).dot(&n_tf) / elem.diameter);
                }
                min_hf_ratio = min_hf_ratio.min(face.diameter / elem.diameter);
            }
        }
        MeshReport {
            n_vertices: self.vertices.len(),
            n_faces: self.faces.len(),
            n_interior_faces: self.n_interior_faces(),
            n_elements: self.elements.len(),
            h: self.h,
            min_inradius_ratio: min_inradius,
            max_faces_per_element: max_card,
            min_star_margin: min_margin,
            min_face_diameter_ratio: min_hf_ratio,
        }
    }
}

/// Rotate the loop so the smallest vertex id comes first, then orient it so
/// the second id is the smaller of the two neighbours of the start. This
/// makes loop direction (hence the stored normal) reproducible regardless of
/// input orientation.
fn canonical_loop(loop_: Vec<usize>) -> Vec<usize> {
    let n = loop_.len();
    let start = (0..n).min_by_key(|&i| loop_[i]).unwrap();
    let next = loop_[(start + 1) % n];
    let prev = loop_[(start + n - 1) % n];
    let mut out = Vec::with_capacity(n);
    if next <= prev {
        for i in 0..n {
            out.push(loop_[(start + i) % n]);
        }
    } else {
        for i in 0..n {
            out.push(loop_[(start + n - i) % n]);
        }
    }
    out
}

fn build_face(fi: usize, loop_: Vec<usize>, vertices: &[Point3<f64>]) -> Result<Face> {
    let pts: Vec<Point3<f64>> = loop_.iter().map(|&v| vertices[v]).collect();
    let n = pts.len();

    // Newell's formula for the loop normal.
    let mut normal = Vector3::zeros();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        normal.x += (a.y - b.y) * (a.z + b.z);
        normal.y += (a.z - b.z) * (a.x + b.x);
        normal.z += (a.x - b.x) * (a.y + b.y);
    }
    let norm = normal.norm();
    if norm <= 0.0 {
        return Err(Error::Geometry(format!("face {fi} is degenerate (zero normal)")));
    }
    let normal = normal / norm;

    let mut diameter: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            diameter = diameter.max((pts[i] - pts[j]).norm());
        }
    }

    // Signed triangle fan around the vertex mean; signs are consistent with
    // the Newell normal for planar loops.
    let mean = pts.iter().fold(Vector3::zeros(), |acc, p| acc + p.coords) / n as f64;
    let mean = Point3::from(mean);
    let mut area = 0.0;
    let mut centroid = Vector3::zeros();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let tri2 = (a - mean).cross(&(b - mean));
        let signed = 0.5 * tri2.dot(&normal);
        area += signed;
        centroid += signed * (mean.coords + a.coords + b.coords) / 3.0;
    }
    if area <= 0.0 {
        return Err(Error::Geometry(format!("face {fi} has non-positive area {area}")));
    }
    let centroid = Point3::from(centroid / area);

    // Planarity within eps_planar = 1e-9 * h_F (relative tolerance).
    let eps_planar = 1e-9 * diameter;
    for (k, p) in pts.iter().enumerate() {
        let off = (p - centroid).dot(&normal).abs();
        if off > eps_planar {
            return Err(Error::Validation(format!(
                "face {fi} not planar: vertex {} is {off:.3e} off-plane (tolerance {eps_planar:.3e})",
                loop_[k]
            )));
        }
    }

    // Deterministic tangent frame: project away the axis with the smallest
    // normal component, then complete with the cross product.
    let axis = (0..3).min_by(|&a, &b| normal[a].abs().partial_cmp(&normal[b].abs()).unwrap()).unwrap();
    let mut e = Vector3::zeros();
    e[axis] = 1.0;
    let t1 = (e - normal * normal[axis]).normalize();
    let t2 = normal.cross(&t1);

    Ok(Face {
        vertices: loop_,
        area,
        centroid,
        diameter,
        normal,
        tangent1: t1,
        tangent2: t2,
        boundary: false,
    })
}

fn build_element(
    ti: usize,
    signed_faces: Vec<(usize, f64)>,
    faces: &[Face],
    vertices: &[Point3<f64>],
) -> Result<Element> {
    if signed_faces.is_empty() {
        return Err(Error::Validation(format!("element {ti} has no faces")));
    }
    let (face_ids, signs): (Vec<usize>, Vec<f64>) = signed_faces.into_iter().unzip();

    let mut vset: Vec<usize> = face_ids.iter().flat_map(|&f| faces[f].vertices.iter().copied()).collect();
    vset.sort_unstable();
    vset.dedup();
    let mut diameter: f64 = 0.0;
    for i in 0..vset.len() {
        for j in (i + 1)..vset.len() {
            diameter = diameter.max((vertices[vset[i]] - vertices[vset[j]]).norm());
        }
    }

    // Closure: sum of area-weighted outward normals must vanish.
    let mut closure = Vector3::zeros();
    let mut total_area = 0.0;
    for (i, &fi) in face_ids.iter().enumerate() {
        closure += faces[fi].area * faces[fi].normal * signs[i];
        total_area += faces[fi].area;
    }
    if closure.norm() > SIGN_TOL * total_area {
        return Err(Error::Validation(format!(
            "element {ti} boundary not closed: |sum area n_TF| = {:.3e}",
            closure.norm()
        )));
    }

    // Volume and centroid from the signed sub-tetrahedra spanned by a
    // provisional interior point and the face triangle fans. Signed volumes
    // make the result exact for any choice of the provisional point.
    let p0 = Point3::from(
        face_ids.iter().fold(Vector3::zeros(), |acc, &f| acc + faces[f].centroid.coords) / face_ids.len() as f64,
    );
    let mut volume = 0.0;
    let mut centroid = Vector3::zeros();
    for (i, &fi) in face_ids.iter().enumerate() {
        let face = &faces[fi];
        let c = face.centroid;
        let m = face.vertices.len();
        for e in 0..m {
            let a = vertices[face.vertices[e]];
            let b = vertices[face.vertices[(e + 1) % m]];
            // Oriented so the tet volume is positive when sigma*normal points
            // away from p0.
            let v = signs[i] * (a - c).cross(&(b - c)).dot(&(c - p0)) / 6.0;
            volume += v;
            centroid += v * (p0.coords + c.coords + a.coords + b.coords) / 4.0;
        }
    }
    if volume <= 0.0 {
        return Err(Error::Validation(format!("element {ti} has non-positive volume {volume:.3e}")));
    }
    let star = Point3::from(centroid / volume);

    // Star-shapedness with respect to the centroid: every face must see the
    // star point strictly from its inner side.
    for (i, &fi) in face_ids.iter().enumerate() {
        let face = &faces[fi];
        let n_tf = face.normal * signs[i];
        let mut probe = vec![face.centroid];
        probe.extend(face.vertices.iter().map(|&v| vertices[v]));
        for x in probe {
            if (x - star).dot(&n_tf) <= SIGN_TOL * diameter {
                return Err(Error::Validation(format!(
                    "element {ti} is not star-shaped w.r.t. its centroid (face {fi})"
                )));
            }
        }
        if face.diameter > diameter * (1.0 + SIGN_TOL) {
            return Err(Error::Validation(format!("element {ti}: face {fi} diameter exceeds h_T")));
        }
    }

    Ok(Element { faces: face_ids, signs, volume, star, diameter, vertices: vset })
}

/// Incremental builder used by the generators: deduplicates faces by their
/// vertex sets and derives orientation signs from element interior points
/// (valid for the convex cells the generators emit; `from_parts` re-validates
/// everything afterwards).
pub(crate) struct PartsBuilder {
    vertices: Vec<Point3<f64>>,
    face_ids: HashMap<Vec<usize>, usize>,
    face_loops: Vec<Vec<usize>>,
    elements: Vec<Vec<(usize, f64)>>,
}

impl PartsBuilder {
    pub fn new(vertices: Vec<Point3<f64>>) -> Self {
        PartsBuilder { vertices, face_ids: HashMap::new(), face_loops: Vec::new(), elements: Vec::new() }
    }

    pub fn add_element(&mut self, face_loops: Vec<Vec<usize>>) {
        let interior = {
            let mut acc = Vector3::zeros();
            let mut count = 0;
            for loop_ in &face_loops {
                for &v in loop_ {
                    acc += self.vertices[v].coords;
                    count += 1;
                }
            }
            Point3::from(acc / count as f64)
        };
        let mut signed = Vec::with_capacity(face_loops.len());
        for loop_ in face_loops {
            let mut key = loop_.clone();
            key.sort_unstable();
            let id = *self.face_ids.entry(key).or_insert_with(|| {
                self.face_loops.push(canonical_loop(loop_.clone()));
                self.face_loops.len() - 1
            });
            let canon = &self.face_loops[id];
            let normal = newell(canon, &self.vertices);
            let center = canon.iter().fold(Vector3::zeros(), |a, &v| a + self.vertices[v].coords)
                / canon.len() as f64;
            let sign = if (Point3::from(center) - interior).dot(&normal) > 0.0 { 1.0 } else { -1.0 };
            signed.push((id, sign));
        }
        self.elements.push(signed);
    }

    pub fn build(self) -> Result<Mesh> {
        Mesh::from_parts(self.vertices, self.face_loops, self.elements)
    }
}

fn newell(loop_: &[usize], vertices: &[Point3<f64>]) -> Vector3<f64> {
    let n = loop_.len();
    let mut normal = Vector3::zeros();
    for i in 0..n {
        let a = vertices[loop_[i]];
        let b = vertices[loop_[(i + 1) % n]];
        normal.x += (a.y - b.y) * (a.z + b.z);
        normal.y += (a.z - b.z) * (a.x + b.x);
        normal.z += (a.x - b.x) * (a.y + b.y);
    }
    normal.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_cube_counts_and_geometry() {
        let mesh = generate_cubic(1).unwrap();
        assert_eq!(mesh.elements.len(), 1);
        assert_eq!(mesh.faces.len(), 6);
        assert_relative_eq!(mesh.volume(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(mesh.elements[0].diameter, 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(mesh.elements[0].star.coords.norm(), (0.75f64).sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn cubic_2_counts() {
        let mesh = generate_cubic(2).unwrap();
        assert_eq!(mesh.elements.len(), 8);
        assert_eq!(mesh.faces.len(), 36);
        assert_eq!(mesh.n_interior_faces(), 12);
        assert_relative_eq!(mesh.volume(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cubic_4_partitions_unit_volume() {
        let mesh = generate_cubic(4).unwrap();
        assert_relative_eq!(mesh.volume(), 1.0, epsilon = 1e-14);
        let report = mesh.report();
        assert_eq!(report.max_faces_per_element, 6);
        assert!(report.min_star_margin > 0.0);
    }

    #[test]
    fn tetrahedral_1_counts() {
        let mesh = generate_tetrahedral(1).unwrap();
        assert_eq!(mesh.elements.len(), 6);
        assert_eq!(mesh.faces.len(), 18);
        assert_eq!(mesh.n_interior_faces(), 6);
        assert_relative_eq!(mesh.volume(), 1.0, epsilon = 1e-13);
        assert!(mesh.is_tetrahedral());
        assert_eq!(mesh.report().max_faces_per_element, 4);
    }

    #[test]
    fn tetrahedral_2_incidence() {
        let mesh = generate_tetrahedral(2).unwrap();
        assert_eq!(mesh.elements.len(), 48);
        assert_relative_eq!(mesh.volume(), 1.0, epsilon = 1e-13);
        // brute-force incidence recount
        let mut count = vec![0usize; mesh.faces.len()];
        for e in &mesh.elements {
            for &f in &e.faces {
                count[f] += 1;
            }
        }
        for (f, c) in count.iter().enumerate() {
            let expected = if mesh.faces[f].boundary { 1 } else { 2 };
            assert_eq!(*c, expected, "face {f}");
        }
    }

    #[test]
    fn closure_and_frames_hold_on_generated_meshes() {
        for mesh in [generate_cubic(3).unwrap(), generate_tetrahedral(2).unwrap()] {
            for elem in &mesh.elements {
                let mut closure = Vector3::zeros();
                for (i, &f) in elem.faces.iter().enumerate() {
                    closure += mesh.faces[f].area * elem.outward_normal(&mesh.faces, i);
                }
                assert!(closure.norm() <= 1e-12);
                for &f in &elem.faces {
                    assert!(mesh.faces[f].diameter <= elem.diameter * (1.0 + 1e-12));
                }
            }
            for face in &mesh.faces {
                assert_relative_eq!(face.tangent1.dot(&face.tangent2), 0.0, epsilon = 1e-14);
                assert_relative_eq!(face.tangent1.norm(), 1.0, epsilon = 1e-14);
                assert_relative_eq!(face.tangent2.norm(), 1.0, epsilon = 1e-14);
                assert_relative_eq!((face.tangent1.cross(&face.tangent2) - face.normal).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn flipped_orientation_sign_is_rejected() {
        let mesh = generate_cubic(1).unwrap();
        let loops: Vec<Vec<usize>> = mesh.faces.iter().map(|f| f.vertices.clone()).collect();
        let mut signed: Vec<(usize, f64)> =
            mesh.elements[0].faces.iter().zip(&mesh.elements[0].signs).map(|(&f, &s)| (f, s)).collect();
        signed[2].1 = -signed[2].1;
        let err = Mesh::from_parts(mesh.vertices.clone(), loops, vec![signed]).unwrap_err();
        assert!(err.to_string().contains("not closed"), "{err}");
    }

    #[test]
    fn nonplanar_face_is_rejected() {
        // unit cube with one vertex pushed off the x=1 plane
        let mesh = generate_cubic(1).unwrap();
        let mut vertices = mesh.vertices.clone();
        // vertex 7 = (1,1,1)
        vertices[7].x += 1e-3;
        let loops: Vec<Vec<usize>> = mesh.faces.iter().map(|f| f.vertices.clone()).collect();
        let signed: Vec<(usize, f64)> =
            mesh.elements[0].faces.iter().zip(&mesh.elements[0].signs).map(|(&f, &s)| (f, s)).collect();
        let err = Mesh::from_parts(vertices, loops, vec![signed]).unwrap_err();
        assert!(err.to_string().contains("not planar"), "{err}");
    }
}
