//! Text mesh format `polymesh v1`.
//!
//! ```text
//! polymesh v1
//! # comment lines start with '#' and may appear anywhere
//! <n_vertices>
//! <x> <y> <z>            (one line per vertex, ASCII decimal)
//!
//! <n_faces>
//! <m> <v_1> ... <v_m>    (vertex count then 0-based vertex ids per face)
//!
//! <n_elements>
//! <m> <s_1 f_1> ... <s_m f_m>  (face count then signed 1-based face ids;
//!                               +id means the stored face normal points out
//!                               of the element, -id that it points inward)
//! ```
//! Sections are separated by blank lines (blank lines are otherwise
//! ignored). Geometry is recomputed and all invariants re-validated on load.

use super::Mesh;
use crate::{Error, Result};
use nalgebra::Point3;
use std::io::{BufRead, Write};

pub fn write_mesh<W: Write>(mesh: &Mesh, out: &mut W) -> Result<()> {
    writeln!(out, "polymesh v1")?;
    writeln!(out, "# vertices")?;
    writeln!(out, "{}", mesh.vertices.len())?;
    for v in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z)?;
    }
    writeln!(out)?;
    writeln!(out, "# faces: vertex count, vertex ids")?;
    writeln!(out, "{}", mesh.faces.len())?;
    for f in &mesh.faces {
        write!(out, "{}", f.vertices.len())?;
        for &v in &f.vertices {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    writeln!(out)?;
    writeln!(out, "# elements: face count, signed 1-based face ids")?;
    writeln!(out, "{}", mesh.elements.len())?;
    for e in &mesh.elements {
        write!(out, "{}", e.faces.len())?;
        for (&f, &s) in e.faces.iter().zip(&e.signs) {
            let signed = (f as i64 + 1) * if s > 0.0 { 1 } else { -1 };
            write!(out, " {signed}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

struct Lines<R> {
    reader: R,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_content(&mut self) -> Result<Option<(usize, String)>> {
        loop {
            let mut buf = String::new();
            let n = self.reader.read_line(&mut buf)?;
            if n == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            let trimmed = buf.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Ok(Some((self.line_no, trimmed.to_string())));
        }
    }

    fn expect_content(&mut self, what: &str) -> Result<(usize, String)> {
        self.next_content()?.ok_or_else(|| Error::Parse {
            line: self.line_no,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn parse<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("invalid {what}: {tok:?}") })
}

pub fn read_mesh<R: BufRead>(reader: R) -> Result<Mesh> {
    let mut lines = Lines { reader, line_no: 0 };

    let (line, header) = lines.expect_content("header")?;
    if header != "polymesh v1" {
        return Err(Error::Parse { line, msg: format!("expected header 'polymesh v1', got {header:?}") });
    }

    let (line, count) = lines.expect_content("vertex count")?;
    let nv: usize = parse(&count, line, "vertex count")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, row) = lines.expect_content("vertex coordinates")?;
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse { line, msg: format!("expected 3 coordinates, got {}", toks.len()) });
        }
        vertices.push(Point3::new(
            parse(toks[0], line, "coordinate")?,
            parse(toks[1], line, "coordinate")?,
            parse(toks[2], line, "coordinate")?,
        ));
    }

    let (line, count) = lines.expect_content("face count")?;
    let nf: usize = parse(&count, line, "face count")?;
    let mut face_loops = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, row) = lines.expect_content("face vertex list")?;
        let toks: Vec<&str> = row.split_whitespace().collect();
        let m: usize = parse(toks[0], line, "face vertex count")?;
        if toks.len() != m + 1 {
            return Err(Error::Parse { line, msg: format!("face declares {m} vertices but lists {}", toks.len() - 1) });
        }
        let loop_: Vec<usize> =
            toks[1..].iter().map(|t| parse(t, line, "vertex id")).collect::<Result<_>>()?;
        face_loops.push(loop_);
    }

    let (line, count) = lines.expect_content("element count")?;
    let ne: usize = parse(&count, line, "element count")?;
    let mut elements = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (line, row) = lines.expect_content("element face list")?;
        let toks: Vec<&str> = row.split_whitespace().collect();
        let m: usize = parse(toks[0], line, "element face count")?;
        if toks.len() != m + 1 {
            return Err(Error::Parse { line, msg: format!("element declares {m} faces but lists {}", toks.len() - 1) });
        }
        let mut signed = Vec::with_capacity(m);
        for t in &toks[1..] {
            let id: i64 = parse(t, line, "signed face id")?;
            if id == 0 {
                return Err(Error::Parse { line, msg: "face ids are 1-based and signed; 0 is invalid".into() });
            }
            signed.push(((id.unsigned_abs() as usize) - 1, if id > 0 { 1.0 } else { -1.0 }));
        }
        elements.push(signed);
    }

    Mesh::from_parts(vertices, face_loops, elements)
}
