//! OFF mesh parsing.
//!
//! Accepts the standard layout — an `OFF` header line, a `V F E` counts
//! line, `V` vertex lines, `F` face lines — plus the fused-header variant
//! found throughout ModelNet, where the counts share the header token
//! (`OFF490 518 0`). Whitespace is free-form, blank lines are skipped and
//! `#` starts a comment anywhere. Faces with more than three vertices are
//! fan-triangulated: `(v0, v1, v2), (v0, v2, v3), ...`. Every parse failure
//! is a structured error carrying the offending line number.

use super::mesh::TriangleMesh;
use crate::error::{Error, Result};
use std::io::Read;

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            for tok in content.split_whitespace() {
                items.push((line, tok));
            }
        }
        Self {
            items,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.items.get(self.pos) {
            Some(&(line, tok)) => {
                self.pos += 1;
                Ok((line, tok))
            }
            None => Err(Error::TruncatedFile {
                line: self.last_line,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn next_usize(&mut self, what: &str) -> Result<(usize, usize)> {
        let (line, tok) = self.next(what)?;
        let value = tok.parse::<usize>().map_err(|_| Error::MalformedLine {
            line,
            msg: format!("expected {what}, got {tok:?}"),
        })?;
        Ok((line, value))
    }

    fn next_f64(&mut self, what: &str) -> Result<(usize, f64)> {
        let (line, tok) = self.next(what)?;
        let value = tok.parse::<f64>().map_err(|_| Error::MalformedLine {
            line,
            msg: format!("expected {what}, got {tok:?}"),
        })?;
        Ok((line, value))
    }
}

/// Parse an OFF byte stream into a triangle mesh.
pub fn parse_off(mut input: impl Read) -> Result<TriangleMesh> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse_off_str(&text)
}

/// Parse OFF text into a triangle mesh.
pub fn parse_off_str(text: &str) -> Result<TriangleMesh> {
    let mut tokens = Tokens::new(text);

    let (header_line, header) = tokens.next("OFF header")?;
    let vertex_count;
    if header == "OFF" {
        vertex_count = tokens.next_usize("vertex count")?.1;
    } else if let Some(rest) = header.strip_prefix("OFF") {
        // ModelNet fused header: "OFF<nv>" followed by the remaining counts
        vertex_count = rest.parse::<usize>().map_err(|_| Error::MalformedHeader {
            line: header_line,
            msg: format!("expected OFF, got {header:?}"),
        })?;
    } else {
        return Err(Error::MalformedHeader {
            line: header_line,
            msg: format!("expected OFF, got {header:?}"),
        });
    }
    let face_count = tokens.next_usize("face count")?.1;
    let _edge_count = tokens.next_usize("edge count")?.1;

    let mut vertices = Vec::with_capacity(vertex_count);
    for _ in 0..vertex_count {
        let x = tokens.next_f64("vertex coordinate")?.1;
        let y = tokens.next_f64("vertex coordinate")?.1;
        let z = tokens.next_f64("vertex coordinate")?.1;
        vertices.push([x, y, z]);
    }

    let mut faces = Vec::with_capacity(face_count);
    for _ in 0..face_count {
        let (line, arity) = tokens.next_usize("face vertex count")?;
        if arity < 3 {
            return Err(Error::MalformedLine {
                line,
                msg: format!("face needs at least 3 vertices, got {arity}"),
            });
        }
        let mut poly = Vec::with_capacity(arity);
        for _ in 0..arity {
            let (line, idx) = tokens.next_usize("face vertex index")?;
            if idx >= vertex_count {
                return Err(Error::IndexOutOfRange {
                    line,
                    index: idx,
                    count: vertex_count,
                });
            }
            poly.push(idx);
        }
        for i in 1..arity - 1 {
            let tri = [poly[0], poly[i], poly[i + 1]];
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateFace { line });
            }
            faces.push(tri);
        }
    }

    TriangleMesh::new(vertices, faces)
}
