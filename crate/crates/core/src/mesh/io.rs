//! HLMESH text format.
//!
//! ```text
//! HLMESH 1 <heisenberg2|euclidean> <n>
//! <node_count> <tri_count>
//! v x1 x2 z1 z2 z3 z4 phi      (heisenberg2)
//! v x1 x2 p1 .. pn             (euclidean)
//! f i j k
//! origin i
//! ```
//! `#` starts a comment. Reals are written with 17 significant digits so a
//! save/load round trip is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use super::{Ambient, SurfaceMesh};
use crate::error::{Error, Result};
use crate::vector::ZERO;

pub fn load_mesh(path: impl AsRef<Path>) -> Result<SurfaceMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text)
}

pub fn save_mesh(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_mesh(mesh)).map_err(|e| Error::io(path, e))
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_mesh(mesh: &SurfaceMesh) -> String {
    let mut s = String::new();
    let (kind, n) = match mesh.ambient {
        Ambient::Heisenberg2 => ("heisenberg2", 4),
        Ambient::Euclidean(n) => ("euclidean", n),
    };
    writeln!(s, "HLMESH 1 {kind} {n}").unwrap();
    writeln!(s, "{} {}", mesh.node_count(), mesh.triangle_count()).unwrap();
    for i in 0..mesh.node_count() {
        let [x1, x2] = mesh.params[i];
        write!(s, "v {} {}", real(x1), real(x2)).unwrap();
        for c in &mesh.positions[i][..n] {
            write!(s, " {}", real(*c)).unwrap();
        }
        if mesh.ambient.is_heisenberg() {
            write!(s, " {}", real(mesh.phi[i])).unwrap();
        }
        s.push('\n');
    }
    for t in &mesh.triangles {
        writeln!(s, "f {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    for o in &mesh.origins {
        writeln!(s, "origin {o}").unwrap();
    }
    s
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("cannot parse number {tok:?}")))
}

pub fn parse_mesh(text: &str) -> Result<SurfaceMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "HLMESH" || h[1] != "1" {
        return Err(perr(ln, "expected header `HLMESH 1 <kind> <n>`"));
    }
    let n: usize = num(h[3], ln)?;
    let ambient = match h[2] {
        "heisenberg2" if n == 4 => Ambient::Heisenberg2,
        "heisenberg2" => return Err(perr(ln, "heisenberg2 meshes have n = 4")),
        "euclidean" if (3..=6).contains(&n) => Ambient::Euclidean(n),
        "euclidean" => return Err(perr(ln, format!("euclidean dimension {n} not in 3..=6"))),
        k => return Err(perr(ln, format!("unknown ambient kind {k:?}"))),
    };
    let (ln, counts) = lines
        .next()
        .ok_or_else(|| perr(ln + 1, "missing counts line"))?;
    let c: Vec<&str> = counts.split_whitespace().collect();
    if c.len() != 2 {
        return Err(perr(ln, "expected `<node_count> <tri_count>`"));
    }
    let (nv, nt): (usize, usize) = (num(c[0], ln)?, num(c[1], ln)?);

    let heis = ambient.is_heisenberg();
    let node_fields = 2 + n + usize::from(heis);
    let mut params = Vec::with_capacity(nv);
    let mut positions = Vec::with_capacity(nv);
    let mut phi = Vec::with_capacity(nv);
    let mut triangles = Vec::with_capacity(nt);
    let mut origins = Vec::new();
    let mut last = ln;
    for (ln, l) in lines {
        last = ln;
        let mut tok = l.split_whitespace();
        let tag = tok.next().unwrap_or_default();
        let rest: Vec<&str> = tok.collect();
        match tag {
            "v" => {
                if rest.len() != node_fields {
                    return Err(perr(
                        ln,
                        format!(
                            "node line needs {node_fields} numbers, found {}",
                            rest.len()
                        ),
                    ));
                }
                if !triangles.is_empty() {
                    return Err(perr(ln, "node line after triangle lines"));
                }
                let vals = rest
                    .iter()
                    .map(|t| num::<f64>(t, ln))
                    .collect::<Result<Vec<_>>>()?;
                params.push([vals[0], vals[1]]);
                let mut p = ZERO;
                p[..n].copy_from_slice(&vals[2..2 + n]);
                positions.push(p);
                phi.push(if heis { vals[2 + n] } else { 0.0 });
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(perr(ln, "triangle line needs 3 indices"));
                }
                let mut t = [0usize; 3];
                for (k, s) in rest.iter().enumerate() {
                    t[k] = num(s, ln)?;
                    if t[k] >= nv {
                        return Err(perr(ln, format!("node index {} out of range", t[k])));
                    }
                }
                if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                    return Err(perr(ln, "repeated node index in triangle"));
                }
                triangles.push(t);
            }
            "origin" => {
                if rest.len() != 1 {
                    return Err(perr(ln, "origin line needs one index"));
                }
                let o: usize = num(rest[0], ln)?;
                if o >= nv {
                    return Err(perr(ln, format!("origin index {o} out of range")));
                }
                origins.push(o);
            }
            other => return Err(perr(ln, format!("unknown record {other:?}"))),
        }
    }
    if params.len() != nv || triangles.len() != nt {
        return Err(perr(
            last,
            format!(
                "header announces {nv} nodes and {nt} triangles, found {} and {}",
                params.len(),
                triangles.len()
            ),
        ));
    }
    SurfaceMesh::new(ambient, params, positions, phi, triangles, origins)
}
