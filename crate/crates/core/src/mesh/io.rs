use std::fmt::Write as _;
use std::path::Path;

use super::Mesh;
use crate::geometry::Point;
use crate::{Error, Result};

impl Mesh {
    pub fn load(path: impl AsRef<Path>) -> Result<Mesh> {
        Mesh::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `nv ne`, then `nv` lines `x y`, then `ne` lines `i0 i1 i2`
    /// (0-based). Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Mesh> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unexpected end of file, expected {what}"),
            })
        };
        let (ln, head) = next("header")?;
        let [nv, ne] = fields::<usize, 2>(ln, head)?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, l) = next("vertex")?;
            let [x, y] = fields::<f64, 2>(ln, l)?;
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::Parse {
                    line: ln,
                    msg: "non-finite coordinate".into(),
                });
            }
            vertices.push(Point::new(x, y));
        }
        let mut tris = Vec::with_capacity(ne);
        for _ in 0..ne {
            let (ln, l) = next("element")?;
            let t = fields::<usize, 3>(ln, l)?;
            if t.iter().any(|&i| i >= nv) {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("vertex index out of range 0..{nv}"),
                });
            }
            tris.push(t);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln,
                msg: "trailing content".into(),
            });
        }
        Mesh::new(vertices, tris)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.vertices().len(), self.len());
        for v in self.vertices() {
            let _ = writeln!(s, "{:.17e} {:.17e}", v.x, v.y);
        }
        for e in self.elements() {
            let c = e.corners;
            let _ = writeln!(s, "{} {} {}", c[0], c[1], c[2]);
        }
        s
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn fields<T: std::str::FromStr, const N: usize>(line: usize, l: &str) -> Result<[T; N]> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.len() != N {
        return Err(Error::Parse {
            line,
            msg: format!("expected {N} fields, found {}", parts.len()),
        });
    }
    let mut out = Vec::with_capacity(N);
    for p in parts {
        out.push(p.parse::<T>().map_err(|_| Error::Parse {
            line,
            msg: format!("cannot parse '{p}'"),
        })?);
    }
    out.try_into().map_err(|_| Error::Parse {
        line,
        msg: "field count".into(),
    })
}
