//! Conforming triangulations of planar domains.
//!
//! A [`Mesh`] holds vertex coordinates and counterclockwise vertex triples.
//! [`Topology`] is derived from it and carries everything the assembly needs:
//! globally oriented edges, edge/triangle adjacency, outward normals on the
//! boundary, element and face sizes, and an optional set of slit edges along
//! which interior data is imposed.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Point = [f64; 2];

/// Seed of the jitter sequence used by [`Mesh::generate_structured`].
const JITTER_SEED: u64 = 0x6c73_6665_6d00_0001;

/// Geometric tolerance for slit detection.
const SLIT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("triangle {element} references vertex {vertex}, but the mesh has {count} vertices (index out of range)")]
    IndexOutOfRange {
        element: usize,
        vertex: usize,
        count: usize,
    },
    #[error("triangle {element} is degenerate or inverted (signed area {area:e})")]
    Inverted { element: usize, area: f64 },
    #[error("triangle {element} duplicates triangle {other}")]
    Duplicate { element: usize, other: usize },
    #[error("mesh is not conforming at triangle {element}: {reason}")]
    NonConforming { element: usize, reason: String },
    #[error("slit segment is not resolved by mesh edges: sub-segment ({:.6}, {:.6}) -> ({:.6}, {:.6}) is uncovered", from[0], from[1], to[0], to[1])]
    SlitUnresolved { from: Point, to: Point },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Supported mesh file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    /// `lsfem-mesh 1` text format with 0-based indices.
    Native,
    /// Triangle's `.node` / `.ele` pair.
    TriangleNodeEle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    regions: Vec<i32>,
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl Mesh {
    /// Validates and canonicalizes a triangulation.
    ///
    /// Clockwise triangles are reordered to counterclockwise. Out-of-range
    /// indices, degenerate or duplicate triangles, edges shared by more than
    /// two triangles and hanging vertices are rejected.
    pub fn new(
        vertices: Vec<Point>,
        mut triangles: Vec<[usize; 3]>,
        regions: Option<Vec<i32>>,
    ) -> Result<Self, MeshError> {
        let regions = regions.unwrap_or_else(|| vec![0; triangles.len()]);
        if regions.len() != triangles.len() {
            return Err(MeshError::Invalid(format!(
                "{} region labels for {} triangles",
                regions.len(),
                triangles.len()
            )));
        }
        let nv = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&v) = tri.iter().find(|&&v| v >= nv) {
                return Err(MeshError::IndexOutOfRange {
                    element: t,
                    vertex: v,
                    count: nv,
                });
            }
        }
        let scale = bbox_diameter(&vertices).max(f64::MIN_POSITIVE);
        for (t, tri) in triangles.iter_mut().enumerate() {
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if area.abs() <= 1e-14 * scale * scale {
                return Err(MeshError::Inverted { element: t, area });
            }
            if area < 0.0 {
                tri.swap(1, 2);
            }
        }
        let mut seen: HashMap<[usize; 3], usize> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            let mut key = *tri;
            key.sort_unstable();
            if let Some(&other) = seen.get(&key) {
                return Err(MeshError::Duplicate { element: t, other });
            }
            seen.insert(key, t);
        }
        let mesh = Mesh {
            vertices,
            triangles,
            regions,
        };
        mesh.check_conforming()?;
        Ok(mesh)
    }

    fn check_conforming(&self) -> Result<(), MeshError> {
        let mut count: HashMap<[usize; 2], (usize, usize)> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let key = edge_key(tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let entry = count.entry(key).or_insert((0, t));
                entry.0 += 1;
                if entry.0 > 2 {
                    return Err(MeshError::NonConforming {
                        element: t,
                        reason: format!("edge ({}, {}) is shared by more than two triangles", key[0], key[1]),
                    });
                }
            }
        }
        // A hanging vertex always sits in the interior of an edge that has a
        // single incident triangle.
        let scale = bbox_diameter(&self.vertices);
        let mut used = vec![false; self.vertices.len()];
        for tri in &self.triangles {
            for &v in tri {
                used[v] = true;
            }
        }
        let mut open: Vec<(&[usize; 2], usize)> = count
            .iter()
            .filter(|(_, &(c, _))| c == 1)
            .map(|(k, &(_, t))| (k, t))
            .collect();
        open.sort_unstable();
        for (key, t) in open {
            let a = self.vertices[key[0]];
            let b = self.vertices[key[1]];
            let d = [b[0] - a[0], b[1] - a[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            for (v, p) in self.vertices.iter().enumerate() {
                if !used[v] || v == key[0] || v == key[1] {
                    continue;
                }
                let s = ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2;
                if s <= 1e-12 || s >= 1.0 - 1e-12 {
                    continue;
                }
                let cross = (p[0] - a[0]) * d[1] - (p[1] - a[1]) * d[0];
                if cross.abs() / len2.sqrt() <= 1e-12 * scale {
                    return Err(MeshError::NonConforming {
                        element: t,
                        reason: format!("vertex {v} hangs on edge ({}, {})", key[0], key[1]),
                    });
                }
            }
        }
        Ok(())
    }

    /// Crisscross triangulation of the unit square with `n` cells per side.
    ///
    /// Cell `(i, j)` is split along the diagonal through `(i, j)` when `i + j`
    /// is even and along the other diagonal otherwise. Interior vertices are
    /// moved by at most `perturb / n` per coordinate using a fixed seed.
    pub fn generate_structured(n: usize, perturb: f64) -> Result<Self, MeshError> {
        if n == 0 {
            return Err(MeshError::Invalid("cells per side must be at least 1".into()));
        }
        if !(0.0..0.3).contains(&perturb) {
            return Err(MeshError::Invalid(format!(
                "perturbation fraction {perturb} outside [0, 0.3)"
            )));
        }
        let h = 1.0 / n as f64;
        let idx = |i: usize, j: usize| j * (n + 1) + i;
        let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED ^ n as u64);
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                let mut p = [i as f64 * h, j as f64 * h];
                // Draw for every vertex so the sequence does not depend on perturb.
                let dx: f64 = rng.random::<f64>() * 2.0 - 1.0;
                let dy: f64 = rng.random::<f64>() * 2.0 - 1.0;
                if i > 0 && i < n && j > 0 && j < n {
                    p[0] += perturb * h * dx;
                    p[1] += perturb * h * dy;
                }
                vertices.push(p);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (v00, v10, v01, v11) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
                if (i + j) % 2 == 0 {
                    triangles.push([v00, v10, v11]);
                    triangles.push([v00, v11, v01]);
                } else {
                    triangles.push([v00, v10, v01]);
                    triangles.push([v10, v11, v01]);
                }
            }
        }
        for (t, tri) in triangles.iter().enumerate() {
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if area <= 0.0 {
                return Err(MeshError::Inverted { element: t, area });
            }
        }
        let regions = vec![0; triangles.len()];
        Ok(Mesh {
            vertices,
            triangles,
            regions,
        })
    }

    /// Splits every triangle into four similar children through its edge
    /// midpoints. New vertices are appended in order of first edge appearance.
    pub fn refine_uniform(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut midpoint: HashMap<[usize; 2], usize> = HashMap::new();
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        let mut regions = Vec::with_capacity(4 * self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            let mut mid = [0usize; 3];
            // mid[i] is the midpoint of the edge opposite local vertex i.
            for (i, m) in mid.iter_mut().enumerate() {
                let a = tri[(i + 1) % 3];
                let b = tri[(i + 2) % 3];
                *m = *midpoint.entry(edge_key(a, b)).or_insert_with(|| {
                    let pa = self.vertices[a];
                    let pb = self.vertices[b];
                    vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                    vertices.len() - 1
                });
            }
            let [a, b, c] = *tri;
            triangles.push([a, mid[2], mid[1]]);
            triangles.push([mid[2], b, mid[0]]);
            triangles.push([mid[1], mid[0], c]);
            triangles.push([mid[0], mid[1], mid[2]]);
            regions.extend([self.regions[t]; 4]);
        }
        Mesh {
            vertices,
            triangles,
            regions,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn regions(&self) -> &[i32] {
        &self.regions
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_vertices(&self, t: usize) -> [Point; 3] {
        let tri = self.triangles[t];
        [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_vertices(t);
        signed_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.area(t)).sum()
    }

    /// Element size `|K|^(1/2)`.
    pub fn h_k(&self, t: usize) -> f64 {
        self.area(t).sqrt()
    }

    pub fn max_h(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.h_k(t)).fold(0.0, f64::max)
    }

    /// Smallest interior angle (radians) over all triangles.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.num_triangles() {
            let p = self.triangle_vertices(t);
            for i in 0..3 {
                let a = p[i];
                let b = p[(i + 1) % 3];
                let c = p[(i + 2) % 3];
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let cos = (u[0] * v[0] + u[1] * v[1]) / ((u[0].hypot(u[1])) * v[0].hypot(v[1]));
                min = min.min(cos.clamp(-1.0, 1.0).acos());
            }
        }
        min
    }

    pub fn load(path: &Path, format: MeshFormat) -> Result<Self, MeshError> {
        match format {
            MeshFormat::Native => {
                let text = read(path)?;
                parse_native(&text)
            }
            MeshFormat::TriangleNodeEle => {
                let node = path.with_extension("node");
                let ele = path.with_extension("ele");
                parse_triangle(&read(&node)?, &read(&ele)?)
            }
        }
    }

    pub fn to_native_string(&self) -> String {
        let mut s = String::new();
        s.push_str("lsfem-mesh 1\n");
        s.push_str(&format!("{} {}\n", self.vertices.len(), self.triangles.len()));
        for p in &self.vertices {
            s.push_str(&format!("{} {}\n", p[0], p[1]));
        }
        for (tri, r) in self.triangles.iter().zip(&self.regions) {
            s.push_str(&format!("{} {} {} {}\n", tri[0], tri[1], tri[2], r));
        }
        s
    }

    pub fn write_native(&self, path: &Path) -> Result<(), MeshError> {
        write(path, self.to_native_string().as_bytes())
    }

    /// Writes `<base>.node` and `<base>.ele` with 1-based numbering.
    pub fn write_triangle(&self, base: &Path) -> Result<(), MeshError> {
        let mut node = format!("{} 2 0 0\n", self.vertices.len());
        for (i, p) in self.vertices.iter().enumerate() {
            node.push_str(&format!("{} {} {}\n", i + 1, p[0], p[1]));
        }
        let mut ele = format!("{} 3 1\n", self.triangles.len());
        for (t, (tri, r)) in self.triangles.iter().zip(&self.regions).enumerate() {
            ele.push_str(&format!("{} {} {} {} {}\n", t + 1, tri[0] + 1, tri[1] + 1, tri[2] + 1, r));
        }
        write(&base.with_extension("node"), node.as_bytes())?;
        write(&base.with_extension("ele"), ele.as_bytes())
    }
}

fn bbox_diameter(vertices: &[Point]) -> f64 {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in vertices {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    if vertices.is_empty() {
        return 0.0;
    }
    (hi[0] - lo[0]).hypot(hi[1] - lo[1])
}

fn edge_key(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn read(path: &Path) -> Result<String, MeshError> {
    fs::read_to_string(path).map_err(|source| MeshError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), MeshError> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|source| MeshError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn field<T: std::str::FromStr>(tokens: &[&str], i: usize, line: usize, what: &str) -> Result<T, MeshError> {
    let tok = tokens.get(i).ok_or_else(|| MeshError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| MeshError::Parse {
        line,
        msg: format!("cannot parse {what} from '{tok}'"),
    })
}

fn parse_native(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(MeshError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    if header != ["lsfem-mesh", "1"] {
        return Err(MeshError::Parse {
            line,
            msg: "expected header 'lsfem-mesh 1'".into(),
        });
    }
    let (line, counts) = lines.next().ok_or(MeshError::Parse {
        line: line + 1,
        msg: "missing 'V T' line".into(),
    })?;
    let nv: usize = field(&counts, 0, line, "vertex count")?;
    let nt: usize = field(&counts, 1, line, "triangle count")?;
    let mut vertices = Vec::with_capacity(nv);
    let mut last = line;
    for _ in 0..nv {
        let (line, tok) = lines.next().ok_or(MeshError::Parse {
            line: last + 1,
            msg: format!("expected {nv} vertex lines"),
        })?;
        vertices.push([field(&tok, 0, line, "x")?, field(&tok, 1, line, "y")?]);
        last = line;
    }
    let mut triangles = Vec::with_capacity(nt);
    let mut regions = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, tok) = lines.next().ok_or(MeshError::Parse {
            line: last + 1,
            msg: format!("expected {nt} triangle lines"),
        })?;
        triangles.push([
            field(&tok, 0, line, "vertex index")?,
            field(&tok, 1, line, "vertex index")?,
            field(&tok, 2, line, "vertex index")?,
        ]);
        regions.push(if tok.len() > 3 { field(&tok, 3, line, "region")? } else { 0 });
        last = line;
    }
    if let Some((line, _)) = lines.next() {
        return Err(MeshError::Parse {
            line,
            msg: "trailing content after triangle list".into(),
        });
    }
    Mesh::new(vertices, triangles, Some(regions))
}

fn parse_triangle(node: &str, ele: &str) -> Result<Mesh, MeshError> {
    let mut lines = content_lines(node);
    let (line, header) = lines.next().ok_or(MeshError::Parse {
        line: 1,
        msg: "empty .node file".into(),
    })?;
    let nv: usize = field(&header, 0, line, "node count")?;
    let dim: usize = field(&header, 1, line, "dimension")?;
    if dim != 2 {
        return Err(MeshError::Parse {
            line,
            msg: format!("dimension {dim} unsupported"),
        });
    }
    let mut vertices = Vec::with_capacity(nv);
    let mut base = None;
    for _ in 0..nv {
        let (line, tok) = lines.next().ok_or(MeshError::Parse {
            line,
            msg: format!("expected {nv} nodes"),
        })?;
        let id: usize = field(&tok, 0, line, "node number")?;
        let b = *base.get_or_insert(id.min(1));
        if id != vertices.len() + b {
            return Err(MeshError::Parse {
                line,
                msg: format!("node number {id} out of sequence"),
            });
        }
        vertices.push([field(&tok, 1, line, "x")?, field(&tok, 2, line, "y")?]);
    }
    let base = base.unwrap_or(1);

    let mut lines = content_lines(ele);
    let (line, header) = lines.next().ok_or(MeshError::Parse {
        line: 1,
        msg: "empty .ele file".into(),
    })?;
    let nt: usize = field(&header, 0, line, "triangle count")?;
    let per: usize = field(&header, 1, line, "nodes per triangle")?;
    if per != 3 && per != 6 {
        return Err(MeshError::Parse {
            line,
            msg: format!("{per} nodes per triangle unsupported"),
        });
    }
    let mut triangles = Vec::with_capacity(nt);
    for t in 0..nt {
        let (line, tok) = lines.next().ok_or(MeshError::Parse {
            line,
            msg: format!("expected {nt} triangles"),
        })?;
        let mut tri = [0usize; 3];
        for (i, v) in tri.iter_mut().enumerate() {
            let raw: usize = field(&tok, i + 1, line, "node index")?;
            if raw < base || raw - base >= nv {
                return Err(MeshError::IndexOutOfRange {
                    element: t,
                    vertex: raw,
                    count: nv,
                });
            }
            *v = raw - base;
        }
        triangles.push(tri);
    }
    Mesh::new(vertices, triangles, None)
}

/// A straight segment of interior edges along which data is prescribed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitSpec {
    pub start: Point,
    pub end: Point,
}

impl SlitSpec {
    /// Unit normal obtained by rotating the segment direction clockwise.
    pub fn normal(&self) -> Point {
        let d = [self.end[0] - self.start[0], self.end[1] - self.start[1]];
        let len = d[0].hypot(d[1]);
        [d[1] / len, -d[0] / len]
    }
}

#[derive(Debug, Clone)]
pub struct Topology {
    edges: Vec<[usize; 2]>,
    edge_triangles: Vec<(usize, Option<usize>)>,
    triangle_edges: Vec<[usize; 3]>,
    edge_agrees: Vec<[bool; 3]>,
    boundary_edges: Vec<usize>,
    outward_normals: Vec<Option<Point>>,
    edge_lengths: Vec<f64>,
    h_k: Vec<f64>,
    slit_edges: Vec<usize>,
    slit_normal: Option<Point>,
}

impl Topology {
    /// Derives edges, adjacency and sizes. Local edge `i` of a triangle joins
    /// its local vertices `i+1` and `i+2` (mod 3); global edges run from the
    /// lower to the higher vertex index.
    pub fn build(mesh: &Mesh, slit: Option<&SlitSpec>) -> Result<Self, MeshError> {
        let nt = mesh.num_triangles();
        let mut index: HashMap<[usize; 2], usize> = HashMap::with_capacity(3 * nt / 2 + 4);
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<(usize, Option<usize>)> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(nt);
        let mut edge_agrees = Vec::with_capacity(nt);
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let mut te = [0usize; 3];
            let mut ag = [true; 3];
            for i in 0..3 {
                let a = tri[(i + 1) % 3];
                let b = tri[(i + 2) % 3];
                let key = edge_key(a, b);
                ag[i] = a < b;
                te[i] = match index.get(&key) {
                    Some(&e) => {
                        let slot = &mut edge_triangles[e];
                        if slot.1.is_some() {
                            return Err(MeshError::NonConforming {
                                element: t,
                                reason: format!("edge ({}, {}) has more than two triangles", key[0], key[1]),
                            });
                        }
                        slot.1 = Some(t);
                        e
                    }
                    None => {
                        let e = edges.len();
                        edges.push(key);
                        edge_triangles.push((t, None));
                        index.insert(key, e);
                        e
                    }
                };
            }
            triangle_edges.push(te);
            edge_agrees.push(ag);
        }
        let verts = mesh.vertices();
        let edge_lengths: Vec<f64> = edges
            .iter()
            .map(|&[a, b]| (verts[b][0] - verts[a][0]).hypot(verts[b][1] - verts[a][1]))
            .collect();
        let mut boundary_edges = Vec::new();
        let mut outward_normals = vec![None; edges.len()];
        for (e, &(t, other)) in edge_triangles.iter().enumerate() {
            if other.is_some() {
                continue;
            }
            boundary_edges.push(e);
            let i = triangle_edges[t].iter().position(|&x| x == e).unwrap();
            let tri = mesh.triangles()[t];
            let a = verts[tri[(i + 1) % 3]];
            let b = verts[tri[(i + 2) % 3]];
            let len = edge_lengths[e];
            outward_normals[e] = Some([(b[1] - a[1]) / len, -(b[0] - a[0]) / len]);
        }
        let h_k = (0..nt).map(|t| mesh.h_k(t)).collect();
        let mut topo = Topology {
            edges,
            edge_triangles,
            triangle_edges,
            edge_agrees,
            boundary_edges,
            outward_normals,
            edge_lengths,
            h_k,
            slit_edges: Vec::new(),
            slit_normal: None,
        };
        if let Some(slit) = slit {
            topo.flag_slit(mesh, slit)?;
        }
        Ok(topo)
    }

    fn flag_slit(&mut self, mesh: &Mesh, slit: &SlitSpec) -> Result<(), MeshError> {
        let a = slit.start;
        let d = [slit.end[0] - a[0], slit.end[1] - a[1]];
        let len = d[0].hypot(d[1]);
        if len <= SLIT_TOL {
            return Err(MeshError::Invalid("slit segment has zero length".into()));
        }
        let param = |p: Point| -> Option<f64> {
            let rel = [p[0] - a[0], p[1] - a[1]];
            let cross = (rel[0] * d[1] - rel[1] * d[0]) / len;
            let s = (rel[0] * d[0] + rel[1] * d[1]) / (len * len);
            (cross.abs() <= SLIT_TOL && (-SLIT_TOL..=1.0 + SLIT_TOL).contains(&s)).then_some(s)
        };
        let verts = mesh.vertices();
        let mut pieces = Vec::new();
        for (e, &[v0, v1]) in self.edges.iter().enumerate() {
            if let (Some(s0), Some(s1)) = (param(verts[v0]), param(verts[v1])) {
                if self.edge_triangles[e].1.is_none() {
                    return Err(MeshError::Invalid(format!(
                        "slit edge {e} lies on the domain boundary"
                    )));
                }
                pieces.push((s0.min(s1), s0.max(s1), e));
            }
        }
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let at = |s: f64| [a[0] + s * d[0], a[1] + s * d[1]];
        let tol = SLIT_TOL / len;
        let mut covered = 0.0;
        for &(s0, s1, _) in &pieces {
            if s0 > covered + tol {
                return Err(MeshError::SlitUnresolved {
                    from: at(covered),
                    to: at(s0),
                });
            }
            covered = covered.max(s1);
        }
        if covered < 1.0 - tol {
            let next = pieces.iter().map(|p| p.0).find(|&s| s > covered).unwrap_or(1.0);
            return Err(MeshError::SlitUnresolved {
                from: at(covered),
                to: at(next),
            });
        }
        let mut slit_edges: Vec<usize> = pieces.into_iter().map(|p| p.2).collect();
        slit_edges.sort_unstable();
        self.slit_edges = slit_edges;
        self.slit_normal = Some(slit.normal());
        Ok(())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Incident triangles of edge `e`; the second is `None` on the boundary.
    pub fn edge_triangles(&self, e: usize) -> (usize, Option<usize>) {
        self.edge_triangles[e]
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Whether local edge `i` of triangle `t` runs in the global direction.
    pub fn edge_agrees(&self, t: usize, i: usize) -> bool {
        self.edge_agrees[t][i]
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    pub fn is_boundary(&self, e: usize) -> bool {
        self.edge_triangles[e].1.is_none()
    }

    pub fn outward_normal(&self, e: usize) -> Option<Point> {
        self.outward_normals[e]
    }

    /// Face size `h_F = |F|`.
    pub fn h_f(&self, e: usize) -> f64 {
        self.edge_lengths[e]
    }

    pub fn h_k(&self, t: usize) -> f64 {
        self.h_k[t]
    }

    pub fn slit_edges(&self) -> &[usize] {
        &self.slit_edges
    }

    pub fn slit_normal(&self) -> Option<Point> {
        self.slit_normal
    }

    /// Local index of edge `e` inside triangle `t`.
    pub fn local_edge(&self, t: usize, e: usize) -> Option<usize> {
        self.triangle_edges[t].iter().position(|&x| x == e)
    }

    /// Vertices touching the boundary, sorted.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        let set: HashSet<usize> = self
            .boundary_edges
            .iter()
            .flat_map(|&e| self.edges[e])
            .collect();
        let mut v: Vec<usize> = set.into_iter().collect();
        v.sort_unstable();
        v
    }
}
