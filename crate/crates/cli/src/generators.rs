//! Deterministic test spaces.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use fillbound::{Error, Result};
use serde_json::{json, Value};

use crate::formats::SpaceFile;

pub const MAX_LEVEL: u32 = 5;
pub const MAX_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Octahedron,
    Icosphere { level: u32 },
    TetraBoundary,
    /// Open cylinder of `levels` rings with `n` vertices each; radial
    /// coordinate is the height.
    Prism { n: usize, levels: usize },
    /// Flat disk: a center and `rings` concentric rings of `n` vertices.
    Disk { n: usize, rings: usize },
    /// Capped cylinder labeled as two bodies joined by a neck.
    Capsule { n: usize, levels: usize },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Octahedron => "octahedron",
            Shape::Icosphere { .. } => "icosphere",
            Shape::TetraBoundary => "tetra_boundary",
            Shape::Prism { .. } => "prism",
            Shape::Disk { .. } => "disk",
            Shape::Capsule { .. } => "capsule",
        }
    }

    fn params(&self) -> Value {
        match *self {
            Shape::Octahedron | Shape::TetraBoundary => json!({}),
            Shape::Icosphere { level } => json!({ "level": level }),
            Shape::Prism { n, levels } | Shape::Capsule { n, levels } => json!({ "n": n, "levels": levels }),
            Shape::Disk { n, rings } => json!({ "n": n, "rings": rings }),
        }
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if !(min..=MAX_N).contains(&n) {
        return Err(Error::domain(format!("n must lie in [{min}, {MAX_N}], got {n}")));
    }
    Ok(())
}

pub fn generate(shape: Shape, scale: f64) -> Result<SpaceFile> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::domain(format!("scale must be positive and finite, got {scale}")));
    }
    let mut space = match shape {
        Shape::Octahedron => octahedron(scale),
        Shape::Icosphere { level } => {
            if level > MAX_LEVEL {
                return Err(Error::domain(format!("icosphere level must be at most {MAX_LEVEL}, got {level}")));
            }
            icosphere(level, scale)
        }
        Shape::TetraBoundary => tetra_boundary(scale),
        Shape::Prism { n, levels } => {
            check_n(n, 3)?;
            if !(2..=MAX_N).contains(&levels) {
                return Err(Error::domain(format!("prism needs 2 to {MAX_N} levels, got {levels}")));
            }
            prism(n, levels, scale)
        }
        Shape::Disk { n, rings } => {
            check_n(n, 3)?;
            if !(1..=MAX_N).contains(&rings) {
                return Err(Error::domain(format!("disk needs 1 to {MAX_N} rings, got {rings}")));
            }
            disk(n, rings, scale)
        }
        Shape::Capsule { n, levels } => {
            check_n(n, 3)?;
            if !(3..=MAX_N).contains(&levels) {
                return Err(Error::domain(format!("capsule needs 3 to {MAX_N} levels, got {levels}")));
            }
            capsule(n, levels, scale)
        }
    };
    space.metadata.insert("shape".into(), json!(shape.name()));
    space.metadata.insert("params".into(), shape.params());
    space.metadata.insert("scale".into(), json!(scale));
    Ok(space)
}

fn plain(ambient_dim: usize, vertices: Vec<Vec<f64>>, triangles: Vec<[usize; 3]>) -> SpaceFile {
    SpaceFile {
        ambient_dim,
        vertices,
        triangles,
        edges: Vec::new(),
        radial: None,
        region: None,
        necks: BTreeMap::new(),
        metadata: BTreeMap::new(),
    }
}

/// Vertices in the order +x, -x, +y, -y, +z, -z.
fn octahedron(s: f64) -> SpaceFile {
    let mut v = Vec::new();
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut p = vec![0.0; 3];
            p[axis] = sign * s;
            v.push(p);
        }
    }
    let mut t = Vec::new();
    for x in 0..2 {
        for y in 2..4 {
            for z in 4..6 {
                t.push([x, y, z]);
            }
        }
    }
    plain(3, v, t)
}

fn tetra_boundary(s: f64) -> SpaceFile {
    // alternate cube corners have edge 2√2
    let k = s / (2.0 * 2f64.sqrt());
    let v = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .iter()
        .map(|p| p.iter().map(|x| x * k).collect())
        .collect();
    plain(3, v, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
}

fn normalize(p: [f64; 3], s: f64) -> [f64; 3] {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] * s / r, p[1] * s / r, p[2] * s / r]
}

fn icosphere(level: u32, s: f64) -> SpaceFile {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts: Vec<[f64; 3]> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(|p| normalize(p, s))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let mut m = |u: usize, v: usize| {
                let key = (u.min(v), u.max(v));
                *mid.entry(key).or_insert_with(|| {
                    let (p, q) = (pts[u], pts[v]);
                    pts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]], s));
                    pts.len() - 1
                })
            };
            let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    plain(3, pts.into_iter().map(|p| p.to_vec()).collect(), faces)
}

fn ring_point(i: usize, n: usize, r: f64) -> (f64, f64) {
    let t = 2.0 * PI * i as f64 / n as f64;
    (r * t.cos(), r * t.sin())
}

/// Side triangles between consecutive rings of `n` vertices, ring `j`
/// starting at `offset + j·n`.
fn band(n: usize, rings: usize, offset: usize, out: &mut Vec<[usize; 3]>) {
    let id = |i: usize, j: usize| offset + j * n + i % n;
    for j in 0..rings - 1 {
        for i in 0..n {
            out.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            out.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
}

fn prism(n: usize, levels: usize, s: f64) -> SpaceFile {
    let mut v = Vec::new();
    for j in 0..levels {
        for i in 0..n {
            let (x, y) = ring_point(i, n, s);
            v.push(vec![x, y, s * (1.0 + j as f64)]);
        }
    }
    let mut t = Vec::new();
    band(n, levels, 0, &mut t);
    let radial = v.iter().map(|p| p[2]).collect();
    let mut space = plain(3, v, t);
    space.radial = Some(radial);
    space
}

fn disk(n: usize, rings: usize, s: f64) -> SpaceFile {
    let mut v = vec![vec![0.0, 0.0]];
    for j in 1..=rings {
        for i in 0..n {
            let (x, y) = ring_point(i, n, s * j as f64 / rings as f64);
            v.push(vec![x, y]);
        }
    }
    let mut t = Vec::new();
    for i in 0..n {
        t.push([0, 1 + i, 1 + (i + 1) % n]);
    }
    band(n, rings, 1, &mut t);
    plain(2, v, t)
}

fn capsule(n: usize, levels: usize, s: f64) -> SpaceFile {
    let mut v = Vec::new();
    for j in 0..levels {
        for i in 0..n {
            let (x, y) = ring_point(i, n, s);
            v.push(vec![x, y, s * j as f64]);
        }
    }
    let mut t = Vec::new();
    band(n, levels, 0, &mut t);
    let (bot, top) = (v.len(), v.len() + 1);
    v.push(vec![0.0, 0.0, -s]);
    v.push(vec![0.0, 0.0, s * levels as f64]);
    for i in 0..n {
        t.push([bot, i, (i + 1) % n]);
        t.push([top, (levels - 1) * n + i, (levels - 1) * n + (i + 1) % n]);
    }
    let cut = (levels / 3).max(1);
    let label = |j: usize| {
        if j < cut {
            "body-0"
        } else if j >= levels - cut {
            "body-1"
        } else {
            "neck-0"
        }
    };
    let mut region: Vec<String> = (0..levels * n).map(|k| label(k / n).to_string()).collect();
    region.push("body-0".into());
    region.push("body-1".into());
    let radial = v.iter().map(|p| p[2] + s).collect();
    let mut space = plain(3, v, t);
    space.radial = Some(radial);
    space.region = Some(region);
    space.necks = BTreeMap::from([("neck-0".to_string(), ["body-0".to_string(), "body-1".to_string()])]);
    space
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(shape: Shape) -> (usize, usize, usize) {
        let m = generate(shape, 1.0).unwrap().to_space().unwrap();
        let k = m.complex();
        (k.count(0), k.count(1), k.count(2))
    }

    #[test]
    fn combinatorics() {
        assert_eq!(counts(Shape::Octahedron), (6, 12, 8));
        assert_eq!(counts(Shape::TetraBoundary), (4, 6, 4));
        assert_eq!(counts(Shape::Icosphere { level: 0 }), (12, 30, 20));
        assert_eq!(counts(Shape::Icosphere { level: 1 }), (42, 120, 80));
        assert_eq!(counts(Shape::Icosphere { level: 2 }), (162, 480, 320));
        assert_eq!(counts(Shape::Prism { n: 6, levels: 2 }), (12, 24, 12));
        assert_eq!(counts(Shape::Disk { n: 12, rings: 3 }), (37, 12 + 12 * 3 + 12 * 2 * 2, 12 + 48));
        assert_eq!(counts(Shape::Capsule { n: 6, levels: 5 }).0, 32);
    }

    #[test]
    fn geometry() {
        let t = generate(Shape::TetraBoundary, 2.0).unwrap().to_space().unwrap();
        assert!(t.edge_lengths().iter().all(|l| (l - 2.0).abs() < 1e-12));
        let ico = generate(Shape::Icosphere { level: 2 }, 3.0).unwrap();
        for p in &ico.vertices {
            let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 3.0).abs() < 1e-12);
        }
        // euler characteristic 2 for the closed surfaces
        for shape in [Shape::Octahedron, Shape::Icosphere { level: 1 }, Shape::Capsule { n: 8, levels: 4 }] {
            let (v, e, f) = counts(shape);
            assert_eq!(v + f, e + 2, "{shape:?}");
        }
    }

    #[test]
    fn out_of_range() {
        assert!(generate(Shape::Icosphere { level: 6 }, 1.0).is_err());
        assert!(generate(Shape::Disk { n: 65, rings: 1 }, 1.0).is_err());
        assert!(generate(Shape::Prism { n: 6, levels: 1 }, 1.0).is_err());
        assert!(generate(Shape::Octahedron, 0.0).is_err());
    }

    #[test]
    fn deterministic() {
        let a = generate(Shape::Icosphere { level: 2 }, 1.0).unwrap().to_canonical();
        let b = generate(Shape::Icosphere { level: 2 }, 1.0).unwrap().to_canonical();
        assert_eq!(a, b);
    }
}
