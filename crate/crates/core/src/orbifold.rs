//! Limit orbifolds and their intersection theory.
//!
//! Deleting the cuts of a straight-cut diagram leaves a polygon whose
//! corners carry orbifold orders |wedge(e_in, e_out)|. Toric divisor classes
//! are indexed by edges; adjacent divisors pair to 1/(corner order), and the
//! self-intersection of the edge divisor with counterclockwise neighbor
//! directions v (previous), u (own), w (next) is
//! `(v ^ w) / ((u ^ v)(u ^ w))`, signed. The anticanonical degree is the
//! total sum of the pairing matrix.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::atbd::{canonical_lattice_polygon, Atbd};
use crate::lattice::{primitive, wedge, LatticeVec, RationalPoint};
use crate::num::{Int, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitOrbifold {
    pub vertices: Vec<RationalPoint>,
    pub edge_dirs: Vec<LatticeVec>,
    pub edge_lengths: Vec<Rat>,
    /// Corner order at vertex i (between edges i-1 and i).
    pub corner_orders: Vec<Int>,
}

/// Delete the cuts: each cut base becomes a corner of order n p^2, Delzant
/// corners get order 1. Requires all cuts to be rays.
pub fn limit_orbifold(d: &Atbd) -> Result<LimitOrbifold> {
    if d.has_seam() {
        return Err(Error::SeamPresent);
    }
    let n = d.len();
    let mut edge_dirs = Vec::with_capacity(n);
    let mut edge_lengths = Vec::with_capacity(n);
    let mut corner_orders = Vec::with_capacity(n);
    for i in 0..n {
        edge_dirs.push(d.edge_dir(i)?);
        edge_lengths.push(d.edge_length(i));
        corner_orders.push(wedge(&d.in_dir(i)?, &d.out_dir(i)?).abs());
    }
    Ok(LimitOrbifold {
        vertices: d.vertices.clone(),
        edge_dirs,
        edge_lengths,
        corner_orders,
    })
}

impl LimitOrbifold {
    pub fn len(&self) -> usize {
        self.edge_dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_dirs.is_empty()
    }
}

/// Self-intersection of the divisor over edge `i`.
pub fn divisor_self_intersection(o: &LimitOrbifold, i: usize) -> Rat {
    let n = o.len();
    let u = &o.edge_dirs[i];
    let v = &o.edge_dirs[(i + n - 1) % n];
    let w = &o.edge_dirs[(i + 1) % n];
    Rat::new(wedge(v, w), wedge(u, v) * wedge(u, w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub entries: Vec<Vec<Rat>>,
}

impl IntersectionMatrix {
    pub fn total(&self) -> Rat {
        let mut sum = Rat::zero();
        for row in &self.entries {
            for e in row {
                sum += e;
            }
        }
        sum
    }
}

/// Pairwise divisor intersections: diagonal from the corner formula,
/// adjacent pairs 1/(corner order at the shared vertex), zero otherwise.
pub fn intersection_matrix(o: &LimitOrbifold) -> IntersectionMatrix {
    let n = o.len();
    let mut entries = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        entries[i][i] = divisor_self_intersection(o, i);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        if i == j {
            continue;
        }
        // Edges i and i+1 share vertex i+1.
        let pairing = Rat::new(Int::from(1), o.corner_orders[j].clone());
        entries[i][j] = pairing.clone();
        entries[j][i] = pairing;
    }
    IntersectionMatrix { entries }
}

/// Anticanonical self-intersection K.K with K the sum of all edge divisors.
/// For triangles the independent route
/// `(A + B + C)^2 * lambda^2 / (order_1 * order_2 * order_3)` is computed as
/// well and must agree exactly.
pub fn degree(o: &LimitOrbifold) -> Result<Rat> {
    let total = intersection_matrix(o).total();
    if o.len() == 3 {
        // lambda = (corner order opposite an edge) / (edge length); the
        // corner opposite edge i is vertex (i + 2) mod 3.
        let mut lambda: Option<Rat> = None;
        for i in 0..3 {
            let opp = (i + 2) % 3;
            let ratio = Rat::from_integer(o.corner_orders[opp].clone()) / &o.edge_lengths[i];
            match &lambda {
                None => lambda = Some(ratio),
                Some(l) if *l == ratio => {}
                Some(l) => {
                    return Err(Error::NotTriangular(format!(
                        "corner/length ratios disagree: {l} vs {ratio}"
                    )))
                }
            }
        }
        let lambda = lambda.unwrap();
        let perimeter = o.edge_lengths.iter().fold(Rat::zero(), |acc, l| acc + l);
        let orders = o
            .corner_orders
            .iter()
            .fold(Rat::one(), |acc, c| acc * Rat::from_integer(c.clone()));
        let kk = &perimeter * &perimeter * &lambda * &lambda / orders;
        if kk != total {
            return Err(Error::NotTriangular(format!(
                "degree mismatch: matrix route {total}, triangle route {kk}"
            )));
        }
    }
    Ok(total)
}

/// Lattice polygon of fan normals: the predicted boundary Maslov-2 convex
/// hull for the monotone fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPolygon {
    /// Hull vertices in counterclockwise order starting at the
    /// lexicographically least.
    pub vertices: Vec<LatticeVec>,
}

/// Convex hull of lattice points (Andrew's monotone chain), exact.
pub fn convex_hull(points: &[LatticeVec]) -> Vec<LatticeVec> {
    let mut pts: Vec<LatticeVec> = points.to_vec();
    pts.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &LatticeVec, a: &LatticeVec, b: &LatticeVec| -> Int {
        wedge(&a.sub(o), &b.sub(o))
    };
    let mut lower: Vec<LatticeVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<LatticeVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Predicted hull of a valid monotone straight-cut diagram: convex hull of
/// the primitive inward normals of the limit-orbifold edges.
pub fn predicted_hull(d: &Atbd) -> Result<HullPolygon> {
    if d.monotone_point.is_none() {
        return Err(Error::NoMonotonePoint);
    }
    let o = limit_orbifold(d)?;
    let normals: Vec<LatticeVec> = o.edge_dirs.iter().map(|u| u.rot90()).collect();
    let hull = convex_hull(&normals);
    if hull.len() != normals.len() {
        return Err(Error::NotTriangular(
            "some fan normals are not hull vertices".into(),
        ));
    }
    Ok(HullPolygon { vertices: hull })
}

impl HullPolygon {
    pub fn edge_lengths(&self) -> Vec<Int> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let d = self.vertices[(i + 1) % n].sub(&self.vertices[i]);
                d.x.gcd(&d.y)
            })
            .collect()
    }

    /// Affine angle at a hull vertex: |wedge| of the primitive directions of
    /// the incident edges.
    pub fn corner_affine_angle(&self, vertex: &LatticeVec) -> Result<Int> {
        let n = self.vertices.len();
        let i = self
            .vertices
            .iter()
            .position(|v| v == vertex)
            .ok_or_else(|| Error::parse(format!("{vertex} is not a hull vertex")))?;
        let prev = &self.vertices[(i + n - 1) % n];
        let next = &self.vertices[(i + 1) % n];
        let e_in = primitive(&self.vertices[i].sub(prev))?;
        let e_out = primitive(&next.sub(&self.vertices[i]))?;
        Ok(wedge(&e_in, &e_out).abs())
    }

    /// Canonical SL(2,Z) representative, for equivalence tests.
    pub fn canonical(&self) -> Vec<LatticeVec> {
        canonical_lattice_polygon(&self.vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lvec;
    use crate::num::{rat, ratio};

    /// CP^2 reference triangle as a cut-free toric diagram.
    fn cp2_triangle() -> Atbd {
        let mut d = Atbd {
            label: "cp2".into(),
            vertices: vec![
                crate::lattice::rpoint(-1, -1),
                crate::lattice::rpoint(2, -1),
                crate::lattice::rpoint(-1, 2),
            ],
            roles: Vec::new(),
            cuts: Vec::new(),
            monotone_point: Some(crate::lattice::rpoint(0, 0)),
        };
        d.rebuild_roles();
        d
    }

    #[test]
    fn cp2_divisors_and_degree() {
        let o = limit_orbifold(&cp2_triangle()).unwrap();
        assert_eq!(o.corner_orders, vec![Int::from(1); 3]);
        for i in 0..3 {
            assert_eq!(divisor_self_intersection(&o, i), rat(1));
        }
        let m = intersection_matrix(&o);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entries[i][j], rat(1));
            }
        }
        assert_eq!(degree(&o).unwrap(), rat(9));
    }

    #[test]
    fn cp114_moment_triangle() {
        // Corner orders (1, 1, 4): vertices (0,0), (4,0), (0,1).
        let mut d = Atbd {
            label: "cp(1,1,4)".into(),
            vertices: vec![
                crate::lattice::rpoint(0, 0),
                crate::lattice::rpoint(4, 0),
                crate::lattice::rpoint(0, 1),
            ],
            roles: Vec::new(),
            cuts: Vec::new(),
            monotone_point: None,
        };
        d.rebuild_roles();
        let o = limit_orbifold(&d).unwrap();
        // The order-4 corner sits at the apex (0,1).
        assert_eq!(o.corner_orders, vec![Int::from(1), Int::from(1), Int::from(4)]);
        // Degree by both routes: (A+B+C)^2 lambda^2 / (prod orders) with
        // lengths (4,1,1) and lambda = 1 gives 36/4 = 9, matching K.K = 9.
        assert_eq!(degree(&o).unwrap(), rat(9));
        // H.H = 1/(lambda A B C) = 1/4 in the (A,B,C) = (1,1,4) normalization.
        let lambda = rat(1);
        let abc = rat(4);
        assert_eq!(rat(1) / (lambda * abc), ratio(1, 4));
    }

    #[test]
    fn hull_of_cp2() {
        let h = predicted_hull(&cp2_triangle()).unwrap();
        let mut verts = h.vertices.clone();
        verts.sort();
        assert_eq!(verts, vec![lvec(-1, -1), lvec(0, 1), lvec(1, 0)]);
        assert_eq!(h.edge_lengths(), vec![Int::from(1); 3]);
        for v in &h.vertices {
            assert_eq!(h.corner_affine_angle(v).unwrap(), Int::from(3));
        }
    }
}
