//! Almost toric base diagrams: data model, validation, profiles.
//!
//! A diagram is a simple counterclockwise polygon with rational vertices,
//! a role per vertex, a list of cuts and an optional marked monotone point.
//! Ray cuts emanate from a base vertex toward their nodes along a primitive
//! eigendirection. Seam cuts are the two-segment notches produced by almost
//! toric blowups; they are normalized back to rays by transferring the cut.

mod canonical;
mod ops;
#[cfg(test)]
mod tests;
mod triangular;

pub use canonical::{
    apply_map, canonical_bytes, canonical_lattice_polygon, canonicalize, equivalent, translate,
};
pub use ops::{
    almost_toric_blowup, inward_conormal, mutate, mutate_nodes, mutate_nodes_tracked,
    mutate_word, nodal_slide, nodal_trade, toric_blowup, trade_direction, transfer_cut,
    transfer_cut_tracked, Side, TransferOutcome,
};
pub use triangular::{build_triangular, build_triangular_auto, eq5_solutions, TriangularSpec};

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{
    affine_length, lattice_distance, monodromy_apply_lat, rat_wedge, wedge,
    wedge_lat_rat, LatticeVec, RatVec, RationalPoint,
};
use crate::num::{perfect_sqrt, Int, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    Ray,
    Seam,
}

/// A branch cut of the diagram.
///
/// For rays, `nodes` holds parameters `t` of the node points
/// `base + t * direction`, strictly increasing. For seams, `nodes` holds the
/// single notch length; the node itself sits at the apex vertex between the
/// two base vertices.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Cut {
    pub direction: LatticeVec,
    pub kind: CutKind,
    pub base: Vec<usize>,
    pub nodes: Vec<Rat>,
}

impl Cut {
    pub fn node_count(&self) -> usize {
        match self.kind {
            CutKind::Ray => self.nodes.len(),
            CutKind::Seam => 1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "delzant")]
    Delzant,
    #[serde(rename = "cut")]
    CutBase(usize),
    #[serde(rename = "apex")]
    SeamApex(usize),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Atbd {
    pub label: String,
    pub vertices: Vec<RationalPoint>,
    pub roles: Vec<Role>,
    pub cuts: Vec<Cut>,
    pub monotone_point: Option<RationalPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    fn push(&mut self, code: &'static str, message: impl Into<String>) {
        self.violations.push(Violation {
            code,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "[{}] {}", v.code, v.message)?;
        }
        Ok(())
    }
}

/// Node/length profile of a straight-cut diagram (Definitions of node type
/// and length type). `lambda` is the common ratio (corner order)/(opposite
/// edge length), present only for triangular diagrams with all three corners
/// carrying cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub node_type: Vec<(Int, Int)>,
    pub length_type: Vec<Rat>,
    pub lambda: Option<Rat>,
}

// ---------------------------------------------------------------------------
// Exact planar predicates.

pub(crate) fn orient(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint) -> i8 {
    let v = b.sub(a);
    let w = c.sub(a);
    let x = rat_wedge(&v, &w);
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn point_on_segment(p: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let within = |lo: &Rat, hi: &Rat, v: &Rat| {
        if lo <= hi {
            lo <= v && v <= hi
        } else {
            hi <= v && v <= lo
        }
    };
    within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y)
}

/// Closed-segment intersection test, exact.
pub(crate) fn segments_intersect(
    a: &RationalPoint,
    b: &RationalPoint,
    c: &RationalPoint,
    d: &RationalPoint,
) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && point_on_segment(c, a, b))
        || (o2 == 0 && point_on_segment(d, a, b))
        || (o3 == 0 && point_on_segment(a, c, d))
        || (o4 == 0 && point_on_segment(b, c, d))
}

impl Atbd {
    /// Recompute vertex roles from the cut list.
    pub fn rebuild_roles(&mut self) {
        ops::rebuild_roles(self)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &RationalPoint {
        &self.vertices[i % self.len()]
    }

    pub fn next_idx(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev_idx(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Primitive direction of boundary edge `i` (from vertex i to i+1).
    pub fn edge_dir(&self, i: usize) -> Result<LatticeVec> {
        self.vertex(self.next_idx(i))
            .sub(self.vertex(i))
            .primitive_direction()
    }

    pub fn edge_length(&self, i: usize) -> Rat {
        affine_length(self.vertex(i), self.vertex(self.next_idx(i)))
    }

    /// Incoming primitive direction at vertex `i` (along the boundary).
    pub fn in_dir(&self, i: usize) -> Result<LatticeVec> {
        self.vertex(i)
            .sub(self.vertex(self.prev_idx(i)))
            .primitive_direction()
    }

    /// Outgoing primitive direction at vertex `i`.
    pub fn out_dir(&self, i: usize) -> Result<LatticeVec> {
        self.vertex(self.next_idx(i))
            .sub(self.vertex(i))
            .primitive_direction()
    }

    /// Twice the signed area (positive for counterclockwise order).
    pub fn area2(&self) -> Rat {
        let mut sum = Rat::zero();
        for i in 0..self.len() {
            let a = self.vertex(i);
            let b = self.vertex(self.next_idx(i));
            sum += &a.x * &b.y - &b.x * &a.y;
        }
        sum
    }

    pub fn area(&self) -> Rat {
        self.area2() / crate::num::rat(2)
    }

    pub fn point_on_boundary(&self, p: &RationalPoint) -> bool {
        (0..self.len()).any(|i| point_on_segment(p, self.vertex(i), self.vertex(self.next_idx(i))))
    }

    /// Strict interior test by exact ray crossing.
    pub fn point_strictly_inside(&self, p: &RationalPoint) -> bool {
        if self.point_on_boundary(p) {
            return false;
        }
        let mut inside = false;
        for i in 0..self.len() {
            let a = self.vertex(i);
            let b = self.vertex(self.next_idx(i));
            if (a.y > p.y) != (b.y > p.y) {
                // x-coordinate of the edge at height p.y
                let t = (&p.y - &a.y) / (&b.y - &a.y);
                let x = &a.x + t * (&b.x - &a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Node points of a cut (apex vertex for seams).
    pub fn node_points(&self, cut_idx: usize) -> Vec<RationalPoint> {
        let cut = &self.cuts[cut_idx];
        match cut.kind {
            CutKind::Ray => {
                let base = self.vertex(cut.base[0]);
                cut.nodes.iter().map(|t| base.add_vec(&cut.direction, t)).collect()
            }
            CutKind::Seam => vec![self.vertex(self.seam_apex(cut_idx)).clone()],
        }
    }

    /// Index of the apex vertex (the vertex cyclically between a seam's two
    /// base vertices).
    pub fn seam_apex(&self, cut_idx: usize) -> usize {
        let cut = &self.cuts[cut_idx];
        debug_assert_eq!(cut.kind, CutKind::Seam);
        self.next_idx(cut.base[0])
    }

    /// The drawn cut segments: base to outermost node for rays, the two
    /// notch flanks for seams.
    pub fn cut_segments(&self, cut_idx: usize) -> Vec<(RationalPoint, RationalPoint)> {
        let cut = &self.cuts[cut_idx];
        match cut.kind {
            CutKind::Ray => {
                let base = self.vertex(cut.base[0]).clone();
                let last = cut.nodes.last().expect("ray cut has nodes");
                let end = base.add_vec(&cut.direction, last);
                vec![(base, end)]
            }
            CutKind::Seam => {
                let apex = self.vertex(self.seam_apex(cut_idx)).clone();
                vec![
                    (self.vertex(cut.base[0]).clone(), apex.clone()),
                    (apex, self.vertex(cut.base[1]).clone()),
                ]
            }
        }
    }

    /// Boundary edges that are seam flanks rather than honest edges.
    pub fn edge_is_seam(&self, i: usize) -> bool {
        self.cuts.iter().enumerate().any(|(c, cut)| {
            cut.kind == CutKind::Seam && {
                let apex = self.seam_apex(c);
                i == cut.base[0] || i == apex
            }
        })
    }

    pub fn has_seam(&self) -> bool {
        self.cuts.iter().any(|c| c.kind == CutKind::Seam)
    }

    /// Inward normal and offset of the supporting line of edge `i`.
    pub fn edge_support(&self, i: usize) -> Result<(LatticeVec, Rat)> {
        let normal = self.edge_dir(i)?.rot90();
        let v = self.vertex(i);
        let offset = Rat::from_integer(normal.x.clone()) * &v.x
            + Rat::from_integer(normal.y.clone()) * &v.y;
        Ok((normal, offset))
    }

    /// Common lattice distance from the monotone point to all (non-seam)
    /// edges, when it exists.
    pub fn monotone_distance(&self) -> Result<Option<Rat>> {
        let m = self
            .monotone_point
            .as_ref()
            .ok_or(Error::NoMonotonePoint)?;
        let mut common: Option<Rat> = None;
        for i in 0..self.len() {
            if self.edge_is_seam(i) {
                continue;
            }
            let (normal, offset) = self.edge_support(i)?;
            let dist = lattice_distance(&normal, &offset, m)?;
            match &common {
                None => common = Some(dist),
                Some(c) if *c == dist => {}
                Some(_) => return Ok(None),
            }
        }
        Ok(common)
    }

    /// True iff every edge supporting line is at the same lattice distance
    /// from the marked monotone point.
    pub fn is_monotone(&self) -> Result<bool> {
        Ok(self.monotone_distance()?.is_some())
    }

    /// Monodromy consistency at a ray-cut base: `e_out = sigma M^eps e_in`.
    fn base_relation_holds(&self, cut: &Cut, base: usize) -> Result<bool> {
        let e_in = self.in_dir(base)?;
        let e_out = self.out_dir(base)?;
        let n = cut.nodes.len() as i64;
        for eps in [1i64, -1] {
            let image = monodromy_apply_lat(&cut.direction, eps * n, &e_in);
            if image == e_out || image.neg() == e_out {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Full structural validation. Returns the report; never fails except on
    /// indexing that makes the diagram unreadable.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.len();
        if n < 3 {
            rep.push("polygon-size", format!("polygon needs >= 3 vertices, got {n}"));
            return rep;
        }
        if self.roles.len() != n {
            rep.push("roles-size", "roles list must match vertex list");
            return rep;
        }
        for i in 0..n {
            if self.vertex(i) == self.vertex(self.next_idx(i)) {
                rep.push("degenerate-edge", format!("vertices {i} and next coincide"));
                return rep;
            }
        }
        if !self.area2().is_positive() {
            rep.push("orientation", "vertices must be in counterclockwise order");
        }
        // Simplicity: non-adjacent edges must not meet.
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (self.vertex(i), self.vertex(i + 1));
                let (c, d) = (self.vertex(j), self.vertex(self.next_idx(j)));
                if segments_intersect(a, b, c, d) {
                    rep.push("self-intersection", format!("edges {i} and {j} intersect"));
                }
            }
        }
        // No straight vertices.
        for i in 0..n {
            let (Ok(e_in), Ok(e_out)) = (self.in_dir(i), self.out_dir(i)) else {
                continue;
            };
            if wedge(&e_in, &e_out).is_zero() {
                rep.push("straight-vertex", format!("vertex {i} is collinear"));
            }
        }
        // Roles vs cuts cross-references.
        for (ci, cut) in self.cuts.iter().enumerate() {
            let expected = match cut.kind {
                CutKind::Ray => 1,
                CutKind::Seam => 2,
            };
            if cut.base.len() != expected {
                rep.push("cut-base-arity", format!("cut {ci} has wrong base arity"));
                continue;
            }
            for &b in &cut.base {
                if b >= n {
                    rep.push("cut-base-range", format!("cut {ci} base {b} out of range"));
                } else if self.roles[b] != Role::CutBase(ci) {
                    rep.push(
                        "role-mismatch",
                        format!("cut base vertex {b} must have CUT_BASE role for cut {ci}"),
                    );
                }
            }
        }
        for (vi, role) in self.roles.iter().enumerate() {
            match role {
                Role::Delzant => {}
                Role::CutBase(ci) => {
                    if *ci >= self.cuts.len() || !self.cuts[*ci].base.contains(&vi) {
                        rep.push("role-dangling", format!("vertex {vi} references cut {ci}"));
                    }
                }
                Role::SeamApex(ci) => {
                    if *ci >= self.cuts.len()
                        || self.cuts[*ci].kind != CutKind::Seam
                        || self.seam_apex(*ci) != vi
                    {
                        rep.push("role-dangling", format!("vertex {vi} apex of cut {ci}?"));
                    }
                }
            }
        }
        if !rep.ok() {
            return rep;
        }
        // Delzant corners.
        for i in 0..n {
            if self.roles[i] == Role::Delzant {
                let (e_in, e_out) = (self.in_dir(i).unwrap(), self.out_dir(i).unwrap());
                let w = wedge(&e_in, &e_out).abs();
                if !w.is_one() {
                    rep.push(
                        "not-delzant",
                        format!("vertex {i} has |wedge| = {w}, expected 1"),
                    );
                }
            }
        }
        // Per-cut geometry.
        for (ci, cut) in self.cuts.iter().enumerate() {
            if !cut.direction.is_primitive() {
                rep.push("cut-direction", format!("cut {ci} direction not primitive"));
                continue;
            }
            match cut.kind {
                CutKind::Ray => self.validate_ray(ci, cut, &mut rep),
                CutKind::Seam => self.validate_seam(ci, cut, &mut rep),
            }
        }
        // Pairwise disjoint cut segments (they may share nothing at all;
        // bases are distinct vertices).
        let segs: Vec<(usize, (RationalPoint, RationalPoint))> = (0..self.cuts.len())
            .flat_map(|ci| self.cut_segments(ci).into_iter().map(move |s| (ci, s)))
            .collect();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if segs[i].0 == segs[j].0 {
                    continue;
                }
                let (a, b) = &segs[i].1;
                let (c, d) = &segs[j].1;
                if segments_intersect(a, b, c, d) {
                    rep.push(
                        "cut-overlap",
                        format!("cuts {} and {} intersect", segs[i].0, segs[j].0),
                    );
                }
            }
        }
        // Monotone point, when marked, must be strictly interior.
        if let Some(m) = &self.monotone_point {
            if !self.point_strictly_inside(m) {
                rep.push("monotone-outside", "monotone point is not interior");
            }
        }
        // Closure of the boundary as length-weighted primitive directions.
        let mut sum = RatVec {
            x: Rat::zero(),
            y: Rat::zero(),
        };
        for i in 0..n {
            let d = self.edge_dir(i).unwrap();
            let l = self.edge_length(i);
            sum.x += &l * Rat::from_integer(d.x);
            sum.y += l * Rat::from_integer(d.y);
        }
        if !sum.is_zero() {
            rep.push("closure", "length-weighted edge directions do not close");
        }
        rep
    }

    fn validate_ray(&self, ci: usize, cut: &Cut, rep: &mut ValidationReport) {
        if cut.nodes.is_empty() {
            rep.push("cut-empty", format!("ray cut {ci} has no nodes"));
            return;
        }
        let mut prev: Option<&Rat> = None;
        for t in &cut.nodes {
            if !t.is_positive() {
                rep.push("node-param", format!("cut {ci} node parameter {t} <= 0"));
            }
            if let Some(p) = prev {
                if p >= t {
                    rep.push("node-order", format!("cut {ci} nodes not strictly increasing"));
                }
            }
            prev = Some(t);
        }
        let base_pt = self.vertex(cut.base[0]);
        for t in &cut.nodes {
            let p = base_pt.add_vec(&cut.direction, t);
            if !self.point_strictly_inside(&p) {
                rep.push(
                    "node-outside",
                    format!("cut {ci} node at parameter {t} is not interior"),
                );
            }
        }
        match self.base_relation_holds(cut, cut.base[0]) {
            Ok(true) => {}
            Ok(false) => rep.push(
                "monodromy",
                format!("cut {ci}: edge directions at base are not monodromy-related"),
            ),
            Err(_) => rep.push("monodromy", format!("cut {ci}: degenerate base edges")),
        }
        // The open cut segment must stay off the boundary (other than the base).
        let (a, b) = &self.cut_segments(ci)[0];
        for i in 0..self.len() {
            let (c, d) = (self.vertex(i), self.vertex(self.next_idx(i)));
            if segments_intersect(a, b, c, d) {
                // Touching exactly at the base point is fine.
                let only_base = point_on_segment(a, c, d)
                    && !point_on_segment(b, c, d)
                    && !segments_intersect(&a.add_vec(&cut.direction, &cut.nodes[0]), b, c, d);
                if !only_base {
                    rep.push(
                        "cut-boundary",
                        format!("cut {ci} segment touches boundary edge {i}"),
                    );
                }
            }
        }
    }

    fn validate_seam(&self, ci: usize, cut: &Cut, rep: &mut ValidationReport) {
        let apex_idx = self.seam_apex(ci);
        if self.next_idx(apex_idx) != cut.base[1] {
            rep.push(
                "seam-shape",
                format!("seam {ci} bases must flank a single apex vertex"),
            );
            return;
        }
        if self.roles[apex_idx] != Role::SeamApex(ci) {
            rep.push("seam-apex-role", format!("seam {ci} apex role missing"));
        }
        if cut.nodes.len() != 1 {
            rep.push("seam-nodes", format!("seam {ci} must carry one node"));
            return;
        }
        let apex = self.vertex(apex_idx);
        let b1 = self.vertex(cut.base[0]);
        let b2 = self.vertex(cut.base[1]);
        let l1 = affine_length(b1, apex);
        let l2 = affine_length(apex, b2);
        if l1 != cut.nodes[0] || l2 != cut.nodes[0] {
            rep.push(
                "seam-length",
                format!("seam {ci} flank lengths {l1}, {l2} != recorded {}", cut.nodes[0]),
            );
        }
        // The two flanks are identified by the single-node monodromy.
        let to_b1 = b1.sub(apex);
        let to_b2 = b2.sub(apex);
        let fwd = crate::lattice::monodromy_apply(&cut.direction, 1, &to_b2);
        let bwd = crate::lattice::monodromy_apply(&cut.direction, -1, &to_b2);
        if fwd != to_b1 && bwd != to_b1 {
            rep.push(
                "seam-monodromy",
                format!("seam {ci} flanks are not identified by the node monodromy"),
            );
        }
        // Boundary continues across the seam in the eigendirection.
        let before = self.in_dir(cut.base[0]);
        let after = self.out_dir(cut.base[1]);
        if let (Ok(before), Ok(after)) = (before, after) {
            if wedge(&before, &cut.direction).is_zero() != wedge(&after, &cut.direction).is_zero()
            {
                rep.push("seam-edge", format!("seam {ci} does not sit inside an edge"));
            }
        }
    }

    /// Node/length profile. Requires all cuts to be rays.
    pub fn profile(&self) -> Result<Profile> {
        if self.has_seam() {
            return Err(Error::SeamPresent);
        }
        let mut node_type = Vec::new();
        for cut in &self.cuts {
            let b = cut.base[0];
            let w = wedge(&self.in_dir(b)?, &self.out_dir(b)?).abs();
            let n = Int::from(cut.nodes.len());
            let q = &w / &n;
            if &q * &n != w {
                return Err(Error::NonIntegralNodeType(w.to_string(), cut.nodes.len()));
            }
            let p = perfect_sqrt(&q)
                .ok_or_else(|| Error::NonIntegralNodeType(w.to_string(), cut.nodes.len()))?;
            node_type.push((n, p));
        }
        let triangular = self.len() == 3
            && self.cuts.len() == 3
            && self.roles.iter().all(|r| matches!(r, Role::CutBase(_)));
        if !triangular {
            let length_type = (0..self.len()).map(|i| self.edge_length(i)).collect();
            return Ok(Profile {
                node_type,
                length_type,
                lambda: None,
            });
        }
        // Edge opposite cut i's base: the unique edge not incident to it.
        let mut length_type = Vec::new();
        let mut lambda: Option<Rat> = None;
        for (ci, cut) in self.cuts.iter().enumerate() {
            let b = cut.base[0];
            let opposite = (0..3)
                .find(|&e| e != b && self.next_idx(e) != b)
                .expect("triangle has an opposite edge");
            let len = self.edge_length(opposite);
            let (n, p) = &node_type[ci];
            let ratio = Rat::from_integer(n * p * p) / &len;
            match &lambda {
                None => lambda = Some(ratio),
                Some(l) if *l == ratio => {}
                Some(l) => {
                    return Err(Error::NotTriangular(format!(
                        "lambda ratios disagree: {l} vs {ratio}"
                    )))
                }
            }
            length_type.push(len);
        }
        Ok(Profile {
            node_type,
            length_type,
            lambda,
        })
    }

    /// Exit of the ray `start + t * dir`, `t > t_min`, through the boundary.
    /// Returns `(t, Some(vertex))` when the exit is an existing vertex, or
    /// `(t, None)` (edge interior) otherwise. Errors when the ray leaves
    /// through more than one boundary point.
    pub fn ray_exit(
        &self,
        start: &RationalPoint,
        dir: &LatticeVec,
        t_min: &Rat,
    ) -> Result<(Rat, Option<usize>)> {
        let mut hits: Vec<(Rat, Option<usize>)> = Vec::new();
        for i in 0..self.len() {
            let a = self.vertex(i);
            let b = self.vertex(self.next_idx(i));
            // Solve start + t dir = a + s (b - a), 0 <= s < 1.
            let e = b.sub(a);
            let denom = wedge_lat_rat(dir, &e);
            let sa = a.sub(start);
            if denom.is_zero() {
                continue; // parallel; vertex hits are caught via s = 0 of the next edge
            }
            let t = rat_wedge(&sa, &e) / &denom;
            let s = -(wedge_lat_rat(dir, &sa)) / &denom;
            if &t > t_min && !s.is_negative() && s < Rat::one() {
                let hit_vertex = s.is_zero().then_some(i);
                if !hits.iter().any(|(ht, hv)| *ht == t && *hv == hit_vertex) {
                    hits.push((t, hit_vertex));
                }
            }
        }
        hits.sort_by(|x, y| x.0.cmp(&y.0));
        hits.dedup_by(|x, y| x.0 == y.0);
        match hits.len() {
            1 => Ok(hits.pop().unwrap()),
            0 => Err(Error::CutCollision("ray does not reach the boundary".into())),
            _ => Err(Error::CutCollision(
                "ray crosses the boundary more than once (nonconvex chain)".into(),
            )),
        }
    }
}
