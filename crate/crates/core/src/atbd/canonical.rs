//! Canonical forms for diagrams and lattice polygons.
//!
//! Diagrams are equivalent when related by a translation and an SL(2,Z)
//! map (plus cut normalization and the node-position gauge). The canonical
//! form is computed over a finite complete set of orbit representatives:
//! one shear-normalized map per boundary edge, sending that edge direction
//! to (1, 0). Byte-wise comparison of the serialized representatives then
//! decides equivalence.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{wedge, LatticeVec, RationalPoint, UnimodularMap};
use crate::num::{Int, Rat};
use crate::Result;

use super::ops::{place_nodes_canonically, rebuild_roles, transfer_cut_tracked, Side};
use super::{Atbd, CutKind};

/// Apply a linear unimodular map about the origin to every coordinate of
/// the diagram.
pub fn apply_map(d: &Atbd, u: &UnimodularMap) -> Atbd {
    let map_pt = |p: &RationalPoint| {
        let v = u.apply_rat(&p.sub(&RationalPoint::origin()));
        RationalPoint::new(v.x, v.y)
    };
    let mut out = d.clone();
    out.vertices = d.vertices.iter().map(map_pt).collect();
    out.monotone_point = d.monotone_point.as_ref().map(map_pt);
    for cut in &mut out.cuts {
        cut.direction = u.apply(&cut.direction);
    }
    out
}

pub fn translate(d: &Atbd, dx: &Rat, dy: &Rat) -> Atbd {
    let mut out = d.clone();
    out.vertices = d.vertices.iter().map(|p| p.translate(dx, dy)).collect();
    out.monotone_point = d.monotone_point.as_ref().map(|p| p.translate(dx, dy));
    out
}

/// Rotate the vertex ring so that index `k` comes first.
fn rotate_start(d: &Atbd, k: usize) -> Atbd {
    let n = d.vertices.len();
    let mut out = d.clone();
    out.vertices = (0..n).map(|i| d.vertices[(i + k) % n].clone()).collect();
    for cut in &mut out.cuts {
        for b in &mut cut.base {
            *b = (*b + n - k) % n;
        }
    }
    rebuild_roles(&mut out);
    out
}

/// The unique unimodular map sending `e` to (1, 0) normalized so the image
/// of `f` has x-component in `[0, |wedge(e, f)|)`.
fn normalized_map(e: &LatticeVec, f: &LatticeVec) -> UnimodularMap {
    debug_assert!(e.is_primitive());
    let gcd = e.x.extended_gcd(&e.y);
    debug_assert!(gcd.gcd.is_one());
    let u0 = UnimodularMap::new(gcd.x, gcd.y, -e.y.clone(), e.x.clone());
    debug_assert_eq!(u0.apply(e), crate::lattice::lvec(1, 0));
    let fi = u0.apply(f);
    debug_assert!(!fi.y.is_zero());
    let x_norm = fi.x.mod_floor(&fi.y.abs());
    let m = (x_norm - &fi.x) / &fi.y;
    UnimodularMap::new(Int::one(), m, Int::zero(), Int::one()).mul(&u0)
}

/// Candidate canonical maps of a cyclic sequence of primitive directions.
fn candidate_maps(dirs: &[LatticeVec]) -> Vec<UnimodularMap> {
    let n = dirs.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let e = &dirs[i];
        let f = (1..n)
            .map(|k| &dirs[(i + k) % n])
            .find(|f| !wedge(e, f).is_zero());
        if let Some(f) = f {
            out.push(normalized_map(e, f));
        }
    }
    out
}

fn serialize_for_compare(d: &Atbd) -> String {
    let mut blank = d.clone();
    blank.label = String::new();
    crate::io::to_string(&blank)
}

/// Normal form: seams transferred away, node parameters in the canonical
/// gauge, monotone point (or vertex centroid) at the origin, and the
/// lexicographically least serialized unimodular image.
pub fn canonicalize(d: &Atbd) -> Result<Atbd> {
    let mut cur = d.clone();
    while let Some(ci) = cur.cuts.iter().position(|c| c.kind == CutKind::Seam) {
        cur = transfer_cut_tracked(&cur, ci, Side::Left)?.diagram;
    }
    for ci in 0..cur.cuts.len() {
        place_nodes_canonically(&mut cur, ci)?;
    }
    let center = match &cur.monotone_point {
        Some(m) => m.clone(),
        None => {
            let n = crate::num::rat(cur.vertices.len() as i64);
            let mut sx = Rat::zero();
            let mut sy = Rat::zero();
            for v in &cur.vertices {
                sx += &v.x;
                sy += &v.y;
            }
            RationalPoint::new(sx / &n, sy / n)
        }
    };
    let cur = translate(&cur, &-&center.x, &-&center.y);
    let dirs: Vec<LatticeVec> = (0..cur.len())
        .map(|i| cur.edge_dir(i))
        .collect::<Result<_>>()?;
    let mut best: Option<(String, Atbd)> = None;
    for map in candidate_maps(&dirs) {
        let mut cand = apply_map(&cur, &map);
        let start = (0..cand.len())
            .min_by(|&a, &b| cand.vertices[a].lex_cmp(&cand.vertices[b]))
            .unwrap();
        cand = rotate_start(&cand, start);
        // Cuts in base order keeps the serialization canonical.
        let mut order: Vec<usize> = (0..cand.cuts.len()).collect();
        order.sort_by_key(|&c| cand.cuts[c].base[0]);
        cand.cuts = order.iter().map(|&c| cand.cuts[c].clone()).collect();
        rebuild_roles(&mut cand);
        let key = serialize_for_compare(&cand);
        if best.as_ref().map_or(true, |(k, _)| key < *k) {
            best = Some((key, cand));
        }
    }
    let (_, mut win) = best.expect("polygon has edges");
    win.label = d.label.clone();
    Ok(win)
}

/// Label-blanked serialization of the canonical form; equal strings mean
/// equivalent diagrams.
pub fn canonical_bytes(d: &Atbd) -> Result<String> {
    Ok(serialize_for_compare(&canonicalize(d)?))
}

pub fn equivalent(a: &Atbd, b: &Atbd) -> Result<bool> {
    Ok(canonical_bytes(a)? == canonical_bytes(b)?)
}

/// Canonical form of a lattice polygon (cyclic vertex list, counterclockwise)
/// under SL(2,Z) alone; used for hull comparisons.
pub fn canonical_lattice_polygon(points: &[LatticeVec]) -> Vec<LatticeVec> {
    assert!(points.len() >= 3);
    let n = points.len();
    let dirs: Vec<LatticeVec> = (0..n)
        .map(|i| {
            crate::lattice::primitive(&points[(i + 1) % n].sub(&points[i])).expect("distinct")
        })
        .collect();
    let mut best: Option<(String, Vec<LatticeVec>)> = None;
    for map in candidate_maps(&dirs) {
        let mapped: Vec<LatticeVec> = points.iter().map(|p| map.apply(p)).collect();
        let start = (0..n).min_by_key(|&i| (mapped[i].x.clone(), mapped[i].y.clone())).unwrap();
        let rotated: Vec<LatticeVec> = (0..n).map(|i| mapped[(i + start) % n].clone()).collect();
        let key = rotated
            .iter()
            .map(|p| format!("{},{}", p.x, p.y))
            .collect::<Vec<_>>()
            .join(";");
        if best.as_ref().map_or(true, |(k, _)| key < *k) {
            best = Some((key, rotated));
        }
    }
    best.expect("nondegenerate polygon").1
}
