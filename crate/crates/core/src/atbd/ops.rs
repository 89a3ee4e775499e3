//! Diagram operations: nodal trade, nodal slide, transferring the cut,
//! mutation, toric blowup and almost toric blowup.
//!
//! Transferring the cut redraws a ray cut along the opposite eigenray. The
//! half-plane on the chosen side of the full eigenline is remapped by the
//! node monodromy `M^(eps*k)` centered anywhere on the line; the sign `eps`
//! is forced by requiring the boundary to continue straight across the old
//! base. A partial transfer moves only the outermost `k` of `n` nodes and
//! leaves a residual cut at the old base.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{
    monodromy_apply, monodromy_apply_lat, primitive, wedge, wedge_lat_rat, LatticeVec,
    RationalPoint,
};
use crate::num::{rat, Int, Rat};
use crate::{Error, Result};

use super::{segments_intersect, Atbd, Cut, CutKind, Role};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign(self) -> i8 {
        match self {
            Side::Left => 1,
            Side::Right => -1,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            other => Err(Error::parse(format!("side must be left or right: {other:?}"))),
        }
    }
}

/// Result of a transfer with enough bookkeeping for callers that track cut
/// identities across the operation.
#[derive(Clone, Debug)]
pub struct TransferOutcome {
    pub diagram: Atbd,
    /// New index of each old cut; the operated cut maps to the cut now
    /// carrying its transferred nodes.
    pub cut_map: Vec<usize>,
    /// Residual cut left at the old base by a partial transfer.
    pub residual: Option<usize>,
}

fn sign_of(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Rebuild vertex roles from the cut list.
pub(crate) fn rebuild_roles(d: &mut Atbd) {
    d.roles = vec![Role::Delzant; d.vertices.len()];
    for (ci, cut) in d.cuts.iter().enumerate() {
        for &b in &cut.base {
            d.roles[b] = Role::CutBase(ci);
        }
        if cut.kind == CutKind::Seam {
            let apex = (cut.base[0] + 1) % d.vertices.len();
            d.roles[apex] = Role::SeamApex(ci);
        }
    }
}

/// Canonical gauge for node parameters: spread the nodes of a ray cut
/// evenly between the base and the monotone point (or the boundary exit
/// when no monotone point is marked).
pub(crate) fn place_nodes_canonically(d: &mut Atbd, cut_idx: usize) -> Result<()> {
    let cut = &d.cuts[cut_idx];
    if cut.kind != CutKind::Ray {
        return Ok(());
    }
    let n = cut.nodes.len();
    let base = d.vertices[cut.base[0]].clone();
    let dir = cut.direction.clone();
    let reach = match &d.monotone_point {
        Some(m) => {
            let v = m.sub(&base);
            if !wedge_lat_rat(&dir, &v).is_zero() {
                return Err(Error::EigenlineMissesMonotone(cut.base[0]));
            }
            let t = if !dir.x.is_zero() {
                v.x / Rat::from_integer(dir.x.clone())
            } else {
                v.y / Rat::from_integer(dir.y.clone())
            };
            if !t.is_positive() {
                return Err(Error::EigenlineMissesMonotone(cut.base[0]));
            }
            t
        }
        None => d.ray_exit(&base, &dir, &Rat::zero())?.0,
    };
    let n_rat = rat(n as i64 + 1);
    d.cuts[cut_idx].nodes = (1..=n)
        .map(|j| &reach * rat(j as i64) / &n_rat)
        .collect();
    Ok(())
}

/// Exchange a Delzant corner for a one-node ray cut in the direction of the
/// sum of the outgoing edge directions.
pub fn nodal_trade(d: &Atbd, vertex: usize) -> Result<Atbd> {
    if d.roles[vertex] != Role::Delzant {
        return Err(Error::NotDelzant(vertex));
    }
    if !wedge(&d.in_dir(vertex)?, &d.out_dir(vertex)?).abs().is_one() {
        return Err(Error::NotDelzant(vertex));
    }
    let toward_prev = d.in_dir(vertex)?.neg();
    let toward_next = d.out_dir(vertex)?;
    let w = primitive(&toward_prev.add(&toward_next))?;
    let base = d.vertices[vertex].clone();
    if let Some(m) = &d.monotone_point {
        let v = m.sub(&base);
        if !wedge_lat_rat(&w, &v).is_zero() {
            return Err(Error::EigenlineMissesMonotone(vertex));
        }
    }
    let mut out = d.clone();
    out.cuts.push(Cut {
        direction: w,
        kind: CutKind::Ray,
        base: vec![vertex],
        nodes: vec![Rat::one()],
    });
    let idx = out.cuts.len() - 1;
    rebuild_roles(&mut out);
    place_nodes_canonically(&mut out, idx)?;
    Ok(out)
}

/// Trade direction a nodal trade at `vertex` would produce, without
/// performing it. Used by catalog label matching.
pub fn trade_direction(d: &Atbd, vertex: usize) -> Result<LatticeVec> {
    primitive(&d.in_dir(vertex)?.neg().add(&d.out_dir(vertex)?))
}

/// Move the nodes of a ray cut to new parameters along its eigenline.
pub fn nodal_slide(d: &Atbd, cut_idx: usize, new_positions: Vec<Rat>) -> Result<Atbd> {
    let cut = &d.cuts[cut_idx];
    if cut.kind != CutKind::Ray {
        return Err(Error::SeamPresent);
    }
    if new_positions.len() != cut.nodes.len() {
        return Err(Error::BadNodePlacement("node count must be preserved".into()));
    }
    let mut prev: Option<&Rat> = None;
    let base = &d.vertices[cut.base[0]];
    for t in &new_positions {
        if !t.is_positive() {
            return Err(Error::BadNodePlacement(format!("parameter {t} crosses the base")));
        }
        if let Some(p) = prev {
            if p >= t {
                return Err(Error::BadNodePlacement("parameters must strictly increase".into()));
            }
        }
        let point = base.add_vec(&cut.direction, t);
        if !d.point_strictly_inside(&point) {
            return Err(Error::BadNodePlacement(format!(
                "node at parameter {t} leaves the polygon"
            )));
        }
        prev = Some(t);
    }
    let mut out = d.clone();
    out.cuts[cut_idx].nodes = new_positions;
    Ok(out)
}

/// Transfer a cut to the opposite eigenray (rays), or normalize a seam to a
/// ray. The remapped side is `side`; both choices give unimodularly
/// equivalent results.
pub fn transfer_cut(d: &Atbd, cut_idx: usize, side: Side) -> Result<Atbd> {
    Ok(transfer_cut_tracked(d, cut_idx, side)?.diagram)
}

pub fn transfer_cut_tracked(d: &Atbd, cut_idx: usize, side: Side) -> Result<TransferOutcome> {
    match d.cuts[cut_idx].kind {
        CutKind::Ray => {
            let k = d.cuts[cut_idx].nodes.len();
            transfer_ray(d, cut_idx, side, k)
        }
        CutKind::Seam => transfer_seam(d, cut_idx, side),
    }
}

/// Transfer the outermost `k` of the cut's nodes; `k = n` is the full
/// transferring-the-cut operation.
pub(crate) fn transfer_ray(
    d: &Atbd,
    cut_idx: usize,
    side: Side,
    k: usize,
) -> Result<TransferOutcome> {
    let cut = d.cuts[cut_idx].clone();
    assert_eq!(cut.kind, CutKind::Ray);
    let n = cut.nodes.len();
    assert!(k >= 1 && k <= n, "must transfer between 1 and n nodes");
    let b = cut.base[0];
    let base = d.vertices[b].clone();
    let w = cut.direction.clone();
    let t_last = cut.nodes.last().unwrap().clone();
    let (t_exit, exit_vertex, exit_edge) = ray_exit_with_edge(d, &base, &w, &t_last)?;
    let exit_point = base.add_vec(&w, &t_exit);

    // Side of each vertex with respect to the full eigenline.
    let sides: Vec<i8> = d
        .vertices
        .iter()
        .map(|p| sign_of(&wedge_lat_rat(&w, &p.sub(&base))))
        .collect();
    for (i, s) in sides.iter().enumerate() {
        if *s == 0 && i != b && Some(i) != exit_vertex {
            return Err(Error::CutCollision(format!(
                "eigenline passes through vertex {i}"
            )));
        }
    }

    // Landing on an existing vertex: merge with an opposite-ray cut based
    // there, or absorb a Delzant corner (the corner then carries the
    // transferred cut; the monodromy relation is checked by validation).
    let merge_target = match exit_vertex {
        Some(v) => match d.roles[v] {
            Role::CutBase(c2)
                if d.cuts[c2].kind == CutKind::Ray && d.cuts[c2].direction == w.neg() =>
            {
                Some(c2)
            }
            Role::Delzant => None,
            _ => {
                return Err(Error::CutCollision(format!(
                    "opposite eigenray lands on occupied vertex {v}"
                )))
            }
        },
        None => None,
    };

    // Every other cut must sit strictly on one side of the line.
    let mapped_sign = side.sign();
    let mut cut_sides: Vec<i8> = vec![0; d.cuts.len()];
    for (ci, other) in d.cuts.iter().enumerate() {
        if ci == cut_idx || Some(ci) == merge_target {
            continue;
        }
        let mut pts: Vec<RationalPoint> = other
            .base
            .iter()
            .map(|&v| d.vertices[v].clone())
            .collect();
        pts.extend(d.node_points(ci));
        let mut s_common = 0i8;
        for p in &pts {
            let s = sign_of(&wedge_lat_rat(&w, &p.sub(&base)));
            if s == 0 {
                return Err(Error::CutCollision(format!("cut {ci} touches the eigenline")));
            }
            if s_common == 0 {
                s_common = s;
            } else if s_common != s {
                return Err(Error::CutCollision(format!("cut {ci} straddles the eigenline")));
            }
        }
        cut_sides[ci] = s_common;
    }

    // Monodromy power sign: +k when the mapped side contains the outgoing
    // boundary chain at the base.
    let out_side = sign_of(&wedge_lat_rat(&w, &d.out_dir(b)?.to_rat()));
    let eps: i64 = if out_side == mapped_sign { 1 } else { -1 };
    let power = eps * k as i64;
    let map_point = |p: &RationalPoint| -> RationalPoint {
        let v = monodromy_apply(&w, power, &p.sub(&base));
        RationalPoint::new(&base.x + v.x, &base.y + v.y)
    };

    // New vertex ring with provenance tags.
    let remove_base = k == n;
    let mut new_points: Vec<(RationalPoint, Option<usize>)> = Vec::new();
    let mut exit_new_idx = None;
    for i in 0..d.len() {
        if i == b && remove_base {
            // skip; straightness asserted below
        } else {
            let p = if sides[i] == mapped_sign {
                map_point(&d.vertices[i])
            } else {
                d.vertices[i].clone()
            };
            if Some(i) == exit_vertex {
                exit_new_idx = Some(new_points.len());
            }
            new_points.push((p, Some(i)));
        }
        if exit_vertex.is_none() && i == exit_edge {
            exit_new_idx = Some(new_points.len());
            new_points.push((exit_point.clone(), None));
        }
    }
    let exit_new_idx = exit_new_idx.expect("exit recorded");
    let old_to_new: std::collections::HashMap<usize, usize> = new_points
        .iter()
        .enumerate()
        .filter_map(|(ni, (_, oi))| oi.map(|o| (o, ni)))
        .collect();

    // The boundary must pass straight through the removed base point.
    if remove_base {
        let before = &new_points[old_to_new[&d.prev_idx(b)]].0;
        let after = &new_points[old_to_new[&d.next_idx(b)]].0;
        if super::orient(before, &base, after) != 0 {
            return Err(Error::CutCollision(
                "old base does not straighten; inconsistent monodromy".into(),
            ));
        }
    }

    // Rebuild cuts, keeping every surviving cut at its old index. A full
    // non-merging transfer keeps the operated cut's slot (so repeated words
    // address the same cut); a merge removes it and later indices shift.
    let mut new_cuts: Vec<Cut> = Vec::new();
    let mut cut_map = vec![usize::MAX; d.cuts.len()];
    let mut residual: Option<usize> = None;
    let moved_params: Vec<Rat> = cut.nodes[n - k..]
        .iter()
        .rev()
        .map(|t| &t_exit - t)
        .collect();
    let transferred = Cut {
        direction: w.neg(),
        kind: CutKind::Ray,
        base: vec![exit_new_idx],
        nodes: moved_params,
    };
    for (ci, other) in d.cuts.iter().enumerate() {
        if ci == cut_idx {
            if k < n {
                residual = Some(new_cuts.len());
                new_cuts.push(Cut {
                    direction: w.clone(),
                    kind: CutKind::Ray,
                    base: vec![old_to_new[&b]],
                    nodes: cut.nodes[..n - k].to_vec(),
                });
            } else if merge_target.is_none() {
                cut_map[ci] = new_cuts.len();
                new_cuts.push(transferred.clone());
            }
            continue;
        }
        let mut c = other.clone();
        c.base = c.base.iter().map(|v| old_to_new[v]).collect();
        if cut_sides[ci] == mapped_sign {
            c.direction = monodromy_apply_lat(&w, power, &c.direction);
            debug_assert!(c.direction.is_primitive());
        }
        if Some(ci) == merge_target {
            let mut merged = c.nodes.clone();
            merged.extend(transferred.nodes.iter().cloned());
            merged.sort();
            for pair in merged.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::CutCollision("transferred nodes collide".into()));
                }
            }
            c.nodes = merged;
            cut_map[cut_idx] = new_cuts.len();
        }
        cut_map[ci] = new_cuts.len();
        new_cuts.push(c);
    }
    if k < n && merge_target.is_none() {
        cut_map[cut_idx] = new_cuts.len();
        new_cuts.push(transferred);
    }

    let monotone_point = d.monotone_point.as_ref().map(|m| {
        if sign_of(&wedge_lat_rat(&w, &m.sub(&base))) == mapped_sign {
            map_point(m)
        } else {
            m.clone()
        }
    });

    let mut diagram = Atbd {
        label: d.label.clone(),
        vertices: new_points.into_iter().map(|(p, _)| p).collect(),
        roles: Vec::new(),
        cuts: new_cuts,
        monotone_point,
    };
    rebuild_roles(&mut diagram);
    Ok(TransferOutcome {
        diagram,
        cut_map,
        residual,
    })
}

fn ray_exit_with_edge(
    d: &Atbd,
    start: &RationalPoint,
    dir: &LatticeVec,
    t_min: &Rat,
) -> Result<(Rat, Option<usize>, usize)> {
    // Recompute like Atbd::ray_exit but keep the edge index for insertion.
    let mut hits: Vec<(Rat, Option<usize>, usize)> = Vec::new();
    for i in 0..d.len() {
        let a = d.vertex(i);
        let bb = d.vertex(d.next_idx(i));
        let e = bb.sub(a);
        let denom = wedge_lat_rat(dir, &e);
        if denom.is_zero() {
            continue;
        }
        let sa = a.sub(start);
        let t = crate::lattice::rat_wedge(&sa, &e) / &denom;
        let s = -(wedge_lat_rat(dir, &sa)) / &denom;
        if &t > t_min && !s.is_negative() && s < Rat::one() {
            let hit_vertex = s.is_zero().then_some(i);
            if !hits.iter().any(|(ht, hv, _)| *ht == t && *hv == hit_vertex) {
                hits.push((t, hit_vertex, i));
            }
        }
    }
    hits.sort_by(|x, y| x.0.cmp(&y.0));
    hits.dedup_by(|x, y| x.0 == y.0);
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        0 => Err(Error::CutCollision("ray does not reach the boundary".into())),
        _ => Err(Error::CutCollision(
            "ray crosses the boundary more than once".into(),
        )),
    }
}

/// Normalize a seam (blowup notch) into a ray cut by re-developing the lens
/// between the seam and the chosen eigenray.
fn transfer_seam(d: &Atbd, cut_idx: usize, side: Side) -> Result<TransferOutcome> {
    let cut = d.cuts[cut_idx].clone();
    assert_eq!(cut.kind, CutKind::Seam);
    let apex_idx = d.seam_apex(cut_idx);
    let apex = d.vertices[apex_idx].clone();
    let u = cut.direction.clone();
    let ray_dir = match side {
        Side::Right => u.clone(),
        Side::Left => u.neg(),
    };
    let (t_exit, exit_vertex, exit_edge) = ray_exit_with_edge(d, &apex, &ray_dir, &Rat::zero())?;
    // Landing on an existing vertex: allowed when it carries a colinear
    // opposite-ray cut (nodes merge) or a Delzant corner that absorbs the
    // cut; validation checks the resulting monodromy relation.
    let merge_target = match exit_vertex {
        Some(v) => match d.roles[v] {
            Role::CutBase(c2)
                if d.cuts[c2].kind == CutKind::Ray
                    && d.cuts[c2].direction == ray_dir.neg() =>
            {
                Some(c2)
            }
            Role::Delzant => None,
            _ => {
                return Err(Error::CutCollision(
                    "seam transfer lands on an occupied vertex".into(),
                ))
            }
        },
        None => None,
    };
    let exit_point = apex.add_vec(&ray_dir, &t_exit);
    // The ray must head into the interior.
    let mid = apex.add_vec(&ray_dir, &(&t_exit / rat(2)));
    if !d.point_strictly_inside(&mid) {
        return Err(Error::CutCollision("eigenray leaves the polygon".into()));
    }

    // Moved chain: walking counterclockwise from the seam to the exit edge.
    // For a rightward ray this is base[1] (the flank the ray leaves behind)
    // through the exit edge's start; leftward it is the exit edge's end
    // through base[0].
    let n_old = d.len();
    let mut moved: Vec<usize> = Vec::new();
    match side {
        Side::Right => {
            let mut i = cut.base[1];
            loop {
                moved.push(i);
                if i == exit_edge {
                    break;
                }
                i = d.next_idx(i);
                if i == cut.base[0] {
                    return Err(Error::CutCollision("seam lens is not simple".into()));
                }
            }
        }
        Side::Left => {
            let mut i = d.next_idx(exit_edge);
            loop {
                moved.push(i);
                if i == cut.base[0] {
                    break;
                }
                i = d.next_idx(i);
                if i == apex_idx {
                    return Err(Error::CutCollision("seam lens is not simple".into()));
                }
            }
        }
    }

    // Identification power: the map must glue the moved flank onto the kept
    // one.
    let (from_b, to_b) = match side {
        Side::Right => (cut.base[1], cut.base[0]),
        Side::Left => (cut.base[0], cut.base[1]),
    };
    let mut power = 0i64;
    for candidate in [1i64, -1] {
        let v = monodromy_apply(&u, candidate, &d.vertices[from_b].sub(&apex));
        let image = RationalPoint::new(&apex.x + v.x, &apex.y + v.y);
        if image == d.vertices[to_b] {
            power = candidate;
            break;
        }
    }
    if power == 0 {
        return Err(Error::CutCollision("seam flanks are not monodromy-related".into()));
    }
    let map_point = |p: &RationalPoint| -> RationalPoint {
        let v = monodromy_apply(&u, power, &p.sub(&apex));
        RationalPoint::new(&apex.x + v.x, &apex.y + v.y)
    };

    // Cuts inside the lens move; others must stay clear of the new ray.
    let moved_set: std::collections::HashSet<usize> = moved.iter().copied().collect();
    for (ci, other) in d.cuts.iter().enumerate() {
        if ci == cut_idx {
            continue;
        }
        let in_lens = other.base.iter().any(|v| moved_set.contains(v));
        if in_lens {
            if !other.base.iter().all(|v| moved_set.contains(v)) {
                return Err(Error::CutCollision(format!("cut {ci} straddles the seam lens")));
            }
            continue;
        }
        for (a, bseg) in d.cut_segments(ci) {
            if segments_intersect(&a, &bseg, &apex, &exit_point) {
                return Err(Error::CutCollision(format!("cut {ci} blocks the eigenray")));
            }
        }
    }

    // Lens polygon for the monotone-point test.
    let mut lens: Vec<RationalPoint> = vec![apex.clone()];
    match side {
        Side::Right => {
            for &i in &moved {
                lens.push(d.vertices[i].clone());
            }
            lens.push(exit_point.clone());
        }
        Side::Left => {
            lens.push(exit_point.clone());
            for &i in &moved {
                lens.push(d.vertices[i].clone());
            }
        }
    }
    let lens_poly = Atbd {
        label: String::new(),
        vertices: lens,
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: None,
    };
    let monotone_point = match &d.monotone_point {
        Some(m) => {
            if super::point_on_segment(m, &apex, &exit_point) {
                Some(m.clone())
            } else if lens_poly.point_strictly_inside(m) || {
                let mut rev = lens_poly.clone();
                rev.vertices.reverse();
                rev.point_strictly_inside(m)
            } {
                Some(map_point(m))
            } else {
                Some(m.clone())
            }
        }
        None => None,
    };

    // New vertex ring: apex leaves the boundary, the moved flank base lands
    // on the kept one, the exit point becomes the new cut base (or is an
    // existing vertex when the ray lands on one).
    let mut new_points: Vec<(RationalPoint, Option<usize>)> = Vec::new();
    let mut exit_new_idx = None;
    for i in 0..n_old {
        if i == apex_idx || i == from_b {
            if i == from_b {
                debug_assert_eq!(map_point(&d.vertices[i]), d.vertices[to_b]);
            }
        } else {
            let p = if moved_set.contains(&i) {
                map_point(&d.vertices[i])
            } else {
                d.vertices[i].clone()
            };
            if Some(i) == exit_vertex {
                exit_new_idx = Some(new_points.len());
            }
            new_points.push((p, Some(i)));
        }
        if exit_vertex.is_none() && i == exit_edge {
            exit_new_idx = Some(new_points.len());
            new_points.push((exit_point.clone(), None));
        }
    }
    let exit_new_idx = exit_new_idx.expect("exit inserted");

    // Drop the kept base vertex too when the boundary straightens there.
    let keep_pos = new_points
        .iter()
        .position(|(_, oi)| *oi == Some(to_b))
        .expect("kept flank base present");
    let len = new_points.len();
    let prev = (keep_pos + len - 1) % len;
    let next = (keep_pos + 1) % len;
    let straight = super::orient(&new_points[prev].0, &new_points[keep_pos].0, &new_points[next].0)
        == 0;
    if straight {
        new_points.remove(keep_pos);
    }
    let old_to_new: std::collections::HashMap<usize, usize> = new_points
        .iter()
        .enumerate()
        .filter_map(|(ni, (_, oi))| oi.map(|o| (o, ni)))
        .collect();
    let exit_new_idx = if straight && keep_pos < exit_new_idx {
        exit_new_idx - 1
    } else {
        exit_new_idx
    };

    let mut new_cuts = Vec::new();
    let mut cut_map = vec![usize::MAX; d.cuts.len()];
    for (ci, other) in d.cuts.iter().enumerate() {
        if ci == cut_idx {
            continue;
        }
        let mut c = other.clone();
        c.base = c.base.iter().map(|v| old_to_new[v]).collect();
        if other.base.iter().any(|v| moved_set.contains(v)) {
            c.direction = monodromy_apply_lat(&u, power, &c.direction);
        }
        if Some(ci) == merge_target {
            let mut merged = c.nodes.clone();
            merged.push(t_exit.clone());
            merged.sort();
            for pair in merged.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::CutCollision("transferred node collides".into()));
                }
            }
            c.nodes = merged;
            cut_map[cut_idx] = new_cuts.len();
        }
        cut_map[ci] = new_cuts.len();
        new_cuts.push(c);
    }
    if merge_target.is_none() {
        cut_map[cut_idx] = new_cuts.len();
        new_cuts.push(Cut {
            direction: ray_dir.neg(),
            kind: CutKind::Ray,
            base: vec![exit_new_idx],
            nodes: vec![t_exit],
        });
    }

    let mut diagram = Atbd {
        label: d.label.clone(),
        vertices: new_points.into_iter().map(|(p, _)| p).collect(),
        roles: Vec::new(),
        cuts: new_cuts,
        monotone_point,
    };
    rebuild_roles(&mut diagram);
    Ok(TransferOutcome {
        diagram,
        cut_map,
        residual: None,
    })
}

/// Mutation: slide the nodes through the monotone fibre and transfer the
/// cut. Implemented as a transfer followed by the canonical node gauge,
/// which realizes the same fibration.
pub fn mutate(d: &Atbd, cut_idx: usize, side: Side) -> Result<Atbd> {
    let k = d.cuts[cut_idx].node_count();
    Ok(mutate_nodes_tracked(d, cut_idx, k, side)?.0)
}

/// Mutate only `k` of the cut's nodes (a partial mutation splits the cut
/// into opposite rays on the same eigenline).
pub fn mutate_nodes(d: &Atbd, cut_idx: usize, k: usize, side: Side) -> Result<Atbd> {
    Ok(mutate_nodes_tracked(d, cut_idx, k, side)?.0)
}

pub fn mutate_nodes_tracked(
    d: &Atbd,
    cut_idx: usize,
    k: usize,
    side: Side,
) -> Result<(Atbd, TransferOutcome)> {
    let m = d.monotone_point.clone().ok_or(Error::NoMonotonePoint)?;
    let cut = &d.cuts[cut_idx];
    // The eigenline must pass through the monotone fibre.
    match cut.kind {
        CutKind::Ray => {
            let base = &d.vertices[cut.base[0]];
            let v = m.sub(base);
            if !wedge_lat_rat(&cut.direction, &v).is_zero() {
                return Err(Error::EigenlineMissesMonotone(cut.base[0]));
            }
        }
        CutKind::Seam => {
            let apex = &d.vertices[d.seam_apex(cut_idx)];
            if !wedge_lat_rat(&cut.direction, &m.sub(apex)).is_zero() {
                return Err(Error::EigenlineMissesMonotone(d.seam_apex(cut_idx)));
            }
        }
    }
    let outcome = match cut.kind {
        CutKind::Ray => transfer_ray(d, cut_idx, side, k)?,
        CutKind::Seam => transfer_seam(d, cut_idx, side)?,
    };
    let mut out = outcome.diagram.clone();
    place_nodes_canonically(&mut out, outcome.cut_map[cut_idx])?;
    if let Some(res) = outcome.residual {
        place_nodes_canonically(&mut out, res)?;
    }
    let mut outcome = outcome;
    outcome.diagram = out.clone();
    Ok((out, outcome))
}

/// Fold of `mutate` over a word of (cut, side) instructions.
pub fn mutate_word(d: &Atbd, word: &[(usize, Side)]) -> Result<Atbd> {
    let mut cur = d.clone();
    for &(cut, side) in word {
        cur = mutate(&cur, cut, side)?;
    }
    Ok(cur)
}

/// Toric blowup at a Delzant corner: cut the corner by affine length `l`.
pub fn toric_blowup(d: &Atbd, vertex: usize, l: &Rat) -> Result<Atbd> {
    if d.roles[vertex] != Role::Delzant {
        return Err(Error::NotDelzant(vertex));
    }
    if !l.is_positive() {
        return Err(Error::InsufficientRoom("blowup length must be positive".into()));
    }
    let prev_len = d.edge_length(d.prev_idx(vertex));
    let next_len = d.edge_length(vertex);
    if l >= &prev_len || l >= &next_len {
        return Err(Error::InsufficientRoom(format!(
            "blowup length {l} must be below adjacent edge lengths {prev_len}, {next_len}"
        )));
    }
    let v = d.vertices[vertex].clone();
    let toward_prev = d.in_dir(vertex)?.neg();
    let toward_next = d.out_dir(vertex)?;
    let v1 = v.add_vec(&toward_prev, l);
    let v2 = v.add_vec(&toward_next, l);
    // The removed corner triangle must not touch any cut.
    for ci in 0..d.cuts.len() {
        for (a, b) in d.cut_segments(ci) {
            if segments_intersect(&a, &b, &v1, &v2)
                || segments_intersect(&a, &b, &v, &v1)
                || segments_intersect(&a, &b, &v, &v2)
            {
                return Err(Error::CutCollision(format!("cut {ci} meets the blowup corner")));
            }
        }
    }
    let mut out = d.clone();
    out.vertices.splice(vertex..=vertex, [v1, v2]);
    out.cuts = d
        .cuts
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.base = c
                .base
                .iter()
                .map(|&bv| if bv > vertex { bv + 1 } else { bv })
                .collect();
            c
        })
        .collect();
    rebuild_roles(&mut out);
    Ok(out)
}

/// Almost toric blowup of length `l` at a point `p` interior to a boundary
/// edge. The notch extends from `p` backward along the edge (`Side::Left`)
/// or forward (`Side::Right`); a new seam cut with eigendirection parallel
/// to the edge carries the node at the notch apex.
pub fn almost_toric_blowup(
    d: &Atbd,
    edge: usize,
    p: &RationalPoint,
    l: &Rat,
    side: Side,
) -> Result<Atbd> {
    if d.edge_is_seam(edge) {
        return Err(Error::SeamPresent);
    }
    if !l.is_positive() {
        return Err(Error::InsufficientRoom("blowup length must be positive".into()));
    }
    let a = d.vertex(edge).clone();
    let b = d.vertex(d.next_idx(edge)).clone();
    if !super::point_on_segment(p, &a, &b) || p == &a || p == &b {
        return Err(Error::InsufficientRoom("point must be interior to the edge".into()));
    }
    let u = d.edge_dir(edge)?;
    let q = match side {
        Side::Left => p.add_vec(&u.neg(), l),
        Side::Right => p.add_vec(&u, l),
    };
    if !super::point_on_segment(&q, &a, &b) || q == a || q == b {
        return Err(Error::InsufficientRoom(format!(
            "no room of affine length {l} on the chosen side"
        )));
    }
    // Inward lattice normal with wedge(u, nu) = 1, reduced along u.
    let nu = inward_conormal(&u);
    let apex = p.add_vec(&nu, l);
    if !d.point_strictly_inside(&apex) {
        return Err(Error::InsufficientRoom("notch apex leaves the polygon".into()));
    }
    // Notch triangle must avoid all cuts.
    let (first, second) = match side {
        Side::Left => (q.clone(), p.clone()),
        Side::Right => (p.clone(), q.clone()),
    };
    for ci in 0..d.cuts.len() {
        for (s1, s2) in d.cut_segments(ci) {
            if segments_intersect(&s1, &s2, &first, &apex)
                || segments_intersect(&s1, &s2, &apex, &second)
                || segments_intersect(&s1, &s2, &first, &second)
            {
                return Err(Error::CutCollision(format!("cut {ci} meets the notch")));
            }
        }
    }
    let mut out = d.clone();
    let insert_at = edge + 1;
    out.vertices
        .splice(insert_at..insert_at, [first, apex, second]);
    out.cuts = d
        .cuts
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.base = c
                .base
                .iter()
                .map(|&bv| if bv >= insert_at { bv + 3 } else { bv })
                .collect();
            c
        })
        .collect();
    out.cuts.push(Cut {
        direction: u,
        kind: CutKind::Seam,
        base: vec![insert_at, insert_at + 2],
        nodes: vec![l.clone()],
    });
    rebuild_roles(&mut out);
    Ok(out)
}

/// The lattice vector `nu` with `wedge(u, nu) = 1`, reduced so its component
/// along `u` is as small as possible. For an edge of a counterclockwise
/// polygon it points inward.
pub fn inward_conormal(u: &LatticeVec) -> LatticeVec {
    let gcd = u.x.extended_gcd(&u.y);
    debug_assert!(gcd.gcd.is_one(), "edge directions are primitive");
    // u.x * s + u.y * t = 1 with (s, t) = (gcd.x, gcd.y); then
    // wedge(u, (-t, s)) = u.x * s + u.y * t = 1.
    let mut nu = LatticeVec::new(-gcd.y, gcd.x.clone());
    // Reduce modulo u to the representative minimizing |<nu, u>|.
    let dot = |v: &LatticeVec| -> Int { &v.x * &u.x + &v.y * &u.y };
    let uu = dot(u);
    let shift = Rat::new(dot(&nu), uu.clone()).round().to_integer();
    nu = nu.sub(&u.scale(&shift));
    debug_assert_eq!(wedge(u, &nu), Int::one());
    nu
}
