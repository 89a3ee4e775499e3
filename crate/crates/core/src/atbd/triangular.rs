//! Construction of triangular diagrams from Markov type II data.
//!
//! With the short edge direction normalized to (1, 0) and cut directions
//! w1 = (x, p), w2 = (y, q), the other edge directions are forced by the
//! node monodromies: u1 = (1 - n2 y q, -n2 q^2), u2 = (1 + n1 x p, n1 p^2).
//! The cut integers (x, y) range over the solution family of the linear
//! relation n2 y q k1 a^2 - n1 x p k2 b^2 = K k1 k2 k3 a b c.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{lvec, primitive, wedge_lat_rat, LatticeVec, RationalPoint};
use crate::markov::{derive_type_i_data, MarkovEqn, MarkovEqnII, Triple};
use crate::num::{Int, Rat};
use crate::{Error, Result};

use super::ops::{place_nodes_canonically, rebuild_roles};
use super::{Atbd, Cut, CutKind};

#[derive(Clone, Debug)]
pub struct TriangularSpec {
    pub eq: MarkovEqnII,
    pub triple: Triple,
    pub nodes: [Int; 3],
    pub x: Int,
    pub y: Int,
    pub scale: Rat,
}

/// Left-hand side minus right-hand side of the cut-integer relation; zero
/// for admissible (x, y).
fn eq5_defect(spec: &TriangularSpec, p: &Int, q: &Int) -> Int {
    let eq = &spec.eq;
    let (a, b, c) = (&spec.triple.0, &spec.triple.1, &spec.triple.2);
    let lhs = &spec.nodes[1] * &spec.y * q * &eq.k[0] * a * a
        - &spec.nodes[0] * &spec.x * p * &eq.k[1] * b * b;
    let rhs = &eq.big_k * &eq.k[0] * &eq.k[1] * &eq.k[2] * a * b * c;
    lhs - rhs
}

/// Integer solutions (x, y) of the cut relation, ordered by |x| (then x).
pub fn eq5_solutions(
    eq: &MarkovEqnII,
    triple: &Triple,
    nodes: &[Int; 3],
    window: usize,
) -> Result<Vec<(Int, Int)>> {
    let data = derive_type_i_data(eq, triple, nodes)?;
    let (p, q) = (&data.pqr.0, &data.pqr.1);
    let (a, b, c) = (&triple.0, &triple.1, &triple.2);
    // A y - B x = R
    let big_a = &nodes[1] * q * &eq.k[0] * a * a;
    let big_b = &nodes[0] * p * &eq.k[1] * b * b;
    let r = &eq.big_k * &eq.k[0] * &eq.k[1] * &eq.k[2] * a * b * c;
    let g = big_a.gcd(&big_b);
    if !(&r % &g).is_zero() {
        return Err(Error::NoAdmissibleCutIntegers(format!(
            "gcd({big_a}, {big_b}) does not divide {r}"
        )));
    }
    let ext = big_a.extended_gcd(&big_b);
    // big_a * ext.x + big_b * ext.y = g  =>  y0 = ext.x * (r/g), x0 = -ext.y * (r/g)
    let scale = &r / &g;
    let y0 = &ext.x * &scale;
    let x0 = -&ext.y * &scale;
    debug_assert_eq!(&big_a * &y0 - &big_b * &x0, r);
    let step_x = &big_a / &g;
    let step_y = &big_b / &g;
    // x = x0 + step_x * k; center the scan where |x| is smallest.
    let k_center = if step_x.is_zero() {
        Int::zero()
    } else {
        Rat::new(-x0.clone(), step_x.clone()).round().to_integer()
    };
    let mut sols: Vec<(Int, Int)> = Vec::new();
    let w = window as i64;
    for dk in -w..=w {
        let k = &k_center + Int::from(dk);
        let x = &x0 + &step_x * &k;
        let y = &y0 + &step_y * &k;
        sols.push((x, y));
    }
    sols.sort_by_key(|(x, _)| (x.abs(), x.clone()));
    Ok(sols)
}

/// Interior point at equal lattice distance from three support lines
/// `(normal, offset)`, together with that distance.
fn equal_distance_point(lines: &[(LatticeVec, Rat); 3]) -> Option<(RationalPoint, Rat)> {
    // <nu_i, m> - off_i = dist for all i; eliminate dist pairwise.
    let row = |i: usize, j: usize| -> (Rat, Rat, Rat) {
        let (ni, oi) = &lines[i];
        let (nj, oj) = &lines[j];
        (
            Rat::from_integer(&ni.x - &nj.x),
            Rat::from_integer(&ni.y - &nj.y),
            oi - oj,
        )
    };
    let (a1, b1, c1) = row(0, 1);
    let (a2, b2, c2) = row(0, 2);
    let det = &a1 * &b2 - &a2 * &b1;
    if det.is_zero() {
        return None;
    }
    let mx = (&c1 * &b2 - &c2 * &b1) / &det;
    let my = (&a1 * &c2 - &a2 * &c1) / &det;
    let m = RationalPoint::new(mx, my);
    let (n0, o0) = &lines[0];
    let dist = Rat::from_integer(n0.x.clone()) * &m.x + Rat::from_integer(n0.y.clone()) * &m.y
        - o0;
    dist.is_positive().then_some((m, dist))
}

/// Build the triangular diagram for an explicit cut-integer choice.
pub fn build_triangular(spec: &TriangularSpec) -> Result<Atbd> {
    let eq = &spec.eq;
    if !MarkovEqn::II(eq.clone()).is_solution(&spec.triple) {
        return Err(Error::NotASolution(eq.to_string()));
    }
    if !spec.scale.is_positive() {
        return Err(Error::BadEquation("scale must be positive".into()));
    }
    let data = derive_type_i_data(eq, &spec.triple, &spec.nodes)?;
    let Triple(p, q, _r) = data.pqr.clone();
    if !eq5_defect(spec, &p, &q).is_zero() {
        return Err(Error::NoAdmissibleCutIntegers(format!(
            "(x, y) = ({}, {}) violates the cut relation",
            spec.x, spec.y
        )));
    }
    let n = &spec.nodes;
    let u3 = lvec(1, 0);
    let u1 = LatticeVec::new(
        Int::from(1) - &n[1] * &spec.y * &q,
        -(&n[1] * &q * &q),
    );
    let u2 = LatticeVec::new(Int::from(1) + &n[0] * &spec.x * &p, &n[0] * &p * &p);
    debug_assert!(u1.is_primitive() && u2.is_primitive());
    let (a, b, c) = (&spec.triple.0, &spec.triple.1, &spec.triple.2);
    let len1 = &spec.scale * Rat::from_integer(&eq.k[0] * a * a);
    let len2 = &spec.scale * Rat::from_integer(&eq.k[1] * b * b);
    let len3 = &spec.scale * Rat::from_integer(&eq.k[2] * c * c);
    let v0 = RationalPoint::origin();
    let v1 = v0.add_vec(&u3, &len3);
    let v2 = v1.add_vec(&u2, &len2);
    let closure = v2.add_vec(&u1, &len1);
    if closure != v0 {
        return Err(Error::NoAdmissibleCutIntegers(
            "edge data does not close up; inconsistent spec".into(),
        ));
    }
    // Support lines for the three edges (counterclockwise order v0 v1 v2).
    let support = |dir: &LatticeVec, at: &RationalPoint| -> (LatticeVec, Rat) {
        let nu = dir.rot90();
        let off = Rat::from_integer(nu.x.clone()) * &at.x + Rat::from_integer(nu.y.clone()) * &at.y;
        (nu, off)
    };
    let lines = [support(&u3, &v0), support(&u2, &v1), support(&u1, &v2)];
    let (m, _dist) = equal_distance_point(&lines).ok_or_else(|| {
        Error::NoAdmissibleCutIntegers("triangle has no interior equal-distance point".into())
    })?;

    // Cut directions (signs fixed so they point at the monotone point).
    let vertices = [v0.clone(), v1.clone(), v2.clone()];
    let raw_dirs = [
        (1usize, LatticeVec::new(spec.x.clone(), p.clone())),
        (0usize, LatticeVec::new(spec.y.clone(), q.clone())),
        (2usize, primitive(&u2.sub(&u1))?),
    ];
    let mut cuts = Vec::new();
    for (base, dir) in raw_dirs {
        let to_m = m.sub(&vertices[base]);
        if !wedge_lat_rat(&dir, &to_m).is_zero() {
            let alternatives = eq5_solutions(eq, &spec.triple, &spec.nodes, 4)?
                .into_iter()
                .map(|(x, y)| format!("({x}, {y})"))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::NoAdmissibleCutIntegers(format!(
                "cut eigenline from vertex {base} misses the monotone point; \
                 candidate (x, y) family: {alternatives}"
            )));
        }
        let forward = if !dir.x.is_zero() {
            (&to_m.x / Rat::from_integer(dir.x.clone())).is_positive()
        } else {
            (&to_m.y / Rat::from_integer(dir.y.clone())).is_positive()
        };
        let dir = if forward { dir } else { dir.neg() };
        let count = match base {
            1 => n[0].clone(),
            0 => n[1].clone(),
            _ => n[2].clone(),
        };
        let count = usize::try_from(&count).map_err(|_| {
            Error::BadEquation(format!("node count {count} too large"))
        })?;
        cuts.push(Cut {
            direction: dir,
            kind: CutKind::Ray,
            base: vec![base],
            nodes: vec![Rat::one(); count],
        });
    }
    let mut out = Atbd {
        label: format!("triangular {} t={} n=({},{},{})", eq, spec.triple, n[0], n[1], n[2]),
        vertices: vertices.to_vec(),
        roles: Vec::new(),
        cuts,
        monotone_point: Some(m),
    };
    rebuild_roles(&mut out);
    for ci in 0..out.cuts.len() {
        place_nodes_canonically(&mut out, ci)?;
    }
    let report = out.validate();
    if !report.ok() {
        return Err(Error::Invalid(report));
    }
    // Profile sanity: the node type must reproduce the derived (p, q, r).
    let profile = out.profile()?;
    let expect: Vec<(Int, Int)> = vec![
        (n[0].clone(), data.pqr.0.clone()),
        (n[1].clone(), data.pqr.1.clone()),
        (n[2].clone(), data.pqr.2.clone()),
    ];
    if profile.node_type != expect {
        return Err(Error::NoAdmissibleCutIntegers(format!(
            "constructed node type {:?} does not match derived {:?}",
            profile.node_type, expect
        )));
    }
    Ok(out)
}

/// Build a triangular diagram choosing the minimal-|x| admissible cut
/// integers from the solution family.
pub fn build_triangular_auto(
    eq: &MarkovEqnII,
    triple: &Triple,
    nodes: &[Int; 3],
    scale: &Rat,
) -> Result<Atbd> {
    let mut last_err = None;
    for (x, y) in eq5_solutions(eq, triple, nodes, 16)? {
        let spec = TriangularSpec {
            eq: eq.clone(),
            triple: triple.clone(),
            nodes: nodes.clone(),
            x,
            y,
            scale: scale.clone(),
        };
        match build_triangular(&spec) {
            Ok(d) => return Ok(d),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::InconsistentNodeAssignment))
}
