//! Diagram file format: one JSON document per diagram, canonical field
//! order, rationals as `num/den` strings and big integers as decimal
//! strings. Serialization is byte-stable for golden-file comparisons.

use serde::{Deserialize, Serialize};

use crate::atbd::{Atbd, Cut, CutKind, Role};
use crate::lattice::{LatticeVec, RationalPoint};
use crate::num::{int_from_str, rat_from_str, rat_to_string};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Doc {
    format: String,
    label: String,
    vertices: Vec<[String; 2]>,
    roles: Vec<String>,
    cuts: Vec<CutDoc>,
    monotone_point: Option<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CutDoc {
    direction: [String; 2],
    kind: CutKind,
    base: Vec<usize>,
    nodes: Vec<String>,
}

const FORMAT: &str = "atbd/1";

fn point_doc(p: &RationalPoint) -> [String; 2] {
    [rat_to_string(&p.x), rat_to_string(&p.y)]
}

fn point_from_doc(d: &[String; 2]) -> Result<RationalPoint> {
    Ok(RationalPoint::new(rat_from_str(&d[0])?, rat_from_str(&d[1])?))
}

fn role_doc(r: &Role) -> String {
    match r {
        Role::Delzant => "delzant".to_string(),
        Role::CutBase(i) => format!("cut:{i}"),
        Role::SeamApex(i) => format!("apex:{i}"),
    }
}

fn role_from_doc(s: &str) -> Result<Role> {
    if s == "delzant" {
        return Ok(Role::Delzant);
    }
    if let Some(i) = s.strip_prefix("cut:") {
        return Ok(Role::CutBase(i.parse().map_err(|_| Error::parse(s))?));
    }
    if let Some(i) = s.strip_prefix("apex:") {
        return Ok(Role::SeamApex(i.parse().map_err(|_| Error::parse(s))?));
    }
    Err(Error::parse(format!("unknown role {s:?}")))
}

pub fn to_string(d: &Atbd) -> String {
    let doc = Doc {
        format: FORMAT.to_string(),
        label: d.label.clone(),
        vertices: d.vertices.iter().map(point_doc).collect(),
        roles: d.roles.iter().map(role_doc).collect(),
        cuts: d
            .cuts
            .iter()
            .map(|c| CutDoc {
                direction: [c.direction.x.to_string(), c.direction.y.to_string()],
                kind: c.kind,
                base: c.base.clone(),
                nodes: c.nodes.iter().map(rat_to_string).collect(),
            })
            .collect(),
        monotone_point: d.monotone_point.as_ref().map(point_doc),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serialization is infallible");
    s.push('\n');
    s
}

pub fn from_str(s: &str) -> Result<Atbd> {
    let doc: Doc = serde_json::from_str(s).map_err(|e| Error::parse(e.to_string()))?;
    if doc.format != FORMAT {
        return Err(Error::parse(format!(
            "unsupported format {:?}, expected {FORMAT:?}",
            doc.format
        )));
    }
    let vertices = doc
        .vertices
        .iter()
        .map(point_from_doc)
        .collect::<Result<Vec<_>>>()?;
    let roles = doc
        .roles
        .iter()
        .map(|r| role_from_doc(r))
        .collect::<Result<Vec<_>>>()?;
    let cuts = doc
        .cuts
        .iter()
        .map(|c| {
            Ok(Cut {
                direction: LatticeVec::new(
                    int_from_str(&c.direction[0])?,
                    int_from_str(&c.direction[1])?,
                ),
                kind: c.kind,
                base: c.base.clone(),
                nodes: c
                    .nodes
                    .iter()
                    .map(|n| rat_from_str(n))
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone_point = match &doc.monotone_point {
        Some(p) => Some(point_from_doc(p)?),
        None => None,
    };
    Ok(Atbd {
        label: doc.label,
        vertices,
        roles,
        cuts,
        monotone_point,
    })
}

pub fn write_file(d: &Atbd, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, to_string(d))?;
    Ok(())
}

pub fn read_file(path: &std::path::Path) -> Result<Atbd> {
    let s = std::fs::read_to_string(path)?;
    from_str(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{lvec, rpoint};

    fn sample() -> Atbd {
        let mut d = Atbd {
            label: "sample".into(),
            vertices: vec![rpoint(-1, -1), rpoint(2, -1), rpoint(-1, 2)],
            roles: Vec::new(),
            cuts: vec![Cut {
                direction: lvec(1, 1),
                kind: CutKind::Ray,
                base: vec![0],
                nodes: vec![crate::num::ratio(1, 2)],
            }],
            monotone_point: Some(rpoint(0, 0)),
        };
        d.rebuild_roles();
        d
    }

    #[test]
    fn round_trip_is_exact() {
        let d = sample();
        let s = to_string(&d);
        let back = from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(to_string(&back), s);
    }

    #[test]
    fn serialization_is_byte_stable() {
        let d = sample();
        assert_eq!(to_string(&d), to_string(&d.clone()));
        assert!(to_string(&d).contains("\"-1/1\""));
    }
}
