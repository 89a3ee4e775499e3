use num_traits::One;

use super::*;
use crate::atbd::ops::Side;
use crate::lattice::{lvec, rpoint};
use crate::markov::{MarkovEqnII, Triple};
use crate::num::{int, rat, ratio};

/// The reference three-cut diagram: triangle (-1,-1), (2,-1), (-1,2) with
/// cuts through the origin in directions (1,1), (-2,1), (1,-2).
pub(crate) fn cp2_reference() -> Atbd {
    let mut d = Atbd {
        label: "cp2 reference".into(),
        vertices: vec![rpoint(-1, -1), rpoint(2, -1), rpoint(-1, 2)],
        roles: Vec::new(),
        cuts: vec![
            Cut {
                direction: lvec(1, 1),
                kind: CutKind::Ray,
                base: vec![0],
                nodes: vec![ratio(1, 2)],
            },
            Cut {
                direction: lvec(-2, 1),
                kind: CutKind::Ray,
                base: vec![1],
                nodes: vec![ratio(1, 2)],
            },
            Cut {
                direction: lvec(1, -2),
                kind: CutKind::Ray,
                base: vec![2],
                nodes: vec![ratio(1, 2)],
            },
        ],
        monotone_point: Some(rpoint(0, 0)),
    };
    d.rebuild_roles();
    d
}

fn cp2_one_cut() -> Atbd {
    let mut d = cp2_reference();
    d.cuts.truncate(1);
    d.rebuild_roles();
    d
}

#[test]
fn reference_diagram_validates() {
    let d = cp2_reference();
    assert!(d.validate().ok(), "{}", d.validate());
    assert!(d.is_monotone().unwrap());
    assert_eq!(d.monotone_distance().unwrap(), Some(rat(1)));
    assert_eq!(d.area(), ratio(9, 2));
}

#[test]
fn role_mismatch_is_reported() {
    let mut d = cp2_reference();
    d.roles[0] = Role::Delzant;
    let report = d.validate();
    assert!(report.has_code("role-mismatch"));
}

#[test]
fn plain_triangle_is_delzant() {
    let mut d = cp2_reference();
    d.cuts.clear();
    d.rebuild_roles();
    assert!(d.validate().ok());
}

#[test]
fn profile_of_reference() {
    let p = cp2_reference().profile().unwrap();
    assert_eq!(p.node_type, vec![(int(1), int(1)); 3]);
    assert_eq!(p.length_type, vec![rat(3); 3]);
    assert_eq!(p.lambda, Some(ratio(1, 3)));
}

#[test]
fn nodal_trade_on_plain_corner() {
    let mut d = cp2_reference();
    d.cuts.clear();
    d.rebuild_roles();
    let traded = nodal_trade(&d, 0).unwrap();
    assert_eq!(traded.cuts.len(), 1);
    assert_eq!(traded.cuts[0].direction, lvec(1, 1));
    assert_eq!(traded.cuts[0].nodes, vec![ratio(1, 2)]);
    assert_eq!(traded.vertices, d.vertices);
    assert!(traded.validate().ok(), "{}", traded.validate());
    // Trading every corner gives the reference node type.
    let all = nodal_trade(&nodal_trade(&traded, 1).unwrap(), 2).unwrap();
    let p = all.profile().unwrap();
    assert_eq!(p.node_type, vec![(int(1), int(1)); 3]);
}

#[test]
fn nodal_trade_rejects_heavy_corner() {
    // Corner with |wedge| = 4 at (0,1) for the CP(1,1,4)-style triangle.
    let mut d = Atbd {
        label: "heavy".into(),
        vertices: vec![rpoint(0, 0), rpoint(4, 0), rpoint(0, 1)],
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: None,
    };
    d.rebuild_roles();
    assert!(matches!(nodal_trade(&d, 2), Err(Error::NotDelzant(2))));
}

#[test]
fn nodal_slide_round_trip() {
    let d = cp2_reference();
    let slid = nodal_slide(&d, 0, vec![ratio(3, 4)]).unwrap();
    assert_eq!(slid.cuts[0].nodes, vec![ratio(3, 4)]);
    assert_eq!(slid.vertices, d.vertices);
    let back = nodal_slide(&slid, 0, vec![ratio(1, 2)]).unwrap();
    assert_eq!(back, d);
    // Sliding to the boundary (or past it) fails.
    assert!(nodal_slide(&d, 0, vec![ratio(3, 2)]).is_err());
    assert!(nodal_slide(&d, 0, vec![rat(0)]).is_err());
}

#[test]
fn transfer_left_matches_hand_computation() {
    let d = cp2_one_cut();
    let out = transfer_cut(&d, 0, Side::Left).unwrap();
    assert!(out.validate().ok(), "{}", out.validate());
    // Hand-derived image: triangle (2,-1), (1/2,1/2), (-4,-1) with the cut
    // based at (1/2, 1/2) pointing (-1,-1).
    let expected: Vec<RationalPoint> = vec![
        rpoint(2, -1),
        RationalPoint::new(ratio(1, 2), ratio(1, 2)),
        rpoint(-4, -1),
    ];
    assert_eq!(out.vertices, expected);
    assert_eq!(out.cuts.len(), 1);
    assert_eq!(out.cuts[0].direction, lvec(-1, -1));
    assert_eq!(out.cuts[0].base, vec![1]);
    assert_eq!(out.cuts[0].nodes, vec![rat(1)]);
    assert_eq!(out.area(), d.area());
    assert_eq!(out.monotone_point, d.monotone_point);
    assert!(out.is_monotone().unwrap());
    let mut lens: Vec<Rat> = (0..3).map(|i| out.edge_length(i)).collect();
    lens.sort();
    assert_eq!(lens, vec![ratio(3, 2), ratio(3, 2), rat(6)]);
}

#[test]
fn transfer_sides_are_equivalent() {
    let d = cp2_one_cut();
    let left = transfer_cut(&d, 0, Side::Left).unwrap();
    let right = transfer_cut(&d, 0, Side::Right).unwrap();
    assert!(right.validate().ok());
    assert!(equivalent(&left, &right).unwrap());
    assert!(!equivalent(&left, &d).unwrap(), "transfer changes the length type");
}

#[test]
fn transfer_twice_returns_translate() {
    let d = cp2_one_cut();
    let once = transfer_cut(&d, 0, Side::Left).unwrap();
    let twice = transfer_cut(&once, 0, Side::Left).unwrap();
    assert!(equivalent(&twice, &d).unwrap());
}

#[test]
fn mutate_reference_updates_types() {
    let d = cp2_reference();
    for ci in 0..3 {
        let m = mutate(&d, ci, Side::Left).unwrap();
        assert!(m.validate().ok(), "{}", m.validate());
        assert!(m.is_monotone().unwrap());
        assert_eq!(m.area(), d.area());
        let p = m.profile().unwrap();
        let mut nodes: Vec<(Int, Int)> = p.node_type.clone();
        nodes.sort();
        assert_eq!(nodes, vec![(int(1), int(1)), (int(1), int(1)), (int(1), int(2))]);
        // Length type (1,1,4) up to scale.
        let mut lens = p.length_type.clone();
        lens.sort();
        let unit = lens[0].clone();
        let norm: Vec<Rat> = lens.iter().map(|l| l / &unit).collect();
        assert_eq!(norm, vec![rat(1), rat(1), rat(4)]);
    }
}

#[test]
fn mutate_is_involution_up_to_equivalence() {
    let d = cp2_reference();
    let once = mutate(&d, 0, Side::Left).unwrap();
    let twice = mutate(&once, 0, Side::Left).unwrap();
    assert!(equivalent(&twice, &d).unwrap());
    assert!(!equivalent(&once, &d).unwrap());
    // Empty and repeated words through the fold.
    assert!(equivalent(&mutate_word(&d, &[]).unwrap(), &d).unwrap());
    let w = mutate_word(&d, &[(1, Side::Left), (1, Side::Left)]).unwrap();
    assert!(equivalent(&w, &d).unwrap());
}

#[test]
fn opposite_ray_cuts_merge_on_transfer() {
    // Hexagon with opposite cuts along the x-axis; transferring one merges
    // it into the other, which then carries two nodes.
    let mut d = Atbd {
        label: "dp3".into(),
        vertices: vec![
            rpoint(-1, 0),
            rpoint(0, -1),
            rpoint(1, -1),
            rpoint(1, 0),
            rpoint(0, 1),
            rpoint(-1, 1),
        ],
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: Some(rpoint(0, 0)),
    };
    d.rebuild_roles();
    let d = nodal_trade(&d, 0).unwrap();
    let d = nodal_trade(&d, 3).unwrap();
    assert_eq!(d.cuts[0].direction, lvec(1, 0));
    assert_eq!(d.cuts[1].direction, lvec(-1, 0));
    let out = mutate(&d, 0, Side::Right).unwrap();
    assert!(out.validate().ok(), "{}", out.validate());
    assert_eq!(out.cuts.len(), 1);
    assert_eq!(out.cuts[0].direction, lvec(-1, 0));
    assert_eq!(out.cuts[0].nodes.len(), 2);
    assert_eq!(out.len(), 5, "old base straightened away");
    assert_eq!(out.area(), d.area());
    assert!(out.is_monotone().unwrap());
}

#[test]
fn partial_mutation_splits_cut() {
    // Build the merged two-node cut, then move one node back.
    let mut d = Atbd {
        label: "dp3".into(),
        vertices: vec![
            rpoint(-1, 0),
            rpoint(0, -1),
            rpoint(1, -1),
            rpoint(1, 0),
            rpoint(0, 1),
            rpoint(-1, 1),
        ],
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: Some(rpoint(0, 0)),
    };
    d.rebuild_roles();
    let d = nodal_trade(&d, 0).unwrap();
    let d = nodal_trade(&d, 3).unwrap();
    let merged = mutate(&d, 0, Side::Right).unwrap();
    let split = mutate_nodes(&merged, 0, 1, Side::Right).unwrap();
    assert!(split.validate().ok(), "{}", split.validate());
    assert_eq!(split.cuts.len(), 2);
    let mut counts: Vec<usize> = split.cuts.iter().map(|c| c.nodes.len()).collect();
    counts.sort();
    assert_eq!(counts, vec![1, 1]);
    // The two rays sit on one eigenline with opposite directions.
    let dirs: Vec<LatticeVec> = split.cuts.iter().map(|c| c.direction.clone()).collect();
    assert_eq!(dirs[0], dirs[1].neg());
    assert_eq!(split.area(), d.area());
}

#[test]
fn toric_blowup_examples() {
    let mut d = cp2_reference();
    d.cuts.clear();
    d.rebuild_roles();
    let b1 = toric_blowup(&d, 0, &rat(1)).unwrap();
    assert!(b1.validate().ok());
    assert!(b1.is_monotone().unwrap());
    assert_eq!(b1.area(), d.area() - ratio(1, 2));
    assert_eq!(b1.len(), 4);
    // An off-size cut keeps validity but loses monotonicity. (Length 2 would
    // slice exactly through the marked point, so use 3/2.)
    let b2 = toric_blowup(&d, 0, &ratio(3, 2)).unwrap();
    assert!(b2.validate().ok(), "{}", b2.validate());
    assert!(!b2.is_monotone().unwrap());
    assert_eq!(b2.area(), d.area() - ratio(9, 8));
    assert!(toric_blowup(&d, 0, &rat(3)).is_err());
    // Lengths (3, 3a^2 - ab, 3b^2 - ab, ab) for (a, b) = (1, 1).
    let mut lens: Vec<Rat> = (0..4).map(|i| b1.edge_length(i)).collect();
    lens.sort();
    assert_eq!(lens, vec![rat(1), rat(2), rat(2), rat(3)]);
}

#[test]
fn almost_toric_blowup_quadrant() {
    // Unit-grid square with the bottom edge long enough for a notch at
    // p = (3, 0) of length 1.
    let mut d = Atbd {
        label: "square".into(),
        vertices: vec![rpoint(0, 0), rpoint(10, 0), rpoint(10, 10), rpoint(0, 10)],
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: None,
    };
    d.rebuild_roles();
    let p = rpoint(3, 0);
    let out = almost_toric_blowup(&d, 0, &p, &rat(1), Side::Left).unwrap();
    assert!(out.validate().ok(), "{}", out.validate());
    assert_eq!(out.cuts.len(), 1);
    let cut = &out.cuts[0];
    assert_eq!(cut.kind, CutKind::Seam);
    assert_eq!(cut.direction, lvec(1, 0));
    // Notch vertices (2,0), (3,1), (3,0); node at the apex.
    assert_eq!(out.vertices[1], rpoint(2, 0));
    assert_eq!(out.vertices[2], rpoint(3, 1));
    assert_eq!(out.vertices[3], rpoint(3, 0));
    assert_eq!(out.node_points(0), vec![rpoint(3, 1)]);
    assert_eq!(out.area(), d.area() - ratio(1, 2));
    // Exceptional flank has affine length 1.
    assert_eq!(
        crate::lattice::affine_length(&rpoint(3, 1), &rpoint(3, 0)),
        rat(1)
    );
}

#[test]
fn seam_transfer_right_matches_hand_computation() {
    let mut d = Atbd {
        label: "square".into(),
        vertices: vec![rpoint(0, 0), rpoint(10, 0), rpoint(10, 10), rpoint(0, 10)],
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: None,
    };
    d.rebuild_roles();
    let with_seam = almost_toric_blowup(&d, 0, &rpoint(3, 0), &rat(1), Side::Left).unwrap();
    let out = transfer_cut(&with_seam, 0, Side::Right).unwrap();
    assert!(out.validate().ok(), "{}", out.validate());
    assert_eq!(out.cuts.len(), 1);
    let cut = &out.cuts[0];
    assert_eq!(cut.kind, CutKind::Ray);
    assert_eq!(cut.direction, lvec(-1, 0));
    assert_eq!(out.vertices[cut.base[0]], rpoint(10, 1));
    assert_eq!(cut.nodes, vec![rat(7)]);
    // The node stays at the old apex.
    assert_eq!(out.node_points(0), vec![rpoint(3, 1)]);
    assert_eq!(out.area(), with_seam.area());
    // Boundary: (0,0) -> (9,0) -> (10,1)* -> (10,10) -> (0,10).
    assert_eq!(
        out.vertices,
        vec![
            rpoint(0, 0),
            rpoint(9, 0),
            rpoint(10, 1),
            rpoint(10, 10),
            rpoint(0, 10),
        ]
    );
}

#[test]
fn seam_transfer_left_lands_on_opposite_ray() {
    let mut d = Atbd {
        label: "square".into(),
        vertices: vec![rpoint(0, 0), rpoint(10, 0), rpoint(10, 10), rpoint(0, 10)],
        roles: Vec::new(),
        cuts: Vec::new(),
        monotone_point: None,
    };
    d.rebuild_roles();
    let with_seam = almost_toric_blowup(&d, 0, &rpoint(3, 0), &rat(1), Side::Left).unwrap();
    let left = transfer_cut(&with_seam, 0, Side::Left).unwrap();
    assert!(left.validate().ok(), "{}", left.validate());
    assert_eq!(left.cuts[0].direction, lvec(1, 0));
    assert_eq!(left.area(), with_seam.area());
    // Left and right normalizations cut along opposite eigenrays; one more
    // ray transfer relates them by a unimodular map.
    let right = transfer_cut(&with_seam, 0, Side::Right).unwrap();
    let left_flipped = transfer_cut(&left, 0, Side::Left).unwrap();
    assert!(equivalent(&left_flipped, &right).unwrap());
}

#[test]
fn build_triangular_reproduces_reference() {
    let spec = TriangularSpec {
        eq: MarkovEqnII::cp2(),
        triple: Triple::from_i64(1, 1, 1),
        nodes: [int(1), int(1), int(1)],
        x: int(-1),
        y: int(2),
        scale: rat(3),
    };
    let d = build_triangular(&spec).unwrap();
    assert!(d.validate().ok(), "{}", d.validate());
    assert!(d.is_monotone().unwrap());
    assert!(equivalent(&d, &cp2_reference()).unwrap());
    // Violating the cut relation is rejected.
    let bad = TriangularSpec {
        x: int(0),
        y: int(2),
        ..spec.clone()
    };
    assert!(matches!(
        build_triangular(&bad),
        Err(Error::NoAdmissibleCutIntegers(_))
    ));
}

#[test]
fn build_triangular_auto_picks_admissible_integers() {
    let eq = MarkovEqnII::cp2();
    let nodes = [int(1), int(1), int(1)];
    let d = build_triangular_auto(&eq, &Triple::from_i64(1, 1, 1), &nodes, &rat(3)).unwrap();
    assert!(equivalent(&d, &cp2_reference()).unwrap());
    // The product of lines: equation (2; 1,1,2), triple (1,1,1), nodes (1,1,2).
    let pxp = MarkovEqnII::from_i64(2, 1, 1, 2);
    let d = build_triangular_auto(
        &pxp,
        &Triple::from_i64(1, 1, 1),
        &[int(1), int(1), int(2)],
        &Rat::one(),
    )
    .unwrap();
    assert!(d.validate().ok());
    let p = d.profile().unwrap();
    let mut lens = p.length_type.clone();
    lens.sort();
    let unit = lens[0].clone();
    let norm: Vec<Rat> = lens.iter().map(|l| l / &unit).collect();
    assert_eq!(norm, vec![rat(1), rat(1), rat(2)]);
}

#[test]
fn canonicalize_is_idempotent() {
    let d = cp2_reference();
    let c1 = canonicalize(&d).unwrap();
    let c2 = canonicalize(&c1).unwrap();
    assert_eq!(crate::io::to_string(&c1), crate::io::to_string(&c2));
    // Equivalence under a quarter rotation.
    let rotated = apply_map(&d, &crate::lattice::UnimodularMap::rot90());
    assert!(equivalent(&d, &rotated).unwrap());
    // Diagrams of different length types are inequivalent.
    let m = mutate(&d, 0, Side::Left).unwrap();
    assert!(!equivalent(&d, &m).unwrap());
}

#[test]
fn eigenline_precondition_is_enforced() {
    let mut d = cp2_reference();
    // Shift the monotone point off the eigenlines.
    d.monotone_point = Some(RationalPoint::new(ratio(1, 7), ratio(1, 9)));
    assert!(matches!(
        mutate(&d, 0, Side::Left),
        Err(Error::EigenlineMissesMonotone(_))
    ));
}
