//! One-off probe for the cp2x6.A step-2/3 variants.

use atfkit_core::atbd::{self, Atbd, Role, Side};
use atfkit_core::catalog::{self, Action};
use atfkit_core::num::rat;

fn show(tag: &str, d: &Atbd) {
    println!("-- {tag}");
    for (i, v) in d.vertices.iter().enumerate() {
        println!(
            "   v{i} ({}, {}) {:?}",
            atfkit_core::num::rat_to_string(&v.x),
            atfkit_core::num::rat_to_string(&v.y),
            d.roles[i]
        );
    }
    for (ci, c) in d.cuts.iter().enumerate() {
        println!("   c{ci} {} x{} base {:?}", c.direction, c.node_count(), c.base);
    }
    let rep = d.validate();
    println!("   valid: {}", if rep.ok() { "yes".to_string() } else { format!("NO: {rep}") });
}

fn main() {
    let base = catalog::rescale(&catalog::build_raw("cp2x5.C", 1).unwrap(), &rat(1));
    let after_blowup = catalog::apply_action(
        &base,
        &Action::ToricBlowup,
        &mut |_| {},
    )
    .unwrap();
    show("after blowup", &after_blowup);
    for v in 0..after_blowup.len() {
        if after_blowup.roles[v] == Role::Delzant {
            if let Ok(w) = atbd::trade_direction(&after_blowup, v) {
                println!("   rank-0 v{v} trade dir {w}");
            }
        }
    }
    // Try each rank-0 corner as the A2 trade, then both sides of the A3
    // mutation of the (-1,0)-type two-node cut.
    for v in 0..after_blowup.len() {
        if after_blowup.roles[v] != Role::Delzant {
            continue;
        }
        let Ok(traded) = atbd::nodal_trade(&after_blowup, v) else {
            println!("trade at v{v}: eigenline misses monotone point");
            continue;
        };
        show(&format!("traded at v{v}"), &traded);
        // Find the 2-node cut.
        let two: Vec<usize> = (0..traded.cuts.len())
            .filter(|&c| traded.cuts[c].node_count() == 2)
            .collect();
        for &c in &two {
            for side in [Side::Left, Side::Right] {
                match atbd::mutate(&traded, c, side) {
                    Ok(m) => {
                        show(
                            &format!("v{v} trade, mutate c{c} ({}) {side:?}", traded.cuts[c].direction),
                            &m,
                        );
                    }
                    Err(e) => println!(
                        "v{v} trade, mutate c{c} ({}) {side:?}: ERR {e}",
                        traded.cuts[c].direction
                    ),
                }
            }
        }
    }
}
