//! Development tracer: replay a catalog script step by step and print the
//! diagram state, available trade directions and cut inventory after each
//! step. Usage: cargo run -p atfkit-core --example trace -- <script-id> [step]

use atfkit_core::atbd::{trade_direction, Atbd, CutKind, Role};
use atfkit_core::catalog;
use atfkit_core::num::rat_to_string;

fn describe(d: &Atbd) {
    println!("  vertices ({}):", d.len());
    for (i, v) in d.vertices.iter().enumerate() {
        let role = match d.roles[i] {
            Role::Delzant => "delzant".to_string(),
            Role::CutBase(c) => format!("cut {c}"),
            Role::SeamApex(c) => format!("apex {c}"),
        };
        let trade = if d.roles[i] == Role::Delzant {
            match trade_direction(d, i) {
                Ok(w) => format!(" trade->{w}"),
                Err(_) => String::new(),
            }
        } else {
            String::new()
        };
        println!(
            "    v{i} ({}, {}) [{role}]{trade}",
            rat_to_string(&v.x),
            rat_to_string(&v.y)
        );
    }
    println!("  cuts:");
    for (ci, cut) in d.cuts.iter().enumerate() {
        let kind = match cut.kind {
            CutKind::Ray => "ray",
            CutKind::Seam => "seam",
        };
        println!(
            "    c{ci} {kind} dir {} base {:?} nodes {}",
            cut.direction,
            cut.base,
            cut.nodes.len()
        );
    }
    if let Some(m) = &d.monotone_point {
        println!(
            "  monotone ({}, {}) distance {:?}",
            rat_to_string(&m.x),
            rat_to_string(&m.y),
            d.monotone_distance().unwrap().map(|r| rat_to_string(&r))
        );
    }
    let report = d.validate();
    println!("  valid: {}", if report.ok() { "yes".into() } else { format!("NO\n{report}") });
    if let Ok(p) = d.profile() {
        let nodes: Vec<String> = p.node_type.iter().map(|(n, q)| format!("({n},{q})")).collect();
        let lens: Vec<String> = p.length_type.iter().map(rat_to_string).collect();
        println!("  profile: nodes {} lengths {}", nodes.join(" "), lens.join(" "));
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().cloned().unwrap_or_else(|| "cp2x3.A".to_string());
    let max_step: Option<usize> = args.get(1).and_then(|s| s.parse().ok());
    let script = catalog::scripts()
        .into_iter()
        .find(|s| s.id == id)
        .unwrap_or_else(|| panic!("unknown script {id}"));
    let last = max_step.unwrap_or(script.steps.len());
    for step in 1..=last {
        println!("== {id} step {step} ({}) ==", script.steps[step - 1].label);
        match catalog::build_raw(&id, step) {
            Ok(d) => describe(&d),
            Err(e) => {
                println!("  REPLAY FAILED: {e}");
                break;
            }
        }
    }
    if last == script.steps.len() && script.closing_trades {
        println!("== {id} finalized ==");
        match catalog::build(&id, last) {
            Ok(d) => {
                describe(&d);
                match catalog::derive_linkage(&d) {
                    Ok(l) => println!(
                        "  linkage: {} / {} triple {} pqr {} lambda {}",
                        l.eq_i, l.eq_ii, l.triple, l.pqr, l.lambda
                    ),
                    Err(e) => println!("  linkage failed: {e}"),
                }
            }
            Err(e) => println!("  FINALIZE FAILED: {e}"),
        }
    }
}
