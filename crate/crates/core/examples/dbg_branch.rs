//! Focused debugging of one branch script: enumerate (pin, side) variants
//! for each action in sequence and print every failure reason.
//! Usage: cargo run --release -p atfkit-core --example dbg_branch -- cp2x6.C

use atfkit_core::atbd::{Atbd, CutKind, Role, Side};
use atfkit_core::catalog::{self, Action, BaseSpec, CatalogScript};
use atfkit_core::num::rat;

fn cuts_summary(d: &Atbd) -> String {
    let mut parts = Vec::new();
    for (ci, c) in d.cuts.iter().enumerate() {
        parts.push(format!(
            "c{ci}={}x{}{}",
            c.direction,
            c.node_count(),
            if c.kind == CutKind::Seam { "(seam)" } else { "" }
        ));
    }
    let delzant = (0..d.len()).filter(|&v| d.roles[v] == Role::Delzant).count();
    format!("{} | {delzant} rank-0", parts.join(" "))
}

fn main() {
    let id = std::env::args().nth(1).unwrap_or_else(|| "cp2x6.C".into());
    let scripts = catalog::scripts();
    let script: &CatalogScript = scripts.iter().find(|s| s.id == id).expect("script");
    let base = match &script.base {
        BaseSpec::Script { id, step, rescale } => {
            catalog::rescale(&catalog::build_raw(id, *step).expect("base"), &rat(*rescale))
        }
        BaseSpec::Polygon { .. } => panic!("use trace for polygon-based scripts"),
    };
    println!("base: {}", cuts_summary(&base));

    // Recursive enumeration with printing at each level.
    fn explore(
        script: &CatalogScript,
        d: &Atbd,
        step: usize,
        action_idx: usize,
        prefix: String,
    ) {
        if step == script.steps.len() {
            match catalog::apply_closing_trades(d) {
                Ok(fin) => match catalog::derive_linkage(&fin) {
                    Ok(l) => println!("{prefix} => FINAL {} / {} pqr {}", l.eq_i, l.eq_ii, l.pqr),
                    Err(e) => println!("{prefix} => final linkage failed: {e}"),
                },
                Err(e) => println!("{prefix} => closing trades failed: {e}"),
            }
            return;
        }
        let st = &script.steps[step];
        if action_idx == st.actions.len() {
            let ok = d.validate().ok()
                && (d.monotone_point.is_none() || d.is_monotone().unwrap_or(false));
            if !ok {
                println!("{prefix} [{}] step checks failed", st.label);
                return;
            }
            explore(script, d, step + 1, 0, prefix);
            return;
        }
        let action = &st.actions[action_idx];
        let variants: Vec<Action> = match action {
            Action::MutateAll { dir, count, .. } => {
                let mut v = Vec::new();
                for (ci, cut) in d.cuts.iter().enumerate() {
                    if cut.node_count() != *count || cut.kind != CutKind::Ray {
                        continue;
                    }
                    let dx: i64 = (&cut.direction.x).try_into().unwrap_or(9999);
                    let dy: i64 = (&cut.direction.y).try_into().unwrap_or(9999);
                    let pin =
                        if (dx, dy) == *dir || (-dx, -dy) == *dir { None } else { Some((dx, dy)) };
                    let _ = ci;
                    for s in [Side::Left, Side::Right] {
                        v.push(Action::MutateAll {
                            dir: *dir,
                            count: *count,
                            side: s,
                            realized_dir: pin,
                        });
                    }
                }
                v
            }
            Action::MutatePart { dir, take, .. } => {
                let mut v = Vec::new();
                for cut in &d.cuts {
                    if cut.node_count() <= *take || cut.kind != CutKind::Ray {
                        continue;
                    }
                    let dx: i64 = (&cut.direction.x).try_into().unwrap_or(9999);
                    let dy: i64 = (&cut.direction.y).try_into().unwrap_or(9999);
                    let pin =
                        if (dx, dy) == *dir || (-dx, -dy) == *dir { None } else { Some((dx, dy)) };
                    for s in [Side::Left, Side::Right] {
                        v.push(Action::MutatePart {
                            dir: *dir,
                            take: *take,
                            count: 0,
                            side: s,
                            realized_dir: pin,
                        });
                    }
                }
                v
            }
            other => vec![other.clone()],
        };
        for cand in variants {
            let desc = serde_json::to_string(&cand).unwrap();
            let mut sink = |_m: String| {};
            match catalog::apply_action(d, &cand, &mut sink) {
                Ok(next) => {
                    println!("{prefix} [{}] {desc} -> {}", st.label, cuts_summary(&next));
                    explore(
                        script,
                        &next,
                        step,
                        action_idx + 1,
                        format!("{prefix}  "),
                    );
                }
                Err(e) => println!("{prefix} [{}] {desc} -> ERR {e}", st.label),
            }
        }
    }

    explore(script, &base, 0, 0, String::new());
}
