use std::collections::HashSet;

use crate::complex::{Complex2, EdgePath, Step};

/// Every path one elementary move away from `f`: inserting or deleting a
/// backtrack `e e⁻¹`, or replacing a subpath `A` of a face boundary
/// `A B` (any rotation, either orientation) by `B⁻¹`. `f` itself is never
/// returned.
pub fn elementary_homotopies(x: &Complex2, f: &EdgePath) -> Vec<EdgePath> {
    let mut seen = HashSet::from([f.clone()]);
    let mut out = Vec::new();
    let mut push = |p: EdgePath| {
        if seen.insert(p.clone()) {
            out.push(p);
        }
    };
    let steps = &f.steps;
    let at = f.vertices(x);
    for i in 0..steps.len().saturating_sub(1) {
        if steps[i + 1] == steps[i].inv() {
            let mut s = steps.clone();
            s.drain(i..i + 2);
            push(EdgePath { start: f.start, steps: s });
        }
    }
    for k in 0..=steps.len() {
        for &st in x.steps_from(at[k]) {
            let mut s = steps.clone();
            s.splice(k..k, [st, st.inv()]);
            push(EdgePath { start: f.start, steps: s });
        }
    }
    for face in x.faces() {
        let b = &face.boundary.steps;
        let inverse: Vec<Step> = b.iter().rev().map(|s| s.inv()).collect();
        for word in [b.clone(), inverse] {
            let len = word.len();
            for r in 0..len {
                let c: Vec<Step> = word[r..].iter().chain(&word[..r]).copied().collect();
                let c_start = x.step_endpoints(c[0]).0;
                for k in 0..=steps.len() {
                    if at[k] != c_start {
                        continue;
                    }
                    for m in 0..=len.min(steps.len() - k) {
                        if steps[k..k + m] != c[..m] {
                            break;
                        }
                        let replacement = c[m..].iter().rev().map(|s| s.inv());
                        let mut s = steps[..k].to_vec();
                        s.extend(replacement);
                        s.extend_from_slice(&steps[k + m..]);
                        push(EdgePath { start: f.start, steps: s });
                    }
                }
            }
        }
    }
    out
}
