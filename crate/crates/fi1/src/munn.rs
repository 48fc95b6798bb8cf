//! Diagram output: the path-shaped tree of a single element and the
//! idempotent semilattice grid, as DOT and as one-character-per-vertex ASCII.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::element::Element;

/// DOT rendering of the tree of `e`: a left-to-right path with
/// `a + b + 1` vertices. The initial vertex sits `a` edges from the left end
/// and the terminal vertex at offset `a + p`; both are marked by dashed
/// arrows from/to anchor nodes, mirroring the loose arrows of the usual
/// picture.
pub fn munn_dot(e: &Element) -> String {
    let a = e.left_reach();
    let vertices = e.dclass_index() + 1;
    let initial = a;
    let terminal = a + e.displacement();

    let mut out = String::new();
    out.push_str("digraph munn {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, label=\"\", width=0.2];\n");
    out.push_str("  in [shape=none, width=0];\n");
    out.push_str("  out [shape=none, width=0];\n");
    for v in 0..vertices {
        let _ = writeln!(out, "  v{v};");
    }
    for v in 0..vertices - 1 {
        let _ = writeln!(out, "  v{v} -> v{};", v + 1);
    }
    let _ = writeln!(out, "  in -> v{initial} [style=dashed];");
    let _ = writeln!(out, "  v{terminal} -> out [style=dashed];");
    out.push_str("}\n");
    out
}

/// ASCII rendering: one character per vertex, joined by `-`.
/// `I` marks the initial vertex, `T` the terminal one, `B` both, `o` plain.
pub fn munn_ascii(e: &Element) -> String {
    let a = e.left_reach();
    let vertices = e.dclass_index() + 1;
    let initial = a;
    let terminal = a + e.displacement();

    let mut out = String::new();
    for v in 0..vertices {
        if v > 0 {
            out.push('-');
        }
        out.push(match (v == initial, v == terminal) {
            (true, true) => 'B',
            (true, false) => 'I',
            (false, true) => 'T',
            (false, false) => 'o',
        });
    }
    out
}

/// DOT rendering of the idempotent grid with `a <= amax`, `b <= bmax`
/// (the origin excluded). Edges are the covering relation of the natural
/// order; idempotents listed in `marked` are filled red.
pub fn lattice_dot(amax: i64, bmax: i64, marked: &BTreeSet<Element>) -> String {
    let mut out = String::new();
    out.push_str("digraph lattice {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for a in 0..=amax {
        for b in 0..=bmax {
            if a + b == 0 {
                continue;
            }
            let idem = Element::new(a, 0, b).expect("a + b > 0");
            let style = if marked.contains(&idem) {
                ", style=filled, fillcolor=red"
            } else {
                ""
            };
            let _ = writeln!(out, "  n_{a}_{b} [label=\"({}, 0, {b})\"{style}];", -a);
        }
    }
    // (-a, 0, b) is covered by (-(a-1), 0, b) and (-a, 0, b-1).
    for a in 0..=amax {
        for b in 0..=bmax {
            if a + b == 0 {
                continue;
            }
            if a >= 1 && (a - 1) + b > 0 {
                let _ = writeln!(out, "  n_{a}_{b} -> n_{}_{b};", a - 1);
            }
            if b >= 1 && a + (b - 1) > 0 {
                let _ = writeln!(out, "  n_{a}_{b} -> n_{a}_{};", b - 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::elements_up_to;

    fn e(a: i64, p: i64, b: i64) -> Element {
        Element::new(a, p, b).unwrap()
    }

    #[test]
    fn ascii_generator() {
        // Two vertices, initial leftmost, terminal rightmost.
        assert_eq!(munn_ascii(&e(0, 1, 1)), "I-T");
    }

    #[test]
    fn ascii_idempotent_merges_marks() {
        // Four vertices; initial = terminal at offset 2 from the left.
        assert_eq!(munn_ascii(&e(2, 0, 1)), "o-o-B-o");
    }

    #[test]
    fn vertex_count_is_index_plus_one() {
        for el in elements_up_to(4) {
            let ascii = munn_ascii(&el);
            let vertices = ascii.chars().filter(|c| *c != '-').count() as i64;
            assert_eq!(vertices, el.dclass_index() + 1, "{el}");
        }
    }

    #[test]
    fn dot_marks_initial_and_terminal() {
        let dot = munn_dot(&e(1, -1, 1));
        assert!(dot.contains("in -> v1 [style=dashed];"));
        assert!(dot.contains("v0 -> out [style=dashed];"));
        assert!(dot.contains("v0 -> v1;"));
        assert!(dot.contains("v1 -> v2;"));
        assert!(!dot.contains("v2 -> v3;"));
    }

    #[test]
    fn lattice_dot_grid_and_marks() {
        let marked: BTreeSet<Element> = [e(1, 0, 1)].into_iter().collect();
        let dot = lattice_dot(2, 2, &marked);
        assert!(dot.contains("n_1_1 [label=\"(-1, 0, 1)\", style=filled, fillcolor=red];"));
        assert!(dot.contains("n_2_0 -> n_1_0;"));
        assert!(dot.contains("n_0_2 -> n_0_1;"));
        // (0, 0) is not a vertex.
        assert!(!dot.contains("n_0_0"));
        assert!(!dot.contains("n_1_0 -> n_0_0;"));
    }

    #[test]
    fn renders_are_deterministic() {
        let el = e(2, 1, 3);
        assert_eq!(munn_dot(&el), munn_dot(&el));
        assert_eq!(lattice_dot(3, 3, &BTreeSet::new()), lattice_dot(3, 3, &BTreeSet::new()));
    }
}
