//! Graphviz export of finite orders and finite parts of spaces.

use std::fmt::Write;

use crate::algebra::{powerspace, PowerTheory};
use crate::elem::Elem;
use crate::order::{Carrier, FinitePoset};
use crate::report::{Bound, Error, Result};
use crate::space::{Space, Topo, View};

/// Hasse diagram with compact elements boxed and opens as comments.
pub fn to_dot(name: &str, labels: &[String], order: &FinitePoset, compact: &[bool], opens: &[Vec<usize>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "'"));
    let _ = writeln!(s, "  rankdir=BT;");
    for (i, l) in labels.iter().enumerate() {
        let shape = if compact.get(i).copied().unwrap_or(false) { "box" } else { "ellipse" };
        let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", l.replace('"', "'"));
    }
    for (a, b) in order.covers() {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    for u in opens {
        let members: Vec<&str> = u.iter().map(|&i| labels[i].as_str()).collect();
        let _ = writeln!(s, "  // open {{{}}}", members.join(", "));
    }
    s.push_str("}\n");
    s
}

/// The first `prefix` points of a space (all of them when finite).
pub fn space_dot(x: &Space, prefix: Option<usize>, bound: Bound) -> Result<String> {
    let pts: Vec<Elem> = match (x.elements(), prefix) {
        (_, Some(n)) => x.prefix(n),
        (Some(all), None) => all,
        (None, None) => {
            return Err(Error::Unsupported("the space is infinite; pass a prefix bound (--prefix N) to draw its first N points".into()))
        }
    };
    let order = FinitePoset::of_carrier(x, &pts);
    let v = View::with_points(x, bound, &pts);
    let compact: Vec<bool> = pts.iter().map(|p| v.compact(p)).collect();
    let opens: Vec<Vec<usize>> = v
        .opens
        .iter()
        .map(|u| (0..pts.len()).filter(|&i| x.in_open(u, &pts[i])).collect::<Vec<_>>())
        .filter(|m| !m.is_empty() && m.len() < pts.len())
        .collect();
    let labels: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
    Ok(to_dot("space", &labels, &order, &compact, &opens))
}

/// A powerspace of a finite poset, elements labelled by their least subsets.
pub fn powerspace_dot(x: &FinitePoset, t: PowerTheory) -> String {
    let p = powerspace(x, t);
    let labels: Vec<String> = p
        .sets
        .iter()
        .map(|&m| {
            let items: Vec<String> = (0..x.size()).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let compact = vec![true; labels.len()];
    to_dot(&format!("{t} powerspace"), &labels, &p.order, &compact, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::Poset;

    fn counts(s: &str) -> (usize, usize) {
        (s.lines().filter(|l| l.contains("[label=")).count(), s.lines().filter(|l| l.contains("->")).count())
    }

    #[test]
    fn examples() {
        let b = Bound::default();
        let c2 = space_dot(&Space::alexandrov(Poset::Chain(2)), None, b).unwrap();
        assert_eq!(counts(&c2), (2, 1));
        let vee = powerspace_dot(&FinitePoset::antichain(2), PowerTheory::Lower);
        assert_eq!(counts(&vee), (3, 2));
        let w = Space::alexandrov(Poset::Omega);
        assert!(matches!(space_dot(&w, None, b), Err(Error::Unsupported(_))));
        assert_eq!(counts(&space_dot(&w, Some(5), b).unwrap()), (5, 4));
    }
}
