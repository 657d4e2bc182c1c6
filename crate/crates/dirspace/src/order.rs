//! Finite and presented posets, monotone maps and ideals.

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeSet;

use crate::elem::{dyadic_leq, Elem, Seq};
use crate::report::{Bound, Error, Report, Result, Verdict};

/// Anything with a decidable order and a bounded enumeration.
pub trait Carrier: Send + Sync {
    fn leq(&self, a: &Elem, b: &Elem) -> bool;
    fn contains(&self, a: &Elem) -> bool;
    /// First `n` elements of an injective enumeration.
    fn prefix(&self, n: usize) -> Vec<Elem>;
    /// `Some(k)` when the carrier is finite with `k` elements.
    fn size(&self) -> Option<usize>;
    /// Canonical representative of a raw value (quotient carriers override).
    fn canon(&self, a: Elem) -> Elem {
        a
    }
    fn elements(&self) -> Option<Vec<Elem>> {
        self.size().map(|n| self.prefix(n))
    }
}

// ---------------------------------------------------------------------------
// Finite posets

/// Finite relation on `0..n`, stored as a dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePoset {
    n: usize,
    rel: Vec<bool>,
}

impl FinitePoset {
    pub fn discrete(n: usize) -> FinitePoset {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        FinitePoset { n, rel }
    }

    /// Reflexive relation containing `pairs`; transitivity is not added.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> FinitePoset {
        let mut p = FinitePoset::discrete(n);
        for &(a, b) in pairs {
            p.rel[a * n + b] = true;
        }
        p
    }

    /// Reflexive-transitive closure of `pairs`.
    pub fn closed(n: usize, pairs: &[(usize, usize)]) -> FinitePoset {
        let mut p = FinitePoset::from_pairs(n, pairs);
        p.close();
        p
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> FinitePoset {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                rel[i * n + j] = f(i, j);
            }
        }
        FinitePoset { n, rel }
    }

    pub fn chain(n: usize) -> FinitePoset {
        FinitePoset::from_fn(n, |i, j| i <= j)
    }

    pub fn antichain(n: usize) -> FinitePoset {
        FinitePoset::discrete(n)
    }

    /// Order restricted to `elems`, read from any carrier.
    pub fn of_carrier(c: &dyn Carrier, elems: &[Elem]) -> FinitePoset {
        FinitePoset::from_fn(elems.len(), |i, j| c.leq(&elems[i], &elems[j]))
    }

    fn close(&mut self) {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                if self.rel[i * n + k] {
                    for j in 0..n {
                        if self.rel[k * n + j] {
                            self.rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.n + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Non-reflexive true pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.leq(i, j) {
                    v.push((i, j));
                }
            }
        }
        v
    }

    pub fn true_pairs(&self) -> usize {
        self.rel.iter().filter(|b| **b).count()
    }

    pub fn up(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.leq(i, j)).collect()
    }

    pub fn down(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.leq(j, i)).collect()
    }

    /// Covering pairs (Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter(|&(i, j)| !(0..self.n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j)))
            .collect()
    }

    pub fn is_upper(&self, set: &[bool]) -> bool {
        (0..self.n).all(|i| !set[i] || (0..self.n).all(|j| !self.leq(i, j) || set[j]))
    }

    pub fn is_lower(&self, set: &[bool]) -> bool {
        (0..self.n).all(|i| !set[i] || (0..self.n).all(|j| !self.leq(j, i) || set[j]))
    }

    pub fn is_directed(&self, set: &[bool]) -> bool {
        let members: Vec<usize> = (0..self.n).filter(|&i| set[i]).collect();
        !members.is_empty()
            && members
                .iter()
                .all(|&a| members.iter().all(|&b| members.iter().any(|&c| self.leq(a, c) && self.leq(b, c))))
    }

    /// First violation of reflexivity, antisymmetry or transitivity.
    pub fn order_violation(&self) -> Option<Value> {
        let n = self.n;
        for i in 0..n {
            if !self.leq(i, i) {
                return Some(json!({ "law": "reflexivity", "a": i }));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Some(json!({ "law": "antisymmetry", "a": i, "b": j }));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.leq(i, j) && self.leq(j, k) && !self.leq(i, k) {
                        return Some(json!({ "law": "transitivity", "a": i, "b": j, "c": k }));
                    }
                }
            }
        }
        None
    }

    pub fn is_partial_order(&self) -> bool {
        self.order_violation().is_none()
    }

    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let m = other.n;
        FinitePoset::from_fn(self.n * m, |a, b| self.leq(a / m, b / m) && other.leq(a % m, b % m))
    }

    pub fn permuted(&self, perm: &[usize]) -> FinitePoset {
        FinitePoset::from_fn(self.n, |i, j| self.leq(perm[i], perm[j]))
    }

    /// Order isomorphism, decided with VF2 on the full relation graph.
    pub fn is_isomorphic(&self, other: &FinitePoset) -> bool {
        self.n == other.n
            && self.true_pairs() == other.true_pairs()
            && is_isomorphic_matching(&self.graph(), &other.graph(), |_, _| true, |_, _| true)
    }

    pub fn graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = (0..self.n).map(|_| g.add_node(())).collect();
        for (i, j) in self.pairs() {
            g.add_edge(nodes[i], nodes[j], ());
        }
        g
    }

    /// Smallest relation matrix over all relabelings; equal keys iff isomorphic.
    pub fn canonical_key(&self) -> Vec<bool> {
        let mut best: Option<Vec<bool>> = None;
        for perm in permutations(self.n) {
            let k = self.permuted(&perm).rel;
            if best.as_ref().is_none_or(|b| k < *b) {
                best = Some(k);
            }
        }
        best.unwrap_or_default()
    }

    /// All partial orders on `n` points, one per isomorphism class.
    pub fn all_up_to_iso(n: usize) -> Vec<FinitePoset> {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        // each unordered pair is unrelated, i<j, or j<i
        let total = 3usize.pow(slots.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut pairs = Vec::new();
            for &(i, j) in &slots {
                match c % 3 {
                    1 => pairs.push((i, j)),
                    2 => pairs.push((j, i)),
                    _ => {}
                }
                c /= 3;
            }
            let p = FinitePoset::from_pairs(n, &pairs);
            if !p.is_partial_order() {
                continue;
            }
            if seen.insert(p.canonical_key()) {
                out.push(p);
            }
        }
        out
    }

    /// All posets with between 1 and `max` points, up to isomorphism.
    pub fn all_up_to(max: usize) -> Vec<FinitePoset> {
        (1..=max).flat_map(FinitePoset::all_up_to_iso).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "kind": "explicit", "size": self.n, "leq": self.pairs() })
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All monotone maps between finite posets, as value tables.
pub fn monotone_maps(dom: &FinitePoset, cod: &FinitePoset) -> Vec<Vec<usize>> {
    fn go(i: usize, dom: &FinitePoset, cod: &FinitePoset, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == dom.size() {
            out.push(cur.clone());
            return;
        }
        for v in 0..cod.size() {
            if (0..i).all(|j| (!dom.leq(j, i) || cod.leq(cur[j], v)) && (!dom.leq(i, j) || cod.leq(v, cur[j]))) {
                cur.push(v);
                go(i + 1, dom, cod, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, dom, cod, &mut Vec::new(), &mut out);
    out
}

/// All maps `0..n → 0..m`, as value tables.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..m).map(move |v| {
                    let mut u = t.clone();
                    u.push(v);
                    u
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------
// Presented posets

/// Constructor expression for a finite or countable poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Poset {
    Explicit(FinitePoset),
    Chain(usize),
    Antichain(usize),
    /// The ω-chain 0 < 1 < 2 < ….
    Omega,
    /// ℕ with the discrete order.
    FlatNat,
    /// Dyadic rationals in [0,1] with the usual order.
    Dyadic,
    Lift(Box<Poset>),
    AdjoinTop(Box<Poset>),
    Sum(Box<Poset>, Box<Poset>),
    Product(Box<Poset>, Box<Poset>),
}

impl Poset {
    pub fn omega_plus_one() -> Poset {
        Poset::AdjoinTop(Box::new(Poset::Omega))
    }

    pub fn flat_nat_top() -> Poset {
        Poset::AdjoinTop(Box::new(Poset::FlatNat))
    }

    pub fn product(a: Poset, b: Poset) -> Poset {
        Poset::Product(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Poset, b: Poset) -> Poset {
        Poset::Sum(Box::new(a), Box::new(b))
    }

    pub fn adjoin_top(a: Poset) -> Poset {
        Poset::AdjoinTop(Box::new(a))
    }

    pub fn lift(a: Poset) -> Poset {
        Poset::Lift(Box::new(a))
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    fn top_level(&self) -> u8 {
        match self {
            Poset::AdjoinTop(p) => p.top_level() + 1,
            Poset::Lift(p) => p.top_level(),
            _ => 0,
        }
    }

    fn bot_level(&self) -> u8 {
        match self {
            Poset::Lift(p) => p.bot_level() + 1,
            Poset::AdjoinTop(p) => p.bot_level(),
            _ => 0,
        }
    }

    /// The top element added by this `adjoin_top` node.
    pub fn new_top(&self) -> Option<Elem> {
        match self {
            Poset::AdjoinTop(p) => Some(Elem::Top(p.top_level())),
            _ => None,
        }
    }

    /// Whether some directed subset has no upper bound in the poset.
    pub fn has_unbounded_directed(&self) -> bool {
        match self {
            Poset::Omega => true,
            Poset::Dyadic | Poset::FlatNat | Poset::Explicit(_) | Poset::Chain(_) | Poset::Antichain(_) => false,
            Poset::AdjoinTop(_) => false,
            Poset::Lift(p) => p.has_unbounded_directed(),
            Poset::Sum(a, b) | Poset::Product(a, b) => a.has_unbounded_directed() || b.has_unbounded_directed(),
        }
    }

    /// Structural compactness in the Scott sense: `a` is not the supremum
    /// of a directed set that avoids it.
    pub fn scott_compact(&self, a: &Elem) -> bool {
        match (self, a) {
            (Poset::Dyadic, Elem::Dy(n, _)) => *n == 0,
            (Poset::AdjoinTop(p), Elem::Top(k)) if *k == p.top_level() => !p.has_unbounded_directed(),
            (Poset::AdjoinTop(p), x) => p.scott_compact(x),
            (Poset::Lift(p), Elem::Bot(k)) if *k == p.bot_level() => true,
            (Poset::Lift(p), x) => p.scott_compact(x),
            (Poset::Sum(p, _), Elem::L(x)) => p.scott_compact(x),
            (Poset::Sum(_, q), Elem::R(x)) => q.scott_compact(x),
            (Poset::Product(p, q), Elem::P(x, y)) => p.scott_compact(x) && q.scott_compact(y),
            _ => true,
        }
    }

    /// Canonical non-constant chains of the constructor.
    pub fn canonical_chains(&self, consts: &dyn Fn(&Poset) -> Vec<Elem>) -> Vec<Seq> {
        match self {
            Poset::Omega => vec![Seq::nat()],
            Poset::Dyadic => consts(self)
                .into_iter()
                .filter_map(|e| match e {
                    Elem::Dy(n, e) if n > 0 => Some(Seq::Below { num: n, exp: e }),
                    _ => None,
                })
                .collect(),
            Poset::Lift(p) | Poset::AdjoinTop(p) => p.canonical_chains(consts),
            Poset::Sum(a, b) => {
                let mut v: Vec<Seq> = a.canonical_chains(consts).into_iter().map(|s| Seq::Inl(Box::new(s))).collect();
                v.extend(b.canonical_chains(consts).into_iter().map(|s| Seq::Inr(Box::new(s))));
                v
            }
            Poset::Product(a, b) => {
                let ca = a.canonical_chains(consts);
                let cb = b.canonical_chains(consts);
                let mut v = Vec::new();
                for s in &ca {
                    for y in consts(b) {
                        v.push(Seq::pair(s.clone(), Seq::Const(y)));
                    }
                    for t in &cb {
                        v.push(Seq::pair(s.clone(), t.clone()));
                    }
                }
                for t in &cb {
                    for x in consts(a) {
                        v.push(Seq::pair(Seq::Const(x), t.clone()));
                    }
                }
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Poset::Explicit(p) => p.to_json(),
            Poset::Chain(n) => json!({ "kind": "chain", "n": n }),
            Poset::Antichain(n) => json!({ "kind": "antichain", "n": n }),
            Poset::Omega => json!({ "kind": "omega" }),
            Poset::FlatNat => json!({ "kind": "flat_nat" }),
            Poset::Dyadic => json!({ "kind": "dyadic" }),
            Poset::Lift(p) => json!({ "kind": "lift", "of": p.to_json() }),
            Poset::AdjoinTop(p) => json!({ "kind": "adjoin_top", "of": p.to_json() }),
            Poset::Sum(a, b) => json!({ "kind": "sum", "left": a.to_json(), "right": b.to_json() }),
            Poset::Product(a, b) => json!({ "kind": "product", "left": a.to_json(), "right": b.to_json() }),
        }
    }

    /// Parse the constructor grammar; errors name the offending node.
    pub fn from_json(v: &Value) -> Result<Poset> {
        parse_poset(v, "poset")
    }

    fn sub_prefix(&self, n: usize) -> Vec<Elem> {
        self.prefix(n)
    }
}

fn parse_poset(v: &Value, path: &str) -> Result<Poset> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected an object with a \"kind\" field"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(path, "missing string field \"kind\""))?;
    let allowed: &[&str] = match kind {
        "chain" | "antichain" => &["kind", "n"],
        "explicit" => &["kind", "size", "leq"],
        "lift" | "adjoin_top" => &["kind", "of"],
        "sum" | "product" => &["kind", "left", "right", "factors"],
        _ => &["kind"],
    };
    check_fields(obj, allowed, path)?;
    let count = |field: &str| -> Result<usize> {
        obj.get(field)
            .and_then(Value::as_u64)
            .map(|n| n as usize)
            .ok_or_else(|| Error::parse(format!("{path}.{field}"), "expected a natural number"))
    };
    let child = |field: &str| -> Result<Poset> {
        let c = obj.get(field).ok_or_else(|| Error::parse(path, format!("missing field \"{field}\"")))?;
        parse_poset(c, &format!("{path}.{field}"))
    };
    Ok(match kind {
        "chain" => Poset::Chain(count("n")?),
        "antichain" => Poset::Antichain(count("n")?),
        "omega" => Poset::Omega,
        "flat_nat" => Poset::FlatNat,
        "dyadic" => Poset::Dyadic,
        "omega_plus_one" => Poset::omega_plus_one(),
        "flat_nat_top" => Poset::flat_nat_top(),
        "explicit" => {
            let n = count("size")?;
            let pairs: Vec<(usize, usize)> = match obj.get("leq") {
                None => Vec::new(),
                Some(p) => serde_json::from_value(p.clone())
                    .map_err(|e| Error::parse(format!("{path}.leq"), e.to_string()))?,
            };
            if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
                return Err(Error::parse(format!("{path}.leq"), format!("pair ({a},{b}) outside 0..{n}")));
            }
            Poset::Explicit(FinitePoset::from_pairs(n, &pairs))
        }
        "lift" => Poset::lift(child("of")?),
        "adjoin_top" => Poset::adjoin_top(child("of")?),
        "sum" | "product" => {
            let parts: Vec<Poset> = if let Some(fs) = obj.get("factors") {
                let arr = fs
                    .as_array()
                    .ok_or_else(|| Error::parse(format!("{path}.factors"), "expected an array"))?;
                arr.iter()
                    .enumerate()
                    .map(|(i, f)| parse_poset(f, &format!("{path}.factors[{i}]")))
                    .collect::<Result<_>>()?
            } else {
                vec![child("left")?, child("right")?]
            };
            let mut it = parts.into_iter().rev();
            let mut acc = it
                .next()
                .ok_or_else(|| Error::parse(path, "needs at least one factor"))?;
            for p in it {
                acc = if kind == "sum" { Poset::sum(p, acc) } else { Poset::product(p, acc) };
            }
            acc
        }
        other => return Err(Error::parse(format!("{path}.kind"), format!("unknown constructor {other:?}"))),
    })
}

pub(crate) fn check_fields(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::parse(format!("{path}.{k}"), "unknown field"));
        }
    }
    Ok(())
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Poset::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn dyadic_enum(n: usize) -> Vec<Elem> {
    let mut out = vec![Elem::dyadic(0, 0), Elem::dyadic(1, 0)];
    let mut level = 1u32;
    while out.len() < n && level < 60 {
        let mut k = 1u64;
        while k < (1u64 << level) && out.len() < n {
            out.push(Elem::Dy(k, level));
            k += 2;
        }
        level += 1;
    }
    out.truncate(n);
    out
}

impl Carrier for Poset {
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        match self {
            Poset::Explicit(p) => match (a, b) {
                (Elem::N(i), Elem::N(j)) if (*i as usize) < p.size() && (*j as usize) < p.size() => {
                    p.leq(*i as usize, *j as usize)
                }
                _ => false,
            },
            Poset::Chain(n) => matches!((a, b), (Elem::N(i), Elem::N(j)) if i <= j && (*j as usize) < *n),
            Poset::Antichain(n) => matches!((a, b), (Elem::N(i), Elem::N(j)) if i == j && (*j as usize) < *n),
            Poset::Omega => matches!((a, b), (Elem::N(i), Elem::N(j)) if i <= j),
            Poset::FlatNat => matches!((a, b), (Elem::N(i), Elem::N(j)) if i == j),
            Poset::Dyadic => match (a, b) {
                (Elem::Dy(x, e), Elem::Dy(y, f)) => dyadic_leq((*x, *e), (*y, *f)),
                _ => false,
            },
            Poset::AdjoinTop(p) => {
                let t = Elem::Top(p.top_level());
                if *b == t {
                    *a == t || p.contains(a)
                } else if *a == t {
                    false
                } else {
                    p.leq(a, b)
                }
            }
            Poset::Lift(p) => {
                let bot = Elem::Bot(p.bot_level());
                if *a == bot {
                    *b == bot || p.contains(b)
                } else if *b == bot {
                    false
                } else {
                    p.leq(a, b)
                }
            }
            Poset::Sum(p, q) => match (a, b) {
                (Elem::L(x), Elem::L(y)) => p.leq(x, y),
                (Elem::R(x), Elem::R(y)) => q.leq(x, y),
                _ => false,
            },
            Poset::Product(p, q) => match (a, b) {
                (Elem::P(x1, y1), Elem::P(x2, y2)) => p.leq(x1, x2) && q.leq(y1, y2),
                _ => false,
            },
        }
    }

    fn contains(&self, a: &Elem) -> bool {
        match self {
            Poset::Explicit(p) => matches!(a, Elem::N(i) if (*i as usize) < p.size()),
            Poset::Chain(n) | Poset::Antichain(n) => matches!(a, Elem::N(i) if (*i as usize) < *n),
            Poset::Omega | Poset::FlatNat => matches!(a, Elem::N(_)),
            Poset::Dyadic => match a {
                Elem::Dy(n, e) => *e < 64 && *n <= (1u64 << *e) && (*e == 0 || n % 2 == 1),
                _ => false,
            },
            Poset::AdjoinTop(p) => *a == Elem::Top(p.top_level()) || p.contains(a),
            Poset::Lift(p) => *a == Elem::Bot(p.bot_level()) || p.contains(a),
            Poset::Sum(p, q) => match a {
                Elem::L(x) => p.contains(x),
                Elem::R(x) => q.contains(x),
                _ => false,
            },
            Poset::Product(p, q) => match a {
                Elem::P(x, y) => p.contains(x) && q.contains(y),
                _ => false,
            },
        }
    }

    fn prefix(&self, n: usize) -> Vec<Elem> {
        let cap = self.size().map_or(n, |s| s.min(n));
        match self {
            Poset::Explicit(_) | Poset::Chain(_) | Poset::Antichain(_) | Poset::Omega | Poset::FlatNat => {
                (0..cap as u64).map(Elem::N).collect()
            }
            Poset::Dyadic => dyadic_enum(n),
            Poset::AdjoinTop(p) => {
                if n == 0 {
                    return Vec::new();
                }
                let mut v = vec![Elem::Top(p.top_level())];
                v.extend(p.sub_prefix(n - 1));
                v
            }
            Poset::Lift(p) => {
                if n == 0 {
                    return Vec::new();
                }
                let mut v = vec![Elem::Bot(p.bot_level())];
                v.extend(p.sub_prefix(n - 1));
                v
            }
            Poset::Sum(p, q) => {
                let a = p.prefix(n);
                let b = q.prefix(n);
                let mut v = Vec::with_capacity(cap);
                let mut i = 0;
                while v.len() < cap && (i < a.len() || i < b.len()) {
                    if i < a.len() {
                        v.push(Elem::left(a[i].clone()));
                    }
                    if i < b.len() && v.len() < cap {
                        v.push(Elem::right(b[i].clone()));
                    }
                    i += 1;
                }
                v
            }
            Poset::Product(p, q) => {
                let a = p.prefix(n);
                let b = q.prefix(n);
                let mut v = Vec::with_capacity(cap);
                if a.is_empty() || b.is_empty() {
                    return v;
                }
                'outer: for s in 0..(a.len() + b.len()) {
                    for i in 0..=s {
                        let j = s - i;
                        if i < a.len() && j < b.len() {
                            v.push(Elem::pair(a[i].clone(), b[j].clone()));
                            if v.len() >= cap {
                                break 'outer;
                            }
                        }
                    }
                }
                v
            }
        }
    }

    fn size(&self) -> Option<usize> {
        match self {
            Poset::Explicit(p) => Some(p.size()),
            Poset::Chain(n) | Poset::Antichain(n) => Some(*n),
            Poset::Omega | Poset::FlatNat | Poset::Dyadic => None,
            Poset::Lift(p) | Poset::AdjoinTop(p) => p.size().map(|s| s + 1),
            Poset::Sum(p, q) => Some(p.size()? + q.size()?),
            Poset::Product(p, q) => {
                let (a, b) = (p.size(), q.size());
                if a == Some(0) || b == Some(0) {
                    Some(0)
                } else {
                    Some(a? * b?)
                }
            }
        }
    }
}

/// Parse a constructor expression.
pub fn build_poset(description: &Value) -> Result<Poset> {
    Poset::from_json(description)
}

/// Order laws on the first `depth` elements; exact when the prefix is the
/// whole carrier.
pub fn check_partial_order(p: &dyn Carrier, depth: usize) -> Result<Report> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let elems = p.prefix(depth);
    let exact = p.size().is_some_and(|s| s <= depth);
    let fp = FinitePoset::of_carrier(p, &elems);
    let mut r = Report::new("partial order");
    let mut injective = BTreeSet::new();
    let dup = elems.iter().find(|e| !injective.insert((*e).clone()));
    r.expect("enumeration injective", dup.is_none(), exact, elems.len(), || json!({ "repeated": dup }));
    let v = match fp.order_violation() {
        None => Verdict::held(exact, elems.len()),
        Some(mut cx) => {
            for key in ["a", "b", "c"] {
                if let Some(i) = cx.get(key).and_then(Value::as_u64) {
                    cx[key] = elems[i as usize].to_json();
                }
            }
            Verdict::fail(cx)
        }
    };
    r.push("partial order laws", v);
    Ok(r)
}

// ---------------------------------------------------------------------------
// Maps

/// Rule for a map between presented carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapRule {
    Id,
    Const(Elem),
    Table(Vec<(Elem, Elem)>),
    /// `n ↦ n+1` on naturals, other elements fixed.
    Succ,
    /// `n ↦ 2n` on naturals, other elements fixed.
    Double,
    /// Larger component of a pair in a chain carrier.
    Join,
    /// Smaller component of a pair in a chain carrier.
    Meet,
    Fst,
    Snd,
    Swap,
    /// Apply in sequence, first rule first.
    Then(Vec<MapRule>),
}

/// Position in a chain carrier built from naturals and adjoined tops.
fn chain_rank(e: &Elem) -> (u8, u64) {
    match e {
        Elem::Bot(k) => (0, u64::MAX - *k as u64),
        Elem::N(n) => (1, *n),
        Elem::Dy(n, x) => (1, ((*n as u128) << (60 - x.min(&60))) as u64),
        Elem::Top(k) => (2, *k as u64),
        _ => (1, 0),
    }
}

impl MapRule {
    pub fn apply_raw(&self, x: &Elem) -> Elem {
        match self {
            MapRule::Id => x.clone(),
            MapRule::Const(c) => c.clone(),
            MapRule::Table(t) => t
                .iter()
                .find(|(a, _)| a == x)
                .map(|(_, b)| b.clone())
                .unwrap_or_else(|| x.clone()),
            MapRule::Succ => match x {
                Elem::N(n) => Elem::N(n + 1),
                other => other.clone(),
            },
            MapRule::Double => match x {
                Elem::N(n) => Elem::N(2 * n),
                other => other.clone(),
            },
            MapRule::Join | MapRule::Meet => match x {
                Elem::P(a, b) => {
                    let a_le_b = match (a.as_ref(), b.as_ref()) {
                        (Elem::Bot(i), Elem::Bot(j)) => i >= j,
                        _ => chain_rank(a) <= chain_rank(b),
                    };
                    let pick_b = a_le_b == matches!(self, MapRule::Join);
                    if pick_b { b.as_ref().clone() } else { a.as_ref().clone() }
                }
                other => other.clone(),
            },
            MapRule::Fst => x.fst().cloned().unwrap_or_else(|| x.clone()),
            MapRule::Snd => x.snd().cloned().unwrap_or_else(|| x.clone()),
            MapRule::Swap => match x {
                Elem::P(a, b) => Elem::P(b.clone(), a.clone()),
                other => other.clone(),
            },
            MapRule::Then(rs) => rs.iter().fold(x.clone(), |acc, r| r.apply_raw(&acc)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneMap {
    pub dom: Poset,
    pub cod: Poset,
    pub rule: MapRule,
}

impl MonotoneMap {
    pub fn new(dom: Poset, cod: Poset, rule: MapRule) -> MonotoneMap {
        MonotoneMap { dom, cod, rule }
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        if !self.dom.contains(x) {
            return Err(Error::Domain(format!("{x} is not in the domain")));
        }
        let y = self.rule.apply_raw(x);
        if !self.cod.contains(&y) {
            return Err(Error::Domain(format!("image {y} of {x} is not in the codomain")));
        }
        Ok(y)
    }
}

/// Monotonicity, exhaustive on finite domains, else on the first `depth` elements.
pub fn is_monotone(f: &MonotoneMap, depth: usize) -> Result<Report> {
    let exact = f.dom.size().is_some_and(|s| s <= depth) || f.dom.is_finite();
    let n = f.dom.size().unwrap_or(depth);
    let elems = f.dom.prefix(n);
    let images = elems.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
    let mut r = Report::new("monotone map");
    let mut cx = None;
    'search: for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            if f.dom.leq(a, b) && !f.cod.leq(&images[i], &images[j]) {
                cx = Some(json!({ "a": a, "b": b, "f(a)": images[i], "f(b)": images[j] }));
                break 'search;
            }
        }
    }
    let v = match cx {
        Some(c) => Verdict::fail(c),
        None => Verdict::held(exact, elems.len()),
    };
    r.push("x ≤ y ⇒ f(x) ≤ f(y)", v);
    Ok(r)
}

// ---------------------------------------------------------------------------
// Ideals

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ideal {
    Principal(Elem),
    Generated(Seq),
}

impl Ideal {
    pub fn to_elem(&self) -> Elem {
        match self {
            Ideal::Principal(a) => Elem::down(a.clone()),
            Ideal::Generated(s) if s.is_const() => Elem::down(s.at(0)),
            Ideal::Generated(s) => Elem::lim(s.clone()),
        }
    }

    pub fn from_elem(e: &Elem) -> Option<Ideal> {
        match e {
            Elem::Down(a) => Some(Ideal::Principal(a.as_ref().clone())),
            Elem::Lim(s) => Some(Ideal::Generated(s.as_ref().clone())),
            _ => None,
        }
    }
}

/// Index of the first chain term above `a`, searched up to `depth`.
pub fn first_above(p: &dyn Carrier, s: &Seq, a: &Elem, depth: usize) -> Option<usize> {
    (0..depth.max(1)).find(|&n| p.leq(a, &p.canon(s.at(n))))
}

/// Membership in an ideal; for generated ideals the search runs to `depth`.
pub fn ideal_member(p: &dyn Carrier, i: &Ideal, a: &Elem, depth: usize) -> Result<bool> {
    if !p.contains(a) {
        return Err(Error::Domain(format!("{a} is not in the ambient carrier")));
    }
    Ok(match i {
        Ideal::Principal(x) => p.leq(a, x),
        Ideal::Generated(_) => ideal_elem_member(p, &i.to_elem(), a, depth),
    })
}

/// Index at which a monotone chain stands in for its whole ideal: every
/// element of the presented carriers met in practice sits below the chain's
/// far terms exactly when it sits below some term.
pub const FAR: usize = 1 << 20;

/// Membership for ideal elements (`Down`/`Lim`) of a carrier.
pub fn ideal_elem_member(p: &dyn Carrier, ideal: &Elem, a: &Elem, _depth: usize) -> bool {
    match ideal {
        Elem::Down(x) => p.leq(a, x),
        Elem::Lim(s) => p.leq(a, &p.canon(s.at(2 * FAR))),
        _ => false,
    }
}

/// Inclusion between ideal elements, by the far-term rule for chains.
pub fn ideal_elem_leq(p: &dyn Carrier, i: &Elem, j: &Elem, depth: usize) -> bool {
    match i {
        Elem::Down(x) => ideal_elem_member(p, j, x, depth),
        Elem::Lim(s) => i == j || ideal_elem_member(p, j, &p.canon(s.at(FAR)), depth),
        _ => false,
    }
}

/// Lower, directed, chain-closed checks for an ideal over a prefix.
pub fn check_ideal(p: &dyn Carrier, i: &Ideal, bound: Bound) -> Report {
    let mut r = Report::new("ideal");
    let pts = p.prefix(bound.sample);
    let members: Vec<Elem> = pts
        .iter()
        .filter(|a| ideal_member(p, i, a, bound.depth).unwrap_or(false))
        .cloned()
        .collect();
    let exact = p.size().is_some_and(|s| s <= bound.sample) && matches!(i, Ideal::Principal(_));
    let lower_cx = members
        .iter()
        .flat_map(|m| pts.iter().filter(move |b| p.leq(b, m)).map(move |b| (m, b)))
        .find(|(_, b)| !members.contains(b));
    r.expect("lower set", lower_cx.is_none(), exact, bound.sample, || {
        let (m, b) = lower_cx.unwrap();
        json!({ "member": m, "below_but_missing": b })
    });
    let chain: Vec<Elem> = match i {
        Ideal::Principal(a) => vec![a.clone()],
        Ideal::Generated(s) => s.prefix(bound.depth).into_iter().map(|e| p.canon(e)).collect(),
    };
    let mut dir_cx = None;
    'd: for a in &members {
        for b in &members {
            if !chain.iter().any(|c| p.leq(a, c) && p.leq(b, c)) {
                dir_cx = Some(json!({ "a": a, "b": b }));
                break 'd;
            }
        }
    }
    r.expect("directed (bound in chain)", dir_cx.is_none(), exact, bound.depth, || dir_cx.unwrap());
    let mono = chain.windows(2).position(|w| !p.leq(&w[0], &w[1]));
    r.expect("chain monotone", mono.is_none(), exact, bound.depth, || json!({ "index": mono }));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=4).map(|n| FinitePoset::all_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
    }

    #[test]
    fn explicit_chain_has_three_true_pairs() {
        let p = build_poset(&json!({"kind":"explicit","size":2,"leq":[[0,1]]})).unwrap();
        let Poset::Explicit(fp) = &p else { panic!() };
        assert_eq!(fp.true_pairs(), 3);
        assert!(check_partial_order(&p, 2).unwrap().passed());
    }

    #[test]
    fn omega_order_and_enumeration() {
        let p = build_poset(&json!({"kind":"omega"})).unwrap();
        assert!(!p.is_finite());
        assert_eq!(p.prefix(3), vec![Elem::N(0), Elem::N(1), Elem::N(2)]);
        assert!(p.leq(&Elem::N(3), &Elem::N(7)));
        let r = check_partial_order(&p, 50).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[1].verdict, Verdict::VerifiedUpToBound { bound: 50 });
    }

    #[test]
    fn flat_nat_with_top() {
        let p = build_poset(&json!({"kind":"adjoin_top","of":{"kind":"flat_nat"}})).unwrap();
        assert!(p.leq(&Elem::N(2), &Elem::top()));
        assert!(!p.leq(&Elem::N(2), &Elem::N(3)));
        assert!(!p.leq(&Elem::top(), &Elem::N(3)));
    }

    #[test]
    fn antisymmetry_counterexample() {
        let p = Poset::Explicit(FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]));
        let r = check_partial_order(&p, 2).unwrap();
        let Verdict::Fail { counterexample } = &r.checks[1].verdict else { panic!("{r:?}") };
        assert_eq!(counterexample["law"], "antisymmetry");
        assert_eq!(counterexample["a"], 0);
        assert_eq!(counterexample["b"], 1);
    }

    #[test]
    fn malformed_expression_names_node() {
        let e = build_poset(&json!({"kind":"product","left":{"kind":"omega"},"right":{"kind":"bogus"}})).unwrap_err();
        assert_eq!(e, Error::parse("poset.right.kind", "unknown constructor \"bogus\""));
        let e = build_poset(&json!({"kind":"chain","n":2,"extra":1})).unwrap_err();
        assert!(matches!(e, Error::Parse { node, .. } if node == "poset.extra"));
    }

    #[test]
    fn nested_tops_are_distinct() {
        let p = Poset::adjoin_top(Poset::omega_plus_one());
        let v = p.prefix(4);
        assert_eq!(v[0], Elem::Top(1));
        assert_eq!(v[1], Elem::Top(0));
        assert!(p.leq(&Elem::Top(0), &Elem::Top(1)));
        assert!(!p.leq(&Elem::Top(1), &Elem::Top(0)));
        assert!(p.scott_compact(&Elem::Top(1)));
        assert!(!p.scott_compact(&Elem::Top(0)));
    }

    #[test]
    fn ideal_membership() {
        let w = Poset::Omega;
        assert!(ideal_member(&w, &Ideal::Principal(Elem::N(3)), &Elem::N(2), 64).unwrap());
        assert!(!ideal_member(&w, &Ideal::Principal(Elem::N(3)), &Elem::N(5), 64).unwrap());
        assert!(ideal_member(&w, &Ideal::Generated(Seq::nat()), &Elem::N(10), 64).unwrap());
        assert!(ideal_member(&w, &Ideal::Principal(Elem::N(3)), &Elem::top(), 64).is_err());
        assert!(check_ideal(&w, &Ideal::Generated(Seq::nat()), Bound::default()).passed());
    }

    #[test]
    fn monotone_examples() {
        let c2 = Poset::Chain(2);
        let id = MonotoneMap::new(c2.clone(), c2.clone(), MapRule::Id);
        assert_eq!(is_monotone(&id, 2).unwrap().checks[0].verdict, Verdict::Pass);
        let swap = MapRule::Table(vec![(Elem::N(0), Elem::N(1)), (Elem::N(1), Elem::N(0))]);
        let r = is_monotone(&MonotoneMap::new(c2.clone(), c2, swap), 2).unwrap();
        let Verdict::Fail { counterexample } = &r.checks[0].verdict else { panic!() };
        assert_eq!(counterexample["a"], 0);
        assert_eq!(counterexample["b"], 1);
        let succ = MonotoneMap::new(Poset::Omega, Poset::Omega, MapRule::Succ);
        assert_eq!(is_monotone(&succ, 100).unwrap().checks[0].verdict, Verdict::VerifiedUpToBound { bound: 100 });
    }

    #[test]
    fn monotone_map_counts() {
        let c2 = FinitePoset::chain(2);
        assert_eq!(monotone_maps(&c2, &c2).len(), 3);
        assert_eq!(monotone_maps(&FinitePoset::antichain(2), &c2).len(), 4);
    }

    #[test]
    fn product_and_sum_enumerations_are_injective() {
        for p in [
            Poset::product(Poset::Omega, Poset::omega_plus_one()),
            Poset::sum(Poset::Chain(2), Poset::Omega),
            Poset::lift(Poset::Dyadic),
        ] {
            assert!(check_partial_order(&p, 40).unwrap().passed(), "{p:?}");
        }
    }
}
