//! T₀ spaces over presented posets: convergence, directed-open sets, the
//! coreflection, d-approximation and the continuous/algebraic classifiers.
//!
//! Infinite carriers are quantified through a [`View`]: a sampled point set,
//! a larger witness pool, the base opens generated from the samples and the
//! catalog of directed families. Finite carriers get an exact view.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;

use crate::elem::{Elem, Seq};
use crate::nab::Prec;
use crate::order::{check_fields, Carrier, FinitePoset, Poset};
use crate::report::{Bound, Error, Report, Result, Verdict};

/// Finite carriers up to this size get every directed subset in the catalog.
pub const EXACT_FAMILY_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Every upper set is open.
    Alexandrov,
    /// Generated by complements of finitely generated lower sets.
    Upper,
    /// Generated by `↑k` for structurally compact `k`.
    Scott,
    /// Base `↟a = {b : a ≺ b}`.
    Nab(Prec),
    /// Finite carrier with an explicit list of opens.
    Declared(Vec<Vec<Elem>>),
    /// Product of the factor topologies on a product carrier.
    Product(Box<Topology>, Box<Topology>),
    /// Inner topology refined by the listed principal upper sets.
    Directed(Box<Topology>, Vec<Elem>),
}

/// Description of an open (or candidate) set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Open {
    All,
    Up(Elem),
    CoDown(Vec<Elem>),
    Wb(Elem),
    /// Ideals containing the element.
    Has(Elem),
    Prod(Box<Open>, Box<Open>),
    Set(Vec<Elem>),
    Meet(Vec<Open>),
}

/// Declared directed family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Finite(Vec<Elem>),
    Chain(Seq),
}

impl Family {
    pub fn members(&self, c: &dyn Carrier, depth: usize) -> Vec<Elem> {
        match self {
            Family::Finite(v) => v.clone(),
            Family::Chain(s) if s.is_const() => vec![c.canon(s.at(0))],
            Family::Chain(s) => s.prefix(depth).into_iter().map(|e| c.canon(e)).collect(),
        }
    }

    pub fn single(e: Elem) -> Family {
        Family::Finite(vec![e])
    }
}

/// A space as seen by the generic algorithms.
pub trait Topo: Carrier {
    /// Base opens generated from the given points.
    fn base(&self, pts: &[Elem]) -> Vec<Open>;
    fn in_open(&self, u: &Open, x: &Elem) -> bool;
    /// Canonical non-constant directed families.
    fn chains(&self, pts: &[Elem]) -> Vec<Seq>;
    fn describe(&self) -> Value;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    pub carrier: Poset,
    pub topology: Topology,
    /// Extra declared chains added to the catalog.
    pub families: Vec<Seq>,
}

impl Space {
    pub fn new(carrier: Poset, topology: Topology) -> Space {
        Space { carrier, topology, families: Vec::new() }
    }

    pub fn alexandrov(carrier: Poset) -> Space {
        Space::new(carrier, Topology::Alexandrov)
    }

    pub fn scott(carrier: Poset) -> Space {
        Space::new(carrier, Topology::Scott)
    }

    pub fn finite(p: FinitePoset) -> Space {
        Space::alexandrov(Poset::Explicit(p))
    }

    /// ω+1 with its Scott topology.
    pub fn omega_plus_one() -> Space {
        Space::scott(Poset::omega_plus_one())
    }

    /// The flat domain ℕ^⊤ with the upper topology.
    pub fn flat_nat_top_upper() -> Space {
        Space::new(Poset::flat_nat_top(), Topology::Upper)
    }

    pub fn to_json(&self) -> Value {
        match (&self.carrier, &self.topology) {
            (Poset::Product(a, b), Topology::Product(s, t)) if self.families.is_empty() => {
                let l = Space::new(a.as_ref().clone(), s.as_ref().clone());
                let r = Space::new(b.as_ref().clone(), t.as_ref().clone());
                json!({ "product": [l.to_json(), r.to_json()] })
            }
            _ => {
                let mut v = json!({ "poset": self.carrier.to_json(), "topology": topology_json(&self.topology) });
                if !self.families.is_empty() {
                    v["families"] = serde_json::to_value(&self.families).unwrap_or(Value::Null);
                }
                v
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Space> {
        parse_space(v, "space")
    }
}

fn topology_json(t: &Topology) -> Value {
    match t {
        Topology::Alexandrov => json!("alexandrov"),
        Topology::Upper => json!("upper"),
        Topology::Scott => json!("scott"),
        Topology::Nab(p) => json!({ "nab": p }),
        Topology::Declared(o) => json!({ "declared": o }),
        Topology::Product(a, b) => json!({ "product": [topology_json(a), topology_json(b)] }),
        Topology::Directed(a, ups) => json!({ "directed": topology_json(a), "ups": ups }),
    }
}

fn parse_topology(v: &Value, path: &str) -> Result<Topology> {
    match v {
        Value::String(s) => match s.as_str() {
            "alexandrov" => Ok(Topology::Alexandrov),
            "upper" => Ok(Topology::Upper),
            "scott" => Ok(Topology::Scott),
            other => Err(Error::parse(path, format!("unknown topology {other:?}"))),
        },
        Value::Object(m) => {
            if let Some(p) = m.get("nab") {
                check_fields(m, &["nab"], path)?;
                let prec: Prec = serde_json::from_value(p.clone()).map_err(|e| Error::parse(format!("{path}.nab"), e.to_string()))?;
                Ok(Topology::Nab(prec))
            } else if let Some(d) = m.get("declared") {
                check_fields(m, &["declared"], path)?;
                let opens: Vec<Vec<Elem>> =
                    serde_json::from_value(d.clone()).map_err(|e| Error::parse(format!("{path}.declared"), e.to_string()))?;
                Ok(Topology::Declared(opens))
            } else if let Some(p) = m.get("product") {
                check_fields(m, &["product"], path)?;
                let arr = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::parse(format!("{path}.product"), "expected two topologies"))?;
                Ok(Topology::Product(
                    Box::new(parse_topology(&arr[0], &format!("{path}.product[0]"))?),
                    Box::new(parse_topology(&arr[1], &format!("{path}.product[1]"))?),
                ))
            } else if let Some(d) = m.get("directed") {
                check_fields(m, &["directed", "ups"], path)?;
                let ups: Vec<Elem> = match m.get("ups") {
                    Some(u) => serde_json::from_value(u.clone()).map_err(|e| Error::parse(format!("{path}.ups"), e.to_string()))?,
                    None => Vec::new(),
                };
                Ok(Topology::Directed(Box::new(parse_topology(d, &format!("{path}.directed"))?), ups))
            } else {
                Err(Error::parse(path, "unknown topology object"))
            }
        }
        _ => Err(Error::parse(path, "expected a topology name or object")),
    }
}

fn parse_space(v: &Value, path: &str) -> Result<Space> {
    let obj = v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))?;
    if let Some(fs) = obj.get("product") {
        check_fields(obj, &["product"], path)?;
        let arr = fs.as_array().ok_or_else(|| Error::parse(format!("{path}.product"), "expected an array"))?;
        let spaces = arr
            .iter()
            .enumerate()
            .map(|(i, s)| parse_space(s, &format!("{path}.product[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        return Ok(product(&spaces));
    }
    check_fields(obj, &["poset", "topology", "families"], path)?;
    let carrier = Poset::from_json(obj.get("poset").ok_or_else(|| Error::parse(path, "missing field \"poset\""))?)
        .map_err(|e| match e {
            Error::Parse { node, msg } => Error::parse(format!("{path}.{node}"), msg),
            other => other,
        })?;
    let topology = match obj.get("topology") {
        Some(t) => parse_topology(t, &format!("{path}.topology"))?,
        None => Topology::Alexandrov,
    };
    let families: Vec<Seq> = match obj.get("families") {
        Some(f) => serde_json::from_value(f.clone()).map_err(|e| Error::parse(format!("{path}.families"), e.to_string()))?,
        None => Vec::new(),
    };
    if let Topology::Declared(opens) = &topology {
        for (i, o) in opens.iter().enumerate() {
            if let Some(e) = o.iter().find(|e| !carrier.contains(e)) {
                return Err(Error::parse(format!("{path}.topology.declared[{i}]"), format!("{e} is not in the carrier")));
            }
        }
        if !carrier.is_finite() {
            return Err(Error::parse(format!("{path}.topology"), "declared topologies need a finite carrier"));
        }
    }
    Ok(Space { carrier, topology, families })
}

fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for it in items {
        let mut more = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(it.clone());
                more.push(t);
            }
        }
        out.extend(more);
    }
    out
}

fn topo_base(t: &Topology, p: &Poset, pts: &[Elem]) -> Vec<Open> {
    let mut out = vec![Open::All];
    match t {
        Topology::Alexandrov => out.extend(pts.iter().map(|a| Open::Up(a.clone()))),
        Topology::Scott => out.extend(pts.iter().filter(|a| p.scott_compact(a)).map(|a| Open::Up(a.clone()))),
        Topology::Upper => {
            let small = p.is_finite() && pts.len() <= EXACT_FAMILY_LIMIT;
            if small {
                out.extend(subsets(pts, usize::MAX).into_iter().filter(|f| !f.is_empty()).map(Open::CoDown));
            } else {
                let head = &pts[..pts.len().min(12)];
                out.extend(subsets(head, 2).into_iter().filter(|f| !f.is_empty()).map(Open::CoDown));
                out.extend(pts[head.len()..].iter().map(|a| Open::CoDown(vec![a.clone()])));
            }
        }
        Topology::Nab(_) => out.extend(pts.iter().map(|a| Open::Wb(a.clone()))),
        Topology::Declared(opens) => out.extend(opens.iter().map(|o| Open::Set(o.clone()))),
        Topology::Product(s, u) => {
            let Poset::Product(pa, pb) = p else { return out };
            let mut xs: Vec<Elem> = pts.iter().filter_map(|e| e.fst().cloned()).collect();
            let mut ys: Vec<Elem> = pts.iter().filter_map(|e| e.snd().cloned()).collect();
            xs.sort();
            xs.dedup();
            ys.sort();
            ys.dedup();
            let ba = topo_base(s, pa, &xs);
            let bb = topo_base(u, pb, &ys);
            out.clear();
            for a in &ba {
                for b in &bb {
                    out.push(match (a, b) {
                        (Open::All, Open::All) => Open::All,
                        _ => Open::Prod(Box::new(a.clone()), Box::new(b.clone())),
                    });
                }
            }
        }
        Topology::Directed(inner, ups) => {
            out = topo_base(inner, p, pts);
            out.extend(ups.iter().map(|a| Open::Up(a.clone())));
        }
    }
    out
}

fn topo_in(t: &Topology, p: &Poset, u: &Open, x: &Elem) -> bool {
    match u {
        Open::All => p.contains(x),
        Open::Up(a) => p.leq(a, x),
        Open::CoDown(f) => p.contains(x) && !f.iter().any(|b| p.leq(x, b)),
        Open::Wb(a) => match t {
            Topology::Nab(prec) => prec.holds(p, a, x),
            Topology::Directed(inner, _) => topo_in(inner, p, u, x),
            _ => false,
        },
        Open::Has(_) => false,
        Open::Set(s) => s.contains(x),
        Open::Meet(us) => us.iter().all(|v| topo_in(t, p, v, x)),
        Open::Prod(a, b) => match (t, p, x) {
            (Topology::Product(s, w), Poset::Product(pa, pb), Elem::P(x1, x2)) => {
                topo_in(s, pa, a, x1) && topo_in(w, pb, b, x2)
            }
            (Topology::Directed(inner, _), _, _) => topo_in(inner, p, u, x),
            _ => false,
        },
    }
}

impl Carrier for Space {
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        self.carrier.leq(a, b)
    }
    fn contains(&self, a: &Elem) -> bool {
        self.carrier.contains(a)
    }
    fn prefix(&self, n: usize) -> Vec<Elem> {
        self.carrier.prefix(n)
    }
    fn size(&self) -> Option<usize> {
        self.carrier.size()
    }
}

impl Topo for Space {
    fn base(&self, pts: &[Elem]) -> Vec<Open> {
        topo_base(&self.topology, &self.carrier, pts)
    }

    fn in_open(&self, u: &Open, x: &Elem) -> bool {
        topo_in(&self.topology, &self.carrier, u, x)
    }

    fn chains(&self, pts: &[Elem]) -> Vec<Seq> {
        let k = pts.len().clamp(1, 6);
        let consts = |p: &Poset| p.prefix(k);
        let mut v = self.carrier.canonical_chains(&consts);
        if matches!(self.carrier, Poset::Dyadic) {
            v.extend(pts.iter().filter_map(|e| match e {
                Elem::Dy(n, x) if *n > 0 => Some(Seq::Below { num: *n, exp: *x }),
                _ => None,
            }));
        }
        v.extend(self.families.iter().cloned());
        v.sort();
        v.dedup();
        v
    }

    fn describe(&self) -> Value {
        self.to_json()
    }
}

/// Binary or n-ary product; the empty product is the one-point space.
pub fn product(xs: &[Space]) -> Space {
    match xs {
        [] => Space::alexandrov(Poset::Chain(1)),
        [x] => x.clone(),
        [x, rest @ ..] => {
            let y = product(rest);
            let mut s = Space::new(
                Poset::product(x.carrier.clone(), y.carrier.clone()),
                Topology::Product(Box::new(x.topology.clone()), Box::new(y.topology.clone())),
            );
            for f in &x.families {
                for g in &y.families {
                    s.families.push(Seq::pair(f.clone(), g.clone()));
                }
            }
            s
        }
    }
}

// ---------------------------------------------------------------------------
// Views

/// Sampled (or exact) picture of a space used by every catalog check.
pub struct View<'a> {
    pub space: &'a dyn Topo,
    pub exact: bool,
    pub bound: Bound,
    pub points: Vec<Elem>,
    pub probe: Vec<Elem>,
    pub opens: Vec<Open>,
    pub fams: Vec<Family>,
    universe: Vec<Elem>,
    index: HashMap<Elem, usize>,
    open_bits: Vec<FixedBitSet>,
    fam_bits: Vec<FixedBitSet>,
    /// Points (by index into `points`) each family converges to.
    conv: Vec<FixedBitSet>,
    up_cache: std::sync::Mutex<HashMap<usize, FixedBitSet>>,
}

impl<'a> View<'a> {
    pub fn new(space: &'a dyn Topo, bound: Bound) -> View<'a> {
        View::with_points(space, bound, &[])
    }

    pub fn with_points(space: &'a dyn Topo, bound: Bound, extra: &[Elem]) -> View<'a> {
        let finite = space.elements();
        let exact = finite.is_some();
        let (mut points, mut gens, mut probe) = match &finite {
            Some(all) => (all.clone(), all.clone(), all.clone()),
            None => {
                let pts = space.prefix(bound.sample);
                let gens = space.prefix(bound.depth.max(bound.sample));
                let probe = space.prefix((bound.depth + bound.depth / 2).max(4 * bound.sample));
                (pts, gens, probe)
            }
        };
        for e in extra {
            for v in [&mut points, &mut gens, &mut probe] {
                if !v.contains(e) {
                    v.push(e.clone());
                }
            }
        }
        for p in points.iter().chain(&gens) {
            if !probe.contains(p) {
                probe.push(p.clone());
            }
        }
        let fams = match &finite {
            Some(all) if all.len() <= EXACT_FAMILY_LIMIT => directed_subsets(space, all),
            Some(all) => all.iter().map(|e| Family::single(e.clone())).collect(),
            None => {
                let mut f: Vec<Family> = points.iter().map(|e| Family::single(e.clone())).collect();
                f.extend(space.chains(&points).into_iter().map(Family::Chain));
                f
            }
        };
        for f in &fams {
            if let Family::Chain(c) = f {
                for e in c.prefix(8) {
                    let e = space.canon(e);
                    if !gens.contains(&e) {
                        gens.push(e);
                    }
                }
            }
        }
        if finite.is_none() {
            for c in space.chains(&probe) {
                for e in c.prefix(2) {
                    let e = space.canon(e);
                    if !gens.contains(&e) {
                        gens.push(e);
                    }
                }
            }
        }
        let opens = dedup(space.base(&gens));
        View::assemble(space, exact, bound, points, probe, opens, fams)
    }

    /// A view with an explicit catalog.
    pub fn assemble(
        space: &'a dyn Topo,
        exact: bool,
        bound: Bound,
        points: Vec<Elem>,
        probe: Vec<Elem>,
        opens: Vec<Open>,
        fams: Vec<Family>,
    ) -> View<'a> {
        let mut universe = probe.clone();
        let mut index: HashMap<Elem, usize> = universe.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let chain_len = probe.len().max(bound.depth);
        let fam_members: Vec<Vec<Elem>> = fams.iter().map(|f| f.members(space, chain_len)).collect();
        for ms in &fam_members {
            for m in ms {
                if !index.contains_key(m) {
                    index.insert(m.clone(), universe.len());
                    universe.push(m.clone());
                }
            }
        }
        let n = universe.len();
        let open_bits: Vec<FixedBitSet> = opens
            .iter()
            .map(|u| {
                let mut b = FixedBitSet::with_capacity(n);
                for (i, e) in universe.iter().enumerate() {
                    if space.in_open(u, e) {
                        b.insert(i);
                    }
                }
                b
            })
            .collect();
        let fam_bits: Vec<FixedBitSet> = fam_members
            .iter()
            .map(|ms| {
                let mut b = FixedBitSet::with_capacity(n);
                for m in ms {
                    b.insert(index[m]);
                }
                b
            })
            .collect();
        let point_idx: Vec<usize> = points.iter().map(|p| index[p]).collect();
        let conv = fam_bits
            .iter()
            .map(|fb| {
                let mut c = FixedBitSet::with_capacity(points.len());
                c.insert_range(..);
                for ob in &open_bits {
                    if fb.is_disjoint(ob) {
                        for (k, &pi) in point_idx.iter().enumerate() {
                            if ob.contains(pi) {
                                c.set(k, false);
                            }
                        }
                    }
                }
                c
            })
            .collect();
        View {
            space,
            exact,
            bound,
            points,
            probe,
            opens,
            fams,
            universe,
            index,
            open_bits,
            fam_bits,
            conv,
            up_cache: std::sync::Mutex::new(HashMap::new()),
        }
    }

    pub fn bound_used(&self) -> usize {
        self.bound.depth
    }

    pub fn verdict(&self, ok: bool, cx: impl FnOnce() -> Value) -> Verdict {
        if ok {
            Verdict::held(self.exact, self.bound.depth)
        } else {
            Verdict::fail(cx())
        }
    }

    fn idx(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn point_index(&self, e: &Elem) -> Option<usize> {
        self.points.iter().position(|p| p == e)
    }

    /// Upward closure of `x` inside the universe.
    fn up_bits(&self, x: &Elem) -> FixedBitSet {
        if let Some(i) = self.idx(x) {
            if let Some(b) = self.up_cache.lock().expect("cache").get(&i) {
                return b.clone();
            }
        }
        let mut b = FixedBitSet::with_capacity(self.universe.len());
        for (i, e) in self.universe.iter().enumerate() {
            if self.space.leq(x, e) {
                b.insert(i);
            }
        }
        if let Some(i) = self.idx(x) {
            self.up_cache.lock().expect("cache").insert(i, b.clone());
        }
        b
    }

    fn set_bits(&self, u: &Open) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.universe.len());
        for (i, e) in self.universe.iter().enumerate() {
            if self.space.in_open(u, e) {
                b.insert(i);
            }
        }
        b
    }

    pub fn family_converges(&self, f: usize, x: &Elem) -> bool {
        match self.point_index(x) {
            Some(k) => self.conv[f].contains(k),
            None => {
                let xi = self.idx(x);
                self.open_bits.iter().enumerate().all(|(ui, ob)| {
                    let has_x = match xi {
                        Some(i) => ob.contains(i),
                        None => self.space.in_open(&self.opens[ui], x),
                    };
                    !has_x || !self.fam_bits[f].is_disjoint(ob)
                })
            }
        }
    }

    /// `x ≪ y` relative to the catalog, with evidence.
    pub fn way_below(&self, x: &Elem, y: &Elem) -> WayBelowWitness {
        let up = self.up_bits(x);
        for (f, fb) in self.fam_bits.iter().enumerate() {
            if self.family_converges(f, y) && fb.is_disjoint(&up) {
                return WayBelowWitness {
                    x: x.clone(),
                    y: y.clone(),
                    verdict: false,
                    evidence: Evidence::Refuted { family: self.fams[f].clone() },
                    exact: self.exact,
                    bound: self.bound.depth,
                };
            }
        }
        let interior = self.opens.iter().zip(&self.open_bits).find(|(u, ob)| {
            let yin = match self.idx(y) {
                Some(i) => ob.contains(i),
                None => self.space.in_open(u, y),
            };
            yin && self.probe.iter().all(|p| !ob.contains(self.index[p]) || up.contains(self.index[p]))
        });
        let evidence = match interior {
            Some((u, _)) => Evidence::Interior { open: u.clone() },
            None => Evidence::Sweep { families: self.fams.len() },
        };
        WayBelowWitness { x: x.clone(), y: y.clone(), verdict: true, evidence, exact: self.exact, bound: self.bound.depth }
    }

    pub fn wb(&self, x: &Elem, y: &Elem) -> bool {
        self.way_below(x, y).verdict
    }

    pub fn compact(&self, x: &Elem) -> bool {
        self.wb(x, x)
    }

    /// `⇓x` inside the witness pool and the catalog members.
    pub fn wb_below(&self, x: &Elem) -> Vec<Elem> {
        self.universe.iter().filter(|y| self.space.leq(y, x) && self.wb(y, x)).cloned().collect()
    }

    /// Whether some base open around `x` contains the point `v`... for each
    /// base open `U ∋ x`, `set` meets `U`.
    pub fn set_converges(&self, set: &[Elem], x: &Elem) -> bool {
        self.opens
            .iter()
            .filter(|u| self.space.in_open(u, x))
            .all(|u| set.iter().any(|s| self.space.in_open(u, s)))
    }

    /// Base open around `x` missed by `set`, if any.
    pub fn missed_open(&self, set: &[Elem], x: &Elem) -> Option<Open> {
        self.opens
            .iter()
            .find(|u| self.space.in_open(u, x) && !set.iter().any(|s| self.space.in_open(u, s)))
            .cloned()
    }

    /// Pairs of `set ∩ points` without an upper bound in `set`.
    pub fn undirected_pair(&self, set: &[Elem]) -> Option<(Elem, Elem)> {
        if set.is_empty() {
            return Some((Elem::Set(vec![]), Elem::Set(vec![])));
        }
        let head: Vec<&Elem> = set.iter().filter(|e| self.points.contains(e)).collect();
        let head = if head.is_empty() { vec![&set[0]] } else { head };
        for a in &head {
            for b in &head {
                if !set.iter().any(|c| self.space.leq(a, c) && self.space.leq(b, c)) {
                    return Some(((*a).clone(), (*b).clone()));
                }
            }
        }
        None
    }

    /// Whether `u` is open: every member point has a base open inside `u`.
    pub fn open_witness(&self, u: &Open) -> std::result::Result<(), Elem> {
        let ub = self.set_bits(u);
        let pool: Vec<usize> = self.probe.iter().map(|p| self.index[p]).collect();
        for x in &self.points {
            let xi = self.index[x];
            if !ub.contains(xi) {
                continue;
            }
            let found = self
                .open_bits
                .iter()
                .any(|ob| ob.contains(xi) && pool.iter().all(|&i| !ob.contains(i) || ub.contains(i)));
            if !found {
                return Err(x.clone());
            }
        }
        Ok(())
    }

    pub fn is_directed_open(&self, u: &Open) -> DirectedOpen {
        let ub = self.set_bits(u);
        for x in &self.probe {
            let xi = self.index[x];
            if !ub.contains(xi) {
                continue;
            }
            if let Some(y) = self.probe.iter().find(|y| self.space.leq(x, y) && !ub.contains(self.index[*y])) {
                return DirectedOpen::NotDirectedOpen { witness: json!({ "reason": "not an upper set", "x": x, "above": y }) };
            }
        }
        for (f, fb) in self.fam_bits.iter().enumerate() {
            if !fb.is_disjoint(&ub) {
                continue;
            }
            for (k, x) in self.points.iter().enumerate() {
                if ub.contains(self.index[x]) && self.conv[f].contains(k) {
                    return DirectedOpen::NotDirectedOpen {
                        witness: json!({ "reason": "family converges into the set but misses it", "family": self.fams[f], "limit": x }),
                    };
                }
            }
        }
        match self.open_witness(u) {
            Ok(()) => DirectedOpen::Open,
            Err(x) => DirectedOpen::DirectedOpenNotOpen {
                witness: json!({ "reason": "no base open inside the set", "point": x }),
            },
        }
    }

    /// Specialization order from the base agrees with the carrier order.
    pub fn specialization_mismatch(&self) -> Option<(Elem, Elem)> {
        for x in &self.points {
            for y in &self.points {
                let spec = self
                    .opens
                    .iter()
                    .zip(&self.open_bits)
                    .all(|(_, ob)| !ob.contains(self.index[x]) || ob.contains(self.index[y]));
                if spec != self.space.leq(x, y) {
                    return Some((x.clone(), y.clone()));
                }
            }
        }
        None
    }
}

fn dedup(mut v: Vec<Open>) -> Vec<Open> {
    let mut seen = std::collections::HashSet::new();
    v.retain(|o| seen.insert(o.clone()));
    v
}

fn directed_subsets(space: &dyn Topo, all: &[Elem]) -> Vec<Family> {
    let n = all.len();
    let fp = FinitePoset::of_carrier(space, all);
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let set: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if fp.is_directed(&set) {
            out.push(Family::Finite((0..n).filter(|&i| set[i]).map(|i| all[i].clone()).collect()));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Evidence {
    /// A base open around `y` inside `↑x`.
    Interior { open: Open },
    /// Every catalog family converging to `y` reaches above `x`.
    Sweep { families: usize },
    /// A family converging to `y` with no member above `x`.
    Refuted { family: Family },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WayBelowWitness {
    pub x: Elem,
    pub y: Elem,
    pub verdict: bool,
    pub evidence: Evidence,
    pub exact: bool,
    pub bound: usize,
}

impl WayBelowWitness {
    /// Re-evaluate the stored evidence against the space.
    pub fn replay(&self, space: &dyn Topo, bound: Bound) -> bool {
        match &self.evidence {
            Evidence::Refuted { family } => {
                let members = family.members(space, bound.depth);
                let v = View::with_points(space, bound, &[self.x.clone(), self.y.clone()]);
                !self.verdict
                    && v.set_converges(&members, &self.y)
                    && !members.iter().any(|m| space.leq(&self.x, m))
            }
            Evidence::Interior { open } => {
                let v = View::with_points(space, bound, &[self.x.clone(), self.y.clone()]);
                self.verdict && space.in_open(open, &self.y) && v.probe.iter().all(|p| !space.in_open(open, p) || space.leq(&self.x, p))
            }
            Evidence::Sweep { .. } => {
                let v = View::with_points(space, bound, &[self.x.clone(), self.y.clone()]);
                v.wb(&self.x, &self.y) == self.verdict
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum DirectedOpen {
    Open,
    DirectedOpenNotOpen { witness: Value },
    NotDirectedOpen { witness: Value },
}

// ---------------------------------------------------------------------------
// Operations

/// `D → x`: every base open around `x` meets `D`.
pub fn converges(x_space: &dyn Topo, d: &Family, x: &Elem, bound: Bound) -> Result<(bool, Verdict)> {
    if !x_space.contains(x) {
        return Err(Error::Domain(format!("{x} is not in the carrier")));
    }
    let members = d.members(x_space, bound.depth);
    let mut extra = vec![x.clone()];
    if let Family::Finite(v) = d {
        extra.extend(v.iter().cloned());
    }
    let v = View::with_points(x_space, bound, &extra);
    let ok = v.set_converges(&members, x);
    let verdict = if ok {
        Verdict::held(v.exact, bound.depth)
    } else {
        Verdict::fail(json!({ "missed_open": v.missed_open(&members, x) }))
    };
    Ok((ok, verdict))
}

pub fn is_directed_open(x_space: &dyn Topo, u: &Open, bound: Bound) -> DirectedOpen {
    let mut extra = Vec::new();
    collect_open_points(u, &mut extra);
    let v = View::with_points(x_space, bound, &extra);
    v.is_directed_open(u)
}

fn collect_open_points(u: &Open, out: &mut Vec<Elem>) {
    match u {
        Open::Up(a) | Open::Wb(a) | Open::Has(a) => out.push(a.clone()),
        Open::CoDown(v) | Open::Set(v) => out.extend(v.iter().cloned()),
        Open::Meet(us) => us.iter().for_each(|w| collect_open_points(w, out)),
        Open::Prod(_, _) | Open::All => {}
    }
}

pub fn way_below(x_space: &dyn Topo, x: &Elem, y: &Elem, bound: Bound) -> Result<WayBelowWitness> {
    for e in [x, y] {
        if !x_space.contains(e) {
            return Err(Error::Domain(format!("{e} is not in the carrier")));
        }
    }
    let v = View::with_points(x_space, bound, &[x.clone(), y.clone()]);
    Ok(v.way_below(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    NotDirected,
    Directed,
    Continuous,
    Algebraic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub compacts: Vec<Elem>,
    pub exact: bool,
    pub bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Classification {
    pub fn is_continuous(&self) -> bool {
        self.kind >= Kind::Continuous
    }
}

/// Candidate sets probed for directed-openness.
fn classify_candidates(v: &View) -> Vec<Open> {
    if v.exact && v.points.len() <= 16 {
        let n = v.points.len();
        let fp = FinitePoset::of_carrier(v.space, &v.points);
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let set: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            if fp.is_upper(&set) {
                out.push(Open::Set((0..n).filter(|&i| set[i]).map(|i| v.points[i].clone()).collect()));
            }
        }
        out
    } else {
        v.points.iter().map(|a| Open::Up(a.clone())).collect()
    }
}

/// Classify on an existing view.
pub fn classify_view(v: &View) -> Classification {
    let compacts: Vec<Elem> = v.points.iter().filter(|x| v.compact(x)).cloned().collect();
    let mk = |kind, witness| Classification { kind, compacts: compacts.clone(), exact: v.exact, bound: v.bound.depth, witness };
    for u in classify_candidates(v) {
        if let DirectedOpen::DirectedOpenNotOpen { witness } = v.is_directed_open(&u) {
            return mk(Kind::NotDirected, Some(json!({ "set": u, "witness": witness })));
        }
    }
    if let Some(w) = continuity_failure(v) {
        return mk(Kind::Directed, Some(w));
    }
    let k_pool: Vec<Elem> = v.probe.iter().filter(|k| v.compact(k)).cloned().collect();
    for x in &v.points {
        let below: Vec<Elem> = k_pool.iter().filter(|k| v.space.leq(k, x)).cloned().collect();
        if let Some((a, b)) = v.undirected_pair(&below) {
            return mk(Kind::Continuous, Some(json!({ "point": x, "compacts_below_not_directed": [a, b] })));
        }
        if let Some(u) = v.missed_open(&below, x) {
            return mk(Kind::Continuous, Some(json!({ "point": x, "open_without_compact": u })));
        }
    }
    mk(Kind::Algebraic, None)
}

/// `⇓x` directed and converging to `x` for every sampled `x`.
pub fn continuity_failure(v: &View) -> Option<Value> {
    for x in &v.points {
        let w = v.wb_below(x);
        if let Some((a, b)) = v.undirected_pair(&w) {
            return Some(json!({ "point": x, "way_below_not_directed": [a, b] }));
        }
        if let Some(u) = v.missed_open(&w, x) {
            return Some(json!({ "point": x, "way_below_misses_open": u }));
        }
    }
    None
}

pub fn classify(x_space: &dyn Topo, bound: Bound) -> Classification {
    classify_view(&View::new(x_space, bound))
}

/// The coreflection `D(X)`: opens are the catalog-directed-open sets.
pub fn coreflect(x: &Space, bound: Bound) -> Space {
    let v = View::new(x, bound);
    if v.exact {
        let opens: Vec<Vec<Elem>> = classify_candidates(&v)
            .into_iter()
            .filter(|u| !matches!(v.is_directed_open(u), DirectedOpen::NotDirectedOpen { .. }))
            .filter_map(|u| match u {
                Open::Set(s) => Some(s),
                _ => None,
            })
            .collect();
        let mut s = x.clone();
        s.topology = Topology::Declared(opens);
        return s;
    }
    if let Topology::Directed(..) = x.topology {
        return x.clone();
    }
    let ups: Vec<Elem> = v
        .points
        .iter()
        .filter(|a| matches!(v.is_directed_open(&Open::Up((*a).clone())), DirectedOpen::DirectedOpenNotOpen { .. }))
        .cloned()
        .collect();
    if ups.is_empty() {
        return x.clone();
    }
    let mut s = x.clone();
    s.topology = Topology::Directed(Box::new(x.topology.clone()), ups);
    s
}

/// Compare open-ness of candidate sets in two spaces over the same carrier.
pub fn same_opens(a: &dyn Topo, b: &dyn Topo, bound: Bound) -> std::result::Result<(), Open> {
    let va = View::new(a, bound);
    let vb = View::new(b, bound);
    let mut cands = classify_candidates(&va);
    cands.extend(va.opens.iter().cloned());
    cands.extend(vb.opens.iter().cloned());
    if !va.exact {
        cands.extend(va.points.iter().map(|p| Open::Set(vec![p.clone()])));
    }
    for u in cands {
        let oa = va.open_witness(&u).is_ok() && va.is_upper_set(&u);
        let ob = vb.open_witness(&u).is_ok() && vb.is_upper_set(&u);
        if oa != ob {
            return Err(u);
        }
    }
    Ok(())
}

impl View<'_> {
    pub fn is_upper_set(&self, u: &Open) -> bool {
        !matches!(self.is_directed_open(u), DirectedOpen::NotDirectedOpen { witness } if witness["reason"] == "not an upper set")
    }
}

/// Which elements of the carrier are in a basis candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    All,
    Only(Vec<Elem>),
    Except(Vec<Elem>),
}

impl Subset {
    pub fn contains(&self, e: &Elem) -> bool {
        match self {
            Subset::All => true,
            Subset::Only(v) => v.contains(e),
            Subset::Except(v) => !v.contains(e),
        }
    }
}

/// `B` is a basis: `⇓x ∩ B` directed and converging to `x`; for algebraic
/// spaces also `K(X) ⊆ B`.
pub fn is_basis(x_space: &dyn Topo, b: &Subset, bound: Bound) -> Report {
    let v = View::new(x_space, bound);
    let cls = classify_view(&v);
    let mut r = Report::new("basis");
    let mut dir_cx = None;
    let mut conv_cx = None;
    for x in &v.points {
        let w: Vec<Elem> = v.wb_below(x).into_iter().filter(|e| b.contains(e)).collect();
        if dir_cx.is_none() {
            if let Some((a, c)) = v.undirected_pair(&w) {
                dir_cx = Some(json!({ "point": x, "pair": [a, c] }));
            }
        }
        if conv_cx.is_none() {
            if let Some(u) = v.missed_open(&w, x) {
                conv_cx = Some(json!({ "point": x, "missed_open": u }));
            }
        }
    }
    r.push("⇓x ∩ B directed", v.verdict(dir_cx.is_none(), || dir_cx.clone().unwrap_or_default()));
    r.push("⇓x ∩ B converges to x", v.verdict(conv_cx.is_none(), || conv_cx.clone().unwrap_or_default()));
    if cls.kind == Kind::Algebraic {
        let missing = cls.compacts.iter().find(|k| !b.contains(k));
        r.push("K(X) ⊆ B", v.verdict(missing.is_none(), || json!({ "compact_not_in_basis": missing })));
    }
    r
}

/// Continuity of `f: X → Y` on base opens of `Y` generated by images.
pub fn continuity_failure_of(
    f: &dyn Fn(&Elem) -> Elem,
    x: &dyn Topo,
    y: &dyn Topo,
    bound: Bound,
) -> Option<Value> {
    let vx = View::new(x, bound);
    let mut ys: Vec<Elem> = vx.points.iter().map(f).collect();
    ys.sort();
    ys.dedup();
    let y_opens = dedup(y.base(&ys));
    continuity_failure_in(&vx, y, &y_opens, f)
}

/// Continuity against explicit opens of `Y`, reusing a view of `X`.
pub fn continuity_failure_in(vx: &View, y: &dyn Topo, y_opens: &[Open], f: &dyn Fn(&Elem) -> Elem) -> Option<Value> {
    let x = vx.space;
    let images: Vec<Elem> = vx.points.iter().map(f).collect();
    let probe_images: Vec<Elem> = vx.probe.iter().map(f).collect();
    for v in y_opens {
        for (i, p) in vx.points.iter().enumerate() {
            if !y.in_open(v, &images[i]) {
                continue;
            }
            let inside = vx.opens.iter().any(|u| {
                x.in_open(u, p)
                    && vx.probe.iter().zip(&probe_images).all(|(q, fq)| !x.in_open(u, q) || y.in_open(v, fq))
            });
            if !inside {
                return Some(json!({ "point": p, "image": images[i], "open": v }));
            }
        }
    }
    None
}

/// A map on a finite product given by a table over product points.
pub type ProductMap = dyn Fn(&Elem, &Elem) -> Elem + Sync;

/// Separate and joint continuity of `f: X1 ⊗ X2 → Y`.
pub fn check_separate_continuity(f: &ProductMap, x1: &Space, x2: &Space, y: &dyn Topo, bound: Bound) -> Report {
    let joint_space = product(&[x1.clone(), x2.clone()]);
    let mut r = Report::new("separate continuity");
    let v1 = View::new(x1, bound);
    let v2 = View::new(x2, bound);
    let exact = v1.exact && v2.exact;
    let mut sep = None;
    for a in &v1.points {
        let g = |b: &Elem| f(a, b);
        if let Some(cx) = continuity_failure_of(&g, x2, y, bound) {
            sep = Some(json!({ "fixed_first": a, "failure": cx }));
            break;
        }
    }
    if sep.is_none() {
        for b in &v2.points {
            let g = |a: &Elem| f(a, b);
            if let Some(cx) = continuity_failure_of(&g, x1, y, bound) {
                sep = Some(json!({ "fixed_second": b, "failure": cx }));
                break;
            }
        }
    }
    let separately = sep.is_none();
    r.expect("separately continuous", separately, exact, bound.depth, || sep.clone().unwrap_or_default());
    let h = |p: &Elem| f(p.fst().expect("pair"), p.snd().expect("pair"));
    let joint = continuity_failure_of(&h, &joint_space, y, bound);
    r.expect("jointly continuous", joint.is_none(), exact, bound.depth, || joint.clone().unwrap_or_default());
    let implication = !separately || joint.is_none();
    r.expect("separate ⇒ joint", implication, exact, bound.depth, || json!({ "joint_failure": joint }));
    r
}

/// Convergence and way-below in `X1 ⊗ X2` are componentwise.
pub fn product_laws(x1: &Space, x2: &Space, bound: Bound) -> Report {
    let p = product(&[x1.clone(), x2.clone()]);
    let vp = View::new(&p, bound);
    let lefts: Vec<Elem> = vp.points.iter().filter_map(|q| q.fst().cloned()).collect();
    let rights: Vec<Elem> = vp.points.iter().filter_map(|q| q.snd().cloned()).collect();
    let v1 = View::with_points(x1, bound, &lefts);
    let v2 = View::with_points(x2, bound, &rights);
    let exact = vp.exact;
    let mut r = Report::new(format!("product laws on {}", p.describe()));
    let mut cx = None;
    'c: for (fi, fam) in vp.fams.iter().enumerate() {
        let members = fam.members(&p, bound.depth);
        let ls: Vec<Elem> = members.iter().filter_map(|m| m.fst().cloned()).collect();
        let rs: Vec<Elem> = members.iter().filter_map(|m| m.snd().cloned()).collect();
        for q in &vp.points {
            let (a, b) = (q.fst().unwrap(), q.snd().unwrap());
            let joint = vp.family_converges(fi, q);
            let comp = v1.set_converges(&ls, a) && v2.set_converges(&rs, b);
            if joint != comp {
                cx = Some(json!({ "family": fam, "point": q, "product": joint, "componentwise": comp }));
                break 'c;
            }
        }
    }
    r.push_detail(
        "convergence is componentwise",
        vp.verdict(cx.is_none(), || cx.clone().unwrap_or_default()),
        format!("{} famil(ies), {} point(s)", vp.fams.len(), vp.points.len()),
    );
    let mut cx = None;
    'w: for q in &vp.points {
        for t in &vp.points {
            let joint = vp.wb(q, t);
            let comp = v1.wb(q.fst().unwrap(), t.fst().unwrap()) && v2.wb(q.snd().unwrap(), t.snd().unwrap());
            if joint != comp {
                cx = Some(json!({ "x": q, "y": t, "product": joint, "componentwise": comp }));
                break 'w;
            }
        }
    }
    r.expect("way-below is componentwise", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    r
}

/// Separate continuity implies joint continuity for every map
/// `P ⊗ Q → Y` with `|P|, |Q| ≤ max` and `|Y| ≤ max_y`.
pub fn separate_joint_exhaustive(max: usize, max_y: usize, bound: Bound) -> Report {
    let mut r = Report::new("separate ⇒ joint continuity (exhaustive)");
    let posets = FinitePoset::all_up_to(max);
    let codomains = FinitePoset::all_up_to(max_y);
    let (mut maps, mut separate, mut monotone) = (0usize, 0usize, 0usize);
    let mut cx = None;
    'o: for pp in &posets {
        for qq in &posets {
            let (x1, x2) = (Space::finite(pp.clone()), Space::finite(qq.clone()));
            let joint_space = product(&[x1.clone(), x2.clone()]);
            let (v1, v2, vj) = (View::new(&x1, bound), View::new(&x2, bound), View::new(&joint_space, bound));
            let pq = pp.product(qq);
            for yy in &codomains {
                let y = Space::finite(yy.clone());
                let y_opens = dedup(y.base(&y.prefix(yy.size())));
                for table in crate::order::all_maps(pq.size(), yy.size()) {
                    maps += 1;
                    let m = qq.size();
                    let at = |a: &Elem, b: &Elem| Elem::N(table[a.as_nat().unwrap() as usize * m + b.as_nat().unwrap() as usize] as u64);
                    let sep = v1.points.iter().all(|a| continuity_failure_in(&v2, &y, &y_opens, &|b| at(a, b)).is_none())
                        && v2.points.iter().all(|b| continuity_failure_in(&v1, &y, &y_opens, &|a| at(a, b)).is_none());
                    let mono = (0..pq.size()).all(|i| (0..pq.size()).all(|j| !pq.leq(i, j) || yy.leq(table[i], table[j])));
                    separate += sep as usize;
                    monotone += mono as usize;
                    if sep {
                        let h = |q: &Elem| at(q.fst().unwrap(), q.snd().unwrap());
                        if let Some(f) = continuity_failure_in(&vj, &y, &y_opens, &h) {
                            cx = Some(json!({ "p": pp.to_json(), "q": qq.to_json(), "y": yy.to_json(), "table": table, "failure": f }));
                            break 'o;
                        }
                    }
                }
            }
        }
    }
    r.push_detail(
        "separate ⇒ joint",
        match &cx {
            None => Verdict::Pass,
            Some(v) => Verdict::fail(v.clone()),
        },
        format!("{maps} map(s), {separate} separately continuous, {monotone} monotone"),
    );
    r.expect("separately continuous ⇔ monotone", separate == monotone, true, max, || json!({ "separate": separate, "monotone": monotone }));
    r
}

/// Partial map between carriers.
pub type ElemMap<'a> = &'a dyn Fn(&Elem) -> Option<Elem>;

/// `phi: A → B` and `psi: B → A` are mutually inverse, order-preserving and
/// continuous on the sampled points of both spaces.
pub fn check_homeomorphism(a: &dyn Topo, b: &dyn Topo, phi: ElemMap, psi: ElemMap, bound: Bound) -> Report {
    let va = View::new(a, bound);
    let vb = View::new(b, bound);
    let exact = va.exact && vb.exact;
    let mut r = Report::new("homeomorphism");
    let cx = va.points.iter().find_map(|x| match phi(x) {
        Some(y) if b.contains(&y) && psi(&y).as_ref() == Some(x) => None,
        other => Some(json!({ "point": x, "image": other })),
    });
    r.expect("psi ∘ phi = id", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    let cx = vb.points.iter().find_map(|y| match psi(y) {
        Some(x) if a.contains(&x) && phi(&x).as_ref() == Some(y) => None,
        other => Some(json!({ "point": y, "preimage": other })),
    });
    r.expect("phi ∘ psi = id", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    if !r.passed() {
        return r;
    }
    let mut cx = None;
    'o: for x in &va.points {
        for y in &va.points {
            let (px, py) = (phi(x).unwrap(), phi(y).unwrap());
            if a.leq(x, y) != b.leq(&px, &py) {
                cx = Some(json!({ "x": x, "y": y }));
                break 'o;
            }
        }
    }
    r.expect("order isomorphism", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    let none = Elem::Set(vec![Elem::Set(vec![])]);
    let f = |x: &Elem| phi(x).unwrap_or_else(|| none.clone());
    let g = |y: &Elem| psi(y).unwrap_or_else(|| none.clone());
    let c1 = continuity_failure_of(&f, a, b, bound);
    r.expect("phi continuous", c1.is_none(), exact, bound.depth, || c1.clone().unwrap_or_default());
    let c2 = continuity_failure_of(&g, b, a, bound);
    r.expect("psi continuous", c2.is_none(), exact, bound.depth, || c2.clone().unwrap_or_default());
    r
}

/// A finite space as an explicit poset over its enumeration.
pub fn finite_order(x: &dyn Topo) -> Option<(Vec<Elem>, FinitePoset)> {
    let all = x.elements()?;
    let fp = FinitePoset::of_carrier(x, &all);
    Some((all, fp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Space {
        Space::alexandrov(Poset::Chain(2))
    }

    #[test]
    fn converges_examples() {
        let w1 = Space::omega_plus_one();
        let b = Bound::default();
        assert!(converges(&w1, &Family::Chain(Seq::nat()), &Elem::top(), b).unwrap().0);
        let remark = Space::flat_nat_top_upper();
        let (ok, v) = converges(&remark, &Family::single(Elem::N(5)), &Elem::top(), b).unwrap();
        assert!(!ok);
        assert!(v.is_fail());
        assert!(converges(&c2(), &Family::single(Elem::N(1)), &Elem::N(0), b).unwrap().0);
        assert!(converges(&c2(), &Family::single(Elem::N(1)), &Elem::N(7), b).is_err());
    }

    #[test]
    fn remark_top_is_directed_open_not_open() {
        let remark = Space::flat_nat_top_upper();
        let b = Bound::default();
        let d = is_directed_open(&remark, &Open::Set(vec![Elem::top()]), b);
        assert!(matches!(d, DirectedOpen::DirectedOpenNotOpen { .. }), "{d:?}");
        let d = is_directed_open(&c2(), &Open::Set(vec![Elem::N(0)]), b);
        assert!(matches!(d, DirectedOpen::NotDirectedOpen { .. }));
        assert_eq!(is_directed_open(&remark, &Open::All, b), DirectedOpen::Open);
    }

    #[test]
    fn way_below_on_omega_plus_one() {
        let w1 = Space::omega_plus_one();
        let b = Bound::default();
        let t = way_below(&w1, &Elem::N(3), &Elem::top(), b).unwrap();
        assert!(t.verdict);
        assert!(t.replay(&w1, b));
        let f = way_below(&w1, &Elem::top(), &Elem::top(), b).unwrap();
        assert!(!f.verdict);
        assert_eq!(f.evidence, Evidence::Refuted { family: Family::Chain(Seq::nat()) });
        assert!(f.replay(&w1, b));
        assert!(way_below(&c2(), &Elem::N(0), &Elem::N(1), b).unwrap().verdict);
    }

    #[test]
    fn classify_examples() {
        let b = Bound::default();
        let remark = classify(&Space::flat_nat_top_upper(), b);
        assert_eq!(remark.kind, Kind::NotDirected);
        assert_eq!(remark.compacts.len(), b.sample);
        let w1 = classify(&Space::omega_plus_one(), b);
        assert_eq!(w1.kind, Kind::Algebraic);
        assert!(!w1.compacts.contains(&Elem::top()));
        assert_eq!(w1.compacts.len(), b.sample - 1);
        assert_eq!(classify(&c2(), b).kind, Kind::Algebraic);
    }

    #[test]
    fn coreflection_of_remark_space_is_alexandrov() {
        let b = Bound::default();
        let remark = Space::flat_nat_top_upper();
        let d = coreflect(&remark, b);
        let alex = Space::alexandrov(Poset::flat_nat_top());
        assert_eq!(same_opens(&d, &alex, b), Ok(()));
        assert_eq!(coreflect(&d, b), d);
        assert_ne!(same_opens(&remark, &alex, b), Ok(()));
    }

    #[test]
    fn coreflection_fixes_finite_spaces() {
        let b = Bound::default();
        let x = Space::finite(FinitePoset::closed(3, &[(0, 1), (0, 2)]));
        assert_eq!(same_opens(&coreflect(&x, b), &x, b), Ok(()));
    }

    #[test]
    fn product_examples() {
        let b = Bound::default();
        let sq = product(&[c2(), c2()]);
        assert_eq!(sq.size(), Some(4));
        assert_eq!(classify(&sq, b).kind, Kind::Algebraic);
        let ww = product(&[Space::omega_plus_one(), Space::omega_plus_one()]);
        let tt = Elem::pair(Elem::top(), Elem::top());
        let diag = Family::Chain(Seq::pair(Seq::nat(), Seq::nat()));
        assert!(converges(&ww, &diag, &tt, b).unwrap().0);
        assert!(way_below(&ww, &Elem::pair(Elem::N(3), Elem::N(5)), &tt, b).unwrap().verdict);
        assert!(!way_below(&ww, &Elem::pair(Elem::top(), Elem::N(0)), &tt, b).unwrap().verdict);
    }

    #[test]
    fn separate_continuity_examples() {
        let b = Bound::default();
        let max = |a: &Elem, c: &Elem| crate::order::MapRule::Join.apply_raw(&Elem::pair(a.clone(), c.clone()));
        let r = check_separate_continuity(&max, &c2(), &c2(), &c2(), b);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.checks[1].verdict, Verdict::Pass);
        let w1 = Space::omega_plus_one();
        let r = check_separate_continuity(&max, &w1, &w1, &w1, b);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.checks[1].verdict, Verdict::VerifiedUpToBound { bound: 64 });
    }

    #[test]
    fn product_laws_hold() {
        let b = Bound::default();
        let w1 = Space::omega_plus_one();
        let r = product_laws(&w1, &w1, b);
        assert!(r.passed(), "{}", r.to_text());
        let r = product_laws(&c2(), &Space::finite(FinitePoset::closed(3, &[(0, 1), (0, 2)])), b);
        assert!(r.passed(), "{}", r.to_text());
        let r = separate_joint_exhaustive(2, 2, b);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn basis_examples() {
        let b = Bound::default();
        let w1 = Space::omega_plus_one();
        assert!(is_basis(&w1, &Subset::Except(vec![Elem::top()]), b).passed());
        let r = is_basis(&w1, &Subset::Except(vec![Elem::top(), Elem::N(0)]), b);
        assert!(!r.passed());
        assert!(r.check("K(X) ⊆ B").unwrap().verdict.is_fail());
        assert!(is_basis(&c2(), &Subset::All, b).passed());
    }

    #[test]
    fn json_roundtrip() {
        let v = json!({"poset":{"kind":"flat_nat_top"},"topology":"upper"});
        let s = Space::from_json(&v).unwrap();
        assert_eq!(s, Space::flat_nat_top_upper());
        let back = Space::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let p = product(&[Space::omega_plus_one(), c2()]);
        assert_eq!(Space::from_json(&p.to_json()).unwrap(), p);
        assert!(Space::from_json(&json!({"poset":{"kind":"omega"},"topology":"weird"})).is_err());
    }

    #[test]
    fn specialization_agrees_with_order() {
        let b = Bound::default();
        for s in [Space::omega_plus_one(), Space::flat_nat_top_upper(), c2(), product(&[c2(), Space::omega_plus_one()])] {
            assert_eq!(View::new(&s, b).specialization_mismatch(), None, "{s:?}");
        }
    }
}
