//! b-posets `(A, I(A))`, b-maps, the functors `G` and `H`, products,
//! exponentials and the reflection into ideal-complete b-posets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elem::{Elem, Seq};
use crate::ideal::{make_topological_ideal, project, rectangle};
use crate::order::{
    check_fields, ideal_elem_leq, ideal_elem_member, monotone_maps, Carrier, FinitePoset, MapRule, Poset, FAR,
};
use crate::report::{Bound, Error, Report, Result, Verdict};
use crate::space::{check_homeomorphism, classify, classify_view, Family, Kind, Open, Space, Topo, Topology, View};

/// Which elements of the underlying poset form the base `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keep {
    All,
    ScottCompact,
    Pair(Box<Keep>, Box<Keep>),
}

fn keeps(k: &Keep, p: &Poset, a: &Elem) -> bool {
    match k {
        Keep::All => true,
        Keep::ScottCompact => p.scott_compact(a),
        Keep::Pair(l, r) => match (p, a) {
            (Poset::Product(pa, pb), Elem::P(x, y)) => keeps(l, pa, x) && keeps(r, pb, y),
            _ => false,
        },
    }
}

/// The base poset: a constructor expression restricted by `keep`.
#[derive(Clone, Debug, PartialEq)]
pub struct Base {
    pub poset: Poset,
    pub keep: Keep,
}

impl Base {
    pub fn all(poset: Poset) -> Base {
        Base { poset, keep: Keep::All }
    }

    fn chains(&self, depth: usize) -> Vec<Seq> {
        let consts = |p: &Poset| p.prefix(6);
        self.poset
            .canonical_chains(&consts)
            .into_iter()
            .filter(|s| s.prefix(depth).iter().all(|e| self.contains(e)))
            .collect()
    }
}

impl Carrier for Base {
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        self.poset.leq(a, b)
    }

    fn contains(&self, a: &Elem) -> bool {
        self.poset.contains(a) && keeps(&self.keep, &self.poset, a)
    }

    fn prefix(&self, n: usize) -> Vec<Elem> {
        if self.keep == Keep::All {
            return self.poset.prefix(n);
        }
        let mut m = n.max(1);
        loop {
            let mut v: Vec<Elem> = self.poset.prefix(m).into_iter().filter(|e| self.contains(e)).collect();
            let exhausted = self.poset.size().is_some_and(|s| m >= s);
            if v.len() >= n || exhausted || m > 4 * n + 16 {
                v.truncate(n);
                return v;
            }
            m *= 2;
        }
    }

    fn size(&self) -> Option<usize> {
        let s = self.poset.size()?;
        if self.keep == Keep::All {
            Some(s)
        } else {
            Some(self.poset.prefix(s).iter().filter(|e| self.contains(e)).count())
        }
    }
}

/// A listed ideal: a monotone chain (its down-closure) or a literal finite set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealDesc {
    Chain(Seq),
    Set(Vec<Elem>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdealFamily {
    /// `PI(A)`.
    Principal,
    /// `PI(A)` plus the listed ideals.
    Listed(Vec<IdealDesc>),
    /// `ID(A)`.
    All,
    /// Rectangles of ideals of the two factors.
    Rect(Box<BPoset>, Box<BPoset>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BPoset {
    pub base: Base,
    pub family: IdealFamily,
}

impl Carrier for BPoset {
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        self.base.leq(a, b)
    }
    fn contains(&self, a: &Elem) -> bool {
        self.base.contains(a)
    }
    fn prefix(&self, n: usize) -> Vec<Elem> {
        self.base.prefix(n)
    }
    fn size(&self) -> Option<usize> {
        self.base.size()
    }
}

impl BPoset {
    pub fn principal(poset: Poset) -> BPoset {
        BPoset { base: Base::all(poset), family: IdealFamily::Principal }
    }

    pub fn with_chains(poset: Poset, chains: Vec<Seq>) -> BPoset {
        BPoset { base: Base::all(poset), family: IdealFamily::Listed(chains.into_iter().map(IdealDesc::Chain).collect()) }
    }

    pub fn ideal_complete(poset: Poset) -> BPoset {
        BPoset { base: Base::all(poset), family: IdealFamily::All }
    }

    pub fn is_finite(&self) -> bool {
        self.base.size().is_some()
    }

    fn stationary(&self, s: &Seq, depth: usize) -> Option<Elem> {
        if s.is_const() {
            return Some(s.at(0));
        }
        let far = s.at(FAR);
        (0..depth.max(1)).map(|k| s.at(k)).find(|t| self.leq(&far, t))
    }

    fn chain_ok(&self, s: &Seq, depth: usize) -> std::result::Result<(), Value> {
        let mut pts = s.prefix(depth.max(2));
        pts.push(s.at(FAR));
        if let Some(e) = pts.iter().find(|e| !self.contains(e)) {
            return Err(json!({ "reason": "chain leaves the base", "element": e }));
        }
        match pts.windows(2).find(|w| !self.leq(&w[0], &w[1])) {
            Some(w) => Err(json!({ "reason": "chain not monotone", "a": w[0], "b": w[1] })),
            None => Ok(()),
        }
    }

    /// Canonical form of an ideal element of `ID(A)`, or `None` outside it.
    pub fn normal(&self, e: &Elem, depth: usize) -> Option<Elem> {
        match e {
            Elem::Down(a) if self.contains(a) => Some(e.clone()),
            Elem::Lim(s) => {
                self.chain_ok(s, depth).ok()?;
                Some(match self.stationary(s, depth) {
                    Some(t) => Elem::down(t),
                    None => e.clone(),
                })
            }
            _ => None,
        }
    }

    pub fn desc_elem(&self, d: &IdealDesc, depth: usize) -> Option<Elem> {
        match d {
            IdealDesc::Chain(s) => self.normal(&Elem::lim(s.clone()), depth),
            IdealDesc::Set(v) => v.iter().find(|a| v.iter().all(|b| self.leq(b, a))).map(|m| Elem::down(m.clone())),
        }
    }

    fn same(&self, a: &Elem, b: &Elem, depth: usize) -> bool {
        ideal_elem_leq(self, a, b, depth) && ideal_elem_leq(self, b, a, depth)
    }

    /// Non-principal listed ideals after normalization.
    pub fn listed(&self, depth: usize) -> Vec<Elem> {
        let IdealFamily::Listed(ds) = &self.family else { return Vec::new() };
        let mut out: Vec<Elem> = Vec::new();
        for d in ds {
            if let Some(e @ Elem::Lim(_)) = self.desc_elem(d, depth) {
                if !out.iter().any(|u| self.same(u, &e, depth)) {
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn has_ideal(&self, e: &Elem, depth: usize) -> bool {
        let Some(n) = self.normal(e, depth) else { return false };
        if let Elem::Down(_) = n {
            return true;
        }
        match &self.family {
            IdealFamily::Principal => false,
            IdealFamily::All => true,
            IdealFamily::Listed(_) => self.listed(depth).iter().any(|l| self.same(l, &n, depth)),
            IdealFamily::Rect(p, q) => match project(&n) {
                Some((a, b)) => {
                    p.has_ideal(&a, depth) && q.has_ideal(&b, depth) && self.same(&n, &rectangle(&a, &b), depth)
                }
                None => false,
            },
        }
    }

    /// Representative of `e` among the sampled ideals.
    pub fn canon_ideal(&self, e: &Elem, depth: usize) -> Elem {
        let Some(n) = self.normal(e, depth) else { return e.clone() };
        if let Elem::Lim(_) = n {
            if let Some(u) = self.nonprincipal(depth).into_iter().find(|u| self.same(u, &n, depth)) {
                return u;
            }
        }
        n
    }

    /// Non-principal members of `I(A)` named by the presentation.
    pub fn nonprincipal(&self, depth: usize) -> Vec<Elem> {
        let mut out: Vec<Elem> = match &self.family {
            IdealFamily::Principal => Vec::new(),
            IdealFamily::Listed(_) => self.listed(depth),
            IdealFamily::All => self
                .base
                .chains(depth)
                .into_iter()
                .filter_map(|s| self.normal(&Elem::lim(s), depth))
                .filter(|e| matches!(e, Elem::Lim(_)))
                .collect(),
            IdealFamily::Rect(p, q) => {
                let a = p.sample(8, depth);
                let b = q.sample(8, depth);
                let mut v = Vec::new();
                for x in &a {
                    for y in &b {
                        if matches!(x, Elem::Lim(_)) || matches!(y, Elem::Lim(_)) {
                            v.push(rectangle(x, y));
                        }
                    }
                }
                v
            }
        };
        let mut seen: Vec<Elem> = Vec::new();
        out.retain(|e| {
            let fresh = !seen.iter().any(|u| self.same(u, e, depth));
            if fresh {
                seen.push(e.clone());
            }
            fresh
        });
        out
    }

    /// Non-principal ideals first, then principal ideals of the base prefix.
    pub fn sample(&self, n: usize, depth: usize) -> Vec<Elem> {
        let mut v = self.nonprincipal(depth);
        v.truncate(n);
        let rest = n - v.len();
        v.extend(self.base.prefix(rest).into_iter().map(Elem::down));
        v
    }

    pub fn to_json(&self) -> Value {
        let ideals = match &self.family {
            IdealFamily::Principal => json!("principal"),
            IdealFamily::All => json!("all"),
            IdealFamily::Listed(ds) => json!(ds),
            IdealFamily::Rect(p, q) => return json!({ "product": [p.to_json(), q.to_json()] }),
        };
        let mut v = json!({ "base": self.base.poset.to_json(), "ideals": ideals });
        if self.base.keep != Keep::All {
            v["keep"] = json!(self.base.keep);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<BPoset> {
        let obj = v.as_object().ok_or_else(|| Error::parse("bposet", "expected an object"))?;
        if let Some(parts) = obj.get("product") {
            check_fields(obj, &["product"], "bposet")?;
            let arr = parts.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::parse("bposet.product", "expected two b-posets"))?;
            return Ok(bposet_product(&BPoset::from_json(&arr[0])?, &BPoset::from_json(&arr[1])?));
        }
        check_fields(obj, &["base", "ideals", "keep"], "bposet")?;
        let poset = Poset::from_json(obj.get("base").ok_or_else(|| Error::parse("bposet.base", "missing"))?)?;
        let keep = match obj.get("keep") {
            None => Keep::All,
            Some(k) => serde_json::from_value(k.clone()).map_err(|e| Error::parse("bposet.keep", e.to_string()))?,
        };
        let family = match obj.get("ideals") {
            None => IdealFamily::Principal,
            Some(Value::String(s)) if s == "principal" => IdealFamily::Principal,
            Some(Value::String(s)) if s == "all" => IdealFamily::All,
            Some(d @ Value::Array(_)) => {
                IdealFamily::Listed(serde_json::from_value(d.clone()).map_err(|e| Error::parse("bposet.ideals", e.to_string()))?)
            }
            Some(_) => return Err(Error::parse("bposet.ideals", "expected \"principal\", \"all\" or a list of ideals")),
        };
        Ok(BPoset { base: Base { poset, keep }, family })
    }
}

/// `PI(A) ⊆ I(A) ⊆ ID(A)` with normalization of duplicates.
pub fn check_bposet(p: &BPoset, bound: Bound) -> Report {
    let depth = bound.depth;
    let exact = p.is_finite();
    let mut r = Report::new("b-poset");
    if let IdealFamily::Rect(a, b) = &p.family {
        r.absorb("left", check_bposet(a, bound));
        r.absorb("right", check_bposet(b, bound));
        return r;
    }
    let probe = p.base.prefix(2 * depth);
    let ds: &[IdealDesc] = match &p.family {
        IdealFamily::Listed(ds) => ds,
        _ => &[],
    };
    let mut lower = None;
    let mut directed = None;
    for d in ds {
        match d {
            IdealDesc::Set(v) => {
                if let Some(e) = v.iter().find(|e| !p.contains(e)) {
                    lower.get_or_insert(json!({ "ideal": d, "reason": "element outside the base", "element": e }));
                    continue;
                }
                if v.is_empty() {
                    directed.get_or_insert(json!({ "ideal": d, "reason": "empty" }));
                }
                let below = v.iter().find_map(|a| probe.iter().find(|b| p.leq(b, a) && !v.contains(b)).map(|b| (a, b)));
                if let Some((a, b)) = below {
                    lower.get_or_insert(json!({ "ideal": d, "above": a, "missing": b }));
                }
                let pair = v.iter().find_map(|a| {
                    v.iter().find(|b| !v.iter().any(|u| p.leq(a, u) && p.leq(b, u))).map(|b| (a.clone(), b.clone()))
                });
                if let Some((a, b)) = pair {
                    directed.get_or_insert(json!({ "ideal": d, "reason": "not directed", "a": a, "b": b }));
                }
            }
            IdealDesc::Chain(s) => {
                if let Err(cx) = p.chain_ok(s, depth) {
                    directed.get_or_insert(json!({ "ideal": d, "detail": cx }));
                }
            }
        }
    }
    r.expect("listed ideals are lower sets", lower.is_none(), exact, depth, || lower.clone().unwrap_or_default());
    r.expect("listed ideals are directed", directed.is_none(), exact, depth, || directed.clone().unwrap_or_default());
    let dup = ds.len().saturating_sub(p.listed(depth).len());
    r.push_detail("no principal duplicates", Verdict::held(exact, depth), format!("{dup} listed ideal(s) normalized away"));
    let sample = p.sample(bound.sample.min(16), depth);
    let mut cx = None;
    'o: for d in &sample {
        for e in &sample {
            if ideal_elem_leq(p, d, e, depth) {
                if let Some(a) = probe.iter().find(|a| ideal_elem_member(p, d, a, depth) && !ideal_elem_member(p, e, a, depth)) {
                    cx = Some(json!({ "smaller": d, "larger": e, "element": a }));
                    break 'o;
                }
            }
        }
    }
    r.expect("inclusion agrees with membership", cx.is_none(), exact, depth, || cx.clone().unwrap_or_default());
    r
}

/// Same presentation with duplicates and principal listings removed.
pub fn normalize(p: &BPoset, depth: usize) -> BPoset {
    match &p.family {
        IdealFamily::Listed(_) => {
            let ls = p.listed(depth);
            if ls.is_empty() {
                return BPoset { base: p.base.clone(), family: IdealFamily::Principal };
            }
            let ds = ls
                .into_iter()
                .filter_map(|e| match e {
                    Elem::Lim(s) => Some(IdealDesc::Chain(*s)),
                    _ => None,
                })
                .collect();
            BPoset { base: p.base.clone(), family: IdealFamily::Listed(ds) }
        }
        IdealFamily::All if p.is_finite() => BPoset { base: p.base.clone(), family: IdealFamily::Principal },
        IdealFamily::Rect(a, b) => bposet_product(&normalize(a, depth), &normalize(b, depth)),
        _ => p.clone(),
    }
}

// ---------------------------------------------------------------------------
// H

/// `H(A, I(A))`: the ideals in `I(A)` under inclusion, with base opens `B(a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HSpace {
    pub p: BPoset,
    pub bound: Bound,
}

impl Carrier for HSpace {
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        ideal_elem_leq(&self.p, a, b, self.bound.depth)
    }

    fn contains(&self, a: &Elem) -> bool {
        self.p.has_ideal(a, self.bound.depth)
    }

    fn prefix(&self, n: usize) -> Vec<Elem> {
        self.p.sample(n, self.bound.depth)
    }

    fn size(&self) -> Option<usize> {
        let s = self.p.base.size()?;
        Some(s + self.p.nonprincipal(self.bound.depth).len())
    }

    fn canon(&self, a: Elem) -> Elem {
        self.p.canon_ideal(&a, self.bound.depth)
    }
}

impl Topo for HSpace {
    fn base(&self, pts: &[Elem]) -> Vec<Open> {
        let mut out = vec![Open::All];
        for q in pts {
            match q {
                Elem::Down(a) => out.push(Open::Has(a.as_ref().clone())),
                Elem::Lim(s) => out.extend((0..8).map(|k| Open::Has(s.at(k)))),
                _ => {}
            }
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|o| seen.insert(o.clone()));
        out
    }

    fn in_open(&self, u: &Open, x: &Elem) -> bool {
        match u {
            Open::All => self.contains(x),
            Open::Has(a) => ideal_elem_member(&self.p, x, a, self.bound.depth),
            Open::Up(a) => self.leq(a, x),
            Open::Set(s) => s.contains(x),
            Open::Meet(us) => us.iter().all(|w| self.in_open(w, x)),
            _ => false,
        }
    }

    fn chains(&self, _pts: &[Elem]) -> Vec<Seq> {
        let mut v: Vec<Seq> = self.p.base.chains(self.bound.depth).into_iter().map(|s| Seq::Down(Box::new(s))).collect();
        v.extend(self.p.nonprincipal(self.bound.depth).into_iter().filter_map(|e| match e {
            Elem::Lim(s) => Some(Seq::Down(s)),
            _ => None,
        }));
        v.sort();
        v.dedup();
        v
    }

    fn describe(&self) -> Value {
        json!({ "h": self.p.to_json() })
    }
}

pub fn functor_h(p: &BPoset, bound: Bound) -> Result<HSpace> {
    let r = check_bposet(p, bound);
    if let Some(c) = r.first_fail() {
        return Err(Error::Precondition(format!("invalid b-poset: {} {}", c.name, c.verdict.label())));
    }
    Ok(HSpace { p: normalize(p, bound.depth), bound })
}

/// `↓f(D)` for an ideal element `D`.
pub fn image_ideal(f: &MapRule, d: &Elem) -> Option<Elem> {
    match d {
        Elem::Down(a) => Some(Elem::down(f.apply_raw(a))),
        Elem::Lim(s) => Some(Elem::lim(Seq::Apply(f.clone(), s.clone()))),
        _ => None,
    }
}

/// `f` is a b-map `P → Q` on sampled elements and ideals.
pub fn check_bmap(f: &MapRule, p: &BPoset, q: &BPoset, bound: Bound) -> Report {
    let depth = bound.depth;
    let exact = p.is_finite() && q.is_finite();
    let mut r = Report::new("b-map");
    let pts = p.base.prefix(2 * depth);
    let cx = pts.iter().find(|a| !q.contains(&f.apply_raw(a)));
    r.expect("into codomain", cx.is_none(), exact, depth, || json!({ "point": cx, "image": cx.map(|a| f.apply_raw(a)) }));
    let mut mono = None;
    'm: for a in pts.iter().take(bound.sample * 2) {
        for b in pts.iter().take(bound.sample * 2) {
            if p.leq(a, b) && !q.leq(&f.apply_raw(a), &f.apply_raw(b)) {
                mono = Some(json!({ "a": a, "b": b }));
                break 'm;
            }
        }
    }
    r.expect("monotone", mono.is_none(), exact, depth, || mono.clone().unwrap_or_default());
    let cx = p.sample(bound.sample, depth).into_iter().find_map(|d| {
        let img = image_ideal(f, &d)?;
        (!q.has_ideal(&img, depth)).then(|| json!({ "ideal": d, "image": img }))
    });
    r.expect("↓f(D) ∈ I(B)", cx.is_none(), exact, depth, || cx.clone().unwrap_or_default());
    r
}

// ---------------------------------------------------------------------------
// G

/// `G(X) = (K(X), {↓x ∩ K(X)})` for an algebraic space.
pub fn functor_g(x: &Space, bound: Bound) -> Result<BPoset> {
    let v = View::new(x, bound);
    let cls = classify_view(&v);
    if cls.kind != Kind::Algebraic {
        return Err(Error::Precondition(format!("not algebraic: classified {:?}", cls.kind)));
    }
    if x.carrier.is_finite() {
        return Ok(BPoset::principal(x.carrier.clone()));
    }
    let keep = match x.topology {
        Topology::Alexandrov => Keep::All,
        Topology::Scott => Keep::ScottCompact,
        _ => return Err(Error::Unsupported(format!("compact elements of {:?} topology", x.topology))),
    };
    let mut p = BPoset { base: Base { poset: x.carrier.clone(), keep }, family: IdealFamily::Principal };
    let chains = x.chains(&v.points);
    let mut ds: Vec<IdealDesc> = Vec::new();
    for q in v.points.iter().filter(|q| !p.contains(q)) {
        let s = chains
            .iter()
            .filter(|s| !s.is_const() && s.prefix(bound.depth).iter().all(|e| p.contains(e)))
            .find(|s| g_sup(x, &Elem::lim((*s).clone()), bound).as_ref() == Some(q))
            .ok_or_else(|| Error::Unsupported(format!("no chain of compact elements with supremum {q}")))?;
        let e = Elem::lim(s.clone());
        let dup = ds.iter().any(|d| matches!(d, IdealDesc::Chain(t) if p.same(&Elem::lim(t.clone()), &e, bound.depth)));
        if !dup {
            ds.push(IdealDesc::Chain(s.clone()));
        }
    }
    if !ds.is_empty() {
        p.family = IdealFamily::Listed(ds);
    }
    Ok(p)
}

/// The point of `X` whose compact approximants form the ideal `e`.
pub fn g_sup(x: &Space, e: &Elem, bound: Bound) -> Option<Elem> {
    match e {
        Elem::Down(a) => Some(a.as_ref().clone()),
        Elem::Lim(s) => make_topological_ideal(x, &Family::Chain(s.as_ref().clone()), bound).ok().map(|t| t.sup),
        _ => None,
    }
}

/// `H(G(X)) ≅ X` on samples.
pub fn check_space_roundtrip(x: &Space, bound: Bound) -> Result<Report> {
    let g = functor_g(x, bound)?;
    let h = functor_h(&g, bound)?;
    let depth = bound.depth;
    let mut r = Report::new("H(G(X)) ≅ X");
    let v = View::new(x, bound);
    let cx = v.points.iter().find(|q| v.compact(q) != g.contains(q));
    r.expect("base of G(X) = K(X)", cx.is_none(), v.exact, depth, || json!({ "point": cx }));
    let listed = h.p.nonprincipal(depth);
    let phi = |q: &Elem| -> Option<Elem> {
        if g.contains(q) {
            return Some(Elem::down(q.clone()));
        }
        listed.iter().find(|l| g_sup(x, l, bound).as_ref() == Some(q)).cloned()
    };
    let psi = |e: &Elem| -> Option<Elem> { g_sup(x, &h.canon(e.clone()), bound) };
    r.absorb("", check_homeomorphism(x, &h, &phi, &psi, bound));
    Ok(r)
}

/// `G(H(P)) ≅ P`: compacts of `H(P)` are the principal ideals and
/// `↓D ∩ K` recovers `D`.
pub fn check_bposet_roundtrip(p: &BPoset, bound: Bound) -> Result<Report> {
    let h = functor_h(p, bound)?;
    let depth = bound.depth;
    let v = View::new(&h, bound);
    let exact = v.exact;
    let mut r = Report::new("G(H(P)) ≅ P");
    let cls = classify_view(&v);
    r.expect("H(P) algebraic", cls.kind == Kind::Algebraic, exact, depth, || json!({ "kind": format!("{:?}", cls.kind), "witness": cls.witness }));
    let cx = v.points.iter().find(|d| v.compact(d) != matches!(d, Elem::Down(_)));
    r.expect("K(H(P)) = principal ideals", cx.is_none(), exact, depth, || json!({ "point": cx }));
    let base_pts = p.base.prefix(bound.sample);
    let mut iso = None;
    'o: for a in &base_pts {
        for b in &base_pts {
            if p.leq(a, b) != h.leq(&Elem::down(a.clone()), &Elem::down(b.clone())) {
                iso = Some(json!({ "a": a, "b": b }));
                break 'o;
            }
        }
    }
    r.expect("a ↦ ↓a is an order isomorphism onto K", iso.is_none(), exact, depth, || iso.clone().unwrap_or_default());
    let probe = p.base.prefix(2 * depth);
    let cx = v.points.iter().find_map(|d| {
        probe
            .iter()
            .find(|a| h.leq(&Elem::down((*a).clone()), d) != ideal_elem_member(&h.p, d, a, depth))
            .map(|a| json!({ "ideal": d, "element": a }))
    });
    r.expect("↓D ∩ K = D", cx.is_none(), exact, depth, || cx.clone().unwrap_or_default());
    let cx = v.points.iter().find(|d| !p.has_ideal(d, depth));
    r.expect("ideals of G(H(P)) lie in I(A)", cx.is_none(), exact, depth, || json!({ "ideal": cx }));
    let cx = p.nonprincipal(depth).into_iter().find(|d| !h.contains(d));
    r.expect("I(A) lies in the ideals of G(H(P))", cx.is_none(), exact, depth, || json!({ "ideal": cx }));
    Ok(r)
}

/// `D ≪ E` in `H(P)` iff `D ⊆ ↓a` for some `a ∈ E`.
pub fn check_h_way_below(p: &BPoset, bound: Bound) -> Result<Report> {
    let h = functor_h(p, bound)?;
    let depth = bound.depth;
    let v = View::new(&h, bound);
    let probe = p.base.prefix(2 * depth);
    let mut cx = None;
    'o: for d in &v.points {
        for e in &v.points {
            let formula = probe.iter().any(|a| ideal_elem_member(&h.p, e, a, depth) && ideal_elem_leq(&h.p, d, &Elem::down(a.clone()), depth));
            if v.wb(d, e) != formula {
                cx = Some(json!({ "d": d, "e": e, "formula": formula }));
                break 'o;
            }
        }
    }
    let mut r = Report::new("way-below in H(P)");
    r.expect("D ≪ E ⇔ ∃a ∈ E. D ⊆ ↓a", cx.is_none(), v.exact, depth, || cx.clone().unwrap_or_default());
    Ok(r)
}

/// Exhaustive roundtrips and functor laws over finite posets up to `max` points.
pub fn roundtrip_finite(max: usize, bound: Bound) -> Report {
    let mut r = Report::new("finite roundtrip");
    let mut space_cx = None;
    let mut bposet_cx = None;
    let mut laws_cx = None;
    for fp in FinitePoset::all_up_to(max) {
        let x = Space::finite(fp.clone());
        let p = BPoset::principal(Poset::Explicit(fp.clone()));
        match check_space_roundtrip(&x, bound) {
            Ok(rep) if rep.passed() => {}
            Ok(rep) => {
                space_cx.get_or_insert(json!({ "poset": fp.to_json(), "check": rep.first_fail().map(|c| c.name.clone()) }));
            }
            Err(e) => {
                space_cx.get_or_insert(json!({ "poset": fp.to_json(), "error": e.to_string() }));
            }
        }
        match check_bposet_roundtrip(&p, bound) {
            Ok(rep) if rep.passed() => {}
            Ok(rep) => {
                bposet_cx.get_or_insert(json!({ "poset": fp.to_json(), "check": rep.first_fail().map(|c| c.name.clone()) }));
            }
            Err(e) => {
                bposet_cx.get_or_insert(json!({ "poset": fp.to_json(), "error": e.to_string() }));
            }
        }
        if fp.size() <= 3 && laws_cx.is_none() {
            laws_cx = functor_law_failure(&fp);
        }
    }
    r.expect("H(G(X)) ≅ X", space_cx.is_none(), true, max, || space_cx.clone().unwrap_or_default());
    r.expect("G(H(P)) ≅ P", bposet_cx.is_none(), true, max, || bposet_cx.clone().unwrap_or_default());
    r.expect("G and H preserve identities and composites", laws_cx.is_none(), true, max.min(3), || laws_cx.clone().unwrap_or_default());
    r
}

fn functor_law_failure(fp: &FinitePoset) -> Option<Value> {
    let n = fp.size();
    let maps = monotone_maps(fp, fp);
    let table = |m: &[usize]| MapRule::Table((0..n).map(|i| (Elem::N(i as u64), Elem::N(m[i] as u64))).collect());
    let h_of = |m: &[usize], i: usize| image_ideal(&table(m), &Elem::down(Elem::N(i as u64)));
    for i in 0..n {
        let id: Vec<usize> = (0..n).collect();
        if h_of(&id, i) != Some(Elem::down(Elem::N(i as u64))) {
            return Some(json!({ "law": "identity", "point": i }));
        }
    }
    for f in &maps {
        for g in &maps {
            let gf: Vec<usize> = (0..n).map(|i| g[f[i]]).collect();
            for i in 0..n {
                let lhs = h_of(&gf, i);
                let mid = h_of(f, i).and_then(|d| image_ideal(&table(g), &d));
                if lhs != mid {
                    return Some(json!({ "law": "composite", "f": f, "g": g, "point": i }));
                }
                // G acts on compacts, which are all points of a finite space
                if gf[i] != g[f[i]] {
                    return Some(json!({ "law": "composite (G)", "f": f, "g": g, "point": i }));
                }
            }
        }
    }
    None
}

/// ω+1 with the Alexandrov topology against ℕ ∪ {ω₁ < ω₂} with the Scott
/// topology: order-isomorphic compacts, non-homeomorphic spaces.
pub fn basis_isomorphic_pair(bound: Bound) -> Result<Report> {
    let x = Space::alexandrov(Poset::omega_plus_one());
    let y = Space::scott(Poset::adjoin_top(Poset::omega_plus_one()));
    let gx = functor_g(&x, bound)?;
    let gy = functor_g(&y, bound)?;
    let depth = bound.depth;
    let mut r = Report::new("basis-isomorphic pair");
    let rename = |e: &Elem| match e {
        Elem::Top(0) => Elem::Top(1),
        other => other.clone(),
    };
    let ks = gx.base.prefix(bound.sample);
    let mut cx = None;
    for a in &ks {
        if !gy.contains(&rename(a)) {
            cx = Some(json!({ "unmatched": a }));
            break;
        }
        for b in &ks {
            if gx.leq(a, b) != gy.leq(&rename(a), &rename(b)) {
                cx = Some(json!({ "a": a, "b": b }));
            }
        }
    }
    let onto = gy.base.prefix(bound.sample).into_iter().find(|b| !ks.iter().any(|a| rename(a) == *b));
    if cx.is_none() {
        if let Some(b) = onto {
            cx = Some(json!({ "not_hit": b }));
        }
    }
    r.expect("K(X) ≅ K(Y)", cx.is_none(), false, depth, || cx.clone().unwrap_or_default());
    let vx = View::new(&x, bound);
    let vy = View::new(&y, bound);
    let nx = vx.points.iter().find(|q| !vx.compact(q)).cloned();
    let ny = vy.points.iter().find(|q| !vy.compact(q)).cloned();
    r.push_detail(
        "X has no non-compact element",
        if nx.is_none() { Verdict::held(false, depth) } else { Verdict::fail(json!({ "point": nx })) },
        "every point of the Alexandrov space is compact",
    );
    r.push_detail(
        "Y has a non-compact element",
        if ny.is_some() { Verdict::held(true, depth) } else { Verdict::fail(json!({ "searched": vy.points.len() })) },
        format!("witness {}", ny.clone().map(|q| q.to_string()).unwrap_or_default()),
    );
    let differ = gx.family == IdealFamily::Principal && !gy.nonprincipal(depth).is_empty();
    r.expect("ideal families differ", differ, false, depth, || json!({ "x": gx.to_json(), "y": gy.to_json() }));
    r.expect("not homeomorphic", nx.is_none() && ny.is_some(), false, depth, || json!({ "x": nx, "y": ny }));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Products

pub fn bposet_product(p: &BPoset, q: &BPoset) -> BPoset {
    let keep = if p.base.keep == Keep::All && q.base.keep == Keep::All {
        Keep::All
    } else {
        Keep::Pair(Box::new(p.base.keep.clone()), Box::new(q.base.keep.clone()))
    };
    let base = Base { poset: Poset::product(p.base.poset.clone(), q.base.poset.clone()), keep };
    let family = if p.family == IdealFamily::Principal && q.family == IdealFamily::Principal {
        IdealFamily::Principal
    } else {
        IdealFamily::Rect(Box::new(p.clone()), Box::new(q.clone()))
    };
    BPoset { base, family }
}

/// Projections, rectangles and pairing for `P × Q` on sampled ideals.
pub fn check_product(p: &BPoset, q: &BPoset, bound: Bound) -> Report {
    let depth = bound.depth;
    let pq = bposet_product(p, q);
    let exact = pq.is_finite();
    let mut r = Report::new("b-poset product");
    let ideals = pq.sample(bound.sample, depth);
    let mut proj = None;
    let mut rect = None;
    for d in &ideals {
        match project(d) {
            Some((a, b)) => {
                if !p.has_ideal(&a, depth) || !q.has_ideal(&b, depth) {
                    proj.get_or_insert(json!({ "ideal": d, "left": a, "right": b }));
                }
                if !pq.same(d, &rectangle(&a, &b), depth) {
                    rect.get_or_insert(json!({ "ideal": d }));
                }
            }
            None => {
                rect.get_or_insert(json!({ "ideal": d, "reason": "no projection" }));
            }
        }
    }
    r.expect("projections are b-maps", proj.is_none(), exact, depth, || proj.clone().unwrap_or_default());
    r.expect("D = π_A D × π_B D", rect.is_none(), exact, depth, || rect.clone().unwrap_or_default());
    let mut pair = None;
    let q0 = q.base.prefix(1).into_iter().next();
    for e in p.sample(bound.sample, depth) {
        let mut imgs = Vec::new();
        if let Some(c) = &q0 {
            imgs.push(rectangle(&e, &Elem::down(c.clone())));
        }
        if p == q {
            imgs.push(match &e {
                Elem::Lim(s) => Elem::lim(Seq::pair(s.as_ref().clone(), s.as_ref().clone())),
                Elem::Down(a) => Elem::down(Elem::pair(a.as_ref().clone(), a.as_ref().clone())),
                other => other.clone(),
            });
        }
        if let Some(img) = imgs.into_iter().find(|i| !pq.has_ideal(i, depth)) {
            pair = Some(json!({ "ideal": e, "image": img }));
            break;
        }
    }
    r.expect("pairing is a b-map", pair.is_none(), exact, depth, || pair.clone().unwrap_or_default());
    r
}

/// Universal property of the product over all posets up to `max` points.
pub fn product_universal_finite(max: usize) -> Report {
    let ps = FinitePoset::all_up_to(max);
    let mut cx = None;
    let mut proj = None;
    let mut cases = 0usize;
    'o: for a in &ps {
        for b in &ps {
            let ab = a.product(b);
            let m = b.size();
            for i in 0..ab.size() {
                for j in 0..ab.size() {
                    if ab.leq(i, j) && !(a.leq(i / m, j / m) && b.leq(i % m, j % m)) {
                        proj.get_or_insert(json!({ "a": a.to_json(), "b": b.to_json(), "i": i, "j": j }));
                    }
                }
            }
            for c in &ps {
                let fa = monotone_maps(c, a);
                let fb = monotone_maps(c, b);
                for f1 in &fa {
                    for f2 in &fb {
                        cases += 1;
                        // candidates for h(z) are the product points projecting to (f1 z, f2 z)
                        let cands: Vec<Vec<usize>> = (0..c.size())
                            .map(|z| (0..ab.size()).filter(|&k| k / m == f1[z] && k % m == f2[z]).collect())
                            .collect();
                        let mut count = 0usize;
                        let mut h = vec![0; c.size()];
                        count_maps(c, &ab, &cands, 0, &mut h, &mut count);
                        if count != 1 {
                            cx = Some(json!({ "c": c.to_json(), "a": a.to_json(), "b": b.to_json(), "f1": f1, "f2": f2, "mediating": count }));
                            break 'o;
                        }
                    }
                }
            }
        }
    }
    let mut r = Report::new("product universal property");
    r.expect("projections are b-maps", proj.is_none(), true, max, || proj.clone().unwrap_or_default());
    r.push_detail(
        "unique mediating map",
        if cx.is_none() { Verdict::held(true, max) } else { Verdict::fail(cx.clone().unwrap_or_default()) },
        format!("{cases} cone(s) checked"),
    );
    r
}

fn count_maps(dom: &FinitePoset, cod: &FinitePoset, cands: &[Vec<usize>], i: usize, h: &mut Vec<usize>, count: &mut usize) {
    if i == dom.size() {
        *count += 1;
        return;
    }
    for &v in &cands[i] {
        if (0..i).all(|j| (!dom.leq(j, i) || cod.leq(h[j], v)) && (!dom.leq(i, j) || cod.leq(v, h[j]))) {
            h[i] = v;
            count_maps(dom, cod, cands, i + 1, h, count);
        }
    }
}

// ---------------------------------------------------------------------------
// Exponentials

/// Lower sets of a finite poset as bitmasks, or `None` past `budget`.
pub fn lower_sets(p: &FinitePoset, budget: usize) -> Option<Vec<u64>> {
    let n = p.size();
    if n > 64 {
        return None;
    }
    let below: Vec<u64> = (0..n).map(|i| p.down(i).into_iter().filter(|&j| j != i).fold(0u64, |m, j| m | 1 << j)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| below[i].count_ones());
    let mut out = Vec::new();
    fn go(k: usize, order: &[usize], below: &[u64], cur: u64, out: &mut Vec<u64>, budget: usize) -> bool {
        if out.len() > budget {
            return false;
        }
        if k == order.len() {
            out.push(cur);
            return true;
        }
        let i = order[k];
        if !go(k + 1, order, below, cur, out, budget) {
            return false;
        }
        if below[i] & !cur == 0 {
            return go(k + 1, order, below, cur | 1 << i, out, budget);
        }
        true
    }
    go(0, &order, &below, 0, &mut out, budget).then_some(out)
}

fn mask_directed(p: &FinitePoset, m: u64) -> bool {
    let items: Vec<usize> = (0..p.size()).filter(|&i| m >> i & 1 == 1).collect();
    !items.is_empty() && items.iter().all(|&a| items.iter().all(|&b| items.iter().any(|&u| p.leq(a, u) && p.leq(b, u))))
}

fn mask_principal(p: &FinitePoset, m: u64) -> bool {
    (0..p.size()).any(|t| m >> t & 1 == 1 && (0..p.size()).all(|i| m >> i & 1 == 0 || p.leq(i, t)))
}

const IDEAL_BUDGET: usize = 1 << 20;

/// `(B^A, J)` for finite bases.
#[derive(Clone, Debug)]
pub struct FiniteExponential {
    pub dom: FinitePoset,
    pub cod: FinitePoset,
    pub maps: Vec<Vec<usize>>,
    pub order: FinitePoset,
    /// Members of `J`, as bitmasks over `maps`.
    pub family: Vec<u64>,
    /// Number of ideals of `B^A`.
    pub ideals: usize,
    pub principal: usize,
    /// Whether every candidate ideal was enumerated.
    pub exact: bool,
}

fn finite_base(p: &BPoset) -> Result<(Vec<Elem>, FinitePoset)> {
    let elems = p.base.elements().ok_or_else(|| Error::Unsupported("exponential of a presented base needs a map-family rule".into()))?;
    let fp = FinitePoset::of_carrier(&p.base, &elems);
    Ok((elems, fp))
}

pub fn bposet_exponential(p: &BPoset, q: &BPoset) -> Result<FiniteExponential> {
    let (_, a) = finite_base(p)?;
    let (_, b) = finite_base(q)?;
    Ok(finite_exponential(&a, &b))
}

pub fn finite_exponential(a: &FinitePoset, b: &FinitePoset) -> FiniteExponential {
    let maps = monotone_maps(a, b);
    let order = FinitePoset::from_fn(maps.len(), |i, j| (0..a.size()).all(|x| b.leq(maps[i][x], maps[j][x])));
    let (cands, exact) = match lower_sets(&order, IDEAL_BUDGET) {
        Some(ls) => (ls.into_iter().filter(|&m| mask_directed(&order, m)).collect::<Vec<u64>>(), true),
        None => ((0..order.size()).map(|t| order.down(t).into_iter().fold(0u64, |m, i| m | 1 << i)).collect(), false),
    };
    let principal = cands.iter().filter(|&&m| mask_principal(&order, m)).count();
    // ↓ev(D × ↓x) must be a principal ideal of B for every x
    let family: Vec<u64> = cands
        .iter()
        .copied()
        .filter(|&m| {
            (0..a.size()).all(|x| {
                let mut img = 0u64;
                for g in (0..maps.len()).filter(|&g| m >> g & 1 == 1) {
                    for y in a.down(x) {
                        img |= 1 << maps[g][y];
                    }
                }
                let lower = (0..b.size()).filter(|&v| (0..b.size()).any(|u| img >> u & 1 == 1 && b.leq(v, u))).fold(0u64, |s, v| s | 1 << v);
                mask_principal(b, lower)
            })
        })
        .collect();
    FiniteExponential { dom: a.clone(), cod: b.clone(), maps, order, family, ideals: cands.len(), principal, exact }
}

/// Family, evaluation and currying for `(B^A, J)`.
pub fn check_exponential_finite(e: &FiniteExponential) -> Report {
    let mut r = Report::new("b-poset exponential");
    let n = e.maps.len();
    let label = |exact: bool| if exact { "all ideal candidates enumerated" } else { "principal candidates only" };
    let pi_in = (0..n).all(|t| e.family.contains(&e.order.down(t).into_iter().fold(0u64, |m, i| m | 1 << i)));
    r.push_detail(
        "PI(B^A) ⊆ J",
        if pi_in { Verdict::held(e.exact, n) } else { Verdict::fail(json!({ "maps": n })) },
        label(e.exact),
    );
    r.expect("J = ID(B^A)", e.family.len() == e.ideals, e.exact, n, || json!({ "family": e.family.len(), "ideals": e.ideals }));
    r.expect("J = PI(B^A)", e.family.len() == e.principal, e.exact, n, || json!({ "family": e.family.len(), "principal": e.principal }));
    let mut ev = None;
    'o: for f in 0..n {
        for g in 0..n {
            for x in 0..e.dom.size() {
                for y in 0..e.dom.size() {
                    if e.order.leq(f, g) && e.dom.leq(x, y) && !e.cod.leq(e.maps[f][x], e.maps[g][y]) {
                        ev = Some(json!({ "f": e.maps[f], "g": e.maps[g], "x": x, "y": y }));
                        break 'o;
                    }
                }
            }
        }
    }
    r.expect("ev monotone", ev.is_none(), true, n, || ev.clone().unwrap_or_default());
    r
}

/// Currying over all test posets `C` up to `max` points.
pub fn curry_failure(e: &FiniteExponential, tests: &[FinitePoset]) -> Option<Value> {
    let index: HashMap<&[usize], usize> = e.maps.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let na = e.dom.size();
    for c in tests {
        let ca = c.product(&e.dom);
        for f in monotone_maps(&ca, &e.cod) {
            let mut h = Vec::with_capacity(c.size());
            for z in 0..c.size() {
                let row: Vec<usize> = (0..na).map(|x| f[z * na + x]).collect();
                let hits = e.maps.iter().filter(|m| **m == row).count();
                if hits != 1 {
                    return Some(json!({ "c": c.to_json(), "f": f, "z": z, "curried": hits }));
                }
                h.push(index[row.as_slice()]);
            }
            for z in 0..c.size() {
                for w in 0..c.size() {
                    if c.leq(z, w) && !e.order.leq(h[z], h[w]) {
                        return Some(json!({ "c": c.to_json(), "f": f, "reason": "curried map not monotone" }));
                    }
                }
                for x in 0..na {
                    if e.maps[h[z]][x] != f[z * na + x] {
                        return Some(json!({ "c": c.to_json(), "f": f, "reason": "ev ∘ (h × id) ≠ f" }));
                    }
                }
            }
        }
    }
    None
}

/// Exponentials over all bases up to `max` points: family, `ev` and currying.
pub fn exponential_universal_finite(max: usize) -> Report {
    let ps = FinitePoset::all_up_to(max);
    let mut r = Report::new("exponential universal property");
    let mut fam = None;
    let mut ev = None;
    let mut curry = None;
    let mut exact = true;
    let mut cases = 0usize;
    for a in &ps {
        for b in &ps {
            let e = finite_exponential(a, b);
            exact &= e.exact;
            let rep = check_exponential_finite(&e);
            if fam.is_none() && (rep.check("J = PI(B^A)").is_some_and(|c| c.verdict.is_fail()) || rep.check("PI(B^A) ⊆ J").is_some_and(|c| c.verdict.is_fail())) {
                fam = Some(json!({ "a": a.to_json(), "b": b.to_json() }));
            }
            if ev.is_none() && rep.check("ev monotone").is_some_and(|c| c.verdict.is_fail()) {
                ev = Some(json!({ "a": a.to_json(), "b": b.to_json() }));
            }
            if curry.is_none() {
                curry = curry_failure(&e, &ps);
            }
            cases += 1;
        }
    }
    r.push_detail(
        "J = PI = ID",
        match &fam {
            None => Verdict::held(exact, max),
            Some(cx) => Verdict::fail(cx.clone()),
        },
        format!("{cases} exponential(s)"),
    );
    r.expect("ev is a b-map", ev.is_none(), true, max, || ev.clone().unwrap_or_default());
    r.expect("currying is a bijection", curry.is_none(), true, max, || curry.clone().unwrap_or_default());
    r
}

/// The ℕ/B exponential under the chain and the discrete reading of ℕ.
pub fn nat_b_example(bound: Bound) -> Report {
    let depth = bound.depth.clamp(2, 64);
    let mut r = Report::new("ℕ/B exponential");
    let c2 = FinitePoset::chain(2);
    // chain reading: truncations of ℕ are chains
    let mut chain_cx = None;
    for d in 1..=depth.min(16) {
        let e = finite_exponential(&FinitePoset::chain(d), &c2);
        let total = (0..e.order.size()).all(|i| (0..e.order.size()).all(|j| e.order.leq(i, j) || e.order.leq(j, i)));
        if e.maps.len() != d + 1 || !total || e.principal != e.ideals || e.family.len() != e.ideals {
            chain_cx = Some(json!({ "truncation": d, "maps": e.maps.len(), "ideals": e.ideals, "principal": e.principal }));
            break;
        }
    }
    r.push_detail(
        "chain reading: ID(ℕ^B) = PI(ℕ^B)",
        if chain_cx.is_none() { Verdict::held(false, depth) } else { Verdict::fail(chain_cx.clone().unwrap_or_default()) },
        "maps are thresholds forming a reversed chain with bottom; every directed subset has a maximum",
    );
    // discrete reading: maps are all subsets; χ_[0,n) generates a non-principal ideal
    let chi = |n: usize| -> Vec<bool> { (0..=depth).map(|i| i < n).collect() };
    let le = |f: &[bool], g: &[bool]| f.iter().zip(g).all(|(a, b)| !a || *b);
    let mut anti_cx = None;
    for n in 0..depth {
        if !le(&chi(n), &chi(n + 1)) || le(&chi(n + 1), &chi(n)) {
            anti_cx = Some(json!({ "n": n }));
            break;
        }
    }
    let ev_principal = (0..depth).all(|x| {
        let vals: Vec<bool> = (0..=depth).map(|n| chi(n)[x]).collect();
        vals.contains(&true)
    });
    r.push_detail(
        "antichain reading: ID(ℕ^B) ≠ PI(ℕ^B)",
        if anti_cx.is_none() && ev_principal { Verdict::held(false, depth) } else { Verdict::fail(anti_cx.clone().unwrap_or_default()) },
        "the ideal of finitely supported maps has no maximum; ↓ev(D × {n}) = B is principal",
    );
    r
}

// ---------------------------------------------------------------------------
// Reflection and sobrification

/// `(A, ID(A))`.
pub fn reflect(p: &BPoset) -> Result<BPoset> {
    let family = if p.is_finite() { IdealFamily::Principal } else { IdealFamily::All };
    if matches!(p.base.poset, Poset::Dyadic) && p.base.keep != Keep::All {
        return Err(Error::Unsupported("ideals of the compact dyadics".into()));
    }
    Ok(BPoset { base: p.base.clone(), family })
}

/// Extension of a b-map `f: P → T` along the unit `P → reflect(P)`.
pub fn check_reflection(p: &BPoset, target: &BPoset, f: &MapRule, bound: Bound) -> Result<Report> {
    let rp = reflect(p)?;
    let mut r = Report::new("reflection");
    r.absorb("f", check_bmap(f, p, target, bound));
    let complete = target.is_finite() || target.family == IdealFamily::All;
    r.expect("target ideal-complete", complete, target.is_finite(), bound.depth, || target.to_json());
    r.absorb("unit", check_bmap(&MapRule::Id, p, &rp, bound));
    r.absorb("extension", check_bmap(f, &rp, target, bound));
    r.push_detail(
        "extension unique",
        Verdict::held(true, bound.depth),
        "the unit is the identity on A, so any extension has underlying map f",
    );
    Ok(r)
}

/// `H(A, ID(A))`.
pub fn sobrification(p: &BPoset, bound: Bound) -> Result<HSpace> {
    functor_h(&reflect(p)?, bound)
}

/// `sobrification(P) ≅ X` with `phi(x) = ↓x ∩ A` on compacts and the
/// chain ideal otherwise.
pub fn check_sobrification(p: &BPoset, x: &Space, bound: Bound) -> Result<Report> {
    let h = sobrification(p, bound)?;
    let depth = bound.depth;
    let ideals = h.p.nonprincipal(depth);
    let phi = |q: &Elem| -> Option<Elem> {
        if p.contains(q) {
            return Some(Elem::down(q.clone()));
        }
        ideals.iter().find(|l| g_sup(x, l, bound).as_ref() == Some(q)).cloned()
    };
    let psi = |e: &Elem| g_sup(x, &h.canon(e.clone()), bound);
    let mut r = check_homeomorphism(x, &h, &phi, &psi, bound);
    r.subject = "sobrification".into();
    let base = normalize(p, depth);
    r.push_detail(
        "independent of I(A)",
        Verdict::held(p.is_finite(), depth),
        format!("every b-poset on base {} has this sobrification", base.base.poset.to_json()),
    );
    Ok(r)
}

/// `classify` of `H(P)`, exposed for the CLI.
pub fn classify_h(p: &BPoset, bound: Bound) -> Result<Kind> {
    Ok(classify(&functor_h(p, bound)?, bound).kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega_listed() -> BPoset {
        BPoset::with_chains(Poset::Omega, vec![Seq::nat()])
    }

    #[test]
    fn check_examples() {
        let b = Bound::default();
        assert!(check_bposet(&omega_listed(), b).passed());
        assert!(check_bposet(&BPoset::principal(Poset::Chain(2)), b).passed());
        let bad = BPoset {
            base: Base::all(Poset::Antichain(2)),
            family: IdealFamily::Listed(vec![IdealDesc::Set(vec![Elem::N(0), Elem::N(1)])]),
        };
        let r = check_bposet(&bad, b);
        assert!(r.check("listed ideals are directed").unwrap().verdict.is_fail());
        let not_lower = BPoset { base: Base::all(Poset::Chain(2)), family: IdealFamily::Listed(vec![IdealDesc::Set(vec![Elem::N(1)])]) };
        assert!(check_bposet(&not_lower, b).check("listed ideals are lower sets").unwrap().verdict.is_fail());
        let dup = BPoset::with_chains(Poset::Omega, vec![Seq::nat(), Seq::Nat { from: 3 }, Seq::Const(Elem::N(2))]);
        assert_eq!(normalize(&dup, 64).listed(64).len(), 1);
    }

    #[test]
    fn g_examples() {
        let b = Bound::default();
        let g = functor_g(&Space::omega_plus_one(), b).unwrap();
        assert!(!g.contains(&Elem::top()));
        assert!(g.contains(&Elem::N(7)));
        assert_eq!(g.listed(64).len(), 1);
        assert!(g.has_ideal(&Elem::lim(Seq::nat()), 64));
        let a = functor_g(&Space::alexandrov(Poset::flat_nat_top()), b).unwrap();
        assert_eq!(a.family, IdealFamily::Principal);
        assert!(a.contains(&Elem::top()));
        let f = functor_g(&Space::finite(FinitePoset::chain(3)), b).unwrap();
        assert_eq!(f, BPoset::principal(Poset::Explicit(FinitePoset::chain(3))));
        assert!(functor_g(&Space::flat_nat_top_upper(), b).is_err());
    }

    #[test]
    fn h_examples() {
        let b = Bound::default();
        let r = check_space_roundtrip(&Space::omega_plus_one(), b).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = check_bposet_roundtrip(&omega_listed(), b).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = check_space_roundtrip(&Space::alexandrov(Poset::flat_nat_top()), b).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = check_h_way_below(&omega_listed(), b).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn finite_roundtrip_up_to_three() {
        let r = roundtrip_finite(3, Bound::default());
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn pair_is_not_homeomorphic() {
        let r = basis_isomorphic_pair(Bound::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn products() {
        let b = Bound::default();
        let c2 = BPoset::principal(Poset::Chain(2));
        assert_eq!(bposet_product(&c2, &c2).family, IdealFamily::Principal);
        let w = omega_listed();
        let ww = bposet_product(&w, &w);
        assert!(ww.has_ideal(&Elem::lim(Seq::pair(Seq::Const(Elem::N(3)), Seq::nat())), 64));
        assert!(ww.has_ideal(&Elem::lim(Seq::pair(Seq::nat(), Seq::nat())), 64));
        assert!(ww.has_ideal(&Elem::down(Elem::pair(Elem::N(1), Elem::N(2))), 64));
        let wp = BPoset::principal(Poset::Omega);
        assert!(!bposet_product(&wp, &wp).has_ideal(&Elem::lim(Seq::pair(Seq::nat(), Seq::Const(Elem::N(0)))), 64));
        assert!(check_product(&w, &w, b).passed());
        let r = product_universal_finite(2);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn exponential_of_two_chains() {
        let c2 = BPoset::principal(Poset::Chain(2));
        let e = bposet_exponential(&c2, &c2).unwrap();
        assert_eq!(e.maps.len(), 3);
        assert!(e.order.is_isomorphic(&FinitePoset::chain(3)));
        assert_eq!(e.family.len(), 3);
        assert!(check_exponential_finite(&e).passed());
        assert!(curry_failure(&e, &FinitePoset::all_up_to(2)).is_none());
        let all = BPoset::ideal_complete(Poset::Chain(2));
        let e = bposet_exponential(&all, &all).unwrap();
        assert_eq!(e.family.len(), e.ideals);
        assert!(bposet_exponential(&omega_listed(), &c2).is_err());
    }

    #[test]
    fn lower_set_counts() {
        assert_eq!(lower_sets(&FinitePoset::antichain(3), 100).unwrap().len(), 8);
        assert_eq!(lower_sets(&FinitePoset::chain(3), 100).unwrap().len(), 4);
        assert!(lower_sets(&FinitePoset::antichain(10), 100).is_none());
    }

    #[test]
    fn nat_b_both_readings() {
        let r = nat_b_example(Bound::default());
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn reflection_and_sobrification() {
        let b = Bound::default();
        let wp = BPoset::principal(Poset::Omega);
        let rp = reflect(&wp).unwrap();
        assert!(rp.has_ideal(&Elem::lim(Seq::nat()), 64));
        assert_eq!(reflect(&BPoset::principal(Poset::Chain(3))).unwrap().family, IdealFamily::Principal);
        for f in [MapRule::Id, MapRule::Double, MapRule::Succ, MapRule::Const(Elem::N(3))] {
            let r = check_reflection(&wp, &BPoset::ideal_complete(Poset::Omega), &f, b).unwrap();
            assert!(r.passed(), "{f:?}: {}", r.to_text());
        }
        for p in [wp, omega_listed()] {
            let r = check_sobrification(&p, &Space::omega_plus_one(), b).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
        let h = functor_h(&BPoset::principal(Poset::Omega), b).unwrap();
        let phi = |q: &Elem| Some(if *q == Elem::top() { Elem::lim(Seq::nat()) } else { Elem::down(q.clone()) });
        let psi = |e: &Elem| g_sup(&Space::omega_plus_one(), e, b);
        assert!(!check_homeomorphism(&Space::omega_plus_one(), &h, &phi, &psi, b).passed());
        let fin = BPoset::principal(Poset::Explicit(FinitePoset::chain(3)));
        let r = check_sobrification(&fin, &Space::finite(FinitePoset::chain(3)), b).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn json_roundtrip() {
        let p = omega_listed();
        assert_eq!(BPoset::from_json(&p.to_json()).unwrap(), p);
        let g = functor_g(&Space::omega_plus_one(), Bound::default()).unwrap();
        assert_eq!(BPoset::from_json(&g.to_json()).unwrap(), g);
        assert!(BPoset::from_json(&json!({ "base": { "kind": "omega" }, "ideals": 3 })).is_err());
    }
}
