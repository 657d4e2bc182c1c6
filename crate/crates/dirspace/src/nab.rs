//! Normal abstract bases, their spaces, normal maps and the exponential of
//! finite continuous spaces.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elem::Elem;
use crate::order::{check_fields, monotone_maps, Carrier, FinitePoset, MapRule, Poset};
use crate::report::{Bound, Error, Report, Result, Verdict};
use crate::space::{classify_view, same_opens, Kind, Space, Topology, View};

/// The relation `≺` of an abstract basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prec {
    /// `≺ = ≤`.
    Leq,
    /// `a < b`.
    #[serde(alias = "strict_order")]
    Strict,
    /// `a < b`, or `a = b` is the least element.
    #[serde(alias = "rational_interval")]
    Interval,
    /// `a ≤ b` with `a` compact.
    CompactBelow,
    #[serde(alias = "tabulated")]
    Table(Vec<(Elem, Elem)>),
}

fn is_least(e: &Elem) -> bool {
    matches!(e, Elem::Dy(0, _) | Elem::Bot(_))
}

impl Prec {
    pub fn holds(&self, p: &Poset, a: &Elem, b: &Elem) -> bool {
        match self {
            Prec::Leq => p.leq(a, b),
            Prec::Strict => a != b && p.leq(a, b),
            Prec::Interval => p.leq(a, b) && (a != b || is_least(a) || minimum_of(p).as_ref() == Some(a)),
            Prec::CompactBelow => p.leq(a, b) && p.scott_compact(a),
            Prec::Table(t) => t.iter().any(|(x, y)| x == a && y == b),
        }
    }
}

fn minimum_of(p: &Poset) -> Option<Elem> {
    match p {
        Poset::Omega | Poset::Chain(_) => Some(Elem::N(0)),
        Poset::AdjoinTop(q) => minimum_of(q),
        _ => None,
    }
}

/// An abstract basis `(A, ≤, ≺)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nab {
    pub poset: Poset,
    pub prec: Prec,
}

impl Nab {
    pub fn new(poset: Poset, prec: Prec) -> Nab {
        Nab { poset, prec }
    }

    pub fn prec(&self, a: &Elem, b: &Elem) -> bool {
        self.prec.holds(&self.poset, a, b)
    }

    pub fn dyadic() -> Nab {
        Nab::new(Poset::Dyadic, Prec::Interval)
    }

    pub fn from_json(v: &Value) -> Result<Nab> {
        let obj = v.as_object().ok_or_else(|| Error::parse("nab", "expected an object"))?;
        check_fields(obj, &["poset", "prec"], "nab")?;
        let poset = Poset::from_json(obj.get("poset").ok_or_else(|| Error::parse("nab", "missing field \"poset\""))?)
            .map_err(|e| match e {
                Error::Parse { node, msg } => Error::parse(format!("nab.{node}"), msg),
                other => other,
            })?;
        let prec = match obj.get("prec") {
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::parse("nab.prec", e.to_string()))?,
            None => Prec::Leq,
        };
        if let Prec::Table(t) = &prec {
            if let Some((a, b)) = t.iter().find(|(a, b)| !poset.contains(a) || !poset.contains(b)) {
                return Err(Error::parse("nab.prec.table", format!("pair ({a}, {b}) is outside the carrier")));
            }
        }
        Ok(Nab { poset, prec })
    }

    pub fn to_json(&self) -> Value {
        json!({ "poset": self.poset.to_json(), "prec": self.prec })
    }
}

fn subsets_upto(items: &[Elem], k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for it in items {
        let more: Vec<Vec<Elem>> = out
            .iter()
            .filter(|s| s.len() < k)
            .map(|s| {
                let mut t = s.clone();
                t.push(it.clone());
                t
            })
            .collect();
        out.extend(more);
    }
    out
}

/// Transitivity, interpolation, `≺ ⊆ ≤`, compatibility and separation.
pub fn check_nab(a: &Nab, bound: Bound) -> Report {
    let exact = a.poset.is_finite();
    let (pts, pool) = match a.poset.elements() {
        Some(all) => (all.clone(), all),
        None => (a.poset.prefix(bound.sample), a.poset.prefix(bound.depth.max(bound.sample))),
    };
    let held = |ok: bool, cx: Option<Value>| if ok { Verdict::held(exact, bound.depth) } else { Verdict::fail(cx.unwrap_or_default()) };
    let missing = |v: Value| if exact { v } else { json!({ "unverified_at_bound": bound.depth, "instance": v }) };
    let p = |x: &Elem, y: &Elem| a.prec(x, y);
    let mut r = Report::new("normal abstract basis");

    let mut cx = None;
    'tr: for x in &pts {
        for y in pts.iter().filter(|y| p(x, y)) {
            for z in pts.iter().filter(|z| p(y, z)) {
                if !p(x, z) {
                    cx = Some(json!({ "a": x, "b": y, "c": z }));
                    break 'tr;
                }
            }
        }
    }
    r.push("transitive", held(cx.is_none(), cx));

    let ms = if exact && pts.len() <= 10 { subsets_upto(&pts, pts.len()) } else { subsets_upto(&pts, 2) };
    let mut cx = None;
    'ip: for m in &ms {
        for z in pts.iter().filter(|z| m.iter().all(|x| p(x, z))) {
            if !pool.iter().any(|y| p(y, z) && m.iter().all(|x| p(x, y))) {
                cx = Some(missing(json!({ "M": m, "z": z, "reason": "no interpolant" })));
                break 'ip;
            }
        }
    }
    r.push("interpolation", held(cx.is_none(), cx));

    let cx = pts
        .iter()
        .flat_map(|x| pts.iter().map(move |y| (x, y)))
        .find(|(x, y)| p(x, y) && !a.poset.leq(x, y))
        .map(|(x, y)| json!({ "a": x, "b": y }));
    r.push("≺ ⊆ ≤", held(cx.is_none(), cx));

    let mut cx = None;
    'cp: for b in &pts {
        for c in pts.iter().filter(|c| p(b, c)) {
            for x in pts.iter().filter(|x| a.poset.leq(x, b)) {
                for d in pts.iter().filter(|d| a.poset.leq(c, d)) {
                    if !p(x, d) {
                        cx = Some(json!({ "a": x, "b": b, "c": c, "d": d }));
                        break 'cp;
                    }
                }
            }
        }
    }
    r.push("a ≤ b ≺ c ≤ d ⇒ a ≺ d", held(cx.is_none(), cx));

    let mut cx = None;
    'sp: for x in &pts {
        for y in pts.iter().filter(|y| !a.poset.leq(x, y)) {
            if !pool.iter().any(|c| p(c, x) && !p(c, y)) {
                cx = Some(missing(json!({ "a": x, "b": y, "reason": "no separating c" })));
                break 'sp;
            }
        }
    }
    r.push("separation", held(cx.is_none(), cx));
    r
}

/// The space with base `{↟a}`.
pub fn nab_space(a: &Nab, bound: Bound) -> Result<Space> {
    let r = check_nab(a, bound);
    if let Some(c) = r.first_fail() {
        return Err(Error::Precondition(format!("not a normal abstract basis: {} fails ({})", c.name, serde_json::to_string(&c.verdict).unwrap_or_default())));
    }
    Ok(Space::new(a.poset.clone(), Topology::Nab(a.prec.clone())))
}

/// `(X, ⊑, ≪)` for a continuous space.
pub fn space_to_nab(x: &Space, bound: Bound) -> Result<Nab> {
    let v = View::new(x, bound);
    let cls = classify_view(&v);
    if cls.kind < Kind::Continuous {
        return Err(Error::Precondition(format!("space is not continuous (classified {:?})", cls.kind)));
    }
    if v.exact {
        let mut t = Vec::new();
        for a in &v.points {
            for b in &v.points {
                if v.wb(a, b) {
                    t.push((a.clone(), b.clone()));
                }
            }
        }
        return Ok(Nab::new(x.carrier.clone(), Prec::Table(t)));
    }
    match &x.topology {
        Topology::Nab(p) => Ok(Nab::new(x.carrier.clone(), p.clone())),
        Topology::Scott if cls.kind == Kind::Algebraic => Ok(Nab::new(x.carrier.clone(), Prec::CompactBelow)),
        Topology::Scott if x.carrier == Poset::Dyadic => Ok(Nab::new(x.carrier.clone(), Prec::Interval)),
        _ => Err(Error::Unsupported("no rule for the way-below relation of this presented space".into())),
    }
}

/// `nab_space ∘ space_to_nab` reproduces the opens, and `≪` agrees with `≺`.
pub fn check_roundtrip(x: &Space, bound: Bound) -> Result<Report> {
    let a = space_to_nab(x, bound)?;
    let y = nab_space(&a, bound)?;
    let mut r = Report::new("nab roundtrip");
    r.absorb("", check_nab(&a, bound));
    let exact = x.carrier.is_finite();
    let same = same_opens(x, &y, bound);
    r.expect("same opens", same.is_ok(), exact, bound.depth, || json!({ "differs_on": same.clone().err() }));
    r.absorb("", wb_agrees(&a, bound)?);
    Ok(r)
}

/// `≪` of the induced space agrees with `≺` on samples.
pub fn wb_agrees(a: &Nab, bound: Bound) -> Result<Report> {
    let s = nab_space(a, bound)?;
    let v = View::new(&s, bound);
    let mut cx = None;
    'w: for x in &v.points {
        for y in &v.points {
            if v.wb(x, y) != a.prec(x, y) {
                cx = Some(json!({ "a": x, "b": y, "way_below": v.wb(x, y), "prec": a.prec(x, y) }));
                break 'w;
            }
        }
    }
    let mut r = Report::new("≪ = ≺");
    r.expect("≪ = ≺", cx.is_none(), v.exact, bound.depth, || cx.clone().unwrap_or_default());
    Ok(r)
}

/// `≤`- and `≺`-preservation and lifting for `f: A → B`.
pub fn check_normal_map(f: &MapRule, a: &Nab, b: &Nab, bound: Bound) -> Report {
    let exact = a.poset.is_finite() && b.poset.is_finite();
    let (pts, pool) = match a.poset.elements() {
        Some(all) => (all.clone(), all),
        None => (a.poset.prefix(bound.sample), a.poset.prefix(bound.depth.max(bound.sample))),
    };
    let img: Vec<Elem> = pts.iter().map(|x| f.apply_raw(x)).collect();
    let pool_img: Vec<Elem> = pool.iter().map(|x| f.apply_raw(x)).collect();
    let mut ys = match b.poset.elements() {
        Some(all) => all,
        None => b.poset.prefix(bound.sample),
    };
    ys.extend(img.iter().cloned());
    ys.sort();
    ys.dedup();
    let mut r = Report::new("normal map");
    let held = |ok: bool, cx: Option<Value>| if ok { Verdict::held(exact, bound.depth) } else { Verdict::fail(cx.unwrap_or_default()) };

    let cx = img
        .iter()
        .zip(&pts)
        .find(|(y, _)| !b.poset.contains(y))
        .map(|(y, x)| json!({ "x": x, "f(x)": y, "reason": "image outside codomain" }));
    r.push("into codomain", held(cx.is_none(), cx));

    let mut le = None;
    let mut pr = None;
    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate() {
            if le.is_none() && a.poset.leq(x, y) && !b.poset.leq(&img[i], &img[j]) {
                le = Some(json!({ "x": x, "y": y, "f(x)": img[i], "f(y)": img[j] }));
            }
            if pr.is_none() && a.prec(x, y) && !b.prec(&img[i], &img[j]) {
                pr = Some(json!({ "x": x, "y": y, "f(x)": img[i], "f(y)": img[j] }));
            }
        }
    }
    r.push("preserves ≤", held(le.is_none(), le));
    r.push("preserves ≺", held(pr.is_none(), pr));

    let mut lift = None;
    'l: for (i, x) in pts.iter().enumerate() {
        for y in ys.iter().filter(|y| b.prec(y, &img[i])) {
            let ok = pool.iter().zip(&pool_img).any(|(z, fz)| a.prec(z, x) && b.prec(y, fz));
            if !ok {
                lift = Some(json!({ "x": x, "y": y, "f(x)": img[i], "reason": "no z ≺ x with y ≺ f(z)" }));
                break 'l;
            }
        }
    }
    r.push("lifting", held(lift.is_none(), lift));
    r
}

/// Way-below preservation and continuity of the induced map of spaces.
pub fn induced_map_report(f: &MapRule, a: &Nab, b: &Nab, bound: Bound) -> Result<Report> {
    let sa = nab_space(a, bound)?;
    let sb = nab_space(b, bound)?;
    let va = View::new(&sa, bound);
    let vb = View::new(&sb, bound);
    let g = |x: &Elem| f.apply_raw(x);
    let mut r = Report::new("induced map");
    let cont = crate::space::continuity_failure_of(&g, &sa, &sb, bound);
    r.expect("continuous", cont.is_none(), va.exact, bound.depth, || cont.clone().unwrap_or_default());
    let mut cx = None;
    'w: for x in &va.points {
        for y in &va.points {
            if va.wb(x, y) && !vb.wb(&g(x), &g(y)) {
                cx = Some(json!({ "x": x, "y": y }));
                break 'w;
            }
        }
    }
    r.expect("preserves ≪", cx.is_none(), va.exact, bound.depth, || cx.clone().unwrap_or_default());
    Ok(r)
}

// ---------------------------------------------------------------------------
// Exponentials of finite continuous spaces

/// `Y^X` for finite `X`, `Y`: principal ideals of the monotone maps.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponential {
    pub x: FinitePoset,
    pub y: FinitePoset,
    /// Monotone maps as image tables.
    pub maps: Vec<Vec<usize>>,
    /// Pointwise order on `maps`.
    pub order: FinitePoset,
    /// `≺₀` on principal ideals, row-major.
    pub prec0: Vec<bool>,
}

impl Exponential {
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn prec0(&self, i: usize, j: usize) -> bool {
        self.prec0[i * self.n() + j]
    }

    /// `ev(↓h, x) = sup{g(x) : g ≤ h}`.
    pub fn ev(&self, ideal: usize, x: usize) -> Option<usize> {
        let vals: Vec<usize> = (0..self.n()).filter(|&g| self.order.leq(g, ideal)).map(|g| self.maps[g][x]).collect();
        sup(&self.y, &vals)
    }

    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| m == map)
    }

    pub fn nab(&self) -> Nab {
        let mut t = Vec::new();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.prec0(i, j) {
                    t.push((Elem::N(i as u64), Elem::N(j as u64)));
                }
            }
        }
        Nab::new(Poset::Explicit(self.order.clone()), Prec::Table(t))
    }
}

pub fn sup(p: &FinitePoset, vals: &[usize]) -> Option<usize> {
    let ubs: Vec<usize> = (0..p.size()).filter(|&u| vals.iter().all(|&v| p.leq(v, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&w| p.leq(u, w)))
}

pub fn finite_of(s: &Space) -> Result<FinitePoset> {
    let all = s.elements().ok_or_else(|| Error::Unsupported("exponentials need finite spaces".into()))?;
    let v = View::new(s, Bound::default());
    if classify_view(&v).kind < Kind::Continuous {
        return Err(Error::Precondition("space is not continuous".into()));
    }
    Ok(FinitePoset::of_carrier(s, &all))
}

pub fn con_exponential(x: &Space, y: &Space) -> Result<Exponential> {
    Ok(exponential_of(&finite_of(x)?, &finite_of(y)?))
}

pub fn exponential_of(x: &FinitePoset, y: &FinitePoset) -> Exponential {
    let maps = monotone_maps(x, y);
    let n = maps.len();
    let order = FinitePoset::from_fn(n, |i, j| (0..x.size()).all(|k| y.leq(maps[i][k], maps[j][k])));
    let ideal = |h: usize| -> Vec<bool> { (0..n).map(|g| order.leq(g, h)).collect() };
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(p, q)| !*p || *q);
    let ideals: Vec<Vec<bool>> = (0..n).map(ideal).collect();
    let mut prec0 = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            prec0[i * n + j] = (0..n).any(|h| ideals[j][h] && subset(&ideals[i], &ideals[h]) && subset(&ideals[h], &ideals[j]));
        }
    }
    Exponential { x: x.clone(), y: y.clone(), maps, order, prec0 }
}

/// Abstract-basis axioms for `≺₀`, `≪ = ≺₀`, and `Y^X` as the map poset.
pub fn check_exponential(e: &Exponential) -> Report {
    let nab = e.nab();
    let mut r = check_nab(&nab, Bound::default());
    r.subject = "exponential".into();
    let s = Space::new(nab.poset.clone(), Topology::Nab(nab.prec.clone()));
    let v = View::new(&s, Bound::default());
    let mut cx = None;
    'w: for i in 0..e.n() {
        for j in 0..e.n() {
            if v.wb(&Elem::N(i as u64), &Elem::N(j as u64)) != e.prec0(i, j) {
                cx = Some(json!({ "g": e.maps[i], "h": e.maps[j] }));
                break 'w;
            }
        }
    }
    r.expect("≪ = ≺₀", cx.is_none(), true, 0, || cx.clone().unwrap_or_default());
    let alex = Space::alexandrov(Poset::Explicit(e.order.clone()));
    let same = same_opens(&s, &alex, Bound::default());
    r.expect("Y^X ≅ monotone maps (alexandrov)", same.is_ok(), true, 0, || json!({ "differs_on": same.clone().err() }));
    r
}

/// `f: Z ⊗ X → Y` as a table indexed `z * |X| + x`.
pub fn eval_and_curry(z: &FinitePoset, x: &FinitePoset, y: &FinitePoset, f: &[usize]) -> Result<Report> {
    let nx = x.size();
    let at = |zi: usize, xi: usize| f[zi * nx + xi];
    if f.len() != z.size() * nx || f.iter().any(|&v| v >= y.size()) {
        return Err(Error::Domain("map table has the wrong shape".into()));
    }
    for a in 0..z.size() {
        for b in 0..z.size() {
            for c in 0..nx {
                for d in 0..nx {
                    if z.leq(a, b) && x.leq(c, d) && !y.leq(at(a, c), at(b, d)) {
                        return Err(Error::Precondition(format!(
                            "f is not way-below preserving: ({a},{c}) ≤ ({b},{d}) but f values {} ≰ {}",
                            at(a, c),
                            at(b, d)
                        )));
                    }
                }
            }
        }
    }
    let e = exponential_of(x, y);
    let mut r = Report::new("evaluation and currying");
    // In finite spaces ≪ = ≤, so ↓{f_z' : z' ≪ z} is principal at f_z.
    let mut fbar = Vec::with_capacity(z.size());
    for zi in 0..z.size() {
        let gens: Vec<usize> = (0..z.size())
            .filter(|&w| z.leq(w, zi))
            .map(|w| e.index_of(&(0..nx).map(|xi| at(w, xi)).collect::<Vec<_>>()).expect("section is monotone"))
            .collect();
        let top = sup(&e.order, &gens).filter(|t| gens.contains(t));
        match top {
            Some(t) => fbar.push(t),
            None => {
                r.push("f̄(z) principal", Verdict::fail(json!({ "z": zi })));
                return Ok(r);
            }
        }
    }
    r.push("f̄(z) principal", Verdict::Pass);
    let ev_law = (0..z.size()).flat_map(|zi| (0..nx).map(move |xi| (zi, xi))).find(|&(zi, xi)| e.ev(fbar[zi], xi) != Some(at(zi, xi)));
    r.expect("ev ∘ (f̄ ⊗ id) = f", ev_law.is_none(), true, 0, || json!({ "z": ev_law.unwrap().0, "x": ev_law.unwrap().1 }));
    let fbar_mono = (0..z.size()).all(|a| (0..z.size()).all(|b| !z.leq(a, b) || e.order.leq(fbar[a], fbar[b])));
    r.expect("f̄ preserves ≪", fbar_mono, true, 0, || json!({ "f̄": fbar }));
    let solutions: Vec<Vec<usize>> = monotone_maps(z, &e.order)
        .into_iter()
        .filter(|g| (0..z.size()).all(|zi| (0..nx).all(|xi| e.ev(g[zi], xi) == Some(at(zi, xi)))))
        .collect();
    r.expect("unique curried map", solutions.len() == 1 && solutions[0] == fbar, true, 0, || json!({ "solutions": solutions }));
    let ev_mono = (0..e.n()).all(|a| {
        (0..e.n()).all(|b| {
            (0..nx).all(|c| {
                (0..nx).all(|d| !(e.order.leq(a, b) && x.leq(c, d)) || matches!((e.ev(a, c), e.ev(b, d)), (Some(p), Some(q)) if y.leq(p, q)))
            })
        })
    });
    r.expect("ev preserves ≪ and is separately continuous", ev_mono, true, 0, || json!({}));
    Ok(r.with_result(json!({ "f_bar": fbar.iter().map(|&i| &e.maps[i]).collect::<Vec<_>>() })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Nab {
        Nab::new(Poset::Chain(2), Prec::Leq)
    }

    #[test]
    fn check_nab_examples() {
        let b = Bound::default();
        let r = check_nab(&Nab::dyadic(), b);
        assert!(r.passed(), "{}", r.to_text());
        let bad = Nab::new(Poset::Chain(2), Prec::Table(vec![(Elem::N(0), Elem::N(1))]));
        let r = check_nab(&bad, b);
        assert!(r.check("interpolation").unwrap().verdict.is_fail());
        for p in FinitePoset::all_up_to(3) {
            assert!(check_nab(&Nab::new(Poset::Explicit(p), Prec::Leq), b).passed());
        }
        let w = check_nab(&Nab::new(Poset::Omega, Prec::Strict), b);
        assert!(w.check("interpolation").unwrap().verdict.is_fail());
    }

    #[test]
    fn dyadic_space_is_continuous_with_way_below_interval() {
        let b = Bound::default();
        let s = nab_space(&Nab::dyadic(), b).unwrap();
        let v = View::new(&s, b);
        assert_eq!(classify_view(&v).kind, Kind::Continuous);
        assert!(wb_agrees(&Nab::dyadic(), b).unwrap().passed());
    }

    #[test]
    fn roundtrips() {
        let b = Bound::default();
        let r = check_roundtrip(&Space::omega_plus_one(), b).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let a = space_to_nab(&Space::omega_plus_one(), b).unwrap();
        assert!(!a.prec(&Elem::top(), &Elem::top()));
        assert!(a.prec(&Elem::N(3), &Elem::top()));
        assert!(check_roundtrip(&Space::finite(FinitePoset::closed(3, &[(0, 1), (0, 2)])), b).unwrap().passed());
        assert!(space_to_nab(&Space::flat_nat_top_upper(), b).is_err());
    }

    #[test]
    fn normal_map_examples() {
        let b = Bound::default();
        let d = Nab::dyadic();
        assert!(check_normal_map(&MapRule::Id, &d, &d, b).passed());
        let top = check_normal_map(&MapRule::Const(Elem::dyadic(1, 0)), &d, &d, b);
        assert!(top.check("preserves ≺").unwrap().verdict.is_fail());
        let w = Nab::new(Poset::Omega, Prec::Leq);
        assert!(check_normal_map(&MapRule::Double, &w, &w, b).passed());
        let ws = Nab::new(Poset::Omega, Prec::Strict);
        let r = check_normal_map(&MapRule::Double, &ws, &ws, b);
        assert!(r.check("lifting").unwrap().verdict.is_fail());
    }

    #[test]
    fn normal_maps_agree_with_induced_maps() {
        let b = Bound::default();
        for p in FinitePoset::all_up_to(3) {
            for q in FinitePoset::all_up_to(3) {
                let a = Nab::new(Poset::Explicit(p.clone()), Prec::Leq);
                let c = Nab::new(Poset::Explicit(q.clone()), Prec::Leq);
                for tbl in crate::order::all_maps(p.size(), q.size()) {
                    let rule = MapRule::Table(tbl.iter().enumerate().map(|(i, &j)| (Elem::N(i as u64), Elem::N(j as u64))).collect());
                    let normal = check_normal_map(&rule, &a, &c, b).passed();
                    let induced = induced_map_report(&rule, &a, &c, b).unwrap().passed();
                    assert_eq!(normal, induced, "{p:?} {q:?} {tbl:?}");
                }
            }
        }
    }

    #[test]
    fn exponential_examples() {
        let c2p = FinitePoset::chain(2);
        let e = exponential_of(&c2p, &c2p);
        assert_eq!(e.n(), 3);
        assert!(e.order.is_isomorphic(&FinitePoset::chain(3)));
        assert!(check_exponential(&e).passed());
        let one = FinitePoset::chain(1);
        let y = FinitePoset::closed(3, &[(0, 1), (0, 2)]);
        assert!(exponential_of(&one, &y).order.is_isomorphic(&y));
        let s = con_exponential(&Space::finite(c2p.clone()), &Space::finite(c2p.clone())).unwrap();
        assert_eq!(s, e);
        assert!(c2().poset.is_finite());
    }

    #[test]
    fn eval_and_curry_examples() {
        let c = FinitePoset::chain(2);
        let proj = [0, 1, 0, 1];
        let r = eval_and_curry(&c, &c, &c, &proj).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(eval_and_curry(&c, &c, &c, &[1, 1, 1, 1]).unwrap().passed());
        assert!(eval_and_curry(&c, &c, &c, &[1, 0, 0, 0]).is_err());
    }
}
