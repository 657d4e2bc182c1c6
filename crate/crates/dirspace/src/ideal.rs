//! Topological ideals, the algebraic space `I_T(X)`, the supremum map and
//! the way-below map.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elem::{Elem, Seq};
use crate::order::{FAR, ideal_elem_leq, ideal_elem_member, Carrier, Ideal, Poset};
use crate::report::{Bound, Error, Report, Result, Verdict};
use crate::space::{classify_view, continuity_failure_of, product, Family, Kind, Open, Space, Topo, View};

/// `↓D` for an ideal net `D`, with its supremum and the converging family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TopIdeal {
    pub body: Ideal,
    pub sup: Elem,
    pub certificate: Family,
}

impl TopIdeal {
    pub fn principal(x: Elem) -> TopIdeal {
        TopIdeal { body: Ideal::Principal(x.clone()), sup: x.clone(), certificate: Family::single(x) }
    }

    pub fn elem(&self) -> Elem {
        self.body.to_elem()
    }
}

/// Limit candidates named by a chain description.
fn limit_hint(s: &Seq) -> Option<Elem> {
    match s {
        Seq::Const(e) => Some(e.clone()),
        Seq::Below { num, exp } => Some(Elem::dyadic(*num, *exp)),
        Seq::Inl(a) => limit_hint(a).map(Elem::left),
        Seq::Inr(a) => limit_hint(a).map(Elem::right),
        Seq::Pair(a, b) => Some(Elem::pair(limit_hint(a)?, limit_hint(b)?)),
        _ => None,
    }
}

fn family_hints(d: &Family) -> Vec<Elem> {
    match d {
        Family::Finite(v) => v.clone(),
        Family::Chain(s) => limit_hint(s).into_iter().collect(),
    }
}

/// Least `x` with `D → x` and `D ⊑ x`, searched in the view.
fn find_sup(v: &View, d: &Family) -> Option<Elem> {
    let members = d.members(v.space, v.bound.depth);
    let f = v.fams.iter().position(|g| g == d);
    let mut cands: Vec<Elem> = v.probe.iter().chain(v.points.iter()).cloned().collect();
    cands.sort();
    cands.dedup();
    let good: Vec<Elem> = cands
        .into_iter()
        .filter(|x| members.iter().all(|m| v.space.leq(m, x)))
        .filter(|x| match d {
            Family::Chain(s) => v.space.leq(&v.space.canon(s.at(FAR)), x),
            Family::Finite(_) => true,
        })
        .filter(|x| match f {
            Some(i) => v.family_converges(i, x),
            None => v.set_converges(&members, x),
        })
        .collect();
    good.iter().find(|x| good.iter().all(|y| v.space.leq(x, y))).cloned()
}

fn family_directed(c: &dyn Carrier, d: &Family, depth: usize) -> std::result::Result<(), Value> {
    match d {
        Family::Finite(v) => {
            if v.is_empty() {
                return Err(json!({ "reason": "empty family" }));
            }
            for a in v {
                for b in v {
                    if !v.iter().any(|u| c.leq(a, u) && c.leq(b, u)) {
                        return Err(json!({ "reason": "no upper bound in the family", "a": a, "b": b }));
                    }
                }
            }
            Ok(())
        }
        Family::Chain(_) => {
            let p = d.members(c, depth);
            match p.windows(2).find(|w| !c.leq(&w[0], &w[1])) {
                Some(w) => Err(json!({ "reason": "chain not monotone", "a": w[0], "b": w[1] })),
                None => Ok(()),
            }
        }
    }
}

pub fn make_topological_ideal(x: &Space, gen: &Family, bound: Bound) -> Result<TopIdeal> {
    let members = gen.members(x, bound.depth);
    if let Some(m) = members.iter().find(|m| !x.contains(m)) {
        return Err(Error::Domain(format!("{m} is not in the carrier")));
    }
    family_directed(x, gen, bound.depth).map_err(|cx| Error::Precondition(format!("not directed: {cx}")))?;
    if let Family::Finite(v) = gen {
        let max = v.iter().find(|a| v.iter().all(|b| x.leq(b, a))).expect("directed finite family has a maximum");
        return Ok(TopIdeal::principal(max.clone()));
    }
    let v = View::with_points(x, bound, &family_hints(gen));
    let sup = find_sup(&v, gen).ok_or_else(|| Error::Precondition(format!("not an ideal net (up to bound {})", bound.depth)))?;
    let Family::Chain(s) = gen else { unreachable!() };
    let body = if s.is_const() { Ideal::Principal(sup.clone()) } else { Ideal::Generated(s.clone()) };
    Ok(TopIdeal { body, sup, certificate: gen.clone() })
}

/// The space `I_T(X)` over the catalog-derived inventory.
#[derive(Clone, Debug, PartialEq)]
pub struct ItSpace {
    pub base: Space,
    pub inventory: Vec<TopIdeal>,
    pub bound: Bound,
}

pub fn it_space(x: &Space, bound: Bound) -> ItSpace {
    let v = View::new(x, bound);
    let mut inventory: Vec<TopIdeal> = Vec::new();
    for f in &v.fams {
        let Family::Chain(s) = f else { continue };
        if s.is_const() {
            continue;
        }
        if let Some(sup) = find_sup(&v, f) {
            let t = TopIdeal { body: Ideal::Generated(s.clone()), sup, certificate: f.clone() };
            let e = t.elem();
            let dup = inventory.iter().any(|u| {
                let ue = u.elem();
                ideal_elem_leq(x, &ue, &e, bound.depth) && ideal_elem_leq(x, &e, &ue, bound.depth)
            });
            let principal = v.probe.iter().any(|p| {
                let d = Elem::down(p.clone());
                ideal_elem_leq(x, &d, &e, bound.depth) && ideal_elem_leq(x, &e, &d, bound.depth)
            });
            if !dup && !principal {
                inventory.push(t);
            }
        }
    }
    ItSpace { base: x.clone(), inventory, bound }
}

impl ItSpace {
    pub fn lookup(&self, e: &Elem) -> Option<TopIdeal> {
        match e {
            Elem::Down(a) if self.base.contains(a) => Some(TopIdeal::principal(a.as_ref().clone())),
            Elem::Lim(s) => {
                let c = self.canon(e.clone());
                if let Some(t) = self.inventory.iter().find(|t| t.elem() == c) {
                    return Some(t.clone());
                }
                make_topological_ideal(&self.base, &Family::Chain(s.as_ref().clone()), self.bound)
                    .ok()
                    .filter(|t| matches!(t.body, Ideal::Generated(_)))
            }
            _ => None,
        }
    }

    pub fn sup(&self, e: &Elem) -> Result<Elem> {
        self.lookup(e).map(|t| t.sup).ok_or_else(|| Error::Domain(format!("{e} is not a topological ideal in the inventory")))
    }

    fn same(&self, a: &Elem, b: &Elem) -> bool {
        let d = self.bound.depth;
        ideal_elem_leq(&self.base, a, b, d) && ideal_elem_leq(&self.base, b, a, d)
    }
}

impl Carrier for ItSpace {
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        ideal_elem_leq(&self.base, a, b, self.bound.depth)
    }

    fn contains(&self, a: &Elem) -> bool {
        self.lookup(a).is_some()
    }

    fn prefix(&self, n: usize) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.inventory.iter().map(|t| t.elem()).take(n).collect();
        let rest = n - v.len();
        v.extend(self.base.prefix(rest).into_iter().map(Elem::down));
        v
    }

    fn size(&self) -> Option<usize> {
        self.base.size().map(|s| s + self.inventory.len())
    }

    fn canon(&self, a: Elem) -> Elem {
        if let Elem::Lim(_) = a {
            if let Some(t) = self.inventory.iter().find(|t| self.same(&t.elem(), &a)) {
                return t.elem();
            }
        }
        a
    }
}

impl Topo for ItSpace {
    fn base(&self, pts: &[Elem]) -> Vec<Open> {
        let mut out = vec![Open::All];
        for p in pts {
            match p {
                Elem::Down(a) => out.push(Open::Has(a.as_ref().clone())),
                Elem::Lim(s) => out.extend((0..8).map(|k| Open::Has(self.base.canon(s.at(k))))),
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
            Open::Has(a) => ideal_elem_member(&self.base, x, a, self.bound.depth),
            Open::Up(a) => self.leq(a, x),
            Open::Set(s) => s.contains(x),
            Open::Meet(us) => us.iter().all(|w| self.in_open(w, x)),
            _ => false,
        }
    }

    fn chains(&self, pts: &[Elem]) -> Vec<Seq> {
        let base_pts: Vec<Elem> = pts
            .iter()
            .filter_map(|p| match p {
                Elem::Down(a) => Some(a.as_ref().clone()),
                _ => None,
            })
            .collect();
        let mut v: Vec<Seq> = self.base.chains(&base_pts).into_iter().map(|s| Seq::Down(Box::new(s))).collect();
        v.extend(self.inventory.iter().filter_map(|t| match &t.body {
            Ideal::Generated(s) => Some(Seq::Down(Box::new(s.clone()))),
            _ => None,
        }));
        v.sort();
        v.dedup();
        v
    }

    fn describe(&self) -> Value {
        json!({ "it_space": self.base.to_json(), "inventory": self.inventory })
    }
}

/// `⇓x` as a topological ideal.
pub fn wb_ideal(x: &Space, p: &Elem, bound: Bound) -> Result<TopIdeal> {
    let v = View::with_points(x, bound, std::slice::from_ref(p));
    let cls = classify_view(&v);
    if cls.kind < Kind::Continuous {
        return Err(Error::Precondition(format!("way-below map undefined: space classified {:?} ({})", cls.kind, cls.witness.unwrap_or_default())));
    }
    wb_ideal_in(&v, &it_space(x, bound), p)
}

pub fn wb_ideal_in(v: &View, it: &ItSpace, p: &Elem) -> Result<TopIdeal> {
    if v.compact(p) {
        return Ok(TopIdeal::principal(p.clone()));
    }
    let below = v.wb_below(p);
    let pool: Vec<&Elem> = v.probe.iter().collect();
    let mut cands = it.inventory.clone();
    for c in v.space.chains(std::slice::from_ref(p)) {
        if let Ok(t) = make_topological_ideal(&it.base, &Family::Chain(c), it.bound) {
            cands.push(t);
        }
    }
    for t in &cands {
        let e = t.elem();
        let matches = pool.iter().all(|y| {
            let in_wb = v.space.leq(y, p) && below.contains(y);
            ideal_elem_member(&it.base, &e, y, it.bound.depth) == in_wb
        });
        if matches && t.sup == *p {
            return Ok(t.clone());
        }
    }
    Err(Error::Unsupported(format!("⇓{p} is not in the ideal inventory")))
}

/// How the lower adjoint candidate is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerMap {
    WayBelow,
    /// Mutation: principal ideal `↓x` instead of `⇓x`.
    Down,
}

/// The adjunction `⇓ ⊣ sup` with retraction and continuity checks.
pub fn check_adjunction(x: &Space, bound: Bound, mode: LowerMap) -> Report {
    let mut r = Report::new("adjunction ⇓ ⊣ sup");
    let v = View::new(x, bound);
    let exact = v.exact;
    let it = it_space(x, bound);
    let cls = classify_view(&v);
    let lower = |p: &Elem| -> Result<TopIdeal> {
        match mode {
            LowerMap::Down => Ok(TopIdeal::principal(p.clone())),
            LowerMap::WayBelow => {
                if cls.kind < Kind::Continuous {
                    Err(Error::Precondition(format!("space classified {:?}", cls.kind)))
                } else {
                    wb_ideal_in(&v, &it, p)
                }
            }
        }
    };
    let mut lows = Vec::new();
    for p in &v.points {
        match lower(p) {
            Ok(t) => lows.push((p.clone(), t.elem())),
            Err(e) => {
                r.push(
                    "⇓ well defined",
                    Verdict::fail(json!({ "point": p, "error": e.to_string(), "witness": cls.witness })),
                );
                return r;
            }
        }
    }
    r.push("⇓ well defined", Verdict::held(exact, bound.depth));
    let iv = View::new(&it, bound);
    let ideals: Vec<Elem> = iv.points.clone();
    let mut cx = None;
    'adj: for (p, lp) in &lows {
        for a in &ideals {
            let Ok(s) = it.sup(a) else { continue };
            if it.leq(lp, a) != x.leq(p, &s) {
                cx = Some(json!({ "x": p, "lower(x)": lp, "A": a, "sup A": s }));
                break 'adj;
            }
        }
    }
    r.expect("⇓x ⊆ A ⇔ x ⊑ sup A", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    let cx = lows.iter().find(|(p, lp)| it.sup(lp).ok().as_ref() != Some(p));
    r.expect("sup ∘ ⇓ = id", cx.is_none(), exact, bound.depth, || json!({ "x": cx.map(|c| &c.0) }));
    let mut cx = None;
    for a in &ideals {
        if let Ok(s) = it.sup(a) {
            if let Ok(l) = lower(&s) {
                if !it.leq(&l.elem(), a) {
                    cx = Some(json!({ "A": a, "⇓ sup A": l.elem() }));
                    break;
                }
            }
        }
    }
    r.expect("⇓ ∘ sup ⊆ id", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    let mut cx = None;
    'mono: for (p, lp) in &lows {
        for (q, lq) in &lows {
            if x.leq(p, q) && !it.leq(lp, lq) {
                cx = Some(json!({ "x": p, "y": q }));
                break 'mono;
            }
        }
    }
    r.expect("⇓ monotone", cx.is_none(), exact, bound.depth, || cx.clone().unwrap_or_default());
    let lower_fn = |p: &Elem| lower(p).map(|t| t.elem()).unwrap_or(Elem::Set(vec![]));
    let cont = continuity_failure_of(&lower_fn, x, &it, bound);
    r.expect("⇓ continuous", cont.is_none(), exact, bound.depth, || cont.clone().unwrap_or_default());
    let sup_fn = |a: &Elem| it.sup(a).unwrap_or(Elem::Set(vec![]));
    let cont = continuity_failure_of(&sup_fn, &it, x, bound);
    r.expect("sup continuous", cont.is_none(), exact, bound.depth, || cont.clone().unwrap_or_default());
    r
}

/// Left and right projections of an ideal element of a product.
pub fn project(e: &Elem) -> Option<(Elem, Elem)> {
    let side = |s: &Seq| if s.is_const() { Elem::down(s.at(0)) } else { Elem::lim(s.clone()) };
    match e {
        Elem::Down(p) => Some((Elem::down(p.fst()?.clone()), Elem::down(p.snd()?.clone()))),
        Elem::Lim(s) => match s.as_ref() {
            Seq::Pair(a, b) => Some((side(a), side(b))),
            _ => None,
        },
        _ => None,
    }
}

/// `A × B` for ideal elements `A`, `B`.
pub fn rectangle(a: &Elem, b: &Elem) -> Elem {
    let seq = |e: &Elem| match e {
        Elem::Down(x) => Seq::Const(x.as_ref().clone()),
        Elem::Lim(s) => s.as_ref().clone(),
        other => Seq::Const(other.clone()),
    };
    match (a, b) {
        (Elem::Down(x), Elem::Down(y)) => Elem::down(Elem::pair(x.as_ref().clone(), y.as_ref().clone())),
        _ => Elem::lim(Seq::pair(seq(a), seq(b))),
    }
}

/// `I_T(X ⊗ Y) = I_T(X) ⊗ I_T(Y)` on sampled ideals.
pub fn it_product_check(x: &Space, y: &Space, bound: Bound) -> Report {
    let p = product(&[x.clone(), y.clone()]);
    let ip = it_space(&p, bound);
    let ix = it_space(x, bound);
    let iy = it_space(y, bound);
    let exact = p.carrier.is_finite();
    let mut r = Report::new("ideals of a product");
    let ideals = ip.prefix(bound.sample);
    let pts = View::new(&p, bound).probe;
    let mut rect = None;
    let mut proj = None;
    for d in &ideals {
        let Some((a, b)) = project(d) else {
            rect = Some(json!({ "ideal": d, "reason": "no projection" }));
            break;
        };
        if proj.is_none() && (!ix.contains(&a) || !iy.contains(&b)) {
            proj = Some(json!({ "ideal": d, "left": a, "right": b }));
        }
        let bad = pts.iter().find(|q| {
            let (u, w) = (q.fst().unwrap(), q.snd().unwrap());
            ideal_elem_member(&p, d, q, bound.depth)
                != (ideal_elem_member(x, &a, u, bound.depth) && ideal_elem_member(y, &b, w, bound.depth))
        });
        if let Some(q) = bad {
            rect = Some(json!({ "ideal": d, "point": q }));
            break;
        }
    }
    r.expect("D = π₁D × π₂D", rect.is_none(), exact, bound.depth, || rect.clone().unwrap_or_default());
    r.expect("projections are topological ideals", proj.is_none(), exact, bound.depth, || proj.clone().unwrap_or_default());
    let mut back = None;
    'b: for a in ix.prefix(bound.sample.min(8)) {
        for b in iy.prefix(bound.sample.min(8)) {
            let d = rectangle(&a, &b);
            if !ip.contains(&d) {
                back = Some(json!({ "left": a, "right": b }));
                break 'b;
            }
        }
    }
    r.expect("rectangles of ideals are ideals", back.is_none(), exact, bound.depth, || back.clone().unwrap_or_default());
    let mut opens = None;
    'o: for q in pts.iter().take(bound.sample) {
        let (u, w) = (q.fst().unwrap(), q.snd().unwrap());
        for d in &ideals {
            let Some((a, b)) = project(d) else { continue };
            let lhs = ip.in_open(&Open::Has(q.clone()), d);
            let rhs = ix.in_open(&Open::Has(u.clone()), &a) && iy.in_open(&Open::Has(w.clone()), &b);
            if lhs != rhs {
                opens = Some(json!({ "point": q, "ideal": d }));
                break 'o;
            }
        }
    }
    r.expect("U_(x,y) = U_x × U_y", opens.is_none(), exact, bound.depth, || opens.clone().unwrap_or_default());
    r
}

/// `I_T(X)` as a finite poset when finite.
pub fn it_finite_order(it: &ItSpace) -> Option<crate::order::FinitePoset> {
    let all = it.elements()?;
    Some(crate::order::FinitePoset::of_carrier(it, &all))
}

pub fn omega_alexandrov() -> Space {
    Space::alexandrov(Poset::Omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FinitePoset;

    #[test]
    fn make_ideal_examples() {
        let b = Bound::default();
        let w1 = Space::omega_plus_one();
        let t = make_topological_ideal(&w1, &Family::Chain(Seq::nat()), b).unwrap();
        assert_eq!(t.sup, Elem::top());
        assert_eq!(t.body, Ideal::Generated(Seq::nat()));
        let t = make_topological_ideal(&w1, &Family::single(Elem::N(4)), b).unwrap();
        assert_eq!(t.body, Ideal::Principal(Elem::N(4)));
        let remark = Space::flat_nat_top_upper();
        let e = make_topological_ideal(&remark, &Family::Finite(vec![Elem::N(1), Elem::N(2)]), b);
        assert!(matches!(e, Err(Error::Precondition(m)) if m.contains("not directed")));
        assert!(make_topological_ideal(&omega_alexandrov(), &Family::Chain(Seq::nat()), b).is_err());
    }

    #[test]
    fn it_space_shapes() {
        let b = Bound::default();
        let w1 = it_space(&Space::omega_plus_one(), b);
        assert_eq!(w1.inventory.len(), 1);
        let lim = Elem::lim(Seq::nat());
        assert!(w1.leq(&lim, &Elem::down(Elem::top())));
        assert!(!w1.leq(&Elem::down(Elem::top()), &lim));
        assert_eq!(w1.sup(&lim).unwrap(), Elem::top());
        assert!(w1.contains(&Elem::lim(Seq::Nat { from: 5 })));
        assert!(it_space(&Space::flat_nat_top_upper(), b).inventory.is_empty());
        assert!(it_space(&omega_alexandrov(), b).inventory.is_empty());
        let fin = Space::finite(FinitePoset::closed(3, &[(0, 1), (0, 2)]));
        let it = it_space(&fin, b);
        assert!(it_finite_order(&it).unwrap().is_isomorphic(&FinitePoset::closed(3, &[(0, 1), (0, 2)])));
    }

    #[test]
    fn it_space_is_algebraic_with_principal_compacts() {
        let b = Bound::default();
        for x in [Space::omega_plus_one(), Space::flat_nat_top_upper(), omega_alexandrov()] {
            let it = it_space(&x, b);
            let c = crate::space::classify(&it, b);
            assert_eq!(c.kind, Kind::Algebraic, "{x:?} {:?}", c.witness);
            assert!(c.compacts.iter().all(|k| matches!(k, Elem::Down(_))));
        }
    }

    #[test]
    fn wb_ideal_examples() {
        let b = Bound::default();
        let w1 = Space::omega_plus_one();
        assert_eq!(wb_ideal(&w1, &Elem::top(), b).unwrap().body, Ideal::Generated(Seq::nat()));
        assert_eq!(wb_ideal(&w1, &Elem::N(3), b).unwrap().body, Ideal::Principal(Elem::N(3)));
        assert!(wb_ideal(&Space::flat_nat_top_upper(), &Elem::top(), b).is_err());
    }

    #[test]
    fn adjunction_examples() {
        let b = Bound::default();
        let w1 = Space::omega_plus_one();
        let r = check_adjunction(&w1, b, LowerMap::WayBelow);
        assert!(r.passed(), "{}", r.to_text());
        let m = check_adjunction(&w1, b, LowerMap::Down);
        assert!(m.check("⇓x ⊆ A ⇔ x ⊑ sup A").unwrap().verdict.is_fail());
        let fin = Space::finite(FinitePoset::closed(3, &[(0, 1), (0, 2)]));
        assert!(check_adjunction(&fin, b, LowerMap::WayBelow).passed());
        assert!(!check_adjunction(&Space::flat_nat_top_upper(), b, LowerMap::WayBelow).passed());
        let d = crate::nab::nab_space(&crate::nab::Nab::dyadic(), b).unwrap();
        let r = check_adjunction(&d, b, LowerMap::WayBelow);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn product_examples() {
        let b = Bound::default();
        let c2 = Space::alexandrov(Poset::Chain(2));
        assert!(it_product_check(&c2, &c2, b).passed());
        let r = it_product_check(&omega_alexandrov(), &omega_alexandrov(), b);
        assert!(r.passed(), "{}", r.to_text());
        let w1 = Space::omega_plus_one();
        let r = it_product_check(&w1, &w1, b);
        assert!(r.passed(), "{}", r.to_text());
    }
}
