//! The regression matrix shared by the CLI and the acceptance tests.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    check_preservation, free_ordered_algebra, powerspace, powerspace_report, theory_order, universal_exhaustive, PowerTheory,
};
use crate::bposet::{basis_isomorphic_pair, exponential_universal_finite, nat_b_example, product_universal_finite, roundtrip_finite};
use crate::elem::Elem;
use crate::ideal::{check_adjunction, it_finite_order, it_space, omega_alexandrov, LowerMap};
use crate::nab::{check_exponential, check_nab, check_roundtrip, eval_and_curry, exponential_of, nab_space, Nab, Prec};
use crate::order::{monotone_maps, FinitePoset, Poset};
use crate::report::{Bound, Error, Report, Result, Verdict};
use crate::space::{
    classify, classify_view, coreflect, is_directed_open, product_laws, same_opens, separate_joint_exhaustive, DirectedOpen, Kind,
    Open, Space, View,
};

/// Deliberately broken variants of individual checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// Hoare preorder with `∃f ∃g` in place of `∀f ∃g`.
    Hoare,
    /// Smyth preorder with its arguments swapped.
    SmythReversed,
    /// `⇓x` replaced by `↓x`.
    DownForWayBelow,
    /// Dyadic basis with plain `<`, which violates interpolation at 0.
    BadInterpolation,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub bound: Bound,
    pub seed: u64,
    pub jobs: usize,
    pub quick: bool,
    /// Term budget for free-algebra saturation.
    pub budget: usize,
    pub mutation: Option<Mutation>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { bound: Bound::default(), seed: 0, jobs: 1, quick: false, budget: 1 << 20, mutation: None }
    }
}

pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub limit: Duration,
    pub run: fn(&SuiteOptions) -> Result<Report>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Outcome {
    pub id: usize,
    pub title: String,
    pub report: Option<Report>,
    pub error: Option<String>,
    pub budget_exceeded: bool,
    pub elapsed_ms: u64,
    pub limit_ms: u64,
}

impl Outcome {
    pub fn within_time(&self) -> bool {
        self.elapsed_ms <= self.limit_ms
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.within_time() && self.report.as_ref().is_some_and(Report::passed)
    }

    pub fn warnings(&self) -> usize {
        self.report
            .as_ref()
            .map_or(0, |r| r.checks.iter().filter(|c| matches!(c.verdict, Verdict::VerifiedUpToBound { .. })).count())
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} criterion {:>2}: {} ({:.2}s, limit {}s)",
            self.id,
            self.title,
            self.elapsed_ms as f64 / 1000.0,
            self.limit_ms / 1000
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(" error: {e}"));
        } else if let Some(c) = self.report.as_ref().and_then(Report::first_fail) {
            s.push_str(&format!(" failing check: {}", c.name));
        } else if !self.within_time() {
            s.push_str(" over time");
        }
        if self.passed() && self.warnings() > 0 {
            s.push_str(&format!(" [{} check(s) verified up to bound]", self.warnings()));
        }
        s
    }
}

const fn secs(n: u64) -> Duration {
    Duration::from_secs(n)
}

pub fn paper_suite() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "finite exhaustive layer", limit: secs(60), run: finite_layer },
        Criterion { id: 2, title: "upper topology on the flat naturals", limit: secs(1), run: remark },
        Criterion { id: 3, title: "retract theorem", limit: secs(10), run: retract },
        Criterion { id: 4, title: "product laws", limit: secs(30), run: products },
        Criterion { id: 5, title: "powerspace oracles", limit: secs(60), run: powerspace_oracles },
        Criterion { id: 6, title: "universal property", limit: secs(120), run: universal },
        Criterion { id: 7, title: "preservation by free algebras", limit: secs(60), run: preservation },
        Criterion { id: 8, title: "cartesian closure of finite b-posets", limit: secs(60), run: cartesian_closure },
        Criterion { id: 9, title: "b-poset examples", limit: secs(10), run: bposet_examples },
        Criterion { id: 10, title: "normal abstract bases", limit: secs(120), run: abstract_bases },
        Criterion { id: 11, title: "mutation sensitivity", limit: secs(30), run: mutations },
    ]
}

/// Finite-only criteria at reduced sizes.
pub fn quick_suite() -> Vec<Criterion> {
    paper_suite().into_iter().filter(|c| [1, 5, 6, 8, 11].contains(&c.id)).collect()
}

pub fn suite(name: &str) -> Result<Vec<Criterion>> {
    match name {
        "paper" => Ok(paper_suite()),
        "quick" => Ok(quick_suite()),
        other => Err(Error::parse("suite", format!("unknown suite {other:?}; expected paper or quick"))),
    }
}

pub fn run_one(c: &Criterion, o: &SuiteOptions) -> Outcome {
    let t = Instant::now();
    let res = (c.run)(o);
    let elapsed_ms = t.elapsed().as_millis() as u64;
    let (report, error, budget_exceeded) = match res {
        Ok(mut r) => {
            r.elapsed_ms = Some(elapsed_ms);
            (Some(r), None, false)
        }
        Err(e) => {
            let budget = matches!(e, Error::Budget(_));
            (None, Some(e.to_string()), budget)
        }
    };
    Outcome { id: c.id, title: c.title.into(), report, error, budget_exceeded, elapsed_ms, limit_ms: c.limit.as_millis() as u64 }
}

/// Criteria run concurrently up to `jobs`; outcomes come back in order.
pub fn run_suite(cs: &[Criterion], o: &SuiteOptions) -> Vec<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(o.jobs.max(1)).build().expect("thread pool");
    pool.install(|| {
        if o.jobs <= 1 {
            cs.iter().map(|c| run_one(c, o)).collect()
        } else {
            cs.par_iter().map(|c| run_one(c, o)).collect()
        }
    })
}

fn first<T: Send>(items: Vec<Option<T>>) -> Option<T> {
    items.into_iter().flatten().next()
}

fn verdict_of(cx: Option<Value>, exact: bool, bound: usize) -> Verdict {
    match cx {
        None => Verdict::held(exact, bound),
        Some(v) => Verdict::fail(v),
    }
}

// ---------------------------------------------------------------------------
// Criteria

fn finite_layer(o: &SuiteOptions) -> Result<Report> {
    let max = if o.quick { 3 } else { 4 };
    let b = o.bound;
    let posets = FinitePoset::all_up_to(max);
    let mut r = Report::new(format!("finite spaces up to {max} points"));
    let rows: Vec<[Option<Value>; 4]> = posets
        .par_iter()
        .map(|p| {
            let x = Space::finite(p.clone());
            let v = View::new(&x, b);
            let cls = classify_view(&v);
            let alg = (cls.kind != Kind::Algebraic).then(|| json!({ "poset": p.to_json(), "kind": cls.kind }));
            let mut wb = None;
            'w: for i in 0..p.size() {
                for j in 0..p.size() {
                    if v.wb(&Elem::N(i as u64), &Elem::N(j as u64)) != p.leq(i, j) {
                        wb = Some(json!({ "poset": p.to_json(), "x": i, "y": j }));
                        break 'w;
                    }
                }
            }
            let core = same_opens(&coreflect(&x, b), &x, b).err().map(|u| json!({ "poset": p.to_json(), "open": u }));
            let it = it_finite_order(&it_space(&x, b));
            let iso = (!it.as_ref().is_some_and(|q| q.is_isomorphic(p))).then(|| json!({ "poset": p.to_json(), "ideals": it.map(|q| q.to_json()) }));
            [alg, wb, core, iso]
        })
        .collect();
    let names = ["classify = algebraic", "way_below = leq", "coreflect = identity", "it_space(X) ≅ X"];
    let mut cols: Vec<Vec<Option<Value>>> = vec![Vec::new(); 4];
    for row in rows {
        for (k, c) in row.into_iter().enumerate() {
            cols[k].push(c);
        }
    }
    for (name, col) in names.iter().zip(cols) {
        r.push_detail(*name, verdict_of(first(col), true, max), format!("{} poset(s)", posets.len()));
    }
    r.absorb("", roundtrip_finite(max, b));
    Ok(r)
}

fn remark(o: &SuiteOptions) -> Result<Report> {
    let b = o.bound;
    let x = Space::flat_nat_top_upper();
    let mut r = Report::new("flat naturals with the upper topology");
    let d = is_directed_open(&x, &Open::Set(vec![Elem::top()]), b);
    let ok = matches!(d, DirectedOpen::DirectedOpenNotOpen { .. });
    r.expect("{⊤} directed-open but not open", ok, false, b.depth, || serde_json::to_value(&d).unwrap_or_default());
    let v = View::new(&x, b);
    let cx = v.points.iter().find(|p| !v.compact(p));
    r.push_detail(
        "every sampled element d-compact",
        verdict_of(cx.map(|p| json!({ "point": p })), false, b.depth),
        format!("{} point(s)", v.points.len()),
    );
    let cls = classify_view(&v);
    r.expect("classify = not_directed", cls.kind == Kind::NotDirected, false, b.depth, || json!({ "kind": cls.kind }));
    Ok(r)
}

fn retract(o: &SuiteOptions) -> Result<Report> {
    let b = o.bound;
    let max = if o.quick { 3 } else { 4 };
    let mode = if o.mutation == Some(Mutation::DownForWayBelow) { LowerMap::Down } else { LowerMap::WayBelow };
    let mut corpus: Vec<(String, Space)> =
        FinitePoset::all_up_to(max).into_iter().map(|p| (format!("finite {}", p.to_json()), Space::finite(p))).collect();
    corpus.push(("ω+1".into(), Space::omega_plus_one()));
    corpus.push(("dyadic basis".into(), nab_space(&Nab::dyadic(), b)?));
    corpus.push(("flat naturals, upper".into(), Space::flat_nat_top_upper()));
    let rows: Vec<(String, bool, bool, bool)> = corpus
        .par_iter()
        .map(|(name, x)| {
            let cont = classify(x, b).is_continuous();
            let adj = check_adjunction(x, b, mode);
            let retract = adj.check("sup ∘ ⇓ = id").is_some_and(|c| !c.verdict.is_fail());
            (name.clone(), cont, adj.passed(), retract)
        })
        .collect();
    let mut r = Report::new("retract theorem");
    let bad = rows.iter().find(|(_, c, a, s)| !(c == a && a == s));
    let continuous = rows.iter().filter(|row| row.1).count();
    r.push_detail(
        "continuous ⇔ adjunction ⇔ sup ∘ ⇓ = id",
        verdict_of(bad.map(|(n, c, a, s)| json!({ "space": n, "continuous": c, "adjunction": a, "retract": s })), false, b.depth),
        format!("{} space(s), {continuous} continuous", rows.len()),
    );
    let w1 = it_space(&Space::omega_plus_one(), b);
    let ok = w1.inventory.len() == 1 && w1.inventory[0].sup == Elem::top();
    r.expect("I_T(ω+1) = ID(ω+1)", ok, false, b.depth, || json!({ "inventory": w1.inventory.len() }));
    let w = it_space(&omega_alexandrov(), b);
    let has_limit = !w.inventory.is_empty();
    r.expect("I_T(ω) ≅ ω+1", has_limit, false, b.depth, || {
        json!({
            "nonprincipal_ideals": w.inventory.len(),
            "reason": "the chain 0 < 1 < 2 < … has no upper bound in ω, so it is not an ideal net and every topological ideal of ω is principal",
        })
    });
    Ok(r)
}

fn products(o: &SuiteOptions) -> Result<Report> {
    let b = o.bound;
    let (max, max_y) = if o.quick { (2, 2) } else { (3, 2) };
    let mut r = Report::new("products");
    let w1 = Space::omega_plus_one();
    r.absorb("ω+1 ⊗ ω+1: ", product_laws(&w1, &w1, b));
    let posets = FinitePoset::all_up_to(max);
    let pairs: Vec<(FinitePoset, FinitePoset)> =
        posets.iter().flat_map(|p| posets.iter().map(move |q| (p.clone(), q.clone()))).collect();
    let fails: Vec<Option<Value>> = pairs
        .par_iter()
        .map(|(p, q)| {
            let rep = product_laws(&Space::finite(p.clone()), &Space::finite(q.clone()), b);
            rep.first_fail().map(|c| json!({ "p": p.to_json(), "q": q.to_json(), "check": c.name, "verdict": c.verdict }))
        })
        .collect();
    r.push_detail("finite products: componentwise laws", verdict_of(first(fails), true, max), format!("{} pair(s)", pairs.len()));
    r.absorb("", separate_joint_exhaustive(max, max_y, b));
    Ok(r)
}

pub type BoxedSetOrder = Box<dyn Fn(&FinitePoset, u64, u64) -> bool + Send + Sync>;

/// The set preorder for a theory, or its mutant.
pub fn set_order(t: PowerTheory, m: Option<Mutation>) -> BoxedSetOrder {
    match (t, m) {
        (PowerTheory::Lower, Some(Mutation::Hoare)) => Box::new(|x: &FinitePoset, f: u64, g: u64| {
            let n = x.size();
            (0..n).any(|i| f >> i & 1 == 1 && (0..n).any(|j| g >> j & 1 == 1 && x.leq(i, j)))
        }),
        (PowerTheory::Upper, Some(Mutation::SmythReversed)) => {
            let o = theory_order(PowerTheory::Upper);
            Box::new(move |x: &FinitePoset, f: u64, g: u64| o(x, g, f))
        }
        _ => Box::new(theory_order(t)),
    }
}

fn powerspace_oracles(o: &SuiteOptions) -> Result<Report> {
    let max = if o.quick { 3 } else { 4 };
    let mut r = Report::new("powerspace oracles");
    for (name, x) in [("C2", FinitePoset::chain(2)), ("antichain{a,b}", FinitePoset::antichain(2))] {
        let mut sizes = Vec::new();
        let mut cx = None;
        for t in PowerTheory::ALL {
            let ord = set_order(t, o.mutation);
            let brute = crate::algebra::powerspace_with(&x, t, &*ord).sets.len();
            let free = free_ordered_algebra(&x, &t.theory(), 2, o.budget)?.reps.len();
            if brute != free {
                cx.get_or_insert(json!({ "theory": t, "subsets": brute, "free_algebra": free }));
            }
            sizes.push(brute);
        }
        r.push_detail(
            format!("{name}: subset quotient = free algebra"),
            verdict_of(cx, true, 2),
            format!("lower/upper/convex sizes {}/{}/{}", sizes[0], sizes[1], sizes[2]),
        );
    }
    let posets = FinitePoset::all_up_to(max);
    let jobs: Vec<(FinitePoset, PowerTheory)> =
        posets.iter().flat_map(|p| PowerTheory::ALL.iter().map(move |&t| (p.clone(), t))).collect();
    let fails: Vec<Option<Value>> = jobs
        .par_iter()
        .map(|(p, t)| {
            let ord = set_order(*t, o.mutation);
            let rep = powerspace_report(p, *t, &*ord, o.budget);
            rep.first_fail().map(|c| json!({ "poset": p.to_json(), "theory": t, "check": c.name, "verdict": c.verdict }))
        })
        .collect();
    r.push_detail(
        "lower ≅ nonempty lower sets; free algebra stabilizes to the same quotient",
        verdict_of(first(fails), true, max),
        format!("{} poset(s) × 3 theories", posets.len()),
    );
    Ok(r)
}

fn universal(o: &SuiteOptions) -> Result<Report> {
    let n = if o.quick { 2 } else { 3 };
    universal_exhaustive(n, n)
}

fn preservation(o: &SuiteOptions) -> Result<Report> {
    let b = o.bound;
    let max = if o.quick { 3 } else { 4 };
    let mut corpus: Vec<(String, Space)> =
        FinitePoset::all_up_to(max).into_iter().map(|p| (format!("finite {}", p.to_json()), Space::finite(p))).collect();
    corpus.push(("ω".into(), omega_alexandrov()));
    corpus.push(("ω+1".into(), Space::omega_plus_one()));
    corpus.push(("flat naturals, alexandrov".into(), Space::alexandrov(Poset::flat_nat_top())));
    let jobs: Vec<(&String, &Space, PowerTheory)> =
        corpus.iter().flat_map(|(n, x)| PowerTheory::ALL.iter().map(move |&t| (n, x, t))).collect();
    let reports: Vec<(String, PowerTheory, Result<Report>)> =
        jobs.par_iter().map(|(n, x, t)| ((*n).clone(), *t, check_preservation(x, *t, b))).collect();
    let mut r = Report::new("preservation");
    let items = ["(i)", "(ii)", "(iii)", "(iv)", "(v)"];
    for item in items {
        let mut cx = None;
        let mut exact = true;
        for (n, t, rep) in &reports {
            match rep {
                Err(e) => {
                    cx.get_or_insert(json!({ "space": n, "theory": t, "error": e.to_string() }));
                }
                Ok(rep) => {
                    if let Some(c) = rep.checks.iter().find(|c| c.name.starts_with(item)) {
                        exact &= c.verdict == Verdict::Pass;
                        if c.verdict.is_fail() {
                            cx.get_or_insert(json!({ "space": n, "theory": t, "verdict": c.verdict }));
                        }
                    }
                }
            }
        }
        let name = reports
            .iter()
            .find_map(|(_, _, rep)| rep.as_ref().ok()?.checks.iter().find(|c| c.name.starts_with(item)).map(|c| c.name.clone()))
            .unwrap_or_else(|| item.to_string());
        r.push_detail(name, verdict_of(cx, exact, b.depth), format!("{} space(s) × 3 theories", corpus.len()));
    }
    let convex = reports
        .iter()
        .find(|(n, t, _)| n == "ω+1" && *t == PowerTheory::Convex)
        .and_then(|(_, _, rep)| rep.as_ref().ok()?.checks.iter().find(|c| c.name.starts_with("(v)"))?.detail.clone());
    if let Some(d) = convex {
        r.push_detail("ω+1 convex closure", Verdict::Pass, d);
    }
    Ok(r)
}

fn cartesian_closure(o: &SuiteOptions) -> Result<Report> {
    let n = if o.quick { 2 } else { 3 };
    let mut r = Report::new("cartesian closure");
    r.absorb("products: ", product_universal_finite(n));
    r.absorb("exponentials: ", exponential_universal_finite(n));
    Ok(r)
}

fn bposet_examples(o: &SuiteOptions) -> Result<Report> {
    let mut r = Report::new("b-poset examples");
    r.absorb("basis-isomorphic pair: ", basis_isomorphic_pair(o.bound)?);
    r.absorb("ℕ/B: ", nat_b_example(o.bound));
    Ok(r)
}

fn abstract_bases(o: &SuiteOptions) -> Result<Report> {
    let b = Bound { depth: 64, ..o.bound };
    let mut r = Report::new("normal abstract bases");
    let dyadic = if o.mutation == Some(Mutation::BadInterpolation) { Nab::new(Poset::Dyadic, Prec::Strict) } else { Nab::dyadic() };
    r.absorb("dyadic: ", check_nab(&dyadic, b));
    let max = if o.quick { 2 } else { 3 };
    let mut corpus: Vec<(String, Space)> =
        FinitePoset::all_up_to(max).into_iter().map(|p| (format!("finite {}", p.to_json()), Space::finite(p))).collect();
    corpus.push(("ω+1".into(), Space::omega_plus_one()));
    corpus.push(("dyadic basis".into(), nab_space(&Nab::dyadic(), b)?));
    let fails: Vec<Option<Value>> = corpus
        .par_iter()
        .map(|(n, x)| match check_roundtrip(x, b) {
            Ok(rep) => rep.first_fail().map(|c| json!({ "space": n, "check": c.name, "verdict": c.verdict })),
            Err(e) => Some(json!({ "space": n, "error": e.to_string() })),
        })
        .collect();
    r.push_detail("nab_space ↔ space_to_nab", verdict_of(first(fails), false, b.depth), format!("{} space(s)", corpus.len()));
    let small = FinitePoset::all_up_to(2);
    let mut cx = None;
    for x in &small {
        for y in &small {
            let rep = check_exponential(&exponential_of(x, y));
            if let Some(c) = rep.first_fail() {
                cx.get_or_insert(json!({ "x": x.to_json(), "y": y.to_json(), "check": c.name }));
            }
        }
    }
    r.push_detail("≪ = ≺₀ on Y^X", verdict_of(cx, true, 2), format!("{} pair(s)", small.len() * small.len()));
    let mut triples = Vec::new();
    for z in &small {
        for x in &small {
            for y in &small {
                triples.push((z.clone(), x.clone(), y.clone()));
            }
        }
    }
    let (cx, count) = curry_cases(&triples, None);
    r.push_detail("ev/curry laws with uniqueness (exhaustive, ≤ 2)", verdict_of(cx, true, 2), format!("{count} map(s)"));
    if !o.quick {
        let three: Vec<FinitePoset> = FinitePoset::all_up_to_iso(3);
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        let sampled: Vec<(FinitePoset, FinitePoset, FinitePoset)> = (0..8)
            .map(|_| {
                let mut pick = || three.choose(&mut rng).expect("posets of size 3").clone();
                (pick(), pick(), pick())
            })
            .collect();
        let (cx, count) = curry_cases(&sampled, Some((o.seed, 24)));
        r.push_detail(
            "ev/curry laws with uniqueness (sampled, size 3)",
            verdict_of(cx, false, 3),
            format!("{count} map(s) over {} triple(s), seed {}", sampled.len(), o.seed),
        );
    }
    Ok(r)
}

/// Every (or a seeded sample of) monotone `f: Z ⊗ X → Y`.
fn curry_cases(triples: &[(FinitePoset, FinitePoset, FinitePoset)], sample: Option<(u64, usize)>) -> (Option<Value>, usize) {
    let mut count = 0;
    for (k, (z, x, y)) in triples.iter().enumerate() {
        let mut maps = monotone_maps(&z.product(x), y);
        if let Some((seed, n)) = sample {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            maps.shuffle(&mut rng);
            maps.truncate(n);
        }
        for f in maps {
            count += 1;
            match eval_and_curry(z, x, y, &f) {
                Ok(rep) if rep.passed() => {}
                Ok(rep) => {
                    let c = rep.first_fail().expect("failed");
                    return (Some(json!({ "z": z.to_json(), "x": x.to_json(), "y": y.to_json(), "f": f, "check": c.name })), count);
                }
                Err(e) => return (Some(json!({ "f": f, "error": e.to_string() })), count),
            }
        }
    }
    (None, count)
}

/// A mutated check must fail, and re-running it must reproduce the
/// counterexample exactly.
fn mutant(r: &mut Report, name: &str, run: &dyn Fn() -> Report) {
    let first = run();
    let Some(c) = first.first_fail().cloned() else {
        r.push(format!("{name}: caught"), Verdict::fail(json!({ "reason": "mutant survived", "report": first.to_text() })));
        return;
    };
    r.push_detail(format!("{name}: caught"), Verdict::Pass, format!("failing check: {}", c.name));
    let again = run();
    let same = again.first_fail() == Some(&c);
    r.expect(format!("{name}: counterexample replays"), same, true, 1, || json!({ "first": c, "second": again.first_fail() }));
}

fn mutations(o: &SuiteOptions) -> Result<Report> {
    let b = o.bound;
    let mut r = Report::new("mutation sensitivity");
    mutant(&mut r, "Hoare preorder mutated", &|| {
        let ord = set_order(PowerTheory::Lower, Some(Mutation::Hoare));
        powerspace_report(&FinitePoset::antichain(2), PowerTheory::Lower, &*ord, 1 << 20)
    });
    mutant(&mut r, "Smyth order reversed", &|| {
        let ord = set_order(PowerTheory::Upper, Some(Mutation::SmythReversed));
        powerspace_report(&FinitePoset::chain(2), PowerTheory::Upper, &*ord, 1 << 20)
    });
    mutant(&mut r, "⇓ replaced by ↓ on ω+1", &|| check_adjunction(&Space::omega_plus_one(), b, LowerMap::Down));
    mutant(&mut r, "interpolation-violating ≺", &|| {
        check_nab(&Nab::new(Poset::Chain(2), Prec::Table(vec![(Elem::N(0), Elem::N(1))])), b)
    });
    let _ = powerspace(&FinitePoset::chain(1), PowerTheory::Lower);
    Ok(r)
}

/// Exit code for a finished suite: 0 pass, 1 refuted, 3 budget exceeded.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    if outcomes.iter().any(|o| o.budget_exceeded) {
        3
    } else if outcomes.iter().all(Outcome::passed) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(suite("nope").is_err());
        assert_eq!(quick_suite().len(), 5);
    }

    #[test]
    fn mutated_hoare_fails_the_powerspace_oracle() {
        let o = SuiteOptions { quick: true, mutation: Some(Mutation::Hoare), ..Default::default() };
        let r = powerspace_oracles(&o).unwrap();
        assert!(!r.passed(), "{}", r.to_text());
        let clean = powerspace_oracles(&SuiteOptions { quick: true, ..Default::default() }).unwrap();
        assert!(clean.passed(), "{}", clean.to_text());
    }
}
