use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dirspace::algebra::{
    algebra_equalizer, algebra_product, check_algebra, check_preservation, equalizer_universal, finite_of, free_ordered_algebra,
    powerspace_report, product_universal, theory_order, verify_universal_property, Algebra, FreeAlgebra, PowerTheory, Theory,
};
use dirspace::bposet::{
    bposet_exponential, check_bposet, check_bposet_roundtrip, check_product, check_space_roundtrip, functor_g, functor_h, reflect,
    sobrification, BPoset,
};
use dirspace::dot::{powerspace_dot, space_dot};
use dirspace::elem::Elem;
use dirspace::ideal::{check_adjunction, it_product_check, make_topological_ideal, wb_ideal, LowerMap};
use dirspace::nab::{
    check_exponential, check_nab, check_normal_map, con_exponential, eval_and_curry, nab_space, space_to_nab, Nab,
};
use dirspace::order::{check_partial_order, Carrier, FinitePoset, MapRule};
use dirspace::report::{Bound, Error, Report, Result, Verdict, DEFAULT_DEPTH, DEFAULT_SAMPLE};
use dirspace::schema::{parse_document, Document};
use dirspace::space::{
    check_separate_continuity, classify, converges, coreflect, is_basis, is_directed_open, product, same_opens, way_below, Space,
    Subset, Topo,
};
use dirspace::suite::{exit_code, run_suite, suite, Mutation, Outcome, SuiteOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Check properties of directed spaces, ideal completions, b-posets,
/// abstract bases and free ordered algebras.
///
/// Inputs are JSON documents with a "schema" field; "-" reads stdin.
/// Exit codes: 0 pass, 1 refuted, 2 usage or input error, 3 budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "dirspace", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Elements and chain terms searched for witnesses on presented carriers.
    #[arg(long, default_value_t = DEFAULT_DEPTH, value_parser = positive, global = true)]
    depth: usize,
    /// Points quantified over on presented carriers.
    #[arg(long, default_value_t = DEFAULT_SAMPLE, value_parser = positive, global = true)]
    sample: usize,
    /// Term budget for free-algebra saturation.
    #[arg(long, default_value_t = 1 << 20, value_parser = positive, global = true)]
    budget: usize,
    /// Seed for sampled-instance selection.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = positive, global = true)]
    jobs: usize,
    /// Re-run and compare against a saved JSON report.
    #[arg(long, global = true)]
    replay: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    theory: Option<PowerTheory>,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spaces, convergence and way-below.
    Space {
        #[arg(value_enum)]
        verb: SpaceVerb,
        inputs: Vec<PathBuf>,
    },
    /// Topological ideals and the ideal completion.
    Ideal {
        #[arg(value_enum)]
        verb: IdealVerb,
        inputs: Vec<PathBuf>,
    },
    /// b-posets and the functors G and H.
    Bposet {
        #[arg(value_enum)]
        verb: BposetVerb,
        inputs: Vec<PathBuf>,
    },
    /// Normal abstract bases.
    Nab {
        #[arg(value_enum)]
        verb: NabVerb,
        inputs: Vec<PathBuf>,
    },
    /// Ordered algebras, free algebras and powerspaces.
    Free {
        #[arg(value_enum)]
        verb: FreeVerb,
        inputs: Vec<PathBuf>,
    },
    /// Run a regression suite.
    Suite {
        #[arg(value_parser = ["paper", "quick"])]
        name: String,
        /// Run with a deliberately broken check.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
    /// Graphviz export of a finite space or powerspace.
    Dot {
        #[arg(value_enum)]
        verb: DotVerb,
        inputs: Vec<PathBuf>,
        /// Draw only the first N points of an infinite space.
        #[arg(long)]
        prefix: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceVerb {
    Check,
    Classify,
    Converges,
    DirectedOpen,
    WayBelow,
    Coreflect,
    Product,
    Separate,
    Basis,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IdealVerb {
    Build,
    Sup,
    Wb,
    Adjunction,
    ProductCheck,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BposetVerb {
    Check,
    G,
    H,
    Roundtrip,
    Product,
    Exp,
    Reflect,
    Sobrify,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NabVerb {
    Check,
    Space,
    ToNab,
    NormalMap,
    Exp,
    EvCurry,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FreeVerb {
    CheckAlgebra,
    Product,
    Equalizer,
    Free,
    Power,
    VerifyUniversal,
    Preservation,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DotVerb {
    Space,
    Power,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// All input documents, read in order.
struct Inputs {
    docs: Vec<Document>,
    text: String,
}

impl Inputs {
    fn read(paths: &[PathBuf]) -> Result<Inputs> {
        if paths.is_empty() {
            return Err(Error::parse("inputs", "no input document given"));
        }
        let mut docs = Vec::new();
        let mut text = String::new();
        for p in paths {
            let t = read_path(p)?;
            let d = parse_document(&t).map_err(|e| match e {
                Error::Parse { node, msg } => Error::parse(format!("{}: {node}", p.display()), msg),
                other => other,
            })?;
            text.push_str(&t);
            docs.push(d);
        }
        Ok(Inputs { docs, text })
    }

    fn spaces(&self) -> Result<Vec<Space>> {
        let mut out = Vec::new();
        for d in &self.docs {
            if d.space.is_some() || d.poset.is_some() {
                out.push(d.the_space()?);
            }
            out.extend(d.spaces.iter().cloned());
        }
        Ok(out)
    }

    fn spaces_n(&self, n: usize) -> Result<Vec<Space>> {
        let s = self.spaces()?;
        if s.len() < n {
            return Err(Error::parse("spaces", format!("this command needs {n} space(s), found {}", s.len())));
        }
        Ok(s)
    }

    fn space(&self) -> Result<Space> {
        Ok(self.spaces_n(1)?.swap_remove(0))
    }

    fn collect<T: Clone>(&self, name: &str, n: usize, one: fn(&Document) -> &Option<T>, many: fn(&Document) -> &Vec<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        for d in &self.docs {
            out.extend(one(d).iter().cloned());
            out.extend(many(d).iter().cloned());
        }
        if out.len() < n {
            return Err(Error::parse(name, format!("this command needs {n} {name}(s), found {}", out.len())));
        }
        Ok(out)
    }

    fn bposets(&self, n: usize) -> Result<Vec<BPoset>> {
        self.collect("bposet", n, |d| &d.bposet, |d| &d.bposets)
    }

    fn nabs(&self, n: usize) -> Result<Vec<Nab>> {
        self.collect("nab", n, |d| &d.nab, |d| &d.nabs)
    }

    fn algebras(&self, n: usize) -> Result<Vec<Algebra>> {
        self.collect("algebra", n, |d| &d.algebra, |d| &d.algebras)
    }

    fn maps(&self, n: usize) -> Result<Vec<MapRule>> {
        self.collect("map", n, |d| &d.map, |d| &d.maps)
    }

    fn tables(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        let t: Vec<Vec<usize>> = self.docs.iter().flat_map(|d| d.tables.iter().cloned()).collect();
        if t.len() < n {
            return Err(Error::parse("tables", format!("this command needs {n} table(s), found {}", t.len())));
        }
        Ok(t)
    }

    fn points(&self, n: usize) -> Result<Vec<Elem>> {
        let p: Vec<Elem> = self.docs.iter().flat_map(|d| d.points.iter().cloned()).collect();
        if p.len() < n {
            return Err(Error::parse("points", format!("this command needs {n} point(s), found {}", p.len())));
        }
        Ok(p)
    }

    fn first<'a, T>(&'a self, name: &str, f: fn(&'a Document) -> &'a Option<T>) -> Result<&'a T> {
        self.docs.iter().find_map(|d| f(d).as_ref()).ok_or_else(|| Error::parse(name, format!("this command needs a \"{name}\" field")))
    }

    fn theory(&self) -> Result<Theory> {
        self.first("theory", |d| &d.theory).cloned()
    }

    fn finite_poset(&self) -> Result<FinitePoset> {
        let s = self.space()?;
        finite_of(&s.carrier).ok_or_else(|| Error::Unsupported("this command needs a finite poset".into()))
    }
}

fn read_path(p: &Path) -> Result<String> {
    let mut s = String::new();
    let r = if p.as_os_str() == "-" { std::io::stdin().read_to_string(&mut s).map(|_| ()) } else { std::fs::read_to_string(p).map(|t| s = t) };
    r.map_err(|e| Error::parse(p.display().to_string(), e.to_string()))?;
    Ok(s)
}

fn elems(v: &[Elem]) -> Value {
    Value::Array(v.iter().map(Elem::to_json).collect())
}

fn space_cmd(verb: SpaceVerb, inp: &Inputs, b: Bound) -> Result<Report> {
    Ok(match verb {
        SpaceVerb::Check => {
            let x = inp.space()?;
            let mut r = check_partial_order(&x, b.depth)?;
            let v = dirspace::space::View::new(&x, b);
            let mismatch = v.specialization_mismatch();
            r.expect("specialization order = carrier order", mismatch.is_none(), v.exact, b.depth, || {
                let (a, c) = mismatch.clone().unwrap_or((Elem::top(), Elem::top()));
                json!({ "x": a.to_json(), "y": c.to_json() })
            });
            r
        }
        SpaceVerb::Classify => {
            let x = inp.space()?;
            let c = classify(&x, b);
            let mut r = Report::new("classify");
            r.push("classified", Verdict::held(c.exact, c.bound));
            r.with_result(serde_json::to_value(&c).unwrap_or_default())
        }
        SpaceVerb::Converges => {
            let x = inp.space()?;
            let fam = inp.first("family", |d| &d.family)?;
            let p = inp.points(1)?;
            let (ok, v) = converges(&x, fam, &p[0], b)?;
            let mut r = Report::new("convergence");
            r.push("converges", if ok { v } else { Verdict::fail(json!({ "point": p[0].to_json() })) });
            r
        }
        SpaceVerb::DirectedOpen => {
            let x = inp.space()?;
            let u = inp.first("open", |d| &d.open)?;
            let d = is_directed_open(&x, u, b);
            let mut r = Report::new("directed-open");
            r.push("evaluated", Verdict::held(x.size().is_some(), b.depth));
            r.with_result(serde_json::to_value(&d).unwrap_or_default())
        }
        SpaceVerb::WayBelow => {
            let x = inp.space()?;
            let p = inp.points(2)?;
            let w = way_below(&x, &p[0], &p[1], b)?;
            let mut r = Report::new(format!("{} ≪ {}", p[0], p[1]));
            r.push("evaluated", Verdict::held(x.size().is_some(), b.depth));
            r.with_result(serde_json::to_value(&w).unwrap_or_default())
        }
        SpaceVerb::Coreflect => {
            let x = inp.space()?;
            let c = coreflect(&x, b);
            let mut r = Report::new("coreflection");
            let same = same_opens(&c, &x, b);
            r.push(
                "same opens as the input",
                match &same {
                    Ok(()) => Verdict::held(x.size().is_some(), b.depth),
                    Err(u) => Verdict::fail(serde_json::to_value(u).unwrap_or_default()),
                },
            );
            r.with_result(c.to_json())
        }
        SpaceVerb::Product => {
            let xs = inp.spaces_n(1)?;
            let p = product(&xs);
            let mut r = Report::new("product");
            r.push("built", Verdict::Pass);
            r.with_result(p.to_json())
        }
        SpaceVerb::Separate => {
            let xs = inp.spaces_n(3)?;
            let f = inp.maps(1)?.swap_remove(0);
            let g = move |a: &Elem, c: &Elem| f.apply_raw(&Elem::P(Box::new(a.clone()), Box::new(c.clone())));
            check_separate_continuity(&g, &xs[0], &xs[1], &xs[2], b)
        }
        SpaceVerb::Basis => {
            let x = inp.space()?;
            let sub = inp.docs.iter().find_map(|d| d.basis.clone()).unwrap_or(Subset::All);
            is_basis(&x, &sub, b)
        }
    })
}

fn ideal_cmd(verb: IdealVerb, inp: &Inputs, b: Bound) -> Result<Report> {
    Ok(match verb {
        IdealVerb::Build | IdealVerb::Sup => {
            let x = inp.space()?;
            let fam = inp.first("family", |d| &d.family)?;
            let t = make_topological_ideal(&x, fam, b)?;
            let mut r = Report::new("topological ideal");
            r.push("converges to its supremum", Verdict::held(x.size().is_some(), b.depth));
            match verb {
                IdealVerb::Sup => r.with_result(t.sup.to_json()),
                _ => r.with_result(serde_json::to_value(&t).unwrap_or_default()),
            }
        }
        IdealVerb::Wb => {
            let x = inp.space()?;
            let p = inp.points(1)?;
            let t = wb_ideal(&x, &p[0], b)?;
            let mut r = Report::new(format!("⇓{}", p[0]));
            r.push("built", Verdict::held(x.size().is_some(), b.depth));
            r.with_result(serde_json::to_value(&t).unwrap_or_default())
        }
        IdealVerb::Adjunction => check_adjunction(&inp.space()?, b, LowerMap::WayBelow),
        IdealVerb::ProductCheck => {
            let xs = inp.spaces_n(2)?;
            it_product_check(&xs[0], &xs[1], b)
        }
    })
}

fn bposet_cmd(verb: BposetVerb, inp: &Inputs, b: Bound) -> Result<Report> {
    let summary = |h: &dyn Topo, name: &str| -> Report {
        let c = classify(h, b);
        let mut r = Report::new(name.to_string());
        r.push("classified", Verdict::held(c.exact, c.bound));
        r.with_result(json!({ "points": elems(&h.prefix(b.sample)), "classification": c }))
    };
    Ok(match verb {
        BposetVerb::Check => check_bposet(&inp.bposets(1)?[0], b),
        BposetVerb::G => {
            let g = functor_g(&inp.space()?, b)?;
            let mut r = check_bposet(&g, b);
            r.subject = "G(X)".into();
            r.with_result(g.to_json())
        }
        BposetVerb::H => summary(&functor_h(&inp.bposets(1)?[0], b)?, "H(P)"),
        BposetVerb::Roundtrip => match inp.bposets(1) {
            Ok(ps) => check_bposet_roundtrip(&ps[0], b)?,
            Err(_) => check_space_roundtrip(&inp.space()?, b)?,
        },
        BposetVerb::Product => {
            let ps = inp.bposets(2)?;
            check_product(&ps[0], &ps[1], b)
        }
        BposetVerb::Exp => {
            let ps = inp.bposets(2)?;
            let e = bposet_exponential(&ps[0], &ps[1])?;
            let mut r = Report::new("exponential");
            r.push("ideal family enumerated", Verdict::held(e.exact, b.depth));
            r.with_result(json!({
                "maps": e.maps,
                "order": e.order.to_json(),
                "family": e.family.len(),
                "ideals": e.ideals,
                "principal": e.principal,
            }))
        }
        BposetVerb::Reflect => {
            let q = reflect(&inp.bposets(1)?[0])?;
            let mut r = check_bposet(&q, b);
            r.subject = "reflection".into();
            r.with_result(q.to_json())
        }
        BposetVerb::Sobrify => summary(&sobrification(&inp.bposets(1)?[0], b)?, "sobrification"),
    })
}

fn nab_cmd(verb: NabVerb, inp: &Inputs, b: Bound) -> Result<Report> {
    Ok(match verb {
        NabVerb::Check => check_nab(&inp.nabs(1)?[0], b),
        NabVerb::Space => {
            let a = &inp.nabs(1)?[0];
            let mut r = check_nab(a, b);
            r.subject = "ideal space".into();
            if r.passed() {
                r = r.with_result(nab_space(a, b)?.to_json());
            }
            r
        }
        NabVerb::ToNab => {
            let a = space_to_nab(&inp.space()?, b)?;
            let mut r = check_nab(&a, b);
            r.subject = "abstract basis of a space".into();
            r.with_result(a.to_json())
        }
        NabVerb::NormalMap => {
            let ns = inp.nabs(2)?;
            check_normal_map(&inp.maps(1)?[0], &ns[0], &ns[1], b)
        }
        NabVerb::Exp => {
            let xs = inp.spaces_n(2)?;
            let e = con_exponential(&xs[0], &xs[1])?;
            check_exponential(&e).with_result(json!({ "maps": e.maps, "order": e.order.to_json() }))
        }
        NabVerb::EvCurry => {
            let xs = inp.spaces_n(3)?;
            let f = dirspace::nab::finite_of;
            eval_and_curry(&f(&xs[0])?, &f(&xs[1])?, &f(&xs[2])?, &inp.tables(1)?[0])?
        }
    })
}

fn free_cmd(verb: FreeVerb, inp: &Inputs, b: Bound, theory: Option<PowerTheory>, budget: usize) -> Result<Report> {
    let need_theory = || theory.ok_or_else(|| Error::parse("--theory", "this command needs --theory lower|upper|convex"));
    let any_theory = || match theory {
        Some(t) => Ok(t.theory()),
        None => inp.theory(),
    };
    Ok(match verb {
        FreeVerb::CheckAlgebra => check_algebra(&inp.algebras(1)?[0], &any_theory()?),
        FreeVerb::Product => {
            let algs = inp.algebras(1)?;
            let p = algebra_product(&algs[0].sig, &algs)?;
            let mut r = Report::new("product algebra");
            if algs.len() == 2 {
                r.absorb("", product_universal(&algs[0], &algs[1], &algs));
            } else {
                r.push("built", Verdict::Pass);
            }
            r.with_result(p.to_json())
        }
        FreeVerb::Equalizer => {
            let algs = inp.algebras(2)?;
            let t = inp.tables(2)?;
            let e = algebra_equalizer(&algs[0], &algs[1], &t[0], &t[1])?;
            let r = equalizer_universal(&algs[0], &algs[1], &t[0], &t[1], &algs)?;
            r.with_result(json!({ "algebra": e.algebra.to_json(), "embed": e.embed }))
        }
        FreeVerb::Free => {
            let x = inp.finite_poset()?;
            let th = any_theory()?;
            let f = free_ordered_algebra(&x, &th, b.depth, budget)?;
            let mut r = Report::new(format!("free {} algebra", th.name));
            r.expect("saturation stabilizes", f.stabilized, true, b.depth, || json!({ "rounds": f.log.len() }));
            r.with_result(json!({
                "classes": f.reps.iter().map(|t| t.show(&th.sig)).collect::<Vec<_>>(),
                "order": f.order.to_json(),
                "unit": f.unit,
                "log": f.log,
                "algebra": f.algebra.as_ref().map(Algebra::to_json),
            }))
        }
        FreeVerb::Power => {
            let x = inp.finite_poset()?;
            let t = need_theory()?;
            powerspace_report(&x, t, &theory_order(t), budget)
        }
        FreeVerb::VerifyUniversal => {
            let x = inp.finite_poset()?;
            let th = any_theory()?;
            let f = free_ordered_algebra(&x, &th, b.depth, budget)?;
            let algebra = f.algebra.ok_or_else(|| Error::Precondition("the free algebra did not stabilize".into()))?;
            let fa = FreeAlgebra { algebra, unit: f.unit };
            verify_universal_property(&x, &fa, &th, &inp.algebras(1)?[0])?
        }
        FreeVerb::Preservation => check_preservation(&inp.space()?, need_theory()?, b)?,
    })
}

fn render(r: &Report, f: Format) -> String {
    match f {
        Format::Text => r.to_text(),
        Format::Json => serde_json::to_string_pretty(r).unwrap_or_default() + "\n",
    }
}

fn emit(out: &Option<PathBuf>, s: &str) -> std::result::Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, s).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

/// Checks whose verdicts differ between two runs, ignoring timing.
fn replay_diff(old: &Report, new: &Report) -> Vec<Value> {
    let mut diffs = Vec::new();
    for c in &new.checks {
        match old.check(&c.name) {
            Some(o) if o.verdict == c.verdict => {}
            o => diffs.push(json!({ "check": c.name, "saved": o.map(|o| &o.verdict), "now": c.verdict })),
        }
    }
    for o in &old.checks {
        if new.check(&o.name).is_none() {
            diffs.push(json!({ "check": o.name, "saved": o.verdict, "now": null }));
        }
    }
    diffs
}

fn replay_report(path: &Path, new: &Report) -> Result<Report> {
    let text = read_path(path)?;
    let old: Report = serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    let diffs = replay_diff(&old, new);
    let mut r = Report::new(format!("replay of {}", path.display()));
    r.expect("verdicts and counterexamples reproduced", diffs.is_empty(), true, 1, || Value::Array(diffs.clone()));
    if old.digest != new.digest {
        r.push("same input digest", Verdict::fail(json!({ "saved": old.digest, "now": new.digest })));
    }
    Ok(r)
}

fn code_of(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => 3,
        _ => 2,
    }
}

fn run_suite_cmd(cli: &Cli, name: &str, mutate: Option<Mutation>) -> std::result::Result<u8, (u8, String)> {
    let cs = suite(name).map_err(|e| (2, e.to_string()))?;
    let o = SuiteOptions {
        bound: Bound { depth: cli.depth, sample: cli.sample },
        seed: cli.seed,
        jobs: cli.jobs,
        quick: name == "quick",
        budget: cli.budget,
        mutation: mutate,
    };
    let outcomes = run_suite(&cs, &o);
    let mut code = exit_code(&outcomes) as u8;
    let mut text = match cli.format {
        Format::Text => {
            let mut s = String::new();
            for out in &outcomes {
                s.push_str(&out.line());
                s.push('\n');
                if !out.passed() {
                    if let Some(r) = &out.report {
                        s.push_str(&r.to_text());
                    }
                }
            }
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            s.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
            s
        }
        Format::Json => serde_json::to_string_pretty(&outcomes).unwrap_or_default() + "\n",
    };
    if let Some(p) = &cli.replay {
        let saved = read_path(p).map_err(|e| (2, e.to_string()))?;
        let old: Vec<Outcome> = serde_json::from_str(&saved).map_err(|e| (2, format!("{}: {e}", p.display())))?;
        let mut r = Report::new(format!("replay of {}", p.display()));
        for new in &outcomes {
            let Some(prev) = old.iter().find(|o| o.id == new.id) else { continue };
            let diffs = match (&prev.report, &new.report) {
                (Some(a), Some(b)) => replay_diff(a, b),
                (a, b) => if a.is_some() == b.is_some() { Vec::new() } else { vec![json!({ "report": "missing on one side" })] },
            };
            r.expect(format!("criterion {}", new.id), diffs.is_empty(), true, 1, || Value::Array(diffs.clone()));
        }
        text = render(&r, cli.format);
        code = if r.passed() { 0 } else { 1 };
    }
    emit(&cli.out, &text).map_err(|e| (2, e))?;
    Ok(code)
}

fn run(cli: &Cli) -> std::result::Result<u8, (u8, String)> {
    let b = Bound { depth: cli.depth, sample: cli.sample };
    let err = |e: Error| (code_of(&e), e.to_string());
    let (inputs, report) = match &cli.command {
        Command::Suite { name, mutate } => return run_suite_cmd(cli, name, *mutate),
        Command::Dot { verb, inputs, prefix } => {
            let inp = Inputs::read(inputs).map_err(err)?;
            let s = match verb {
                DotVerb::Space => space_dot(&inp.space().map_err(err)?, *prefix, b),
                DotVerb::Power => {
                    let t = cli.theory.ok_or_else(|| (2, "dot power needs --theory lower|upper|convex".to_string()))?;
                    inp.finite_poset().map(|x| powerspace_dot(&x, t))
                }
            }
            .map_err(err)?;
            emit(&cli.out, &s).map_err(|e| (2, e))?;
            return Ok(0);
        }
        Command::Space { verb, inputs } => {
            let inp = Inputs::read(inputs).map_err(err)?;
            let r = space_cmd(*verb, &inp, b);
            (inp, r)
        }
        Command::Ideal { verb, inputs } => {
            let inp = Inputs::read(inputs).map_err(err)?;
            let r = ideal_cmd(*verb, &inp, b);
            (inp, r)
        }
        Command::Bposet { verb, inputs } => {
            let inp = Inputs::read(inputs).map_err(err)?;
            let r = bposet_cmd(*verb, &inp, b);
            (inp, r)
        }
        Command::Nab { verb, inputs } => {
            let inp = Inputs::read(inputs).map_err(err)?;
            let r = nab_cmd(*verb, &inp, b);
            (inp, r)
        }
        Command::Free { verb, inputs } => {
            let inp = Inputs::read(inputs).map_err(err)?;
            let r = free_cmd(*verb, &inp, b, cli.theory, cli.budget);
            (inp, r)
        }
    };
    let report = report.map_err(err)?.with_digest(&inputs.text);
    let shown = match &cli.replay {
        Some(p) => replay_report(p, &report).map_err(err)?,
        None => report,
    };
    emit(&cli.out, &render(&shown, cli.format)).map_err(|e| (2, e))?;
    Ok(if shown.passed() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(c) => ExitCode::from(c),
        Err((c, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(c)
        }
    }
}
