use serde_json::{json, Value};
use uptail_core::ap::{check_extremal_ap, ApModel};
use uptail_core::cores::{enumerate_cores, extract_core, CoreParams};
use uptail_core::cube::{mask_bits, CubeModel};
use uptail_core::extremal::{
    alpha_inequality, embedding_bound, fractional_independence, in_q_family, q_family, BoundExtra, BoundKind,
};
use uptail_core::graph::to_graph6;
use uptail_core::model::Model;
use uptail_core::moments::{
    check_markov, dependency_clusters, exact_distribution, factorial_moments, hypergeometric_janson_check,
    poisson_markov_bound, stability_check, Hypergraph,
};
use uptail_core::montecarlo::{
    detect_clique_event, detect_hub_event, sample_tail, verify_clique_event, verify_hub_event, McConfig, McModel, Plant,
};
use uptail_core::scalar::ratio_to_f64;
use uptail_core::variational::{
    build_clique, build_hub, build_interval, phase_diagram, phi_bruteforce, phi_clique_hub, phi_subcube_bruteforce,
    poisson_rate, rate_regular, theta_root, ut_upper_bound, MinimiserSet,
};
use uptail_core::{Error, Graph, Rational, Result, Scalar};

use crate::parse::{self, build_model, coord_set, model_spec};
use crate::{CheckCmd, CoresCmd, DistCmd, McCmd, ModelArgs, MomentsArgs, PhaseArgs, PhiArgs, PhiCmd, RateCmd, Verb};

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values always serialize"))
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn write_out(out: Option<&str>, text: String, summary: Value) -> Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(pretty(&summary))
        }
        None => Ok(text),
    }
}

fn positive(name: &str, q: &Rational) -> Result<()> {
    if *q <= Rational::from_count(0) {
        return Err(Error::Domain(format!("{name} must be positive")));
    }
    Ok(())
}

impl ModelArgs {
    fn build(&self) -> Result<Model<Rational>> {
        build_model(&model_spec(&self.model)?, self.n, self.k, parse::rational(&self.p)?)
    }

    fn cube(&self) -> Result<CubeModel<Rational>> {
        self.build()?.cube()
    }
}

pub(crate) fn dispatch(verb: Verb) -> Result<String> {
    match verb {
        Verb::Rate(cmd) => rate(cmd),
        Verb::Phi(cmd) => phi(cmd),
        Verb::Dist(DistCmd::Exact { model, delta }) => dist(&model, delta.as_deref()),
        Verb::Moments(args) => moments(&args),
        Verb::Cores(cmd) => cores(cmd),
        Verb::Mc(cmd) => mc(cmd),
        Verb::Check(cmd) => check(cmd),
        Verb::PhaseDiagram(args) => phase(&args),
    }
}

fn minimiser_json(m: &MinimiserSet<f64>) -> Value {
    json!({
        "phi": m.phi,
        "argmins": m.argmins,
        "x_star": m.x_star,
        "label": m.label(),
    })
}

fn rate(cmd: RateCmd) -> Result<String> {
    match cmd {
        RateCmd::Clique { r, delta, c } => {
            let m = phi_clique_hub(r, parse::real(&delta)?, parse::real(&c)?)?;
            Ok(pretty(&minimiser_json(&m)))
        }
        RateCmd::Regular { pattern, delta, c } => {
            let h = parse::pattern(&pattern)?;
            let d = parse::real(&delta)?;
            let m = rate_regular(&h, d, parse::real(&c)?)?;
            let mut v = minimiser_json(&m);
            v["theta"] = json!(theta_root(&h, d)?);
            v["pattern"] = json!(to_graph6(&h));
            Ok(pretty(&v))
        }
        RateCmd::Ap { k, delta, n, p } => {
            let d = parse::real(&delta)?;
            if !(d > 0.0) || !d.is_finite() || k < 3 {
                return Err(Error::Domain("need k ≥ 3 and finite δ > 0".into()));
            }
            let mut v = json!({ "k": k, "delta": d, "normalised_rate": d.sqrt() });
            match (n, p) {
                (Some(n), Some(p)) => {
                    let model = ApModel::new(n, k, parse::rational(&p)?)?;
                    let (pf, mean) = (ratio_to_f64(&model.p), model.mean().as_f64());
                    let scale = n as f64 * pf.powf(k as f64 / 2.0) * (1.0 / pf).ln();
                    v["n"] = json!(n);
                    v["mean"] = json!(model.mean().render());
                    v["scale"] = json!(scale);
                    v["localised_rate"] = json!(d.sqrt() * scale);
                    v["poisson_rate"] = json!(poisson_rate(d, mean)?);
                }
                (None, None) => {}
                _ => return Err(Error::Domain("--n and --p go together".into())),
            }
            Ok(pretty(&v))
        }
    }
}

fn phi(cmd: PhiCmd) -> Result<String> {
    match cmd {
        PhiCmd::Brute(args) => phi_solve(&args, false),
        PhiCmd::Subcube(args) => phi_solve(&args, true),
        PhiCmd::Construct { model, delta, kind } => {
            let d = parse::rational(&delta)?;
            let w = match (kind.as_str(), model.build()?) {
                ("clique", Model::Subgraph(m)) => build_clique(&m, &d)?,
                ("hub", Model::Subgraph(m)) => build_hub(&m, &d)?,
                ("interval", Model::Ap(m)) => build_interval(&m, &d)?,
                ("clique" | "hub" | "interval", _) => {
                    return Err(Error::Unsupported(format!("{kind} needs a {} model", if kind == "interval" { "progression" } else { "subgraph" })))
                }
                _ => return Err(Error::Parse { offset: 0, msg: format!("unknown construction `{kind}`") }),
            };
            Ok(pretty(&w.to_json()))
        }
    }
}

fn phi_solve(args: &PhiArgs, subcube: bool) -> Result<String> {
    let cube = args.model.cube()?;
    let d = parse::rational(&args.delta)?;
    positive("δ", &d)?;
    let w = if subcube { phi_subcube_bruteforce(&cube, &d, args.budget)? } else { phi_bruteforce(&cube, &d, args.budget)? };
    let mut v = w.to_json();
    if let Some(eps) = &args.eps {
        let e = parse::rational(eps)?;
        positive("ε", &e)?;
        let shifted = d + e.clone();
        let w2 = if subcube { phi_subcube_bruteforce(&cube, &shifted, args.budget)? } else { phi_bruteforce(&cube, &shifted, args.budget)? };
        let ut = ut_upper_bound(&cube, ratio_to_f64(&e), w2.log_cost)?;
        v["ut_upper_bound"] = json!({ "value": ut.value, "degenerate": ut.degenerate, "phi_shifted": w2.log_cost });
    }
    Ok(pretty(&v))
}

fn dist(model: &ModelArgs, delta: Option<&str>) -> Result<String> {
    let cube = model.cube()?;
    let d = exact_distribution(&cube)?;
    let mut v = d.to_json();
    let mu = cube.mean();
    v["mean"] = json!(mu.render());
    if let Some(delta) = delta {
        let delta = parse::rational(delta)?;
        positive("δ", &delta)?;
        let threshold = (Rational::from_count(1) + delta) * mu;
        v["threshold"] = json!(threshold.render());
        v["tail"] = json!(d.tail_ge(&threshold).render());
    }
    Ok(pretty(&v))
}

fn moments(args: &MomentsArgs) -> Result<String> {
    let cube = args.model.cube()?;
    if args.census {
        return census(&cube, args);
    }
    let fm = factorial_moments(&cube, args.t_max)?;
    let render = |v: &Option<Vec<Rational>>| v.as_ref().map(|m| m.iter().map(|x| x.render()).collect::<Vec<_>>());
    let mu = cube.mean();
    let mut v = json!({
        "mean": mu.render(),
        "from_dist": render(&fm.from_dist),
        "from_tuples": render(&fm.from_tuples),
    });
    if let Some(delta) = &args.delta {
        let delta = parse::rational(delta)?;
        positive("δ", &delta)?;
        let x = (Rational::from_count(1) + delta.clone()) * mu.clone();
        let mut bounds = Vec::new();
        let mut t = 1;
        while t <= args.t_max && Rational::from_count(t as u64) <= x {
            bounds.push(to_value(poisson_markov_bound(&cube, &delta, t)?));
            t += 1;
        }
        v["markov_bounds"] = json!(bounds);
        if let Ok(d) = exact_distribution(&cube) {
            v["markov_checks"] = to_value(check_markov(&d, &mu, &delta));
        }
    }
    write_out(args.out.as_deref(), pretty(&v), json!({ "out": args.out }))
}

fn census(cube: &CubeModel<Rational>, args: &MomentsArgs) -> Result<String> {
    let h = Hypergraph::from_cube(cube)?;
    let c = dependency_clusters(&h, &cube.p, args.s_max, args.budget);
    if !c.complete {
        return Err(Error::Budget {
            msg: format!("cluster census stopped after {} connected sets", c.enumerated),
            partial: Some(json!({ "enumerated": c.enumerated })),
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.into());
    if c.by_size_km.is_empty() {
        w.write_record(["s", "expectation"]).map_err(io)?;
        for (s, e) in &c.by_size {
            w.write_record([s.to_string(), e.render()]).map_err(io)?;
        }
    } else {
        w.write_record(["s", "k", "m", "expectation"]).map_err(io)?;
        for ((s, k, m), e) in &c.by_size_km {
            w.write_record([s.to_string(), k.to_string(), m.to_string(), e.render()]).map_err(io)?;
        }
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("CSV of ASCII fields");
    let rows = text.lines().count() - 1;
    write_out(args.out.as_deref(), text, json!({ "out": args.out, "rows": rows }))
}

fn cores(cmd: CoresCmd) -> Result<String> {
    match cmd {
        CoresCmd::Enumerate { model, delta, eps, k_factor, phi_plus, m, budget } => {
            let cube = model.cube()?;
            let params =
                CoreParams::new(parse::rational(&delta)?, parse::rational(&eps)?, parse::real(&k_factor)?, parse::real(&phi_plus)?)?;
            let report = enumerate_cores(&cube, &params, m, budget)?;
            Ok(pretty(&report.to_json(&cube)))
        }
        CoresCmd::Extract { model, set, s } => {
            let cube = model.cube()?;
            let seed = coord_set(&cube, &set)?;
            let s = parse::rational(&s)?;
            let ex = extract_core(&cube, seed, &s)?;
            Ok(pretty(&json!({
                "core": cube.payload(ex.core),
                "core_size": mask_bits(ex.core).count(),
                "removed": ex.removed.iter().map(|&i| cube.label(i)).collect::<Vec<_>>(),
                "threshold": ex.threshold.render(),
                "conditional_mean": cube.conditional_mean(ex.core, 0).render(),
            })))
        }
    }
}

fn mc(cmd: McCmd) -> Result<String> {
    match cmd {
        McCmd::Sample { model, delta, samples, seed, plant } => {
            let built = model.build()?;
            let mc_model = McModel::from_model(&built)?;
            let plant = match (&plant, &mc_model) {
                (None, _) => None,
                (Some(text), McModel::Cube(cube)) => Some(Plant::Coords(coord_set(cube, text)?)),
                (Some(text), McModel::Graph(m)) => Some(Plant::Graph(Graph::from_edges(m.n, &parse::edge_list(text)?)?)),
            };
            let delta = parse::rational(&delta)?;
            positive("δ", &delta)?;
            let cfg = McConfig { model: mc_model, delta, samples, seed, plant };
            Ok(pretty(&sample_tail(&cfg)?.to_json()))
        }
        McCmd::Detect { event, graph, eps, x, p, r } => {
            let g = parse::pattern(&graph)?;
            let (eps, x, p) = (parse::real(&eps)?, parse::real(&x)?, parse::real(&p)?);
            let (found, verified) = match event.as_str() {
                "clique" => {
                    let u = detect_clique_event(&g, eps, x, p, r)?;
                    let ok = u.as_ref().map(|u| verify_clique_event(&g, u, eps, x, p, r));
                    (u, ok)
                }
                "hub" => {
                    let u = detect_hub_event(&g, eps, x, p, r)?;
                    let ok = u.as_ref().map(|u| verify_hub_event(&g, u, eps, x, p, r));
                    (u, ok)
                }
                _ => return Err(Error::Parse { offset: 0, msg: format!("unknown event `{event}`") }),
            };
            Ok(pretty(&json!({ "event": event, "holds": found.is_some(), "witness": found, "verified": verified })))
        }
    }
}

fn check(cmd: CheckCmd) -> Result<String> {
    match cmd {
        CheckCmd::ExtremalAp { n, k } => Ok(pretty(&to_value(check_extremal_ap(n, k)?))),
        CheckCmd::Bounds { kind, j, g, edge, sub, q, s, u } => {
            let kind = BoundKind::parse(&kind)?;
            let (j, g) = (parse::pattern(&j)?, parse::pattern(&g)?);
            let extra = if let Some(e) = edge {
                match parse::edge_list(&e)?.as_slice() {
                    [(a, b)] => BoundExtra::Edge(*a, *b),
                    _ => return Err(Error::Parse { offset: 0, msg: "--edge takes one edge u-v".into() }),
                }
            } else if let Some(sub) = sub {
                BoundExtra::Subgraph(parse::pattern(&sub)?)
            } else if let (Some(q), Some(s)) = (&q, s) {
                let u = u.as_deref().map(parse::usize_list).transpose()?;
                BoundExtra::Stars { q: parse::rational(q)?, s, u }
            } else {
                BoundExtra::None
            };
            Ok(pretty(&to_value(embedding_bound(kind, &j, &g, &extra)?)))
        }
        CheckCmd::Alpha { graph, host } => {
            let j = parse::pattern(&graph)?;
            let mut v = to_value(fractional_independence(&j));
            if let Some(host) = host {
                let h = parse::pattern(&host)?;
                let family = q_family(&h)?;
                let ineq = alpha_inequality(&j.without_isolated(), h.max_degree());
                v["family"] = json!(family.iter().map(to_graph6).collect::<Vec<_>>());
                v["in_family"] = json!(in_q_family(&h, &j.without_isolated()));
                v["inequality"] = json!({
                    "e_j": ineq.e_j,
                    "middle_twice": ineq.middle_twice,
                    "right_twice": ineq.right_twice,
                    "first_tight": ineq.first_tight,
                    "both_tight": ineq.both_tight,
                });
            }
            Ok(pretty(&v))
        }
        CheckCmd::Stability { model, delta, eps, ell } => {
            let cube = model.cube()?;
            let r = stability_check(&cube, &parse::rational(&delta)?, &parse::rational(&eps)?, ell)?;
            Ok(pretty(&to_value(r.to_json())))
        }
        CheckCmd::Janson { family, t, s, eps } => {
            let fam: Vec<Vec<usize>> = family.split(';').map(parse::usize_list).collect::<Result<_>>()?;
            let r = hypergeometric_janson_check(&fam, t, s, &parse::rational(&eps)?)?;
            Ok(pretty(&to_value(r.to_json())))
        }
    }
}

fn phase(args: &PhaseArgs) -> Result<String> {
    let rows = phase_diagram(args.r, &parse::grid(&args.delta)?, &parse::grid(&args.c)?)?;
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(|e| Error::Io(e.into()))?;
    }
    if rows.is_empty() {
        w.write_record(["delta", "c", "phi", "argmin_label"]).map_err(|e| Error::Io(e.into()))?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("CSV of ASCII fields");
    write_out(args.out.as_deref(), text, json!({ "out": args.out, "rows": rows.len() }))
}
