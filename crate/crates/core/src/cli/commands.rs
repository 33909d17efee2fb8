use serde_json::{json, Value};

use super::{Command, Params, Report};
use crate::bridge::estimate_event_probability;
use crate::error::{Error, Result};
use crate::exactlaws::series::rat_to_string;
use crate::exactlaws::{
    approx, hull_perimeter_law, n_trees_law_eps, phi, pi, qtr_counts, theta_law, ExactRational, LawTable,
};
use crate::geometry::{cycle_length_tail, enumerate_truncated, hull_volume_mc, ENUMERATION_CAP};
use crate::rng::{run_shards, RngStream};
use crate::skeleton::{count_max_height_trees, HullVariant, SkeletonSampler};
use crate::stats::{goodness_of_fit, merge_histograms, GoodnessOfFit};

const MIN_MC_TRIALS: u64 = 1000;
const HARD_FAILURE_P: f64 = 1e-4;

/// Runs one subcommand and returns its report without writing anything.
pub fn execute(command: &Command) -> Result<Report> {
    let p = command.params();
    if !(p.tail_eps > 0.0 && p.tail_eps < 1.0) {
        return Err(Error::Invalid("--tail-eps must lie in (0, 1)".into()));
    }
    match command {
        Command::Laws(p) => laws(p),
        Command::Mc(p) => mc(p),
        Command::Volume(p) => volume(p),
        Command::Cycles(p) => cycles(p),
        Command::Bridge(p) => bridge(p),
        Command::Enumerate(p) => enumerate(p),
        Command::Selftest(_) => selftest(),
    }
}

fn positive(name: &str, v: Option<usize>) -> Result<Option<usize>> {
    match v {
        Some(0) => Err(Error::Invalid(format!("--{name} must be positive"))),
        v => Ok(v),
    }
}

fn rational_cells(x: &ExactRational) -> [Value; 3] {
    [json!(x.numer().to_string()), json!(x.denom().to_string()), json!(approx(x))]
}

fn push_law(report: &mut Report, name: &str, param: &str, law: &LawTable, rows: Option<usize>) {
    let cum = law.cumulative();
    let last = rows.map_or(law.cutoff(), |r| r.min(law.cutoff()));
    for (v, m) in law.masses().iter().enumerate().take(last + 1) {
        let [num, den, f] = rational_cells(m);
        report.push(vec![json!(name), json!(param), json!(v), num, den, f, json!(approx(&cum[v]))]);
    }
}

fn laws(p: &Params) -> Result<Report> {
    let radius = positive("radius", p.radius)?;
    let pmax = positive("pmax", p.pmax)?;
    let mut report = Report::new(&["table", "param", "value", "mass_num", "mass_den", "mass_float", "cumulative_float"]);
    let mut extra = serde_json::Map::new();

    let theta = theta_law(pmax.unwrap_or(20))?;
    push_law(&mut report, "theta", "", &theta, None);
    extra.insert("theta".into(), serde_json::to_value(theta.to_json())?);

    if let Some(r) = radius {
        for j in 1..=r {
            let [num, den, f] = rational_cells(&pi(j));
            report.push(vec![json!("pi"), json!(""), json!(j), num, den, f, Value::Null]);
        }
        let hull = hull_perimeter_law(r, p.tail_eps)?;
        report.notes.push(format!("hull r={r}: cutoff {} tail bound {:e}", hull.cutoff(), approx(hull.tail_bound())));
        push_law(&mut report, "hull", &format!("r={r}"), &hull, pmax);
        extra.insert("hull".into(), serde_json::to_value(hull.to_json())?);
        for q in 1..=pmax.unwrap_or(10) {
            let [num, den, f] = rational_cells(&phi(r, q)?);
            report.push(vec![json!("phi"), json!(format!("u={r}")), json!(q), num, den, f, Value::Null]);
        }
    }
    match (positive("inner", p.inner)?, positive("outer", p.outer)?) {
        (Some(u), Some(w)) => {
            let (nb1, nb2, law) = n_trees_law_eps(u, w, p.tail_eps)?;
            push_law(&mut report, "n_trees", &format!("u={u},w={w}"), &law, pmax);
            extra.insert(
                "n_trees".into(),
                json!({
                    "nb1": {"shape": rat_to_string(&nb1.shape), "success": rat_to_string(&nb1.success)},
                    "nb2": {"shape": rat_to_string(&nb2.shape), "success": rat_to_string(&nb2.success)},
                    "law": law.to_json(),
                }),
            );
        }
        (None, None) => {}
        _ => return Err(Error::Invalid("--inner and --outer go together".into())),
    }
    report.extra = Some(Value::Object(extra));
    Ok(report)
}

fn law_probs(law: &LawTable) -> Vec<f64> {
    law.masses().iter().map(approx).collect()
}

fn gof_row(name: &str, g: &GoodnessOfFit, p1: f64, p1_exact: f64) -> Vec<Value> {
    vec![json!(name), json!(g.n), json!(g.chi2), json!(g.dof), json!(g.p_value), json!(g.tv), json!(p1), json!(p1_exact)]
}

fn mc(p: &Params) -> Result<Report> {
    let trials = p.trials.unwrap_or(10_000);
    if trials < MIN_MC_TRIALS {
        return Err(Error::Invalid(format!("--trials must be at least {MIN_MC_TRIALS}")));
    }
    let mut report =
        Report::new(&["law", "trials", "chi2", "dof", "p_value", "tv", "p1_empirical", "p1_exact"]);
    let mut ran = false;
    if let Some(r) = positive("radius", p.radius)? {
        let hist = merge_histograms(run_shards(p.seed, trials, |rng, n| {
            let mut s = SkeletonSampler::new();
            let mut h = Vec::new();
            for _ in 0..n {
                let q = s.hull_skeleton(r, HullVariant::Rotated, rng)?.q();
                if h.len() <= q {
                    h.resize(q + 1, 0);
                }
                h[q] += 1;
            }
            Ok(h)
        })?);
        let probs = law_probs(&hull_perimeter_law(r, p.tail_eps)?);
        let g = goodness_of_fit(&hist, &probs);
        let p1 = hist.get(1).copied().unwrap_or(0) as f64 / trials as f64;
        report.failed |= g.p_value < HARD_FAILURE_P;
        report.push(gof_row(&format!("H_{r}"), &g, p1, probs[1]));
        ran = true;
    }
    match (positive("inner", p.inner)?, positive("outer", p.outer)?) {
        (Some(u), Some(w)) => {
            let parts = run_shards(p.seed.wrapping_add(1 << 32), trials, |rng, n| {
                let mut s = SkeletonSampler::new();
                let (mut hn, mut hp) = (Vec::new(), Vec::new());
                for _ in 0..n {
                    let f = s.annulus_skeleton(u, w, rng)?;
                    for (h, v) in [(&mut hn, count_max_height_trees(&f)), (&mut hp, f.p())] {
                        if h.len() <= v {
                            h.resize(v + 1, 0);
                        }
                        h[v] += 1;
                    }
                }
                Ok((hn, hp))
            })?;
            let (hn, hp): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
            let (hn, hp) = (merge_histograms(hn), merge_histograms(hp));
            let (_, _, nlaw) = n_trees_law_eps(u, w, p.tail_eps)?;
            let nprobs = law_probs(&nlaw);
            let g = goodness_of_fit(&hn, &nprobs);
            let p1 = hn.get(1).copied().unwrap_or(0) as f64 / trials as f64;
            let sigma = (nprobs[1] * (1.0 - nprobs[1]) / trials as f64).sqrt();
            report.notes.push(format!("P(N=1): empirical {p1} exact {} z {:.3}", nprobs[1], (p1 - nprobs[1]) / sigma));
            report.failed |= g.p_value < HARD_FAILURE_P;
            report.push(gof_row(&format!("N_{u},{w}"), &g, p1, nprobs[1]));

            let hprobs = law_probs(&hull_perimeter_law(u, p.tail_eps)?);
            let g = goodness_of_fit(&hp, &hprobs);
            let p1 = hp.get(1).copied().unwrap_or(0) as f64 / trials as f64;
            report.failed |= g.p_value < HARD_FAILURE_P;
            report.push(gof_row(&format!("bottom_{u},{w}"), &g, p1, hprobs[1]));
            ran = true;
        }
        (None, None) => {}
        _ => return Err(Error::Invalid("--inner and --outer go together".into())),
    }
    if !ran {
        return Err(Error::Invalid("mc needs --radius or --inner/--outer".into()));
    }
    Ok(report)
}

fn volume(p: &Params) -> Result<Report> {
    let radii = match positive("radius", p.radius)? {
        Some(r) => vec![r],
        None => vec![4, 8, 16, 32],
    };
    let trials = p.trials.unwrap_or(10_000);
    let mut report = Report::new(&["r", "trials", "mean", "stderr", "scaled", "seed"]);
    for r in radii {
        let e = hull_volume_mc(r, trials, p.seed)?;
        report.push(vec![json!(e.r), json!(e.trials), json!(e.mean), json!(e.stderr), json!(e.scaled), json!(e.seed)]);
    }
    Ok(report)
}

fn cycles(p: &Params) -> Result<Report> {
    let r = positive("R", p.big_r)?.ok_or_else(|| Error::Invalid("cycles needs --R".into()))?;
    let trials = p.trials.unwrap_or(10_000);
    let trials = usize::try_from(trials).map_err(|_| Error::Invalid("--trials too large".into()))?;
    let t = cycle_length_tail(r, trials, &mut RngStream::new(p.seed))?;
    let sigma = (t.p_one_exact * (1.0 - t.p_one_exact) / trials as f64).sqrt();
    report_cycles(t, sigma)
}

fn report_cycles(t: crate::geometry::TailReport, sigma: f64) -> Result<Report> {
    let mut report = Report::new(&["R", "trials", "mean", "p50", "p95", "max", "seed"]);
    report.notes.push(format!(
        "P(N=1): empirical {} exact {} z {:.3}",
        t.p_one,
        t.p_one_exact,
        (t.p_one - t.p_one_exact) / sigma
    ));
    report.notes.push(format!("(pi_2R - pi_R)/(1 - pi_R) = {} <= 3/4: {}", rat_to_string(&t.ratio), t.ratio_ok));
    for (a, f) in &t.tail {
        report.notes.push(format!("P(2N >= {a}) = {f}"));
    }
    report.extra = Some(json!({ "tail": t.tail, "p_one": t.p_one, "p_one_exact": t.p_one_exact }));
    report.push(vec![json!(t.r), json!(t.trials), json!(t.mean), json!(t.p50), json!(t.p95), json!(t.max), json!(t.seed)]);
    Ok(report)
}

fn bridge(p: &Params) -> Result<Report> {
    let big_k = positive("K", p.big_k)?.ok_or_else(|| Error::Invalid("bridge needs --K".into()))?;
    let ks: Vec<usize> = match p.k {
        Some(k) if k < 2 => return Err(Error::Invalid("--k must be at least 2".into())),
        Some(k) => vec![k],
        None => (2..=big_k).step_by(2).collect(),
    };
    let r = positive("r", p.r)?.unwrap_or(1);
    let c = p.c.unwrap_or(1.0);
    let trials = p.trials.unwrap_or(10_000);
    let mut report = Report::new(&["k", "K", "r", "c", "trials", "hits", "p_hat", "stderr", "seed"]);
    let mut rng = RngStream::new(p.seed);
    for k in ks {
        let e = estimate_event_probability(k, big_k, r, c, trials, &mut rng)?;
        report.push(vec![
            json!(e.k),
            json!(e.big_k),
            json!(e.r),
            json!(e.c),
            json!(e.trials),
            json!(e.hits),
            json!(e.p_hat),
            json!(e.stderr),
            json!(e.seed),
        ]);
    }
    Ok(report)
}

fn enumerate(p: &Params) -> Result<Report> {
    let nmax = p.n.or(p.nmax).ok_or_else(|| Error::Invalid("enumerate needs --n".into()))?;
    if nmax > ENUMERATION_CAP {
        return Err(Error::CapExceeded { n: nmax, cap: ENUMERATION_CAP });
    }
    let ps: Vec<usize> = match p.p {
        Some(0) => return Err(Error::Invalid("--p must be positive".into())),
        Some(q) => vec![q],
        None => (1..=nmax.max(1)).collect(),
    };
    let ns: Vec<usize> = if p.n.is_some() { vec![nmax] } else { (0..=nmax).collect() };
    let pmax = *ps.iter().max().unwrap();
    let dp = qtr_counts(nmax, pmax)?;
    let mut report = Report::new(&["n", "p", "count", "dp_count"]);
    let mut dumps = Vec::new();
    for &n in &ns {
        for &q in &ps {
            let maps = enumerate_truncated(n, q)?;
            let expected = &dp[n][q];
            report.failed |= expected.to_string() != maps.len().to_string();
            report.push(vec![json!(n), json!(q), json!(maps.len()), json!(expected.to_string())]);
            for m in &maps {
                dumps.push(json!({ "n": n, "p": q, "next": m.map.rotation(), "twin": m.map.twin, "root": m.root }));
            }
        }
    }
    report.extra = Some(json!({ "maps": dumps }));
    Ok(report)
}

fn selftest() -> Result<Report> {
    let mut report = Report::new(&["id", "name", "pass", "detail"]);
    for c in crate::selftest::run_all() {
        report.failed |= !c.pass;
        report.push(vec![json!(c.id), json!(c.name), json!(c.pass), json!(c.detail)]);
        eprintln!("criterion {} took {:.2} s", c.id, c.seconds);
    }
    Ok(report)
}
