use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use massop::fock::{
    evolve, hamiltonian_spectrum, triplet_construction, BlockState, Grid, GridConfig, StateSnapshot, Variant,
};
use massop::masslab::{
    eval_exact, fit_formula, kappa_spectrum, mass_from_kappa, parse_rational, read_particle_table,
    solve_triplet_coeffs, von_neumann_generator, FormulaKind, QuantumNumbers, Target,
};
use massop::measure::{MassMeasure, Of};
use massop::relations::{
    verify_higher_products, verify_jacobi, verify_poincare_table, verify_relation, Report, RelationId, SuiteConfig,
};
use massop::wick::{bracket, normal_order};
use massop::{fmt_q, parse_with, render, ParseConfig, Q};
use serde_json::{json, Value};

use crate::{Cli, Command, MomentOf, Suite};

/// A finished command: JSON report, text report, and whether every check passed.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, pass: true }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let symbolic_dim = cli.dim.unwrap_or(3);
    let numeric_dim = cli.dim.unwrap_or(1);
    let pcfg = ParseConfig { species: cli.species, dim: symbolic_dim };
    match &cli.command {
        Command::No { expr } => {
            let e = parse_with(expr, pcfg).context("parsing expression")?;
            expression(normal_order(&e)?)
        }
        Command::Comm { e1, e2 } => two(e1, e2, pcfg, -1),
        Command::Anti { e1, e2 } => two(e1, e2, pcfg, 1),
        Command::Verify { suite, n, seed } => verify(*suite, *n, *seed, cli.species, symbolic_dim),
        Command::Triplet { masses, grid, profile_sigma } => {
            let cfg = GridConfig::spectral(numeric_dim, *grid);
            let r = triplet_construction(cfg, masses, *profile_sigma)?;
            let mut text = String::new();
            let levels: Vec<String> =
                r.mass_squared_spectrum.iter().map(|l| format!("{} (x{})", l.value, l.multiplicity)).collect();
            writeln!(text, "M^2 spectrum         {}", levels.join(", "))?;
            writeln!(text, "commutant dimension  {}", r.commutant_dimension)?;
            writeln!(text, "nested ranks         {:?}", r.nested_ranks)?;
            let pass = r.irreducible() && r.ranks_strictly_increase();
            Ok(Outcome { json: serde_json::to_value(&r)?, text, pass })
        }
        Command::Evolve { masses, t, state, doubled } => evolve_cmd(masses, *t, state, *doubled, cli.dim),
        Command::Fit { csv, formula } => {
            let kind: FormulaKind = formula.parse()?;
            let file = std::fs::File::open(csv).with_context(|| format!("opening {}", csv.display()))?;
            let rows = read_particle_table(file)?;
            let report = fit_formula(&rows, kind)?;
            let mut text = String::new();
            for (name, v) in &report.coeffs {
                writeln!(text, "{name:<4} {v}")?;
            }
            for (row, r) in rows.iter().zip(&report.residuals) {
                writeln!(text, "  {:<12} residual {r}", row.name)?;
            }
            writeln!(text, "rms  {}", report.rms)?;
            Ok(Outcome::ok(serde_json::to_value(&report)?, text))
        }
        Command::SolveTriplet { masses, qnums, formula, squared } => solve_triplet(masses, qnums, formula, *squared),
        Command::Vn { ops } => {
            let ops: Vec<Vec<f64>> = serde_json::from_str(&json_arg(ops)?).context("parsing --ops")?;
            let vn = von_neumann_generator(&ops)?;
            let exact = (0..ops.len()).all(|n| vn.reconstruct(n) == ops[n]);
            let mut text = String::new();
            writeln!(text, "A = diag{:?}", vn.a)?;
            for (n, table) in vn.phi.iter().enumerate() {
                let pairs: Vec<String> = table.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                writeln!(text, "phi_{} = {{{}}}", n + 1, pairs.join(", "))?;
            }
            let mut json = serde_json::to_value(&vn)?;
            json["reconstruction_exact"] = json!(exact);
            Ok(Outcome { json, text, pass: exact })
        }
        Command::Kappa { masses, lambdas } => kappa(masses, lambdas),
        Command::Smear { measure, moment, of, normalize } => {
            let g = MassMeasure::from_json(&json_arg(measure)?, *normalize)?;
            let of = match of {
                MomentOf::M => Of::M,
                MomentOf::M2 => Of::M2,
            };
            let v = g.moment(*moment, of);
            let support = g.support();
            let json = json!({ "moment": *moment, "of": of, "value": v, "support": support });
            Ok(Outcome::ok(json, format!("moment {moment} of {of:?}: {v}\n")))
        }
        Command::Sample { measure, seed, count, normalize } => {
            let g = MassMeasure::from_json(&json_arg(measure)?, *normalize)?;
            let samples = g.sample(*seed, *count as usize);
            let mean = samples.iter().map(|s| s.m).sum::<f64>() / samples.len() as f64;
            let mut text = String::new();
            for s in &samples {
                writeln!(text, "{} {}", s.m, s.spin)?;
            }
            let json = json!({ "seed": *seed, "count": *count, "mean": mean, "samples": samples });
            Ok(Outcome::ok(json, text))
        }
    }
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn json_arg(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn expression(e: massop::Expr) -> Result<Outcome> {
    let s = render(&e);
    Ok(Outcome::ok(json!({ "result": s, "terms": e.len() }), format!("{s}\n")))
}

fn two(e1: &str, e2: &str, cfg: ParseConfig, sign: i32) -> Result<Outcome> {
    let a = parse_with(e1, cfg).context("parsing first expression")?;
    let b = parse_with(e2, cfg).context("parsing second expression")?;
    expression(bracket(&a, &b, sign)?)
}

fn verify(suite: Suite, n: Option<usize>, seed: u64, species: u8, dim: u8) -> Result<Outcome> {
    let species_from = |n: Option<usize>| -> Result<u8> {
        match n {
            None => Ok(species),
            Some(v @ 1..=9) => Ok(v as u8),
            Some(v) => bail!("species count must be in 1..=9, got {v}"),
        }
    };
    let reports: Vec<Report> = match suite {
        Suite::U | Suite::Sp2n | Suite::Deriv | Suite::Osc => {
            let cfg = SuiteConfig { species: species_from(n)?, dim };
            let ids: Vec<RelationId> = match suite {
                Suite::U => vec![RelationId::UContinuum],
                Suite::Sp2n => RelationId::SP2N.to_vec(),
                Suite::Deriv => RelationId::DERIV.to_vec(),
                _ => vec![RelationId::OscBlock],
            };
            ids.into_iter().map(|id| verify_relation(id, cfg)).collect::<Result<_, _>>()?
        }
        Suite::Jacobi => vec![verify_jacobi(n.unwrap_or(200), seed, SuiteConfig { species, dim })?],
        Suite::Poincare => vec![verify_poincare_table(dim)?],
        Suite::Higher => {
            let order = n.unwrap_or(3);
            if !(3..=4).contains(&order) {
                bail!("product order must be 3 or 4, got {order}");
            }
            vec![verify_higher_products(order as u8, SuiteConfig { species, dim })?]
        }
    };
    let pass = reports.iter().all(Report::passed);
    let width = reports.iter().map(|r| r.relation.to_string().len()).max().unwrap_or(0);
    let mut text = String::new();
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        writeln!(text, "{:<width$}  {:>6}  {status}", r.relation.to_string(), r.instances)?;
        if let Some(f) = &r.first_failure {
            writeln!(text, "{:width$}  first failure: {f}", "")?;
        }
        if let Some(e) = &r.erratum {
            writeln!(text, "{:width$}  erratum: printed   {}", "", e.printed)?;
            writeln!(text, "{:width$}           corrected {}", "", e.corrected)?;
        }
    }
    Ok(Outcome { json: json!({ "pass": pass, "reports": reports }), text, pass })
}

fn evolve_cmd(masses: &[f64], t: f64, state: &str, doubled: bool, dim: Option<u8>) -> Result<Outcome> {
    let snap: StateSnapshot = serde_json::from_str(&json_arg(state)?).context("parsing state snapshot")?;
    if let Some(d) = dim {
        if d != snap.grid.dim {
            bail!("--dim {d} disagrees with the state grid dimension {}", snap.grid.dim);
        }
    }
    let grid = Arc::new(Grid::new(snap.grid)?);
    let variant = if doubled { Variant::Doubled } else { Variant::Plus };
    let psi: BlockState = snap.to_state();
    let out = evolve(&psi, &grid, masses, variant, t, true)?;
    let (n0, n1) = (psi.norm_sq(&grid).sqrt(), out.norm_sq(&grid).sqrt());
    let (p0, p1) = (psi.probabilities(&grid), out.probabilities(&grid));
    let (m0, m1) = (psi.expectation_mass_squared(&grid, masses)?, out.expectation_mass_squared(&grid, masses)?);
    let conserved = (n0 - n1).abs() <= 1e-12
        && p0.iter().zip(&p1).all(|(a, b)| (a - b).abs() <= 1e-12)
        && (m0 - m1).abs() <= 1e-12 * m0.abs().max(1.0);
    let spectrum = hamiltonian_spectrum(&grid, masses, variant);
    let mut text = String::new();
    writeln!(text, "norm            {n0} -> {n1}")?;
    writeln!(text, "probabilities   {p0:?} -> {p1:?}")?;
    writeln!(text, "<M^2>           {m0} -> {m1}")?;
    writeln!(text, "spectrum size   {}", spectrum.len())?;
    let json = json!({
        "t": t,
        "variant": variant,
        "norm_before": n0,
        "norm_after": n1,
        "probabilities_before": p0,
        "probabilities_after": p1,
        "mass_squared_before": m0,
        "mass_squared_after": m1,
        "conserved": conserved,
        "state": StateSnapshot::from_state(&grid, &out),
    });
    Ok(Outcome { json, text, pass: conserved })
}

fn parse_qnums(src: &str) -> Result<Vec<QuantumNumbers>> {
    src.split(';')
        .map(|group| {
            let (mut y, mut j, mut s) = (None, None, None);
            for kv in group.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("expected KEY=VALUE, got `{kv}`"))?;
                let v = Some(parse_rational(v)?);
                match k.trim() {
                    "Y" | "y" => y = v,
                    "J" | "j" => j = v,
                    "S" | "s" => s = v,
                    other => bail!("unknown quantum number `{other}`"),
                }
            }
            Ok(QuantumNumbers::new(y, j, s)?)
        })
        .collect()
}

fn solve_triplet(masses: &[String], qnums: &str, formula: &str, squared: bool) -> Result<Outcome> {
    let kind: FormulaKind = formula.parse()?;
    let masses: Vec<Q> = masses.iter().map(|m| parse_rational(m)).collect::<Result<_, _>>()?;
    let qns = parse_qnums(qnums)?;
    if masses.len() != 3 || qns.len() != 3 {
        bail!("need exactly three masses and three quantum-number groups");
    }
    let targets: Vec<Q> = masses
        .iter()
        .map(|m| if squared || kind.target() == Target::Mass { *m } else { m * m })
        .collect();
    let coeffs = solve_triplet_coeffs(
        [targets[0], targets[1], targets[2]],
        [qns[0], qns[1], qns[2]],
        kind,
    )?;
    let reproduced: Vec<Q> = qns.iter().map(|q| eval_exact(kind, &coeffs, q)).collect::<Result<_, _>>()?;
    let exact = reproduced == targets;
    let mut text = String::new();
    for (name, c) in kind.params().iter().zip(&coeffs) {
        writeln!(text, "{name:<4} {}", fmt_q(c))?;
    }
    writeln!(text, "round trip {}", if exact { "exact" } else { "MISMATCH" })?;
    let json = json!({
        "kind": kind,
        "target": kind.target(),
        "coeffs": kind.params().iter().zip(&coeffs).map(|(n, c)| (n.to_string(), json!(fmt_q(c)))).collect::<serde_json::Map<_, _>>(),
        "targets": targets.iter().map(fmt_q).collect::<Vec<_>>(),
        "reproduced": reproduced.iter().map(fmt_q).collect::<Vec<_>>(),
        "exact": exact,
    });
    Ok(Outcome { json, text, pass: exact })
}

fn kappa(masses: &[String], lambdas: &[String]) -> Result<Outcome> {
    let m: Vec<Q> = masses.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
    let l: Vec<Q> = lambdas.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
    let ks = kappa_spectrum(&m, &l)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut pass = true;
    for ((mi, li), [kp, km]) in m.iter().zip(&l).zip(&ks) {
        let back = [mass_from_kappa(*kp, *li)?, mass_from_kappa(*km, *li)?];
        pass &= back == [*mi, -mi];
        writeln!(text, "m={} lambda={} kappa=+{} / {}", fmt_q(mi), fmt_q(li), fmt_q(kp), fmt_q(km))?;
        rows.push(json!({
            "mass": fmt_q(mi),
            "lambda": fmt_q(li),
            "kappa": [fmt_q(kp), fmt_q(km)],
            "recovered": [fmt_q(&back[0]), fmt_q(&back[1])],
        }));
    }
    Ok(Outcome { json: json!({ "blocks": rows, "round_trip_exact": pass }), text, pass })
}
