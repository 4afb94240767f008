//! Catalog of the operator-algebra relations, each checked to an exactly
//! empty residual by the Wick engine.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::SymbolicError;
use crate::expr::{apply_sifting, Expr, KernelKind, Label, OpFactor};
use crate::pdo::{expected_bracket, expected_pdo, poincare_generators, Generator};
use crate::scalar::Scalar;
use crate::wick::{commutator, formal_derivative, normal_order};

/// Relation identifiers. Bilinears: `E_μ^ν = ½{a_μ, a_ν⁺}` ("mixed"),
/// `E_μν = a_μ a_ν` ("low"), `E^μν = a_μ⁺ a_ν⁺` ("up"); `A^i`, `B^j` are the
/// derivatives of `E_μ^ν(p, p')` in the first and second momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    UContinuum,
    SpMixedMixed,
    SpLowLow,
    SpMixedLow,
    SpMixedUp,
    SpLowUp,
    SpUpUp,
    DerivAA,
    DerivBB,
    DerivEA,
    DerivEB,
    DerivAB,
    OscBlock,
    Jacobi,
    Poincare,
    HigherProducts(u8),
}

impl RelationId {
    pub const SP2N: [RelationId; 6] = [
        RelationId::SpMixedMixed,
        RelationId::SpLowLow,
        RelationId::SpMixedLow,
        RelationId::SpMixedUp,
        RelationId::SpLowUp,
        RelationId::SpUpUp,
    ];
    pub const DERIV: [RelationId; 5] = [
        RelationId::DerivAA,
        RelationId::DerivBB,
        RelationId::DerivEA,
        RelationId::DerivEB,
        RelationId::DerivAB,
    ];

    /// Relations with a fixed LHS/RHS template (everything except the
    /// sampled or PDO-based checks).
    pub fn catalog() -> Vec<RelationId> {
        let mut v = vec![RelationId::UContinuum];
        v.extend(RelationId::SP2N);
        v.extend(RelationId::DERIV);
        v.push(RelationId::OscBlock);
        v
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationId::UContinuum => "u-continuum",
            RelationId::SpMixedMixed => "sp-mixed-mixed",
            RelationId::SpLowLow => "sp-low-low",
            RelationId::SpMixedLow => "sp-mixed-low",
            RelationId::SpMixedUp => "sp-mixed-up",
            RelationId::SpLowUp => "sp-low-up",
            RelationId::SpUpUp => "sp-up-up",
            RelationId::DerivAA => "deriv-a-a",
            RelationId::DerivBB => "deriv-b-b",
            RelationId::DerivEA => "deriv-e-a",
            RelationId::DerivEB => "deriv-e-b",
            RelationId::DerivAB => "deriv-a-b",
            RelationId::OscBlock => "osc-block",
            RelationId::Jacobi => "jacobi",
            RelationId::Poincare => "poincare",
            RelationId::HigherProducts(n) => return write!(f, "higher-products-{n}"),
        };
        f.write_str(s)
    }
}

impl Serialize for RelationId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A printed right-hand side that disagrees with the computed bracket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Erratum {
    pub printed: String,
    pub corrected: String,
    /// `bracket − printed` for the first disagreeing instance.
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub relation: RelationId,
    pub instances: usize,
    pub status: Status,
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erratum: Option<Erratum>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Suite configuration: species count and momentum dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub species: u8,
    pub dim: u8,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { species: 3, dim: 3 }
    }
}

fn op(species: u8, dagger: bool, label: &str) -> Expr {
    Expr::op(OpFactor::new(species, dagger, Label::named(label)))
}

fn mul(a: &Expr, b: &Expr) -> Expr {
    a.mul(b).expect("continuum factors only")
}

/// `E_μ^ν(k, k') = ½{a_μ(k), a_ν⁺(k')}`
pub fn e_mixed(mu: u8, nu: u8, k: &str, k2: &str) -> Expr {
    let a = op(mu, false, k);
    let c = op(nu, true, k2);
    mul(&a, &c).add(&mul(&c, &a)).scale(&Scalar::ratio(1, 2))
}

/// `E_μν(k, k') = a_μ(k) a_ν(k')`
pub fn e_low(mu: u8, nu: u8, k: &str, k2: &str) -> Expr {
    mul(&op(mu, false, k), &op(nu, false, k2))
}

/// `E^μν(k, k') = a_μ⁺(k) a_ν⁺(k')`
pub fn e_up(mu: u8, nu: u8, k: &str, k2: &str) -> Expr {
    mul(&op(mu, true, k), &op(nu, true, k2))
}

/// `A^i_μν(p, p') = ∂E_μ^ν(p, p')/∂p_i`
pub fn gen_a(i: u8, mu: u8, nu: u8, p: &str, p2: &str) -> Expr {
    formal_derivative(&e_mixed(mu, nu, p, p2), p, i).expect("free label")
}

/// `B^j_μν(p, p') = ∂E_μ^ν(p, p')/∂p'_j`
pub fn gen_b(j: u8, mu: u8, nu: u8, p: &str, p2: &str) -> Expr {
    formal_derivative(&e_mixed(mu, nu, p, p2), p2, j).expect("free label")
}

fn delta(l1: &str, l2: &str) -> Expr {
    Expr::delta(l1, l2)
}

/// Successive formal derivatives `∂/∂label_axis`.
fn d(e: &Expr, wrt: &[(&str, u8)]) -> Expr {
    wrt.iter().fold(e.clone(), |acc, (l, a)| {
        formal_derivative(&acc, l, *a).expect("free label")
    })
}

fn kron(a: u8, b: u8) -> Scalar {
    Scalar::int((a == b) as i128)
}

fn sc(e: &Expr, s: Scalar) -> Expr {
    e.scale(&s)
}

/// One instantiated template: `[x, y]` against the printed and the
/// corrected right-hand sides.
struct Instance {
    x: Expr,
    y: Expr,
    printed: Expr,
    corrected: Expr,
}

fn plain(x: Expr, y: Expr, rhs: Expr) -> Instance {
    Instance {
        x,
        y,
        printed: rhs.clone(),
        corrected: rhs,
    }
}

struct Template {
    printed_text: &'static str,
    corrected_text: &'static str,
    instances: Vec<Instance>,
}

fn species_quads(n: u8) -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                for e in 1..=n {
                    out.push([a, b, c, e]);
                }
            }
        }
    }
    out
}

fn axis_pairs(dim: u8) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for i in 1..=dim {
        for j in 1..=dim {
            out.push((i, j));
        }
    }
    out
}

fn template(id: RelationId, cfg: SuiteConfig) -> Template {
    let n = cfg.species;
    let mut instances = Vec::new();
    let (mut printed_text, mut corrected_text) = ("", "");
    match id {
        RelationId::UContinuum => {
            for m in 1..=n {
                let e = |a: &str, b: &str| e_mixed(m, m, a, b);
                let rhs = mul(&delta("k", "q'"), &e("q", "k'"))
                    .sub(&mul(&delta("k'", "q"), &e("k", "q'")));
                instances.push(plain(e("k", "k'"), e("q", "q'"), rhs));
            }
        }
        RelationId::SpMixedMixed => {
            for [mu, nu, al, be] in species_quads(n) {
                let rhs = sc(&mul(&delta("k", "q'"), &e_mixed(al, nu, "q", "k'")), kron(mu, be)).sub(
                    &sc(&mul(&delta("q", "k'"), &e_mixed(mu, be, "k", "q'")), kron(nu, al)),
                );
                instances.push(plain(e_mixed(mu, nu, "k", "k'"), e_mixed(al, be, "q", "q'"), rhs));
            }
        }
        RelationId::SpLowLow | RelationId::SpUpUp => {
            let f = if id == RelationId::SpLowLow { e_low } else { e_up };
            for [mu, nu, al, be] in species_quads(n) {
                instances.push(plain(f(mu, nu, "k", "k'"), f(al, be, "q", "q'"), Expr::zero()));
            }
        }
        RelationId::SpMixedLow => {
            for [mu, nu, al, be] in species_quads(n) {
                let rhs = sc(&mul(&delta("k'", "q'"), &e_low(al, mu, "q", "k")), kron(nu, be))
                    .add(&sc(&mul(&delta("q", "k'"), &e_low(be, mu, "q'", "k")), kron(nu, al)))
                    .neg();
                instances.push(plain(e_mixed(mu, nu, "k", "k'"), e_low(al, be, "q", "q'"), rhs));
            }
        }
        RelationId::SpMixedUp => {
            for [mu, nu, al, be] in species_quads(n) {
                let rhs = sc(&mul(&delta("k", "q'"), &e_up(al, nu, "q", "k'")), kron(mu, be))
                    .add(&sc(&mul(&delta("k", "q"), &e_up(be, nu, "q'", "k'")), kron(al, mu)));
                instances.push(plain(e_mixed(mu, nu, "k", "k'"), e_up(al, be, "q", "q'"), rhs));
            }
        }
        RelationId::SpLowUp => {
            printed_text = "d(nu,al) delta(k',q) E_mu^be(k,q') + d(mu,al) delta(k,q) E_nu^be(k',q') \
                            + d(nu,be) delta(k',q') E_mu^al(k,q) + d(mu,be) delta(k,q) E_nu^al(k',q)";
            corrected_text = "d(nu,al) delta(k',q) E_mu^be(k,q') + d(mu,al) delta(k,q) E_nu^be(k',q') \
                              + d(nu,be) delta(k',q') E_mu^al(k,q) + d(mu,be) delta(k,q') E_nu^al(k',q)";
            for [mu, nu, al, be] in species_quads(n) {
                let common = sc(&mul(&delta("k'", "q"), &e_mixed(mu, be, "k", "q'")), kron(nu, al))
                    .add(&sc(&mul(&delta("k", "q"), &e_mixed(nu, be, "k'", "q'")), kron(mu, al)))
                    .add(&sc(&mul(&delta("k'", "q'"), &e_mixed(mu, al, "k", "q")), kron(nu, be)));
                let last = |l: &str| sc(&mul(&delta("k", l), &e_mixed(nu, al, "k'", "q")), kron(mu, be));
                instances.push(Instance {
                    x: e_low(mu, nu, "k", "k'"),
                    y: e_up(al, be, "q", "q'"),
                    printed: common.add(&last("q")),
                    corrected: common.add(&last("q'")),
                });
            }
        }
        RelationId::DerivAA => {
            printed_text = "d(mu,be) d/dp_i delta(p,q') A^i_{al nu}(q,p') - d(al,nu) d/dq_j delta(q,p') A^i_{mu be}(p,q')";
            corrected_text = "d(mu,be) d/dp_i delta(p,q') A^j_{al nu}(q,p') - d(al,nu) d/dq_j delta(q,p') A^i_{mu be}(p,q')";
            for [mu, nu, al, be] in species_quads(n) {
                for (i, j) in axis_pairs(cfg.dim) {
                    let second = sc(
                        &mul(&d(&delta("q", "p'"), &[("q", j)]), &gen_a(i, mu, be, "p", "q'")),
                        kron(al, nu),
                    );
                    let first = |axis: u8| {
                        sc(
                            &mul(&d(&delta("p", "q'"), &[("p", i)]), &gen_a(axis, al, nu, "q", "p'")),
                            kron(mu, be),
                        )
                    };
                    instances.push(Instance {
                        x: gen_a(i, mu, nu, "p", "p'"),
                        y: gen_a(j, al, be, "q", "q'"),
                        printed: first(i).sub(&second),
                        corrected: first(j).sub(&second),
                    });
                }
            }
        }
        RelationId::DerivBB => {
            for [mu, nu, al, be] in species_quads(n) {
                for (i, j) in axis_pairs(cfg.dim) {
                    let rhs = sc(
                        &mul(&d(&delta("p", "q'"), &[("q'", j)]), &gen_b(i, al, nu, "q", "p'")),
                        kron(mu, be),
                    )
                    .sub(&sc(
                        &mul(&d(&delta("q", "p'"), &[("p'", i)]), &gen_b(j, mu, be, "p", "q'")),
                        kron(al, nu),
                    ));
                    instances.push(plain(gen_b(i, mu, nu, "p", "p'"), gen_b(j, al, be, "q", "q'"), rhs));
                }
            }
        }
        RelationId::DerivEA => {
            for [mu, nu, al, be] in species_quads(n) {
                for i in 1..=cfg.dim {
                    let rhs = sc(&mul(&delta("p", "q'"), &gen_a(i, al, nu, "q", "p'")), kron(mu, be)).sub(
                        &sc(
                            &mul(&d(&delta("q", "p'"), &[("q", i)]), &e_mixed(mu, be, "p", "q'")),
                            kron(al, nu),
                        ),
                    );
                    instances.push(plain(e_mixed(mu, nu, "p", "p'"), gen_a(i, al, be, "q", "q'"), rhs));
                }
            }
        }
        RelationId::DerivEB => {
            for [mu, nu, al, be] in species_quads(n) {
                for j in 1..=cfg.dim {
                    let rhs = sc(
                        &mul(&d(&delta("p", "q'"), &[("q'", j)]), &e_mixed(al, nu, "q", "p'")),
                        kron(mu, be),
                    )
                    .sub(&sc(&mul(&delta("q", "p'"), &gen_b(j, mu, be, "p", "q'")), kron(al, nu)));
                    instances.push(plain(e_mixed(mu, nu, "p", "p'"), gen_b(j, al, be, "q", "q'"), rhs));
                }
            }
        }
        RelationId::DerivAB => {
            for [mu, nu, al, be] in species_quads(n) {
                for (i, j) in axis_pairs(cfg.dim) {
                    let rhs = sc(
                        &mul(&d(&delta("p", "q'"), &[("p", i), ("q'", j)]), &e_mixed(al, nu, "q", "p'")),
                        kron(mu, be),
                    )
                    .sub(&sc(
                        &mul(&delta("q", "p'"), &d(&e_mixed(mu, be, "p", "q'"), &[("p", i), ("q'", j)])),
                        kron(al, nu),
                    ));
                    instances.push(plain(gen_a(i, mu, nu, "p", "p'"), gen_b(j, al, be, "q", "q'"), rhs));
                }
            }
        }
        RelationId::OscBlock => {
            let e = |lower: u8, upper: u8| {
                let a = Expr::ann_discrete(lower);
                let c = Expr::cre_discrete(upper);
                mul(&a, &c).add(&mul(&c, &a)).scale(&Scalar::ratio(1, 2))
            };
            for [rho, lam, kap, sig] in species_quads(n) {
                let rhs = sc(&e(kap, lam), kron(rho, sig)).sub(&sc(&e(rho, sig), kron(kap, lam)));
                instances.push(plain(e(rho, lam), e(kap, sig), rhs));
            }
        }
        _ => unreachable!("{id} has no fixed template"),
    }
    Template {
        printed_text,
        corrected_text,
        instances,
    }
}

fn residual(lhs: &Expr, rhs: &Expr) -> Result<Expr, SymbolicError> {
    Ok(lhs.sub(&normal_order(rhs)?))
}

/// Checks every instantiation of a catalog relation (or dispatches to the
/// sampled/PDO checks with default parameters).
pub fn verify_relation(id: RelationId, cfg: SuiteConfig) -> Result<Report, SymbolicError> {
    match id {
        RelationId::Jacobi => return verify_jacobi(200, 42, cfg),
        RelationId::Poincare => return verify_poincare_table(cfg.dim),
        RelationId::HigherProducts(n) => return verify_higher_products(n, cfg),
        _ => {}
    }
    let t = template(id, cfg);
    let mut first_failure = None;
    let mut erratum = None;
    for inst in &t.instances {
        let lhs = commutator(&inst.x, &inst.y)?;
        let res = residual(&lhs, &inst.corrected)?;
        if !res.is_zero() && first_failure.is_none() {
            first_failure = Some(res.to_string());
        }
        if erratum.is_none() && inst.printed != inst.corrected {
            let printed_res = residual(&lhs, &inst.printed)?;
            if !printed_res.is_zero() {
                erratum = Some(Erratum {
                    printed: t.printed_text.to_string(),
                    corrected: t.corrected_text.to_string(),
                    residual: printed_res.to_string(),
                });
            }
        }
    }
    Ok(Report {
        relation: id,
        instances: t.instances.len(),
        status: if first_failure.is_none() { Status::Pass } else { Status::Fail },
        first_failure,
        erratum,
    })
}

/// `[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]`, normal ordered.
pub fn jacobiator(x: &Expr, y: &Expr, z: &Expr) -> Result<Expr, SymbolicError> {
    let a = commutator(&commutator(x, y)?, z)?;
    let b = commutator(&commutator(y, z)?, x)?;
    let c = commutator(&commutator(z, x)?, y)?;
    Ok(Expr::sum([&a, &b, &c]))
}

const LABEL_POOL: [&str; 5] = ["k1", "k2", "k3", "k4", "k5"];

fn random_generator(rng: &mut ChaCha8Rng, cfg: SuiteConfig) -> Expr {
    let mut s = || rng.gen_range(1..=cfg.species);
    let (mu, nu) = (s(), s());
    let labels: Vec<&str> = LABEL_POOL.choose_multiple(rng, 2).copied().collect();
    let axis = rng.gen_range(1..=cfg.dim);
    match rng.gen_range(0..5) {
        0 => e_mixed(mu, nu, labels[0], labels[1]),
        1 => e_low(mu, nu, labels[0], labels[1]),
        2 => e_up(mu, nu, labels[0], labels[1]),
        3 => gen_a(axis, mu, nu, labels[0], labels[1]),
        _ => gen_b(axis, mu, nu, labels[0], labels[1]),
    }
}

/// Jacobi identity on seeded random triples drawn from
/// `{E_μ^ν, E_μν, E^μν, A^i, B^j}` with random species and labels.
pub fn verify_jacobi(samples: usize, seed: u64, cfg: SuiteConfig) -> Result<Report, SymbolicError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first_failure = None;
    for _ in 0..samples {
        let x = random_generator(&mut rng, cfg);
        let y = random_generator(&mut rng, cfg);
        let z = random_generator(&mut rng, cfg);
        let j = jacobiator(&x, &y, &z)?;
        if !j.is_zero() && first_failure.is_none() {
            first_failure = Some(j.to_string());
        }
    }
    Ok(Report {
        relation: RelationId::Jacobi,
        instances: samples,
        status: if first_failure.is_none() { Status::Pass } else { Status::Fail },
        first_failure,
        erratum: None,
    })
}

/// Every pairwise commutator of the one-particle Poincaré generators against
/// the table generated from the sign conventions.
pub fn verify_poincare_table(dim: u8) -> Result<Report, SymbolicError> {
    let gens = poincare_generators(1, dim)?;
    let names: Vec<Generator> = gens.keys().copied().collect();
    let mut instances = 0;
    let mut first_failure = None;
    for (a, x) in names.iter().enumerate() {
        for y in &names[a + 1..] {
            instances += 1;
            let got = gens[x].commutator(&gens[y])?;
            let want = expected_pdo(&gens, &expected_bracket(&gens, *x, *y))?;
            let res = got.sub(&want)?;
            if !res.is_zero() && first_failure.is_none() {
                first_failure = Some(format!("[{x},{y}]: {res}"));
            }
        }
    }
    Ok(Report {
        relation: RelationId::Poincare,
        instances,
        status: if first_failure.is_none() { Status::Pass } else { Status::Fail },
        first_failure,
        erratum: None,
    })
}

/// `a_{μ1}(p1) … a_{μn}(pn)` (or the creator product).
pub fn e_product(species: &[u8], labels: &[&str], dagger: bool) -> Expr {
    species
        .iter()
        .zip(labels)
        .fold(Expr::one(), |acc, (s, l)| mul(&acc, &op(*s, dagger, l)))
}

/// True when every term is a pure product of `n` annihilators.
fn is_annihilator_monomial_sum(e: &Expr, n: usize) -> bool {
    e.terms()
        .iter()
        .all(|t| t.ops.len() == n && t.ops.iter().all(|o| !o.dagger) && t.kernels.is_empty())
}

fn species_tuples(n: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=n).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Closure of `[E_μ^ν, E_{μ1…μn}]` in the n-fold annihilator family, and the
/// Jacobi identity on sampled triples `(E_μ^ν, E_{α…}, E_{β…})`.
pub fn verify_higher_products(n: u8, cfg: SuiteConfig) -> Result<Report, SymbolicError> {
    if !(3..=4).contains(&n) {
        return Err(SymbolicError::BadDimension(n));
    }
    let p_labels: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let q_labels: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    let p: Vec<&str> = p_labels.iter().map(String::as_str).collect();
    let q: Vec<&str> = q_labels.iter().map(String::as_str).collect();
    let mut instances = 0;
    let mut first_failure = None;
    let fail = |msg: String, ff: &mut Option<String>| {
        if ff.is_none() {
            *ff = Some(msg);
        }
    };
    for mu in 1..=cfg.species {
        for nu in 1..=cfg.species {
            for tuple in species_tuples(cfg.species, n as usize) {
                instances += 1;
                let c = commutator(&e_mixed(mu, nu, "k", "k'"), &e_product(&tuple, &p, false))?;
                if !is_annihilator_monomial_sum(&c, n as usize) {
                    fail(format!("not closed: {c}"), &mut first_failure);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        instances += 1;
        let mut s = || rng.gen_range(1..=cfg.species);
        let x = e_mixed(s(), s(), "k", "k'");
        let ys: Vec<u8> = (0..n).map(|_| s()).collect();
        let zs: Vec<u8> = (0..n).map(|_| s()).collect();
        let j = jacobiator(&x, &e_product(&ys, &p, false), &e_product(&zs, &q, false))?;
        if !j.is_zero() {
            fail(format!("jacobi: {j}"), &mut first_failure);
        }
    }
    Ok(Report {
        relation: RelationId::HigherProducts(n),
        instances,
        status: if first_failure.is_none() { Status::Pass } else { Status::Fail },
        first_failure,
        erratum: None,
    })
}

/// One level of the nested-bracket probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeLevel {
    pub depth: usize,
    pub terms: usize,
    /// Largest energy-kernel exponent appearing on a mixed-species bilinear.
    pub max_kernel_power: i32,
    /// True when some term is outside the `{P, M, D}` template family.
    pub escapes_family: bool,
}

/// Nested brackets `[P_0^{(i)}, [P_0^{(i)}, … d_ij]]` with
/// `P_0^{(i)} = ∫dk E_i(k) a_i⁺(k) a_i(k)` and the (unit-profile) coupling
/// `d_ij = ∫dk dk' {a_i⁺(k) a_j(k') + a_j⁺(k') a_i(k)}`. A mixed-species
/// bilinear that carries an energy kernel is not expressible by the
/// translation, Lorentz or coupling templates.
pub fn probe_nested_brackets(i: u8, j: u8, depth: usize) -> Result<Vec<ProbeLevel>, SymbolicError> {
    let energy = Expr::kernel("k", KernelKind::Energy { species: i, exponent: 1 });
    let p0 = mul(&mul(&energy, &op(i, true, "k")), &op(i, false, "k")).integrate("k")?;
    let d = mul(&op(i, true, "k"), &op(j, false, "k'"))
        .add(&mul(&op(j, true, "k'"), &op(i, false, "k")))
        .integrate("k")?
        .integrate("k'")?;
    let mut cur = d;
    let mut out = Vec::new();
    for level in 1..=depth {
        cur = apply_sifting(&commutator(&p0, &cur)?)?;
        let mut max_power = 0;
        let mut escapes = false;
        for t in cur.terms() {
            let species: Vec<u8> = t.ops.iter().map(|o| o.species).collect();
            let mixed = species.windows(2).any(|w| w[0] != w[1]);
            if mixed {
                for k in &t.kernels {
                    if let KernelKind::Energy { exponent, .. } = k.kind {
                        max_power = max_power.max(exponent);
                        escapes = true;
                    }
                }
            }
        }
        out.push(ProbeLevel {
            depth: level,
            terms: cur.len(),
            max_kernel_power: max_power,
            escapes_family: escapes,
        });
    }
    Ok(out)
}
