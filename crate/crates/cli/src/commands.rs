//! One function per subcommand, each producing output records.

use std::io::Write;
use std::sync::Arc;

use serde_json::{json, Value};

use fqgamma::brackets::{bracket, bracket_n, bracket_vector, equiv_f};
use fqgamma::carlitz::{adj_closed_form, adj_div_poly, cyclotomic, div_poly, CarlitzCtx};
use fqgamma::coleman::ColemanCtx;
use fqgamma::distribution::{basis_bf, decide_dependence, nu_f, BasisEntry, RelationLattice};
use fqgamma::ffarith::{parse_poly, parse_rational, LaurentNum, Poly, RationalK};
use fqgamma::gammaeval::{
    gamma_value, pi_value, psi_poly, verify_gauss, verify_reflection, verify_reflection_closed_form, verify_translation, Level,
};
use fqgamma::motive::{det_zero_profile, fe_residual, phi_matrix, psi_cap, psi_matrix, specialize_check};

use crate::config::Config;
use crate::cycle::parse_cycle;
use crate::{selftest, CliError, Command, FeKind, Record};

pub fn laurent_json(x: &LaurentNum) -> Value {
    serde_json::to_value(x.to_json()).expect("plain data serializes")
}

fn rat(cfg: &Config, s: &str) -> Result<RationalK, CliError> {
    Ok(parse_rational(s, &cfg.field())?)
}

fn poly(cfg: &Config, s: &str) -> Result<Poly, CliError> {
    Ok(parse_poly(s, &cfg.field())?)
}

fn level(cfg: &Config, f: &str) -> Result<Arc<Level>, CliError> {
    Ok(Level::with_cap(&poly(cfg, f)?, cfg.deg_f_cap)?)
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required here")))
}

fn carlitz(cfg: &Config) -> CarlitzCtx {
    CarlitzCtx::new(&cfg.field(), cfg.prec)
}

pub fn execute(cmd: &Command, cfg: &Config, err: &mut dyn Write) -> Result<Vec<Record>, CliError> {
    let fq = cfg.field();
    let one = |r: Record| Ok(vec![r]);
    match cmd {
        Command::Period => one(Record::result("period", json!({}), laurent_json(&carlitz(cfg).period()))),
        Command::OmegaAt { x } => {
            let t0 = LaurentNum::from_rational(&rat(cfg, x)?, cfg.prec)?;
            let v = carlitz(cfg).omega_at(&t0, cfg.trunc_t)?;
            one(Record::result("omega-at", json!({ "x": x, "trunc_t": cfg.trunc_t }), laurent_json(&v)))
        }
        Command::Exp { x } => {
            let z = LaurentNum::from_rational(&rat(cfg, x)?, cfg.prec)?;
            one(Record::result("exp", json!({ "x": x }), laurent_json(&carlitz(cfg).exp(&z)?)))
        }
        Command::E { x } => one(Record::result("e", json!({ "x": x }), laurent_json(&carlitz(cfg).e(&rat(cfg, x)?)?))),
        Command::Estar { x } => one(Record::result("estar", json!({ "x": x }), laurent_json(&carlitz(cfg).e_star(&rat(cfg, x)?)))),
        Command::Divpoly { a } => {
            let p = div_poly(&poly(cfg, a)?);
            let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.display_with("t")).collect();
            one(Record::result("divpoly", json!({ "a": a }), json!({ "poly": p.to_string(), "tau_coeffs": coeffs })))
        }
        Command::Adjpoly { f } => {
            let fp = poly(cfg, f)?;
            let p = adj_div_poly(&fp)?;
            let agrees = adj_closed_form(&fp)? == p;
            one(Record::check("adjpoly", json!({ "f": f }), agrees, json!({ "poly": p.to_string(), "closed_form_agrees": agrees })))
        }
        Command::Cyclo { f } => {
            let c = cyclotomic(&poly(cfg, f)?)?;
            one(Record::result("cyclo", json!({ "f": f }), json!({ "poly": c.poly.to_string(), "deg_z": c.deg_z() })))
        }
        Command::Psi { n, x } => {
            let p = psi_poly(&fq, *n);
            let mut res = json!({ "poly": p.to_string() });
            if let Some(xs) = x {
                res["value"] = json!(p.eval_exact(&rat(cfg, xs)?).to_string());
            }
            one(Record::result("psi", json!({ "N": n, "x": x }), res))
        }
        Command::Pi { x } => one(Record::result("pi", json!({ "x": x }), laurent_json(&pi_value(&carlitz(cfg), &rat(cfg, x)?)?))),
        Command::Gamma { x } => one(Record::result("gamma", json!({ "x": x }), laurent_json(&gamma_value(&carlitz(cfg), &rat(cfg, x)?)?))),
        Command::VerifyFe { kind, x, a, f } => {
            let ctx = carlitz(cfg);
            let (inputs, r) = match kind {
                FeKind::Translation => {
                    let (xs, as_) = (need(x, "x")?, need(a, "a")?);
                    (json!({ "kind": "translation", "x": xs, "a": as_ }), verify_translation(&ctx, &rat(cfg, xs)?, &poly(cfg, as_)?)?)
                }
                FeKind::Reflection => {
                    let xs = need(x, "x")?;
                    (json!({ "kind": "reflection", "x": xs }), verify_reflection(&ctx, &rat(cfg, xs)?)?)
                }
                FeKind::ReflectionClosed => (json!({ "kind": "reflection-closed" }), verify_reflection_closed_form(&ctx)?),
                FeKind::Gauss => {
                    let (xs, fs) = (need(x, "x")?, need(f, "f")?);
                    (json!({ "kind": "gauss", "x": xs, "f": fs }), verify_gauss(&ctx, &rat(cfg, xs)?, &poly(cfg, fs)?)?)
                }
            };
            one(Record::residual("verify-fe", inputs, r, cfg.prec))
        }
        Command::Bracket { x, n } => {
            let xr = rat(cfg, x)?;
            let v = match n {
                Some(n) => bracket_n(&xr, *n),
                None => bracket(&xr),
            };
            one(Record::result("bracket", json!({ "x": x, "N": n }), json!(v)))
        }
        Command::BracketVec { f, cycle } => {
            let lv = level(cfg, f)?;
            let a = parse_cycle(cycle, &lv)?;
            let units: Vec<String> = lv.units().iter().map(|&u| lv.residue(u).to_string()).collect();
            one(Record::result("bracket-vec", json!({ "f": f, "cycle": cycle }), json!({ "units": units, "vector": bracket_vector(&a) })))
        }
        Command::Equiv { f, a, b } => {
            let lv = level(cfg, f)?;
            let (ca, cb) = (parse_cycle(a, &lv)?, parse_cycle(b, &lv)?);
            let by_brackets = equiv_f(&ca, &cb)?;
            let by_lattice = RelationLattice::new(&lv).equiv(&ca, &cb)?;
            one(Record::check(
                "equiv",
                json!({ "f": f, "a": a, "b": b }),
                by_brackets == by_lattice,
                json!({ "equivalent": by_brackets, "brackets": by_brackets, "lattice": by_lattice }),
            ))
        }
        Command::Rank { f } => {
            let lv = level(cfg, f)?;
            let rank = RelationLattice::new(&lv).quotient_rank() as u64;
            let formula = nu_f(lv.modulus());
            one(Record::check("rank", json!({ "f": f }), rank == formula, json!({ "rank": rank, "formula": formula })))
        }
        Command::Decide { f, cycles } => decide(cfg, f, cycles).map(|r| vec![r]),
        Command::Basis { f } => {
            let lv = level(cfg, f)?;
            let entries: Vec<String> = basis_bf(&lv)?
                .into_iter()
                .map(|e| match e {
                    BasisEntry::Fraction(x) => format!("Pi({x})"),
                    BasisEntry::Period => "period".to_string(),
                })
                .collect();
            one(Record::result("basis", json!({ "f": f }), json!(entries)))
        }
        Command::ColemanVerify { f, x, n } => coleman_verify(cfg, f, x, *n),
        Command::MotiveVerify { f, cycle } => motive_verify(cfg, f, cycle),
        Command::Selftest { only } => {
            let ids: Vec<u8> = if only.is_empty() { selftest::CRITERIA.iter().map(|c| c.id).collect() } else { only.clone() };
            let mut out = Vec::new();
            for id in ids {
                let o = selftest::run_criterion(id, cfg.seed).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?;
                writeln!(err, "{}", o.line())?;
                out.push(Record::check(
                    "selftest",
                    json!({ "criterion": o.id, "name": o.name, "seed": cfg.seed }),
                    o.passed,
                    json!({ "detail": o.detail }),
                ));
            }
            Ok(out)
        }
    }
}

fn decide(cfg: &Config, f: &str, cycles: &[String]) -> Result<Record, CliError> {
    let lv = level(cfg, f)?;
    let family = cycles.iter().map(|c| parse_cycle(c, &lv)).collect::<Result<Vec<_>, _>>()?;
    let rel = RelationLattice::new(&lv);
    let d = decide_dependence(&family, &rel)?;
    let verdict = if d.independent {
        "independent"
    } else if family.len() == 2 {
        "dependent-pair"
    } else {
        "dependent"
    };
    let witnesses: Vec<Value> = d
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "pair": [w.pair.0, w.pair.1],
                "difference": w.difference.to_string(),
                "coords": w.coords.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            })
        })
        .collect();
    let consistent = d.witnesses.iter().all(|w| w.coords.is_some());
    Ok(Record::check(
        "decide",
        json!({ "f": f, "cycles": cycles }),
        consistent,
        json!({ "verdict": verdict, "classes": d.classes, "witnesses": witnesses }),
    ))
}

fn coleman_verify(cfg: &Config, f: &str, x: &str, max_n: usize) -> Result<Vec<Record>, CliError> {
    let lv = level(cfg, f)?;
    let xr = rat(cfg, x)?;
    let cc = ColemanCtx::new(&cfg.field(), cfg.prec, &lv)?;
    let mut out = Vec::new();
    for &u in lv.units() {
        let a = lv.residue(u);
        for n in 0..=max_n {
            let r = cc.verify_interp(&xr, &a, n)?;
            out.push(Record::residual("coleman-verify", json!({ "f": f, "x": x, "a": a.to_string(), "N": n, "kind": "interpolation" }), r, cfg.prec));
        }
    }
    for (u, n) in cc.zero_slots(&xr) {
        let a = lv.residue(u);
        let r = cc.verify_zero(&xr, &a, n)?;
        out.push(Record::residual("coleman-verify", json!({ "f": f, "x": x, "a": a.to_string(), "N": n, "kind": "zero" }), r, cfg.prec));
    }
    Ok(out)
}

fn motive_verify(cfg: &Config, f: &str, cycle: &str) -> Result<Vec<Record>, CliError> {
    let lv = level(cfg, f)?;
    let a = parse_cycle(cycle, &lv)?;
    let cc = ColemanCtx::new(&cfg.field(), cfg.prec, &lv)?;
    let phi = phi_matrix(&cc, &a, cfg.trunc_t)?;
    let psi = psi_matrix(&phi, psi_cap(&cc, cfg.trunc_t))?;
    let base = json!({ "f": f, "cycle": cycle, "trunc_t": cfg.trunc_t });
    let with = |k: &str, extra: Value| {
        let mut v = base.clone();
        v["entry"] = json!(k);
        if let Value::Object(m) = extra {
            for (key, val) in m {
                v[key] = val;
            }
        }
        v
    };
    let mut out = vec![
        Record::residual("motive-verify", with("functional-equation", json!({})), fe_residual(&phi, &psi, cfg.prec)?, cfg.prec),
        Record::result("motive-verify", with("det-zero-profile", json!({})), json!(det_zero_profile(&phi.det(), cfg.prec)?)),
    ];
    let sp = specialize_check(&cc, &a, cfg.trunc_t)?;
    for (i, u) in sp.units.iter().enumerate() {
        out.push(Record::residual("motive-verify", with("diagonal", json!({ "unit": u.to_string() })), sp.diag_residuals[i], cfg.prec));
    }
    out.push(Record::residual("motive-verify", with("off-diagonal", json!({})), sp.offdiag_val, cfg.prec));
    out.push(Record::residual("motive-verify", with("coleman-product", json!({})), sp.product_residual, cfg.prec));
    Ok(out)
}
