//! One function per subcommand, each returning a report.

use std::path::Path;

use anyhow::bail;
use cflab::bounds::{c2_lower_experiment, min_inner_product_sum, norm_linf_to_l1, second_derivative_bound_probe};
use cflab::cf::{cf1_construct, cf1_feasible, cf2_extend, cf2_necessary_report, CFProblem1D, CFProblem2D, ExtendStatus};
use cflab::hankel::{nehari_gap, Symbol2D};
use cflab::opspace::{finite_embedding_refuter, min_norm_witness, parrott_oss_demo};
use cflab::poly::sup_norm_torus;
use cflab::{CommutingTuple, Error, Laurent, C64};
use serde_json::{json, Value};

use crate::config::Settings;
use crate::input;
use crate::report::{Report, Status};

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn clist(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|z| cjson(*z)).collect())
}

/// `a₀ + a₁ z + …` with six significant digits per coefficient.
pub fn symbol_string(s: &Laurent) -> String {
    let parts: Vec<String> = s
        .terms()
        .map(|(n, a)| {
            let c = if a.im.abs() < 1e-12 {
                format!("{:.6}", a.re)
            } else {
                format!("({:.6}{:+.6}i)", a.re, a.im)
            };
            match n {
                0 => c,
                1 => format!("{c} z"),
                _ => format!("{c} z^{n}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn cf1(s: &Settings, a1: &str, a2: &str, theta: Option<f64>) -> anyhow::Result<Report> {
    let prob = CFProblem1D::new(input::complex(a1)?, input::complex(a2)?);
    let base = json!({
        "a1": cjson(prob.a1),
        "a2": cjson(prob.a2),
        "toeplitz_norm": prob.toeplitz_norm(),
        "theta": theta,
    });
    if !cf1_feasible(&prob) {
        let mut r = base;
        r["feasible"] = json!(false);
        return Report::new("cf1", Status::Infeasible, r);
    }
    let f = cf1_construct(&prob, theta, &s.tol)?;
    let taylor = f.taylor(8);
    let residual = (taylor[1] - prob.a1).norm().max((taylor[2] - prob.a2).norm()).max(taylor[0].norm());
    let mut r = base;
    r["feasible"] = json!(true);
    r["coefficients"] = clist(&taylor);
    r["numerator"] = clist(&f.num.univariate_coeffs());
    r["denominator"] = clist(&f.den.univariate_coeffs());
    r["certificates"] = json!({
        "taylor_residual": residual,
        "sup_norm": f.sup_circle(2048),
    });
    Report::new("cf1", Status::Ok, r)
}

pub fn cf2(s: &Settings, coeffs: &str, max_degree: usize) -> anyhow::Result<Report> {
    let v = input::complex_list(coeffs)?;
    let prob = CFProblem2D::from_slice(&v)?;
    let necessary = cf2_necessary_report(&prob, 720, s.window, &s.tol);
    match cf2_extend(&prob, max_degree, s.window, &s.tol) {
        Ok(ext) => {
            let blocks: Vec<String> = ext.blocks.iter().map(symbol_string).collect();
            let mut r = json!({
                "feasible": true,
                "blocks": blocks,
                "certificates": {
                    "norms": ext.norms,
                    "residuals": ext.defects,
                },
                "necessary": necessary,
                "caveat": ext.caveat,
            });
            let status = match &ext.status {
                ExtendStatus::Extended => {
                    r["status"] = json!("Extended");
                    Status::Ok
                }
                ExtendStatus::DegreeViolation { k, forced } => {
                    r["status"] = json!("DegreeViolation");
                    r["k"] = json!(k);
                    r["forced_symbol"] = json!(symbol_string(forced));
                    r["forced_coefficients"] = json!(forced
                        .terms()
                        .map(|(n, a)| json!({"power": n, "re": a.re, "im": a.im}))
                        .collect::<Vec<_>>());
                    Status::Violation
                }
            };
            Report::new("cf2", status, r)
        }
        Err(Error::Infeasible(why)) => Report::new(
            "cf2",
            Status::Infeasible,
            json!({"feasible": false, "reason": why, "necessary": necessary}),
        ),
        Err(e) => Err(e.into()),
    }
}

pub fn nehari(s: &Settings, symbol: &Path, budget: usize) -> anyhow::Result<Report> {
    let phi: Symbol2D = input::json_file(symbol)?;
    let r = nehari_gap(&phi, s.window, budget, s.seed)?;
    let status = if r.lower <= r.upper + s.tol.grid {
        Status::Ok
    } else {
        Status::Violation
    };
    Report::new("nehari", status, r)
}

pub fn bounds_c2(_: &Settings) -> anyhow::Result<Report> {
    Report::new("bounds c2", Status::Ok, c2_lower_experiment()?)
}

pub fn bounds_minips(s: &Settings, m: usize, n: usize, restarts: usize) -> anyhow::Result<Report> {
    let v = min_inner_product_sum(m, n, restarts, s.seed)?;
    Report::new("bounds minips", Status::Ok, json!({"m": m, "n": n, "restarts": restarts, "value": v}))
}

pub fn bounds_d2probe(s: &Settings, samples: usize) -> anyhow::Result<Report> {
    let p = second_derivative_bound_probe(samples, s.seed, &s.tol)?;
    Report::new("bounds d2probe", Status::Ok, p)
}

pub fn bounds_l1norm(_: &Settings, matrix: &Path) -> anyhow::Result<Report> {
    let a = input::matrix_file(matrix)?;
    Report::new("bounds l1norm", Status::Ok, norm_linf_to_l1(&a, 96)?)
}

pub fn opspace_demo(_: &Settings) -> anyhow::Result<Report> {
    let d = parrott_oss_demo()?;
    let status = if d.distinct { Status::Ok } else { Status::Violation };
    Report::new("opspace demo", status, d)
}

pub fn opspace_refute(_: &Settings, thetas: &Path) -> anyhow::Result<Report> {
    let t = input::angles_file(thetas)?;
    let r = finite_embedding_refuter(&t)?;
    let status = if r.gap > 0.0 { Status::Ok } else { Status::Violation };
    Report::new("opspace refute", status, r)
}

pub fn opspace_minnorm(s: &Settings, matrices: &Path) -> anyhow::Result<Report> {
    let a = input::matrices_file(matrices)?;
    Report::new("opspace minnorm", Status::Ok, min_norm_witness(&a, s.grid)?)
}

pub fn norm(s: &Settings, matrix: Option<&Path>, poly: Option<&str>) -> anyhow::Result<Report> {
    match (matrix, poly) {
        (Some(m), None) => {
            let a = input::matrix_file(m)?;
            let r = json!({"operator_norm": a.norm(), "singular_values": a.singular_values()});
            Report::new("norm", Status::Ok, r)
        }
        (None, Some(p)) => {
            let p = input::poly(p)?;
            Report::new("norm", Status::Ok, sup_norm_torus(&p, s.grid, 4)?)
        }
        _ => bail!("give exactly one of --matrix and --poly"),
    }
}

pub fn verify_vn(s: &Settings, poly: &str, tuple: &Path) -> anyhow::Result<Report> {
    let p = input::poly(poly)?;
    let t = CommutingTuple::new(input::matrices_file(tuple)?, &s.tol)?;
    let (lhs, sup) = cflab::bounds::von_neumann_gap(&p, &t, s.grid)?;
    let holds = lhs <= sup + s.tol.grid;
    let r = json!({
        "lhs": lhs,
        "sup_norm": sup,
        "holds": holds,
        "tuple_norms": t.matrices().iter().map(|m| m.norm()).collect::<Vec<_>>(),
        "contractive": t.max_norm() <= 1.0 + s.tol.spectral,
    });
    Report::new("verify-vn", if holds { Status::Ok } else { Status::Violation }, r)
}
