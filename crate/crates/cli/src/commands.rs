use andor_core::distributions::{enumerate_reluctant, reluctant_count};
use andor_core::equilibrium::{
    cep1_solve, compare_id_vs_correlated, eigen_search, even_concavity_check, even_interior_dominance_check,
    maximize_iid, odd_height_bound_check, proposition_check, proposition_values, EigenOptions, RootConstraint,
};
use andor_core::poly::numeric::{cost_prob_jet, prob_inverse, shape_cost_prob};
use andor_core::poly::{
    cost_prob, duality_check, factorization35_check, find_alpha, identity38_check, lemma1_certificate,
    lemma2_certificate, prob_increasing_certificate, two_level_consistency, CountMethod,
};
use andor_core::scalar::{float_json, rational_string, round_sig12};
use andor_core::{GateKind, Result, TreeShape};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};

/// Rows emitted in CSV mode, after `#` comment lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub result: Value,
    pub table: Option<Table>,
    /// Whether every check the command performs passed.
    pub ok: bool,
}

impl Report {
    fn plain(result: Value, ok: bool) -> Report {
        Report { result, table: None, ok }
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::Poly => poly(cfg),
        Command::Lemma1 => lemma(cfg, 1),
        Command::Lemma2 => lemma(cfg, 2),
        Command::Duality => duality(cfg),
        Command::Identities => identities(cfg),
        Command::Alpha => alpha(cfg),
        Command::Cep1 => cep1(cfg),
        Command::Eigen => eigen(cfg),
        Command::Prop => prop(cfg),
        Command::Isets => isets(cfg),
        Command::Compare => compare(cfg),
        Command::Maxiid => maxiid(cfg),
    }
}

fn num(x: f64) -> String {
    format!("{}", round_sig12(x))
}

fn interior(grid: u32) -> impl Iterator<Item = f64> {
    (1..grid).map(move |i| i as f64 / grid as f64)
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn eigen_options(cfg: &RunConfig) -> EigenOptions {
    EigenOptions { seed: cfg.seed, ..EigenOptions::new(cfg.tol) }
}

fn poly(cfg: &RunConfig) -> Result<Report> {
    let (gate, h) = (cfg.shape.root_gate(), cfg.shape.height());
    let f = cost_prob(gate, h)?;
    let rows = interior(cfg.grid)
        .map(|x| {
            let (c, p) = cost_prob_jet(gate, h, x);
            vec![num(x), num(c.v), num(p.v), num(c.v / p.v), num(c.d1 / p.d1)]
        })
        .collect();
    let result = json!({
        "gate": gate,
        "height": h,
        "cost": f.cost,
        "prob": f.prob,
        "cost_degree": f.cost.degree(),
        "prob_degree": f.prob.degree(),
        "cost_display": f.cost.to_string(),
        "prob_display": f.prob.to_string(),
    });
    Ok(Report {
        result,
        table: Some(Table { header: vec!["x", "c", "p", "c_over_p", "dc_over_dp"], rows }),
        ok: true,
    })
}

fn lemma(cfg: &RunConfig, which: u8) -> Result<Report> {
    let h = cfg.shape.height();
    let cert = match which {
        1 => lemma1_certificate(h, CountMethod::Auto)?,
        _ => lemma2_certificate(h, CountMethod::Auto)?,
    };
    let increasing = prob_increasing_certificate(h, CountMethod::Auto)?;
    let xs: Vec<f64> = interior(cfg.grid).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let (c, p) = cost_prob_jet(GateKind::Or, h, x);
            if which == 1 {
                c.v / p.v
            } else {
                c.d1 / p.d1
            }
        })
        .collect();
    let sampled = strictly_decreasing(&ys);
    let column = if which == 1 { "c_over_p" } else { "dc_over_dp" };
    let result = json!({
        "gate": GateKind::Or,
        "height": h,
        "certificate": serde_json::to_value(&cert).expect("serializable"),
        "prob_increasing": serde_json::to_value(&increasing).expect("serializable"),
        "sampled_decreasing": sampled,
        "samples": xs.len(),
    });
    let rows = xs.iter().zip(&ys).map(|(x, y)| vec![num(*x), num(*y)]).collect();
    Ok(Report {
        result,
        table: Some(Table { header: vec!["x", column], rows }),
        ok: cert.holds && increasing.holds && sampled,
    })
}

fn duality(cfg: &RunConfig) -> Result<Report> {
    let h = cfg.shape.height();
    let holds = duality_check(h, cfg.grid)?;
    Ok(Report::plain(json!({ "height": h, "grid": cfg.grid, "duality": holds }), holds))
}

fn identities(cfg: &RunConfig) -> Result<Report> {
    let h = cfg.shape.height();
    let checks = [
        ("two_level_consistency", two_level_consistency(h)?),
        ("duality", duality_check(h, cfg.grid)?),
        ("identity38", identity38_check()),
        ("factorization35", factorization35_check()),
    ];
    let ok = checks.iter().all(|(_, v)| *v);
    let mut result = json!({ "height": h, "grid": cfg.grid });
    for (name, v) in checks {
        result[name] = json!(v);
    }
    Ok(Report::plain(result, ok))
}

fn alpha(cfg: &RunConfig) -> Result<Report> {
    let a = find_alpha(cfg.tol)?;
    let odd = [odd_height_bound_check(3, cfg.grid as usize)?, odd_height_bound_check(5, cfg.grid as usize)?];
    let mut even = Vec::new();
    for h in [2, 4, 6, 8] {
        even.push(even_concavity_check(h, 1000)?);
    }
    for h in [2, 4] {
        even.push(even_interior_dominance_check(h, 1000)?);
    }
    let ok = a.roots_in_interval == 1 && odd.iter().chain(&even).all(|c| c.holds);
    let result = json!({
        "alpha": float_json(a.alpha),
        "bracket": [float_json(a.lo), float_json(a.hi)],
        "roots_in_interval": a.roots_in_interval,
        "count_method": "sturm",
        "tol": float_json(cfg.tol),
        "odd_height_bound": odd.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "even_height_shape": even.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    });
    Ok(Report::plain(result, ok))
}

fn cep1(cfg: &RunConfig) -> Result<Report> {
    let r = cfg.r_f64();
    let rep = cep1_solve(cfg.shape.height(), RootConstraint::new(r)?, cfg.tol)?;
    let closed = 1.0 - (1.0 - r).sqrt();
    let err = (rep.pair.z() - closed).abs().max((rep.pair.w() - closed).abs());
    let mut result = rep.to_json();
    result["closed_form"] = float_json(closed);
    result["argmax_error"] = float_json(err);
    Ok(Report::plain(result, rep.decreasing_f1 && err < cfg.tol))
}

fn eigen(cfg: &RunConfig) -> Result<Report> {
    let r = cfg.r_f64();
    let rep = eigen_search(&cfg.shape, RootConstraint::new(r)?, &eigen_options(cfg))?;
    let x = prob_inverse(cfg.shape.root_gate(), cfg.shape.height(), r, 0.0);
    let mut result = rep.to_json();
    result["shape"] = json!(cfg.shape.to_string());
    result["r"] = json!(rational_string(&cfg.r));
    result["iid_root"] = float_json(x);
    result["iid_value"] = float_json(shape_cost_prob(&cfg.shape, x).0);
    Ok(Report::plain(result, rep.certified_iid))
}

fn prop(cfg: &RunConfig) -> Result<Report> {
    let pair = cost_prob(cfg.shape.root_gate(), cfg.shape.height())?;
    let mut checks = Vec::new();
    let mut ok = true;
    for i in [false, true] {
        let rep = proposition_check(&cfg.shape, i, cfg.grid)?;
        // every leaf equal to i means leaf probability 1 - i
        let x = BigRational::from_integer((!i as i64).into());
        let closed = pair.cost_at(&x) == BigRational::from_integer((proposition_values(&cfg.shape, i) as i64).into());
        ok &= rep.holds && closed;
        let mut v = rep.to_json();
        v["matches_iid_polynomial"] = json!(closed);
        checks.push(v);
    }
    let result = json!({ "shape": cfg.shape.to_string(), "grid": cfg.grid, "cases": checks });
    Ok(Report::plain(result, ok))
}

fn isets(cfg: &RunConfig) -> Result<Report> {
    let shape = &cfg.shape;
    let mut result = json!({ "shape": shape.to_string() });
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, value) in [("zero_set", false), ("one_set", true)] {
        let count = reluctant_count(shape, value);
        result[format!("{name}_count")] = json!(count.to_string());
        if shape.height() <= 3 {
            let set = enumerate_reluctant(shape, value)?;
            ok &= count == set.len().into();
            for a in set.members() {
                rows.push(vec![(value as u8).to_string(), a.to_string()]);
            }
            result[name] = set.to_json();
        }
    }
    let table = (!rows.is_empty()).then(|| Table { header: vec!["value", "assignment"], rows });
    Ok(Report { result, table, ok })
}

fn compare(cfg: &RunConfig) -> Result<Report> {
    let cmp = compare_id_vs_correlated(&cfg.shape, &cfg.r, &eigen_options(cfg))?;
    Ok(Report::plain(cmp.to_json(), cmp.strict))
}

fn maxiid(cfg: &RunConfig) -> Result<Report> {
    let m = maximize_iid(&cfg.shape, cfg.tol)?;
    let even = maximize_iid(&TreeShape::and_or(2)?, cfg.tol)?;
    let odd = maximize_iid(&TreeShape::or_and(3)?, cfg.tol)?;
    let gap = (even.x - odd.x).abs();
    let mut result = m.to_json();
    result["shape"] = json!(cfg.shape.to_string());
    result["contrast"] = json!({
        "and_or_2_argmax": float_json(even.x),
        "or_and_3_argmax": float_json(odd.x),
        "gap": float_json(gap),
        "distinct": gap > 1e-3,
    });
    Ok(Report::plain(result, m.unimodal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_monotonicity() {
        assert!(strictly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(!strictly_decreasing(&[3.0, 3.0]));
    }
}
