// SPDX-License-Identifier: Apache-2.0
//! The exported models accept every solver optimum at the same objective.
mod common;

use std::collections::HashMap;

use common::*;
use pwlship::dp::{solve_with_duration, DpOptions};
use pwlship::mipexport::{export, read_summary, Variant};
use pwlship::{Error, Instance, Rational, Scalar, Solution};

struct Row {
    name: String,
    terms: Vec<(f64, String)>,
    sense: String,
    rhs: f64,
}

struct Lp {
    objective: Vec<(f64, String)>,
    rows: Vec<Row>,
    fixed: Vec<(String, f64)>,
}

fn terms(tokens: &[&str]) -> Vec<(f64, String)> {
    let mut out = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for tok in tokens {
        match *tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            t => match t.parse::<f64>() {
                Ok(c) => coef = Some(c),
                Err(_) => {
                    out.push((sign * coef.unwrap_or(1.0), t.to_string()));
                    sign = 1.0;
                    coef = None;
                }
            },
        }
    }
    out
}

fn parse_lp(text: &str) -> Lp {
    let mut logical: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.starts_with('\\') || line.trim().is_empty() {
            continue;
        }
        if line.starts_with("   ") {
            logical.last_mut().unwrap().push_str(line);
        } else {
            logical.push(line.to_string());
        }
    }
    let mut lp = Lp {
        objective: Vec::new(),
        rows: Vec::new(),
        fixed: Vec::new(),
    };
    let mut section = "";
    for line in &logical {
        let t = line.trim();
        match t {
            "Minimize" | "Subject To" | "Bounds" | "Binaries" | "SOS" | "End" => {
                section = match t {
                    "Minimize" => "obj",
                    "Subject To" => "rows",
                    "Bounds" => "bounds",
                    _ => "other",
                };
                continue;
            }
            _ => {}
        }
        match section {
            "obj" => {
                let body = t.split_once(':').unwrap().1;
                lp.objective = terms(&body.split_whitespace().collect::<Vec<_>>());
            }
            "rows" => {
                let (name, body) = t.split_once(':').unwrap();
                let toks: Vec<&str> = body.split_whitespace().collect();
                let k = toks.iter().position(|s| matches!(*s, "<=" | ">=" | "=")).unwrap();
                lp.rows.push(Row {
                    name: name.to_string(),
                    terms: terms(&toks[..k]),
                    sense: toks[k].to_string(),
                    rhs: toks[k + 1].parse().unwrap(),
                });
            }
            "bounds" => {
                let toks: Vec<&str> = t.split_whitespace().collect();
                if toks.len() == 3 && toks[1] == "=" {
                    lp.fixed.push((toks[0].to_string(), toks[2].parse().unwrap()));
                }
            }
            _ => {}
        }
    }
    lp
}

fn row<'a>(lp: &'a Lp, name: &str) -> &'a Row {
    lp.rows.iter().find(|r| r.name == name).unwrap_or_else(|| panic!("no row {name}"))
}

fn coef(row: &Row, var: &str) -> f64 {
    row.terms.iter().find(|(_, v)| v == var).map_or(0.0, |(c, _)| *c)
}

/// Variable values that encode `sol` in the exported model.
fn assignment(inst: &Instance<Rational>, sol: &Solution<Rational>, lp: &Lp, variant: Variant) -> HashMap<String, f64> {
    let mut val: HashMap<String, f64> = lp.fixed.iter().cloned().collect();
    for w in sol.visits.windows(2) {
        val.insert(format!("x_{}_{}", w[0], w[1]), 1.0);
    }
    for &i in &sol.visits {
        let y = sol.y[i].to_f64();
        let fy = inst.profit[i].evaluate(sol.y[i]).unwrap().to_f64();
        val.insert(format!("y_{i}"), y);
        val.insert(format!("f_{i}"), fy);
        let lam: Vec<String> = row(lp, &format!("lam_sum_{i}"))
            .terms
            .iter()
            .filter(|(_, v)| v.starts_with("lam_"))
            .map(|(_, v)| v.clone())
            .collect();
        let cx = row(lp, &format!("conv_x_{i}"));
        let cf = row(lp, &format!("conv_f_{i}"));
        let pts: Vec<(f64, f64)> = lam.iter().map(|l| (coef(cx, l), coef(cf, l))).collect();
        if pts.len() == 1 {
            val.insert(lam[0].clone(), 1.0);
            continue;
        }
        let blocked = |k: usize| match variant {
            Variant::Alpha => lp.rows.iter().any(|r| r.name == format!("alp_gap_{i}_{k}")),
            Variant::Beta => lp.fixed.iter().any(|(v, _)| *v == format!("bet_{i}_{k}")),
            Variant::Sos2 => false,
        };
        let (k, w) = (0..pts.len() - 1)
            .filter(|&k| !blocked(k))
            .find_map(|k| {
                let ((x0, f0), (x1, f1)) = (pts[k], pts[k + 1]);
                if !(x0 - 1e-9 <= y && y <= x1 + 1e-9) {
                    return None;
                }
                let w = if x1 > x0 { (y - x0) / (x1 - x0) } else if (f1 - fy).abs() < 1e-9 { 1.0 } else { 0.0 };
                ((f0 + w * (f1 - f0) - fy).abs() < 1e-7).then_some((k, w))
            })
            .unwrap_or_else(|| panic!("node {i}: no piece holds ({y}, {fy}) in {pts:?}"));
        *val.entry(lam[k].clone()).or_default() += 1.0 - w;
        *val.entry(lam[k + 1].clone()).or_default() += w;
        if variant != Variant::Sos2 {
            val.insert(format!("alp_{i}_{k}"), 1.0);
            val.insert(format!("alp_{i}_{}", k + 1), 1.0);
        }
        if variant == Variant::Beta {
            val.insert(format!("bet_{i}_{k}"), 1.0);
        }
    }
    val
}

fn check_certificate(inst: &Instance<Rational>, sol: &Solution<Rational>, variant: Variant) -> Result<(), String> {
    let text = match export(inst, variant) {
        Ok(t) => t,
        Err(Error::Unsupported(_)) if variant == Variant::Sos2 => return Ok(()),
        Err(e) => return Err(e.to_string()),
    };
    let lp = parse_lp(&text);
    let val = assignment(inst, sol, &lp, variant);
    let eval = |ts: &[(f64, String)]| ts.iter().map(|(c, v)| c * val.get(v).copied().unwrap_or(0.0)).sum::<f64>();
    for r in &lp.rows {
        let lhs = eval(&r.terms);
        let ok = match r.sense.as_str() {
            "<=" => lhs <= r.rhs + 1e-7,
            ">=" => lhs >= r.rhs - 1e-7,
            _ => (lhs - r.rhs).abs() <= 1e-7,
        };
        if !ok {
            return Err(format!("{}: row {} has {lhs} {} {}", variant.name(), r.name, r.sense, r.rhs));
        }
    }
    let obj = eval(&lp.objective);
    let want = sol.objective.to_f64();
    if (obj - want).abs() > 1e-7 * (1.0 + want.abs()) {
        return Err(format!("{}: model objective {obj}, solver {want}", variant.name()));
    }
    Ok(())
}

#[test]
fn solver_optima_are_feasible_in_every_variant() {
    let mut checked = 0;
    let instances = constrained_instances(150).into_iter().chain(unconstrained_instances(100));
    for (k, inst) in instances.enumerate() {
        let Ok(out) = solve_with_duration(&inst, &DpOptions::default()) else {
            continue;
        };
        for variant in [Variant::Sos2, Variant::Alpha, Variant::Beta] {
            check_certificate(&inst, &out.solution, variant).unwrap_or_else(|e| panic!("instance {k}: {e}"));
        }
        checked += 1;
    }
    assert!(checked >= 150, "{checked}");
}

#[test]
fn variant_sizes_follow_the_point_counts() {
    for inst in unconstrained_instances(60) {
        let Ok(sos) = export(&inst, Variant::Sos2) else {
            continue;
        };
        let alpha = read_summary(&export(&inst, Variant::Alpha).unwrap()).unwrap();
        let beta = read_summary(&export(&inst, Variant::Beta).unwrap()).unwrap();
        let lp = parse_lp(&sos);
        let sos = read_summary(&sos).unwrap();
        let counts: Vec<usize> = (0..inst.n)
            .map(|i| row(&lp, &format!("lam_sum_{i}")).terms.iter().filter(|(_, v)| v.starts_with("lam_")).count())
            .collect();
        let multi: Vec<usize> = counts.iter().copied().filter(|&p| p > 1).collect();
        assert_eq!(sos.sos_sets, multi.len());
        let alp: usize = multi.iter().sum();
        let pieces: usize = multi.iter().map(|p| p - 1).sum();
        assert_eq!(alpha.binaries, sos.binaries + alp);
        assert_eq!(beta.binaries, sos.binaries + alp + pieces);
        let pairs: usize = multi.iter().map(|p| (p - 1) * (p - 2) / 2).sum();
        assert_eq!(alpha.constraints, sos.constraints + alp + multi.len() + pairs);
        assert_eq!(beta.constraints, sos.constraints + alp + multi.len() + pieces + multi.len());
    }
}

#[test]
fn gaps_are_rejected_by_sos2_only() {
    let mut inst = fixture_instance("example_four_locations.json");
    let f = pwlship::pwl::PwlFunction::new(vec![
        pwlship::pwl::Segment::new(r(1), r(0), r(0), r(1)),
        pwlship::pwl::Segment::new(r(0), r(3), r(2), r(3)),
    ])
    .unwrap();
    inst.profit[1] = f;
    assert!(matches!(export(&inst, Variant::Sos2), Err(Error::Unsupported(_))));
    let alpha = export(&inst, Variant::Alpha).unwrap();
    assert!(alpha.contains("alp_gap_1_1:"));
    let beta = export(&inst, Variant::Beta).unwrap();
    assert!(beta.contains("bet_1_1 = 0"));
}
