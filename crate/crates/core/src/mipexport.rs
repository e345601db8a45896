// SPDX-License-Identifier: Apache-2.0
//! Mixed-integer models in the text LP exchange format.
//!
//! Every transfer-cost function is written as a list of points `(X_k, Y_k)`
//! taken from its segment ends. The multipliers `lam_i_k` form a convex
//! combination that is active only when node `i` is visited, and one of three
//! linearizations keeps at most two neighbouring multipliers positive:
//!
//! * `sos2`: an SOS2 set per node,
//! * `alpha`: binaries `alp_i_k` with pairwise exclusion of non-neighbours,
//! * `beta`: binaries `alp_i_k` plus one selected pair `bet_i_k`.
//!
//! Variables use 0-based node indices: `x_i_j` arcs, `y_i` transfers,
//! `f_i` transfer costs. The objective is the route objective itself, arc
//! costs plus transfer costs, so a solver's optimum equals the DP optimum.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variant {
    Sos2,
    Alpha,
    #[default]
    Beta,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sos2" => Ok(Variant::Sos2),
            "alpha" => Ok(Variant::Alpha),
            "beta" => Ok(Variant::Beta),
            other => Err(Error::Unsupported(format!("unknown MIP variant {other:?}"))),
        }
    }
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Sos2 => "sos2",
            Variant::Alpha => "alpha",
            Variant::Beta => "beta",
        }
    }
}

/// Points of a function in order, and the indices `k` whose pair `(k, k + 1)` spans a gap.
fn points<S: Scalar>(inst: &Instance<S>, i: usize) -> (Vec<(f64, f64)>, BTreeSet<usize>) {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut gaps = BTreeSet::new();
    let mut last_hi: Option<S> = None;
    for s in inst.profit[i].segments() {
        if let Some(h) = last_hi {
            if h < s.lo && !pts.is_empty() {
                gaps.insert(pts.len() - 1);
            }
        }
        for (x, v) in [(s.lo, s.at(s.lo)), (s.hi, s.at(s.hi))] {
            let p = (x.to_f64(), v.to_f64());
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        last_hi = Some(s.hi);
    }
    (pts, gaps)
}

fn num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// A linear expression, written with line wrapping.
#[derive(Default)]
struct Expr {
    terms: Vec<(f64, String)>,
}

impl Expr {
    /// Add `coef * var`, merging repeated variables.
    fn add(&mut self, coef: f64, var: impl Into<String>) -> &mut Self {
        let var = var.into();
        match self.terms.iter().position(|(_, v)| *v == var) {
            Some(k) => {
                self.terms[k].0 += coef;
                if self.terms[k].0 == 0.0 {
                    self.terms.remove(k);
                }
            }
            None if coef != 0.0 => self.terms.push((coef, var)),
            None => {}
        }
        self
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0 x_empty".into();
        }
        let mut out = String::new();
        for (k, (c, v)) in self.terms.iter().enumerate() {
            if k > 0 && k % 8 == 0 {
                out.push_str("\n   ");
            }
            let sign = if *c < 0.0 { "-" } else { "+" };
            let mag = c.abs();
            let body = if mag == 1.0 { v.clone() } else { format!("{} {v}", num(mag)) };
            if k == 0 && sign == "+" {
                out.push_str(&body);
            } else {
                let _ = write!(out, "{}{sign} {body}", if k == 0 { "" } else { " " });
            }
        }
        out
    }
}

struct Model {
    objective: Expr,
    rows: Vec<(String, Expr, &'static str, f64)>,
    bounds: Vec<String>,
    binaries: Vec<String>,
    sos: Vec<String>,
}

impl Model {
    fn row(&mut self, name: String, e: Expr, sense: &'static str, rhs: f64) {
        self.rows.push((name, e, sense, rhs));
    }
}

/// The visit indicator `v_i` of a node as arc terms, or `None` for the last node where it is 1.
fn visit<S: Scalar>(inst: &Instance<S>, i: usize) -> Option<Vec<String>> {
    (i + 1 < inst.n).then(|| (i + 1..inst.n).filter(|&j| inst.arc(i, j).is_some()).map(|j| format!("x_{i}_{j}")).collect())
}

/// Write the model for `inst` with the chosen linearization.
pub fn export<S: Scalar>(inst: &Instance<S>, variant: Variant) -> Result<String> {
    let n = inst.n;
    let mut m = Model {
        objective: Expr::default(),
        rows: Vec::new(),
        bounds: Vec::new(),
        binaries: Vec::new(),
        sos: Vec::new(),
    };
    for i in 0..n {
        for j in i + 1..n {
            if let Some((c, _)) = inst.arc(i, j) {
                m.objective.add(c.to_f64(), format!("x_{i}_{j}"));
                m.binaries.push(format!("x_{i}_{j}"));
            }
        }
    }
    let offset: f64 = inst.skip_cost[..n - 1].iter().map(|k| k.to_f64()).sum();
    for i in 0..n {
        m.objective.add(1.0, format!("f_{i}"));
        if let Some(v) = visit(inst, i) {
            for x in v {
                m.objective.add(-inst.skip_cost[i].to_f64(), x);
            }
        }
    }
    if offset != 0.0 {
        m.objective.add(offset, "one");
        m.bounds.push("one = 1".into());
    }

    let mut src = Expr::default();
    for x in visit(inst, 0).unwrap_or_default() {
        src.add(1.0, x);
    }
    m.row("source".into(), src, "=", 1.0);
    let mut sink = Expr::default();
    for j in 0..n - 1 {
        if inst.arc(j, n - 1).is_some() {
            sink.add(1.0, format!("x_{j}_{}", n - 1));
        }
    }
    m.row("sink".into(), sink, "=", 1.0);
    for i in 1..n - 1 {
        let mut e = Expr::default();
        for j in 0..i {
            if inst.arc(j, i).is_some() {
                e.add(1.0, format!("x_{j}_{i}"));
            }
        }
        for x in visit(inst, i).unwrap_or_default() {
            e.add(-1.0, x);
        }
        m.row(format!("flow_{i}"), e, "=", 0.0);
    }

    // Load after node i: Σ_{j ≤ i} y_j + σ_j (1 - v_j) ∈ [0, Q_max].
    let mut load = Expr::default();
    let mut skipped = 0.0;
    for i in 0..n {
        load.add(1.0, format!("y_{i}"));
        let sigma = inst.skip_load[i].to_f64();
        skipped += sigma;
        if let Some(v) = visit(inst, i) {
            for x in v {
                load.add(-sigma, x);
            }
        } else {
            skipped -= sigma;
        }
        let copy = Expr {
            terms: load.terms.clone(),
        };
        m.row(format!("cap_lo_{i}"), copy, ">=", -skipped);
        let copy = Expr {
            terms: load.terms.clone(),
        };
        m.row(format!("cap_hi_{i}"), copy, "<=", inst.qmax.to_f64() - skipped);
    }

    if let Some(tmax) = inst.tmax {
        let mut e = Expr::default();
        for i in 0..n {
            for j in i + 1..n {
                if let Some((_, t)) = inst.arc(i, j) {
                    e.add(t.to_f64(), format!("x_{i}_{j}"));
                }
            }
        }
        m.row("duration".into(), e, "<=", tmax.to_f64());
    }

    for i in 0..n {
        let (pts, gaps) = points(inst, i);
        if variant == Variant::Sos2 && !gaps.is_empty() {
            return Err(Error::Unsupported(format!(
                "node {i}: an SOS2 set cannot express a domain with gaps; use alpha or beta"
            )));
        }
        let lam = |k: usize| format!("lam_{i}_{k}");
        let (mut ex, mut ef, mut sum) = (Expr::default(), Expr::default(), Expr::default());
        for (k, &(x, y)) in pts.iter().enumerate() {
            ex.add(x, lam(k));
            ef.add(y, lam(k));
            sum.add(1.0, lam(k));
            m.bounds.push(format!("0 <= {} <= 1", lam(k)));
        }
        ex.add(-1.0, format!("y_{i}"));
        ef.add(-1.0, format!("f_{i}"));
        m.row(format!("conv_x_{i}"), ex, "=", 0.0);
        m.row(format!("conv_f_{i}"), ef, "=", 0.0);
        m.bounds.push(format!("y_{i} free"));
        m.bounds.push(format!("f_{i} free"));
        let visit_terms = visit(inst, i);
        let with_visit = |mut e: Expr, factor: f64| -> (Expr, f64) {
            match &visit_terms {
                Some(v) => {
                    for x in v {
                        e.add(-factor, x.clone());
                    }
                    (e, 0.0)
                }
                None => (e, factor),
            }
        };
        let (e, rhs) = with_visit(sum, 1.0);
        m.row(format!("lam_sum_{i}"), e, "=", rhs);
        let pieces = pts.len() - 1;
        if pieces == 0 {
            continue;
        }
        match variant {
            Variant::Sos2 => {
                let members: Vec<String> = (0..pts.len()).map(|k| format!("{}:{}", lam(k), k + 1)).collect();
                m.sos.push(format!("sos_{i}: S2:: {}", members.join(" ")));
            }
            Variant::Alpha | Variant::Beta => {
                let alp = |k: usize| format!("alp_{i}_{k}");
                let mut total = Expr::default();
                for k in 0..pts.len() {
                    let mut e = Expr::default();
                    e.add(1.0, lam(k)).add(-1.0, alp(k));
                    m.row(format!("lam_alp_{i}_{k}"), e, "<=", 0.0);
                    total.add(1.0, alp(k));
                    m.binaries.push(alp(k));
                }
                let (e, rhs) = with_visit(total, 2.0);
                m.row(format!("alp_sum_{i}"), e, "=", rhs);
                if variant == Variant::Alpha {
                    for k in 0..pts.len() {
                        for k2 in k + 2..pts.len() {
                            let mut e = Expr::default();
                            e.add(1.0, alp(k)).add(1.0, alp(k2));
                            m.row(format!("alp_pair_{i}_{k}_{k2}"), e, "<=", 1.0);
                        }
                    }
                    for &k in &gaps {
                        let mut e = Expr::default();
                        e.add(1.0, alp(k)).add(1.0, alp(k + 1));
                        m.row(format!("alp_gap_{i}_{k}"), e, "<=", 1.0);
                    }
                } else {
                    let bet = |k: usize| format!("bet_{i}_{k}");
                    let mut total = Expr::default();
                    for k in 0..pieces {
                        m.binaries.push(bet(k));
                        if gaps.contains(&k) {
                            m.bounds.push(format!("{} = 0", bet(k)));
                        }
                        total.add(1.0, bet(k));
                        let mut e = Expr::default();
                        e.add(2.0, bet(k)).add(-1.0, alp(k)).add(-1.0, alp(k + 1));
                        m.row(format!("bet_alp_{i}_{k}"), e, "<=", 0.0);
                    }
                    let (e, rhs) = with_visit(total, 1.0);
                    m.row(format!("bet_sum_{i}"), e, "=", rhs);
                }
            }
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "\\ pwlship MIP export, variant {}", variant.name());
    let _ = writeln!(out, "\\ Objective = arc costs + transfer costs f_i(y_i); minimize. Node indices are 0-based.");
    let _ = writeln!(out, "\\ Transfer-cost points are active only on visited nodes.");
    let _ = writeln!(out, "Minimize\n obj: {}", m.objective.render());
    let _ = writeln!(out, "Subject To");
    for (name, e, sense, rhs) in &m.rows {
        let _ = writeln!(out, " {name}: {} {sense} {}", e.render(), num(*rhs));
    }
    let _ = writeln!(out, "Bounds");
    for b in &m.bounds {
        let _ = writeln!(out, " {b}");
    }
    if !m.binaries.is_empty() {
        let _ = writeln!(out, "Binaries");
        for b in &m.binaries {
            let _ = writeln!(out, " {b}");
        }
    }
    if !m.sos.is_empty() {
        let _ = writeln!(out, "SOS");
        for s in &m.sos {
            let _ = writeln!(out, " {s}");
        }
    }
    let _ = writeln!(out, "End");
    Ok(out)
}

/// Sizes of an LP file as seen by [`read_summary`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LpSummary {
    pub constraints: usize,
    pub variables: usize,
    pub binaries: usize,
    pub sos_sets: usize,
    /// Constraint names in file order.
    pub constraint_names: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Head,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Sos,
    Done,
}

fn is_var(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && !matches!(tok, "free" | "inf" | "infinity")
        && !tok.ends_with(':')
}

/// Count the variables, rows, binaries and SOS sets of an LP file.
pub fn read_summary(text: &str) -> Result<LpSummary> {
    let mut sec = Section::Head;
    let mut vars = BTreeSet::new();
    let mut binaries = BTreeSet::new();
    let mut s = LpSummary::default();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let next = match lower.as_str() {
            "minimize" | "maximize" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" => Some(Section::Binaries),
            "sos" => Some(Section::Sos),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(next) = next {
            sec = next;
            continue;
        }
        let body = match line.split_once(':') {
            Some((name, rest)) if sec == Section::Constraints && !name.contains(' ') => {
                s.constraints += 1;
                s.constraint_names.push(name.to_string());
                rest
            }
            Some((_, rest)) if sec == Section::Objective => rest,
            Some((_, rest)) if sec == Section::Sos => {
                s.sos_sets += 1;
                rest.trim_start_matches(':').trim_start_matches("S2::").trim_start_matches("S1::")
            }
            _ => line,
        };
        match sec {
            Section::Head | Section::Done => {
                return Err(Error::Parse {
                    line: k + 1,
                    message: format!("text outside a section: {line:?}"),
                })
            }
            Section::Sos => {
                for tok in body.split_whitespace() {
                    if let Some((v, _)) = tok.split_once(':') {
                        vars.insert(v.to_string());
                    }
                }
            }
            Section::Binaries => {
                for tok in body.split_whitespace() {
                    vars.insert(tok.to_string());
                    binaries.insert(tok.to_string());
                }
            }
            _ => {
                for tok in body.split_whitespace() {
                    if is_var(tok) {
                        vars.insert(tok.to_string());
                    }
                }
            }
        }
    }
    if sec != Section::Done {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "missing End".into(),
        });
    }
    s.variables = vars.len();
    s.binaries = binaries.len();
    Ok(s)
}
