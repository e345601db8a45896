// SPDX-License-Identifier: Apache-2.0
//! Seeded instance generators and the orienteering text format.
//!
//! All randomness comes from a ChaCha8 stream seeded with the caller's seed,
//! so a given argument list always yields the same instance.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lswrc::LotSizingInstance;
use crate::model::Instance;
use crate::pwl::PwlFunction;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

impl SizeClass {
    pub const ALL: [SizeClass; 3] = [SizeClass::Small, SizeClass::Medium, SizeClass::Large];

    /// Inventory capacity: 10, 50 or 100.
    pub fn qmax(self) -> i64 {
        match self {
            SizeClass::Small => 10,
            SizeClass::Medium => 50,
            SizeClass::Large => 100,
        }
    }

    /// Budget factor: 2/5, 3/5 or 4/5.
    pub fn theta(self) -> Rational {
        let num = match self {
            SizeClass::Small => 2,
            SizeClass::Medium => 3,
            SizeClass::Large => 4,
        };
        Rational::new(num, 5)
    }

    pub fn name(self) -> &'static str {
        match self {
            SizeClass::Small => "small",
            SizeClass::Medium => "medium",
            SizeClass::Large => "large",
        }
    }
}

impl std::str::FromStr for SizeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(SizeClass::Small),
            "medium" => Ok(SizeClass::Medium),
            "large" => Ok(SizeClass::Large),
            other => Err(Error::Unsupported(format!("unknown class {other:?}"))),
        }
    }
}

/// Inclusive integer range.
pub type Span = (i64, i64);

/// Distributions of the lot-sizing generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LswrcConfig {
    pub demand: Span,
    pub holding: Span,
    /// Setup cost between consecutive periods.
    pub base_setup: Span,
    /// Extra setup cost per idle period.
    pub idle_growth: i64,
    pub setup_noise: Span,
    /// Slope of the first production segment.
    pub first_slope: Span,
    /// Decrease from the first to the second slope.
    pub second_drop: Span,
    /// Decrease from the second to the third slope.
    pub third_drop: Span,
    /// End of the first production segment.
    pub first_break: Span,
    /// Length of the second production segment.
    pub second_length: Span,
}

impl Default for LswrcConfig {
    fn default() -> Self {
        LswrcConfig {
            demand: (1, 9),
            holding: (1, 3),
            base_setup: (5, 15),
            idle_growth: 3,
            setup_noise: (0, 5),
            first_slope: (8, 12),
            second_drop: (2, 4),
            third_drop: (2, 3),
            first_break: (1, 4),
            second_length: (2, 5),
        }
    }
}

fn draw<R: Rng>(rng: &mut R, span: Span) -> i64 {
    rng.gen_range(span.0..=span.1)
}

fn r(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

/// `T_max = floor(max t + θ Σ t_{i,i+1})`.
pub fn tmax_formula(time: &[Vec<Option<Rational>>], theta: Rational) -> Rational {
    let n = time.len();
    let max = time.iter().flatten().flatten().copied().max().unwrap_or_default();
    let consecutive: Rational = (0..n.saturating_sub(1)).filter_map(|i| time[i][i + 1]).sum();
    (max + theta * consecutive).floor()
}

/// Concave, increasing production cost with three segments on `[0, b]`.
///
/// The breakpoints do not depend on `b`, so capacity classes differ only in how
/// far the last segment reaches.
fn production_cost<R: Rng>(rng: &mut R, b: i64, cfg: &LswrcConfig) -> PwlFunction<Rational> {
    let s1 = draw(rng, cfg.first_slope);
    let s2 = (s1 - draw(rng, cfg.second_drop)).max(1);
    let s3 = (s2 - draw(rng, cfg.third_drop)).max(1);
    let x1 = draw(rng, cfg.first_break);
    let x2 = x1 + draw(rng, cfg.second_length);
    let x2 = x2.min(b - 1);
    let x1 = x1.clamp(1, x2 - 1);
    let y1 = s1 * x1;
    let y2 = y1 + s2 * (x2 - x1);
    let y3 = y2 + s3 * (b - x2);
    PwlFunction::from_breakpoints(&[(r(0), r(0)), (r(x1), r(y1)), (r(x2), r(y2)), (r(b), r(y3))])
        .expect("increasing breakpoints")
}

pub fn generate_lswrc(n: usize, qmax: SizeClass, theta: SizeClass, seed: u64) -> LotSizingInstance<Rational> {
    generate_lswrc_with(n, qmax.qmax(), theta.theta(), seed, &LswrcConfig::default())
}

pub fn generate_lswrc_with(
    n: usize,
    qmax: i64,
    theta: Rational,
    seed: u64,
    cfg: &LswrcConfig,
) -> LotSizingInstance<Rational> {
    assert!(n >= 2, "at least two periods");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let demand: Vec<i64> = (0..n).map(|_| draw(&mut rng, cfg.demand)).collect();
    let holding: Vec<i64> = (0..n).map(|_| draw(&mut rng, cfg.holding)).collect();
    let base: Vec<i64> = (0..n).map(|_| draw(&mut rng, cfg.base_setup)).collect();
    let production: Vec<PwlFunction<Rational>> = demand
        .iter()
        .map(|&d| production_cost(&mut rng, (qmax + d).max(3), cfg))
        .collect();
    let mut cost = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let idle = (j - i - 1) as i64;
            let extra = if idle == 0 { 0 } else { cfg.idle_growth * idle + draw(&mut rng, cfg.setup_noise) };
            cost[i][j] = Some(r(base[j] + extra));
        }
    }
    let tmax = tmax_formula(&cost, theta);
    LotSizingInstance::new(
        demand.into_iter().map(r).collect(),
        holding.into_iter().map(r).collect(),
        production,
        cost,
        None,
        r(qmax),
        Some(tmax),
    )
    .expect("generated data is valid")
}

/// Parsed orienteering file: a duration limit and `(x, y, score)` records.
///
/// The first record is the start, the last record the end of every route.
#[derive(Clone, Debug, PartialEq)]
pub struct Orienteering {
    pub tmax: f64,
    /// Optional second header field (number of paths in the classic files).
    pub paths: Option<f64>,
    pub points: Vec<(f64, f64, f64)>,
}

pub fn parse_orienteering(text: &str) -> Result<Orienteering> {
    let mut header: Option<(f64, Option<f64>)> = None;
    let mut points = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let nums: Vec<f64> = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("not a number: {tok:?}"),
                    })
            })
            .collect::<Result<_>>()?;
        match (&header, nums.as_slice()) {
            (None, [t]) => header = Some((*t, None)),
            (None, [t, p]) => header = Some((*t, Some(*p))),
            (None, _) => {
                return Err(Error::Parse {
                    line,
                    message: "header must hold the time limit and optionally the path count".into(),
                })
            }
            (Some(_), [x, y, s]) => points.push((*x, *y, *s)),
            (Some(_), _) => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `x y score`, found {} fields", nums.len()),
                })
            }
        }
    }
    let (tmax, paths) = header.ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    Ok(Orienteering { tmax, paths, points })
}

pub fn write_orienteering(data: &Orienteering) -> String {
    let mut out = String::new();
    match data.paths {
        Some(p) => writeln!(out, "{} {}", data.tmax, p),
        None => writeln!(out, "{}", data.tmax),
    }
    .expect("string write");
    for (x, y, s) in &data.points {
        writeln!(out, "{x} {y} {s}").expect("string write");
    }
    out
}

/// Random points in a 100 x 100 square with scores in 1..=9.
///
/// The limit is half the length of the plain nearest-neighbour route.
pub fn synthetic_orienteering(n: usize, seed: u64) -> Orienteering {
    assert!(n >= 2, "at least two points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.gen_range(0..=100) as f64,
                rng.gen_range(0..=100) as f64,
                rng.gen_range(1..=9) as f64,
            )
        })
        .collect();
    let order = nearest_neighbor_route(&points, 1, &mut rng);
    let length: f64 = order.windows(2).map(|w| dist(&points[w[0]], &points[w[1]])).sum();
    Orienteering {
        tmax: (length / 2.0).round(),
        paths: None,
        points,
    }
}

fn dist(a: &(f64, f64, f64), b: &(f64, f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Start, then every customer chosen uniformly among the `k` nearest unvisited ones, then end.
pub fn nearest_neighbor_route<R: Rng>(points: &[(f64, f64, f64)], k: usize, rng: &mut R) -> Vec<usize> {
    let n = points.len();
    let mut route = vec![0];
    let mut left: Vec<usize> = (1..n.saturating_sub(1)).collect();
    let mut cur = 0;
    while !left.is_empty() {
        left.sort_by(|&a, &b| {
            dist(&points[cur], &points[a])
                .total_cmp(&dist(&points[cur], &points[b]))
                .then(a.cmp(&b))
        });
        let pick = rng.gen_range(0..k.max(1).min(left.len()));
        cur = left.remove(pick);
        route.push(cur);
    }
    if n > 1 {
        route.push(n - 1);
    }
    route
}

/// Transfer cost of a station whose inventory `I_0` can move within `[0, I_max]`.
///
/// Holding `I` items is worth `F(I)`, piecewise linear with slopes
/// `3w, w, 0, -w` over four equal steps. Taking `y` items away costs
/// `F(I_0) - F(I_0 - y)` for `y ∈ [I_0 - I_max, I_0]`.
pub fn four_step_profit(i0: i64, step: i64, w: i64) -> PwlFunction<f64> {
    let slopes = [3 * w, w, 0, -w];
    let mut level = vec![(0i64, 0i64)];
    for (k, s) in slopes.iter().enumerate() {
        let (x, v) = level[k];
        level.push((x + step, v + s * step));
    }
    let value = |inv: i64| -> f64 {
        let k = ((inv / step) as usize).min(3);
        let (x, v) = level[k];
        (v + slopes[k] * (inv - x)) as f64
    };
    let f0 = value(i0);
    let pts: Vec<(f64, f64)> = (0..=4)
        .rev()
        .map(|k| {
            let inv = k as i64 * step;
            ((i0 - inv) as f64, f0 - value(inv))
        })
        .collect();
    PwlFunction::from_breakpoints(&pts).expect("increasing transfers")
}

/// A route-evaluation instance built on one randomized route.
#[derive(Clone, Debug)]
pub struct SrltpInstance {
    pub instance: Instance<f64>,
    /// Indices into the base points, in visiting order.
    pub route: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SrltpConfig {
    pub routes: usize,
    /// Candidates for each randomized nearest-neighbour step.
    pub k: usize,
    /// `I_max = 4 * step` with `step` drawn from this range; by default
    /// `ceil(Q_max / 16) ..= ceil(Q_max / 4)`.
    pub step: Option<Span>,
}

impl Default for SrltpConfig {
    fn default() -> Self {
        SrltpConfig {
            routes: 20,
            k: 3,
            step: None,
        }
    }
}

pub fn generate_srltp(base: &Orienteering, qmax: f64, seed: u64, cfg: &SrltpConfig) -> Result<Vec<SrltpInstance>> {
    let n = base.points.len();
    if n < 2 {
        return Err(Error::InvalidInstance("an orienteering base needs at least two points".into()));
    }
    if !(qmax >= 1.0) {
        return Err(Error::InvalidInstance(format!("capacity {qmax} must be at least 1")));
    }
    let span = cfg.step.unwrap_or(((qmax / 16.0).ceil() as i64, (qmax / 4.0).ceil() as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stations: Vec<PwlFunction<f64>> = base
        .points
        .iter()
        .map(|p| {
            let step = draw(&mut rng, span);
            let i0 = rng.gen_range(0..=4 * step);
            let w = 1 + (p.2.max(0.0) as i64) / 10;
            four_step_profit(i0, step, w)
        })
        .collect();
    (0..cfg.routes)
        .map(|_| {
            let route = nearest_neighbor_route(&base.points, cfg.k, &mut rng);
            let m = route.len();
            let mut cost = vec![vec![None; m]; m];
            for a in 0..m {
                for b in a + 1..m {
                    cost[a][b] = Some(dist(&base.points[route[a]], &base.points[route[b]]));
                }
            }
            let profit = route.iter().map(|&p| stations[p].clone()).collect();
            let instance = Instance::with_time_equal_cost(cost, profit, qmax, Some(base.tmax))?;
            Ok(SrltpInstance { instance, route })
        })
        .collect()
}

/// Both generators' settings, as stored in a config file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub lswrc: LswrcConfig,
    pub srltp: SrltpConfig,
}

/// Shuffle helper kept deterministic for callers that want random subsets of a base.
pub fn sample_points(base: &Orienteering, count: usize, seed: u64) -> Orienteering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = base.points.len();
    let mut inner: Vec<usize> = (1..n.saturating_sub(1)).collect();
    inner.shuffle(&mut rng);
    inner.truncate(count.saturating_sub(2));
    inner.sort_unstable();
    let mut idx = vec![0];
    idx.extend(inner);
    if n > 1 {
        idx.push(n - 1);
    }
    Orienteering {
        tmax: base.tmax,
        paths: base.paths,
        points: idx.into_iter().map(|i| base.points[i]).collect(),
    }
}
