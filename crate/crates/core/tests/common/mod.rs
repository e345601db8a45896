// SPDX-License-Identifier: Apache-2.0
//! Shared generators and reference evaluations for the integration tests.
#![allow(dead_code)]

use pwlship::lswrc::LotSizingInstance;
use pwlship::pwl::{PwlFunction, Segment};
use pwlship::Instance;
use pwlship::{Rational, Scalar};
use rand::Rng;

pub fn r(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn half(v: i64) -> Rational {
    Rational::new(v as i128, 2)
}

/// Random function with gaps, jumps and point segments on half-integer borders.
pub fn random_function<R: Rng>(rng: &mut R, max_segments: usize) -> PwlFunction<Rational> {
    let k = rng.gen_range(1..=max_segments);
    let mut x = half(rng.gen_range(-10..=10));
    let mut segs = Vec::with_capacity(k);
    for i in 0..k {
        if i > 0 && rng.gen_bool(0.3) {
            x = x + half(rng.gen_range(1..=4));
        }
        let len = if rng.gen_bool(0.1) { r(0) } else { half(rng.gen_range(1..=6)) };
        let value = half(rng.gen_range(-10..=10));
        let slope = half(rng.gen_range(-6..=6));
        let seg = Segment::new(slope, value - slope * x, x, x + len);
        segs.push(seg);
        x = x + len;
    }
    PwlFunction::new(segs).unwrap()
}

/// Continuous function on one interval.
pub fn random_continuous<R: Rng>(rng: &mut R, max_segments: usize, nondecreasing: bool) -> PwlFunction<Rational> {
    let k = rng.gen_range(1..=max_segments);
    let mut x = half(rng.gen_range(-6..=6));
    let mut y = half(rng.gen_range(-10..=10));
    let mut pts = vec![(x, y)];
    for _ in 0..k {
        let dx = half(rng.gen_range(1..=6));
        let slope = if nondecreasing {
            half(rng.gen_range(0..=6))
        } else {
            half(rng.gen_range(-6..=6))
        };
        x = x + dx;
        y = y + slope * dx;
        pts.push((x, y));
    }
    PwlFunction::from_breakpoints(&pts).unwrap()
}

/// Nondecreasing function that may jump up and leave gaps.
pub fn random_nondecreasing<R: Rng>(rng: &mut R, max_segments: usize) -> PwlFunction<Rational> {
    let k = rng.gen_range(1..=max_segments);
    let mut x = half(rng.gen_range(-6..=6));
    let mut y = half(rng.gen_range(-10..=10));
    let mut segs = Vec::new();
    for i in 0..k {
        if i > 0 && rng.gen_bool(0.3) {
            x = x + half(rng.gen_range(1..=3));
        }
        if i > 0 && rng.gen_bool(0.4) {
            y = y + half(rng.gen_range(1..=4));
        }
        let len = half(rng.gen_range(1..=6));
        let slope = half(rng.gen_range(0..=6));
        segs.push(Segment::new(slope, y - slope * x, x, x + len));
        x = x + len;
        y = y + slope * len;
    }
    PwlFunction::new(segs).unwrap()
}

pub fn borders(f: &PwlFunction<Rational>) -> Vec<Rational> {
    let mut xs: Vec<Rational> = f.segments().iter().flat_map(|s| [s.lo, s.hi]).collect();
    xs.sort();
    xs.dedup();
    xs
}

/// Direct minimum over all segments of all functions containing `q`.
pub fn brute_min(fs: &[PwlFunction<Rational>], q: Rational) -> Option<Rational> {
    fs.iter()
        .flat_map(|f| f.segments().iter())
        .filter(|s| s.lo <= q && q <= s.hi)
        .map(|s| s.at(q))
        .min()
}

/// Reference superposition: minimum over y at every f-breakpoint and every y
/// where `q - y` hits a breakpoint of `v`.
pub fn brute_superpose(v: &PwlFunction<Rational>, f: &PwlFunction<Rational>, q: Rational) -> Option<Rational> {
    let mut ys = borders(f);
    ys.extend(borders(v).into_iter().map(|b| q - b));
    ys.into_iter()
        .filter_map(|y| {
            let fy = brute_min(std::slice::from_ref(f), y)?;
            let vq = brute_min(std::slice::from_ref(v), q - y)?;
            Some(fy + vq)
        })
        .min()
}

/// Breakpoints of the inputs plus the midpoints between consecutive ones.
pub fn probe_points(mut xs: Vec<Rational>) -> Vec<Rational> {
    xs.sort();
    xs.dedup();
    let mids: Vec<Rational> = xs.windows(2).map(|w| (w[0] + w[1]) / r(2)).collect();
    xs.extend(mids);
    xs.sort();
    xs
}

pub fn superpose_probes(v: &PwlFunction<Rational>, f: &PwlFunction<Rational>) -> Vec<Rational> {
    let bv = borders(v);
    let bf = borders(f);
    let sums: Vec<Rational> = bv.iter().flat_map(|a| bf.iter().map(move |b| *a + *b)).collect();
    probe_points(sums)
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn is_valid(f: &PwlFunction<Rational>) -> bool {
    PwlFunction::new(f.segments().to_vec()).is_ok()
}

pub fn to_f64_fn(f: &PwlFunction<Rational>) -> PwlFunction<f64> {
    PwlFunction::new(
        f.segments()
            .iter()
            .map(|s| Segment::new(s.slope.to_f64(), s.intercept.to_f64(), s.lo.to_f64(), s.hi.to_f64()))
            .collect(),
    )
    .unwrap()
}

/// Integral function with integer breakpoints on a domain around zero.
///
/// About one in six domains leaves zero out, and some functions jump.
pub fn random_transfer<R: Rng>(rng: &mut R, qmax: i64) -> PwlFunction<Rational> {
    let mut lo = -rng.gen_range(0..=qmax);
    let mut hi = rng.gen_range(0..=qmax);
    if rng.gen_ratio(1, 6) {
        if rng.gen_bool(0.5) {
            lo = rng.gen_range(1..=qmax.max(1));
            hi = lo + rng.gen_range(0..=2);
        } else {
            hi = -rng.gen_range(1..=qmax.max(1));
            lo = hi - rng.gen_range(0..=2);
        }
    }
    if lo == hi {
        let v = r(rng.gen_range(-10..=10));
        return PwlFunction::new(vec![Segment::new(r(0), v, r(lo), r(lo))]).unwrap();
    }
    let mut cuts: Vec<i64> = (lo + 1..hi).filter(|_| rng.gen_ratio(1, 3)).collect();
    cuts.insert(0, lo);
    cuts.push(hi);
    let mut y = r(rng.gen_range(-10..=10));
    let mut segs = Vec::new();
    for w in cuts.windows(2) {
        if segs.len() > 0 && rng.gen_ratio(1, 5) {
            y = y + r(rng.gen_range(-4..=4));
        }
        let slope = r(rng.gen_range(-5..=5));
        let (a, b) = (r(w[0]), r(w[1]));
        segs.push(Segment::new(slope, y - slope * a, a, b));
        y = y + slope * (b - a);
    }
    PwlFunction::new(segs).unwrap()
}

pub struct RandomShape {
    pub n: usize,
    pub qmax: i64,
    /// Probability that a non-consecutive arc is missing.
    pub missing: f64,
    pub skip_terms: bool,
    pub tmax: bool,
}

/// Integral instance; with `tmax` the limit lies between the fastest and the slowest direct route.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &RandomShape) -> Instance<Rational> {
    let n = shape.n;
    let mut cost = vec![vec![None; n]; n];
    let mut time = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if j > i + 1 && rng.gen_bool(shape.missing) {
                continue;
            }
            cost[i][j] = Some(r(rng.gen_range(0..=9)));
            time[i][j] = Some(r(rng.gen_range(1..=6)));
        }
    }
    let profit: Vec<_> = (0..n).map(|_| random_transfer(rng, shape.qmax)).collect();
    let mut inst = Instance::new(cost, time, profit, r(shape.qmax), None).unwrap();
    if shape.skip_terms {
        let load: Vec<_> = (0..n).map(|_| r(-rng.gen_range(0..=2))).collect();
        let cost: Vec<_> = (0..n).map(|_| r(rng.gen_range(-3..=3))).collect();
        inst = inst.with_skip_terms(load, cost).unwrap();
    }
    if shape.tmax {
        let all: Vec<usize> = (0..n).collect();
        let slowest = inst.route_time(&all).unwrap_or(r(6 * n as i64));
        let t = rng.gen_range(1..=slowest.to_i64().unwrap().max(1));
        inst = inst.with_tmax(Some(r(t)));
    }
    inst
}

/// Period data for the lot-sizing reduction: concave or arbitrary production costs.
pub fn random_lot_sizing<R: Rng>(rng: &mut R, n: usize) -> LotSizingInstance<Rational> {
    let qmax = rng.gen_range(3..=8);
    let demand: Vec<_> = (0..n).map(|_| r(rng.gen_range(0..=4))).collect();
    let holding: Vec<_> = (0..n).map(|_| r(rng.gen_range(0..=3))).collect();
    let production: Vec<_> = demand
        .iter()
        .map(|d| {
            let b = qmax + d.to_i64().unwrap();
            let k = rng.gen_range(1..=3);
            let mut pts = vec![(r(0), r(0))];
            let mut x = 0;
            let mut y = rng.gen_range(0..=4);
            let mut slope = rng.gen_range(4..=10);
            for step in 0..k {
                let nx = if step + 1 == k { b } else { (x + rng.gen_range(1..=3)).min(b) };
                if nx <= x {
                    break;
                }
                y += slope * (nx - x);
                pts.push((r(nx), r(y)));
                x = nx;
                slope = (slope - rng.gen_range(1..=3)).max(0);
            }
            let mut segs = vec![Segment::point(r(0), r(0))];
            for w in pts.windows(2) {
                let (a, fa) = w[0];
                let (b, fb) = w[1];
                let fa = if a == r(0) { fa + r(rng.gen_range(0..=4)) } else { fa };
                segs.push(Segment::through(a, fa, b, fb));
            }
            PwlFunction::new(segs).unwrap()
        })
        .collect();
    let mut setup = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            setup[i][j] = Some(r(rng.gen_range(1..=6) + 2 * (j - i - 1) as i64));
        }
    }
    let tmax = if rng.gen_bool(0.6) {
        Some(r(rng.gen_range(6..=6 * n as i64)))
    } else {
        None
    };
    LotSizingInstance::new(demand, holding, production, setup, None, r(qmax), tmax).unwrap()
}

/// Nondecreasing function on one interval that may jump upward between pieces.
pub fn random_monotone_gap_free<R: Rng>(rng: &mut R, max_segments: usize) -> PwlFunction<Rational> {
    let k = rng.gen_range(1..=max_segments);
    let mut x = half(rng.gen_range(-6..=6));
    let mut y = half(rng.gen_range(-10..=10));
    let mut segs = Vec::new();
    for i in 0..k {
        if i > 0 && rng.gen_bool(0.4) {
            y = y + half(rng.gen_range(1..=4));
        }
        let len = half(rng.gen_range(1..=6));
        let slope = half(rng.gen_range(0..=6));
        segs.push(Segment::new(slope, y - slope * x, x, x + len));
        x = x + len;
        y = y + slope * len;
    }
    PwlFunction::new(segs).unwrap()
}

fn pair_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Envelope of two random functions against the pointwise minimum at breakpoints and midpoints.
pub fn check_envelope_pair(seed: u64) -> Result<(), String> {
    let mut rng = pair_rng(seed);
    let fs = [random_function(&mut rng, 5), random_function(&mut rng, 5)];
    let env = pwlship::pwl::envelope(&fs).map_err(|e| format!("seed {seed}: {e}"))?;
    if !is_valid(&env) {
        return Err(format!("seed {seed}: invalid envelope"));
    }
    for q in probe_points(fs.iter().flat_map(borders).collect()) {
        let (got, want) = (env.evaluate(q), brute_min(&fs, q));
        if got != want {
            return Err(format!("seed {seed}: envelope at {q} is {got:?}, minimum is {want:?}"));
        }
    }
    Ok(())
}

/// Superposition of two random functions against direct minimization over transfers.
pub fn check_superpose_pair(seed: u64) -> Result<(), String> {
    let mut rng = pair_rng(seed);
    let v = random_function(&mut rng, 5);
    let f = random_function(&mut rng, 4);
    let s = pwlship::pwl::superpose(&v, &f);
    if !is_valid(&s) {
        return Err(format!("seed {seed}: invalid superposition"));
    }
    for q in superpose_probes(&v, &f) {
        let (got, want) = (s.evaluate(q), brute_superpose(&v, &f, q));
        if got != want {
            return Err(format!("seed {seed}: superposition at {q} is {got:?}, reference {want:?}"));
        }
    }
    Ok(())
}

/// Nondecreasing gap-free inputs give a nondecreasing superposition.
pub fn check_monotone_pair(seed: u64) -> Result<(), String> {
    let mut rng = pair_rng(seed);
    let v = random_monotone_gap_free(&mut rng, 5);
    let f = random_monotone_gap_free(&mut rng, 4);
    let s = pwlship::pwl::superpose(&v, &f);
    if !s.is_nondecreasing() {
        return Err(format!("seed {seed}: superposition not nondecreasing"));
    }
    let values: Vec<Rational> = superpose_probes(&v, &f)
        .into_iter()
        .filter_map(|q| s.evaluate(q))
        .collect();
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(format!("seed {seed}: sampled values decrease"));
    }
    Ok(())
}

/// Continuous gap-free inputs give a continuous gap-free superposition.
pub fn check_continuous_pair(seed: u64) -> Result<(), String> {
    let mut rng = pair_rng(seed);
    let v = random_continuous(&mut rng, 5, false);
    let f = random_continuous(&mut rng, 4, false);
    let s = pwlship::pwl::superpose(&v, &f);
    if !s.is_continuous() {
        return Err(format!("seed {seed}: superposition not continuous"));
    }
    let (lo, hi) = s.bounds().ok_or(format!("seed {seed}: empty superposition"))?;
    let (vl, vh) = v.bounds().unwrap();
    let (fl, fh) = f.bounds().unwrap();
    if (lo, hi) != (vl + fl, vh + fh) {
        return Err(format!("seed {seed}: domain [{lo}, {hi}] is not the sum of the input domains"));
    }
    Ok(())
}

/// Run `check` on seeds `0..count` and report the first failure.
pub fn run_seeds(count: u64, check: impl Fn(u64) -> Result<(), String>) -> Result<(), String> {
    (0..count).try_for_each(check)
}

pub fn fixture_text(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// An exact route-evaluation fixture.
pub fn fixture_instance(name: &str) -> Instance<Rational> {
    use pwlship::format::{parse_instance, Document, Loaded};
    match parse_instance(&fixture_text(name)).unwrap() {
        Loaded::Exact(file) => match file.document {
            Document::Areltp(inst) => inst,
            Document::Lswrc(_) => panic!("{name} is a lot-sizing file"),
        },
        Loaded::Float(_) => panic!("{name} is not exact"),
    }
}

/// The constrained instances shared by the duality tests: seeded random ones and the fixture.
pub fn constrained_instances(count: u64) -> Vec<Instance<Rational>> {
    use rand::SeedableRng;
    let mut out: Vec<_> = (0..count)
        .map(|seed| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let shape = RandomShape {
                n: rng.gen_range(4..=7),
                qmax: rng.gen_range(1..=10),
                missing: 0.15,
                skip_terms: rng.gen_ratio(1, 4),
                tmax: true,
            };
            random_instance(&mut rng, &shape)
        })
        .collect();
    out.push(fixture_instance("constrained_six.json"));
    out
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DualityCounts {
    pub feasible: usize,
    pub evaluations: usize,
    pub bracket_closed: usize,
    pub triples: usize,
}

fn relative_gap(a: Rational, b: Rational) -> f64 {
    let (a, b) = (a.to_f64(), b.to_f64());
    (a - b) / (1.0 + a.abs().max(b.abs()))
}

/// Weak duality, the upper bounds, the stopping rule and concavity of `L` on one instance.
pub fn check_duality(inst: &Instance<Rational>, seed: u64, counts: &mut DualityCounts) -> Result<(), String> {
    use pwlship::bnb::{node_bounds, BnbOptions};
    use pwlship::dp::DpOptions;
    use pwlship::lagrangian::{evaluate_dual, solve_dual, DualTolerances, Termination};
    use rand::SeedableRng;

    let Ok(opt) = pwlship::oracle::brute_force(inst, true) else {
        return Ok(());
    };
    counts.feasible += 1;
    let z = opt.objective;
    let tmax = inst.tmax.unwrap();
    let restrictions = DpOptions::default();
    let dual = solve_dual(inst, &restrictions, DualTolerances::default()).map_err(|e| e.to_string())?;
    for e in &dual.evaluations {
        counts.evaluations += 1;
        if e.value > z {
            return Err(format!("L({}) = {} exceeds the optimum {z}", e.lambda, e.value));
        }
        if e.is_feasible() && e.primal.objective < z {
            return Err(format!("feasible relaxed route at {} beats the optimum", e.lambda));
        }
    }
    let by_lambda = {
        let mut v: Vec<_> = dual.evaluations.iter().map(|e| (e.lambda, e.slack)).collect();
        v.sort();
        v
    };
    if by_lambda.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err("slack decreases in the multiplier".into());
    }
    pwlship::model::validate(inst, &dual.feasible).map_err(|e| e.join("; "))?;
    if dual.feasible.duration > tmax {
        return Err("reported primal exceeds the limit".into());
    }
    if dual.feasible.objective < z {
        return Err("reported primal beats the optimum".into());
    }
    match dual.termination {
        Termination::IterationLimit => return Err("iteration limit reached".into()),
        Termination::BracketClosed => {
            counts.bracket_closed += 1;
            let root = evaluate_dual(inst, r(0), &restrictions).unwrap();
            let eps = 1e-6 * (1.0 + root.value.to_f64().abs());
            let width = (dual.bracket.1 - dual.bracket.0).to_f64();
            if width >= eps {
                return Err(format!("bracket width {width} not below {eps}"));
            }
        }
        Termination::RootFeasible | Termination::ComplementarySlackness => {}
    }
    let root = node_bounds(inst, &[], &[], &BnbOptions::default())
        .map_err(|e| e.to_string())?
        .ok_or("root node reported infeasible")?;
    if root.upper_bound < z || root.lower_bound > z {
        return Err(format!("root bounds [{}, {}] miss the optimum {z}", root.lower_bound, root.upper_bound));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let top = (dual.bracket.1 * r(2)).max(r(4)).ceil().to_integer() as i64;
    let l = |x: Rational| evaluate_dual(inst, x, &restrictions).map(|e| e.value).unwrap();
    for _ in 0..20 {
        let mut xs: Vec<Rational> = Vec::new();
        while xs.len() < 3 {
            let x = Rational::new(rng.gen_range(0..=64 * top) as i128, 64);
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
        xs.sort();
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        let chord = ((c - b) * l(a) + (b - a) * l(c)) / (c - a);
        if relative_gap(chord, l(b)) > 1e-9 {
            return Err(format!("L is not concave on {a}, {b}, {c}"));
        }
        counts.triples += 1;
    }
    Ok(())
}

/// Integral unconstrained instances for the structural checks, plus both fixtures without limit.
pub fn unconstrained_instances(count: u64) -> Vec<Instance<Rational>> {
    use rand::SeedableRng;
    let mut out: Vec<_> = (0..count)
        .map(|seed| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5000 + seed);
            let shape = RandomShape {
                n: rng.gen_range(3..=9),
                qmax: rng.gen_range(1..=12),
                missing: 0.2,
                skip_terms: rng.gen_ratio(1, 4),
                tmax: false,
            };
            random_instance(&mut rng, &shape)
        })
        .collect();
    out.push(fixture_instance("example_four_locations.json"));
    out.push(fixture_instance("constrained_six.json").with_tmax(None));
    out
}

/// A limit no route can reach: the sum of all arc times.
pub fn inactive_limit(inst: &Instance<Rational>) -> Rational {
    inst.time.iter().flatten().flatten().fold(r(1), |a, &t| a + t)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StructureCounts {
    pub solved: usize,
    pub integer_smaller: usize,
}

/// DP3d without limit equals DP, BBDP stops at the root, integer mode keeps the optimum
/// and never grows the last value function.
pub fn check_structure(inst: &Instance<Rational>, counts: &mut StructureCounts) -> Result<(), String> {
    use pwlship::bnb::{solve_bbdp, BnbOptions};
    use pwlship::dp::{solve_no_duration, solve_with_duration, DpOptions};
    use pwlship::Error;

    let mode = |m| DpOptions {
        integer_mode: Some(m),
        ..DpOptions::default()
    };
    let dp = match solve_no_duration(inst, &DpOptions::default()) {
        Ok(out) => out,
        Err(Error::Infeasible(_)) => {
            return match solve_with_duration(inst, &DpOptions::default()) {
                Err(Error::Infeasible(_)) => Ok(()),
                other => Err(format!("dp infeasible, dp3d gives {other:?}")),
            }
        }
        Err(e) => return Err(e.to_string()),
    };
    counts.solved += 1;
    let dp3d = solve_with_duration(inst, &DpOptions::default()).map_err(|e| e.to_string())?;
    if dp3d.solution.objective != dp.solution.objective {
        return Err(format!("dp3d {} but dp {}", dp3d.solution.objective, dp.solution.objective));
    }
    let loose = inst.clone().with_tmax(Some(inactive_limit(inst)));
    let bb = solve_bbdp(&loose, &BnbOptions::default()).map_err(|e| e.to_string())?;
    if bb.nodes != 1 || bb.solution.objective != dp.solution.objective {
        return Err(format!("inactive limit: {} nodes, objective {}", bb.nodes, bb.solution.objective));
    }
    let int = solve_no_duration(inst, &mode(true)).map_err(|e| e.to_string())?;
    let cont = solve_no_duration(inst, &mode(false)).map_err(|e| e.to_string())?;
    if int.value != cont.value {
        return Err(format!("integer mode {} but continuous {}", int.value, cont.value));
    }
    let (a, b) = (int.table.v[inst.n - 1].len(), cont.table.v[inst.n - 1].len());
    if a > b {
        return Err(format!("integer mode has {a} final segments, continuous {b}"));
    }
    counts.integer_smaller += usize::from(a < b);
    Ok(())
}

/// Savings against lot-for-lot summed directly from production quantities and setup periods.
///
/// Returns `(total, production, setup, inventory)`.
pub fn naive_savings(
    ls: &LotSizingInstance<Rational>,
    setups: &[usize],
    production: &[Rational],
) -> (Rational, Rational, Rational, Rational) {
    let n = ls.n;
    let l4l_prod: Rational = (0..n).map(|i| ls.production[i].evaluate(ls.demand[i]).unwrap()).sum();
    let l4l_setup: Rational = (0..n - 1).map(|i| ls.setup_cost[i][i + 1].unwrap()).sum();
    let z = l4l_prod + l4l_setup;
    let prod: Rational = setups.iter().map(|&i| ls.production[i].evaluate(production[i]).unwrap()).sum();
    let setup: Rational = setups.windows(2).map(|w| ls.setup_cost[w[0]][w[1]].unwrap()).sum();
    let mut stock = r(0);
    let mut holding = r(0);
    for i in 0..n {
        stock = stock + production[i] - ls.demand[i];
        holding = holding + ls.holding[i] * stock;
    }
    let total = (z - (prod + setup + holding)) / z;
    (total, (l4l_prod - prod) / z, (setup - l4l_setup) / z, holding / z)
}
