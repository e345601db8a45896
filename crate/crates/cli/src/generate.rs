// SPDX-License-Identifier: Apache-2.0
//! The `gen` commands.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use pwlship::format::{write_instance, Document, InstanceFile};
use pwlship::instgen::{
    generate_lswrc_with, generate_srltp, parse_orienteering, synthetic_orienteering, GeneratorConfig,
};
use serde_json::json;

use crate::input::stem;
use crate::{GenLswrcArgs, GenSrltpArgs};

fn read_config(path: Option<&Path>) -> Result<GeneratorConfig> {
    match path {
        None => Ok(GeneratorConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("bad generator config {}", p.display()))
        }
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn lswrc(args: &GenLswrcArgs) -> Result<()> {
    let cfg = read_config(args.config.as_deref())?;
    fs::create_dir_all(&args.out_dir).with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let mut count = 0;
    for &n in &args.n {
        anyhow::ensure!(n >= 2, "need at least two periods, got {n}");
        for &q in &args.qmax_class {
            for &t in &args.theta_class {
                for seed in args.first_seed..args.first_seed + args.seeds {
                    let ls = generate_lswrc_with(n, q.qmax(), t.theta(), seed, &cfg.lswrc);
                    let meta = json!({
                        "generator": "lswrc",
                        "n": n,
                        "qmax_class": q.name(),
                        "theta_class": t.name(),
                        "seed": seed,
                        "config": cfg.lswrc,
                    });
                    let file = InstanceFile::new(Document::Lswrc(ls)).with_meta(meta);
                    let name = format!("lswrc_n{n}_q{}_t{}_s{seed}.json", q.name(), t.name());
                    write(&args.out_dir, &name, &write_instance(&file))?;
                    count += 1;
                }
            }
        }
    }
    eprintln!("wrote {count} instances to {}", args.out_dir.display());
    Ok(())
}

pub fn srltp(args: &GenSrltpArgs) -> Result<()> {
    let mut cfg = read_config(args.config.as_deref())?.srltp;
    if let Some(routes) = args.routes {
        cfg.routes = routes;
    }
    if let Some(k) = args.k {
        cfg.k = k;
    }
    anyhow::ensure!(cfg.k >= 1, "k must be at least 1");
    let (base, label) = match (&args.base, args.synthetic) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            (parse_orienteering(&text)?, stem(path))
        }
        (None, Some(points)) => {
            anyhow::ensure!(points >= 2, "need at least two points");
            (synthetic_orienteering(points, args.seed), format!("synthetic{points}"))
        }
        (None, None) => anyhow::bail!("either --base or --synthetic is required"),
    };
    fs::create_dir_all(&args.out_dir).with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let mut count = 0;
    for &q in &args.qmax {
        let seed = args.seed.wrapping_add(u64::from(q));
        let routes = generate_srltp(&base, f64::from(q), seed, &cfg)?;
        for (r, inst) in routes.into_iter().enumerate() {
            let meta = json!({
                "generator": "srltp",
                "base": label,
                "qmax": q,
                "seed": seed,
                "route_index": r,
                "route": inst.route,
                "config": cfg,
            });
            let file = InstanceFile::new(Document::Areltp(inst.instance)).with_meta(meta);
            write(&args.out_dir, &format!("srltp_{label}_q{q}_r{r}.json"), &write_instance(&file))?;
            count += 1;
        }
    }
    eprintln!("wrote {count} instances to {}", args.out_dir.display());
    Ok(())
}
