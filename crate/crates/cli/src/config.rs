//! Run settings from a key=value file overlaid with command-line flags.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sweepfv::{Driver, Error, Result, Vec2, WenoConfig};

use crate::CommonArgs;

pub const KEYS: [&str; 12] = [
    "case", "mesh", "driver", "cfl", "delta", "max_iters", "levels", "out", "ref_points", "threads",
    "epsilon", "big_stencil",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: String,
    pub mesh: Option<PathBuf>,
    pub driver: Driver,
    pub cfl: f64,
    /// Falls back to the case default.
    pub delta: Option<f64>,
    pub max_iters: Option<usize>,
    pub levels: Option<usize>,
    pub out: Option<PathBuf>,
    pub ref_points: Option<[Vec2; 4]>,
    pub threads: Option<usize>,
    pub epsilon: Option<f64>,
    pub big_stencil: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: "euler_nosource".into(),
            mesh: None,
            driver: Driver::FeFastSweep,
            cfl: 0.6,
            delta: None,
            max_iters: None,
            levels: None,
            out: None,
            ref_points: None,
            threads: None,
            epsilon: None,
            big_stencil: None,
        }
    }
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: n + 1,
            msg: format!("expected key=value, got '{line}'"),
        })?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Parse {
                line: n + 1,
                msg: format!("unknown key '{k}'"),
            });
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

pub fn parse_ref_points(s: &str) -> Result<[Vec2; 4]> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Config(format!("bad reference points '{s}': {e}")))?;
    if vals.len() != 8 {
        return Err(Error::Config(format!(
            "expected 8 coordinates for 4 reference points, got {}",
            vals.len()
        )));
    }
    Ok(std::array::from_fn(|k| Vec2::new(vals[2 * k], vals[2 * k + 1])))
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| Error::Config(format!("bad value for {key} '{v}': {e}")))
}

impl RunConfig {
    pub fn apply(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "case" => self.case = v.to_string(),
            "mesh" => self.mesh = Some(PathBuf::from(v)),
            "driver" => self.driver = v.parse()?,
            "cfl" => self.cfl = value(key, v)?,
            "delta" => self.delta = Some(value(key, v)?),
            "max_iters" => self.max_iters = Some(value(key, v)?),
            "levels" => self.levels = Some(value(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "ref_points" => self.ref_points = Some(parse_ref_points(v)?),
            "threads" => self.threads = Some(value(key, v)?),
            "epsilon" => self.epsilon = Some(value(key, v)?),
            "big_stencil" => self.big_stencil = Some(value(key, v)?),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path)?;
            let map = parse_file(&text)?;
            // a fixed order keeps error reporting deterministic
            for key in KEYS {
                if let Some(v) = map.get(key) {
                    cfg.apply(key, v)?;
                }
            }
            // relative paths in the file are relative to the file
            let base = path.parent().unwrap_or(Path::new(""));
            cfg.mesh = cfg.mesh.map(|m| base.join(m));
            cfg.out = cfg.out.map(|o| base.join(o));
        }
        if let Some(v) = &args.case {
            cfg.case = v.clone();
        }
        if let Some(v) = &args.mesh {
            cfg.mesh = Some(v.clone());
        }
        if let Some(v) = &args.driver {
            cfg.driver = v.parse()?;
        }
        if let Some(v) = args.cfl {
            cfg.cfl = v;
        }
        if let Some(v) = args.delta {
            cfg.delta = Some(v);
        }
        if let Some(v) = args.max_iters {
            cfg.max_iters = Some(v);
        }
        if let Some(v) = args.levels {
            cfg.levels = Some(v);
        }
        if let Some(v) = &args.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = &args.ref_points {
            cfg.ref_points = Some(parse_ref_points(v)?);
        }
        if let Some(v) = args.threads {
            cfg.threads = Some(v);
        }
        if let Some(v) = args.epsilon {
            cfg.epsilon = Some(v);
        }
        if let Some(v) = args.big_stencil {
            cfg.big_stencil = Some(v);
        }
        if !(cfg.cfl > 0.0) {
            return Err(Error::Config(format!("CFL must be positive, got {}", cfg.cfl)));
        }
        if cfg.delta.is_some_and(|d| !(d > 0.0)) {
            return Err(Error::Config("delta must be positive".into()));
        }
        if cfg.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        cfg.weno().validate()?;
        Ok(cfg)
    }

    pub fn weno(&self) -> WenoConfig {
        let d = WenoConfig::default();
        WenoConfig {
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            big_stencil: self.big_stencil.unwrap_or(d.big_stencil),
            ..d
        }
    }

    pub fn mesh(&self) -> Result<&Path> {
        self.mesh
            .as_deref()
            .ok_or_else(|| Error::Config("no mesh given (--mesh)".into()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}
