//! Flat `key = value` experiment configuration.
//!
//! Blank lines and text after `#` are ignored. Unknown keys are errors. The
//! `problem` key selects the defaults every other key overrides, so it may
//! appear anywhere in the file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::solver::{BlendedConfig, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    SineGordon,
    Nls,
    Kdv,
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sine-gordon" | "sine_gordon" | "sinegordon" | "wave" => Ok(Problem::SineGordon),
            "nls" | "schrodinger" => Ok(Problem::Nls),
            "kdv" => Ok(Problem::Kdv),
            other => Err(Error::Config(format!("unknown problem `{other}`"))),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::SineGordon => "sine-gordon",
            Problem::Nls => "nls",
            Problem::Kdv => "kdv",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `s`-stage Gauss collocation, i.e. HBVM(s,s).
    Gauss,
    /// HBVM(k,s).
    Hbvm,
    /// HBVM with `(k,s)` chosen by spectral order selection at the start.
    Shbvm,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gauss" => Ok(Method::Gauss),
            "hbvm" => Ok(Method::Hbvm),
            "shbvm" => Ok(Method::Shbvm),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Gauss => "gauss",
            Method::Hbvm => "hbvm",
            Method::Shbvm => "shbvm",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    /// Fourier truncation index `N`.
    pub modes: usize,
    /// Quadrature size; `None` selects the layout default.
    pub m: Option<usize>,
    pub method: Method,
    pub s: usize,
    /// Quadrature count for `hbvm` (ignored by `gauss`, where `k = s`).
    pub k: usize,
    pub n_list: Vec<usize>,
    pub t_end: f64,
    pub a: f64,
    pub b: f64,
    /// Breather parameter (sine-Gordon).
    pub gamma: f64,
    /// Dispersion `ε` (KdV).
    pub epsilon: f64,
    /// Elliptic parameter (KdV).
    pub modulus: f64,
    /// Initial crest position (KdV).
    pub x0: f64,
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub max_iter: usize,
    pub shbvm_tol: f64,
    pub k_offset: usize,
    pub s_min: usize,
    pub s_max: usize,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Benchmark settings for a problem: sine-Gordon breather on `[-50, 50]`,
    /// `T = 100`, `N = 250`; Schrödinger soliton on `[-40, 120]`, `T = 20`,
    /// `N = 600`; KdV cnoidal wave on `[0, 1]`, `T = 10`, `N = 50`, `m = 151`.
    pub fn defaults(problem: Problem) -> Self {
        let eps = f64::EPSILON.sqrt();
        let solver = BlendedConfig::default();
        let base = Self {
            problem,
            modes: 250,
            m: None,
            method: Method::Gauss,
            s: 1,
            k: 1,
            n_list: vec![1000],
            t_end: 100.0,
            a: -50.0,
            b: 50.0,
            gamma: 1.5,
            epsilon: 1e-2,
            modulus: 0.9,
            x0: 0.5,
            tol_rel: solver.tol_rel,
            tol_abs: solver.tol_abs,
            max_iter: solver.max_iter,
            shbvm_tol: eps,
            k_offset: 2,
            s_min: 4,
            s_max: 32,
            output: None,
        };
        match problem {
            Problem::SineGordon => base,
            Problem::Nls => Self {
                modes: 600,
                n_list: vec![400],
                t_end: 20.0,
                a: -40.0,
                b: 120.0,
                shbvm_tol: 0.1 * eps,
                ..base
            },
            Problem::Kdv => Self {
                modes: 50,
                m: Some(151),
                n_list: vec![10000],
                t_end: 10.0,
                a: 0.0,
                b: 1.0,
                shbvm_tol: 0.1 * eps,
                ..base
            },
        }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig::blended(BlendedConfig {
            tol_rel: self.tol_rel,
            tol_abs: self.tol_abs,
            max_iter: self.max_iter,
        })
    }

    /// `(k, s)` for fixed-order methods; `None` for `shbvm`.
    pub fn fixed_order(&self) -> Option<(usize, usize)> {
        match self.method {
            Method::Gauss => Some((self.s, self.s)),
            Method::Hbvm => Some((self.k, self.s)),
            Method::Shbvm => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.modes == 0 {
            return fail("N must be positive".into());
        }
        if let Some(m) = self.m {
            if m <= 2 * self.modes {
                return fail(format!("m = {m} must exceed 2N = {}", 2 * self.modes));
            }
        }
        if self.n_list.is_empty() {
            return fail("n_list must not be empty".into());
        }
        if self.n_list[0] == 0 || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return fail("n_list must be positive and strictly increasing".into());
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return fail("t_end must be positive".into());
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.b > self.a) {
            return fail(format!("invalid interval [{}, {}]", self.a, self.b));
        }
        match self.method {
            Method::Gauss | Method::Hbvm if self.s == 0 => return fail("s must be positive".into()),
            Method::Hbvm if self.k < self.s => return fail(format!("hbvm needs k >= s, got k = {}, s = {}", self.k, self.s)),
            Method::Shbvm if !(self.shbvm_tol > 0.0) => return fail("shbvm_tol must be positive".into()),
            Method::Shbvm if self.s_min < 2 || self.s_min > self.s_max => {
                return fail("need 2 <= s_min <= s_max".into())
            }
            _ => {}
        }
        if self.problem == Problem::SineGordon && !(self.gamma > 1.0) {
            return fail("gamma must exceed 1".into());
        }
        if self.problem == Problem::Kdv && !(0.0..1.0).contains(&self.modulus) {
            return fail("modulus must lie in [0, 1)".into());
        }
        self.solver().tolerances.validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Parse configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        Self::from_pairs(&pairs)
    }

    /// Build from `key = value` pairs, starting from the defaults of the
    /// `problem` entry (sine-Gordon if absent).
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let problem = match pairs.iter().rev().find(|(k, _)| k == "problem") {
            Some((_, v)) => v.parse()?,
            None => Problem::SineGordon,
        };
        let mut cfg = Self::defaults(problem);
        for (k, v) in pairs {
            if k != "problem" {
                cfg.set(k, v)?;
            }
        }
        Ok(cfg)
    }

    /// Apply `key=value` overrides on top of this configuration. A `problem`
    /// override only changes the problem tag, not the other fields.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
        }
        match key {
            "problem" => self.problem = value.parse()?,
            "N" | "modes" => self.modes = num(key, value)?,
            "m" => {
                self.m = match value {
                    "" | "auto" | "default" => None,
                    v => Some(num(key, v)?),
                }
            }
            "method" => self.method = value.parse()?,
            "s" => self.s = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "n_list" => {
                self.n_list = value
                    .split(',')
                    .map(|p| num(key, p.trim()))
                    .collect::<Result<Vec<usize>>>()?
            }
            "t_end" => self.t_end = num(key, value)?,
            "a" => self.a = num(key, value)?,
            "b" => self.b = num(key, value)?,
            "gamma" => self.gamma = num(key, value)?,
            "epsilon" => self.epsilon = num(key, value)?,
            "modulus" => self.modulus = num(key, value)?,
            "x0" => self.x0 = num(key, value)?,
            "tol_rel" => self.tol_rel = num(key, value)?,
            "tol_abs" => self.tol_abs = num(key, value)?,
            "max_iter" => self.max_iter = num(key, value)?,
            "shbvm_tol" => self.shbvm_tol = num(key, value)?,
            "k_offset" => self.k_offset = num(key, value)?,
            "s_min" => self.s_min = num(key, value)?,
            "s_max" => self.s_max = num(key, value)?,
            "output" => {
                self.output = match value {
                    "" | "-" => None,
                    v => Some(PathBuf::from(v)),
                }
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Render as configuration text that [`parse`](Self::parse) maps back to
    /// an identical value.
    pub fn render(&self) -> String {
        let list: Vec<String> = self.n_list.iter().map(|n| n.to_string()).collect();
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        line("problem", self.problem.to_string());
        line("N", self.modes.to_string());
        line("m", self.m.map_or("auto".into(), |m| m.to_string()));
        line("method", self.method.to_string());
        line("s", self.s.to_string());
        line("k", self.k.to_string());
        line("n_list", list.join(","));
        line("t_end", format!("{:?}", self.t_end));
        line("a", format!("{:?}", self.a));
        line("b", format!("{:?}", self.b));
        line("gamma", format!("{:?}", self.gamma));
        line("epsilon", format!("{:?}", self.epsilon));
        line("modulus", format!("{:?}", self.modulus));
        line("x0", format!("{:?}", self.x0));
        line("tol_rel", format!("{:?}", self.tol_rel));
        line("tol_abs", format!("{:?}", self.tol_abs));
        line("max_iter", self.max_iter.to_string());
        line("shbvm_tol", format!("{:?}", self.shbvm_tol));
        line("k_offset", self.k_offset.to_string());
        line("s_min", self.s_min.to_string());
        line("s_max", self.s_max.to_string());
        line(
            "output",
            self.output.as_ref().map_or("-".into(), |p| p.display().to_string()),
        );
        out
    }
}
