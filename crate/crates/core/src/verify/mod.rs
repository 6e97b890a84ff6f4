//! Named verification suites over every module, with pass/fail reports.

mod algebra;
mod discrete;
mod geometry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::Caps;
use crate::error::{Error, Result};
use crate::geometry::CollapseDirection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cosimplicial,
    Poset,
    Twisted,
    Bicomplex,
    Pages,
    Geometry,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Cosimplicial, Suite::Poset, Suite::Twisted, Suite::Bicomplex, Suite::Pages, Suite::Geometry];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cosimplicial => "cosimplicial",
            Suite::Poset => "poset",
            Suite::Twisted => "twisted",
            Suite::Bicomplex => "bicomplex",
            Suite::Pages => "pages",
            Suite::Geometry => "geometry",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}; expected one of cosimplicial, poset, twisted, bicomplex, pages, geometry")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scope of a suite run. `None` fields take suite-specific defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub m: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    pub collapse: CollapseDirection,
    pub caps: Caps,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { m: None, n_max: None, seed: 42, samples: 1000, collapse: CollapseDirection::Em, caps: Caps::default() }
    }
}

impl VerifyOptions {
    fn heights(&self, default: &[usize]) -> Vec<usize> {
        self.m.map_or_else(|| default.to_vec(), |m| vec![m])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of individual instances examined.
    pub instances: u64,
    /// Largest floating-point deviation, for numeric checks.
    pub max_deviation: Option<f64>,
    pub detail: String,
}

impl Check {
    pub(crate) fn exact(name: impl Into<String>, instances: u64, failures: &[String]) -> Check {
        let detail = match failures {
            [] => String::new(),
            [first, ..] => format!("{} failure(s); first: {first}", failures.len()),
        };
        Check { name: name.into(), passed: failures.is_empty(), instances, max_deviation: None, detail }
    }

    pub(crate) fn numeric(name: impl Into<String>, instances: u64, max_deviation: f64, tolerance: f64, failures: &[String]) -> Check {
        let mut c = Check::exact(name, instances, failures);
        c.passed = c.passed && max_deviation <= tolerance;
        c.max_deviation = Some(max_deviation);
        if max_deviation > tolerance && c.detail.is_empty() {
            c.detail = format!("deviation {max_deviation:e} exceeds {tolerance:e}");
        }
        c
    }

    pub(crate) fn from_result(name: impl Into<String>, r: Result<Check>) -> Check {
        let name = name.into();
        r.unwrap_or_else(|e| Check { name, passed: false, instances: 0, max_deviation: None, detail: e.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}/{} instances={}", self.suite, c.name, c.instances));
            if let Some(d) = c.max_deviation {
                out.push_str(&format!(" max_dev={d:e}"));
            }
            if !c.detail.is_empty() {
                out.push_str(&format!(" :: {}", c.detail));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,seed,check,passed,instances,max_deviation,detail\n");
        for c in &self.checks {
            let dev = c.max_deviation.map(|d| format!("{d:e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},\"{}\"\n",
                self.suite,
                self.seed,
                c.name,
                c.passed,
                c.instances,
                dev,
                c.detail.replace('"', "\"\"")
            ));
        }
        out
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Cosimplicial => discrete::cosimplicial(opts),
        Suite::Poset => discrete::poset(opts),
        Suite::Twisted => discrete::twisted(opts),
        Suite::Bicomplex => algebra::bicomplex(opts),
        Suite::Pages => algebra::pages(opts),
        Suite::Geometry => geometry::geometry(opts),
    };
    SuiteReport { suite, seed: opts.seed, checks }
}

pub use algebra::{betti_numbers_over_q, normalization_agreement, poincare_betti};
pub use discrete::{coface_identity_failures, IdentityFamily};
