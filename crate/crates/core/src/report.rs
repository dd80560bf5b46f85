//! Report types for the command-line surface: per-pair verdict reports,
//! suite reports from the equivalence harness, and their JSON encoding.
//!
//! Reports are deterministic: the same configuration (including seeds)
//! produces byte-identical JSON, so wall-clock times never appear here.
//! Benchmark timings are a separate table that makes no reproducibility
//! promise. All counts are emitted as decimal strings so
//! arbitrary-precision values survive JSON readers that parse numbers
//! into doubles.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{write_graph6, Graph};
use crate::linsys::{CertificateKind, Feasibility};

/// Report format version, bumped on any incompatible field change.
pub const REPORT_SCHEMA: u32 = 1;

/// How a graph appears inside a report: its graph6 encoding plus the two
/// numbers everything is grouped by.
#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
}

impl GraphSummary {
    pub fn new(g: &Graph) -> GraphSummary {
        GraphSummary { graph6: write_graph6(g), n: g.n(), m: g.m() }
    }
}

/// Outcome of one linear-system feasibility question. The witness maps
/// variable names to exact `numerator/denominator` strings and is only
/// attached on request (witnesses for the lifted systems can be large).
#[derive(Clone, Debug, Serialize)]
pub struct LpVerdict {
    pub feasible: bool,
    pub certificate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
}

impl LpVerdict {
    pub fn new(f: &Feasibility, include_witness: bool) -> LpVerdict {
        let certificate = match f.certificate {
            CertificateKind::Solution => "solution",
            CertificateKind::RankMismatch => "rank-mismatch",
            CertificateKind::PositivePhaseOneOptimum => "positive-phase-one-optimum",
        };
        let witness = if include_witness {
            f.witness.as_ref().map(|w| {
                w.iter()
                    .map(|(k, v)| (k.clone(), format!("{}/{}", v.numer(), v.denom())))
                    .collect()
            })
        } else {
            None
        };
        LpVerdict { feasible: f.feasible, certificate: certificate.to_string(), witness }
    }
}

/// Result of a bounded pattern search: the size limit that was tried and
/// the first distinguishing pattern found (graph6), if any. Probes are
/// falsifiers only — an absent witness is not an equivalence verdict.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeVerdict {
    pub max_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Verdict of the k-dimensional tuple refinement on a pair.
#[derive(Clone, Debug, Serialize)]
pub struct KwlVerdict {
    pub k: usize,
    pub distinguished: bool,
}

/// Per-pair verdicts; every field is optional because the caller chooses
/// which deciders to run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PairVerdicts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wl1_distinguished: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kwl: Option<KwlVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiso_real: Option<LpVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiso_nonneg: Option<LpVerdict>,
    /// Level of the lifted system the two `liso_*` verdicts refer to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub liso_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub liso_real: Option<LpVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub liso_nonneg: Option<LpVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cospectral: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walk_fingerprint_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree_probe: Option<ProbeVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tw2_probe: Option<ProbeVerdict>,
}

/// Everything `compare` learned about one pair of graphs.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub schema: u32,
    pub left: GraphSummary,
    pub right: GraphSummary,
    pub verdicts: PairVerdicts,
}

impl VerdictReport {
    pub fn new(g: &Graph, h: &Graph) -> VerdictReport {
        VerdictReport {
            schema: REPORT_SCHEMA,
            left: GraphSummary::new(g),
            right: GraphSummary::new(h),
            verdicts: PairVerdicts::default(),
        }
    }

    /// Checks every implication between the verdicts that the equivalence
    /// theorems guarantee, returning a description of each violated one.
    /// A non-empty result means a bug in a decider, never a valid report
    /// state; callers are expected to fail loudly instead of emitting it.
    pub fn cross_check(&self) -> Vec<String> {
        let v = &self.verdicts;
        let mut broken = Vec::new();
        let mut imply = |cond: bool, msg: &str| {
            if !cond {
                broken.push(msg.to_string());
            }
        };

        if let (Some(wl1), Some(nn)) = (v.wl1_distinguished, &v.fiso_nonneg) {
            imply(
                nn.feasible == !wl1,
                "doubly-stochastic feasibility must coincide with vertex-refinement equivalence",
            );
        }
        if let (Some(fp), Some(re)) = (v.walk_fingerprint_equal, &v.fiso_real) {
            imply(
                re.feasible == fp,
                "real feasibility of the flat system must coincide with equal walk fingerprints",
            );
        }
        if let (Some(re), Some(nn)) = (&v.fiso_real, &v.fiso_nonneg) {
            imply(
                re.feasible || !nn.feasible,
                "a nonnegative solution of the flat system is in particular a real one",
            );
        }
        if let (Some(re), Some(nn)) = (&v.liso_real, &v.liso_nonneg) {
            imply(
                re.feasible || !nn.feasible,
                "a nonnegative solution of the lifted system is in particular a real one",
            );
        }
        if let (Some(level), Some(kwl), Some(nn)) = (v.liso_level, &v.kwl, &v.liso_nonneg) {
            if kwl.k + 1 == level {
                imply(
                    nn.feasible == !kwl.distinguished,
                    "lifted nonnegative feasibility must coincide with tuple-refinement equivalence",
                );
            }
        }
        if let Some(probe) = &v.tree_probe {
            if probe.witness.is_some() {
                if let Some(wl1) = v.wl1_distinguished {
                    imply(wl1, "a tree with differing counts forces vertex refinement to distinguish");
                }
                if let Some(nn) = &v.fiso_nonneg {
                    imply(
                        !nn.feasible,
                        "a tree with differing counts rules out a doubly-stochastic solution",
                    );
                }
                if let Some(fp) = v.walk_fingerprint_equal {
                    // not every distinguishing tree is a path, but paths are
                    // trees, so equal tree counts would force equal walks;
                    // the converse direction carries no implication
                    let _ = fp;
                }
            }
        }
        if v.wl1_distinguished == Some(false) {
            if let Some(probe) = &v.tree_probe {
                imply(
                    probe.witness.is_none(),
                    "vertex-refinement-equivalent graphs agree on every tree count",
                );
            }
            if let Some(fp) = v.walk_fingerprint_equal {
                imply(fp, "vertex-refinement-equivalent graphs agree on walk counts");
            }
        }
        if let Some(kwl) = &v.kwl {
            if kwl.k == 2 && !kwl.distinguished {
                if let Some(co) = v.cospectral {
                    imply(co, "2-tuple-equivalent graphs agree on cycle counts, hence on spectra");
                }
                if let Some(probe) = &v.tw2_probe {
                    imply(
                        probe.witness.is_none(),
                        "2-tuple-equivalent graphs agree on every treewidth-2 count",
                    );
                }
            }
        }
        if let Some(probe) = &v.tw2_probe {
            if probe.witness.is_some() {
                if let (Some(level), Some(nn)) = (v.liso_level, &v.liso_nonneg) {
                    if level == 3 {
                        imply(
                            !nn.feasible,
                            "a treewidth-2 pattern with differing counts rules out a nonnegative level-3 solution",
                        );
                    }
                }
            }
        }
        broken
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Compact one-line-per-verdict rendering for terminals.
    pub fn to_text(&self) -> String {
        let v = &self.verdicts;
        let mut out = String::new();
        out.push_str(&format!(
            "pair: {} ({} vertices, {} edges)  vs  {} ({} vertices, {} edges)\n",
            self.left.graph6, self.left.n, self.left.m, self.right.graph6, self.right.n, self.right.m
        ));
        let feas = |l: &LpVerdict| if l.feasible { "feasible" } else { "infeasible" };
        if let Some(b) = v.wl1_distinguished {
            out.push_str(&format!("vertex refinement:     {}\n", if b { "distinguished" } else { "equivalent" }));
        }
        if let Some(k) = &v.kwl {
            out.push_str(&format!(
                "{}-tuple refinement:    {}\n",
                k.k,
                if k.distinguished { "distinguished" } else { "equivalent" }
            ));
        }
        if let Some(l) = &v.fiso_real {
            out.push_str(&format!("flat system, real:     {}\n", feas(l)));
        }
        if let Some(l) = &v.fiso_nonneg {
            out.push_str(&format!("flat system, nonneg:   {}\n", feas(l)));
        }
        if let (Some(level), Some(l)) = (v.liso_level, &v.liso_real) {
            out.push_str(&format!("level-{level} system, real:   {}\n", feas(l)));
        }
        if let (Some(level), Some(l)) = (v.liso_level, &v.liso_nonneg) {
            out.push_str(&format!("level-{level} system, nonneg: {}\n", feas(l)));
        }
        if let Some(b) = v.cospectral {
            out.push_str(&format!("co-spectral:           {b}\n"));
        }
        if let Some(b) = v.walk_fingerprint_equal {
            out.push_str(&format!("walk fingerprints:     {}\n", if b { "equal" } else { "different" }));
        }
        if let Some(p) = &v.tree_probe {
            match &p.witness {
                Some(w) => out.push_str(&format!("tree probe (≤{}):      witness {w}\n", p.max_size)),
                None => out.push_str(&format!("tree probe (≤{}):      no witness\n", p.max_size)),
            }
        }
        if let Some(p) = &v.tw2_probe {
            match &p.witness {
                Some(w) => out.push_str(&format!("width-2 probe (≤{}):   witness {w}\n", p.max_size)),
                None => out.push_str(&format!("width-2 probe (≤{}):   no witness\n", p.max_size)),
            }
        }
        out
    }
}

/// Configuration shared by the verification suites. A fixed configuration
/// yields a byte-identical report.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    /// Largest vertex count drawn from the bundled corpus.
    pub max_n: usize,
    /// Pattern-size limit for the tree and width-2 probes, and for the
    /// pattern side of the oracle cross-checks.
    pub probe_size: usize,
    /// Refinement dimension for the lifted-system suite.
    pub k: usize,
    /// Variable budget handed to the lifted-system builders.
    pub budget_vars: u128,
    /// Worker threads; results are reduced in pair order regardless.
    pub jobs: usize,
    /// Seed for randomized inputs (only the benchmark draws any).
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            max_n: 6,
            probe_size: 7,
            k: 1,
            budget_vars: crate::linsys::VARIABLE_BUDGET,
            jobs: 1,
            seed: 0,
        }
    }
}

/// One failed check inside a suite: the offending pair (or
/// pattern/target combination) and what went wrong.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Violation {
    pub n: usize,
    pub m: usize,
    pub left_graph6: String,
    pub right_graph6: String,
    pub detail: String,
}

impl Violation {
    pub fn new(left: &Graph, right: &Graph, detail: String) -> Violation {
        Violation {
            n: left.n().max(right.n()),
            m: left.m().max(right.m()),
            left_graph6: write_graph6(left),
            right_graph6: write_graph6(right),
            detail,
        }
    }

    fn sort_key(&self) -> (usize, usize, &str, &str, &str) {
        (self.n, self.m, &self.left_graph6, &self.right_graph6, &self.detail)
    }
}

/// Outcome of one verification suite. `class_counts` says how the pairs
/// (or checks) fell into the suite's outcome classes; `checks` totals the
/// individual identities tested; `violations` is empty on success and
/// sorted so the first entry is a minimal counterexample (by vertices,
/// then edges).
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub config: SuiteConfig,
    pub pairs_total: usize,
    pub checks: u64,
    pub class_counts: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn new(
        suite: &str,
        config: &SuiteConfig,
        pairs_total: usize,
        checks: u64,
        class_counts: BTreeMap<String, u64>,
        mut violations: Vec<Violation>,
    ) -> SuiteReport {
        violations.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        SuiteReport {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            config: config.clone(),
            pairs_total,
            checks,
            class_counts,
            violations,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Minimal counterexample, if any (fewest vertices, then fewest edges).
    pub fn minimal_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {}: {} pairs, {} checks — {}\n",
            self.suite,
            self.pairs_total,
            self.checks,
            if self.passed() { "ok" } else { "VIOLATIONS" }
        );
        for (class, count) in &self.class_counts {
            out.push_str(&format!("  {class}: {count}\n"));
        }
        for v in &self.violations {
            out.push_str(&format!(
                "  violation: {} vs {} — {}\n",
                v.left_graph6, v.right_graph6, v.detail
            ));
        }
        out
    }
}

/// One row of the refinement benchmark. `ratio` relates this row to the
/// previous one when the vertex count exactly doubled.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}
