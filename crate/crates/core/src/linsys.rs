//! Exact linear systems whose feasibility characterizes graph equivalences.
//!
//! Three systems are built here, all over exact rational arithmetic:
//!
//! * [`build_fiso`] — the fractional-isomorphism system: one variable per
//!   vertex pair `(v, w)`, the commutation equations `AX = XB`, and
//!   row/column sums fixed to 1. Nonnegative feasibility is equivalent to
//!   color refinement not separating the two graphs; real feasibility is
//!   equivalent to equal walk counts at every length.
//! * [`build_liso`] — the level-`k` lift: one variable per partial
//!   isomorphism `π` between the graphs with `|π| ≤ k`, marginalization
//!   equations tying each level to the one below, and `X_∅ = 1`. Variables
//!   for pair sets that are not partial isomorphisms are fixed to zero at
//!   build time instead of being emitted as rows, which shrinks the system
//!   without changing its solution set.
//! * [`build_fiso_khalf`] — the half-level variant sitting between
//!   consecutive lifts: variables for *all* pair sets `|π| ≤ k` (not just
//!   partial isomorphisms), marginalization equations, and a relativized
//!   commutation equation per `(π, v, w)`.
//!
//! Feasibility itself is decided in [`crate::solve`]; this module owns the
//! system representation, the builders, an exact substitution check, and a
//! plain-text LP export for external cross-checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::Graph;
use crate::{Error, Result};

/// Default ceiling on the variable count of the lifted systems, measured
/// before partial-isomorphism elimination (`Σ_{i ≤ k} C(n_G·n_H, i)`).
pub const VARIABLE_BUDGET: u128 = 5_000_000;

/// A set of vertex pairs `π ⊆ V(G) × V(H)`, kept sorted and duplicate-free.
///
/// These index the variables of the lifted systems. The two predicates that
/// matter are [`is_partial_bijection`](PartialMap::is_partial_bijection)
/// (no vertex on either side is used twice) and
/// [`is_partial_isomorphism`](PartialMap::is_partial_isomorphism)
/// (additionally, paired vertices agree on adjacency).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialMap {
    pairs: Vec<(u32, u32)>,
}

impl PartialMap {
    /// The empty pair set.
    pub fn empty() -> Self {
        PartialMap { pairs: Vec::new() }
    }

    /// Builds a pair set, sorting and removing duplicates.
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        PartialMap { pairs }
    }

    /// The pairs in sorted order.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The set `π ∪ {(v, w)}` (equal to `π` if the pair is already present).
    pub fn extended(&self, v: u32, w: u32) -> PartialMap {
        let mut pairs = self.pairs.clone();
        match pairs.binary_search(&(v, w)) {
            Ok(_) => {}
            Err(pos) => pairs.insert(pos, (v, w)),
        }
        PartialMap { pairs }
    }

    /// Whether some pair `(v, ·)` is present.
    pub fn contains_left(&self, v: u32) -> bool {
        self.pairs.iter().any(|&(a, _)| a == v)
    }

    /// Whether some pair `(·, w)` is present.
    pub fn contains_right(&self, w: u32) -> bool {
        self.pairs.iter().any(|&(_, b)| b == w)
    }

    /// Whether no vertex on either side appears in two pairs.
    pub fn is_partial_bijection(&self) -> bool {
        for (i, &(v, w)) in self.pairs.iter().enumerate() {
            for &(v2, w2) in &self.pairs[i + 1..] {
                if v == v2 || w == w2 {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the set is a partial isomorphism from `g` to `h`: a partial
    /// bijection whose paired vertices agree on adjacency
    /// (`v_i v_j ∈ E(G) ⟺ w_i w_j ∈ E(H)` for all pairs in the set).
    pub fn is_partial_isomorphism(&self, g: &Graph, h: &Graph) -> bool {
        if !self.is_partial_bijection() {
            return false;
        }
        for (i, &(v, w)) in self.pairs.iter().enumerate() {
            for &(v2, w2) in &self.pairs[i + 1..] {
                if g.has_edge(v, v2) != h.has_edge(w, w2) {
                    return false;
                }
            }
        }
        true
    }

    /// The variable name for this pair set: `x_e` for the empty set, else
    /// `x_<v>_<w>` tokens joined by `__`, e.g. `x_0_2__1_0` for
    /// `{(0,2), (1,0)}`. The encoding is injective on sorted pair sets.
    pub fn var_name(&self) -> String {
        if self.pairs.is_empty() {
            return "x_e".to_string();
        }
        let mut name = String::from("x");
        for (i, &(v, w)) in self.pairs.iter().enumerate() {
            if i > 0 {
                name.push('_');
            }
            let _ = write!(name, "_{v}_{w}");
        }
        name
    }
}

/// A sparse system of exact linear equations over named variables.
///
/// Every constraint is an equality `Σ cᵢ·xᵢ = rhs` with integer
/// coefficients (the builders only produce small ones, but any `BigInt`
/// is accepted). Nonnegativity is not part of the system; it is a property
/// the solvers impose ([`crate::solve::solve_nonneg`]) or ignore
/// ([`crate::solve::solve_real`]).
#[derive(Clone, Debug)]
pub struct RationalLinearSystem {
    var_names: Vec<String>,
    index: HashMap<String, usize>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
struct Row {
    /// Sorted by variable index; no zero coefficients.
    coeffs: Vec<(usize, BigInt)>,
    rhs: BigInt,
}

impl RationalLinearSystem {
    /// An empty system with no variables and no rows.
    pub fn new() -> Self {
        RationalLinearSystem { var_names: Vec::new(), index: HashMap::new(), rows: Vec::new() }
    }

    /// Registers a new variable and returns its index.
    ///
    /// # Panics
    /// If the name is already taken; variable names must be unique.
    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        let idx = self.var_names.len();
        let previous = self.index.insert(name.clone(), idx);
        assert!(previous.is_none(), "duplicate variable name {name:?}");
        self.var_names.push(name);
        idx
    }

    /// Number of variables.
    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    /// Number of constraint rows.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// The index of a variable by name, if present.
    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The name of a variable by index.
    pub fn variable_name(&self, idx: usize) -> &str {
        &self.var_names[idx]
    }

    /// Adds the equality `Σ cᵢ·xᵢ = rhs`. Duplicate variable entries are
    /// combined and zero coefficients dropped; a row whose left side cancels
    /// entirely is kept (it is either trivial or witnesses inconsistency).
    pub fn add_row(&mut self, coeffs: Vec<(usize, BigInt)>, rhs: BigInt) {
        let mut coeffs = coeffs;
        coeffs.sort_unstable_by_key(|&(idx, _)| idx);
        let mut combined: Vec<(usize, BigInt)> = Vec::with_capacity(coeffs.len());
        for (idx, c) in coeffs {
            assert!(idx < self.var_names.len(), "row references unknown variable {idx}");
            match combined.last_mut() {
                Some((last, acc)) if *last == idx => *acc += c,
                _ => combined.push((idx, c)),
            }
        }
        combined.retain(|(_, c)| !c.is_zero());
        self.rows.push(Row { coeffs: combined, rhs });
    }

    /// The `i`-th row as (sorted sparse coefficients, right-hand side).
    pub fn row(&self, i: usize) -> (&[(usize, BigInt)], &BigInt) {
        let row = &self.rows[i];
        (&row.coeffs, &row.rhs)
    }

    /// Iterates over all rows in insertion order.
    pub fn rows(&self) -> impl Iterator<Item = (&[(usize, BigInt)], &BigInt)> {
        self.rows.iter().map(|row| (row.coeffs.as_slice(), &row.rhs))
    }

    /// Checks an assignment against every row with exact arithmetic.
    /// Variables missing from the map are taken to be zero, so an
    /// assignment produced for a system with fewer variables (e.g. a
    /// lifted witness with non-isomorphism supports eliminated) can be
    /// substituted directly.
    pub fn check_solution(&self, assignment: &BTreeMap<String, BigRational>) -> bool {
        let zero = BigRational::zero();
        self.rows.iter().all(|row| {
            let mut sum = BigRational::zero();
            for &(idx, ref c) in &row.coeffs {
                let value = assignment.get(&self.var_names[idx]).unwrap_or(&zero);
                sum += BigRational::from(c.clone()) * value;
            }
            sum == BigRational::from(row.rhs.clone())
        })
    }

    /// Renders the system in plain LP text format: a zero objective, one
    /// named equality per row, and either default nonnegative bounds
    /// (`nonneg = true`) or explicit free bounds for every variable.
    pub fn to_lp_text(&self, nonneg: bool) -> String {
        let mut out = String::new();
        out.push_str("Minimize\n obj: 0\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " r{i}:");
            if row.coeffs.is_empty() {
                // LP rows need at least one term; encode `0 = rhs` explicitly.
                let name = self.var_names.first().map(String::as_str).unwrap_or("x_e");
                let _ = write!(out, " 0 {name}");
            }
            for (j, &(idx, ref c)) in row.coeffs.iter().enumerate() {
                let name = &self.var_names[idx];
                let sign = if c.is_negative() { "-" } else { "+" };
                let mag = c.abs();
                if j == 0 && sign == "+" {
                    let _ = write!(out, " ");
                } else {
                    let _ = write!(out, " {sign} ");
                }
                if mag.is_one() {
                    let _ = write!(out, "{name}");
                } else {
                    let _ = write!(out, "{mag} {name}");
                }
            }
            let _ = writeln!(out, " = {}", row.rhs);
        }
        if !nonneg {
            out.push_str("Bounds\n");
            for name in &self.var_names {
                let _ = writeln!(out, " {name} free");
            }
        }
        out.push_str("End\n");
        out
    }
}

impl Default for RationalLinearSystem {
    fn default() -> Self {
        Self::new()
    }
}

/// Why a feasibility verdict holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// Feasible: an explicit solution was found and re-verified exactly.
    Solution,
    /// Infeasible: elimination produced the contradiction `0 = c`, `c ≠ 0`
    /// (the augmented matrix has higher rank than the coefficient matrix).
    RankMismatch,
    /// Infeasible under nonnegativity: the phase-1 auxiliary optimum is
    /// positive, so no nonnegative point satisfies the equations.
    PositivePhaseOneOptimum,
}

/// Outcome of a feasibility question, with an exact witness when feasible.
#[derive(Clone, Debug)]
pub struct Feasibility {
    /// Whether the system admits a solution (in the queried sense).
    pub feasible: bool,
    /// A full assignment, present exactly when feasible. Substituting it
    /// into the originating system satisfies every row with zero residual;
    /// the solvers verify this before returning.
    pub witness: Option<BTreeMap<String, BigRational>>,
    /// What kind of evidence backs the verdict.
    pub certificate: CertificateKind,
}

impl Feasibility {
    /// The witness as JSON `{"var": "p/q", ...}` with reduced fractions,
    /// or `None` when infeasible.
    pub fn witness_json(&self) -> Option<String> {
        let witness = self.witness.as_ref()?;
        let map: BTreeMap<&str, String> = witness
            .iter()
            .map(|(name, q)| (name.as_str(), format!("{}/{}", q.numer(), q.denom())))
            .collect();
        Some(serde_json::to_string(&map).expect("string map serializes"))
    }
}

/// The fractional-isomorphism system for `(g, h)`: variables `x_<v>_<w>`
/// form a matrix `X` constrained by `AX = XB` (one equation per pair,
/// where `A`, `B` are the adjacency matrices) and by all row and column
/// sums being 1. Permutation-matrix solutions correspond exactly to
/// isomorphisms; the relaxations of interest are real and nonnegative
/// solutions.
pub fn build_fiso(g: &Graph, h: &Graph) -> RationalLinearSystem {
    let mut sys = RationalLinearSystem::new();
    let var = |v: u32, w: u32| PartialMap::new(vec![(v, w)]).var_name();
    for v in 0..g.n() as u32 {
        for w in 0..h.n() as u32 {
            sys.add_variable(var(v, w));
        }
    }
    let idx = |v: u32, w: u32| (v as usize) * h.n() + w as usize;

    // Commutation: (AX)_{vw} = (XB)_{vw}, i.e.
    // Σ_{v' ∈ N_G(v)} x_{v'w} − Σ_{w' ∈ N_H(w)} x_{vw'} = 0.
    for v in 0..g.n() as u32 {
        for w in 0..h.n() as u32 {
            let mut coeffs = Vec::new();
            for &v2 in g.adj(v) {
                coeffs.push((idx(v2, w), BigInt::one()));
            }
            for &w2 in h.adj(w) {
                coeffs.push((idx(v, w2), -BigInt::one()));
            }
            sys.add_row(coeffs, BigInt::zero());
        }
    }
    // Row sums: Σ_w x_{vw} = 1 for each v.
    for v in 0..g.n() as u32 {
        let coeffs = (0..h.n() as u32).map(|w| (idx(v, w), BigInt::one())).collect();
        sys.add_row(coeffs, BigInt::one());
    }
    // Column sums: Σ_v x_{vw} = 1 for each w.
    for w in 0..h.n() as u32 {
        let coeffs = (0..g.n() as u32).map(|v| (idx(v, w), BigInt::one())).collect();
        sys.add_row(coeffs, BigInt::one());
    }
    sys
}

/// `Σ_{i ≤ k} C(nm, i)`, saturating at `u128::MAX`.
fn subset_capacity(nm: usize, k: usize) -> u128 {
    let nm = nm as u128;
    let mut total: u128 = 1;
    let mut binom: u128 = 1;
    for i in 1..=(k as u128).min(nm) {
        // C(nm, i) = C(nm, i−1) · (nm − i + 1) / i, with exact division.
        binom = match binom.checked_mul(nm - i + 1) {
            Some(b) => b / i,
            None => return u128::MAX,
        };
        total = match total.checked_add(binom) {
            Some(t) => t,
            None => return u128::MAX,
        };
    }
    total
}

fn check_capacity(nm: usize, k: usize, budget: u128, what: &str) -> Result<()> {
    let needed = subset_capacity(nm, k);
    if needed > budget {
        return Err(Error::Capacity { what: what.to_string(), needed, budget });
    }
    Ok(())
}

/// Enumerates every partial isomorphism from `g` to `h` with at most `k`
/// pairs, in deterministic order (by size, then lexicographically).
/// The empty map is first and the singletons follow in row-major order.
pub fn liso_variables(g: &Graph, h: &Graph, k: usize) -> Vec<PartialMap> {
    let mut out = vec![PartialMap::empty()];
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut used_w = vec![false; h.n()];
    fn extend(
        g: &Graph,
        h: &Graph,
        k: usize,
        start_v: u32,
        pairs: &mut Vec<(u32, u32)>,
        used_w: &mut Vec<bool>,
        out: &mut Vec<PartialMap>,
    ) {
        if pairs.len() == k {
            return;
        }
        for v in start_v..g.n() as u32 {
            for w in 0..h.n() as u32 {
                if used_w[w as usize] {
                    continue;
                }
                // Adjacency between (v, w) and every pair already chosen
                // must agree; vertices are distinct by construction.
                if pairs.iter().any(|&(v2, w2)| g.has_edge(v, v2) != h.has_edge(w, w2)) {
                    continue;
                }
                pairs.push((v, w));
                used_w[w as usize] = true;
                out.push(PartialMap::new(pairs.clone()));
                extend(g, h, k, v + 1, pairs, used_w, out);
                pairs.pop();
                used_w[w as usize] = false;
            }
        }
    }
    extend(g, h, k, 0, &mut pairs, &mut used_w, &mut out);
    out.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.pairs.cmp(&b.pairs)));
    out
}

/// The level-`k` lifted system with the default variable budget.
/// See [`build_liso_with_budget`].
pub fn build_liso(g: &Graph, h: &Graph, k: usize) -> Result<RationalLinearSystem> {
    build_liso_with_budget(g, h, k, VARIABLE_BUDGET)
}

/// The level-`k` lifted system for `(g, h)`, `k ≥ 1`: variables `X_π` over
/// partial isomorphisms `|π| ≤ k`, and for every variable `π` with
/// `|π| ≤ k−1`:
///
/// * for each `w` outside the range of `π`:
///   `Σ_v X_{π ∪ {(v,w)}} = X_π` (sum over extensions that remain partial
///   isomorphisms; the remaining terms are pinned to zero and omitted), and
/// * symmetrically for each `v` outside the domain of `π`,
///
/// together with `X_∅ = 1`. Rows for `w` in the range (or `v` in the
/// domain) of `π` reduce to `X_π = X_π` and are skipped. A row whose sum
/// has no surviving term still appears (it forces `X_π = 0`).
///
/// The budget bounds `Σ_{i ≤ k} C(n_G·n_H, i)`, the variable count before
/// non-isomorphism elimination.
pub fn build_liso_with_budget(
    g: &Graph,
    h: &Graph,
    k: usize,
    budget: u128,
) -> Result<RationalLinearSystem> {
    if k == 0 {
        return Err(Error::Input("lifted system level must be at least 1".to_string()));
    }
    check_capacity(g.n() * h.n(), k, budget, "lifted system variables")?;

    let vars = liso_variables(g, h, k);
    let mut sys = RationalLinearSystem::new();
    let mut index: HashMap<PartialMap, usize> = HashMap::with_capacity(vars.len());
    for pm in &vars {
        let idx = sys.add_variable(pm.var_name());
        index.insert(pm.clone(), idx);
    }

    for pm in &vars {
        if pm.len() + 1 > k {
            continue;
        }
        let pi = index[pm];
        // Marginalize over the left side: Σ_v X_{π∪{(v,w)}} = X_π.
        for w in 0..h.n() as u32 {
            if pm.contains_right(w) {
                continue;
            }
            let mut coeffs = Vec::new();
            for v in 0..g.n() as u32 {
                if let Some(&j) = index.get(&pm.extended(v, w)) {
                    coeffs.push((j, BigInt::one()));
                }
            }
            coeffs.push((pi, -BigInt::one()));
            sys.add_row(coeffs, BigInt::zero());
        }
        // Marginalize over the right side: Σ_w X_{π∪{(v,w)}} = X_π.
        for v in 0..g.n() as u32 {
            if pm.contains_left(v) {
                continue;
            }
            let mut coeffs = Vec::new();
            for w in 0..h.n() as u32 {
                if let Some(&j) = index.get(&pm.extended(v, w)) {
                    coeffs.push((j, BigInt::one()));
                }
            }
            coeffs.push((pi, -BigInt::one()));
            sys.add_row(coeffs, BigInt::zero());
        }
    }
    // Normalization: X_∅ = 1.
    let empty = index[&PartialMap::empty()];
    sys.add_row(vec![(empty, BigInt::one())], BigInt::one());
    Ok(sys)
}

/// The half-level system with the default variable budget.
/// See [`build_fiso_khalf_with_budget`].
pub fn build_fiso_khalf(g: &Graph, h: &Graph, k: usize) -> Result<RationalLinearSystem> {
    build_fiso_khalf_with_budget(g, h, k, VARIABLE_BUDGET)
}

/// The half-level system between lift levels `k` and `k+1`, `k ≥ 1`:
/// variables `X_π` for **all** pair sets `π ⊆ V×W` with `|π| ≤ k` (no
/// partial-isomorphism elimination here), and for every `π` with
/// `|π| ≤ k−1`:
///
/// * `Σ_{v ∈ V} X_{π ∪ {(v,w)}} = X_π` for every `w` (terms with
///   `(v, w) ∈ π` collapse onto `X_π` and are combined),
/// * `Σ_{w ∈ W} X_{π ∪ {(v,w)}} = X_π` for every `v`, and
/// * the relativized commutation equation for every `(v, w)`:
///   `Σ_{v' ∈ N_G(v)} X_{π ∪ {(v',w)}} = Σ_{w' ∈ N_H(w)} X_{π ∪ {(v,w')}}`,
///
/// together with `X_∅ = 1`. At `k = 1` the system coincides with
/// [`build_fiso`] up to the extra `X_∅` bookkeeping variable.
pub fn build_fiso_khalf_with_budget(
    g: &Graph,
    h: &Graph,
    k: usize,
    budget: u128,
) -> Result<RationalLinearSystem> {
    if k == 0 {
        return Err(Error::Input("half-level system level must be at least 1".to_string()));
    }
    check_capacity(g.n() * h.n(), k, budget, "half-level system variables")?;

    // All pair sets of size ≤ k, ordered by size then lexicographically.
    let all_pairs: Vec<(u32, u32)> = (0..g.n() as u32)
        .flat_map(|v| (0..h.n() as u32).map(move |w| (v, w)))
        .collect();
    let mut vars = vec![PartialMap::empty()];
    let mut chosen: Vec<(u32, u32)> = Vec::new();
    fn subsets(
        all: &[(u32, u32)],
        k: usize,
        start: usize,
        chosen: &mut Vec<(u32, u32)>,
        out: &mut Vec<PartialMap>,
    ) {
        if chosen.len() == k {
            return;
        }
        for i in start..all.len() {
            chosen.push(all[i]);
            out.push(PartialMap::new(chosen.clone()));
            subsets(all, k, i + 1, chosen, out);
            chosen.pop();
        }
    }
    subsets(&all_pairs, k, 0, &mut chosen, &mut vars);
    vars.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.pairs.cmp(&b.pairs)));

    let mut sys = RationalLinearSystem::new();
    let mut index: HashMap<PartialMap, usize> = HashMap::with_capacity(vars.len());
    for pm in &vars {
        let idx = sys.add_variable(pm.var_name());
        index.insert(pm.clone(), idx);
    }

    for pm in &vars {
        if pm.len() + 1 > k {
            continue;
        }
        let pi = index[pm];
        // Left marginalization, over all v including those already mapped.
        for w in 0..h.n() as u32 {
            let mut coeffs = Vec::new();
            for v in 0..g.n() as u32 {
                coeffs.push((index[&pm.extended(v, w)], BigInt::one()));
            }
            coeffs.push((pi, -BigInt::one()));
            sys.add_row(coeffs, BigInt::zero());
        }
        // Right marginalization.
        for v in 0..g.n() as u32 {
            let mut coeffs = Vec::new();
            for w in 0..h.n() as u32 {
                coeffs.push((index[&pm.extended(v, w)], BigInt::one()));
            }
            coeffs.push((pi, -BigInt::one()));
            sys.add_row(coeffs, BigInt::zero());
        }
        // Relativized commutation:
        // Σ_{v' ∈ N(v)} X_{π∪{(v',w)}} − Σ_{w' ∈ N(w)} X_{π∪{(v,w')}} = 0.
        for v in 0..g.n() as u32 {
            for w in 0..h.n() as u32 {
                let mut coeffs = Vec::new();
                for &v2 in g.adj(v) {
                    coeffs.push((index[&pm.extended(v2, w)], BigInt::one()));
                }
                for &w2 in h.adj(w) {
                    coeffs.push((index[&pm.extended(v, w2)], -BigInt::one()));
                }
                sys.add_row(coeffs, BigInt::zero());
            }
        }
    }
    let empty = index[&PartialMap::empty()];
    sys.add_row(vec![(empty, BigInt::one())], BigInt::one());
    Ok(sys)
}
