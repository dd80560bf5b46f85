//! Exact feasibility for the systems of [`crate::linsys`], plus the
//! approximate spectral construction of a doubly stochastic-like solution.
//!
//! [`solve_real`] decides feasibility over the reals by fraction-free
//! Gaussian elimination: rows stay integer, are divided by their content
//! (the gcd of all entries) after every combination step, and a row that
//! reduces to `0 = c` with `c ≠ 0` certifies a rank mismatch between the
//! coefficient matrix and the augmented matrix.
//!
//! [`solve_nonneg`] decides feasibility over the nonnegative orthant by an
//! exact rational phase-1 simplex with Bland's rule (which guarantees
//! termination). The elimination pass runs first, both to catch rank
//! infeasibility early and to hand the simplex a linearly independent row
//! subset — dropped rows are combinations of kept ones, so the solution
//! set is unchanged.
//!
//! Every feasible verdict carries a witness that has been substituted back
//! into the original system and checked exactly; a failure of that check
//! is a bug, not an input condition, and panics.
//!
//! Simplex arithmetic uses a small-rational fast path (`i128` numerators
//! and denominators, promoted to arbitrary precision on overflow) because
//! the equivalence suites solve thousands of lifted systems.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::graph::Graph;
use crate::linsys::{CertificateKind, Feasibility, RationalLinearSystem};
use crate::spectral::{eigen_float, walk_fingerprint};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Fraction-free elimination

#[derive(Clone, Debug)]
struct SparseRow {
    /// Sorted by column index; no zero coefficients.
    cols: Vec<(usize, BigInt)>,
    rhs: BigInt,
}

impl SparseRow {
    fn leading_column(&self) -> Option<usize> {
        self.cols.first().map(|&(c, _)| c)
    }

    /// Divides through by the content and makes the leading coefficient
    /// positive, keeping entries as small as exactness allows.
    fn normalize(&mut self) {
        let mut g = self.rhs.abs();
        for (_, c) in &self.cols {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for (_, c) in &mut self.cols {
                *c /= &g;
            }
            self.rhs /= &g;
        }
        let negate = match self.cols.first() {
            Some((_, lead)) => lead.is_negative(),
            None => self.rhs.is_negative(),
        };
        if negate {
            for (_, c) in &mut self.cols {
                *c = -std::mem::take(c);
            }
            self.rhs = -std::mem::take(&mut self.rhs);
        }
    }
}

/// `a·row − b·pivot` where `a`, `b` are the leading coefficients of the
/// pivot and the row (which share their leading column, so it cancels).
fn eliminate_leading(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    debug_assert_eq!(row.leading_column(), pivot.leading_column());
    let a = &pivot.cols[0].1;
    let b = &row.cols[0].1;
    let mut cols = Vec::with_capacity(row.cols.len() + pivot.cols.len());
    let (mut i, mut j) = (0, 0);
    while i < row.cols.len() || j < pivot.cols.len() {
        let next = match (row.cols.get(i), pivot.cols.get(j)) {
            (Some(&(rc, ref rv)), Some(&(pc, ref pv))) => match rc.cmp(&pc) {
                Ordering::Less => {
                    i += 1;
                    (rc, a * rv)
                }
                Ordering::Greater => {
                    j += 1;
                    (pc, -(b * pv))
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (rc, a * rv - b * pv)
                }
            },
            (Some(&(rc, ref rv)), None) => {
                i += 1;
                (rc, a * rv)
            }
            (None, Some(&(pc, ref pv))) => {
                j += 1;
                (pc, -(b * pv))
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            cols.push(next);
        }
    }
    let mut out = SparseRow { cols, rhs: a * &row.rhs - b * &pivot.rhs };
    out.normalize();
    out
}

struct Echelon {
    /// Pivot rows keyed by leading column.
    pivots: BTreeMap<usize, SparseRow>,
    /// Input indices of the rows that produced pivots; a maximal linearly
    /// independent subset of the system's rows.
    independent: Vec<usize>,
    /// Whether some row reduced to `0 = c` with `c ≠ 0`.
    contradiction: bool,
}

fn echelonize(sys: &RationalLinearSystem) -> Echelon {
    let mut ech =
        Echelon { pivots: BTreeMap::new(), independent: Vec::new(), contradiction: false };
    for (i, (coeffs, rhs)) in sys.rows().enumerate() {
        let mut row = SparseRow { cols: coeffs.to_vec(), rhs: rhs.clone() };
        row.normalize();
        loop {
            match row.leading_column() {
                None => {
                    if !row.rhs.is_zero() {
                        ech.contradiction = true;
                        return ech;
                    }
                    break;
                }
                Some(lead) => match ech.pivots.get(&lead) {
                    Some(pivot) => row = eliminate_leading(&row, pivot),
                    None => {
                        ech.pivots.insert(lead, row);
                        ech.independent.push(i);
                        break;
                    }
                },
            }
        }
    }
    ech
}

/// One particular solution of an echelonized consistent system: free
/// variables are zero and pivot variables are back-substituted in
/// descending column order (every non-leading entry of a pivot row sits in
/// a later column, whose value is already final).
fn particular_solution(n_vars: usize, pivots: &BTreeMap<usize, SparseRow>) -> Vec<BigRational> {
    let mut x = vec![BigRational::zero(); n_vars];
    for (&lead, row) in pivots.iter().rev() {
        let mut acc = BigRational::from(row.rhs.clone());
        for &(c, ref coeff) in &row.cols[1..] {
            if !x[c].is_zero() {
                acc -= BigRational::from(coeff.clone()) * &x[c];
            }
        }
        x[lead] = acc / BigRational::from(row.cols[0].1.clone());
    }
    x
}

fn witness_map(sys: &RationalLinearSystem, x: &[BigRational]) -> BTreeMap<String, BigRational> {
    x.iter().enumerate().map(|(i, v)| (sys.variable_name(i).to_string(), v.clone())).collect()
}

/// Decides whether the equations admit any real solution, by exact
/// fraction-free elimination. Feasible verdicts carry a particular
/// solution (free variables zero) that is re-checked against every
/// original row; infeasible verdicts certify a rank mismatch.
pub fn solve_real(sys: &RationalLinearSystem) -> Feasibility {
    let ech = echelonize(sys);
    if ech.contradiction {
        return Feasibility {
            feasible: false,
            witness: None,
            certificate: CertificateKind::RankMismatch,
        };
    }
    let x = particular_solution(sys.n_vars(), &ech.pivots);
    let witness = witness_map(sys, &x);
    assert!(sys.check_solution(&witness), "real solver produced an invalid witness");
    Feasibility { feasible: true, witness: Some(witness), certificate: CertificateKind::Solution }
}

/// Decides whether the equations admit a nonnegative real solution, by
/// elimination (rank check and row-subset selection) followed by an exact
/// phase-1 simplex with Bland's rule. Feasible verdicts carry a
/// nonnegative witness re-checked against every original row.
pub fn solve_nonneg(sys: &RationalLinearSystem) -> Feasibility {
    let ech = echelonize(sys);
    if ech.contradiction {
        return Feasibility {
            feasible: false,
            witness: None,
            certificate: CertificateKind::RankMismatch,
        };
    }
    match phase_one(sys, &ech.independent) {
        Some(x) => {
            let witness = witness_map(sys, &x);
            assert!(
                x.iter().all(|v| !v.is_negative()),
                "phase-1 produced a negative witness entry"
            );
            assert!(sys.check_solution(&witness), "phase-1 produced an invalid witness");
            Feasibility {
                feasible: true,
                witness: Some(witness),
                certificate: CertificateKind::Solution,
            }
        }
        None => Feasibility {
            feasible: false,
            witness: None,
            certificate: CertificateKind::PositivePhaseOneOptimum,
        },
    }
}

// ---------------------------------------------------------------------------
// Small-rational arithmetic with overflow promotion

type SmallRatio = Ratio<i128>;

/// An exact rational that stays in `i128` arithmetic while it fits and
/// promotes to arbitrary precision on overflow. Simplex tableaus are
/// dominated by small values; the fast path keeps the equivalence suites
/// inside their time budgets without compromising exactness.
#[derive(Clone, Debug)]
enum Q {
    S(SmallRatio),
    B(BigRational),
}

impl Q {
    fn zero() -> Q {
        Q::S(SmallRatio::zero())
    }

    fn one() -> Q {
        Q::S(SmallRatio::one())
    }

    fn from_bigint(v: &BigInt) -> Q {
        match i128::try_from(v) {
            Ok(s) => Q::S(SmallRatio::from_integer(s)),
            Err(_) => Q::B(BigRational::from(v.clone())),
        }
    }

    fn to_bigrational(&self) -> BigRational {
        match self {
            Q::S(r) => BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Q::B(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Q::S(r) => r.is_zero(),
            Q::B(r) => r.is_zero(),
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Q::S(r) => r.numer().is_negative(),
            Q::B(r) => r.numer().is_negative(),
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Q::S(r) => r.numer().is_positive(),
            Q::B(r) => r.numer().is_positive(),
        }
    }

    fn sub(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::S(a), Q::S(b)) => match a.checked_sub(b) {
                Some(r) => Q::S(r),
                None => Q::B(self.to_bigrational() - other.to_bigrational()),
            },
            _ => Q::B(self.to_bigrational() - other.to_bigrational()),
        }
    }

    fn mul(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::S(a), Q::S(b)) => match a.checked_mul(b) {
                Some(r) => Q::S(r),
                None => Q::B(self.to_bigrational() * other.to_bigrational()),
            },
            _ => Q::B(self.to_bigrational() * other.to_bigrational()),
        }
    }

    fn div(&self, other: &Q) -> Q {
        assert!(!other.is_zero(), "division by zero");
        match (self, other) {
            (Q::S(a), Q::S(b)) => match a.checked_div(b) {
                Some(r) => Q::S(r),
                None => Q::B(self.to_bigrational() / other.to_bigrational()),
            },
            _ => Q::B(self.to_bigrational() / other.to_bigrational()),
        }
    }

    fn cmp(&self, other: &Q) -> Ordering {
        match (self, other) {
            // Ratio's ordering avoids intermediate overflow.
            (Q::S(a), Q::S(b)) => a.cmp(b),
            _ => self.to_bigrational().cmp(&other.to_bigrational()),
        }
    }
}

// ---------------------------------------------------------------------------
// Phase-1 simplex

/// Minimizes the sum of artificial variables over `Ax + a = b, x ≥ 0,
/// a ≥ 0` (rows pre-scaled so `b ≥ 0`) with Bland's smallest-index rule.
/// Returns a nonnegative solution of the selected rows when the auxiliary
/// optimum is zero, `None` when it is positive.
fn phase_one(sys: &RationalLinearSystem, row_ids: &[usize]) -> Option<Vec<BigRational>> {
    let n = sys.n_vars();
    let m = row_ids.len();
    let width = n + m + 1; // structural + artificial columns, rhs last

    let mut tableau: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (ai, &ri) in row_ids.iter().enumerate() {
        let (coeffs, rhs) = sys.row(ri);
        let flip = rhs.is_negative();
        let mut row = vec![Q::zero(); width];
        for &(c, ref v) in coeffs {
            let v = if flip { -v.clone() } else { v.clone() };
            row[c] = Q::from_bigint(&v);
        }
        row[n + ai] = Q::one();
        row[width - 1] = Q::from_bigint(&rhs.abs());
        tableau.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced-cost row for the artificial basis: cost 0 on structural
    // columns and 1 on artificials gives reduced costs −Σ_i t[i][j] and 0
    // respectively; the stored rhs is the negated objective value.
    let mut obj = vec![Q::zero(); width];
    for row in &tableau {
        for j in (0..n).chain([width - 1]) {
            if !row[j].is_zero() {
                let updated = obj[j].sub(&row[j]);
                obj[j] = updated;
            }
        }
    }

    loop {
        // Bland: entering column = smallest index with negative reduced cost.
        let Some(entering) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test over rows with a positive entry in the entering
        // column; ties broken by smallest basis variable (Bland again).
        let mut leaving: Option<usize> = None;
        for i in 0..m {
            if !tableau[i][entering].is_positive() {
                continue;
            }
            leaving = match leaving {
                None => Some(i),
                Some(b) => {
                    let lhs = tableau[i][width - 1].mul(&tableau[b][entering]);
                    let rhs = tableau[b][width - 1].mul(&tableau[i][entering]);
                    match lhs.cmp(&rhs) {
                        Ordering::Less => Some(i),
                        Ordering::Equal if basis[i] < basis[b] => Some(i),
                        _ => Some(b),
                    }
                }
            };
        }
        // The auxiliary objective is bounded below by zero, so a column
        // with no positive entry cannot occur.
        let pivot_row = leaving.expect("phase-1 objective is bounded below");

        // Pivot: scale the pivot row, then clear the column everywhere else.
        let pivot = tableau[pivot_row][entering].clone();
        for cell in &mut tableau[pivot_row] {
            if !cell.is_zero() {
                *cell = cell.div(&pivot);
            }
        }
        let pivot_cells = tableau[pivot_row].clone();
        for i in 0..m {
            if i == pivot_row || tableau[i][entering].is_zero() {
                continue;
            }
            let factor = tableau[i][entering].clone();
            let row = &mut tableau[i];
            for (cell, p) in row.iter_mut().zip(&pivot_cells) {
                if !p.is_zero() {
                    *cell = cell.sub(&factor.mul(p));
                }
            }
        }
        if !obj[entering].is_zero() {
            let factor = obj[entering].clone();
            for (cell, p) in obj.iter_mut().zip(&pivot_cells) {
                if !p.is_zero() {
                    *cell = cell.sub(&factor.mul(p));
                }
            }
        }
        basis[pivot_row] = entering;
    }

    // Optimum = −obj rhs; zero means all artificials were driven to zero.
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tableau[i][width - 1].to_bigrational();
        }
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Approximate spectral construction

/// The floating-point doubly stochastic-like matrix assembled from the
/// eigendecompositions of two walk-equivalent graphs, with its residuals.
/// Deliberately approximate (eigenvectors are irrational); exact verdicts
/// always come from [`solve_real`] / [`solve_nonneg`].
#[derive(Clone, Debug)]
pub struct SpectralSolution {
    /// Row-major `n_G × n_H` matrix.
    pub x: Vec<Vec<f64>>,
    /// The shared useful eigenvalues the construction paired up,
    /// in descending order.
    pub matched_eigenvalues: Vec<f64>,
    /// `max |(AX − XB)_{ij}|`.
    pub residual_commute: f64,
    /// `‖X·1 − 1‖_∞`.
    pub residual_row_sums: f64,
    /// `‖Xᵀ·1 − 1‖_∞`.
    pub residual_col_sums: f64,
}

/// Eigenvalues whose gap is below this are treated as one eigenspace.
const EIGEN_GROUP_TOL: f64 = 1e-7;
/// An eigenvalue is useful when the squared norm of the projection of the
/// all-ones vector onto its eigenspace exceeds this.
const USEFUL_NORM_TOL: f64 = 1e-8;
/// Tolerance for pairing useful eigenvalues across the two graphs.
const EIGEN_MATCH_TOL: f64 = 1e-6;

/// The useful eigenvalues of the adjacency matrix together with the
/// projections of the all-ones vector onto their eigenspaces.
fn useful_projections(g: &Graph) -> Result<Vec<(f64, Vec<f64>)>> {
    let eig = eigen_float(g)?;
    let n = g.n();
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for (value, vector) in eig.values.iter().zip(&eig.vectors) {
        let component: f64 = vector.iter().sum(); // ⟨q, 1⟩ for unit q
        match groups.last_mut() {
            Some((rep, u)) if (*rep - value).abs() <= EIGEN_GROUP_TOL => {
                for (ui, qi) in u.iter_mut().zip(vector) {
                    *ui += component * qi;
                }
            }
            _ => {
                let mut u = vec![0.0; n];
                for (ui, qi) in u.iter_mut().zip(vector) {
                    *ui = component * qi;
                }
                groups.push((*value, u));
            }
        }
    }
    groups.retain(|(_, u)| u.iter().map(|c| c * c).sum::<f64>() > USEFUL_NORM_TOL);
    Ok(groups)
}

/// Builds the approximate solution `X = Σ_i (1/‖u_i‖²)·u_i·v_iᵀ`, where
/// `u_i`, `v_i` are the projections of the all-ones vectors onto the
/// eigenspaces of the paired useful eigenvalues of the two graphs, and
/// reports exact-constraint residuals. Requires equal walk fingerprints —
/// the exact surrogate for "same useful eigenvalues with equal projection
/// norms" — and refuses otherwise.
pub fn spectral_fiso_solution(g: &Graph, h: &Graph) -> Result<SpectralSolution> {
    if walk_fingerprint(g) != walk_fingerprint(h) {
        return Err(Error::Precondition(
            "walk fingerprints differ; no doubly stochastic commuting matrix exists".to_string(),
        ));
    }
    let gu = useful_projections(g)?;
    let hv = useful_projections(h)?;
    if gu.len() != hv.len() {
        return Err(Error::Precondition(format!(
            "useful eigenvalue counts differ numerically ({} vs {})",
            gu.len(),
            hv.len()
        )));
    }
    let n_g = g.n();
    let n_h = h.n();
    let mut x = vec![vec![0.0; n_h]; n_g];
    let mut matched = Vec::with_capacity(gu.len());
    for ((lambda, u), (mu, v)) in gu.iter().zip(&hv) {
        if (lambda - mu).abs() > EIGEN_MATCH_TOL {
            return Err(Error::Precondition(format!(
                "useful eigenvalues failed to pair numerically ({lambda} vs {mu})"
            )));
        }
        matched.push(*lambda);
        let norm2: f64 = u.iter().map(|c| c * c).sum();
        for (row, ui) in x.iter_mut().zip(u) {
            for (cell, vj) in row.iter_mut().zip(v) {
                *cell += ui * vj / norm2;
            }
        }
    }

    // Residuals of the exact constraints, evaluated in floating point.
    let mut residual_commute: f64 = 0.0;
    for v in 0..n_g as u32 {
        for w in 0..n_h as u32 {
            let ax: f64 = g.adj(v).iter().map(|&v2| x[v2 as usize][w as usize]).sum();
            let xb: f64 = h.adj(w).iter().map(|&w2| x[v as usize][w2 as usize]).sum();
            residual_commute = residual_commute.max((ax - xb).abs());
        }
    }
    let residual_row_sums = x
        .iter()
        .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let residual_col_sums = (0..n_h)
        .map(|w| (x.iter().map(|row| row[w]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);

    Ok(SpectralSolution {
        x,
        matched_eigenvalues: matched,
        residual_commute,
        residual_row_sums,
        residual_col_sums,
    })
}
