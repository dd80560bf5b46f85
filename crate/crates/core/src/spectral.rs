//! Exact spectral fingerprints.
//!
//! Characteristic polynomials are computed division-free over big integers,
//! so co-spectrality is an exact verdict. The walk fingerprint encodes the
//! useful-eigenvalue data of a graph exactly — as the minimal linear
//! recurrence of the walk-count sequence plus its initial terms — without
//! ever materializing irrational eigenvalues. Floating-point
//! eigendecompositions are provided only as support for the approximate
//! doubly-stochastic construction in the linear-system module and are never
//! used for verdicts.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::{write_graph6, AdjacencyMatrix, Graph};
use crate::homcount::walk_count;
use crate::{Error, Result};

/// Monic integer characteristic polynomial det(xI − A), coefficients in
/// descending degree order (length n + 1, leading coefficient 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly(Vec<BigInt>);

impl CharPoly {
    /// Coefficients in descending degree order.
    pub fn coeffs_desc(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

impl std::fmt::Display for CharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() && n > 0 {
                continue;
            }
            let d = n - i;
            if first {
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let show_coeff = d == 0 || !abs.is_one();
            if first && c.is_negative() {
                write!(f, "-")?;
            }
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match d {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial of the adjacency matrix, by the division-free
/// Samuelson–Berkowitz recurrence on leading principal submatrices.
pub fn char_poly(g: &Graph) -> CharPoly {
    let a = AdjacencyMatrix::from_graph(g);
    let n = g.n();
    let mut c = vec![BigInt::one()];
    for r in 1..=n {
        // Toeplitz column: t_0 = 1, t_1 = -A[r-1][r-1],
        // t_k = -(row · M^{k-2} · col) for the leading (r-1)-block M
        let mut t = Vec::with_capacity(r + 1);
        t.push(BigInt::one());
        t.push(-a.entry(r - 1, r - 1).clone());
        let mut w: Vec<BigInt> = (0..r - 1).map(|i| a.entry(i, r - 1).clone()).collect();
        for _ in 2..=r {
            let dot: BigInt = (0..r - 1).map(|i| a.entry(r - 1, i) * &w[i]).sum();
            t.push(-dot);
            w = (0..r - 1)
                .map(|i| (0..r - 1).map(|j| a.entry(i, j) * &w[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 1];
        for (i, entry) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate().take(i + 1) {
                if i - j <= r {
                    *entry += &t[i - j] * cj;
                }
            }
        }
        c = next;
    }
    CharPoly(c)
}

/// Exact co-spectrality: equality of characteristic polynomials.
pub fn cospectral(g: &Graph, h: &Graph) -> bool {
    char_poly(g) == char_poly(h)
}

/// Minimal linear recurrence of the walk-count sequence s_len, together
/// with its initial terms. Two graphs have the same walk counts at every
/// length if and only if their fingerprints are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkFingerprint {
    /// s_{len+d} = recurrence[0]·s_len + … + recurrence[d−1]·s_{len+d−1}.
    pub recurrence: Vec<BigRational>,
    /// s_0 … s_{d−1}.
    pub initial: Vec<BigInt>,
}

impl WalkFingerprint {
    /// Order d of the minimal recurrence.
    pub fn order(&self) -> usize {
        self.recurrence.len()
    }
}

/// Connection polynomial (1, c_1, …, c_L) of the shortest LFSR generating
/// `seq`: sum over i of c_i · seq[j−i] = 0 for every j ≥ L.
fn berlekamp_massey(seq: &[BigRational]) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = BigRational::one();
    for i in 0..seq.len() {
        let mut d = seq[i].clone();
        for j in 1..=l {
            d += &c[j] * &seq[i - j];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bb;
        if 2 * l <= i {
            let keep = c.clone();
            if c.len() < b.len() + m {
                c.resize(b.len() + m, BigRational::zero());
            }
            for (j, bj) in b.iter().enumerate() {
                c[j + m] -= &coef * bj;
            }
            l = i + 1 - l;
            b = keep;
            bb = d;
            m = 1;
        } else {
            if c.len() < b.len() + m {
                c.resize(b.len() + m, BigRational::zero());
            }
            for (j, bj) in b.iter().enumerate() {
                c[j + m] -= &coef * bj;
            }
            m += 1;
        }
    }
    c.truncate(l + 1);
    c
}

/// Walk fingerprint from the exact sequence s_0 … s_{2n}. The sequence is
/// a sum of at most n real exponentials, so its minimal recurrence has
/// order at most n and is already determined by this horizon.
pub fn walk_fingerprint(g: &Graph) -> WalkFingerprint {
    let n = g.n();
    let seq: Vec<BigInt> = (0..=2 * n)
        .map(|len| BigInt::from(walk_count(g, len)))
        .collect();
    let seq_q: Vec<BigRational> = seq.iter().map(|s| BigRational::from(s.clone())).collect();
    let conn = berlekamp_massey(&seq_q);
    let d = conn.len() - 1;
    let recurrence: Vec<BigRational> = (0..d).map(|i| -conn[d - i].clone()).collect();
    let initial = seq[..d].to_vec();
    debug_assert!(recurrence_holds(&recurrence, &seq_q));
    WalkFingerprint { recurrence, initial }
}

fn recurrence_holds(rec: &[BigRational], seq: &[BigRational]) -> bool {
    let d = rec.len();
    (d..seq.len()).all(|j| {
        let mut s = BigRational::zero();
        for (i, r) in rec.iter().enumerate() {
            s += r * &seq[j - d + i];
        }
        s == seq[j]
    })
}

/// Floating symmetric eigendecomposition: eigenvalues in descending order
/// with matching orthonormal eigenvectors.
pub struct EigenFloat {
    pub values: Vec<f64>,
    /// vectors[i] is the unit eigenvector for values[i].
    pub vectors: Vec<Vec<f64>>,
}

const EIGEN_RESIDUAL_LIMIT: f64 = 1e-9;

/// Symmetric eigendecomposition of the adjacency matrix, with a per-pair
/// residual check ‖Aq − λq‖_∞ ≤ 1e−9. Support for the approximate
/// doubly-stochastic construction only; never part of an exact verdict.
pub fn eigen_float(g: &Graph) -> Result<EigenFloat> {
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u as usize, v as usize)] = 1.0;
        a[(v as usize, u as usize)] = 1.0;
    }
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        let q = eig.eigenvectors.column(i);
        let residual = (&a * q - lambda * q).amax();
        if !residual.is_finite() || residual > EIGEN_RESIDUAL_LIMIT {
            return Err(Error::Precondition(format!(
                "eigendecomposition residual {residual:e} exceeds {EIGEN_RESIDUAL_LIMIT:e} \
                 for graph {}",
                write_graph6(g)
            )));
        }
        values.push(lambda);
        vectors.push(q.iter().copied().collect());
    }
    Ok(EigenFloat { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, disjoint_union, parse_graph6, path, spider, star};
    use crate::homcount::closed_walk_count;

    fn spectral_twins() -> (Graph, Graph) {
        (star(4), disjoint_union(&cycle(4).unwrap(), &path(0)))
    }

    fn coeffs(ints: &[i64]) -> Vec<BigInt> {
        ints.iter().map(|&c| BigInt::from(c)).collect()
    }

    // ---- brute-force oracle: cofactor expansion of det(xI - A) over
    // integer polynomials (ascending coefficient vectors) ----

    fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn poly_det(m: &Vec<Vec<Vec<BigInt>>>) -> Vec<BigInt> {
        let n = m.len();
        if n == 0 {
            return vec![BigInt::one()];
        }
        let mut det = vec![BigInt::zero()];
        for col in 0..n {
            let minor: Vec<Vec<Vec<BigInt>>> = (1..n)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != col)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let term = poly_mul(&m[0][col], &poly_det(&minor));
            for (i, t) in term.iter().enumerate() {
                if det.len() <= i {
                    det.resize(i + 1, BigInt::zero());
                }
                if col % 2 == 0 {
                    det[i] += t;
                } else {
                    det[i] -= t;
                }
            }
        }
        det
    }

    fn char_poly_oracle(g: &Graph) -> Vec<BigInt> {
        // descending coefficients of det(xI - A) by cofactor expansion
        let n = g.n();
        let m: Vec<Vec<Vec<BigInt>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = if g.has_edge(i as u32, j as u32) { 1 } else { 0 };
                        if i == j {
                            vec![BigInt::from(-a), BigInt::one()]
                        } else {
                            vec![BigInt::from(-a)]
                        }
                    })
                    .collect()
            })
            .collect();
        let mut asc = poly_det(&m);
        asc.resize(n + 1, BigInt::zero());
        asc.reverse();
        asc
    }

    #[test]
    fn char_poly_trivial_cases() {
        assert_eq!(char_poly(&path(0)).coeffs_desc(), coeffs(&[1, 0]));
        assert_eq!(char_poly(&path(1)).coeffs_desc(), coeffs(&[1, 0, -1]));
    }

    #[test]
    fn char_poly_cospectral_pair() {
        let (l, r) = spectral_twins();
        let want = coeffs(&[1, 0, -4, 0, 0, 0]); // x^5 - 4x^3
        assert_eq!(char_poly(&l).coeffs_desc(), want);
        assert_eq!(char_poly(&r).coeffs_desc(), want);
        assert_eq!(char_poly_oracle(&l), want);
        assert_eq!(char_poly_oracle(&r), want);
    }

    #[test]
    fn char_poly_matches_determinant_oracle() {
        let graphs = [
            cycle(5).unwrap(),
            complete(4),
            star(3),
            path(4),
            disjoint_union(&cycle(3).unwrap(), &path(1)),
            spider(3, 2),
        ];
        for g in &graphs {
            assert_eq!(
                char_poly(g).coeffs_desc(),
                char_poly_oracle(g),
                "graph {g:?}"
            );
        }
    }

    #[test]
    fn char_poly_multiplicative_on_disjoint_union() {
        let g = cycle(5).unwrap();
        let h = star(3);
        let prod = poly_mul(
            &char_poly(&g).coeffs_desc().iter().rev().cloned().collect::<Vec<_>>(),
            &char_poly(&h).coeffs_desc().iter().rev().cloned().collect::<Vec<_>>(),
        );
        let union = char_poly(&disjoint_union(&g, &h));
        let got: Vec<BigInt> = union.coeffs_desc().iter().rev().cloned().collect();
        assert_eq!(got, prod);
    }

    #[test]
    fn charpoly_display() {
        assert_eq!(char_poly(&path(0)).to_string(), "x");
        assert_eq!(char_poly(&path(1)).to_string(), "x^2 - 1");
        assert_eq!(char_poly(&star(4)).to_string(), "x^5 - 4x^3");
    }

    #[test]
    fn cospectral_verdicts() {
        let (l, r) = spectral_twins();
        assert!(cospectral(&l, &r));
        assert!(cospectral(&l, &l));
        let c6 = cycle(6).unwrap();
        let cc3 = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap());
        assert!(!cospectral(&c6, &cc3));
    }

    #[test]
    fn cospectral_iff_closed_walks_small() {
        // Newton's identities: equal char polys <=> equal traces of powers
        let graphs: Vec<Graph> = include_str!("../data/atlas_n4.g6")
            .lines()
            .map(|l| parse_graph6(l).unwrap())
            .collect();
        for g in &graphs {
            for h in &graphs {
                let walks_equal = (0..=4).all(|len| {
                    closed_walk_count(g, len) == closed_walk_count(h, len)
                });
                assert_eq!(cospectral(g, h), walks_equal, "{g:?} vs {h:?}");
            }
        }
    }

    #[test]
    fn fingerprint_trivial_and_fixture_cases() {
        let k1 = path(0);
        let fp = walk_fingerprint(&k1);
        assert_eq!(fp.order(), 1);
        assert_eq!(fp.recurrence, vec![BigRational::zero()]);
        assert_eq!(fp.initial, vec![BigInt::one()]);

        // same path homomorphism counts: equal fingerprints
        let walk_a = spider(3, 2);
        let walk_b = disjoint_union(&cycle(6).unwrap(), &path(0));
        assert_eq!(walk_fingerprint(&walk_a), walk_fingerprint(&walk_b));

        // co-spectral but different walk counts: different fingerprints
        let (l, r) = spectral_twins();
        assert_ne!(walk_fingerprint(&l), walk_fingerprint(&r));
    }

    #[test]
    fn fingerprint_equality_iff_walk_equality_small() {
        let graphs: Vec<Graph> = include_str!("../data/atlas_n4.g6")
            .lines()
            .map(|l| parse_graph6(l).unwrap())
            .collect();
        for g in &graphs {
            for h in &graphs {
                let walks_equal =
                    (0..=g.n() + h.n()).all(|len| walk_count(g, len) == walk_count(h, len));
                assert_eq!(
                    walk_fingerprint(g) == walk_fingerprint(h),
                    walks_equal,
                    "{g:?} vs {h:?}"
                );
            }
        }
    }

    #[test]
    fn eigen_float_known_spectra() {
        let close = |a: &[f64], b: &[f64]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
        };
        assert!(close(&eigen_float(&path(1)).unwrap().values, &[1.0, -1.0]));
        assert!(close(
            &eigen_float(&star(4)).unwrap().values,
            &[2.0, 0.0, 0.0, 0.0, -2.0]
        ));
        assert!(close(
            &eigen_float(&cycle(4).unwrap()).unwrap().values,
            &[2.0, 0.0, 0.0, -2.0]
        ));
    }

    #[test]
    fn eigen_float_moment_sums() {
        for g in [cycle(5).unwrap(), complete(4), spider(3, 2)] {
            let e = eigen_float(&g).unwrap();
            let s1: f64 = e.values.iter().sum();
            let s2: f64 = e.values.iter().map(|l| l * l).sum();
            assert!(s1.abs() < 1e-6, "trace {s1}");
            assert!((s2 - 2.0 * g.m() as f64).abs() < 1e-6, "second moment {s2}");
        }
    }
}
