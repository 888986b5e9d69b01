//! Symmetry-preserving transformations and the nonnegative normal form.
//!
//! A diagonal permutation relabels rows and columns together; a symmetric
//! scaling adds `c` to row `i` and column `i`. Both preserve every submatrix's
//! set of symmetric minimizing monomials, so they preserve symmetric tropical
//! rank. [`normalize`] uses them to bring a 5×5 matrix with a known realizer
//! `σ` into a frame where every entry is nonnegative and `A(i, σ(i)) = 0`.

mod form;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use form::{matches_form, FormCell, FormMatrix};

use std::collections::BTreeSet;

use crate::trop::{
    is_sym_trop_singular, subsets, sym_minimizing_monomials, trop_det_full, Permutation,
    SubmatrixSelector, SymMatrix, SymMonomial, TropError, TropMatrix,
};
use crate::value::{Rational, TropValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("form has {found} cells, expected {expected}")]
    CellCount { expected: usize, found: usize },
    #[error("form cells ({}, {}) and ({}, {}) differ", .0 + 1, .1 + 1, .1 + 1, .0 + 1)]
    AsymmetricForm(usize, usize),
    #[error("form constants must be nonnegative")]
    NegativeFormConstant,
    #[error("line {line}, column {column}: {message}")]
    FormParse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("cycle {0:?} does not occur in the permutation")]
    CycleNotPresent(Vec<usize>),
    #[error("matrix is not symmetrically tropically singular")]
    NotSingular,
    #[error("no realizer contains a transposition")]
    NotFound,
    #[error("permutation does not realize the tropical determinant")]
    NotARealizer,
    #[error("no symmetric scaling makes every entry nonnegative for this realizer")]
    NoNonnegativeScaling,
    #[error(transparent)]
    Trop(#[from] TropError),
}

/// `result(i, j) = A(σ⁻¹(i), σ⁻¹(j))`: index `k` of `A` moves to `σ(k)`.
pub fn diagonal_permute(a: &SymMatrix, sigma: &Permutation) -> Result<SymMatrix, NormalFormError> {
    let n = a.n();
    if sigma.len() != n {
        return Err(NormalFormError::SizeMismatch {
            expected: n,
            found: sigma.len(),
        });
    }
    let inv = sigma.inverse();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(a.get(inv.apply(i), inv.apply(j)));
        }
    }
    Ok(SymMatrix::new(TropMatrix::new(n, n, entries)?)?)
}

/// Add `c` to row `i` and to column `i`; the diagonal entry gains `2c`.
pub fn symmetric_scale(a: &SymMatrix, i: usize, c: Rational) -> Result<SymMatrix, NormalFormError> {
    let n = a.n();
    if i >= n {
        return Err(NormalFormError::IndexOutOfRange(i));
    }
    let mut rows = a.matrix().row_vecs();
    let shift = TropValue(c);
    for k in 0..n {
        rows[i][k] = rows[i][k] + shift;
        rows[k][i] = rows[k][i] + shift;
    }
    Ok(SymMatrix::from_rows(&rows)?)
}

/// Ordered symmetric scalings `(index, c)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingSequence {
    pub steps: Vec<(usize, Rational)>,
}

impl ScalingSequence {
    pub fn apply(&self, a: &SymMatrix) -> Result<SymMatrix, NormalFormError> {
        let mut m = a.clone();
        for &(i, c) in &self.steps {
            m = symmetric_scale(&m, i, c)?;
        }
        Ok(m)
    }

    /// Net shift per index.
    pub fn offsets(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::from(0); n];
        for &(i, c) in &self.steps {
            out[i] += c;
        }
        out
    }

    pub fn is_noop(&self) -> bool {
        self.steps.iter().all(|(_, c)| *c == Rational::from(0))
    }
}

/// Replace the 4-cycle `(k1 k2 k3 k4)` of `σ` by `(k1 k2)(k3 k4)` and by `(k1 k4)(k2 k3)`.
pub fn lemma1_rewrite(
    sigma: &Permutation,
    cycle: &[usize],
) -> Result<(Permutation, Permutation), NormalFormError> {
    let present = cycle.len() == 4
        && cycle.iter().all(|&k| k < sigma.len())
        && (0..4).all(|t| sigma.apply(cycle[t]) == cycle[(t + 1) % 4]);
    if !present {
        return Err(NormalFormError::CycleNotPresent(cycle.to_vec()));
    }
    let [k1, k2, k3, k4] = [cycle[0], cycle[1], cycle[2], cycle[3]];
    let with = |pairs: [(usize, usize); 2]| {
        let mut img = sigma.images().to_vec();
        for (a, b) in pairs {
            img[a] = b;
            img[b] = a;
        }
        Permutation::from_images(img).expect("swapping within a cycle keeps a bijection")
    };
    Ok((with([(k1, k2), (k3, k4)]), with([(k1, k4), (k2, k3)])))
}

/// A realizer of the tropical determinant with a 2-cycle, first in lexicographic image order.
pub fn find_transposition_realizer(a: &SymMatrix) -> Result<Permutation, NormalFormError> {
    let sel = SubmatrixSelector::full(a.matrix());
    if !is_sym_trop_singular(a, &sel)? {
        return Err(NormalFormError::NotSingular);
    }
    let det = trop_det_full(a.matrix())?;
    if let Some(p) = det.realizers.iter().find(|p| p.has_transposition()) {
        return Ok(p.clone());
    }
    for p in &det.realizers {
        if let Some(c) = p.cycles().into_iter().find(|c| c.len() == 4) {
            return Ok(lemma1_rewrite(p, &c)?.0);
        }
    }
    Err(NormalFormError::NotFound)
}

/// Output of [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Nonnegative matrix with `matrix(i, realizer(i)) = 0`.
    pub matrix: SymMatrix,
    /// The realizer in the new frame (4-cycles already rewritten).
    pub realizer: Permutation,
    /// Diagonal permutation applied first.
    pub frame: Permutation,
    /// Scalings applied after the diagonal permutation.
    pub scaling: ScalingSequence,
}

impl NormalForm {
    /// Rebuild `matrix` from the original input.
    pub fn replay(&self, a: &SymMatrix) -> Result<SymMatrix, NormalFormError> {
        self.scaling.apply(&diagonal_permute(a, &self.frame)?)
    }
}

/// Every postcondition of [`normalize`] for input `a`, as a list of violations.
pub fn check_normal_form(a: &SymMatrix, nf: &NormalForm) -> Vec<String> {
    let mut bad = Vec::new();
    let n = a.n();
    let m = &nf.matrix;
    match nf.replay(a) {
        Ok(r) if &r == m => {}
        _ => bad.push("replay does not reproduce the matrix".to_string()),
    }
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j).is_negative() {
                bad.push(format!("negative entry ({}, {})", i + 1, j + 1));
            }
        }
        if !m.get(i, nf.realizer.apply(i)).is_zero() {
            bad.push(format!("nonzero realizer entry in row {}", i + 1));
        }
    }
    let det = trop_det_full(m.matrix()).expect("5x5 is enumerable");
    if !det.value.is_zero() || !det.realizers.contains(&nf.realizer) {
        bad.push("realizer does not attain a zero determinant".to_string());
    }
    let pi = &nf.frame;
    for k in 1..=n {
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let sel = SubmatrixSelector::new(rows.clone(), cols.clone());
                let moved = SubmatrixSelector::new(
                    rows.iter().map(|&r| pi.apply(r)).collect(),
                    cols.iter().map(|&c| pi.apply(c)).collect(),
                );
                let before: BTreeSet<Vec<(usize, usize)>> = sym_minimizing_monomials(a, &sel)
                    .expect("valid selection")
                    .iter()
                    .map(|mono| {
                        SymMonomial::new(
                            mono.pairs()
                                .iter()
                                .map(|&(x, y)| (pi.apply(x), pi.apply(y)))
                                .collect(),
                            mono.weight,
                        )
                        .pairs()
                        .to_vec()
                    })
                    .collect();
                let after: BTreeSet<Vec<(usize, usize)>> = sym_minimizing_monomials(m, &moved)
                    .expect("valid selection")
                    .iter()
                    .map(|mono| mono.pairs().to_vec())
                    .collect();
                if before != after {
                    bad.push(format!("monomials differ on {}", sel.display_1based()));
                }
            }
        }
    }
    bad
}

/// Frame that lays the cycles of `σ` out consecutively: longest cycles first,
/// fixed points last.
fn canonical_frame(sigma: &Permutation) -> Permutation {
    let mut cycles = sigma.cycles();
    cycles.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut order: Vec<usize> = cycles.concat();
    order.extend((0..sigma.len()).filter(|&k| sigma.apply(k) == k));
    let mut img = vec![0; sigma.len()];
    for (pos, &k) in order.iter().enumerate() {
        img[k] = pos;
    }
    Permutation::from_images(img).expect("cycles partition the indices")
}

struct Work {
    n: usize,
    a: Vec<Rational>,
    steps: Vec<(usize, Rational)>,
}

impl Work {
    fn get(&self, i: usize, j: usize) -> Rational {
        self.a[i * self.n + j]
    }

    fn scale(&mut self, i: usize, c: Rational) {
        if c == Rational::from(0) {
            return;
        }
        for k in 0..self.n {
            self.a[i * self.n + k] += c;
            self.a[k * self.n + i] += c;
        }
        self.steps.push((i, c));
    }
}

/// `coef · t >= bound`.
#[derive(Clone, Debug)]
struct Inequality {
    coef: Vec<Rational>,
    bound: Rational,
}

/// A solution of the system with each coordinate as close to zero as the
/// earlier ones allow, by Fourier–Motzkin elimination.
fn solve_nearest_zero(rows: Vec<Inequality>, vars: usize) -> Option<Vec<Rational>> {
    let zero = Rational::from(0);
    // systems[v] only involves variables 0..=v (after eliminating the later ones).
    let mut systems = vec![rows];
    for v in (0..vars).rev() {
        let cur = systems.last().expect("nonempty");
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for r in cur {
            match r.coef[v].cmp(&zero) {
                std::cmp::Ordering::Greater => pos.push(r),
                std::cmp::Ordering::Less => neg.push(r),
                std::cmp::Ordering::Equal => next.push(r.clone()),
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (p.coef[v], -q.coef[v]);
                next.push(Inequality {
                    coef: p
                        .coef
                        .iter()
                        .zip(&q.coef)
                        .map(|(x, y)| *x * b + *y * a)
                        .collect(),
                    bound: p.bound * b + q.bound * a,
                });
            }
        }
        systems.push(next);
    }
    if systems
        .last()
        .expect("nonempty")
        .iter()
        .any(|r| r.bound > zero)
    {
        return None;
    }
    let mut t = vec![zero; vars];
    for v in 0..vars {
        let sys = &systems[vars - 1 - v];
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for r in sys {
            let c = r.coef[v];
            if c == zero {
                continue;
            }
            let rest: Rational = (0..v).map(|u| r.coef[u] * t[u]).sum();
            let x = (r.bound - rest) / c;
            if c > zero {
                lo = Some(lo.map_or(x, |l: Rational| l.max(x)));
            } else {
                hi = Some(hi.map_or(x, |h: Rational| h.min(x)));
            }
        }
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return None;
            }
        }
        let mut x = zero;
        if let Some(l) = lo {
            x = x.max(l);
        }
        if let Some(h) = hi {
            x = x.min(h);
        }
        t[v] = x;
    }
    Some(t)
}

/// Symmetric scaling normal form of a 5×5 matrix for the realizer `σ`.
///
/// The matrix is first relabeled so the cycles of `σ` are consecutive, then
/// each cycle is scaled so its entries vanish. Odd cycles and fixed points are
/// then rigid; each transposition keeps one free shift, which is chosen to
/// clear the remaining negative entries.
pub fn normalize(a: &SymMatrix, sigma: &Permutation) -> Result<NormalForm, NormalFormError> {
    let n = a.n();
    if n != 5 {
        return Err(NormalFormError::SizeMismatch {
            expected: 5,
            found: n,
        });
    }
    if sigma.len() != n {
        return Err(NormalFormError::SizeMismatch {
            expected: n,
            found: sigma.len(),
        });
    }
    let det = trop_det_full(a.matrix())?;
    if !det.realizers.contains(sigma) {
        return Err(NormalFormError::NotARealizer);
    }
    let mut sigma = sigma.clone();
    if let Some(c) = sigma.cycles().into_iter().find(|c| c.len() == 4) {
        sigma = lemma1_rewrite(&sigma, &c)?.0;
    }
    let frame = canonical_frame(&sigma);
    let realizer = frame.compose(&sigma).compose(&frame.inverse());
    let start = diagonal_permute(a, &frame)?;
    let mut w = Work {
        n,
        a: start
            .matrix()
            .entries()
            .iter()
            .map(|v| v.rational())
            .collect(),
        steps: Vec::new(),
    };
    let half = Rational::new(1, 2);

    let cycles = realizer.cycles();
    for cyc in &cycles {
        match cyc.len() {
            2 => {
                let c = -w.get(cyc[0], cyc[1]) * half;
                w.scale(cyc[0], c);
                w.scale(cyc[1], c);
            }
            _ => {
                // Odd cycle (k1 .. kL): zero consecutive entries, then balance
                // the closing entry with alternating half shifts.
                let l = cyc.len();
                for t in 1..l {
                    let c = -w.get(cyc[t - 1], cyc[t]);
                    w.scale(cyc[t], c);
                }
                let close = w.get(cyc[0], cyc[l - 1]) * half;
                for (t, &k) in cyc.iter().enumerate() {
                    w.scale(k, if t % 2 == 0 { -close } else { close });
                }
            }
        }
    }
    for k in 0..n {
        if realizer.apply(k) == k {
            let c = -w.get(k, k) * half;
            w.scale(k, c);
        }
    }

    // The scalings that keep every `A(i, σ(i)) = 0` are `+t` on one end of a
    // transposition and `-t` on the other. Nonnegativity is a system of
    // inequalities in these shifts, solved exactly.
    let pairs: Vec<(usize, usize)> = cycles
        .iter()
        .filter(|c| c.len() == 2)
        .map(|c| (c[0], c[1]))
        .collect();
    let var = |k: usize| -> Option<(usize, i64)> {
        pairs.iter().enumerate().find_map(|(v, &(x, y))| {
            if k == x {
                Some((v, 1))
            } else if k == y {
                Some((v, -1))
            } else {
                None
            }
        })
    };
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut coef = vec![0i64; pairs.len()];
            for k in [i, j] {
                if let Some((v, s)) = var(k) {
                    coef[v] += s;
                }
            }
            rows.push(Inequality {
                coef: coef.into_iter().map(Rational::from).collect(),
                bound: -w.get(i, j),
            });
        }
    }
    let shifts =
        solve_nearest_zero(rows, pairs.len()).ok_or(NormalFormError::NoNonnegativeScaling)?;
    for (&(x, y), t) in pairs.iter().zip(shifts) {
        w.scale(x, t);
        w.scale(y, -t);
    }

    let entries = w.a.iter().map(|&r| TropValue(r)).collect();
    let matrix = SymMatrix::new(TropMatrix::new(n, n, entries)?)?;
    Ok(NormalForm {
        matrix,
        realizer,
        frame,
        scaling: ScalingSequence { steps: w.steps },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permute_and_scale_examples() {
        let a = SymMatrix::from_ints(&[&[0, 1, 2], &[1, 0, 3], &[2, 3, 0]]).unwrap();
        let id = Permutation::identity(3);
        assert_eq!(diagonal_permute(&a, &id).unwrap(), a);
        let s = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let expected = SymMatrix::from_ints(&[&[0, 1, 3], &[1, 0, 2], &[3, 2, 0]]).unwrap();
        assert_eq!(diagonal_permute(&a, &s).unwrap(), expected);

        let b = SymMatrix::from_ints(&[&[0, 1], &[1, 4]]).unwrap();
        assert_eq!(symmetric_scale(&b, 0, Rational::from(0)).unwrap(), b);
        let scaled = symmetric_scale(&b, 0, Rational::new(-1, 2)).unwrap();
        let h = TropValue::frac(1, 2);
        let expected =
            SymMatrix::from_rows(&[vec![TropValue::int(-1), h], vec![h, TropValue::int(4)]])
                .unwrap();
        assert_eq!(scaled, expected);
        assert!(matches!(
            symmetric_scale(&b, 2, Rational::from(1)),
            Err(NormalFormError::IndexOutOfRange(2))
        ));
    }

    #[test]
    fn four_cycle_splits_into_two_transposition_pairs() {
        let s = Permutation::from_cycles(5, &[&[0, 1, 2, 3]]).unwrap();
        let (p, q) = lemma1_rewrite(&s, &[0, 1, 2, 3]).unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(q.to_string(), "(1 4)(2 3)");
        assert_eq!(p.apply(4), 4);
        assert!(matches!(
            lemma1_rewrite(&s, &[0, 2, 1, 3]),
            Err(NormalFormError::CycleNotPresent(_))
        ));
    }

    #[test]
    fn normal_form_of_diagonal_zero_matrix_is_fixed() {
        let a = SymMatrix::from_ints(&[
            &[0, 1, 2, 3, 4],
            &[1, 0, 1, 2, 3],
            &[2, 1, 0, 1, 2],
            &[3, 2, 1, 0, 1],
            &[4, 3, 2, 1, 0],
        ])
        .unwrap();
        let nf = normalize(&a, &Permutation::identity(5)).unwrap();
        assert_eq!(nf.matrix, a);
        assert!(nf.scaling.steps.is_empty());
        assert!(nf.frame.is_identity());
    }

    #[test]
    fn transposition_realizer_of_zero_matrix() {
        let row: &[i64] = &[0; 5];
        let z = SymMatrix::from_ints(&[row; 5]).unwrap();
        let p = find_transposition_realizer(&z).unwrap();
        assert!(p.has_transposition());
    }
}
