//! Joints, the exceptional form, and classification of symmetric 5×5
//! matrices of symmetric tropical rank at most three.
//!
//! Indices `i < j` are joints of `A` when
//! - `A_ii` has two minimizing monomials whose variables touching `j` differ,
//! - `A_jj` has two minimizing monomials whose variables touching `i` differ,
//! - `A_ji` (row `j` and column `i` removed) has a minimizing monomial with
//!   `X(i,j)` and one without.
//!
//! Monomials are symmetric (`X(i,j) = X(j,i)`) throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::normal_form::{
    diagonal_permute, find_transposition_realizer, normalize, symmetric_scale, NormalFormError,
};
use crate::par::Exec;
use crate::trop::{
    find_nonsingular, is_sym_trop_singular, sym_minimizing_monomials, Permutation, Singularity,
    SubmatrixSelector, SymMatrix, SymMonomial, TropError,
};
use crate::value::{rational_serde, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JointsError {
    #[error("expected a 5x5 matrix, found {0}x{0}")]
    NotFiveByFive(usize),
    #[error("rank at most three but neither joints nor the exceptional form were found: {0}")]
    ClassificationGap(SymMatrix),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Trop(#[from] TropError),
}

fn check_five(a: &SymMatrix) -> Result<(), JointsError> {
    if a.n() != 5 {
        return Err(JointsError::NotFiveByFive(a.n()));
    }
    Ok(())
}

/// Two minimizing monomials of the principal submatrix `A_ii` whose
/// variables touching `j` differ, first in canonical order.
pub fn satisfies_joint_requirement(
    a: &SymMatrix,
    i: usize,
    j: usize,
) -> Option<(SymMonomial, SymMonomial)> {
    let n = a.n();
    if i == j || i >= n || j >= n {
        return None;
    }
    let monos = sym_minimizing_monomials(a, &SubmatrixSelector::minor(n, i, i)).ok()?;
    let touching: Vec<_> = monos.iter().map(|m| m.involving(j)).collect();
    for p in 0..monos.len() {
        for q in p + 1..monos.len() {
            if touching[p] != touching[q] {
                return Some((monos[p].clone(), monos[q].clone()));
            }
        }
    }
    None
}

/// Minimizing monomials of `A_ji`, one with `X(i,j)` and one without.
fn cross_witness(a: &SymMatrix, i: usize, j: usize) -> Option<(SymMonomial, SymMonomial)> {
    let monos = sym_minimizing_monomials(a, &SubmatrixSelector::minor(a.n(), j, i)).ok()?;
    let with = monos.iter().find(|m| m.contains_pair(i, j))?;
    let without = monos.iter().find(|m| !m.contains_pair(i, j))?;
    Some((with.clone(), without.clone()))
}

/// Joints `i < j` (0-based) with the monomials witnessing each condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointCertificate {
    pub i: usize,
    pub j: usize,
    pub mono_ii: (SymMonomial, SymMonomial),
    pub mono_jj: (SymMonomial, SymMonomial),
    pub mono_ji: (SymMonomial, SymMonomial),
}

impl JointCertificate {
    /// Re-derive every claim from the matrix.
    pub fn verify(&self, a: &SymMatrix) -> Result<(), String> {
        let n = a.n();
        let (i, j) = (self.i, self.j);
        if !(i < j && j < n) {
            return Err(format!(
                "indices ({}, {}) are not i < j <= {n}",
                i + 1,
                j + 1
            ));
        }
        let minimizing = |sel: SubmatrixSelector, m: &SymMonomial| {
            sym_minimizing_monomials(a, &sel)
                .map(|all| all.iter().any(|x| x == m))
                .unwrap_or(false)
        };
        for (name, (x, y), sel, other) in [
            ("A_ii", &self.mono_ii, SubmatrixSelector::minor(n, i, i), j),
            ("A_jj", &self.mono_jj, SubmatrixSelector::minor(n, j, j), i),
        ] {
            if !minimizing(sel.clone(), x) || !minimizing(sel, y) {
                return Err(format!("{name}: a monomial is not minimizing"));
            }
            if x.involving(other) == y.involving(other) {
                return Err(format!(
                    "{name}: monomials agree on the variables touching {}",
                    other + 1
                ));
            }
        }
        let (x, y) = &self.mono_ji;
        let sel = SubmatrixSelector::minor(n, j, i);
        if !minimizing(sel.clone(), x) || !minimizing(sel, y) {
            return Err("A_ji: a monomial is not minimizing".to_string());
        }
        if !x.contains_pair(i, j) || y.contains_pair(i, j) {
            return Err("A_ji: monomials do not separate X(i,j)".to_string());
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JointJson {
    i: usize,
    j: usize,
    mono_ii: (SymMonomial, SymMonomial),
    mono_jj: (SymMonomial, SymMonomial),
    mono_ji: (SymMonomial, SymMonomial),
}

/// Indices are 1-based in JSON.
impl Serialize for JointCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        JointJson {
            i: self.i + 1,
            j: self.j + 1,
            mono_ii: self.mono_ii.clone(),
            mono_jj: self.mono_jj.clone(),
            mono_ji: self.mono_ji.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = JointJson::deserialize(d)?;
        if raw.i == 0 || raw.j == 0 {
            return Err(serde::de::Error::custom("joint indices are 1-based"));
        }
        Ok(JointCertificate {
            i: raw.i - 1,
            j: raw.j - 1,
            mono_ii: raw.mono_ii,
            mono_jj: raw.mono_jj,
            mono_ji: raw.mono_ji,
        })
    }
}

/// Certificate that `i` and `j` are joints of `a`, if they are.
pub fn joint_certificate(a: &SymMatrix, i: usize, j: usize) -> Option<JointCertificate> {
    let (i, j) = (i.min(j), i.max(j));
    Some(JointCertificate {
        i,
        j,
        mono_ii: satisfies_joint_requirement(a, i, j)?,
        mono_jj: satisfies_joint_requirement(a, j, i)?,
        mono_ji: cross_witness(a, i, j)?,
    })
}

/// First pair `i < j` in lexicographic order that are joints.
pub fn find_joints(a: &SymMatrix) -> Option<JointCertificate> {
    let n = a.n();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find_map(|(i, j)| joint_certificate(a, i, j))
}

/// Parameters of the exceptional form
///
/// ```text
///  0  0  +  + N1
///  0  0  +  + N2
///  +  +  0  0  P
///  +  +  0  0  P
/// N1 N2  P  P  0
/// ```
///
/// with `N1, P > 0`, `N2 >= N1` and `N1 + P < M`, `M` the least `+` entry.
/// The frame is reached from the input by `perm` followed by the symmetric
/// scaling `offsets` (indexed in the new frame).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalParams {
    pub perm: Permutation,
    #[serde(with = "offsets_serde")]
    pub offsets: Vec<Rational>,
    #[serde(with = "rational_serde")]
    pub n1: Rational,
    #[serde(with = "rational_serde")]
    pub n2: Rational,
    #[serde(with = "rational_serde")]
    pub p: Rational,
    #[serde(with = "rational_serde")]
    pub m: Rational,
}

mod offsets_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::value::{Rational, TropValue};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|&r| TropValue(r))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Ok(Vec::<TropValue>::deserialize(d)?
            .into_iter()
            .map(|v| v.rational())
            .collect())
    }
}

impl ExceptionalParams {
    /// The input matrix moved into the exceptional frame.
    pub fn frame_matrix(&self, a: &SymMatrix) -> Result<SymMatrix, NormalFormError> {
        let mut b = diagonal_permute(a, &self.perm)?;
        for (k, &c) in self.offsets.iter().enumerate() {
            if c != Rational::from(0) {
                b = symmetric_scale(&b, k, c)?;
            }
        }
        Ok(b)
    }

    /// Check that `a` has exactly this exceptional form.
    pub fn verify(&self, a: &SymMatrix) -> Result<(), String> {
        if a.n() != 5 || self.perm.len() != 5 || self.offsets.len() != 5 {
            return Err("exceptional form is defined for 5x5 matrices".to_string());
        }
        let b = self.frame_matrix(a).map_err(|e| e.to_string())?;
        match exceptional_pattern(|i, j| b.get(i, j).rational()) {
            Some((n1, n2, p, m)) if (n1, n2, p, m) == (self.n1, self.n2, self.p, self.m) => Ok(()),
            Some(_) => Err("parameters do not match the matrix".to_string()),
            None => Err("matrix does not have the exceptional form in this frame".to_string()),
        }
    }
}

/// `(N1, N2, P, M)` when `b` has the exceptional form as is.
fn exceptional_pattern(
    b: impl Fn(usize, usize) -> Rational,
) -> Option<(Rational, Rational, Rational, Rational)> {
    let zero = Rational::from(0);
    let zeros = [(0, 0), (0, 1), (1, 1), (2, 2), (2, 3), (3, 3), (4, 4)];
    if zeros.iter().any(|&(i, j)| b(i, j) != zero) {
        return None;
    }
    let plus = [b(0, 2), b(0, 3), b(1, 2), b(1, 3)];
    if plus.iter().any(|&v| v <= zero) {
        return None;
    }
    let m = plus.into_iter().min().expect("four entries");
    let (n1, n2, p) = (b(0, 4), b(1, 4), b(2, 4));
    (b(3, 4) == p && n1 > zero && p > zero && n2 >= n1 && n1 + p < m).then_some((n1, n2, p, m))
}

/// Search all 120 diagonal permutations of a nonnegative normalized matrix
/// for the exceptional form, in lexicographic image order.
pub fn detect_exceptional(a: &SymMatrix) -> Option<ExceptionalParams> {
    if a.n() != 5 {
        return None;
    }
    let mut images: Vec<usize> = (0..5).collect();
    loop {
        let perm = Permutation::from_images(images.clone()).expect("bijection");
        let inv = perm.inverse();
        let found = exceptional_pattern(|i, j| a.get(inv.apply(i), inv.apply(j)).rational());
        if let Some((n1, n2, p, m)) = found {
            return Some(ExceptionalParams {
                perm,
                offsets: vec![Rational::from(0); 5],
                n1,
                n2,
                p,
                m,
            });
        }
        if !next_permutation(&mut images) {
            return None;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rank3Classification {
    HasJoints(JointCertificate),
    Exceptional(ExceptionalParams),
    NotRankAtMost3 { witness: SubmatrixSelector },
}

impl Rank3Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Rank3Classification::HasJoints(_) => "joints",
            Rank3Classification::Exceptional(_) => "exceptional",
            Rank3Classification::NotRankAtMost3 { .. } => "nonsingular-witness",
        }
    }

    /// Re-check the classification against `a`.
    pub fn verify(&self, a: &SymMatrix) -> Result<(), String> {
        match self {
            Rank3Classification::HasJoints(c) => c.verify(a),
            Rank3Classification::Exceptional(p) => p.verify(a),
            Rank3Classification::NotRankAtMost3 { witness } => {
                if witness.size() != 4 {
                    return Err("witness is not 4x4".to_string());
                }
                match is_sym_trop_singular(a, witness) {
                    Ok(false) => Ok(()),
                    Ok(true) => Err("witness is symmetrically singular".to_string()),
                    Err(e) => Err(e.to_string()),
                }
            }
        }
    }
}

/// Exceptional form reached by normalizing along a transposition realizer.
pub fn exceptional_via_normal_form(
    a: &SymMatrix,
) -> Result<Option<ExceptionalParams>, JointsError> {
    check_five(a)?;
    let sigma = match find_transposition_realizer(a) {
        Ok(s) => s,
        Err(NormalFormError::NotSingular) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let nf = normalize(a, &sigma)?;
    let Some(found) = detect_exceptional(&nf.matrix) else {
        return Ok(None);
    };
    // Compose: frame, scaling, then the detected relabeling.
    let offsets_frame = nf.scaling.offsets(5);
    let mut offsets = vec![Rational::from(0); 5];
    for (k, c) in offsets_frame.into_iter().enumerate() {
        offsets[found.perm.apply(k)] = c;
    }
    Ok(Some(ExceptionalParams {
        perm: found.perm.compose(&nf.frame),
        offsets,
        ..found
    }))
}

/// Classify a symmetric 5×5 matrix: a symmetrically nonsingular 4×4 witness,
/// joints, or the exceptional form.
pub fn classify_rank3(a: &SymMatrix) -> Result<Rank3Classification, JointsError> {
    check_five(a)?;
    if let Some(witness) =
        find_nonsingular(a.matrix(), 4, Singularity::Symmetric, Exec::Sequential)?
    {
        return Ok(Rank3Classification::NotRankAtMost3 { witness });
    }
    if let Some(cert) = find_joints(a) {
        return Ok(Rank3Classification::HasJoints(cert));
    }
    if let Some(params) = exceptional_via_normal_form(a)? {
        return Ok(Rank3Classification::Exceptional(params));
    }
    Err(JointsError::ClassificationGap(a.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn joints_example() -> SymMatrix {
        SymMatrix::from_ints(&[
            &[1, 0, 1, 1, 1],
            &[0, 1, 1, 1, 1],
            &[1, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0],
        ])
        .unwrap()
    }

    fn exceptional_example() -> SymMatrix {
        SymMatrix::from_ints(&[
            &[0, 0, 3, 3, 1],
            &[0, 0, 3, 3, 2],
            &[3, 3, 0, 0, 1],
            &[3, 3, 0, 0, 1],
            &[1, 2, 1, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn worked_joint_example() {
        let a = joints_example();
        let (x, y) = satisfies_joint_requirement(&a, 3, 4).unwrap();
        assert_eq!(x.to_string(), "X12^2 X33 X55");
        assert_eq!(y.to_string(), "X12^2 X35^2");
        let cert = joint_certificate(&a, 3, 4).unwrap();
        assert_eq!(cert.mono_ji.0.to_string(), "X12^2 X33 X45");
        assert_eq!(cert.mono_ji.1.to_string(), "X12^2 X34 X35");
        cert.verify(&a).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.starts_with(r#"{"i":4,"j":5"#));
        let back: JointCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn nonsingular_principal_submatrix_has_no_requirement() {
        let a = SymMatrix::from_ints(&[
            &[0, 5, 5, 5, 5],
            &[5, 0, 5, 5, 5],
            &[5, 5, 0, 5, 5],
            &[5, 5, 5, 0, 5],
            &[5, 5, 5, 5, 0],
        ])
        .unwrap();
        assert!(satisfies_joint_requirement(&a, 0, 1).is_none());
    }

    #[test]
    fn forged_certificate_is_rejected() {
        let a = joints_example();
        let mut cert = joint_certificate(&a, 3, 4).unwrap();
        std::mem::swap(&mut cert.mono_ji.0, &mut cert.mono_ji.1);
        assert!(cert.verify(&a).is_err());
    }

    #[test]
    fn exceptional_detection() {
        let a = exceptional_example();
        assert!(find_joints(&a).is_none());
        let p = detect_exceptional(&a).unwrap();
        assert!(p.perm.is_identity());
        let r = |v: i64| Rational::from(v);
        assert_eq!((p.n1, p.n2, p.p, p.m), (r(1), r(2), r(1), r(3)));
        p.verify(&a).unwrap();
        let row: &[i64] = &[0; 5];
        assert!(detect_exceptional(&SymMatrix::from_ints(&[row; 5]).unwrap()).is_none());
        match classify_rank3(&a).unwrap() {
            Rank3Classification::Exceptional(q) => q.verify(&a).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classification_of_worked_examples() {
        let a = joints_example();
        match classify_rank3(&a).unwrap() {
            Rank3Classification::HasJoints(c) => {
                assert_eq!((c.i, c.j), (2, 3));
                c.verify(&a).unwrap();
            }
            other => panic!("{other:?}"),
        }
        let identity_like = SymMatrix::from_ints(&[
            &[0, 1, 1, 1, 1],
            &[1, 0, 1, 1, 1],
            &[1, 1, 0, 1, 1],
            &[1, 1, 1, 0, 1],
            &[1, 1, 1, 1, 0],
        ])
        .unwrap();
        let c = classify_rank3(&identity_like).unwrap();
        assert_eq!(c.label(), "nonsingular-witness");
        c.verify(&identity_like).unwrap();
    }
}
