//! Recomputation of the introductory worked examples.

use tropsym::puiseux::{Coeff, PuiseuxSeries, Q};
use tropsym::{
    is_sym_trop_singular, is_trop_singular, minimizing_monomials, sym_minimizing_monomials,
    Rational, SubmatrixSelector, SymMatrix, TropPolynomial, TropValue,
};

/// One recomputed claim.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub detail: String,
    pub ok: bool,
}

fn check(name: &str, detail: String, ok: bool) -> Check {
    Check {
        name: name.to_string(),
        detail,
        ok,
    }
}

/// `c_x X ⊕ c_y Y ⊕ 0`.
pub fn tropical_line(cx: i64, cy: i64) -> TropPolynomial {
    TropPolynomial::new(vec![
        (TropValue::int(cx), vec![1, 0]),
        (TropValue::int(cy), vec![0, 1]),
        (TropValue::int(0), vec![0, 0]),
    ])
    .expect("three monomials in two variables")
}

/// Membership in the intersection of the two tropicalized lines.
pub fn in_prevariety(x: Rational, y: Rational) -> bool {
    let p = [x, y];
    tropical_line(0, 0).on_hypersurface(&p).unwrap()
        && tropical_line(1, 1).on_hypersurface(&p).unwrap()
}

/// Sample points for the prevariety check.
pub fn grid() -> Vec<Rational> {
    [(-3, 1), (-2, 1), (-1, 1), (-1, 2), (0, 1)]
        .iter()
        .map(|&(n, d)| Rational::new(n, d))
        .collect()
}

/// The 3×3 matrix with 1 on the diagonal and 0 elsewhere.
pub fn diagonal_ones() -> SymMatrix {
    SymMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).expect("symmetric")
}

fn line_examples(out: &mut Vec<Check>) {
    let line = tropical_line(0, 0);
    let on = |x: i64, y: i64| {
        line.on_hypersurface(&[Rational::from(x), Rational::from(y)])
            .unwrap()
    };
    out.push(check(
        "tropical line",
        format!("{line}: (1,0) on = {}, (-1,0) on = {}", on(1, 0), on(-1, 0)),
        on(1, 0) && !on(-1, 0),
    ));
}

fn intersection_examples(out: &mut Vec<Check>) {
    // f = 2x + y + 1 and g = tx + ty + 1 meet at (t^-1 - 1, -2t^-1 + 1).
    let cut = Rational::from(4);
    let s = |terms: &[(i64, i64)]| {
        let terms = terms
            .iter()
            .map(|&(e, c)| (Rational::from(e), Q::from_i64(c)))
            .collect();
        PuiseuxSeries::<Q>::from_terms(terms, cut).expect("distinct exponents")
    };
    let (x, y, one, two, t) = (
        s(&[(-1, 1), (0, -1)]),
        s(&[(-1, -2), (0, 1)]),
        s(&[(0, 1)]),
        s(&[(0, 2)]),
        s(&[(1, 1)]),
    );
    let f = two.mul(&x).add(&y).add(&one);
    let g = t.mul(&x).add(&t.mul(&y)).add(&one);
    let degs = (x.deg(), y.deg());
    let minus_one = Some(Rational::from(-1));
    let show = |d: Option<Rational>| d.map_or("unknown".to_string(), |d| TropValue(d).to_string());
    out.push(check(
        "classical intersection",
        format!(
            "x = {x}, y = {y}; f and g vanish below t^{}: {}; degrees ({}, {})",
            TropValue(f.cutoff().min(g.cutoff())),
            f.is_zero_to_cutoff() && g.is_zero_to_cutoff(),
            show(degs.0),
            show(degs.1)
        ),
        f.is_zero_to_cutoff() && g.is_zero_to_cutoff() && degs == (minus_one, minus_one),
    ));
    let p = [Rational::from(-1), Rational::from(-1)];
    let (tf, tg) = (tropical_line(0, 0), tropical_line(1, 1));
    let both = tf.on_hypersurface(&p).unwrap() && tg.on_hypersurface(&p).unwrap();
    out.push(check(
        "tropicalized point",
        format!("(-1,-1) on V({tf}) and V({tg}): {both}"),
        both,
    ));
    let pts = grid();
    let mut members = Vec::new();
    let mut agrees = true;
    for &a in &pts {
        for &b in &pts {
            let inside = in_prevariety(a, b);
            agrees &= inside == (a == b && a <= Rational::from(-1));
            if inside {
                members.push(format!("({}, {})", TropValue(a), TropValue(b)));
            }
        }
    }
    out.push(check(
        "prevariety",
        format!(
            "grid points inside: {}; exactly (a,a) with a <= -1: {agrees}",
            members.join(" ")
        ),
        agrees,
    ));
    let q = [Rational::from(-2), Rational::from(-2)];
    out.push(check(
        "prevariety is larger",
        format!("(-2,-2) in the prevariety: {}", in_prevariety(q[0], q[1])),
        in_prevariety(q[0], q[1]),
    ));
}

fn symmetric_contrast(out: &mut Vec<Check>) {
    let a = diagonal_ones();
    let sel = SubmatrixSelector::principal(vec![0, 1, 2]);
    let plain = minimizing_monomials(a.matrix(), &sel).unwrap();
    let sym = sym_minimizing_monomials(&a, &sel).unwrap();
    let names = |v: Vec<String>| v.join(", ");
    let singular = is_trop_singular(a.matrix(), &sel).unwrap();
    let sym_singular = is_sym_trop_singular(&a, &sel).unwrap();
    out.push(check(
        "3x3 contrast",
        format!(
            "minimizing monomials [{}], singular = {singular}; symmetric [{}], symmetrically singular = {sym_singular}",
            names(plain.iter().map(|m| m.to_string()).collect()),
            names(sym.iter().map(|m| m.to_string()).collect()),
        ),
        singular && !sym_singular && plain.len() == 2 && sym.len() == 1,
    ));
}

/// Every worked example, in order.
pub fn run() -> Vec<Check> {
    let mut out = Vec::new();
    line_examples(&mut out);
    intersection_examples(&mut out);
    symmetric_contrast(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_hold() {
        for c in run() {
            assert!(c.ok, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn minimizing_monomials_of_the_contrast_matrix() {
        let a = diagonal_ones();
        let sel = SubmatrixSelector::principal(vec![0, 1, 2]);
        let plain: Vec<String> = minimizing_monomials(a.matrix(), &sel)
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(plain, ["X12 X23 X31", "X13 X21 X32"]);
        let sym: Vec<String> = sym_minimizing_monomials(&a, &sel)
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(sym, ["X12 X13 X23"]);
    }
}
