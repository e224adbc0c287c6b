use std::collections::HashMap;

use crate::poly::{Monomial, Polynomial};

/// A basis of the Q-span of `polys`: monic, pairwise distinct leading
/// monomials, sorted ascending by leading monomial. Polynomials are reduced
/// against earlier rows at their leading term only.
pub fn echelonize(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut rows: Vec<Polynomial> = Vec::new();
    let mut pivots: HashMap<Monomial, usize> = HashMap::new();
    for p in polys {
        let mut p = p;
        if p.is_zero() {
            continue;
        }
        let one = Monomial::one(p.nvars());
        while let Some((c, m)) = p.leading_term() {
            match pivots.get(m) {
                Some(&k) => {
                    let c = c.clone();
                    p = p.sub_mul_term(&c, &one, &rows[k]);
                }
                None => break,
            }
        }
        if p.is_zero() {
            continue;
        }
        let p = p.monic();
        pivots.insert(p.leading_monomial().unwrap().clone(), rows.len());
        rows.push(p);
    }
    if let Some(first) = rows.first() {
        let order = first.order();
        rows.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, MonomialOrder};

    #[test]
    fn spans_are_preserved() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let p = |s: &str| parse_polynomial(s, &names, MonomialOrder::GrevLex).unwrap();
        let rows = echelonize(vec![p("x+y"), p("x-y"), p("3*y"), p("0"), p("x^2")]);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], p("y"));
        assert!(rows.iter().all(|r| r.leading_coeff().unwrap() == &num_rational::BigRational::from_integer(1.into())));
    }
}
