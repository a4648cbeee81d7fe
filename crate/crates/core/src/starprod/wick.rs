//! Gaussian expectation values by pairings, used as a second route to the
//! Moyal product.
//!
//! `f` sits at a point `u` and `g` at a point `v > u` of a line carrying a
//! Gaussian field `φ` with `⟨φ^i(a) φ^j(b)⟩ = h π^{ij} sign(b − a)` and
//! `sign(0) = 0`. Taylor expanding `f(x + φ(u)) g(x + φ(v))` and taking the
//! expectation gives `f ⋆ g`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyalg::rational::factorial;
use crate::polyalg::{FormalSeries, PolyVector, Polynomial, Rational};

/// A perfect matching of `{1, …, 2s}` written as pairs `(a, b)` with
/// `a < b` and the first entries increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of pairs.
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

/// All `(2s − 1)!!` pairings, in lexicographic order of their pair lists.
pub fn wick_pairings(s: usize) -> Vec<Pairing> {
    let mut out = Vec::new();
    let mut used = vec![false; 2 * s];
    let mut cur = Vec::with_capacity(s);
    extend(&mut used, &mut cur, &mut out);
    out
}

fn extend(used: &mut [bool], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Pairing>) {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(Pairing { pairs: cur.clone() });
        return;
    };
    used[first] = true;
    for second in first + 1..used.len() {
        if used[second] {
            continue;
        }
        used[second] = true;
        cur.push((first + 1, second + 1));
        extend(used, cur, out);
        cur.pop();
        used[second] = false;
    }
    used[first] = false;
}

/// Every index sequence in `{0..d}^r` with its (nonzero) derivative of `f`.
fn derivative_table(f: &Polynomial, r: usize) -> Result<Vec<(Vec<usize>, Polynomial)>> {
    let d = f.dim();
    let mut out = Vec::new();
    if d == 0 && r > 0 {
        return Ok(out);
    }
    let mut seq = vec![0usize; r];
    loop {
        let mut k = vec![0u32; d];
        for &i in &seq {
            k[i] += 1;
        }
        let df = f.derivative(&k)?;
        if !df.is_zero() {
            out.push((seq.clone(), df));
        }
        // odometer
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < d {
                break;
            }
            seq[pos] = 0;
        }
    }
}

/// The Moyal product recomputed as a sum over pairings of field
/// insertions, truncated after `h^order`.
pub fn moyal_via_wick(pi: &PolyVector, f: &Polynomial, g: &Polynomial, order: usize) -> Result<FormalSeries<Polynomial>> {
    if pi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: pi.degree(),
        });
    }
    if !pi.is_constant() {
        return Err(Error::NonConstant);
    }
    let d = pi.dim();
    for p in [f, g] {
        if p.dim() != d {
            return Err(Error::DimensionMismatch(d, p.dim()));
        }
    }
    let pij: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| pi.component(&[i, j]).as_constant().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();

    let max_r = f.total_degree().unwrap_or(0) as usize;
    let max_s = g.total_degree().unwrap_or(0) as usize;
    let f_tabs: Vec<_> = (0..=max_r).map(|r| derivative_table(f, r)).collect::<Result<_>>()?;
    let g_tabs: Vec<_> = (0..=max_s).map(|s| derivative_table(g, s)).collect::<Result<_>>()?;

    let mut out = vec![Polynomial::zero(d); order + 1];
    for r in 0..=max_r {
        for s in 0..=max_s {
            if (r + s) % 2 == 1 || (r + s) / 2 > order {
                continue;
            }
            let k = (r + s) / 2;
            let pairings = wick_pairings(k);
            let norm = Rational::one() / (factorial(r as u32) * factorial(s as u32));
            // insertion p lives at u for p < r and at v otherwise
            let at_v = |p: usize| p >= r;
            for (is, df) in &f_tabs[r] {
                for (js, dg) in &g_tabs[s] {
                    let comp = |p: usize| if p < r { is[p] } else { js[p - r] };
                    let mut total = Rational::zero();
                    for pairing in &pairings {
                        let mut prod = Rational::one();
                        for &(a, b) in pairing.pairs() {
                            let (a, b) = (a - 1, b - 1);
                            // sign(x_b − x_a) with a < b in insertion order
                            if at_v(a) == at_v(b) {
                                prod = Rational::zero();
                                break;
                            }
                            prod *= &pij[comp(a)][comp(b)];
                            if prod.is_zero() {
                                break;
                            }
                        }
                        total += prod;
                    }
                    if total.is_zero() {
                        continue;
                    }
                    let term = df.try_mul(dg)?.scale(&(total * &norm));
                    out[k] = out[k].try_add(&term)?;
                }
            }
        }
    }
    Ok(FormalSeries::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn odd_double_factorial(s: usize) -> usize {
        (0..s).map(|i| 2 * i + 1).product()
    }

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn pairing_counts() {
        for s in 0..6 {
            assert_eq!(wick_pairings(s).len(), odd_double_factorial(s));
        }
        assert_eq!(wick_pairings(1).len(), 1);
        assert_eq!(wick_pairings(2).len(), 3);
        assert_eq!(wick_pairings(4).len(), 105);
    }

    #[test]
    fn pairings_match_permutation_filter() {
        let s = 4;
        let mut expected = BTreeSet::new();
        for sigma in perms(2 * s) {
            let pair_ok = (0..s).all(|i| sigma[2 * i] < sigma[2 * i + 1]);
            let first_ok = (1..s).all(|i| sigma[2 * (i - 1)] < sigma[2 * i]);
            if pair_ok && first_ok {
                expected.insert((0..s).map(|i| (sigma[2 * i], sigma[2 * i + 1])).collect::<Vec<_>>());
            }
        }
        let got: Vec<Vec<(usize, usize)>> = wick_pairings(s).into_iter().map(|p| p.pairs).collect();
        assert_eq!(got.len(), expected.len());
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), expected);
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(sorted, got);
    }

    #[test]
    fn simple_products() {
        let pi = PolyVector::basis(2, &[0, 1]).unwrap();
        let p = |s: &str| Polynomial::parse(s, 2).unwrap();
        let s = moyal_via_wick(&pi, &p("x1"), &p("x2"), 2).unwrap();
        assert_eq!(s.coeffs(), &[p("x1 x2"), p("1"), p("0")]);
        let s = moyal_via_wick(&pi, &p("x1^2"), &p("x2^2"), 2).unwrap();
        assert_eq!(s.coeffs(), &[p("x1^2 x2^2"), p("4 x1 x2"), p("2")]);
        let s = moyal_via_wick(&pi, &p("3"), &p("x1^2 x2"), 2).unwrap();
        assert_eq!(s.coeffs(), &[p("3 x1^2 x2"), p("0"), p("0")]);
    }
}
