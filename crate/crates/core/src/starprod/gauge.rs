use super::StarSeries;
use crate::error::{Error, Result};
use crate::operators::MultiDiffOp;
use crate::polyalg::{FormalSeries, Polynomial};

/// `D = id + Σ_{i≥1} h^i D_i` with each `D_i` a differential operator
/// killing constants.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeOperator {
    maps: FormalSeries<MultiDiffOp>,
}

impl GaugeOperator {
    pub fn new(maps: FormalSeries<MultiDiffOp>) -> Result<Self> {
        let dim = maps[0].dim();
        if maps[0] != MultiDiffOp::identity(dim) {
            return Err(Error::Unsupported("the order-0 gauge map must be the identity".into()));
        }
        for d in maps.iter().skip(1) {
            if d.arity() != 1 {
                return Err(Error::ArityMismatch {
                    expected: 1,
                    found: d.arity(),
                });
            }
            if d.dim() != dim {
                return Err(Error::DimensionMismatch(dim, d.dim()));
            }
            if d.terms().any(|(ks, _)| ks[0].iter().all(|&e| e == 0)) {
                return Err(Error::Unsupported("gauge maps must vanish on constants".into()));
            }
        }
        Ok(GaugeOperator { maps })
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        GaugeOperator {
            maps: FormalSeries::from_fn(order, |k| {
                if k == 0 {
                    MultiDiffOp::identity(dim)
                } else {
                    MultiDiffOp::zero(dim, 1)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn order(&self) -> usize {
        self.maps.order()
    }

    /// `D_k`, zero beyond the stored order.
    pub fn map(&self, k: usize) -> MultiDiffOp {
        self.maps
            .coeff(k)
            .cloned()
            .unwrap_or_else(|| MultiDiffOp::zero(self.dim(), 1))
    }

    pub fn maps(&self) -> &FormalSeries<MultiDiffOp> {
        &self.maps
    }

    /// The formal inverse `E` with `E_0 = id`,
    /// `E_k = −Σ_{i=1..k} D_i ∘ E_{k−i}`, to the same order.
    pub fn inverse(&self) -> Result<GaugeOperator> {
        let n = self.order();
        let mut es: Vec<MultiDiffOp> = vec![MultiDiffOp::identity(self.dim())];
        for k in 1..=n {
            let mut acc = MultiDiffOp::zero(self.dim(), 1);
            for i in 1..=k {
                acc = acc.try_sub(&self.maps[i].then_after(&es[k - i])?)?;
            }
            es.push(acc);
        }
        Ok(GaugeOperator {
            maps: FormalSeries::new(es),
        })
    }

    pub fn apply(&self, f: &Polynomial) -> Result<FormalSeries<Polynomial>> {
        Ok(FormalSeries::new(
            self.maps
                .iter()
                .map(|d| d.apply(std::slice::from_ref(f)))
                .collect::<Result<_>>()?,
        ))
    }
}

/// `f ⋆' g = D⁻¹(Df ⋆ Dg)` to `order`:
/// `B'_k = Σ_{a+b+c+e=k} E_a ∘ (B_b(D_c ·, D_e ·))`.
pub fn gauge_transform(star: &StarSeries, d: &GaugeOperator, order: usize) -> Result<StarSeries> {
    if d.dim() != star.dim() {
        return Err(Error::DimensionMismatch(star.dim(), d.dim()));
    }
    if order > star.order() {
        return Err(Error::Unsupported(format!(
            "series is known to order {}, asked for {order}",
            star.order()
        )));
    }
    let dim = star.dim();
    let e = d.inverse()?;
    let emap = |k: usize| e.map(k);
    // inner[k] = Σ_{b+c+e=k} B_b(D_c ·, D_e ·)
    let mut inner = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = MultiDiffOp::zero(dim, 2);
        for b in 0..=k {
            for c in 0..=k - b {
                let ee = k - b - c;
                let t = star.op(b).insert(0, &d.map(c))?.insert(1, &d.map(ee))?;
                acc = acc.try_add(&t)?;
            }
        }
        inner.push(acc);
    }
    let mut ops = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = MultiDiffOp::zero(dim, 2);
        for a in 0..=k {
            acc = acc.try_add(&emap(a).insert(0, &inner[k - a])?)?;
        }
        ops.push(acc);
    }
    StarSeries::new(FormalSeries::new(ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_constant_bivector, random_gauge_component, random_polynomial, Rng};
    use crate::starprod::{associator, moyal_series};

    #[test]
    fn identity_gauge_changes_nothing() {
        let mut rng = Rng::new(1);
        let m = moyal_series(&random_constant_bivector(&mut rng, 2), 2).unwrap();
        let out = gauge_transform(&m, &GaugeOperator::identity(2, 2), 2).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn constants_must_be_killed() {
        let bad = FormalSeries::new(vec![MultiDiffOp::identity(1), MultiDiffOp::identity(1)]);
        assert!(GaugeOperator::new(bad).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut rng = Rng::new(4);
        let d = GaugeOperator::new(FormalSeries::new(vec![
            MultiDiffOp::identity(2),
            random_gauge_component(&mut rng, 2, 1, 2),
            random_gauge_component(&mut rng, 2, 1, 2),
        ]))
        .unwrap();
        let e = d.inverse().unwrap();
        let f = random_polynomial(&mut rng, 2, 3);
        // E(D f) = f up to order 2
        let df = d.apply(&f).unwrap();
        for k in 0..=2 {
            let mut acc = Polynomial::zero(2);
            for a in 0..=k {
                acc = &acc + &e.map(a).apply(std::slice::from_ref(&df[k - a])).unwrap();
            }
            let expected = if k == 0 { f.clone() } else { Polynomial::zero(2) };
            assert_eq!(acc, expected);
        }
    }

    #[test]
    fn transformed_product_matches_definition_on_arguments() {
        let mut rng = Rng::new(8);
        let m = moyal_series(&random_constant_bivector(&mut rng, 2), 2).unwrap();
        let d = GaugeOperator::new(FormalSeries::new(vec![
            MultiDiffOp::identity(2),
            random_gauge_component(&mut rng, 2, 1, 2),
            random_gauge_component(&mut rng, 2, 1, 1),
        ]))
        .unwrap();
        let t = gauge_transform(&m, &d, 2).unwrap();
        let f = random_polynomial(&mut rng, 2, 3);
        let g = random_polynomial(&mut rng, 2, 3);
        // D⁻¹(Df ⋆ Dg) evaluated on arguments
        let prod = m.apply_series(&d.apply(&f).unwrap(), &d.apply(&g).unwrap(), 2).unwrap();
        let e = d.inverse().unwrap();
        for k in 0..=2 {
            let mut acc = Polynomial::zero(2);
            for a in 0..=k {
                acc = &acc + &e.map(a).apply(std::slice::from_ref(&prod[k - a])).unwrap();
            }
            assert_eq!(t.apply(&f, &g).unwrap()[k], acc);
        }
        assert!(t.is_strict());
        let h = random_polynomial(&mut rng, 2, 2);
        assert!(associator(&t, &f, &g, &h, 2).unwrap().iter().all(Polynomial::is_zero));
    }
}
