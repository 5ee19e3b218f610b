//! Derivations and cohomology of free commutative differential graded
//! algebras over a field.
//!
//! A derivation of degree +1 is fixed by its values on generators and
//! extended by the graded Leibniz rule. Because of that, `d∘d` vanishes on
//! the whole algebra as soon as it vanishes on every generator (`d²` is
//! itself a derivation, of even degree), so [`Derivation::check_d_squared`]
//! only looks at generators.
//!
//! Cohomology is computed one degree at a time from the matrices of
//! `d: Cⁿ⁻¹ → Cⁿ` and `d: Cⁿ → Cⁿ⁺¹` in the [`AlgebraSpec::degree_basis`]
//! orderings.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{AlgebraSpec, Element, Monomial};
use crate::error::{Error, Result};
use crate::linalg::{kernel_and_rank, rref_basis, Echelon, SparseMatrix, SparseVec};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation<F> {
    algebra: Arc<AlgebraSpec>,
    images: Vec<Element<F>>,
}

/// Outcome of checking `d∘d = 0` on generators.
#[derive(Debug, Clone, PartialEq)]
pub enum DSquaredCheck<F> {
    Ok,
    Counterexample {
        generator: String,
        value: Element<F>,
    },
}

impl<F> DSquaredCheck<F> {
    pub fn is_ok(&self) -> bool {
        matches!(self, Self::Ok)
    }
}

impl<F: Field> Derivation<F> {
    /// Generators not listed map to zero. Each listed image must be zero or
    /// homogeneous of degree one more than its generator.
    pub fn new(algebra: &Arc<AlgebraSpec>, images: &[(&str, Element<F>)]) -> Result<Self> {
        let mut all = vec![Element::zero(algebra); algebra.len()];
        for (name, image) in images {
            let g = algebra.generator(name)?;
            if !(Arc::ptr_eq(image.algebra(), algebra) || **image.algebra() == **algebra) {
                return Err(Error::AlgebraMismatch);
            }
            if !image.is_zero() {
                let found = image.degree().ok_or(Error::NotHomogeneous)?;
                if found != g.degree + 1 {
                    return Err(Error::WrongImageDegree {
                        generator: g.name.clone(),
                        expected: g.degree + 1,
                        found,
                    });
                }
            }
            all[g.index] = image.clone();
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            images: all,
        })
    }

    /// Like [`Derivation::new`] with images written as expressions.
    pub fn parse(algebra: &Arc<AlgebraSpec>, images: &[(&str, &str)]) -> Result<Self> {
        let parsed: Vec<(&str, Element<F>)> = images
            .iter()
            .map(|(name, text)| Ok((*name, Element::parse(algebra, text)?)))
            .collect::<Result<_>>()?;
        Self::new(algebra, &parsed)
    }

    pub fn zero(algebra: &Arc<AlgebraSpec>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            images: vec![Element::zero(algebra); algebra.len()],
        }
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn image(&self, generator: usize) -> &Element<F> {
        &self.images[generator]
    }

    /// Leibniz rule on one monomial `g₁^e₁ ⋯ g_k^e_k`.
    pub fn apply_monomial(&self, m: &Monomial) -> Element<F> {
        let alg = &self.algebra;
        let mut out = Element::zero(alg);
        let factors = m.factors();
        let mut left_degree = 0u32;
        for (pos, &(g, e)) in factors.iter().enumerate() {
            let dg = &self.images[g];
            if !dg.is_zero() {
                let prefix = alg
                    .monomial(&factors[..pos])
                    .expect("sub-monomial of a normal form");
                let power = alg
                    .monomial(&[(g, e - 1)])
                    .expect("sub-monomial of a normal form");
                let suffix = alg
                    .monomial(&factors[pos + 1..])
                    .expect("sub-monomial of a normal form");
                let mut sign = F::from_int(i64::from(e));
                if left_degree % 2 == 1 {
                    sign = -sign;
                }
                let term = Element::from_monomial(alg, prefix, sign)
                    .try_mul(&Element::from_monomial(alg, power, F::one()))
                    .and_then(|t| t.try_mul(dg))
                    .and_then(|t| t.try_mul(&Element::from_monomial(alg, suffix, F::one())))
                    .expect("same algebra");
                out = out.try_add(&term).expect("same algebra");
            }
            left_degree += e * alg.generators()[g].degree;
        }
        out
    }

    pub fn apply(&self, e: &Element<F>) -> Result<Element<F>> {
        if !(Arc::ptr_eq(e.algebra(), &self.algebra) || **e.algebra() == *self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = Element::zero(&self.algebra);
        for (m, c) in e.terms() {
            out = out.try_add(&self.apply_monomial(m).scaled(c))?;
        }
        Ok(out)
    }

    /// Applies `d` twice to each generator. `max_degree` must cover the
    /// largest generator degree plus two.
    pub fn check_d_squared(&self, max_degree: u32) -> Result<DSquaredCheck<F>> {
        let top = self
            .algebra
            .generators()
            .iter()
            .map(|g| g.degree)
            .max()
            .unwrap_or(0);
        if max_degree < top + 2 {
            return Err(Error::InvalidArgument(format!(
                "max degree {max_degree} is below largest generator degree {top} + 2"
            )));
        }
        for (g, image) in self.algebra.generators().iter().zip(&self.images) {
            let value = self.apply(image)?;
            if !value.is_zero() {
                return Ok(DSquaredCheck::Counterexample {
                    generator: g.name.clone(),
                    value,
                });
            }
        }
        Ok(DSquaredCheck::Ok)
    }
}

/// Cohomology of one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyReport<F> {
    pub degree: u32,
    pub betti: usize,
    /// Cocycles whose classes form a basis of `Hⁿ`, reduced against the
    /// coboundaries.
    pub representatives: Vec<Element<F>>,
    pub cochain_dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
}

/// Coordinates for the degree-`n` cochains.
#[derive(Debug, Clone)]
pub(crate) struct DegreeSpace {
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSpace {
    pub fn new(algebra: &AlgebraSpec, n: u32) -> Self {
        let basis = algebra.degree_basis(n);
        let index = AlgebraSpec::basis_index(&basis);
        Self { basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_vector<F: Field>(&self, e: &Element<F>) -> SparseVec<F> {
        SparseVec::from_entries(e.terms().map(|(m, c)| {
            let i = *self.index.get(m).expect("element lies in this degree");
            (i, c.clone())
        }))
    }

    pub fn to_element<F: Field>(&self, algebra: &Arc<AlgebraSpec>, v: &SparseVec<F>) -> Element<F> {
        Element::from_terms(
            algebra,
            v.entries()
                .iter()
                .map(|(i, c)| (self.basis[*i].clone(), c.clone())),
        )
    }
}

/// A free graded-commutative algebra with a differential squaring to zero.
///
/// The models in [`crate::models`] are of this kind; nothing here assumes
/// minimality.
#[derive(Debug, Clone, PartialEq)]
pub struct DgaModel<F> {
    differential: Derivation<F>,
}

impl<F: Field> DgaModel<F> {
    pub fn new(differential: Derivation<F>) -> Result<Self> {
        let top = differential
            .algebra()
            .generators()
            .iter()
            .map(|g| g.degree)
            .max()
            .unwrap_or(0);
        if let DSquaredCheck::Counterexample { generator, value } =
            differential.check_d_squared(top + 2)?
        {
            return Err(Error::DSquaredNonzero {
                generator,
                value: value.to_string(),
            });
        }
        Ok(Self { differential })
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.differential.algebra()
    }

    pub fn differential(&self) -> &Derivation<F> {
        &self.differential
    }

    pub fn d(&self, e: &Element<F>) -> Result<Element<F>> {
        self.differential.apply(e)
    }

    /// Matrix of `d: Cⁿ → Cⁿ⁺¹` in the degree-basis coordinates.
    pub(crate) fn differential_matrix(
        &self,
        source: &DegreeSpace,
        target: &DegreeSpace,
    ) -> SparseMatrix<F> {
        let columns = source
            .basis
            .iter()
            .map(|m| target.to_vector(&self.differential.apply_monomial(m)))
            .collect();
        SparseMatrix::from_columns(target.dim(), columns)
    }

    /// Echelon basis of the coboundaries `d(Cⁿ⁻¹) ⊂ Cⁿ`, each row tagged by
    /// its preimage in `Cⁿ⁻¹` coordinates.
    pub(crate) fn coboundaries(
        &self,
        n: u32,
        here: &DegreeSpace,
    ) -> (Option<DegreeSpace>, Echelon<F>) {
        let mut ech = Echelon::new();
        if n == 0 {
            return (None, ech);
        }
        let below = DegreeSpace::new(self.algebra(), n - 1);
        let d = self.differential_matrix(&below, here);
        for (j, col) in d.columns().iter().enumerate() {
            ech.insert_tagged(col.clone(), SparseVec::unit(j));
        }
        (Some(below), ech)
    }

    pub fn cochain_dim(&self, n: u32) -> usize {
        self.algebra().degree_basis(n).len()
    }

    pub fn cohomology_in_degree(&self, n: u32) -> CohomologyReport<F> {
        let alg = self.algebra();
        let here = DegreeSpace::new(alg, n);
        let above = DegreeSpace::new(alg, n + 1);
        let (_, boundaries) = self.coboundaries(n, &here);

        let d_out = self.differential_matrix(&here, &above);
        let (_, kernel) = kernel_and_rank(d_out.columns());
        let cocycles = rref_basis(kernel);
        let boundary_pivots = boundaries.pivots();

        // Reduced cocycle rows whose pivot is not a coboundary pivot span a
        // complement of the coboundaries; they are already reduced against
        // every pivot of the cocycle space.
        let representatives: Vec<Element<F>> = cocycles
            .iter()
            .filter(|v| {
                let (p, _) = v.leading().expect("nonzero basis vector");
                !boundary_pivots.contains(&p)
            })
            .map(|v| here.to_element(alg, v))
            .collect();

        debug_assert_eq!(representatives.len() + boundaries.rank(), cocycles.len());
        CohomologyReport {
            degree: n,
            betti: representatives.len(),
            representatives,
            cochain_dim: here.dim(),
            cocycle_dim: cocycles.len(),
            coboundary_dim: boundaries.rank(),
        }
    }

    /// `(degree, betti)` for degrees `0..=max_degree`. Degrees are computed
    /// independently and in parallel; the result is in degree order.
    pub fn betti_table(&self, max_degree: u32) -> Vec<(u32, u64)> {
        (0..=max_degree)
            .into_par_iter()
            .map(|n| (n, self.cohomology_in_degree(n).betti as u64))
            .collect()
    }

    fn check_element(&self, z: &Element<F>) -> Result<()> {
        if !(Arc::ptr_eq(z.algebra(), self.algebra()) || **z.algebra() == **self.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if !z.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(())
    }

    /// For a closed homogeneous `z`, returns `Some(w)` with `d(w) = z` if
    /// `z` is a coboundary and `None` otherwise.
    pub fn is_coboundary(&self, z: &Element<F>) -> Result<Option<Element<F>>> {
        self.check_element(z)?;
        if !self.d(z)?.is_zero() {
            return Err(Error::NotClosed(z.to_string()));
        }
        let Some(n) = z.degree() else {
            return Ok(Some(Element::zero(self.algebra())));
        };
        let here = DegreeSpace::new(self.algebra(), n);
        let (below, boundaries) = self.coboundaries(n, &here);
        let (residue, preimage) = boundaries.reduce_tracked(&here.to_vector(z));
        if !residue.is_zero() {
            return Ok(None);
        }
        let below = below.expect("a nonzero coboundary has positive degree");
        Ok(Some(below.to_element(self.algebra(), &preimage)))
    }

    /// The same model with generators listed in `order` (all names, each
    /// once). Betti numbers do not depend on the order.
    pub fn with_generator_order(&self, order: &[&str]) -> Result<Self> {
        let alg = self.algebra();
        if order.len() != alg.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} generator names, got {}",
                alg.len(),
                order.len()
            )));
        }
        let specs: Vec<(&str, i64)> = order
            .iter()
            .map(|name| Ok((*name, i64::from(alg.generator(name)?.degree))))
            .collect::<Result<_>>()?;
        let target = AlgebraSpec::new(&specs)?;
        let images: Vec<(&str, Element<F>)> = alg
            .generators()
            .iter()
            .map(|g| {
                Ok((
                    g.name.as_str(),
                    self.differential.image(g.index).transport(&target)?,
                ))
            })
            .collect::<Result<_>>()?;
        Self::new(Derivation::new(&target, &images)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type E = Element<Rational>;

    fn mr2() -> DgaModel<Rational> {
        let a = AlgebraSpec::new(&[("b2", 2), ("v5", 5), ("v7", 7)]).unwrap();
        DgaModel::new(Derivation::parse(&a, &[("v5", "-b2^3"), ("v7", "1/4 b2^4")]).unwrap())
            .unwrap()
    }

    #[test]
    fn make_derivation_validates_degrees() {
        let a = AlgebraSpec::new(&[("b2", 2), ("v5", 5), ("v7", 7)]).unwrap();
        assert!(Derivation::<Rational>::parse(&a, &[("v5", "-b2^3"), ("v7", "1/4 b2^4")]).is_ok());
        assert!(Derivation::<Rational>::new(&a, &[]).is_ok());
        assert_eq!(
            Derivation::<Rational>::parse(&a, &[("v5", "b2^2")]),
            Err(Error::WrongImageDegree {
                generator: "v5".into(),
                expected: 6,
                found: 4
            })
        );
        assert_eq!(
            Derivation::<Rational>::parse(&a, &[("v5", "b2^3 + b2")]),
            Err(Error::NotHomogeneous)
        );
    }

    #[test]
    fn leibniz_examples() {
        let model = mr2();
        let a = model.algebra();
        for i in 0..4 {
            assert!(model
                .d(&E::parse(a, "b2").unwrap().pow(i))
                .unwrap()
                .is_zero());
        }
        assert_eq!(
            model.d(&E::parse(a, "b2 v5").unwrap()).unwrap(),
            E::parse(a, "-b2^4").unwrap()
        );
        assert_eq!(
            model.d(&E::parse(a, "v5 v7").unwrap()).unwrap(),
            E::parse(a, "-b2^3 v7 - 1/4 b2^4 v5").unwrap()
        );
    }

    #[test]
    fn d_squared_counterexample() {
        let a = AlgebraSpec::new(&[("x2", 2), ("y3", 3)]).unwrap();
        let d = Derivation::<Rational>::parse(&a, &[("x2", "y3"), ("y3", "x2^2")]).unwrap();
        assert_eq!(
            d.check_d_squared(5).unwrap(),
            DSquaredCheck::Counterexample {
                generator: "x2".into(),
                value: E::parse(&a, "x2^2").unwrap()
            }
        );
        assert!(d.check_d_squared(4).is_err());
        assert!(matches!(
            DgaModel::new(d),
            Err(Error::DSquaredNonzero { .. })
        ));
    }

    #[test]
    fn mr2_degree_seven_class() {
        let model = mr2();
        let report = model.cohomology_in_degree(7);
        assert_eq!(report.betti, 1);
        assert_eq!(
            report.representatives,
            vec![E::parse(model.algebra(), "b2 v5 + 4 v7").unwrap()]
        );
        assert_eq!(model.cohomology_in_degree(5).betti, 0);
        let zero = model.cohomology_in_degree(0);
        assert_eq!(zero.betti, 1);
        assert_eq!(zero.representatives, vec![E::one(model.algebra())]);
    }

    #[test]
    fn mr2_table_and_zero_differential() {
        let model = mr2();
        let dims: Vec<u64> = model.betti_table(12).into_iter().map(|(_, b)| b).collect();
        assert_eq!(dims, [1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0]);

        let flat = DgaModel::new(Derivation::<Rational>::zero(model.algebra())).unwrap();
        let dims: Vec<u64> = flat.betti_table(7).into_iter().map(|(_, b)| b).collect();
        assert_eq!(dims, [1, 0, 1, 0, 1, 1, 1, 2]);
    }

    #[test]
    fn coboundary_witnesses() {
        let model = mr2();
        let a = model.algebra();
        let w = model.is_coboundary(&E::parse(a, "b2^3").unwrap()).unwrap();
        assert_eq!(w, Some(E::parse(a, "-v5").unwrap()));
        assert_eq!(
            model.is_coboundary(&E::parse(a, "b2^2").unwrap()).unwrap(),
            None
        );
        assert_eq!(model.is_coboundary(&E::zero(a)).unwrap(), Some(E::zero(a)));
        assert!(matches!(
            model.is_coboundary(&E::parse(a, "v5").unwrap()),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn reordering_keeps_betti_numbers() {
        let model = mr2();
        let shuffled = model.with_generator_order(&["v7", "b2", "v5"]).unwrap();
        assert_eq!(model.betti_table(20), shuffled.betti_table(20));
    }

    #[test]
    fn works_over_small_rationals() {
        let a = AlgebraSpec::new(&[("b2", 2), ("v5", 5), ("v7", 7)]).unwrap();
        let d = Derivation::<num_rational::Ratio<i64>>::parse(
            &a,
            &[("v5", "-b2^3"), ("v7", "1/4 b2^4")],
        )
        .unwrap();
        let model = DgaModel::new(d).unwrap();
        assert_eq!(model.betti_table(12), mr2().betti_table(12));
    }
}
