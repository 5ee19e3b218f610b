//! Checking a ring presentation of the cohomology of a [`DgaModel`].
//!
//! A presentation names generator classes by cocycle representatives and
//! lists relations as elements of the free graded-commutative algebra on
//! the named classes. [`verify_ring_presentation`] checks, degree by degree,
//! that evaluation on representatives induces an isomorphism
//! `free / (relations) → H*`:
//!
//! - (a) products of representatives span `Hⁿ`;
//! - (b) every relation evaluates to a coboundary;
//! - (c) the quotient of the free algebra by the ideal of relations has the
//!   same dimension as `Hⁿ`.
//!
//! When (b) fails for the given representatives, generators are adjusted by
//! rescaling and adding decomposable cocycles, one generator at a time, by
//! solving a linear system. The report records the representatives that were
//! finally used.

use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Element, Monomial};
use crate::cohomology::{DegreeSpace, DgaModel};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct RingPresentation<F> {
    /// Free graded-commutative algebra on the named classes.
    algebra: Arc<AlgebraSpec>,
    /// Cocycles in the model, one per named class.
    representatives: Vec<Element<F>>,
    relations: Vec<Element<F>>,
    relation_text: Vec<String>,
}

impl<F: Field> RingPresentation<F> {
    /// `classes` are `(name, representative)` pairs; class degrees are the
    /// representatives' degrees. Relations are parsed in the free algebra on
    /// the class names and must be homogeneous.
    pub fn new(
        model: &DgaModel<F>,
        classes: &[(&str, Element<F>)],
        relations_text: &[&str],
    ) -> Result<Self> {
        let mut specs = Vec::with_capacity(classes.len());
        for (name, rep) in classes {
            if !(Arc::ptr_eq(rep.algebra(), model.algebra())
                || **rep.algebra() == **model.algebra())
            {
                return Err(Error::AlgebraMismatch);
            }
            let degree = rep.degree().ok_or_else(|| {
                if rep.is_zero() {
                    Error::InvalidArgument(format!("representative of `{name}` is zero"))
                } else {
                    Error::NotHomogeneous
                }
            })?;
            specs.push((*name, i64::from(degree)));
        }
        let algebra = AlgebraSpec::new(&specs)?;
        let relations = relations_text
            .iter()
            .map(|text| {
                let r = Element::parse(&algebra, text)?;
                if r.is_homogeneous() {
                    Ok(r)
                } else {
                    Err(Error::NotHomogeneous)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            algebra,
            representatives: classes.iter().map(|(_, r)| r.clone()).collect(),
            relations,
            relation_text: relations_text
                .iter()
                .map(|t| t.trim().to_string())
                .collect(),
        })
    }

    /// Representatives written as expressions in the model's generators.
    pub fn parse(
        model: &DgaModel<F>,
        classes: &[(&str, &str)],
        relations: &[&str],
    ) -> Result<Self> {
        let parsed: Vec<(&str, Element<F>)> = classes
            .iter()
            .map(|(n, t)| Ok((*n, Element::parse(model.algebra(), t)?)))
            .collect::<Result<_>>()?;
        Self::new(model, &parsed, relations)
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn representatives(&self) -> &[Element<F>] {
        &self.representatives
    }

    pub fn relations(&self) -> &[Element<F>] {
        &self.relations
    }

    /// Relations as they were written.
    pub fn relation_text(&self) -> &[String] {
        &self.relation_text
    }
}

/// Image of a free-algebra element under `class ↦ representative`.
fn evaluate<F: Field>(
    target: &Arc<AlgebraSpec>,
    e: &Element<F>,
    reps: &[Element<F>],
) -> Element<F> {
    let mut out = Element::zero(target);
    for (m, c) in e.terms() {
        out = &out + &evaluate_monomial(target, m, reps).scaled(c);
    }
    out
}

fn evaluate_monomial<F: Field>(
    target: &Arc<AlgebraSpec>,
    m: &Monomial,
    reps: &[Element<F>],
) -> Element<F> {
    m.factors()
        .iter()
        .fold(Element::one(target), |acc, &(i, e)| &acc * &reps[i].pow(e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: u32,
    pub betti: usize,
    /// Dimension of the span of evaluated products in `Hⁿ`.
    pub image_rank: usize,
    /// Dimension of the degree-`n` part of `free / (relations)`.
    pub quotient_dim: usize,
}

impl DegreeCheck {
    pub fn surjective(&self) -> bool {
        self.image_rank == self.betti
    }

    pub fn dimension_matches(&self) -> bool {
        self.quotient_dim == self.betti
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck<F> {
    pub relation: String,
    pub degree: Option<u32>,
    /// `Some(w)` with `d(w)` equal to the evaluated relation.
    pub witness: Option<Element<F>>,
}

impl<F> RelationCheck<F> {
    pub fn is_coboundary(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingReport<F> {
    pub max_degree: u32,
    pub degrees: Vec<DegreeCheck>,
    pub relations: Vec<RelationCheck<F>>,
    /// Representatives actually used, by class name.
    pub representatives: Vec<(String, Element<F>)>,
    /// One line per representative that was changed from the input.
    pub adjustments: Vec<String>,
}

impl<F: Field> RingReport<F> {
    pub fn surjectivity_holds(&self) -> bool {
        self.degrees.iter().all(DegreeCheck::surjective)
    }

    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(RelationCheck::is_coboundary)
    }

    pub fn dimensions_match(&self) -> bool {
        self.degrees.iter().all(DegreeCheck::dimension_matches)
    }

    pub fn passed(&self) -> bool {
        self.surjectivity_holds() && self.relations_hold() && self.dimensions_match()
    }

    pub fn was_adjusted(&self) -> bool {
        !self.adjustments.is_empty()
    }
}

/// Residues modulo coboundaries, per degree.
struct Quotients<'a, F> {
    model: &'a DgaModel<F>,
    cache: std::collections::BTreeMap<u32, (DegreeSpace, Echelon<F>)>,
}

impl<'a, F: Field> Quotients<'a, F> {
    fn new(model: &'a DgaModel<F>) -> Self {
        Self {
            model,
            cache: Default::default(),
        }
    }

    fn entry(&mut self, n: u32) -> &(DegreeSpace, Echelon<F>) {
        let model = self.model;
        self.cache.entry(n).or_insert_with(|| {
            let space = DegreeSpace::new(model.algebra(), n);
            let (_, ech) = model.coboundaries(n, &space);
            (space, ech)
        })
    }

    fn residue(&mut self, e: &Element<F>, n: u32) -> SparseVec<F> {
        if e.is_zero() {
            return SparseVec::zero();
        }
        let (space, ech) = self.entry(n);
        ech.reduce(&space.to_vector(e))
    }
}

pub fn verify_ring_presentation<F: Field>(
    model: &DgaModel<F>,
    presentation: &RingPresentation<F>,
    max_degree: u32,
) -> Result<RingReport<F>> {
    let target = model.algebra();
    for (g, rep) in presentation
        .algebra
        .generators()
        .iter()
        .zip(&presentation.representatives)
    {
        if !model.d(rep)?.is_zero() {
            return Err(Error::NotClosed(format!("{} = {rep}", g.name)));
        }
    }

    let mut quotients = Quotients::new(model);
    let mut reps = presentation.representatives.clone();
    let mut adjustments = Vec::new();

    if !relations_ok(&mut quotients, presentation, &reps) {
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(presentation.algebra.generators()[i].degree));
        for g in order {
            if relations_ok(&mut quotients, presentation, &reps) {
                break;
            }
            if let Some((new_rep, note)) = adjust_generator(&mut quotients, presentation, &reps, g)
            {
                reps[g] = new_rep;
                adjustments.push(note);
            }
        }
    }

    let relations = presentation
        .relations
        .iter()
        .zip(&presentation.relation_text)
        .map(|(r, text)| {
            let value = evaluate(target, r, &reps);
            Ok(RelationCheck {
                relation: text.clone(),
                degree: r.degree(),
                witness: model.is_coboundary(&value)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let degrees = (0..=max_degree)
        .map(|n| degree_check(model, &mut quotients, presentation, &reps, n))
        .collect();

    let representatives = presentation
        .algebra
        .generators()
        .iter()
        .map(|g| g.name.clone())
        .zip(reps)
        .collect();

    Ok(RingReport {
        max_degree,
        degrees,
        relations,
        representatives,
        adjustments,
    })
}

fn relations_ok<F: Field>(
    q: &mut Quotients<'_, F>,
    pres: &RingPresentation<F>,
    reps: &[Element<F>],
) -> bool {
    pres.relations.iter().all(|r| match r.degree() {
        None => true,
        Some(n) => q
            .residue(&evaluate(q.model.algebra(), r, reps), n)
            .is_zero(),
    })
}

fn degree_check<F: Field>(
    model: &DgaModel<F>,
    q: &mut Quotients<'_, F>,
    pres: &RingPresentation<F>,
    reps: &[Element<F>],
    n: u32,
) -> DegreeCheck {
    let betti = model.cohomology_in_degree(n).betti;
    let free_basis = pres.algebra.degree_basis(n);

    let mut image = Echelon::new();
    for m in &free_basis {
        let value = evaluate_monomial(model.algebra(), m, reps);
        image.insert(q.residue(&value, n));
    }

    let space = DegreeSpace::new(&pres.algebra, n);
    let mut ideal = Echelon::new();
    for r in &pres.relations {
        let Some(rd) = r.degree() else { continue };
        if rd > n {
            continue;
        }
        for m in pres.algebra.degree_basis(n - rd) {
            let prod = &Element::from_monomial(&pres.algebra, m, F::one()) * r;
            ideal.insert(space.to_vector(&prod));
        }
    }

    DegreeCheck {
        degree: n,
        betti,
        image_rank: image.rank(),
        quotient_dim: free_basis.len() - ideal.rank(),
    }
}

/// Tries to make every relation containing generator `g` a coboundary by
/// replacing its representative with `s·r + Σ cⱼ Dⱼ`, `s ≠ 0`, `Dⱼ` the
/// decomposable products of the other representatives in the same degree.
/// Only generators that occur linearly in every relation are handled.
fn adjust_generator<F: Field>(
    q: &mut Quotients<'_, F>,
    pres: &RingPresentation<F>,
    reps: &[Element<F>],
    g: usize,
) -> Option<(Element<F>, String)> {
    let target = Arc::clone(q.model.algebra());
    let free = &pres.algebra;
    let involved: Vec<&Element<F>> = pres
        .relations
        .iter()
        .filter(|r| r.terms().any(|(m, _)| m.exponent(g) > 0))
        .collect();
    if involved.is_empty()
        || involved
            .iter()
            .any(|r| r.terms().any(|(m, _)| m.exponent(g) > 1))
    {
        return None;
    }

    let degree = free.generators()[g].degree;
    let decomposables: Vec<Element<F>> = free
        .degree_basis(degree)
        .into_iter()
        .filter(|m| m.length() >= 2)
        .map(|m| evaluate_monomial(&target, &m, reps))
        .filter(|e| !e.is_zero())
        .collect();

    // Unknowns: s, then one coefficient per decomposable.
    let mut columns: Vec<Vec<(usize, F)>> = vec![Vec::new(); 1 + decomposables.len()];
    let mut rhs: Vec<(usize, F)> = Vec::new();
    let mut offset = 0usize;
    for r in &involved {
        let n = r
            .degree()
            .expect("relation containing a generator is nonzero");
        let constant = Element::from_terms(
            free,
            r.terms()
                .filter(|(m, _)| m.exponent(g) == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        let linear = Element::from_terms(
            free,
            r.terms()
                .filter(|(m, _)| m.exponent(g) == 1)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        let mut substituted = reps.to_vec();
        let with = |x: &Element<F>, subs: &mut Vec<Element<F>>| {
            subs[g] = x.clone();
            evaluate(&target, &linear, subs)
        };
        let dim = q.entry(n).0.dim();
        for (i, v) in q.residue(&evaluate(&target, &constant, reps), n).entries() {
            rhs.push((offset + i, -v.clone()));
        }
        let base = with(&reps[g], &mut substituted);
        for (i, v) in q.residue(&base, n).entries() {
            columns[0].push((offset + i, v.clone()));
        }
        for (j, dj) in decomposables.iter().enumerate() {
            let value = with(dj, &mut substituted);
            for (i, v) in q.residue(&value, n).entries() {
                columns[1 + j].push((offset + i, v.clone()));
            }
        }
        offset += dim;
    }

    let rhs = SparseVec::from_entries(rhs);
    let cols: Vec<SparseVec<F>> = columns.into_iter().map(SparseVec::from_entries).collect();

    // Prefer s = 1: move the s column to the right-hand side.
    let tail = SparseMatrix::from_columns(offset, cols[1..].to_vec());
    let shifted = rhs.add_scaled(&-F::one(), &cols[0]);
    let solution = match tail.solve(&shifted) {
        Some(c) => {
            let mut x = vec![(0usize, F::one())];
            x.extend(c.entries().iter().map(|(j, v)| (j + 1, v.clone())));
            SparseVec::from_entries(x)
        }
        None => {
            let full = SparseMatrix::from_columns(offset, cols);
            let (particular, kernel) = full.solve_affine(&rhs)?;
            if !particular.get(0).is_zero() {
                particular
            } else {
                let k = kernel.into_iter().find(|k| !k.get(0).is_zero())?;
                particular.add_scaled(&F::one(), &k)
            }
        }
    };

    let mut new_rep = reps[g].scaled(&solution.get(0));
    for (j, dj) in decomposables.iter().enumerate() {
        new_rep = &new_rep + &dj.scaled(&solution.get(j + 1));
    }
    if new_rep == reps[g] {
        return None;
    }
    let name = &free.generators()[g].name;
    let note = format!("{name}: {} replaced by {new_rep}", reps[g]);
    Some((new_rep, note))
}

/// First cohomology representative in degree `n` whose class is not in the
/// span of `decomposables`.
pub fn indecomposable_class<F: Field>(
    model: &DgaModel<F>,
    n: u32,
    decomposables: &[Element<F>],
) -> Option<Element<F>> {
    let mut q = Quotients::new(model);
    let mut span = Echelon::new();
    for d in decomposables {
        span.insert(q.residue(d, n));
    }
    model
        .cohomology_in_degree(n)
        .representatives
        .into_iter()
        .find(|rep| !span.contains(&q.residue(rep, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::moller_raussen;
    use crate::Rational;

    #[test]
    fn cp2_presentation_holds() {
        let model = moller_raussen::<Rational>(2).unwrap();
        let pres = RingPresentation::parse(
            &model,
            &[("b2", "b2"), ("c7", "b2 v5 + 4 v7")],
            &["b2^3", "c7^2"],
        )
        .unwrap();
        let report = verify_ring_presentation(&model, &pres, 22).unwrap();
        assert!(report.passed(), "{report:#?}");
        assert!(!report.was_adjusted());
    }

    #[test]
    fn wrong_relation_fails_coboundary_check() {
        let model = moller_raussen::<Rational>(2).unwrap();
        let pres =
            RingPresentation::parse(&model, &[("b2", "b2"), ("c7", "b2 v5 + 4 v7")], &["b2^2"])
                .unwrap();
        let report = verify_ring_presentation(&model, &pres, 22).unwrap();
        assert!(!report.relations_hold());
        assert!(!report.passed());
    }

    #[test]
    fn open_representative_is_rejected() {
        let model = moller_raussen::<Rational>(2).unwrap();
        let pres = RingPresentation::parse(&model, &[("b2", "b2"), ("c5", "v5")], &[]).unwrap();
        assert!(matches!(
            verify_ring_presentation(&model, &pres, 10),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn missing_generator_breaks_surjectivity() {
        let model = moller_raussen::<Rational>(2).unwrap();
        let pres = RingPresentation::parse(&model, &[("b2", "b2")], &["b2^3"]).unwrap();
        let report = verify_ring_presentation(&model, &pres, 12).unwrap();
        assert!(report.relations_hold());
        assert!(!report.surjectivity_holds());
        assert!(!report.degrees[7].surjective());
    }
}
