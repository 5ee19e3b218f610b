//! Rational models of the mapping and section spaces whose homology the
//! strata reduce to.
//!
//! - [`moller_raussen`] builds the free CDGA model of `Map_l(ℂPᵐ, S²ᵐ)`.
//!   The model does not depend on the degree `l` of the maps, only on
//!   `l ≠ 0`, so no `l` parameter is taken.
//! - The series functions encode the cohomology of `ΩS²ᵈ`, of the
//!   component `Ω²ᵈ₀S²ᵈ ≃_ℚ S²ᵈ⁻¹`, and of section spaces of `ℂᵈ` with `p`
//!   punctures, combined by the Künneth formula.

use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Element};
use crate::cohomology::{Derivation, DgaModel};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Truncated generating function `Σ cᵢ tⁱ`, `i ≤ max_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoincareSeries {
    coefficients: Vec<u64>,
}

impl PoincareSeries {
    /// `coefficients[i]` is the coefficient of `tⁱ`; must be nonempty.
    pub fn new(coefficients: Vec<u64>) -> Self {
        assert!(!coefficients.is_empty(), "a series keeps at least degree 0");
        Self { coefficients }
    }

    pub fn zero(max_degree: usize) -> Self {
        Self::new(vec![0; max_degree + 1])
    }

    pub fn one(max_degree: usize) -> Self {
        let mut s = Self::zero(max_degree);
        s.coefficients[0] = 1;
        s
    }

    /// `1 + tᵏ` (exterior generator of degree `k`).
    pub fn exterior(degree: usize, max_degree: usize) -> Self {
        let mut s = Self::one(max_degree);
        if degree <= max_degree {
            s.coefficients[degree] += 1;
        }
        s
    }

    /// `1/(1 − tᵏ)` (polynomial generator of degree `k ≥ 1`).
    pub fn polynomial(degree: usize, max_degree: usize) -> Self {
        assert!(degree >= 1);
        let mut s = Self::zero(max_degree);
        for i in (0..=max_degree).step_by(degree) {
            s.coefficients[i] = 1;
        }
        s
    }

    pub fn max_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.coefficients[degree]
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn truncate(&self, max_degree: usize) -> Result<Self> {
        if max_degree > self.max_degree() {
            return Err(Error::InsufficientTruncation {
                requested: max_degree,
                available: self.max_degree(),
            });
        }
        Ok(Self::new(self.coefficients[..=max_degree].to_vec()))
    }

    /// Cauchy product truncated at `max_degree`.
    pub fn product(&self, other: &Self, max_degree: usize) -> Result<Self> {
        let available = self.max_degree().min(other.max_degree());
        if available < max_degree {
            return Err(Error::InsufficientTruncation {
                requested: max_degree,
                available,
            });
        }
        let mut out = vec![0u64; max_degree + 1];
        for (i, &a) in self.coefficients[..=max_degree].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients[..=max_degree - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(out))
    }

    /// `(degree, coefficient)` rows.
    pub fn table(&self) -> Vec<(u32, u64)> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u32, c))
            .collect()
    }
}

/// The Møller–Raussen model of `Map_l(ℂPᵐ, S²ᵐ)`, `l ≠ 0`.
///
/// Generators `b₂, …, b_{2m−2}` (even) and `v_{2m+1}, …, v_{4m−1}` (odd),
/// named `b2`, `v5`, ... In the sums below `r` and `s` run over ordered
/// pairs with `1 ≤ r, s ≤ m−1`, i.e. over existing generators only:
///
/// ```text
/// d(b_{2i})        = 0
/// d(v_{4m−2i−1})   = Σ_{r+s=2m−i} b_{2r} b_{2s} − (Σ_{r+s=m} b_{2r} b_{2s}) · b_{2m−2i},   0 < i < m
/// d(v_{4m−1})      = ¼ (Σ_{r+s=m} b_{2r} b_{2s})²
/// ```
///
/// For `m = 2` this gives `d(v₅) = −b₂³`, `d(v₇) = b₂⁴/4`; for `m = 1` the
/// model is `Λ(v₃)` with zero differential.
pub fn moller_raussen<F: Field>(m: u32) -> Result<DgaModel<F>> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!(
            "m must be at least 1, got {m}"
        )));
    }
    let m = i64::from(m);
    let mut specs: Vec<(String, i64)> = (1..m).map(|i| (format!("b{}", 2 * i), 2 * i)).collect();
    specs.extend((m..2 * m).map(|k| (format!("v{}", 2 * k + 1), 2 * k + 1)));
    let alg = AlgebraSpec::new(&specs)?;

    let b = |i: i64| -> Element<F> {
        Element::generator(&alg, &format!("b{}", 2 * i)).expect("b generator exists")
    };
    // Σ over ordered pairs r + s = total, 1 ≤ r, s ≤ m − 1.
    let pair_sum = |total: i64| -> Element<F> {
        let mut acc = Element::zero(&alg);
        for r in 1..m {
            let s = total - r;
            if (1..m).contains(&s) {
                acc = &acc + &(&b(r) * &b(s));
            }
        }
        acc
    };

    let mut images: Vec<(String, Element<F>)> = Vec::new();
    for i in 1..m {
        let image = &pair_sum(2 * m - i) - &(&pair_sum(m) * &b(m - i));
        images.push((format!("v{}", 4 * m - 2 * i - 1), image));
    }
    let top = pair_sum(m).pow(2).scaled(&F::from_fraction(1, 4));
    images.push((format!("v{}", 4 * m - 1), top));

    let named: Vec<(&str, Element<F>)> = images
        .iter()
        .map(|(n, e)| (n.as_str(), e.clone()))
        .collect();
    DgaModel::new(Derivation::new(&alg, &named)?)
}

/// `∏_{even} 1/(1 − t^deg) · ∏_{odd} (1 + t^deg)` truncated at `max_degree`.
pub fn free_cga_series(algebra: &Arc<AlgebraSpec>, max_degree: usize) -> PoincareSeries {
    algebra
        .generators()
        .iter()
        .fold(PoincareSeries::one(max_degree), |acc, g| {
            let deg = g.degree as usize;
            let factor = if g.is_odd() {
                PoincareSeries::exterior(deg, max_degree)
            } else {
                PoincareSeries::polynomial(deg, max_degree)
            };
            acc.product(&factor, max_degree).expect("equal truncations")
        })
}

fn check_d(d: u32) -> Result<usize> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "d must be at least 1, got {d}"
        )));
    }
    Ok(2 * d as usize - 1)
}

/// `H*(ΩS²ᵈ; ℚ) = ℚ[a_{4d−2}] ⊗ Λ(a_{2d−1})`, i.e. `1/(1 − t^{2d−1})`.
pub fn loop_sphere_series(d: u32, max_degree: usize) -> Result<PoincareSeries> {
    let odd = check_d(d)?;
    PoincareSeries::exterior(odd, max_degree)
        .product(&PoincareSeries::polynomial(2 * odd, max_degree), max_degree)
}

/// One component of `Ω²ᵈS²ᵈ`, rationally `S^{2d−1}`: `Λ(b_{2d−1})`.
pub fn iterated_loop_component_series(d: u32, max_degree: usize) -> Result<PoincareSeries> {
    let odd = check_d(d)?;
    Ok(PoincareSeries::exterior(odd, max_degree))
}

pub fn series_product(
    a: &PoincareSeries,
    b: &PoincareSeries,
    max_degree: usize,
) -> Result<PoincareSeries> {
    a.product(b, max_degree)
}

/// Series of a component of the compactly supported section space of
/// `ℂᵈ` minus `p` points, `Ω²ᵈ₀S²ᵈ × (ΩS²ᵈ)ᵖ`.
pub fn section_space_series(d: u32, punctures: u32, max_degree: usize) -> Result<PoincareSeries> {
    section_space_series_with(
        loop_sphere_series,
        iterated_loop_component_series,
        d,
        punctures,
        max_degree,
    )
}

pub(crate) type SeriesFn = fn(u32, usize) -> Result<PoincareSeries>;

pub(crate) fn section_space_series_with(
    loop_sphere: SeriesFn,
    iterated_loop: SeriesFn,
    d: u32,
    punctures: u32,
    max_degree: usize,
) -> Result<PoincareSeries> {
    let base = iterated_loop(d, max_degree)?;
    let loops = loop_sphere(d, max_degree)?;
    (0..punctures).try_fold(base, |acc, _| acc.product(&loops, max_degree))
}

/// True iff `c(i) = c(i + period)` for all `onset ≤ i ≤ max − period`.
/// The window must contain at least two full periods.
pub fn periodicity_check(series: &PoincareSeries, onset: usize, period: usize) -> Result<bool> {
    if period == 0 || onset + 2 * period > series.max_degree() {
        return Err(Error::InvalidArgument(format!(
            "window [{onset}, {}] too small for period {period}",
            series.max_degree()
        )));
    }
    let c = series.coefficients();
    Ok((onset..=series.max_degree() - period).all(|i| c[i] == c[i + period]))
}
