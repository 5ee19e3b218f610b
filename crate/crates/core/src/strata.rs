//! Closed-form stable tables, stable-range bookkeeping, and dispatch of
//! stable Betti computations to every applicable engine.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gerstenhaber::{self, Partition};
use crate::models::{self, PoincareSeries, SeriesFn};

/// Parses whitespace-separated tokens `a` or `a^m` (`a ≥ 1`, `m ≥ 0`) into
/// the multiset union of the tokens, so `"1^3 2"` is `{1, 1, 1, 2}`.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut parts = Vec::new();
    for token in text.split_whitespace() {
        let (base, exp) = match token.split_once('^') {
            Some((a, m)) => (a, m),
            None => (token, "1"),
        };
        let malformed = || Error::Parse(format!("malformed partition token `{token}`"));
        let a: u32 = base.parse().map_err(|_| malformed())?;
        let m: u32 = exp.parse().map_err(|_| malformed())?;
        if a == 0 {
            return Err(Error::Parse(format!("zero part in `{token}`")));
        }
        parts.extend(std::iter::repeat_n(a, m as usize));
    }
    Partition::from_parts(&parts)
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_partition(s)
    }
}

/// The predicted stable table for `λ = 2`: `ℚ` at 0, `ℚ²` at `2(2k−1)d−1`
/// and at `4kd` for `k ≥ 1`. The two families have opposite parity, so
/// they never coincide.
pub fn formula_vw(d: u32, i: u32) -> u64 {
    if i == 0 {
        return 1;
    }
    let (d, i) = (u64::from(d), u64::from(i));
    let odd_family = (i + 1) % (2 * d) == 0 && ((i + 1) / (2 * d)) % 2 == 1;
    let even_family = i % (4 * d) == 0;
    if odd_family || even_family {
        2
    } else {
        0
    }
}

/// The stable table for `λ = 2`: `ℚ` at 0 and `ℚ²` at every positive
/// multiple of `2d−1`.
pub fn formula_corrected(d: u32, i: u32) -> u64 {
    match i {
        0 => 1,
        _ if i.is_multiple_of(2 * d - 1) => 2,
        _ => 0,
    }
}

/// The `4k` rule for `λ = 2 3`: `ℚ` at 0, `ℚ^{4k}` at `k(2d−1)` for `k > 1`,
/// and 0 otherwise, in particular 0 at `k = 1`.
pub fn formula_w1j23(d: u32, i: u32) -> u64 {
    let unit = 2 * d - 1;
    match i {
        0 => 1,
        _ if i.is_multiple_of(unit) && i / unit > 1 => 4 * u64::from(i / unit),
        _ => 0,
    }
}

/// Smallest degree where [`formula_vw`] and [`formula_corrected`] differ.
pub fn first_disagreement(d: u32) -> u32 {
    (0..)
        .find(|&i| formula_vw(d, i) != formula_corrected(d, i))
        .expect("the formulas differ at 4d - 2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StableRangeRule {
    /// Configuration-type spaces: `Hᵢ` is stable once `j ≥ i/2`.
    Segal,
    /// Rationally, `j ≥ i` suffices on manifolds of dimension at least 3.
    RandalWilliams { manifold_dim: u32 },
    /// `w_{1ʲ2}(ℂᵈ)` is stable in degrees `≤ j(2d−1) − 1`.
    W1j2 { d: u32 },
}

impl StableRangeRule {
    pub fn applicability(&self) -> &'static str {
        match self {
            Self::Segal => "integral homology of configuration spaces",
            Self::RandalWilliams { .. } => "rational homology, manifold of dimension at least 3",
            Self::W1j2 { .. } => "rational homology of w_{1^j 2}(C^d), d >= 1",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Segal => "segal",
            Self::RandalWilliams { .. } => "rw",
            Self::W1j2 { .. } => "w1j2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StableRangeBound {
    /// Degree `i` is stable for all `j ≥` this value.
    MinParticles(u32),
    /// Every degree `≤` this value is stable.
    StableThrough(u32),
    /// No degree is certified.
    Unstable,
}

impl fmt::Display for StableRangeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MinParticles(j) => write!(f, "j >= {j}"),
            Self::StableThrough(i) => write!(f, "stable for degrees <= {i}"),
            Self::Unstable => f.write_str("no stable degrees"),
        }
    }
}

/// For [`StableRangeRule::Segal`] and [`StableRangeRule::RandalWilliams`]
/// `value` is the homology degree `i`; for [`StableRangeRule::W1j2`] it is
/// the number of ones `j`.
pub fn stable_range_bound(rule: StableRangeRule, value: u32) -> Result<StableRangeBound> {
    match rule {
        StableRangeRule::Segal => Ok(StableRangeBound::MinParticles(value.div_ceil(2))),
        StableRangeRule::RandalWilliams { manifold_dim } if manifold_dim < 3 => {
            Err(Error::InvalidArgument(format!(
                "rule {} needs manifold dimension at least 3, got {manifold_dim}",
                rule.name()
            )))
        }
        StableRangeRule::RandalWilliams { .. } => Ok(StableRangeBound::MinParticles(value)),
        StableRangeRule::W1j2 { d } if d < 1 => {
            Err(Error::InvalidArgument("d must be at least 1".into()))
        }
        StableRangeRule::W1j2 { d } => Ok(match (value * (2 * d - 1)).checked_sub(1) {
            Some(top) => StableRangeBound::StableThrough(top),
            None => StableRangeBound::Unstable,
        }),
    }
}

/// The series primitives the section-space engine is built from.
/// Replaceable, so that a deliberately broken engine can be exercised.
#[derive(Clone, Copy)]
pub struct Engines {
    pub loop_sphere: fn(u32, usize) -> Result<PoincareSeries>,
    pub iterated_loop: fn(u32, usize) -> Result<PoincareSeries>,
}

impl Default for Engines {
    fn default() -> Self {
        Self {
            loop_sphere: models::loop_sphere_series,
            iterated_loop: models::iterated_loop_component_series,
        }
    }
}

impl fmt::Debug for Engines {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engines").finish_non_exhaustive()
    }
}

impl Engines {
    pub fn section_space_series(
        &self,
        d: u32,
        punctures: u32,
        max_degree: usize,
    ) -> Result<PoincareSeries> {
        let (ls, il): (SeriesFn, SeriesFn) = (self.loop_sphere, self.iterated_loop);
        models::section_space_series_with(ls, il, d, punctures, max_degree)
    }
}

pub const CLOSED_FORM: &str = "closed-form";
pub const SECTION_SERIES: &str = "section-series";
pub const GERSTENHABER: &str = "gerstenhaber";
pub const RULE_4K: &str = "4k-rule";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableRow {
    pub degree: u32,
    /// `(engine, value)` in a fixed engine order.
    pub values: Vec<(String, u64)>,
    /// A closed-form rule not treated as an engine, if one applies.
    pub reference: Option<(String, u64)>,
}

impl StableRow {
    pub fn agreed(&self) -> Option<u64> {
        let first = self.values.first()?.1;
        self.values
            .iter()
            .all(|(_, v)| *v == first)
            .then_some(first)
    }

    /// The common engine value, or the enumeration value when they differ.
    pub fn dim(&self) -> u64 {
        self.agreed().unwrap_or_else(|| {
            self.values
                .iter()
                .find(|(name, _)| name == GERSTENHABER)
                .map_or(0, |(_, v)| *v)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscrepancyKind {
    /// Two engines disagree.
    Engines,
    /// The engines agree but a reference rule gives a different value.
    Reference,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub degree: u32,
    pub kind: DiscrepancyKind,
    pub values: Vec<(String, u64)>,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self
            .values
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        let what = match self.kind {
            DiscrepancyKind::Engines => "engines disagree",
            DiscrepancyKind::Reference => "reference rule differs",
        };
        write!(f, "degree {}: {what}: {}", self.degree, vals.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableBettiReport {
    /// The tail with its ones removed.
    pub tail: Partition,
    pub d: u32,
    pub max_degree: u32,
    /// Number of ones used for the enumeration engine.
    pub ones: u32,
    pub engines: Vec<String>,
    pub rows: Vec<StableRow>,
    pub discrepancies: Vec<Discrepancy>,
}

impl StableBettiReport {
    pub fn engines_agree(&self) -> bool {
        self.discrepancies
            .iter()
            .all(|x| x.kind != DiscrepancyKind::Engines)
    }

    pub fn table(&self) -> Vec<(u32, u64)> {
        self.rows.iter().map(|r| (r.degree, r.dim())).collect()
    }

    pub fn provenance(&self) -> String {
        match (self.engines.len(), self.engines_agree()) {
            (1, _) => format!("{} only", self.engines[0]),
            (n, true) => format!("{n} engines agree"),
            (n, false) => format!("{n} engines disagree"),
        }
    }
}

/// `colim_j H_i(w_{1ʲ tail}(ℂᵈ); ℚ)` for `i ≤ max_degree` from every engine
/// that applies to `tail`.
pub fn stable_betti(tail: &Partition, d: u32, max_degree: u32) -> Result<StableBettiReport> {
    stable_betti_with(&Engines::default(), tail, d, max_degree)
}

pub fn stable_betti_with(
    engines: &Engines,
    tail: &Partition,
    d: u32,
    max_degree: u32,
) -> Result<StableBettiReport> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "d must be at least 1, got {d}"
        )));
    }
    let tail = tail.without_ones();
    let max = max_degree as usize;
    let unit = 2 * d as usize - 1;
    let mut columns: Vec<(String, Vec<u64>)> = Vec::new();
    let mut reference: Option<(String, Vec<u64>)> = None;

    let parts = tail.parts();
    match parts.as_slice() {
        [] => {
            let s = engines.section_space_series(d, 0, max)?;
            columns.push((SECTION_SERIES.into(), s.coefficients().to_vec()));
        }
        [2] => {
            columns.push((
                CLOSED_FORM.into(),
                (0..=max_degree).map(|i| formula_corrected(d, i)).collect(),
            ));
            let s = engines.section_space_series(d, 1, max)?;
            columns.push((SECTION_SERIES.into(), s.coefficients().to_vec()));
        }
        [2, 3] => {
            let s = engines
                .section_space_series(d, 2, max)?
                .product(&PoincareSeries::exterior(unit, max), max)?;
            columns.push((SECTION_SERIES.into(), s.coefficients().to_vec()));
            reference = Some((
                RULE_4K.into(),
                (0..=max_degree).map(|i| formula_w1j23(d, i)).collect(),
            ));
        }
        _ => {}
    }
    let ones = gerstenhaber::stable_ones(max_degree);
    let enumerated = gerstenhaber::stable_stratum_betti(&tail, d, max_degree)?;
    columns.push((GERSTENHABER.into(), crate::dims(&enumerated)));

    let mut rows = Vec::with_capacity(max + 1);
    let mut discrepancies = Vec::new();
    for i in 0..=max {
        let row = StableRow {
            degree: i as u32,
            values: columns.iter().map(|(n, c)| (n.clone(), c[i])).collect(),
            reference: reference.as_ref().map(|(n, c)| (n.clone(), c[i])),
        };
        match (row.agreed(), &row.reference) {
            (None, _) => discrepancies.push(Discrepancy {
                degree: row.degree,
                kind: DiscrepancyKind::Engines,
                values: row.values.clone(),
            }),
            (Some(v), Some((name, r))) if v != *r => {
                let mut values = row.values.clone();
                values.push((name.clone(), *r));
                discrepancies.push(Discrepancy {
                    degree: row.degree,
                    kind: DiscrepancyKind::Reference,
                    values,
                });
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok(StableBettiReport {
        tail,
        d,
        max_degree,
        ones,
        engines: columns.into_iter().map(|(n, _)| n).collect(),
        rows,
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims;

    #[test]
    fn partitions_parse() {
        assert_eq!(parse_partition("1^3 2").unwrap().multiplicities(), [3, 1]);
        assert_eq!(parse_partition("2 3").unwrap().multiplicities(), [0, 1, 1]);
        assert_eq!(parse_partition("1^0 2").unwrap().multiplicities(), [0, 1]);
        assert_eq!(parse_partition("  3  1 1 ").unwrap().to_string(), "1^2 3");
        for bad in ["0", "1^", "^2", "x", "1^-1", "2^a", "1^2^3"] {
            assert!(parse_partition(bad).is_err(), "{bad}");
        }
        let p: Partition = "1^3 2".parse().unwrap();
        assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(formula_vw(2, 3), 2);
        assert_eq!(formula_vw(2, 8), 2);
        assert_eq!(formula_vw(2, 6), 0);
        assert_eq!(formula_corrected(2, 6), 2);
        assert_eq!(formula_corrected(1, 17), 2);
        assert_eq!(formula_corrected(3, 4), 0);
        assert_eq!(first_disagreement(1), 2);
        assert_eq!(first_disagreement(2), 6);
        assert_eq!(first_disagreement(3), 10);
        assert_eq!(first_disagreement(4), 14);
    }

    #[test]
    fn range_rules() {
        assert_eq!(
            stable_range_bound(StableRangeRule::Segal, 10).unwrap(),
            StableRangeBound::MinParticles(5)
        );
        let rw = StableRangeRule::RandalWilliams { manifold_dim: 4 };
        assert_eq!(
            stable_range_bound(rw, 10).unwrap(),
            StableRangeBound::MinParticles(10)
        );
        let rw2 = StableRangeRule::RandalWilliams { manifold_dim: 2 };
        assert!(stable_range_bound(rw2, 10).is_err());
        let w = StableRangeRule::W1j2 { d: 2 };
        assert_eq!(
            stable_range_bound(w, 7).unwrap(),
            StableRangeBound::StableThrough(20)
        );
        assert_eq!(
            stable_range_bound(w, 0).unwrap(),
            StableRangeBound::Unstable
        );
    }

    #[test]
    fn stable_dispatch_examples() {
        let r = stable_betti(&parse_partition("2").unwrap(), 2, 12).unwrap();
        assert_eq!(dims(&r.table()), [1, 0, 0, 2, 0, 0, 2, 0, 0, 2, 0, 0, 2]);
        assert_eq!(r.provenance(), "3 engines agree");

        let r = stable_betti(&Partition::default(), 2, 6).unwrap();
        assert_eq!(dims(&r.table()), [1, 0, 0, 1, 0, 0, 0]);
        assert!(r.discrepancies.is_empty());

        let r = stable_betti(&parse_partition("2 3").unwrap(), 1, 4).unwrap();
        assert_eq!(dims(&r.table()), [1, 4, 8, 12, 16]);
        assert!(r.engines_agree());
        assert_eq!(r.discrepancies.len(), 1);
        assert_eq!(r.discrepancies[0].degree, 1);
        assert_eq!(r.discrepancies[0].kind, DiscrepancyKind::Reference);
    }

    #[test]
    fn ones_in_tail_are_ignored() {
        let a = stable_betti(&parse_partition("1^4 2").unwrap(), 1, 6).unwrap();
        let b = stable_betti(&parse_partition("2").unwrap(), 1, 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn other_tails_use_enumeration_only() {
        let r = stable_betti(&parse_partition("3").unwrap(), 1, 4).unwrap();
        assert_eq!(r.engines, [GERSTENHABER]);
        assert_eq!(r.provenance(), "gerstenhaber only");
    }

    fn broken_loop_sphere(d: u32, max: usize) -> Result<PoincareSeries> {
        let mut s = models::loop_sphere_series(d, max)?.coefficients().to_vec();
        s[2 * d as usize - 1] += 1;
        Ok(PoincareSeries::new(s))
    }

    #[test]
    fn broken_engine_is_reported() {
        let engines = Engines {
            loop_sphere: broken_loop_sphere,
            ..Engines::default()
        };
        let r = stable_betti_with(&engines, &parse_partition("2").unwrap(), 2, 9).unwrap();
        assert!(!r.engines_agree());
        let bad = &r.discrepancies[0];
        assert_eq!(bad.degree, 3);
        assert_eq!(bad.values.len(), 3);
    }
}
