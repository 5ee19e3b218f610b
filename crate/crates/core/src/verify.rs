//! Named verification suites. Each returns a [`Verification`] with one line
//! per check and an overall verdict.

use crate::cohomology::DgaModel;
use crate::dims;
use crate::error::{Error, Result};
use crate::gerstenhaber::{stable_stratum_betti, Partition};
use crate::models::{moller_raussen, periodicity_check};
use crate::presentation::{indecomposable_class, verify_ring_presentation, RingPresentation};
use crate::scalar::Field;
use crate::strata::{
    first_disagreement, formula_corrected, formula_vw, stable_betti_with, Engines,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub name: String,
    pub lines: Vec<String>,
    pub passed: bool,
}

impl Verification {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            lines: Vec::new(),
            passed: true,
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.lines
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.lines.push(format!("     {line}"));
    }

    fn fail_with(&mut self, err: Error) {
        self.check(false, format!("error: {err}"));
    }
}

/// `H*(Map₁(ℂP², S⁴); ℚ)`: one class in each degree 0, 2, 4, 7, 9, 11.
pub fn conjecture_g_expected(i: u32) -> u64 {
    u64::from(matches!(i, 0 | 2 | 4 | 7 | 9 | 11))
}

/// `H*(Map₁(ℂP³, S⁶); ℚ)` in degrees up to 30.
pub fn cp3_expected(i: u32) -> u64 {
    match i {
        1 | 3 | 5 | 7 | 9 => 0,
        0 | 2 | 10 | 11 | 12 | 14 | 16 | 18 | 20 | 22 => 1,
        15 | 17 | 19 => 3,
        _ => 2,
    }
}

fn compare_table(v: &mut Verification, table: &[(u32, u64)], expected: impl Fn(u32) -> u64) {
    for &(i, dim) in table {
        let want = expected(i);
        v.check(dim == want, format!("H^{i}: engine {dim}, expected {want}"));
    }
}

pub fn conjecture_g() -> Verification {
    let mut v = Verification::new("conjecture-g");
    match moller_raussen::<Rational>(2) {
        Ok(model) => compare_table(&mut v, &model.betti_table(40), conjecture_g_expected),
        Err(e) => v.fail_with(e),
    }
    v
}

pub fn conjecture_h(engines: &Engines) -> Verification {
    let mut v = Verification::new("conjecture-h");
    let tail = Partition::from_parts(&[2]).expect("valid partition");
    for d in 1..=3 {
        let report = match stable_betti_with(engines, &tail, d, 30) {
            Ok(r) => r,
            Err(e) => {
                v.fail_with(e);
                continue;
            }
        };
        for row in &report.rows {
            let vals: Vec<String> = row.values.iter().map(|(n, x)| format!("{n}={x}")).collect();
            v.check(
                row.agreed().is_some(),
                format!("d={d} H_{}: {}", row.degree, vals.join(" ")),
            );
        }
        let periodic = engines
            .section_space_series(d, 1, 30)
            .and_then(|s| periodicity_check(&s, 1, 2 * d as usize - 1));
        match periodic {
            Ok(p) => v.check(
                p,
                format!("d={d} periodic from degree 1 with period {}", 2 * d - 1),
            ),
            Err(e) => v.fail_with(e),
        }
    }
    v
}

/// Representatives and relations for `H*(Map₁(ℂPᵐ, S²ᵐ); ℚ)`, `m ∈ {2, 3}`:
///
/// - `m = 2`: `ℚ[b₂]/(b₂³) ⊗ Λ(c₇)`;
/// - `m = 3`: generators `b₂, b₄, c₁₁, c₁₃` with relations
///   `b₄² − 2b₂²b₄`, `b₂b₄²` and `b₄c₁₃ − 2b₂b₄c₁₁`.
pub fn projective_presentation<F: Field>(
    model: &DgaModel<F>,
    m: u32,
) -> Result<RingPresentation<F>> {
    match m {
        2 => RingPresentation::parse(
            model,
            &[("b2", "b2"), ("c7", "b2 v5 + 4 v7")],
            &["b2^3", "c7^2"],
        ),
        3 => {
            let alg = model.algebra();
            let b2 = crate::algebra::Element::parse(alg, "b2")?;
            let b4 = crate::algebra::Element::parse(alg, "b4")?;
            let missing =
                |n: u32| Error::InvalidArgument(format!("no indecomposable class in degree {n}"));
            let c11 = indecomposable_class(model, 11, &[]).ok_or_else(|| missing(11))?;
            let c13 =
                indecomposable_class(model, 13, &[b2.try_mul(&c11)?]).ok_or_else(|| missing(13))?;
            RingPresentation::new(
                model,
                &[("b2", b2), ("b4", b4), ("c11", c11), ("c13", c13)],
                &["b4^2 - 2 b2^2 b4", "b2 b4^2", "b4 c13 - 2 b2 b4 c11"],
            )
        }
        _ => Err(Error::InvalidArgument(format!(
            "no presentation recorded for m = {m}"
        ))),
    }
}

pub fn cp3() -> Verification {
    let mut v = Verification::new("cp3");
    let model = match moller_raussen::<Rational>(3) {
        Ok(m) => m,
        Err(e) => {
            v.fail_with(e);
            return v;
        }
    };
    compare_table(&mut v, &model.betti_table(30), cp3_expected);
    let ring =
        projective_presentation(&model, 3).and_then(|p| verify_ring_presentation(&model, &p, 30));
    match ring {
        Ok(report) => {
            for (name, rep) in &report.representatives {
                v.note(format!("{name} = {rep}"));
            }
            for line in &report.adjustments {
                v.note(format!("adjusted {line}"));
            }
            v.check(
                report.surjectivity_holds(),
                "ring generators span H^* up to degree 30".into(),
            );
            v.check(report.relations_hold(), "relations are coboundaries".into());
            v.check(
                report.dimensions_match(),
                "quotient dimensions equal Betti numbers".into(),
            );
        }
        Err(e) => v.fail_with(e),
    }
    v
}

pub fn formula_150(engines: &Engines) -> Verification {
    let mut v = Verification::new("formula-150");
    for d in 1..=5u32 {
        let i = first_disagreement(d);
        v.check(
            i == 4 * d - 2 && formula_corrected(d, i) == 2 && formula_vw(d, i) == 0,
            format!(
                "d={d}: first disagreement at {i} (corrected {}, predicted {})",
                formula_corrected(d, i),
                formula_vw(d, i)
            ),
        );
        let max = 30;
        let tail = Partition::from_parts(&[2]).expect("valid partition");
        let enumerated = stable_stratum_betti(&tail, d, max).map(|t| dims(&t));
        let series = engines.section_space_series(d, 1, max as usize);
        match (enumerated, series) {
            (Ok(e), Ok(s)) => {
                let closed: Vec<u64> = (0..=max).map(|i| formula_corrected(d, i)).collect();
                let ok = closed == e && closed.as_slice() == s.coefficients();
                v.check(
                    ok,
                    format!("d={d}: corrected table matches both engines up to degree {max}"),
                );
            }
            (Err(e), _) | (_, Err(e)) => v.fail_with(e),
        }
    }
    v
}

pub fn all(engines: &Engines) -> Vec<Verification> {
    vec![
        conjecture_g(),
        conjecture_h(engines),
        cp3(),
        formula_150(engines),
    ]
}
