//! End-to-end analysis: determining system, completion, structure constants,
//! certificate, and recovery of the characteristic polynomial.

use std::time::{Duration, Instant};

use crate::detgen::{determining_system, LinDiffSystem};
use crate::error::{Error, Result};
use crate::janet::{complete, default_ranking, solution_dimension, verify_involutive, InvolutiveSystem, Ranking};
use crate::jetcore::display::rat_to_string;
use crate::jetcore::Rat;
use crate::liealg::{
    algebra_at, certify, default_truncation, derived_algebra, dimension_bound, is_regular_point, regular_points,
    CaseTag, Certificate, LieAlgebraTable, Subalgebra,
};
use crate::odeparse::{parse_ode, OdeSpec};
use crate::recover::{affine_class, class_to_ode, recover_charpoly, AffineClass, CharPoly, Recovery};

#[derive(Clone, Debug)]
pub struct Options {
    /// Expansion point; the first regular point of the fixed sequence when absent.
    pub point: Option<(Rat, Rat)>,
    /// Truncation order; two above the highest parametric order when absent.
    pub max_order: Option<u32>,
    pub ranking: Ranking,
    /// Recompute at a second expansion point and compare the invariants.
    pub second_point: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            point: None,
            max_order: None,
            ranking: default_ranking(),
            second_point: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub ode: OdeSpec,
    pub system: LinDiffSystem,
    pub involutive: InvolutiveSystem,
    pub point: (Rat, Rat),
    pub truncation: u32,
    pub table: LieAlgebraTable,
    pub derived: Subalgebra,
    pub certificate: Certificate,
    pub second_point: Option<(Rat, Rat)>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl Analysis {
    pub fn m(&self) -> usize {
        self.table.m
    }
}

pub fn point_to_string(p: &(Rat, Rat)) -> String {
    format!("({}, {})", rat_to_string(&p.0), rat_to_string(&p.1))
}

struct Clock {
    last: Instant,
    laps: Vec<(&'static str, Duration)>,
}

impl Clock {
    fn new() -> Self {
        Clock {
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.laps.push((stage, now - self.last));
        self.last = now;
    }
}

fn invariants(c: &Certificate) -> (usize, usize, bool) {
    (c.m, c.derived_dim, c.derived_abelian)
}

pub fn analyze_text(text: &str, opts: &Options) -> Result<Analysis> {
    analyze(&parse_ode(text)?, opts)
}

pub fn analyze(ode: &OdeSpec, opts: &Options) -> Result<Analysis> {
    let mut clock = Clock::new();
    let n = ode.order();
    let system = determining_system(ode)?;
    clock.lap("determining-system");

    let involutive = complete(&system, opts.ranking)?;
    let m = solution_dimension(&involutive);
    if m > dimension_bound(n) {
        return Err(Error::Internal(format!(
            "symmetry dimension {m} exceeds the bound {} for order {n}",
            dimension_bound(n)
        )));
    }
    clock.lap("completion");

    let point = match &opts.point {
        Some(p) if !is_regular_point(&involutive, p) => {
            return Err(Error::SingularPoint(rat_to_string(&p.0), rat_to_string(&p.1)))
        }
        Some(p) => p.clone(),
        None => regular_points(&involutive)
            .next()
            .ok_or_else(|| Error::Internal("no regular expansion point found".into()))?,
    };
    let least = involutive.max_parametric_order() + 1;
    let truncation = match opts.max_order {
        Some(k) if k < least => {
            return Err(Error::InvalidOption(format!(
                "truncation order {k} is below the minimum {least}"
            )))
        }
        Some(k) => k,
        None => default_truncation(&involutive),
    };
    let table = algebra_at(&involutive, &point, truncation)?;
    table.check_antisymmetry().map_err(Error::Internal)?;
    table.check_jacobi().map_err(Error::Internal)?;
    clock.lap("structure-constants");

    let derived = derived_algebra(&table);
    let certificate = certify(n, &table);
    clock.lap("certificate");

    let second_point = if opts.second_point {
        let q = regular_points(&involutive)
            .find(|q| *q != point)
            .ok_or_else(|| Error::Internal("no second expansion point found".into()))?;
        let other = certify(n, &algebra_at(&involutive, &q, truncation)?);
        if invariants(&other) != invariants(&certificate) {
            return Err(Error::Internal(format!(
                "expansion points {} and {} disagree",
                point_to_string(&point),
                point_to_string(&q)
            )));
        }
        clock.lap("second-point");
        Some(q)
    } else {
        None
    };

    Ok(Analysis {
        ode: ode.clone(),
        system,
        involutive,
        point,
        truncation,
        table,
        derived,
        certificate,
        second_point,
        timings: clock.laps,
    })
}

/// Independent audit of the completed system of an analysis.
pub fn audit(a: &Analysis) -> std::result::Result<(), String> {
    verify_involutive(&a.involutive)
}

#[derive(Clone, Debug)]
pub enum RecoveryOutcome {
    /// Maximal symmetry: equivalent to `u^(n) = 0`.
    Trivial { char_poly: CharPoly, class: AffineClass },
    Recovered { recovery: Recovery, class: AffineClass },
    /// `m = n + 1`; the coefficients are not determined by the algebra.
    OutOfScope,
}

impl RecoveryOutcome {
    pub fn class(&self) -> Option<&AffineClass> {
        match self {
            RecoveryOutcome::Trivial { class, .. } | RecoveryOutcome::Recovered { class, .. } => Some(class),
            RecoveryOutcome::OutOfScope => None,
        }
    }

    pub fn representative_ode(&self) -> Option<String> {
        self.class().map(class_to_ode)
    }
}

/// Recovery step for a linearizable analysis; `None` when not linearizable.
pub fn recover(a: &Analysis) -> Result<Option<RecoveryOutcome>> {
    Ok(match a.certificate.case {
        CaseTag::Trivial => {
            let char_poly = CharPoly::monomial(a.certificate.n);
            let class = affine_class(&char_poly);
            Some(RecoveryOutcome::Trivial { char_poly, class })
        }
        CaseTag::ConstantCoefficients => {
            let recovery = recover_charpoly(&a.table, &a.derived)?;
            let class = affine_class(&recovery.char_poly);
            Some(RecoveryOutcome::Recovered { recovery, class })
        }
        CaseTag::NonconstantCoefficients => Some(RecoveryOutcome::OutOfScope),
        CaseTag::None => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcore::int;
    use crate::liealg::Verdict;
    use crate::recover::affine_equivalent;

    fn run(text: &str) -> Analysis {
        analyze_text(text, &Options::default()).unwrap()
    }

    #[test]
    fn free_particle() {
        let a = run("y'' = 0");
        assert_eq!(a.m(), 8);
        assert_eq!(a.certificate.case, CaseTag::Trivial);
        assert_eq!(recover(&a).unwrap().unwrap().representative_ode().unwrap(), "u'' = 0");
        audit(&a).unwrap();
    }

    #[test]
    fn not_linearizable() {
        let a = run("y'' = y^2");
        assert_eq!(a.m(), 2);
        assert_eq!(a.certificate.verdict, Verdict::NotLinearizable);
        assert!(recover(&a).unwrap().is_none());
    }

    #[test]
    fn constant_coefficient_recovery() {
        let a = run("y''' + 3*y'*y'' + (y')^3 - y'' - (y')^2 = 0");
        assert_eq!(a.certificate.case, CaseTag::ConstantCoefficients);
        let Some(RecoveryOutcome::Recovered { recovery, .. }) = recover(&a).unwrap() else {
            panic!("expected a recovered polynomial");
        };
        let source = CharPoly::from_roots(&[int(0), int(0), int(1)]);
        assert!(affine_equivalent(&recovery.char_poly, &source));
    }

    #[test]
    fn nonconstant_case_is_out_of_scope() {
        let a = run("x*y''' = y'");
        assert_eq!(a.certificate.case, CaseTag::NonconstantCoefficients);
        assert!(matches!(recover(&a).unwrap(), Some(RecoveryOutcome::OutOfScope)));
    }

    #[test]
    fn options_are_validated() {
        let opts = Options {
            point: Some((int(0), int(0))),
            ..Options::default()
        };
        let e = analyze_text("y''' = y'/x", &opts).unwrap_err();
        assert!(matches!(e, Error::SingularPoint(..)));
        let opts = Options {
            max_order: Some(1),
            ..Options::default()
        };
        assert!(matches!(analyze_text("y'' = 0", &opts), Err(Error::InvalidOption(_))));
    }

    #[test]
    fn explicit_point_and_order() {
        let opts = Options {
            point: Some((int(3), int(-2))),
            max_order: Some(5),
            ..Options::default()
        };
        let a = analyze_text("y'' + (y')^2 = 0", &opts).unwrap();
        assert_eq!(a.m(), 8);
        assert_eq!(a.point, (int(3), int(-2)));
        assert_eq!(a.truncation, 5);
    }
}
