//! JSON shapes of the command outputs. Rationals are written as strings.

use serde::Serialize;

use odelin::detgen::LinDiffSystem;
use odelin::janet::InvolutiveSystem;
use odelin::jetcore::display::rat_to_string;
use odelin::jetcore::Rat;
use odelin::liealg::{Certificate, LieAlgebraTable};
use odelin::linalg::{is_zero_vec, Matrix};
use odelin::odeparse::print_ode;
use odelin::pipeline::{point_to_string, Analysis, RecoveryOutcome};
use odelin::recover::{class_to_ode, AffineClass, CharPoly};
use odelin::xoracle::OracleInstance;

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_to_string).collect()
}

fn matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| rats(r)).collect()
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub verdict: &'static str,
    pub case: &'static str,
    pub n: usize,
    pub m: usize,
    pub derived_dimension: usize,
    pub derived_abelian: bool,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        CertificateJson {
            verdict: c.verdict.as_str(),
            case: c.case.as_str(),
            n: c.n,
            m: c.m,
            derived_dimension: c.derived_dim,
            derived_abelian: c.derived_abelian,
        }
    }
}

#[derive(Serialize)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub coefficients: Vec<String>,
}

/// Nonzero brackets `[X_i, X_j]`, `i < j`, 1-based.
pub fn brackets(t: &LieAlgebraTable) -> Vec<Bracket> {
    let mut out = Vec::new();
    for i in 0..t.m {
        for j in (i + 1)..t.m {
            if !is_zero_vec(&t.c[i][j]) {
                out.push(Bracket {
                    i: i + 1,
                    j: j + 1,
                    coefficients: rats(&t.c[i][j]),
                });
            }
        }
    }
    out
}

#[derive(Serialize)]
pub struct DerivedJson {
    pub dimension: usize,
    pub abelian: bool,
    pub basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct Dumps {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determining_system: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involutive_system: Option<InvolutiveJson>,
}

#[derive(Serialize)]
pub struct InvolutiveJson {
    pub equations: Vec<String>,
    pub parametric: Vec<String>,
}

pub fn dump_system(s: &LinDiffSystem) -> Vec<String> {
    s.equations.iter().map(|e| format!("{e} = 0")).collect()
}

pub fn dump_involutive(inv: &InvolutiveSystem) -> InvolutiveJson {
    InvolutiveJson {
        equations: inv.equations.iter().map(|e| format!("{e} = 0")).collect(),
        parametric: inv.parametric.iter().map(|s| s.to_string()).collect(),
    }
}

#[derive(Serialize)]
pub struct Timing {
    pub stage: &'static str,
    pub micros: u128,
}

#[derive(Serialize)]
pub struct CertifyReport {
    pub input: String,
    pub ode: String,
    pub certificate: CertificateJson,
    pub expansion_point: String,
    pub truncation: u32,
    #[serde(flatten)]
    pub dumps: Dumps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

#[derive(Serialize)]
pub struct SymmetriesReport {
    pub input: String,
    pub ode: String,
    pub m: usize,
    pub parametric: Vec<String>,
    pub expansion_point: String,
    pub structure_constants: Vec<Bracket>,
    pub derived_dimension: usize,
    pub derived_abelian: bool,
    #[serde(flatten)]
    pub dumps: Dumps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

#[derive(Serialize)]
pub struct CharPolyJson {
    /// Highest degree first, leading 1 included.
    pub coefficients: Vec<String>,
    pub text: String,
}

impl From<&CharPoly> for CharPolyJson {
    fn from(p: &CharPoly) -> Self {
        let mut cs = vec!["1".to_string()];
        cs.extend(p.coeffs().iter().rev().map(rat_to_string));
        CharPolyJson {
            coefficients: cs,
            text: p.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct Invariant {
    pub j: usize,
    pub value: String,
}

#[derive(Serialize)]
pub struct AffineClassJson {
    pub centered: CharPolyJson,
    pub zero_pattern: Vec<usize>,
    pub invariants: Vec<Invariant>,
}

impl From<&AffineClass> for AffineClassJson {
    fn from(c: &AffineClass) -> Self {
        AffineClassJson {
            centered: (&c.centered).into(),
            zero_pattern: c.zero_pattern.clone(),
            invariants: c
                .invariants
                .iter()
                .map(|(j, v)| Invariant {
                    j: *j,
                    value: rat_to_string(v),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct RecoveryJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acting_vector: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action_matrix: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<CharPolyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine_class: Option<AffineClassJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representative_ode: Option<String>,
}

impl From<&RecoveryOutcome> for RecoveryJson {
    fn from(r: &RecoveryOutcome) -> Self {
        match r {
            RecoveryOutcome::Trivial { char_poly, class } => RecoveryJson {
                status: "trivial class",
                acting_vector: None,
                action_matrix: None,
                char_poly: Some(char_poly.into()),
                affine_class: Some(class.into()),
                representative_ode: Some(class_to_ode(class)),
            },
            RecoveryOutcome::Recovered { recovery, class } => RecoveryJson {
                status: "recovered",
                acting_vector: Some(rats(&recovery.acting)),
                action_matrix: Some(matrix(&recovery.action_matrix)),
                char_poly: Some((&recovery.char_poly).into()),
                affine_class: Some(class.into()),
                representative_ode: Some(class_to_ode(class)),
            },
            RecoveryOutcome::OutOfScope => RecoveryJson {
                status: "nonconstant coefficients: recovery out of scope",
                acting_vector: None,
                action_matrix: None,
                char_poly: None,
                affine_class: None,
                representative_ode: None,
            },
        }
    }
}

#[derive(Serialize)]
pub struct RecoverReport {
    pub input: String,
    pub ode: String,
    pub certificate: CertificateJson,
    pub m: usize,
    pub expansion_point: String,
    pub structure_constants: Vec<Bracket>,
    pub derived: DerivedJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery: Option<RecoveryJson>,
    #[serde(flatten)]
    pub dumps: Dumps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

pub struct Extras {
    pub dump_detsys: bool,
    pub dump_involutive: bool,
    pub timings: bool,
}

fn dumps(a: &Analysis, x: &Extras) -> Dumps {
    Dumps {
        determining_system: x.dump_detsys.then(|| dump_system(&a.system)),
        involutive_system: x.dump_involutive.then(|| dump_involutive(&a.involutive)),
    }
}

fn timings(a: &Analysis, x: &Extras) -> Option<Vec<Timing>> {
    x.timings.then(|| {
        a.timings
            .iter()
            .map(|(stage, d)| Timing {
                stage,
                micros: d.as_micros(),
            })
            .collect()
    })
}

pub fn certify_report(input: &str, a: &Analysis, x: &Extras) -> CertifyReport {
    CertifyReport {
        input: input.to_string(),
        ode: print_ode(&a.ode),
        certificate: (&a.certificate).into(),
        expansion_point: point_to_string(&a.point),
        truncation: a.truncation,
        dumps: dumps(a, x),
        timings: timings(a, x),
    }
}

pub fn symmetries_report(input: &str, a: &Analysis, x: &Extras) -> SymmetriesReport {
    SymmetriesReport {
        input: input.to_string(),
        ode: print_ode(&a.ode),
        m: a.m(),
        parametric: a.involutive.parametric.iter().map(|s| s.to_string()).collect(),
        expansion_point: point_to_string(&a.point),
        structure_constants: brackets(&a.table),
        derived_dimension: a.certificate.derived_dim,
        derived_abelian: a.certificate.derived_abelian,
        dumps: dumps(a, x),
        timings: timings(a, x),
    }
}

pub fn recover_report(input: &str, a: &Analysis, r: Option<&RecoveryOutcome>, x: &Extras) -> RecoverReport {
    RecoverReport {
        input: input.to_string(),
        ode: print_ode(&a.ode),
        certificate: (&a.certificate).into(),
        m: a.m(),
        expansion_point: point_to_string(&a.point),
        structure_constants: brackets(&a.table),
        derived: DerivedJson {
            dimension: a.derived.dim(),
            abelian: a.certificate.derived_abelian,
            basis: matrix(&a.derived.basis),
        },
        recovery: r.map(Into::into),
        dumps: dumps(a, x),
        timings: timings(a, x),
    }
}

#[derive(Serialize)]
pub struct EquivReport {
    pub p: CharPolyJson,
    pub q: CharPolyJson,
    pub equivalent: bool,
    pub reason: &'static str,
    pub class_p: AffineClassJson,
    pub class_q: AffineClassJson,
}

#[derive(Serialize)]
pub struct OracleReport {
    pub ode: String,
    pub source_poly: CharPolyJson,
    pub source_ode: String,
    pub transformation: TransformationJson,
    pub expected_case: &'static str,
}

#[derive(Serialize)]
pub struct TransformationJson {
    pub psi: String,
    pub phi: String,
}

pub fn oracle_report(i: &OracleInstance) -> OracleReport {
    OracleReport {
        ode: print_ode(&i.ode),
        source_poly: (&i.source).into(),
        source_ode: odelin::recover::charpoly_to_ode(&i.source),
        transformation: TransformationJson {
            psi: i.transformation.psi.to_string(),
            phi: i.transformation.phi.to_string(),
        },
        expected_case: i.expected.as_str(),
    }
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}
