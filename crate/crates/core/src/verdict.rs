//! The end-to-end decision: pre-check, field, units, class number,
//! admissible-prime search.

use crate::certificate::Certificate;
use crate::classnum::{
    class_number_one, conductor_precheck, cyclic_cubic_conductor_factors, ClassNumberReport,
    ClassVerdict, ConductorCheck,
};
use crate::error::{Error, Result, StageExt};
use crate::field::{CubicField, CubicPolynomial};
use crate::search::{admissible_search, SearchOptions, SearchOutcome};
use crate::units::{find_units, UnitSearch, UnitSystem};

/// How the field is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldInput {
    Conductor(u64),
    Polynomial(CubicPolynomial),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineOptions {
    pub search: SearchOptions,
    pub units: UnitSearch,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Euclidean {
        certificate: Box<Certificate>,
        report: Box<ClassNumberReport>,
    },
    NotClassNumberOne(Box<ClassNumberReport>),
    /// `h` could not be decided.
    Undecided {
        reason: String,
    },
    /// `h = 1` but no admissible prime up to the cutoff.
    Exhausted {
        q_max: u64,
    },
}

impl Verdict {
    /// Stable short label used in summaries.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Euclidean { .. } => "euclidean",
            Verdict::NotClassNumberOne(_) => "not_class_number_one",
            Verdict::Undecided { .. } => "undecided",
            Verdict::Exhausted { .. } => "exhausted",
        }
    }
}

/// A field with its unit system and class number report.
#[derive(Debug, Clone)]
pub struct FieldAnalysis {
    pub field: CubicField,
    pub units: UnitSystem,
    pub report: ClassNumberReport,
}

/// Reject conductors that no cyclic cubic field has.
pub fn validate_conductor(f: u64) -> Result<ConductorCheck> {
    if cyclic_cubic_conductor_factors(f).is_none() {
        return Err(Error::InvalidConductor(
            f.to_string(),
            "not the conductor of any cyclic cubic field".into(),
        ));
    }
    Ok(conductor_precheck(f))
}

/// Build the field and compute units and the class number report.
pub fn analyze(k: CubicField, opts: &PipelineOptions) -> Result<FieldAnalysis> {
    let mut units = find_units(&k, &opts.units).stage("units")?;
    let report = class_number_one(&k, &mut units).stage("class number")?;
    Ok(FieldAnalysis {
        field: k,
        units,
        report,
    })
}

/// Build the field from either input form. A conductor that fails the
/// class-number pre-check yields `Ok(Err(report))` without building.
pub fn build_input(
    input: &FieldInput,
) -> Result<std::result::Result<CubicField, ClassNumberReport>> {
    match input {
        FieldInput::Conductor(f) => {
            let check = validate_conductor(*f).stage("precheck")?;
            if !check.passed() {
                return Ok(Err(ClassNumberReport::precheck_failure(*f, check)));
            }
            Ok(Ok(CubicField::from_conductor(*f).stage("build")?))
        }
        FieldInput::Polynomial(p) => {
            let k = CubicField::build(p).stage("build")?;
            let check = conductor_precheck(k.conductor());
            if !check.passed() {
                return Ok(Err(ClassNumberReport::precheck_failure(
                    k.conductor(),
                    check,
                )));
            }
            Ok(Ok(k))
        }
    }
}

/// Decide whether the ring of integers is Euclidean, with a certificate.
///
/// With `r = 2` fundamental units a single admissible prime suffices, so
/// a class-number-one field with an admissible prime is Euclidean.
pub fn euclidean_verdict(input: &FieldInput, opts: &PipelineOptions) -> Result<Verdict> {
    let k = match build_input(input)? {
        Ok(k) => k,
        Err(report) => return Ok(Verdict::NotClassNumberOne(Box::new(report))),
    };
    let a = analyze(k, opts)?;
    verdict_for(&a, opts)
}

/// The search stage on an analysed field.
pub fn verdict_for(a: &FieldAnalysis, opts: &PipelineOptions) -> Result<Verdict> {
    match &a.report.verdict {
        ClassVerdict::HIsOne => {}
        ClassVerdict::HGreaterOne(_) => {
            return Ok(Verdict::NotClassNumberOne(Box::new(a.report.clone())))
        }
        ClassVerdict::Undecided(reason) => {
            return Ok(Verdict::Undecided {
                reason: format!("class number undecided: {reason}"),
            })
        }
    }
    match admissible_search(&a.field, &a.units, &opts.search).stage("search")? {
        SearchOutcome::Found(w) => Ok(Verdict::Euclidean {
            certificate: Box::new(Certificate::new(&a.field, &w, &a.report)),
            report: Box::new(a.report.clone()),
        }),
        SearchOutcome::Exhausted { q_max } => Ok(Verdict::Exhausted { q_max }),
    }
}
