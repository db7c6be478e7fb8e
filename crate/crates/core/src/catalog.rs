//! The bundled table of Euclidean cyclic cubic fields and the row checker
//! that reproduces it.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::classnum::ClassVerdict;
use crate::error::{Error, Result};
use crate::field::{CubicField, CubicPolynomial, FieldElement};
use crate::ideal::{Ideal, PrimeIdeal};
use crate::parse::{format_element, format_ideal, parse_element, parse_ideal, parse_polynomial};
use crate::search::{search_for_unit, unit_group_image};
use crate::units::is_unit;
use crate::verdict::{analyze, PipelineOptions};

/// The rows printed in the source table plus the worked example, as TSV.
pub const BUNDLED_TABLE: &str = include_str!("../../../data/table1.tsv");

/// A table witness: an element `e` standing for the ideal `(e)`, or a
/// two-element ideal `(q, alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Element(FieldElement),
    TwoElementIdeal(BigInt, FieldElement),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Element(e) => f.write_str(&format_element(e)),
            Witness::TwoElementIdeal(q, a) => f.write_str(&format_ideal(q, a)),
        }
    }
}

/// Parse `(q, expr)` or a bare element expression.
pub fn parse_witness(s: &str) -> Result<Witness> {
    if s.trim_start().starts_with('(') {
        let (q, a) = parse_ideal(s)?;
        Ok(Witness::TwoElementIdeal(q, a))
    } else {
        Ok(Witness::Element(parse_element(s)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub conductor: u64,
    pub polynomial: CubicPolynomial,
    pub witness: Witness,
    pub comment: String,
}

/// One non-comment line of a table file, split but not yet parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    pub line: usize,
    pub fields: Vec<String>,
}

impl RawRow {
    fn field(&self, i: usize) -> &str {
        self.fields.get(i).map(String::as_str).unwrap_or("")
    }

    pub fn parse(&self) -> Result<TableRow> {
        if self.fields.len() < 3 {
            return Err(Error::parse(
                0,
                format!(
                    "line {}: expected conductor, polynomial and witness columns",
                    self.line
                ),
            ));
        }
        let conductor = self
            .field(0)
            .trim()
            .parse::<u64>()
            .map_err(|e| Error::parse(0, format!("line {}: conductor: {e}", self.line)))?;
        Ok(TableRow {
            conductor,
            polynomial: parse_polynomial(self.field(1))?,
            witness: parse_witness(self.field(2))?,
            comment: self.field(3).to_string(),
        })
    }
}

/// Split TSV text into rows, skipping blank lines and `#` comments.
pub fn split_table(text: &str) -> Vec<RawRow> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| RawRow {
            line: i + 1,
            fields: l.split('\t').map(str::to_string).collect(),
        })
        .collect()
}

/// Parse every row of a table, failing on the first malformed line.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    split_table(text).iter().map(RawRow::parse).collect()
}

pub fn bundled_rows() -> Vec<TableRow> {
    parse_table(BUNDLED_TABLE).expect("bundled table parses")
}

/// Reading of a table witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    /// `(q, alpha)` as printed.
    TwoElementIdeal,
    /// An element `e` of prime norm, read as the ideal `(e)`.
    PrincipalIdeal,
    /// An element of norm `±1`. The ideal `(e)` is the whole ring, so the
    /// element is read as the certifying unit and the first prime for
    /// which it generates `(O_K/𝔮^2)^×` is searched for.
    CertifyingUnit,
}

impl Interpretation {
    pub fn as_str(self) -> &'static str {
        match self {
            Interpretation::TwoElementIdeal => "two_element_ideal",
            Interpretation::PrincipalIdeal => "principal_ideal",
            Interpretation::CertifyingUnit => "certifying_unit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub line: usize,
    pub conductor: Option<u64>,
    pub witness: String,
    /// How the witness was read, see [`Interpretation`].
    pub interpretation: Option<Interpretation>,
    pub passed: bool,
    pub prime_q: Option<u64>,
    pub ideal: Option<String>,
    /// Order of the subgroup generated by `-1, u1, u2` in `(O_K/𝔮^2)^×`.
    pub generated_order: Option<u64>,
    pub group_order: Option<u64>,
    pub failure: Option<String>,
}

impl RowReport {
    fn new(line: usize, conductor: Option<u64>, witness: String) -> RowReport {
        RowReport {
            line,
            conductor,
            witness,
            interpretation: None,
            passed: false,
            prime_q: None,
            ideal: None,
            generated_order: None,
            group_order: None,
            failure: None,
        }
    }

    fn fail(mut self, stage: &str, why: impl std::fmt::Display) -> RowReport {
        self.failure = Some(format!("{stage}: {why}"));
        self
    }
}

/// Resolve a witness to a prime ideal of `k`.
pub fn witness_prime(k: &CubicField, w: &Witness) -> Result<PrimeIdeal> {
    match w {
        Witness::Element(e) => {
            let ideal = Ideal::from_element(k, e)?;
            let g = k
                .to_integral(e)
                .ok_or_else(|| Error::NotIntegral(e.to_string()))?;
            PrimeIdeal::from_ideal_of_prime_norm(k, ideal, g)
        }
        Witness::TwoElementIdeal(q, a) => PrimeIdeal::from_two_element(k, q, a),
    }
}

/// Check one row: the polynomial has the stated conductor, the field has
/// class number one and the witness is an admissible prime.
pub fn check_row(row: &TableRow, line: usize, opts: &PipelineOptions) -> RowReport {
    let r = RowReport::new(line, Some(row.conductor), row.witness.to_string());
    let k = match CubicField::build(&row.polynomial) {
        Ok(k) => k,
        Err(e) => return r.fail("build", e),
    };
    if k.conductor() != row.conductor {
        let why = format!(
            "polynomial has conductor {}, row says {}",
            k.conductor(),
            row.conductor
        );
        return r.fail("conductor", why);
    }
    let a = match analyze(k, opts) {
        Ok(a) => a,
        Err(e) => return r.fail("analysis", e),
    };
    if a.report.verdict != ClassVerdict::HIsOne {
        return r.fail("class number", a.report.verdict.to_string());
    }
    let k = &a.field;
    let mut r = r;
    if let Witness::Element(e) = &row.witness {
        if is_unit(k, e) {
            r.interpretation = Some(Interpretation::CertifyingUnit);
            return check_unit_witness(k, e, opts, r);
        }
        r.interpretation = Some(Interpretation::PrincipalIdeal);
    } else {
        r.interpretation = Some(Interpretation::TwoElementIdeal);
    }
    let p = match witness_prime(k, &row.witness) {
        Ok(p) => p,
        Err(e) => return r.fail("witness", e),
    };
    let q = p.residue_char();
    r.prime_q = Some(q);
    r.ideal = Some(p.display(k).to_string());
    if q == 2 || q == row.conductor || p.ramification() != 1 {
        return r.fail(
            "witness",
            format!("norm {q} is even, ramified or equal to the conductor"),
        );
    }
    match unit_group_image(k, &a.units, &p) {
        Ok((got, full)) => {
            r.generated_order = Some(got);
            r.group_order = Some(full);
            if got == full {
                r.passed = true;
                r
            } else {
                r.fail(
                    "admissibility",
                    format!("units generate a subgroup of order {got} of {full}"),
                )
            }
        }
        Err(e) => r.fail("admissibility", e),
    }
}

fn check_unit_witness(
    k: &CubicField,
    e: &FieldElement,
    opts: &PipelineOptions,
    mut r: RowReport,
) -> RowReport {
    match search_for_unit(k, e, &opts.search) {
        Ok(Some(w)) => {
            let q = w.q();
            r.prime_q = Some(q);
            r.ideal = Some(w.prime.display(k).to_string());
            let full = q * (q - 1);
            r.generated_order = Some(full);
            r.group_order = Some(full);
            r.passed = true;
            r
        }
        Ok(None) => r.fail(
            "admissibility",
            format!(
                "the unit generates no (O_K/q^2)^x for split q <= {}",
                opts.search.q_max
            ),
        ),
        Err(err) => r.fail("admissibility", err),
    }
}

/// Parse and check one raw line; parse failures become row failures.
pub fn check_raw(raw: &RawRow, opts: &PipelineOptions) -> RowReport {
    match raw.parse() {
        Ok(row) => check_row(&row, raw.line, opts),
        Err(e) => {
            let f = raw.fields.first().and_then(|s| s.trim().parse().ok());
            RowReport::new(raw.line, f, raw.fields.get(2).cloned().unwrap_or_default())
                .fail("parse", e)
        }
    }
}

/// Check every row in parallel; the result is ordered by conductor, then
/// by line.
pub fn check_table(text: &str, opts: &PipelineOptions) -> Vec<RowReport> {
    let mut out: Vec<RowReport> = split_table(text)
        .par_iter()
        .map(|r| check_raw(r, opts))
        .collect();
    out.sort_by_key(|r| (r.conductor.unwrap_or(u64::MAX), r.line));
    out
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_else(|| "-".into())
}

/// Line-oriented report, one row per line, then a totals line.
pub fn report_text(rows: &[RowReport]) -> String {
    let mut s = String::from("# conductor\tresult\treading\tq\tideal\tgenerated/order\tdetail\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}/{}\t{}",
            opt(&r.conductor),
            if r.passed { "pass" } else { "FAIL" },
            r.interpretation.map(Interpretation::as_str).unwrap_or("-"),
            opt(&r.prime_q),
            opt(&r.ideal),
            opt(&r.generated_order),
            opt(&r.group_order),
            r.failure.as_deref().unwrap_or("")
        );
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "# {passed}/{} rows pass", rows.len());
    s
}

pub fn report_json(rows: &[RowReport]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("row reports serialize");
    s.push('\n');
    s
}

/// `|N(e)|` of an element witness, when it fits in `u64`.
pub fn element_norm(k: &CubicField, e: &FieldElement) -> Option<u64> {
    let n = k.norm(e);
    if !n.is_integer() {
        return None;
    }
    n.to_integer().abs().to_u64()
}
