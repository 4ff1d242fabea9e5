//! Run records and their CSV and JSON forms.
//!
//! Values are stored in nats and converted only when written. Numbers are
//! written with 17 significant digits so every `f64` survives a round trip.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::gie::{analytic_eve_optimum, evaluate_closed_form_with, gie_numeric, GieResult};
use crate::optimize::TracePoint;
use crate::renyi2::gr2_family;
use crate::states::{make_family, FamilyTag, StateFamily};
use serde_json::{Map, Number, Value};
use std::io::{Read, Write};
use std::str::FromStr;

pub const CSV_HEADER: [&str; 11] =
    ["family", "a", "b", "kx", "kp", "gie_closed_nats", "gie_numeric_nats", "gr2_nats", "gap", "verified", "eve_optimum"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn scale(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

pub fn csv_header(units: Units) -> Vec<String> {
    CSV_HEADER.iter().map(|h| h.replace("_nats", &format!("_{}", units.suffix()))).collect()
}

/// Decimal with 17 significant digits; scientific outside `1e-7 ..= 1e16`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let e = x.abs().log10().floor() as i32;
    if (-7..=15).contains(&e) {
        let prec = (16 - e) as usize;
        format!("{x:.prec$}")
    } else {
        format!("{x:.16e}")
    }
}

fn json_number(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format_number(x)).expect("formatted finite numbers are valid JSON"))
    } else {
        Value::String(format_number(x))
    }
}

fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_number)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NumericDetails {
    pub upper_bound: Option<f64>,
    pub discrepancy: Option<f64>,
    pub converged: bool,
    pub evaluations: usize,
    pub diagnostics: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub family: FamilyTag,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub kx: Option<f64>,
    pub kp: Option<f64>,
    /// Squeezing parameter, for the CV GHZ family only.
    pub r: Option<f64>,
    pub gie_closed: Option<f64>,
    pub gie_numeric: Option<f64>,
    pub gr2: Option<f64>,
    pub gap: Option<f64>,
    pub verified: bool,
    pub eve_optimum: Option<String>,
    pub note: Option<String>,
    pub trace_path: Option<String>,
    pub numeric: Option<NumericDetails>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecordOptions {
    pub numeric: bool,
    pub with_gr2: bool,
}

impl RunRecord {
    /// Record for parameters that do not describe a physical state.
    pub fn rejected(family: FamilyTag, a: Option<f64>, b: Option<f64>, kx: Option<f64>, kp: Option<f64>, note: String) -> RunRecord {
        RunRecord {
            family,
            a,
            b,
            kx,
            kp,
            r: None,
            gie_closed: None,
            gie_numeric: None,
            gr2: None,
            gap: None,
            verified: false,
            eve_optimum: None,
            note: Some(note),
            trace_path: None,
            numeric: None,
        }
    }

    /// Rebuilds the family the record was computed for.
    pub fn family_input(&self) -> Result<StateFamily> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::InvalidInput(format!("record has no `{name}`")));
        Ok(match self.family {
            FamilyTag::Pure => StateFamily::Pure { a: need(self.a, "a")? },
            FamilyTag::SymGlems => StateFamily::SymGlems { a: need(self.a, "a")?, kp: need(self.kp, "kp")? },
            FamilyTag::SymSqThermal => StateFamily::SymSqThermal { a: need(self.a, "a")?, k: need(self.kx, "kx")? },
            FamilyTag::AsymGlems => StateFamily::AsymGlems { a: need(self.a, "a")?, b: need(self.b, "b")? },
            FamilyTag::CvGhz => StateFamily::CvGhz { r: need(self.r, "r")? },
            FamilyTag::Generic => StateFamily::Generic(crate::states::StdForm::new(
                need(self.a, "a")?,
                need(self.b, "b")?,
                need(self.kx, "kx")?,
                need(self.kp, "kp")?,
            )?),
        })
    }

    pub fn to_json(&self, units: Units) -> Value {
        let u = units.suffix();
        let scaled = |v: Option<f64>| json_opt(v.map(|x| units.scale(x)));
        let mut m = Map::new();
        m.insert("family".into(), Value::String(self.family.name().into()));
        m.insert("a".into(), json_opt(self.a));
        m.insert("b".into(), json_opt(self.b));
        m.insert("kx".into(), json_opt(self.kx));
        m.insert("kp".into(), json_opt(self.kp));
        if let Some(r) = self.r {
            m.insert("r".into(), json_number(r));
        }
        m.insert(format!("gie_closed_{u}"), scaled(self.gie_closed));
        m.insert(format!("gie_numeric_{u}"), scaled(self.gie_numeric));
        m.insert(format!("gr2_{u}"), scaled(self.gr2));
        m.insert("gap".into(), scaled(self.gap));
        m.insert("verified".into(), Value::Bool(self.verified));
        m.insert("eve_optimum".into(), self.eve_optimum.clone().map_or(Value::Null, Value::String));
        m.insert("trace_path".into(), self.trace_path.clone().map_or(Value::Null, Value::String));
        m.insert("units".into(), Value::String(u.into()));
        if let Some(note) = &self.note {
            m.insert("note".into(), Value::String(note.clone()));
        }
        if let Some(d) = &self.numeric {
            let mut n = Map::new();
            n.insert(format!("upper_bound_{u}"), scaled(d.upper_bound));
            n.insert("discrepancy".into(), scaled(d.discrepancy));
            n.insert("converged".into(), Value::Bool(d.converged));
            n.insert("evaluations".into(), Value::from(d.evaluations));
            let diag: Map<String, Value> = d.diagnostics.iter().map(|(k, v)| (k.clone(), json_number(*v))).collect();
            n.insert("diagnostics".into(), Value::Object(diag));
            m.insert("numeric".into(), Value::Object(n));
        }
        Value::Object(m)
    }

    /// Parses a record written in nats by [`RunRecord::to_json`]. The
    /// numeric details are not read back.
    pub fn from_json(v: &Value) -> Result<RunRecord> {
        let obj = v.as_object().ok_or_else(|| Error::InvalidInput("record must be a JSON object".into()))?;
        if obj.get("units").and_then(Value::as_str).unwrap_or("nats") != "nats" {
            return Err(Error::InvalidInput("only records in nats can be read back".into()));
        }
        let num = |k: &str| -> Result<Option<f64>> {
            match obj.get(k) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::Number(n)) => Ok(n.as_f64()),
                Some(other) => Err(Error::InvalidInput(format!("`{k}` is not a number: {other}"))),
            }
        };
        let text = |k: &str| obj.get(k).and_then(Value::as_str).map(str::to_string);
        let family = text("family").ok_or_else(|| Error::InvalidInput("record has no family".into()))?.parse::<FamilyTag>()?;
        Ok(RunRecord {
            family,
            a: num("a")?,
            b: num("b")?,
            kx: num("kx")?,
            kp: num("kp")?,
            r: num("r")?,
            gie_closed: num("gie_closed_nats")?,
            gie_numeric: num("gie_numeric_nats")?,
            gr2: num("gr2_nats")?,
            gap: num("gap")?,
            verified: obj.get("verified").and_then(Value::as_bool).unwrap_or(false),
            eve_optimum: text("eve_optimum"),
            note: text("note"),
            trace_path: text("trace_path"),
            numeric: None,
        })
    }

    pub fn csv_fields(&self, units: Units) -> Vec<String> {
        let plain = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        let scaled = |v: Option<f64>| v.map(|x| format_number(units.scale(x))).unwrap_or_default();
        vec![
            self.family.name().to_string(),
            plain(self.a),
            plain(self.b),
            plain(self.kx),
            plain(self.kp),
            scaled(self.gie_closed),
            scaled(self.gie_numeric),
            scaled(self.gr2),
            scaled(self.gap),
            self.verified.to_string(),
            self.eve_optimum.clone().unwrap_or_default(),
        ]
    }

    /// Parses one CSV row in nats.
    pub fn from_csv_fields(fields: &[&str]) -> Result<RunRecord> {
        if fields.len() != CSV_HEADER.len() {
            return Err(Error::InvalidInput(format!("expected {} fields, got {}", CSV_HEADER.len(), fields.len())));
        }
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>().map(Some).map_err(|_| Error::InvalidInput(format!("bad number `{s}`")))
            }
        };
        Ok(RunRecord {
            family: fields[0].parse()?,
            a: num(fields[1])?,
            b: num(fields[2])?,
            kx: num(fields[3])?,
            kp: num(fields[4])?,
            r: None,
            gie_closed: num(fields[5])?,
            gie_numeric: num(fields[6])?,
            gr2: num(fields[7])?,
            gap: num(fields[8])?,
            verified: fields[9].parse().map_err(|_| Error::InvalidInput(format!("bad boolean `{}`", fields[9])))?,
            eve_optimum: (!fields[10].is_empty()).then(|| fields[10].to_string()),
            note: None,
            trace_path: None,
            numeric: None,
        })
    }
}

/// Evaluates one family member.
///
/// Outside the proven domains the closed form is still reported, with
/// `verified = false`.
pub fn compute_record(fam: &StateFamily, opts: RecordOptions, cfg: &Config) -> Result<(RunRecord, Option<GieResult>)> {
    let p = make_family(fam)?;
    let closed = evaluate_closed_form_with(fam, cfg)?;
    let mut notes: Vec<String> = closed.note.iter().cloned().collect();
    let mut rec = RunRecord {
        family: fam.tag(),
        a: Some(p.a),
        b: Some(p.b),
        kx: Some(p.kx),
        kp: Some(p.kp),
        r: match *fam {
            StateFamily::CvGhz { r } => Some(r),
            _ => None,
        },
        gie_closed: closed.value,
        gie_numeric: None,
        gr2: None,
        gap: None,
        verified: closed.verified,
        eve_optimum: if closed.verified { analytic_eve_optimum(fam).map(str::to_string) } else { None },
        note: None,
        trace_path: None,
        numeric: None,
    };
    let mut full = None;
    if opts.numeric {
        match gie_numeric(fam, cfg) {
            Ok(r) => {
                rec.gie_numeric = Some(r.numeric);
                rec.eve_optimum = Some(r.eve_optimum.clone());
                if !r.converged {
                    notes.push("optimizer refinement did not converge".into());
                }
                rec.numeric = Some(NumericDetails {
                    upper_bound: r.upper_bound,
                    discrepancy: r.discrepancy,
                    converged: r.converged,
                    evaluations: r.evaluations,
                    diagnostics: r.diagnostics.clone(),
                });
                full = Some(r);
            }
            Err(Error::DomainNotCovered { reason, .. }) => notes.push(reason),
            Err(e) => return Err(e),
        }
    }
    if opts.with_gr2 {
        match gr2_family(fam) {
            Ok(g) => {
                rec.gr2 = Some(g);
                rec.gap = closed.value.map(|c| (c - g).abs());
            }
            Err(Error::DomainNotCovered { reason, .. }) => notes.push(reason),
            Err(e) => return Err(e),
        }
    }
    if !notes.is_empty() {
        rec.note = Some(notes.join("; "));
    }
    Ok((rec, full))
}

pub fn write_csv<W: Write>(out: W, records: &[RunRecord], units: Units) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(csv_header(units)).map_err(io)?;
    for r in records {
        w.write_record(r.csv_fields(units)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written in nats by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let io = |e: csv::Error| Error::InvalidInput(e.to_string());
    let header = rd.headers().map_err(io)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::InvalidInput(format!("unexpected header {:?}", header)));
    }
    rd.records()
        .map(|row| {
            let row = row.map_err(io)?;
            RunRecord::from_csv_fields(&row.iter().collect::<Vec<_>>())
        })
        .collect()
}

/// Optimizer trace as JSON; infinite coordinates are written as strings.
pub fn trace_json(trace: &[TracePoint]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|t| {
                let mut m = Map::new();
                m.insert("params".into(), Value::Array(t.params.iter().map(|&x| json_number(x)).collect()));
                m.insert("value".into(), json_number(t.value));
                Value::Object(m)
            })
            .collect(),
    )
}
