//! Tabular results and their CSV/JSON serialization.
//!
//! Numbers are rounded to 12 significant digits and printed without
//! locale dependence, so identical inputs give byte-identical files.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::analysis::SweepResult;
use crate::angle::AngleHamiltonian;
use crate::exact::Spectrum;
use crate::kernels::KernelValue;
use crate::semiclassical::SurfacePoint;
use crate::spectral::AngleSpectrum;
use crate::spin_models::Unit;
use crate::Result;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Fixed CSV rendering of a number; `-0` prints as `0`.
pub fn format_number(x: f64) -> String {
    let r = round_significant(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => csv_escape(t),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::from(round_significant(*x)),
            Cell::Num(_) | Cell::Missing => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Text(t) => Value::from(t.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(t: &str) -> Self {
        Cell::Text(t.to_string())
    }
}

impl From<String> for Cell {
    fn from(t: String) -> Self {
        Cell::Text(t)
    }
}

fn csv_escape(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

/// Named columns plus metadata. CSV carries only the columns; JSON also
/// carries the unit, the form tag and the summary values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: String,
    pub unit: Unit,
    pub form: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(kind: &str, unit: Unit, columns: &[&str]) -> Self {
        Self {
            kind: kind.to_string(),
            unit,
            form: None,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn with_form(mut self, form: &str) -> Self {
        self.form = Some(form.to_string());
        self
    }

    /// # Panics
    /// If the row length differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn add_summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("kind".into(), Value::from(self.kind.as_str()));
        root.insert("unit".into(), Value::from(self.unit.symbol()));
        if let Some(form) = &self.form {
            root.insert("form".into(), Value::from(form.as_str()));
        }
        if !self.summary.is_empty() {
            let summary: Map<String, Value> = self
                .summary
                .iter()
                .map(|(k, v)| (k.clone(), v.json()))
                .collect();
            root.insert("summary".into(), Value::Object(summary));
        }
        root.insert(
            "columns".into(),
            Value::Array(
                self.columns
                    .iter()
                    .map(|c| Value::from(c.as_str()))
                    .collect(),
            ),
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), v.json()))
                        .collect(),
                )
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        Value::Object(root)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json())?;
        writeln!(w)?;
        Ok(())
    }
}

pub fn spectrum_table(s: &Spectrum) -> Table {
    let mut t = Table::new("spectrum", s.unit, &["index", "energy", "source"]);
    for (i, &e) in s.values.iter().enumerate() {
        t.push(vec![i.into(), e.into(), s.source.tag().into()]);
    }
    t.add_summary("dimension", s.dimension);
    t
}

pub fn surface_table(points: &[SurfacePoint], unit: Unit) -> Table {
    let mut t = Table::new("surface", unit, &["alpha", "energy"]);
    for p in points {
        t.push(vec![p.alpha.into(), p.energy.into()]);
    }
    if let Some(p) = points.first() {
        t.add_summary("xi", p.xi);
    }
    t
}

pub fn kernel_table(values: &[KernelValue], unit: Unit) -> Table {
    let mut t = Table::new(
        "kernels",
        unit,
        &["theta", "phi_bar", "energy_re", "energy_im", "overlap"],
    );
    for k in values {
        t.push(vec![
            k.theta.into(),
            k.phi_bar.into(),
            k.energy.re.into(),
            k.energy.im.into(),
            k.overlap.into(),
        ]);
    }
    t
}

/// `V`, `I`, `K` sampled on `points` equally spaced angles over `[-π, π]`.
pub fn angle_table(h: &AngleHamiltonian, points: usize) -> Table {
    let mut t = Table::new("angle", h.unit(), &["phi", "V", "I", "K"]).with_form(h.form.tag());
    let points = points.max(2);
    for i in 0..points {
        let phi = -PI + 2.0 * PI * i as f64 / (points - 1) as f64;
        t.push(vec![
            phi.into(),
            h.potential.eval(phi).into(),
            h.inertia.eval(phi).into(),
            h.kinetic_coeff.eval(phi).into(),
        ]);
    }
    t
}

pub fn angle_spectrum_table(s: &AngleSpectrum, form: &str) -> Table {
    let mut t = spectrum_table(&s.spectrum).with_form(form);
    t.add_summary("n_max", s.n_max);
    t.add_summary("converged", s.converged);
    t.add_summary("drift", s.drift);
    t
}

/// Side-by-side exact and angle energies for the lowest levels.
pub fn compare_table(exact: &Spectrum, angle: &AngleSpectrum, form: &str) -> Table {
    let mut t = Table::new(
        "compare",
        exact.unit,
        &["index", "exact", "angle", "relative_error"],
    )
    .with_form(form);
    for (i, (&e, &a)) in exact.values.iter().zip(&angle.spectrum.values).enumerate() {
        t.push(vec![
            i.into(),
            e.into(),
            a.into(),
            crate::analysis::relative_error(a, e).into(),
        ]);
    }
    let ge = exact.ground();
    let ga = angle.ground();
    t.add_summary("ground_exact", ge);
    t.add_summary("ground_angle", ga);
    t.add_summary("relative_error", crate::analysis::relative_error(ga, ge));
    t.add_summary("converged", angle.converged);
    t
}

pub fn sweep_table(r: &SweepResult) -> Table {
    let mut t = Table::new(
        "sweep",
        r.unit,
        &[
            "parameter_name",
            "parameter_value",
            "ground_exact",
            "ground_angle",
            "relative_error",
            "barrier_height",
            "inertia_min",
            "blocked",
            "status",
        ],
    )
    .with_form("large_n_closed");
    for row in &r.rows {
        t.push(vec![
            r.parameter_name.as_str().into(),
            row.parameter_value.into(),
            row.ground_exact.into(),
            row.ground_angle.into(),
            row.relative_error.into(),
            row.barrier_height.into(),
            row.inertia_min.into(),
            row.blocked.into(),
            row.status.as_str().into(),
        ]);
    }
    t
}

/// `phi, psi_0_re, psi_0_im, ...` for the lowest `count` eigenfunctions.
pub fn eigenfunction_table(s: &AngleSpectrum, count: usize, points: usize) -> Table {
    let count = count.min(s.spectrum.values.len());
    let mut names = vec!["phi".to_string()];
    for k in 0..count {
        names.push(format!("psi_{k}_re"));
        names.push(format!("psi_{k}_im"));
    }
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = Table::new("eigenfunctions", s.spectrum.unit, &cols);
    for (phi, psi) in crate::spectral::eigenfunction_table(s, count, points) {
        let mut row = vec![Cell::Num(phi)];
        for z in psi {
            row.push(z.re.into());
            row.push(z.im.into());
        }
        if row.len() == t.columns.len() {
            t.push(row);
        }
    }
    t
}
