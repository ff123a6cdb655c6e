//! Report documents: one serializable record per command, rendered either as
//! JSON or as aligned text. Reals carry 10 significant digits.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use nilentropy_core::entropy_sim::{CoverComparison, EntropyEstimate, EqualityReport};
use nilentropy_core::intpoly::RootLocation;
use nilentropy_core::spectral::Flags;
use nilentropy_core::{BoundReport, IntMatrix};

use crate::input::InputDocument;

pub const SIGNIFICANT_DIGITS: usize = 10;

/// `x` rounded to 10 significant digits.
pub fn sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// `x` printed with 10 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, sig(x))
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    }
}

fn ser_sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(sig(*x))
}

fn ser_sig_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| sig(x)))
}

fn ser_sig_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&sig(*v)),
        None => s.serialize_none(),
    }
}

/// Integer written as a JSON number when it fits in `i64`, else a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

fn int_rows(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.iter_rows()
        .map(|r| r.iter().cloned().map(Int).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: "nilentropy",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Parameters {
    #[serde(serialize_with = "ser_sig")]
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_sig_opt"
    )]
    pub delta_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearizationRecord {
    pub series_degrees: Vec<usize>,
    pub adapted_basis: Vec<Vec<Int>>,
    pub block_sizes: Vec<usize>,
    pub blocks: Vec<Vec<Vec<Int>>>,
    pub spectral_consistency: bool,
}

impl LinearizationRecord {
    pub fn new(
        degrees: &[usize],
        adapted: &IntMatrix,
        blocks: &[IntMatrix],
        spectral_consistency: bool,
    ) -> Self {
        LinearizationRecord {
            series_degrees: degrees.to_vec(),
            adapted_basis: int_rows(adapted),
            block_sizes: blocks.iter().map(|b| b.rows()).collect(),
            blocks: blocks.iter().map(int_rows).collect(),
            spectral_consistency,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueRecord {
    #[serde(serialize_with = "ser_sig")]
    pub re: f64,
    #[serde(serialize_with = "ser_sig")]
    pub im: f64,
    #[serde(serialize_with = "ser_sig")]
    pub modulus: f64,
    #[serde(serialize_with = "ser_sig")]
    pub radius: f64,
    pub multiplicity: usize,
    pub location: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbsoluteBoundRecord {
    pub name: &'static str,
    #[serde(serialize_with = "ser_sig")]
    pub value: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRecord {
    pub dimension: usize,
    /// Leading coefficient first.
    pub char_poly: Vec<Int>,
    pub determinant: Int,
    pub eigenvalues: Vec<EigenvalueRecord>,
    #[serde(serialize_with = "ser_sig")]
    pub sp_exterior: f64,
    #[serde(serialize_with = "ser_sig")]
    pub entropy_bound: f64,
    #[serde(serialize_with = "ser_sig")]
    pub entropy_bound_error: f64,
    pub flags: FlagsRecord,
    pub absolute_bounds: Vec<AbsoluteBoundRecord>,
    pub escalations: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FlagsRecord {
    pub quasi_unipotent: bool,
    pub hyperbolic: bool,
    pub expanding: bool,
    pub unimodular: bool,
    pub reciprocal_charpoly: bool,
    pub cyclotomic_charpoly: bool,
}

impl From<Flags> for FlagsRecord {
    fn from(f: Flags) -> Self {
        FlagsRecord {
            quasi_unipotent: f.quasi_unipotent,
            hyperbolic: f.hyperbolic,
            expanding: f.expanding,
            unimodular: f.unimodular,
            reciprocal_charpoly: f.reciprocal_charpoly,
            cyclotomic_charpoly: f.cyclotomic_charpoly,
        }
    }
}

pub fn location_name(l: RootLocation) -> &'static str {
    match l {
        RootLocation::Inside => "inside",
        RootLocation::OnCircle => "on_circle",
        RootLocation::Outside => "outside",
        RootLocation::Unresolved => "unresolved",
    }
}

impl From<&BoundReport> for BoundRecord {
    fn from(r: &BoundReport) -> Self {
        BoundRecord {
            dimension: r.dimension,
            char_poly: r.char_poly.descending().into_iter().map(Int).collect(),
            determinant: Int(r.determinant.clone()),
            eigenvalues: r
                .eigenvalues
                .iter()
                .map(|e| EigenvalueRecord {
                    re: e.value.re,
                    im: e.value.im,
                    modulus: e.modulus(),
                    radius: e.radius,
                    multiplicity: e.multiplicity,
                    location: location_name(e.location),
                })
                .collect(),
            sp_exterior: r.sp_exterior,
            entropy_bound: r.entropy_bound,
            entropy_bound_error: r.entropy_bound_error,
            flags: r.flags.into(),
            absolute_bounds: r
                .absolute_bounds
                .iter()
                .map(|b| AbsoluteBoundRecord {
                    name: b.name,
                    value: b.value,
                    note: b.note.clone(),
                })
                .collect(),
            escalations: r.escalations,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitRecord {
    #[serde(serialize_with = "ser_sig")]
    pub epsilon: f64,
    #[serde(serialize_with = "ser_sig")]
    pub delta: f64,
    pub candidates: usize,
    pub counts: Vec<usize>,
    pub window: Option<[usize; 2]>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateRecord {
    #[serde(serialize_with = "ser_sig")]
    pub estimate: f64,
    #[serde(serialize_with = "ser_sig")]
    pub best_epsilon: f64,
    pub monotone_in_n: bool,
    pub monotone_in_epsilon: bool,
    pub fits: Vec<FitRecord>,
}

impl From<&EntropyEstimate> for EstimateRecord {
    fn from(e: &EntropyEstimate) -> Self {
        EstimateRecord {
            estimate: e.estimate,
            best_epsilon: e.best_epsilon,
            monotone_in_n: e.monotone_in_n,
            monotone_in_epsilon: e.monotone_in_epsilon,
            fits: e
                .fits
                .iter()
                .map(|f| FitRecord {
                    epsilon: f.epsilon,
                    delta: f.delta,
                    candidates: f.candidates,
                    counts: f.counts.clone(),
                    window: f.window.map(|(a, b)| [a, b]),
                    slope: f.slope,
                    note: f.note.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityRecord {
    #[serde(serialize_with = "ser_sig")]
    pub entropy_bound: f64,
    #[serde(serialize_with = "ser_sig")]
    pub estimate: f64,
    #[serde(serialize_with = "ser_sig")]
    pub difference: f64,
    #[serde(serialize_with = "ser_sig")]
    pub tolerance: f64,
    pub agrees: bool,
    /// Estimate at most the bound plus 0.05.
    pub below_bound: bool,
}

impl EqualityRecord {
    pub fn new(r: &EqualityReport, tolerance: f64) -> Self {
        EqualityRecord {
            entropy_bound: r.bound.entropy_bound,
            estimate: r.estimate.estimate,
            difference: r.difference,
            tolerance,
            agrees: r.agrees_within(tolerance),
            below_bound: r.below_bound(0.05),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverRecord {
    pub lattice: Vec<Vec<Int>>,
    pub degree: u64,
    pub lifted_matrix: Vec<Vec<Int>>,
    #[serde(serialize_with = "ser_sig_vec")]
    pub lifted_translation: Vec<f64>,
    #[serde(serialize_with = "ser_sig")]
    pub epsilon_scale: f64,
    pub estimate: EstimateRecord,
    #[serde(serialize_with = "ser_sig")]
    pub difference: f64,
    #[serde(serialize_with = "ser_sig")]
    pub tolerance: f64,
    pub agrees: bool,
}

impl CoverRecord {
    pub fn new(lattice: &IntMatrix, degree: u64, c: &CoverComparison, tolerance: f64) -> Self {
        CoverRecord {
            lattice: int_rows(lattice),
            degree,
            lifted_matrix: int_rows(c.lift.matrix()),
            lifted_translation: c.lift.translation().to_vec(),
            epsilon_scale: c.epsilon_scale,
            estimate: (&c.cover).into(),
            difference: c.difference,
            tolerance,
            agrees: c.difference <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationRecord {
    pub estimate: EstimateRecord,
    pub equality: EqualityRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub command: &'static str,
    pub parameters: Parameters,
    pub input: InputDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linearization: Option<LinearizationRecord>,
    pub matrix: Vec<Vec<Int>>,
    pub bound: BoundRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationRecord>,
}

impl ReportDocument {
    pub fn new(
        command: &'static str,
        parameters: Parameters,
        input: InputDocument,
        matrix: &IntMatrix,
        bound: &BoundReport,
    ) -> Self {
        ReportDocument {
            tool: ToolInfo::default(),
            command,
            parameters,
            input,
            linearization: None,
            matrix: int_rows(matrix),
            bound: bound.into(),
            simulation: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            "{} {} {}",
            self.tool.name, self.tool.version, self.command
        );
        let _ = writeln!(w, "input: {}", self.input);
        if let Some(lin) = &self.linearization {
            let _ = writeln!(w, "\nlinearization");
            let _ = writeln!(w, "  series degrees      {:?}", lin.series_degrees);
            let _ = writeln!(w, "  adapted basis       {}", rows_text(&lin.adapted_basis));
            let _ = writeln!(w, "  block sizes         {:?}", lin.block_sizes);
            for (i, b) in lin.blocks.iter().enumerate() {
                let _ = writeln!(w, "  block {:<13} {}", i + 1, rows_text(b));
            }
            let _ = writeln!(w, "  spectral consistency {}", lin.spectral_consistency);
        }
        let b = &self.bound;
        let _ = writeln!(w, "\nbound");
        let _ = writeln!(w, "  matrix              {}", rows_text(&self.matrix));
        let _ = writeln!(w, "  char poly           {}", ints_text(&b.char_poly));
        let _ = writeln!(w, "  determinant         {}", b.determinant.0);
        let _ = writeln!(w, "  eigenvalues");
        for e in &b.eigenvalues {
            let _ = writeln!(
                w,
                "    {:>17} {:>+17}i  |z| {:>16}  r {:>16}  m {}  {}",
                fmt_sig(e.re),
                fmt_sig(e.im),
                fmt_sig(e.modulus),
                fmt_sig(e.radius),
                e.multiplicity,
                e.location
            );
        }
        let _ = writeln!(w, "  sp_exterior         {}", fmt_sig(b.sp_exterior));
        let _ = writeln!(w, "  entropy_bound       {}", fmt_sig(b.entropy_bound));
        let f = &b.flags;
        let _ = writeln!(
            w,
            "  flags               quasi_unipotent={} hyperbolic={} expanding={} unimodular={} reciprocal_charpoly={} cyclotomic_charpoly={}",
            f.quasi_unipotent, f.hyperbolic, f.expanding, f.unimodular, f.reciprocal_charpoly, f.cyclotomic_charpoly
        );
        if b.absolute_bounds.is_empty() {
            let _ = writeln!(w, "  absolute bounds     none");
        } else {
            let _ = writeln!(w, "  absolute bounds");
            for a in &b.absolute_bounds {
                let _ = writeln!(w, "    {:<10} {:>16}  {}", a.name, fmt_sig(a.value), a.note);
            }
        }
        for n in &b.notes {
            let _ = writeln!(w, "  note: {n}");
        }
        if let Some(sim) = &self.simulation {
            let _ = writeln!(w, "\nsimulation");
            estimate_text(w, "  ", &sim.estimate);
            let e = &sim.equality;
            let _ = writeln!(
                w,
                "  equality            bound {}  estimate {}  difference {}  tolerance {}  {}",
                fmt_sig(e.entropy_bound),
                fmt_sig(e.estimate),
                fmt_sig(e.difference),
                fmt_sig(e.tolerance),
                if e.agrees { "agrees" } else { "DIFFERS" }
            );
            if let Some(c) = &sim.cover {
                let _ = writeln!(w, "\ncover");
                let _ = writeln!(w, "  lattice             {}", rows_text(&c.lattice));
                let _ = writeln!(w, "  degree              {}", c.degree);
                let _ = writeln!(w, "  lifted matrix       {}", rows_text(&c.lifted_matrix));
                let t: Vec<String> = c.lifted_translation.iter().map(|&x| fmt_sig(x)).collect();
                let _ = writeln!(w, "  lifted translation  [{}]", t.join(", "));
                let _ = writeln!(w, "  epsilon scale       {}", fmt_sig(c.epsilon_scale));
                estimate_text(w, "  ", &c.estimate);
                let _ = writeln!(
                    w,
                    "  base vs cover       difference {}  tolerance {}  {}",
                    fmt_sig(c.difference),
                    fmt_sig(c.tolerance),
                    if c.agrees { "agrees" } else { "DIFFERS" }
                );
            }
        }
        out
    }
}

fn estimate_text(w: &mut String, indent: &str, e: &EstimateRecord) {
    for f in &e.fits {
        let window = f
            .window
            .map_or("-".to_string(), |[a, b]| format!("{a}..{b}"));
        let slope = f.slope.map_or("-".to_string(), fmt_sig);
        let _ = writeln!(
            w,
            "{indent}eps {:>12}  window {:>6}  slope {:>12}  N {:?}",
            fmt_sig(f.epsilon),
            window,
            slope,
            f.counts
        );
        if let Some(n) = &f.note {
            let _ = writeln!(w, "{indent}  note: {n}");
        }
    }
    let _ = writeln!(
        w,
        "{indent}estimate            {} (eps {})",
        fmt_sig(e.estimate),
        fmt_sig(e.best_epsilon)
    );
}

fn ints_text(v: &[Int]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.0.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn rows_text(rows: &[Vec<Int>]) -> String {
    let items: Vec<String> = rows.iter().map(|r| ints_text(r)).collect();
    format!("[{}]", items.join(", "))
}
