//! Deterministic CSV output: `#` metadata lines, then a header and rows of
//! numbers with 12 significant digits.

use std::fmt::Write as _;

use qkr_core::experiment::ExperimentParams;

pub const UNITS_NOTE: &str =
    "momentum p in single-photon recoils (hbar k_L); ladder order n sits at p = 2(n + beta); \
epsilon, phi and scaled time are dimensionless (kbar = 8 omega_R T)";

/// Formats `x` like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Builder for one CSV document.
#[derive(Debug, Default)]
pub struct CsvDoc {
    text: String,
}

impl CsvDoc {
    pub fn new(command: &str) -> Self {
        let mut doc = CsvDoc::default();
        doc.meta("generator", &format!("qkr {}", env!("CARGO_PKG_VERSION")));
        doc.meta("command", command);
        doc.meta("units", UNITS_NOTE);
        doc
    }

    pub fn meta(&mut self, key: &str, value: &str) {
        let _ = writeln!(self.text, "# {key}={value}");
    }

    pub fn meta_num(&mut self, key: &str, value: f64) {
        self.meta(key, &fmt_num(value));
    }

    /// Every effective parameter, defaults included.
    pub fn params(&mut self, p: &ExperimentParams, epsilons: &[f64], sigma_res: f64) {
        self.meta("kicks", &p.kicks.to_string());
        let eps: Vec<String> = epsilons.iter().map(|e| fmt_num(*e)).collect();
        self.meta("epsilon", &eps.join(";"));
        self.meta_num("phi", p.phi);
        self.meta_num("sigma_bec", p.sigma_p);
        self.meta(
            "resolution_mode",
            if p.sigma_res.is_some() {
                "explicit"
            } else {
                "calibrated to initial sigma 0.43"
            },
        );
        self.meta_num("resolution", sigma_res);
        self.meta("members", &p.members.to_string());
        self.meta("nmax", &p.n_max.to_string());
        self.meta("midpoint_mode", &p.midpoint_mode.to_string());
        self.meta("metric", &p.metric.to_string());
        self.meta(
            "p0_source",
            if p.convolve_p0 {
                "convolved"
            } else {
                "unconvolved"
            },
        );
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.text.push_str(&columns.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(&fmt_num(*v));
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
