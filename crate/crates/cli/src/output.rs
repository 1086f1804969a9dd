//! Record formatting: the CSV and JSON encodings of solved belts.
//!
//! Both encodings round-trip `f64` losslessly. CSV prints plain decimals
//! with 17 significant digits; JSON uses the shortest round-trip form that
//! `serde_json` emits.

use std::io::{self, Write};

use clonebelt_core::{belt_constants, solve_optimal, Belt, OptimalCloneResult};
use serde::Serialize;

pub const CSV_HEADER: &str = "theta1,theta2,alpha,beta,fbar,branch,K,P,Q,R";

/// One solved belt, flattened for output.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub theta1: f64,
    pub theta2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub fbar: f64,
    pub branch: String,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl OutputRecord {
    pub fn new(belt: &Belt, result: &OptimalCloneResult) -> Self {
        let consts = belt_constants(belt);
        Self {
            theta1: belt.theta1(),
            theta2: belt.theta2(),
            alpha: result.angles.alpha,
            beta: result.angles.beta,
            fbar: result.fbar,
            branch: result.branch.as_str().to_string(),
            k: consts.k,
            p: consts.p,
            q: consts.q,
            r: consts.r,
        }
    }

    pub fn for_belt(belt: &Belt) -> Self {
        Self::new(belt, &solve_optimal(belt))
    }

    fn csv_line(&self) -> String {
        [
            format_f64(self.theta1),
            format_f64(self.theta2),
            format_f64(self.alpha),
            format_f64(self.beta),
            format_f64(self.fbar),
            self.branch.clone(),
            format_f64(self.k),
            format_f64(self.p),
            format_f64(self.q),
            format_f64(self.r),
        ]
        .join(",")
    }
}

pub fn write_csv(records: &[OutputRecord], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for record in records {
        writeln!(out, "{}", record.csv_line())?;
    }
    Ok(())
}

pub fn write_json(records: &[OutputRecord], out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, records)?;
    writeln!(out)
}

/// Plain-decimal rendering with 17 significant digits, enough to round-trip
/// any finite `f64` exactly. Falls back to scientific notation for extreme
/// magnitudes that plain decimals would bloat.
pub fn format_f64(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let scientific = format!("{value:.16e}");
    let (mantissa, exponent) = scientific.split_once('e').expect("scientific form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 17);

    let mut out = String::new();
    if value < 0.0 {
        out.push('-');
    }
    if (-5..17).contains(&exponent) {
        if exponent >= 0 {
            let point = exponent as usize + 1;
            out.push_str(&digits[..point]);
            if point < digits.len() {
                out.push('.');
                out.push_str(&digits[point..]);
            }
        } else {
            out.push_str("0.");
            for _ in 0..(-exponent - 1) {
                out.push('0');
            }
            out.push_str(&digits);
        }
    } else {
        out.push_str(&digits[..1]);
        out.push('.');
        out.push_str(&digits[1..]);
        out.push('e');
        out.push_str(&exponent.to_string());
    }
    out
}
