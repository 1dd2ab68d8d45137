//! CSV report of class dimensions.

use cpnet_core::classes::{enumerate_class_with_budget, rtd, structural_report, td_class, vcd, Budget};
use cpnet_core::{ClassSpec, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimsRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub completeness: &'static str,
    pub instances: usize,
    pub concepts: usize,
    pub vcd: usize,
    pub td: usize,
    pub rtd: usize,
    pub is_maximum: bool,
    pub is_maximal: bool,
    pub is_intersection_closed: bool,
    pub is_extremal: bool,
}

pub fn dims_row(spec: &ClassSpec, budget: Budget) -> Result<DimsRow> {
    let class = enumerate_class_with_budget(spec, budget.steps)?;
    let report = structural_report(&class, budget)?;
    Ok(DimsRow {
        n: spec.n,
        m: spec.m,
        k: spec.k,
        completeness: if spec.is_complete() { "complete" } else { "incomplete" },
        instances: class.width(),
        concepts: class.len(),
        vcd: vcd(&class, budget)?,
        td: td_class(&class, budget)?,
        rtd: rtd(&class, budget)?,
        is_maximum: report.is_maximum,
        is_maximal: report.is_maximal,
        is_intersection_closed: report.is_intersection_closed,
        is_extremal: report.is_extremal,
    })
}

pub fn write_csv<W: std::io::Write>(rows: &[DimsRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
