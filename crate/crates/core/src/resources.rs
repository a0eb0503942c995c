//! Closed-form resource models and the size/depth comparison table.
//!
//! All model evaluation is exact integer arithmetic; ⌊log₂⌋ terms use
//! bit operations rather than floating-point logs. ⌊log₂(n/3)⌋ is the
//! largest k with 3·2^k ≤ n, which avoids boundary errors at n = 3·2^k.
//!
//! The carry-lookahead depth model ⌊log₂n⌋ + ⌊log₂(n/3)⌋ + 5 is defined
//! for n ≥ 3 (the second floor is negative below that). The size models
//! are 1011n + 224n⌊log₂n⌋ for the lookahead adder and 304n for the
//! ripple-carry adder. The ripple-carry depth is linear with an
//! unspecified constant, so it is exposed as an explicit coefficient;
//! the default c = 1 is a trend placeholder, not a published value.

use std::fmt::Write as _;

use crate::adders::{qcla_out_of_place, vbe_ripple};
use crate::compile::compile;
use crate::error::{Error, Result};

fn floor_log2(n: u64) -> u64 {
    n.ilog2() as u64
}

/// Largest k ≥ 0 with 3·2^k ≤ n; errors for n < 3.
fn floor_log2_div3(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "depth formula requires n ≥ 3, got {n}"
        )));
    }
    let mut k = 0u64;
    while 3u64 << (k + 1) <= n {
        k += 1;
    }
    Ok(k)
}

/// ⌊log₂n⌋ + ⌊log₂(n/3)⌋ + 5, for n ≥ 3.
pub fn qcla_depth_formula(n: u64) -> Result<u64> {
    Ok(floor_log2(n) + floor_log2_div3(n)? + 5)
}

/// 1011n + 224n⌊log₂n⌋, for n ≥ 1.
pub fn qcla_size_formula(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("size formula requires n ≥ 1".into()));
    }
    Ok(1011 * n + 224 * n * floor_log2(n))
}

/// 304n, for n ≥ 1.
pub fn vbe_size_formula(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("size formula requires n ≥ 1".into()));
    }
    Ok(304 * n)
}

/// Linear ripple-carry depth trend c·n with explicit coefficient c > 0.
pub fn vbe_depth_model(n: u64, c: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("depth model requires n ≥ 1".into()));
    }
    if c <= 0.0 {
        return Err(Error::Domain(format!(
            "depth coefficient must be positive, got {c}"
        )));
    }
    Ok(c * n as f64)
}

/// Smallest n ≥ 3 where the lookahead depth drops below c·n, found by
/// scan.
pub fn depth_crossover(c: f64) -> Result<Option<u64>> {
    if c <= 0.0 {
        return Err(Error::Domain(format!(
            "depth coefficient must be positive, got {c}"
        )));
    }
    for n in 3..=4096u64 {
        if (qcla_depth_formula(n)? as f64) < c * n as f64 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Model values for one bit width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub n: u64,
    pub qcla_depth: u64,
    pub qcla_size: u64,
    pub vbe_depth: f64,
    pub vbe_size: u64,
}

pub fn model_point(n: u64, c: f64) -> Result<ModelPoint> {
    Ok(ModelPoint {
        n,
        qcla_depth: qcla_depth_formula(n)?,
        qcla_size: qcla_size_formula(n)?,
        vbe_depth: vbe_depth_model(n, c)?,
        vbe_size: vbe_size_formula(n)?,
    })
}

/// Compiler-measured values for one bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasuredPoint {
    pub qcla_depth: u64,
    pub qcla_sites: u64,
    pub vbe_depth: u64,
    pub vbe_sites: u64,
}

pub fn measure_point(n: u64) -> Result<MeasuredPoint> {
    let (_, _, qcla) = compile(&qcla_out_of_place(n as usize)?)?;
    let (_, _, vbe) = compile(&vbe_ripple(n as usize)?)?;
    Ok(MeasuredPoint {
        qcla_depth: qcla.mbqc_depth,
        qcla_sites: qcla.lattice_sites,
        vbe_depth: vbe.mbqc_depth,
        vbe_sites: vbe.lattice_sites,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub model: ModelPoint,
    pub measured: Option<MeasuredPoint>,
}

/// One row per n in `[n_from, n_to]`; with `measure`, both adders are
/// compiled per n to fill the measured columns.
pub fn compare_table(n_from: u64, n_to: u64, c: f64, measure: bool) -> Result<Vec<CompareRow>> {
    if n_from < 3 || n_from > n_to {
        return Err(Error::Usage(format!(
            "invalid range {n_from}..{n_to}: need 3 ≤ from ≤ to"
        )));
    }
    (n_from..=n_to)
        .map(|n| {
            Ok(CompareRow {
                model: model_point(n, c)?,
                measured: if measure { Some(measure_point(n)?) } else { None },
            })
        })
        .collect()
}

fn fmt_depth(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as u64)
    } else {
        format!("{v}")
    }
}

/// CSV emission with the fixed column order; measured columns are empty
/// when compilation was skipped.
pub fn write_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(
        "n,qcla_depth_formula,qcla_size_formula,vbe_depth_model,vbe_size_formula,\
         measured_qcla_depth,measured_qcla_sites,measured_vbe_depth,measured_vbe_sites\n",
    );
    for row in rows {
        let m = &row.model;
        let _ = write!(
            out,
            "{},{},{},{},{}",
            m.n,
            m.qcla_depth,
            m.qcla_size,
            fmt_depth(m.vbe_depth),
            m.vbe_size
        );
        match &row.measured {
            Some(meas) => {
                let _ = writeln!(
                    out,
                    ",{},{},{},{}",
                    meas.qcla_depth, meas.qcla_sites, meas.vbe_depth, meas.vbe_sites
                );
            }
            None => out.push_str(",,,,\n"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_formula_values() {
        assert_eq!(qcla_depth_formula(10).unwrap(), 9);
        assert_eq!(qcla_depth_formula(3).unwrap(), 6);
        assert_eq!(qcla_depth_formula(64).unwrap(), 15);
    }

    #[test]
    fn depth_domain_error_below_three() {
        assert!(matches!(qcla_depth_formula(2), Err(Error::Domain(_))));
    }

    #[test]
    fn size_formula_values() {
        assert_eq!(qcla_size_formula(1).unwrap(), 1011);
        assert_eq!(qcla_size_formula(10).unwrap(), 16830);
        assert_eq!(qcla_size_formula(16).unwrap(), 30512);
        assert_eq!(vbe_size_formula(1).unwrap(), 304);
        assert_eq!(vbe_size_formula(10).unwrap(), 3040);
        assert_eq!(vbe_size_formula(100).unwrap(), 30400);
    }

    #[test]
    fn vbe_depth_model_values() {
        assert_eq!(vbe_depth_model(10, 1.0).unwrap(), 10.0);
        assert_eq!(vbe_depth_model(10, 3.0).unwrap(), 30.0);
        assert!(vbe_depth_model(10, 0.0).is_err());
    }

    #[test]
    fn crossover_at_ten_for_unit_coefficient() {
        assert_eq!(depth_crossover(1.0).unwrap(), Some(10));
    }

    #[test]
    fn log_div3_exact_at_boundaries() {
        // exact at n = 3·2^k
        assert_eq!(floor_log2_div3(3).unwrap(), 0);
        assert_eq!(floor_log2_div3(5).unwrap(), 0);
        assert_eq!(floor_log2_div3(6).unwrap(), 1);
        assert_eq!(floor_log2_div3(11).unwrap(), 1);
        assert_eq!(floor_log2_div3(12).unwrap(), 2);
        assert_eq!(floor_log2_div3(48).unwrap(), 4);
    }

    #[test]
    fn formulas_monotone_and_dominant() {
        let mut prev_depth = 0;
        let mut prev_qcla = 0;
        let mut prev_vbe = 0;
        for n in 3..=256 {
            let d = qcla_depth_formula(n).unwrap();
            let sq = qcla_size_formula(n).unwrap();
            let sv = vbe_size_formula(n).unwrap();
            assert!(d >= prev_depth);
            assert!(sq >= prev_qcla);
            assert!(sv >= prev_vbe);
            assert!(sq > sv, "qcla size must dominate at n={n}");
            prev_depth = d;
            prev_qcla = sq;
            prev_vbe = sv;
        }
    }

    #[test]
    fn compare_table_single_row() {
        let rows = compare_table(10, 10, 1.0, false).unwrap();
        assert_eq!(rows.len(), 1);
        let m = rows[0].model;
        assert_eq!(
            (m.qcla_depth, m.qcla_size, m.vbe_depth, m.vbe_size),
            (9, 16830, 10.0, 3040)
        );
    }

    #[test]
    fn compare_table_rejects_bad_range() {
        assert!(compare_table(2, 10, 1.0, false).is_err());
        assert!(compare_table(10, 3, 1.0, false).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = compare_table(3, 4, 1.0, false).unwrap();
        let csv = write_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,qcla_depth_formula,qcla_size_formula,vbe_depth_model,vbe_size_formula,\
             measured_qcla_depth,measured_qcla_sites,measured_vbe_depth,measured_vbe_sites"
        );
        assert_eq!(lines.next().unwrap(), "3,6,3705,3,912,,,,");
        assert!(rows[1].model.qcla_size > rows[0].model.qcla_size);
    }

    #[test]
    fn measured_columns_filled() {
        let rows = compare_table(4, 4, 1.0, true).unwrap();
        let meas = rows[0].measured.unwrap();
        assert!(meas.qcla_depth > 0);
        assert!(meas.vbe_depth > meas.qcla_depth || meas.vbe_depth > 0);
        let csv = write_csv(&rows);
        assert!(!csv.lines().nth(1).unwrap().ends_with(",,,,"));
    }
}
