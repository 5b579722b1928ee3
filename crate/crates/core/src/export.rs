//! CSV and JSON artifacts. Floats are written with 17 significant digits so
//! that files round-trip exactly.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::airy::AiryZeroTable;
use crate::bands::{BandAssignment, BandCurveRow};
use crate::error::{Error, Result};
use crate::sphere::{BoundaryCondition, ResonanceRecord};

pub const RESONANCE_HEADER: [&str; 7] = ["bc", "l", "re_lambda", "im_lambda", "multiplicity", "band_kind", "band_index"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per zero; `ratio_j = ζ'_j / ((3/2)jπ)^{2/3}`.
pub fn write_zero_table_csv<W: Write>(table: &AiryZeroTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "zeta_j", "zeta_prime_j", "e_j_0", "norm_j", "ratio_j"])?;
    for j in 1..=table.count() {
        let leading = (1.5 * j as f64 * std::f64::consts::PI).powf(2.0 / 3.0);
        w.write_record([
            j.to_string(),
            num(table.zeta(j)),
            num(table.zeta_prime(j)),
            num(table.boundary_value(j)),
            num(table.norm(j)),
            num(table.zeta_prime(j) / leading),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_resonances_csv<W: Write>(records: &[ResonanceRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESONANCE_HEADER)?;
    for r in records {
        w.write_record([
            r.bc.tag(),
            r.l.to_string(),
            num(r.lambda.re),
            num(r.lambda.im),
            r.multiplicity.to_string(),
            r.band.kind().to_string(),
            r.band.index().map(|j| j.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records written by [`write_resonances_csv`]. An empty input, with or
/// without a header, gives no records.
pub fn read_resonances_csv<R: Read>(input: R) -> Result<Vec<ResonanceRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rdr.headers()?.clone();
    if !headers.is_empty() && headers.iter().ne(RESONANCE_HEADER) {
        return Err(Error::invalid(format!("unexpected resonance header {:?}", headers.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let bad = |what: &str| Error::invalid(format!("record {}: bad {what}", line + 1));
        let field = |i: usize| row.get(i).ok_or_else(|| bad(RESONANCE_HEADER[i]));
        let bc = BoundaryCondition::parse(field(0)?)?;
        let l: usize = field(1)?.parse().map_err(|_| bad("l"))?;
        let re: f64 = field(2)?.parse().map_err(|_| bad("re_lambda"))?;
        let im: f64 = field(3)?.parse().map_err(|_| bad("im_lambda"))?;
        let multiplicity: usize = field(4)?.parse().map_err(|_| bad("multiplicity"))?;
        let index = match field(6)? {
            "" => None,
            s => Some(s.parse().map_err(|_| bad("band_index"))?),
        };
        let band = BandAssignment::from_parts(field(5)?, index).ok_or_else(|| bad("band"))?;
        out.push(ResonanceRecord { lambda: Complex64::new(re, im), l, bc, multiplicity, band });
    }
    Ok(out)
}

/// Wide format: `re_lambda, lower_1, upper_1, lower_2, upper_2, …`.
pub fn write_band_curves_csv<W: Write>(rows: &[BandCurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let bands = rows.first().map_or(0, |r| r.edges.len());
    let mut header = vec!["re_lambda".to_string()];
    for j in 1..=bands {
        header.push(format!("lower_{j}"));
        header.push(format!("upper_{j}"));
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![num(r.re_lambda)];
        for (lo, hi) in &r.edges {
            rec.push(num(*lo));
            rec.push(num(*hi));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_round_trip() {
        let recs = vec![
            ResonanceRecord {
                lambda: Complex64::new(0.1 + 0.2, -1.0 / 3.0),
                l: 3,
                bc: BoundaryCondition::Robin(0.5),
                multiplicity: 7,
                band: BandAssignment::Band(2),
            },
            ResonanceRecord {
                lambda: Complex64::new(0.0, -1.0),
                l: 0,
                bc: BoundaryCondition::Neumann,
                multiplicity: 1,
                band: BandAssignment::TooSmallRe,
            },
        ];
        let mut buf = Vec::new();
        write_resonances_csv(&recs, &mut buf).unwrap();
        assert_eq!(read_resonances_csv(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn empty_inputs() {
        assert!(read_resonances_csv(&b""[..]).unwrap().is_empty());
        let mut buf = Vec::new();
        write_resonances_csv(&[], &mut buf).unwrap();
        assert!(read_resonances_csv(buf.as_slice()).unwrap().is_empty());
        assert!(read_resonances_csv(&b"a,b\n1,2\n"[..]).is_err());
    }
}
