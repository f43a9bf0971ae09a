//! Annealing schedules `A(s)`, `B(s)` as piecewise-linear breakpoint tables.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub s: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    breakpoints: Vec<Breakpoint>,
}

impl AnnealSchedule {
    /// `A(s) = 1 − s`, `B(s) = s`.
    pub fn linear() -> Self {
        AnnealSchedule {
            breakpoints: vec![
                Breakpoint { s: 0.0, a: 1.0, b: 0.0 },
                Breakpoint { s: 1.0, a: 0.0, b: 1.0 },
            ],
        }
    }

    pub fn new(breakpoints: Vec<Breakpoint>) -> Result<Self> {
        for (k, bp) in breakpoints.iter().enumerate() {
            validate_row(k + 1, bp, k.checked_sub(1).map(|p| &breakpoints[p]))?;
        }
        check_endpoints(&breakpoints, breakpoints.len())?;
        Ok(AnnealSchedule { breakpoints })
    }

    /// Parses a `s,A,B` table. Lines starting with `#` are ignored.
    ///
    /// Row numbers in errors are line numbers of the source text.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["s", "A", "B"] {
            return Err(Error::ScheduleFormat {
                row: 1,
                reason: format!("expected header `s,A,B`, found `{}`", names.join(",")),
            });
        }

        let mut breakpoints: Vec<Breakpoint> = Vec::new();
        let mut last_line = 1;
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            last_line = line;
            if record.len() != 3 {
                return Err(Error::ScheduleFormat {
                    row: line,
                    reason: format!("expected 3 columns, found {}", record.len()),
                });
            }
            let field = |k: usize| -> Result<f64> {
                record[k].parse::<f64>().map_err(|_| Error::ScheduleFormat {
                    row: line,
                    reason: format!("`{}` is not a number", &record[k]),
                })
            };
            let bp = Breakpoint {
                s: field(0)?,
                a: field(1)?,
                b: field(2)?,
            };
            validate_row(line, &bp, breakpoints.last())?;
            breakpoints.push(bp);
        }
        check_endpoints(&breakpoints, last_line)?;
        Ok(AnnealSchedule { breakpoints })
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::from_csv(s.as_bytes())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "s,A,B")?;
        for bp in &self.breakpoints {
            writeln!(out, "{},{},{}", bp.s, bp.a, bp.b)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Piecewise-linear `(A(s), B(s))`.
    pub fn evaluate(&self, s: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(s));
        }
        let bps = &self.breakpoints;
        let hi = bps.partition_point(|bp| bp.s <= s);
        if hi == 0 {
            return Err(Error::Domain(s));
        }
        let lo = &bps[hi - 1];
        if lo.s == s || hi == bps.len() {
            return Ok((lo.a, lo.b));
        }
        let up = &bps[hi];
        let t = (s - lo.s) / (up.s - lo.s);
        Ok((lo.a + (up.a - lo.a) * t, lo.b + (up.b - lo.b) * t))
    }

    /// Non-fatal irregularities: monotonicity ripples and a nonzero `A(1)`.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for w in self.breakpoints.windows(2) {
            if w[1].a > w[0].a {
                out.push(format!("A increases between s = {} and s = {}", w[0].s, w[1].s));
            }
            if w[1].b < w[0].b {
                out.push(format!("B decreases between s = {} and s = {}", w[0].s, w[1].s));
            }
        }
        if let Some(last) = self.breakpoints.last() {
            if last.a != 0.0 {
                out.push(format!(
                    "A(1) = {} is nonzero; s = 1 is still treated as the classical endpoint only if A(1) = 0",
                    last.a
                ));
            }
        }
        out
    }
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self::linear()
    }
}

fn validate_row(row: usize, bp: &Breakpoint, prev: Option<&Breakpoint>) -> Result<()> {
    let fail = |reason: String| Err(Error::ScheduleFormat { row, reason });
    if !(bp.s.is_finite() && bp.a.is_finite() && bp.b.is_finite()) {
        return fail("non-finite value".into());
    }
    if !(0.0..=1.0).contains(&bp.s) {
        return fail(format!("s = {} is outside [0, 1]", bp.s));
    }
    if bp.a < 0.0 || bp.b < 0.0 {
        return fail(format!("negative schedule value (A = {}, B = {})", bp.a, bp.b));
    }
    match prev {
        None if bp.s != 0.0 => fail(format!("first breakpoint must be s = 0, found {}", bp.s)),
        Some(p) if bp.s <= p.s => fail(format!(
            "s values must be strictly increasing ({} after {})",
            bp.s, p.s
        )),
        _ => Ok(()),
    }
}

fn check_endpoints(bps: &[Breakpoint], row: usize) -> Result<()> {
    if bps.len() < 2 {
        return Err(Error::ScheduleFormat {
            row,
            reason: format!("need at least 2 breakpoints, found {}", bps.len()),
        });
    }
    if bps.last().map(|bp| bp.s) != Some(1.0) {
        return Err(Error::ScheduleFormat {
            row,
            reason: "last breakpoint must be s = 1".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_endpoints_and_interior() {
        let sch = AnnealSchedule::linear();
        assert_eq!(sch.evaluate(0.0).unwrap(), (1.0, 0.0));
        assert_eq!(sch.evaluate(1.0).unwrap(), (0.0, 1.0));
        assert_eq!(sch.evaluate(0.25).unwrap(), (0.75, 0.25));
        assert!(sch.warnings().is_empty());
    }

    #[test]
    fn minimal_table_midpoint() {
        let sch = AnnealSchedule::from_csv_str("s,A,B\n0,1.0,0.1\n1,0.0,1.2\n").unwrap();
        let (a, b) = sch.evaluate(0.5).unwrap();
        assert!((a - 0.5).abs() < 1e-15);
        assert!((b - 0.65).abs() < 1e-15);
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "# hardware table\ns, A, B\n0, 2, 0\n# mid\n0.5, 1, 1\n1, 0, 2\n";
        let sch = AnnealSchedule::from_csv_str(text).unwrap();
        assert_eq!(sch.breakpoints().len(), 3);
        assert_eq!(sch.evaluate(0.5).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn duplicate_abscissa_names_row() {
        let text = "s,A,B\n0,1,0\n0.5,0.5,0.5\n0.5,0.4,0.6\n1,0,1\n";
        match AnnealSchedule::from_csv_str(text) {
            Err(Error::ScheduleFormat { row, .. }) => assert_eq!(row, 4),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tables() {
        for text in [
            "s,A,B\n0.1,1,0\n1,0,1\n",
            "s,A,B\n0,1,0\n0.9,0,1\n",
            "s,A,B\n0,-1,0\n1,0,1\n",
            "s,A,B\n0,1,0\n",
            "t,A,B\n0,1,0\n1,0,1\n",
            "s,A,B\n0,1,x\n1,0,1\n",
        ] {
            assert!(
                matches!(AnnealSchedule::from_csv_str(text), Err(Error::ScheduleFormat { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        let sch = AnnealSchedule::linear();
        assert!(matches!(sch.evaluate(-0.01), Err(Error::Domain(_))));
        assert!(matches!(sch.evaluate(1.01), Err(Error::Domain(_))));
        assert!(sch.evaluate(f64::NAN).is_err());
    }

    #[test]
    fn ripple_and_nonzero_final_a_warn() {
        let sch = AnnealSchedule::from_csv_str("s,A,B\n0,1,0\n0.5,1.1,0.5\n1,0.01,1\n").unwrap();
        assert_eq!(sch.warnings().len(), 2);
    }
}
