use std::io::{Read, Write};

use super::IoError;
use crate::singular_quadrature::ProfileSample;

pub const CSV_HEADER: [&str; 3] = ["alpha", "u", "du"];

fn cell(x: f64) -> String {
    format!("{x:.13e}")
}

fn csv_failure(e: csv::Error) -> IoError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(e) => IoError::Io(e),
        kind => IoError::MalformedCsv {
            line,
            reason: format!("{kind:?}"),
        },
    }
}

/// Writes `alpha,u,du` rows with 14 significant digits and LF line ends.
pub fn write_profile_csv<W: Write>(out: W, samples: &[ProfileSample]) -> Result<(), IoError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_failure)?;
    for s in samples {
        w.write_record([cell(s.alpha), cell(s.u), cell(s.du)])
            .map_err(csv_failure)?;
    }
    w.flush()?;
    Ok(())
}

pub fn profile_csv_string(samples: &[ProfileSample]) -> String {
    let mut buf = Vec::new();
    write_profile_csv(&mut buf, samples).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads a table written by [`write_profile_csv`]. `α` and `u` must be
/// finite and `α` strictly increasing; `du` may be `±inf` at a vertical end.
pub fn read_profile_csv<R: Read>(input: R) -> Result<Vec<ProfileSample>, IoError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(csv_failure)?.clone();
    if header.iter().map(str::trim).ne(CSV_HEADER) {
        return Err(IoError::MalformedCsv {
            line: 1,
            reason: format!("expected header alpha,u,du, found {}", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut out: Vec<ProfileSample> = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_failure)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |reason: String| IoError::MalformedCsv { line, reason };
        let mut v = [0.0f64; 3];
        for (k, slot) in v.iter_mut().enumerate() {
            let text = record.get(k).ok_or_else(|| bad("missing column".into()))?.trim();
            *slot = text
                .parse()
                .map_err(|_| bad(format!("{} is not a number: {text:?}", CSV_HEADER[k])))?;
        }
        let [alpha, u, du] = v;
        if !alpha.is_finite() || alpha < 0.0 || !u.is_finite() || du.is_nan() {
            return Err(bad(format!("row ({alpha}, {u}, {du}) is out of range")));
        }
        if out.last().is_some_and(|s| s.alpha >= alpha) {
            return Err(bad("alpha is not increasing".into()));
        }
        out.push(ProfileSample { alpha, u, du });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_fourteen_digits() {
        let rows = vec![
            ProfileSample { alpha: 0.0, u: -1.0, du: 0.0 },
            ProfileSample { alpha: 1.0 / 3.0, u: -0.98765432109876, du: 0.012 },
            ProfileSample { alpha: 1.0, u: 0.0, du: f64::INFINITY },
        ];
        let text = profile_csv_string(&rows);
        assert!(text.starts_with("alpha,u,du\n0.0000000000000e0,"));
        assert!(!text.contains('\r'));
        let back = read_profile_csv(text.as_bytes()).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            assert!((a.alpha - b.alpha).abs() <= 1e-13 * a.alpha.abs());
            assert!((a.u - b.u).abs() <= 1e-13 * a.u.abs());
        }
        assert_eq!(back[2].du, f64::INFINITY);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        for text in [
            "a,b,c\n1,2,3\n",
            "alpha,u,du\n0.1,x,1\n",
            "alpha,u,du\n0.1,1\n",
            "alpha,u,du\n0.2,1,1\n0.1,1,1\n",
            "alpha,u,du\n0.1,nan,1\n",
        ] {
            assert!(
                matches!(read_profile_csv(text.as_bytes()), Err(IoError::MalformedCsv { .. })),
                "{text:?}"
            );
        }
    }
}
