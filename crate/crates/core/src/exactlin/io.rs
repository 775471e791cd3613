//! The `mzn-matrix v1` interchange format: a header line followed by CSV rows
//! of exact rationals written as `p` or `p/q`.

use std::io::{BufRead, Write};

use num_rational::BigRational;

use super::matrix::RationalMatrix;
use crate::error::{Error, Result};

const MAGIC: &str = "# mzn-matrix v1";

pub fn write_matrix<W: Write>(m: &RationalMatrix, mut out: W) -> Result<()> {
    writeln!(out, "{MAGIC} rows={} cols={}", m.rows(), m.cols())?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(ToString::to_string))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let rest = line
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::Parse(format!("expected `{MAGIC}` header, found `{line}`")))?;
    let mut rows = None;
    let mut cols = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value `{field}`")))?;
        match key {
            "rows" => rows = Some(value),
            "cols" => cols = Some(value),
            _ => return Err(Error::Parse(format!("unknown header field `{key}`"))),
        }
    }
    match (rows, cols) {
        (Some(r), Some(c)) => Ok((r, c)),
        _ => Err(Error::Parse("header needs rows= and cols=".into())),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let ok = !s.is_empty()
        && s.split('/').count() <= 2
        && s.split('/')
            .all(|p| !p.is_empty() && p.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()));
    if !ok {
        return Err(Error::Parse(format!("`{s}` is not an exact rational")));
    }
    s.parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("`{s}` is not an exact rational")))
}

pub fn read_matrix<R: BufRead>(mut input: R) -> Result<RationalMatrix> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    let (rows, cols) = parse_header(&header)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut data = Vec::with_capacity(rows);
    for record in reader.records() {
        let record = record?;
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if record.len() != cols {
            return Err(Error::Parse(format!(
                "row {} has {} entries, header says {cols}",
                data.len() + 1,
                record.len()
            )));
        }
        data.push(record.iter().map(parse_rational).collect::<Result<Vec<_>>>()?);
    }
    if data.len() != rows {
        return Err(Error::Parse(format!(
            "found {} rows, header says {rows}",
            data.len()
        )));
    }
    RationalMatrix::from_rows(data, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn round_trip() {
        let m = RationalMatrix::from_fn(2, 3, |i, j| {
            BigRational::new(BigInt::from(i as i64 * 3 - j as i64), BigInt::from(j as i64 + 1))
        });
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# mzn-matrix v1 rows=2 cols=3\n0,-1/2,-2/3\n"));
        assert_eq!(read_matrix(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "mzn rows=1 cols=1\n1\n",
            "# mzn-matrix v1 rows=1 cols=2\n1\n",
            "# mzn-matrix v1 rows=2 cols=1\n1\n",
            "# mzn-matrix v1 rows=1 cols=1\n0.5\n",
            "# mzn-matrix v1 rows=1 cols=1\n1/0\n",
        ] {
            assert!(read_matrix(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn empty_matrix() {
        let m = RationalMatrix::zeros(0, 4);
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        assert_eq!(read_matrix(buf.as_slice()).unwrap(), m);
    }
}
