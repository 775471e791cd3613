use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::pairing::PairingMatrix;
use crate::combinat::{enum_basis, enum_fcurves};
use crate::error::{Error, Result};
use crate::exactlin::IntegerMatrix;

const FORMAT: &str = "mzn-pairing v1";

/// On-disk store of pairing matrices, one file per `n`. A file with a stale
/// format or unexpected contents is rebuilt and overwritten.
#[derive(Clone, Debug)]
pub struct PairingCache {
    dir: PathBuf,
}

impl PairingCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PairingCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("pairing-v1-n{n}.csv"))
    }

    /// Reads the cached matrix if present and valid, otherwise builds and stores it.
    pub fn load_or_build(&self, n: usize, max_n: usize) -> Result<PairingMatrix> {
        if n > max_n {
            return Err(Error::ResourceBound { n, max: max_n });
        }
        if let Ok(Some(p)) = self.load(n) {
            return Ok(p);
        }
        let p = PairingMatrix::build(n)?;
        self.store(&p)?;
        Ok(p)
    }

    /// `Ok(None)` when no file exists.
    pub fn load(&self, n: usize) -> Result<Option<PairingMatrix>> {
        let path = self.path(n);
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        read_pairing(BufReader::new(file), n).map(Some)
    }

    /// Writes to a temporary file in the cache directory, then renames it.
    pub fn store(&self, p: &PairingMatrix) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self
            .dir
            .join(format!(".pairing-v1-n{}.{}.tmp", p.n(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            write_pairing(p, &mut f)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(p.n()))?;
        Ok(())
    }
}

pub fn write_pairing<W: Write>(p: &PairingMatrix, mut out: W) -> Result<()> {
    writeln!(out, "# {FORMAT} n={}", p.n())?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_writer(out);
    w.write_record(p.curves().iter().map(|c| c.encode()))?;
    for (i, a) in p.basis().iter().enumerate() {
        let mut record = vec![a.to_string()];
        record.extend(p.matrix().row(i).iter().map(|x| x.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pairing<R: BufRead>(mut input: R, n: usize) -> Result<PairingMatrix> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    if header.trim_end() != format!("# {FORMAT} n={n}") {
        return Err(Error::Parse(format!("unexpected pairing header {:?}", header.trim_end())));
    }
    let basis = enum_basis(n)?;
    let curves = enum_fcurves(n)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    let names = records
        .next()
        .ok_or_else(|| Error::Parse("pairing file has no curve header".into()))??;
    if names.len() != curves.len() || names.iter().zip(&curves).any(|(s, c)| s != c.encode()) {
        return Err(Error::Parse("pairing curve header does not match the enumeration".into()));
    }
    let mut rows = Vec::with_capacity(basis.len());
    for a in &basis {
        let record = records
            .next()
            .ok_or_else(|| Error::Parse("pairing file is truncated".into()))??;
        if record.len() != curves.len() + 1 || record[0] != a.to_string() {
            return Err(Error::Parse(format!("pairing row for {a} is malformed")));
        }
        let row = record
            .iter()
            .skip(1)
            .map(|x| match x {
                "0" => Ok(BigInt::zero()),
                "1" => Ok(BigInt::one()),
                _ => Err(Error::Parse(format!("pairing entry {x:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if records.next().is_some() {
        return Err(Error::Parse("pairing file has trailing rows".into()));
    }
    let matrix = IntegerMatrix::from_rows(rows, curves.len())?;
    Ok(PairingMatrix::from_parts(n, basis, curves, matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_is_transparent() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PairingCache::new(dir.path());
        assert!(cache.load(5).unwrap().is_none());
        let built = cache.load_or_build(5, 10).unwrap();
        assert_eq!(built, PairingMatrix::build(5).unwrap());
        let text = fs::read_to_string(cache.path(5)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# mzn-pairing v1 n=5"));
        assert!(lines.next().unwrap().starts_with("\"1,2|3|4|5\","));
        assert!(lines.next().unwrap().starts_with("01111,"));
        assert_eq!(cache.load(5).unwrap().unwrap(), built);
        assert_eq!(cache.load_or_build(5, 10).unwrap(), built);
        assert!(matches!(cache.load_or_build(11, 10), Err(Error::ResourceBound { .. })));
    }

    #[test]
    fn corrupt_files_are_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PairingCache::new(dir.path());
        fs::write(cache.path(5), "# mzn-pairing v0 n=5\n").unwrap();
        assert!(cache.load(5).is_err());
        assert_eq!(cache.load_or_build(5, 10).unwrap(), PairingMatrix::build(5).unwrap());
        assert!(cache.load(5).unwrap().is_some());
    }
}
