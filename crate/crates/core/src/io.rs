//! File formats: `.sg.json` semigroups, `.sgfn` function tables, `report.json`,
//! the catalog index, and the small text specs used on the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::gallery::GalleryReport;
use crate::profile::nilpotency_profile;
use crate::semigroup::{tuple_count, ElementId, FiniteSemigroup, Limits};
use crate::term::Term;

#[derive(Debug, Deserialize)]
struct SgFile {
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
}

/// Serializes with keys in the order `name`, `elements`, `table` and one table row
/// per line, so equal semigroups give identical bytes.
pub fn to_sg_json(s: &FiniteSemigroup) -> String {
    let quote = |x: &str| serde_json::to_string(x).expect("strings serialize");
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"name\": {},", quote(s.name()));
    let elements: Vec<String> = s.labels().iter().map(|l| quote(l)).collect();
    let _ = writeln!(out, "  \"elements\": [{}],", elements.join(", "));
    out.push_str("  \"table\": [\n");
    let rows = s.rows();
    for (k, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let sep = if k + 1 == rows.len() { "" } else { "," };
        let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses and validates a semigroup; identity and zero are recomputed.
pub fn from_sg_json(text: &str) -> Result<FiniteSemigroup> {
    let file: SgFile = serde_json::from_str(text).map_err(|e| Error::Format(format!("sg.json: {e}")))?;
    Limits::default().check_order(file.elements.len() as u128)?;
    FiniteSemigroup::from_table(file.name, file.elements, file.table)
}

pub fn read_semigroup(path: &Path) -> Result<FiniteSemigroup> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_sg_json(&text)
}

pub fn write_semigroup(path: &Path, s: &FiniteSemigroup) -> Result<()> {
    fs::write(path, to_sg_json(s)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub const SGFN_MAGIC: [u8; 4] = *b"SGFN";
pub const SGFN_VERSION: u8 = 1;
const SGFN_HEADER: usize = 12;

/// Header and raw values of a `.sgfn` file, before matching it to a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgfnData {
    pub arity: usize,
    pub order: usize,
    pub values: Vec<u16>,
}

pub fn encode_sgfn(f: &FiniteFunction) -> Result<Vec<u8>> {
    let table = f
        .table()
        .ok_or_else(|| Error::InvalidArgument("only tabulated functions can be written".into()))?;
    let arity = u16::try_from(f.arity()).map_err(|_| Error::Format("arity exceeds 16 bits".into()))?;
    let order = u32::try_from(f.universe().order()).map_err(|_| Error::Format("order exceeds 32 bits".into()))?;
    let mut out = Vec::with_capacity(SGFN_HEADER + 2 * table.len());
    out.extend_from_slice(&SGFN_MAGIC);
    out.push(SGFN_VERSION);
    out.push(0);
    out.extend_from_slice(&arity.to_le_bytes());
    out.extend_from_slice(&order.to_le_bytes());
    for v in table {
        out.extend_from_slice(&v.0.to_le_bytes());
    }
    Ok(out)
}

/// Checks the header, the length and the value range.
pub fn decode_sgfn_raw(bytes: &[u8], limits: &Limits) -> Result<SgfnData> {
    if bytes.len() < SGFN_HEADER {
        return Err(Error::Format("sgfn: truncated header".into()));
    }
    if bytes[..4] != SGFN_MAGIC {
        return Err(Error::Format("sgfn: bad magic".into()));
    }
    if bytes[4] != SGFN_VERSION {
        return Err(Error::Format(format!("sgfn: unsupported version {}", bytes[4])));
    }
    if bytes[5] != 0 {
        return Err(Error::Format("sgfn: nonzero pad byte".into()));
    }
    let arity = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let order = u32::from_le_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]) as usize;
    if order == 0 {
        return Err(Error::Format("sgfn: zero universe order".into()));
    }
    let cells = tuple_count(order, arity);
    limits.check_cells(cells)?;
    let body = &bytes[SGFN_HEADER..];
    if body.len() as u128 != 2 * cells {
        return Err(Error::Format(format!(
            "sgfn: expected {} value bytes, found {}",
            2 * cells,
            body.len()
        )));
    }
    let values: Vec<u16> = body
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect();
    if let Some(bad) = values.iter().find(|&&v| v as usize >= order) {
        return Err(Error::Format(format!("sgfn: value {bad} outside universe of order {order}")));
    }
    Ok(SgfnData { arity, order, values })
}

/// Decodes a table over `universe`, rejecting a header with a different order.
pub fn decode_sgfn(bytes: &[u8], universe: Arc<FiniteSemigroup>) -> Result<FiniteFunction> {
    let data = decode_sgfn_raw(bytes, &Limits::default())?;
    if data.order != universe.order() {
        return Err(Error::UniverseMismatch {
            expected: universe.order(),
            found: data.order,
        });
    }
    let table = data.values.into_iter().map(ElementId).collect();
    FiniteFunction::from_table(universe, data.arity, table)
}

pub fn read_sgfn(path: &Path, universe: Arc<FiniteSemigroup>) -> Result<FiniteFunction> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    decode_sgfn(&bytes, universe)
}

pub fn write_sgfn(path: &Path, f: &FiniteFunction) -> Result<()> {
    fs::write(path, encode_sgfn(f)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn report_json(report: &GalleryReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_report(path: &Path, report: &GalleryReport) -> Result<()> {
    fs::write(path, report_json(report)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `w1=w2`: two element labels to be identified.
pub fn parse_merge_spec(text: &str) -> Result<(String, String)> {
    let mut parts = text.split('=');
    let (Some(l), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Parse(format!("merge spec {text:?} must look like w1=w2")));
    };
    let (l, r) = (l.trim(), r.trim());
    if l.is_empty() || r.is_empty() {
        return Err(Error::Parse(format!("merge spec {text:?} has an empty side")));
    }
    Ok((l.to_string(), r.to_string()))
}

/// How a function is given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleSpec {
    /// `term:<word>`, evaluated on demand.
    Term(Term),
    /// `table:<path>` or a bare path to a `.sgfn` file.
    Table(PathBuf),
}

pub fn parse_oracle_spec(text: &str) -> Result<OracleSpec> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("term:") {
        let rest = rest.trim();
        let rest = rest
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .unwrap_or(rest);
        return Ok(OracleSpec::Term(Term::parse(rest)?));
    }
    let path = text.strip_prefix("table:").unwrap_or(text).trim();
    if path.is_empty() {
        return Err(Error::Parse("empty oracle spec".into()));
    }
    Ok(OracleSpec::Table(PathBuf::from(path)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub path: String,
    pub order: usize,
    pub profile: String,
    pub sha256: String,
}

/// Directory of `.sg.json` files with an `index.json` listing them.
#[derive(Debug, Clone)]
pub struct Catalog {
    dir: PathBuf,
    entries: Vec<CatalogEntry>,
}

pub const CATALOG_INDEX: &str = "index.json";

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Catalog {
    /// Opens the catalog in `dir`, creating an empty one if there is no index.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let index = dir.join(CATALOG_INDEX);
        let entries = if index.exists() {
            let text = fs::read_to_string(&index).map_err(|e| Error::Io(format!("{}: {e}", index.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("catalog index: {e}")))?
        } else {
            fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            Vec::new()
        };
        Ok(Catalog { dir, entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// Writes `<name>.sg.json` and records it, replacing an entry of the same name.
    pub fn add(&mut self, name: &str, s: &FiniteSemigroup) -> Result<&CatalogEntry> {
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return Err(Error::InvalidArgument(format!("bad catalog name {name:?}")));
        }
        let file = format!("{name}.sg.json");
        let text = to_sg_json(s);
        fs::write(self.dir.join(&file), &text).map_err(|e| Error::Io(format!("{file}: {e}")))?;
        let entry = CatalogEntry {
            name: name.to_string(),
            path: file,
            order: s.order(),
            profile: nilpotency_profile(s).to_string(),
            sha256: sha256_hex(text.as_bytes()),
        };
        self.entries.retain(|e| e.name != name);
        self.entries.push(entry);
        self.entries.sort_by(|a, b| a.name.cmp(&b.name));
        self.save()?;
        Ok(self.entries.iter().find(|e| e.name == name).expect("just added"))
    }

    fn save(&self) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.entries).expect("entries serialize");
        text.push('\n');
        let index = self.dir.join(CATALOG_INDEX);
        fs::write(&index, text).map_err(|e| Error::Io(format!("{}: {e}", index.display())))
    }

    /// Loads an entry after checking its checksum.
    pub fn load(&self, name: &str) -> Result<FiniteSemigroup> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownElement(format!("no catalog entry {name:?}")))?;
        let path = self.dir.join(&entry.path);
        let bytes = fs::read(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if sha256_hex(&bytes) != entry.sha256 {
            return Err(Error::Format(format!("checksum mismatch for {}", entry.path)));
        }
        let text = String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?;
        from_sg_json(&text)
    }

    /// Names of entries whose file is missing or does not match its checksum.
    pub fn verify(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| {
                fs::read(self.dir.join(&e.path))
                    .map(|b| sha256_hex(&b) != e.sha256)
                    .unwrap_or(true)
            })
            .map(|e| e.name.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{adjoin_identity, build_free_nilpotent};
    use crate::semigroup::semilattice2;

    #[test]
    fn sg_json_round_trip_is_byte_stable() {
        let s = adjoin_identity(&build_free_nilpotent(&["a".into(), "b".into()], 3).unwrap(), false).unwrap();
        let text = to_sg_json(&s);
        let back = from_sg_json(&text).unwrap();
        assert_eq!(back.flat_table(), s.flat_table());
        assert_eq!(back.identity(), s.identity());
        assert_eq!(to_sg_json(&back), text);
        assert!(text.starts_with("{\n  \"name\""));
    }

    #[test]
    fn sg_json_rejects_bad_tables() {
        assert!(from_sg_json("{}").is_err());
        let bad = r#"{"name":"x","elements":["a","b"],"table":[[0,1],[1,1]]}"#;
        assert!(from_sg_json(bad).is_ok());
        let nonassoc = r#"{"name":"x","elements":["a","b"],"table":[[1,0],[0,0]]}"#;
        assert!(matches!(from_sg_json(nonassoc), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn sgfn_round_trip_and_mismatch() {
        let s = Arc::new(semilattice2());
        let f = FiniteFunction::from_table(s.clone(), 2, vec![ElementId(0), ElementId(0), ElementId(0), ElementId(1)]).unwrap();
        let bytes = encode_sgfn(&f).unwrap();
        assert_eq!(&bytes[..12], &[0x53, 0x47, 0x46, 0x4E, 1, 0, 2, 0, 2, 0, 0, 0]);
        let back = decode_sgfn(&bytes, s).unwrap();
        assert_eq!(back.table(), f.table());
        let other = Arc::new(crate::semigroup::cyclic_group(3).unwrap());
        assert!(matches!(decode_sgfn(&bytes, other), Err(Error::UniverseMismatch { expected: 3, found: 2 })));
        assert!(decode_sgfn_raw(&bytes[..13], &Limits::default()).is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(parse_merge_spec("abab=baba").unwrap(), ("abab".into(), "baba".into()));
        assert!(parse_merge_spec("a=b=c").is_err());
        assert!(parse_merge_spec("=b").is_err());
        assert_eq!(
            parse_oracle_spec("term:\"x1 x2\"").unwrap(),
            OracleSpec::Term(Term::parse("x1 x2").unwrap())
        );
        assert_eq!(parse_oracle_spec("table:f.sgfn").unwrap(), OracleSpec::Table("f.sgfn".into()));
        assert!(parse_oracle_spec("term:x0").is_err());
    }

    #[test]
    fn catalog_checksums() {
        let dir = tempfile::tempdir().unwrap();
        let mut cat = Catalog::open(dir.path()).unwrap();
        cat.add("sl", &semilattice2()).unwrap();
        let cat = Catalog::open(dir.path()).unwrap();
        assert_eq!(cat.entries()[0].order, 2);
        assert_eq!(cat.load("sl").unwrap().order(), 2);
        assert!(cat.verify().is_empty());
        fs::write(dir.path().join("sl.sg.json"), "tampered").unwrap();
        assert_eq!(cat.verify(), vec!["sl".to_string()]);
        assert!(cat.load("sl").is_err());
    }
}
