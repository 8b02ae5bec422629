use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::CliError;

/// `%.9g`: nine significant digits, trailing zeros trimmed.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.8e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, x);
        trim(&fixed).to_string()
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    std::fs::rename(&tmp, path).map_err(io)
}

/// Comma-separated table with a header row.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn numbers(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| sig9(*v)).collect();
        self.row(&cells);
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Flat `key = value` document.
#[derive(Default)]
pub struct KeyValue {
    text: String,
}

impl KeyValue {
    pub fn section(&mut self, name: &str) {
        let _ = writeln!(self.text, "\n[{name}]");
    }

    pub fn num(&mut self, key: &str, v: f64) {
        let _ = writeln!(self.text, "{key} = {}", toml_number(v));
    }

    pub fn opt(&mut self, key: &str, v: Option<f64>) {
        if let Some(v) = v {
            self.num(key, v);
        }
    }

    pub fn text(&mut self, key: &str, v: &str) {
        let _ = writeln!(self.text, "{key} = \"{v}\"");
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        let _ = writeln!(self.text, "{key} = {v}");
    }

    pub fn into_string(self) -> String {
        self.text.trim_start().to_string()
    }
}

/// `sig9` made valid as a TOML float.
fn toml_number(v: f64) -> String {
    let s = sig9(v);
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if s.contains(['.', 'e']) {
        s
    } else {
        format!("{s}.0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(114.576032108), "114.576032");
        assert_eq!(sig9(0.1), "0.1");
        assert_eq!(sig9(1e6), "1000000");
        assert_eq!(sig9(-2.5e-7), "-2.5e-7");
        assert_eq!(sig9(1.23456789123e12), "1.23456789e12");
        assert_eq!(sig9(0.0), "0");
    }

    #[test]
    fn key_values_are_toml() {
        let mut kv = KeyValue::default();
        kv.text("verdict", "not_certified");
        kv.num("lambda", 1e6);
        kv.num("small", 2.5e-7);
        kv.section("pair");
        kv.flag("ok", true);
        let v: toml::Table = toml::from_str(&kv.into_string()).unwrap();
        assert_eq!(v["lambda"].as_float(), Some(1e6));
        assert_eq!(v["small"].as_float(), Some(2.5e-7));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, "1").unwrap();
        write_atomic(&p, "2").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "2");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
