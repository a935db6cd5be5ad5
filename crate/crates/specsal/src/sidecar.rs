//! `key=value` run descriptions written next to every output.

use std::fmt::Display;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sidecar {
    entries: Vec<(String, String)>,
}

impl Sidecar {
    pub fn new(command: &str) -> Self {
        let mut s = Self::default();
        s.set("command", command);
        s.set("version", env!("CARGO_PKG_VERSION"));
        s
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { entries }
    }
}

/// `out.pgm` -> `out.pgm.txt`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".txt");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let mut s = Sidecar::new("transform");
        s.set("p", 10).set("w", 19).set("p", 5);
        let back = Sidecar::parse(&s.render());
        assert_eq!(back, s);
        assert_eq!(back.get("p"), Some("5"));
        assert_eq!(sidecar_path(Path::new("a/b.pgm")), PathBuf::from("a/b.pgm.txt"));
    }
}
