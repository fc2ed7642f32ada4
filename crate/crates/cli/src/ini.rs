//! Minimal INI reader that keeps line numbers for every section and key.

use std::fmt;

use thiserror::Error;

/// Configuration error located by section, key and line where known.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub section: Option<String>,
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        match (&self.section, &self.key) {
            (Some(s), Some(k)) => write!(f, " in [{s}] {k}")?,
            (Some(s), None) => write!(f, " in [{s}]")?,
            _ => {}
        }
        write!(f, ": {}", self.message)
    }
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            section: None,
            key: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    pub fn in_section(mut self, section: &str) -> Self {
        self.section = Some(section.to_string());
        self
    }

    pub fn for_key(mut self, key: &str) -> Self {
        self.key = Some(key.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::new(message).in_section(&self.name).at_line(self.line)
    }

    pub fn key_error(&self, entry: &Entry, message: impl Into<String>) -> ConfigError {
        ConfigError::new(message)
            .in_section(&self.name)
            .for_key(&entry.key)
            .at_line(entry.line)
    }

    /// Rejects any key outside `allowed`.
    pub fn expect_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(self.key_error(
                    e,
                    format!("unknown key '{}' (allowed: {})", e.key, allowed.join(", ")),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut doc = Document::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::new("unterminated section header").at_line(line))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '.') {
                    return Err(ConfigError::new(format!("invalid section name '{name}'")).at_line(line));
                }
                if let Some(prev) = doc.section(name) {
                    return Err(ConfigError::new(format!("duplicate section (first defined at line {})", prev.line))
                        .in_section(name)
                        .at_line(line));
                }
                doc.sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::new(format!("expected 'key = value', found '{content}'")).at_line(line))?;
            let (key, value) = (key.trim(), value.trim());
            let section = doc
                .sections
                .last_mut()
                .ok_or_else(|| ConfigError::new("key outside of any section").for_key(key).at_line(line))?;
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ConfigError::new(format!("invalid key '{key}'"))
                    .in_section(&section.name)
                    .at_line(line));
            }
            if value.is_empty() {
                return Err(ConfigError::new("missing value")
                    .in_section(&section.name)
                    .for_key(key)
                    .at_line(line));
            }
            if let Some(prev) = section.get(key) {
                return Err(ConfigError::new(format!("duplicate key (first defined at line {})", prev.line))
                    .in_section(&section.name)
                    .for_key(key)
                    .at_line(line));
            }
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(doc)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section, ConfigError> {
        self.section(name)
            .ok_or_else(|| ConfigError::new("missing required section").in_section(name))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(i) => &line[..i],
        None => line,
    }
}
