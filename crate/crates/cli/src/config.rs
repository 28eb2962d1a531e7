//! Sectioned key-value configuration format.
//!
//! The format is deliberately small: `[section]` headers, `key = value`
//! pairs, full-line `#` comments, one level of nesting, and unit suffixes
//! baked into key names (`length_km`, `lambda0_nm`) so a config cannot be
//! valid and dimensionally wrong at the same time. Every diagnostic names
//! the first offending key or line.

use std::fmt;

#[derive(Debug)]
pub struct ConfigError {
    /// 1-based source line; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self::at(0, message)
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            f.write_str(&self.message)
        }
    }
}

pub type CResult<T> = Result<T, ConfigError>;

/// What one section may and must contain.
pub struct SectionSchema {
    pub name: &'static str,
    pub required: bool,
    pub repeatable: bool,
    pub required_keys: &'static [&'static str],
    pub optional_keys: &'static [&'static str],
}

impl SectionSchema {
    fn allows(&self, key: &str) -> bool {
        self.required_keys.contains(&key) || self.optional_keys.contains(&key)
    }

    /// The allowed key that `bare` matches except for a missing
    /// `_<unit>` tail, if any — powers the unit-suffix diagnostic.
    fn suffixed_form(&self, bare: &str) -> Option<&'static str> {
        self.required_keys
            .iter()
            .chain(self.optional_keys)
            .find(|k| {
                k.len() > bare.len() && k.starts_with(bare) && k.as_bytes()[bare.len()] == b'_'
            })
            .copied()
    }
}

/// Full vocabulary of one job kind. Every schema starts with the `[job]`
/// section so a config names the kind it was written for.
pub struct JobSchema {
    pub kind: &'static str,
    pub sections: &'static [SectionSchema],
}

impl JobSchema {
    fn section(&self, name: &str) -> Option<&SectionSchema> {
        self.sections.iter().find(|s| s.name == name)
    }
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
pub struct ParsedSection {
    pub name: String,
    pub line: usize,
    entries: Vec<Entry>,
}

impl ParsedSection {
    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn required(&self, key: &str) -> CResult<&Entry> {
        self.entry(key).ok_or_else(|| {
            ConfigError::at(self.line, format!("missing key '{key}' in [{}]", self.name))
        })
    }

    fn parse<T: std::str::FromStr>(&self, e: &Entry, what: &str) -> CResult<T> {
        e.value.parse().map_err(|_| {
            ConfigError::at(
                e.line,
                format!(
                    "value of '{}' in [{}] is not {what}: '{}'",
                    e.key, self.name, e.value
                ),
            )
        })
    }

    pub fn str(&self, key: &str) -> CResult<&str> {
        Ok(self.required(key)?.value.as_str())
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.entry(key).map_or(default, |e| e.value.as_str())
    }

    pub fn f64(&self, key: &str) -> CResult<f64> {
        let e = self.required(key)?;
        self.parse(e, "a number")
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CResult<f64> {
        match self.entry(key) {
            Some(e) => self.parse(e, "a number"),
            None => Ok(default),
        }
    }

    pub fn u32(&self, key: &str) -> CResult<u32> {
        let e = self.required(key)?;
        self.parse(e, "a non-negative integer")
    }

    pub fn u32_or(&self, key: &str, default: u32) -> CResult<u32> {
        match self.entry(key) {
            Some(e) => self.parse(e, "a non-negative integer"),
            None => Ok(default),
        }
    }

    pub fn usize(&self, key: &str) -> CResult<usize> {
        let e = self.required(key)?;
        self.parse(e, "a non-negative integer")
    }

    pub fn u64_or(&self, key: &str, default: u64) -> CResult<u64> {
        match self.entry(key) {
            Some(e) => self.parse(e, "a non-negative integer"),
            None => Ok(default),
        }
    }

    /// A `min,max` pair.
    pub fn f64_pair(&self, key: &str) -> CResult<(f64, f64)> {
        let e = self.required(key)?;
        let mut parts = e.value.split(',');
        let err = || {
            ConfigError::at(
                e.line,
                format!(
                    "value of '{}' in [{}] is not a 'min,max' pair: '{}'",
                    e.key, self.name, e.value
                ),
            )
        };
        let lo: f64 = parts
            .next()
            .ok_or_else(err)?
            .trim()
            .parse()
            .map_err(|_| err())?;
        let hi: f64 = parts
            .next()
            .ok_or_else(err)?
            .trim()
            .parse()
            .map_err(|_| err())?;
        if parts.next().is_some() {
            return Err(err());
        }
        Ok((lo, hi))
    }

    /// A comma-separated list of numbers.
    pub fn f64_list(&self, key: &str) -> CResult<Vec<f64>> {
        let e = self.required(key)?;
        e.value
            .split(',')
            .map(|part| {
                part.trim().parse().map_err(|_| {
                    ConfigError::at(
                        e.line,
                        format!(
                            "value of '{}' in [{}] is not a number list: '{}'",
                            e.key, self.name, e.value
                        ),
                    )
                })
            })
            .collect()
    }

    pub fn has(&self, key: &str) -> bool {
        self.entry(key).is_some()
    }
}

#[derive(Debug)]
pub struct Config {
    sections: Vec<ParsedSection>,
}

impl Config {
    pub fn section(&self, name: &str) -> Option<&ParsedSection> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> CResult<&ParsedSection> {
        self.section(name)
            .ok_or_else(|| ConfigError::general(format!("missing section [{name}]")))
    }

    pub fn sections_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ParsedSection> {
        self.sections.iter().filter(move |s| s.name == name)
    }
}

fn syntax_parse(text: &str) -> CResult<Vec<ParsedSection>> {
    let mut sections: Vec<ParsedSection> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| {
                    ConfigError::at(line, format!("unterminated section header '{trimmed}'"))
                })?
                .trim();
            if name.is_empty() || !name.bytes().all(|b| b.is_ascii_lowercase() || b == b'_') {
                return Err(ConfigError::at(
                    line,
                    format!("section name must be lowercase words, got '[{name}]'"),
                ));
            }
            sections.push(ParsedSection {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| {
            ConfigError::at(
                line,
                format!("expected 'key = value' or '[section]', got '{trimmed}'"),
            )
        })?;
        let key = key.trim();
        if key.is_empty()
            || !key
                .bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
        {
            return Err(ConfigError::at(
                line,
                format!("key must be lowercase words/digits, got '{key}'"),
            ));
        }
        let section = sections.last_mut().ok_or_else(|| {
            ConfigError::at(line, format!("key '{key}' appears before any [section]"))
        })?;
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(sections)
}

/// Parses and fully validates `text` against `schema`: section and key
/// vocabulary, repeatability, required presence, and the job-kind match.
pub fn parse_config(text: &str, schema: &JobSchema) -> CResult<Config> {
    let sections = syntax_parse(text)?;

    for section in &sections {
        let rules = schema.section(&section.name).ok_or_else(|| {
            ConfigError::at(
                section.line,
                format!(
                    "unknown section [{}] for a {} job",
                    section.name, schema.kind
                ),
            )
        })?;
        if !rules.repeatable {
            let first = sections
                .iter()
                .find(|s| s.name == section.name)
                .expect("section exists");
            if !std::ptr::eq(first, section) {
                return Err(ConfigError::at(
                    section.line,
                    format!(
                        "duplicate section [{}] (first declared on line {})",
                        section.name, first.line
                    ),
                ));
            }
        }
        for (i, entry) in section.entries.iter().enumerate() {
            if !rules.allows(&entry.key) {
                return Err(match rules.suffixed_form(&entry.key) {
                    Some(full) => ConfigError::at(
                        entry.line,
                        format!(
                            "key '{}' in [{}] is missing its unit suffix; write '{full}'",
                            entry.key, section.name
                        ),
                    ),
                    None => ConfigError::at(
                        entry.line,
                        format!("unknown key '{}' in [{}]", entry.key, section.name),
                    ),
                });
            }
            if let Some(dup) = section.entries[..i].iter().find(|e| e.key == entry.key) {
                return Err(ConfigError::at(
                    entry.line,
                    format!(
                        "duplicate key '{}' in [{}] (first set on line {})",
                        entry.key, section.name, dup.line
                    ),
                ));
            }
        }
        for key in rules.required_keys {
            if section.entry(key).is_none() {
                return Err(ConfigError::at(
                    section.line,
                    format!("missing key '{key}' in [{}]", section.name),
                ));
            }
        }
    }

    for rules in schema.sections {
        if rules.required && !sections.iter().any(|s| s.name == rules.name) {
            return Err(ConfigError::general(format!(
                "missing section [{}]",
                rules.name
            )));
        }
    }

    let config = Config { sections };
    let declared = config.require("job")?.str("kind")?;
    if declared != schema.kind {
        return Err(ConfigError::general(format!(
            "config declares kind '{declared}' but was run as '{}'",
            schema.kind
        )));
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: JobSchema = JobSchema {
        kind: "demo",
        sections: &[
            SectionSchema {
                name: "job",
                required: true,
                repeatable: false,
                required_keys: &["kind"],
                optional_keys: &[],
            },
            SectionSchema {
                name: "main",
                required: true,
                repeatable: false,
                required_keys: &["width_um"],
                optional_keys: &["height_um", "count", "span_nm", "weights"],
            },
            SectionSchema {
                name: "item",
                required: false,
                repeatable: true,
                required_keys: &["value"],
                optional_keys: &[],
            },
        ],
    };

    fn parse(text: &str) -> CResult<Config> {
        parse_config(text, &SCHEMA)
    }

    fn err(text: &str) -> String {
        parse(text).unwrap_err().to_string()
    }

    #[test]
    fn parses_sections_keys_and_comments() {
        let config = parse(
            "# heading comment\n\
             [job]\n\
             kind = demo\n\
             \n\
             [main]\n\
             width_um = 23\n\
             height_um = 40.5\n\
             count = 7\n\
             span_nm = 1500,1600\n\
             weights = 1, 0.5 ,0.25\n\
             \n\
             [item]\n\
             value = first\n\
             [item]\n\
             value = second\n",
        )
        .unwrap();

        let main = config.require("main").unwrap();
        assert_eq!(main.f64("width_um").unwrap(), 23.0);
        assert_eq!(main.f64_or("missing_um", 9.0).unwrap(), 9.0);
        assert_eq!(main.u32("count").unwrap(), 7);
        assert_eq!(main.f64_pair("span_nm").unwrap(), (1500.0, 1600.0));
        assert_eq!(main.f64_list("weights").unwrap(), vec![1.0, 0.5, 0.25]);
        assert!(main.has("height_um"));
        assert!(!main.has("width"));

        let items: Vec<_> = config.sections_named("item").collect();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].str("value").unwrap(), "first");
        assert_eq!(items[1].str("value").unwrap(), "second");
        assert!(config.section("absent").is_none());
    }

    #[test]
    fn rejects_unknown_section_and_key() {
        let base = "[job]\nkind = demo\n[main]\nwidth_um = 1\n";
        let msg = err(&format!("{base}[mystery]\nx = 1\n"));
        assert!(msg.contains("unknown section [mystery]"), "{msg}");

        let msg = err("[job]\nkind = demo\n[main]\nwidth_um = 1\nbogus = 2\n");
        assert!(msg.contains("unknown key 'bogus'"), "{msg}");
        assert!(msg.contains("line 5"), "{msg}");
    }

    #[test]
    fn suffixless_key_names_the_suffixed_form() {
        let msg = err("[job]\nkind = demo\n[main]\nwidth = 1\n");
        assert!(msg.contains("missing its unit suffix"), "{msg}");
        assert!(msg.contains("'width_um'"), "{msg}");
    }

    #[test]
    fn rejects_duplicates() {
        let msg = err("[job]\nkind = demo\n[main]\nwidth_um = 1\n[main]\nwidth_um = 2\n");
        assert!(msg.contains("duplicate section [main]"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");

        let msg = err("[job]\nkind = demo\n[main]\nwidth_um = 1\nwidth_um = 2\n");
        assert!(msg.contains("duplicate key 'width_um'"), "{msg}");
    }

    #[test]
    fn rejects_missing_requirements_and_kind_mismatch() {
        let msg = err("[job]\nkind = demo\n[main]\nheight_um = 2\n");
        assert!(msg.contains("missing key 'width_um'"), "{msg}");

        let msg = err("[job]\nkind = demo\n");
        assert!(msg.contains("missing section [main]"), "{msg}");

        let msg = err("[job]\nkind = other\n[main]\nwidth_um = 1\n");
        assert!(
            msg.contains("declares kind 'other' but was run as 'demo'"),
            "{msg}"
        );
    }

    #[test]
    fn rejects_malformed_syntax() {
        let msg = err("width_um = 1\n");
        assert!(msg.contains("before any [section]"), "{msg}");

        let msg = err("[job\nkind = demo\n");
        assert!(msg.contains("unterminated"), "{msg}");

        let msg = err("[job]\nkind = demo\n[main]\nwidth_um\n");
        assert!(msg.contains("expected 'key = value'"), "{msg}");
    }

    #[test]
    fn value_conversion_errors_carry_location() {
        let base = "[job]\nkind = demo\n[main]\nwidth_um = wide\nspan_nm = 1500\ncount = 2.5\n";
        let config = {
            // Bypass the required-key check path by parsing a valid text,
            // then probing conversions directly.
            parse(base).unwrap()
        };
        let main = config.require("main").unwrap();

        let msg = main.f64("width_um").unwrap_err().to_string();
        assert!(msg.contains("not a number"), "{msg}");
        assert!(msg.contains("line 4"), "{msg}");

        let msg = main.f64_pair("span_nm").unwrap_err().to_string();
        assert!(msg.contains("min,max"), "{msg}");

        let msg = main.u32("count").unwrap_err().to_string();
        assert!(msg.contains("not a non-negative integer"), "{msg}");

        let msg = main.str("absent").unwrap_err().to_string();
        assert!(msg.contains("missing key 'absent'"), "{msg}");
    }
}
