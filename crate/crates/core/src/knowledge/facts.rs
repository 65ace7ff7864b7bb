//! Line-oriented fact file: `subject<TAB>predicate<TAB>object_kind<TAB>object`.
//!
//! Entity declarations use the pseudo-predicate `type` with object kind
//! `kind`. Tabs, newlines and backslashes inside fields are escaped as
//! `\t`, `\n`, `\r` and `\\`.

use chrono::NaiveDate;
use thiserror::Error;

use super::{Assertion, EntityId, EntityKind, Literal, Object, Predicate, Store, StoreError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Store {
        line: usize,
        #[source]
        source: StoreError,
    },
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

pub fn write_fact_file(store: &Store) -> String {
    let mut out = String::new();
    for (id, kind) in store.entities() {
        out.push_str(&format!("{}\ttype\tkind\t{}\n", escape(id.as_str()), kind));
    }
    let mut facts: Vec<Assertion> = store.assertions().collect();
    facts.sort();
    for a in facts {
        let (kind, value) = match &a.object {
            Object::Entity(e) => ("entity", escape(e.as_str())),
            Object::Literal(l) => (l.kind_name(), escape(&l.to_string())),
        };
        out.push_str(&format!("{}\t{}\t{}\t{}\n", escape(a.subject.as_str()), a.predicate, kind, value));
    }
    out
}

pub fn parse_fact_file(text: &str) -> Result<Store, FactFileError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.is_empty() {
            continue;
        }
        let syntax = |message: &str| FactFileError::Syntax {
            line,
            message: message.to_owned(),
        };
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 4 {
            return Err(syntax("expected four tab-separated fields"));
        }
        let subject = unescape(fields[0]).ok_or_else(|| syntax("bad escape in subject"))?;
        let value = unescape(fields[3]).ok_or_else(|| syntax("bad escape in object"))?;
        rows.push((line, subject, fields[1], fields[2], value));
    }

    let mut store = Store::new();
    for (line, subject, predicate, kind, value) in &rows {
        if *predicate == "type" {
            if *kind != "kind" {
                return Err(FactFileError::Syntax {
                    line: *line,
                    message: "entity declarations need object kind `kind`".into(),
                });
            }
            let k = EntityKind::parse(value).ok_or_else(|| FactFileError::Syntax {
                line: *line,
                message: format!("unknown entity kind {value:?}"),
            })?;
            store
                .add_entity(subject.as_str(), k)
                .map_err(|source| FactFileError::Store { line: *line, source })?;
        }
    }
    for (line, subject, predicate, kind, value) in rows {
        if predicate == "type" {
            continue;
        }
        let syntax = |message: String| FactFileError::Syntax { line, message };
        let predicate = Predicate::parse(predicate).map_err(|source| FactFileError::Store { line, source })?;
        let object = match kind {
            "entity" => Object::Entity(EntityId(value)),
            "str" => Literal::Str(value).into(),
            "int" => Literal::Int(value.parse().map_err(|_| syntax(format!("bad integer {value:?}")))?).into(),
            "real" => Literal::Real(value.parse().map_err(|_| syntax(format!("bad real {value:?}")))?).into(),
            "date" => Literal::Date(
                NaiveDate::parse_from_str(&value, "%Y-%m-%d").map_err(|_| syntax(format!("bad date {value:?}")))?,
            )
            .into(),
            "bool" => Literal::Bool(value.parse().map_err(|_| syntax(format!("bad boolean {value:?}")))?).into(),
            other => return Err(syntax(format!("unknown object kind {other:?}"))),
        };
        store
            .assert_fact(Assertion::new(subject, predicate, object))
            .map_err(|source| FactFileError::Store { line, source })?;
    }
    Ok(store)
}
