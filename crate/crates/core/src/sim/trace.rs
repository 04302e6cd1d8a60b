//! Line-delimited trace format, one record per line:
//!
//! ```text
//! tick=3 ctl=bt status=running emit=[say(Hello);take_photo(1)] persons=1 hazard=0 net=1
//! ```
//!
//! Inside `emit=[...]` the characters `\`, `;`, `)` and `]` are escaped with a
//! backslash and newlines are written as `\n`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{ControllerKind, TickRecord};
use crate::world::{Action, ActionEmission, Payload, Tick};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("trace line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

fn escape_into(out: &mut String, text: &str) {
    for c in text.chars() {
        match c {
            '\\' | ';' | ')' | ']' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
}

/// Formats one record without a trailing newline.
pub fn format_record(record: &TickRecord) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "tick={} ctl={} status={} emit=[",
        record.tick, record.controller, record.status
    );
    for (i, e) in record.emissions.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(e.action.as_str());
        out.push('(');
        escape_into(&mut out, &e.payload.to_string());
        out.push(')');
    }
    let _ = write!(
        out,
        "] persons={} hazard={} net={}",
        record.persons,
        u8::from(record.hazard),
        u8::from(record.network)
    );
    out
}

/// Formats a whole trace, each record terminated by a newline.
pub fn format_trace(records: &[TickRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format_record(r));
        out.push('\n');
    }
    out
}

struct Cursor<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> TraceError {
        TraceError {
            line: self.line,
            message: message.into(),
        }
    }

    fn key(&mut self, key: &str) -> Result<(), TraceError> {
        let prefix = format!("{key}=");
        match self.rest.strip_prefix(prefix.as_str()) {
            Some(rest) => {
                self.rest = rest;
                Ok(())
            }
            None => Err(self.err(format!("expected '{prefix}'"))),
        }
    }

    /// Value up to the next space or end of line.
    fn word(&mut self) -> &'a str {
        let end = self.rest.find(' ').unwrap_or(self.rest.len());
        let (word, rest) = self.rest.split_at(end);
        self.rest = rest.strip_prefix(' ').unwrap_or(rest);
        word
    }

    fn field(&mut self, key: &str) -> Result<&'a str, TraceError> {
        self.key(key)?;
        Ok(self.word())
    }

    fn flag(&mut self, key: &str) -> Result<bool, TraceError> {
        match self.field(key)? {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(self.err(format!("{key} must be 0 or 1, found '{other}'"))),
        }
    }

    fn emissions(&mut self, tick: Tick) -> Result<Vec<ActionEmission>, TraceError> {
        self.key("emit")?;
        let mut chars = self.rest.char_indices();
        if chars.next().map(|(_, c)| c) != Some('[') {
            return Err(self.err("expected '[' after emit="));
        }
        let mut out = Vec::new();
        let mut name = String::new();
        let mut payload = String::new();
        let mut in_payload = false;
        let mut expect_separator = false;
        while let Some((i, c)) = chars.next() {
            if in_payload {
                match c {
                    '\\' => match chars.next().map(|(_, c)| c) {
                        Some('n') => payload.push('\n'),
                        Some(c @ ('\\' | ';' | ')' | ']')) => payload.push(c),
                        _ => return Err(self.err("bad escape in emission payload")),
                    },
                    ')' => {
                        out.push(self.emission(tick, &name, &payload)?);
                        name.clear();
                        payload.clear();
                        in_payload = false;
                        expect_separator = true;
                    }
                    _ => payload.push(c),
                }
                continue;
            }
            match c {
                ']' if name.is_empty() => {
                    self.rest = &self.rest[i + 1..];
                    self.rest = self.rest.strip_prefix(' ').unwrap_or(self.rest);
                    return Ok(out);
                }
                ';' if expect_separator => expect_separator = false,
                '(' if !expect_separator && !name.is_empty() => in_payload = true,
                c if !expect_separator && (c.is_ascii_alphanumeric() || c == '_') => name.push(c),
                c => return Err(self.err(format!("unexpected '{c}' in emission list"))),
            }
        }
        Err(self.err("unterminated emission list"))
    }

    fn emission(
        &self,
        tick: Tick,
        name: &str,
        payload: &str,
    ) -> Result<ActionEmission, TraceError> {
        let action =
            Action::from_name(name).ok_or_else(|| self.err(format!("unknown action '{name}'")))?;
        let payload = match action {
            Action::Say => Payload::Text(payload.to_owned()),
            Action::TakePhoto | Action::ShowPhoto => Payload::Photo(
                payload
                    .parse()
                    .map_err(|_| self.err(format!("bad photo index '{payload}'")))?,
            ),
            Action::Idle | Action::HaltMotionHold if payload.is_empty() => Payload::None,
            Action::Idle | Action::HaltMotionHold => {
                return Err(self.err(format!("{name} takes no payload")))
            }
        };
        Ok(ActionEmission::new(tick, action, payload))
    }
}

/// Parses one formatted record.
pub fn parse_record(text: &str, line: usize) -> Result<TickRecord, TraceError> {
    let mut c = Cursor { rest: text, line };
    let tick_text = c.field("tick")?;
    let tick: Tick = tick_text
        .parse()
        .map_err(|_| c.err(format!("bad tick '{tick_text}'")))?;
    let ctl = c.field("ctl")?;
    let controller: ControllerKind = ctl.parse().map_err(|m: String| c.err(m))?;
    let status = c.field("status")?.to_owned();
    if status.is_empty() {
        return Err(c.err("empty status"));
    }
    let emissions = c.emissions(tick)?;
    let persons_text = c.field("persons")?;
    let persons = persons_text
        .parse()
        .map_err(|_| c.err(format!("bad person count '{persons_text}'")))?;
    let hazard = c.flag("hazard")?;
    let network = c.flag("net")?;
    if !c.rest.is_empty() {
        return Err(c.err(format!("trailing text '{}'", c.rest)));
    }
    Ok(TickRecord {
        tick,
        controller,
        status,
        emissions,
        persons,
        hazard,
        network,
    })
}

/// Parses a trace file. Blank lines are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<TickRecord>, TraceError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_record(l.trim_end_matches('\r'), i + 1))
        .collect()
}
