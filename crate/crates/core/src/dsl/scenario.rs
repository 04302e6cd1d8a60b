use std::collections::BTreeSet;

use thiserror::Error;

use super::{is_ident, ParseError};
use crate::world::{Button, Event, EventKind, PersonId, Tick};

/// A replayable stimulus timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioScript {
    pub name: String,
    pub duration: Tick,
    /// Sorted by tick; events sharing a tick keep file order.
    pub events: Vec<Event>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Validation {
        line: Option<usize>,
        message: String,
    },
}

impl ScenarioError {
    fn validation(line: Option<usize>, message: impl Into<String>) -> Self {
        ScenarioError::Validation {
            line,
            message: message.into(),
        }
    }
}

impl ScenarioScript {
    pub fn new(name: impl Into<String>, duration: Tick, mut events: Vec<Event>) -> Self {
        events.sort_by_key(|e| e.at_tick);
        Self {
            name: name.into(),
            duration,
            events,
        }
    }

    /// Checks ticks against the duration and that moves and leaves refer to
    /// people present at that point.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        validate_events(self.duration, self.events.iter().map(|e| (None, e)))
    }

    /// Events scheduled for `tick`, in order.
    pub fn events_at(&self, tick: Tick) -> &[Event] {
        let start = self.events.partition_point(|e| e.at_tick < tick);
        let end = self.events.partition_point(|e| e.at_tick <= tick);
        &self.events[start..end]
    }
}

fn validate_events<'a>(
    duration: Tick,
    events: impl Iterator<Item = (Option<usize>, &'a Event)>,
) -> Result<(), ScenarioError> {
    if duration == 0 {
        return Err(ScenarioError::validation(
            None,
            "scenario must last at least one tick",
        ));
    }
    let mut present: BTreeSet<PersonId> = BTreeSet::new();
    let mut last_tick = 0;
    for (line, event) in events {
        let t = event.at_tick;
        if t >= duration {
            return Err(ScenarioError::validation(
                line,
                format!("event at {t} beyond duration {duration}"),
            ));
        }
        if t < last_tick {
            return Err(ScenarioError::validation(line, "events out of tick order"));
        }
        last_tick = t;
        match &event.kind {
            EventKind::PersonAppear { id, x, y } => {
                if *id == 0 {
                    return Err(ScenarioError::validation(
                        line,
                        "person id must be positive",
                    ));
                }
                if !x.is_finite() || !y.is_finite() {
                    return Err(ScenarioError::validation(
                        line,
                        format!("non-finite position for person {id}"),
                    ));
                }
                if !present.insert(*id) {
                    return Err(ScenarioError::validation(
                        line,
                        format!("person {id} already present at tick {t}"),
                    ));
                }
            }
            EventKind::PersonMove { id, .. } if !present.contains(id) => {
                return Err(ScenarioError::validation(
                    line,
                    format!("unknown person {id} at tick {t}"),
                ));
            }
            EventKind::PersonLeave { id } if !present.remove(id) => {
                return Err(ScenarioError::validation(
                    line,
                    format!("unknown person {id} at tick {t}"),
                ));
            }
            _ => {}
        }
    }
    Ok(())
}

/// A whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column0, (byte, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((col, b)) = start.take() {
                tokens.push(Token {
                    column: col + 1,
                    text: &line[b..byte],
                });
            }
        } else if start.is_none() {
            start = Some((column0, byte));
        }
    }
    if let Some((col, b)) = start {
        tokens.push(Token {
            column: col + 1,
            text: &line[b..],
        });
    }
    tokens
}

struct LineParser<'a> {
    line: usize,
    /// Column just past the last character, for errors at end of line.
    end_column: usize,
    tokens: std::vec::IntoIter<Token<'a>>,
}

impl<'a> LineParser<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Self {
            line,
            end_column: text.chars().count() + 1,
            tokens: tokenize(text).into_iter(),
        }
    }

    fn error(&self, column: usize, message: impl Into<String>, expected: &str) -> ParseError {
        ParseError::new(self.line, column, message, expected)
    }

    fn next(&mut self, expected: &str) -> Result<Token<'a>, ParseError> {
        self.tokens
            .next()
            .ok_or_else(|| self.error(self.end_column, "unexpected end of line", expected))
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let tok = self.next(word)?;
        if tok.text != word {
            return Err(self.error(tok.column, format!("unexpected '{}'", tok.text), word));
        }
        Ok(())
    }

    fn choice(&mut self, options: &[&'static str]) -> Result<&'static str, ParseError> {
        let expected = options.join("|");
        let tok = self.next(&expected)?;
        options
            .iter()
            .find(|o| **o == tok.text)
            .copied()
            .ok_or_else(|| self.error(tok.column, format!("unexpected '{}'", tok.text), &expected))
    }

    /// `key=value`, returning the value and its column.
    fn field(&mut self, key: &str, expected: &str) -> Result<(&'a str, usize), ParseError> {
        let tok = self.next(expected)?;
        let prefix = format!("{key}=");
        match tok.text.strip_prefix(&prefix) {
            Some(value) => Ok((value, tok.column + prefix.len())),
            None => Err(self.error(tok.column, format!("unexpected '{}'", tok.text), expected)),
        }
    }

    fn int_field(&mut self, key: &str) -> Result<u32, ParseError> {
        let expected = format!("{key}=INT");
        let (value, column) = self.field(key, &expected)?;
        parse_int(value)
            .ok_or_else(|| self.error(column, format!("invalid integer '{value}'"), "INT"))
    }

    fn float_field(&mut self, key: &str) -> Result<f64, ParseError> {
        let expected = format!("{key}=FLOAT");
        let (value, column) = self.field(key, &expected)?;
        parse_float(value)
            .ok_or_else(|| self.error(column, format!("invalid number '{value}'"), "FLOAT"))
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.tokens.next() {
            None => Ok(()),
            Some(tok) => Err(self.error(
                tok.column,
                format!("unexpected trailing '{}'", tok.text),
                "end of line",
            )),
        }
    }
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Option<T> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Decimal with optional sign and fraction; no exponents.
fn parse_float(s: &str) -> Option<f64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int) || frac.is_some_and(|f| !all_digits(f)) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<ScenarioScript, ScenarioError> {
    let mut header: Option<(String, Tick)> = None;
    let mut events: Vec<(usize, Event)> = Vec::new();

    for (index, raw) in text.split('\n').enumerate() {
        let line_no = index + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut p = LineParser::new(line_no, line);
        if header.is_none() {
            p.keyword("scenario")?;
            let name = p.next("IDENT")?;
            if !is_ident(name.text) {
                return Err(p
                    .error(
                        name.column,
                        format!("invalid name '{}'", name.text),
                        "IDENT",
                    )
                    .into());
            }
            p.keyword("ticks")?;
            let ticks = p.next("INT")?;
            let duration = parse_int::<Tick>(ticks.text).ok_or_else(|| {
                p.error(
                    ticks.column,
                    format!("invalid integer '{}'", ticks.text),
                    "INT",
                )
            })?;
            p.end()?;
            header = Some((name.text.to_owned(), duration));
            continue;
        }

        let at = p.next("@INT")?;
        let at_tick = at
            .text
            .strip_prefix('@')
            .and_then(parse_int::<Tick>)
            .ok_or_else(|| p.error(at.column, format!("unexpected '{}'", at.text), "@INT"))?;
        let event = match p.choice(&[
            "person_appear",
            "person_move",
            "person_leave",
            "button",
            "hazard",
            "network",
        ])? {
            keyword @ ("person_appear" | "person_move") => {
                let id = p.int_field("id")?;
                let x = p.float_field("x")?;
                let y = p.float_field("y")?;
                if keyword == "person_appear" {
                    EventKind::PersonAppear { id, x, y }
                } else {
                    EventKind::PersonMove { id, x, y }
                }
            }
            "person_leave" => EventKind::PersonLeave {
                id: p.int_field("id")?,
            },
            "button" => EventKind::ButtonPress(match p.choice(&["yes", "no", "aux"])? {
                "yes" => Button::Yes,
                "no" => Button::No,
                _ => Button::Aux,
            }),
            "hazard" => match p.choice(&["on", "off"])? {
                "on" => EventKind::HazardOn,
                _ => EventKind::HazardOff,
            },
            _ => match p.choice(&["down", "up"])? {
                "down" => EventKind::NetworkDown,
                _ => EventKind::NetworkUp,
            },
        };
        p.end()?;
        events.push((line_no, Event::new(at_tick, event)));
    }

    let Some((name, duration)) = header else {
        let line = text.split('\n').count().max(1);
        return Err(ParseError::new(line, 1, "missing scenario header", "scenario").into());
    };
    // stable: same-tick events keep file order
    events.sort_by_key(|(_, e)| e.at_tick);
    validate_events(duration, events.iter().map(|(l, e)| (Some(*l), e)))?;
    Ok(ScenarioScript {
        name,
        duration,
        events: events.into_iter().map(|(_, e)| e).collect(),
    })
}
