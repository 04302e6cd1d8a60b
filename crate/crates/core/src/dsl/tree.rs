use std::fmt::Write as _;

use thiserror::Error;

use super::{is_ident, ParseError};
use crate::bt::{NodeKind, TreeNode};
use crate::catalogue::Catalogue;
use crate::error::ConfigError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Star,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => format!("'{s}'"),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Star => "'*'".into(),
            Tok::Eq => "'='".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '*' => Some(Tok::Star),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            bump(&mut chars);
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_alphabetic() || c == '_' || c.is_ascii_digit() {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            let tok = if word.bytes().all(|b| b.is_ascii_digit()) {
                Tok::Int(word)
            } else if is_ident(&word) {
                Tok::Ident(word)
            } else {
                return Err(ParseError::new(
                    start_line,
                    start_col,
                    format!("invalid identifier '{word}'"),
                    "IDENT",
                ));
            };
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
        } else {
            return Err(ParseError::new(
                start_line,
                start_col,
                format!("unexpected character '{c}'"),
                "node",
            ));
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Spanned {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::new(t.line, t.column, message, expected)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error_here(
            format!("unexpected {}", self.peek().tok.describe()),
            expected,
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected("IDENT")),
        }
    }

    fn node(&mut self) -> Result<TreeNode, ParseError> {
        let keyword = match &self.peek().tok {
            Tok::Ident(k) => k.clone(),
            _ => return Err(self.unexpected("node")),
        };
        match keyword.as_str() {
            "sequence" | "fallback" => {
                self.advance();
                let memory = if self.peek().tok == Tok::Star {
                    self.advance();
                    true
                } else {
                    false
                };
                let label = self.ident()?;
                let children = self.block()?;
                let kind = if keyword == "sequence" {
                    NodeKind::Sequence { memory }
                } else {
                    NodeKind::Fallback { memory }
                };
                Ok(TreeNode::from_parts(kind, Some(label), children))
            }
            "parallel" => {
                self.advance();
                let label = self.ident()?;
                let children = self.block()?;
                Ok(TreeNode::from_parts(
                    NodeKind::Parallel,
                    Some(label),
                    children,
                ))
            }
            "guard" => {
                self.advance();
                self.expect(Tok::LParen, "'('")?;
                let condition = self.ident()?;
                self.expect(Tok::RParen, "')'")?;
                let label = self.ident()?;
                self.expect(Tok::LBrace, "'{'")?;
                let child = self.node()?;
                if self.peek().tok != Tok::RBrace {
                    return Err(self.error_here(
                        format!(
                            "guard takes exactly one child, found {}",
                            self.peek().tok.describe()
                        ),
                        "'}'",
                    ));
                }
                self.advance();
                Ok(TreeNode::from_parts(
                    NodeKind::Guard { condition },
                    Some(label),
                    vec![child],
                ))
            }
            "condition" => {
                self.advance();
                let name = self.ident()?;
                Ok(TreeNode::from_parts(
                    NodeKind::Condition { name },
                    None,
                    vec![],
                ))
            }
            "action" => {
                self.advance();
                let behavior = self.ident()?;
                let is_dur =
                    self.peek().tok == Tok::Ident("dur".into()) && self.peek_at(1).tok == Tok::Eq;
                let duration = if is_dur {
                    self.advance();
                    self.advance();
                    match &self.peek().tok {
                        Tok::Int(digits) => {
                            let value = digits.parse::<u32>().map_err(|_| {
                                self.error_here(format!("duration '{digits}' out of range"), "INT")
                            })?;
                            self.advance();
                            Some(value)
                        }
                        _ => return Err(self.unexpected("INT")),
                    }
                } else {
                    None
                };
                Ok(TreeNode::from_parts(
                    NodeKind::Action { behavior, duration },
                    None,
                    vec![],
                ))
            }
            other => Err(self.error_here(
                format!("unknown node kind '{other}'"),
                "sequence|fallback|parallel|guard|condition|action",
            )),
        }
    }

    /// `{ node+ }`
    fn block(&mut self) -> Result<Vec<TreeNode>, ParseError> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut children = Vec::new();
        loop {
            match self.peek().tok {
                Tok::RBrace if children.is_empty() => {
                    return Err(self.error_here("composite requires at least one child", "node"));
                }
                Tok::RBrace => {
                    self.advance();
                    return Ok(children);
                }
                Tok::Eof => return Err(self.unexpected("'}'")),
                _ => children.push(self.node()?),
            }
        }
    }
}

/// Parses a tree. Names are not resolved; see [`parse_tree_checked`].
pub fn parse_tree(text: &str) -> Result<TreeNode, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let mut root = parser.node()?;
    if parser.peek().tok != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    root.assign_ids();
    Ok(root)
}

/// Parses a tree and validates it against `catalogue`.
pub fn parse_tree_checked(text: &str, catalogue: &dyn Catalogue) -> Result<TreeNode, TreeError> {
    let tree = parse_tree(text)?;
    tree.validate(catalogue)?;
    Ok(tree)
}

/// Canonical text form: two-space indent, one node per line.
pub fn print_tree(tree: &TreeNode) -> String {
    let mut out = String::new();
    print_node(tree, 0, &mut out);
    out
}

fn print_node(node: &TreeNode, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    let label = node.label().unwrap_or("unnamed");
    let header = match node.kind() {
        NodeKind::Condition { name } => {
            let _ = writeln!(out, "{indent}condition {name}");
            return;
        }
        NodeKind::Action { behavior, duration } => {
            let _ = match duration {
                Some(d) => writeln!(out, "{indent}action {behavior} dur={d}"),
                None => writeln!(out, "{indent}action {behavior}"),
            };
            return;
        }
        NodeKind::Sequence { memory } => {
            format!("sequence{} {label}", if *memory { "*" } else { "" })
        }
        NodeKind::Fallback { memory } => {
            format!("fallback{} {label}", if *memory { "*" } else { "" })
        }
        NodeKind::Parallel => format!("parallel {label}"),
        NodeKind::Guard { condition } => format!("guard({condition}) {label}"),
    };
    let _ = writeln!(out, "{indent}{header} {{");
    for child in node.children() {
        print_node(child, depth + 1, out);
    }
    let _ = writeln!(out, "{indent}}}");
}
