//! Minimal XML document model with a canonical serializer and a strict
//! parser.
//!
//! Payload sizes are part of the measured quantity, so serialization must be
//! byte-deterministic. Canonical form:
//!
//! - no XML declaration, exactly one root element;
//! - each element starts on its own line, indented two spaces per nesting
//!   level;
//! - attributes in fixed order, double-quoted, no spaces around `=`;
//! - an element with text content is rendered on one line
//!   (`<a>text</a>`), an element without content self-closes (`<a/>`);
//! - no trailing newline.
//!
//! The parser accepts a slightly wider dialect (single quotes, comments, an
//! XML declaration, insignificant whitespace) and reports errors with
//! line/column positions. Mixed content (text and child elements in the same
//! element) is outside the dialect and rejected.

use std::fmt;

/// An XML element: name, ordered attributes, and either child elements or
/// text content (never both).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Element>,
    pub text: Option<String>,
    /// 1-based line/column of the element's opening `<` (0,0 when built
    /// programmatically).
    pub pos: (u32, u32),
}

impl Element {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            attrs: Vec::new(),
            children: Vec::new(),
            text: None,
            pos: (0, 0),
        }
    }

    pub fn attr(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.attrs.push((name.into(), value.into()));
        self
    }

    pub fn child(mut self, child: Element) -> Self {
        self.children.push(child);
        self
    }

    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn get_attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    /// Serializes the element as a canonical document (no trailing newline).
    pub fn to_canonical_string(&self) -> String {
        let mut lines = Vec::new();
        self.render(0, &mut lines);
        lines.join("\n")
    }

    fn render(&self, depth: usize, lines: &mut Vec<String>) {
        let indent = "  ".repeat(depth);
        let mut open = format!("{indent}<{}", self.name);
        for (name, value) in &self.attrs {
            open.push(' ');
            open.push_str(name);
            open.push_str("=\"");
            open.push_str(&escape_attr(value));
            open.push('"');
        }
        match (&self.text, self.children.is_empty()) {
            (Some(text), _) => {
                open.push('>');
                open.push_str(&escape_text(text));
                open.push_str(&format!("</{}>", self.name));
                lines.push(open);
            }
            (None, true) => {
                open.push_str("/>");
                lines.push(open);
            }
            (None, false) => {
                open.push('>');
                lines.push(open);
                for child in &self.children {
                    child.render(depth + 1, lines);
                }
                lines.push(format!("{indent}</{}>", self.name));
            }
        }
    }
}

fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn escape_text(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

/// A parse failure with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct XmlError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

/// Parses a complete document: optional declaration and comments around
/// exactly one root element.
pub fn parse_document(input: &str) -> Result<Element, XmlError> {
    let mut parser = Parser::new(input);
    parser.skip_bom();
    parser.skip_misc(true)?;
    if parser.at_end() {
        return Err(parser.error("expected a root element, found end of input"));
    }
    let root = parser.parse_element(0)?;
    parser.skip_misc(false)?;
    if !parser.at_end() {
        return Err(parser.error("content after the root element"));
    }
    Ok(root)
}

const MAX_DEPTH: usize = 64;

struct Parser<'a> {
    rest: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            rest: input,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> XmlError {
        XmlError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.rest.is_empty()
    }

    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, prefix: &str) -> bool {
        if self.rest.starts_with(prefix) {
            for _ in 0..prefix.chars().count() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn skip_bom(&mut self) {
        self.eat("\u{feff}");
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    /// Skips whitespace, comments, and (before the root) an XML declaration.
    fn skip_misc(&mut self, allow_decl: bool) -> Result<(), XmlError> {
        loop {
            self.skip_ws();
            if self.rest.starts_with("<!--") {
                self.skip_comment()?;
            } else if allow_decl && self.rest.starts_with("<?xml") {
                while !self.at_end() && !self.eat("?>") {
                    self.bump();
                }
            } else {
                return Ok(());
            }
        }
    }

    fn skip_comment(&mut self) -> Result<(), XmlError> {
        let start = (self.line, self.col);
        self.eat("<!--");
        while !self.at_end() {
            if self.eat("-->") {
                return Ok(());
            }
            self.bump();
        }
        Err(XmlError {
            line: start.0,
            col: start.1,
            message: "unterminated comment".into(),
        })
    }

    fn is_name_start(c: char) -> bool {
        c.is_ascii_alphabetic() || c == '_' || c == ':'
    }

    fn is_name_char(c: char) -> bool {
        Self::is_name_start(c) || c.is_ascii_digit() || c == '-' || c == '.'
    }

    fn parse_name(&mut self) -> Result<String, XmlError> {
        match self.peek() {
            Some(c) if Self::is_name_start(c) => {}
            _ => return Err(self.error("expected a name")),
        }
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if Self::is_name_char(c) {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn parse_element(&mut self, depth: usize) -> Result<Element, XmlError> {
        if depth > MAX_DEPTH {
            return Err(self.error("element nesting too deep"));
        }
        let pos = (self.line, self.col);
        if !self.eat("<") {
            return Err(self.error("expected '<'"));
        }
        let name = self.parse_name()?;
        let mut element = Element {
            name,
            attrs: Vec::new(),
            children: Vec::new(),
            text: None,
            pos,
        };

        loop {
            let had_ws = matches!(self.peek(), Some(c) if c.is_ascii_whitespace());
            self.skip_ws();
            match self.peek() {
                Some('/') => {
                    self.bump();
                    if !self.eat(">") {
                        return Err(self.error("expected '>' after '/'"));
                    }
                    return Ok(element);
                }
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(c) if Self::is_name_start(c) => {
                    if !had_ws {
                        return Err(self.error("expected whitespace before attribute"));
                    }
                    let attr_pos = (self.line, self.col);
                    let attr_name = self.parse_name()?;
                    if element.attrs.iter().any(|(n, _)| *n == attr_name) {
                        return Err(XmlError {
                            line: attr_pos.0,
                            col: attr_pos.1,
                            message: format!("duplicate attribute {attr_name:?}"),
                        });
                    }
                    if !self.eat("=") {
                        return Err(self.error(format!(
                            "attribute {attr_name:?} is missing '=' and a quoted value"
                        )));
                    }
                    let value = self.parse_attr_value()?;
                    element.attrs.push((attr_name, value));
                }
                Some(_) => return Err(self.error("malformed tag")),
                None => return Err(self.error("unterminated start tag")),
            }
        }

        // Content: text, child elements, and comments until the end tag.
        let mut text = String::new();
        loop {
            if self.rest.starts_with("<!--") {
                self.skip_comment()?;
                continue;
            }
            if self.rest.starts_with("</") {
                self.eat("</");
                let end_pos = (self.line, self.col);
                let end_name = self.parse_name()?;
                self.skip_ws();
                if !self.eat(">") {
                    return Err(self.error("expected '>' in end tag"));
                }
                if end_name != element.name {
                    return Err(XmlError {
                        line: end_pos.0,
                        col: end_pos.1,
                        message: format!(
                            "end tag </{end_name}> does not match <{}>",
                            element.name
                        ),
                    });
                }
                break;
            }
            match self.peek() {
                Some('<') => {
                    let child = self.parse_element(depth + 1)?;
                    element.children.push(child);
                }
                Some(_) => {
                    let c = self.parse_text_char()?;
                    text.push(c);
                }
                None => {
                    return Err(self.error(format!("missing end tag </{}>", element.name)))
                }
            }
        }

        let trimmed = text.trim();
        if !trimmed.is_empty() {
            if !element.children.is_empty() {
                return Err(XmlError {
                    line: element.pos.0,
                    col: element.pos.1,
                    message: format!("mixed content in <{}> is not supported", element.name),
                });
            }
            element.text = Some(trimmed.to_string());
        }
        Ok(element)
    }

    fn parse_attr_value(&mut self) -> Result<String, XmlError> {
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.error("expected a quoted attribute value")),
        };
        self.bump();
        let mut value = String::new();
        loop {
            match self.peek() {
                Some(c) if c == quote => {
                    self.bump();
                    return Ok(value);
                }
                Some('<') => return Err(self.error("'<' is not allowed in attribute values")),
                Some('&') => value.push(self.parse_entity()?),
                Some(_) => {
                    value.push(self.bump().unwrap());
                }
                None => return Err(self.error("unterminated attribute value")),
            }
        }
    }

    fn parse_text_char(&mut self) -> Result<char, XmlError> {
        match self.peek() {
            Some('&') => self.parse_entity(),
            Some('>') => Err(self.error("'>' must be escaped in text")),
            Some(_) => Ok(self.bump().unwrap()),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn parse_entity(&mut self) -> Result<char, XmlError> {
        let pos = (self.line, self.col);
        self.eat("&");
        let mut entity = String::new();
        loop {
            match self.peek() {
                Some(';') => {
                    self.bump();
                    break;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '#' => {
                    entity.push(c);
                    self.bump();
                }
                _ => {
                    return Err(XmlError {
                        line: pos.0,
                        col: pos.1,
                        message: "malformed entity reference".into(),
                    })
                }
            }
        }
        let resolved = match entity.as_str() {
            "amp" => Some('&'),
            "lt" => Some('<'),
            "gt" => Some('>'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            _ => entity
                .strip_prefix("#x")
                .and_then(|hex| u32::from_str_radix(hex, 16).ok())
                .or_else(|| entity.strip_prefix('#').and_then(|dec| dec.parse().ok()))
                .and_then(char::from_u32),
        };
        resolved.ok_or(XmlError {
            line: pos.0,
            col: pos.1,
            message: format!("undefined entity &{entity};"),
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
