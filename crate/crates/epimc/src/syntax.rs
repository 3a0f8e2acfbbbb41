//! Formula AST for all language layers, concrete syntax, size metric, and
//! the labelled subformula ordering consumed by the global checker.
//!
//! Concrete grammar (whitespace-insensitive, parentheses required around
//! binary operators):
//!
//! ```text
//! formula := ident | 'true' | 'false'
//!          | '~' formula
//!          | '(' formula (('&'|'|'|'->'|'<->') formula)? ')'
//!          | 'D' '{' agents '}' formula
//!          | 'K' ident formula
//!          | '[' '{'? agents '}'? '!' formula ']' formula      partial communication
//!          | '<' '{'? agents '}'? '!' formula '>' formula      its dual
//!          | '[' '*' agents ']' formula | '<' '*' agents '>' formula
//!          | '[' '!' formula ']' formula | '<' '!' formula '>' formula
//!          | '[' '!' '*' ']' formula | '<' '!' '*' '>' formula
//! ```
//!
//! `K`, `D`, `true` and `false` are reserved words. Derived forms (`|`,
//! `->`, `<->`, `K`, diamonds, the constants) expand to the core
//! constructors at parse time. A partial communication group may be empty,
//! but it must then be written with explicit braces (`[{} ! p] q`) so the
//! surface form stays distinct from an announcement `[! p] q`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Atom used when expanding the constants: `true` becomes `~(p & ~p)`.
const TAUT_ATOM: &str = "p";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Distributed knowledge `D_G φ`; the group is non-empty.
    D(BTreeSet<String>, Box<Formula>),
    /// Partial communication `[S!χ]φ`; the group may be empty.
    PartialComm(BTreeSet<String>, Box<Formula>, Box<Formula>),
    /// Arbitrary partial communication `[*S]φ`.
    ArbPartialComm(BTreeSet<String>, Box<Formula>),
    /// Edge-deleting public announcement `[ξ!]φ`.
    PubAnn(Box<Formula>, Box<Formula>),
    /// Arbitrary public announcement `[!*]φ`.
    ArbPubAnn(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn tt() -> Formula {
        Formula::not(Formula::ff())
    }

    pub fn ff() -> Formula {
        Formula::and(Formula::atom(TAUT_ATOM), Formula::not(Formula::atom(TAUT_ATOM)))
    }

    /// `D_G φ`. Panics on an empty group; parser input goes through
    /// [`Formula::d_checked`].
    pub fn d(group: BTreeSet<String>, f: Formula) -> Formula {
        assert!(!group.is_empty(), "D group must be non-empty");
        Formula::D(group, Box::new(f))
    }

    pub fn d_checked(group: BTreeSet<String>, f: Formula) -> Result<Formula> {
        if group.is_empty() {
            return Err(Error::EmptyGroup);
        }
        Ok(Formula::D(group, Box::new(f)))
    }

    /// `K_i φ := D_{{i}} φ`.
    pub fn k(agent: impl Into<String>, f: Formula) -> Formula {
        Formula::d([agent.into()].into_iter().collect(), f)
    }

    /// `K̂_i φ := ¬D_{{i}}¬φ`.
    pub fn k_hat(agent: impl Into<String>, f: Formula) -> Formula {
        Formula::not(Formula::k(agent, Formula::not(f)))
    }

    pub fn partial_comm(group: BTreeSet<String>, topic: Formula, f: Formula) -> Formula {
        Formula::PartialComm(group, Box::new(topic), Box::new(f))
    }

    /// `⟨S!χ⟩φ := ¬[S!χ]¬φ`.
    pub fn partial_comm_dia(group: BTreeSet<String>, topic: Formula, f: Formula) -> Formula {
        Formula::not(Formula::partial_comm(group, topic, Formula::not(f)))
    }

    pub fn arb_partial_comm(group: BTreeSet<String>, f: Formula) -> Formula {
        Formula::ArbPartialComm(group, Box::new(f))
    }

    /// `⟨*S⟩φ := ¬[*S]¬φ`.
    pub fn arb_partial_comm_dia(group: BTreeSet<String>, f: Formula) -> Formula {
        Formula::not(Formula::arb_partial_comm(group, Formula::not(f)))
    }

    pub fn pub_ann(topic: Formula, f: Formula) -> Formula {
        Formula::PubAnn(Box::new(topic), Box::new(f))
    }

    /// `⟨ξ!⟩φ := ¬[ξ!]¬φ`.
    pub fn pub_ann_dia(topic: Formula, f: Formula) -> Formula {
        Formula::not(Formula::pub_ann(topic, Formula::not(f)))
    }

    pub fn arb_pub_ann(f: Formula) -> Formula {
        Formula::ArbPubAnn(Box::new(f))
    }

    pub fn arb_pub_ann_dia(f: Formula) -> Formula {
        Formula::not(Formula::arb_pub_ann(Formula::not(f)))
    }

    /// `|φ|`: atoms count 1; `¬`, `D_G` and `[*S]`/`[!*]` add 1; `∧` adds 1
    /// to the sum of the operands; `[S!χ]`/`[ξ!]` add 1 to topic plus body.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::D(_, f) | Formula::ArbPartialComm(_, f) | Formula::ArbPubAnn(f) => {
                f.size() + 1
            }
            Formula::And(a, b) => a.size() + b.size() + 1,
            Formula::PartialComm(_, topic, f) | Formula::PubAnn(topic, f) => {
                topic.size() + f.size() + 1
            }
        }
    }

    /// Atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Agents named in `D`, `[S!χ]` or `[*S]` groups.
    pub fn agents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::D(g, _) | Formula::PartialComm(g, _, _) | Formula::ArbPartialComm(g, _) => {
                out.extend(g.iter().cloned());
            }
            _ => {}
        });
        out
    }

    pub fn has_quantifier(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| {
            if matches!(f, Formula::ArbPartialComm(..) | Formula::ArbPubAnn(..)) {
                found = true;
            }
        });
        found
    }

    pub fn has_update_modality(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| {
            if matches!(
                f,
                Formula::PartialComm(..)
                    | Formula::ArbPartialComm(..)
                    | Formula::PubAnn(..)
                    | Formula::ArbPubAnn(..)
            ) {
                found = true;
            }
        });
        found
    }

    fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) | Formula::D(_, f) | Formula::ArbPartialComm(_, f) | Formula::ArbPubAnn(f) => {
                f.walk(visit)
            }
            Formula::And(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Formula::PartialComm(_, topic, f) | Formula::PubAnn(topic, f) => {
                topic.walk(visit);
                f.walk(visit);
            }
        }
    }
}

fn write_group(out: &mut String, group: &BTreeSet<String>) {
    out.push('{');
    for (i, a) in group.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(a);
    }
    out.push('}');
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Not(g) => {
            out.push('~');
            write_formula(out, g);
        }
        Formula::And(a, b) => {
            out.push('(');
            write_formula(out, a);
            out.push_str(" & ");
            write_formula(out, b);
            out.push(')');
        }
        Formula::D(g, body) => {
            out.push('D');
            write_group(out, g);
            out.push(' ');
            write_formula(out, body);
        }
        Formula::PartialComm(g, topic, body) => {
            out.push('[');
            write_group(out, g);
            out.push_str(" ! ");
            write_formula(out, topic);
            out.push_str("] ");
            write_formula(out, body);
        }
        Formula::ArbPartialComm(g, body) => {
            out.push_str("[*");
            if !group_is_empty(g) {
                out.push(' ');
                for (i, a) in g.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(a);
                }
            }
            out.push_str("] ");
            write_formula(out, body);
        }
        Formula::PubAnn(topic, body) => {
            out.push_str("[! ");
            write_formula(out, topic);
            out.push_str("] ");
            write_formula(out, body);
        }
        Formula::ArbPubAnn(body) => {
            out.push_str("[!*] ");
            write_formula(out, body);
        }
    }
}

fn group_is_empty(g: &BTreeSet<String>) -> bool {
    g.is_empty()
}

/// Canonical text form; `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { text: text.as_bytes(), pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn try_eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an identifier"));
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).unwrap().to_string())
    }

    /// Comma-separated identifiers; empty is allowed. `stop` is the byte
    /// that terminates the list without consuming it.
    fn agent_list(&mut self, stops: &[u8]) -> Result<BTreeSet<String>> {
        let mut agents = BTreeSet::new();
        loop {
            match self.peek() {
                Some(c) if stops.contains(&c) => break,
                _ => {}
            }
            agents.insert(self.ident()?);
            if !self.try_eat(b',') {
                break;
            }
        }
        Ok(agents)
    }

    fn braced_group(&mut self) -> Result<BTreeSet<String>> {
        self.eat(b'{')?;
        let agents = self.agent_list(&[b'}'])?;
        self.eat(b'}')?;
        Ok(agents)
    }

    /// Body of a `[...]` or `<...>` modality; `close` is `]` or `>`.
    /// Diamonds expand to their box definitions.
    fn modality(&mut self, close: u8) -> Result<Formula> {
        let dia = close == b'>';
        if self.try_eat(b'!') {
            if self.try_eat(b'*') {
                // [!*] / <!*>
                self.eat(close)?;
                let body = self.formula()?;
                return Ok(if dia {
                    Formula::arb_pub_ann_dia(body)
                } else {
                    Formula::arb_pub_ann(body)
                });
            }
            // [! χ] / <! χ>
            let topic = self.formula()?;
            self.eat(close)?;
            let body = self.formula()?;
            return Ok(if dia {
                Formula::pub_ann_dia(topic, body)
            } else {
                Formula::pub_ann(topic, body)
            });
        }
        if self.try_eat(b'*') {
            // [* a,b] / <* a,b>
            let group = if self.peek() == Some(b'{') {
                self.braced_group()?
            } else {
                self.agent_list(&[close])?
            };
            self.eat(close)?;
            let body = self.formula()?;
            return Ok(if dia {
                Formula::arb_partial_comm_dia(group, body)
            } else {
                Formula::arb_partial_comm(group, body)
            });
        }
        // [a,b ! χ] / [{a,b} ! χ] and the diamond forms
        let group = if self.peek() == Some(b'{') {
            self.braced_group()?
        } else {
            self.agent_list(&[b'!'])?
        };
        self.eat(b'!')?;
        let topic = self.formula()?;
        self.eat(close)?;
        let body = self.formula()?;
        Ok(if dia {
            Formula::partial_comm_dia(group, topic, body)
        } else {
            Formula::partial_comm(group, topic, body)
        })
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let lhs = self.formula()?;
                let f = match self.peek() {
                    Some(b')') => lhs,
                    Some(b'&') => {
                        self.pos += 1;
                        Formula::and(lhs, self.formula()?)
                    }
                    Some(b'|') => {
                        self.pos += 1;
                        Formula::or(lhs, self.formula()?)
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        self.eat(b'>')?;
                        Formula::implies(lhs, self.formula()?)
                    }
                    Some(b'<') => {
                        self.pos += 1;
                        self.eat(b'-')?;
                        self.eat(b'>')?;
                        Formula::iff(lhs, self.formula()?)
                    }
                    _ => return Err(self.err("expected a binary operator or `)`")),
                };
                self.eat(b')')?;
                Ok(f)
            }
            Some(b'[') => {
                self.pos += 1;
                self.modality(b']')
            }
            Some(b'<') => {
                self.pos += 1;
                self.modality(b'>')
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let word = self.ident()?;
                match word.as_str() {
                    "true" => Ok(Formula::tt()),
                    "false" => Ok(Formula::ff()),
                    "D" => {
                        let at_group = self.pos;
                        let group = self.braced_group()?;
                        if group.is_empty() {
                            return Err(Error::Parse {
                                position: at_group,
                                message: "empty group under D".to_string(),
                            });
                        }
                        Ok(Formula::D(group, Box::new(self.formula()?)))
                    }
                    "K" => {
                        let agent = self.ident()?;
                        Ok(Formula::k(agent, self.formula()?))
                    }
                    _ => Ok(Formula::Atom(word)),
                }
            }
            Some(c) => Err(self.err(&format!("unexpected character `{}`", c as char))),
        }
    }
}

// ---------------------------------------------------------------------------
// Labelled subformulas
// ---------------------------------------------------------------------------

/// One descriptor `[S!χ]` of a partial communication modality.
pub type ModalityDescriptor = (BTreeSet<String>, Formula);

/// An entry of `sub(φ)`: either a subformula occurrence or a partial
/// communication modality symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubElement {
    Formula(Formula),
    Modality(ModalityDescriptor),
}

/// A `sub(φ)` entry together with the sequence of partial communication
/// modalities enclosing the occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelledSubformula {
    pub element: SubElement,
    pub label: Vec<ModalityDescriptor>,
}

/// The ordered list `sub(φ)` for the partial-communication fragment: all
/// subformulas plus all partial communication modality symbols, each
/// labelled with its enclosing modality sequence. A modality's topic is
/// listed before the modality symbol, which comes before the (relabelled)
/// body, which comes before the modal formula itself; this realises the
/// published clause ordering directly. Occurrences with identical element
/// and label are listed once.
pub fn ordered_subformulas(f: &Formula) -> Result<Vec<LabelledSubformula>> {
    let mut out: Vec<LabelledSubformula> = Vec::new();
    collect(f, &Vec::new(), &mut out)?;
    Ok(out)
}

fn push(out: &mut Vec<LabelledSubformula>, element: SubElement, label: &[ModalityDescriptor]) {
    let entry = LabelledSubformula { element, label: label.to_vec() };
    if !out.contains(&entry) {
        out.push(entry);
    }
}

fn collect(
    f: &Formula,
    label: &Vec<ModalityDescriptor>,
    out: &mut Vec<LabelledSubformula>,
) -> Result<()> {
    match f {
        Formula::Atom(_) => {}
        Formula::Not(g) | Formula::D(_, g) => collect(g, label, out)?,
        Formula::And(a, b) => {
            collect(a, label, out)?;
            collect(b, label, out)?;
        }
        Formula::PartialComm(s, topic, body) => {
            collect(topic, label, out)?;
            let descriptor = (s.clone(), (**topic).clone());
            push(out, SubElement::Modality(descriptor.clone()), label);
            let mut inner = label.clone();
            inner.push(descriptor);
            collect(body, &inner, out)?;
        }
        Formula::ArbPartialComm(..) | Formula::ArbPubAnn(..) | Formula::PubAnn(..) => {
            return Err(Error::UnsupportedFragment(
                "subformula ordering covers the partial-communication fragment only".to_string(),
            ));
        }
    }
    push(out, SubElement::Formula(f.clone()), label);
    Ok(())
}
