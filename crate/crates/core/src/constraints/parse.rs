//! Denial constraint text form: `!( t1.A OP t2.B & ... )`.

use std::fmt;

use crate::error::{Error, Result};
use crate::relation::{AttributeKind, AttributeMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Eq,
    Ne,
    Gt,
    Ge,
    Lt,
    Le,
}

impl Operator {
    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Eq => "==",
            Operator::Ne => "!=",
            Operator::Gt => ">",
            Operator::Ge => ">=",
            Operator::Lt => "<",
            Operator::Le => "<=",
        }
    }

    pub fn is_order(self) -> bool {
        matches!(self, Operator::Gt | Operator::Ge | Operator::Lt | Operator::Le)
    }

    /// The operator obtained by swapping the operands.
    pub fn mirrored(self) -> Self {
        match self {
            Operator::Gt => Operator::Lt,
            Operator::Ge => Operator::Le,
            Operator::Lt => Operator::Gt,
            Operator::Le => Operator::Ge,
            op => op,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `t1[left_attr] op t2[right_attr]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub left_attr: usize,
    pub op: Operator,
    pub right_attr: usize,
}

#[derive(Debug, Clone)]
pub struct DenialConstraint {
    predicates: Vec<Predicate>,
    source_text: String,
    // attribute names, kept for serialization
    names: Vec<String>,
}

impl PartialEq for DenialConstraint {
    fn eq(&self, other: &Self) -> bool {
        self.predicates == other.predicates
    }
}

impl DenialConstraint {
    pub fn new(predicates: Vec<Predicate>, schema: &[AttributeMeta]) -> Result<Self> {
        if predicates.is_empty() {
            return Err(Error::DcSyntax {
                position: 0,
                message: "a constraint needs at least one predicate".into(),
            });
        }
        for p in &predicates {
            for a in [p.left_attr, p.right_attr] {
                if a >= schema.len() {
                    return Err(Error::UnknownAttribute(format!("#{a}")));
                }
            }
            check_kinds(p, schema)?;
        }
        let names = schema.iter().map(|a| a.name.clone()).collect();
        let mut dc = DenialConstraint {
            predicates,
            source_text: String::new(),
            names,
        };
        dc.source_text = dc.to_string();
        Ok(dc)
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }
}

fn check_kinds(p: &Predicate, schema: &[AttributeMeta]) -> Result<()> {
    let (l, r) = (&schema[p.left_attr], &schema[p.right_attr]);
    if p.op.is_order() {
        for a in [l, r] {
            if a.kind == AttributeKind::Categorical {
                return Err(Error::OrderOnCategorical {
                    op: p.op.symbol().into(),
                    attribute: a.name.clone(),
                });
            }
        }
    }
    if l.kind != r.kind {
        return Err(Error::DcSyntax {
            position: 0,
            message: format!("`{}` and `{}` have different kinds", l.name, r.name),
        });
    }
    Ok(())
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    let plain = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
    if plain {
        f.write_str(name)
    } else {
        write!(f, "`{name}`")
    }
}

impl fmt::Display for DenialConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("!(")?;
        for (k, p) in self.predicates.iter().enumerate() {
            if k > 0 {
                f.write_str(" & ")?;
            }
            f.write_str("t1.")?;
            write_name(f, &self.names[p.left_attr])?;
            write!(f, " {} t2.", p.op)?;
            write_name(f, &self.names[p.right_attr])?;
        }
        f.write_str(")")
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::DcSyntax {
            position: self.pos + 1,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn tuple_var(&mut self) -> Result<u8> {
        self.skip_ws();
        if self.eat("t1.") {
            Ok(1)
        } else if self.eat("t2.") {
            Ok(2)
        } else {
            self.err("expected `t1.` or `t2.`")
        }
    }

    fn ident(&mut self) -> Result<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        if let Some(quoted) = rest.strip_prefix('`') {
            match quoted.find('`') {
                Some(end) => {
                    self.pos += end + 2;
                    Ok((&quoted[..end], start))
                }
                None => self.err("unterminated `"),
            }
        } else {
            let len: usize = rest
                .chars()
                .take_while(|c| c.is_alphanumeric() || *c == '_')
                .map(char::len_utf8)
                .sum();
            if len == 0 {
                return self.err("expected an attribute name");
            }
            self.pos += len;
            Ok((&rest[..len], start))
        }
    }

    fn operator(&mut self) -> Result<Operator> {
        self.skip_ws();
        // Longest match first.
        for (tok, op) in [
            ("==", Operator::Eq),
            ("!=", Operator::Ne),
            (">=", Operator::Ge),
            ("<=", Operator::Le),
            ("<>", Operator::Ne),
            (">", Operator::Gt),
            ("<", Operator::Lt),
            ("=", Operator::Eq),
        ] {
            if self.eat(tok) {
                return Ok(op);
            }
        }
        self.err("expected one of ==, !=, >, >=, <, <=")
    }
}

/// Parses one constraint against `schema`.
pub fn parse_dc(text: &str, schema: &[AttributeMeta]) -> Result<DenialConstraint> {
    let mut c = Cursor { text, pos: 0 };
    c.expect("!")?;
    c.expect("(")?;
    let mut predicates = Vec::new();
    loop {
        let lhs_var = c.tuple_var()?;
        let (lhs, lhs_pos) = c.ident()?;
        let op = c.operator()?;
        let rhs_var = c.tuple_var()?;
        let (rhs, _) = c.ident()?;
        let resolve = |name: &str| -> Result<usize> {
            schema
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
        };
        let (l, r) = (resolve(lhs)?, resolve(rhs)?);
        let pred = match (lhs_var, rhs_var) {
            (1, 2) => Predicate {
                left_attr: l,
                op,
                right_attr: r,
            },
            (2, 1) => Predicate {
                left_attr: r,
                op: op.mirrored(),
                right_attr: l,
            },
            _ => {
                c.pos = lhs_pos;
                return c.err("a predicate must compare t1 with t2");
            }
        };
        check_kinds(&pred, schema)?;
        predicates.push(pred);
        if c.eat("&") {
            continue;
        }
        c.expect(")")?;
        break;
    }
    c.skip_ws();
    if !c.rest().is_empty() {
        return c.err("trailing input after constraint");
    }
    let mut dc = DenialConstraint::new(predicates, schema)?;
    dc.source_text = text.trim().to_string();
    Ok(dc)
}

/// Parses a constraint file: one constraint per line, `#` starts a comment.
pub fn parse_dc_file(text: &str, schema: &[AttributeMeta]) -> Result<Vec<DenialConstraint>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_dc(line, schema).map_err(|e| match e {
            Error::DcSyntax { position, message } => Error::DcSyntax {
                position,
                message: format!("line {}: {message}", idx + 1),
            },
            other => other,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Vec<AttributeMeta> {
        let meta = |name: &str, kind| AttributeMeta {
            name: name.into(),
            kind,
            observed_min: 0.0,
            observed_max: 1.0,
            max_len: 3,
        };
        vec![
            meta("Room", AttributeKind::Categorical),
            meta("Month", AttributeKind::Categorical),
            meta("Temperature", AttributeKind::Numeric),
            meta("Usage", AttributeKind::Numeric),
            meta("Charge", AttributeKind::Numeric),
        ]
    }

    #[test]
    fn month_temperature() {
        let dc = parse_dc("!(t1.Month == t2.Month & t1.Temperature != t2.Temperature)", &schema()).unwrap();
        assert_eq!(
            dc.predicates(),
            &[
                Predicate {
                    left_attr: 1,
                    op: Operator::Eq,
                    right_attr: 1
                },
                Predicate {
                    left_attr: 2,
                    op: Operator::Ne,
                    right_attr: 2
                },
            ]
        );
    }

    #[test]
    fn usage_charge() {
        let dc = parse_dc("!(t1.Usage > t2.Usage & t1.Charge <= t2.Charge)", &schema()).unwrap();
        assert_eq!(
            dc.predicates(),
            &[
                Predicate {
                    left_attr: 3,
                    op: Operator::Gt,
                    right_attr: 3
                },
                Predicate {
                    left_attr: 4,
                    op: Operator::Le,
                    right_attr: 4
                },
            ]
        );
    }

    #[test]
    fn round_trip() {
        let s = schema();
        for text in [
            "!(t1.Month == t2.Month & t1.Temperature != t2.Temperature)",
            "!(t1.Usage>t2.Usage&t1.Charge<=t2.Charge)",
            "!( t2.Usage < t1.Usage )",
        ] {
            let a = parse_dc(text, &s).unwrap();
            let b = parse_dc(&a.to_string(), &s).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_string(), b.to_string());
        }
    }

    #[test]
    fn mirrored_tuple_roles() {
        let s = schema();
        let a = parse_dc("!(t2.Usage < t1.Usage)", &s).unwrap();
        let b = parse_dc("!(t1.Usage > t2.Usage)", &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let s = schema();
        assert!(matches!(
            parse_dc("!(t1.Mnth == t2.Month)", &s),
            Err(Error::UnknownAttribute(a)) if a == "Mnth"
        ));
        assert!(matches!(
            parse_dc("!(t1.Month > t2.Month)", &s),
            Err(Error::OrderOnCategorical { .. })
        ));
        assert!(matches!(
            parse_dc("!(t1.Month == t2.Month", &s),
            Err(Error::DcSyntax { position: 23, .. })
        ));
        assert!(matches!(
            parse_dc("(t1.Month == t2.Month)", &s),
            Err(Error::DcSyntax { position: 1, .. })
        ));
        assert!(matches!(
            parse_dc("!(t1.Month ~ t2.Month)", &s),
            Err(Error::DcSyntax { position: 12, .. })
        ));
        assert!(matches!(
            parse_dc("!(t1.Month == t1.Month)", &s),
            Err(Error::DcSyntax { .. })
        ));
        assert!(matches!(parse_dc("!()", &s), Err(Error::DcSyntax { .. })));
    }

    #[test]
    fn file_with_comments() {
        let text = "# electricity rules\n!(t1.Month == t2.Month & t1.Temperature != t2.Temperature)\n\n!(t1.Usage > t2.Usage & t1.Charge <= t2.Charge) # monotone\n";
        let dcs = parse_dc_file(text, &schema()).unwrap();
        assert_eq!(dcs.len(), 2);
    }
}
