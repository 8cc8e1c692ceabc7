use num_bigint::BigInt;

use super::{
    FieldKind, LocalSet, MPolyRing, MonomialOrder, Pid, RingDescriptor, RingElement, UniPolyRing,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {text:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a RingDescriptor,
    vars: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.ring.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.ring.sub(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = self.ring.mul(&acc, &t);
            } else if self.eat('/') {
                let t = self.unary()?;
                let inv = self.ring.inverse(&t).ok_or_else(|| {
                    Error::Parse(format!(
                        "{} is not invertible in {}",
                        self.ring.format(&t),
                        self.ring.name()
                    ))
                })?;
                acc = self.ring.mul(&acc, &inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RingElement> {
        if self.eat('-') {
            let a = self.unary()?;
            return Ok(self.ring.neg(&a));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RingElement> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let exp = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?,
            _ => return Err(Error::Parse("expected an exponent".into())),
        };
        self.pos += 1;
        let p = self.ring.pow(&base, exp);
        if negative {
            self.ring.inverse(&p).ok_or_else(|| {
                Error::Parse(format!("{} is not invertible in {}", self.ring.format(&base), self.ring.name()))
            })
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<RingElement> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.ring.from_bigint(&n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self.vars.iter().position(|v| *v == name).ok_or_else(|| {
                    Error::Parse(format!("unknown variable {name:?} in {}", self.ring.name()))
                })?;
                self.ring.var(i)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses decimal integers and ASCII polynomial expressions such as `x^2*y - 3/2*y + 1`.
///
/// Division and negative exponents are allowed by units of the ring.
pub(super) fn parse_element(ring: &RingDescriptor, text: &str) -> Result<RingElement> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        vars: ring.var_names(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {text:?}")));
    }
    Ok(e)
}

fn parse_field(text: &str) -> Result<FieldKind> {
    match text {
        "Q" => Ok(FieldKind::Rationals),
        _ => {
            let p = text
                .strip_prefix('F')
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown field {text:?}")))?;
            FieldKind::prime(p).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

fn parse_base(text: &str) -> Result<RingDescriptor> {
    let text = text.trim();
    match text {
        "0" | "zero" => return Ok(RingDescriptor::Zero),
        "Z" => return Ok(RingDescriptor::Integers),
        "Q" => return Ok(RingDescriptor::Rationals),
        _ => {}
    }
    if let Some(n) = text.strip_prefix("Z/") {
        let n: u64 = n.parse().map_err(|_| Error::Parse(format!("bad modulus in {text:?}")))?;
        return RingDescriptor::integers_mod(n).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(open) = text.find('[') {
        let close = text
            .rfind(']')
            .filter(|&c| c > open)
            .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {text:?}")))?;
        let field = parse_field(&text[..open])?;
        let inner = &text[open + 1..close];
        let (vars, order) = match inner.split_once(';') {
            Some((v, "lex")) => (v, MonomialOrder::Lex),
            Some((v, "grevlex")) => (v, MonomialOrder::Grevlex),
            Some((_, o)) => return Err(Error::Parse(format!("unknown monomial order {o:?}"))),
            None => (inner, MonomialOrder::Grevlex),
        };
        let vars: Vec<&str> = vars.split(',').map(str::trim).collect();
        if vars.iter().any(|v| v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric())) {
            return Err(Error::Parse(format!("bad variable list in {text:?}")));
        }
        let rest = text[close + 1..].trim();
        if vars.len() == 1 {
            let ring = UniPolyRing::new(field, vars[0]);
            if rest.is_empty() {
                return Ok(RingDescriptor::UniPoly(ring));
            }
            if let Some(m) = rest.strip_prefix("/(").and_then(|s| s.strip_suffix(')')) {
                let modulus = parse_element(&RingDescriptor::UniPoly(ring.clone()), m)?;
                return RingDescriptor::poly_quotient(ring, modulus.as_poly().unwrap().clone())
                    .map_err(|e| Error::Parse(e.to_string()));
            }
            return Err(Error::Parse(format!("unexpected suffix {rest:?}")));
        }
        if field != FieldKind::Rationals || !rest.is_empty() {
            return Err(Error::Parse("multivariate rings are supported over Q only".into()));
        }
        return Ok(RingDescriptor::MultiPoly(MPolyRing::new(
            vars.iter().map(|v| v.to_string()).collect(),
            order,
        )));
    }
    if text.starts_with('F') {
        let k = parse_field(text)?;
        return Ok(RingDescriptor::PrimeField(k.characteristic()));
    }
    Err(Error::Parse(format!("unknown ring {text:?}")))
}

/// Parses ring names: `Z`, `Z/12`, `F5`, `Q`, `F2[x]`, `Q[x,y]`, `Q[x,y;lex]`,
/// `F2[x]/(x^2 + x)`, `Z[1/6]`, `Q[x][1/x]`, `Q[x]_x`, `Z_(3)`, `Z_(0)`, `0`.
pub(super) fn parse_ring(text: &str) -> Result<RingDescriptor> {
    let text = text.trim();
    let localize = |base_text: &str, set_text: &str, prime: bool| -> Result<RingDescriptor> {
        let base_ring = parse_base(base_text)?;
        let pid = base_ring
            .as_pid()
            .filter(|p| !matches!(p, Pid::Field(_)))
            .ok_or_else(|| Error::Parse(format!("cannot localize {base_text:?}")))?;
        let elem = parse_element(&base_ring, set_text)?;
        let set = if prime {
            LocalSet::AvoidingPrime(elem)
        } else {
            LocalSet::PowersOf(elem)
        };
        RingDescriptor::localized(pid, set).map_err(|e| Error::Parse(e.to_string()))
    };
    if let Some(stripped) = text.strip_suffix(')') {
        if let Some(k) = stripped.rfind("_(") {
            return localize(&text[..k], &stripped[k + 2..], true);
        }
    }
    if let Some(stripped) = text.strip_suffix(']') {
        if let Some(k) = stripped.rfind("[1/") {
            if k > 0 {
                return localize(&text[..k], &stripped[k + 3..], false);
            }
        }
    }
    if let Some(k) = text.rfind("]_") {
        return localize(&text[..=k], &text[k + 2..], false);
    }
    parse_base(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names_round_trip() {
        for name in [
            "Z", "Z/12", "F5", "Q", "F2[x]", "Q[x,y]", "Q[x,y;lex]", "F2[x]/(x^2 + x)", "Z[1/6]",
            "Q[x][1/x]", "Z_(3)", "Z_(0)", "0",
        ] {
            let r = RingDescriptor::parse(name).unwrap();
            assert_eq!(RingDescriptor::parse(&r.name()).unwrap(), r, "{name}");
        }
        assert_eq!(
            RingDescriptor::parse("Q[x]_x").unwrap(),
            RingDescriptor::parse("Q[x][1/x]").unwrap()
        );
    }

    #[test]
    fn bad_names() {
        for name in ["Z/1", "F4", "R", "Z_(4)", "F2[x,y]", "Q[x"] {
            assert!(RingDescriptor::parse(name).is_err(), "{name}");
        }
    }

    #[test]
    fn polynomial_expressions() {
        let r = RingDescriptor::parse("Q[x,y]").unwrap();
        let e = r.parse_element("x^2*y - 3/2*y + 1").unwrap();
        assert_eq!(r.format(&e), "x^2*y - 3/2*y + 1");
        let z = RingDescriptor::Integers;
        assert!(matches!(z.parse_element("3/2"), Err(Error::Parse(_))));
        assert_eq!(z.parse_element("-(2+3)*4").unwrap(), RingElement::int(-20));
        assert!(r.parse_element("z").is_err());
        assert!(r.parse_element("x +").is_err());
    }

    #[test]
    fn laurent_expressions() {
        let r = RingDescriptor::parse("Q[y][1/y]").unwrap();
        let a = r.parse_element("y^-2 + 1").unwrap();
        let b = r.parse_element("(y^2 + 1)/y^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(r.format(&a), "(y^2 + 1)/y^2");
    }
}
