use num_bigint::BigInt;
use num_traits::Num;

use super::poly::MonicPoly;
use super::{Payload, Ring, RingDesc, RingElem};
use crate::error::{Error, Result};

/// Parse a ring descriptor from the compact text grammar, e.g. `Z`, `Q`,
/// `Z/9`, `GF(7)`, `Z[a,b]`, `Z[u]/(u^2-5)`, `GF(2)[x]/(x^3+x+1)`.
/// Extensions compose left-to-right.
pub fn parse_ring(text: &str) -> Result<Ring> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let ring = p.parse_ring_desc()?;
    p.expect_end()?;
    Ok(ring)
}

/// Parse an element of `ring` from infix notation; ring generators are in
/// scope by name.
pub fn parse_elem(ring: &Ring, text: &str) -> Result<RingElem> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.parse_expr()?;
    p.expect_end()?;
    let env = generator_env(ring);
    eval(&ast, ring, &|name, pos| {
        env.iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.clone())
            .ok_or_else(|| Error::parse(pos, format!("unknown symbol `{name}` in {ring}")))
    })
}

/// Parse a monic univariate polynomial over `ring`. The polynomial variable
/// is the one identifier that is not a generator of the ring.
pub fn parse_monic_poly(ring: &Ring, text: &str) -> Result<MonicPoly> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.parse_expr()?;
    p.expect_end()?;
    let env = generator_env(ring);
    let mut main: Option<String> = None;
    collect_unknown(&ast, &env, &mut |name, pos| match &main {
        None => {
            main = Some(name.to_string());
            Ok(())
        }
        Some(m) if m == name => Ok(()),
        Some(m) => Err(Error::parse(
            pos,
            format!("two candidate polynomial variables: `{m}` and `{name}`"),
        )),
    })?;
    let var = main
        .ok_or_else(|| Error::parse(0, "polynomial has no variable (degree must be at least 1)"))?;
    let poly_ring = Ring::poly_ext(ring.clone(), vec![var.clone()])?;
    let env_up: Vec<(String, RingElem)> = env
        .iter()
        .map(|(n, e)| (n.clone(), poly_ring.embed(e)))
        .collect();
    let x = poly_ring.generator(0);
    let value = eval(&ast, &poly_ring, &|name, pos| {
        if name == var {
            return Ok(x.clone());
        }
        env_up
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.clone())
            .ok_or_else(|| Error::parse(pos, format!("unknown symbol `{name}`")))
    })?;
    // extract dense univariate coefficients
    let sp = match value.payload() {
        Payload::Poly(sp) => sp,
        _ => unreachable!(),
    };
    let deg = sp.total_degree() as usize;
    if deg == 0 {
        return Err(Error::parse(0, "polynomial has degree 0"));
    }
    let mut coeffs = vec![ring.zero(); deg + 1];
    for (m, c) in &sp.terms {
        coeffs[m.0[0] as usize] = RingElem::from_payload(ring.clone(), c.clone());
    }
    if !coeffs[deg].is_one() {
        return Err(Error::Precondition(format!(
            "polynomial is not monic (leading coefficient {})",
            coeffs[deg]
        )));
    }
    let signed: Vec<RingElem> = (0..deg).map(|i| coeffs[deg - 1 - i].clone()).collect();
    Ok(MonicPoly::from_signed_coeffs(ring.clone(), var, signed))
}

/// Named generators of the ring tower, as elements of the top ring.
pub(crate) fn generator_env(ring: &Ring) -> Vec<(String, RingElem)> {
    match ring.desc() {
        RingDesc::PolyExt { base, vars } => {
            let mut env: Vec<(String, RingElem)> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), ring.generator(i)))
                .collect();
            for (n, e) in generator_env(base) {
                env.push((n, ring.embed(&e)));
            }
            env
        }
        RingDesc::QuotExt { base, var, .. } => {
            let mut env = vec![(var.clone(), ring.generator(0))];
            for (n, e) in generator_env(base) {
                env.push((n, ring.embed(&e)));
            }
            env
        }
        _ => Vec::new(),
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '[' => {
                out.push((Tok::LBracket, i));
                i += 1;
            }
            ']' => {
                out.push((Tok::RBracket, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str_radix(&text[start..i], 10)
                    .map_err(|e| Error::parse(start, e.to_string()))?;
                out.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => return Err(Error::parse(i, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Expr {
    Int(BigInt),
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u64),
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or_else(|| self.tokens.last().map(|(_, p)| p + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            other => Err(Error::parse(
                pos,
                format!("expected {tok:?}, found {other:?}"),
            )),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos < self.tokens.len() {
            return Err(Error::parse(self.here(), "trailing input"));
        }
        Ok(())
    }

    fn parse_uint(&mut self) -> Result<u64> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                u64::try_from(&n).map_err(|_| Error::parse(pos, "integer out of range"))
            }
            other => Err(Error::parse(
                pos,
                format!("expected an integer, found {other:?}"),
            )),
        }
    }

    fn parse_ring_desc(&mut self) -> Result<Ring> {
        let pos = self.here();
        let mut ring = match self.bump() {
            Some(Tok::Ident(s)) if s == "Z" => {
                if self.peek() == Some(&Tok::Slash)
                    && matches!(self.tokens.get(self.pos + 1), Some((Tok::Int(_), _)))
                {
                    self.bump();
                    let m = self.parse_uint()?;
                    Ring::integers_mod(m)?
                } else {
                    Ring::integers()
                }
            }
            Some(Tok::Ident(s)) if s == "Q" => Ring::rationals(),
            Some(Tok::Ident(s)) if s == "GF" => {
                self.expect(Tok::LParen)?;
                let p = self.parse_uint()?;
                self.expect(Tok::RParen)?;
                Ring::prime_field(p)?
            }
            other => {
                return Err(Error::parse(
                    pos,
                    format!("expected a base ring (Z, Q, Z/m, GF(p)), found {other:?}"),
                ))
            }
        };
        while self.peek() == Some(&Tok::LBracket) {
            self.bump();
            let mut vars = Vec::new();
            loop {
                let pos = self.here();
                match self.bump() {
                    Some(Tok::Ident(v)) => vars.push(v),
                    other => {
                        return Err(Error::parse(
                            pos,
                            format!("expected a variable, found {other:?}"),
                        ))
                    }
                }
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.bump();
                    }
                    _ => break,
                }
            }
            self.expect(Tok::RBracket)?;
            if self.peek() == Some(&Tok::Slash) {
                self.bump();
                self.expect(Tok::LParen)?;
                let start = self.here();
                let ast = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                if vars.len() != 1 {
                    return Err(Error::parse(
                        start,
                        "a quotient extension takes exactly one variable",
                    ));
                }
                let var = vars.pop().unwrap();
                let poly = monic_from_ast(&ring, &var, &ast, start)?;
                ring = Ring::quot_ext_poly(ring, &poly)?;
            } else {
                ring = Ring::poly_ext(ring, vars)?;
            }
        }
        Ok(ring)
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    let pos = self.here();
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let inner = self.parse_unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.parse_uint()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(s)) => Ok(Expr::Var(s, pos)),
            Some(Tok::LParen) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::parse(
                pos,
                format!("expected a value, found {other:?}"),
            )),
        }
    }
}

fn monic_from_ast(ring: &Ring, var: &str, ast: &Expr, pos: usize) -> Result<MonicPoly> {
    let poly_ring = Ring::poly_ext(ring.clone(), vec![var.to_string()])?;
    let env = generator_env(ring);
    let env_up: Vec<(String, RingElem)> = env
        .iter()
        .map(|(n, e)| (n.clone(), poly_ring.embed(e)))
        .collect();
    let x = poly_ring.generator(0);
    let value = eval(ast, &poly_ring, &|name, p| {
        if name == var {
            return Ok(x.clone());
        }
        env_up
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.clone())
            .ok_or_else(|| Error::parse(p, format!("unknown symbol `{name}`")))
    })?;
    let sp = match value.payload() {
        Payload::Poly(sp) => sp,
        _ => unreachable!(),
    };
    let deg = sp.total_degree() as usize;
    if deg == 0 {
        return Err(Error::parse(pos, "modulus must have degree at least 1"));
    }
    let mut coeffs = vec![ring.zero(); deg + 1];
    for (m, c) in &sp.terms {
        coeffs[m.0[0] as usize] = RingElem::from_payload(ring.clone(), c.clone());
    }
    if !coeffs[deg].is_one() {
        return Err(Error::Precondition("modulus must be monic".into()));
    }
    let signed: Vec<RingElem> = (0..deg).map(|i| coeffs[deg - 1 - i].clone()).collect();
    Ok(MonicPoly::from_signed_coeffs(ring.clone(), var, signed))
}

fn collect_unknown<F>(ast: &Expr, env: &[(String, RingElem)], visit: &mut F) -> Result<()>
where
    F: FnMut(&str, usize) -> Result<()>,
{
    match ast {
        Expr::Int(_) => Ok(()),
        Expr::Var(name, pos) => {
            if env.iter().any(|(n, _)| n == name) {
                Ok(())
            } else {
                visit(name, *pos)
            }
        }
        Expr::Neg(e) | Expr::Pow(e, _) => collect_unknown(e, env, visit),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            collect_unknown(a, env, visit)?;
            collect_unknown(b, env, visit)
        }
    }
}

fn eval<F>(ast: &Expr, ring: &Ring, lookup: &F) -> Result<RingElem>
where
    F: Fn(&str, usize) -> Result<RingElem>,
{
    match ast {
        Expr::Int(n) => Ok(ring.from_bigint(n)),
        Expr::Var(name, pos) => lookup(name, *pos),
        Expr::Neg(e) => Ok(-&eval(e, ring, lookup)?),
        Expr::Add(a, b) => Ok(&eval(a, ring, lookup)? + &eval(b, ring, lookup)?),
        Expr::Sub(a, b) => Ok(&eval(a, ring, lookup)? - &eval(b, ring, lookup)?),
        Expr::Mul(a, b) => Ok(&eval(a, ring, lookup)? * &eval(b, ring, lookup)?),
        Expr::Div(a, b, pos) => {
            let a = eval(a, ring, lookup)?;
            let b = eval(b, ring, lookup)?;
            a.exact_div(&b)
                .ok_or_else(|| Error::parse(*pos, format!("cannot divide exactly by {b}")))
        }
        Expr::Pow(e, k) => Ok(eval(e, ring, lookup)?.pow(*k)),
    }
}
