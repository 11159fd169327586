//! Line-oriented parser for the theory surface grammar.
//!
//! ```text
//! # comment                      (runs to end of line)
//! fragment coherent              (optional; checked against the axioms)
//! sort V
//! fun f : V x V -> V             (fun c : -> V declares a constant)
//! rel E : V x V                  (rel P :  declares a propositional letter)
//! axiom x:V y:V | E(x, y) |- E(y, x)
//! ```
//!
//! Formulas use `true false & | exists forall not -> = !=`, with `->`
//! loosest (right-associative), then `|`, then `&`; `not` and the
//! dot-terminated quantifiers `exists v:S. …` / `forall v:S. …` extend as
//! far right as possible. In sort lists the bare identifier `x` is the
//! separator, so no sort may be named `x`.

use crate::error::{Error, Result};
use crate::logic::theory::Fragment;
use crate::logic::{Formula, FormulaInContext, Sequent, Signature, SortId, Term, Theory};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Amp,
    Pipe,
    Turnstile,
    Arrow,
    Eq,
    Neq,
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            '&' => {
                toks.push((Tok::Amp, col));
                i += 1;
            }
            '|' => {
                if chars.get(i + 1) == Some(&'-') {
                    toks.push((Tok::Turnstile, col));
                    i += 2;
                } else {
                    toks.push((Tok::Pipe, col));
                    i += 1;
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((Tok::Arrow, col));
                    i += 2;
                } else {
                    return Err(err(line_no, col, "stray `-` (expected `->`)"));
                }
            }
            '=' => {
                toks.push((Tok::Eq, col));
                i += 1;
            }
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    toks.push((Tok::Neq, col));
                    i += 2;
                } else {
                    return Err(err(line_no, col, "stray `!` (expected `!=`)"));
                }
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, col));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, col));
                i += 1;
            }
            other => return Err(err(line_no, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct LineParser<'a> {
    sig: &'a Signature,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn new(sig: &'a Signature, line: usize, toks: Vec<(Tok, usize)>) -> Self {
        Self {
            sig,
            toks,
            pos: 0,
            line,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or_else(|| self.toks.last().map(|(_, c)| c + 1).unwrap_or(1))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<()> {
        let col = self.col();
        match self.next() {
            Some(t) if &t == want => Ok(()),
            Some(t) => Err(err(
                self.line,
                col,
                format!("expected {}, found {}", want.describe(), t.describe()),
            )),
            None => Err(err(
                self.line,
                col,
                format!("expected {}, found end of line", want.describe()),
            )),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(t) => Err(err(
                self.line,
                col,
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(err(
                self.line,
                col,
                format!("expected {what}, found end of line"),
            )),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if let Some(t) = self.peek() {
            return Err(err(
                self.line,
                self.col(),
                format!("unexpected trailing {}", t.describe()),
            ));
        }
        Ok(())
    }

    fn sort_by_name(&mut self, name: &str, col: usize) -> Result<SortId> {
        self.sig
            .sort_id(name)
            .ok_or_else(|| err(self.line, col, format!("unknown sort `{name}`")))
    }

    /// `IDENT (x IDENT)*`, possibly empty when `stop` is next.
    fn sort_list(&mut self, stop: Option<&Tok>) -> Result<Vec<SortId>> {
        let mut sorts = Vec::new();
        if self.peek().is_none() || self.peek() == stop {
            return Ok(sorts);
        }
        loop {
            let col = self.col();
            let name = self.expect_ident("a sort name")?;
            sorts.push(self.sort_by_name(&name, col)?);
            match self.peek() {
                Some(Tok::Ident(sep)) if sep == "x" => {
                    self.next();
                }
                _ => break,
            }
        }
        Ok(sorts)
    }

    /// Context bindings `v:S` (comma-separated or juxtaposed) up to `|`.
    fn context(&mut self) -> Result<Vec<(String, SortId)>> {
        let mut ctx = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Pipe) | None => break,
                Some(Tok::Comma) => {
                    self.next();
                }
                _ => {
                    let name = self.expect_ident("a context variable")?;
                    self.expect(&Tok::Colon)?;
                    let col = self.col();
                    let sort_name = self.expect_ident("a sort name")?;
                    let sort = self.sort_by_name(&sort_name, col)?;
                    ctx.push((name, sort));
                }
            }
        }
        Ok(ctx)
    }

    fn formula(&mut self) -> Result<Formula> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            let rhs = self.implies()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.next();
            let rhs = self.conjunction()?;
            f = Formula::Or(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.next();
            let rhs = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(kw)) if kw == "not" => {
                self.next();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Ident(kw)) if kw == "exists" || kw == "forall" => {
                let forall = kw == "forall";
                self.next();
                let var = self.expect_ident("a bound variable")?;
                self.expect(&Tok::Colon)?;
                let col = self.col();
                let sort_name = self.expect_ident("a sort name")?;
                let sort = self.sort_by_name(&sort_name, col)?;
                self.expect(&Tok::Dot)?;
                let body = Box::new(self.implies()?);
                Ok(if forall {
                    Formula::Forall(var, sort, body)
                } else {
                    Formula::Exists(var, sort, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.next();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(name)) if name == "true" => {
                self.next();
                Ok(Formula::True)
            }
            Some(Tok::Ident(name)) if name == "false" => {
                self.next();
                Ok(Formula::False)
            }
            Some(Tok::Ident(name)) if self.sig.relation_id(&name).is_some() => {
                self.next();
                let rel = self.sig.relation_id(&name).unwrap();
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::LParen) {
                    self.next();
                    loop {
                        args.push(self.term()?);
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.next();
                            }
                            _ => break,
                        }
                    }
                    self.expect(&Tok::RParen)?;
                }
                if matches!(self.peek(), Some(Tok::Eq) | Some(Tok::Neq)) {
                    return Err(err(
                        self.line,
                        self.col(),
                        format!("relation `{name}` cannot appear in an equation"),
                    ));
                }
                Ok(Formula::Rel(rel, args))
            }
            Some(Tok::Ident(_)) => {
                let lhs = self.term()?;
                match self.next() {
                    Some(Tok::Eq) => Ok(Formula::Eq(lhs, self.term()?)),
                    Some(Tok::Neq) => Ok(Formula::Neq(lhs, self.term()?)),
                    Some(t) => Err(err(
                        self.line,
                        col,
                        format!("expected `=` or `!=` after a term, found {}", t.describe()),
                    )),
                    None => Err(err(
                        self.line,
                        col,
                        "expected `=` or `!=` after a term, found end of line",
                    )),
                }
            }
            Some(t) => Err(err(
                self.line,
                col,
                format!("expected a formula, found {}", t.describe()),
            )),
            None => Err(err(self.line, col, "expected a formula, found end of line")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let col = self.col();
        let name = self.expect_ident("a term")?;
        if self.peek() == Some(&Tok::LParen) {
            let f = self.sig.function_id(&name).ok_or_else(|| {
                err(self.line, col, format!("unknown function `{name}`"))
            })?;
            self.next();
            let mut args = Vec::new();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.next();
                    }
                    _ => break,
                }
            }
            self.expect(&Tok::RParen)?;
            Ok(Term::App(f, args))
        } else if let Some(f) = self.sig.function_id(&name) {
            // A bare identifier that names a 0-ary function is that constant;
            // bare higher-arity function names are rejected.
            if self.sig.function(f).args.is_empty() {
                Ok(Term::App(f, Vec::new()))
            } else {
                Err(err(
                    self.line,
                    col,
                    format!("function `{name}` needs arguments"),
                ))
            }
        } else {
            Ok(Term::Var(name))
        }
    }
}

/// Parse a complete theory from surface text. The fragment and decidability
/// flags are computed from the axioms; a `fragment coherent` declaration is
/// checked against them and rejected when an axiom strays outside the
/// positive fragment.
pub fn parse_theory(name: impl Into<String>, text: &str) -> Result<Theory> {
    let mut sig = Signature::new();
    let mut axiom_lines: Vec<(usize, Vec<(Tok, usize)>)> = Vec::new();
    let mut declared_fragment: Option<(Fragment, usize)> = None;

    // Pass 1: declarations. Axioms are only tokenized here so that symbols
    // declared later in the file are still in scope (keeps files reorderable).
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = tokenize(line_no, raw)?;
        let Some((Tok::Ident(head), head_col)) = toks.first().cloned() else {
            if let Some((t, c)) = toks.first() {
                return Err(err(line_no, *c, format!("expected a declaration, found {}", t.describe())));
            }
            continue; // blank or comment-only line
        };
        let mut p = LineParser::new(&sig, line_no, toks.clone());
        p.next(); // consume the head keyword
        match head.as_str() {
            "sort" => {
                let name = p.expect_ident("a sort name")?;
                p.expect_end()?;
                sig.add_sort(name)
                    .map_err(|e| err(line_no, head_col, e.to_string()))?;
            }
            "fun" => {
                let name = p.expect_ident("a function name")?;
                p.expect(&Tok::Colon)?;
                let args = p.sort_list(Some(&Tok::Arrow))?;
                p.expect(&Tok::Arrow)?;
                let col = p.col();
                let result_name = p.expect_ident("a result sort")?;
                p.expect_end()?;
                let result = sig
                    .sort_id(&result_name)
                    .ok_or_else(|| err(line_no, col, format!("unknown sort `{result_name}`")))?;
                sig.add_function(name, args, result)
                    .map_err(|e| err(line_no, head_col, e.to_string()))?;
            }
            "rel" => {
                let name = p.expect_ident("a relation name")?;
                p.expect(&Tok::Colon)?;
                let args = p.sort_list(None)?;
                p.expect_end()?;
                sig.add_relation(name, args)
                    .map_err(|e| err(line_no, head_col, e.to_string()))?;
            }
            "fragment" => {
                let which = p.expect_ident("`coherent` or `classical`")?;
                p.expect_end()?;
                let frag = match which.as_str() {
                    "coherent" => Fragment::Coherent,
                    "classical" => Fragment::Classical,
                    other => {
                        return Err(err(
                            line_no,
                            head_col,
                            format!("unknown fragment `{other}`"),
                        ))
                    }
                };
                declared_fragment = Some((frag, line_no));
            }
            "axiom" => axiom_lines.push((line_no, toks)),
            other => {
                return Err(err(
                    line_no,
                    head_col,
                    format!("unknown declaration `{other}`"),
                ))
            }
        }
    }

    // Pass 2: axioms, now that the signature is complete.
    let mut axioms = Vec::new();
    for (line_no, toks) in axiom_lines {
        let mut p = LineParser::new(&sig, line_no, toks);
        p.next(); // `axiom`
        let context = p.context()?;
        p.expect(&Tok::Pipe)?;
        let antecedent = p.formula()?;
        p.expect(&Tok::Turnstile)?;
        let succedent = p.formula()?;
        p.expect_end()?;
        let seq = Sequent::new(context, antecedent, succedent);
        seq.validate(&sig)?;
        if declared_fragment.map(|(f, _)| f) == Some(Fragment::Coherent) {
            for side in [&seq.antecedent, &seq.succedent] {
                if let Some(conn) = side.first_classical_connective() {
                    return Err(Error::NonCoherent {
                        formula: crate::logic::print_formula(&sig, side),
                        connective: conn.to_string(),
                    });
                }
            }
        }
        axioms.push(seq);
    }

    Theory::new(name, sig, axioms)
}

/// Parse `context | formula` against an existing signature, e.g. a tracked
/// formula passed on the command line: `x:V y:V | x != y`.
pub fn parse_formula_in_context(sig: &Signature, text: &str) -> Result<FormulaInContext> {
    let toks = tokenize(1, text)?;
    let mut p = LineParser::new(sig, 1, toks);
    let context = p.context()?;
    p.expect(&Tok::Pipe)?;
    let body = p.formula()?;
    p.expect_end()?;
    let f = FormulaInContext::new(context, body);
    f.validate(sig)?;
    Ok(f)
}
