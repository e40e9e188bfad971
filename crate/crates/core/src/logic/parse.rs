use super::{Atom, Dialect, Formula, LogicError, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Next,
    WeakNext,
    Until,
    Eventually,
    Always,
    Before,
    Since,
    Once,
    Historically,
    True,
    False,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_term_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'-'
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, LogicError> {
        let mut out = Vec::new();
        while let Some(&c) = self.src.get(self.pos) {
            let start = self.pos;
            let tok = match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                    continue;
                }
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'!' | b'~' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'?' => {
                    self.pos += 1;
                    let name = self.word(is_term_char);
                    if name.is_empty() {
                        return Err(syntax(start, "expected a variable name after `?`"));
                    }
                    out.push((start, Tok::Var(name)));
                    continue;
                }
                c if is_term_char(c) => {
                    let word = self.word(is_term_char);
                    let tok = match word.as_str() {
                        "X" => Tok::Next,
                        "WX" => Tok::WeakNext,
                        "U" => Tok::Until,
                        "F" => Tok::Eventually,
                        "G" => Tok::Always,
                        "Y" => Tok::Before,
                        "S" => Tok::Since,
                        "O" => Tok::Once,
                        "H" => Tok::Historically,
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word),
                    };
                    out.push((start, tok));
                    continue;
                }
                other => {
                    return Err(syntax(
                        start,
                        &format!("unexpected character `{}`", other as char),
                    ))
                }
            };
            self.pos += 1;
            out.push((start, tok));
        }
        Ok(out)
    }

    fn word(&mut self, pred: fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|&c| pred(c)) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

fn syntax(position: usize, message: &str) -> LogicError {
    LogicError::Syntax {
        position,
        message: message.to_string(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(pos, &format!("expected {what}"))),
        }
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.binary_temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            lhs = Formula::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    // until/since are right-associative
    fn binary_temporal(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Until) => {
                self.bump();
                Ok(Formula::until(lhs, self.binary_temporal()?))
            }
            Some(Tok::Since) => {
                self.bump();
                Ok(Formula::since(lhs, self.binary_temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        let ctor: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Not) => Formula::not,
            Some(Tok::Next) => Formula::next,
            Some(Tok::WeakNext) => Formula::weak_next,
            Some(Tok::Eventually) => Formula::eventually,
            Some(Tok::Always) => Formula::always,
            Some(Tok::Before) => Formula::before,
            Some(Tok::Once) => Formula::once,
            Some(Tok::Historically) => Formula::historically,
            _ => return self.primary(),
        };
        self.bump();
        Ok(ctor(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::True) => Ok(Formula::True),
            Some(Tok::False) => Ok(Formula::False),
            Some(Tok::LParen) => {
                let f = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                if !name.as_bytes()[0].is_ascii_alphabetic() && !name.starts_with('_') {
                    return Err(syntax(pos, &format!("`{name}` is not a valid atom name")));
                }
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    loop {
                        let p = self.pos();
                        match self.bump() {
                            Some(Tok::Ident(a)) => args.push(Term::Object(a)),
                            Some(Tok::Var(v)) => args.push(Term::Variable(v)),
                            Some(Tok::RParen) if args.is_empty() => break,
                            _ => return Err(syntax(p, "expected an atom argument")),
                        }
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.bump();
                            }
                            Some(Tok::RParen) => {
                                self.bump();
                                break;
                            }
                            Some(Tok::Ident(_)) | Some(Tok::Var(_)) => {}
                            _ => return Err(syntax(self.pos(), "expected `,` or `)`")),
                        }
                    }
                }
                Ok(Formula::Atom(Atom::new(name, args)))
            }
            Some(_) => Err(syntax(pos, "unexpected token")),
            None => Err(syntax(pos, "unexpected end of formula")),
        }
    }
}

/// Parses formula text in the ASCII grammar:
/// atoms `name` or `name(arg, ...)`, `! & |`, future `X WX U F G`,
/// past `Y S O H`, parentheses and `true`/`false`.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula, LogicError> {
    let toks = Lexer {
        src: text.as_bytes(),
        pos: 0,
    }
    .tokens()?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: text.len(),
    };
    let f = p.or()?;
    if p.idx < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    f.check_dialect(dialect)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s, Dialect::Ltlf).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(p("F(vAt_51)"), Formula::eventually(Formula::prop("vAt_51")));
        assert_eq!(
            p("a U b"),
            Formula::until(Formula::prop("a"), Formula::prop("b"))
        );
        assert_eq!(
            parse_formula("O(a) & X(b)", Dialect::Ltlf),
            Err(LogicError::MixedTense)
        );
    }

    #[test]
    fn atoms_with_arguments() {
        assert_eq!(
            p("F(vAt(51))"),
            Formula::eventually(Formula::Atom(Atom::ground("vAt", &["51"])))
        );
        assert_eq!(
            p("on(b1, b2)"),
            Formula::Atom(Atom::ground("on", &["b1", "b2"]))
        );
        assert_eq!(
            p("vAt(?x)"),
            Formula::Atom(Atom::new("vAt", vec![Term::Variable("x".into())]))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // unary > until > and > or
        assert_eq!(
            p("!a & b | c"),
            Formula::or(
                Formula::and(Formula::not(Formula::prop("a")), Formula::prop("b")),
                Formula::prop("c")
            )
        );
        assert_eq!(
            p("a U b U c"),
            Formula::until(
                Formula::prop("a"),
                Formula::until(Formula::prop("b"), Formula::prop("c"))
            )
        );
        assert_eq!(
            p("a & b U c"),
            Formula::and(
                Formula::prop("a"),
                Formula::until(Formula::prop("b"), Formula::prop("c"))
            )
        );
        assert_eq!(p("WX a"), Formula::weak_next(Formula::prop("a")));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_formula("a & (b | ", Dialect::Ltlf) {
            Err(LogicError::Syntax { position, .. }) => assert_eq!(position, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("a $ b", Dialect::Ltlf),
            Err(LogicError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_formula("a b", Dialect::Ltlf),
            Err(LogicError::Syntax { position: 2, .. })
        ));
    }

    #[test]
    fn dialect_is_enforced() {
        assert!(matches!(
            parse_formula("O a", Dialect::Ltlf),
            Err(LogicError::WrongDialect { .. })
        ));
        assert!(parse_formula("a & O b", Dialect::Ppltl).is_ok());
        assert!(parse_formula("a & b", Dialect::Ppltl).is_ok());
    }

    #[test]
    fn display_reparses() {
        for s in [
            "F(vAt(51))",
            "a U b U c",
            "(a U b) U c",
            "!(a & b) | X(c)",
            "G(a | WX(b))",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s} printed as {f}");
        }
        let past = parse_formula("a & (!b S c) & H(Y(d))", Dialect::Ppltl).unwrap();
        assert_eq!(
            parse_formula(&past.to_string(), Dialect::Ppltl).unwrap(),
            past
        );
    }
}
