//! Recursive-descent parser for the canonical program text.

use super::{AttributeExpr, DslError, LinearExpr, LoopRange, RegularityProgram};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Assign,
    Plus,
    Minus,
    Star,
    FloorDiv,
    Percent,
    EqEq,
    Ge,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(v) => format!("integer {v}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Assign => "'='".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::FloorDiv => "'//'".into(),
            Tok::Percent => "'%'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::Ge => "'>='".into(),
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

fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1usize, 1usize);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, column);
        let mut advance = |n: usize, k: &mut usize| {
            *k += n;
            column += n;
        };
        if c == '\n' {
            k += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut k);
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
            }
            continue;
        }
        let two: String = chars[k..(k + 2).min(chars.len())].iter().collect();
        let tok = if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            column += k - start;
            let v = digits.parse::<i64>().map_err(|_| DslError::Syntax {
                line: l0,
                column: c0,
                message: format!("integer literal {digits} out of range"),
            })?;
            out.push(Spanned {
                tok: Tok::Int(v),
                line: l0,
                column: c0,
            });
            continue;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let word: String = chars[start..k].iter().collect();
            column += k - start;
            out.push(Spanned {
                tok: Tok::Ident(word),
                line: l0,
                column: c0,
            });
            continue;
        } else if two == "//" {
            advance(2, &mut k);
            Tok::FloorDiv
        } else if two == "==" {
            advance(2, &mut k);
            Tok::EqEq
        } else if two == ">=" {
            advance(2, &mut k);
            Tok::Ge
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '=' => Tok::Assign,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '%' => Tok::Percent,
                _ => {
                    return Err(DslError::Syntax {
                        line: l0,
                        column: c0,
                        message: format!("unexpected character '{c}'"),
                    })
                }
            };
            advance(1, &mut k);
            t
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Linear expression under construction; `grouped` is true for a single
/// atom or a parenthesized sum, the operands `%` and `//` accept.
struct Parsed {
    expr: LinearExpr,
    grouped: bool,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn grammar_at<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Grammar {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, DslError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.syntax(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().tok.describe()
            ))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == word)
    }

    fn expect_ident(&mut self, word: &str) -> Result<Spanned, DslError> {
        if self.is_ident(word) {
            Ok(self.bump())
        } else {
            self.syntax(format!(
                "expected '{word}', found {}",
                self.peek().tok.describe()
            ))
        }
    }

    fn signed_int(&mut self) -> Result<i64, DslError> {
        let neg = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        match self.peek().tok {
            Tok::Int(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => self.syntax(format!(
                "expected integer, found {}",
                self.peek().tok.describe()
            )),
        }
    }

    fn program(&mut self) -> Result<RegularityProgram, DslError> {
        let outer = self.for_header("i")?;
        self.expect(Tok::LBrace)?;
        if !self.is_ident("For") {
            return self.syntax("expected a nested 'For' loop over j");
        }
        let inner = self.for_header("j")?;
        self.expect(Tok::LBrace)?;
        let mut conditions = Vec::new();
        let mut depth = 0;
        while self.is_ident("If") {
            self.bump();
            self.expect(Tok::LParen)?;
            let cond = self.sum()?;
            self.expect(Tok::Ge)?;
            let zero_at = self.peek().clone();
            if self.signed_int()? != 0 {
                return self.grammar_at(&zero_at, "conditions compare against 0");
            }
            self.expect(Tok::RParen)?;
            self.expect(Tok::LBrace)?;
            conditions.push(cond.expr);
            depth += 1;
        }
        if self.is_ident("For") {
            let at = self.peek().clone();
            return self.grammar_at(&at, "three-level loop nesting is not supported");
        }
        let (x, y, attribute) = self.draw()?;
        for _ in 0..depth + 2 {
            self.expect(Tok::RBrace)?;
        }
        if self.peek().tok != Tok::Eof {
            return self.syntax(format!(
                "unexpected {} after program",
                self.peek().tok.describe()
            ));
        }
        RegularityProgram::new(outer, inner, conditions, x, y, attribute)
    }

    fn for_header(&mut self, var: &str) -> Result<LoopRange, DslError> {
        self.expect_ident("For")?;
        self.expect(Tok::LParen)?;
        let at = self.peek().clone();
        match &at.tok {
            Tok::Ident(w) if w == var => {
                self.bump();
            }
            Tok::Ident(w) if w == "i" || w == "j" => {
                return self.grammar_at(&at, format!("loop variable must be '{var}', found '{w}'"));
            }
            other => {
                return self.syntax(format!(
                    "expected loop variable, found {}",
                    other.describe()
                ))
            }
        }
        self.expect_ident("in")?;
        self.expect_ident("range")?;
        self.expect(Tok::LParen)?;
        let lo = self.signed_int()?;
        self.expect(Tok::Comma)?;
        let hi = self.signed_int()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::RParen)?;
        if hi <= lo {
            return Err(DslError::Invalid("empty loop range".into()));
        }
        Ok(LoopRange::new(lo, hi))
    }

    fn draw(&mut self) -> Result<(LinearExpr, LinearExpr, AttributeExpr), DslError> {
        self.expect_ident("Draw")?;
        self.expect(Tok::LParen)?;
        self.expect_ident("x")?;
        self.expect(Tok::Assign)?;
        let x = self.sum()?.expr;
        self.expect(Tok::Comma)?;
        self.expect_ident("y")?;
        self.expect(Tok::Assign)?;
        let y_at = self.peek().clone();
        let y = self.sum()?.expr;
        if y.coef_i != 0 {
            return self.grammar_at(&y_at, "i appears in y expression");
        }
        self.expect(Tok::Comma)?;
        self.expect_ident("attribute")?;
        self.expect(Tok::Assign)?;
        let attribute = self.attribute()?;
        self.expect(Tok::RParen)?;
        Ok((x, y, attribute))
    }

    fn attribute(&mut self) -> Result<AttributeExpr, DslError> {
        let start = self.peek().clone();
        if start.tok == Tok::Int(1) && matches!(self.peek_at(1), Tok::Ident(w) if w == "If") {
            self.bump();
            self.bump();
            self.expect(Tok::LParen)?;
            let first = self.clause()?;
            let second = if self.is_ident("and") {
                self.bump();
                Some(self.clause()?)
            } else {
                None
            };
            self.expect(Tok::RParen)?;
            self.expect_ident("else")?;
            let zero_at = self.peek().clone();
            if self.signed_int()? != 0 {
                return self.grammar_at(&zero_at, "conditional attributes end in 'else 0'");
            }
            let attr = match (first, second) {
                ((e, None), None) => AttributeExpr::IsZero { expr: e },
                ((e1, None), Some((e2, None))) => AttributeExpr::IsZeroBoth {
                    first: e1,
                    second: e2,
                },
                ((e, Some(m)), None) => AttributeExpr::Modulo {
                    expr: e,
                    modulus: m,
                },
                ((e1, Some(m1)), Some((e2, Some(m2)))) => AttributeExpr::ModuloBoth {
                    first: e1,
                    first_modulus: m1,
                    second: e2,
                    second_modulus: m2,
                },
                _ => {
                    return self.grammar_at(
                        &start,
                        "both clauses of a conjunction must use the same form",
                    )
                }
            };
            attr.validate()?;
            return Ok(attr);
        }
        let e = self.sum()?;
        if self.peek().tok == Tok::FloorDiv {
            let at = self.bump();
            if !e.grouped {
                return self.grammar_at(&at, "parenthesize the expression before '//'");
            }
            let divisor = self.signed_int()?;
            let attr = AttributeExpr::Quotient {
                expr: e.expr,
                divisor,
            };
            attr.validate()?;
            return Ok(attr);
        }
        if e.expr == LinearExpr::constant(0) {
            return Ok(AttributeExpr::Constant);
        }
        self.grammar_at(
            &start,
            "attribute must be 0, a quotient or a conditional template",
        )
    }

    /// `Expr == 0` or `Expr % Integer == 0`.
    fn clause(&mut self) -> Result<(LinearExpr, Option<i64>), DslError> {
        let e = self.sum()?;
        let modulus = if self.peek().tok == Tok::Percent {
            let at = self.bump();
            if !e.grouped {
                return self.grammar_at(&at, "parenthesize the expression before '%'");
            }
            Some(self.signed_int()?)
        } else {
            None
        };
        self.expect(Tok::EqEq)?;
        let zero_at = self.peek().clone();
        if self.signed_int()? != 0 {
            return self.grammar_at(&zero_at, "attribute tests compare against 0");
        }
        Ok((e.expr, modulus))
    }

    fn sum(&mut self) -> Result<Parsed, DslError> {
        let mut sign = 1;
        if matches!(self.peek().tok, Tok::Minus | Tok::Plus) {
            if self.bump().tok == Tok::Minus {
                sign = -1;
            }
        }
        let first = self.product()?;
        let mut acc = scale(first.expr, sign);
        let mut terms = 1;
        let mut grouped = first.grouped;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
            let t = self.product()?;
            acc = add(acc, scale(t.expr, sign));
            terms += 1;
            grouped = false;
        }
        Ok(Parsed {
            expr: acc,
            grouped: grouped && terms == 1 && sign == 1,
        })
    }

    fn product(&mut self) -> Result<Parsed, DslError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            let at = self.bump();
            let rhs = self.factor()?;
            acc = Parsed {
                expr: match (acc.expr.is_constant(), rhs.expr.is_constant()) {
                    (true, _) => scale(rhs.expr, acc.expr.constant),
                    (_, true) => scale(acc.expr, rhs.expr.constant),
                    _ => return self.grammar_at(&at, "non-linear expression"),
                },
                grouped: false,
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Parsed, DslError> {
        let t = self.peek().clone();
        let expr = match &t.tok {
            Tok::Int(v) => {
                self.bump();
                LinearExpr::constant(*v)
            }
            Tok::Minus => {
                self.bump();
                let inner = self.factor()?;
                return Ok(Parsed {
                    expr: scale(inner.expr, -1),
                    grouped: false,
                });
            }
            Tok::Ident(w) if w == "i" => {
                self.bump();
                LinearExpr::new(1, 0, 0)
            }
            Tok::Ident(w) if w == "j" => {
                self.bump();
                LinearExpr::new(0, 1, 0)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.expect(Tok::RParen)?;
                inner.expr
            }
            Tok::Ident(w) => {
                return self.grammar_at(&t, format!("unknown name '{w}' in expression"));
            }
            other => {
                return self.syntax(format!("expected expression, found {}", other.describe()))
            }
        };
        Ok(Parsed {
            expr,
            grouped: true,
        })
    }
}

fn scale(e: LinearExpr, k: i64) -> LinearExpr {
    LinearExpr::new(e.coef_i * k, e.coef_j * k, e.constant * k)
}

fn add(a: LinearExpr, b: LinearExpr) -> LinearExpr {
    LinearExpr::new(
        a.coef_i + b.coef_i,
        a.coef_j + b.coef_j,
        a.constant + b.constant,
    )
}

/// Parses program text into a validated program.
pub fn parse(text: &str) -> Result<RegularityProgram, DslError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.program()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_compact_form() {
        let p = parse(
            "For (i in range(0,5)) { For (j in range(0,5)) { Draw(x=10*i+0*j+0, y=0*i+10*j+0, attribute=0) } }",
        )
        .unwrap();
        assert_eq!(p.outer(), LoopRange::new(0, 5));
        assert_eq!(p.x(), LinearExpr::new(10, 0, 0));
        assert_eq!(p.y(), LinearExpr::new(0, 10, 0));
        assert_eq!(p.attribute(), AttributeExpr::Constant);
    }

    #[test]
    fn empty_range() {
        let e = parse(
            "For (i in range(5,0)) { For (j in range(0,5)) { Draw(x=i, y=j, attribute=0) } }",
        )
        .unwrap_err();
        assert_eq!(e.to_string(), "empty loop range");
    }

    #[test]
    fn i_in_y_is_a_grammar_violation() {
        let e = parse(
            "For (i in range(0,2)) { For (j in range(0,2)) { Draw(x=i, y=i+j, attribute=0) } }",
        )
        .unwrap_err();
        assert!(
            matches!(e, DslError::Grammar { ref message, .. } if message.contains("y expression"))
        );
    }

    #[test]
    fn rejects_triple_nesting() {
        let e = parse(
            "For (i in range(0,2)) { For (j in range(0,2)) { For (j in range(0,2)) { Draw(x=i, y=j, attribute=0) } } }",
        )
        .unwrap_err();
        assert!(
            matches!(e, DslError::Grammar { ref message, .. } if message.contains("three-level"))
        );
    }

    #[test]
    fn rejects_nonlinear() {
        let e = parse(
            "For (i in range(0,2)) { For (j in range(0,2)) { Draw(x=i*j, y=j, attribute=0) } }",
        )
        .unwrap_err();
        assert!(
            matches!(e, DslError::Grammar { ref message, line: 1, .. } if message == "non-linear expression")
        );
    }

    #[test]
    fn syntax_error_position() {
        let e = parse("For (i in range(0,2)) {\n  For (j in range(0,2)) {\n    Draw(x=i y=j, attribute=0) } }")
            .unwrap_err();
        assert_eq!(
            e,
            DslError::Syntax {
                line: 3,
                column: 14,
                message: "expected ',', found 'y'".into()
            }
        );
    }

    #[test]
    fn attribute_forms() {
        let wrap = |a: &str| {
            parse(&format!(
                "For (i in range(0,4)) {{ For (j in range(0,4)) {{ Draw(x=5*i, y=5*j, attribute={a}) }} }}"
            ))
        };
        assert_eq!(
            wrap("(i + j) // 2").unwrap().attribute(),
            AttributeExpr::Quotient {
                expr: LinearExpr::new(1, 1, 0),
                divisor: 2
            }
        );
        assert_eq!(
            wrap("1 If (i - 1 == 0) else 0").unwrap().attribute(),
            AttributeExpr::IsZero {
                expr: LinearExpr::new(1, 0, -1)
            }
        );
        assert_eq!(
            wrap("1 If ((i) % 2 == 0 and (j) % 3 == 0) else 0")
                .unwrap()
                .attribute(),
            AttributeExpr::ModuloBoth {
                first: LinearExpr::new(1, 0, 0),
                first_modulus: 2,
                second: LinearExpr::new(0, 1, 0),
                second_modulus: 3
            }
        );
        assert!(matches!(
            wrap("1 If (i + j % 2 == 0) else 0"),
            Err(DslError::Grammar { .. })
        ));
        assert!(matches!(wrap("(i) // 1"), Err(DslError::Invalid(_))));
        assert!(matches!(wrap("3"), Err(DslError::Grammar { .. })));
        assert!(matches!(
            wrap("1 If (i == 0 and (j) % 2 == 0) else 0"),
            Err(DslError::Grammar { .. })
        ));
    }

    #[test]
    fn comments_and_whitespace() {
        let p = parse("# lattice\nFor(i in range(-2,1)){For(j in range(0,1)){If(i+2>=0){Draw(x=3*i+6,y=4,attribute=0)}}}\n")
            .unwrap();
        assert_eq!(p.outer(), LoopRange::new(-2, 1));
        assert_eq!(p.conditions(), &[LinearExpr::new(1, 0, 2)]);
        assert_eq!(p.y(), LinearExpr::new(0, 0, 4));
    }
}
