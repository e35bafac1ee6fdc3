//! The script language. Grammar (LL(1), one token of lookahead):
//!
//! ```text
//! script  := stmt*
//! stmt    := "let" IDENT "=" expr ";"
//!          | "emit" expr ";"
//!          | expr ";"
//! expr    := IDENT [ "(" [ expr ("," expr)* ] ")" ]
//!          | INT | STRING
//!          | "[" [ expr ("," expr)* ] "]"
//!          | "indcolim" IDENT ":" expr
//! ```
//!
//! `#` starts a comment running to the end of the line. Names are bound
//! by `let` from the next statement on and by `indcolim` inside its body.
//! Calls are checked against the builtin table for existence and arity.

use std::collections::HashSet;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(String, Pos),
    Int(i64, Pos),
    Str(String, Pos),
    List(Vec<Expr>, Pos),
    Call {
        name: String,
        args: Vec<Expr>,
        pos: Pos,
    },
    IndColim {
        var: String,
        body: Box<Expr>,
        pos: Pos,
    },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Var(_, p) | Expr::Int(_, p) | Expr::Str(_, p) | Expr::List(_, p) => *p,
            Expr::Call { pos, .. } | Expr::IndColim { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Let {
        name: String,
        expr: Expr,
        text: String,
    },
    Emit {
        expr: Expr,
        text: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

/// Builtin functions with their least and greatest arity.
pub const BUILTINS: &[(&str, usize, usize)] = &[
    // spaces
    ("line", 0, 0),
    ("point", 0, 0),
    ("chain", 1, 1),
    ("poset", 2, 2),
    // sets
    ("interval", 2, 2),
    ("right_ray", 1, 1),
    ("left_ray", 1, 1),
    ("closed_ray", 1, 1),
    ("closed_interval", 2, 2),
    ("star", 2, 2),
    ("open", 2, 2),
    ("closed", 2, 2),
    ("cell", 2, 2),
    ("whole", 1, 1),
    ("empty", 1, 1),
    // sheaves
    ("k", 1, 2),
    ("k_on", 1, 1),
    ("zero", 1, 1),
    ("sum", 2, 2),
    ("shift", 2, 2),
    ("restrict_open", 2, 2),
    ("hom_sheaf", 2, 2),
    // ind-objects
    ("ind", 1, 1),
    ("iota", 1, 1),
    ("alpha", 1, 1),
    ("beta", 1, 1),
    ("ktilde", 1, 1),
    ("rays", 0, 0),
    ("growth", 0, 0),
    ("tensor", 2, 2),
    ("ihom", 2, 2),
    ("restrict", 2, 2),
    ("pullback", 2, 2),
    ("push", 2, 2),
    ("push_proper", 2, 2),
    // maps and morphisms
    ("identity", 1, 1),
    ("const_map", 3, 3),
    ("table_map", 3, 3),
    ("shift_map", 1, 1),
    ("counit", 1, 1),
    ("kernel", 1, 1),
    ("cokernel", 1, 1),
    ("kernel_map", 1, 1),
    ("cokernel_map", 1, 1),
    ("comparison", 2, 2),
    // presheaves
    ("cell_functions", 1, 1),
    ("sections", 1, 1),
    ("constant_presheaf", 1, 1),
    ("rho", 1, 1),
    // queries
    ("dim_hom", 2, 2),
    ("is_zero", 1, 1),
    ("is_mono", 1, 1),
    ("is_epi", 1, 1),
    ("is_iso", 1, 1),
    ("is_exact", 2, 2),
    ("representable", 1, 1),
    ("check_adjunction", 3, 4),
    ("check_mv", 2, 2),
    ("evaluate", 2, 2),
    ("projection_formula", 3, 3),
    ("base_change", 3, 3),
    ("glueing", 3, 3),
    ("run_suite", 1, 2),
    ("save", 2, 2),
    ("load", 1, 1),
    ("show", 1, 1),
];

fn builtin(name: &str) -> Option<(usize, usize)> {
    BUILTINS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(_, a, b)| (a, b))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Punct(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
    offset: usize,
    end: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let offset_at = |i: usize| chars.get(i).map(|c| c.0).unwrap_or(text.len());
    while i < chars.len() {
        let c = chars[i].1;
        let pos = Pos { line, col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            Tok::Ident(text[offset_at(start)..offset_at(i)].to_string())
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.1.is_ascii_digit()))
        {
            i += 1;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s = &text[offset_at(start)..offset_at(i)];
            Tok::Int(s.parse().map_err(|_| CliError::Syntax {
                line,
                col,
                msg: format!("integer `{s}` out of range"),
            })?)
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i].1 != '"' {
                if chars[i].1 == '\n' {
                    break;
                }
                i += 1;
            }
            if i >= chars.len() || chars[i].1 != '"' {
                return Err(CliError::Syntax {
                    line,
                    col,
                    msg: "unterminated string".into(),
                });
            }
            i += 1;
            Tok::Str(text[offset_at(start + 1)..offset_at(i - 1)].to_string())
        } else if "()[],;=:".contains(c) {
            i += 1;
            Tok::Punct(c)
        } else {
            return Err(CliError::Syntax {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        };
        col += i - start;
        out.push(Token {
            tok,
            pos,
            offset: offset_at(start),
            end: offset_at(i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
        offset: text.len(),
        end: text.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    at: usize,
    scopes: Vec<HashSet<String>>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, t: &Token, msg: String) -> CliError {
        CliError::Syntax {
            line: t.pos.line,
            col: t.pos.col,
            msg,
        }
    }

    fn expect(&mut self, c: char) -> Result<Token> {
        let t = self.bump();
        if t.tok == Tok::Punct(c) {
            Ok(t)
        } else {
            Err(self.error(&t, format!("expected `{c}`, found {}", describe(&t.tok))))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(self.error(&t, format!("expected a name, found {}", describe(&other)))),
        }
    }

    fn bound(&self, name: &str) -> bool {
        self.scopes.iter().any(|s| s.contains(name))
    }

    fn script(&mut self) -> Result<Script> {
        let mut stmts = Vec::new();
        while self.peek().tok != Tok::Eof {
            stmts.push(self.stmt()?);
        }
        Ok(Script { stmts })
    }

    fn stmt(&mut self) -> Result<Stmt> {
        match &self.peek().tok {
            Tok::Ident(k) if k == "let" => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect('=')?;
                let start = self.peek().offset;
                let expr = self.expr()?;
                let end = self.toks[self.at - 1].end;
                self.expect(';')?;
                self.scopes[0].insert(name.clone());
                Ok(Stmt::Let {
                    name,
                    expr,
                    text: self.text[start..end].to_string(),
                })
            }
            Tok::Ident(k) if k == "emit" => {
                self.bump();
                self.emit()
            }
            _ => self.emit(),
        }
    }

    fn emit(&mut self) -> Result<Stmt> {
        let start = self.peek().offset;
        let expr = self.expr()?;
        let end = self.toks[self.at - 1].end;
        self.expect(';')?;
        Ok(Stmt::Emit {
            expr,
            text: self.text[start..end].to_string(),
        })
    }

    fn list(&mut self, close: char) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if self.peek().tok == Tok::Punct(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            let t = self.bump();
            match t.tok.clone() {
                Tok::Punct(',') => continue,
                Tok::Punct(c) if c == close => return Ok(out),
                other => {
                    return Err(self.error(
                        &t,
                        format!("expected `,` or `{close}`, found {}", describe(&other)),
                    ))
                }
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Int(n) => Ok(Expr::Int(n, t.pos)),
            Tok::Str(s) => Ok(Expr::Str(s, t.pos)),
            Tok::Punct('[') => Ok(Expr::List(self.list(']')?, t.pos)),
            Tok::Ident(k) if k == "indcolim" => {
                let (var, _) = self.ident()?;
                self.expect(':')?;
                self.scopes.push(HashSet::from([var.clone()]));
                let body = self.expr();
                self.scopes.pop();
                Ok(Expr::IndColim {
                    var,
                    body: Box::new(body?),
                    pos: t.pos,
                })
            }
            Tok::Ident(name) => {
                if self.peek().tok == Tok::Punct('(') {
                    self.bump();
                    let args = self.list(')')?;
                    let (lo, hi) = builtin(&name).ok_or(CliError::Unknown {
                        line: t.pos.line,
                        col: t.pos.col,
                        name: name.clone(),
                    })?;
                    if args.len() < lo || args.len() > hi {
                        let want = if lo == hi {
                            lo.to_string()
                        } else {
                            format!("{lo} to {hi}")
                        };
                        return Err(CliError::Arity {
                            line: t.pos.line,
                            col: t.pos.col,
                            msg: format!("`{name}` takes {want} arguments, got {}", args.len()),
                        });
                    }
                    Ok(Expr::Call {
                        name,
                        args,
                        pos: t.pos,
                    })
                } else if self.bound(&name) {
                    Ok(Expr::Var(name, t.pos))
                } else {
                    Err(CliError::Unknown {
                        line: t.pos.line,
                        col: t.pos.col,
                        name,
                    })
                }
            }
            other => Err(self.error(
                &t,
                format!("expected an expression, found {}", describe(&other)),
            )),
        }
    }
}

/// Parses and resolves a script.
pub fn parse(text: &str) -> Result<Script> {
    let toks = lex(text)?;
    let mut p = Parser {
        text,
        toks,
        at: 0,
        scopes: vec![HashSet::new()],
    };
    p.script()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let toks = lex("let x = -3; # note\n  emit \"a b\";").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[3], Tok::Int(-3));
        assert_eq!(kinds[6], Tok::Str("a b".into()));
        let emit = &toks[5];
        assert_eq!((emit.pos.line, emit.pos.col), (2, 3));
        assert_eq!(kinds.last(), Some(&Tok::Eof));
    }

    #[test]
    fn lexer_rejects_stray_characters_and_open_strings() {
        assert!(matches!(
            lex("emit k(@);"),
            Err(CliError::Syntax {
                line: 1,
                col: 8,
                ..
            })
        ));
        assert!(matches!(
            lex("save(x, \"open\n"),
            Err(CliError::Syntax {
                line: 1,
                col: 9,
                ..
            })
        ));
    }

    #[test]
    fn statements_keep_their_text() {
        let s = parse("let P = chain(2);\nemit  k(P) ;\nshow(P);").unwrap();
        assert_eq!(s.stmts.len(), 3);
        match &s.stmts[1] {
            Stmt::Emit { text, .. } => assert_eq!(text, "k(P)"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(&s.stmts[2], Stmt::Emit { .. }));
    }

    #[test]
    fn names_are_scoped() {
        assert!(matches!(
            parse("emit k(P);\nlet P = point();"),
            Err(CliError::Unknown { .. })
        ));
        assert!(parse("let G = indcolim n: k_on(closed_ray(n));").is_ok());
        assert!(matches!(
            parse("let G = indcolim n: k_on(closed_ray(n));\nemit interval(n, 1);"),
            Err(CliError::Unknown { line: 2, .. })
        ));
        assert!(matches!(parse("let P = line(); let P = point();"), Ok(_)));
    }

    #[test]
    fn arity_is_checked_against_the_table() {
        assert!(parse("k(point(), 2);").is_ok());
        assert!(matches!(
            parse("k(point(), 2, 3);"),
            Err(CliError::Arity { .. })
        ));
        assert!(matches!(parse("line(1);"), Err(CliError::Arity { .. })));
        for (name, lo, hi) in BUILTINS {
            assert!(lo <= hi, "{name}");
        }
    }
}
