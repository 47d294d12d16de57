//! Tokenizer for the Java subset. Comments and whitespace never produce
//! tokens, except `//#` annotation lines when directive mode is on.

use serde::{Deserialize, Serialize};

use crate::error::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Colon,
    Operator,
    Keyword,
    Identifier,
    IntLiteral,
    StringLiteral,
    BoolLiteral,
    NullLiteral,
    /// Body of a `//#` line (pattern files only).
    Directive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub start: usize,
    pub end: usize,
}

pub const KEYWORDS: &[&str] = &[
    "if", "else", "while", "for", "try", "catch", "finally", "return", "assert", "throw",
    "break", "continue", "int", "long", "short", "byte", "char", "float", "double", "boolean",
    "void",
];

pub const PRIMITIVES: &[&str] = &[
    "int", "long", "short", "byte", "char", "float", "double", "boolean",
];

// Longest first so that greedy matching works.
const OPERATORS: &[&str] = &[
    "&&=", "||=", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^",
];

pub fn lex(src: &str, directives: bool) -> Result<Vec<Token>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            let end = src[i..].find('\n').map(|n| i + n).unwrap_or(bytes.len());
            if directives && bytes.get(i + 2) == Some(&b'#') {
                out.push(Token {
                    kind: TokenKind::Directive,
                    lexeme: src[i + 3..end].trim().to_string(),
                    start: i,
                    end,
                });
            }
            i = end;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            match src[i + 2..].find("*/") {
                Some(n) => i = i + 2 + n + 2,
                None => return Err(SyntaxError::at(src, i, "unterminated block comment")),
            }
            continue;
        }
        let start = i;
        let single = |kind| Token {
            kind,
            lexeme: (c as char).to_string(),
            start,
            end: start + 1,
        };
        match c {
            b'{' => {
                out.push(single(TokenKind::LBrace));
                i += 1;
            }
            b'}' => {
                out.push(single(TokenKind::RBrace));
                i += 1;
            }
            b'(' => {
                out.push(single(TokenKind::LParen));
                i += 1;
            }
            b')' => {
                out.push(single(TokenKind::RParen));
                i += 1;
            }
            b'[' => {
                out.push(single(TokenKind::LBracket));
                i += 1;
            }
            b']' => {
                out.push(single(TokenKind::RBracket));
                i += 1;
            }
            b';' => {
                out.push(single(TokenKind::Semi));
                i += 1;
            }
            b',' => {
                out.push(single(TokenKind::Comma));
                i += 1;
            }
            b'.' => {
                out.push(single(TokenKind::Dot));
                i += 1;
            }
            b':' => {
                out.push(single(TokenKind::Colon));
                i += 1;
            }
            b'"' => {
                i += 1;
                loop {
                    match bytes.get(i) {
                        None | Some(b'\n') => {
                            return Err(SyntaxError::at(src, start, "unterminated string literal"))
                        }
                        Some(b'\\') => i += 2,
                        Some(b'"') => {
                            i += 1;
                            break;
                        }
                        Some(_) => i += 1,
                    }
                }
                out.push(Token {
                    kind: TokenKind::StringLiteral,
                    lexeme: src[start..i].to_string(),
                    start,
                    end: i,
                });
            }
            b'0'..=b'9' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::IntLiteral,
                    lexeme: src[start..i].to_string(),
                    start,
                    end: i,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' || c == b'$' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$')
                {
                    i += 1;
                }
                let word = &src[start..i];
                let kind = match word {
                    "true" | "false" => TokenKind::BoolLiteral,
                    "null" => TokenKind::NullLiteral,
                    w if KEYWORDS.contains(&w) => TokenKind::Keyword,
                    _ => TokenKind::Identifier,
                };
                out.push(Token {
                    kind,
                    lexeme: word.to_string(),
                    start,
                    end: i,
                });
            }
            _ => {
                let rest = &src[i..];
                match OPERATORS.iter().find(|op| rest.starts_with(**op)) {
                    Some(op) => {
                        out.push(Token {
                            kind: TokenKind::Operator,
                            lexeme: op.to_string(),
                            start,
                            end: start + op.len(),
                        });
                        i += op.len();
                    }
                    None => {
                        let ch = rest.chars().next().unwrap_or('?');
                        return Err(SyntaxError::at(
                            src,
                            start,
                            format!("unexpected character '{ch}'"),
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Token sequence of a method body, comments and whitespace excluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<(TokenKind, String)>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn lexemes(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.1.as_str()).collect()
    }
}

/// Tokens of a body's source text.
pub fn tokenize(body: &crate::ast::MethodBody) -> TokenStream {
    tokenize_text(&body.source_text).unwrap_or_else(|_| tokenize_tree(&body.root))
}

/// Tokens of the pretty-printed form of a tree.
pub fn tokenize_tree(root: &crate::ast::AstNode) -> TokenStream {
    tokenize_text(&crate::printer::pretty_print(root)).expect("printer output always lexes")
}

pub fn tokenize_text(src: &str) -> Result<TokenStream, SyntaxError> {
    Ok(TokenStream {
        tokens: lex(src, false)?
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect(),
    })
}
