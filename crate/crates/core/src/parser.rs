//! Recursive-descent parser for method bodies. The accepted grammar is
//! documented in `docs/grammar.md`.

use crate::ast::{AstNode, Kind, MethodBody, Span};
use crate::error::SyntaxError;
use crate::lexer::{lex, Token, TokenKind, PRIMITIVES};

/// Parses exactly one braced method body.
pub fn parse(source: &str) -> Result<MethodBody, SyntaxError> {
    let mut p = Parser::new(source, false)?;
    let root = p.block()?;
    p.expect_end()?;
    Ok(MethodBody::new(root, source))
}

/// Parses a single expression (used for annotation anchors).
pub fn parse_expression(source: &str) -> Result<AstNode, SyntaxError> {
    let mut p = Parser::new(source, false)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

pub(crate) struct Parser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'s> Parser<'s> {
    pub(crate) fn new(src: &'s str, directives: bool) -> Result<Self, SyntaxError> {
        Ok(Parser {
            src,
            toks: lex(src, directives)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&Token> {
        self.toks.get(self.pos + k)
    }

    fn offset(&self) -> usize {
        self.peek().map(|t| t.start).unwrap_or(self.src.len())
    }

    fn last_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].end
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::at(self.src, self.offset(), msg)
    }

    fn is(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.peek().is_some_and(|t| t.kind == kind && t.lexeme == lexeme)
    }

    fn is_kind(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn is_kw(&self, kw: &str) -> bool {
        self.is(TokenKind::Keyword, kw)
    }

    fn is_op(&self, op: &str) -> bool {
        self.is(TokenKind::Operator, op)
    }

    fn bump(&mut self) -> Result<Token, SyntaxError> {
        let t = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, SyntaxError> {
        if self.is_kind(kind) {
            self.bump()
        } else {
            let found = self
                .peek()
                .map(|t| format!("'{}'", t.lexeme))
                .unwrap_or_else(|| "end of input".into());
            Err(self.error(format!("expected {what}, found {found}")))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<Token, SyntaxError> {
        if self.is_kw(kw) {
            self.bump()
        } else {
            Err(self.error(format!("expected '{kw}'")))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected '{}' after end of body", t.lexeme))),
        }
    }

    pub(crate) fn peek_directive(&self) -> Option<&str> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Directive => Some(t.lexeme.as_str()),
            _ => None,
        }
    }

    pub(crate) fn bump_directive(&mut self) -> Result<Token, SyntaxError> {
        self.expect(TokenKind::Directive, "annotation")
    }

    fn spanned(&self, node: AstNode, start: usize) -> AstNode {
        node.with_span(Span::new(start, self.last_end()))
    }

    pub(crate) fn block(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        self.expect(TokenKind::LBrace, "'{'")?;
        let stmts = self.statements()?;
        self.expect(TokenKind::RBrace, "'}'")?;
        Ok(self.spanned(AstNode::new(Kind::Block, "", stmts), start))
    }

    /// Statements up to a closing brace, end of input, or a closing
    /// annotation line (one starting with `}`).
    pub(crate) fn statements(&mut self) -> Result<Vec<AstNode>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(t) if t.kind == TokenKind::RBrace => break,
                Some(t) if t.kind == TokenKind::Directive => {
                    if t.lexeme.starts_with('}') || t.lexeme.starts_with("case") {
                        break;
                    }
                    out.push(self.directive_statement()?);
                }
                Some(_) => out.push(self.statement()?),
            }
        }
        Ok(out)
    }

    fn directive_statement(&mut self) -> Result<AstNode, SyntaxError> {
        let tok = self.bump_directive()?;
        let err = |msg: &str| SyntaxError::at(self.src, tok.start, msg.to_string());
        let text = tok.lexeme.trim();
        let span = Span::new(tok.start, tok.end);
        if text == "choice {" || text == "choice{" {
            let mut cases = Vec::new();
            loop {
                match self.peek_directive() {
                    Some(d) if d.starts_with("case") => {
                        let ctok = self.bump_directive()?;
                        let stmts = self.statements()?;
                        match self.peek_directive() {
                            Some("}") => {
                                self.bump_directive()?;
                            }
                            _ => return Err(self.error("expected '//# }' closing a case")),
                        }
                        cases.push(
                            AstNode::new(Kind::Case, "", stmts)
                                .with_span(Span::new(ctok.start, self.last_end())),
                        );
                    }
                    Some("}") => {
                        self.bump_directive()?;
                        break;
                    }
                    _ => return Err(self.error("expected '//# case {' or '//# }' in choice")),
                }
            }
            return Ok(AstNode::new(Kind::Choice, "", cases).with_span(Span::new(tok.start, self.last_end())));
        }
        let body = text
            .strip_suffix(';')
            .ok_or_else(|| err("annotation must end with ';'"))?
            .trim();
        let words: Vec<&str> = body.split_whitespace().collect();
        match words.as_slice() {
            ["wildcard", "stmt", name] => {
                check_name(name).map_err(|m| err(&m))?;
                Ok(AstNode::leaf(Kind::WildcardStmt, *name).with_span(span))
            }
            ["use"] => Ok(AstNode::leaf(Kind::Use, "").with_span(span)),
            ["use", name] => {
                check_name(name).map_err(|m| err(&m))?;
                Ok(AstNode::leaf(Kind::Use, *name).with_span(span))
            }
            ["wildcard", "expr", ..] | ["use", "expr", ..] => {
                let kind = if words[0] == "wildcard" {
                    Kind::WildcardExpr
                } else {
                    Kind::UseExpr
                };
                let rest = body.splitn(3, char::is_whitespace).nth(2).unwrap_or("").trim();
                let (name, anchor) = rest
                    .split_once('(')
                    .ok_or_else(|| err("expected '(LEXEME, OCCURRENCE)'"))?;
                let name = name.trim();
                if kind == Kind::WildcardExpr || !name.is_empty() {
                    check_name(name).map_err(|m| err(&m))?;
                }
                let anchor = anchor
                    .trim()
                    .strip_suffix(')')
                    .ok_or_else(|| err("expected ')' after anchor"))?;
                let (lexeme, occ) = anchor
                    .rsplit_once(',')
                    .ok_or_else(|| err("anchor needs a lexeme and an occurrence"))?;
                let occ: usize = occ
                    .trim()
                    .parse()
                    .map_err(|_| err("occurrence must be a positive integer"))?;
                if occ == 0 {
                    return Err(err("occurrence is 1-based"));
                }
                Ok(expr_annotation(kind, name, lexeme.trim(), occ).with_span(span))
            }
            _ => Err(err(&format!("unknown annotation '{text}'"))),
        }
    }

    pub(crate) fn statement(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let t = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("expected statement"))?;
        let node = match (t.kind, t.lexeme.as_str()) {
            (TokenKind::LBrace, _) => return self.block(),
            (TokenKind::Keyword, "if") => return self.if_statement(),
            (TokenKind::Keyword, "while") => {
                self.bump()?;
                self.expect(TokenKind::LParen, "'('")?;
                let cond = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                let body = self.block()?;
                AstNode::new(Kind::While, "", vec![cond, body])
            }
            (TokenKind::Keyword, "for") => {
                self.bump()?;
                self.expect(TokenKind::LParen, "'('")?;
                let init = if self.is_kind(TokenKind::Semi) {
                    self.empty()
                } else if self.at_declaration() {
                    self.declaration()?
                } else {
                    self.expr()?
                };
                self.expect(TokenKind::Semi, "';'")?;
                let cond = if self.is_kind(TokenKind::Semi) {
                    self.empty()
                } else {
                    self.expr()?
                };
                self.expect(TokenKind::Semi, "';'")?;
                let update = if self.is_kind(TokenKind::RParen) {
                    self.empty()
                } else {
                    self.expr()?
                };
                self.expect(TokenKind::RParen, "')'")?;
                let body = self.block()?;
                AstNode::new(Kind::For, "", vec![init, cond, update, body])
            }
            (TokenKind::Keyword, "try") => {
                self.bump()?;
                let mut kids = vec![self.block()?];
                while self.is_kw("catch") {
                    let cstart = self.offset();
                    self.bump()?;
                    self.expect(TokenKind::LParen, "'('")?;
                    let ty = self.type_name()?;
                    let name = self.identifier()?;
                    self.expect(TokenKind::RParen, "')'")?;
                    let body = self.block()?;
                    kids.push(self.spanned(AstNode::new(Kind::Catch, "", vec![ty, name, body]), cstart));
                }
                if self.is_kw("finally") {
                    let fstart = self.offset();
                    self.bump()?;
                    let body = self.block()?;
                    kids.push(self.spanned(AstNode::new(Kind::Finally, "", vec![body]), fstart));
                }
                if kids.len() == 1 {
                    return Err(self.error("try needs a catch or finally clause"));
                }
                AstNode::new(Kind::Try, "", kids)
            }
            (TokenKind::Keyword, "return") => {
                self.bump()?;
                let kids = if self.is_kind(TokenKind::Semi) {
                    vec![]
                } else {
                    vec![self.expr()?]
                };
                self.expect(TokenKind::Semi, "';'")?;
                AstNode::new(Kind::Return, "", kids)
            }
            (TokenKind::Keyword, "assert") => {
                self.bump()?;
                let mut kids = vec![self.expr()?];
                if self.is_kind(TokenKind::Colon) {
                    self.bump()?;
                    kids.push(self.expr()?);
                }
                self.expect(TokenKind::Semi, "';'")?;
                AstNode::new(Kind::Assert, "", kids)
            }
            (TokenKind::Keyword, "throw") => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(TokenKind::Semi, "';'")?;
                AstNode::new(Kind::Throw, "", vec![e])
            }
            (TokenKind::Keyword, "break") | (TokenKind::Keyword, "continue") => {
                self.bump()?;
                self.expect(TokenKind::Semi, "';'")?;
                let kind = if t.lexeme == "break" {
                    Kind::Break
                } else {
                    Kind::Continue
                };
                AstNode::leaf(kind, "")
            }
            _ if self.at_declaration() => {
                let d = self.declaration()?;
                self.expect(TokenKind::Semi, "';'")?;
                return Ok(self.spanned(d, start));
            }
            _ => {
                let e = self.expr()?;
                if !matches!(
                    e.kind,
                    Kind::Call | Kind::Assign | Kind::PostfixExpr
                ) && !(e.kind == Kind::UnaryExpr && (e.label == "++" || e.label == "--"))
                {
                    return Err(SyntaxError::at(
                        self.src,
                        start,
                        "expression is not allowed as a statement",
                    ));
                }
                self.expect(TokenKind::Semi, "';'")?;
                return Ok(self.spanned(e, start));
            }
        };
        Ok(self.spanned(node, start))
    }

    fn if_statement(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        self.expect_kw("if")?;
        self.expect(TokenKind::LParen, "'('")?;
        let cond = self.expr()?;
        self.expect(TokenKind::RParen, "')'")?;
        let then = self.block()?;
        let mut kids = vec![cond, then];
        if self.is_kw("else") {
            self.bump()?;
            if self.is_kw("if") {
                kids.push(self.if_statement()?);
            } else {
                kids.push(self.block()?);
            }
        }
        Ok(self.spanned(AstNode::new(Kind::If, "", kids), start))
    }

    fn empty(&self) -> AstNode {
        let at = self.offset();
        AstNode::leaf(Kind::Empty, "").with_span(Span::new(at, at))
    }

    fn at_declaration(&self) -> bool {
        let Some(t) = self.peek() else { return false };
        if t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.lexeme.as_str()) {
            return true;
        }
        if t.kind != TokenKind::Identifier {
            return false;
        }
        // Type name followed by optional [] pairs and then the variable name.
        let mut k = 1;
        while self.peek_at(k).is_some_and(|t| t.kind == TokenKind::LBracket)
            && self.peek_at(k + 1).is_some_and(|t| t.kind == TokenKind::RBracket)
        {
            k += 2;
        }
        self.peek_at(k).is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    fn type_name(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let t = self.bump()?;
        let ok = t.kind == TokenKind::Identifier
            || (t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.lexeme.as_str()));
        if !ok {
            self.pos -= 1;
            return Err(self.error("expected type name"));
        }
        let mut label = t.lexeme;
        while self.is_kind(TokenKind::LBracket) {
            self.bump()?;
            self.expect(TokenKind::RBracket, "']'")?;
            label.push_str("[]");
        }
        Ok(self.spanned(AstNode::leaf(Kind::Type, label), start))
    }

    fn identifier(&mut self) -> Result<AstNode, SyntaxError> {
        let t = self.expect(TokenKind::Identifier, "identifier")?;
        Ok(AstNode::leaf(Kind::Identifier, t.lexeme).with_span(Span::new(t.start, t.end)))
    }

    fn declaration(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let ty = self.type_name()?;
        let name = self.identifier()?;
        let mut kids = vec![ty, name];
        if self.is_op("=") {
            self.bump()?;
            kids.push(self.expr()?);
        }
        Ok(self.spanned(AstNode::new(Kind::Decl, "", kids), start))
    }

    pub(crate) fn expr(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let lhs = self.binary(0)?;
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator
                && matches!(
                    t.lexeme.as_str(),
                    "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "&&=" | "||="
                )
            {
                if !matches!(lhs.kind, Kind::Identifier | Kind::FieldAccess) {
                    return Err(self.error("left side of assignment must be a variable"));
                }
                let op = self.bump()?.lexeme;
                let rhs = self.expr()?;
                return Ok(self.spanned(AstNode::new(Kind::Assign, op, vec![lhs, rhs]), start));
            }
        }
        Ok(lhs)
    }

    fn binary(&mut self, min_prec: u8) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Operator {
                break;
            }
            let Some(prec) = binary_precedence(&t.lexeme) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            let op = self.bump()?.lexeme;
            let rhs = self.binary(prec + 1)?;
            lhs = self.spanned(AstNode::new(Kind::BinaryExpr, op, vec![lhs, rhs]), start);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator && matches!(t.lexeme.as_str(), "!" | "-" | "+" | "++" | "--") {
                let op = self.bump()?.lexeme;
                let operand = self.unary()?;
                return Ok(self.spanned(AstNode::new(Kind::UnaryExpr, op, vec![operand]), start));
            }
        }
        let mut e = self.postfix()?;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator && (t.lexeme == "++" || t.lexeme == "--") {
                let op = self.bump()?.lexeme;
                e = self.spanned(AstNode::new(Kind::PostfixExpr, op, vec![e]), start);
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let mut e = self.primary()?;
        loop {
            if self.is_kind(TokenKind::Dot) {
                self.bump()?;
                let name = self.identifier()?;
                e = self.spanned(AstNode::new(Kind::FieldAccess, "", vec![e, name]), start);
            } else if self.is_kind(TokenKind::LParen) {
                if !matches!(e.kind, Kind::Identifier | Kind::FieldAccess) {
                    return Err(self.error("only names can be called"));
                }
                let args = self.arguments()?;
                e = self.spanned(AstNode::new(Kind::Call, "", vec![e, args]), start);
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn arguments(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        self.expect(TokenKind::LParen, "'('")?;
        let mut args = Vec::new();
        if !self.is_kind(TokenKind::RParen) {
            loop {
                args.push(self.expr()?);
                if self.is_kind(TokenKind::Comma) {
                    self.bump()?;
                } else {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen, "')'")?;
        Ok(self.spanned(AstNode::new(Kind::ArgList, "", args), start))
    }

    fn primary(&mut self) -> Result<AstNode, SyntaxError> {
        let start = self.offset();
        let t = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("expected expression"))?;
        let kind = match t.kind {
            TokenKind::Identifier => Kind::Identifier,
            TokenKind::IntLiteral => Kind::IntLiteral,
            TokenKind::StringLiteral => Kind::StringLiteral,
            TokenKind::BoolLiteral => Kind::BoolLiteral,
            TokenKind::NullLiteral => Kind::NullLiteral,
            TokenKind::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                return Ok(self.spanned(AstNode::new(Kind::Paren, "", vec![inner]), start));
            }
            _ => return Err(self.error(format!("expected expression, found '{}'", t.lexeme))),
        };
        self.bump()?;
        Ok(AstNode::leaf(kind, t.lexeme).with_span(Span::new(t.start, t.end)))
    }
}

pub(crate) fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" => 7,
        "+" | "-" => 8,
        "*" | "/" | "%" => 9,
        _ => return None,
    })
}

fn check_name(name: &str) -> Result<(), String> {
    let ok = !name.is_empty()
        && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(format!("invalid annotation name '{name}'"))
    }
}

/// Builds a `WildcardExpr`/`UseExpr` node: label is the name, children are
/// the anchor lexeme and the 1-based occurrence.
pub fn expr_annotation(kind: Kind, name: &str, lexeme: &str, occurrence: usize) -> AstNode {
    AstNode::new(
        kind,
        name,
        vec![
            AstNode::leaf(Kind::Anchor, lexeme),
            AstNode::leaf(Kind::IntLiteral, occurrence.to_string()),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(kind: Kind, label: &str) -> AstNode {
        AstNode::leaf(kind, label)
    }

    #[test]
    fn empty_body() {
        let b = parse("{}").unwrap();
        assert_eq!(b.root.kind, Kind::Block);
        assert!(b.root.children.is_empty());
    }

    #[test]
    fn declaration_with_call() {
        let b = parse("{ int x = f(); }").unwrap();
        let expected = AstNode::new(
            Kind::Block,
            "",
            vec![AstNode::new(
                Kind::Decl,
                "",
                vec![
                    leaf(Kind::Type, "int"),
                    leaf(Kind::Identifier, "x"),
                    AstNode::new(
                        Kind::Call,
                        "",
                        vec![leaf(Kind::Identifier, "f"), AstNode::new(Kind::ArgList, "", vec![])],
                    ),
                ],
            )],
        );
        assert_eq!(b.root, expected);
    }

    #[test]
    fn method_call_on_receiver() {
        let b = parse("{ a.run(); }").unwrap();
        let call = &b.root.children[0];
        assert_eq!(call.kind, Kind::Call);
        assert_eq!(call.children[0].kind, Kind::FieldAccess);
        assert_eq!(call.children[0].children[1].label, "run");
    }

    #[test]
    fn precedence_and_parens() {
        let b = parse("{ x = a + b * (c - d) < e && f; }").unwrap();
        let rhs = &b.root.children[0].children[1];
        assert_eq!((rhs.kind, rhs.label.as_str()), (Kind::BinaryExpr, "&&"));
        let lt = &rhs.children[0];
        assert_eq!(lt.label, "<");
        assert_eq!(lt.children[0].label, "+");
        assert_eq!(lt.children[0].children[1].label, "*");
        assert_eq!(lt.children[0].children[1].children[1].kind, Kind::Paren);
    }

    #[test]
    fn control_flow() {
        let src = "{
            for (int j = 0; j < n; j++) { use(j); }
            while (!done) { step(); }
            if (a) { b(); } else if (c) { d(); } else { e(); }
            try { risky(); } catch (IOException e) { log(e); } finally { close(); }
            assert x != null : \"msg\";
            return;
        }";
        let b = parse(src).unwrap();
        let kinds: Vec<_> = b.root.children.iter().map(|c| c.kind).collect();
        assert_eq!(
            kinds,
            vec![Kind::For, Kind::While, Kind::If, Kind::Try, Kind::Assert, Kind::Return]
        );
        let f = &b.root.children[0];
        assert_eq!(f.children[0].children[1].label, "j");
        assert_eq!(f.children[2].kind, Kind::PostfixExpr);
    }

    #[test]
    fn rejects_expression_statement() {
        let err = parse("{ a + b; }").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("not allowed"));
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse("{\n  foo(;\n}").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
    }

    #[test]
    fn rejects_trailing_tokens_and_missing_brace() {
        assert!(parse("{ } x").is_err());
        assert!(parse("{ f();").is_err());
        assert!(parse("f();").is_err());
    }

    #[test]
    fn spans_cover_statements() {
        let src = "{ a(); // c\n  int y = 2; }";
        let b = parse(src).unwrap();
        let s = b.root.children[1].span.unwrap();
        assert_eq!(&src[s.start..s.end], "int y = 2;");
        let s = b.root.children[0].span.unwrap();
        assert_eq!(&src[s.start..s.end], "a();");
    }
}
