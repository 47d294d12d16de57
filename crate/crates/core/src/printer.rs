//! Deterministic pretty printer. Four-space indentation, one statement per
//! line, annotations as `//#` lines.

use crate::ast::{AstNode, Kind, MethodBody};
use crate::parser::binary_precedence;

const INDENT: &str = "    ";

pub fn pretty_print(root: &AstNode) -> String {
    print_block_at(root, 0)
}

pub fn pretty_print_body(body: &MethodBody) -> String {
    pretty_print(&body.root)
}

/// Prints a block whose opening brace sits at indentation `level` (the
/// brace itself is not indented; following lines are).
pub fn print_block_at(block: &AstNode, level: usize) -> String {
    let mut out = String::new();
    block_into(block, level, &mut out);
    out
}

/// Prints one statement without leading indentation or trailing newline.
pub fn print_statement(stmt: &AstNode, level: usize) -> String {
    let mut out = String::new();
    stmt_into(stmt, level, &mut out);
    out
}

fn pad(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str(INDENT);
    }
}

fn block_into(block: &AstNode, level: usize, out: &mut String) {
    out.push_str("{\n");
    for s in &block.children {
        pad(level + 1, out);
        stmt_into(s, level + 1, out);
        out.push('\n');
    }
    pad(level, out);
    out.push('}');
}

fn stmt_into(s: &AstNode, level: usize, out: &mut String) {
    match s.kind {
        Kind::Block => block_into(s, level, out),
        Kind::If => {
            out.push_str("if (");
            out.push_str(&print_expr(&s.children[0]));
            out.push_str(") ");
            block_into(&s.children[1], level, out);
            if let Some(e) = s.children.get(2) {
                out.push_str(" else ");
                stmt_into(e, level, out);
            }
        }
        Kind::While => {
            out.push_str("while (");
            out.push_str(&print_expr(&s.children[0]));
            out.push_str(") ");
            block_into(&s.children[1], level, out);
        }
        Kind::For => {
            out.push_str("for (");
            out.push_str(&header_part(&s.children[0]));
            for part in &s.children[1..3] {
                out.push(';');
                let p = header_part(part);
                if !p.is_empty() {
                    out.push(' ');
                    out.push_str(&p);
                }
            }
            out.push_str(") ");
            block_into(&s.children[3], level, out);
        }
        Kind::Try => {
            out.push_str("try ");
            block_into(&s.children[0], level, out);
            for c in &s.children[1..] {
                out.push(' ');
                stmt_into(c, level, out);
            }
        }
        Kind::Catch => {
            out.push_str("catch (");
            out.push_str(&print_expr(&s.children[0]));
            out.push(' ');
            out.push_str(&print_expr(&s.children[1]));
            out.push_str(") ");
            block_into(&s.children[2], level, out);
        }
        Kind::Finally => {
            out.push_str("finally ");
            block_into(&s.children[0], level, out);
        }
        Kind::Return => {
            out.push_str("return");
            if let Some(e) = s.children.first() {
                out.push(' ');
                out.push_str(&print_expr(e));
            }
            out.push(';');
        }
        Kind::Assert => {
            out.push_str("assert ");
            out.push_str(&print_expr(&s.children[0]));
            if let Some(m) = s.children.get(1) {
                out.push_str(" : ");
                out.push_str(&print_expr(m));
            }
            out.push(';');
        }
        Kind::Throw => {
            out.push_str("throw ");
            out.push_str(&print_expr(&s.children[0]));
            out.push(';');
        }
        Kind::Break => out.push_str("break;"),
        Kind::Continue => out.push_str("continue;"),
        Kind::WildcardStmt => {
            out.push_str("//# wildcard stmt ");
            out.push_str(&s.label);
            out.push(';');
        }
        Kind::Use => {
            out.push_str("//# use");
            if !s.label.is_empty() {
                out.push(' ');
                out.push_str(&s.label);
            }
            out.push(';');
        }
        Kind::WildcardExpr | Kind::UseExpr => {
            out.push_str(if s.kind == Kind::WildcardExpr {
                "//# wildcard expr "
            } else {
                "//# use expr "
            });
            if !s.label.is_empty() {
                out.push_str(&s.label);
                out.push(' ');
            }
            let lexeme = s.children.first().map(|a| a.label.as_str()).unwrap_or("");
            let occ = s.children.get(1).map(|a| a.label.as_str()).unwrap_or("1");
            out.push_str(&format!("({lexeme}, {occ});"));
        }
        Kind::Choice => {
            out.push_str("//# choice {");
            for case in &s.children {
                out.push('\n');
                pad(level, out);
                out.push_str("//# case {");
                for st in &case.children {
                    out.push('\n');
                    pad(level, out);
                    stmt_into(st, level, out);
                }
                out.push('\n');
                pad(level, out);
                out.push_str("//# }");
            }
            out.push('\n');
            pad(level, out);
            out.push_str("//# }");
        }
        Kind::Hole | Kind::Slot => {
            out.push_str(&format!("/*{}*/;", s.label));
        }
        Kind::Decl => {
            out.push_str(&header_part(s));
            out.push(';');
        }
        _ => {
            out.push_str(&print_expr(s));
            out.push(';');
        }
    }
}

fn header_part(n: &AstNode) -> String {
    match n.kind {
        Kind::Empty => String::new(),
        Kind::Decl => {
            let mut s = format!("{} {}", n.children[0].label, n.children[1].label);
            if let Some(init) = n.children.get(2) {
                s.push_str(" = ");
                s.push_str(&print_expr(init));
            }
            s
        }
        _ => print_expr(n),
    }
}

/// Prints an expression on one line.
pub fn print_expr(e: &AstNode) -> String {
    let mut out = String::new();
    expr_into(e, &mut out);
    out
}

fn expr_into(e: &AstNode, out: &mut String) {
    match e.kind {
        Kind::Identifier
        | Kind::Type
        | Kind::IntLiteral
        | Kind::BoolLiteral
        | Kind::StringLiteral
        | Kind::NullLiteral
        | Kind::Anchor => out.push_str(&e.label),
        Kind::Empty => {}
        Kind::FieldAccess => {
            expr_into(&e.children[0], out);
            out.push('.');
            expr_into(&e.children[1], out);
        }
        Kind::Call => {
            expr_into(&e.children[0], out);
            expr_into(&e.children[1], out);
        }
        Kind::ArgList => {
            out.push('(');
            for (i, a) in e.children.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr_into(a, out);
            }
            out.push(')');
        }
        Kind::BinaryExpr => {
            let prec = binary_precedence(&e.label).unwrap_or(0);
            operand(&e.children[0], prec, false, out);
            out.push(' ');
            out.push_str(&e.label);
            out.push(' ');
            operand(&e.children[1], prec, true, out);
        }
        Kind::UnaryExpr => {
            out.push_str(&e.label);
            let inner = &e.children[0];
            if matches!(inner.kind, Kind::BinaryExpr | Kind::Assign) {
                out.push('(');
                expr_into(inner, out);
                out.push(')');
            } else {
                let clash = inner.kind == Kind::UnaryExpr
                    && matches!(e.label.as_str(), "-" | "+" | "--" | "++")
                    && inner.label.as_bytes()[0] == e.label.as_bytes()[0];
                if clash {
                    out.push(' ');
                }
                expr_into(inner, out);
            }
        }
        Kind::PostfixExpr => {
            let inner = &e.children[0];
            if matches!(inner.kind, Kind::BinaryExpr | Kind::Assign | Kind::UnaryExpr) {
                out.push('(');
                expr_into(inner, out);
                out.push(')');
            } else {
                expr_into(inner, out);
            }
            out.push_str(&e.label);
        }
        Kind::Paren => {
            out.push('(');
            expr_into(&e.children[0], out);
            out.push(')');
        }
        Kind::Assign => {
            expr_into(&e.children[0], out);
            out.push(' ');
            out.push_str(&e.label);
            out.push(' ');
            expr_into(&e.children[1], out);
        }
        Kind::Decl => out.push_str(&header_part(e)),
        Kind::Hole | Kind::Slot => out.push_str(&format!("/*{}*/", e.label)),
        _ => {
            // Statement or annotation in expression position; print it
            // compactly so output stays readable.
            let s = print_statement(e, 0);
            out.push_str(s.trim_end_matches(';'));
        }
    }
}

/// Writes an operand, adding parentheses when the tree shape would not
/// survive reparsing otherwise.
fn operand(e: &AstNode, parent_prec: u8, right: bool, out: &mut String) {
    let wrap = match e.kind {
        Kind::BinaryExpr => {
            let p = binary_precedence(&e.label).unwrap_or(0);
            p < parent_prec || (right && p == parent_prec)
        }
        Kind::Assign => true,
        _ => false,
    };
    if wrap {
        out.push('(');
        expr_into(e, out);
        out.push(')');
    } else {
        expr_into(e, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn roundtrip(src: &str) {
        let a = parse(src).unwrap();
        let text = pretty_print(&a.root);
        let b = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(a.root, b.root, "{text}");
        assert_eq!(pretty_print(&b.root), text);
    }

    #[test]
    fn empty_block() {
        let b = parse("{}").unwrap();
        assert_eq!(pretty_print(&b.root), "{\n}");
    }

    #[test]
    fn layout() {
        let b = parse("{ if (a) { f(x, 1); } else { g(); } }").unwrap();
        assert_eq!(
            pretty_print(&b.root),
            "{\n    if (a) {\n        f(x, 1);\n    } else {\n        g();\n    }\n}"
        );
    }

    #[test]
    fn for_header() {
        let b = parse("{ for (int j = 0; j < 42; j++) { u(j); } for (;;) { } }").unwrap();
        let text = pretty_print(&b.root);
        assert!(text.contains("for (int j = 0; j < 42; j++) {"));
        assert!(text.contains("for (;;) {"));
        roundtrip(&text);
    }

    #[test]
    fn roundtrips() {
        roundtrip("{ x = a - (b - c); y = (a - b) - c; z = !(a && b); w = - -v; }");
        roundtrip("{ try { a(); } catch (E e) { b(e); } finally { c(); } }");
        roundtrip("{ if (a) { } else if (b) { c(); } else { d(); } assert x : \"m\"; return; }");
        roundtrip("{ int[] xs = make(); String s = \"a\\\"b\"; obj.f.g(h.i, 3); throw err(); }");
        roundtrip("{ while (i < n) { i += 2; --i; continue; } break; }");
    }
}
