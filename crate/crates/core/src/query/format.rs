use super::ast::{Comparison, Literal, QueryAst};

/// Renders an AST as canonical query text.
///
/// Operators get single spaces, strings are always quoted, numbers keep
/// their lexeme, and parentheses appear only where the right-nested
/// grammar would otherwise regroup the tree.
pub fn format_query(ast: &QueryAst) -> String {
    let mut out = String::new();
    write_node(ast, &mut out);
    out
}

fn write_node(ast: &QueryAst, out: &mut String) {
    match ast {
        QueryAst::Or(left, right) => {
            write_child(left, matches!(**left, QueryAst::Or(..)), out);
            out.push_str(" | ");
            write_child(right, false, out);
        }
        QueryAst::And(left, right) => {
            write_child(left, !matches!(**left, QueryAst::Cmp(_)), out);
            out.push_str(" & ");
            write_child(right, matches!(**right, QueryAst::Or(..)), out);
        }
        QueryAst::Cmp(cmp) => write_comparison(cmp, out),
    }
}

fn write_child(ast: &QueryAst, parenthesize: bool, out: &mut String) {
    if parenthesize {
        out.push('(');
        write_node(ast, out);
        out.push(')');
    } else {
        write_node(ast, out);
    }
}

fn write_comparison(cmp: &Comparison, out: &mut String) {
    out.push_str(&cmp.path.dotted());
    out.push(' ');
    out.push_str(cmp.op.symbol());
    out.push(' ');
    write_literal(&cmp.literal, out);
}

pub(crate) fn write_literal(literal: &Literal, out: &mut String) {
    match literal {
        Literal::Str(text) => quote_into(text, out),
        Literal::Num(num) => out.push_str(num.lexeme()),
        Literal::Regex(re) => {
            out.push('/');
            out.push_str(re.pattern());
            out.push('/');
            if re.case_insensitive() {
                out.push('i');
            }
        }
    }
}

/// Double-quotes `text`, escaping `"` and `\`.
pub fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    quote_into(text, &mut out);
    out
}

fn quote_into(text: &str, out: &mut String) {
    out.push('"');
    for c in text.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}
