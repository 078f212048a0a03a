use super::parse::ESCAPABLE;
use super::Ast;

enum Piece {
    Text(String),
    Ref(u32),
}

/// Canonical text for `ast`.
///
/// Expects a tree in the shape produced by [`parse`](super::parse): unions
/// appear only at the top level or directly under a group, and postfix
/// operators never apply to an empty expression. For such trees
/// `parse(&render(x)) == Ok(x)`.
pub fn render(ast: &Ast) -> String {
    let mut pieces = Vec::new();
    emit(ast, &mut pieces);

    let mut out = String::new();
    for (i, piece) in pieces.iter().enumerate() {
        match piece {
            Piece::Text(t) => out.push_str(t),
            Piece::Ref(k) => {
                let next = pieces[i + 1..].iter().find_map(|p| match p {
                    Piece::Text(t) => t.chars().next(),
                    Piece::Ref(_) => Some('\\'),
                });
                if next.is_some_and(|c| c.is_ascii_digit()) {
                    out.push_str(&format!("\\{{{k}}}"));
                } else {
                    out.push_str(&format!("\\{k}"));
                }
            }
        }
    }
    out
}

fn text(pieces: &mut Vec<Piece>, s: &str) {
    pieces.push(Piece::Text(s.to_owned()));
}

fn emit(ast: &Ast, pieces: &mut Vec<Piece>) {
    match ast {
        Ast::Literal(c) if ESCAPABLE.contains(c) && *c != '#' => {
            pieces.push(Piece::Text(format!("\\{c}")))
        }
        Ast::Literal(c) => pieces.push(Piece::Text(c.to_string())),
        Ast::Epsilon => {}
        Ast::Union(l, r) => {
            emit(l, pieces);
            text(pieces, "|");
            emit(r, pieces);
        }
        Ast::Concat(items) => items.iter().for_each(|item| emit(item, pieces)),
        Ast::Star(c) => {
            emit(c, pieces);
            text(pieces, "*");
        }
        Ast::Plus(c) => {
            emit(c, pieces);
            text(pieces, "+");
        }
        Ast::Repeat(c, n) => {
            emit(c, pieces);
            pieces.push(Piece::Text(format!("{{{n}}}")));
        }
        Ast::Group(_, c) => {
            text(pieces, "(");
            emit(c, pieces);
            text(pieces, ")");
        }
        Ast::Backref(k) => pieces.push(Piece::Ref(*k)),
    }
}
