use super::{Cirquent, Kind};

// Binding strength: | < & < choice < atoms.
const OR: u8 = 1;
const AND: u8 = 2;
const CHOICE: u8 = 3;
const ATOM: u8 = 4;

pub(super) fn print(c: &Cirquent) -> String {
    let mut out = String::new();
    write(c, 0, &mut out);
    out
}

fn level(c: &Cirquent) -> u8 {
    match c {
        Cirquent::Par { kind: Kind::Or, .. } => OR,
        Cirquent::Par { kind: Kind::And, .. } => AND,
        Cirquent::Choice { .. } => CHOICE,
        _ => ATOM,
    }
}

/// Writes `c` in a position that requires binding strength at least `min`.
fn write(c: &Cirquent, min: u8, out: &mut String) {
    let own = level(c);
    let paren = own < min;
    if paren {
        out.push('(');
    }
    match c {
        Cirquent::Top => out.push('T'),
        Cirquent::Bot => out.push('F'),
        Cirquent::Lit { letter, positive } => {
            if !positive {
                out.push('~');
            }
            out.push_str(letter.as_str());
        }
        Cirquent::Par { kind, left, right } => {
            // left-associative: the right operand must bind tighter
            write(left, own, out);
            out.push_str(if *kind == Kind::Or { " | " } else { " & " });
            write(right, own + 1, out);
        }
        Cirquent::Choice { cluster, left, right } => {
            write(left, own, out);
            let op = if cluster.is_disjunctive() { '+' } else { '*' };
            out.push(' ');
            out.push(op);
            out.push('[');
            out.push_str(&cluster.index.to_string());
            out.push_str("] ");
            write(right, own + 1, out);
        }
    }
    if paren {
        out.push(')');
    }
}
