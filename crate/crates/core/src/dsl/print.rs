use std::fmt::Write;

use super::{AttributeExpr, LinearExpr, RegularityProgram};

const INDENT: &str = "    ";

fn expr(e: &LinearExpr) -> String {
    format!("{}*i + {}*j + {}", e.coef_i, e.coef_j, e.constant)
}

fn attribute(a: &AttributeExpr) -> String {
    match a {
        AttributeExpr::Constant => "0".into(),
        AttributeExpr::Quotient { expr: e, divisor } => format!("({}) // {divisor}", expr(e)),
        AttributeExpr::IsZero { expr: e } => format!("1 If ({} == 0) else 0", expr(e)),
        AttributeExpr::IsZeroBoth { first, second } => {
            format!(
                "1 If ({} == 0 and {} == 0) else 0",
                expr(first),
                expr(second)
            )
        }
        AttributeExpr::Modulo { expr: e, modulus } => {
            format!("1 If (({}) % {modulus} == 0) else 0", expr(e))
        }
        AttributeExpr::ModuloBoth {
            first,
            first_modulus,
            second,
            second_modulus,
        } => format!(
            "1 If (({}) % {first_modulus} == 0 and ({}) % {second_modulus} == 0) else 0",
            expr(first),
            expr(second)
        ),
    }
}

/// Canonical program text: one statement per line, four-space indentation,
/// every linear expression in full `a*i + b*j + c` form, trailing newline.
pub fn print(program: &RegularityProgram) -> String {
    let mut out = String::new();
    let outer = program.outer();
    let inner = program.inner();
    let _ = writeln!(out, "For (i in range({}, {})) {{", outer.lo, outer.hi);
    let _ = writeln!(
        out,
        "{INDENT}For (j in range({}, {})) {{",
        inner.lo, inner.hi
    );
    let mut depth = 2;
    for c in program.conditions() {
        let _ = writeln!(out, "{}If ({} >= 0) {{", INDENT.repeat(depth), expr(c));
        depth += 1;
    }
    let _ = writeln!(
        out,
        "{}Draw(x={}, y={}, attribute={})",
        INDENT.repeat(depth),
        expr(&program.x()),
        expr(&program.y()),
        attribute(&program.attribute())
    );
    while depth > 0 {
        depth -= 1;
        let _ = writeln!(out, "{}}}", INDENT.repeat(depth));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, LoopRange};

    #[test]
    fn golden_two_by_two() {
        let p = RegularityProgram::new(
            LoopRange::new(0, 2),
            LoopRange::new(0, 2),
            vec![],
            LinearExpr::new(10, 0, 0),
            LinearExpr::new(0, 10, 0),
            AttributeExpr::Constant,
        )
        .unwrap();
        let text = print(&p);
        assert_eq!(text, include_str!("../../tests/data/grid_2x2.rpg"));
        assert_eq!(parse(&text).unwrap(), p);
    }

    #[test]
    fn modulo_uses_table_form() {
        let p = RegularityProgram::new(
            LoopRange::new(0, 4),
            LoopRange::new(0, 4),
            vec![LinearExpr::new(-1, -1, 3)],
            LinearExpr::new(10, 0, 2),
            LinearExpr::new(0, 10, 2),
            AttributeExpr::Modulo {
                expr: LinearExpr::new(1, 1, 0),
                modulus: 2,
            },
        )
        .unwrap();
        let text = print(&p);
        assert!(
            text.contains("If ((1*i + 1*j + 0) % 2 == 0) else 0"),
            "{text}"
        );
        assert!(text.contains("If (-1*i + -1*j + 3 >= 0) {"));
        assert_eq!(parse(&text).unwrap(), p);
    }
}
