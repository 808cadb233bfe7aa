use super::{BinaryOp, CondOp, Expr, UnaryOp, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintStyle {
    /// Prefix call syntax accepted by [`parse_generator`](super::parse_generator).
    Canonical,
    /// Mathematical rendering; one-sided degree variables print as `k`.
    Math,
}

pub fn print_generator(expr: &Expr, style: PrintStyle) -> String {
    match style {
        PrintStyle::Canonical => {
            let mut out = String::new();
            canonical(expr, &mut out);
            out
        }
        PrintStyle::Math => {
            let one_sided = expr.uses_var(Var::Ki) != expr.uses_var(Var::Kj);
            Math { one_sided }.render(expr).0
        }
    }
}

/// Shortest decimal text that parses back to exactly `v`.
pub(crate) fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn canonical(expr: &Expr, out: &mut String) {
    let name = match expr {
        Expr::Const(v) => {
            out.push_str(&format_number(*v));
            return;
        }
        Expr::Var(v) => {
            out.push_str(v.name());
            return;
        }
        Expr::Unary(op, _) => op.name(),
        Expr::Binary(op, ..) => op.name(),
        Expr::Cond { op, .. } => op.name(),
        Expr::ZeroCond { .. } => "zer",
        Expr::Affinity { .. } => "aff",
    };
    out.push_str(name);
    out.push('(');
    for (idx, c) in expr.children().into_iter().enumerate() {
        if idx > 0 {
            out.push_str(", ");
        }
        canonical(c, out);
    }
    out.push(')');
}

// Binding strength of the rendered form; higher binds tighter.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const POWER: u8 = 3;
const ATOM: u8 = 4;

struct Math {
    one_sided: bool,
}

impl Math {
    fn render(&self, expr: &Expr) -> (String, u8) {
        match expr {
            Expr::Const(v) => {
                let s = format_number(*v);
                let prec = if *v < 0.0 { SUM } else { ATOM };
                (s, prec)
            }
            Expr::Var(v) => {
                let s = if self.one_sided && v.is_degree() {
                    "k"
                } else {
                    v.name()
                };
                (s.to_string(), ATOM)
            }
            Expr::Unary(UnaryOp::Exp, c) => (format!("e^{}", self.exponent(c)), POWER),
            Expr::Unary(UnaryOp::Log, c) => (format!("log({})", self.render(c).0), ATOM),
            Expr::Unary(UnaryOp::Abs, c) => (format!("|{}|", self.render(c).0), ATOM),
            Expr::Binary(op, a, b) => match op {
                BinaryOp::Add => (format!("{} + {}", self.at(a, SUM), self.at(b, SUM)), SUM),
                BinaryOp::Sub => (
                    format!("{} - {}", self.at(a, SUM), self.at(b, SUM + 1)),
                    SUM,
                ),
                BinaryOp::Mul => (
                    format!("{}·{}", self.at(a, PRODUCT), self.at(b, PRODUCT)),
                    PRODUCT,
                ),
                BinaryOp::Div => (
                    format!("{} / {}", self.at(a, PRODUCT), self.at(b, PRODUCT + 1)),
                    PRODUCT,
                ),
                BinaryOp::Pow => (format!("{}^{}", self.at(a, ATOM), self.exponent(b)), POWER),
                BinaryOp::Min | BinaryOp::Max => (
                    format!("{}({}, {})", op.name(), self.render(a).0, self.render(b).0),
                    ATOM,
                ),
            },
            Expr::Cond {
                op,
                lhs,
                rhs,
                then,
                otherwise,
            } => {
                let sym = match op {
                    CondOp::Gt => ">",
                    CondOp::Lt => "<",
                    CondOp::Eq => "=",
                };
                (
                    format!(
                        "({} {sym} {} → {}, {})",
                        self.render(lhs).0,
                        self.render(rhs).0,
                        self.render(then).0,
                        self.render(otherwise).0
                    ),
                    ATOM,
                )
            }
            Expr::ZeroCond {
                test,
                then,
                otherwise,
            } => (
                format!(
                    "({} = 0 → {}, {})",
                    self.render(test).0,
                    self.render(then).0,
                    self.render(otherwise).0
                ),
                ATOM,
            ),
            Expr::Affinity {
                groups,
                then,
                otherwise,
            } => {
                let g = self.render(groups).0;
                let sub = if g.chars().all(|c| c.is_ascii_digit()) {
                    g
                } else {
                    format!("{{{g}}}")
                };
                (
                    format!(
                        "ψ_{sub}({}, {})",
                        self.render(then).0,
                        self.render(otherwise).0
                    ),
                    ATOM,
                )
            }
        }
    }

    /// Renders `e`, parenthesized when it binds looser than `min`.
    fn at(&self, e: &Expr, min: u8) -> String {
        let (s, prec) = self.render(e);
        if prec < min {
            format!("({s})")
        } else {
            s
        }
    }

    fn exponent(&self, e: &Expr) -> String {
        self.at(e, ATOM)
    }
}
