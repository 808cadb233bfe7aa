//! Generator expressions: the scoring functions `s(i, j)` that drive edge
//! selection during synthesis.
//!
//! An expression is a finite tree over five local variables (the two
//! endpoint degrees, the estimated hop distance and the two sequential node
//! identifiers), protected arithmetic, conditionals and the modulo-based
//! affinity operator.

mod eval;
mod parse;
mod print;

use std::fmt;

pub use eval::{
    behavioral_signature, coefficient_of_variation, evaluate, standard_probes, EvalContext,
    EQ_TOLERANCE,
};
pub use parse::{parse_generator, ParseError, ParseErrorKind};
pub use print::{print_generator, PrintStyle};

/// Edge-local variables a generator can read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// Degree of the origin node.
    Ki,
    /// Degree of the target node.
    Kj,
    /// Estimated hop distance between the endpoints.
    Dist,
    /// Sequential identifier of the origin node.
    I,
    /// Sequential identifier of the target node.
    J,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::Ki, Var::Kj, Var::Dist, Var::I, Var::J];

    pub fn name(self) -> &'static str {
        match self {
            Var::Ki => "k_i",
            Var::Kj => "k_j",
            Var::Dist => "d",
            Var::I => "i",
            Var::J => "j",
        }
    }

    pub fn is_degree(self) -> bool {
        matches!(self, Var::Ki | Var::Kj)
    }

    pub fn is_identifier(self) -> bool {
        matches!(self, Var::I | Var::J)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Exp,
    Log,
    Abs,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 3] = [UnaryOp::Exp, UnaryOp::Log, UnaryOp::Abs];

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 7] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Pow,
        BinaryOp::Min,
        BinaryOp::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Add => "add",
            BinaryOp::Sub => "sub",
            BinaryOp::Mul => "mul",
            BinaryOp::Div => "div",
            BinaryOp::Pow => "pow",
            BinaryOp::Min => "min",
            BinaryOp::Max => "max",
        }
    }
}

/// Comparison used by the four-argument conditional `(x op y -> then, else)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CondOp {
    Gt,
    Lt,
    Eq,
}

impl CondOp {
    pub const ALL: [CondOp; 3] = [CondOp::Gt, CondOp::Lt, CondOp::Eq];

    pub fn name(self) -> &'static str {
        match self {
            CondOp::Gt => "gt",
            CondOp::Lt => "lt",
            CondOp::Eq => "eq",
        }
    }
}

/// A generator expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Cond {
        op: CondOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
    /// `then` when `test` is (numerically) zero, `otherwise` else.
    ZeroCond {
        test: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
    /// Affinity: `then` when `i ≡ j (mod g)` with `g` evaluated per edge.
    Affinity {
        groups: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
}

impl Expr {
    pub fn constant(value: f64) -> Self {
        Expr::Const(value)
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Self {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn cond(op: CondOp, lhs: Expr, rhs: Expr, then: Expr, otherwise: Expr) -> Self {
        Expr::Cond {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        }
    }

    pub fn zero_cond(test: Expr, then: Expr, otherwise: Expr) -> Self {
        Expr::ZeroCond {
            test: Box::new(test),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        }
    }

    pub fn affinity(groups: Expr, then: Expr, otherwise: Expr) -> Self {
        Expr::Affinity {
            groups: Box::new(groups),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        }
    }

    /// Direct children in argument order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::Var(_) => Vec::new(),
            Expr::Unary(_, c) => vec![c],
            Expr::Binary(_, a, b) => vec![a, b],
            Expr::Cond {
                lhs,
                rhs,
                then,
                otherwise,
                ..
            } => vec![lhs, rhs, then, otherwise],
            Expr::ZeroCond {
                test,
                then,
                otherwise,
            } => vec![test, then, otherwise],
            Expr::Affinity {
                groups,
                then,
                otherwise,
            } => vec![groups, then, otherwise],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match self {
            Expr::Const(_) | Expr::Var(_) => Vec::new(),
            Expr::Unary(_, c) => vec![c.as_mut()],
            Expr::Binary(_, a, b) => vec![a.as_mut(), b.as_mut()],
            Expr::Cond {
                lhs,
                rhs,
                then,
                otherwise,
                ..
            } => vec![
                lhs.as_mut(),
                rhs.as_mut(),
                then.as_mut(),
                otherwise.as_mut(),
            ],
            Expr::ZeroCond {
                test,
                then,
                otherwise,
            } => vec![test.as_mut(), then.as_mut(), otherwise.as_mut()],
            Expr::Affinity {
                groups,
                then,
                otherwise,
            } => vec![groups.as_mut(), then.as_mut(), otherwise.as_mut()],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 0,
            Expr::Unary(..) => 1,
            Expr::Binary(..) => 2,
            Expr::Cond { .. } => 4,
            Expr::ZeroCond { .. } | Expr::Affinity { .. } => 3,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.arity() == 0
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            out.push(e);
            let children = e.children();
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// Mutable access to the `index`-th node in pre-order.
    pub fn node_mut(&mut self, index: usize) -> Option<&mut Expr> {
        fn walk<'a>(e: &'a mut Expr, index: usize, seen: &mut usize) -> Option<&'a mut Expr> {
            if *seen == index {
                return Some(e);
            }
            *seen += 1;
            for c in e.children_mut() {
                if let Some(found) = walk(c, index, seen) {
                    return Some(found);
                }
            }
            None
        }
        let mut seen = 0;
        walk(self, index, &mut seen)
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: Var) -> bool {
        match self {
            Expr::Var(x) => *x == v,
            _ => self.children().iter().any(|c| c.uses_var(v)),
        }
    }

    /// True when no variable and no affinity node occurs in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) | Expr::Affinity { .. } => false,
            _ => self.children().iter().all(|c| c.is_constant()),
        }
    }
}

/// Number of nodes in the tree; the Occam complexity measure.
pub fn program_length(expr: &Expr) -> usize {
    1 + expr
        .children()
        .iter()
        .map(|c| program_length(c))
        .sum::<usize>()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_generator(self, PrintStyle::Canonical))
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_generator(s)
    }
}
