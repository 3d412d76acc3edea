//! Exact arithmetic in cyclotomic fields.

mod cyclotomic;
mod parse;
mod rational;

pub use cyclotomic::{euler_phi, root_of_unity, CycScalar, RootOfUnity};
pub use parse::{eval_scalar, parse_expr, parse_scalar, Expr, ParseError};
pub use rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroInput,
}

/// Binary field operation selector for [`cyc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn cyc_arith(a: &CycScalar, b: &CycScalar, op: ArithOp) -> Result<CycScalar, ScalarError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// Quantum integer (n)_q = 1 + q + … + q^{n-1}.
pub fn q_integer(q: &CycScalar, n: usize) -> CycScalar {
    let mut acc = CycScalar::zero();
    let mut p = CycScalar::one();
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * q;
    }
    acc
}

/// Quantum factorial (n)_q! = (1)_q (2)_q … (n)_q.
pub fn q_factorial(q: &CycScalar, n: usize) -> CycScalar {
    (1..=n).fold(CycScalar::one(), |acc, k| &acc * &q_integer(q, k))
}
