use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// A smooth expression over coordinates `x[0..]`, with value and gradient.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

enum Node {
    Const(f64),
    Var(usize),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Neg(Expr),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
    Log1p(Expr),
    Powi(Expr, i32),
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr(Arc::new(Node::Const(c)))
    }

    pub fn var(i: usize) -> Self {
        Expr(Arc::new(Node::Var(i)))
    }

    pub fn sin(&self) -> Self {
        Expr(Arc::new(Node::Sin(self.clone())))
    }

    pub fn cos(&self) -> Self {
        Expr(Arc::new(Node::Cos(self.clone())))
    }

    pub fn exp(&self) -> Self {
        Expr(Arc::new(Node::Exp(self.clone())))
    }

    /// `log(1 + self)`.
    pub fn ln_1p(&self) -> Self {
        Expr(Arc::new(Node::Log1p(self.clone())))
    }

    pub fn powi(&self, k: i32) -> Self {
        Expr(Arc::new(Node::Powi(self.clone(), k)))
    }

    /// One more than the largest variable index used (zero for constants).
    pub fn arity(&self) -> usize {
        match &*self.0 {
            Node::Const(_) => 0,
            Node::Var(i) => i + 1,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => a.arity().max(b.arity()),
            Node::Neg(a) | Node::Sin(a) | Node::Cos(a) | Node::Exp(a) | Node::Log1p(a) | Node::Powi(a, _) => {
                a.arity()
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(i) => x[*i],
            Node::Add(a, b) => a.eval(x) + b.eval(x),
            Node::Sub(a, b) => a.eval(x) - b.eval(x),
            Node::Mul(a, b) => a.eval(x) * b.eval(x),
            Node::Neg(a) => -a.eval(x),
            Node::Sin(a) => a.eval(x).sin(),
            Node::Cos(a) => a.eval(x).cos(),
            Node::Exp(a) => a.eval(x).exp(),
            Node::Log1p(a) => a.eval(x).ln_1p(),
            Node::Powi(a, k) => a.eval(x).powi(*k),
        }
    }

    /// Value and gradient (of length `x.len()`) by forward accumulation.
    pub fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = x.len();
        match &*self.0 {
            Node::Const(c) => (*c, vec![0.0; n]),
            Node::Var(i) => {
                let mut g = vec![0.0; n];
                g[*i] = 1.0;
                (x[*i], g)
            }
            Node::Add(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                (va + vb, ga.iter().zip(&gb).map(|(p, q)| p + q).collect())
            }
            Node::Sub(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                (va - vb, ga.iter().zip(&gb).map(|(p, q)| p - q).collect())
            }
            Node::Mul(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                (va * vb, ga.iter().zip(&gb).map(|(p, q)| p * vb + va * q).collect())
            }
            Node::Neg(a) => {
                let (v, g) = a.eval_grad(x);
                (-v, g.into_iter().map(|t| -t).collect())
            }
            Node::Sin(a) => chain(a, x, f64::sin, f64::cos),
            Node::Cos(a) => chain(a, x, f64::cos, |t| -t.sin()),
            Node::Exp(a) => chain(a, x, f64::exp, f64::exp),
            Node::Log1p(a) => chain(a, x, f64::ln_1p, |t| 1.0 / (1.0 + t)),
            Node::Powi(a, k) => {
                let k = *k;
                chain(a, x, |t| t.powi(k), |t| if k == 0 { 0.0 } else { k as f64 * t.powi(k - 1) })
            }
        }
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        self.eval_grad(x).1
    }
}

fn chain(a: &Expr, x: &[f64], f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> (f64, Vec<f64>) {
    let (v, g) = a.eval_grad(x);
    let d = df(v);
    (f(v), g.into_iter().map(|t| t * d).collect())
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{i}"),
            Node::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Node::Sub(a, b) => write!(f, "({a:?} - {b:?})"),
            Node::Mul(a, b) => write!(f, "{a:?}*{b:?}"),
            Node::Neg(a) => write!(f, "-{a:?}"),
            Node::Sin(a) => write!(f, "sin({a:?})"),
            Node::Cos(a) => write!(f, "cos({a:?})"),
            Node::Exp(a) => write!(f, "exp({a:?})"),
            Node::Log1p(a) => write!(f, "log1p({a:?})"),
            Node::Powi(a, k) => write!(f, "{a:?}^{k}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $node:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr(Arc::new(Node::$node(self, rhs)))
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr(Arc::new(Node::$node(self.clone(), rhs.clone())))
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr(Arc::new(Node::$node(self, Expr::constant(rhs))))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr(Arc::new(Node::$node(Expr::constant(self), rhs)))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Arc::new(Node::Neg(self)))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Arc::new(Node::Neg(self.clone())))
    }
}
